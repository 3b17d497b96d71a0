//! Explicit median operation tables, axiom verification and Sholander's
//! interval characterization.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;

/// Tables up to this many elements are checked exhaustively.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 32;
/// Violations kept verbatim in a report; the count keeps going past it.
const MAX_RECORDED: usize = 1000;

/// A ternary operation on `0..len` given as a full table.
#[derive(Clone, PartialEq, Eq)]
pub struct MedianTable {
    labels: Vec<String>,
    table: Vec<u32>,
}

impl fmt::Debug for MedianTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MedianTable")
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

impl MedianTable {
    pub fn from_fn(labels: Vec<String>, mut op: impl FnMut(usize, usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m = op(a, b, c);
                    if m >= n {
                        return Err(Error::PreconditionViolated(format!(
                            "table entry ({a},{b},{c}) = {m} is outside the carrier"
                        )));
                    }
                    table.push(m as u32);
                }
            }
        }
        Ok(MedianTable { labels, table })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.labels.len();
        self.table[(a * n + b) * n + c] as usize
    }
}

impl MedianModel {
    pub fn to_table(&self) -> MedianTable {
        let labels = self.ids().map(|v| self.label(v)).collect();
        MedianTable::from_fn(labels, |a, b, c| {
            self.med(VertexId(a), VertexId(b), VertexId(c)).0
        })
        .expect("model medians are vertices")
    }

    /// The interval map `(a, b) ↦ [a, b]` of the model.
    pub fn interval_map(&self) -> IntervalMap {
        let n = self.len();
        let mut sets = Vec::with_capacity(n * n);
        for a in self.ids() {
            for b in self.ids() {
                sets.push(self.set_of(self.ids().filter(|&x| self.between(a, x, b))));
            }
        }
        IntervalMap { n, sets }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    /// `aab = a`
    Majority,
    /// `abc = bac = acb`
    Symmetry,
    /// `ab(cde) = (abc)(abd)e`
    Distributivity,
    /// `(axb)xc = ax(bxc)`
    Associativity,
    /// `ab(xyz) = (abx)(aby)(abz)`
    LongDistributivity,
}

impl Law {
    pub const ALL: [Law; 5] = [
        Law::Majority,
        Law::Symmetry,
        Law::Distributivity,
        Law::Associativity,
        Law::LongDistributivity,
    ];

    pub fn arity(self) -> usize {
        match self {
            Law::Majority => 2,
            Law::Symmetry => 3,
            Law::Associativity => 4,
            Law::Distributivity | Law::LongDistributivity => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::Majority => "majority",
            Law::Symmetry => "symmetry",
            Law::Distributivity => "distributivity",
            Law::Associativity => "associativity",
            Law::LongDistributivity => "long-distributivity",
        }
    }

    /// Evaluates the law on one tuple (length = arity).
    pub fn holds(self, m: impl Fn(usize, usize, usize) -> usize, t: &[usize]) -> bool {
        match self {
            Law::Majority => m(t[0], t[0], t[1]) == t[0],
            Law::Symmetry => {
                let abc = m(t[0], t[1], t[2]);
                abc == m(t[1], t[0], t[2]) && abc == m(t[0], t[2], t[1])
            }
            Law::Distributivity => {
                let (a, b, c, d, e) = (t[0], t[1], t[2], t[3], t[4]);
                m(a, b, m(c, d, e)) == m(m(a, b, c), m(a, b, d), e)
            }
            Law::Associativity => {
                let (a, b, c, x) = (t[0], t[1], t[2], t[3]);
                m(m(a, x, b), x, c) == m(a, x, m(b, x, c))
            }
            Law::LongDistributivity => {
                let (a, b, x, y, z) = (t[0], t[1], t[2], t[3], t[4]);
                m(a, b, m(x, y, z)) == m(m(a, b, x), m(a, b, y), m(a, b, z))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub tuple: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub exhaustive: bool,
    /// Tuples evaluated, per law, in [`Law::ALL`] order.
    pub checked: [u64; 5],
    pub violation_count: u64,
    /// Up to the first thousand violations, in scan order.
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, law: Law, tuple: &[usize]) {
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation {
                law,
                tuple: tuple.to_vec(),
            });
        }
    }
}

/// Checks the five median laws on a table: every tuple when the carrier has
/// at most [`EXHAUSTIVE_AXIOM_LIMIT`] elements, otherwise `budget` seeded
/// random tuples per law.
pub fn verify_axioms(table: &MedianTable, budget: u64, seed: u64) -> AxiomReport {
    let n = table.len();
    let m = |a, b, c| table.get(a, b, c);
    let mut report = AxiomReport {
        exhaustive: n <= EXHAUSTIVE_AXIOM_LIMIT,
        ..AxiomReport::default()
    };
    if n == 0 {
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (slot, law) in Law::ALL.into_iter().enumerate() {
        let k = law.arity();
        let mut tuple = vec![0usize; k];
        if report.exhaustive {
            loop {
                report.checked[slot] += 1;
                if !law.holds(m, &tuple) {
                    report.record(law, &tuple);
                }
                if !advance(&mut tuple, n) {
                    break;
                }
            }
        } else {
            for _ in 0..budget {
                for t in tuple.iter_mut() {
                    *t = rng.gen_range(0..n);
                }
                report.checked[slot] += 1;
                if !law.holds(m, &tuple) {
                    report.record(law, &tuple);
                }
            }
        }
    }
    report
}

/// Exhaustive check that needs no table: a bit-vector model's median is
/// coordinatewise, so each law holds on the model iff it holds on every
/// wall's projection, a subset of `{0, 1}`. Pairs with a passing closure
/// scan to certify the model.
pub fn verify_axioms_by_wall(model: &MedianModel) -> AxiomReport {
    let maj = |a: usize, b: usize, c: usize| usize::from(a + b + c >= 2);
    let mut report = AxiomReport {
        exhaustive: true,
        ..AxiomReport::default()
    };
    for w in 0..model.wall_count() {
        let values: Vec<usize> = {
            let mut vs: Vec<usize> = model.vertices().iter().map(|v| v.get(w) as usize).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        for (slot, law) in Law::ALL.into_iter().enumerate() {
            let mut idx = vec![0usize; law.arity()];
            loop {
                let tuple: Vec<usize> = idx.iter().map(|&i| values[i]).collect();
                report.checked[slot] += 1;
                if !law.holds(maj, &tuple) {
                    report.record(law, &[w]);
                }
                if !advance(&mut idx, values.len()) {
                    break;
                }
            }
        }
    }
    report
}

/// Odometer increment over `0..n` per slot; false once it wraps.
fn advance(tuple: &mut [usize], n: usize) -> bool {
    for t in tuple.iter_mut().rev() {
        *t += 1;
        if *t < n {
            return true;
        }
        *t = 0;
    }
    false
}

/// A map from ordered pairs of a finite carrier to subsets of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMap {
    n: usize,
    sets: Vec<VertexSet>,
}

impl IntervalMap {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Vec<usize>) -> Self {
        let mut sets = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                sets.push(VertexSet::from_ids(n, f(a, b).into_iter().map(VertexId)));
            }
        }
        IntervalMap { n, sets }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize) -> &VertexSet {
        &self.sets[a * self.n + b]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SholanderFailure {
    /// Which property failed: 1 (`I(a,a) = {a}`), 2 (nesting) or 3
    /// (singleton triple intersection).
    pub property: u8,
    pub witness: Vec<usize>,
}

/// Checks the three Sholander properties and, when they hold, returns the
/// induced median `m(a,b,c)`: the unique point of `I(a,b) ∩ I(b,c) ∩ I(a,c)`.
pub fn sholander_median(
    map: &IntervalMap,
    labels: Vec<String>,
) -> std::result::Result<MedianTable, SholanderFailure> {
    let n = map.len();
    assert_eq!(labels.len(), n, "one label per carrier element");
    for a in 0..n {
        let ia = map.get(a, a);
        if ia.len() != 1 || !ia.contains(VertexId(a)) {
            return Err(SholanderFailure {
                property: 1,
                witness: vec![a],
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let iab = map.get(a, b);
            for c in iab.iter() {
                for d in iab.iter() {
                    if !map.get(d.0, c.0).is_subset(iab) {
                        return Err(SholanderFailure {
                            property: 2,
                            witness: vec![a, b, c.0, d.0],
                        });
                    }
                }
            }
        }
    }
    let mut points = vec![0u32; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut meet = map.get(a, b).intersection(map.get(b, c));
                meet.intersect_with(map.get(a, c));
                if meet.len() != 1 {
                    return Err(SholanderFailure {
                        property: 3,
                        witness: vec![a, b, c],
                    });
                }
                points[(a * n + b) * n + c] = meet.first().expect("singleton").0 as u32;
            }
        }
    }
    Ok(MedianTable {
        labels,
        table: points,
    })
}
