use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::{Bits, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;

use super::format_ratio;

/// Largest model accepted by [`verify_median_metric`].
pub const MAX_METRIC_SCAN_VERTICES: usize = 1 << 10;

/// A median model with a positive rational weight on every wall. The
/// distance between vertices is the total weight of the walls separating
/// them.
#[derive(Clone, Debug)]
pub struct WeightedWallspace {
    model: MedianModel,
    weights: Vec<BigRational>,
    /// The wall each wall was copied from; itself for original walls.
    parents: Vec<String>,
}

impl WeightedWallspace {
    pub fn new(model: MedianModel, weights: Vec<BigRational>) -> Result<Self> {
        if weights.len() != model.wall_count() {
            return Err(Error::PreconditionViolated(format!(
                "{} weights for {} walls",
                weights.len(),
                model.wall_count()
            )));
        }
        if let Some(w) = weights.iter().position(|x| !x.is_positive()) {
            return Err(Error::PreconditionViolated(format!(
                "weight of `{}` is {}, must be positive",
                model.walls()[w],
                format_ratio(&weights[w])
            )));
        }
        let parents = model.walls().to_vec();
        Ok(WeightedWallspace {
            model,
            weights,
            parents,
        })
    }

    /// Every wall weighted 1.
    pub fn unit(model: MedianModel) -> Self {
        let weights = vec![BigRational::one(); model.wall_count()];
        Self::new(model, weights).expect("unit weights are positive")
    }

    pub fn model(&self) -> &MedianModel {
        &self.model
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, wall: usize) -> &BigRational {
        &self.weights[wall]
    }

    pub fn set_weight(&mut self, wall: usize, weight: BigRational) -> Result<()> {
        if wall >= self.weights.len() {
            return Err(Error::UnknownWall(format!("#{wall}")));
        }
        if !weight.is_positive() {
            return Err(Error::PreconditionViolated(format!(
                "weight {} must be positive",
                format_ratio(&weight)
            )));
        }
        self.weights[wall] = weight;
        Ok(())
    }

    pub fn parent(&self, wall: usize) -> &str {
        &self.parents[wall]
    }

    /// Walls whose parent is `parent`, in order.
    pub fn copies_of(&self, parent: &str) -> Vec<usize> {
        (0..self.parents.len()).filter(|&w| self.parents[w] == parent).collect()
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<BigRational> {
        self.model.check(u)?;
        self.model.check(v)?;
        Ok(self.dist(u, v))
    }

    pub(crate) fn dist(&self, u: VertexId, v: VertexId) -> BigRational {
        let (a, b) = (self.model.vertex(u), self.model.vertex(v));
        let mut total = BigRational::zero();
        for w in a.separating(b) {
            total += &self.weights[w];
        }
        total
    }

    /// `min_{s ∈ set} d(x, s)`, or `None` for the empty set.
    pub fn distance_to_set(&self, x: VertexId, set: &VertexSet) -> Option<BigRational> {
        set.iter().map(|s| self.dist(x, s)).min()
    }

    /// `min d(a, b)` over `a ∈ from`, `b ∈ to`.
    pub fn set_distance(&self, from: &VertexSet, to: &VertexSet) -> Option<BigRational> {
        from.iter().filter_map(|a| self.distance_to_set(a, to)).min()
    }

    /// All pairwise distances scaled by the least common denominator.
    pub fn scaled_distances(&self) -> Result<(Vec<Vec<u128>>, BigInt)> {
        let lcd = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scaled: Vec<u128> = self
            .weights
            .iter()
            .map(|w| {
                (w.numer() * (&lcd / w.denom()))
                    .to_u128()
                    .ok_or_else(|| Error::TooLarge("scaled weight exceeds 128 bits".into()))
            })
            .collect::<Result<_>>()?;
        let n = self.model.len();
        let mut d = vec![vec![0u128; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let a = self.model.vertex(VertexId(u));
                let b = self.model.vertex(VertexId(v));
                let s = a.separating(b).iter().map(|&w| scaled[w]).sum();
                d[u][v] = s;
                d[v][u] = s;
            }
        }
        Ok((d, lcd))
    }

    /// Replaces wall `w` by `n` copies in staircase patterns, each weighted
    /// `weight(w) / n`. Vertices on side 0 get `0…0`, side 1 gets `1…1`, and
    /// each edge across `w` gains the `n - 1` intermediate patterns `1^k 0^(n-k)`.
    /// Original vertices keep their labels as names.
    pub fn subdivide_wall(&self, wall: &str, n: usize) -> Result<WeightedWallspace> {
        let w = self.model.wall_index(wall)?;
        if n == 0 {
            return Err(Error::InvalidCount(n));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let m = &self.model;
        let k = m.wall_count();
        let stair = |ones: usize| Bits::from_bools((0..n).map(|i| i < ones));
        let expand = |b: &Bits, block: &Bits| {
            let before = Bits::from_bools((0..w).map(|i| b.get(i)));
            let after = Bits::from_bools((w + 1..k).map(|i| b.get(i)));
            before.concat(block).concat(&after)
        };
        let mut rows: Vec<(Option<String>, Bits)> = m
            .ids()
            .map(|v| {
                let b = m.vertex(v);
                let block = if b.get(w) { stair(n) } else { stair(0) };
                (Some(m.label(v)), expand(b, &block))
            })
            .collect();
        for u in m.ids() {
            let b = m.vertex(u);
            if b.get(w) {
                continue;
            }
            let mut across = b.clone();
            across.flip(w);
            if m.lookup(&across).is_some() {
                for ones in 1..n {
                    rows.push((None, expand(b, &stair(ones))));
                }
            }
        }
        let mut walls = Vec::with_capacity(k + n - 1);
        let mut weights = Vec::with_capacity(k + n - 1);
        let mut parents = Vec::with_capacity(k + n - 1);
        let share = &self.weights[w] / BigRational::from_integer(BigInt::from(n));
        for i in 0..k {
            if i == w {
                for c in 1..=n {
                    walls.push(format!("{wall}#{c}"));
                    weights.push(share.clone());
                    parents.push(self.parents[w].clone());
                }
            } else {
                walls.push(m.walls()[i].clone());
                weights.push(self.weights[i].clone());
                parents.push(self.parents[i].clone());
            }
        }
        let model = MedianModel::with_options(walls, rows, true, 0)?;
        Ok(WeightedWallspace {
            model,
            weights,
            parents,
        })
    }

    /// The same wallspace with new weights; parents are kept.
    pub(crate) fn reweighted(&self, weights: Vec<BigRational>) -> Result<WeightedWallspace> {
        let mut out = WeightedWallspace::new(self.model.clone(), weights)?;
        out.parents = self.parents.clone();
        Ok(out)
    }
}

/// A triple whose betweenness set is not a single point, or is a single
/// point other than the median.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricViolation {
    pub triple: [usize; 3],
    /// Every point between each pair of the triple.
    pub between: Vec<usize>,
    pub median: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricReport {
    pub points: usize,
    pub triples_checked: u64,
    pub violation_count: u64,
    /// The first violations, at most [`MAX_REPORTED_VIOLATIONS`].
    pub violations: Vec<MetricViolation>,
    /// Pairs whose metric interval differs from the algebra interval.
    pub interval_mismatches: u64,
}

pub const MAX_REPORTED_VIOLATIONS: usize = 100;

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.interval_mismatches == 0
    }
}

/// Checks every triple of the weighted model for a unique point between
/// each pair, equal to the median, and compares metric and algebra
/// intervals.
pub fn verify_median_metric(ws: &WeightedWallspace) -> Result<MetricReport> {
    let m = ws.model();
    if m.len() > MAX_METRIC_SCAN_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices; the triple scan is limited to {MAX_METRIC_SCAN_VERTICES}",
            m.len()
        )));
    }
    let (d, _) = ws.scaled_distances()?;
    let median = |a: usize, b: usize, c: usize| m.med(VertexId(a), VertexId(b), VertexId(c)).0;
    let mut report = verify_median_metric_matrix(&d, Some(&median));
    let n = m.len();
    for a in 0..n {
        for b in a..n {
            let metric = (0..n).filter(|&x| d[a][x] + d[x][b] == d[a][b]);
            let algebra = m.interval_set(VertexId(a), VertexId(b));
            if !metric.map(VertexId).eq(algebra.iter()) {
                report.interval_mismatches += 1;
            }
        }
    }
    Ok(report)
}

/// The median-metric triple check on an arbitrary distance matrix. When
/// `median` is given the unique between point must also equal it.
pub fn verify_median_metric_matrix(
    d: &[Vec<u128>],
    median: Option<&dyn Fn(usize, usize, usize) -> usize>,
) -> MetricReport {
    let n = d.len();
    let between: Vec<Vec<VertexSet>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| VertexSet::from_ids(n, (0..n).filter(|&x| d[a][x] + d[x][b] == d[a][b]).map(VertexId)))
                .collect()
        })
        .collect();
    let mut report = MetricReport {
        points: n,
        triples_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
        interval_mismatches: 0,
    };
    for a in 0..n {
        for b in a..n {
            let ab = &between[a][b];
            for c in b..n {
                report.triples_checked += 1;
                let mut common = ab.intersection(&between[b][c]);
                common.intersect_with(&between[a][c]);
                let expected = median.map(|f| f(a, b, c));
                let ok = common.len() == 1 && expected.is_none_or(|x| common.contains(VertexId(x)));
                if !ok {
                    report.violation_count += 1;
                    if report.violations.len() < MAX_REPORTED_VIOLATIONS {
                        report.violations.push(MetricViolation {
                            triple: [a, b, c],
                            between: common.iter().map(VertexId::index).collect(),
                            median: expected,
                        });
                    }
                }
            }
        }
    }
    report
}
