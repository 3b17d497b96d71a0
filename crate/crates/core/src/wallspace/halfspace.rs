use std::collections::BTreeSet;

use crate::bits::{Bits, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;
use crate::models::median_closure;

/// Consistent orientations beyond this count are refused.
pub const MAX_CUBULATION_VERTICES: usize = 1 << 16;

/// One side of a wall: the points whose coordinate `wall` equals `side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub wall: usize,
    pub side: bool,
}

/// Walls over a finite point set, each cutting it into two nonempty
/// halfspaces. The point set need not be median-closed.
#[derive(Clone, Debug)]
pub struct HalfspaceSystem {
    walls: Vec<String>,
    points: Vec<Bits>,
    names: Vec<Option<String>>,
    sides: Vec<[VertexSet; 2]>,
    /// `patterns[w1 * n + w2]` has bit `2*s1 + s2` set when some point lies
    /// on side `s1` of `w1` and side `s2` of `w2`.
    patterns: Vec<u8>,
}

impl HalfspaceSystem {
    pub fn from_model(model: &MedianModel) -> Self {
        let rows = model
            .ids()
            .map(|v| (model.name(v).map(str::to_owned), model.vertex(v).clone()))
            .collect();
        Self::from_points(model.walls().to_vec(), rows).expect("model walls are two-sided")
    }

    /// Builds a system from raw points. Every wall must have two nonempty
    /// sides and every point must have one bit per wall.
    pub fn from_points(walls: Vec<String>, rows: Vec<(Option<String>, Bits)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyModel);
        }
        let n = walls.len();
        for (name, bits) in &rows {
            if bits.len() != n {
                return Err(Error::ArityMismatch {
                    vertex: name.clone().unwrap_or_else(|| bits.to_string()),
                    expected: n,
                    found: bits.len(),
                });
            }
        }
        let (names, points): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let mut sides = Vec::with_capacity(n);
        for (w, name) in walls.iter().enumerate() {
            let mut pair = [VertexSet::empty(points.len()), VertexSet::empty(points.len())];
            for (i, p) in points.iter().enumerate() {
                pair[p.get(w) as usize].insert(VertexId(i));
            }
            if pair[0].is_empty() || pair[1].is_empty() {
                return Err(Error::ConstantWall(name.clone()));
            }
            sides.push(pair);
        }
        let mut patterns = vec![0u8; n * n];
        for p in &points {
            for w1 in 0..n {
                for w2 in 0..n {
                    patterns[w1 * n + w2] |= 1 << (2 * p.get(w1) as u8 + p.get(w2) as u8);
                }
            }
        }
        Ok(HalfspaceSystem {
            walls,
            points,
            names,
            sides,
            patterns,
        })
    }

    pub fn walls(&self) -> &[String] {
        &self.walls
    }

    pub fn points(&self) -> &[Bits] {
        &self.points
    }

    pub fn halfspace(&self, h: Halfspace) -> &VertexSet {
        &self.sides[h.wall][h.side as usize]
    }

    /// Whether the two halfspaces share a point.
    pub fn meet(&self, a: Halfspace, b: Halfspace) -> bool {
        let n = self.walls.len();
        self.patterns[a.wall * n + b.wall] & (1 << (2 * a.side as u8 + b.side as u8)) != 0
    }

    /// `a ⊆ b` as point sets.
    pub fn nested(&self, a: Halfspace, b: Halfspace) -> bool {
        self.halfspace(a).is_subset(self.halfspace(b))
    }

    pub fn is_consistent(&self, alpha: &Ultrafilter) -> bool {
        let hs: Vec<Halfspace> = alpha.halfspaces().collect();
        hs.iter()
            .enumerate()
            .all(|(i, &a)| hs[i + 1..].iter().all(|&b| self.meet(a, b)))
    }

    /// Enumerates every consistent orientation, in lexicographic order.
    pub fn consistent_orientations(&self) -> Result<Vec<Bits>> {
        let n = self.walls.len();
        let mut out = Vec::new();
        let mut current = Bits::zeros(n);
        self.orient(0, &mut current, &mut out)?;
        Ok(out)
    }

    fn orient(&self, w: usize, current: &mut Bits, out: &mut Vec<Bits>) -> Result<()> {
        if w == self.walls.len() {
            if out.len() == MAX_CUBULATION_VERTICES {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_CUBULATION_VERTICES} consistent orientations"
                )));
            }
            out.push(current.clone());
            return Ok(());
        }
        for side in [false, true] {
            let h = Halfspace { wall: w, side };
            let ok = (0..w).all(|u| {
                let g = Halfspace {
                    wall: u,
                    side: current.get(u),
                };
                self.meet(g, h)
            });
            if ok {
                current.set(w, side);
                self.orient(w + 1, current, out)?;
            }
        }
        current.set(w, false);
        Ok(())
    }
}

/// A choice of one halfspace per wall, stored as the chosen side bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ultrafilter {
    pub orientation: Bits,
}

impl Ultrafilter {
    pub fn halfspaces(&self) -> impl Iterator<Item = Halfspace> + '_ {
        self.orientation
            .iter()
            .enumerate()
            .map(|(wall, side)| Halfspace { wall, side })
    }

    /// `(α∩β) ∪ (β∩γ) ∪ (γ∩α)`, taken literally on halfspace sets.
    pub fn median(a: &Ultrafilter, b: &Ultrafilter, c: &Ultrafilter) -> Ultrafilter {
        let sets: Vec<BTreeSet<Halfspace>> = [a, b, c].iter().map(|u| u.halfspaces().collect()).collect();
        let mut chosen: BTreeSet<Halfspace> = BTreeSet::new();
        for (x, y) in [(0, 1), (1, 2), (2, 0)] {
            chosen.extend(sets[x].intersection(&sets[y]).copied());
        }
        let n = a.orientation.len();
        let mut orientation = Bits::zeros(n);
        for h in &chosen {
            orientation.set(h.wall, h.side);
        }
        debug_assert_eq!(chosen.len(), n, "median of orientations picks one side per wall");
        Ultrafilter { orientation }
    }
}

impl MedianModel {
    /// `α_v`: the halfspaces containing `v`.
    pub fn ultrafilter_of_vertex(&self, v: VertexId) -> Result<Ultrafilter> {
        self.check(v)?;
        Ok(Ultrafilter {
            orientation: self.vertex(v).clone(),
        })
    }

    /// The vertex lying in every chosen halfspace, if one exists.
    pub fn vertex_of_ultrafilter(&self, alpha: &Ultrafilter) -> Result<VertexId> {
        if alpha.orientation.len() != self.wall_count() {
            return Err(Error::ArityMismatch {
                vertex: alpha.orientation.to_string(),
                expected: self.wall_count(),
                found: alpha.orientation.len(),
            });
        }
        self.lookup(&alpha.orientation).ok_or_else(|| Error::NotRealized {
            consistent: HalfspaceSystem::from_model(self).is_consistent(alpha),
        })
    }
}

/// The result of cubulating a halfspace system.
#[derive(Clone, Debug)]
pub struct Cubulation {
    pub model: MedianModel,
    /// The vertex of `model` realizing each input point's principal
    /// ultrafilter.
    pub principal: Vec<VertexId>,
    /// Size of the median closure of the principal ultrafilters.
    pub closure_size: usize,
    /// Whether the cubulation has vertices outside that closure.
    pub strict: bool,
}

/// All consistent orientations of a finite system, as a median model.
///
/// Principal ultrafilters keep the names of their points. Asserts that the
/// median closure of the principal ultrafilters is contained in the result.
pub fn sageev_cubulation(system: &HalfspaceSystem) -> Result<Cubulation> {
    let orientations = system.consistent_orientations()?;
    let mut names: Vec<Option<String>> = vec![None; orientations.len()];
    for (p, name) in system.points.iter().zip(&system.names) {
        let i = orientations
            .binary_search(p)
            .map_err(|_| Error::InternalInvariantViolation(format!("principal orientation {p} missing")))?;
        if names[i].is_none() {
            names[i] = name.clone();
        }
    }
    let rows = names.into_iter().zip(orientations).collect();
    let model = MedianModel::with_options(system.walls.clone(), rows, true, 0)?;
    let principal: Vec<VertexId> = system
        .points
        .iter()
        .map(|p| model.lookup(p).expect("checked above"))
        .collect();
    let closure = median_closure(&system.points, model.len()).ok_or_else(|| {
        Error::InternalInvariantViolation("median closure of the points exceeds the cubulation".into())
    })?;
    if let Some(p) = closure.iter().find(|p| model.lookup(p).is_none()) {
        return Err(Error::InternalInvariantViolation(format!(
            "median {p} of principal ultrafilters is not consistent"
        )));
    }
    Ok(Cubulation {
        strict: model.len() > closure.len(),
        closure_size: closure.len(),
        principal,
        model,
    })
}
