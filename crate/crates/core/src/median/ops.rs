use crate::bits::{VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;

/// An interval `[a, b] = { x | abx = x }` with its member set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub a: VertexId,
    pub b: VertexId,
    pub members: VertexSet,
}

impl MedianModel {
    /// The median `abc`: coordinatewise majority.
    pub fn median(&self, a: VertexId, b: VertexId, c: VertexId) -> Result<VertexId> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        Ok(self.med(a, b, c))
    }

    pub fn interval(&self, a: VertexId, b: VertexId) -> Result<Interval> {
        self.check(a)?;
        self.check(b)?;
        Ok(Interval {
            a,
            b,
            members: self.interval_set(a, b),
        })
    }

    pub(crate) fn interval_set(&self, a: VertexId, b: VertexId) -> VertexSet {
        self.set_of(self.ids().filter(|&x| self.between(a, x, b)))
    }

    /// The gate (nearest-point retraction) of `x` onto `[a, b]`: `abx`.
    pub fn gate(&self, a: VertexId, b: VertexId, x: VertexId) -> Result<VertexId> {
        self.median(a, b, x)
    }

    pub fn is_convex(&self, set: &VertexSet) -> bool {
        let members = set.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if self.ids().any(|x| !set.contains(x) && self.between(a, x, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// `{ x | abx ∈ target }`: the preimage of a subset of `[a, b]` under the
    /// gate map onto `[a, b]`.
    pub fn gate_preimage(&self, a: VertexId, b: VertexId, target: &VertexSet) -> Result<VertexSet> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.set_of(self.ids().filter(|&x| target.contains(self.med(a, b, x)))))
    }

    /// `[a,b] ∩ [b,c] ∩ [a,c]`, computed by scanning.
    pub fn triple_intersection(&self, a: VertexId, b: VertexId, c: VertexId) -> Result<VertexSet> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        Ok(self.set_of(self.ids().filter(|&x| {
            self.between(a, x, b) && self.between(b, x, c) && self.between(a, x, c)
        })))
    }

    /// One application of the join: the union of `[a, b]` over `a, b ∈ S`.
    pub fn join(&self, set: &VertexSet) -> VertexSet {
        let members = set.to_vec();
        let mut out = set.clone();
        for x in self.ids() {
            if out.contains(x) {
                continue;
            }
            let inside = members.iter().enumerate().any(|(i, &a)| {
                members[i + 1..].iter().any(|&b| self.between(a, x, b))
            });
            if inside {
                out.insert(x);
            }
        }
        out
    }

    /// Iterates the join to its fixed point. Returns the hull and the number
    /// of joins that changed the set.
    pub fn hull(&self, set: &VertexSet) -> Result<(VertexSet, usize)> {
        if set.is_empty() {
            return Err(Error::PreconditionViolated("hull of the empty set".into()));
        }
        let mut current = set.clone();
        for depth in 0..=self.len() {
            let next = self.join(&current);
            if next == current {
                return Ok((current, depth));
            }
            current = next;
        }
        Err(Error::InternalInvariantViolation(format!(
            "join did not stabilize within {} iterations",
            self.len()
        )))
    }

    /// `[a,b] ∩ [c,d]`. When nonempty it equals `[abc, abd]`; that formula is
    /// only applied (and cross-checked) in the nonempty case.
    pub fn interval_intersection(
        &self,
        (a, b): (VertexId, VertexId),
        (c, d): (VertexId, VertexId),
    ) -> Result<IntervalIntersection> {
        let brute = self.interval(a, b)?.members.intersection(&self.interval(c, d)?.members);
        if brute.is_empty() {
            return Ok(IntervalIntersection::Empty);
        }
        let c_hat = self.med(a, b, c);
        let d_hat = self.med(a, b, d);
        let formula = self.interval_set(c_hat, d_hat);
        if formula != brute {
            return Err(Error::InternalInvariantViolation(format!(
                "[{}, {}] differs from the brute-force intersection",
                self.label(c_hat),
                self.label(d_hat)
            )));
        }
        Ok(IntervalIntersection::Interval(Interval {
            a: c_hat,
            b: d_hat,
            members: formula,
        }))
    }

    /// Whether `[a,x] ∪ [x,b] = [a,b]` for every `x ∈ [a,b]`.
    pub fn is_additive(&self, a: VertexId, b: VertexId) -> Result<bool> {
        let whole = self.interval(a, b)?.members;
        let additive = whole.iter().all(|x| {
            let covered = self.interval_set(a, x).union(&self.interval_set(x, b));
            covered == whole
        });
        Ok(additive)
    }

    /// The vertex of minimum Hamming eccentricity, canonically least on ties.
    pub fn center(&self) -> VertexId {
        self.ids()
            .min_by_key(|&v| {
                let ecc = self
                    .ids()
                    .map(|u| self.vertex(u).hamming(self.vertex(v)))
                    .max()
                    .unwrap_or(0);
                (ecc, v)
            })
            .expect("models are nonempty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalIntersection {
    Empty,
    Interval(Interval),
}

impl IntervalIntersection {
    pub fn members(&self, universe: usize) -> VertexSet {
        match self {
            IntervalIntersection::Empty => VertexSet::empty(universe),
            IntervalIntersection::Interval(i) => i.members.clone(),
        }
    }
}
