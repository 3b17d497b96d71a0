//! Median squares and cubes: classification, the product structure of a
//! square, square detection inside intervals, double projection, and the
//! flag construction of cubes from pairwise squares.

use std::collections::HashMap;

use crate::bits::{VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareKind {
    NotSquare,
    Point,
    DegenerateInterval,
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    pub quad: [VertexId; 4],
    pub kind: SquareKind,
}

/// The two mutually inverse maps `[a,b] × [a,d] ⇄ [a,c]` of a square
/// `□(a,b,c,d)`, as explicit tables.
#[derive(Clone, Debug)]
pub struct SquareProduct {
    pub square: [VertexId; 4],
    /// `φ(y, z) = yzc`.
    pub phi: HashMap<(VertexId, VertexId), VertexId>,
    /// `ψ(x) = (abx, adx)`.
    pub psi: HashMap<VertexId, (VertexId, VertexId)>,
}

/// An embedded median cube: `vertex_map[mask]` is the image of the corner of
/// `{0,1}^k` whose set bits are `mask` (bit `i` ↔ tip `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeWitness {
    pub corner: VertexId,
    pub tips: Vec<VertexId>,
    pub vertex_map: Vec<VertexId>,
}

impl CubeWitness {
    pub fn dimension(&self) -> usize {
        self.tips.len()
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_ids(universe, self.vertex_map.iter().copied())
    }
}

impl MedianModel {
    pub fn classify_quadruple(&self, quad: [VertexId; 4]) -> Result<SquareClass> {
        for &v in &quad {
            self.check(v)?;
        }
        Ok(SquareClass {
            quad,
            kind: self.square_kind(quad),
        })
    }

    fn square_kind(&self, q: [VertexId; 4]) -> SquareKind {
        let equations = (0..4).all(|i| self.med(q[(i + 3) % 4], q[i], q[(i + 1) % 4]) == q[i]);
        if !equations {
            return SquareKind::NotSquare;
        }
        let [a, b, c, d] = q;
        if a == b && b == c && c == d {
            SquareKind::Point
        } else if (a == b && c == d && a != c) || (b == c && d == a && a != b) {
            SquareKind::DegenerateInterval
        } else if a != b && a != c && a != d && b != c && b != d && c != d {
            SquareKind::Square
        } else {
            // The equations force every other coincidence pattern to collapse
            // to a point, so reaching here means the model is broken.
            SquareKind::NotSquare
        }
    }

    pub fn is_square(&self, quad: [VertexId; 4]) -> bool {
        self.square_kind(quad) == SquareKind::Square
    }

    /// The product decomposition `[a,c] ≅ [a,b] × [a,d]` of a square, with
    /// both compositions checked to be identities.
    pub fn square_product_iso(&self, square: [VertexId; 4]) -> Result<SquareProduct> {
        let class = self.classify_quadruple(square)?;
        if class.kind != SquareKind::Square {
            return Err(Error::NotASquare(format!("{:?}", class.kind)));
        }
        let [a, b, c, d] = square;
        let side_b = self.interval_set(a, b);
        let side_d = self.interval_set(a, d);
        let diagonal = self.interval_set(a, c);

        let mut phi = HashMap::new();
        for y in side_b.iter() {
            for z in side_d.iter() {
                phi.insert((y, z), self.med(y, z, c));
            }
        }
        let psi: HashMap<_, _> = diagonal
            .iter()
            .map(|x| (x, (self.med(a, b, x), self.med(a, d, x))))
            .collect();

        for (&x, pair) in &psi {
            if phi.get(pair) != Some(&x) {
                return Err(Error::InternalInvariantViolation(format!(
                    "φ∘ψ moves {}",
                    self.label(x)
                )));
            }
        }
        for (&pair, x) in &phi {
            if psi.get(x) != Some(&pair) {
                return Err(Error::InternalInvariantViolation(format!(
                    "ψ∘φ moves ({}, {})",
                    self.label(pair.0),
                    self.label(pair.1)
                )));
            }
        }
        Ok(SquareProduct { square, phi, psi })
    }

    /// A median square inside `[a, b]` with `a` as a vertex, or `None` when
    /// `[a,b] ∖ {a}` is convex. Takes the canonically least pair `c < d` of
    /// `[a,b] ∖ {a}` with `a ∈ [c,d]` and returns `□(a, c, bcd, d)`.
    pub fn find_square_in_interval(&self, a: VertexId, b: VertexId) -> Result<Option<[VertexId; 4]>> {
        let mut punctured = self.interval(a, b)?.members;
        punctured.remove(a);
        let members = punctured.to_vec();
        for (i, &c) in members.iter().enumerate() {
            for &d in &members[i + 1..] {
                if self.between(c, a, d) {
                    let e = self.med(b, c, d);
                    let square = [a, c, e, d];
                    if !self.is_square(square) {
                        return Err(Error::InternalInvariantViolation(format!(
                            "({}, {}, {}, {}) is not a square",
                            self.label(a),
                            self.label(c),
                            self.label(e),
                            self.label(d)
                        )));
                    }
                    return Ok(Some(square));
                }
            }
        }
        Ok(None)
    }

    /// Given distinct `a, b, c, d` with `abc = b` and `bcd = c`, projects `d`
    /// to `[a,b]` and `a` to `[c,d]`; `(â, b, c, d̂)` is a possibly degenerate
    /// square.
    pub fn double_projection(
        &self,
        a: VertexId,
        b: VertexId,
        c: VertexId,
        d: VertexId,
    ) -> Result<SquareClass> {
        for v in [a, b, c, d] {
            self.check(v)?;
        }
        let mut failed = Vec::new();
        let all = [a, b, c, d];
        for i in 0..4 {
            for j in i + 1..4 {
                if all[i] == all[j] {
                    failed.push(format!("points {} and {} coincide", i + 1, j + 1));
                }
            }
        }
        if self.med(a, b, c) != b {
            failed.push("abc ≠ b".to_string());
        }
        if self.med(b, c, d) != c {
            failed.push("bcd ≠ c".to_string());
        }
        if !failed.is_empty() {
            return Err(Error::PreconditionViolated(failed.join("; ")));
        }
        let a_hat = self.med(a, b, d);
        let d_hat = self.med(c, d, a);
        let class = self.classify_quadruple([a_hat, b, c, d_hat])?;
        if class.kind == SquareKind::NotSquare {
            return Err(Error::InternalInvariantViolation(
                "double projection is not a square".into(),
            ));
        }
        Ok(class)
    }

    /// The canonically least `x` with `□(a, p, x, q)` a median square.
    pub fn square_face(&self, a: VertexId, p: VertexId, q: VertexId) -> Option<VertexId> {
        self.ids().find(|&x| self.is_square([a, p, x, q]))
    }

    /// Builds the median cube spanned by the edges `{a, tips[i]}` from the
    /// faces `□(a, tips[i], face(i,j), tips[j])`, by induction on the number
    /// of tips: the cubes on all-but-the-last and all-but-the-penultimate
    /// tips share a codimension-two face, and their far corners together with
    /// the last two tips form a square whose product with that face is the
    /// whole cube.
    pub fn flag_span(
        &self,
        a: VertexId,
        tips: &[VertexId],
        face: impl Fn(usize, usize) -> Option<VertexId>,
    ) -> Result<CubeWitness> {
        self.check(a)?;
        for &t in tips {
            self.check(t)?;
        }
        let n = tips.len();
        if n > 20 {
            return Err(Error::TooLarge(format!("{n} tips")));
        }
        let mut faces = vec![vec![a; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let f = face(i, j).ok_or(Error::PrerequisiteSquareMissing { i, j })?;
                if !self.is_square([a, tips[i], f, tips[j]]) {
                    return Err(Error::PrerequisiteSquareMissing { i, j });
                }
                faces[i][j] = f;
                faces[j][i] = f;
            }
        }
        if n == 1 && tips[0] == a {
            return Err(Error::PreconditionViolated("tip equals the corner".into()));
        }
        let order: Vec<usize> = (0..n).collect();
        let vertex_map = self.span(a, tips, &faces, &order)?;
        let witness = CubeWitness {
            corner: a,
            tips: tips.to_vec(),
            vertex_map,
        };
        self.check_cube_embedding(&witness)?;
        Ok(witness)
    }

    fn span(
        &self,
        a: VertexId,
        tips: &[VertexId],
        faces: &[Vec<VertexId>],
        order: &[usize],
    ) -> Result<Vec<VertexId>> {
        let n = order.len();
        match n {
            0 => return Ok(vec![a]),
            1 => return Ok(vec![a, tips[order[0]]]),
            2 => {
                let (i, j) = (order[0], order[1]);
                return Ok(vec![a, tips[i], tips[j], faces[i][j]]);
            }
            _ => {}
        }
        let (pen, last) = (order[n - 2], order[n - 1]);
        let without_last = self.span(a, tips, faces, &order[..n - 1])?;
        let mut without_pen_order = order[..n - 2].to_vec();
        without_pen_order.push(last);
        let without_pen = self.span(a, tips, faces, &without_pen_order)?;

        let low = (1usize << (n - 2)) - 1;
        for m in 0..=low {
            if without_last[m] != without_pen[m] {
                return Err(Error::EmbeddingCheckFailed(
                    "sub-cubes disagree on their common face".into(),
                ));
            }
        }
        let x = without_last[(1 << (n - 1)) - 1];
        let y = without_pen[(1 << (n - 1)) - 1];
        if !self.is_square([tips[pen], x, y, tips[last]]) {
            return Err(Error::EmbeddingCheckFailed(format!(
                "far corners {} and {} do not close a square",
                self.label(x),
                self.label(y)
            )));
        }

        let pen_bit = 1usize << (n - 2);
        let last_bit = 1usize << (n - 1);
        let map = (0..1usize << n)
            .map(|mask| {
                let base = mask & low;
                match (mask & pen_bit != 0, mask & last_bit != 0) {
                    (_, false) => without_last[mask],
                    (false, true) => without_pen[base | pen_bit],
                    (true, true) => self.med(
                        without_last[base | pen_bit],
                        without_pen[base | pen_bit],
                        faces[pen][last],
                    ),
                }
            })
            .collect();
        Ok(map)
    }

    /// Checks that a cube map is injective and preserves the median on every
    /// triple of corners.
    pub fn check_cube_embedding(&self, w: &CubeWitness) -> Result<()> {
        let size = w.vertex_map.len();
        if size != 1 << w.tips.len() {
            return Err(Error::EmbeddingCheckFailed("wrong number of corners".into()));
        }
        let mut seen = self.empty_set();
        for &v in &w.vertex_map {
            if !seen.insert(v) {
                return Err(Error::EmbeddingCheckFailed(format!(
                    "{} appears twice",
                    self.label(v)
                )));
            }
        }
        if w.vertex_map[0] != w.corner
            || (0..w.tips.len()).any(|i| w.vertex_map[1 << i] != w.tips[i])
        {
            return Err(Error::EmbeddingCheckFailed("corner or tips misplaced".into()));
        }
        for p in 0..size {
            for q in p + 1..size {
                for r in q + 1..size {
                    let m = (p & q) | (q & r) | (p & r);
                    let image = self.med(w.vertex_map[p], w.vertex_map[q], w.vertex_map[r]);
                    if image != w.vertex_map[m] {
                        return Err(Error::EmbeddingCheckFailed(format!(
                            "median of corners {p}, {q}, {r} is not preserved"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn ids(m: &MedianModel, refs: &[&str]) -> Vec<VertexId> {
        refs.iter().map(|r| m.resolve(r).unwrap()).collect()
    }

    fn quad(v: &[VertexId]) -> [VertexId; 4] {
        [v[0], v[1], v[2], v[3]]
    }

    #[test]
    fn classification_examples() {
        let sq = models::hypercube(2);
        let v = ids(&sq, &["00", "10", "11", "01"]);
        assert_eq!(sq.classify_quadruple(quad(&v)).unwrap().kind, SquareKind::Square);
        let (a, b) = (v[0], v[2]);
        assert_eq!(
            sq.classify_quadruple([a, a, b, b]).unwrap().kind,
            SquareKind::DegenerateInterval
        );
        assert_eq!(
            sq.classify_quadruple([a, b, a, b]).unwrap().kind,
            SquareKind::NotSquare
        );
        assert_eq!(sq.classify_quadruple([a; 4]).unwrap().kind, SquareKind::Point);
    }

    #[test]
    fn product_maps_on_unit_square() {
        let sq = models::hypercube(2);
        let v = ids(&sq, &["00", "10", "11", "01"]);
        let iso = sq.square_product_iso(quad(&v)).unwrap();
        assert_eq!(iso.psi[&v[2]], (v[1], v[3]));
        assert_eq!(iso.phi[&(v[1], v[3])], v[2]);
        assert_eq!(iso.phi[&(v[0], v[0])], v[0]);
        assert!(matches!(
            sq.square_product_iso([v[0], v[0], v[2], v[2]]),
            Err(Error::NotASquare(_))
        ));
    }

    #[test]
    fn square_in_interval() {
        let cube = models::hypercube(3);
        let v = ids(&cube, &["000", "111"]);
        let sq = cube.find_square_in_interval(v[0], v[1]).unwrap().unwrap();
        let labels: Vec<_> = sq.iter().map(|&x| cube.label(x)).collect();
        assert_eq!(labels, ["000", "001", "011", "010"]);

        let path = models::path(5);
        for a in path.ids() {
            for b in path.ids() {
                assert_eq!(path.find_square_in_interval(a, b).unwrap(), None);
            }
        }
    }

    #[test]
    fn double_projection_in_the_plane() {
        let grid = models::l1_grid(&models::GridSpec::boxed(&[3, 2])).unwrap();
        let p = |c: &[i64]| grid.id(c);
        let class = grid
            .model
            .double_projection(p(&[0, 1]), p(&[0, 0]), p(&[2, 0]), p(&[3, 2]))
            .unwrap();
        assert_eq!(class.quad, [p(&[0, 1]), p(&[0, 0]), p(&[2, 0]), p(&[2, 1])]);
        assert_eq!(class.kind, SquareKind::Square);

        let err = grid
            .model
            .double_projection(p(&[0, 0]), p(&[3, 2]), p(&[2, 0]), p(&[0, 1]))
            .unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    #[test]
    fn double_projection_on_a_chain_degenerates() {
        let path = models::path(6);
        let v = ids(&path, &["0", "2", "3", "5"]);
        let class = path.double_projection(v[0], v[1], v[2], v[3]).unwrap();
        assert!(matches!(
            class.kind,
            SquareKind::DegenerateInterval | SquareKind::Point
        ));
    }

    #[test]
    fn flag_span_three_cube() {
        let cube = models::hypercube(3);
        let a = cube.resolve("000").unwrap();
        let tips = ids(&cube, &["100", "010", "001"]);
        let w = cube
            .flag_span(a, &tips, |i, j| cube.square_face(a, tips[i], tips[j]))
            .unwrap();
        assert_eq!(w.vertex_set(cube.len()).len(), 8);
        assert_eq!(cube.label(w.vertex_map[7]), "111");
    }

    #[test]
    fn flag_span_base_case_is_the_square() {
        let sq = models::hypercube(2);
        let v = ids(&sq, &["00", "10", "11", "01"]);
        let w = sq.flag_span(v[0], &[v[1], v[3]], |_, _| Some(v[2])).unwrap();
        assert_eq!(w.vertex_map, vec![v[0], v[1], v[3], v[2]]);
    }

    #[test]
    fn flag_span_requires_squares() {
        let path = models::path(3);
        let v = ids(&path, &["1", "0", "2"]);
        let err = path.flag_span(v[0], &[v[1], v[2]], |_, _| None).unwrap_err();
        assert_eq!(err, Error::PrerequisiteSquareMissing { i: 0, j: 1 });
    }
}
