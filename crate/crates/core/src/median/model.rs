use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{Bits, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Above this many unordered triples the closure scan switches to sampling.
pub const CLOSURE_EXHAUSTIVE_TRIPLES: u64 = 1 << 22;
/// Number of sampled triples when the scan is not exhaustive.
pub const CLOSURE_SAMPLES: u64 = 1 << 20;

/// A finite median algebra, stored as a median-closed set of bit vectors.
///
/// Coordinates are walls. Vertices are kept in canonical (lexicographic)
/// order and addressed by [`VertexId`].
#[derive(Clone, Debug)]
pub struct MedianModel {
    walls: Vec<String>,
    vertices: Vec<Bits>,
    names: Vec<Option<String>>,
    index: HashMap<Bits, VertexId>,
    name_index: HashMap<String, VertexId>,
    parallel_walls: bool,
}

/// Outcome of a median-closure scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub exhaustive: bool,
    pub triples_checked: u64,
    /// First violating triple and its (absent) median.
    pub violation: Option<(VertexId, VertexId, VertexId, Bits)>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl MedianModel {
    /// Builds and fully validates a model. Parallel walls are rejected.
    pub fn new(walls: Vec<String>, rows: Vec<(Option<String>, Bits)>) -> Result<Self> {
        Self::with_options(walls, rows, false, 0)
    }

    /// Builds a model, optionally permitting walls that induce identical
    /// partitions. `seed` drives the closure scan when it has to sample.
    pub fn with_options(
        walls: Vec<String>,
        rows: Vec<(Option<String>, Bits)>,
        parallel_walls: bool,
        seed: u64,
    ) -> Result<Self> {
        let model = Self::assemble(walls, rows, parallel_walls)?;
        let report = model.closure_report(seed);
        if let Some((a, b, c, m)) = report.violation {
            return Err(Error::NotMedianClosed {
                a: model.label(a),
                b: model.label(b),
                c: model.label(c),
                median: m.to_string(),
            });
        }
        Ok(model)
    }

    /// Builds a model whose vertex set is median-closed by construction.
    /// Structural checks still run; the closure scan is skipped.
    pub(crate) fn assemble(
        walls: Vec<String>,
        mut rows: Vec<(Option<String>, Bits)>,
        parallel_walls: bool,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyModel);
        }
        let mut seen_walls = HashMap::new();
        for (i, w) in walls.iter().enumerate() {
            if seen_walls.insert(w.as_str(), i).is_some() {
                return Err(Error::DuplicateName(w.clone()));
            }
        }
        for (name, bits) in &rows {
            if bits.len() != walls.len() {
                return Err(Error::ArityMismatch {
                    vertex: name.clone().unwrap_or_else(|| bits.to_string()),
                    expected: walls.len(),
                    found: bits.len(),
                });
            }
        }
        rows.sort_by(|x, y| x.1.cmp(&y.1));
        for pair in rows.windows(2) {
            if pair[0].1 == pair[1].1 {
                return Err(Error::DuplicateVertex(pair[0].1.to_string()));
            }
        }

        let mut index = HashMap::with_capacity(rows.len());
        let mut name_index = HashMap::new();
        let mut vertices = Vec::with_capacity(rows.len());
        let mut names = Vec::with_capacity(rows.len());
        for (i, (name, bits)) in rows.into_iter().enumerate() {
            if let Some(n) = &name {
                if name_index.insert(n.clone(), VertexId(i)).is_some() {
                    return Err(Error::DuplicateName(n.clone()));
                }
            }
            index.insert(bits.clone(), VertexId(i));
            vertices.push(bits);
            names.push(name);
        }
        let model = MedianModel {
            walls,
            vertices,
            names,
            index,
            name_index,
            parallel_walls,
        };
        model.check_walls()?;
        Ok(model)
    }

    /// Assembles a closed point set after dropping constant walls; parallel
    /// walls are kept.
    pub(crate) fn assemble_lenient(walls: Vec<String>, rows: Vec<(Option<String>, Bits)>) -> Self {
        let first = rows.first().map(|r| r.1.clone());
        let keep: Vec<usize> = (0..walls.len())
            .filter(|&w| {
                let side = first.as_ref().map(|b| b.get(w));
                rows.iter().any(|r| Some(r.1.get(w)) != side)
            })
            .collect();
        let rows = rows.into_iter().map(|(n, b)| (n, b.select(&keep))).collect();
        let walls = keep.iter().map(|&w| walls[w].clone()).collect();
        MedianModel::assemble(walls, rows, true).expect("lenient assembly of a closed point set")
    }

    fn check_walls(&self) -> Result<()> {
        let mut partitions: HashMap<Bits, usize> = HashMap::new();
        for w in 0..self.walls.len() {
            let column = self.normalized_column(w);
            if column.count_ones() == 0 {
                return Err(Error::ConstantWall(self.walls[w].clone()));
            }
            if let Some(&other) = partitions.get(&column) {
                if !self.parallel_walls {
                    return Err(Error::ParallelWalls(
                        self.walls[other].clone(),
                        self.walls[w].clone(),
                    ));
                }
            } else {
                partitions.insert(column, w);
            }
        }
        Ok(())
    }

    /// The wall's partition as a bit per vertex, flipped so vertex 0 reads 0.
    fn normalized_column(&self, w: usize) -> Bits {
        let flip = self.vertices[0].get(w);
        Bits::from_bools(self.vertices.iter().map(|v| v.get(w) != flip))
    }

    /// Scans triples for closure: exhaustive over unordered triples when
    /// there are at most [`CLOSURE_EXHAUSTIVE_TRIPLES`], else a seeded sample.
    pub fn closure_report(&self, seed: u64) -> ClosureReport {
        let n = self.vertices.len() as u64;
        let triples = if n < 3 { 0 } else { n * (n - 1) * (n - 2) / 6 };
        let check = |i: usize, j: usize, k: usize| {
            let m = Bits::majority(&self.vertices[i], &self.vertices[j], &self.vertices[k]);
            if self.index.contains_key(&m) {
                None
            } else {
                Some((VertexId(i), VertexId(j), VertexId(k), m))
            }
        };
        if triples <= CLOSURE_EXHAUSTIVE_TRIPLES {
            let n = n as usize;
            let mut checked = 0;
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        checked += 1;
                        if let Some(v) = check(i, j, k) {
                            return ClosureReport {
                                exhaustive: true,
                                triples_checked: checked,
                                violation: Some(v),
                            };
                        }
                    }
                }
            }
            ClosureReport {
                exhaustive: true,
                triples_checked: checked,
                violation: None,
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = n as usize;
            for s in 0..CLOSURE_SAMPLES {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if let Some(v) = check(i, j, k) {
                    return ClosureReport {
                        exhaustive: false,
                        triples_checked: s + 1,
                        violation: Some(v),
                    };
                }
            }
            ClosureReport {
                exhaustive: false,
                triples_checked: CLOSURE_SAMPLES,
                violation: None,
            }
        }
    }

    pub fn walls(&self) -> &[String] {
        &self.walls
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn wall_index(&self, name: &str) -> Result<usize> {
        self.walls
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| Error::UnknownWall(name.to_string()))
    }

    pub fn allows_parallel_walls(&self) -> bool {
        self.parallel_walls
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + Clone {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn vertex(&self, id: VertexId) -> &Bits {
        &self.vertices[id.0]
    }

    pub fn vertices(&self) -> &[Bits] {
        &self.vertices
    }

    pub fn name(&self, id: VertexId) -> Option<&str> {
        self.names[id.0].as_deref()
    }

    /// The vertex's name if it has one, otherwise its bit string.
    pub fn label(&self, id: VertexId) -> String {
        match &self.names[id.0] {
            Some(n) => n.clone(),
            None => self.vertices[id.0].to_string(),
        }
    }

    pub fn lookup(&self, bits: &Bits) -> Option<VertexId> {
        self.index.get(bits).copied()
    }

    pub fn id_of(&self, bits: &Bits) -> Result<VertexId> {
        self.lookup(bits)
            .ok_or_else(|| Error::UnknownVertex(bits.to_string()))
    }

    /// Resolves a vertex reference: a name first, then a bit string.
    pub fn resolve(&self, reference: &str) -> Result<VertexId> {
        if let Some(&id) = self.name_index.get(reference) {
            return Ok(id);
        }
        reference
            .parse::<Bits>()
            .ok()
            .filter(|b| b.len() == self.walls.len())
            .and_then(|b| self.lookup(&b))
            .ok_or_else(|| Error::UnknownVertex(reference.to_string()))
    }

    pub fn check(&self, id: VertexId) -> Result<()> {
        if id.0 < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(id.to_string()))
        }
    }

    pub(crate) fn med(&self, a: VertexId, b: VertexId, c: VertexId) -> VertexId {
        let m = Bits::majority(&self.vertices[a.0], &self.vertices[b.0], &self.vertices[c.0]);
        match self.index.get(&m) {
            Some(&id) => id,
            None => panic!("model is not median-closed at ({a}, {b}, {c})"),
        }
    }

    /// `x ∈ [a, b]`, i.e. `abx = x`.
    #[inline]
    pub fn between(&self, a: VertexId, x: VertexId, b: VertexId) -> bool {
        self.vertices[x.0].is_between(&self.vertices[a.0], &self.vertices[b.0])
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.len())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn set_of<I: IntoIterator<Item = VertexId>>(&self, ids: I) -> VertexSet {
        VertexSet::from_ids(self.len(), ids)
    }

    /// Groups walls inducing the same partition. Without the parallel-walls
    /// flag every class is a singleton.
    pub fn wall_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_column: HashMap<Bits, usize> = HashMap::new();
        for w in 0..self.walls.len() {
            let col = self.normalized_column(w);
            match by_column.get(&col) {
                Some(&c) => classes[c].push(w),
                None => {
                    by_column.insert(col, classes.len());
                    classes.push(vec![w]);
                }
            }
        }
        classes
    }

    /// Whether walls `w1` and `w2` cross: all four side combinations occur.
    pub fn walls_cross(&self, w1: usize, w2: usize) -> bool {
        let mut seen = [false; 4];
        for v in &self.vertices {
            seen[(v.get(w1) as usize) << 1 | v.get(w2) as usize] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// The submodel on a subset of vertices, dropping walls that become
    /// constant. Only meaningful for median-closed subsets (convex sets are).
    pub fn restrict(&self, set: &VertexSet) -> Result<MedianModel> {
        let members: Vec<VertexId> = set.iter().collect();
        let first = *members.first().ok_or(Error::EmptyModel)?;
        let keep: Vec<usize> = (0..self.walls.len())
            .filter(|&w| {
                let side = self.vertices[first.0].get(w);
                members.iter().any(|v| self.vertices[v.0].get(w) != side)
            })
            .collect();
        let rows = members
            .iter()
            .map(|&v| (self.names[v.0].clone(), self.vertices[v.0].select(&keep)))
            .collect();
        let walls = keep.iter().map(|&w| self.walls[w].clone()).collect();
        MedianModel::assemble(walls, rows, true)
    }

    /// Drops parallel duplicates, keeping the first wall of each class.
    pub fn without_parallel_walls(&self) -> MedianModel {
        let keep: Vec<usize> = self.wall_classes().iter().map(|c| c[0]).collect();
        let rows = self
            .ids()
            .map(|v| (self.names[v.0].clone(), self.vertices[v.0].select(&keep)))
            .collect();
        let walls = keep.iter().map(|&w| self.walls[w].clone()).collect();
        MedianModel::assemble(walls, rows, false).expect("class representatives are distinct")
    }

    /// Renames vertices; `None` entries clear the name.
    pub fn with_names(&self, names: Vec<Option<String>>) -> Result<MedianModel> {
        let rows = self.vertices.iter().cloned().zip(names).map(|(b, n)| (n, b)).collect();
        MedianModel::assemble(self.walls.clone(), rows, self.parallel_walls)
    }
}
