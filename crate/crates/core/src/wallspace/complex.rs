use std::collections::{BTreeSet, HashMap};

use crate::bits::{Bits, VertexId};
use crate::error::{Error, Result};
use crate::median::MedianModel;

/// A cube of the skeleton: the corner with bit 0 on every direction, and
/// the directions (walls) it spans, ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    pub base: VertexId,
    pub dirs: Vec<usize>,
}

impl Cube {
    pub fn dimension(&self) -> usize {
        self.dirs.len()
    }
}

/// The link of a vertex as an abstract simplicial complex on edge
/// directions. A set of directions is a simplex when the cube it spans at
/// the vertex is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub directions: Vec<usize>,
    /// All nonempty simplices.
    pub simplices: BTreeSet<Vec<usize>>,
}

impl Link {
    pub fn contains(&self, simplex: &[usize]) -> bool {
        simplex.is_empty() || self.simplices.contains(simplex)
    }

    /// Simplices not properly contained in another.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|d| t.contains(d)))
            })
            .cloned()
            .collect()
    }

    /// The first clique of the 1-skeleton (in ascending enumeration order)
    /// that is not a simplex.
    pub fn flag_violation(&self) -> Option<Vec<usize>> {
        let adjacent = |a: usize, b: usize| self.simplices.contains(&vec![a.min(b), a.max(b)]);
        fn grow(
            link: &Link,
            adjacent: &dyn Fn(usize, usize) -> bool,
            clique: &mut Vec<usize>,
            start: usize,
        ) -> Option<Vec<usize>> {
            for i in start..link.directions.len() {
                let d = link.directions[i];
                if clique.iter().all(|&c| adjacent(c, d)) {
                    clique.push(d);
                    if !link.contains(clique) {
                        return Some(clique.clone());
                    }
                    if let Some(w) = grow(link, adjacent, clique, i + 1) {
                        return Some(w);
                    }
                    clique.pop();
                }
            }
            None
        }
        grow(self, &adjacent, &mut Vec::new(), 0)
    }

    pub fn is_flag(&self) -> bool {
        self.flag_violation().is_none()
    }
}

/// Vertices, edges and cubes of a cube complex given by a set of bit
/// vectors: edges join vectors at Hamming distance one, and a cube is
/// present when all of its corners are.
#[derive(Clone, Debug)]
pub struct CubeComplexSkeleton {
    walls: Vec<String>,
    vertices: Vec<Bits>,
    names: Vec<Option<String>>,
    index: HashMap<Bits, VertexId>,
    /// `(u, v, wall)` with `u < v`, sorted.
    edges: Vec<(VertexId, VertexId, usize)>,
    /// Cubes of dimension at least one, by dimension then base then dirs.
    cubes: Vec<Cube>,
    links: Vec<Link>,
}

impl MedianModel {
    /// The cube complex whose vertex set is the model. Parallel walls are
    /// merged first.
    pub fn build_complex(&self) -> CubeComplexSkeleton {
        let reduced;
        let model = if self.allows_parallel_walls() {
            reduced = self.without_parallel_walls();
            &reduced
        } else {
            self
        };
        let rows = model
            .ids()
            .map(|v| (model.name(v).map(str::to_owned), model.vertex(v).clone()))
            .collect();
        CubeComplexSkeleton::from_points(model.walls().to_vec(), rows).expect("model rows are well formed")
    }
}

impl CubeComplexSkeleton {
    /// A skeleton on arbitrary distinct bit vectors; no closure is required.
    pub fn from_points(walls: Vec<String>, mut rows: Vec<(Option<String>, Bits)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyModel);
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
        rows.sort_by(|a, b| a.1.cmp(&b.1));
        let (names, vertices): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, b) in vertices.iter().enumerate() {
            if index.insert(b.clone(), VertexId(i)).is_some() {
                return Err(Error::DuplicateVertex(b.to_string()));
            }
        }
        let mut skel = CubeComplexSkeleton {
            walls,
            vertices,
            names,
            index,
            edges: Vec::new(),
            cubes: Vec::new(),
            links: Vec::new(),
        };
        skel.enumerate_cubes();
        skel.build_links();
        Ok(skel)
    }

    fn enumerate_cubes(&mut self) {
        let mut cubes = Vec::new();
        for (i, b) in self.vertices.iter().enumerate() {
            let up: Vec<usize> = (0..self.walls.len())
                .filter(|&w| !b.get(w) && self.index.contains_key(&flipped(b, w)))
                .collect();
            let mut corners = vec![b.clone()];
            self.extend_cube(VertexId(i), &up, 0, &mut Vec::new(), &mut corners, &mut cubes);
        }
        cubes.sort_by(|a: &Cube, b: &Cube| (a.dimension(), a.base, &a.dirs).cmp(&(b.dimension(), b.base, &b.dirs)));
        self.edges = cubes
            .iter()
            .filter(|c| c.dimension() == 1)
            .map(|c| {
                let tip = self.index[&flipped(&self.vertices[c.base.0], c.dirs[0])];
                (c.base.min(tip), c.base.max(tip), c.dirs[0])
            })
            .collect();
        self.edges.sort();
        self.cubes = cubes;
    }

    fn extend_cube(
        &self,
        base: VertexId,
        up: &[usize],
        start: usize,
        dirs: &mut Vec<usize>,
        corners: &mut Vec<Bits>,
        out: &mut Vec<Cube>,
    ) {
        for (k, &w) in up.iter().enumerate().skip(start) {
            let raised: Vec<Bits> = corners.iter().map(|c| flipped(c, w)).collect();
            if raised.iter().all(|c| self.index.contains_key(c)) {
                dirs.push(w);
                out.push(Cube {
                    base,
                    dirs: dirs.clone(),
                });
                let before = corners.len();
                corners.extend(raised);
                self.extend_cube(base, up, k + 1, dirs, corners, out);
                corners.truncate(before);
                dirs.pop();
            }
        }
    }

    fn build_links(&mut self) {
        let mut links: Vec<Link> = (0..self.vertices.len())
            .map(|_| Link {
                directions: Vec::new(),
                simplices: BTreeSet::new(),
            })
            .collect();
        for cube in &self.cubes {
            for v in self.corners(cube) {
                links[v.0].simplices.insert(cube.dirs.clone());
            }
        }
        for link in &mut links {
            link.directions = link
                .simplices
                .iter()
                .filter(|s| s.len() == 1)
                .map(|s| s[0])
                .collect();
        }
        self.links = links;
    }

    /// All `2^k` corners of a cube.
    pub fn corners(&self, cube: &Cube) -> Vec<VertexId> {
        let base = &self.vertices[cube.base.0];
        (0..1usize << cube.dirs.len())
            .map(|mask| {
                let mut b = base.clone();
                for (i, &w) in cube.dirs.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        b.flip(w);
                    }
                }
                self.index[&b]
            })
            .collect()
    }

    pub fn walls(&self) -> &[String] {
        &self.walls
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: VertexId) -> &Bits {
        &self.vertices[v.0]
    }

    pub fn label(&self, v: VertexId) -> String {
        self.names[v.0].clone().unwrap_or_else(|| self.vertices[v.0].to_string())
    }

    /// Looks a vertex up by name, then by bit string.
    pub fn resolve(&self, reference: &str) -> Result<VertexId> {
        if let Some(i) = self.names.iter().position(|n| n.as_deref() == Some(reference)) {
            return Ok(VertexId(i));
        }
        reference
            .parse::<Bits>()
            .ok()
            .and_then(|b| self.index.get(&b).copied())
            .ok_or_else(|| Error::UnknownVertex(reference.to_string()))
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, usize)] {
        &self.edges
    }

    /// Cubes of dimension at least one.
    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    /// `counts[k]` is the number of `k`-cubes, starting with vertices.
    pub fn cube_counts(&self) -> Vec<usize> {
        let mut counts = vec![self.vertices.len()];
        for c in &self.cubes {
            if counts.len() <= c.dimension() {
                counts.resize(c.dimension() + 1, 0);
            }
            counts[c.dimension()] += 1;
        }
        counts
    }

    pub fn dimension(&self) -> usize {
        self.cube_counts().len() - 1
    }

    /// Cubes not contained in a larger cube, isolated vertices included as
    /// 0-cubes.
    pub fn maximal_cubes(&self) -> Vec<Cube> {
        let mut out: Vec<Cube> = (0..self.vertices.len())
            .filter(|&v| self.links[v].directions.is_empty())
            .map(|v| Cube {
                base: VertexId(v),
                dirs: Vec::new(),
            })
            .collect();
        for cube in &self.cubes {
            let extendable = self.links[cube.base.0]
                .simplices
                .iter()
                .any(|s| s.len() == cube.dirs.len() + 1 && cube.dirs.iter().all(|d| s.contains(d)));
            if !extendable {
                out.push(cube.clone());
            }
        }
        out
    }

    pub fn link(&self, v: VertexId) -> Result<&Link> {
        self.links
            .get(v.0)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }
}

fn flipped(b: &Bits, w: usize) -> Bits {
    let mut c = b.clone();
    c.flip(w);
    c
}

/// The three local conditions at a vertex, with the first witness found for
/// each failure. Witnesses are direction sets in the link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCubulationReport {
    pub vertex: VertexId,
    pub n: usize,
    /// Every cube containing the vertex lies in an `n`-cube containing it.
    pub contained_in_n_cube: bool,
    /// Every `(n-1)`-cube containing the vertex lies in exactly two
    /// `n`-cubes containing it.
    pub two_cofacets: bool,
    /// The link is flag.
    pub flag: bool,
    pub containment_witness: Option<Vec<usize>>,
    /// The offending `(n-1)`-cube and its number of `n`-cofacets.
    pub cofacet_witness: Option<(Vec<usize>, usize)>,
    pub flag_witness: Option<Vec<usize>>,
}

impl LocalCubulationReport {
    pub fn passed(&self) -> bool {
        self.contained_in_n_cube && self.two_cofacets && self.flag
    }
}

pub fn check_local_cubulation(skel: &CubeComplexSkeleton, v: VertexId, n: usize) -> Result<LocalCubulationReport> {
    if n == 0 {
        return Err(Error::InvalidCount(n));
    }
    let link = skel.link(v)?;
    let top: Vec<&Vec<usize>> = link.simplices.iter().filter(|s| s.len() == n).collect();
    let within = |s: &[usize], t: &[usize]| s.iter().all(|d| t.contains(d));

    let mut faces: Vec<Vec<usize>> = vec![Vec::new()];
    faces.extend(link.simplices.iter().cloned());
    let containment_witness = faces
        .iter()
        .find(|s| !top.iter().any(|t| within(s, t)))
        .cloned();

    let cofacet_witness = faces.iter().filter(|s| s.len() == n - 1).find_map(|s| {
        let count = top.iter().filter(|t| within(s, t)).count();
        (count != 2).then(|| (s.clone(), count))
    });

    let flag_witness = link.flag_violation();
    Ok(LocalCubulationReport {
        vertex: v,
        n,
        contained_in_n_cube: containment_witness.is_none(),
        two_cofacets: cofacet_witness.is_none(),
        flag: flag_witness.is_none(),
        containment_witness,
        cofacet_witness,
        flag_witness,
    })
}
