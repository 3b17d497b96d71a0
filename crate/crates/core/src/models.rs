//! Generators for concrete median models: hypercubes, paths, ℓ1 grid
//! windows (optionally cut down by a predicate), trees, products and seeded
//! random median closures.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{Bits, VertexId};
use crate::error::{Error, Result};
use crate::median::{IntervalMap, MedianModel};

/// Largest number of lattice points a grid window may have.
pub const MAX_GRID_POINTS: usize = 1 << 14;

type Predicate = Arc<dyn Fn(&[i64]) -> bool + Send + Sync>;

/// An integer box `∏ [lo_i, hi_i]`, optionally filtered by a predicate.
#[derive(Clone)]
pub struct GridSpec {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub predicate: Option<Predicate>,
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("predicate", &self.predicate.is_some())
            .finish()
    }
}

impl GridSpec {
    /// `∏ [0, R_i]`.
    pub fn boxed(ranges: &[i64]) -> Self {
        GridSpec {
            lo: vec![0; ranges.len()],
            hi: ranges.to_vec(),
            predicate: None,
        }
    }

    pub fn window(lo: &[i64], hi: &[i64]) -> Self {
        GridSpec {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            predicate: None,
        }
    }

    pub fn filtered(mut self, predicate: impl Fn(&[i64]) -> bool + Send + Sync + 'static) -> Self {
        self.predicate = Some(Arc::new(predicate));
        self
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.lo.len()
            && p.iter().zip(&self.lo).zip(&self.hi).all(|((x, lo), hi)| lo <= x && x <= hi)
            && self.predicate.as_ref().is_none_or(|f| f(p))
    }
}

/// A grid model together with the lattice coordinates of its vertices.
#[derive(Clone, Debug)]
pub struct GridModel {
    pub model: MedianModel,
    coords: Vec<Vec<i64>>,
    by_point: HashMap<Vec<i64>, VertexId>,
}

impl GridModel {
    pub fn point(&self, p: &[i64]) -> Option<VertexId> {
        self.by_point.get(p).copied()
    }

    /// Like [`point`](Self::point) but panics on absent points.
    pub fn id(&self, p: &[i64]) -> VertexId {
        self.point(p)
            .unwrap_or_else(|| panic!("{p:?} is not a point of the grid"))
    }

    pub fn coords(&self, v: VertexId) -> &[i64] {
        &self.coords[v.0]
    }

    pub fn dimension(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }
}

fn axis_name(i: usize, dims: usize) -> String {
    match (dims, i) {
        (1..=3, 0) => "x".into(),
        (2..=3, 1) => "y".into(),
        (3, 2) => "z".into(),
        _ => format!("x{i}"),
    }
}

pub fn point_name(p: &[i64]) -> String {
    let inner: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", inner.join(","))
}

/// The ℓ1 median structure on the window, with one threshold wall
/// `x_i >= t` per lattice step. The median is the per-axis integer median.
pub fn l1_grid(spec: &GridSpec) -> Result<GridModel> {
    let dims = spec.lo.len();
    if spec.hi.len() != dims || spec.lo.iter().zip(&spec.hi).any(|(lo, hi)| lo > hi) {
        return Err(Error::PreconditionViolated("empty or malformed grid ranges".into()));
    }
    let total = spec
        .lo
        .iter()
        .zip(&spec.hi)
        .try_fold(1usize, |acc, (lo, hi)| acc.checked_mul((hi - lo + 1) as usize))
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| Error::TooLarge(format!("grid window exceeds {MAX_GRID_POINTS} points")))?;

    let mut points = Vec::with_capacity(total);
    let mut p = spec.lo.clone();
    loop {
        if spec.contains(&p) {
            points.push(p.clone());
        }
        let mut axis = 0;
        while axis < dims {
            p[axis] += 1;
            if p[axis] <= spec.hi[axis] {
                break;
            }
            p[axis] = spec.lo[axis];
            axis += 1;
        }
        if axis == dims {
            break;
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyModel);
    }

    let mut cuts: Vec<(usize, i64)> = Vec::new();
    for axis in 0..dims {
        for t in spec.lo[axis] + 1..=spec.hi[axis] {
            let splits = points.iter().any(|q| q[axis] >= t) && points.iter().any(|q| q[axis] < t);
            if splits {
                cuts.push((axis, t));
            }
        }
    }
    let walls = cuts
        .iter()
        .map(|&(axis, t)| format!("{}>={}", axis_name(axis, dims), t))
        .collect();
    let rows = points
        .iter()
        .map(|q| {
            let bits = Bits::from_bools(cuts.iter().map(|&(axis, t)| q[axis] >= t));
            (Some(point_name(q)), bits)
        })
        .collect();
    let model = if spec.predicate.is_some() {
        MedianModel::with_options(walls, rows, false, 0)?
    } else {
        MedianModel::assemble(walls, rows, false)?
    };
    Ok(with_coords(model, points))
}

fn with_coords(model: MedianModel, points: Vec<Vec<i64>>) -> GridModel {
    let mut by_point = HashMap::with_capacity(points.len());
    let mut coords = vec![Vec::new(); model.len()];
    for p in points {
        let id = model.resolve(&point_name(&p)).expect("every point is named");
        coords[id.0] = p.clone();
        by_point.insert(p, id);
    }
    GridModel {
        model,
        coords,
        by_point,
    }
}

/// The ℓ1 plane with the closed quadrant `x ≤ 0, y ≤ 0` removed, on the
/// window `[-r, r]²`.
pub fn plane_minus_quadrant(r: i64) -> Result<GridModel> {
    if r < 1 {
        return Err(Error::PreconditionViolated("window radius must be positive".into()));
    }
    l1_grid(&GridSpec::window(&[-r, -r], &[r, r]).filtered(|p| !(p[0] <= 0 && p[1] <= 0)))
}

/// `{0,1}^n` with walls `e1..en`; vertices are named by their bit strings.
pub fn hypercube(n: usize) -> MedianModel {
    let walls = (1..=n).map(|i| format!("e{i}")).collect();
    let rows = (0..1usize << n)
        .map(|m| {
            let bits = Bits::from_bools((0..n).map(|i| m & (1 << (n - 1 - i)) != 0));
            (Some(bits.to_string()), bits)
        })
        .collect();
    MedianModel::assemble(walls, rows, false).expect("hypercube is well formed")
}

/// A path on `n ≥ 1` vertices named `0..n-1`; wall `pi` cuts between `i-1`
/// and `i`.
pub fn path(n: usize) -> MedianModel {
    assert!(n >= 1, "a path needs a vertex");
    let walls = (1..n).map(|i| format!("p{i}")).collect();
    let rows = (0..n)
        .map(|i| (Some(i.to_string()), Bits::from_bools((1..n).map(|j| i >= j))))
        .collect();
    MedianModel::assemble(walls, rows, false).expect("path is well formed")
}

/// A tree given by its edges; each edge is a wall, with side `1` away from
/// the first vertex mentioned.
pub fn tree_model(edges: &[(&str, &str)]) -> Result<MedianModel> {
    if edges.is_empty() {
        return Err(Error::NotATree("no edges".into()));
    }
    let mut labels: Vec<&str> = Vec::new();
    let mut slot: HashMap<&str, usize> = HashMap::new();
    for &(u, v) in edges {
        for x in [u, v] {
            if !slot.contains_key(x) {
                slot.insert(x, labels.len());
                labels.push(x);
            }
        }
    }
    let n = labels.len();
    if edges.len() != n - 1 {
        return Err(Error::NotATree(format!("{} edges on {} vertices", edges.len(), n)));
    }
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            return Err(Error::NotATree(format!("loop at `{u}`")));
        }
        adj[slot[u]].push((slot[v], e));
        adj[slot[v]].push((slot[u], e));
    }
    // BFS from the root; the far endpoint of each edge is its child.
    let mut parent_edge = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent_edge[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotATree("edges are disconnected".into()));
    }
    let mut bits = vec![Bits::zeros(edges.len()); n];
    for &x in &order {
        if let Some((p, e)) = parent_edge[x] {
            let mut b = bits[p].clone();
            b.set(e, true);
            bits[x] = b;
        }
    }
    let walls = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
    let rows = labels.iter().map(|l| Some(l.to_string())).zip(bits).collect();
    MedianModel::assemble(walls, rows, false)
}

/// The product median algebra. Colliding wall names from `b` get primes.
pub fn product(a: &MedianModel, b: &MedianModel) -> Result<MedianModel> {
    let mut names: HashSet<String> = a.walls().iter().cloned().collect();
    let mut walls: Vec<String> = a.walls().to_vec();
    for w in b.walls() {
        let mut name = w.clone();
        while names.contains(&name) {
            name.push('\'');
        }
        names.insert(name.clone());
        walls.push(name);
    }
    let mut rows = Vec::with_capacity(a.len() * b.len());
    for u in a.ids() {
        for v in b.ids() {
            let name = format!("({},{})", a.label(u), b.label(v));
            rows.push((Some(name), a.vertex(u).concat(b.vertex(v))));
        }
    }
    let parallel = a.allows_parallel_walls() || b.allows_parallel_walls();
    let out = MedianModel::assemble(walls, rows, parallel)?;
    let (ra, rb, r) = (a.rank(), b.rank(), out.rank());
    if r != ra + rb {
        return Err(Error::InternalInvariantViolation(format!(
            "rank of product is {r}, expected {ra} + {rb}"
        )));
    }
    Ok(out)
}

/// The median closure of `seeds` random points in `{0,1}^walls`, with
/// constant and parallel walls removed. Returns `None` if the closure grows
/// past `max_vertices`.
pub fn random_median_closure(walls: usize, seeds: usize, max_vertices: usize, seed: u64) -> Option<MedianModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Bits> = (0..seeds)
        .map(|_| Bits::from_bools((0..walls).map(|_| rng.gen_bool(0.5))))
        .collect();
    let mut points = median_closure(&points, max_vertices)?;
    points.shuffle(&mut rng);
    let names = (0..walls).map(|i| format!("h{i}")).collect();
    let rows = points.into_iter().map(|b| (None, b)).collect();
    let raw = MedianModel::assemble_lenient(names, rows);
    Some(raw.without_parallel_walls())
}

/// The closure of a point set under coordinatewise majority, deduplicated
/// and in first-seen order. `None` once it grows past `max_points`.
pub fn median_closure(points: &[Bits], max_points: usize) -> Option<Vec<Bits>> {
    let mut present: HashSet<Bits> = HashSet::new();
    let mut all: Vec<Bits> = Vec::new();
    for p in points {
        if present.insert(p.clone()) {
            all.push(p.clone());
        }
    }
    // Semi-naive: each round only examines triples touching the last round.
    let mut old = 0;
    while old < all.len() {
        if all.len() > max_points {
            return None;
        }
        let n = all.len();
        let mut fresh = Vec::new();
        for k in old..n {
            for j in 0..k {
                for i in 0..j {
                    let m = Bits::majority(&all[i], &all[j], &all[k]);
                    if present.insert(m.clone()) {
                        fresh.push(m);
                    }
                }
            }
        }
        old = n;
        all.extend(fresh);
    }
    (all.len() <= max_points).then_some(all)
}

/// Search for `count` random median closures in the size window
/// `[min_vertices, max_vertices]`, deterministically from `seed`.
pub fn random_models(count: usize, min_vertices: usize, max_vertices: usize, seed: u64) -> Vec<MedianModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let walls = rng.gen_range(3..=7);
        let seeds = rng.gen_range(2..=6);
        if let Some(m) = random_median_closure(walls, seeds, max_vertices, rng.gen()) {
            if m.len() >= min_vertices {
                out.push(m);
            }
        }
    }
    out
}

/// Geodesic intervals of an undirected connected graph on `0..n`.
pub fn geodesic_intervals(n: usize, edges: &[(usize, usize)]) -> IntervalMap {
    let dist = graph_distances(n, edges);
    IntervalMap::from_fn(n, |a, b| {
        (0..n).filter(|&x| dist[a][x] + dist[x][b] == dist[a][b]).collect()
    })
}

/// All-pairs hop distances by BFS; unreachable pairs get `usize::MAX / 4`.
pub fn graph_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX / 4; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if d[y] > d[x] + 1 {
                        d[y] = d[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

/// Edges of the cycle graph on `n` vertices.
pub fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}
