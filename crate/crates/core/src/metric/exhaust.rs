use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::{VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::median::MedianModel;
use crate::wallspace::CubeComplexSkeleton;

use super::{format_ratio, WeightedWallspace};

/// `N(K)` with its frontier and the walls that were weighted 1.
#[derive(Clone, Debug)]
pub struct Thickening {
    pub k: VertexSet,
    pub n: VertexSet,
    /// `B(N)`: vertices of `N` with an ambient edge leaving `N`.
    pub frontier: VertexSet,
    /// Walls separating part of `N` from `K`, all now of weight 1.
    pub new_walls: Vec<usize>,
    pub ws: WeightedWallspace,
    /// `d(B(N), K)`, or `None` when the frontier is empty.
    pub gap: Option<BigRational>,
}

/// Whether wall `w` takes both values on `set`.
fn wall_crosses(m: &MedianModel, w: usize, set: &VertexSet) -> bool {
    let mut seen = [false; 2];
    for v in set.iter() {
        seen[m.vertex(v).get(w) as usize] = true;
    }
    seen[0] && seen[1]
}

/// `B(K)`: vertices of `set` with an ambient neighbour outside it.
pub fn frontier(m: &MedianModel, set: &VertexSet) -> VertexSet {
    let mut out = m.empty_set();
    for v in set.iter() {
        let b = m.vertex(v);
        let leaves = (0..m.wall_count()).any(|w| {
            let mut c = b.clone();
            c.flip(w);
            m.lookup(&c).is_some_and(|u| !set.contains(u))
        });
        if leaves {
            out.insert(v);
        }
    }
    out
}

/// The union of all ambient cubes meeting `set`.
pub fn cube_neighbourhood(m: &MedianModel, skel: &CubeComplexSkeleton, set: &VertexSet) -> VertexSet {
    let mut out = set.clone();
    for cube in skel.cubes() {
        let corners = skel.corners(cube);
        if corners.iter().any(|&c| set.contains(c)) {
            for c in corners {
                out.insert(c);
            }
        }
    }
    debug_assert_eq!(out.universe(), m.len());
    out
}

impl WeightedWallspace {
    /// The 1-thickening of a convex set: `N` is the union of ambient cubes
    /// meeting `K`, and every wall separating part of `N` from `K` is
    /// weighted 1. Checks `d(B(N), K) ≥ 1` and that no edge path from the
    /// frontier to `K` avoids the reweighted walls.
    pub fn thicken(&self, k: &VertexSet) -> Result<Thickening> {
        let skel = self.model().build_complex();
        self.thicken_in(&skel, k)
    }

    pub(crate) fn thicken_in(&self, skel: &CubeComplexSkeleton, k: &VertexSet) -> Result<Thickening> {
        let m = self.model();
        if k.is_empty() {
            return Err(Error::PreconditionViolated("cannot thicken the empty set".into()));
        }
        if !m.is_convex(k) {
            return Err(Error::NotConvex(set_label(m, k)));
        }
        let n = cube_neighbourhood(m, skel, k);
        if !m.is_convex(&n) {
            return Err(Error::InternalInvariantViolation(format!(
                "cube neighbourhood {} is not convex",
                set_label(m, &n)
            )));
        }
        let new_walls: Vec<usize> = (0..m.wall_count())
            .filter(|&w| !wall_crosses(m, w, k) && wall_crosses(m, w, &n))
            .collect();
        let mut weights = self.weights().to_vec();
        for &w in &new_walls {
            weights[w] = BigRational::one();
        }
        let ws = self.reweighted(weights)?;
        let frontier = frontier(m, &n);
        let gap = ws.set_distance(&frontier, k);
        if let Some(g) = &gap {
            if *g < BigRational::one() {
                return Err(Error::InternalInvariantViolation(format!(
                    "frontier is at distance {} from K",
                    format_ratio(g)
                )));
            }
        }

        // Edge search from K that never crosses a new wall.
        let mut is_new = vec![false; m.wall_count()];
        for &w in &new_walls {
            is_new[w] = true;
        }
        let mut adjacency = vec![Vec::new(); m.len()];
        for &(u, v, w) in skel.edges() {
            if !is_new[w] {
                adjacency[u.0].push(v);
                adjacency[v.0].push(u);
            }
        }
        let mut reached = k.clone();
        let mut queue: VecDeque<VertexId> = k.iter().collect();
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x.0] {
                if reached.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if let Some(b) = reached.intersection(&frontier).first() {
            return Err(Error::InternalInvariantViolation(format!(
                "frontier vertex {} reaches K without crossing a new wall",
                m.label(b)
            )));
        }
        Ok(Thickening {
            k: k.clone(),
            n,
            frontier,
            new_walls,
            ws,
            gap,
        })
    }
}

fn set_label(m: &MedianModel, s: &VertexSet) -> String {
    let labels: Vec<String> = s.iter().map(|v| m.label(v)).collect();
    format!("{{{}}}", labels.join(", "))
}

/// How each layer grows before it is thickened.
#[derive(Clone, Debug, Default)]
pub enum Growth {
    /// `K_i = N(K_{i-1})`.
    #[default]
    Onion,
    /// `K_i = N(Hull(K_{i-1} ∪ L_i))`, with `L_2, L_3, …` given in order.
    Supplied(Vec<VertexSet>),
}

/// A chain `K_1 ⊆ … ⊆ K_L` of convex sets with the layer at which each wall
/// was first weighted.
#[derive(Clone, Debug)]
pub struct LayeredExhaustion {
    pub ws: WeightedWallspace,
    /// `layers[i]` is `K_{i+1}`.
    pub layers: Vec<VertexSet>,
    /// `registry[w] = Some(i)` if wall `w` was weighted at layer `i`
    /// (1-based, 1 being the seed); `None` for walls that miss `K_L`.
    pub registry: Vec<Option<usize>>,
    /// Weights in force after each layer was added.
    pub stage_weights: Vec<Vec<BigRational>>,
    /// `gaps[i] = d(B(K_{i+2}), K_{i+1})`, `None` when the frontier is empty.
    pub gaps: Vec<Option<BigRational>>,
}

impl LayeredExhaustion {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layer(&self, i: usize) -> &VertexSet {
        &self.layers[i - 1]
    }

    /// Walls registered at layer `i`.
    pub fn walls_of_layer(&self, i: usize) -> Vec<usize> {
        (0..self.registry.len()).filter(|&w| self.registry[w] == Some(i)).collect()
    }

    pub fn unregistered_walls(&self) -> Vec<usize> {
        (0..self.registry.len()).filter(|&w| self.registry[w].is_none()).collect()
    }

    /// Smallest recorded inter-layer gap.
    pub fn min_gap(&self) -> Option<BigRational> {
        self.gaps.iter().flatten().min().cloned()
    }

    /// A copy with every wall of layer `i` set to `weight`. Only the final
    /// weights change; use it to build negative controls.
    pub fn with_layer_reweighted(&self, i: usize, weight: BigRational) -> Result<LayeredExhaustion> {
        let mut weights = self.ws.weights().to_vec();
        for w in self.walls_of_layer(i) {
            weights[w] = weight.clone();
        }
        let mut out = self.clone();
        out.ws = self.ws.reweighted(weights)?;
        Ok(out)
    }
}

/// Grows a layered exhaustion from a convex seed inside the ambient.
///
/// Walls crossing the seed are weighted 1. Each later layer is the
/// 1-thickening of the previous one (after an optional hull extension),
/// and every wall it adds is weighted 1. Asserts convexity, nesting,
/// `d(B(K_{i+1}), K_i) ≥ 1`, and that distances inside each `K_i` are the
/// same under its own stage weights and the final ones.
pub fn build_exhaustion(
    ambient: &WeightedWallspace,
    seed: &VertexSet,
    layers: usize,
    growth: &Growth,
) -> Result<LayeredExhaustion> {
    let m = ambient.model();
    if layers == 0 {
        return Err(Error::InvalidCount(0));
    }
    if seed.is_empty() {
        return Err(Error::PreconditionViolated("empty seed".into()));
    }
    if !m.is_convex(seed) {
        return Err(Error::NotConvex(set_label(m, seed)));
    }
    if let Growth::Supplied(extra) = growth {
        if extra.len() + 1 < layers {
            return Err(Error::PreconditionViolated(format!(
                "{} extension sets supplied for {} layers",
                extra.len(),
                layers
            )));
        }
    }
    let skel = m.build_complex();
    let mut registry: Vec<Option<usize>> = vec![None; m.wall_count()];
    let mut weights = ambient.weights().to_vec();
    for (w, slot) in registry.iter_mut().enumerate() {
        if wall_crosses(m, w, seed) {
            *slot = Some(1);
            weights[w] = BigRational::one();
        }
    }
    let mut ws = ambient.reweighted(weights)?;
    let mut out_layers = vec![seed.clone()];
    let mut stage_weights = vec![ws.weights().to_vec()];
    let mut gaps = Vec::new();

    for i in 2..=layers {
        let previous = out_layers.last().expect("seed present").clone();
        let mut base = previous.clone();
        if let Growth::Supplied(extra) = growth {
            base.union_with(&extra[i - 2]);
            base = m.hull(&base)?.0;
            let mut weights = ws.weights().to_vec();
            for (w, slot) in registry.iter_mut().enumerate() {
                if slot.is_none() && wall_crosses(m, w, &base) {
                    *slot = Some(i);
                    weights[w] = BigRational::one();
                }
            }
            ws = ws.reweighted(weights)?;
        }
        let t = ws.thicken_in(&skel, &base)?;
        if t.n == previous {
            return Err(Error::AmbientExhausted {
                requested: layers,
                achieved: i - 1,
            });
        }
        for &w in &t.new_walls {
            if registry[w].is_none() {
                registry[w] = Some(i);
            }
        }
        ws = t.ws;
        // Recorded against the previous layer, not the hull extension.
        let gap = ws.set_distance(&frontier(m, &t.n), &previous);
        if let Some(g) = &gap {
            if *g < BigRational::one() {
                return Err(Error::InternalInvariantViolation(format!(
                    "layer {i} frontier is at distance {} from layer {}",
                    format_ratio(g),
                    i - 1
                )));
            }
        }
        gaps.push(gap);
        out_layers.push(t.n);
        stage_weights.push(ws.weights().to_vec());
    }

    let exh = LayeredExhaustion {
        ws,
        layers: out_layers,
        registry,
        stage_weights,
        gaps,
    };
    check_exhaustion(&exh)?;
    Ok(exh)
}

/// Convexity, nesting, and the restriction property.
fn check_exhaustion(exh: &LayeredExhaustion) -> Result<()> {
    let m = exh.ws.model();
    for (i, layer) in exh.layers.iter().enumerate() {
        if !m.is_convex(layer) {
            return Err(Error::InternalInvariantViolation(format!("layer {} is not convex", i + 1)));
        }
        if i > 0 && !exh.layers[i - 1].is_subset(layer) {
            return Err(Error::InternalInvariantViolation(format!("layer {i} is not inside layer {}", i + 1)));
        }
        let stage = exh.ws.reweighted(exh.stage_weights[i].clone())?;
        let members = layer.to_vec();
        for (j, &u) in members.iter().enumerate() {
            for &v in &members[j + 1..] {
                if stage.dist(u, v) != exh.ws.dist(u, v) {
                    return Err(Error::InternalInvariantViolation(format!(
                        "distance {}-{} changed after layer {}",
                        m.label(u),
                        m.label(v),
                        i + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The Floyd weighting of an exhaustion, with per-vertex crossing counts.
#[derive(Clone, Debug)]
pub struct FloydExhaustion {
    pub exhaustion: LayeredExhaustion,
    /// `max_crossings[i - 1]` is the most layer-`i` walls separating any
    /// vertex of `K_L` from the seed.
    pub max_crossings: Vec<usize>,
    /// Largest `d(x, K_1)` over `x ∈ K_L`.
    pub max_seed_distance: BigRational,
}

fn power_of_half(i: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << i)
}

/// Builds the unit exhaustion and then weights every wall registered at
/// layer `i` by `2^-i`. For each `x ∈ K_L` asserts
/// `d(x, K_1) = Σ_i 2^-i m_i(x)`, where `m_i(x)` counts the layer-`i` walls
/// separating `x` from the seed, and `d(x, K_1) < 1` whenever every
/// `m_i(x) ≤ 1`.
pub fn floyd(ambient: &WeightedWallspace, seed: &VertexSet, layers: usize, growth: &Growth) -> Result<FloydExhaustion> {
    let mut exh = build_exhaustion(ambient, seed, layers, growth)?;
    let reweight = |weights: &[BigRational]| -> Vec<BigRational> {
        weights
            .iter()
            .zip(&exh.registry)
            .map(|(w, r)| r.map_or_else(|| w.clone(), power_of_half))
            .collect()
    };
    let stages: Vec<Vec<BigRational>> = exh.stage_weights.iter().map(|s| reweight(s)).collect();
    let final_weights = reweight(exh.ws.weights());
    exh.ws = exh.ws.reweighted(final_weights)?;
    exh.stage_weights = stages;
    let m = exh.ws.model().clone();
    exh.gaps = (1..exh.len())
        .map(|i| {
            exh.ws.set_distance(&frontier(&m, exh.layer(i + 1)), exh.layer(i))
        })
        .collect();
    check_exhaustion(&exh)?;

    let seed_set = exh.layer(1).clone();
    let mut max_crossings = vec![0usize; layers];
    let mut max_seed_distance = BigRational::zero();
    for x in exh.layer(layers).iter() {
        let (gate, d) = seed_set
            .iter()
            .map(|s| (s, exh.ws.dist(x, s)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("seed is nonempty");
        let mut counts = vec![0usize; layers];
        for w in m.vertex(x).separating(m.vertex(gate)) {
            if let Some(i) = exh.registry[w] {
                counts[i - 1] += 1;
            }
        }
        let bound: BigRational = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| power_of_half(i + 1) * BigRational::from_integer(c.into()))
            .sum();
        if d != bound || (counts.iter().all(|&c| c <= 1) && d >= BigRational::one()) {
            return Err(Error::InternalInvariantViolation(format!(
                "d({}, K_1) = {} breaks the layer bound {}",
                m.label(x),
                format_ratio(&d),
                format_ratio(&bound)
            )));
        }
        for (mx, c) in max_crossings.iter_mut().zip(&counts) {
            *mx = (*mx).max(*c);
        }
        max_seed_distance = max_seed_distance.max(d);
    }
    Ok(FloydExhaustion {
        exhaustion: exh,
        max_crossings,
        max_seed_distance,
    })
}

/// The gate retraction `K_{i+1} → K_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction {
    pub layer: usize,
    /// `(v, r(v))` for every `v ∈ K_{i+1}`, ascending in `v`.
    pub map: Vec<(VertexId, VertexId)>,
}

impl Retraction {
    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.map
            .binary_search_by_key(&v, |p| p.0)
            .ok()
            .map(|i| self.map[i].1)
    }
}

/// Maps each vertex of `K_{i+1}` to its gate in `K_i`: the unique `g ∈ K_i`
/// lying in `[v, k]` for every `k ∈ K_i`. Asserts uniqueness, identity on
/// `K_i`, and that the map does not increase distances.
pub fn retract_layer(exh: &LayeredExhaustion, i: usize) -> Result<Retraction> {
    if i == 0 || i >= exh.len() {
        return Err(Error::PreconditionViolated(format!(
            "layer {i} has no successor in an exhaustion of length {}",
            exh.len()
        )));
    }
    let m = exh.ws.model();
    let inner = exh.layer(i);
    let outer = exh.layer(i + 1);
    let inner_members = inner.to_vec();
    let mut map = Vec::with_capacity(outer.len());
    for v in outer.iter() {
        let gates: Vec<VertexId> = inner_members
            .iter()
            .copied()
            .filter(|&g| inner_members.iter().all(|&k| m.between(v, g, k)))
            .collect();
        match gates.as_slice() {
            [g] => map.push((v, *g)),
            _ => return Err(Error::GateNotUnique(m.label(v))),
        }
    }
    for &(v, g) in &map {
        if inner.contains(v) && g != v {
            return Err(Error::InternalInvariantViolation(format!(
                "retraction moves {} inside the layer",
                m.label(v)
            )));
        }
    }
    for (j, &(u, ru)) in map.iter().enumerate() {
        for &(v, rv) in &map[j + 1..] {
            if exh.ws.dist(ru, rv) > exh.ws.dist(u, v) {
                return Err(Error::InternalInvariantViolation(format!(
                    "retraction stretches {}-{}",
                    m.label(u),
                    m.label(v)
                )));
            }
        }
    }
    Ok(Retraction { layer: i, map })
}

/// A vertex too close to an earlier layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub m: usize,
    pub vertex: VertexId,
    pub distance: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub checked: u64,
    pub min_gap: Option<BigRational>,
    pub witness: Option<GapWitness>,
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// For every `m < L` and `x ∈ K_L \ K_{m+1}`, checks `d(x, K_m) ≥ 1`.
pub fn cauchy_gap_check(exh: &LayeredExhaustion) -> GapReport {
    let big_l = exh.len();
    let mut report = GapReport {
        checked: 0,
        min_gap: None,
        witness: None,
    };
    for m in 1..big_l {
        let mut outside = exh.layer(big_l).clone();
        outside.difference_with(exh.layer(m + 1));
        for x in outside.iter() {
            report.checked += 1;
            let d = exh.ws.distance_to_set(x, exh.layer(m)).expect("layers are nonempty");
            if report.min_gap.as_ref().is_none_or(|g| d < *g) {
                report.min_gap = Some(d.clone());
            }
            if d < BigRational::one() && report.witness.is_none() {
                report.witness = Some(GapWitness { m, vertex: x, distance: d });
            }
        }
    }
    report
}
