//! Acceptance run: one PASS/FAIL line per criterion. Every check compares
//! library output with a brute-force oracle computed here from raw bits or
//! lattice coordinates.

mod common;

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use medcube_core::median::{sholander_median, verify_axioms, verify_axioms_by_wall, IntervalIntersection};
use medcube_core::metric::{
    build_exhaustion, cauchy_gap_check, floyd, retract_layer, verify_median_metric, verify_median_metric_matrix,
    Growth, LayeredExhaustion, WeightedWallspace,
};
use medcube_core::models::{self, GridModel, GridSpec};
use medcube_core::wallspace::{check_local_cubulation, CubeComplexSkeleton};
use medcube_core::{Bits, MedianModel, VertexId, VertexSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

// ---------------------------------------------------------------------------
// Oracles on raw bit vectors.

struct Points {
    rows: Vec<Vec<bool>>,
    index: HashMap<Vec<bool>, usize>,
}

impl Points {
    fn of(m: &MedianModel) -> Self {
        let rows: Vec<Vec<bool>> = m.vertices().iter().map(|b| b.iter().collect()).collect();
        let index = rows.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        Points { rows, index }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn maj(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let (x, y, z) = (&self.rows[a], &self.rows[b], &self.rows[c]);
        let m: Vec<bool> = (0..x.len()).map(|i| (x[i] as u8 + y[i] as u8 + z[i] as u8) >= 2).collect();
        self.index.get(&m).copied()
    }

    fn between(&self, x: usize, a: usize, b: usize) -> bool {
        let (x, a, b) = (&self.rows[x], &self.rows[a], &self.rows[b]);
        (0..x.len()).all(|i| x[i] == a[i] || x[i] == b[i])
    }

    fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.between(x, a, b)).collect()
    }

    fn hamming(&self, a: usize, b: usize) -> usize {
        (0..self.rows[a].len()).filter(|&i| self.rows[a][i] != self.rows[b][i]).count()
    }

    fn distance(&self, weights: &[BigRational], a: usize, b: usize) -> BigRational {
        let mut d = BigRational::zero();
        for (i, w) in weights.iter().enumerate() {
            if self.rows[a][i] != self.rows[b][i] {
                d += w;
            }
        }
        d
    }

    /// Number of orientations that agree with the points on every pair of
    /// coordinates, stopping once it exceeds `cap`.
    fn pairwise_consistent(&self, cap: usize) -> usize {
        let n = self.rows.first().map_or(0, Vec::len);
        let mut seen = vec![vec![0u8; n]; n];
        for r in &self.rows {
            for i in 0..n {
                for j in 0..n {
                    seen[i][j] |= 1 << (2 * r[i] as u8 + r[j] as u8);
                }
            }
        }
        let mut single = vec![0u8; n];
        for r in &self.rows {
            for i in 0..n {
                single[i] |= 1 << r[i] as u8;
            }
        }
        fn go(i: usize, n: usize, cur: &mut Vec<bool>, seen: &[Vec<u8>], single: &[u8], count: &mut usize, cap: usize) {
            if *count > cap {
                return;
            }
            if i == n {
                *count += 1;
                return;
            }
            for v in [false, true] {
                if single[i] & (1 << v as u8) == 0 {
                    continue;
                }
                if (0..i).all(|j| seen[j][i] & (1 << (2 * cur[j] as u8 + v as u8)) != 0) {
                    cur.push(v);
                    go(i + 1, n, cur, seen, single, count, cap);
                    cur.pop();
                }
            }
        }
        let mut count = 0;
        go(0, n, &mut Vec::with_capacity(n), &seen, &single, &mut count, cap);
        count
    }
}

fn ids(v: &[usize]) -> Vec<VertexId> {
    v.iter().map(|&i| VertexId(i)).collect()
}

fn set_ids(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v.0).collect()
}

/// Least superset of `s` closed under taking intervals.
fn hull_oracle(p: &Points, s: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; p.len()];
    for &x in s {
        inside[x] = true;
    }
    loop {
        let members: Vec<usize> = (0..p.len()).filter(|&x| inside[x]).collect();
        let mut grew = false;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                for x in 0..p.len() {
                    if !inside[x] && p.between(x, a, b) {
                        inside[x] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return (0..p.len()).filter(|&x| inside[x]).collect();
        }
    }
}

/// Largest set of pairwise crossing coordinates.
fn rank_oracle(p: &Points) -> usize {
    let n = p.rows.first().map_or(0, Vec::len);
    let cross = |i: usize, j: usize| {
        let mut seen = 0u8;
        for r in &p.rows {
            seen |= 1 << (2 * r[i] as u8 + r[j] as u8);
        }
        seen == 0b1111
    };
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && cross(i, j)).collect()).collect();
    fn grow(clique: &mut Vec<usize>, from: usize, n: usize, adj: &[Vec<bool>], best: &mut usize) {
        *best = (*best).max(clique.len());
        for c in from..n {
            if clique.iter().all(|&q| adj[q][c]) {
                clique.push(c);
                grow(clique, c + 1, n, adj, best);
                clique.pop();
            }
        }
    }
    let mut best = 0;
    grow(&mut Vec::new(), 0, n, &adj, &mut best);
    best
}

fn grid(hi: &[i64]) -> GridModel {
    models::l1_grid(&GridSpec::boxed(hi)).expect("grid")
}

fn star(k: usize) -> MedianModel {
    let leaves: Vec<String> = (1..=k).map(|i| format!("l{i}")).collect();
    let edges: Vec<(&str, &str)> = leaves.iter().map(|l| ("c", l.as_str())).collect();
    models::tree_model(&edges).expect("star")
}

// ---------------------------------------------------------------------------
// Criteria.

fn criterion_1() -> Outcome {
    let mut corpus: Vec<(String, MedianModel)> = Vec::new();
    for n in 1..=10 {
        corpus.push((format!("cube-{n}"), models::hypercube(n)));
    }
    for n in [2, 3, 5, 8, 16, 32] {
        corpus.push((format!("z2-{n}"), grid(&[n - 1, n - 1]).model));
    }
    for n in [2, 3, 4, 6, 10] {
        corpus.push((format!("z3-{n}"), grid(&[n - 1, n - 1, n - 1]).model));
    }
    for r in 1..=6 {
        corpus.push((format!("pmq-{r}"), models::plane_minus_quadrant(r).unwrap().model));
    }
    for n in [1, 2, 7, 40] {
        corpus.push((format!("path-{n}"), models::path(n)));
    }
    for k in 1..=6 {
        corpus.push((format!("star-{k}"), star(k)));
    }
    for (i, m) in models::random_models(30, 2, 128, 0xA1).into_iter().enumerate() {
        corpus.push((format!("random-{i}"), m));
    }
    const TABLE_LIMIT: usize = 12;
    let mut tabled = 0;
    let mut largest = 0;
    for (name, m) in &corpus {
        ensure!(m.len() <= 1 << 10, "{name} is too large for the corpus");
        largest = largest.max(m.len());
        let p = Points::of(m);
        let consistent = p.pairwise_consistent(p.len());
        ensure!(
            consistent == p.len(),
            "{name}: {consistent} pairwise-consistent orientations for {} points, so not median-closed",
            p.len()
        );
        ensure!(m.closure_report(7).passed(), "{name}: closure scan failed");
        let by_wall = verify_axioms_by_wall(m);
        ensure!(by_wall.passed() && by_wall.exhaustive, "{name}: wall-projection axiom check failed");
        if p.len() <= TABLE_LIMIT {
            tabled += 1;
            let n = p.len();
            let med = |a: usize, b: usize, c: usize| p.maj(a, b, c).expect("closed");
            let table = m.to_table();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        ensure!(table.get(a, b, c) == med(a, b, c), "{name}: table differs at {a},{b},{c}");
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    ensure!(med(a, a, b) == a, "{name}: majority fails at {a},{b}");
                    for c in 0..n {
                        let abc = med(a, b, c);
                        ensure!(
                            abc == med(b, a, c) && abc == med(a, c, b) && abc == med(c, b, a),
                            "{name}: symmetry fails"
                        );
                        for x in 0..n {
                            ensure!(
                                med(med(a, x, b), x, c) == med(a, x, med(b, x, c)),
                                "{name}: associativity fails"
                            );
                            for y in 0..n {
                                let cxy = med(c, x, y);
                                ensure!(
                                    med(a, b, cxy) == med(med(a, b, c), med(a, b, x), y),
                                    "{name}: distributivity fails"
                                );
                                ensure!(
                                    med(a, b, cxy) == med(med(a, b, c), med(a, b, x), med(a, b, y)),
                                    "{name}: long distributive law fails"
                                );
                            }
                        }
                    }
                }
            }
            ensure!(verify_axioms(&table, 0, 0).passed(), "{name}: table axiom check failed");
        }
    }
    Ok(format!(
        "{} models up to {largest} vertices: closed (2-SAT count = size), all five laws on every wall projection, explicit 5-tuple scan on {tabled} models with <= {TABLE_LIMIT} elements; 0 violations",
        corpus.len()
    ))
}

fn criterion_2() -> Outcome {
    let corpus = models::random_models(25, 16, 64, 0xB2);
    let mut largest = 0;
    for (k, m) in corpus.iter().enumerate() {
        let p = Points::of(m);
        let n = p.len();
        largest = largest.max(n);
        let map = m.interval_map();
        for a in 0..n {
            for b in 0..n {
                ensure!(set_ids(map.get(a, b)) == p.interval(a, b), "model {k}: interval [{a},{b}] differs");
            }
        }
        for a in 0..n {
            ensure!(set_ids(map.get(a, a)) == vec![a], "model {k}: I(a,a) != {{a}}");
            for b in 0..n {
                let iab = map.get(a, b);
                for c in iab.iter() {
                    ensure!(map.get(a, c.0).is_subset(iab), "model {k}: nesting fails at {a},{b},{}", c.0);
                }
                for c in 0..n {
                    let common = map.get(a, b).intersection(map.get(b, c)).intersection(map.get(a, c));
                    ensure!(common.len() == 1, "model {k}: triple intersection of size {}", common.len());
                }
            }
        }
        let labels: Vec<String> = m.ids().map(|v| m.label(v)).collect();
        let rebuilt = sholander_median(&map, labels).map_err(|f| format!("model {k}: {f:?}"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    ensure!(
                        Some(rebuilt.get(a, b, c)) == p.maj(a, b, c),
                        "model {k}: rebuilt median differs at {a},{b},{c}"
                    );
                }
            }
        }
    }
    Ok(format!(
        "{} seeded models (<= {largest} elements): three properties exhaustive, regenerated tables identical",
        corpus.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut corpus = models::random_models(12, 6, 64, 0xC3);
    corpus.push(models::path(9));
    corpus.push(grid(&[4, 3]).model);
    corpus.push(star(4));
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let (mut nonempty, mut empty) = (0, 0);
    while nonempty < 500 {
        let m = corpus.choose(&mut rng).unwrap();
        let p = Points::of(m);
        let q: Vec<usize> = (0..4).map(|_| rng.gen_range(0..p.len())).collect();
        let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
        let ab: HashSet<usize> = p.interval(a, b).into_iter().collect();
        let brute: Vec<usize> = p.interval(c, d).into_iter().filter(|x| ab.contains(x)).collect();
        let got = m
            .interval_intersection((VertexId(a), VertexId(b)), (VertexId(c), VertexId(d)))
            .map_err(|e| e.to_string())?;
        match got {
            IntervalIntersection::Empty => {
                ensure!(brute.is_empty(), "reported empty but brute force has {} points", brute.len());
                empty += 1;
            }
            IntervalIntersection::Interval(iv) => {
                ensure!(!brute.is_empty(), "reported nonempty but brute force is empty");
                ensure!(set_ids(&iv.members) == brute, "members differ from brute force");
                let (ch, dh) = (p.maj(a, b, c).unwrap(), p.maj(a, b, d).unwrap());
                ensure!((iv.a.0, iv.b.0) == (ch, dh), "endpoints are not (abc, abd)");
                ensure!(p.interval(ch, dh) == brute, "[abc, abd] differs from the intersection");
                nonempty += 1;
            }
        }
    }
    ensure!(empty > 0, "no empty case was drawn");
    Ok(format!("{nonempty} nonempty cases equal [abc,abd]; {empty} empty cases detected"))
}

fn criterion_4() -> Outcome {
    let mut corpus = models::random_models(10, 8, 64, 0xD4);
    corpus.push(grid(&[7, 7]).model);
    corpus.push(grid(&[3, 3, 3]).model);
    corpus.push(models::plane_minus_quadrant(3).unwrap().model);
    corpus.push(models::hypercube(6));
    let mut rng = ChaCha8Rng::seed_from_u64(0xD4);
    let mut depth_hist: HashMap<usize, usize> = HashMap::new();
    let mut above = 0;
    for _ in 0..200 {
        let m = corpus.choose(&mut rng).unwrap();
        let p = Points::of(m);
        let k = rng.gen_range(1..=5.min(p.len()));
        let mut s: Vec<usize> = (0..p.len()).collect();
        s.shuffle(&mut rng);
        s.truncate(k);
        s.sort_unstable();
        let (hull, depth) = m.hull(&m.set_of(ids(&s))).map_err(|e| e.to_string())?;
        ensure!(set_ids(&hull) == hull_oracle(&p, &s), "hull of {s:?} differs from the least convex superset");
        *depth_hist.entry(depth).or_default() += 1;
        if depth > m.rank() + 1 {
            above += 1;
        }
    }
    let mut hist: Vec<_> = depth_hist.into_iter().collect();
    hist.sort_unstable();
    Ok(format!(
        "200 seeded subsets match the enumerated hull; depth histogram {hist:?}; depth > rank + 1 in {above} cases"
    ))
}

fn criterion_5() -> Outcome {
    let mut corpus: Vec<MedianModel> = (1..=6).map(models::hypercube).collect();
    corpus.extend((2..=8).map(|n| grid(&[n - 1, n - 1]).model));
    corpus.push(grid(&[2, 2, 2]).model);
    corpus.push(grid(&[3, 3, 3]).model);
    corpus.extend((1..=3).map(|r| models::plane_minus_quadrant(r).unwrap().model));
    corpus.push(star(4));
    corpus.push(models::path(8));
    corpus.extend(models::random_models(15, 4, 64, 0xE5));
    let mut squares = 0u64;
    for (k, m) in corpus.iter().enumerate() {
        let p = Points::of(m);
        let n = p.len();
        let walls = m.wall_count();
        // Brute force on small models: every 4-tuple against the square equations.
        if n <= 16 {
            for q in 0..n * n * n * n {
                let (a, b, c, d) = (q % n, q / n % n, q / (n * n) % n, q / (n * n * n));
                let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                let eqs = p.maj(a, b, c) == Some(b)
                    && p.maj(b, c, d) == Some(c)
                    && p.maj(c, d, a) == Some(d)
                    && p.maj(d, a, b) == Some(a);
                ensure!(
                    m.is_square(ids(&[a, b, c, d]).try_into().unwrap()) == (distinct && eqs),
                    "model {k}: is_square disagrees on ({a},{b},{c},{d})"
                );
            }
        }
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let (ra, rb, rd) = (&p.rows[a], &p.rows[b], &p.rows[d]);
                    let disjoint = (0..walls).all(|i| ra[i] == rb[i] || ra[i] == rd[i]);
                    if a == b || a == d || b == d || !disjoint {
                        continue;
                    }
                    let corner: Vec<bool> = (0..walls).map(|i| if ra[i] != rb[i] { rb[i] } else { rd[i] }).collect();
                    let Some(&c) = p.index.get(&corner) else { continue };
                    squares += 1;
                    let sq = m
                        .square_product_iso([VertexId(a), VertexId(b), VertexId(c), VertexId(d)])
                        .map_err(|e| format!("model {k}: {e}"))?;
                    let side_b = p.interval(a, b);
                    let side_d = p.interval(a, d);
                    let diagonal = p.interval(a, c);
                    ensure!(sq.phi.len() == side_b.len() * side_d.len(), "model {k}: φ has the wrong domain");
                    ensure!(sq.psi.len() == diagonal.len(), "model {k}: ψ has the wrong domain");
                    for &y in &side_b {
                        for &z in &side_d {
                            let x = *sq.phi.get(&(VertexId(y), VertexId(z))).ok_or("φ undefined")?;
                            ensure!(
                                sq.psi.get(&x) == Some(&(VertexId(y), VertexId(z))),
                                "model {k}: ψ∘φ moves ({y},{z})"
                            );
                        }
                    }
                    for &x in &diagonal {
                        let pair = *sq.psi.get(&VertexId(x)).ok_or("ψ undefined")?;
                        ensure!(sq.phi.get(&pair) == Some(&VertexId(x)), "model {k}: φ∘ψ moves {x}");
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} models (<= 64 vertices): φ∘ψ = id and ψ∘φ = id on all {squares} oriented squares",
        corpus.len()
    ))
}

fn criterion_6() -> Outcome {
    let corpus: Vec<(&str, MedianModel)> = vec![
        ("cube-3", models::hypercube(3)),
        ("cube-4", models::hypercube(4)),
        ("cube-5", models::hypercube(5)),
        ("z2-5", grid(&[4, 4]).model),
        ("z3-4", grid(&[3, 3, 3]).model),
    ];
    let (mut spans, mut refused) = (0, 0);
    for (name, m) in &corpus {
        let p = Points::of(m);
        for a in 0..p.len() {
            let nbrs: Vec<usize> = (0..p.len()).filter(|&x| p.hamming(a, x) == 1).collect();
            for mask in 1u32..(1 << nbrs.len()) {
                if mask.count_ones() > 4 {
                    continue;
                }
                let tips: Vec<usize> = (0..nbrs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| nbrs[i]).collect();
                let k = tips.len();
                let flip: Vec<usize> = tips
                    .iter()
                    .map(|&t| (0..p.rows[a].len()).find(|&i| p.rows[a][i] != p.rows[t][i]).unwrap())
                    .collect();
                let expected: Option<Vec<usize>> = (0..1usize << k)
                    .map(|sub| {
                        let mut row = p.rows[a].clone();
                        for i in 0..k {
                            if sub >> i & 1 == 1 {
                                row[flip[i]] = !row[flip[i]];
                            }
                        }
                        p.index.get(&row).copied()
                    })
                    .collect();
                let tip_ids = ids(&tips);
                let got = m.flag_span(VertexId(a), &tip_ids, |i, j| {
                    m.square_face(VertexId(a), tip_ids[i], tip_ids[j])
                });
                match (expected, got) {
                    (Some(cube), Ok(w)) => {
                        let got_map: Vec<usize> = w.vertex_map.iter().map(|v| v.0).collect();
                        ensure!(got_map == cube, "{name}: cube at {a} with tips {tips:?} differs");
                        m.check_cube_embedding(&w).map_err(|e| e.to_string())?;
                        spans += 1;
                    }
                    (None, Err(_)) => refused += 1,
                    (Some(_), Err(e)) => return Err(format!("{name}: flag_span refused a cube: {e}")),
                    (None, Ok(_)) => return Err(format!("{name}: flag_span built a cube that is not there")),
                }
            }
        }
    }
    Ok(format!("{spans} corner/tip configurations (n <= 4) match the enumerated cube; {refused} without a cube refused"))
}

fn criterion_7() -> Outcome {
    let families: Vec<(&str, MedianModel, usize)> = vec![
        ("path-3", models::path(3), 1),
        ("path-6", models::path(6), 1),
        ("star-3", star(3), 1),
        ("star-5", star(5), 1),
        ("pmq-1", models::plane_minus_quadrant(1).unwrap().model, 1),
        ("square", models::hypercube(2), 2),
        ("z2-3", grid(&[2, 2]).model, 2),
        ("pmq-2", models::plane_minus_quadrant(2).unwrap().model, 2),
        ("cube-3", models::hypercube(3), 3),
        ("z3-3", grid(&[2, 2, 2]).model, 3),
        ("cube-4", models::hypercube(4), 4),
    ];
    for (name, m, r) in &families {
        ensure!(rank_oracle(&Points::of(m)) == *r, "{name}: brute-force rank is not {r}");
        ensure!(m.rank() == *r, "{name}: rank() is not {r}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xF7);
    let mut pairs = Vec::new();
    while pairs.len() < 20 {
        let (i, j) = (rng.gen_range(0..families.len()), rng.gen_range(0..families.len()));
        if families[i].1.len() * families[j].1.len() <= 300 {
            pairs.push((i, j));
        }
    }
    let mut sums = Vec::new();
    for (i, j) in pairs {
        let (na, a, ra) = &families[i];
        let (nb, b, rb) = &families[j];
        let prod = models::product(a, b).map_err(|e| format!("{na} x {nb}: {e}"))?;
        let brute = rank_oracle(&Points::of(&prod));
        ensure!(brute == ra + rb, "{na} x {nb}: brute-force rank {brute} != {ra} + {rb}");
        ensure!(prod.rank() == brute, "{na} x {nb}: rank() {} != {brute}", prod.rank());
        sums.push(brute);
    }
    Ok(format!("20 seeded products: rank(AxB) = rank(A) + rank(B), ranks {sums:?}"))
}

fn criterion_8() -> Outcome {
    let mut corpus: Vec<(&str, MedianModel)> = vec![
        ("z2-3", grid(&[2, 2]).model),
        ("cube-3", models::hypercube(3)),
        ("tripod", star(3)),
        ("pmq-2", models::plane_minus_quadrant(2).unwrap().model),
    ];
    corpus.push(("random", models::random_models(1, 12, 24, 0x88).remove(0)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x88);
    let mut triples = 0u64;
    for (name, m) in &corpus {
        let p = Points::of(m);
        let n = p.len();
        for _ in 0..10 {
            let weights: Vec<BigRational> =
                (0..m.wall_count()).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=6))).collect();
            let d: Vec<Vec<BigRational>> =
                (0..n).map(|a| (0..n).map(|b| p.distance(&weights, a, b)).collect()).collect();
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        let between: Vec<usize> = (0..n)
                            .filter(|&x| {
                                d[a][x].clone() + &d[x][b] == d[a][b]
                                    && d[b][x].clone() + &d[x][c] == d[b][c]
                                    && d[a][x].clone() + &d[x][c] == d[a][c]
                            })
                            .collect();
                        ensure!(
                            between.len() == 1 && Some(between[0]) == p.maj(a, b, c),
                            "{name}: triple ({a},{b},{c}) has between set {between:?}"
                        );
                        triples += 1;
                    }
                }
            }
            let ws = WeightedWallspace::new(m.clone(), weights).map_err(|e| e.to_string())?;
            let report = verify_median_metric(&ws).map_err(|e| e.to_string())?;
            ensure!(report.passed(), "{name}: verify_median_metric failed");
        }
    }
    let edges = models::cycle_edges(5);
    let hops = models::graph_distances(5, &edges);
    let d: Vec<Vec<u128>> = hops.iter().map(|r| r.iter().map(|&x| x as u128).collect()).collect();
    let report = verify_median_metric_matrix(&d, None);
    ensure!(!report.passed(), "the 5-cycle passed");
    let w = report.violations.first().ok_or("no witness on the 5-cycle")?;
    let [a, b, c] = w.triple;
    let count = (0..5)
        .filter(|&x| {
            d[a][x] + d[x][b] == d[a][b] && d[b][x] + d[x][c] == d[b][c] && d[a][x] + d[x][c] == d[a][c]
        })
        .count();
    ensure!(count != 1, "witness {:?} has a unique between point", w.triple);
    Ok(format!(
        "{triples} triples over 50 seeded weightings on 5 models have a unique between point equal to the median; 5-cycle fails with witness {:?} ({count} between points)",
        w.triple
    ))
}

fn criterion_9() -> Outcome {
    let corpus: Vec<(&str, MedianModel)> = vec![
        ("z2-4", grid(&[3, 3]).model),
        ("z3-3", grid(&[2, 2, 2]).model),
        ("pmq-2", models::plane_minus_quadrant(2).unwrap().model),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x99);
    let mut cases = 0;
    for (name, m) in &corpus {
        let p = Points::of(m);
        for w in 0..m.wall_count() {
            for n in [2usize, 3, 7] {
                let weights: Vec<BigRational> =
                    (0..m.wall_count()).map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=5))).collect();
                let lambda = weights[w].clone();
                let ws = WeightedWallspace::new(m.clone(), weights.clone()).map_err(|e| e.to_string())?;
                let wall = &m.walls()[w];
                let sub = ws.subdivide_wall(wall, n).map_err(|e| e.to_string())?;
                let sm = sub.model();
                let copies = sub.copies_of(wall);
                ensure!(copies.len() == n, "{name}: {wall} has {} copies, expected {n}", copies.len());
                for &c in &copies {
                    ensure!(
                        *sub.weight(c) == lambda.clone() / BigRational::from_integer(n.into()),
                        "{name}: copy {} of {wall} does not weigh λ/{n}",
                        sm.walls()[c]
                    );
                }
                let sp = Points::of(sm);
                let image: Vec<usize> =
                    m.ids().map(|v| sm.resolve(&m.label(v)).map(|x| x.0)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
                for a in 0..p.len() {
                    for b in a + 1..p.len() {
                        let before = p.distance(&weights, a, b);
                        let after = sp.distance(sub.weights(), image[a], image[b]);
                        ensure!(before == after, "{name}: d({a},{b}) changed after subdividing {wall} into {n}");
                    }
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} subdivisions (n in {{2,3,7}}) on grid models: all original distances unchanged, copies weigh λ/n"))
}

/// Union of unit cubes meeting a box: the box grown by one, clipped.
fn grow_box(lo: &[i64], hi: &[i64], side: i64) -> (Vec<i64>, Vec<i64>) {
    (
        lo.iter().map(|&l| (l - 1).max(0)).collect(),
        hi.iter().map(|&h| (h + 1).min(side - 1)).collect(),
    )
}

fn in_box(p: &[i64], lo: &[i64], hi: &[i64]) -> bool {
    p.iter().zip(lo).zip(hi).all(|((x, l), h)| l <= x && x <= h)
}

fn box_distance(p: &[i64], lo: &[i64], hi: &[i64]) -> i64 {
    p.iter().zip(lo).zip(hi).map(|((&x, &l), &h)| (l - x).max(0) + (x - h).max(0)).sum()
}

fn neighbours(p: &[i64], side: i64) -> Vec<(Vec<i64>, usize, i64)> {
    let mut out = Vec::new();
    for axis in 0..p.len() {
        for step in [-1, 1] {
            let mut q = p.to_vec();
            q[axis] += step;
            if (0..side).contains(&q[axis]) {
                // The wall crossed is `axis >= max(p, q)`.
                let t = p[axis].max(q[axis]);
                out.push((q, axis, t));
            }
        }
    }
    out
}

fn axis_wall(axis: usize, t: i64) -> String {
    format!("{}>={t}", ["x", "y", "z"][axis])
}

fn box_set(g: &GridModel, lo: &[i64], hi: &[i64]) -> VertexSet {
    g.model.set_of(g.model.ids().filter(|&v| in_box(g.coords(v), lo, hi)))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);
    let windows: [(usize, i64); 2] = [(2, 12), (3, 7)];
    let mut min_gap: Option<i64> = None;
    let mut cases = 0;
    for (dims, side) in windows {
        let g = grid(&vec![side - 1; dims]);
        let m = &g.model;
        let ws = WeightedWallspace::unit(m.clone());
        for _ in 0..25 {
            let (mut lo, mut hi) = (Vec::new(), Vec::new());
            for _ in 0..dims {
                let (a, b) = (rng.gen_range(0..side), rng.gen_range(0..side));
                lo.push(a.min(b));
                hi.push(a.max(b).min(a.min(b) + 3));
            }
            let k = box_set(&g, &lo, &hi);
            let t = ws.thicken(&k).map_err(|e| e.to_string())?;
            let (nlo, nhi) = grow_box(&lo, &hi, side);
            ensure!(t.n == box_set(&g, &nlo, &nhi), "N differs from the grown box {nlo:?}..{nhi:?}");
            let frontier: Vec<VertexId> = m
                .ids()
                .filter(|&v| {
                    in_box(g.coords(v), &nlo, &nhi)
                        && neighbours(g.coords(v), side).iter().any(|(q, _, _)| !in_box(q, &nlo, &nhi))
                })
                .collect();
            ensure!(t.frontier == m.set_of(frontier.iter().copied()), "frontier differs");
            let mut expected_walls: Vec<String> = Vec::new();
            for axis in 0..dims {
                if nlo[axis] < lo[axis] {
                    expected_walls.push(axis_wall(axis, lo[axis]));
                }
                if nhi[axis] > hi[axis] {
                    expected_walls.push(axis_wall(axis, hi[axis] + 1));
                }
            }
            expected_walls.sort();
            let mut got_walls: Vec<String> = t.new_walls.iter().map(|&w| m.walls()[w].clone()).collect();
            got_walls.sort();
            ensure!(got_walls == expected_walls, "new walls {got_walls:?}, expected {expected_walls:?}");
            let gap = frontier.iter().map(|&v| box_distance(g.coords(v), &lo, &hi)).min();
            ensure!(
                t.gap == gap.map(BigRational::from_integer_i64),
                "gap {:?}, brute force {gap:?}",
                t.gap
            );
            if let Some(gp) = gap {
                ensure!(gp >= 1, "frontier within distance {gp} of K");
                min_gap = Some(min_gap.map_or(gp, |x: i64| x.min(gp)));
            }
            // No edge path from K reaches the frontier without crossing a new wall.
            let new: HashSet<String> = expected_walls.into_iter().collect();
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            let mut queue: VecDeque<Vec<i64>> = k.iter().map(|v| g.coords(v).to_vec()).collect();
            seen.extend(queue.iter().cloned());
            while let Some(p) = queue.pop_front() {
                let id = g.id(&p);
                ensure!(!t.frontier.contains(id), "frontier vertex {p:?} reached without a new wall");
                for (q, axis, th) in neighbours(&p, side) {
                    if !new.contains(&axis_wall(axis, th)) && seen.insert(q.clone()) {
                        queue.push_back(q);
                    }
                }
            }
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} seeded boxes in Z^2 and Z^3 windows: N, frontier, new walls and d(B(N),K) match brute force; min gap {}; every frontier-to-K path crosses a new wall",
        min_gap.map_or("-".into(), |g| g.to_string())
    ))
}

trait FromI64 {
    fn from_integer_i64(x: i64) -> Self;
}

impl FromI64 for BigRational {
    fn from_integer_i64(x: i64) -> Self {
        BigRational::from_integer(x.into())
    }
}

/// Distance from `x` to a set, brute force over its members.
fn dist_to(p: &Points, w: &[BigRational], x: usize, set: &VertexSet) -> Option<BigRational> {
    set.iter().map(|k| p.distance(w, x, k.0)).min()
}

fn check_exhaustion_items(exh: &LayeredExhaustion, g: &GridModel, side: i64) -> Result<Vec<usize>, String> {
    let m = &g.model;
    let p = Points::of(m);
    let fin = exh.ws.weights();
    let mut sizes = Vec::new();
    for i in 1..=exh.len() {
        let layer = exh.layer(i);
        sizes.push(layer.len());
        let members = set_ids(layer);
        ensure!(hull_oracle(&p, &members) == members, "K_{i} is not convex");
        if i > 1 {
            ensure!(exh.layer(i - 1).is_subset(layer), "K_{} is not inside K_{i}", i - 1);
        }
        for (j, &u) in members.iter().enumerate() {
            for &v in &members[j + 1..] {
                ensure!(
                    p.distance(&exh.stage_weights[i - 1], u, v) == p.distance(fin, u, v),
                    "distance in K_{i} changes after layer {i}"
                );
            }
        }
        if i < exh.len() {
            let next = exh.layer(i + 1);
            let lo: Vec<i64> = (0..g.dimension()).map(|a| next.iter().map(|v| g.coords(v)[a]).min().unwrap()).collect();
            let hi: Vec<i64> = (0..g.dimension()).map(|a| next.iter().map(|v| g.coords(v)[a]).max().unwrap()).collect();
            for v in next.iter() {
                let boundary = neighbours(g.coords(v), side).iter().any(|(q, _, _)| !in_box(q, &lo, &hi));
                if boundary {
                    let d = dist_to(&p, fin, v.0, layer).unwrap();
                    ensure!(d >= BigRational::one(), "frontier of K_{} is {d} from K_{i}", i + 1);
                }
            }
        }
    }
    for mm in 1..exh.len() {
        let outer = exh.layer(mm + 1);
        for x in exh.layer(exh.len()).iter().filter(|&x| !outer.contains(x)) {
            let d = dist_to(&p, fin, x.0, exh.layer(mm)).unwrap();
            ensure!(d >= BigRational::one(), "vertex {} outside K_{} is {d} from K_{mm}", m.label(x), mm + 1);
        }
    }
    Ok(sizes)
}

fn criterion_11() -> Outcome {
    let g = grid(&[10, 10]);
    let m = &g.model;
    let seed = m.set_of([g.id(&[5, 5])]);
    let mut lines = Vec::new();
    for scale in [rat(1, 1), rat(1, 5)] {
        let ws = WeightedWallspace::new(m.clone(), vec![scale.clone(); m.wall_count()]).map_err(|e| e.to_string())?;
        let exh = build_exhaustion(&ws, &seed, 3, &Growth::Onion).map_err(|e| e.to_string())?;
        let sizes = check_exhaustion_items(&exh, &g, 11)?;
        ensure!(sizes == [1, 9, 25], "layer sizes {sizes:?}");
        let report = cauchy_gap_check(&exh);
        ensure!(report.passed(), "cauchy_gap_check failed: {:?}", report.witness);
        lines.push(format!("ambient weight {scale}: layers {sizes:?}, cauchy ok over {}", report.checked));
    }
    Ok(format!("11x11, L=3: convex nested layers, restriction and unit gaps exact; {}", lines.join("; ")))
}

fn criterion_12() -> Outcome {
    let target: BigRational = (1..=5).map(|i| rat(1, 1 << i)).fold(BigRational::zero(), |a, b| a + b);
    ensure!(target == rat(31, 32), "sum of 2^-i is not 31/32");
    let mut report = Vec::new();

    let path = models::path(6);
    let pseed = path.set_of([VertexId(0), VertexId(1)]);
    let pf = floyd(&WeightedWallspace::unit(path.clone()), &pseed, 5, &Growth::Onion).map_err(|e| e.to_string())?;
    let pp = Points::of(&path);
    let ray = pp.distance(pf.exhaustion.ws.weights(), 0, 5);
    ensure!(ray == target, "path ray 0 -> 5 has length {ray}");
    report.push(format!("path ray {ray}"));

    let g = grid(&[9, 9]);
    let m = &g.model;
    let seed = box_set(&g, &[4, 4], &[5, 5]);
    let gf = floyd(&WeightedWallspace::unit(m.clone()), &seed, 5, &Growth::Onion).map_err(|e| e.to_string())?;
    let gp = Points::of(m);
    let rays: [([i64; 2], [i64; 2]); 4] = [([4, 5], [9, 5]), ([5, 4], [5, 9]), ([5, 5], [0, 5]), ([5, 5], [5, 0])];
    for (from, to) in rays {
        let d = gp.distance(gf.exhaustion.ws.weights(), g.id(&from).0, g.id(&to).0);
        ensure!(d == target, "Z^2 ray {from:?} -> {to:?} has length {d}");
    }
    report.push("4 Z^2 rays 31/32".into());

    for (name, f, pts) in [("path", &pf, &pp), ("Z^2", &gf, &gp)] {
        let exh = &f.exhaustion;
        for w in 0..exh.ws.model().wall_count() {
            if let Some(i) = exh.registry[w] {
                ensure!(*exh.ws.weight(w) == rat(1, 1 << i), "{name}: layer-{i} wall weighs {}", exh.ws.weight(w));
            }
        }
        let seed_set = exh.layer(1);
        for x in exh.layer(exh.len()).iter() {
            let d = dist_to(pts, exh.ws.weights(), x.0, seed_set).unwrap();
            ensure!(d < BigRational::one(), "{name}: d(x, K_1) = {d} is not below 1");
        }
        let fin = exh.ws.weights();
        let mut pairs = 0u64;
        for i in 1..exh.len() {
            let r = retract_layer(exh, i).map_err(|e| e.to_string())?;
            let inner = exh.layer(i);
            for &(v, img) in &r.map {
                let best = inner.iter().min_by_key(|k| pts.hamming(v.0, k.0)).unwrap();
                ensure!(
                    img == best && inner.iter().all(|k| pts.between(img.0, v.0, k.0)),
                    "{name}: retraction of {} is not its gate",
                    v.0
                );
            }
            for (a, &(u, ru)) in r.map.iter().enumerate() {
                for &(v, rv) in &r.map[a + 1..] {
                    ensure!(
                        pts.distance(fin, ru.0, rv.0) <= pts.distance(fin, u.0, v.0),
                        "{name}: retraction {i} stretches ({}, {})",
                        u.0,
                        v.0
                    );
                    pairs += 1;
                }
            }
        }
        report.push(format!("{name} retractions non-expanding on {pairs} pairs"));
    }
    Ok(format!("L=5: {}", report.join(", ")))
}

/// The three local conditions at `v` computed from the raw point set.
fn local_oracle(p: &Points, v: usize, n: usize) -> (bool, bool, bool) {
    let row = &p.rows[v];
    let dirs: Vec<usize> = (0..row.len())
        .filter(|&i| {
            let mut r = row.clone();
            r[i] = !r[i];
            p.index.contains_key(&r)
        })
        .collect();
    let is_simplex = |s: &[usize]| {
        (0..1usize << s.len()).all(|sub| {
            let mut r = row.clone();
            for (j, &d) in s.iter().enumerate() {
                if sub >> j & 1 == 1 {
                    r[d] = !r[d];
                }
            }
            p.index.contains_key(&r)
        })
    };
    let subsets: Vec<Vec<usize>> = (0..1usize << dirs.len())
        .map(|mask| (0..dirs.len()).filter(|&j| mask >> j & 1 == 1).map(|j| dirs[j]).collect())
        .collect();
    let simplices: Vec<&Vec<usize>> = subsets.iter().filter(|s| is_simplex(s)).collect();
    let tops: Vec<&&Vec<usize>> = simplices.iter().filter(|s| s.len() == n).collect();
    let sub = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let contained = simplices.iter().all(|s| tops.iter().any(|t| sub(s, t)));
    let cofacets = simplices
        .iter()
        .filter(|s| s.len() + 1 == n)
        .all(|s| tops.iter().filter(|t| sub(s, t)).count() == 2);
    let flag = subsets.iter().all(|s| {
        let pairwise = s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| is_simplex(&[a, b])));
        !pairwise || is_simplex(s)
    });
    (contained, cofacets, flag)
}

fn criterion_13() -> Outcome {
    let mut interior = 0;
    let mut boundary = 0;
    for (dims, side) in [(2usize, 6i64), (3, 4)] {
        let g = grid(&vec![side - 1; dims]);
        let skel = g.model.build_complex();
        let p = Points::of(&g.model);
        for v in g.model.ids() {
            let r = check_local_cubulation(&skel, skel.resolve(&g.model.label(v)).map_err(|e| e.to_string())?, dims)
                .map_err(|e| e.to_string())?;
            let oracle = local_oracle(&p, v.0, dims);
            ensure!(
                (r.contained_in_n_cube, r.two_cofacets, r.flag) == oracle,
                "Z^{dims} vertex {}: report {:?} vs brute force {oracle:?}",
                g.model.label(v),
                (r.contained_in_n_cube, r.two_cofacets, r.flag)
            );
            let on_boundary = g.coords(v).iter().any(|&c| c == 0 || c == side - 1);
            if on_boundary {
                ensure!(!r.two_cofacets, "boundary vertex {} passes condition (2)", g.model.label(v));
                boundary += 1;
            } else {
                ensure!(r.passed(), "interior vertex {} fails", g.model.label(v));
                interior += 1;
            }
        }
    }
    let walls: Vec<String> = ["e1", "e2", "e3"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<(Option<String>, Bits)> = ["000", "100", "010", "001", "110", "101", "011"]
        .iter()
        .map(|s| (Some(s.to_string()), s.parse::<Bits>().unwrap()))
        .collect();
    let hollow = CubeComplexSkeleton::from_points(walls, rows.clone()).map_err(|e| e.to_string())?;
    let corner = hollow.resolve("000").map_err(|e| e.to_string())?;
    let r = check_local_cubulation(&hollow, corner, 2).map_err(|e| e.to_string())?;
    let rows_only: Vec<Vec<bool>> = rows.iter().map(|(_, b)| b.iter().collect()).collect();
    let hp = Points {
        index: rows_only.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect(),
        rows: rows_only,
    };
    ensure!(local_oracle(&hp, 0, 2).2 == r.flag, "hollow corner: flag differs from brute force");
    ensure!(!r.flag, "hollow corner passes the flag condition");
    Ok(format!(
        "{interior} interior vertices pass (true,true,true); {boundary} boundary vertices fail (2); hollow corner fails flag with witness {:?}; all reports match brute force",
        r.flag_witness.unwrap_or_default()
    ))
}

fn criterion_14() -> Outcome {
    let g = models::plane_minus_quadrant(4).map_err(|e| e.to_string())?;
    let in_x = |p: &[i64]| (-4..=4).contains(&p[0]) && (-4..=4).contains(&p[1]) && !(p[0] <= 0 && p[1] <= 0);
    let pts: Vec<Vec<i64>> = g.model.ids().map(|v| g.coords(v).to_vec()).collect();
    let expected = (-4..=4).flat_map(|x| (-4..=4).map(move |y| [x, y])).filter(|p| in_x(p)).count();
    ensure!(pts.len() == expected, "{} points, expected {expected}", pts.len());
    let med = |a: i64, b: i64, c: i64| a + b + c - a.min(b).min(c) - a.max(b).max(c);
    let mut triples = 0u64;
    for i in 0..pts.len() {
        for j in i..pts.len() {
            for k in j..pts.len() {
                let m = [
                    med(pts[i][0], pts[j][0], pts[k][0]),
                    med(pts[i][1], pts[j][1], pts[k][1]),
                ];
                ensure!(in_x(&m), "median of {:?}, {:?}, {:?} leaves X", pts[i], pts[j], pts[k]);
                triples += 1;
            }
        }
    }
    let closure = g.model.closure_report(0);
    ensure!(closure.passed() && closure.exhaustive, "closure scan did not pass exhaustively");
    ensure!(g.point(&[-1, 0]).is_none(), "(-1,0) is in X");
    ensure!(g.point(&[-1, 1]).is_some(), "(-1,1) is not in X");
    Ok(format!(
        "9x9 window, {} points: {triples} lattice triples and {} bit triples closed; (-1,0) not in X, (-1,1) in X",
        pts.len(),
        closure.triples_checked
    ))
}

fn criterion_15() -> Outcome {
    let golden = common::check_goldens();
    ensure!(golden.is_empty(), "golden mismatches: {golden:?}");
    let missing = common::uncovered_subcommands();
    ensure!(missing.is_empty(), "subcommands without golden files: {missing:?}");
    let round = common::round_trip_failures();
    ensure!(round.is_empty(), "round-trip failures: {round:?}");
    let unstable = common::nondeterministic_cases();
    ensure!(unstable.is_empty(), "nondeterministic cases: {unstable:?}");
    Ok(format!(
        "{} golden cases over all 20 subcommands match; parse/serialize round trip is the identity; repeated runs identical",
        common::CASES.len()
    ))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("axiom suite", criterion_1),
        ("Sholander round trip", criterion_2),
        ("interval intersection", criterion_3),
        ("hull oracle", criterion_4),
        ("square product isomorphism", criterion_5),
        ("flag lemma", criterion_6),
        ("rank additivity", criterion_7),
        ("median metric", criterion_8),
        ("subdivision invariance", criterion_9),
        ("thickening guarantee", criterion_10),
        ("exhaustion", criterion_11),
        ("Floyd weighting", criterion_12),
        ("local cubulation checker", criterion_13),
        ("plane minus quadrant", criterion_14),
        ("CLI goldens", criterion_15),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = t.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 15 passed in {:.1} s", 15 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
