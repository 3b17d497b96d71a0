use crate::bits::VertexId;
use crate::error::Result;
use crate::median::MedianModel;

/// Wall classes up to this count are searched by plain subset enumeration.
const EXHAUSTIVE_RANK_CLASSES: usize = 16;

impl MedianModel {
    /// The largest `k` such that a median `k`-cube embeds in the model,
    /// computed as the largest family of pairwise-crossing walls.
    pub fn rank(&self) -> usize {
        let classes = self.wall_classes();
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let k = reps.len();
        let mut adjacency = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let cross = self.walls_cross(reps[i], reps[j]);
                adjacency[i][j] = cross;
                adjacency[j][i] = cross;
            }
        }
        if self.len() == 1 {
            return 0;
        }
        if k <= EXHAUSTIVE_RANK_CLASSES {
            max_clique_exhaustive(&adjacency)
        } else {
            max_clique_bron_kerbosch(&adjacency)
        }
    }

    /// The rank of the interval `[a, b]` as a median algebra in its own right.
    pub fn rank_interval(&self, a: VertexId, b: VertexId) -> Result<usize> {
        let members = self.interval(a, b)?.members;
        Ok(self.restrict(&members)?.rank())
    }
}

fn max_clique_exhaustive(adjacency: &[Vec<bool>]) -> usize {
    let k = adjacency.len();
    let masks: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j == i || adjacency[i][j])
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    let mut best = 0;
    for subset in 0u32..(1u32 << k) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        let clique = (0..k)
            .filter(|&i| subset & (1 << i) != 0)
            .all(|i| subset & !masks[i] == 0);
        if clique {
            best = size;
        }
    }
    best
}

fn max_clique_bron_kerbosch(adjacency: &[Vec<bool>]) -> usize {
    fn expand(adj: &[Vec<bool>], r: usize, mut p: Vec<usize>, mut x: Vec<usize>, best: &mut usize) {
        if p.is_empty() && x.is_empty() {
            *best = (*best).max(r);
            return;
        }
        if r + p.len() <= *best {
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
            .expect("p or x nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in candidates {
            let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
            expand(adj, r + 1, np, nx, best);
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut best = 0;
    expand(adjacency, 0, (0..adjacency.len()).collect(), Vec::new(), &mut best);
    best
}
