use std::collections::VecDeque;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use crate::tree::BallRegion;

const RESAMPLE_CAP: u64 = 10_000;

/// A finite simple graph for running local algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGraph {
    adjacency: Vec<Vec<usize>>,
    seed: Option<u64>,
}

impl FiniteGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInput(format!("bad edge ({a}, {b}) for {n} vertices")));
            }
            if adjacency[a].contains(&b) {
                return Err(Error::InvalidInput(format!("repeated edge ({a}, {b})")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { adjacency, seed: None })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::from_edges(n, &edges).expect("complete graph edges are valid")
    }

    /// The region as a graph; vertex `i` is `region.vertices()[i]`.
    pub fn from_region(region: &BallRegion) -> Self {
        Self::from_edges(region.len(), region.edges()).expect("region edges are simple")
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Vertices within distance `radius` of `v`, `v` included, in BFS order.
    pub fn ball(&self, v: usize, radius: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut out = vec![v];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        while let Some(x) = queue.pop_front() {
            if dist[x] == radius {
                continue;
            }
            for &y in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// All balls of the given radius, indexed by center.
    pub fn balls(&self, radius: usize) -> Vec<Vec<usize>> {
        (0..self.len()).map(|v| self.ball(v, radius)).collect()
    }

    /// Number of cycles of each length `3..=max_len` (index `len - 3`).
    pub fn count_short_cycles(&self, max_len: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max_len.saturating_sub(2)];
        let mut path = Vec::with_capacity(max_len);
        let mut on_path = vec![false; self.len()];
        for start in 0..self.len() {
            path.push(start);
            on_path[start] = true;
            self.extend_cycles(start, max_len, &mut path, &mut on_path, &mut counts);
            on_path[start] = false;
            path.pop();
        }
        // each cycle is found once per direction from its least vertex
        counts.iter().map(|c| c / 2).collect()
    }

    fn extend_cycles(
        &self,
        start: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        counts: &mut [u64],
    ) {
        let last = *path.last().unwrap();
        for &next in &self.adjacency[last] {
            if next == start && path.len() >= 3 {
                counts[path.len() - 3] += 1;
            } else if next > start && !on_path[next] && path.len() < max_len {
                path.push(next);
                on_path[next] = true;
                self.extend_cycles(start, max_len, path, on_path, counts);
                on_path[next] = false;
                path.pop();
            }
        }
    }
}

/// Uniform simple `d`-regular graph on `n` vertices from the configuration
/// model: random pairings of `n d` half-edges, redrawn until simple.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<FiniteGraph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidInput(format!("n·d = {} is odd", n * d)));
    }
    if n <= d {
        return Err(Error::InvalidInput(format!("need n > d, got n={n}, d={d}")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for attempt in 0..RESAMPLE_CAP {
        let mut rng = stream(seed, Purpose::Graph, attempt);
        stubs.sort_unstable();
        stubs.shuffle(&mut rng);
        let mut adjacency = vec![Vec::with_capacity(d); n];
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || adjacency[a].contains(&b) {
                continue 'attempt;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        return Ok(FiniteGraph {
            adjacency,
            seed: Some(seed),
        });
    }
    Err(Error::InvalidInput(format!(
        "no simple pairing in {RESAMPLE_CAP} attempts for n={n}, d={d}"
    )))
}
