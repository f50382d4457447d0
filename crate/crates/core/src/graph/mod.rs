//! Finite simple undirected graphs and their metric structure.

mod canon;
mod enumerate;
mod graph6;
mod named;

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use canon::{automorphisms, canonical_form, canonical_relabel, orbits, DEFAULT_CANON_LIMIT};
pub use enumerate::{enumerate_connected, enumerate_connected_augment, enumerate_connected_brute};
pub use graph6::{emit_graph6, parse_graph6};
pub use named::{named_graph, parse_graph_spec};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(min, max)` pairs in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("a graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("duplicate edge {}-{}", w[0].0, w[0].1)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { n, edges: list, adj })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("a permutation preserves simplicity")
    }

    /// Hop distance from `src` to every vertex; `None` for unreachable.
    pub fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances(&self) -> Result<DistanceTable> {
        DistanceTable::new(self)
    }

    pub fn balls(&self) -> Result<BallTable> {
        Ok(BallTable::new(&self.distances()?))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}{v}")?;
        }
        write!(f, "])")
    }
}

/// All-pairs hop distances of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceTable {
    n: usize,
    d: Vec<u32>,
    ecc: Vec<u32>,
}

impl DistanceTable {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.order();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            for x in g.bfs(s) {
                d.push(x.ok_or(Error::Disconnected)?);
            }
        }
        let ecc = (0..n).map(|v| *d[v * n..(v + 1) * n].iter().max().unwrap()).collect();
        Ok(Self { n, d, ecc })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn eccentricity(&self, v: usize) -> u32 {
        self.ecc[v]
    }

    pub fn eccentricities(&self) -> &[u32] {
        &self.ecc
    }

    pub fn diameter(&self) -> u32 {
        self.ecc.iter().copied().max().unwrap_or(0)
    }
}

/// Closed balls `B(v, r)` for every vertex and every radius up to the
/// vertex's eccentricity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallTable {
    balls: Vec<Vec<Vec<usize>>>,
}

impl BallTable {
    pub fn new(dist: &DistanceTable) -> Self {
        let n = dist.order();
        let balls = (0..n)
            .map(|v| {
                let ecc = dist.eccentricity(v) as usize;
                let mut layers = vec![Vec::new(); ecc + 1];
                for w in 0..n {
                    layers[dist.get(v, w) as usize].push(w);
                }
                let mut acc = Vec::new();
                layers
                    .into_iter()
                    .map(|layer| {
                        acc.extend(layer);
                        acc.sort_unstable();
                        acc.clone()
                    })
                    .collect()
            })
            .collect();
        Self { balls }
    }

    pub fn order(&self) -> usize {
        self.balls.len()
    }

    /// Largest admissible radius at `v` (its eccentricity).
    pub fn max_radius(&self, v: usize) -> usize {
        self.balls[v].len() - 1
    }

    pub fn ball(&self, v: usize, r: usize) -> &[usize] {
        let layers = &self.balls[v];
        &layers[r.min(layers.len() - 1)]
    }

    pub fn size(&self, v: usize, r: usize) -> usize {
        self.ball(v, r).len()
    }

    pub fn radii(&self, v: usize) -> impl Iterator<Item = (usize, &[usize])> {
        self.balls[v].iter().enumerate().map(|(r, b)| (r, b.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
        assert!(Graph::new(0, []).is_err());
    }

    #[test]
    fn edges_are_canonical() {
        let g = Graph::new(4, [(3, 2), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn disconnected_distance_is_an_error() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(!g.is_connected());
        assert!(matches!(g.distances(), Err(Error::Disconnected)));
    }

    #[test]
    fn path_and_complete_distances() {
        let p4 = named_graph("P", &[4]).unwrap();
        let d = p4.distances().unwrap();
        assert_eq!(d.get(0, 3), 3);
        assert_eq!(d.eccentricities(), &[3, 2, 2, 3]);
        let k4 = named_graph("K", &[4]).unwrap();
        let d = k4.distances().unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(d.get(u, v), u32::from(u != v));
            }
        }
    }

    #[test]
    fn ball_sizes_on_small_families() {
        let c4 = named_graph("C", &[4]).unwrap().balls().unwrap();
        for v in 0..4 {
            let sizes: Vec<usize> = c4.radii(v).map(|(_, b)| b.len()).collect();
            assert_eq!(sizes, vec![1, 3, 4]);
        }
        let s4 = named_graph("S", &[4]).unwrap().balls().unwrap();
        let sizes: Vec<usize> = s4.radii(0).map(|(_, b)| b.len()).collect();
        assert_eq!(sizes, vec![1, 4]);
        for n in 2..7 {
            let kn = named_graph("K", &[n]).unwrap().balls().unwrap();
            for v in 0..n {
                let sizes: Vec<usize> = kn.radii(v).map(|(_, b)| b.len()).collect();
                assert_eq!(sizes, vec![1, n]);
            }
        }
    }

    #[test]
    fn ball_lookup_clamps_past_eccentricity() {
        let p3 = named_graph("P", &[3]).unwrap().balls().unwrap();
        assert_eq!(p3.ball(1, 5), &[0, 1, 2]);
        assert_eq!(p3.max_radius(0), 2);
    }
}
