//! Isomorphism-free enumeration of small connected graphs.

use std::collections::{BTreeMap, BTreeSet};

use super::canon::canonical_relabel;
use super::{emit_graph6, Graph};
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_ORDER: usize = 7;

fn check_range(n: usize) -> Result<()> {
    if (1..=MAX_ENUMERATION_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}"
        )))
    }
}

/// One canonical representative per isomorphism class of connected graphs
/// on `n` vertices, ordered by edge count and then canonical form.
///
/// Uses the exhaustive edge-subset scan up to six vertices and edge-by-edge
/// augmentation of canonical representatives at seven.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>> {
    check_range(n)?;
    if n <= 6 {
        enumerate_connected_brute(n)
    } else {
        enumerate_connected_augment(n)
    }
}

fn sorted(classes: BTreeMap<(usize, String), Graph>) -> Vec<Graph> {
    classes.into_values().collect()
}

/// Scans all `2^(n(n-1)/2)` labelled graphs.
pub fn enumerate_connected_brute(n: usize) -> Result<Vec<Graph>> {
    check_range(n)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut classes = BTreeMap::new();
    for mask in 0u64..1 << pairs.len() {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let g = Graph::new(n, pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))?;
        if !g.is_connected() {
            continue;
        }
        let (canon, _) = canonical_relabel(&g)?;
        classes.entry((canon.size(), emit_graph6(&canon))).or_insert(canon);
    }
    Ok(sorted(classes))
}

/// Grows all graphs one edge at a time, keeping only canonical
/// representatives at each edge count, then filters for connectivity.
pub fn enumerate_connected_augment(n: usize) -> Result<Vec<Graph>> {
    check_range(n)?;
    let empty = Graph::new(n, [])?;
    let mut layer: BTreeSet<String> = BTreeSet::from([emit_graph6(&empty)]);
    let mut reps: BTreeMap<String, Graph> = BTreeMap::from([(emit_graph6(&empty), empty)]);
    let mut classes = BTreeMap::new();
    let max_edges = n * (n - 1) / 2;
    for edges in 0..=max_edges {
        for code in &layer {
            let g = &reps[code];
            if g.is_connected() {
                classes.insert((edges, code.clone()), g.clone());
            }
        }
        if edges == max_edges {
            break;
        }
        let mut next = BTreeSet::new();
        let mut next_reps = BTreeMap::new();
        for code in &layer {
            let g = &reps[code];
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let h = Graph::new(n, g.edges().iter().copied().chain([(u, v)]))?;
                    let (canon, _) = canonical_relabel(&h)?;
                    let c = emit_graph6(&canon);
                    if next.insert(c.clone()) {
                        next_reps.insert(c, canon);
                    }
                }
            }
        }
        layer = next;
        reps = next_reps;
    }
    Ok(sorted(classes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_connected(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn augmentation_agrees_with_brute_force() {
        for n in 1..=6 {
            let a = enumerate_connected_augment(n).unwrap();
            let b = enumerate_connected_brute(n).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn seven_vertices() {
        assert_eq!(enumerate_connected(7).unwrap().len(), 853);
    }

    #[test]
    fn order_is_by_edge_count() {
        let gs = enumerate_connected(5).unwrap();
        assert!(gs.windows(2).all(|w| w[0].size() <= w[1].size()));
        assert_eq!(gs[0].size(), 4);
        assert_eq!(gs.last().unwrap().size(), 10);
    }

    #[test]
    fn out_of_range() {
        assert!(enumerate_connected(0).is_err());
        assert!(enumerate_connected(8).is_err());
    }
}
