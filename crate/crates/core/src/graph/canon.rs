//! Canonical labelling and automorphism groups for small graphs.
//!
//! Vertices are first split by iterated degree refinement, which is
//! isomorphism invariant; the canonical labelling is then the
//! lexicographically largest adjacency bit string over all orderings that
//! respect the refined cells.

use super::{emit_graph6, Graph};
use crate::error::{Error, Result};

pub const DEFAULT_CANON_LIMIT: usize = 8;

/// Stable colouring by iterated neighbour-colour refinement. Colours are
/// numbered in an isomorphism-invariant order.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        color = sigs
            .iter()
            .map(|s| distinct.binary_search(s).unwrap())
            .collect();
        if distinct.len() == classes {
            return color;
        }
        classes = distinct.len();
    }
}

fn cells(color: &[usize]) -> Vec<Vec<usize>> {
    let k = color.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (v, &c) in color.iter().enumerate() {
        out[c].push(v);
    }
    out
}

fn adjacency_bits(g: &Graph) -> Vec<u64> {
    (0..g.order())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Adjacency code of the ordering `order` (position -> vertex), most
/// significant bit first in graph6 column order.
fn code_of(adj: &[u64], order: &[usize]) -> u128 {
    let n = order.len();
    let mut code = 0u128;
    for j in 1..n {
        let row = adj[order[j]];
        for &oi in &order[..j] {
            code = (code << 1) | u128::from(row >> oi & 1);
        }
    }
    code
}

/// Visits every ordering that lists the cells in sequence, permuting
/// vertices inside each cell.
fn for_each_ordering(cells: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    let mut cell_perms: Vec<Vec<usize>> = cells.to_vec();
    let n: usize = cells.iter().map(Vec::len).sum();
    let mut order = Vec::with_capacity(n);
    // Heap's algorithm per cell, odometer across cells.
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut a = items.to_vec();
        let k = a.len();
        let mut c = vec![0; k];
        out.push(a.clone());
        let mut i = 0;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(a.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }
    let all: Vec<Vec<Vec<usize>>> = cell_perms.iter_mut().map(|c| permutations(c)).collect();
    let mut idx = vec![0usize; all.len()];
    loop {
        order.clear();
        for (c, &i) in all.iter().zip(&idx) {
            order.extend_from_slice(&c[i]);
        }
        visit(&order);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < all[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Canonical relabelling of `g` and the permutation (old vertex -> new
/// vertex) that produces it.
pub fn canonical_relabel(g: &Graph) -> Result<(Graph, Vec<usize>)> {
    canonical_relabel_with_limit(g, DEFAULT_CANON_LIMIT)
}

pub(crate) fn canonical_relabel_with_limit(g: &Graph, limit: usize) -> Result<(Graph, Vec<usize>)> {
    let n = g.order();
    if n > limit || n > 16 {
        return Err(Error::SizeLimit { n, limit: limit.min(16) });
    }
    let adj = adjacency_bits(g);
    let cells = cells(&refine(g));
    let mut best: Option<(u128, Vec<usize>)> = None;
    for_each_ordering(&cells, |order| {
        let code = code_of(&adj, order);
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            best = Some((code, order.to_vec()));
        }
    });
    let (_, order) = best.expect("at least one ordering");
    let mut perm = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    Ok((g.relabel(&perm), perm))
}

/// Isomorphism-invariant label: the graph6 code of the canonical
/// relabelling.
pub fn canonical_form(g: &Graph) -> Result<String> {
    Ok(emit_graph6(&canonical_relabel(g)?.0))
}

/// The full automorphism group as explicit permutations (`perm[v]` is the
/// image of `v`), identity first, in lexicographic order.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    let color = refine(g);
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        v: usize,
        n: usize,
        color: &[usize],
        adj: &[Vec<bool>],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == n {
            out.push(image.clone());
            return;
        }
        for t in 0..n {
            if used[t] || color[t] != color[v] {
                continue;
            }
            if (0..v).any(|u| adj[u][v] != adj[image[u]][t]) {
                continue;
            }
            image[v] = t;
            used[t] = true;
            extend(v + 1, n, color, adj, image, used, out);
            used[t] = false;
        }
    }
    extend(0, n, &color, &adj, &mut image, &mut used, &mut out);
    out
}

/// Orbit representative (smallest member) for every vertex.
pub fn orbits(g: &Graph) -> Vec<usize> {
    let group = automorphisms(g);
    (0..g.order())
        .map(|v| group.iter().map(|perm| perm[v]).min().unwrap_or(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_ordering(&[(0..n).collect()], |o| out.push(o.to_vec()));
        out
    }

    #[test]
    fn path_relabelings_share_a_form() {
        let p4 = named_graph("P", &[4]).unwrap();
        let form = canonical_form(&p4).unwrap();
        for perm in all_perms(4) {
            assert_eq!(canonical_form(&p4.relabel(&perm)).unwrap(), form);
        }
        let s4 = named_graph("S", &[4]).unwrap();
        assert_ne!(canonical_form(&s4).unwrap(), form);
    }

    #[test]
    fn triangle_has_one_form() {
        let k3 = named_graph("K", &[3]).unwrap();
        let forms: std::collections::BTreeSet<String> = all_perms(3)
            .iter()
            .map(|p| canonical_form(&k3.relabel(p)).unwrap())
            .collect();
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphisms(&named_graph("C", &[4]).unwrap()).len(), 8);
        for (n, fact) in [(3, 6), (4, 24), (5, 120)] {
            assert_eq!(automorphisms(&named_graph("K", &[n]).unwrap()).len(), fact);
        }
    }

    #[test]
    fn paw_automorphisms_match_exhaustive_check() {
        let paw = named_graph("paw", &[]).unwrap();
        let brute = all_perms(4)
            .into_iter()
            .filter(|p| paw.relabel(p) == paw)
            .count();
        assert_eq!(brute, 2);
        assert_eq!(automorphisms(&paw).len(), brute);
    }

    #[test]
    fn star_orbits() {
        let s5 = named_graph("S", &[5]).unwrap();
        assert_eq!(orbits(&s5), vec![0, 1, 1, 1, 1]);
        let p4 = named_graph("P", &[4]).unwrap();
        assert_eq!(orbits(&p4), vec![0, 1, 1, 0]);
    }

    #[test]
    fn size_limit() {
        let p9 = named_graph("P", &[9]).unwrap();
        assert!(matches!(canonical_form(&p9), Err(Error::SizeLimit { .. })));
    }
}
