//! graph6 text encoding, single-byte size field only (`n <= 62`).

use super::Graph;
use crate::error::{Error, Result};

const MAX_N: usize = 62;

/// Upper-triangle bit order used by graph6: column by column.
fn bit_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.order();
    assert!(n <= MAX_N, "graph6 emission supports n <= {MAX_N}");
    let mut out = String::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, j) in bit_positions(n) {
        acc = (acc << 1) | u8::from(g.has_edge(i, j));
        filled += 1;
        if filled == 6 {
            out.push((acc + 63) as char);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let Some((&head, body)) = bytes.split_first() else {
        return Err(Error::Graph6("empty input".into()));
    };
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
    }
    if head == 126 {
        return Err(Error::Graph6("multi-byte size field (n > 62) is not supported".into()));
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(Error::Graph6("graph with no vertices".into()));
    }
    let nbits = n * (n - 1) / 2;
    let need = nbits.div_ceil(6);
    if body.len() != need {
        return Err(Error::Graph6(format!(
            "expected {need} data bytes for n={n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (nbits..need * 6).any(bit) {
        return Err(Error::Graph6("nonzero padding bits".into()));
    }
    let edges = bit_positions(n)
        .enumerate()
        .filter(|&(k, _)| bit(k))
        .map(|(_, e)| e);
    Graph::new(n, edges)
}
