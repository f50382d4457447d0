//! Brute force over functions with values on a uniform grid.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::maximal::MaximalOperator;
use crate::number::{Number, Rational};

pub const MAX_GRID_LEVELS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub value: Number,
    /// Grid coordinates of the best function: its values are `witness / levels`.
    pub witness: Vec<u32>,
    pub levels: usize,
    pub evaluated: u64,
}

/// Largest ratio over all non-constant `f` with values in
/// `{0, 1/levels, ..., 1}`. Exact for `p = 1`, floating point otherwise.
/// Ties keep the first function in lexicographic order.
pub fn grid_oracle(g: &Graph, p: f64, levels: usize) -> Result<GridResult> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveExponent(p));
    }
    if levels == 0 || levels > MAX_GRID_LEVELS {
        return Err(Error::InvalidParameter(format!("levels must be in 1..={MAX_GRID_LEVELS}, got {levels}")));
    }
    let n = g.order();
    let total = (levels as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > 50_000_000 {
        return Err(Error::SizeLimit { n, limit: n - 1 });
    }
    let op = MaximalOperator::new(g)?;
    let exact = p == 1.0;
    let mut f = vec![0u32; n];
    let mut best_exact: Option<(i128, i128, Vec<u32>)> = None;
    let mut best_float: Option<(f64, Vec<u32>)> = None;
    let mut evaluated = 0u64;
    loop {
        if f.iter().any(|&x| x != f[0]) {
            evaluated += 1;
            if exact {
                let fi: Vec<i128> = f.iter().map(|&x| x as i128).collect();
                let (a, b) = op.ratio_scaled(&fi).expect("small grid values cannot overflow");
                if best_exact.as_ref().is_none_or(|(ba, bb, _)| a * bb > ba * b) {
                    best_exact = Some((a, b, f.clone()));
                }
            } else {
                let ff: Vec<f64> = f.iter().map(|&x| x as f64 / levels as f64).collect();
                let r = op.ratio_f64_unchecked(&ff, p).unwrap_or(f64::NEG_INFINITY);
                if best_float.as_ref().is_none_or(|(b, _)| r > *b) {
                    best_float = Some((r, f.clone()));
                }
            }
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                let (value, witness) = match (best_exact, best_float) {
                    (Some((a, b, w)), _) => (Number::Exact(Rational::new(BigInt::from(a), BigInt::from(b))), w),
                    (None, Some((r, w))) => (Number::Float(r), w),
                    (None, None) => return Err(Error::ConstantFunction),
                };
                return Ok(GridResult { value, witness, levels, evaluated });
            }
            k -= 1;
            if (f[k] as usize) < levels {
                f[k] += 1;
                break;
            }
            f[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;
    use crate::number::rat;

    #[test]
    fn triangle_and_cycle() {
        let r = grid_oracle(&named_graph("K", &[3]).unwrap(), 1.0, 4).unwrap();
        assert_eq!(r.value, Number::Exact(rat(2, 3)));
        let r = grid_oracle(&named_graph("C", &[4]).unwrap(), 1.0, 6).unwrap();
        assert_eq!(r.value, Number::Exact(rat(3, 4)));
    }

    #[test]
    fn binary_grid_is_indicator_type() {
        let r = grid_oracle(&named_graph("P", &[4]).unwrap(), 1.0, 1).unwrap();
        assert_eq!(r.evaluated, 14);
        assert!(r.witness.iter().all(|&x| x <= 1));
    }

    #[test]
    fn float_exponent() {
        let r = grid_oracle(&named_graph("K", &[4]).unwrap(), 2.0, 3).unwrap();
        assert!((r.value.to_f64() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn limits() {
        let g = named_graph("K", &[3]).unwrap();
        assert!(grid_oracle(&g, 1.0, 0).is_err());
        assert!(grid_oracle(&g, 1.0, 13).is_err());
        assert!(grid_oracle(&named_graph("K", &[1]).unwrap(), 1.0, 2).is_err());
    }
}
