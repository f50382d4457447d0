//! The centred Hardy–Littlewood maximal operator on a graph and the
//! p-variation of vertex functions.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BallTable, Graph};
use crate::number::{format_rational, parse_rational, rational_to_f64, Number, Rational, Scalar};

/// Per-vertex values, exact or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexFunction {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl VertexFunction {
    /// Parses `"1/2,0,0,0"`; decimals are read exactly.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexFunction::Exact(values))
    }

    pub fn len(&self) -> usize {
        match self {
            VertexFunction::Exact(v) => v.len(),
            VertexFunction::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_nonneg(&self) -> bool {
        match self {
            VertexFunction::Exact(v) => v.iter().all(|q| !q.is_negative()),
            VertexFunction::Float(v) => v.iter().all(|&x| x >= 0.0),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            VertexFunction::Exact(v) => v.iter().map(rational_to_f64).collect(),
            VertexFunction::Float(v) => v.clone(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            VertexFunction::Exact(v) => v.iter().map(format_rational).collect(),
            VertexFunction::Float(v) => v.iter().map(|&x| crate::number::format_float(x)).collect(),
        }
    }
}

impl std::fmt::Display for VertexFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_strings().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalProfile<T> {
    pub mvalues: Vec<T>,
    /// Smallest radius at which the maximum is attained.
    pub argmax_radius: Vec<usize>,
}

/// `M_G f` with ties broken towards the smallest radius.
pub fn maximal_function<T: Scalar>(balls: &BallTable, f: &[T]) -> MaximalProfile<T> {
    let n = balls.order();
    assert_eq!(f.len(), n, "function length must equal graph order");
    let abs: Vec<T> = f.iter().map(Scalar::abs).collect();
    let mut mvalues = Vec::with_capacity(n);
    let mut argmax_radius = Vec::with_capacity(n);
    for v in 0..n {
        let mut best: Option<(T, usize)> = None;
        for (r, ball) in balls.radii(v) {
            let sum = ball.iter().fold(T::zero(), |acc, &w| acc.add(&abs[w]));
            let avg = sum.div(&T::from_usize(ball.len()));
            if best.as_ref().is_none_or(|(b, _)| avg > *b) {
                best = Some((avg, r));
            }
        }
        let (m, r) = best.expect("every ball table has radius 0");
        mvalues.push(m);
        argmax_radius.push(r);
    }
    MaximalProfile { mvalues, argmax_radius }
}

/// `sum_e |f(u) - f(v)|^p` for a positive integer exponent, exact on
/// rationals.
pub fn variation_power<T: Scalar>(g: &Graph, f: &[T], p: u32) -> T {
    assert!(p >= 1);
    g.edges().iter().fold(T::zero(), |acc, &(u, v)| {
        let d = f[u].sub(&f[v]).abs();
        let mut term = d.clone();
        for _ in 1..p {
            term = term.mul(&d);
        }
        acc.add(&term)
    })
}

/// `Var_p f = (sum_e |f(u) - f(v)|^p)^(1/p)` in floating point.
pub fn p_variation_f64(g: &Graph, f: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let s: f64 = g.edges().iter().map(|&(u, v)| (f[u] - f[v]).abs().powf(p)).sum();
    Ok(if p == 1.0 { s } else { s.powf(1.0 / p) })
}

/// Tagged p-variation: exact when `p == 1` and `f` is exact.
pub fn p_variation(g: &Graph, f: &VertexFunction, p: f64) -> Result<Number> {
    check_exponent(p)?;
    check_len(g.order(), f.len())?;
    match f {
        VertexFunction::Exact(v) if p == 1.0 => Ok(Number::Exact(variation_power(g, v, 1))),
        _ => Ok(Number::Float(p_variation_f64(g, &f.to_f64(), p)?)),
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveExponent(p))
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// A connected graph with its ball table, ready to evaluate maximal
/// functions and variation ratios repeatedly.
#[derive(Clone, Debug)]
pub struct MaximalOperator {
    graph: Graph,
    balls: BallTable,
    /// lcm(1..=n): every ball average times this is an integer for
    /// integer-valued f.
    scale: i128,
}

impl MaximalOperator {
    pub fn new(g: &Graph) -> Result<Self> {
        let balls = g.balls()?;
        let scale = (1..=g.order() as i128).fold(1i128, |acc, k| acc.lcm(&k));
        Ok(Self { graph: g.clone(), balls, scale })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn balls(&self) -> &BallTable {
        &self.balls
    }

    pub fn apply<T: Scalar>(&self, f: &[T]) -> Result<MaximalProfile<T>> {
        check_len(self.graph.order(), f.len())?;
        Ok(maximal_function(&self.balls, f))
    }

    /// `Var(M f) / Var(f)` for `p = 1`, exactly.
    pub fn ratio_exact(&self, f: &[Rational]) -> Result<Rational> {
        check_len(self.graph.order(), f.len())?;
        let den = variation_power(&self.graph, f, 1);
        if den.is_zero() {
            return Err(Error::ConstantFunction);
        }
        let m = maximal_function(&self.balls, f);
        Ok(variation_power(&self.graph, &m.mvalues, 1) / den)
    }

    /// `(sum |Δ M f|^p / sum |Δ f|^p)` for a positive integer `p`, exactly.
    /// This is the p-th power of the variation ratio.
    pub fn ratio_power_exact(&self, f: &[Rational], p: u32) -> Result<Rational> {
        check_len(self.graph.order(), f.len())?;
        let den = variation_power(&self.graph, f, p);
        if den.is_zero() {
            return Err(Error::ConstantFunction);
        }
        let m = maximal_function(&self.balls, f);
        Ok(variation_power(&self.graph, &m.mvalues, p) / den)
    }

    pub fn ratio_f64(&self, f: &[f64], p: f64) -> Result<f64> {
        check_exponent(p)?;
        check_len(self.graph.order(), f.len())?;
        self.ratio_f64_unchecked(f, p).ok_or(Error::ConstantFunction)
    }

    /// Float ratio without argument validation; `None` for constant `f`.
    pub(crate) fn ratio_f64_unchecked(&self, f: &[f64], p: f64) -> Option<f64> {
        let edges = self.graph.edges();
        let den: f64 = edges.iter().map(|&(u, v)| (f[u] - f[v]).abs().powf(p)).sum();
        if den <= 0.0 {
            return None;
        }
        let m = maximal_function(&self.balls, f).mvalues;
        let num: f64 = edges.iter().map(|&(u, v)| (m[u] - m[v]).abs().powf(p)).sum();
        let r = num / den;
        Some(if p == 1.0 { r } else { r.powf(1.0 / p) })
    }

    /// Integer fast path for `p = 1`: returns the ratio as a reduced
    /// fraction `(num, den)`. `None` when `f` is constant or the machine
    /// integers overflow; callers then fall back to [`Self::ratio_exact`].
    pub fn ratio_scaled(&self, f: &[i128]) -> Option<(i128, i128)> {
        let n = self.graph.order();
        if f.len() != n {
            return None;
        }
        let mut scaled_m = Vec::with_capacity(n);
        for v in 0..n {
            let mut best: Option<i128> = None;
            for (_, ball) in self.balls.radii(v) {
                let mut sum = 0i128;
                for &w in ball {
                    sum = sum.checked_add(f[w].checked_abs()?)?;
                }
                let avg = sum.checked_mul(self.scale)? / ball.len() as i128;
                if best.is_none_or(|b| avg > b) {
                    best = Some(avg);
                }
            }
            scaled_m.push(best?);
        }
        let mut num = 0i128;
        let mut den = 0i128;
        for &(u, v) in self.graph.edges() {
            num = num.checked_add((scaled_m[u] - scaled_m[v]).checked_abs()?)?;
            den = den.checked_add(f[u].checked_sub(f[v])?.checked_abs()?)?;
        }
        if den == 0 {
            return None;
        }
        let den = den.checked_mul(self.scale)?;
        let g = num.gcd(&den);
        Some((num / g, den / g))
    }
}

/// Tagged variation ratio: exact for `p = 1` on exact input.
pub fn variation_ratio(g: &Graph, f: &VertexFunction, p: f64) -> Result<Number> {
    check_exponent(p)?;
    let op = MaximalOperator::new(g)?;
    match f {
        VertexFunction::Exact(v) if p == 1.0 => Ok(Number::Exact(op.ratio_exact(v)?)),
        _ => Ok(Number::Float(op.ratio_f64(&f.to_f64(), p)?)),
    }
}

/// JSON shape of a maximal-function evaluation.
#[derive(Debug, Serialize)]
pub struct ProfileReport {
    pub mvalues: Vec<String>,
    pub argmax_radius: Vec<usize>,
}

pub fn profile_report(g: &Graph, f: &VertexFunction) -> Result<ProfileReport> {
    let op = MaximalOperator::new(g)?;
    Ok(match f {
        VertexFunction::Exact(v) => {
            let m = op.apply(v)?;
            ProfileReport {
                mvalues: m.mvalues.iter().map(format_rational).collect(),
                argmax_radius: m.argmax_radius,
            }
        }
        VertexFunction::Float(v) => {
            let m = op.apply(v)?;
            ProfileReport {
                mvalues: m.mvalues.iter().map(|&x| crate::number::format_float(x)).collect(),
                argmax_radius: m.argmax_radius,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;
    use crate::number::{rat, rat_int};

    fn exact(g: &Graph, f: &[Rational]) -> Vec<Rational> {
        maximal_function(&g.balls().unwrap(), f).mvalues
    }

    #[test]
    fn complete_graph_indicator() {
        for n in 3..7 {
            let g = named_graph("K", &[n]).unwrap();
            let mut f = vec![rat_int(0); n];
            f[n - 1] = rat_int(1);
            let m = exact(&g, &f);
            let mut expect = vec![rat(1, n as i64); n];
            expect[n - 1] = rat_int(1);
            assert_eq!(m, expect);
            assert_eq!(variation_power(&g, &f, 1), rat_int(n as i64 - 1));
        }
    }

    #[test]
    fn constant_function() {
        let g = named_graph("C", &[5]).unwrap();
        let f = vec![rat(7, 3); 5];
        assert_eq!(exact(&g, &f), f);
        assert_eq!(variation_power(&g, &f, 1), rat_int(0));
        let op = MaximalOperator::new(&g).unwrap();
        assert!(matches!(op.ratio_exact(&f), Err(Error::ConstantFunction)));
    }

    #[test]
    fn path_endpoint_indicator() {
        let g = named_graph("P", &[4]).unwrap();
        let f = [rat_int(1), rat_int(0), rat_int(0), rat_int(0)];
        let m = maximal_function(&g.balls().unwrap(), &f);
        assert_eq!(m.mvalues, vec![rat_int(1), rat(1, 3), rat(1, 4), rat(1, 4)]);
        assert_eq!(m.argmax_radius, vec![0, 1, 2, 3]);
    }

    #[test]
    fn cycle_witness_has_unit_variation() {
        let g = named_graph("C", &[4]).unwrap();
        let f = [rat(1, 2), rat_int(0), rat_int(0), rat_int(0)];
        assert_eq!(variation_power(&g, &f, 1), rat_int(1));
    }

    #[test]
    fn known_ratios() {
        let k3 = named_graph("K", &[3]).unwrap();
        let ind3 = VertexFunction::parse("0,0,1").unwrap();
        assert_eq!(variation_ratio(&k3, &ind3, 1.0).unwrap(), Number::Exact(rat(2, 3)));
        let k4 = named_graph("K", &[4]).unwrap();
        let ind4 = VertexFunction::parse("0,0,0,1").unwrap();
        assert_eq!(variation_ratio(&k4, &ind4, 1.0).unwrap(), Number::Exact(rat(3, 4)));
        for p in [0.3, 0.5, 2.0, 3.0] {
            let r = variation_ratio(&k4, &ind4, p).unwrap().to_f64();
            assert!((r - 0.75).abs() < 1e-12, "p={p}: {r}");
        }
        let k2 = named_graph("K", &[2]).unwrap();
        let f = VertexFunction::parse("0,1").unwrap();
        assert_eq!(variation_ratio(&k2, &f, 1.0).unwrap(), Number::Exact(rat(1, 2)));
    }

    #[test]
    fn exponent_and_length_errors() {
        let g = named_graph("P", &[3]).unwrap();
        let f = VertexFunction::parse("1,0,0").unwrap();
        assert!(matches!(p_variation(&g, &f, 0.0), Err(Error::NonPositiveExponent(_))));
        assert!(matches!(p_variation(&g, &f, -1.0), Err(Error::NonPositiveExponent(_))));
        let short = VertexFunction::parse("1,0").unwrap();
        assert!(matches!(p_variation(&g, &short, 1.0), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn p_variation_tags() {
        let g = named_graph("P", &[3]).unwrap();
        let f = VertexFunction::parse("1,0,1/2").unwrap();
        assert_eq!(p_variation(&g, &f, 1.0).unwrap(), Number::Exact(rat(3, 2)));
        let v2 = p_variation(&g, &f, 2.0).unwrap().to_f64();
        assert!((v2 - (1.25f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scaled_path_matches_exact() {
        let g = named_graph("paw", &[]).unwrap();
        let op = MaximalOperator::new(&g).unwrap();
        let f = [3i128, 0, 5, 2];
        let (n, d) = op.ratio_scaled(&f).unwrap();
        let fq: Vec<Rational> = f.iter().map(|&x| rat_int(x as i64)).collect();
        assert_eq!(rat(n as i64, d as i64), op.ratio_exact(&fq).unwrap());
        assert_eq!(op.ratio_scaled(&[1, 1, 1, 1]), None);
    }

    #[test]
    fn json_profile() {
        let g = named_graph("P", &[4]).unwrap();
        let f = VertexFunction::parse("1,0,0,0").unwrap();
        let json = serde_json::to_string(&profile_report(&g, &f).unwrap()).unwrap();
        assert_eq!(json, r#"{"mvalues":["1","1/3","1/4","1/4"],"argmax_radius":[0,1,2,3]}"#);
    }
}
