use serde::Serialize;

use crate::graph::{emit_graph6, Graph};
use crate::maximal::{variation_ratio, VertexFunction};
use crate::number::{format_float, recognize_fraction, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// The value is the constant, certified by exhaustive search.
    Exact,
    /// The value is attained by the witness; the constant may be larger.
    NumericLowerBound,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::NumericLowerBound => "numeric-lower-bound",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub regions_explored: u64,
    pub regions_pruned: u64,
    pub regions_feasible: u64,
    pub candidates: u64,
    pub lp_solves: u64,
    pub time_ms: u64,
    /// Set when a region or time budget stopped the search early.
    pub truncated: bool,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, o: &SearchStats) {
        self.regions_explored += o.regions_explored;
        self.regions_pruned += o.regions_pruned;
        self.regions_feasible += o.regions_feasible;
        self.candidates += o.candidates;
        self.lp_solves += o.lp_solves;
        self.truncated |= o.truncated;
    }
}

/// Value of the variation constant of one graph with the function that
/// attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCertificate {
    pub graph: Graph,
    pub p: f64,
    pub value: Number,
    pub extremizer: VertexFunction,
    pub mode: Mode,
    pub stats: SearchStats,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    graph6: Option<String>,
    n: usize,
    edges: usize,
    p: f64,
    value: String,
    value_as_fraction: Option<String>,
    mode: Mode,
    extremizer: Vec<String>,
    stats: &'a SearchStats,
}

impl ConstantCertificate {
    pub fn graph6(&self) -> Option<String> {
        (self.graph.order() <= 62).then(|| emit_graph6(&self.graph))
    }

    /// `p/q` for exact values, otherwise a nearby fraction with denominator
    /// at most 120 when one lies within `1e-9`.
    pub fn value_as_fraction(&self) -> Option<String> {
        match &self.value {
            Number::Exact(q) => Some(crate::number::format_rational(q)),
            Number::Float(x) => recognize_fraction(*x, 120, 1e-9).map(|(p, q)| {
                if q == 1 {
                    p.to_string()
                } else {
                    format!("{p}/{q}")
                }
            }),
        }
    }

    pub fn value_string(&self) -> String {
        match &self.value {
            Number::Exact(q) => crate::number::format_rational(q),
            Number::Float(x) => format_float(*x),
        }
    }

    /// Re-evaluates the witness from scratch and compares: exact equality
    /// for exact values, `1e-9` otherwise.
    pub fn validate(&self) -> bool {
        match (variation_ratio(&self.graph, &self.extremizer, self.p), &self.value) {
            (Ok(Number::Exact(a)), Number::Exact(b)) => a == *b,
            (Ok(a), b) => (a.to_f64() - b.to_f64()).abs() <= 1e-9,
            (Err(_), _) => false,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CertificateJson {
            graph6: self.graph6(),
            n: self.graph.order(),
            edges: self.graph.size(),
            p: self.p,
            value: self.value_string(),
            value_as_fraction: self.value_as_fraction(),
            mode: self.mode,
            extremizer: self.extremizer.to_strings(),
            stats: &self.stats,
        })
        .expect("certificate serializes")
    }
}
