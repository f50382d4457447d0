//! Constants of many graphs at once.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::certificate::ConstantCertificate;
use super::exact::{exact_constant_p1, ExactOptions};
use super::numeric::{numeric_lower_bound, NumericOptions};
use crate::error::Result;
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub enum SurveyMode {
    Exact(ExactOptions),
    Numeric(NumericOptions),
}

#[derive(Debug)]
pub struct SurveyRow {
    pub graph: Graph,
    /// Failures are kept per graph rather than aborting the survey.
    pub result: std::result::Result<ConstantCertificate, String>,
}

pub fn constant(g: &Graph, p: f64, mode: &SurveyMode) -> Result<ConstantCertificate> {
    match mode {
        SurveyMode::Exact(o) if p == 1.0 => exact_constant_p1(g, o),
        SurveyMode::Exact(_) => Err(crate::Error::InvalidParameter(format!(
            "exact mode needs p = 1, got {p}; use numeric mode"
        ))),
        SurveyMode::Numeric(o) => numeric_lower_bound(g, p, o),
    }
}

/// One row per graph, in input order regardless of thread count.
pub fn survey(graphs: &[Graph], p: f64, mode: &SurveyMode) -> Vec<SurveyRow> {
    graphs
        .par_iter()
        .map(|g| SurveyRow { graph: g.clone(), result: constant(g, p, mode).map_err(|e| e.to_string()) })
        .collect()
}

/// Multiplicity of every reported value string.
pub fn value_multiset(rows: &[SurveyRow]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for row in rows {
        if let Ok(c) = &row.result {
            *out.entry(c.value_as_fraction().unwrap_or_else(|| c.value_string())).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_connected;

    #[test]
    fn four_vertex_survey() {
        let rows = survey(&enumerate_connected(4).unwrap(), 1.0, &SurveyMode::Exact(ExactOptions::default()));
        assert_eq!(rows.len(), 6);
        assert_eq!(value_multiset(&rows), BTreeMap::from([("3/4".to_string(), 6)]));
    }

    #[test]
    fn errors_are_collected() {
        let gs = vec![crate::graph::named_graph("P", &[8]).unwrap(), crate::graph::named_graph("P", &[3]).unwrap()];
        let rows = survey(&gs, 1.0, &SurveyMode::Exact(ExactOptions::default()));
        assert!(rows[0].result.is_err());
        assert!(rows[1].result.is_ok());
        let rows = survey(&gs[1..], 2.0, &SurveyMode::Exact(ExactOptions::default()));
        assert!(rows[0].result.is_err());
    }
}
