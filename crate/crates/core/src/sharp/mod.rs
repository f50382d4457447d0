//! The variation constant `sup Var_p(M f) / Var_p(f)` of a graph.

mod certificate;
mod exact;
mod numeric;
mod oracle;
mod survey;

pub use certificate::{ConstantCertificate, Mode, SearchStats};
pub use exact::{exact_constant_p1, exact_value, ExactOptions, DEFAULT_EXACT_LIMIT, HARD_EXACT_LIMIT};
pub use numeric::{numeric_lower_bound, NumericOptions};
pub use oracle::{grid_oracle, GridResult, MAX_GRID_LEVELS};
pub use survey::{constant, survey, value_multiset, SurveyMode, SurveyRow};
