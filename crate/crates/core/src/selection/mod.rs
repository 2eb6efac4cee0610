//! l1-regularized selection of significant neurons: an exact LARS lasso
//! path, a cross-validated penalty, and bootstrap consensus (Bolasso).

mod bolasso;
mod cv;
mod lars;

pub use bolasso::{bolasso_select, bootstrap_supports, consensus_select, support_frequencies, BolassoConfig, Penalty, SelectionResult};
pub use cv::{choose_penalty_cv, cross_validate_penalty, CvCurve};
pub use lars::{coefficients_at, lasso_path, LassoPath};
