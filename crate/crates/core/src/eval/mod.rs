//! Nearest-representative classification: class medoids and centroids,
//! leave-one-out stiffness selection, error rates and rank summaries.

mod classify;
mod loo;
mod medoid;
mod report;

pub use classify::{
    build_representatives, classify_1nc, error_rate, BuildOptions, Method, RepresentativeSet,
};
pub use loo::{loo_errors, loo_tune_nu, loo_tune_nu_with};
pub use medoid::medoid;
pub use report::{average_rank, ranks, EvalReport, ReportRow};
