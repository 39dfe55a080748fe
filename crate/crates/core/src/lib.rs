//! Time-elastic averaging of time series.
//!
//! DTW with path recovery, the positive-definite KDTW kernel, alignment
//! matrix averages, the DBA / KDBA / iKDBA / pairwise and progressive KDTW
//! averages, a pattern-search preimage centroid and a nearest-centroid
//! evaluation harness.

pub mod averaging;
pub mod elastic;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod io;
pub mod params;
pub mod preimage;
pub mod series;

pub use averaging::{CentroidResult, InertiaMeasure, PairOrdering};
pub use elastic::{AlignmentPath, AmaMatrix, KernelValue};
pub use error::{Error, Result};
pub use eval::{EvalReport, Method, RepresentativeSet};
pub use fixtures::{synth_fixtures, Fixture};
pub use params::{KernelParams, DEFAULT_NU_GRID};
pub use preimage::PreimageConfig;
pub use series::{LabeledDataset, TimeSeries};
