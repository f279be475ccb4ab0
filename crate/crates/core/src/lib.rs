//! Record statistics of fractional Brownian motion.
//!
//! The crate is organised bottom-up:
//!
//! * [`hurst`], [`fgn`], [`generators`]: exact synthesis of fBm on the grid
//!   `t_i = i/n`, with a circulant-embedding sampler, a Durbin–Levinson sampler and
//!   a dense Cholesky oracle.
//! * [`records`]: record-set extraction and dyadic box counting.
//! * [`estimator`]: least-squares fits, box-counting dimension and α-values of coverings.
//! * [`experiments`]: seeded, worker-count independent Monte Carlo runs of the
//!   scaling laws (dimension sweep, argmax, record-in-interval, survival, sup tail).

pub mod error;
pub mod estimator;
pub mod experiments;
pub mod fgn;
pub mod generators;
pub mod hurst;
pub mod normal;
pub mod records;
pub mod rng;

pub use error::{Error, Result};
pub use estimator::{
    alpha_value, default_fit_range, dimension_from_counts, estimate_dimension, ols_slope, Covering, DimensionEstimate,
    OlsFit,
};


pub use experiments::{ExperimentConfig, ExperimentKind, ExperimentReport};
pub use fgn::{fgn_autocovariance, FgnAutocovariance};
pub use generators::{
    generate, generate_cholesky_oracle, CholeskyOracle, generate_circulant, generate_circulant_pair, generate_durbin_levinson, CirculantGenerator,
    FbmPath, GeneratorId,
};
pub use hurst::HurstParameter;
pub use normal::normal_tail;
pub use records::{box_count, box_count_curve, extract_records, BoxCountCurve, BoxCountEntry, RecordSet};

