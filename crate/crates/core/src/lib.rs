pub mod config;
pub mod error;
pub mod gammafns;
pub mod incbeta;
pub mod qframework;
pub mod quad;
pub mod quantile;
pub mod report;
pub mod series;
pub mod sweep;
pub mod verify;

pub use config::ToleranceConfig;
pub use error::{Error, Result};
pub use incbeta::{log_beta, reg_inc_beta, reflect, BetaParams};
pub use quantile::{quantile, QuantileResult};
pub use report::{CheckRecord, Status, VerificationReport};
pub use sweep::{run_sweep, Scale, SweepRow, SweepSpec};
pub use verify::{Suite, VerifyOptions};
