//! Reference-signal interval design for OFDM integrated sensing and
//! communication: sensing bounds, channel-estimation rate, the weighted
//! design problem and Monte-Carlo validation.

// `!(x > 0.0)` guards are kept so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod comm;
pub mod config;
pub mod error;
pub mod optim;
pub mod quad;
pub mod report;
pub mod scenario;
pub mod sensing;
pub mod sim;

pub use config::{make_pattern, load_config, ReCounting, RsPattern, SystemConfig};
pub use error::{Error, Result};
