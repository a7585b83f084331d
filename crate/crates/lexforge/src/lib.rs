//! File formats, reports, figures and the end-to-end pipeline around
//! [`lexforge_core`].

pub mod config;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use config::{Overrides, RunConfig};
pub use error::{LexError, Result};
pub use lexforge_core as core;
pub use pipeline::{BoxScore, ModelChoice, Workdir};
