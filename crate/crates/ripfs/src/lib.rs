//! File formats, configuration and the experiment harness around
//! [`ripfs_core`].
//!
//! - [`table`]: delimited tables with `name,kind` schema sidecars.
//! - [`format`]: text formats for rule sets, PCA and ARD models.
//! - [`config`]: the TOML run configuration.
//! - [`experiment`]: training, degradation, scoring and artifact output.

pub mod config;
pub mod experiment;
pub mod format;
pub mod table;
