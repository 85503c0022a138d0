//! File formats, caching and the verification battery behind the `plr`
//! command-line tool.
//!
//! * [`cache`]: append-only text cache of computed counts;
//! * [`checkpoint`]: binary snapshots of Sade level databases;
//! * [`blocktable`]: block tables saved for reuse;
//! * [`engine`]: method dispatch, size limits and threading;
//! * [`fixtures`]: published reference tables;
//! * [`format`]: table, CSV and JSON output;
//! * [`verify`]: congruence, cross-method and parastrophe checks.

pub mod blocktable;
pub mod cache;
pub mod checkpoint;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod verify;

pub use error::{CliError, CliResult};
