//! File formats, multi-threaded drivers and the command-line front end for
//! `forman-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod pipeline;

pub use error::{AppError, AppResult};
