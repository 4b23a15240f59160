//! Generator, verifier and diagnostic analyzer for the CTL++ systematicity
//! benchmarks.
//!
//! * [`fnalg`]: symbols, random bijections and the label oracle.
//! * [`sampler`]: sampling graphs and expression draws for variants A, R, S.
//! * [`dataset`]: length-balanced splits and the JSONL file format.
//! * [`verifier`]: independent re-check of any dataset file.
//! * [`analyzer`]: cosine-similarity, clustering, compatibility grids,
//!   seed aggregation and heatmaps over model dumps.

pub mod analyzer;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fnalg;
pub mod rng;
pub mod sampler;
pub mod verifier;

pub use config::{Split, TaskConfig, Variant};
pub use error::{Error, Result};
pub use fnalg::{evaluate, Expression, FunctionId, FunctionSet, FunctionTable, GroupId, Symbol};
pub use rng::SeededStream;
