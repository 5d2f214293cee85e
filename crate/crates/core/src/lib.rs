//! Cross-dataset code smell detection: dataset ingestion, scenario
//! taxonomy, seven tuned classifiers, evaluation metrics and a seeded
//! experiment runner.

pub mod cli;
pub mod config;
pub mod dataset_io;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod matrix;
pub mod metrics;
pub mod seed;
pub mod taxonomy;

pub use error::{Error, Result};
