//! Parallel paragraph extraction from aligned web documents, corpus
//! cleaning and reporting, and translation evaluation.

pub mod cleaning;
pub mod config;
pub mod corpus_tools;
pub mod evaluation;
pub mod ingest;
pub mod paragraph_alignment;
pub mod pipeline;
pub mod segmentation;

pub use config::PipelineConfig;
