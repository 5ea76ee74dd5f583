//! Support code for the `triadnet` binary: sentiment ingestion and run
//! manifests.

pub mod manifest;
pub mod sentiment;

pub use manifest::{InputDigest, RunManifest};
pub use sentiment::{aggregate_signed_month, month_count, parse_records, Countries, SentimentRecord};
