//! IO companion to [`relmeter_core`]: viewer-event ingestion, synthetic log
//! generation, report rendering, and the `relmeter` command-line front end.

pub mod cli;
pub mod ingest;
pub mod report;
pub mod synth;
