pub mod cv;
pub mod evaluate;
pub mod fit;
pub mod ingest;
pub mod predict;
pub mod report;
pub mod rows;
pub mod simulate;
