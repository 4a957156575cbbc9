//! Explicit homotopies: normalization of a loop into based strands, the
//! staircase rescheduling, the contraction of the circle generator and its
//! pushforwards, and the full contraction pipeline.

mod flow;
mod generator;
mod normalize;
mod pipeline;
mod plan;
mod stages;
mod staircase;

pub use flow::{extract_strands, max_step};
pub use generator::{contract_circle_generator, pushforward_contraction};
pub use normalize::{normalize, NormalizeOptions};
pub use pipeline::{
    contract_pipeline, ContractionCertificate, PipelineMode, PipelineOptions, DEFAULT_BOUND,
};
pub use plan::LoopInput;
pub use stages::StageSummary;
pub use staircase::staircase;

use serde::{Deserialize, Serialize};

/// Grid size of a homotopy: `rows` steps in the deformation parameter and
/// `cols` steps in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub rows: usize,
    pub cols: usize,
}

impl Resolution {
    pub fn new(rows: usize, cols: usize) -> Resolution {
        Resolution {
            rows: rows.max(1),
            cols: cols.max(1),
        }
    }
}
