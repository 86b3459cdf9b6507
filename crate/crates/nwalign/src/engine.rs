//! Engine selection shared by the MSA pipeline, the distributor, and the CLI.

use crate::alignment::Alignment;
use crate::error::Result;
use crate::matrix::{ScoreMatrix, TracebackMatrix};
use crate::serial::{align_serial, AlignmentProblem};
use crate::wavefront::{align_wavefront, WavefrontConfig};

/// Which single-pair engine to run. Both produce identical output; the
/// choice only affects how the matrix gets filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Serial,
    Wavefront(WavefrontConfig),
}

impl Engine {
    pub fn align(&self, problem: &AlignmentProblem) -> Result<(ScoreMatrix, TracebackMatrix, Alignment)> {
        match self {
            Engine::Serial => align_serial(problem),
            Engine::Wavefront(cfg) => align_wavefront(problem, cfg),
        }
    }

    /// Alignment score only; callers that discard the matrices.
    pub fn align_score(&self, problem: &AlignmentProblem) -> Result<i64> {
        Ok(self.align(problem)?.2.score)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Engine::Serial => "serial",
            Engine::Wavefront(_) => "wavefront",
        }
    }
}
