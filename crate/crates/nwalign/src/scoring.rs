//! Scoring parameters and the per-cell recurrence shared by every engine.

use crate::error::{Error, Result};
use crate::matrix::Direction;

/// Match/mismatch/gap parameters for global alignment.
///
/// Scores are 64-bit so that multi-kilobase alignments cannot overflow:
/// the magnitude of any cell is bounded by `(m + n) * max|parameter|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScoringScheme {
    pub match_score: i64,
    pub mismatch_score: i64,
    pub gap_penalty: i64,
}

impl Default for ScoringScheme {
    fn default() -> Self {
        ScoringScheme {
            match_score: 1,
            mismatch_score: -1,
            gap_penalty: -1,
        }
    }
}

impl ScoringScheme {
    /// Validated constructor: requires `gap_penalty < 0` and
    /// `match_score > mismatch_score`.
    pub fn new(match_score: i64, mismatch_score: i64, gap_penalty: i64) -> Result<Self> {
        if gap_penalty >= 0 {
            return Err(Error::InvalidScheme(format!(
                "gap_penalty must be negative, got {gap_penalty}"
            )));
        }
        if match_score <= mismatch_score {
            return Err(Error::InvalidScheme(format!(
                "match_score ({match_score}) must exceed mismatch_score ({mismatch_score})"
            )));
        }
        Ok(ScoringScheme {
            match_score,
            mismatch_score,
            gap_penalty,
        })
    }

    /// Substitution score of a residue pair: match or mismatch.
    #[inline]
    pub fn substitution(&self, a: u8, b: u8) -> i64 {
        if a == b {
            self.match_score
        } else {
            self.mismatch_score
        }
    }
}

/// The Needleman-Wunsch cell recurrence.
///
/// Returns the best score reachable at a cell given its three neighbors,
/// together with the direction code of the winning branch. Ties resolve
/// with fixed priority diagonal > vertical > horizontal, which makes the
/// canonical traceback unique.
#[inline]
pub fn score_cell(
    up: i64,
    left: i64,
    diag: i64,
    a_sym: u8,
    b_sym: u8,
    scheme: &ScoringScheme,
) -> (i64, Direction) {
    let d = diag + scheme.substitution(a_sym, b_sym);
    let v = up + scheme.gap_penalty;
    let h = left + scheme.gap_penalty;
    if d >= v && d >= h {
        (d, Direction::Diagonal)
    } else if v >= h {
        (v, Direction::Vertical)
    } else {
        (h, Direction::Horizontal)
    }
}
