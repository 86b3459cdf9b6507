//! Gapped alignment pairs and the column-sum verification helper.

use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;
use crate::seq::GAP;

/// A pair of equal-length gapped rows and the score of the path that
/// produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alignment {
    pub gapped_a: String,
    pub gapped_b: String,
    pub score: i64,
}

impl Alignment {
    /// Number of alignment columns.
    pub fn len(&self) -> usize {
        self.gapped_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gapped_a.is_empty()
    }

    /// First row with gap characters removed.
    pub fn degapped_a(&self) -> String {
        self.gapped_a.chars().filter(|&c| c != GAP as char).collect()
    }

    /// Second row with gap characters removed.
    pub fn degapped_b(&self) -> String {
        self.gapped_b.chars().filter(|&c| c != GAP as char).collect()
    }
}

/// Recompute an alignment's score column by column.
///
/// Gap columns contribute the gap penalty, residue columns the match or
/// mismatch score. Rejects rows of unequal length and columns that are gaps
/// in both rows, since no alignment path can produce either.
pub fn score_alignment(aln: &Alignment, scheme: &ScoringScheme) -> Result<i64> {
    let a = aln.gapped_a.as_bytes();
    let b = aln.gapped_b.as_bytes();
    if a.len() != b.len() {
        return Err(Error::MalformedAlignment(format!(
            "row lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut total = 0i64;
    for (col, (&x, &y)) in a.iter().zip(b.iter()).enumerate() {
        total += match (x == GAP, y == GAP) {
            (true, true) => {
                return Err(Error::MalformedAlignment(format!(
                    "column {} is a gap in both rows",
                    col + 1
                )))
            }
            (true, false) | (false, true) => scheme.gap_penalty,
            (false, false) => scheme.substitution(x, y),
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aln(a: &str, b: &str) -> Alignment {
        Alignment {
            gapped_a: a.to_string(),
            gapped_b: b.to_string(),
            score: 0,
        }
    }

    #[test]
    fn all_matches() {
        let scheme = ScoringScheme::default();
        assert_eq!(score_alignment(&aln("ACGT", "ACGT"), &scheme).unwrap(), 4);
    }

    #[test]
    fn match_plus_gap() {
        let scheme = ScoringScheme::default();
        assert_eq!(score_alignment(&aln("A-", "AT"), &scheme).unwrap(), 0);
    }

    #[test]
    fn length_mismatch_rejected() {
        let scheme = ScoringScheme::default();
        assert!(matches!(
            score_alignment(&aln("AC", "A"), &scheme),
            Err(Error::MalformedAlignment(_))
        ));
    }

    #[test]
    fn double_gap_column_rejected() {
        let scheme = ScoringScheme::default();
        let err = score_alignment(&aln("A-C", "A-C"), &scheme).unwrap_err();
        match err {
            Error::MalformedAlignment(msg) => assert!(msg.contains("column 2"), "{msg}"),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn degap_strips_gaps() {
        let a = aln("G-ATTACA", "GCA-TGCA");
        assert_eq!(a.degapped_a(), "GATTACA");
        assert_eq!(a.degapped_b(), "GCATGCA");
    }
}
