//! Reference single-pair aligner: row-major fill plus traceback.
//!
//! This engine is the baseline every other engine is compared against; the
//! wavefront engine must reproduce its matrices byte for byte.

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::matrix::{init_matrices, Direction, ScoreMatrix, TracebackMatrix};
use crate::scoring::{score_cell, ScoringScheme};
use crate::seq::{Sequence, GAP};

/// Default bound on co-optimal enumeration; path counts grow exponentially.
pub const DEFAULT_TRACEBACK_CAP: usize = 256;

/// A pair of sequences plus the scheme to align them under.
#[derive(Debug, Clone)]
pub struct AlignmentProblem {
    pub a: Sequence,
    pub b: Sequence,
    pub scheme: ScoringScheme,
}

impl AlignmentProblem {
    pub fn new(a: Sequence, b: Sequence, scheme: ScoringScheme) -> Self {
        AlignmentProblem { a, b, scheme }
    }
}

/// Fill both matrices cell by cell in row-major order, then take the
/// canonical traceback. Empty sequences are fine; the result is the
/// all-gap border path.
pub fn align_serial(
    problem: &AlignmentProblem,
) -> Result<(ScoreMatrix, TracebackMatrix, Alignment)> {
    let a = problem.a.residues();
    let b = problem.b.residues();
    let scheme = &problem.scheme;
    let (mut score, mut tb) = init_matrices(a.len(), b.len(), scheme)?;

    let cols = score.cols();
    let cells = score.cells_mut();
    let codes = tb.cells_mut();
    for i in 1..=a.len() {
        let a_sym = a[i - 1];
        let row = i * cols;
        let prev_row = row - cols;
        for j in 1..=b.len() {
            let (value, dir) = score_cell(
                cells[prev_row + j],
                cells[row + j - 1],
                cells[prev_row + j - 1],
                a_sym,
                b[j - 1],
                scheme,
            );
            cells[row + j] = value;
            codes[row + j] = dir.code();
        }
    }

    let (gapped_a, gapped_b) = traceback_one(&tb, &problem.a, &problem.b)?;
    let alignment = Alignment {
        gapped_a,
        gapped_b,
        score: score.final_score(),
    };
    Ok((score, tb, alignment))
}

/// Walk direction codes from `(m, n)` back to the origin, emitting one
/// alignment column per step, and return the rows in left-to-right order.
///
/// Errors with [`Error::UnsetTraceback`] if it hits a cell no engine wrote,
/// which signals an engine bug rather than bad input.
pub fn traceback_one(
    tb: &TracebackMatrix,
    a: &Sequence,
    b: &Sequence,
) -> Result<(String, String)> {
    let mut i = a.len();
    let mut j = b.len();
    let mut rev_a = Vec::with_capacity(i + j);
    let mut rev_b = Vec::with_capacity(i + j);
    let a = a.residues();
    let b = b.residues();
    while i > 0 || j > 0 {
        match tb.direction(i, j) {
            Some(Direction::Diagonal) => {
                rev_a.push(a[i - 1]);
                rev_b.push(b[j - 1]);
                i -= 1;
                j -= 1;
            }
            Some(Direction::Vertical) => {
                rev_a.push(a[i - 1]);
                rev_b.push(GAP);
                i -= 1;
            }
            Some(Direction::Horizontal) => {
                rev_a.push(GAP);
                rev_b.push(b[j - 1]);
                j -= 1;
            }
            _ => return Err(Error::UnsetTraceback { i, j }),
        }
    }
    rev_a.reverse();
    rev_b.reverse();
    Ok((
        String::from_utf8(rev_a).expect("residues and gaps are ASCII"),
        String::from_utf8(rev_b).expect("residues and gaps are ASCII"),
    ))
}

/// The result of co-optimal enumeration: up to `cap` optimal alignments and
/// whether more existed beyond the cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoOptimal {
    pub alignments: Vec<Alignment>,
    pub truncated: bool,
}

/// Enumerate every optimal alignment path, depth first.
///
/// The traceback matrix stores only one winner per cell, so co-optimal
/// branches are re-derived from the score matrix: a branch is taken exactly
/// when its source score plus its move cost reproduces the cell value.
/// Branch order is diagonal, vertical, horizontal, so the first path found
/// is always the canonical [`traceback_one`] result.
pub fn traceback_all(
    score: &ScoreMatrix,
    a: &Sequence,
    b: &Sequence,
    scheme: &ScoringScheme,
    cap: usize,
) -> Result<CoOptimal> {
    if cap == 0 {
        return Err(Error::InvalidConfig(
            "co-optimal enumeration cap must be at least 1".into(),
        ));
    }

    struct Dfs<'s> {
        score: &'s ScoreMatrix,
        a: &'s [u8],
        b: &'s [u8],
        scheme: &'s ScoringScheme,
        cap: usize,
        rev_a: Vec<u8>,
        rev_b: Vec<u8>,
        out: Vec<Alignment>,
        truncated: bool,
        final_score: i64,
    }

    impl Dfs<'_> {
        fn emit(&mut self) {
            if self.out.len() == self.cap {
                self.truncated = true;
                return;
            }
            let mut row_a = self.rev_a.clone();
            let mut row_b = self.rev_b.clone();
            row_a.reverse();
            row_b.reverse();
            self.out.push(Alignment {
                gapped_a: String::from_utf8(row_a).expect("ASCII"),
                gapped_b: String::from_utf8(row_b).expect("ASCII"),
                score: self.final_score,
            });
        }

        fn go(&mut self, i: usize, j: usize) {
            if self.truncated {
                return;
            }
            if i == 0 && j == 0 {
                self.emit();
                return;
            }
            let here = self.score.get(i, j);
            if i > 0 && j > 0 {
                let sub = self.scheme.substitution(self.a[i - 1], self.b[j - 1]);
                if self.score.get(i - 1, j - 1) + sub == here {
                    self.rev_a.push(self.a[i - 1]);
                    self.rev_b.push(self.b[j - 1]);
                    self.go(i - 1, j - 1);
                    self.rev_a.pop();
                    self.rev_b.pop();
                }
            }
            if i > 0 && self.score.get(i - 1, j) + self.scheme.gap_penalty == here {
                self.rev_a.push(self.a[i - 1]);
                self.rev_b.push(GAP);
                self.go(i - 1, j);
                self.rev_a.pop();
                self.rev_b.pop();
            }
            if j > 0 && self.score.get(i, j - 1) + self.scheme.gap_penalty == here {
                self.rev_a.push(GAP);
                self.rev_b.push(self.b[j - 1]);
                self.go(i, j - 1);
                self.rev_a.pop();
                self.rev_b.pop();
            }
        }
    }

    let mut dfs = Dfs {
        score,
        a: a.residues(),
        b: b.residues(),
        scheme,
        cap,
        rev_a: Vec::new(),
        rev_b: Vec::new(),
        out: Vec::new(),
        truncated: false,
        final_score: score.final_score(),
    };
    dfs.go(a.len(), b.len());
    Ok(CoOptimal {
        alignments: dfs.out,
        truncated: dfs.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::score_alignment;
    use crate::oracle;

    fn seq(id: &str, res: &[u8]) -> Sequence {
        Sequence::new(id, res).unwrap()
    }

    fn problem(a: &[u8], b: &[u8]) -> AlignmentProblem {
        AlignmentProblem::new(seq("a", a), seq("b", b), ScoringScheme::default())
    }

    #[test]
    fn trivial_single_match() {
        let (_, _, aln) = align_serial(&problem(b"A", b"A")).unwrap();
        assert_eq!(aln.score, 1);
        assert_eq!((aln.gapped_a.as_str(), aln.gapped_b.as_str()), ("A", "A"));
    }

    #[test]
    fn empty_against_two_residues() {
        let (_, _, aln) = align_serial(&problem(b"", b"AA")).unwrap();
        assert_eq!(aln.score, -2);
        assert_eq!((aln.gapped_a.as_str(), aln.gapped_b.as_str()), ("--", "AA"));
    }

    #[test]
    fn both_empty() {
        let (score, _, aln) = align_serial(&problem(b"", b"")).unwrap();
        assert_eq!(score.final_score(), 0);
        assert!(aln.gapped_a.is_empty() && aln.gapped_b.is_empty());
    }

    #[test]
    fn classic_pair_scores_zero() {
        // Frozen from the brute-force oracle (see oracle::hand_checked_small_pairs).
        let (score, _, aln) = align_serial(&problem(b"GATTACA", b"GCATGCU")).unwrap();
        assert_eq!(score.final_score(), 0);
        assert_eq!(aln.score, 0);
        assert_eq!(aln.degapped_a(), "GATTACA");
        assert_eq!(aln.degapped_b(), "GCATGCU");
    }

    #[test]
    fn gat_vs_gtt_matches_oracle() {
        let scheme = ScoringScheme::default();
        let (score, tb, aln) = align_serial(&problem(b"GAT", b"GTT")).unwrap();
        assert_eq!(score.final_score(), oracle::max_alignment_score(b"GAT", b"GTT", &scheme));
        assert_eq!(score.final_score(), 1);
        let (ga, gb) = traceback_one(&tb, &seq("a", b"GAT"), &seq("b", b"GTT")).unwrap();
        assert_eq!((ga, gb), (aln.gapped_a.clone(), aln.gapped_b.clone()));
        assert_eq!(score_alignment(&aln, &scheme).unwrap(), 1);
    }

    #[test]
    fn traceback_forced_vertical_border() {
        let (_, tb, _) = align_serial(&problem(b"A", b"")).unwrap();
        let (ga, gb) = traceback_one(&tb, &seq("a", b"A"), &seq("b", b"")).unwrap();
        assert_eq!((ga.as_str(), gb.as_str()), ("A", "-"));
    }

    #[test]
    fn traceback_reports_unset_cell() {
        let scheme = ScoringScheme::default();
        let (_, tb) = init_matrices(1, 1, &scheme).unwrap();
        // Interior never filled.
        let err = traceback_one(&tb, &seq("a", b"A"), &seq("b", b"A")).unwrap_err();
        assert!(matches!(err, Error::UnsetTraceback { i: 1, j: 1 }));
    }

    #[test]
    fn monotone_borders() {
        let (score, _, _) = align_serial(&problem(b"ACGT", b"CA")).unwrap();
        for i in 1..score.rows() {
            assert_eq!(score.get(i, 0) - score.get(i - 1, 0), -1);
        }
        for j in 1..score.cols() {
            assert_eq!(score.get(0, j) - score.get(0, j - 1), -1);
        }
    }

    #[test]
    fn co_optimal_single_path_for_identity() {
        let p = problem(b"A", b"A");
        let (score, _, _) = align_serial(&p).unwrap();
        let co = traceback_all(&score, &p.a, &p.b, &p.scheme, 16).unwrap();
        assert_eq!(co.alignments.len(), 1);
        assert!(!co.truncated);
    }

    #[test]
    fn co_optimal_set_matches_oracle_for_ag_ga() {
        let p = problem(b"AG", b"GA");
        let (score, _, _) = align_serial(&p).unwrap();
        let co = traceback_all(&score, &p.a, &p.b, &p.scheme, 1 << 20).unwrap();
        assert!(!co.truncated);
        let got: std::collections::BTreeSet<(String, String)> = co
            .alignments
            .iter()
            .map(|a| (a.gapped_a.clone(), a.gapped_b.clone()))
            .collect();
        assert_eq!(got.len(), co.alignments.len(), "duplicates in enumeration");
        let want = oracle::optimal_alignments(b"AG", b"GA", &p.scheme);
        assert_eq!(got, want);
        for aln in &co.alignments {
            assert_eq!(aln.score, score.final_score());
            assert_eq!(score_alignment(aln, &p.scheme).unwrap(), aln.score);
        }
    }

    #[test]
    fn cap_one_returns_canonical_traceback() {
        for (a, b) in [
            (&b"AG"[..], &b"GA"[..]),
            (b"GATTACA", b"GCATGCU"),
            (b"", b"AC"),
            (b"TTT", b"T"),
        ] {
            let p = problem(a, b);
            let (score, tb, _) = align_serial(&p).unwrap();
            let co = traceback_all(&score, &p.a, &p.b, &p.scheme, 1).unwrap();
            assert_eq!(co.alignments.len(), 1);
            let (ga, gb) = traceback_one(&tb, &p.a, &p.b).unwrap();
            assert_eq!(co.alignments[0].gapped_a, ga);
            assert_eq!(co.alignments[0].gapped_b, gb);
        }
    }

    #[test]
    fn cap_zero_rejected() {
        let p = problem(b"A", b"A");
        let (score, _, _) = align_serial(&p).unwrap();
        assert!(traceback_all(&score, &p.a, &p.b, &p.scheme, 0).is_err());
    }

    #[test]
    fn truncation_sets_flag() {
        // AG/GA has more than one optimum, so cap 1 must truncate only if
        // another path exists; verify against the uncapped count.
        let p = problem(b"AG", b"GA");
        let (score, _, _) = align_serial(&p).unwrap();
        let full = traceback_all(&score, &p.a, &p.b, &p.scheme, 1 << 20).unwrap();
        assert!(full.alignments.len() > 1);
        let capped = traceback_all(&score, &p.a, &p.b, &p.scheme, 1).unwrap();
        assert!(capped.truncated);
        assert_eq!(capped.alignments.len(), 1);
    }

    #[test]
    fn exhaustive_oracle_equivalence_small() {
        // Exhaustive over a 2-letter alphabet up to length 4 (the length-7
        // version is the acceptance gate).
        let scheme = ScoringScheme::default();
        let strings = oracle::all_strings(b"AC", 4);
        for sa in &strings {
            for sb in &strings {
                let p = problem(sa, sb);
                let (score, _, aln) = align_serial(&p).unwrap();
                let want = oracle::max_alignment_score(sa, sb, &scheme);
                assert_eq!(score.final_score(), want, "pair {sa:?} / {sb:?}");
                assert_eq!(score_alignment(&aln, &scheme).unwrap(), want);
            }
        }
    }

    #[test]
    fn random_pairs_match_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let scheme = ScoringScheme::default();
        let alphabet = b"ACGT";
        for _ in 0..500 {
            let la = rng.gen_range(0..=10);
            let lb = rng.gen_range(0..=10);
            let sa: Vec<u8> = (0..la).map(|_| alphabet[rng.gen_range(0..4)]).collect();
            let sb: Vec<u8> = (0..lb).map(|_| alphabet[rng.gen_range(0..4)]).collect();
            let p = problem(&sa, &sb);
            let (score, _, _) = align_serial(&p).unwrap();
            assert_eq!(
                score.final_score(),
                oracle::max_alignment_score(&sa, &sb, &scheme),
                "pair {sa:?} / {sb:?}"
            );
        }
    }
}
