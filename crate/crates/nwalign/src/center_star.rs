//! Center-star multiple sequence alignment.
//!
//! Pick the sequence most similar to all others (by pairwise alignment
//! score sums), align every other sequence to it, and merge the pairwise
//! alignments by union-gapping the center: wherever any pairwise alignment
//! opens a gap in the center, that gap column appears in the final block
//! for everyone ("once a gap, always a gap").
//!
//! Total cost for `n` sequences of length `k` is O(n^2 k^2): n(n-1)/2
//! pairwise alignments for the score matrix plus n-1 center alignments.

use crate::alignment::Alignment;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;
use crate::seq::{Sequence, GAP};
use crate::serial::AlignmentProblem;

/// The input to an MSA run: at least two sequences and a scheme.
#[derive(Debug, Clone)]
pub struct MsaJob {
    pub sequences: Vec<Sequence>,
    pub scheme: ScoringScheme,
}

impl MsaJob {
    pub fn new(sequences: Vec<Sequence>, scheme: ScoringScheme) -> Result<Self> {
        if sequences.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 sequences, got {}",
                sequences.len()
            )));
        }
        Ok(MsaJob { sequences, scheme })
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires n >= 2
    }
}

/// Symmetric matrix of pairwise alignment scores; the diagonal is unused
/// and defined as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairScoreMatrix {
    n: usize,
    scores: Vec<i64>,
}

impl PairScoreMatrix {
    pub fn new(n: usize) -> Self {
        PairScoreMatrix {
            n,
            scores: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> i64 {
        self.scores[p * self.n + q]
    }

    /// Store a pair score symmetrically.
    pub fn set_pair(&mut self, p: usize, q: usize, score: i64) {
        self.scores[p * self.n + q] = score;
        self.scores[q * self.n + p] = score;
    }

    /// Sum of a sequence's scores against everyone else, wide enough that
    /// extreme schemes cannot overflow.
    pub fn row_sum(&self, p: usize) -> i128 {
        (0..self.n)
            .filter(|&q| q != p)
            .map(|q| self.get(p, q) as i128)
            .sum()
    }
}

/// The merged block: one gapped row per input sequence, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsaResult {
    pub center_index: usize,
    pub rows: Vec<String>,
}

impl MsaResult {
    /// Number of alignment columns (rows all share it).
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, String::len)
    }
}

/// All unordered index pairs `(p, q)` with `p < q`, lexicographically.
/// There are exactly `n(n-1)/2` of them.
pub fn pair_indices(n: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "pair enumeration needs at least 2 sequences, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for p in 0..n {
        for q in (p + 1)..n {
            out.push((p, q));
        }
    }
    Ok(out)
}

/// Compute every pairwise score directly, without the distribution layer.
pub fn compute_pair_scores(job: &MsaJob, engine: Engine) -> Result<PairScoreMatrix> {
    let n = job.sequences.len();
    let mut scores = PairScoreMatrix::new(n);
    for (p, q) in pair_indices(n)? {
        let problem = AlignmentProblem::new(
            job.sequences[p].clone(),
            job.sequences[q].clone(),
            job.scheme,
        );
        scores.set_pair(p, q, engine.align_score(&problem)?);
    }
    Ok(scores)
}

/// Index of the center: the sequence with the maximal sum of pairwise
/// scores against all others. Ties go to the lowest index.
pub fn select_center(scores: &PairScoreMatrix) -> usize {
    let mut best = 0;
    let mut best_sum = scores.row_sum(0);
    for p in 1..scores.n() {
        let sum = scores.row_sum(p);
        if sum > best_sum {
            best = p;
            best_sum = sum;
        }
    }
    best
}

/// Align every non-center sequence against the center, in input order.
/// The center is always the first (gapped_a) row of each alignment.
pub fn align_all_to_center(
    job: &MsaJob,
    center: usize,
    engine: Engine,
) -> Result<Vec<Alignment>> {
    let center_seq = &job.sequences[center];
    job.sequences
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != center)
        .map(|(_, other)| {
            let problem =
                AlignmentProblem::new(center_seq.clone(), other.clone(), job.scheme);
            Ok(engine.align(&problem)?.2)
        })
        .collect()
}

/// Union of two gap patterns over the same underlying sequence: between any
/// two residue anchors the merged row carries the longer gap run.
fn union_center(master: &[u8], other: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(master.len().max(other.len()));
    let (mut i, mut j) = (0, 0);
    while i < master.len() || j < other.len() {
        let m_gap = i < master.len() && master[i] == GAP;
        let o_gap = j < other.len() && other[j] == GAP;
        if m_gap || o_gap {
            out.push(GAP);
            if m_gap {
                i += 1;
            }
            if o_gap {
                j += 1;
            }
        } else {
            // both sides sit on the same residue of the center
            debug_assert!(i < master.len() && j < other.len());
            debug_assert_eq!(master[i], other[j]);
            out.push(master[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Re-expand a pairwise row onto the master gap pattern: columns the master
/// shares with the local center row copy the local row, extra master gap
/// columns become gaps.
fn expand_row(master: &[u8], local_center: &[u8], local_row: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(master.len());
    let mut k = 0;
    for &col in master {
        if k < local_center.len() && (local_center[k] == GAP) == (col == GAP) {
            out.push(local_row[k]);
            k += 1;
        } else {
            debug_assert_eq!(col, GAP, "master must be a union of center gap patterns");
            out.push(GAP);
        }
    }
    debug_assert_eq!(k, local_center.len());
    out
}

/// Merge pairwise center alignments into one block.
///
/// `alignments[k]` must be the alignment of the center (first row) against
/// the k-th non-center sequence in input order, exactly as
/// [`align_all_to_center`] produces them.
pub fn merge_alignments(
    alignments: &[Alignment],
    center_index: usize,
    job: &MsaJob,
) -> Result<MsaResult> {
    let n = job.sequences.len();
    if center_index >= n {
        return Err(Error::InvalidConfig(format!(
            "center index {center_index} out of range for {n} sequences"
        )));
    }
    if alignments.len() != n - 1 {
        return Err(Error::InvalidConfig(format!(
            "expected {} pairwise alignments, got {}",
            n - 1,
            alignments.len()
        )));
    }
    let center = &job.sequences[center_index];
    for (k, aln) in alignments.iter().enumerate() {
        if aln.gapped_a.len() != aln.gapped_b.len() {
            return Err(Error::MalformedAlignment(format!(
                "pairwise alignment {k} has rows of unequal length"
            )));
        }
        if aln.degapped_a().as_bytes() != center.residues() {
            return Err(Error::MalformedAlignment(format!(
                "pairwise alignment {k} center row does not degap to the center sequence"
            )));
        }
    }

    let mut master: Vec<u8> = center.residues().to_vec();
    for aln in alignments {
        master = union_center(&master, aln.gapped_a.as_bytes());
    }

    let mut rows = Vec::with_capacity(n);
    let mut remaining = alignments.iter();
    for q in 0..n {
        let row = if q == center_index {
            master.clone()
        } else {
            let aln = remaining.next().expect("length checked above");
            expand_row(&master, aln.gapped_a.as_bytes(), aln.gapped_b.as_bytes())
        };
        rows.push(String::from_utf8(row).expect("residues and gaps are ASCII"));
    }
    Ok(MsaResult { center_index, rows })
}

/// The full pipeline: pairwise score matrix, center selection, alignment
/// to the center, merge. `ranks` > 1 routes the score matrix through the
/// in-process distributor and spreads the center alignments over that many
/// threads; the result is identical for every rank count.
pub fn msa(job: &MsaJob, engine: Engine, ranks: usize) -> Result<MsaResult> {
    msa_with_transport(job, engine, ranks, &crate::distributor::Transport::InProcess)
}

/// [`msa`] with an explicit distribution transport.
pub fn msa_with_transport(
    job: &MsaJob,
    engine: Engine,
    ranks: usize,
    transport: &crate::distributor::Transport,
) -> Result<MsaResult> {
    if ranks == 0 {
        return Err(Error::InvalidConfig("ranks must be at least 1".into()));
    }
    let scores = if ranks == 1 {
        compute_pair_scores(job, engine)?
    } else {
        crate::distributor::scatter_gather(job, ranks, transport, engine)?
    };
    let center = select_center(&scores);
    let alignments = if ranks == 1 {
        align_all_to_center(job, center, engine)?
    } else {
        align_all_to_center_chunked(job, center, engine, ranks)?
    };
    merge_alignments(&alignments, center, job)
}

/// Center-alignment stage spread over `ranks` threads. Each rank takes a
/// contiguous chunk of the non-center list (same fairness rule as the
/// score-matrix partition), so concatenating per-rank output reproduces
/// input order.
fn align_all_to_center_chunked(
    job: &MsaJob,
    center: usize,
    engine: Engine,
    ranks: usize,
) -> Result<Vec<Alignment>> {
    let others: Vec<&Sequence> = job
        .sequences
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != center)
        .map(|(_, s)| s)
        .collect();
    let partition = crate::distributor::partition_pairs(others.len(), ranks)?;
    let center_seq = &job.sequences[center];
    let chunk_results: Vec<Result<Vec<Alignment>>> = std::thread::scope(|s| {
        let handles: Vec<_> = partition
            .chunks
            .iter()
            .map(|range| {
                let chunk = &others[range.start..range.end];
                s.spawn(move || {
                    chunk
                        .iter()
                        .map(|other| {
                            let problem = AlignmentProblem::new(
                                center_seq.clone(),
                                (*other).clone(),
                                job.scheme,
                            );
                            Ok(engine.align(&problem)?.2)
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("rank panicked")).collect()
    });
    let mut out = Vec::with_capacity(others.len());
    for chunk in chunk_results {
        out.extend(chunk?);
    }
    Ok(out)
}
