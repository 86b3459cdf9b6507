//! Coordinator/worker distribution of pairwise alignment work.
//!
//! The message-passing analog of the paper's rank layout: the coordinator
//! splits the n(n-1)/2 pairwise alignments into contiguous, fair chunks,
//! ships each chunk (with the full sequence set) to a rank, and gathers
//! `(pair index, score)` results back into the symmetric score matrix.
//! Two transports satisfy the same contract: in-process worker threads and
//! a loopback TCP socket protocol (see [`protocol`] for the wire format).
//!
//! The gathered matrix is invariant under rank count, transport, and
//! message arrival order; the gather step enforces conservation (every
//! pair exactly once) and per-rank range fences.

pub mod protocol;
pub mod socket;

use std::ops::Range;
use std::sync::mpsc;
use std::time::Duration;

use crate::center_star::{pair_indices, MsaJob, PairScoreMatrix};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;
use crate::seq::Sequence;
use crate::serial::AlignmentProblem;

/// Default per-chunk gather timeout.
pub const DEFAULT_CHUNK_TIMEOUT: Duration = Duration::from_secs(60);

/// A fair split of `total_pairs` work items over `ranks` workers:
/// contiguous ranges, sizes differing by at most one, larger chunks first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub total_pairs: usize,
    pub ranks: usize,
    pub chunks: Vec<Range<usize>>,
}

/// Split `total_pairs` items into `ranks` contiguous chunks; the first
/// `total_pairs % ranks` ranks get the extra item. Ranks beyond the work
/// count receive empty ranges.
pub fn partition_pairs(total_pairs: usize, ranks: usize) -> Result<Partition> {
    if ranks == 0 {
        return Err(Error::InvalidConfig("ranks must be at least 1".into()));
    }
    let base = total_pairs / ranks;
    let extra = total_pairs % ranks;
    let mut chunks = Vec::with_capacity(ranks);
    let mut start = 0;
    for r in 0..ranks {
        let size = base + usize::from(r < extra);
        chunks.push(start..start + size);
        start += size;
    }
    Ok(Partition {
        total_pairs,
        ranks,
        chunks,
    })
}

/// Work shipped to one rank: its chunk of the pair list plus every
/// sequence, so workers need no shared filesystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkMessage {
    pub rank: u32,
    pub chunk_start: u64,
    pub chunk_len: u64,
    pub sequences: Vec<Sequence>,
}

/// Scores sent back by a rank, one `(pair index, score)` entry per pair in
/// its chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultMessage {
    pub rank: u32,
    pub entries: Vec<(u64, i64)>,
}

/// How coordinator and ranks exchange messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transport {
    /// Worker threads inside the coordinator process.
    InProcess,
    /// Connect to already-running socket workers, one address per rank.
    Socket { worker_addrs: Vec<String> },
    /// Spawn loopback socket workers for the duration of the call; the
    /// full wire protocol over real TCP without external processes.
    LoopbackSocket,
}

/// Execute one rank's chunk: align each assigned pair and report scores.
///
/// The wire format does not carry scoring parameters, so the scheme is
/// part of the worker's launch configuration and must match the
/// coordinator's.
pub fn compute_chunk(
    work: &WorkMessage,
    scheme: ScoringScheme,
    engine: Engine,
) -> Result<ResultMessage> {
    let start = usize::try_from(work.chunk_start)
        .map_err(|_| Error::Protocol("chunk start exceeds address space".into()))?;
    let len = usize::try_from(work.chunk_len)
        .map_err(|_| Error::Protocol("chunk length exceeds address space".into()))?;
    let end = start
        .checked_add(len)
        .ok_or_else(|| Error::Protocol("chunk range overflows".into()))?;

    let mut entries = Vec::with_capacity(len);
    if len > 0 {
        let n = work.sequences.len();
        if n < 2 {
            return Err(Error::Protocol(format!(
                "chunk of {len} pairs but only {n} sequences"
            )));
        }
        let pairs = pair_indices(n)?;
        if end > pairs.len() {
            return Err(Error::Protocol(format!(
                "chunk {start}..{end} out of range for {} pairs",
                pairs.len()
            )));
        }
        for k in start..end {
            let (p, q) = pairs[k];
            let problem = AlignmentProblem::new(
                work.sequences[p].clone(),
                work.sequences[q].clone(),
                scheme,
            );
            entries.push((k as u64, engine.align_score(&problem)?));
        }
    }
    Ok(ResultMessage {
        rank: work.rank,
        entries,
    })
}

fn work_messages(job: &MsaJob, partition: &Partition) -> Vec<WorkMessage> {
    partition
        .chunks
        .iter()
        .enumerate()
        .map(|(r, range)| WorkMessage {
            rank: r as u32,
            chunk_start: range.start as u64,
            chunk_len: range.len() as u64,
            sequences: job.sequences.clone(),
        })
        .collect()
}

/// Receive one result per rank off a channel, enforcing the per-chunk
/// timeout and naming the first silent rank on expiry.
fn gather_channel(
    rx: mpsc::Receiver<(u32, Result<ResultMessage>)>,
    ranks: usize,
    timeout: Duration,
) -> Result<Vec<ResultMessage>> {
    let mut results = Vec::with_capacity(ranks);
    let mut pending: Vec<bool> = vec![true; ranks];
    for _ in 0..ranks {
        match rx.recv_timeout(timeout) {
            Ok((rank, Ok(result))) => {
                if let Some(slot) = pending.get_mut(rank as usize) {
                    *slot = false;
                }
                results.push(result);
            }
            Ok((rank, Err(err))) => {
                return Err(Error::Worker {
                    rank,
                    msg: err.to_string(),
                })
            }
            Err(_) => {
                let silent = pending.iter().position(|&p| p).unwrap_or(0);
                return Err(Error::Worker {
                    rank: silent as u32,
                    msg: format!("no response within {timeout:?}"),
                });
            }
        }
    }
    Ok(results)
}

fn in_process_gather(
    works: Vec<WorkMessage>,
    scheme: ScoringScheme,
    engine: Engine,
    timeout: Duration,
) -> Result<Vec<ResultMessage>> {
    let ranks = works.len();
    let (tx, rx) = mpsc::channel();
    for work in works {
        let tx = tx.clone();
        // Detached on purpose: a stuck rank must not block the gather's
        // timeout path.
        std::thread::spawn(move || {
            let rank = work.rank;
            let result = compute_chunk(&work, scheme, engine);
            let _ = tx.send((rank, result));
        });
    }
    drop(tx);
    gather_channel(rx, ranks, timeout)
}

/// Distribute the pairwise score computation over `ranks` workers and
/// assemble the symmetric score matrix.
///
/// The result is byte-identical to computing every pair in-process with a
/// single rank, for every transport.
pub fn scatter_gather(
    job: &MsaJob,
    ranks: usize,
    transport: &Transport,
    engine: Engine,
) -> Result<PairScoreMatrix> {
    scatter_gather_with_timeout(job, ranks, transport, engine, DEFAULT_CHUNK_TIMEOUT)
}

/// [`scatter_gather`] with an explicit per-chunk timeout.
pub fn scatter_gather_with_timeout(
    job: &MsaJob,
    ranks: usize,
    transport: &Transport,
    engine: Engine,
    timeout: Duration,
) -> Result<PairScoreMatrix> {
    let n = job.sequences.len();
    let pairs = pair_indices(n)?;
    let partition = partition_pairs(pairs.len(), ranks)?;
    let works = work_messages(job, &partition);

    let results = match transport {
        Transport::InProcess => in_process_gather(works, job.scheme, engine, timeout)?,
        Transport::Socket { worker_addrs } => {
            socket::socket_gather(works, worker_addrs, timeout)?
        }
        Transport::LoopbackSocket => {
            socket::loopback_gather(works, job.scheme, engine, timeout)?
        }
    };

    let mut matrix = PairScoreMatrix::new(n);
    let mut seen = vec![false; pairs.len()];
    let mut gathered = 0usize;
    for result in &results {
        let rank = result.rank;
        let range = partition
            .chunks
            .get(rank as usize)
            .ok_or_else(|| Error::Protocol(format!("result from unknown rank {rank}")))?;
        for &(index, score) in &result.entries {
            let k = usize::try_from(index).map_err(|_| Error::Worker {
                rank,
                msg: format!("pair index {index} exceeds address space"),
            })?;
            if k < range.start || k >= range.end {
                return Err(Error::Worker {
                    rank,
                    msg: format!(
                        "pair index {k} outside assigned range {}..{}",
                        range.start, range.end
                    ),
                });
            }
            if seen[k] {
                return Err(Error::Internal(format!(
                    "pair {k} reported twice (rank {rank})"
                )));
            }
            seen[k] = true;
            gathered += 1;
            let (p, q) = pairs[k];
            matrix.set_pair(p, q, score);
        }
    }
    if gathered != pairs.len() {
        return Err(Error::Internal(format!(
            "gathered {gathered} of {} pair scores",
            pairs.len()
        )));
    }
    Ok(matrix)
}
