//! Dependency-ordered parallel engine.
//!
//! Every interior cell depends on its up, left, and diagonal neighbors, so
//! all cells on one anti-diagonal (constant `i + j`) are mutually
//! independent and depend only on the previous two anti-diagonals. The
//! engine walks diagonals in order, splits each into chunks, and lets a
//! fixed pool of workers claim chunks; a barrier between diagonals
//! establishes the readiness of every dependency before anyone reads it.
//! Per-cell ready flags are still written and asserted, so the "no read
//! before the dependency is computed" contract is checked directly in
//! debug builds, not just implied by the schedule.
//!
//! Worker count and grain never affect any cell value: the recurrence is a
//! pure function of the three neighbors, so the matrices are byte-identical
//! to the serial engine's for every configuration.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Barrier;

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::matrix::{init_matrices, ScoreMatrix, TracebackMatrix};
use crate::scoring::{score_cell, ScoringScheme};
use crate::serial::{traceback_one, AlignmentProblem};

/// Cells per scheduled work unit; amortizes chunk-claim overhead on wide
/// diagonals. A tunable, not a correctness knob.
pub const DEFAULT_GRAIN: usize = 64;

/// Worker-pool configuration for [`align_wavefront`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavefrontConfig {
    /// Number of pool workers (the thread-count analog).
    pub workers: usize,
    /// Maximum cells per claimed chunk.
    pub grain: usize,
}

impl WavefrontConfig {
    /// `workers` threads with the default grain.
    pub fn new(workers: usize) -> Self {
        WavefrontConfig {
            workers,
            grain: DEFAULT_GRAIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if self.grain == 0 {
            return Err(Error::InvalidConfig("grain must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for WavefrontConfig {
    fn default() -> Self {
        let workers = std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1);
        WavefrontConfig {
            workers,
            grain: DEFAULT_GRAIN,
        }
    }
}

/// One computed/not-computed flag per grid cell, borders pre-marked.
///
/// A flag is stored (release) only after the cell's score and direction are
/// both written, so an observer that sees the flag (acquire) also sees the
/// values.
pub struct ReadyFlags {
    rows: usize,
    cols: usize,
    flags: Vec<AtomicBool>,
}

impl ReadyFlags {
    /// Flags for a `rows x cols` grid with row 0 and column 0 already set,
    /// matching the pre-filled borders.
    pub fn new(rows: usize, cols: usize) -> Self {
        let flags = (0..rows * cols)
            .map(|idx| AtomicBool::new(idx / cols == 0 || idx % cols == 0))
            .collect();
        ReadyFlags { rows, cols, flags }
    }

    #[inline]
    pub fn is_set(&self, i: usize, j: usize) -> bool {
        self.flags[i * self.cols + j].load(Ordering::Acquire)
    }

    #[inline]
    fn mark_idx(&self, idx: usize) {
        self.flags[idx].store(true, Ordering::Release);
    }

    pub fn all_set(&self) -> bool {
        self.flags.iter().all(|f| f.load(Ordering::Acquire))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Interior row range `lo..=hi` of anti-diagonal `d` on an `m x n` interior
/// grid, or `None` when the diagonal has no interior cells.
#[inline]
fn diagonal_bounds(m: usize, n: usize, d: usize) -> Option<(usize, usize)> {
    if m == 0 || n == 0 || d < 2 || d > m + n {
        return None;
    }
    let lo = if d > n { d - n } else { 1 };
    let hi = m.min(d - 1);
    (lo <= hi).then_some((lo, hi))
}

/// A run of cells on one anti-diagonal: `(i, d - i)` for `i` in
/// `i_lo..=i_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellChunk {
    diagonal: usize,
    i_lo: usize,
    i_hi: usize,
}

impl CellChunk {
    pub fn diagonal(&self) -> usize {
        self.diagonal
    }

    pub fn len(&self) -> usize {
        self.i_hi - self.i_lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a chunk always holds at least one cell
    }

    /// Cell coordinates in increasing row order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.i_lo..=self.i_hi).map(move |i| (i, self.diagonal - i))
    }
}

/// All chunks of one anti-diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalBatch {
    pub diagonal: usize,
    pub chunks: Vec<CellChunk>,
}

impl DiagonalBatch {
    /// Total cells across the batch's chunks.
    pub fn width(&self) -> usize {
        self.chunks.iter().map(CellChunk::len).sum()
    }
}

/// The engine's schedule, materialized: every interior cell exactly once,
/// grouped by anti-diagonal in increasing order, split into chunks of at
/// most `grain` cells. This is the same arithmetic the engine runs on the
/// fly; it exists so the schedule itself can be inspected and tested.
pub fn schedule_antidiagonals(m: usize, n: usize, grain: usize) -> Vec<DiagonalBatch> {
    let grain = grain.max(1);
    let mut batches = Vec::new();
    for d in 2..=(m.saturating_add(n)) {
        let Some((lo, hi)) = diagonal_bounds(m, n, d) else {
            continue;
        };
        let width = hi - lo + 1;
        let nchunks = width.div_ceil(grain);
        let chunks = (0..nchunks)
            .map(|c| {
                let i_lo = lo + c * grain;
                let i_hi = hi.min(i_lo + grain - 1);
                CellChunk { diagonal: d, i_lo, i_hi }
            })
            .collect();
        batches.push(DiagonalBatch { diagonal: d, chunks });
    }
    batches
}

/// Unsynchronized shared view of a cell buffer.
///
/// Workers write disjoint cells within a diagonal and only read cells from
/// earlier diagonals, with a barrier between diagonals supplying the
/// happens-before edge. That discipline is what makes the raw accesses
/// sound.
struct SharedCells<'a, T> {
    ptr: *mut T,
    len: usize,
    _lifetime: std::marker::PhantomData<&'a mut [T]>,
}

unsafe impl<T: Send + Sync> Sync for SharedCells<'_, T> {}

impl<'a, T: Copy> SharedCells<'a, T> {
    fn new(cells: &'a mut [T]) -> Self {
        SharedCells {
            ptr: cells.as_mut_ptr(),
            len: cells.len(),
            _lifetime: std::marker::PhantomData,
        }
    }

    /// SAFETY: no concurrent writer to `idx`; any earlier writer is ordered
    /// before this read by a barrier.
    #[inline]
    unsafe fn read(&self, idx: usize) -> T {
        debug_assert!(idx < self.len);
        *self.ptr.add(idx)
    }

    /// SAFETY: `idx` is written by exactly one worker per diagonal, and no
    /// one reads it until after the next barrier.
    #[inline]
    unsafe fn write(&self, idx: usize, value: T) {
        debug_assert!(idx < self.len);
        *self.ptr.add(idx) = value;
    }
}

struct FillCtx<'a> {
    score: SharedCells<'a, i64>,
    tb: SharedCells<'a, u8>,
    flags: &'a ReadyFlags,
    a: &'a [u8],
    b: &'a [u8],
    scheme: ScoringScheme,
    cols: usize,
    grain: usize,
    /// One claim cursor per diagonal, indexed by `d - 2`.
    cursors: Vec<AtomicUsize>,
    barrier: Barrier,
}

impl FillCtx<'_> {
    /// Compute cells `(i, d - i)` for `i` in `i_lo..=i_hi`.
    fn run_chunk(&self, d: usize, i_lo: usize, i_hi: usize) {
        for i in i_lo..=i_hi {
            let j = d - i;
            debug_assert!(
                self.flags.is_set(i - 1, j)
                    && self.flags.is_set(i, j - 1)
                    && self.flags.is_set(i - 1, j - 1),
                "cell ({i}, {j}) scheduled before its dependencies were ready"
            );
            let idx = i * self.cols + j;
            // SAFETY: dependencies lie on diagonals d-1 and d-2, finished
            // before the barrier that released this diagonal; idx itself is
            // claimed by this worker alone.
            let (value, dir) = unsafe {
                let up = self.score.read(idx - self.cols);
                let left = self.score.read(idx - 1);
                let diag = self.score.read(idx - self.cols - 1);
                score_cell(up, left, diag, self.a[i - 1], self.b[j - 1], &self.scheme)
            };
            unsafe {
                self.score.write(idx, value);
                self.tb.write(idx, dir.code());
            }
            // Publish only after both values are in place.
            self.flags.mark_idx(idx);
        }
    }

    /// One worker's pass over every diagonal, claiming chunks until the
    /// diagonal is exhausted, then waiting out the barrier.
    fn worker_loop(&self) {
        let m = self.a.len();
        let n = self.b.len();
        for d in 2..=(m + n) {
            if let Some((lo, hi)) = diagonal_bounds(m, n, d) {
                let nchunks = (hi - lo + 1).div_ceil(self.grain);
                let cursor = &self.cursors[d - 2];
                loop {
                    let c = cursor.fetch_add(1, Ordering::Relaxed);
                    if c >= nchunks {
                        break;
                    }
                    let i_lo = lo + c * self.grain;
                    let i_hi = hi.min(i_lo + self.grain - 1);
                    self.run_chunk(d, i_lo, i_hi);
                }
            }
            self.barrier.wait();
        }
    }
}

fn fill_wavefront(
    score: &mut ScoreMatrix,
    tb: &mut TracebackMatrix,
    flags: &ReadyFlags,
    a: &[u8],
    b: &[u8],
    scheme: &ScoringScheme,
    cfg: &WavefrontConfig,
) {
    let m = a.len();
    let n = b.len();
    if m == 0 || n == 0 {
        return;
    }
    let cols = score.cols();
    let ctx = FillCtx {
        score: SharedCells::new(score.cells_mut()),
        tb: SharedCells::new(tb.cells_mut()),
        flags,
        a,
        b,
        scheme: *scheme,
        cols,
        grain: cfg.grain,
        cursors: (0..m + n - 1).map(|_| AtomicUsize::new(0)).collect(),
        barrier: Barrier::new(cfg.workers),
    };
    if cfg.workers == 1 {
        ctx.worker_loop();
    } else {
        std::thread::scope(|s| {
            for _ in 0..cfg.workers {
                s.spawn(|| ctx.worker_loop());
            }
        });
    }
}

/// Align with the dependency-ordered worker pool.
///
/// Produces matrices and a canonical alignment identical to
/// [`crate::serial::align_serial`] for every `workers`/`grain` setting.
pub fn align_wavefront(
    problem: &AlignmentProblem,
    cfg: &WavefrontConfig,
) -> Result<(ScoreMatrix, TracebackMatrix, Alignment)> {
    cfg.validate()?;
    let a = problem.a.residues();
    let b = problem.b.residues();
    let (mut score, mut tb) = init_matrices(a.len(), b.len(), &problem.scheme)?;
    let flags = ReadyFlags::new(score.rows(), score.cols());
    fill_wavefront(&mut score, &mut tb, &flags, a, b, &problem.scheme, cfg);
    debug_assert!(flags.all_set(), "engine returned with uncomputed cells");
    let (gapped_a, gapped_b) = traceback_one(&tb, &problem.a, &problem.b)?;
    let alignment = Alignment {
        gapped_a,
        gapped_b,
        score: score.final_score(),
    };
    Ok((score, tb, alignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Sequence;
    use crate::serial::align_serial;
    use rand::{Rng, SeedableRng};

    fn problem(a: &[u8], b: &[u8]) -> AlignmentProblem {
        AlignmentProblem::new(
            Sequence::new("a", a).unwrap(),
            Sequence::new("b", b).unwrap(),
            ScoringScheme::default(),
        )
    }

    fn random_seq(rng: &mut impl Rng, len: usize) -> Vec<u8> {
        (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
    }

    #[test]
    fn schedule_two_by_two() {
        let batches = schedule_antidiagonals(2, 2, 16);
        let flat: Vec<(usize, Vec<(usize, usize)>)> = batches
            .iter()
            .map(|b| {
                (
                    b.diagonal,
                    b.chunks.iter().flat_map(|c| c.cells()).collect(),
                )
            })
            .collect();
        assert_eq!(
            flat,
            vec![
                (2, vec![(1, 1)]),
                (3, vec![(1, 2), (2, 1)]),
                (4, vec![(2, 2)]),
            ]
        );
    }

    #[test]
    fn schedule_single_row_is_column_order() {
        let batches = schedule_antidiagonals(1, 3, 1);
        assert_eq!(batches.len(), 3);
        let cells: Vec<(usize, usize)> = batches
            .iter()
            .flat_map(|b| b.chunks.iter().flat_map(|c| c.cells()))
            .collect();
        assert_eq!(cells, vec![(1, 1), (1, 2), (1, 3)]);
        for b in &batches {
            assert_eq!(b.chunks.len(), 1);
            assert_eq!(b.width(), 1);
        }
    }

    #[test]
    fn schedule_hundred_square_counts() {
        let batches = schedule_antidiagonals(100, 100, 32);
        let total: usize = batches.iter().map(DiagonalBatch::width).sum();
        assert_eq!(total, 10_000);
        let max_width = batches.iter().map(DiagonalBatch::width).max().unwrap();
        assert_eq!(max_width, 100);
        for b in &batches {
            for c in &b.chunks {
                assert!(c.len() <= 32);
            }
        }
    }

    #[test]
    fn schedule_covers_grid_exactly_once() {
        for (m, n, grain) in [(5, 9, 2), (9, 5, 3), (7, 7, 100), (1, 1, 1), (0, 4, 2), (4, 0, 2)] {
            let mut seen = std::collections::HashSet::new();
            let mut count = 0usize;
            let mut last_d = 0;
            for batch in schedule_antidiagonals(m, n, grain) {
                assert!(batch.diagonal > last_d, "diagonals must increase");
                last_d = batch.diagonal;
                for chunk in &batch.chunks {
                    for (i, j) in chunk.cells() {
                        assert_eq!(i + j, batch.diagonal);
                        assert!((1..=m).contains(&i) && (1..=n).contains(&j));
                        assert!(seen.insert((i, j)), "duplicate cell ({i}, {j})");
                        count += 1;
                    }
                }
            }
            assert_eq!(count, m * n, "m={m} n={n} grain={grain}");
        }
    }

    #[test]
    fn rejects_zero_workers_and_zero_grain() {
        let p = problem(b"ACGT", b"ACGT");
        let bad = WavefrontConfig { workers: 0, grain: 64 };
        assert!(align_wavefront(&p, &bad).is_err());
        let bad = WavefrontConfig { workers: 2, grain: 0 };
        assert!(align_wavefront(&p, &bad).is_err());
    }

    #[test]
    fn single_worker_equals_serial() {
        let p = problem(b"GATTACA", b"GCATGCU");
        let (s1, t1, a1) = align_serial(&p).unwrap();
        let (s2, t2, a2) = align_wavefront(&p, &WavefrontConfig { workers: 1, grain: 3 }).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(t1, t2);
        assert_eq!(a1, a2);
    }

    #[test]
    fn four_workers_equal_serial_on_classic_pair() {
        let p = problem(b"GATTACA", b"GCATGCU");
        let (s1, t1, a1) = align_serial(&p).unwrap();
        let (s2, t2, a2) = align_wavefront(&p, &WavefrontConfig { workers: 4, grain: 2 }).unwrap();
        assert_eq!(a2.score, 0);
        assert_eq!(s1, s2);
        assert_eq!(t1, t2);
        assert_eq!(a1, a2);
    }

    #[test]
    fn worker_and_grain_sweep_is_byte_identical() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = random_seq(&mut rng, 512);
        let b = random_seq(&mut rng, 512);
        let p = problem(&a, &b);
        let (s_ref, t_ref, a_ref) = align_serial(&p).unwrap();
        for workers in [1, 2, 4, 8] {
            for grain in [1, 64] {
                let cfg = WavefrontConfig { workers, grain };
                let (s, t, aln) = align_wavefront(&p, &cfg).unwrap();
                assert_eq!(s.cells(), s_ref.cells(), "workers={workers} grain={grain}");
                assert_eq!(t.cells(), t_ref.cells(), "workers={workers} grain={grain}");
                assert_eq!(aln, a_ref);
            }
        }
    }

    #[test]
    fn empty_sides_work_under_pool() {
        for (a, b) in [(&b""[..], &b""[..]), (b"", b"ACG"), (b"ACG", b"")] {
            let p = problem(a, b);
            let (s1, t1, a1) = align_serial(&p).unwrap();
            let (s2, t2, a2) = align_wavefront(&p, &WavefrontConfig { workers: 4, grain: 1 }).unwrap();
            assert_eq!(s1, s2);
            assert_eq!(t1, t2);
            assert_eq!(a1, a2);
        }
    }

    #[test]
    fn fill_sets_every_flag() {
        let p = problem(b"ACGTACGT", b"TGCA");
        let (mut score, mut tb) =
            init_matrices(p.a.len(), p.b.len(), &p.scheme).unwrap();
        let flags = ReadyFlags::new(score.rows(), score.cols());
        assert!(!flags.all_set());
        fill_wavefront(
            &mut score,
            &mut tb,
            &flags,
            p.a.residues(),
            p.b.residues(),
            &p.scheme,
            &WavefrontConfig { workers: 3, grain: 2 },
        );
        assert!(flags.all_set());
    }

    #[test]
    fn ready_flags_border_premarked() {
        let flags = ReadyFlags::new(3, 4);
        for j in 0..4 {
            assert!(flags.is_set(0, j));
        }
        for i in 0..3 {
            assert!(flags.is_set(i, 0));
        }
        assert!(!flags.is_set(1, 1));
        assert!(!flags.is_set(2, 3));
    }

    #[test]
    fn randomized_configs_stay_deterministic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let a = random_seq(&mut rng, rng.gen_range(0..40));
            let b = random_seq(&mut rng, rng.gen_range(0..40));
            let p = problem(&a, &b);
            let (s_ref, t_ref, _) = align_serial(&p).unwrap();
            let workers = rng.gen_range(1..=4);
            let grain = rng.gen_range(1..=8);
            let (s, t, _) = align_wavefront(&p, &WavefrontConfig { workers, grain }).unwrap();
            assert_eq!(s, s_ref);
            assert_eq!(t, t_ref);
        }
    }
}
