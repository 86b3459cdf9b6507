//! Dense dynamic-programming grids: scores and traceback direction codes.

use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;

/// Traceback direction code of a cell.
///
/// The numeric codes are part of the on-disk/on-wire vocabulary of the
/// toolkit: 0 means the cell has not been computed yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Direction {
    Unset = 0,
    Diagonal = 1,
    Vertical = 2,
    Horizontal = 3,
}

impl Direction {
    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Direction> {
        match code {
            0 => Some(Direction::Unset),
            1 => Some(Direction::Diagonal),
            2 => Some(Direction::Vertical),
            3 => Some(Direction::Horizontal),
            _ => None,
        }
    }
}

/// The `(m+1) x (n+1)` grid of best prefix-alignment scores, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<i64>,
}

impl ScoreMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.cells[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: i64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.cells[i * self.cols + j] = value;
    }

    /// Row-major cell storage; byte-identical matrices compare equal here.
    pub fn cells(&self) -> &[i64] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [i64] {
        &mut self.cells
    }

    /// The bottom-right cell: the optimal global alignment score.
    pub fn final_score(&self) -> i64 {
        self.cells[self.cells.len() - 1]
    }
}

/// Per-cell direction codes, same shape as the score grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracebackMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
}

impl TracebackMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn code(&self, i: usize, j: usize) -> u8 {
        debug_assert!(i < self.rows && j < self.cols);
        self.cells[i * self.cols + j]
    }

    pub fn direction(&self, i: usize, j: usize) -> Option<Direction> {
        Direction::from_code(self.code(i, j))
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, dir: Direction) {
        debug_assert!(i < self.rows && j < self.cols);
        self.cells[i * self.cols + j] = dir.code();
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u8] {
        &mut self.cells
    }
}

/// Checked grid shape for sequence lengths `m` and `n`.
fn grid_shape(m: usize, n: usize) -> Result<(usize, usize)> {
    let rows = m.checked_add(1).ok_or(Error::GridTooLarge { rows: m, cols: n })?;
    let cols = n.checked_add(1).ok_or(Error::GridTooLarge { rows: m, cols: n })?;
    let cells = rows
        .checked_mul(cols)
        .ok_or(Error::GridTooLarge { rows, cols })?;
    // The score grid stores 8 bytes per cell; reject anything a Vec could
    // not address even in principle.
    if cells > (isize::MAX as usize) / std::mem::size_of::<i64>() {
        return Err(Error::GridTooLarge { rows, cols });
    }
    Ok((rows, cols))
}

/// Allocate both grids with the standard global-alignment borders.
///
/// Score borders follow the gap penalty (`cell(i,0) = i * gap`,
/// `cell(0,j) = j * gap`); traceback borders are vertical down column 0 and
/// horizontal along row 0; every interior direction code starts at 0
/// (not yet computed).
pub fn init_matrices(
    m: usize,
    n: usize,
    scheme: &ScoringScheme,
) -> Result<(ScoreMatrix, TracebackMatrix)> {
    let (rows, cols) = grid_shape(m, n)?;
    let mut score = ScoreMatrix {
        rows,
        cols,
        cells: vec![0; rows * cols],
    };
    let mut tb = TracebackMatrix {
        rows,
        cols,
        cells: vec![Direction::Unset.code(); rows * cols],
    };
    for j in 1..cols {
        score.set(0, j, j as i64 * scheme.gap_penalty);
        tb.set(0, j, Direction::Horizontal);
    }
    for i in 1..rows {
        score.set(i, 0, i as i64 * scheme.gap_penalty);
        tb.set(i, 0, Direction::Vertical);
    }
    Ok((score, tb))
}
