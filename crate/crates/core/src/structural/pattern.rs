use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zero/free pattern: positions in `support` carry an independent free
/// parameter, every other entry is a fixed zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    support: BTreeSet<(usize, usize)>,
}

impl PatternMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            support: BTreeSet::new(),
        }
    }

    pub fn from_positions(rows: usize, cols: usize, positions: &[(usize, usize)]) -> Result<Self> {
        let mut support = BTreeSet::new();
        for &(r, c) in positions {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "position ({r}, {c}) is outside a {rows}x{cols} pattern"
                )));
            }
            if !support.insert((r, c)) {
                return Err(Error::InvalidInput(format!(
                    "position ({r}, {c}) listed twice"
                )));
            }
        }
        Ok(Self {
            rows,
            cols,
            support,
        })
    }

    /// Builds a pattern from a 0/1 grid; `cols` is needed for grids with no rows.
    pub fn from_grid(grid: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut support = BTreeSet::new();
        for (r, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "pattern row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => {
                        support.insert((r, c));
                    }
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "pattern entry ({r}, {c}) is {other}; only 0 and 1 are allowed"
                        )))
                    }
                }
            }
        }
        Ok(Self {
            rows: grid.len(),
            cols,
            support,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            support: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Stacked unit rows `e_i` for each listed state.
    pub fn unit_rows(n: usize, states: &[usize]) -> Result<Self> {
        let positions: Vec<(usize, usize)> =
            states.iter().enumerate().map(|(r, &s)| (r, s)).collect();
        Self::from_positions(states.len(), n, &positions)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn support(&self) -> &BTreeSet<(usize, usize)> {
        &self.support
    }

    pub fn is_free(&self, r: usize, c: usize) -> bool {
        self.support.contains(&(r, c))
    }

    pub fn nnz(&self) -> usize {
        self.support.len()
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            support: self.support.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    pub fn to_grid(&self) -> Vec<Vec<u8>> {
        let mut g = vec![vec![0u8; self.cols]; self.rows];
        for &(r, c) in &self.support {
            g[r][c] = 1;
        }
        g
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut support = BTreeSet::new();
        for (new, &old) in rows.iter().enumerate() {
            support.extend(
                self.support
                    .range((old, 0)..(old + 1, 0))
                    .map(|&(_, c)| (new, c)),
            );
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            support,
        }
    }

    pub fn vstack(&self, below: &Self) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack patterns with {} and {} columns",
                self.cols, below.cols
            )));
        }
        let mut support = self.support.clone();
        support.extend(below.support.iter().map(|&(r, c)| (r + self.rows, c)));
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            support,
        })
    }

    /// Columns holding at least one free entry.
    pub fn nonzero_columns(&self) -> BTreeSet<usize> {
        self.support.iter().map(|&(_, c)| c).collect()
    }

    pub fn has_full_diagonal(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| self.is_free(i, i))
    }
}

/// Structured triple `(A, C, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternTriple {
    pub a: PatternMatrix,
    pub c: PatternMatrix,
    pub f: PatternMatrix,
}

impl PatternTriple {
    pub fn new(a: PatternMatrix, c: PatternMatrix, f: PatternMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A pattern must be square, got {}x{}",
                n,
                a.ncols()
            )));
        }
        if c.ncols() != n || f.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "C and F patterns need {n} columns, got {} and {}",
                c.ncols(),
                f.ncols()
            )));
        }
        Ok(Self { a, c, f })
    }

    /// Triple with `F` replaced by stacked unit rows for the given states.
    pub fn with_functional_states(
        a: PatternMatrix,
        c: PatternMatrix,
        states: &[usize],
    ) -> Result<Self> {
        let n = a.nrows();
        if let Some(&bad) = states.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidInput(format!(
                "functional state {bad} is out of range for n = {n}"
            )));
        }
        let f = PatternMatrix::unit_rows(n, states)?;
        Self::new(a, c, f)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// States contributing directly to the functional (nonzero columns of F).
    pub fn functional_states(&self) -> BTreeSet<usize> {
        self.f.nonzero_columns()
    }
}

/// Digraph with an edge `x_i -> x_j` for every free `A[j][i]` and `x_i -> y_j`
/// for every free `C[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDigraph {
    pub states: usize,
    pub outputs: usize,
    pub state_edges: Vec<(usize, usize)>,
    pub output_edges: Vec<(usize, usize)>,
}

impl SystemDigraph {
    pub fn new(a: &PatternMatrix, c: &PatternMatrix) -> Self {
        Self {
            states: a.nrows(),
            outputs: c.nrows(),
            state_edges: a.support().iter().map(|&(to, from)| (from, to)).collect(),
            output_edges: c.support().iter().map(|&(y, x)| (x, y)).collect(),
        }
    }

    /// States with a directed path to some output vertex.
    pub fn output_reachable(&self) -> BTreeSet<usize> {
        let mut preds = vec![Vec::new(); self.states];
        for &(from, to) in &self.state_edges {
            preds[to].push(from);
        }
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &(x, _) in &self.output_edges {
            if seen.insert(x) {
                queue.push_back(x);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &preds[v] {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// Reverse breadth-first search from the outputs of `G(A, C)`.
pub fn output_reachable_set(a: &PatternMatrix, c: &PatternMatrix) -> BTreeSet<usize> {
    SystemDigraph::new(a, c).output_reachable()
}
