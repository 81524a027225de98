//! Reference systems used throughout the tests, the CLI golden files and the
//! Python smoke test.

use crate::numeric::RealMatrix;
use crate::structural::{PatternMatrix, PatternTriple};

fn m(rows: usize, cols: usize, data: &[f64]) -> RealMatrix {
    RealMatrix::from_row_slice(rows, cols, data)
}

/// 5-state system with two defective eigenvalues (`-1`, `1`) and a simple `0`.
/// Returns `(A, C, F)`.
pub fn defective_mix() -> (RealMatrix, RealMatrix, RealMatrix) {
    let a = m(
        5,
        5,
        &[
            -1., 0., 0., 0., 1., //
            0., 1., 0., 0., 0., //
            0., 1., 1., 0., 0., //
            0., 0., 0., 0., 0., //
            0., 0., 0., 0., -1.,
        ],
    );
    let c = m(1, 5, &[0., 1., 0., 1., 1.]);
    let f = m(1, 5, &[1., 1., 0., 0., 0.]);
    (a, c, f)
}

/// Jordan data `(T, J)` for [`defective_mix`] with `T^{-1} A T = J`; the blocks are
/// `lambda = 1` on columns 0..2, `lambda = -1` on 2..4 and `lambda = 0` on 4..5.
pub fn defective_mix_jordan() -> (RealMatrix, RealMatrix) {
    let t = m(
        5,
        5,
        &[
            0., 0., 1., 0., 0., //
            0., 1., 0., 0., 0., //
            1., 0., 0., 0., 0., //
            0., 0., 0., 0., 1., //
            0., 0., 0., 1., 0.,
        ],
    );
    let j = m(
        5,
        5,
        &[
            1., 1., 0., 0., 0., //
            0., 1., 0., 0., 0., //
            0., 0., -1., 1., 0., //
            0., 0., 0., -1., 0., //
            0., 0., 0., 0., 0.,
        ],
    );
    (t, j)
}

/// 3x3 nilpotent Jordan block where the eigenvalue-wise rank test passes but
/// the system is not functionally observable. Returns `(A, C, F)`.
pub fn nilpotent_block() -> (RealMatrix, RealMatrix, RealMatrix) {
    let a = m(3, 3, &[0., 1., 0., 0., 0., 1., 0., 0., 0.]);
    let c = m(1, 3, &[0., 0., 1.]);
    let f = m(1, 3, &[0., 1., 0.]);
    (a, c, f)
}

/// Pattern triple whose extra output link `c13` destroys SFO.
pub fn extra_link() -> PatternTriple {
    let a = PatternMatrix::from_positions(3, 3, &[(1, 0)]).expect("valid pattern");
    let c = PatternMatrix::from_positions(1, 3, &[(0, 1), (0, 2)]).expect("valid pattern");
    let f = PatternMatrix::from_positions(1, 3, &[(0, 1)]).expect("valid pattern");
    PatternTriple::new(a, c, f).expect("consistent triple")
}

/// [`extra_link`] without the `c13` link; this one is SFO.
pub fn extra_link_removed() -> PatternTriple {
    let t = extra_link();
    let c = PatternMatrix::from_positions(1, 3, &[(0, 1)]).expect("valid pattern");
    PatternTriple::new(t.a, c, t.f).expect("consistent triple")
}

/// 7-state chain `x5 -> x4 -> x3 -> x2 -> x1 -> y1` with a side branch
/// `x7 -> x6 -> x2`. Returns `(A, C)` patterns.
pub fn branched_chain() -> (PatternMatrix, PatternMatrix) {
    // edge x_i -> x_j is A[j][i]
    let edges = [(1, 0), (2, 1), (3, 2), (4, 3), (5, 1), (6, 5)];
    let a = PatternMatrix::from_positions(7, 7, &edges.map(|(from, to)| (to, from)))
        .expect("valid pattern");
    let c = PatternMatrix::from_positions(1, 7, &[(0, 0)]).expect("valid pattern");
    (a, c)
}

/// 8-state diagonalizable system with eigenvalues `1 +- i` (multiplicity 3)
/// and `-2 +- i`, functional `F = [I_4, 0]`. Returns `(A, F)`.
pub fn design_system() -> (RealMatrix, RealMatrix) {
    let a = m(
        8,
        8,
        &[
            0., 4., 3., -2., -3., 0., -4., 1., //
            -1., -1., -1., 1., 0., 3., 1., 4., //
            2., 10., 1., -3., -3., 3., -3., 5., //
            -1., 9., 1., -2., -3., 9., -1., 13., //
            0., 0., 0., 0., 1., 1., 0., 0., //
            0., 0., 0., 0., -1., 1., 0., 0., //
            0., 0., 0., 0., 0., 0., 1., 1., //
            0., 0., 0., 0., 0., 0., -1., 1.,
        ],
    );
    let mut f = RealMatrix::zeros(4, 8);
    f.view_mut((0, 0), (4, 4)).fill_with_identity();
    (a, f)
}

/// Fixed two-row output matrix that makes [`design_system`] functionally observable.
pub fn design_system_given_c() -> RealMatrix {
    m(
        2,
        8,
        &[
            0., -3., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0.,
        ],
    )
}
