#![allow(dead_code)]

pub mod criteria;

use funcobs::numeric::RealMatrix;
use funcobs::structural::{PatternMatrix, PatternTriple};
use funcobs::SystemTriple;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_pattern<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    density: f64,
) -> PatternMatrix {
    let pos: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    PatternMatrix::from_positions(rows, cols, &pos).unwrap()
}

/// Pattern triple with `p` candidate sensor rows and functional states drawn
/// at random (at least one).
pub fn random_pattern_triple<R: Rng>(rng: &mut R, n: usize, p: usize) -> PatternTriple {
    let density = rng.gen_range(0.15..0.5);
    let a = random_pattern(rng, n, n, density);
    let dc = rng.gen_range(0.15..0.45);
    let c = random_pattern(rng, p, n, dc);
    let mut states: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    if states.is_empty() {
        states.push(rng.gen_range(0..n));
    }
    PatternTriple::with_functional_states(a, c, &states).unwrap()
}

pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let g = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    g.qr().q()
}

/// Block-diagonal real spectrum with deliberate repetitions: real eigenvalues
/// from `{-2, -1, 0, 1, 2}` and rotation-scaling blocks `a +- b i`.
pub fn random_modal_form<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let mut d = RealMatrix::zeros(n, n);
    let mut k = 0;
    while k < n {
        if k + 1 < n && rng.gen_bool(0.35) {
            let a = rng.gen_range(-1..=1) as f64;
            let b = rng.gen_range(1..=2) as f64;
            d[(k, k)] = a;
            d[(k + 1, k + 1)] = a;
            d[(k, k + 1)] = b;
            d[(k + 1, k)] = -b;
            k += 2;
        } else {
            d[(k, k)] = rng.gen_range(-2..=2) as f64;
            k += 1;
        }
    }
    d
}

/// Sparse modal-coordinate matrix: integer entries, each zero with
/// probability `zero_prob`.
pub fn sparse_integer<R: Rng>(rng: &mut R, rows: usize, cols: usize, zero_prob: f64) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(zero_prob) {
            0.0
        } else {
            rng.gen_range(-2..=2) as f64
        }
    })
}

/// Integer modal data `(D, C~, F~)` and the orthogonal `Q` mapping it to
/// `(Q D Q^T, C~ Q^T, F~ Q^T)`.
pub struct ModalSystem {
    pub q: RealMatrix,
    pub d: RealMatrix,
    pub c: RealMatrix,
    pub f: RealMatrix,
}

impl ModalSystem {
    pub fn triple(&self) -> SystemTriple {
        let qt = self.q.transpose();
        SystemTriple::new(&self.q * &self.d * &qt, &self.c * &qt, &self.f * &qt).unwrap()
    }
}

pub fn random_modal_system<R: Rng>(rng: &mut R, n: usize, p: usize, r: usize) -> ModalSystem {
    let q = random_orthogonal(rng, n);
    let d = random_modal_form(rng, n);
    let c = sparse_integer(rng, p, n, 0.5);
    let f = sparse_integer(rng, r, n, 0.4);
    ModalSystem { q, d, c, f }
}

/// Diagonalizable `(A, C, F)` built by an orthogonal similarity from a real
/// modal form, so the eigenvector basis stays well conditioned while the
/// modal structure of `C` and `F` is controlled exactly.
pub fn random_diagonalizable_triple<R: Rng>(
    rng: &mut R,
    n: usize,
    p: usize,
    r: usize,
) -> SystemTriple {
    random_modal_system(rng, n, p, r).triple()
}

/// Dense random system with sparse integer `A`, `C`, `F`.
pub fn random_sparse_triple<R: Rng>(rng: &mut R, n: usize, p: usize, r: usize) -> SystemTriple {
    let a = sparse_integer(rng, n, n, 0.6);
    let c = sparse_integer(rng, p, n, 0.6);
    let f = sparse_integer(rng, r, n, 0.5);
    SystemTriple::new(a, c, f).unwrap()
}

/// All subsets of `0..p` as sorted index lists.
pub fn subsets(p: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << p))
        .map(|m| (0..p).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

pub fn matrix(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, data)
}
