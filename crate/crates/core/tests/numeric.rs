mod common;

use common::*;
use funcobs::numeric::schur::{is_unstable, stability_tie_tolerance};
use funcobs::numeric::spectral::condition_number;
use funcobs::numeric::{
    distinct_eigenvalues, eigendecompose_diagonalizable, kernel_basis, rank, real_jordan_basis,
    row_space_contains, unstable_invariant_subspace, RankPolicy, RealMatrix, MACHINE_EPSILON,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn p() -> RankPolicy {
    RankPolicy::default()
}

fn norm_inf(m: &RealMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Small integer matrices: exact zeros and repeated rows make rank deficiency common.
fn int_matrix(max_rows: usize, cols: usize) -> impl Strategy<Value = RealMatrix> {
    (1..=max_rows).prop_flat_map(move |rows| {
        proptest::collection::vec(-2i32..=2, rows * cols)
            .prop_map(move |v| RealMatrix::from_fn(rows, cols, |i, j| v[i * cols + j] as f64))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stacking_never_lowers_rank(m in int_matrix(4, 4), r in int_matrix(3, 4)) {
        let stacked = RealMatrix::from_fn(m.nrows() + r.nrows(), 4, |i, j| {
            if i < m.nrows() { m[(i, j)] } else { r[(i - m.nrows(), j)] }
        });
        let rs = rank(&stacked, &p()).unwrap();
        let rm = rank(&m, &p()).unwrap();
        prop_assert!(rs >= rm);
        prop_assert_eq!(rs == rm, row_space_contains(&m, &r, &p()).unwrap());
    }

    #[test]
    fn rank_nullity(m in int_matrix(5, 5)) {
        let k = kernel_basis(&m, &p()).unwrap();
        prop_assert_eq!(rank(&m, &p()).unwrap() + k.ncols(), m.ncols());
        if k.ncols() > 0 {
            prop_assert!(norm_inf(&(&m * &k)) < 1e-10);
        }
    }

    #[test]
    fn unstable_subspace_is_invariant_and_sized_by_the_spectrum(seed in 0u64..10_000, margin in 0.0f64..1.5) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=6);
        let m = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
        let w = unstable_invariant_subspace(&m, margin).unwrap();
        let tie = stability_tie_tolerance(&m);
        let eigen = distinct_eigenvalues(&m, None).unwrap();
        let unstable: usize = eigen.iter().filter(|(l, _)| is_unstable(*l, margin, tie)).map(|(_, d)| d).sum();
        prop_assert_eq!(w.ncols(), unstable);
        prop_assert_eq!(w.ncols() + (n - unstable), n);
        if w.ncols() > 0 {
            // A W = W (W^T A W) for an orthonormal basis of an invariant subspace
            let residual = &m * &w - &w * (w.transpose() * &m * &w);
            prop_assert!(norm_inf(&residual) < 1e-8 * norm_inf(&m).max(1.0));
            let gram = w.transpose() * &w - RealMatrix::identity(w.ncols(), w.ncols());
            prop_assert!(norm_inf(&gram) < 1e-10);
        }
    }
}

#[test]
fn eigengroups_satisfy_their_residual_bound() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let a = random_diagonalizable_triple(&mut rng, n, 1, 1).a().clone();
        let spec = eigendecompose_diagonalizable(&a, &p(), None).unwrap();
        let tol = p().residual_tolerance(1.0);
        let ac = a.map(|x| Complex64::new(x, 0.0));
        for g in &spec.groups {
            let r: DMatrix<Complex64> = &ac * &g.vectors - &g.vectors * g.eigenvalue;
            let worst = (0..r.nrows())
                .map(|i| r.row(i).iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max);
            assert!(
                worst <= 10.0 * tol * norm_inf(&a).max(1.0),
                "residual {worst:e}"
            );
        }
        assert_eq!(spec.dimension(), n);
    }
}

#[test]
fn real_jordan_round_trip() {
    let mut rng = rng(5);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let a = random_diagonalizable_triple(&mut rng, n, 1, 1).a().clone();
        let spec = eigendecompose_diagonalizable(&a, &p(), None).unwrap();
        let rj = real_jordan_basis(&spec).unwrap();
        let inv = rj.basis.clone().try_inverse().unwrap();
        let err = norm_inf(&(inv * &a * &rj.basis - rj.jordan_form()));
        let bound = 1e3 * MACHINE_EPSILON * norm_inf(&a).max(1.0) * condition_number(&rj.basis);
        assert!(err <= bound, "round trip error {err:e} > {bound:e}");
    }
}

#[test]
fn defective_matrices_are_refused() {
    let a = matrix(2, 2, &[1., 1., 0., 1.]);
    assert!(eigendecompose_diagonalizable(&a, &p(), None).is_err());
    assert_eq!(distinct_eigenvalues(&a, None).unwrap().len(), 1);
}
