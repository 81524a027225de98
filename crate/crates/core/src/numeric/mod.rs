//! Dense real/complex linear algebra primitives and an exact prime-field
//! rank oracle.

pub mod field;
pub mod linalg;
pub mod schur;
pub mod spectral;

pub use field::{prime_field_rank, PrimeFieldMatrix, FIELD_PRIME};
pub use linalg::{
    kernel_basis, observability_matrix, rank, row_space_contains, ComplexMatrix, RankMode,
    RankPolicy, RealMatrix, MACHINE_EPSILON,
};
pub use schur::unstable_invariant_subspace;
pub use spectral::{
    distinct_eigenvalues, eigendecompose_diagonalizable, real_jordan_basis, EigenGroup,
    RealJordanBasis, SpectralData,
};
