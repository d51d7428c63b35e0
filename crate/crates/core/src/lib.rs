//! Nilpotent orbits of the affine Kac-Moody algebra `sl_n^(1)` under the
//! loop-group adjoint action, computed exactly over Laurent series with
//! Gaussian-rational coefficients.

pub mod affine;
pub mod error;
pub mod laurent;
pub mod matk;
pub mod normalform;
pub mod orbits;
pub mod random;
pub mod selfcheck;

pub use affine::{
    adjoint_act, bracket, form_t, is_nilpotent, AffineElement, DetMode, FormNorm, GroupElement, Settings,
};
pub use error::{Error, Result};
pub use laurent::{GaussianRational, Laurent, Precision, ZeroTest, DEFAULT_WORKING_PRECISION};
pub use matk::MatK;
pub use normalform::{
    canonical_form, canonical_rep, jordan_transform, quasi_jordanize, rank_profile_partition, OrbitLabel, Partition,
    QuasiJordanBlock, QuasiJordanForm,
};
pub use orbits::{are_conjugate, classify, conjugator_quasi_jordan, enumerate_orbits, level_of};
