//! Orbit labels, conjugacy and canonical representatives.

use num_traits::Zero;

use crate::affine::{adjoint_act, is_nilpotent, AffineElement, GroupElement, Settings};
use crate::error::{Error, Result};
use crate::laurent::{GaussianRational, Laurent, ZeroTest};
use crate::matk::MatK;
use crate::normalform::{canonical_rep, quasi_jordanize, OrbitLabel, Partition, QuasiJordanForm};

/// The label `(σ, k, λ)` of the orbit through `a`.
///
/// `σ` and `k = 𝔫 mod i_d` come from the quasi-Jordan form `D = h·x·h⁻¹`,
/// and `λ` is the central part of `Ad h (a)`.
pub fn classify(a: &AffineElement, settings: &Settings) -> Result<OrbitLabel> {
    if !a.d().is_zero() {
        return Err(Error::NotNilpotent("element has nonzero derivation component".into()));
    }
    if !is_nilpotent(a)? {
        return Err(Error::NotNilpotent("x^n is not zero".into()));
    }
    let (h, form) = quasi_jordanize(a.mat(), settings.working_prec)?;
    let partition = form.partition();
    let smallest = partition.smallest() as i64;
    let k = form.mult_order()?.rem_euclid(smallest) as usize;
    let level = if h.g().d_dt().zero_test() == ZeroTest::Zero {
        a.c().clone()
    } else {
        adjoint_act(&h, a, settings)?.c().clone()
    };
    Ok(OrbitLabel { partition, k, level })
}

pub fn level_of(a: &AffineElement, settings: &Settings) -> Result<GaussianRational> {
    Ok(classify(a, settings)?.level)
}

pub fn are_conjugate(a: &AffineElement, b: &AffineElement, settings: &Settings) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    Ok(classify(a, settings)? == classify(b, settings)?)
}

/// A diagonal `h` with `h·src·h⁻¹ = dst`.
///
/// Entries run `a_1 = t_k`, `a_{j+1} = a_j p_j / q_j` inside each block, with
/// `t_k = 1` except on the last block, where `t^m` balances the determinant.
pub fn conjugator_quasi_jordan(
    src: &QuasiJordanForm,
    dst: &QuasiJordanForm,
    working_prec: i64,
) -> Result<GroupElement> {
    let (ps, pd) = (src.partition(), dst.partition());
    if ps != pd {
        return Err(Error::ShapeMismatch(ps.parts().to_vec(), pd.parts().to_vec()));
    }
    let smallest = ps.smallest();
    let diff = dst.mult_order()? - src.mult_order()?;
    if diff.rem_euclid(smallest as i64) != 0 {
        return Err(Error::NotConjugate { diff, modulus: smallest });
    }
    let m = diff / smallest as i64;
    let last = src.blocks().len() - 1;
    let mut diag = Vec::with_capacity(src.n());
    for (b, (sb, db)) in src.blocks().iter().zip(dst.blocks()).enumerate() {
        let mut a = if b == last { Laurent::t_pow(m) } else { Laurent::one() };
        diag.push(a.clone());
        for (p, q) in sb.superdiag().iter().zip(db.superdiag()) {
            a = (&a * p).div(q, working_prec)?;
            diag.push(a.clone());
        }
    }
    let g = MatK::diag(diag);
    if g.mul(&src.matrix())?.compare(&dst.matrix().mul(&g)?)? == ZeroTest::NonZero {
        return Err(Error::Verification("h·src differs from dst·h".into()));
    }
    GroupElement::from_matrix(g, working_prec)
}

/// One canonical representative per `(σ, k)`, partitions in the order of
/// [`Partition::all`] and `k` ascending.
pub fn enumerate_orbits(n: usize, level: &GaussianRational) -> Vec<(OrbitLabel, MatK)> {
    let mut out = Vec::new();
    for partition in Partition::all(n) {
        for k in 0..partition.smallest() {
            let rep = canonical_rep(&partition, k as i64).expect("k below the smallest part");
            out.push((OrbitLabel { partition: partition.clone(), k, level: level.clone() }, rep));
        }
    }
    out
}
