//! Seeded generators for property suites, self-checks and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::affine::{AffineElement, GroupElement};
use crate::error::Result;
use crate::laurent::{GaussianRational, Laurent};
use crate::matk::MatK;
use crate::normalform::{canonical_rep, Partition, QuasiJordanBlock, QuasiJordanForm};

/// A small nonzero Gaussian integer, occasionally with an imaginary part.
pub fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let re = rng.gen_range(-3..=3);
        let im = if rng.gen_bool(0.2) { rng.gen_range(-2..=2) } else { 0 };
        if re != 0 || im != 0 {
            return GaussianRational::from_parts(re, im);
        }
    }
}

/// A Laurent polynomial with at most `max_terms` terms and exponents in `lo..=hi`.
pub fn laurent_poly<R: Rng + ?Sized>(rng: &mut R, max_terms: usize, lo: i64, hi: i64) -> Laurent {
    let terms = rng.gen_range(0..=max_terms);
    Laurent::from_terms((0..terms).map(|_| (rng.gen_range(lo..=hi), coefficient(rng))).collect::<Vec<_>>())
}

fn nonzero_poly<R: Rng + ?Sized>(rng: &mut R, max_terms: usize, lo: i64, hi: i64) -> Laurent {
    loop {
        let p = laurent_poly(rng, max_terms.max(1), lo, hi);
        if !p.is_exact_zero() {
            return p;
        }
    }
}

/// `I + p·E_ij` with `p` having at most three terms, exponents in `[-3, 3]`.
pub fn shear<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MatK {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    MatK::shear(n, i, j, nonzero_poly(rng, 3, -3, 3))
}

pub fn shear_product<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> MatK {
    (0..count).fold(MatK::identity(n), |acc, _| acc.mul(&shear(rng, n)).expect("same dimension"))
}

/// Rotation parameters used by the invariance suites.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    [GaussianRational::from(1), GaussianRational::from(2), GaussianRational::from_parts(1, 1)]
        .choose(rng)
        .unwrap()
        .clone()
}

/// `d_z` composed with up to five shears, so `Ad = Ad d_z ∘ Ad g`.
pub fn group_element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<GroupElement> {
    let count = rng.gen_range(0..=5);
    GroupElement::new(rotation(rng), shear_product(rng, n, count), 64)
}

/// A traceless matrix with polynomial entries, exponents in `[-3, 3]`.
pub fn traceless<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MatK {
    let mut m =
        MatK::from_fn(n, |i, j| if i == j && i == n - 1 { Laurent::zero() } else { laurent_poly(rng, 2, -3, 3) });
    let tr = m.trace();
    let last = m.get(n - 1, n - 1) - &tr;
    m.set(n - 1, n - 1, last);
    m
}

/// A random element of `sl_n(K) ⊕ Cc`.
pub fn element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AffineElement {
    let c = if rng.gen_bool(0.5) { coefficient(rng) } else { GaussianRational::from(0) };
    AffineElement::new(traceless(rng, n), c, GaussianRational::from(0)).expect("traceless by construction")
}

pub fn partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Partition {
    Partition::all(n).choose(rng).unwrap().clone()
}

/// The levels exercised by the invariance suites.
pub fn level<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    [GaussianRational::from(0), GaussianRational::from(1), GaussianRational::from_ratio(-3, 2)]
        .choose(rng)
        .unwrap()
        .clone()
}

/// `D_{σ,k} + λc` for random `σ ⊢ n`, `k` and `λ`.
pub fn canonical_element<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> (Partition, usize, GaussianRational, AffineElement) {
    let sigma = partition(rng, n);
    let k = rng.gen_range(0..sigma.smallest());
    let lambda = level(rng);
    let mat = canonical_rep(&sigma, k as i64).expect("valid shift");
    let el = AffineElement::from_matrix(mat).expect("nilpotent is traceless").with_c(lambda.clone());
    (sigma, k, lambda, el)
}

/// A single quasi-Jordan block of size `n` whose entries are a monomial times
/// a unit `1 + (…)t`.
pub fn single_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuasiJordanForm {
    let entries = (0..n - 1)
        .map(|_| {
            let mono = Laurent::monomial(coefficient(rng), rng.gen_range(-3..=3));
            let unit = &Laurent::one() + &laurent_poly(rng, 2, 1, 3);
            &mono * &unit
        })
        .collect();
    QuasiJordanForm::new(vec![QuasiJordanBlock::new(entries).expect("units times monomials are nonzero")]).unwrap()
}
