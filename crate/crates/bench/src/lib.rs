//! Seeded workloads shared by the benchmarks.

use nilorb::random;
use nilorb::{adjoint_act, canonical_rep, AffineElement, Laurent, MatK, Partition, Settings};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The principal representative `D_{[n],k}` moved by a random group element.
pub fn conjugated_nilpotent(n: usize, k: usize, seed: u64) -> AffineElement {
    let mut rng = rng(seed);
    let sigma = Partition::new(vec![n]).expect("one part");
    let el = AffineElement::from_matrix(canonical_rep(&sigma, k as i64).expect("k below n")).expect("traceless");
    let h = random::group_element(&mut rng, n).expect("random group element");
    adjoint_act(&h, &el, &Settings::default()).expect("action on a canonical element")
}

/// A pair of Laurent polynomials with `count` terms each.
pub fn laurent_pair(count: usize, seed: u64) -> (Laurent, Laurent) {
    let mut rng = rng(seed);
    let span = count as i64;
    let mut draw = || loop {
        let p = random::laurent_poly(&mut rng, count, -span, span);
        if !p.is_exact_zero() {
            return p;
        }
    };
    (draw(), draw())
}

/// A unimodular matrix built from shears.
pub fn unimodular(n: usize, seed: u64) -> MatK {
    random::shear_product(&mut rng(seed), n, 2 * n)
}
