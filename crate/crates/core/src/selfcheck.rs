//! Seeded invariant suites with greedy counterexample shrinking.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{act, bracket, AffineElement, GroupElement, Settings};
use crate::laurent::{GaussianRational, Laurent, ZeroTest};
use crate::matk::MatK;
use crate::normalform::{canonical_rep, Partition};
use crate::orbits::classify;
use crate::random;

/// Deliberate defects for exercising the self-check itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negate the residue term of the adjoint action.
    ResidueSignFlip,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub cases: usize,
    pub settings: Settings,
    pub fault: Option<Fault>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0x6e696c6f7262, cases: 50, settings: Settings::default(), fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// The smallest failing case found and the reason it fails.
    pub counterexample: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "ok" } else { "FAILED" };
        write!(f, "{:<28} {:>4} passed {:>4} failed  {verdict}", self.name, self.passed, self.failed)
    }
}

type Verdict = std::result::Result<(), String>;

trait Suite {
    type Case: Clone + fmt::Debug;
    fn name(&self) -> &'static str;
    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case;
    fn check(&self, case: &Self::Case) -> Verdict;
    /// Strictly simpler variants of `case`.
    fn shrink(&self, case: &Self::Case) -> Vec<Self::Case>;
}

fn run_suite<S: Suite>(suite: &S, rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut report = SuiteReport { name: suite.name(), passed: 0, failed: 0, counterexample: None };
    for _ in 0..cases {
        let case = suite.generate(rng);
        match suite.check(&case) {
            Ok(()) => report.passed += 1,
            Err(why) => {
                report.failed += 1;
                if report.counterexample.is_none() {
                    let (small, why) = minimise(suite, case, why);
                    report.counterexample = Some(format!("{why}\n{small:#?}"));
                }
            }
        }
    }
    report
}

fn minimise<S: Suite>(suite: &S, mut case: S::Case, mut why: String) -> (S::Case, String) {
    'outer: loop {
        for candidate in suite.shrink(&case) {
            if let Err(w) = suite.check(&candidate) {
                case = candidate;
                why = w;
                continue 'outer;
            }
        }
        return (case, why);
    }
}

fn shrink_laurent(p: &Laurent) -> Vec<Laurent> {
    let terms: Vec<(i64, GaussianRational)> = p.terms().map(|(e, c)| (e, c.clone())).collect();
    let mut out = Vec::new();
    for skip in 0..terms.len() {
        out.push(Laurent::from_terms(
            terms.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, t)| t.clone()).collect::<Vec<_>>(),
        ));
    }
    for (i, (e, c)) in terms.iter().enumerate() {
        if *e != 0 || !c.is_one() {
            let mut simpler = terms.clone();
            simpler[i] = (0, GaussianRational::from(1));
            out.push(Laurent::from_terms(simpler));
        }
    }
    out
}

/// Simplifications of off-diagonal entries, which keep the trace unchanged.
fn shrink_offdiag(m: &MatK) -> Vec<MatK> {
    let mut out = Vec::new();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if i == j {
                continue;
            }
            for p in shrink_laurent(m.get(i, j)) {
                let mut c = m.clone();
                c.set(i, j, p);
                out.push(c);
            }
        }
    }
    out
}

fn shrink_element(a: &AffineElement) -> Vec<AffineElement> {
    let mut out: Vec<AffineElement> = shrink_offdiag(a.mat())
        .into_iter()
        .map(|m| AffineElement::new(m, a.c().clone(), a.d().clone()).expect("trace unchanged"))
        .collect();
    if !a.c().is_zero() {
        out.push(
            AffineElement::new(a.mat().clone(), GaussianRational::from(0), a.d().clone()).expect("trace unchanged"),
        );
    }
    out
}

/// A group element kept as its factors, so shrinking can drop them.
#[derive(Clone)]
struct Conjugator {
    z: GaussianRational,
    shears: Vec<(usize, usize, Laurent)>,
    n: usize,
}

impl fmt::Debug for Conjugator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> =
            self.shears.iter().map(|(i, j, p)| format!("I + ({})·E{}{}", p, i + 1, j + 1)).collect();
        write!(
            f,
            "d_{} · {}",
            self.z.to_literal(),
            if factors.is_empty() { "I".to_string() } else { factors.join(" · ") }
        )
    }
}

impl Conjugator {
    fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let count = rng.gen_range(0..=5);
        let shears = (0..count)
            .map(|_| {
                let m = random::shear(rng, n);
                let (i, j) = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !m.get(i, j).is_exact_zero())
                    .unwrap();
                (i, j, m.get(i, j).clone())
            })
            .collect();
        Conjugator { z: random::rotation(rng), shears, n }
    }

    fn group(&self) -> GroupElement {
        let g = self
            .shears
            .iter()
            .fold(MatK::identity(self.n), |acc, (i, j, p)| acc.mul(&MatK::shear(self.n, *i, *j, p.clone())).unwrap());
        GroupElement::new(self.z.clone(), g, 64).expect("shears have determinant one")
    }

    fn shrink(&self) -> Vec<Conjugator> {
        let mut out = Vec::new();
        if self.z != GaussianRational::from(1) {
            out.push(Conjugator { z: GaussianRational::from(1), ..self.clone() });
        }
        for k in 0..self.shears.len() {
            let mut c = self.clone();
            c.shears.remove(k);
            out.push(c);
            for p in shrink_laurent(&self.shears[k].2) {
                if !p.is_exact_zero() {
                    let mut c = self.clone();
                    c.shears[k].2 = p;
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Zero up to the precision carried by the difference.
fn expect_close(what: &str, t: ZeroTest) -> Verdict {
    match t {
        ZeroTest::NonZero => Err(format!("{what} does not hold")),
        _ => Ok(()),
    }
}

fn expect_zero(what: &str, t: ZeroTest) -> Verdict {
    match t {
        ZeroTest::NonZero => Err(format!("{what} does not hold")),
        ZeroTest::Undetermined => Err(format!("{what} is undecided at this precision")),
        ZeroTest::Zero => Ok(()),
    }
}

struct FieldAxioms;

impl Suite for FieldAxioms {
    type Case = (Laurent, Laurent, Laurent);

    fn name(&self) -> &'static str {
        "laurent field axioms"
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case {
        (random::laurent_poly(rng, 3, -3, 3), random::laurent_poly(rng, 3, -3, 3), random::laurent_poly(rng, 3, -3, 3))
    }

    fn check(&self, (a, b, c): &Self::Case) -> Verdict {
        expect_zero("associativity", (&(a * b) * c).compare(&(a * &(b * c))))?;
        expect_zero("distributivity", (a * &(b + c)).compare(&(&(a * b) + &(a * c))))?;
        expect_zero("commutativity", (a * b).compare(&(b * a)))?;
        if !a.is_exact_zero() && !b.is_exact_zero() {
            let (oa, ob) = (a.order().unwrap(), b.order().unwrap());
            if (a * b).order() != Ok(oa + ob) {
                return Err("order is not additive".into());
            }
            expect_close("a·inv(a) = 1", (a * &a.inv(32).map_err(|e| e.to_string())?).compare(&Laurent::one()))?;
        }
        if a.d_dt().residue().map_err(|e| e.to_string())? != GaussianRational::from(0) {
            return Err("derivative has a residue".into());
        }
        Ok(())
    }

    fn shrink(&self, (a, b, c): &Self::Case) -> Vec<Self::Case> {
        let mut out: Vec<Self::Case> = shrink_laurent(a).into_iter().map(|x| (x, b.clone(), c.clone())).collect();
        out.extend(shrink_laurent(b).into_iter().map(|x| (a.clone(), x, c.clone())));
        out.extend(shrink_laurent(c).into_iter().map(|x| (a.clone(), b.clone(), x)));
        out
    }
}

struct MatrixLaws;

impl Suite for MatrixLaws {
    type Case = (MatK, MatK);

    fn name(&self) -> &'static str {
        "det, inverse, product rule"
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case {
        let n = rng.gen_range(1..=4);
        let a = MatK::from_fn(n, |_, _| random::laurent_poly(rng, 2, -2, 2));
        let b = MatK::from_fn(n, |_, _| random::laurent_poly(rng, 2, -2, 2));
        (a, b)
    }

    fn check(&self, (a, b): &Self::Case) -> Verdict {
        let e = |x: crate::Error| x.to_string();
        let ab = a.mul(b).map_err(e)?;
        let lhs = ab.det(32).map_err(e)?;
        let rhs = &a.det(32).map_err(e)? * &b.det(32).map_err(e)?;
        expect_zero("det(AB) = det A det B", lhs.compare(&rhs))?;
        let prod_rule = a.d_dt().mul(b).map_err(e)?.add(&a.mul(&b.d_dt()).map_err(e)?).map_err(e)?;
        expect_zero("product rule", ab.d_dt().compare(&prod_rule).map_err(e)?)?;
        if a.det(32).map_err(e)?.zero_test() == ZeroTest::NonZero {
            let inv = a.inv(32).map_err(e)?;
            expect_close("A·inv(A) = I", a.mul(&inv).map_err(e)?.compare(&MatK::identity(a.n())).map_err(e)?)?;
        }
        Ok(())
    }

    fn shrink(&self, (a, b): &Self::Case) -> Vec<Self::Case> {
        let mut out: Vec<Self::Case> = shrink_offdiag(a).into_iter().map(|x| (x, b.clone())).collect();
        out.extend(shrink_offdiag(b).into_iter().map(|x| (a.clone(), x)));
        out
    }
}

struct BracketAxioms(Settings);

impl Suite for BracketAxioms {
    type Case = (AffineElement, AffineElement, AffineElement);

    fn name(&self) -> &'static str {
        "bracket antisymmetry, jacobi"
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case {
        let n = rng.gen_range(1..=4);
        let mut el = || {
            let a = random::element(rng, n);
            let mu = if rng.gen_bool(0.3) { random::coefficient(rng) } else { GaussianRational::from(0) };
            AffineElement::new(a.mat().clone(), a.c().clone(), mu).unwrap()
        };
        (el(), el(), el())
    }

    fn check(&self, (a, b, c): &Self::Case) -> Verdict {
        let f = self.0.form;
        let br = |x: &AffineElement, y: &AffineElement| bracket(x, y, f).map_err(|e| e.to_string());
        let sum = |x: AffineElement, y: AffineElement| x.add(&y).map_err(|e| e.to_string());
        expect_zero("antisymmetry", sum(br(a, b)?, br(b, a)?)?.compare(&AffineElement::zero(a.n())).unwrap())?;
        let jacobi = sum(sum(br(a, &br(b, c)?)?, br(b, &br(c, a)?)?)?, br(c, &br(a, b)?)?)?;
        expect_zero("jacobi", jacobi.compare(&AffineElement::zero(a.n())).unwrap())
    }

    fn shrink(&self, (a, b, c): &Self::Case) -> Vec<Self::Case> {
        let mut out: Vec<Self::Case> = shrink_element(a).into_iter().map(|x| (x, b.clone(), c.clone())).collect();
        out.extend(shrink_element(b).into_iter().map(|x| (a.clone(), x, c.clone())));
        out.extend(shrink_element(c).into_iter().map(|x| (a.clone(), b.clone(), x)));
        out
    }
}

struct Homomorphism {
    settings: Settings,
    flip: bool,
}

impl Suite for Homomorphism {
    type Case = (Conjugator, AffineElement, AffineElement);

    fn name(&self) -> &'static str {
        "adjoint action homomorphism"
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case {
        let n = rng.gen_range(2..=4);
        (Conjugator::random(rng, n), random::element(rng, n), random::element(rng, n))
    }

    fn check(&self, (g, x, y): &Self::Case) -> Verdict {
        let s = &self.settings;
        let h = g.group();
        let e = |x: crate::Error| x.to_string();
        let ad = |v: &AffineElement| act(&h, v, s, self.flip).map_err(e);
        let lhs = ad(&bracket(x, y, s.form).map_err(e)?)?;
        let rhs = bracket(&ad(x)?, &ad(y)?, s.form).map_err(e)?;
        match lhs.compare(&rhs).map_err(e)? {
            ZeroTest::NonZero => Err(format!(
                "Ad g[x,y] has c = {}, [Ad g x, Ad g y] has c = {}",
                lhs.c().to_literal(),
                rhs.c().to_literal()
            )),
            _ => Ok(()),
        }
    }

    fn shrink(&self, (g, x, y): &Self::Case) -> Vec<Self::Case> {
        let mut out: Vec<Self::Case> = g.shrink().into_iter().map(|c| (c, x.clone(), y.clone())).collect();
        out.extend(shrink_element(x).into_iter().map(|v| (g.clone(), v, y.clone())));
        out.extend(shrink_element(y).into_iter().map(|v| (g.clone(), x.clone(), v)));
        out
    }
}

#[derive(Clone)]
struct Labelled {
    sigma: Partition,
    k: usize,
    level: GaussianRational,
}

impl fmt::Debug for Labelled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D(partition={} k={}) + ({})c", self.sigma, self.k, self.level.to_literal())
    }
}

impl Labelled {
    fn element(&self) -> AffineElement {
        AffineElement::from_matrix(canonical_rep(&self.sigma, self.k as i64).unwrap())
            .unwrap()
            .with_c(self.level.clone())
    }
}

/// Orbit invariance on `n ≤ 4`. From `n = 5` on, `D_{[3,2],0}` and
/// `D_{[3,2],1}` share an orbit.
struct OrbitInvariance {
    settings: Settings,
    flip: bool,
}

impl Suite for OrbitInvariance {
    type Case = (Labelled, Conjugator);

    fn name(&self) -> &'static str {
        "orbit invariance (n <= 4)"
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case {
        let n = rng.gen_range(2..=4);
        let sigma = random::partition(rng, n);
        let k = rng.gen_range(0..sigma.smallest());
        (Labelled { sigma, k, level: random::level(rng) }, Conjugator::random(rng, n))
    }

    fn check(&self, (label, g): &Self::Case) -> Verdict {
        let s = &self.settings;
        let moved = act(&g.group(), &label.element(), s, self.flip).map_err(|e| e.to_string())?;
        let got = classify(&moved, s).map_err(|e| e.to_string())?;
        if got.partition != label.sigma || got.k != label.k || got.level != label.level {
            return Err(format!("classified as {got}"));
        }
        Ok(())
    }

    fn shrink(&self, (label, g): &Self::Case) -> Vec<Self::Case> {
        let mut out: Vec<Self::Case> = g.shrink().into_iter().map(|c| (label.clone(), c)).collect();
        if label.level != GaussianRational::from(0) {
            out.push((Labelled { level: GaussianRational::from(0), ..label.clone() }, g.clone()));
        }
        out
    }
}

/// Runs every suite with `config.cases` cases each.
pub fn run(config: &Config) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let s = config.settings;
    let flip = config.fault == Some(Fault::ResidueSignFlip);
    vec![
        run_suite(&FieldAxioms, &mut rng, config.cases),
        run_suite(&MatrixLaws, &mut rng, config.cases),
        run_suite(&BracketAxioms(s), &mut rng, config.cases),
        run_suite(&Homomorphism { settings: s, flip }, &mut rng, config.cases),
        run_suite(&OrbitInvariance { settings: s, flip }, &mut rng, config.cases),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let reports = run(&Config { cases: 10, ..Config::default() });
        assert!(reports.iter().all(SuiteReport::ok), "{reports:#?}");
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = Config { seed: 42, cases: 5, ..Config::default() };
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn residue_sign_flip_is_caught_and_shrunk() {
        let reports = run(&Config { cases: 20, fault: Some(Fault::ResidueSignFlip), ..Config::default() });
        let hom = reports.iter().find(|r| r.name == "adjoint action homomorphism").unwrap();
        assert!(hom.failed > 0);
        let dump = hom.counterexample.as_ref().unwrap();
        assert!(dump.contains("Ad g[x,y]"), "{dump}");
        assert!(reports.iter().any(|r| r.name.starts_with("orbit invariance") && !r.ok()));
    }
}
