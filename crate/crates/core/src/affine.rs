//! The completed affine algebra `sl_n(K) ⊕ Cc ⊕ Cd` and the action of
//! `C* ⋉ SL_n(K)` on it.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{GaussianRational, Laurent, ZeroTest, DEFAULT_WORKING_PRECISION};
use crate::matk::MatK;

/// Normalisation of the invariant form `⟨x, y⟩ = κ·tr(xy)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FormNorm {
    /// `κ = 2n`, the Killing form of `sl_n`.
    #[default]
    Killing,
    /// `κ = 1`.
    Trace,
}

impl FormNorm {
    pub fn kappa(self, n: usize) -> GaussianRational {
        match self {
            FormNorm::Killing => GaussianRational::from(2 * n as i64),
            FormNorm::Trace => GaussianRational::from(1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub working_prec: i64,
    pub form: FormNorm,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { working_prec: DEFAULT_WORKING_PRECISION, form: FormNorm::Killing }
    }
}

/// `x + λc + μd` with `x ∈ sl_n(K)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    mat: MatK,
    c: GaussianRational,
    d: GaussianRational,
}

impl AffineElement {
    /// Rejects matrices whose trace is provably nonzero.
    pub fn new(mat: MatK, c: GaussianRational, d: GaussianRational) -> Result<Self> {
        if mat.trace().zero_test() == ZeroTest::NonZero {
            return Err(Error::NotTraceless);
        }
        Ok(AffineElement { mat, c, d })
    }

    pub fn from_matrix(mat: MatK) -> Result<Self> {
        Self::new(mat, GaussianRational::zero(), GaussianRational::zero())
    }

    pub fn zero(n: usize) -> Self {
        AffineElement { mat: MatK::zeros(n), c: GaussianRational::zero(), d: GaussianRational::zero() }
    }

    /// The central element `c`.
    pub fn central(n: usize) -> Self {
        AffineElement { c: GaussianRational::from(1), ..Self::zero(n) }
    }

    /// The derivation `d`.
    pub fn derivation(n: usize) -> Self {
        AffineElement { d: GaussianRational::from(1), ..Self::zero(n) }
    }

    pub fn with_c(mut self, c: GaussianRational) -> Self {
        self.c = c;
        self
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    pub fn mat(&self) -> &MatK {
        &self.mat
    }

    pub fn c(&self) -> &GaussianRational {
        &self.c
    }

    pub fn d(&self) -> &GaussianRational {
        &self.d
    }

    pub fn add(&self, other: &AffineElement) -> Result<AffineElement> {
        Ok(AffineElement { mat: self.mat.add(&other.mat)?, c: &self.c + &other.c, d: &self.d + &other.d })
    }

    pub fn sub(&self, other: &AffineElement) -> Result<AffineElement> {
        Ok(AffineElement { mat: self.mat.sub(&other.mat)?, c: &self.c - &other.c, d: &self.d - &other.d })
    }

    pub fn scale(&self, s: &GaussianRational) -> AffineElement {
        AffineElement { mat: self.mat.scale(&Laurent::constant(s.clone())), c: &self.c * s, d: &self.d * s }
    }

    /// Three-valued equality; the scalar parts are always decided.
    pub fn compare(&self, other: &AffineElement) -> Result<ZeroTest> {
        if self.c != other.c || self.d != other.d {
            return Ok(ZeroTest::NonZero);
        }
        self.mat.compare(&other.mat)
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}  + ({})c + ({})d", self.mat, self.c.to_literal(), self.d.to_literal())
    }
}

/// `⟨a, b⟩_t = κ·tr(ab)`.
pub fn form_t(a: &MatK, b: &MatK, kappa: &GaussianRational) -> Result<Laurent> {
    Ok(a.trace_of_product(b)?.scale(kappa))
}

/// `[x_a + λ_a c + μ_a d, x_b + λ_b c + μ_b d]`.
pub fn bracket(a: &AffineElement, b: &AffineElement, form: FormNorm) -> Result<AffineElement> {
    let (xa, xb) = (&a.mat, &b.mat);
    let mut mat = xa.mul(xb)?.sub(&xb.mul(xa)?)?;
    let t = Laurent::t_pow(1);
    let dxa = xa.d_dt();
    if !a.d.is_zero() {
        mat = mat.add(&xb.d_dt().scale(&t).scale(&Laurent::constant(a.d.clone())))?;
    }
    if !b.d.is_zero() {
        mat = mat.sub(&dxa.scale(&t).scale(&Laurent::constant(b.d.clone())))?;
    }
    let c = form_t(&dxa, xb, &form.kappa(a.n()))?.residue()?;
    Ok(AffineElement { mat, c, d: GaussianRational::zero() })
}

/// `μ = 0` and `x^n = 0`.
pub fn is_nilpotent(a: &AffineElement) -> Result<bool> {
    if !a.d.is_zero() {
        return Ok(false);
    }
    match a.mat.pow(a.n() as u32).zero_test() {
        ZeroTest::Zero => Ok(true),
        ZeroTest::NonZero => Ok(false),
        ZeroTest::Undetermined => Err(crate::error::exhausted("cannot decide whether x^n vanishes")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetMode {
    /// `det g = 1`.
    ExactOne,
    /// `det g = r^n` for some `r ∈ K`, so `g` is an `SL_n(K)` element times `r·I`.
    NthPowerCertified,
}

/// `(z, g) ∈ C* ⋉ SL_n(K)`, acting as `Ad d_z ∘ Ad g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    z: GaussianRational,
    g: MatK,
    det_mode: DetMode,
}

impl GroupElement {
    /// Computes `det g` and picks the mode it supports.
    pub fn new(z: GaussianRational, g: MatK, working_prec: i64) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroScale);
        }
        let det = g.det(working_prec)?;
        let det_mode = match det.compare(&Laurent::one()) {
            ZeroTest::Zero | ZeroTest::Undetermined => DetMode::ExactOne,
            ZeroTest::NonZero => {
                let order = match det.order() {
                    Ok(v) => v,
                    Err(Error::ZeroHasNoOrder) => return Err(Error::Singular),
                    Err(e) => return Err(e),
                };
                if order.rem_euclid(g.n() as i64) != 0 {
                    return Err(Error::NotInGroup { order, n: g.n() });
                }
                DetMode::NthPowerCertified
            }
        };
        Ok(GroupElement { z, g, det_mode })
    }

    pub fn from_matrix(g: MatK, working_prec: i64) -> Result<Self> {
        Self::new(GaussianRational::from(1), g, working_prec)
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { z: GaussianRational::from(1), g: MatK::identity(n), det_mode: DetMode::ExactOne }
    }

    /// The loop rotation `d_z`.
    pub fn rotation(n: usize, z: GaussianRational) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(GroupElement { z, ..Self::identity(n) })
    }

    pub(crate) fn from_parts_unchecked(z: GaussianRational, g: MatK, det_mode: DetMode) -> Self {
        GroupElement { z, g, det_mode }
    }

    pub fn z(&self) -> &GaussianRational {
        &self.z
    }

    pub fn g(&self) -> &MatK {
        &self.g
    }

    pub fn det_mode(&self) -> DetMode {
        self.det_mode
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// The group product, so that `Ad(self·other) = Ad self ∘ Ad other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let z2_inv = other.z.inv().ok_or(Error::ZeroScale)?;
        let g = self.g.scale_t(&z2_inv)?.mul(&other.g)?;
        let det_mode = if self.det_mode == DetMode::ExactOne && other.det_mode == DetMode::ExactOne {
            DetMode::ExactOne
        } else {
            DetMode::NthPowerCertified
        };
        Ok(GroupElement { z: &self.z * &other.z, g, det_mode })
    }

    pub fn inverse(&self, working_prec: i64) -> Result<GroupElement> {
        let z_inv = self.z.inv().ok_or(Error::ZeroScale)?;
        let g = self.g.inv(working_prec)?.scale_t(&self.z)?;
        Ok(GroupElement { z: z_inv, g, det_mode: self.det_mode })
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement(z = {}, {:?}, {:?})", self.z.to_literal(), self.det_mode, self.g)
    }
}

/// `Ad(z, g)(x + λc + μd)`.
///
/// With `A = g⁻¹ dg/dt` the matrix part is `g x g⁻¹ − μ t (dg/dt) g⁻¹`, then
/// rescaled by `t ↦ zt`; the central part is `λ + res⟨A, x − ½ μ t A⟩`.
pub fn adjoint_act(h: &GroupElement, a: &AffineElement, settings: &Settings) -> Result<AffineElement> {
    act(h, a, settings, false)
}

/// [`adjoint_act`], optionally with the residue term negated (self-check fault injection).
pub(crate) fn act(
    h: &GroupElement,
    a: &AffineElement,
    settings: &Settings,
    flip_residue: bool,
) -> Result<AffineElement> {
    if h.n() != a.n() {
        return Err(Error::DimensionMismatch(h.n(), a.n()));
    }
    if !a.d.is_zero() && h.det_mode != DetMode::ExactOne {
        return Err(Error::CertifiedDetWithDerivation);
    }
    let wp = settings.working_prec;
    let g = &h.g;
    let g_inv = g.inv(wp)?;
    let dg = g.d_dt();
    let mut mat = g.mul(&a.mat)?.mul(&g_inv)?;
    let mut c = a.c.clone();
    if dg.zero_test() != ZeroTest::Zero {
        let maurer = g_inv.mul(&dg)?;
        let mut paired = a.mat.clone();
        if !a.d.is_zero() {
            let mu = Laurent::constant(a.d.clone());
            let t = Laurent::t_pow(1);
            mat = mat.sub(&dg.mul(&g_inv)?.scale(&(&mu * &t)))?;
            let half = Laurent::constant(GaussianRational::real(BigRational::new(1.into(), 2.into())));
            paired = paired.sub(&maurer.scale(&(&(&half * &mu) * &t)))?;
        }
        let res = form_t(&maurer, &paired, &settings.form.kappa(a.n()))?.residue()?;
        c = if flip_residue { &c - &res } else { &c + &res };
    }
    if !h.z.is_one() {
        mat = mat.scale_t(&h.z)?;
    }
    Ok(AffineElement { mat, c, d: a.d.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Laurent {
        Laurent::parse(s).unwrap()
    }

    fn gr(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    fn elem(m: MatK, c: i64) -> AffineElement {
        AffineElement::new(m, gr(c), gr(0)).unwrap()
    }

    fn e(n: usize, i: usize, j: usize, p: &str) -> MatK {
        MatK::unit(n, i, j).scale(&lit(p))
    }

    #[test]
    fn trace_is_checked() {
        assert_eq!(AffineElement::from_matrix(MatK::identity(2)), Err(Error::NotTraceless));
        assert!(AffineElement::from_matrix(MatK::diag(vec![lit("t"), lit("-t")])).is_ok());
    }

    #[test]
    fn bracket_examples() {
        let x = elem(e(2, 0, 1, "t"), 0);
        let central = AffineElement::central(2);
        assert_eq!(bracket(&central, &x, FormNorm::Killing).unwrap(), AffineElement::zero(2));
        assert_eq!(bracket(&AffineElement::derivation(2), &x, FormNorm::Killing).unwrap(), x);
        let y = elem(e(2, 1, 0, "t^-1"), 0);
        let expected = elem(MatK::diag(vec![lit("1"), lit("-1")]), 4);
        assert_eq!(bracket(&x, &y, FormNorm::Killing).unwrap(), expected);
        assert_eq!(bracket(&x, &y, FormNorm::Trace).unwrap(), expected.with_c(gr(1)));
    }

    #[test]
    fn form_examples() {
        let k = FormNorm::Killing.kappa(2);
        assert_eq!(form_t(&MatK::unit(2, 0, 1), &MatK::unit(2, 1, 0), &k).unwrap(), lit("4"));
        let x = e(3, 0, 1, "t").add(&e(3, 1, 2, "1 + t^-2")).unwrap();
        assert!(form_t(&x, &x, &FormNorm::Killing.kappa(3)).unwrap().is_exact_zero());
        assert_eq!(form_t(&e(2, 0, 1, "t"), &e(2, 1, 0, "t^-1"), &k).unwrap(), lit("4"));
    }

    /// Brute-force Killing form `tr(ad x ∘ ad y)` on sl_2 over the basis E12, E21, H.
    #[test]
    fn killing_normalisation_matches_ad_trace() {
        let basis = [MatK::unit(2, 0, 1), MatK::unit(2, 1, 0), MatK::diag(vec![lit("1"), lit("-1")])];
        // coordinates of a traceless 2x2 matrix in that basis
        let coords = |m: &MatK| [m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(0, 0).clone()];
        let ad = |x: &MatK, y: &MatK| x.mul(y).unwrap().sub(&y.mul(x).unwrap()).unwrap();
        for x in &basis {
            for y in &basis {
                let mut tr = Laurent::zero();
                for (k, b) in basis.iter().enumerate() {
                    tr = &tr + &coords(&ad(x, &ad(y, b)))[k];
                }
                assert_eq!(tr, form_t(x, y, &FormNorm::Killing.kappa(2)).unwrap());
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&elem(MatK::unit(2, 0, 1), 5)).unwrap());
        assert!(!is_nilpotent(&AffineElement::derivation(2)).unwrap());
        assert!(!is_nilpotent(&elem(MatK::diag(vec![lit("1"), lit("-1")]), 0)).unwrap());
    }

    #[test]
    fn action_examples() {
        let x = elem(e(2, 0, 1, "t"), 3);
        let s = Settings::default();
        assert_eq!(adjoint_act(&GroupElement::identity(2), &x, &s).unwrap(), x);
        let rot = GroupElement::rotation(2, gr(2)).unwrap();
        assert_eq!(adjoint_act(&rot, &x, &s).unwrap(), elem(e(2, 0, 1, "2*t"), 3));
    }

    #[test]
    fn shear_action_on_t_e12() {
        let g = GroupElement::from_matrix(MatK::shear(2, 1, 0, lit("t^-1")), 64).unwrap();
        assert_eq!(g.det_mode(), DetMode::ExactOne);
        let out = adjoint_act(&g, &elem(e(2, 0, 1, "t"), 0), &Settings::default()).unwrap();
        let expected = MatK::from_rows(vec![vec![lit("-1"), lit("t")], vec![lit("-t^-1"), lit("1")]]).unwrap();
        assert_eq!(out.mat(), &expected);
        assert_eq!(out.c(), &gr(-4));
    }

    /// With g = diag(t, t⁻¹) the central parts of Ad g[x, y] and [Ad g x, Ad g y]
    /// only agree when the residue term enters with a plus sign.
    #[test]
    fn residue_sign_is_a_homomorphism() {
        let g = GroupElement::from_matrix(MatK::diag(vec![lit("t"), lit("t^-1")]), 64).unwrap();
        let s = Settings::default();
        let x = elem(MatK::unit(2, 0, 1), 0);
        let y = elem(MatK::unit(2, 1, 0), 0);
        let lhs = adjoint_act(&g, &bracket(&x, &y, s.form).unwrap(), &s).unwrap();
        let rhs = bracket(&adjoint_act(&g, &x, &s).unwrap(), &adjoint_act(&g, &y, &s).unwrap(), s.form).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.c(), &gr(8));
    }

    #[test]
    fn group_membership() {
        assert_eq!(
            GroupElement::from_matrix(MatK::diag(vec![lit("t"), lit("1")]), 64),
            Err(Error::NotInGroup { order: 1, n: 2 })
        );
        let cert = GroupElement::from_matrix(MatK::diag(vec![lit("t"), lit("t")]), 64).unwrap();
        assert_eq!(cert.det_mode(), DetMode::NthPowerCertified);
        let d = AffineElement::derivation(2);
        assert_eq!(adjoint_act(&cert, &d, &Settings::default()), Err(Error::CertifiedDetWithDerivation));
        assert_eq!(GroupElement::rotation(2, gr(0)), Err(Error::ZeroScale));
    }

    #[test]
    fn derivation_picks_up_maurer_cartan_term() {
        // g = diag(t, t⁻¹): −t g' g⁻¹ = diag(−1, 1) and −½ res⟨A, tA⟩ = −4
        let g = GroupElement::from_matrix(MatK::diag(vec![lit("t"), lit("t^-1")]), 64).unwrap();
        let out = adjoint_act(&g, &AffineElement::derivation(2), &Settings::default()).unwrap();
        assert_eq!(out.mat(), &MatK::diag(vec![lit("-1"), lit("1")]));
        assert_eq!(out.c(), &gr(-4));
        assert!(out.d().is_one());
        let twice = adjoint_act(&g, &out, &Settings::default()).unwrap();
        let square = GroupElement::from_matrix(MatK::diag(vec![lit("t^2"), lit("t^-2")]), 64).unwrap();
        assert_eq!(twice, adjoint_act(&square, &AffineElement::derivation(2), &Settings::default()).unwrap());
        assert_eq!(twice.c(), &gr(-16));
    }

    #[test]
    fn composition_and_inverse() {
        let s = Settings::default();
        let a = GroupElement::new(gr(2), MatK::shear(3, 0, 2, lit("t^-1 + 2*t")), 64).unwrap();
        let b = GroupElement::new(GaussianRational::from_parts(1, 1), MatK::shear(3, 1, 0, lit("3*t^2")), 64).unwrap();
        let x = elem(e(3, 0, 1, "t").add(&e(3, 1, 2, "t^-2")).unwrap(), 1);
        let composed = adjoint_act(&a.compose(&b).unwrap(), &x, &s).unwrap();
        let stepwise = adjoint_act(&a, &adjoint_act(&b, &x, &s).unwrap(), &s).unwrap();
        assert_eq!(composed, stepwise);
        let back = adjoint_act(&a.inverse(64).unwrap(), &adjoint_act(&a, &x, &s).unwrap(), &s).unwrap();
        assert_eq!(back, x);
    }
}
