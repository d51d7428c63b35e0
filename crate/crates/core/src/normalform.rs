//! Jordan and quasi-Jordan forms of nilpotent matrices over K.

use std::fmt;

use crate::affine::{DetMode, GroupElement};
use crate::error::{Error, Result};
use crate::laurent::{GaussianRational, Laurent, ZeroTest};
use crate::matk::{self, MatK};

/// A partition `i_1 ≥ i_2 ≥ … ≥ i_d > 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// `i_d`, the last and smallest part.
    pub fn smallest(&self) -> usize {
        *self.0.last().expect("partitions are nonempty")
    }

    /// All partitions of `n`, lexicographically increasing as part lists:
    /// `[1,1,1,1], [2,1,1], [2,2], [3,1], [4]`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in 1..=max.min(rest) {
                prefix.push(p);
                rec(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuasiJordanBlock {
    superdiag: Vec<Laurent>,
}

impl QuasiJordanBlock {
    pub fn new(superdiag: Vec<Laurent>) -> Result<Self> {
        if superdiag.iter().any(|p| p.zero_test() != ZeroTest::NonZero) {
            return Err(Error::InvalidPartition("quasi-Jordan superdiagonal entries must be nonzero".into()));
        }
        Ok(QuasiJordanBlock { superdiag })
    }

    /// A block with every superdiagonal entry equal to 1.
    pub fn jordan(size: usize) -> Self {
        QuasiJordanBlock { superdiag: vec![Laurent::one(); size - 1] }
    }

    pub fn size(&self) -> usize {
        self.superdiag.len() + 1
    }

    pub fn superdiag(&self) -> &[Laurent] {
        &self.superdiag
    }

    /// `p_1^{s-1} p_2^{s-2} ⋯ p_{s-1}`.
    pub fn multiplicity(&self) -> Laurent {
        let s = self.size();
        self.superdiag.iter().enumerate().fold(Laurent::one(), |acc, (i, p)| &acc * &p.pow((s - 1 - i) as u32))
    }

    /// Order of [`Self::multiplicity`], without forming the product.
    pub fn multiplicity_order(&self) -> Result<i64> {
        let s = self.size() as i64;
        let mut total = 0;
        for (i, p) in self.superdiag.iter().enumerate() {
            total += (s - 1 - i as i64) * p.order()?;
        }
        Ok(total)
    }
}

/// Block-diagonal quasi-Jordan matrix with non-increasing block sizes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuasiJordanForm {
    blocks: Vec<QuasiJordanBlock>,
}

impl QuasiJordanForm {
    pub fn new(blocks: Vec<QuasiJordanBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if blocks.windows(2).any(|w| w[0].size() < w[1].size()) {
            let sizes: Vec<usize> = blocks.iter().map(QuasiJordanBlock::size).collect();
            return Err(Error::InvalidPartition(format!("block sizes {sizes:?} are not non-increasing")));
        }
        Ok(QuasiJordanForm { blocks })
    }

    pub fn jordan(sigma: &Partition) -> Self {
        QuasiJordanForm { blocks: sigma.parts().iter().map(|&s| QuasiJordanBlock::jordan(s)).collect() }
    }

    /// Reads a matrix that is zero off the superdiagonal, splitting blocks at
    /// zero superdiagonal entries. `None` unless every entry is decided and
    /// the block sizes come out non-increasing.
    pub fn from_matrix(x: &MatK) -> Option<Self> {
        let n = x.n();
        for i in 0..n {
            for j in 0..n {
                if j != i + 1 && x.get(i, j).zero_test() != ZeroTest::Zero {
                    return None;
                }
            }
        }
        let mut blocks = Vec::new();
        let mut current = Vec::new();
        for i in 0..n - 1 {
            let p = x.get(i, i + 1);
            match p.zero_test() {
                ZeroTest::NonZero => current.push(p.clone()),
                ZeroTest::Zero => blocks.push(QuasiJordanBlock { superdiag: std::mem::take(&mut current) }),
                ZeroTest::Undetermined => return None,
            }
        }
        blocks.push(QuasiJordanBlock { superdiag: current });
        QuasiJordanForm::new(blocks).ok()
    }

    pub fn blocks(&self) -> &[QuasiJordanBlock] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(QuasiJordanBlock::size).sum()
    }

    pub fn partition(&self) -> Partition {
        Partition(self.blocks.iter().map(QuasiJordanBlock::size).collect())
    }

    pub fn matrix(&self) -> MatK {
        let mut m = MatK::zeros(self.n());
        let mut offset = 0;
        for b in &self.blocks {
            for (i, p) in b.superdiag.iter().enumerate() {
                m.set(offset + i, offset + i + 1, p.clone());
            }
            offset += b.size();
        }
        m
    }

    /// `𝔫`, the order of the product of all block multiplicities.
    pub fn mult_order(&self) -> Result<i64> {
        self.blocks.iter().map(QuasiJordanBlock::multiplicity_order).sum()
    }
}

/// The orbit parameters `(σ, k, λ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbitLabel {
    pub partition: Partition,
    pub k: usize,
    pub level: GaussianRational,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "partition={} k={} level={}", self.partition, self.k, self.level.to_literal())
    }
}

fn require_nilpotent(x: &MatK) -> Result<()> {
    match x.pow(x.n() as u32).zero_test() {
        ZeroTest::Zero => Ok(()),
        ZeroTest::NonZero => Err(Error::NotNilpotent("x^n is not zero".into())),
        ZeroTest::Undetermined => Err(crate::error::exhausted("cannot decide whether x^n vanishes")),
    }
}

/// Jordan block sizes, read off the ranks of the powers of `x`.
pub fn rank_profile_partition(x: &MatK) -> Result<Partition> {
    require_nilpotent(x)?;
    let n = x.n();
    let mut ranks = vec![n];
    let mut power = x.clone();
    while *ranks.last().unwrap() > 0 {
        ranks.push(power.rank()?);
        power = power.mul(x)?;
    }
    // at_least[j] = number of blocks of size > j
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (j, &count) in at_least.iter().enumerate() {
        let bigger = at_least.get(j + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(j + 1, count - bigger));
    }
    parts.reverse();
    Partition::new(parts)
}

fn rank_of(vectors: &[Vec<Laurent>], n: usize, working_prec: i64) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(matk::eliminate(vectors.to_vec(), n, false, working_prec)?.pivots.len())
}

fn apply(a: &MatK, v: &[Laurent]) -> Vec<Laurent> {
    (0..a.n())
        .map(|i| {
            (0..a.n()).fold(Laurent::zero(), |acc, j| {
                if a.get(i, j).is_exact_zero() || v[j].is_exact_zero() {
                    acc
                } else {
                    &acc + &(a.get(i, j) * &v[j])
                }
            })
        })
        .collect()
}

/// `T` with `T·x·T⁻¹ = J_σ`, the Jordan matrix with unit superdiagonal.
///
/// The rows of `T` for a block of size `m` are `w, wx, …, wx^{m-1}` for a
/// chain top `w` with `wx^m = 0`.
pub fn jordan_transform(x: &MatK, working_prec: i64) -> Result<(MatK, Partition)> {
    let sigma = rank_profile_partition(x)?;
    let n = x.n();
    let a = x.transpose();
    let mut powers = vec![MatK::identity(n)];
    for _ in 0..sigma.parts()[0] {
        let next = powers.last().unwrap().mul(&a)?;
        powers.push(next);
    }
    let mut tops: Vec<(usize, Vec<Laurent>)> = Vec::new();
    let mut sizes: Vec<usize> = sigma.parts().to_vec();
    sizes.dedup();
    for &m in &sizes {
        let wanted = sigma.parts().iter().filter(|&&s| s == m).count();
        let mut span = powers[m - 1].kernel(working_prec)?;
        for (s, u) in &tops {
            span.push(apply(&powers[s - m], u));
        }
        let mut rank = rank_of(&span, n, working_prec)?;
        let mut found = 0;
        for v in powers[m].kernel(working_prec)? {
            if found == wanted {
                break;
            }
            span.push(v.clone());
            let r = rank_of(&span, n, working_prec)?;
            if r > rank {
                rank = r;
                tops.push((m, v));
                found += 1;
            } else {
                span.pop();
            }
        }
        if found != wanted {
            return Err(Error::Verification(format!("found {found} of {wanted} chains of length {m}")));
        }
    }
    let mut rows = Vec::with_capacity(n);
    for (m, w) in &tops {
        for p in &powers[..*m] {
            rows.push(apply(p, w));
        }
    }
    let t = MatK::from_rows(rows)?;
    let j = QuasiJordanForm::jordan(&sigma).matrix();
    if t.mul(x)?.compare(&j.mul(&t)?)? == ZeroTest::NonZero {
        return Err(Error::Verification("T x differs from J T".into()));
    }
    Ok((t, sigma))
}

/// A group element `h` and quasi-Jordan form `D` with `h·x·h⁻¹ = D`.
///
/// Inputs that already are quasi-Jordan (non-increasing blocks) are returned
/// unchanged with `h = I`. Otherwise `h = S·T` with `T` from
/// [`jordan_transform`], `l = ord det T mod n` and `S = diag(t^{-l}, 1, …, 1)`.
pub fn quasi_jordanize(x: &MatK, working_prec: i64) -> Result<(GroupElement, QuasiJordanForm)> {
    require_nilpotent(x)?;
    let n = x.n();
    if let Some(form) = QuasiJordanForm::from_matrix(x) {
        return Ok((GroupElement::identity(n), form));
    }
    let (t, sigma) = jordan_transform(x, working_prec)?;
    let l = t.det(working_prec)?.order()?.rem_euclid(n as i64);
    let mut s_diag = vec![Laurent::one(); n];
    s_diag[0] = Laurent::t_pow(-l);
    let g = MatK::diag(s_diag).mul(&t)?;
    let mut blocks: Vec<QuasiJordanBlock> = sigma.parts().iter().map(|&s| QuasiJordanBlock::jordan(s)).collect();
    if l != 0 {
        blocks[0].superdiag[0] = Laurent::t_pow(-l);
    }
    let form = QuasiJordanForm::new(blocks)?;
    if g.mul(x)?.compare(&form.matrix().mul(&g)?)? == ZeroTest::NonZero {
        return Err(Error::Verification("h x differs from D h".into()));
    }
    let det_mode = if g.det(working_prec)?.is_exact_one() { DetMode::ExactOne } else { DetMode::NthPowerCertified };
    Ok((GroupElement::from_parts_unchecked(GaussianRational::from(1), g, det_mode), form))
}

/// `D_{σ,k}` as a quasi-Jordan form.
pub fn canonical_form(sigma: &Partition, k: i64) -> Result<QuasiJordanForm> {
    let smallest = sigma.smallest();
    if k < 0 || k >= smallest as i64 {
        return Err(Error::InvalidShift { k, smallest });
    }
    let mut form = QuasiJordanForm::jordan(sigma);
    if let Some(p) = form.blocks.last_mut().unwrap().superdiag.last_mut() {
        *p = Laurent::t_pow(k);
    }
    Ok(form)
}

/// The canonical representative `D_{σ,k}`: Jordan blocks with `t^k` in the
/// last superdiagonal slot of the smallest block.
pub fn canonical_rep(sigma: &Partition, k: i64) -> Result<MatK> {
    Ok(canonical_form(sigma, k)?.matrix())
}
