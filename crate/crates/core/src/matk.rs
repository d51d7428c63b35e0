//! Square matrices over K.
//!
//! Elimination is fraction-free (Bareiss) with minimal-valuation pivoting, so
//! matrices of exact Laurent polynomials stay exact through determinants,
//! ranks, kernels and adjugates. Division only produces a truncated series
//! when a quotient genuinely is one.

use std::fmt;

use crate::error::{exhausted, Error, Result};
use crate::laurent::{GaussianRational, Laurent, ZeroTest};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatK {
    n: usize,
    entries: Vec<Laurent>,
}

impl MatK {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        MatK { n, entries: vec![Laurent::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Laurent::one())
    }

    pub fn scalar(n: usize, s: Laurent) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Laurent) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        MatK { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Laurent>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch(0, 1));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            entries.extend(row);
        }
        Ok(MatK { n, entries })
    }

    pub fn diag(d: Vec<Laurent>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// The matrix unit `E_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, Laurent::one());
        m
    }

    /// The elementary shear `I + p·E_ij`, `i != j`.
    pub fn shear(n: usize, i: usize, j: usize, p: Laurent) -> Self {
        assert!(i != j, "a shear needs an off-diagonal position");
        let mut m = Self::identity(n);
        m.set(i, j, p);
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Laurent) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Laurent>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Laurent> {
        self.entries.iter()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Laurent::is_exact)
    }

    fn check_dim(&self, other: &MatK) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn zip_with(&self, other: &MatK, f: impl Fn(&Laurent, &Laurent) -> Laurent) -> Result<MatK> {
        self.check_dim(other)?;
        Ok(MatK { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, other: &MatK) -> Result<MatK> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatK) -> Result<MatK> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> MatK {
        self.map(|x| -x)
    }

    pub fn map(&self, f: impl Fn(&Laurent) -> Laurent) -> MatK {
        MatK { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &Laurent) -> MatK {
        self.map(|x| x * s)
    }

    pub fn mul(&self, other: &MatK) -> Result<MatK> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Laurent::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.push(acc);
            }
        }
        Ok(MatK { n, entries: out })
    }

    pub fn pow(&self, k: u32) -> MatK {
        let mut acc = MatK::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    pub fn trace(&self) -> Laurent {
        (0..self.n).fold(Laurent::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// `trace(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &MatK) -> Result<Laurent> {
        self.check_dim(other)?;
        let mut acc = Laurent::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                let b = other.get(j, i);
                if !a.is_exact_zero() && !b.is_exact_zero() {
                    acc = &acc + &(a * b);
                }
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> MatK {
        MatK::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Entrywise `d/dt`.
    pub fn d_dt(&self) -> MatK {
        self.map(Laurent::d_dt)
    }

    /// Entrywise `t ↦ z t`.
    pub fn scale_t(&self, z: &GaussianRational) -> Result<MatK> {
        let entries = self.entries.iter().map(|x| x.scale_t(z)).collect::<Result<Vec<_>>>()?;
        Ok(MatK { n: self.n, entries })
    }

    /// Three-valued test for the zero matrix.
    pub fn zero_test(&self) -> ZeroTest {
        let mut undetermined = false;
        for x in &self.entries {
            match x.zero_test() {
                ZeroTest::NonZero => return ZeroTest::NonZero,
                ZeroTest::Undetermined => undetermined = true,
                ZeroTest::Zero => {}
            }
        }
        if undetermined {
            ZeroTest::Undetermined
        } else {
            ZeroTest::Zero
        }
    }

    /// Three-valued entrywise equality.
    pub fn compare(&self, other: &MatK) -> Result<ZeroTest> {
        Ok(self.sub(other)?.zero_test())
    }

    /// Determinant by Bareiss elimination with minimal-valuation pivots.
    pub fn det(&self, working_prec: i64) -> Result<Laurent> {
        let red = eliminate(self.rows(), self.n, false, working_prec)?;
        if red.pivots.len() < self.n {
            return Ok(Laurent::zero());
        }
        let d = red.rows[self.n - 1][self.n - 1].clone();
        Ok(if red.swaps % 2 == 1 { -d } else { d })
    }

    /// Inverse via fraction-free Gauss-Jordan on `[A | I]`: the result is
    /// `adj(A)/det(A)`, exact whenever that quotient is a Laurent polynomial.
    pub fn inv(&self, working_prec: i64) -> Result<MatK> {
        let n = self.n;
        let aug: Vec<Vec<Laurent>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { Laurent::one() } else { Laurent::zero() }));
                row
            })
            .collect();
        let red = eliminate(aug, n, true, working_prec)?;
        if red.pivots.len() < n {
            return Err(Error::Singular);
        }
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            let p = &red.rows[r][r];
            for j in 0..n {
                out.push(red.rows[r][n + j].div(p, working_prec)?);
            }
        }
        Ok(MatK { n, entries: out })
    }

    /// Rank over K. Raises instead of guessing when a pivot is undecidable.
    pub fn rank(&self) -> Result<usize> {
        Ok(eliminate(self.rows(), self.n, false, crate::laurent::DEFAULT_WORKING_PRECISION)?.pivots.len())
    }

    /// A basis of the right kernel `{v : self·v = 0}`.
    pub fn kernel(&self, working_prec: i64) -> Result<Vec<Vec<Laurent>>> {
        kernel_of(self.rows(), self.n, working_prec)
    }
}

impl fmt::Debug for MatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatK[{}]", self.n)?;
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(Laurent::to_literal).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) struct Reduced {
    pub rows: Vec<Vec<Laurent>>,
    /// Pivot column of each pivot row, in row order.
    pub pivots: Vec<usize>,
    pub swaps: usize,
}

/// Fraction-free elimination of a row-major matrix, pivoting only in the
/// first `pivot_cols` columns. `full` also clears above each pivot
/// (Gauss-Jordan); then every pivot ends equal to the last one.
pub(crate) fn eliminate(
    mut rows: Vec<Vec<Laurent>>,
    pivot_cols: usize,
    full: bool,
    working_prec: i64,
) -> Result<Reduced> {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut prev = Laurent::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m {
            break;
        }
        let mut best: Option<(i64, usize)> = None;
        let mut undetermined = false;
        for (i, row) in rows.iter().enumerate().skip(r) {
            match row[c].zero_test() {
                ZeroTest::NonZero => {
                    let v = row[c].order()?;
                    if best.is_none_or(|(bv, _)| v < bv) {
                        best = Some((v, i));
                    }
                }
                ZeroTest::Undetermined => undetermined = true,
                ZeroTest::Zero => {}
            }
        }
        let Some((_, pr)) = best else {
            if undetermined {
                return Err(exhausted(format!("cannot decide whether column {c} has a pivot")));
            }
            continue;
        };
        if pr != r {
            rows.swap(pr, r);
            swaps += 1;
        }
        let p = rows[r][c].clone();
        let pivot_row = rows[r].clone();
        let unit_step = prev.is_exact_one() && p.is_exact_one();
        #[allow(clippy::needless_range_loop)]
        for i in 0..m {
            if i == r || (!full && i < r) {
                continue;
            }
            let f = rows[i][c].clone();
            if f.is_exact_zero() && unit_step {
                continue;
            }
            for j in 0..width {
                if j == c {
                    continue;
                }
                let x = &rows[i][j];
                let mut num = if x.is_exact_zero() { Laurent::zero() } else { &p * x };
                if !f.is_exact_zero() && !pivot_row[j].is_exact_zero() {
                    num = &num - &(&f * &pivot_row[j]);
                }
                rows[i][j] = if prev.is_exact_one() { num } else { num.div(&prev, working_prec)? };
            }
            rows[i][c] = Laurent::zero();
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    Ok(Reduced { rows, pivots, swaps })
}

/// Right kernel of a (possibly rectangular) row-major matrix with `ncols` columns.
pub(crate) fn kernel_of(rows: Vec<Vec<Laurent>>, ncols: usize, working_prec: i64) -> Result<Vec<Vec<Laurent>>> {
    let red = eliminate(rows, ncols, true, working_prec)?;
    let scale = match red.pivots.len() {
        0 => Laurent::one(),
        k => red.rows[k - 1][red.pivots[k - 1]].clone(),
    };
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !red.pivots.contains(c)) {
        let mut v = vec![Laurent::zero(); ncols];
        v[f] = scale.clone();
        for (r, &c) in red.pivots.iter().enumerate() {
            let x = &red.rows[r][f];
            if x.is_exact_zero() {
                continue;
            }
            let pr = &red.rows[r][c];
            v[c] = -(&(x * &scale).div(pr, working_prec)?);
        }
        basis.push(strip_common_power(v));
    }
    Ok(basis)
}

/// Divide a vector by the largest power of `t` dividing all its entries.
pub(crate) fn strip_common_power(v: Vec<Laurent>) -> Vec<Laurent> {
    let low = v.iter().filter_map(|x| if x.has_no_terms() { None } else { x.order().ok() }).min();
    match low {
        Some(k) if k != 0 && v.iter().all(|x| !x.has_no_terms() || x.is_exact()) => {
            v.iter().map(|x| x.shift(-k)).collect()
        }
        _ => v,
    }
}
