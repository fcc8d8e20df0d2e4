//! Nonnegative even cosine polynomials built from spectral factors.
//!
//! A real sequence `c_0, ..., c_n` defines
//! `f(φ) = |Σ c_k e^{ikφ}|² = Σ a_k cos(kφ)` with `a_0 = Σ c_j²` and
//! `a_k = 2 Σ_j c_j c_{j+k}`, so every polynomial produced here is
//! nonnegative by construction. Membership in `P_n` additionally needs every
//! `a_k ≥ 0` and `a_1 > a_0`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFactor {
    c: Vec<f64>,
}

impl SpectralFactor {
    /// Build a factor from `c_0..c_n`; `c_0` must be exactly 1.
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::Domain(format!(
                "a spectral factor needs degree ≥ 1, got {} coefficient(s)",
                c.len()
            )));
        }
        if c[0] != 1.0 {
            return Err(Error::Domain(format!("c_0 must be 1, got {}", c[0])));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("spectral factor has a non-finite entry".into()));
        }
        Ok(SpectralFactor { c })
    }

    /// Rescale an arbitrary sequence so that `c_0 = 1`. The cosine polynomial
    /// changes only by the positive factor `c_0²`.
    pub fn from_unnormalized(c: &[f64]) -> Result<Self> {
        match c.first() {
            Some(&c0) if c0 != 0.0 && c0.is_finite() => {
                Self::new(c.iter().map(|x| x / c0).collect())
            }
            _ => Err(Error::Domain("c_0 must be finite and nonzero".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// Overwrite `c_k` for `k ≥ 1`; used to undo a rejected step exactly.
    pub(crate) fn set_coeff(&mut self, k: usize, value: f64) {
        assert!(k >= 1 && k < self.c.len(), "coefficient index {k} out of range");
        self.c[k] = value;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosinePolynomial {
    a: Vec<f64>,
}

impl CosinePolynomial {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("cosine polynomial needs at least a_0".into()));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("cosine polynomial has a non-finite coefficient".into()));
        }
        Ok(CosinePolynomial { a })
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn a0(&self) -> f64 {
        self.a[0]
    }

    pub fn a1(&self) -> f64 {
        self.a.get(1).copied().unwrap_or(0.0)
    }

    /// `A = f(0) - a_0 = a_1 + ... + a_n`.
    pub fn tail_sum(&self) -> f64 {
        self.a[1..].iter().sum()
    }

    /// Divide every coefficient by `a_0`.
    pub fn normalized(&self) -> CosinePolynomial {
        let a0 = self.a[0];
        CosinePolynomial {
            a: self.a.iter().map(|x| x / a0).collect(),
        }
    }

    pub fn scaled(&self, lambda: f64) -> CosinePolynomial {
        CosinePolynomial {
            a: self.a.iter().map(|x| x * lambda).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipReport {
    pub is_member: bool,
    pub first_negative_index: Option<usize>,
    pub a1_exceeds_a0: bool,
}

/// Aperiodic autocorrelation of the factor: `a_0 = Σ c_j²`, `a_k = 2 Σ c_j c_{j+k}`.
pub fn cosine_from_factor(factor: &SpectralFactor) -> CosinePolynomial {
    let c = &factor.c;
    let n = c.len() - 1;
    let mut a = Vec::with_capacity(n + 1);
    a.push(c.iter().map(|x| x * x).sum());
    for k in 1..=n {
        let s: f64 = c[..=n - k].iter().zip(&c[k..]).map(|(x, y)| x * y).sum();
        a.push(2.0 * s);
    }
    CosinePolynomial { a }
}

/// Product of two cosine polynomials, via `cos x cos y = (cos(x+y) + cos(x-y))/2`.
pub fn cosine_product(f: &CosinePolynomial, g: &CosinePolynomial) -> CosinePolynomial {
    let mut a = vec![0.0; f.a.len() + g.a.len() - 1];
    for (i, x) in f.a.iter().enumerate() {
        for (j, y) in g.a.iter().enumerate() {
            let p = x * y;
            if i == 0 || j == 0 {
                a[i + j] += p;
            } else {
                a[i + j] += 0.5 * p;
                a[i.abs_diff(j)] += 0.5 * p;
            }
        }
    }
    CosinePolynomial { a }
}

/// `f(φ) = Σ a_k cos(kφ)`.
pub fn evaluate(f: &CosinePolynomial, phi: f64) -> f64 {
    f.a.iter()
        .enumerate()
        .map(|(k, a)| a * (k as f64 * phi).cos())
        .sum()
}

/// Landau's quotient `A / (√a_1 − √a_0)²`, written with a single square root.
pub fn landau_objective(f: &CosinePolynomial) -> Result<f64> {
    let (a0, a1) = (f.a0(), f.a1());
    if !(a0 > 0.0) || !(a1 > a0) {
        return Err(Error::Domain(format!(
            "Landau objective needs a_1 > a_0 > 0 (a_0 = {a0}, a_1 = {a1})"
        )));
    }
    let denom = a0 + a1 - 2.0 * (a0 * a1).sqrt();
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "Landau denominator underflows for a_0 = {a0}, a_1 = {a1}"
        )));
    }
    Ok(f.tail_sum() / denom)
}

pub fn membership_check(f: &CosinePolynomial) -> MembershipReport {
    let first_negative_index = f.a.iter().position(|&x| x < 0.0);
    let a1_exceeds_a0 = f.a.len() > 1 && f.a1() > f.a0();
    MembershipReport {
        is_member: first_negative_index.is_none() && a1_exceeds_a0,
        first_negative_index,
        a1_exceeds_a0,
    }
}

/// Add `s` to `c_k` and update `a` in place with O(n) work.
///
/// Every product `c_k c_j` with `j ≠ k` moves by `s c_j`; the square `c_k²`
/// moves by `s(2c_k + s)`.
pub fn apply_step(factor: &mut SpectralFactor, a: &mut CosinePolynomial, k: usize, s: f64) {
    let n = factor.degree();
    assert!(k >= 1 && k <= n, "step index {k} outside 1..={n}");
    assert_eq!(a.a.len(), n + 1, "factor and polynomial degrees differ");
    let c = &factor.c;
    let a = &mut a.a;
    a[0] += s * (2.0 * c[k] + s);
    let two_s = 2.0 * s;
    for i in 1..=k {
        a[i] += two_s * c[k - i];
    }
    for i in 1..=n - k {
        a[i] += two_s * c[k + i];
    }
    factor.c[k] += s;
}
