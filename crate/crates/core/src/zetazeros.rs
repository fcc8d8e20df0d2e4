//! Ordinates of nontrivial zeta zeros and the zero-sum bounds `c30`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Upper bound for `Σ_{γ>0} γ^{-2}` over nontrivial zeros.
pub const TAIL_CONSTANT: f64 = 0.023105;
/// Overrides [`TAIL_CONSTANT`] when set to a positive number.
pub const TAIL_CONSTANT_ENV: &str = "ZEROFREE_TAIL_CONSTANT";

/// Published bound for `c30(0, t0)` at `t0 = 10^5`.
pub const PUBLISHED_C30_VALUE: f64 = 0.00027;
pub const PUBLISHED_C30_T0: f64 = 1e5;

pub fn tail_constant() -> f64 {
    std::env::var(TAIL_CONSTANT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v > 0.0 && v.is_finite())
        .unwrap_or(TAIL_CONSTANT)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    /// `prefix_inv_sq[i] = Σ_{j<i} γ_j^{-2}`, one entry longer than `gammas`.
    prefix_inv_sq: Vec<f64>,
}

impl ZeroTable {
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        let Some(&first) = gammas.first() else {
            return Err(Error::EmptyZeroTable);
        };
        if !(first > 14.0 && first < 15.0) {
            return Err(Error::ImplausibleFirstZero(first));
        }
        for (i, w) in gammas.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotone {
                    line: i + 2,
                    value: w[1],
                    previous: w[0],
                });
            }
        }
        let mut prefix_inv_sq = Vec::with_capacity(gammas.len() + 1);
        let mut s = 0.0;
        prefix_inv_sq.push(s);
        for g in &gammas {
            s += 1.0 / (g * g);
            prefix_inv_sq.push(s);
        }
        Ok(ZeroTable {
            gammas,
            prefix_inv_sq,
        })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn max_gamma(&self) -> f64 {
        *self.gammas.last().expect("table is nonempty")
    }

    /// `Σ_{0<γ≤t} γ^{-2}` over the tabulated ordinates.
    pub fn partial_inv_sq(&self, t: f64) -> f64 {
        let count = self.gammas.partition_point(|&g| g <= t);
        self.prefix_inv_sq[count]
    }
}

/// Parse one ordinate per line; blank lines and `#` lines are skipped.
/// Line numbers in errors count every physical line.
pub fn parse_zeros(text: &str) -> Result<ZeroTable> {
    let mut gammas = Vec::new();
    let mut previous: Option<f64> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v > 0.0)
            .ok_or_else(|| Error::NonNumeric {
                line: idx + 1,
                text: line.to_string(),
            })?;
        if let Some(p) = previous {
            if !(value > p) {
                return Err(Error::NonMonotone {
                    line: idx + 1,
                    value,
                    previous: p,
                });
            }
        }
        previous = Some(value);
        gammas.push(value);
    }
    ZeroTable::new(gammas)
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_zeros(&text)
}

/// `2(Σ_{γ>0} γ^{-2} − Σ_{0<γ≤t0} γ^{-2})` with the first sum replaced by the
/// tail constant. Needs the table to reach `t0`.
pub fn sigma_zero_bound(t0: f64, table: &ZeroTable) -> Result<f64> {
    if t0 > table.max_gamma() {
        return Err(Error::Coverage {
            t0,
            covered: table.max_gamma(),
        });
    }
    Ok(2.0 * (tail_constant() - table.partial_inv_sq(t0)))
}

/// Where the `k = 0` zero sum comes from.
#[derive(Debug, Clone)]
pub enum ZeroSource {
    Table(ZeroTable),
    /// Only the published value at `t0 = 10^5` is available.
    Published,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Table { zeros: usize, max_gamma: f64 },
    Published,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Table { zeros, max_gamma } => {
                write!(f, "zeros table ({zeros} ordinates up to {max_gamma})")
            }
            Provenance::Published => write!(f, "published constant for t0 = 1e5"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSumBound {
    pub value: f64,
    pub provenance: Provenance,
}

impl ZeroSource {
    pub fn c30_zero(&self, t0: f64) -> Result<ZeroSumBound> {
        match self {
            ZeroSource::Table(table) => Ok(ZeroSumBound {
                value: sigma_zero_bound(t0, table)?,
                provenance: Provenance::Table {
                    zeros: table.len(),
                    max_gamma: table.max_gamma(),
                },
            }),
            ZeroSource::Published if t0 == PUBLISHED_C30_T0 => Ok(ZeroSumBound {
                value: PUBLISHED_C30_VALUE,
                provenance: Provenance::Published,
            }),
            ZeroSource::Published => Err(Error::Coverage { t0, covered: 0.0 }),
        }
    }
}

/// `∫_{t0}^∞ log((x+b)/2π)(x^{-2} + (x+2b)^{-2}) dx` from the antiderivatives
/// `−log(x+b)/x + (1/b)log(x/(x+b))` and its shifted analogue.
pub fn c30_integral_closed(b: f64, t0: f64) -> f64 {
    let l2pi = (2.0 * PI).ln();
    let lb = (t0 + b).ln();
    let first = lb / t0 + (b / t0).ln_1p() / b - l2pi / t0;
    let u = t0 + 2.0 * b;
    let second = lb / u + (b / (t0 + b)).ln_1p() / b - l2pi / u;
    first + second
}

/// Same integral by quadrature after `x = t0·e^y`.
pub fn c30_integral_quadrature(b: f64, t0: f64) -> Result<f64> {
    let g = |y: f64| {
        let x = t0 * y.exp();
        ((x + b) / (2.0 * PI)).ln() * (1.0 / (x * x) + 1.0 / ((x + 2.0 * b) * (x + 2.0 * b))) * x
    };
    let scale = c30_integral_closed(b, t0);
    let body = integrate(g, 0.0, 60.0, 1e-14 * scale)?;
    Ok(body.value)
}

/// `c30(k T0)` for `k ≥ 1` with the ambient cutoff `t0`.
pub fn c30_positive(k: usize, height: f64, t0: f64) -> f64 {
    assert!(k >= 1, "c30_positive needs k ≥ 1");
    let b = k as f64 * height;
    let u = t0 + 2.0 * b;
    c30_integral_closed(b, t0) / (2.0 * PI)
        + 4.0 * (b + t0).ln() * (1.0 / (t0 * t0) + 1.0 / (u * u))
        + 4.0 / (b * t0)
}

/// `c30(k T0)` for `k = 0..=n`.
pub fn c30_all(n: usize, height: f64, t0: f64, source: &ZeroSource) -> Result<(Vec<f64>, Provenance)> {
    if !(height > 0.0 && t0 > 0.0) {
        return Err(Error::Domain(format!(
            "c30 needs T0 > 0 and t0 > 0 (T0 = {height}, t0 = {t0})"
        )));
    }
    let zero = source.c30_zero(t0)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(zero.value);
    out.extend((1..=n).map(|k| c30_positive(k, height, t0)));
    Ok((out, zero.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE: &str = "14.134725141\n21.022039639\n25.010857580\n";

    #[test]
    fn parses_three_zeros() {
        let t = parse_zeros(THREE).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.max_gamma(), 25.010857580);
    }

    #[test]
    fn distinct_parse_errors() {
        assert!(matches!(
            parse_zeros("21.0\n14.1\n"),
            Err(Error::NonMonotone { line: 2, .. })
        ));
        assert!(matches!(parse_zeros(""), Err(Error::EmptyZeroTable)));
        assert!(matches!(parse_zeros("# only\n"), Err(Error::EmptyZeroTable)));
        assert!(matches!(
            parse_zeros("14.13\nabc\n"),
            Err(Error::NonNumeric { line: 2, .. })
        ));
        assert!(matches!(
            parse_zeros("1.5\n2.5\n"),
            Err(Error::ImplausibleFirstZero(_))
        ));
    }

    #[test]
    fn prefix_sums_match_direct() {
        let t = parse_zeros(THREE).unwrap();
        let direct: f64 = t.gammas().iter().map(|g| 1.0 / (g * g)).sum();
        assert!((t.partial_inv_sq(100.0) - direct).abs() <= 1e-15 * direct);
        assert_eq!(t.partial_inv_sq(14.0), 0.0);
    }

    #[test]
    fn sigma_zero_small_heights() {
        let t = parse_zeros(THREE).unwrap();
        assert_eq!(sigma_zero_bound(10.0, &t).unwrap(), 2.0 * TAIL_CONSTANT);
        let one = 2.0 * (TAIL_CONSTANT - 1.0 / (14.134725141f64 * 14.134725141));
        assert!((sigma_zero_bound(15.0, &t).unwrap() - one).abs() < 1e-15);
        assert!((one - 0.0361995117517711).abs() < 1e-15);
        assert!(matches!(
            sigma_zero_bound(30.0, &t),
            Err(Error::Coverage { .. })
        ));
    }

    #[test]
    fn published_fallback_only_at_its_height() {
        let s = ZeroSource::Published;
        assert_eq!(s.c30_zero(1e5).unwrap().value, 0.00027);
        assert!(s.c30_zero(2e5).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(b, t0) in &[(3.06e10, 1e5), (6.12e10, 1e5), (3.3e9, 10.0), (1e3, 50.0), (1e300, 1e5)] {
            let closed = c30_integral_closed(b, t0);
            let quad = c30_integral_quadrature(b, t0).unwrap();
            assert!(
                (closed - quad).abs() <= 1e-10 * closed,
                "b = {b}: {closed} vs {quad}"
            );
        }
    }

    #[test]
    fn c30_positive_and_integral_dominated() {
        let v: Vec<f64> = (1..=16).map(|k| c30_positive(k, 3.06e10, 1e5)).collect();
        assert!(v.iter().all(|&x| x > 0.0));
        // log(t0 + kT0)/t0 in the integral outgrows the 1/(kT0) terms, so the
        // bound rises slowly with k.
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let b = 3.06e10;
        let integral = c30_integral_closed(b, 1e5) / (2.0 * PI);
        assert!(integral > 0.99 * v[0]);
    }
}
