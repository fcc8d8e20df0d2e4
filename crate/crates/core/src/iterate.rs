//! The two-level iteration for R0, the η1 balance search, and the T0 sweep.
//!
//! For fixed `(r, R)` the bound is
//! `R0 = (A/2) g1 (1 − κ) max{1/K(w1), 1/(K(w0) − C(η1))}`,
//! with η1 chosen where the two denominators meet. The inner loop replaces
//! `r` by `(r + R0)/2`; the outer loop restarts from `r_init` with `R = R0`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kadiri::{
    k_integral, kappa_delta, ErrorInputs, ErrorOptions, ErrorTerm, KappaDelta, ScaleParams,
    ThetaTable, THETA_MIN,
};
use crate::trigpoly::{membership_check, CosinePolynomial};
use crate::zetazeros::{c30_all, Provenance, ZeroSource};

const INNER_CAP: usize = 200;
/// Lower end of the η1 bracket, relative to η0.
const ETA1_FLOOR: f64 = 1e-6;
/// Width, relative to η0, at which the η1 bisection stops.
const ETA1_RESOLUTION: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    /// Height `T0` to which RH is assumed verified.
    pub height: f64,
    pub t0: f64,
    pub theta: f64,
    pub r_init: f64,
    pub big_r_init: f64,
    /// Inner tolerance Δ.
    pub inner_tol: f64,
    /// Outer tolerance v.
    pub outer_tol: f64,
    /// Balance tolerance for η1.
    pub eps_eta1: f64,
    pub max_rounds: usize,
    /// Rounds to run after the stopping rule fires.
    pub extra_rounds: usize,
}

impl Default for RegionParams {
    fn default() -> Self {
        RegionParams {
            height: 3.06e10,
            t0: 1e5,
            theta: 1.85573,
            r_init: 5.0,
            big_r_init: 5.7,
            inner_tol: 1e-6,
            outer_tol: 5e-7,
            eps_eta1: 1e-3,
            max_rounds: 100,
            extra_rounds: 0,
        }
    }
}

impl RegionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_init > 0.0 && self.r_init < self.big_r_init) {
            return Err(Error::Domain(format!(
                "need 0 < r < R (r = {}, R = {})",
                self.r_init, self.big_r_init
            )));
        }
        if !(self.t0 > 0.0 && self.height > self.t0 && self.height.is_finite()) {
            return Err(Error::Domain(format!(
                "need T0 > t0 > 0 (T0 = {}, t0 = {})",
                self.height, self.t0
            )));
        }
        if !(self.theta > THETA_MIN && self.theta < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "θ = {} must lie in ({THETA_MIN}, π)",
                self.theta
            )));
        }
        if !(self.inner_tol > 0.0 && self.outer_tol >= 0.0 && self.eps_eta1 >= 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// One outer round, in the column order R, r, η0, η1, κ, δ, R0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRow {
    pub big_r: f64,
    pub r: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub kappa: f64,
    pub delta: f64,
    pub r0: f64,
}

pub fn scale_params(r: f64, big_r: f64, n: usize, params: &RegionParams) -> Result<ScaleParams> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::Domain(format!("need 0 < r < R (r = {r}, R = {big_r})")));
    }
    ScaleParams::new(r, big_r, n, params.height, params.t0)
}

/// `w1 = (1/(R η1)) / log(n e^{1/(r η1)} + t0)`, in log space for large exponents.
pub fn w1_of(eta1: f64, r: f64, big_r: f64, n: usize, t0: f64) -> f64 {
    let x = 1.0 / (r * eta1);
    let log_term = if x > 700.0 {
        x + (n as f64 + t0 * (-x).exp()).ln()
    } else {
        (n as f64 * x.exp() + t0).ln()
    };
    (1.0 / (big_r * eta1)) / log_term
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eta1 {
    pub eta1: f64,
    /// `K(w1) − (K(w0) − C(η1))` at the returned point.
    pub gap: f64,
    pub warning: Option<String>,
}

/// Everything fixed for one `(poly, θ, T0, t0)` and reused across rounds.
#[derive(Debug, Clone)]
pub struct Solver {
    poly: CosinePolynomial,
    table: ThetaTable,
    c30: Vec<f64>,
    provenance: Provenance,
    params: RegionParams,
    options: ErrorOptions,
}

/// Result of a single evaluation of the bound at fixed `(r, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub r0: f64,
    pub scale: ScaleParams,
    pub kd: KappaDelta,
    pub eta1: Eta1,
    pub error_term: ErrorTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    pub r0: f64,
    pub rows: Vec<IterationRow>,
    /// Rounds run after the stopping rule fired.
    pub extra: Vec<IterationRow>,
    pub warnings: Vec<String>,
}

impl Solver {
    pub fn new(poly: &CosinePolynomial, params: RegionParams, source: &ZeroSource, options: ErrorOptions) -> Result<Self> {
        params.validate()?;
        let report = membership_check(poly);
        if !report.is_member {
            return Err(Error::Constraint(format!(
                "polynomial is not in P_n: {report:?}"
            )));
        }
        let table = ThetaTable::new(params.theta)?;
        let (c30, provenance) = c30_all(poly.degree(), params.height, params.t0, source)?;
        Ok(Solver {
            poly: poly.clone(),
            table,
            c30,
            provenance,
            params,
            options,
        })
    }

    pub fn table(&self) -> &ThetaTable {
        &self.table
    }

    pub fn c30(&self) -> &[f64] {
        &self.c30
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn params(&self) -> &RegionParams {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn k(&self, w: f64) -> Result<f64> {
        k_integral(w, &self.table, self.poly.a0(), self.poly.a1())
    }

    pub fn error_term(&self, r: f64, big_r: f64) -> Result<(ScaleParams, KappaDelta, ErrorTerm)> {
        let scale = scale_params(r, big_r, self.degree(), &self.params)?;
        let kd = kappa_delta(scale.sigma0, scale.eta0, &self.table)?;
        let term = ErrorTerm::new(&ErrorInputs {
            poly: &self.poly,
            table: &self.table,
            scale,
            kd,
            height: self.params.height,
            r,
            big_r,
            c30: &self.c30,
            options: self.options,
        })?;
        Ok((scale, kd, term))
    }

    /// Binary search on `(η0·1e-6, η0]` for the sign change of
    /// `K(w1(η)) − (K(w0) − C(η))`, carried to full resolution.
    pub fn eta1_search(&self, r: f64, big_r: f64, scale: &ScaleParams, term: &ErrorTerm) -> Result<Eta1> {
        let n = self.degree();
        let t0 = self.params.t0;
        let k0 = self.k(scale.w0)?;
        let gap = |eta: f64| -> Result<f64> {
            Ok(self.k(w1_of(eta, r, big_r, n, t0))? - (k0 - term.eval(eta)))
        };
        let eta0 = scale.eta0;
        if self.params.eps_eta1 == f64::INFINITY {
            return Ok(Eta1 {
                eta1: eta0,
                gap: gap(eta0)?,
                warning: None,
            });
        }
        let (mut lo, mut hi) = (eta0 * ETA1_FLOOR, eta0);
        let g_hi = gap(hi)?;
        if g_hi >= 0.0 {
            return Ok(Eta1 {
                eta1: hi,
                gap: g_hi,
                warning: None,
            });
        }
        let g_lo = gap(lo)?;
        if g_lo <= 0.0 {
            // No balance point: keep whichever end gives the smaller bound.
            let d_hi = self.k(w1_of(hi, r, big_r, n, t0))?.min(k0 - term.eval(hi));
            let d_lo = self.k(w1_of(lo, r, big_r, n, t0))?.min(k0 - term.eval(lo));
            let (eta1, g) = if d_hi >= d_lo { (hi, g_hi) } else { (lo, g_lo) };
            return Ok(Eta1 {
                eta1,
                gap: g,
                warning: Some(format!(
                    "no η1 balance point in ({lo:e}, {hi:e}]; using endpoint {eta1:e}"
                )),
            });
        }
        for _ in 0..200 {
            if hi - lo <= ETA1_RESOLUTION * eta0 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if gap(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let eta1 = 0.5 * (lo + hi);
        let g = gap(eta1)?;
        let warning = (g.abs() > self.params.eps_eta1).then(|| {
            format!("η1 balance gap {g:e} exceeds ε = {}", self.params.eps_eta1)
        });
        Ok(Eta1 { eta1, gap: g, warning })
    }

    pub fn r0_once(&self, r: f64, big_r: f64) -> Result<Step> {
        let (scale, kd, term) = self.error_term(r, big_r)?;
        let eta1 = self.eta1_search(r, big_r, &scale, &term)?;
        let n = self.degree();
        let k1 = self.k(w1_of(eta1.eta1, r, big_r, n, self.params.t0))?;
        let k2 = self.k(scale.w0)? - term.eval(eta1.eta1);
        if !(k1 > 0.0 && k2 > 0.0) {
            return Err(Error::Constraint(format!(
                "denominators must be positive: K(w1) = {k1}, K(w0) − C(η1) = {k2}"
            )));
        }
        let factor = self.poly.tail_sum() / 2.0 * self.table.g1 * (1.0 - kd.kappa);
        Ok(Step {
            r0: factor * (1.0 / k1).max(1.0 / k2),
            scale,
            kd,
            eta1,
            error_term: term,
        })
    }

    /// Inner loop at fixed `R`. The row records the `r` that produced `R0`.
    fn round(&self, big_r: f64, warnings: &mut Vec<String>) -> Result<IterationRow> {
        let mut r = self.params.r_init;
        for _ in 0..INNER_CAP {
            let step = self.r0_once(r, big_r)?;
            if let Some(w) = &step.eta1.warning {
                warnings.push(format!("R = {big_r}, r = {r}: {w}"));
            }
            let next = 0.5 * (r + step.r0);
            if (next - step.r0).abs() < self.params.inner_tol {
                return Ok(IterationRow {
                    big_r,
                    r,
                    eta0: step.scale.eta0,
                    eta1: step.eta1.eta1,
                    kappa: step.kd.kappa,
                    delta: step.kd.delta,
                    r0: step.r0,
                });
            }
            r = next;
        }
        Err(Error::IterationCap {
            rounds: INNER_CAP,
            trace: Vec::new(),
        })
    }

    pub fn run_iteration(&self) -> Result<Iteration> {
        let mut big_r = self.params.big_r_init;
        let mut rows = Vec::new();
        let mut warnings = Vec::new();
        let mut done = false;
        for _ in 0..self.params.max_rounds {
            let row = self.round(big_r, &mut warnings)?;
            rows.push(row);
            if big_r - row.r0 <= self.params.outer_tol {
                done = true;
                break;
            }
            big_r = row.r0;
        }
        if !done {
            return Err(Error::IterationCap {
                rounds: self.params.max_rounds,
                trace: rows,
            });
        }
        let r0 = rows.last().expect("at least one round").r0;
        let mut extra = Vec::new();
        let mut big_r = r0;
        for _ in 0..self.params.extra_rounds {
            let row = self.round(big_r, &mut warnings)?;
            extra.push(row);
            big_r = row.r0;
        }
        Ok(Iteration {
            r0,
            rows,
            extra,
            warnings,
        })
    }
}

pub fn run_iteration(poly: &CosinePolynomial, params: &RegionParams, source: &ZeroSource, options: ErrorOptions) -> Result<Iteration> {
    Solver::new(poly, *params, source, options)?.run_iteration()
}

/// Round up at `digits` decimals, so the stated constant never undershoots.
pub fn theorem_round(r0: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (r0 * scale).ceil() / scale
}

pub const TRACE_HEADER: &str = "R,r,eta0_e3,eta1_e3,kappa,delta,R0";

/// CSV trace at full precision.
pub fn format_trace(rows: &[IterationRow]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.big_r,
            row.r,
            row.eta0 * 1e3,
            row.eta1 * 1e3,
            row.kappa,
            row.delta,
            row.r0
        );
    }
    out
}

/// Human-readable trace with the usual number of printed digits.
pub fn format_trace_table(rows: &[IterationRow]) -> String {
    let mut out = format!(
        "{:>9}  {:>7}  {:>7}  {:>8}  {:>8}  {:>8}  {:>12}\n",
        "R", "r", "eta0*1e3", "eta1*1e3", "kappa", "delta", "R0"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>9.7}  {:>7.5}  {:>8.5}  {:>8.6}  {:>8.6}  {:>8.6}  {:>12.10}",
            row.big_r,
            row.r,
            row.eta0 * 1e3,
            row.eta1 * 1e3,
            row.kappa,
            row.delta,
            row.r0
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub height: f64,
    pub outcome: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fit {
    /// `R0 ≈ a + b / log T0`, with residuals in point order.
    Linear { a: f64, b: f64, residuals: Vec<f64> },
    /// Fewer than two distinct abscissae.
    Degenerate { points: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub fit: Fit,
}

/// Least-squares fit of `y` against `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Fit {
    let n = xs.len();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if n < 2 || !(sxx > 0.0) {
        return Fit::Degenerate { points: n };
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let residuals = xs.iter().zip(ys).map(|(x, y)| y - (a + b * x)).collect();
    Fit::Linear { a, b, residuals }
}

/// Run the iteration at each height and fit `R0` against `1/log T0`.
/// Failed points are kept in the output and left out of the fit.
pub fn t0_sweep(poly: &CosinePolynomial, heights: &[f64], params: &RegionParams, source: &ZeroSource, options: ErrorOptions) -> Result<Sweep> {
    if heights.is_empty() {
        return Err(Error::Domain("sweep needs at least one T0".into()));
    }
    let points: Vec<SweepPoint> = heights
        .par_iter()
        .map(|&height| {
            let p = RegionParams { height, ..*params };
            SweepPoint {
                height,
                outcome: run_iteration(poly, &p, source, options)
                    .map(|it| it.r0)
                    .map_err(|e| e.to_string()),
            }
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok().map(|&r0| (1.0 / p.height.ln(), r0)))
        .unzip();
    let fit = if xs.is_empty() {
        Fit::Degenerate { points: 0 }
    } else {
        linear_fit(&xs, &ys)
    };
    Ok(Sweep { points, fit })
}

/// `count` heights spaced evenly in `log T0` over `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i + 1 == count {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

pub const SWEEP_HEADER: &str = "T0,R0,status";

pub fn format_sweep(sweep: &Sweep) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &sweep.points {
        match &p.outcome {
            Ok(r0) => {
                let _ = writeln!(out, "{:e},{:.10},ok", p.height, r0);
            }
            Err(e) => {
                let _ = writeln!(out, "{:e},,error: {}", p.height, e.replace(',', ";"));
            }
        }
    }
    out
}
