//! θ-dependent quantities of Kadiri's method and the error term `C(η)`.
//!
//! Notation: `T = tan θ`, `S = sec² θ`, `d1 = −2θ/T`, `g1 = h_θ(0)`.

use std::f64::consts::PI;

use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::quadrature::{find_max_abs, find_root, integrate, integrate_abs};
use crate::trigpoly::CosinePolynomial;

/// Lower end of the θ range where the cubic bound for `e^y` can be used.
pub const THETA_MIN: f64 = 1.8469;
/// `e^y ≤ 1 + y + y²/2 + y³/3.45` holds for `0 ≤ y ≤ Y0`.
pub const Y0: f64 = 1.91094;
pub const CUBIC_DENOMINATOR: f64 = 3.45;

pub const THETA_TOL: f64 = 1e-12;
pub const ITERATION_TOL: f64 = 1e-10;
pub const WINDOW_TOL: f64 = 1e-14;
pub const DELTA_TOL: f64 = 1e-12;
const NUDGE: f64 = 1e-12;

fn delta_bracket() -> (f64, f64) {
    ((5f64.sqrt() - 1.0) / 2.0, 0.866)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > PI / 2.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::Domain(format!("θ = {theta} is outside (π/2, π)")))
    }
}

fn h_raw(theta: f64, u: f64) -> f64 {
    let t = theta.tan();
    let s = 1.0 / (theta.cos() * theta.cos());
    s * (s * (-theta / t - u / 2.0) * (u * t).cos() - 2.0 * theta / t - u
        - (2.0 * theta + u * t).sin() / (2.0 * theta).sin()
        + 2.0 * (1.0 + (theta + u * t).sin() / theta.sin()))
}

fn h2_raw(theta: f64, u: f64) -> f64 {
    let t = theta.tan();
    let t2 = t * t;
    let s = 1.0 / (theta.cos() * theta.cos());
    s * (s * (t * (u * t).sin() + (theta / t + u / 2.0) * t2 * (u * t).cos())
        + t2 * (2.0 * theta + u * t).sin() / (2.0 * theta).sin()
        - 2.0 * t2 * (theta + u * t).sin() / theta.sin())
}

pub fn h_theta(theta: f64, u: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(h_raw(theta, u))
}

/// Second derivative of [`h_theta`] in `u`.
pub fn h2_theta(theta: f64, u: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(h2_raw(theta, u))
}

/// `sec²θ (3 − θ tan θ − 3θ cot θ)`.
pub fn g1_closed(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let t = theta.tan();
    Ok((3.0 - theta * t - 3.0 * theta / t) / (theta.cos() * theta.cos()))
}

pub fn d1(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(-2.0 * theta / theta.tan())
}

fn t_star_fn(t: f64) -> f64 {
    (t / 2.0).ln() - 2.0 / (1.0 + 4.0 * t * t)
}

/// Root of `log(t/2) − 2/(1+4t²)` on `[2, 3]`.
pub fn t_star() -> f64 {
    find_root(t_star_fn, 2.0, 3.0, 0.0).expect("t* is bracketed by [2, 3]")
}

pub fn c_constant(t_star: f64) -> f64 {
    let t2 = t_star * t_star;
    2f64.ln() + 2.0 / (1.0 + 4.0 * t2) - 2.0 / (3.0 * t_star) - 1.0 / (8.0 * t2)
}

/// Everything that depends on θ alone, computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTable {
    pub theta: f64,
    pub g1: f64,
    pub d1: f64,
    /// `max |h''_θ|` on `[0, d1]`.
    pub m: f64,
    /// `M_k = ∫_0^{d1} |h''_θ(u)| u^k du`, rounded up by their error estimates.
    pub moments: [f64; 4],
    pub t_star: f64,
    pub c_const: f64,
}

impl ThetaTable {
    pub fn new(theta: f64) -> Result<Self> {
        Self::with_tolerance(theta, THETA_TOL)
    }

    pub fn with_tolerance(theta: f64, tol: f64) -> Result<Self> {
        check_theta(theta)?;
        if theta <= THETA_MIN {
            return Err(Error::Domain(format!(
                "θ = {theta} must exceed {THETA_MIN} for the cubic bound on e^y behind M*"
            )));
        }
        let d1 = d1(theta)?;
        let g1 = h_raw(theta, 0.0);
        let m = find_max_abs(|u| h2_raw(theta, u), 0.0, d1);
        let mut moments = [0.0; 4];
        for (k, slot) in moments.iter_mut().enumerate() {
            let r = integrate_abs(|u| h2_raw(theta, u) * u.powi(k as i32), 0.0, d1, tol)?;
            *slot = r.upper();
        }
        let t_star = t_star();
        Ok(ThetaTable {
            theta,
            g1,
            d1,
            m,
            moments,
            t_star,
            c_const: c_constant(t_star),
        })
    }

    pub fn h(&self, u: f64) -> f64 {
        h_raw(self.theta, u)
    }

    pub fn h2(&self, u: f64) -> f64 {
        h2_raw(self.theta, u)
    }
}

/// Upper bound for `∫_0^{d1} |h''_θ(u)| e^{−zu} du` from the cubic bound on
/// the exponential. Each term is moved by a relative 1e-12 in the direction
/// that enlarges the total.
pub fn m_star(z: f64, table: &ThetaTable) -> Result<f64> {
    if !(z > -1.0 && z <= 0.0) {
        return Err(Error::Domain(format!("z = {z} is outside (−1, 0]")));
    }
    if table.d1 > Y0 {
        return Err(Error::Domain(format!(
            "d1(θ) = {} exceeds {Y0}, where the cubic bound on e^y stops holding",
            table.d1
        )));
    }
    let [m0, m1, m2, m3] = table.moments;
    let terms = [
        m0,
        -m1 * z,
        m2 * z * z / 2.0,
        -m3 * z * z * z / CUBIC_DENOMINATOR,
    ];
    Ok(terms.iter().map(|v| v + NUDGE * v.abs()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub eta0: f64,
    pub sigma0: f64,
    pub w0: f64,
}

impl ScaleParams {
    /// `η0 = 1/(r log T0)`, `σ0 = 1 − 1/(R log(nT0 + t0))`, `w0 = (1 − σ0)/η0`.
    pub fn new(r: f64, big_r: f64, n: usize, height: f64, t0: f64) -> Result<Self> {
        if !(r > 0.0 && big_r > 0.0 && height > 1.0 && t0 > 0.0) {
            return Err(Error::Domain(format!(
                "scale parameters need r, R, t0 > 0 and T0 > 1 (r = {r}, R = {big_r}, T0 = {height}, t0 = {t0})"
            )));
        }
        let eta0 = 1.0 / (r * height.ln());
        let sigma0 = 1.0 - 1.0 / (big_r * (n as f64 * height + t0).ln());
        if !(sigma0 > 0.5 && sigma0 < 1.0) {
            return Err(Error::Domain(format!("σ0 = {sigma0} is outside (1/2, 1)")));
        }
        Ok(ScaleParams {
            eta0,
            sigma0,
            w0: (1.0 - sigma0) / eta0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaDelta {
    pub delta: f64,
    pub kappa: f64,
}

fn kappa_numerator(sigma0: f64, eta0: f64, table: &ThetaTable) -> f64 {
    let me2 = table.m * eta0 * eta0;
    table.g1 * (2.0 * sigma0 - 1.0) - me2 / (2.0 * sigma0 - 1.0)
}

pub fn kappa2(delta: f64, sigma0: f64, eta0: f64, table: &ThetaTable) -> f64 {
    let me2 = table.m * eta0 * eta0;
    let s = 2.0 * sigma0 - 1.0;
    kappa_numerator(sigma0, eta0, table)
        / ((1.0 + 2.0 * delta) * table.g1 + (1.0 / delta + 1.0 / (delta + s)) * me2)
}

pub fn kappa3(delta: f64, sigma0: f64, eta0: f64, table: &ThetaTable) -> f64 {
    let me2 = table.m * eta0 * eta0;
    let s = 2.0 * sigma0 - 1.0;
    kappa_numerator(sigma0, eta0, table)
        / ((1.0 / delta + (1.0 + delta) / ((delta + s) * (delta + s))) * table.g1
            + (1.0 / delta.powi(3) + 1.0 / (delta + s).powi(3)) * me2)
}

/// Solve `κ2(δ) = κ3(δ)` on the admissible δ interval and check the
/// constraints tying κ to δ.
pub fn kappa_delta(sigma0: f64, eta0: f64, table: &ThetaTable) -> Result<KappaDelta> {
    if !(sigma0 > 0.5 && sigma0 < 1.0) || !(eta0 > 0.0) {
        return Err(Error::Domain(format!(
            "κ/δ need σ0 ∈ (1/2, 1) and η0 > 0 (σ0 = {sigma0}, η0 = {eta0})"
        )));
    }
    let (lo, hi) = delta_bracket();
    let delta = find_root(
        |d| kappa2(d, sigma0, eta0, table) - kappa3(d, sigma0, eta0, table),
        lo,
        hi,
        DELTA_TOL,
    )?;
    let kappa = kappa2(delta, sigma0, eta0, table);
    let k3 = kappa3(delta, sigma0, eta0, table);
    if !((kappa - k3).abs() <= 1e-9 * kappa.abs()) {
        return Err(Error::Constraint(format!(
            "κ2(δ) = {kappa} and κ3(δ) = {k3} differ at δ = {delta}"
        )));
    }
    let kd = KappaDelta { delta, kappa };
    check_kappa_delta(&kd)?;
    Ok(kd)
}

pub fn check_kappa_delta(kd: &KappaDelta) -> Result<()> {
    let (d, k) = (kd.delta, kd.kappa);
    let (lo, hi) = delta_bracket();
    if !(d >= lo && d <= hi) {
        return Err(Error::Constraint(format!("δ = {d} is outside [{lo}, {hi}]")));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Constraint(format!("κ = {k} is outside (0, 1)")));
    }
    let lower = 1.0 / d + 1.0 / (0.99 + d);
    let upper = 1.0 / d.powi(3) + 1.0 / (1.0 + d).powi(3);
    if !(lower <= 1.0 / k) {
        return Err(Error::Constraint(format!(
            "1/δ + 1/(0.99+δ) = {lower} exceeds 1/κ = {}",
            1.0 / k
        )));
    }
    if !(1.0 / k <= upper) {
        return Err(Error::Constraint(format!(
            "1/κ = {} exceeds 1/δ³ + 1/(1+δ)³ = {upper}",
            1.0 / k
        )));
    }
    Ok(())
}

/// `K(w) = ∫_0^{d1} (a1 e^{−u} − a0) h_θ(u) e^{wu} du`.
pub fn k_integral(w: f64, table: &ThetaTable, a0: f64, a1: f64) -> Result<f64> {
    let r = integrate(
        |u| (a1 * (-u).exp() - a0) * table.h(u) * (w * u).exp(),
        0.0,
        table.d1,
        ITERATION_TOL,
    )?;
    Ok(r.value)
}

/// Bound for `|Re Γ'/Γ|`-type terms on the critical line, as a function of `t`.
pub fn u0_bound(t: f64) -> f64 {
    let t2 = t * t;
    if t.abs() < 0.5 {
        0.5 * (16.0 / (1.0 + 4.0 * t2)).ln() + 2.0 / (1.0 + 4.0 * t2) + 2.0
    } else {
        ((t.abs() / 2.0).ln() - 2.0 / (1.0 + 4.0 * t2)).abs() + 2.0 / (3.0 * t.abs()) + 1.0 / (8.0 * t2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorOptions {
    /// Half-width, relative to `b`, of the window around `t = b` in the
    /// bound for `∫ U0(t)/(a² + (b−t)²) dt`.
    pub window_eps: f64,
    /// Multiplier on the `k = 0` term of `Σ a_k C41(k)`; values above 1 only
    /// enlarge the error term.
    pub zero_mode_weight: f64,
    /// Truncation point for the `k = 0` integral; the tail beyond it is
    /// bounded analytically.
    pub zero_mode_cutoff: f64,
}

impl Default for ErrorOptions {
    fn default() -> Self {
        ErrorOptions {
            window_eps: 1e-3,
            zero_mode_weight: 2.0,
            zero_mode_cutoff: 1e6,
        }
    }
}

/// Upper bound for `∫_{−∞}^{∞} U0(t)/(a² + (b−t)²) dt`.
pub fn u0_kernel_integral(a: f64, b: f64, table: &ThetaTable, opts: &ErrorOptions) -> Result<f64> {
    let ts = table.t_star;
    let c = table.c_const;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("kernel width a = {a} must be positive")));
    }
    if b == 0.0 {
        let f = |t: f64| u0_bound(t) / (a * a + t * t);
        let x = opts.zero_mode_cutoff;
        let mut total = integrate(f, 0.0, 0.5, THETA_TOL)?.upper() + integrate(f, 0.5, ts, THETA_TOL)?.upper();
        let mut lo = ts;
        while lo < x {
            let hi = (2.0 * lo).min(x);
            total += integrate(f, lo, hi, THETA_TOL)?.upper();
            lo = hi;
        }
        return Ok(2.0 * total + (x.ln() + 1.0 - c) / x);
    }
    let eps = opts.window_eps;
    if !(b * (1.0 - eps) > ts) {
        return Err(Error::Domain(format!(
            "height b = {b} is too small for the window split around t = b"
        )));
    }
    let f = |t: f64| u0_bound(t) / (a * a + (b - t) * (b - t));
    let numeric = integrate(f, -ts, -0.5, WINDOW_TOL)?.upper()
        + integrate(f, -0.5, 0.5, WINDOW_TOL)?.upper()
        + integrate(f, 0.5, ts, WINDOW_TOL)?.upper();
    let closed = PI / a * (b * (1.0 + eps)).ln()
        + (2.0 * b.ln() / eps + (1.0 + 1.0 / eps) * eps.ln_1p() - (1.0 - 1.0 / eps) * (-eps).ln_1p()
            + ((b + ts) / (b - ts)).ln())
            / b
        - ts * ts.ln() / b * (1.0 / (b + ts) + 1.0 / (b - ts))
        - c * (1.0 / (b + ts) + (((b - ts) / a).atan() + PI / 2.0) / a);
    Ok(numeric + closed)
}

/// Inputs of the error term at one `(r, R)`.
#[derive(Debug, Clone, Copy)]
pub struct ErrorInputs<'a> {
    pub poly: &'a CosinePolynomial,
    pub table: &'a ThetaTable,
    pub scale: ScaleParams,
    pub kd: KappaDelta,
    pub height: f64,
    pub r: f64,
    pub big_r: f64,
    /// `c30(kT0)` for `k = 0..=n`.
    pub c30: &'a [f64],
    pub options: ErrorOptions,
}

/// `C(η) = C1 + C2 + C3 + C4`, stored as polynomial coefficients in η.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerm {
    /// `C1 = η · c1_sum`.
    pub c1_sum: f64,
    /// `C2 = q1 η + q2 η² + q3 η³`.
    pub q: [f64; 3],
    /// `C3 = p1 η + p2 η² + p3 η³`.
    pub p: [f64; 3],
    /// `C4 = η³ · c4_sum`.
    pub c4_sum: f64,
}

fn r2(x1: f64, y0: f64, kd: &KappaDelta) -> f64 {
    let (d, k) = (kd.delta, kd.kappa);
    (1.0 - k) / 2.0 * (1.0 + (x1 + d) * (x1 + d) / (y0 * y0)).ln()
        + ((y0 / x1).atan() + k * (y0 / (x1 + d)).atan()) / y0
}

fn r3(x0: f64, x1: f64, y0: f64, kd: &KappaDelta) -> f64 {
    let (d, k) = (kd.delta, kd.kappa);
    (1.0 / x0 + k / (x0 + d)) / (3.0 * y0) + (x1 * x1 + k * (x1 + d) * (x1 + d)) / (2.0 * y0 * y0)
}

/// `c1(k)` for `k = 0..=n`.
pub fn c1_coeffs(n: usize, sigma0: f64, height: f64, kd: &KappaDelta) -> Vec<f64> {
    let (d, k) = (kd.delta, kd.kappa);
    let mut out = Vec::with_capacity(n + 1);
    out.push((k - 1.0) / 2.0 * PI.ln() + 0.5 * digamma(1.5) - k / 2.0 * digamma((sigma0 + d) / 2.0 + 1.0));
    let (x0, x1) = (sigma0 + 2.0, 3.0);
    for j in 1..=n {
        let y0 = j as f64 * height;
        let rmin = r2(x1, y0, kd).min(r3(x0, x1, y0, kd));
        out.push((k - 1.0) / 2.0 * (2.0 * PI / j as f64).ln() + 0.5 * rmin);
    }
    out
}

impl ErrorTerm {
    pub fn new(inp: &ErrorInputs) -> Result<Self> {
        let a = inp.poly.coeffs();
        let n = a.len() - 1;
        if let Some(k) = a.iter().position(|&x| x < 0.0) {
            return Err(Error::Domain(format!("a_{k} = {} is negative", a[k])));
        }
        if inp.c30.len() != n + 1 {
            return Err(Error::Domain(format!(
                "need {} c30 values, got {}",
                n + 1,
                inp.c30.len()
            )));
        }
        let t = inp.table;
        let (g1, m) = (t.g1, t.m);
        let ScaleParams { eta0, sigma0, .. } = inp.scale;
        let KappaDelta { delta, kappa } = inp.kd;
        let height = inp.height;

        let c1 = c1_coeffs(n, sigma0, height, &inp.kd);
        let c1_sum = g1 * a.iter().zip(&c1).map(|(x, y)| x * y).sum::<f64>();

        let s2: f64 = (1..=n)
            .map(|k| {
                let y = k as f64 * height;
                a[k] / (y * y)
            })
            .sum();
        let ms = m_star(-inp.r / inp.big_r, t)?;
        let sd = sigma0 - 1.0 + delta;
        let q = [
            -kappa * g1 * (a[0] / delta + sd / 2.0 * s2),
            ms * s2,
            a[0] * m * kappa / sd.powi(3) + m * kappa / sd * s2,
        ];

        let sc30: f64 = a.iter().zip(inp.c30).map(|(x, y)| x * y).sum();
        let se = sigma0 - eta0 + delta;
        let p = [
            a[1] * g1 * ((1.0 / delta + 1.0 / se) * kappa - 1.0) + ms * eta0 * sc30,
            (1.0 + 2.0 * kappa) * m * eta0 / (sigma0 - 0.5) * sc30,
            a[1] * m * ((1.0 / delta.powi(3) + 1.0 / se.powi(3)) * kappa + 1.0),
        ];

        let wa = sigma0 - 0.5;
        let wb = wa + delta;
        let mut s4 = 0.0;
        for (k, &ak) in a.iter().enumerate() {
            let b = k as f64 * height;
            let c41 = u0_kernel_integral(wa, b, t, &inp.options)? / (2.0 * PI * wa)
                + kappa * u0_kernel_integral(wb, b, t, &inp.options)? / (2.0 * PI * wb);
            let (c42, weight) = if k == 0 {
                (
                    1.0 / sigma0.powi(3) + kappa / (sigma0 + delta).powi(3),
                    inp.options.zero_mode_weight,
                )
            } else {
                ((1.0 / sigma0 + kappa / (sigma0 + delta)) / (b * b), 1.0)
            };
            s4 += ak * (weight * c41 + c42);
        }
        Ok(ErrorTerm {
            c1_sum,
            q,
            p,
            c4_sum: m * s4,
        })
    }

    /// `[C1, C2, C3, C4]` at `eta`.
    pub fn parts(&self, eta: f64) -> [f64; 4] {
        let poly = |c: &[f64; 3]| eta * (c[0] + eta * (c[1] + eta * c[2]));
        [
            self.c1_sum * eta,
            poly(&self.q),
            poly(&self.p),
            self.c4_sum * eta.powi(3),
        ]
    }

    pub fn eval(&self, eta: f64) -> f64 {
        self.parts(eta).iter().sum()
    }
}
