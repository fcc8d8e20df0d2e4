//! Adaptive integration, bracketing root finding and bounded maximisation.
//!
//! Integrals use globally adaptive bisection with a 20-point Gauss–Legendre
//! panel rule; the per-panel error estimate is the difference against the
//! 10-point rule on the same panel. Panels whose estimate has fallen to the
//! rounding floor are not split further.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes of the high-order panel rule.
pub const PANEL_ORDER: usize = 20;
const CHECK_ORDER: usize = 10;
pub const MAX_SUBDIVISIONS: usize = 5000;

/// Default number of scan points for [`find_max_abs`].
pub const MAX_SCAN_POINTS: usize = 20_000;
/// Upward safety factor applied to every maximum.
pub const MAX_SAFETY: f64 = 1e-10;

const SIGN_SCAN_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

impl IntegralResult {
    /// Value pushed up by the error estimate, for quantities used as upper bounds.
    pub fn upper(&self) -> f64 {
        self.value + self.error_estimate
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_estimate
    }
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rules() -> &'static (Rule, Rule) {
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(PANEL_ORDER), gauss_legendre(CHECK_ORDER)))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    floor: f64,
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let (hi, lo) = rules();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (mut q, mut q_abs) = (0.0, 0.0);
    for (x, w) in hi.nodes.iter().zip(&hi.weights) {
        let v = f(mid + half * x);
        q += w * v;
        q_abs += w * v.abs();
    }
    let mut q_check = 0.0;
    for (x, w) in lo.nodes.iter().zip(&lo.weights) {
        q_check += w * f(mid + half * x);
    }
    Panel {
        a,
        b,
        value: q * half,
        err: ((q - q_check) * half).abs(),
        floor: 50.0 * f64::EPSILON * q_abs * half.abs(),
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    if !(a <= b) {
        return Err(Error::Domain(format!("integration limits out of order: [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    let mut panels = vec![panel(&f, a, b)];
    let mut subdivisions = 0;
    loop {
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let floor: f64 = panels.iter().map(|p| p.floor).sum();
        let value: f64 = panels.iter().map(|p| p.value).sum();
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        // Worst panel that is still above its rounding floor.
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.err > p.floor)
            .max_by(|x, y| (x.1.err - x.1.floor).total_cmp(&(y.1.err - y.1.floor)))
            .map(|(i, _)| i);
        let done = err <= tol.max(floor);
        match worst {
            Some(i) if !done => {
                if subdivisions >= MAX_SUBDIVISIONS {
                    return Err(Error::NonConvergence {
                        value,
                        error_estimate: err,
                        subdivisions,
                    });
                }
                let p = panels.swap_remove(i);
                let m = 0.5 * (p.a + p.b);
                if m <= p.a || m >= p.b {
                    // Cannot split further in floating point.
                    panels.push(Panel { err: p.floor, ..p });
                    continue;
                }
                panels.push(panel(&f, p.a, m));
                panels.push(panel(&f, m, p.b));
                subdivisions += 1;
            }
            _ => {
                return Ok(IntegralResult {
                    value,
                    error_estimate: err,
                    subdivisions,
                })
            }
        }
    }
}

/// Integrate `|f|` over `[a, b]`, splitting at the sign changes of `f` so
/// that every kink of `|f|` is a panel endpoint.
pub fn integrate_abs<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    if !(a <= b) {
        return Err(Error::Domain(format!("integration limits out of order: [{a}, {b}]")));
    }
    let breaks = sign_changes(&f, a, b, SIGN_SCAN_POINTS)?;
    let pieces = breaks.len() - 1;
    let mut out = IntegralResult {
        value: 0.0,
        error_estimate: 0.0,
        subdivisions: 0,
    };
    for w in breaks.windows(2) {
        let piece = integrate(&f, w[0], w[1], tol / pieces as f64)?;
        out.value += piece.value.abs();
        out.error_estimate += piece.error_estimate;
        out.subdivisions += piece.subdivisions;
    }
    Ok(out)
}

/// Breakpoints `a = x_0 < ... < x_m = b` with `f` of one sign on each piece.
fn sign_changes<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, scan: usize) -> Result<Vec<f64>> {
    let mut breaks = vec![a];
    if a == b {
        breaks.push(b);
        return Ok(breaks);
    }
    let step = (b - a) / scan as f64;
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..=scan {
        let x = if i == scan { b } else { a + step * i as f64 };
        let fx = f(x);
        if f_prev * fx < 0.0 {
            let root = find_root(f, x_prev, x, 0.0)?;
            if root > *breaks.last().unwrap() && root < b {
                breaks.push(root);
            }
        } else if fx == 0.0 && x < b && x > *breaks.last().unwrap() {
            breaks.push(x);
        }
        x_prev = x;
        f_prev = fx;
    }
    breaks.push(b);
    Ok(breaks)
}

/// Bracketing bisection. Returns the midpoint of a bracket no wider than
/// `tol` (or the narrowest bracket representable when `tol` is 0).
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo * f_hi > 0.0 || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximum of `|f|` on `[lo, hi]`, scaled up by `1 + MAX_SAFETY`.
pub fn find_max_abs<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    find_max_abs_with(f, lo, hi, MAX_SCAN_POINTS)
}

pub fn find_max_abs_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, scan: usize) -> f64 {
    let g = |x: f64| f(x).abs();
    if lo == hi {
        return g(lo) * (1.0 + MAX_SAFETY);
    }
    let scan = scan.max(2);
    let step = (hi - lo) / scan as f64;
    let xs: Vec<f64> = (0..=scan)
        .map(|i| if i == scan { hi } else { lo + step * i as f64 })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut best = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    // Local maxima of the scan, largest first.
    let mut peaks: Vec<usize> = (0..=scan)
        .filter(|&i| {
            let left = i == 0 || ys[i] >= ys[i - 1];
            let right = i == scan || ys[i] >= ys[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&i, &j| ys[j].total_cmp(&ys[i]));
    for &i in peaks.iter().take(5) {
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(scan)];
        let (_, y) = golden_max(g, a, b, 1e-14 * (hi - lo).abs().max(1.0));
        best = best.max(y);
    }
    best * (1.0 + MAX_SAFETY)
}

/// Golden-section search for a maximum of a unimodal `g` on `[a, b]`.
pub fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = if g(a) > g(b) { (a, g(a)) } else { (b, g(b)) };
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    for (x, y) in [(c, gc), (d, gd)] {
        if y > best.1 {
            best = (x, y);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // The 10-point check rule is exact up to degree 19 as well.
        let r = integrate(|x| x.powi(19), 0.0, 1.0, 1e-15).unwrap();
        assert!((r.value - 1.0 / 20.0).abs() < 1e-15);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn constant_and_sine() {
        let one = integrate(|_| 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((one.value - 1.0).abs() <= 1e-14);
        let s = integrate(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((s.value - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn reversed_limits_rejected() {
        assert!(matches!(integrate(|x| x, 1.0, 0.0, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn integrable_singularity_reaches_rounding_floor() {
        let r = integrate(|x: f64| 1.0 / x.sqrt().max(1e-300), 0.0, 1.0, 1e-300).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wild_oscillation_reports_nonconvergence() {
        let r = integrate(|x: f64| (1e6 * x).sin(), 0.0, 1e3, 1e-14);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn abs_integrals() {
        let r = integrate_abs(|x| x, -1.0, 1.0, 1e-13).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        let c = integrate_abs(f64::cos, 0.0, 2.0 * PI, 1e-12).unwrap();
        assert!((c.value - 4.0).abs() < 1e-11);
    }

    #[test]
    fn roots() {
        let r = find_root(|x| x - 2.0, 0.0, 5.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() <= 1e-12);
        let t = find_root(|t: f64| (t / 2.0).ln() - 2.0 / (1.0 + 4.0 * t * t), 2.0, 3.0, 1e-14)
            .unwrap();
        assert!((t - 2.205).abs() < 1e-3);
        assert!(matches!(
            find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn maxima() {
        let m = find_max_abs(f64::sin, 0.0, PI);
        assert!((m - (1.0 + 1e-10)).abs() < 1e-13);
        let q = find_max_abs(|x| -(x - 0.5) * (x - 0.5) + 1.0, 0.0, 1.0);
        assert!((q - 1.0).abs() < 1e-9);
        assert!(q >= 1.0);
    }
}
