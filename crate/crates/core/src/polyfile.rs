//! Plain-text polynomial files.
//!
//! ```text
//! # comment
//! n 2
//! c 0 1
//! c 1 2
//! c 2 1
//! a 0 1
//! a 1 1.3333333333333333
//! a 2 0.3333333333333333
//! ```
//!
//! Either the `c` block (spectral factor) or the `a` block (cosine
//! coefficients) may be given, or both. When the factor is present the
//! polynomial is rebuilt from it and the `a` lines are informational.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::trigpoly::{cosine_from_factor, CosinePolynomial, SpectralFactor};

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFile {
    pub factor: Option<SpectralFactor>,
    /// Cosine coefficients normalised so that `a_0 = 1`.
    pub cosine: CosinePolynomial,
}

impl PolyFile {
    pub fn from_factor(factor: SpectralFactor) -> Self {
        let cosine = cosine_from_factor(&factor).normalized();
        PolyFile {
            factor: Some(factor),
            cosine,
        }
    }

    pub fn from_cosine(cosine: CosinePolynomial) -> Self {
        PolyFile {
            factor: None,
            cosine: cosine.normalized(),
        }
    }

    pub fn degree(&self) -> usize {
        self.cosine.degree()
    }
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::PolyFormat {
        line,
        message: message.into(),
    }
}

pub fn parse_poly(text: &str) -> Result<PolyFile> {
    let mut degree: Option<(usize, usize)> = None;
    let mut c: Vec<Option<f64>> = Vec::new();
    let mut a: Vec<Option<f64>> = Vec::new();
    let (mut saw_c, mut saw_a) = (false, false);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["n", d] => {
                if degree.is_some() {
                    return Err(bad(line_no, "degree declared twice"));
                }
                let n: usize = d
                    .parse()
                    .map_err(|_| bad(line_no, format!("bad degree {d:?}")))?;
                if n == 0 {
                    return Err(bad(line_no, "degree must be positive"));
                }
                degree = Some((n, line_no));
                c = vec![None; n + 1];
                a = vec![None; n + 1];
            }
            [kind @ ("c" | "a"), k, v] => {
                let Some((n, _)) = degree else {
                    return Err(bad(line_no, "coefficient before the `n` line"));
                };
                let k: usize = k
                    .parse()
                    .map_err(|_| bad(line_no, format!("bad index {k:?}")))?;
                if k > n {
                    return Err(bad(line_no, format!("index {k} exceeds degree {n}")));
                }
                let v: f64 = v
                    .parse()
                    .map_err(|_| bad(line_no, format!("bad value {v:?}")))?;
                if !v.is_finite() {
                    return Err(bad(line_no, "non-finite coefficient"));
                }
                let slot = if *kind == "c" {
                    saw_c = true;
                    &mut c[k]
                } else {
                    saw_a = true;
                    &mut a[k]
                };
                if slot.replace(v).is_some() {
                    return Err(bad(line_no, format!("{kind} {k} given twice")));
                }
            }
            _ => return Err(bad(line_no, format!("unrecognised line {line:?}"))),
        }
    }

    let Some((_, n_line)) = degree else {
        return Err(bad(0, "missing `n <degree>` line"));
    };
    let complete = |v: &[Option<f64>], kind: &str| -> Result<Vec<f64>> {
        v.iter()
            .enumerate()
            .map(|(k, x)| x.ok_or_else(|| bad(n_line, format!("missing {kind} {k}"))))
            .collect()
    };
    if saw_c {
        let c = complete(&c, "c")?;
        if saw_a {
            complete(&a, "a")?;
        }
        Ok(PolyFile::from_factor(SpectralFactor::from_unnormalized(&c)?))
    } else if saw_a {
        let a = complete(&a, "a")?;
        if !(a[0] > 0.0) {
            return Err(bad(n_line, "a 0 must be positive"));
        }
        Ok(PolyFile::from_cosine(CosinePolynomial::new(a)?))
    } else {
        Err(bad(n_line, "no coefficients"))
    }
}

pub fn read_poly(path: impl AsRef<Path>) -> Result<PolyFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_poly(&text)
}

/// Serialise with 17 significant digits; `c` lines are written when the
/// factor is known, `a` lines always.
pub fn format_poly(poly: &PolyFile, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(comment) = comment {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "n {}", poly.degree());
    if let Some(factor) = &poly.factor {
        for (k, v) in factor.coeffs().iter().enumerate() {
            let _ = writeln!(out, "c {k} {v:.16e}");
        }
    }
    for (k, v) in poly.cosine.coeffs().iter().enumerate() {
        let _ = writeln!(out, "a {k} {v:.16e}");
    }
    out
}

pub fn write_poly(path: impl AsRef<Path>, poly: &PolyFile, comment: Option<&str>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_poly(poly, comment)).map_err(|e| Error::io(path, e))
}
