//! Line-oriented text formats for tensors and nets.
//!
//! Tensor files:
//!
//! ```text
//! symtensor n=2 m=3 basis=orthonormal
//! 1 1 1 7.0710678118654752e-1 0e0
//! 1 1 2 0e0 -7.0710678118654752e-1
//! ```
//!
//! One line per nonzero coefficient: the nondecreasing multi-index followed
//! by the real and imaginary parts in round-trip-exact scientific notation.
//! Net files carry a `epsnet n=<n> eps=<eps>` header and one unit vector per
//! line as alternating re/im pairs. Parse errors report 1-based line
//! numbers.

use crate::error::{Error, Result};
use crate::index::{dim_sym, MultiIndex};
use crate::scalar::Real;
use crate::tensor::SymmetricTensor;
use num_complex::Complex;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Serializes a tensor; coefficients that are exactly zero are omitted.
pub fn tensor_to_string<T: Real>(t: &SymmetricTensor<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "symtensor n={} m={} basis=orthonormal", t.n(), t.m());
    for (rank, z) in t.coeffs().iter().enumerate() {
        if z.re == T::zero() && z.im == T::zero() {
            continue;
        }
        let idx = MultiIndex::unrank(rank as u64, t.n(), t.m()).expect("rank in range");
        for &e in idx.entries() {
            let _ = write!(out, "{e} ");
        }
        let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
    }
    out
}

/// Parses the tensor format. Duplicate, unsorted, or out-of-range indices
/// are parse errors carrying the line number.
pub fn tensor_from_str<T: Real>(text: &str) -> Result<SymmetricTensor<T>> {
    let mut lines = text.lines().enumerate();
    let (n, m) = loop {
        let (li, line) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        break parse_tensor_header(li + 1, line)?;
    };

    let dim = dim_sym(n, m)?;
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); dim as usize];
    let mut seen = vec![false; dim as usize];
    for (li, line) in lines {
        let lineno = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != m as usize + 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected {} index entries and 2 floats, got {} tokens",
                    m,
                    tokens.len()
                ),
            });
        }
        let mut entries = Vec::with_capacity(m as usize);
        for tok in &tokens[..m as usize] {
            let e: u32 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad index entry '{tok}'"),
            })?;
            entries.push(e);
        }
        let idx = MultiIndex::new(n, entries).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let re = parse_float(lineno, tokens[m as usize])?;
        let im = parse_float(lineno, tokens[m as usize + 1])?;
        let rank = idx.rank() as usize;
        if seen[rank] {
            return Err(Error::Parse {
                line: lineno,
                message: "duplicate multi-index".into(),
            });
        }
        seen[rank] = true;
        coeffs[rank] = Complex::new(T::of(re), T::of(im));
    }
    SymmetricTensor::new(n, m, coeffs)
}

fn parse_tensor_header(lineno: usize, line: &str) -> Result<(u32, u32)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "symtensor" || tokens[3] != "basis=orthonormal" {
        return Err(Error::Parse {
            line: lineno,
            message: "header must be 'symtensor n=<n> m=<m> basis=orthonormal'".into(),
        });
    }
    let n = parse_kv(lineno, tokens[1], "n")?;
    let m = parse_kv(lineno, tokens[2], "m")?;
    Ok((n, m))
}

fn parse_kv(lineno: usize, token: &str, key: &str) -> Result<u32> {
    let value = token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected {key}=<integer>, got '{token}'"),
        })?;
    value.parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("bad integer in '{token}'"),
    })
}

fn parse_float(lineno: usize, token: &str) -> Result<f64> {
    let x: f64 = token.parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("bad float '{token}'"),
    })?;
    if !x.is_finite() {
        return Err(Error::Parse {
            line: lineno,
            message: format!("non-finite value '{token}'"),
        });
    }
    Ok(x)
}

/// Writes a tensor file.
pub fn write_tensor_file<T: Real>(t: &SymmetricTensor<T>, path: &Path) -> Result<()> {
    fs::write(path, tensor_to_string(t)).map_err(|e| Error::io(path, e))
}

/// Reads a tensor file.
pub fn read_tensor_file<T: Real>(path: &Path) -> Result<SymmetricTensor<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    tensor_from_str(&text)
}

/// Serializes a list of vectors in the net format.
pub fn net_to_string<T: Real>(n: u32, eps: T, points: &[Vec<Complex<T>>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "epsnet n={n} eps={eps:e}");
    for p in points {
        let mut first = true;
        for z in p {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{:e} {:e}", z.re, z.im);
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Parses the net format, returning (n, eps, points).
pub fn net_from_str<T: Real>(text: &str) -> Result<(u32, T, Vec<Vec<Complex<T>>>)> {
    let mut lines = text.lines().enumerate();
    let (n, eps) = loop {
        let (li, line) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = li + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "epsnet" {
            return Err(Error::Parse {
                line: lineno,
                message: "header must be 'epsnet n=<n> eps=<eps>'".into(),
            });
        }
        let n = parse_kv(lineno, tokens[1], "n")?;
        let eps_str = tokens[2].strip_prefix("eps=").ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected eps=<float>, got '{}'", tokens[2]),
        })?;
        let eps = parse_float(lineno, eps_str)?;
        break (n, T::of(eps));
    };

    let mut points = Vec::new();
    for (li, line) in lines {
        let lineno = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 * n as usize {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {} floats, got {}", 2 * n, tokens.len()),
            });
        }
        let mut p = Vec::with_capacity(n as usize);
        for pair in tokens.chunks(2) {
            let re = parse_float(lineno, pair[0])?;
            let im = parse_float(lineno, pair[1])?;
            p.push(Complex::new(T::of(re), T::of(im)));
        }
        points.push(p);
    }
    Ok((n, eps, points))
}
