//! Exponential lower bounds from endpoint-constrained counts.
//!
//! A graceful permutation of `2m` labels running from `j` to `j + m` only
//! uses edges between a label below `m` and one at or above `m`. Shifting its
//! large labels up by `r` and appending any graceful `r`-permutation that
//! starts at `j` (shifted by `m`) gives a graceful `(r + 2m)`-permutation that
//! starts at `j`. Iterating this shows `G(n) >= c * gamma^n` with
//! `gamma = G(2m; j, j+m)^(1/2m)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::error::{Error, Result};
use crate::search::{count_with, enumerate, is_graceful, Constraint, GracefulPermutation, SearchOptions};

/// Decimal places kept (by truncation) in reported growth bases.
pub const GAMMA_DECIMALS: u32 = 4;

/// True iff every edge of `p` joins a label below `m` to one at or above it.
pub fn is_bipartite_graceful(p: &GracefulPermutation, m: usize) -> Result<bool> {
    if p.len() != 2 * m {
        return Err(Error::InvalidInput(format!("permutation has {} labels, expected 2m = {}", p.len(), 2 * m)));
    }
    Ok(p.as_slice().windows(2).all(|w| (w[0] < m) != (w[1] < m)))
}

/// Glues a bipartite `(2m; j, j+m)`-permutation `p` and an `(r; j)`-permutation
/// `q` into an `(r + 2m; j)`-permutation. Either input may be given in reverse.
pub fn glue(
    p: &GracefulPermutation,
    q: &GracefulPermutation,
    m: usize,
    j: usize,
    r: usize,
) -> Result<GracefulPermutation> {
    if m == 0 || j >= m {
        return Err(Error::InvalidInput(format!("glue needs j < m (got m={m}, j={j})")));
    }
    if p.len() != 2 * m {
        return Err(Error::InvalidInput(format!("left part: {} labels, expected {}", p.len(), 2 * m)));
    }
    if q.len() != r {
        return Err(Error::InvalidInput(format!("right part: {} labels, expected r = {r}", q.len())));
    }
    let p = match (p.first(), p.last()) {
        (a, b) if a == j && b == j + m => p.clone(),
        (a, b) if a == j + m && b == j => p.reversed(),
        (a, b) => {
            return Err(Error::InvalidInput(format!("left part has ends {a},{b}, expected {j},{}", j + m)));
        }
    };
    if !is_bipartite_graceful(&p, m)? {
        return Err(Error::InvalidInput(format!("left part {p} is not bipartite graceful")));
    }
    let q = if q.first() == j {
        q.clone()
    } else if q.last() == j {
        q.reversed()
    } else {
        return Err(Error::InvalidInput(format!("right part {q} has no end at {j}")));
    };

    let mut seq: Vec<usize> = p.as_slice().iter().map(|&x| if x >= m { x + r } else { x }).collect();
    seq.extend(q.as_slice().iter().map(|&x| x + m));
    debug_assert!(is_graceful(&seq));
    GracefulPermutation::new(seq)
}

/// Both sides of `G(r+2m; j) >= G(2m; j, j+m) * G(r; j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

fn constrained(n: usize, c: Constraint, opts: &SearchOptions) -> Result<u128> {
    // A constraint naming a label outside 0..n admits nothing.
    match c.validate(n) {
        Ok(()) => Ok(count_with(n, c, opts)?.count),
        Err(Error::LabelOutOfRange { .. }) => Ok(0),
        Err(e) => Err(e),
    }
}

pub fn verify_inequality(r: usize, m: usize, j: usize, opts: &SearchOptions) -> Result<Inequality> {
    if r == 0 || m == 0 || j > m {
        return Err(Error::InvalidInput(format!("need r, m >= 1 and j <= m (got r={r}, m={m}, j={j})")));
    }
    let lhs = constrained(r + 2 * m, Constraint::OneEndpoint(j), opts)?;
    let pair = constrained(2 * m, Constraint::TwoEndpoints(j, j + m), opts)?;
    let right = constrained(r, Constraint::OneEndpoint(j), opts)?;
    let rhs = pair.checked_mul(right).ok_or(Error::Overflow { level: 0 })?;
    Ok(Inequality { lhs, rhs, holds: lhs >= rhs })
}

/// A decimal threshold `numer / 10^scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub numer: u64,
    pub scale: u32,
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed threshold {s:?}"));
        let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let numer = format!("{int}{frac}").parse::<u64>().map_err(|_| bad())?;
        Ok(Threshold { numer, scale: frac.len() as u32 })
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.numer);
        }
        let digits = format!("{:0>width$}", self.numer, width = self.scale as usize + 1);
        let (int, frac) = digits.split_at(digits.len() - self.scale as usize);
        write!(f, "{int}.{frac}")
    }
}

/// Exact test of `count^(1/exponent) > threshold`, i.e.
/// `count * 10^(scale * exponent) > numer^exponent`.
pub fn certify_bound(count: u128, exponent: u32, threshold: Threshold) -> bool {
    let lhs = BigUint::from(count) * BigUint::from(10u32).pow(threshold.scale * exponent);
    let rhs = BigUint::from(threshold.numer).pow(exponent);
    lhs > rhs
}

/// `floor(10^decimals * count^(1/exponent))`, computed exactly.
pub fn root_floor_scaled(count: u128, exponent: u32, decimals: u32) -> BigUint {
    let scaled = BigUint::from(count) * BigUint::from(10u32).pow(decimals * exponent);
    scaled.nth_root(exponent)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundResult {
    pub m: usize,
    pub j: usize,
    /// `G(2m; j, j+m)`.
    pub count: u128,
    /// Growth base rounded toward zero to [`GAMMA_DECIMALS`] places.
    pub gamma: f64,
    /// The same value as exact text, e.g. `"2.3774"`.
    pub gamma_text: String,
    /// Set when the count is zero and no bound follows.
    pub empty: bool,
    pub certified: Option<(Threshold, bool)>,
}

pub fn gamma(m: usize, j: usize, threshold: Option<Threshold>, opts: &SearchOptions) -> Result<BoundResult> {
    if m == 0 || j > m {
        return Err(Error::InvalidInput(format!("need m >= 1 and j <= m (got m={m}, j={j})")));
    }
    let count = constrained(2 * m, Constraint::TwoEndpoints(j, j + m), opts)?;
    let exponent = (2 * m) as u32;
    let scaled = root_floor_scaled(count, exponent, GAMMA_DECIMALS);
    let unit = 10u64.pow(GAMMA_DECIMALS);
    let scaled = scaled.to_u64().unwrap_or(u64::MAX);
    let gamma_text = format!("{}.{:0width$}", scaled / unit, scaled % unit, width = GAMMA_DECIMALS as usize);
    Ok(BoundResult {
        m,
        j,
        count,
        gamma: scaled as f64 / unit as f64,
        gamma_text,
        empty: count == 0,
        certified: threshold.map(|t| (t, certify_bound(count, exponent, t))),
    })
}

/// Builds a graceful `(r + 2km; j)`-permutation by gluing `k` copies of the
/// first `(2m; j, j+m)`-permutation onto the first `(r; j)`-permutation.
pub fn witness(m: usize, j: usize, r: usize, iterations: usize) -> Result<GracefulPermutation> {
    if m == 0 || j >= m || j >= r {
        return Err(Error::InvalidInput(format!("need j < m and j < r (got m={m}, j={j}, r={r})")));
    }
    let p = enumerate(2 * m, Constraint::TwoEndpoints(j, j + m), Some(1))?
        .permutations
        .pop()
        .ok_or_else(|| Error::InvalidInput(format!("no graceful ({};{j},{})-permutation exists", 2 * m, j + m)))?;
    let mut q = enumerate(r, Constraint::OneEndpoint(j), Some(1))?
        .permutations
        .pop()
        .ok_or_else(|| Error::InvalidInput(format!("no graceful ({r};{j})-permutation exists")))?;
    for _ in 0..iterations {
        let len = q.len();
        q = glue(&p, &q, m, j, len)?;
        if !is_graceful(q.as_slice()) || q.first() != j {
            return Err(Error::InvalidInput(format!("glued permutation {q} failed validation")));
        }
    }
    Ok(q)
}
