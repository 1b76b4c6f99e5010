//! Generalized Kloosterman sums with half-integral-weight multiplier systems.
//!
//! This crate computes sums of the shape
//!
//! ```text
//!               ___
//!               \        _                 /  m~ a + n~ d  \
//! S(m,n,c,nu) = /        nu(gamma) * exp( 2 pi i --------- )
//!               ---                        \       c       /
//!          0 <= d < c
//!        gcd(d, c) = 1
//! ```
//!
//! where `gamma = (a, b; c, d)` is any lift to the modular group with
//! `a = d^{-1} mod c`, `nu` is a weight-`k` multiplier system (eta, theta,
//! or trivial, optionally twisted by a real character and/or conjugated),
//! and `m~ = m - alpha_nu`, `n~ = n - alpha_nu` are shifted by the cusp
//! parameter of `nu`.  Around that core it provides:
//!
//! * exact arithmetic for the multiplier phases ([`arith`], [`multiplier`]):
//!   Kronecker symbols, Dedekind sums in O(log c), and rational phases that
//!   are never rounded until the final complex exponential;
//! * compensated partial-sum sweeps over the modulus `c` with an on-disk
//!   resume cache ([`kloosterman`], [`cache`]);
//! * Bessel functions of real and purely imaginary order by double-double
//!   power series with closed forms at half-integral order ([`bessel`]);
//! * compactly supported test functions and their Bessel integral
//!   transforms by adaptive Gauss-Kronrod quadrature ([`testfn`], [`quad`]);
//! * an exact-formula evaluator for the coefficients of a weight-1/2 mock
//!   theta function, with an independent integer q-series oracle
//!   ([`exact`]);
//! * a self-contained verification suite ([`verify`]).
//!
//! # Example
//!
//! ```
//! use klsum::multiplier::MultiplierSpec;
//! use klsum::kloosterman::{kloosterman_sum, KloostermanQuery};
//!
//! // S(0, 1, 12, nu) for the conjugate eta multiplier twisted by the
//! // quadratic character mod 3, on Gamma_0(3).
//! let nu = MultiplierSpec::eta(3).unwrap().twisted(3).unwrap().conjugated();
//! let q = KloostermanQuery { m: 0, n: 1, c: 12, nu };
//! let s = kloosterman_sum(&q).unwrap();
//! assert_eq!(s.term_count, 4); // phi(12) = 4 admissible residues
//! ```

pub mod arith;
pub mod bessel;
pub mod cache;
pub mod dd;
pub mod exact;
pub mod gamma_fn;
pub mod kloosterman;
pub mod multiplier;
pub mod quad;
pub mod testfn;
pub mod verify;

/// Crate-wide error type.
///
/// The three non-IO variants correspond to the three failure classes the
/// command-line harness distinguishes by exit code: invalid input (2),
/// numeric-regime violations (3), and cache corruption (4).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on arguments was violated (bad parameter ranges,
    /// non-coprime residues, wrong level, malformed specification...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request is outside the regime in which the numerical method is
    /// trusted (series argument too large, order out of range, quadrature
    /// failed to reach tolerance...).  Results are never silently degraded.
    #[error("numeric regime exceeded: {0}")]
    Regime(String),

    /// A persistent cache file failed validation.  `line` is 1-based.
    #[error("cache corruption in {path} at line {line}: {detail}")]
    CacheCorrupt {
        path: String,
        line: usize,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Helper for formatted invalid-input errors.
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Helper for formatted regime errors.
    pub(crate) fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }
}
