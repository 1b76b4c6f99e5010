//! Exact integer and rational arithmetic underlying the multiplier systems:
//! Kronecker symbols, the quartic root-of-unity `epsilon_d`, Dedekind sums,
//! modular inverses, and exact rational phases (elements of R/Z).
//!
//! Everything here is exact.  Phases are reduced rationals in `[0, 1)` and
//! are only rounded at the very last step, when a phase is converted to a
//! point on the unit circle by [`Phase::to_complex`].
//!
//! Two implementations are provided for the Kronecker symbol (machine-word
//! and big-integer) and for Dedekind sums (O(log c) reciprocity descent and
//! O(c) definition-chasing).  The pairs are checked against each other in
//! the test suite; the fast versions are the ones used by the multiplier
//! evaluators.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Unit circle
// ---------------------------------------------------------------------------

/// `e(x) = exp(2 pi i x)`.
#[inline]
pub fn e2pi(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

// ---------------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------------

/// Kronecker symbol `(a | n)` for machine-word arguments.
///
/// Full extension of the Jacobi symbol: `n` may be zero, negative, or even.
/// Conventions: `(a | 0) = 1` iff `a = ±1`, `(a | -1) = -1` iff `a < 0`,
/// `(a | 2) = 0` for even `a` and `±1` by `a mod 8` otherwise.
///
/// # Examples
///
/// ```
/// use klsum::arith::kronecker_i64;
/// assert_eq!(kronecker_i64(-1, 3), -1);
/// assert_eq!(kronecker_i64(2, 7), 1);
/// assert_eq!(kronecker_i64(3, 34), 1);
/// assert_eq!(kronecker_i64(6, 15), 0);
/// ```
pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a & 1 == 0 && n & 1 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Strip factors of two from the bottom: each contributes (a | 2).
    let tz = n.trailing_zeros();
    if tz > 0 {
        n >>= tz;
        if tz & 1 == 1 {
            let am8 = a.rem_euclid(8);
            if am8 == 3 || am8 == 5 {
                result = -result;
            }
        }
    }
    // Now n is odd and positive; the Jacobi symbol is periodic mod n.
    a = a.rem_euclid(n);
    while a != 0 {
        let tz = a.trailing_zeros();
        if tz > 0 {
            a >>= tz;
            if tz & 1 == 1 {
                let nm8 = n & 7;
                if nm8 == 3 || nm8 == 5 {
                    result = -result;
                }
            }
        }
        // Quadratic reciprocity for odd positive a, n.
        if a & 3 == 3 && n & 3 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(a | n)` for big-integer arguments.
///
/// Mirrors [`kronecker_i64`]; the two agree on the shared domain (tested).
pub fn kronecker_big(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let tz = n.trailing_zeros().expect("n != 0 here");
    if tz > 0 {
        n >>= tz;
        if tz & 1 == 1 {
            let am8 = a.mod_floor(&BigInt::from(8)).to_i64().unwrap();
            if am8 == 3 || am8 == 5 {
                result = -result;
            }
        }
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let tz = a.trailing_zeros().expect("a != 0 here");
        if tz > 0 {
            a >>= tz;
            if tz & 1 == 1 {
                let nm8 = (&n % 8u32).to_i64().unwrap();
                if nm8 == 3 || nm8 == 5 {
                    result = -result;
                }
            }
        }
        let a3 = (&a % 4u32).to_i64().unwrap();
        let n3 = (&n % 4u32).to_i64().unwrap();
        if a3 == 3 && n3 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// epsilon_d
// ---------------------------------------------------------------------------

/// The quartic root of unity `epsilon_d` for odd `d`:
/// `epsilon_d = 1` if `d = 1 (mod 4)` and `epsilon_d = i` if `d = 3 (mod 4)`,
/// returned as an exact [`Phase`] (`0` resp. `1/4`).
///
/// # Errors
///
/// `InvalidInput` if `d` is even.
pub fn epsilon_phase(d: &BigInt) -> Result<Phase> {
    if d.is_even() {
        return Err(Error::invalid(format!("epsilon_d requires odd d, got {d}")));
    }
    let r = d.mod_floor(&BigInt::from(4)).to_i64().unwrap();
    if r == 1 {
        Phase::from_ratio(0, 1)
    } else {
        Phase::from_ratio(1, 4)
    }
}

// ---------------------------------------------------------------------------
// Modular inverse
// ---------------------------------------------------------------------------

/// Inverse of `a` modulo `m` (`m >= 1`), in `[0, m)`, or `None` when
/// `gcd(a, m) != 1`.  For `m = 1` every residue is invertible with inverse 0.
pub fn mod_inverse_i64(a: i64, m: i64) -> Option<i64> {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return Some(0);
    }
    // Iterative extended Euclid tracking only the coefficient of a.
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        None
    } else {
        Some(t0.rem_euclid(m))
    }
}

/// Big-integer modular inverse; same contract as [`mod_inverse_i64`].
pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    assert!(m.is_positive(), "modulus must be positive");
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Dedekind sums
// ---------------------------------------------------------------------------

fn dedekind_preconditions(d: &BigInt, c: &BigInt) -> Result<()> {
    if !c.is_positive() {
        return Err(Error::invalid(format!("Dedekind sum requires c > 0, got c = {c}")));
    }
    if !d.gcd(c).is_one() {
        return Err(Error::invalid(format!(
            "Dedekind sum requires gcd(d, c) = 1, got d = {d}, c = {c}"
        )));
    }
    Ok(())
}

/// Classical Dedekind sum `s(d, c) = sum_{r=1}^{c-1} ((r/c)) ((dr/c))`
/// where `((x))` is the sawtooth `x - floor(x) - 1/2` for non-integral `x`
/// and `0` otherwise, computed exactly in O(log c) by reciprocity descent:
///
/// ```text
/// s(d, c) = -1/4 + (d^2 + c^2 + 1) / (12 d c) - s(c mod d, d)
/// ```
///
/// together with periodicity `s(d + c, c) = s(d, c)`.  Requires `c > 0` and
/// `gcd(d, c) = 1`; `d` may be any integer (reduced mod `c` first, so
/// antisymmetry `s(-d, c) = -s(d, c)` comes out of the reduction).
///
/// # Examples
///
/// ```
/// use num_bigint::BigInt;
/// use num_rational::BigRational;
/// use klsum::arith::dedekind_sum;
/// let s = dedekind_sum(&BigInt::from(1), &BigInt::from(3)).unwrap();
/// assert_eq!(s, BigRational::new(BigInt::from(1), BigInt::from(18)));
/// ```
pub fn dedekind_sum(d: &BigInt, c: &BigInt) -> Result<BigRational> {
    dedekind_preconditions(d, c)?;
    let mut d = d.mod_floor(c);
    let mut c = c.clone();
    let mut acc = BigRational::zero();
    let mut sign = 1i32;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    while !d.is_zero() {
        // s(d, c) = (d^2 + c^2 + 1)/(12 d c) - 1/4 - s(c mod d, d)
        let num = &d * &d + &c * &c + BigInt::one();
        let den = BigInt::from(12) * &d * &c;
        let step = BigRational::new(num, den) - &quarter;
        if sign == 1 {
            acc += step;
        } else {
            acc -= step;
        }
        sign = -sign;
        let r = c.mod_floor(&d);
        c = std::mem::replace(&mut d, r);
    }
    Ok(acc)
}

/// Classical Dedekind sum by the O(c) definition, as the exact rational
/// `sum_r (2r - c)(2 rho_r - c) / (4 c^2)` with `rho_r = d r mod c`.
///
/// Reference implementation for testing [`dedekind_sum`]; same contract.
pub fn dedekind_sum_direct(d: &BigInt, c: &BigInt) -> Result<BigRational> {
    dedekind_preconditions(d, c)?;
    // gcd(d, c) = 1 means d r is never divisible by c for 0 < r < c, so the
    // sawtooth never hits an integer point and the closed numerator is exact.
    let mut num = BigInt::zero();
    let mut r = BigInt::one();
    while &r < c {
        let rho = (d * &r).mod_floor(c);
        num += (&r * 2 - c) * (rho * 2 - c);
        r += 1;
    }
    Ok(BigRational::new(num, c * c * 4))
}

/// The alternate sum `sum_{r=1}^{c-1} (r/c) (dr/c - floor(dr/c) - 1)`,
/// which differs from the classical [`dedekind_sum`] by exactly
/// `-(c - 1)/4`:
///
/// ```text
/// dedekind_sum_displayed(d, c) = dedekind_sum(d, c) - (c - 1)/4 .
/// ```
///
/// Kept as an independent O(c) evaluation (not via the offset) so the
/// offset identity can be verified rather than assumed.  Only the classical
/// sum reproduces the eta multiplier; see `multiplier::eval_eta_rademacher`.
pub fn dedekind_sum_displayed(d: &BigInt, c: &BigInt) -> Result<BigRational> {
    dedekind_preconditions(d, c)?;
    // sum r (rho - c) / c^2 exactly.
    let mut num = BigInt::zero();
    let mut r = BigInt::one();
    while &r < c {
        let rho = (d * &r).mod_floor(c);
        num += &r * (rho - c);
        r += 1;
    }
    Ok(BigRational::new(num, c * c))
}

// ---------------------------------------------------------------------------
// Phase: exact element of R/Z
// ---------------------------------------------------------------------------

/// An exact phase: a reduced rational representative in `[0, 1)` of an
/// element of R/Z.  `Phase(p)` stands for the unit complex number
/// `e(p) = exp(2 pi i p)`.
///
/// Multiplier evaluation composes phases exactly (addition mod 1); only
/// [`Phase::to_complex`] rounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phase(BigRational);

impl Phase {
    /// The zero phase (the complex number 1).
    pub fn zero() -> Phase {
        Phase(BigRational::zero())
    }

    /// Reduce an arbitrary rational into `[0, 1)`.
    pub fn new(r: BigRational) -> Phase {
        let f = r.floor();
        Phase(r - f)
    }

    /// Phase `num/den` reduced mod 1.
    ///
    /// # Errors
    ///
    /// `InvalidInput` when `den = 0`.
    pub fn from_ratio(num: i64, den: i64) -> Result<Phase> {
        if den == 0 {
            return Err(Error::invalid("phase denominator must be nonzero"));
        }
        Ok(Phase::new(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// The representative in `[0, 1)`.
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Add two phases (mod 1).
    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(&self.0 + &other.0)
    }

    /// Negate (mod 1): the phase of the complex conjugate.
    pub fn neg(&self) -> Phase {
        Phase::new(-&self.0)
    }

    /// Subtract (mod 1).
    pub fn sub(&self, other: &Phase) -> Phase {
        Phase::new(&self.0 - &other.0)
    }

    /// Multiply by an integer (mod 1).
    pub fn mul_int(&self, k: &BigInt) -> Phase {
        Phase::new(&self.0 * BigRational::from(k.clone()))
    }

    /// Round to `f64` in `[0, 1)`.
    pub fn as_f64(&self) -> f64 {
        self.0.to_f64().expect("phase representative is finite")
    }

    /// The unit complex number `e(p)`.
    pub fn to_complex(&self) -> Complex64 {
        e2pi(self.as_f64())
    }
}

/// Euler's totient `phi(n)` by trial-division factorization.
///
/// # Examples
///
/// `phi(1) = 1`, `phi(12) = 4`, `phi(97) = 96`.
///
/// # Edge cases
///
/// `phi(0)` is defined here as 0 (no units modulo 0).
pub fn euler_totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut remaining = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= remaining {
        if remaining % p == 0 {
            while remaining % p == 0 {
                remaining /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if remaining > 1 {
        result -= result / remaining;
    }
    result
}
