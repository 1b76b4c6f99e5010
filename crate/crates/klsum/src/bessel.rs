//! Bessel functions in the regimes the toolkit needs: `J` of real order
//! (closed forms at orders ±1/2 and 3/2, power series elsewhere), `J` of
//! purely imaginary order `2ir`, `I_{1/2}`, the even combinations `F`/`G`,
//! and the spectral normalization factor `xi_k(r)`.
//!
//! # Precision strategy
//!
//! The power series
//!
//! ```text
//! J_nu(u) = (u/2)^nu / Gamma(1+nu) * sum_j t_j ,
//! t_0 = 1,  t_{j+1} = -t_j * (u^2/4) / ((j+1)(j+1+nu))
//! ```
//!
//! cancels catastrophically: the largest `|t_j|` is ~`e^u/(pi u)` while the
//! sum is O(1), so `f64` accumulation loses `u/ln 10` digits.  The terms and
//! the accumulator therefore run in double-double ([`crate::dd`]), keeping
//! ~32 digits through the cancellation; only the unamplified prefactor is
//! evaluated in `f64`.  With that, absolute accuracy is ~1e-19 at `u = 30`
//! and ~1e-10 at `u = 50`, which is why the regime guards sit at
//! [`MAX_ARG_REAL`] = 50 (real order) and [`MAX_ARG_IMAG`] = 20 (imaginary
//! order, where the complex prefactor and Gamma add noise).  Beyond the
//! guards the functions return a regime error instead of quietly losing
//! digits; no asymptotic expansions are attempted.
//!
//! Truncation: terms are added until `|t_j| <= 1e-18 * |sum so far|` (hard
//! cap 200 terms); past the peak the terms decay superexponentially, so the
//! dropped tail is below the next term.

use num_complex::Complex64;

use crate::dd::{Cdd, Dd};
use crate::gamma_fn::{complex_gamma, real_gamma};
use crate::{Error, Result};

/// Largest argument accepted by the real-order power series.
pub const MAX_ARG_REAL: f64 = 50.0;
/// Largest argument accepted by the imaginary-order power series.
pub const MAX_ARG_IMAG: f64 = 20.0;
/// Largest spectral parameter |r| accepted for imaginary order 2ir.
pub const MAX_SPECTRAL_R: f64 = 4.0;
/// Largest argument for `I_{1/2}` before `sinh` precision/overflow concerns.
pub const MAX_ARG_I: f64 = 700.0;

const MAX_TERMS: usize = 200;
const TRUNC_REL: f64 = 1e-18;

/// Weight parameter of the integral transforms: `k = 1/2` or `k = 3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformWeight {
    OneHalf,
    ThreeHalves,
}

impl TransformWeight {
    pub fn as_f64(self) -> f64 {
        match self {
            TransformWeight::OneHalf => 0.5,
            TransformWeight::ThreeHalves => 1.5,
        }
    }
}

fn validate_argument(u: f64, max: f64, what: &str) -> Result<()> {
    if !(u > 0.0) {
        return Err(Error::invalid(format!("{what} requires u > 0, got u = {u}")));
    }
    if u > max {
        return Err(Error::regime(format!(
            "{what} argument u = {u} exceeds the trusted series range (0, {max}]"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Real order
// ---------------------------------------------------------------------------

/// `J_nu(u)` by the power series alone (no closed-form dispatch), for
/// `nu >= -1/2` and `0 < u <= `[`MAX_ARG_REAL`].
///
/// Exposed so the closed forms and the series can be compared as two
/// independent routes; [`bessel_j`] is the everyday entry point.
pub fn bessel_j_series(order: f64, u: f64) -> Result<f64> {
    validate_argument(u, MAX_ARG_REAL, "bessel_j_series")?;
    if !order.is_finite() || order < -0.5 {
        return Err(Error::invalid(format!(
            "bessel_j_series requires order >= -1/2, got {order}"
        )));
    }
    let sum = series_sum_real(order, u)?;
    let prefactor = (0.5 * u).powf(order) / real_gamma(order + 1.0);
    Ok(prefactor * sum.to_f64())
}

/// Shared dd accumulation of `sum_j t_j` for real order.
fn series_sum_real(order: f64, u: f64) -> Result<Dd> {
    let q = Dd::from_product(u, u).mul_f64(0.25); // u^2/4, dd-exact
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for j in 1..=MAX_TERMS {
        let jf = j as f64;
        let denom = Dd::from_f64(jf).mul(Dd::from_f64(jf).add(Dd::from_f64(order)));
        term = term.mul(q).div(denom).neg();
        sum = sum.add(term);
        if term.hi.abs() <= TRUNC_REL * sum.hi.abs() {
            return Ok(sum);
        }
    }
    Err(Error::regime(format!(
        "J series did not converge within {MAX_TERMS} terms at order {order}, u = {u}"
    )))
}

/// `J_nu(u)` for real order.
///
/// Closed forms are used at `nu` in `{-1/2, 1/2, 3/2}`:
///
/// ```text
/// J_{ 1/2}(u) = sqrt(2/(pi u)) * sin u
/// J_{-1/2}(u) = sqrt(2/(pi u)) * cos u
/// J_{ 3/2}(u) = sqrt(2/(pi u)) * (sin u / u - cos u)
/// ```
///
/// Negative integer orders reduce through `J_{-n} = (-1)^n J_n`; all other
/// orders `>= -1/2` go through the power series.  Orders below `-1/2` that
/// are neither integers nor `-1/2` are rejected.
///
/// # Errors
///
/// `InvalidInput` for unsupported orders or `u <= 0`; `Regime` for
/// `u > `[`MAX_ARG_REAL`].
pub fn bessel_j(order: f64, u: f64) -> Result<f64> {
    if order == 0.5 {
        validate_argument(u, f64::INFINITY, "bessel_j")?;
        return Ok((2.0 / (std::f64::consts::PI * u)).sqrt() * u.sin());
    }
    if order == -0.5 {
        validate_argument(u, f64::INFINITY, "bessel_j")?;
        return Ok((2.0 / (std::f64::consts::PI * u)).sqrt() * u.cos());
    }
    if order == 1.5 {
        validate_argument(u, f64::INFINITY, "bessel_j")?;
        return Ok((2.0 / (std::f64::consts::PI * u)).sqrt() * (u.sin() / u - u.cos()));
    }
    if order < -0.5 {
        if order.fract() == 0.0 {
            // J_{-n} = (-1)^n J_n exactly.
            let n = -order;
            let sign = if (n as i64) % 2 == 1 { -1.0 } else { 1.0 };
            return Ok(sign * bessel_j(n, u)?);
        }
        return Err(Error::invalid(format!(
            "bessel_j supports order >= -1/2, negative integers, and the \
             closed forms -1/2, 1/2, 3/2; got {order}"
        )));
    }
    bessel_j_series(order, u)
}

/// `I_{1/2}(u) = sqrt(2/(pi u)) * sinh u`.
///
/// Only order 1/2 is implemented (the only `I`-Bessel order the exact
/// formula needs); other orders are rejected.
pub fn bessel_i(order: f64, u: f64) -> Result<f64> {
    if order != 0.5 {
        return Err(Error::invalid(format!(
            "bessel_i supports only order 1/2, got {order}"
        )));
    }
    validate_argument(u, MAX_ARG_I, "bessel_i")?;
    Ok((2.0 / (std::f64::consts::PI * u)).sqrt() * u.sinh())
}

// ---------------------------------------------------------------------------
// Imaginary order
// ---------------------------------------------------------------------------

/// `J_{2ir}(u)` by the power series with complex double-double terms.
///
/// For `r < 0` the value is computed as `conj(J_{2i|r|}(u))`, so the
/// symmetry `conj(J_{2ir}) = J_{-2ir}` holds exactly by construction.
///
/// # Errors
///
/// `Regime` when `|r| > `[`MAX_SPECTRAL_R`] or `u` outside
/// `(0, `[`MAX_ARG_IMAG`]`]`.
pub fn bessel_j_imag_order(r: f64, u: f64) -> Result<Complex64> {
    validate_argument(u, MAX_ARG_IMAG, "bessel_j_imag_order")?;
    if !r.is_finite() || r.abs() > MAX_SPECTRAL_R {
        return Err(Error::regime(format!(
            "bessel_j_imag_order requires |r| <= {MAX_SPECTRAL_R}, got r = {r}"
        )));
    }
    if r < 0.0 {
        return Ok(bessel_j_imag_order(-r, u)?.conj());
    }
    let two_r = 2.0 * r;

    // sum_j t_j with t_{j+1} = -t_j (u^2/4) / ((j+1)(j+1+2ir))
    let q = Dd::from_product(u, u).mul_f64(0.25);
    let mut term = Cdd::ONE;
    let mut sum = Cdd::ONE;
    let mut converged = false;
    for j in 1..=MAX_TERMS {
        let jf = j as f64;
        let denom = Cdd::new(Dd::from_product(jf, jf), Dd::from_product(jf, two_r));
        term = term.scale(q).div(denom);
        term = Cdd::new(term.re.neg(), term.im.neg());
        sum = sum.add(term);
        if term.mag_estimate() <= TRUNC_REL * sum.mag_estimate() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::regime(format!(
            "imaginary-order J series did not converge within {MAX_TERMS} terms at r = {r}, u = {u}"
        )));
    }

    // prefactor (u/2)^{2ir} / Gamma(1 + 2ir) = cis(2r ln(u/2)) / Gamma(1+2ir)
    let angle = two_r * (0.5 * u).ln();
    let pref = Complex64::new(angle.cos(), angle.sin())
        / complex_gamma(Complex64::new(1.0, two_r));
    let s = Complex64::new(sum.re.to_f64(), sum.im.to_f64());
    Ok(pref * s)
}

/// The real even combinations
/// `F_{2ir}(u) = Re J_{2ir}(u) / cosh(pi r)` and
/// `G_{2ir}(u) = Im J_{2ir}(u) / sinh(pi r)`
/// (equivalently `(J_mu ± J_{-mu})` over `2cos(mu pi/2)` resp.
/// `2sin(mu pi/2)` at `mu = 2ir`).  Both are real and even in `r`.
///
/// # Errors
///
/// Propagates the series guards; additionally `InvalidInput` for
/// `|r| < 1e-8`, where `G`'s `0/0` limit would need its own expansion.
pub fn f_g(r: f64, u: f64) -> Result<(f64, f64)> {
    if r.abs() < 1e-8 {
        return Err(Error::invalid(
            "F/G combination needs |r| >= 1e-8 (G is a 0/0 limit at r = 0)".to_string(),
        ));
    }
    let j = bessel_j_imag_order(r, u)?;
    let pr = std::f64::consts::PI * r;
    Ok((j.re / pr.cosh(), j.im / pr.sinh()))
}

// ---------------------------------------------------------------------------
// Spectral factor
// ---------------------------------------------------------------------------

/// `xi_k(r) = 2 i pi^2 e^{(1+k) pi i / 2} / (Gamma(1/2 - k/2 + ir) Gamma(1/2 - k/2 - ir))`.
///
/// Even in `r`; the Gamma pair is `|Gamma(1/2 - k/2 + ir)|^2` for real `r`,
/// so the denominator is real and positive.
pub fn xi_k(k: TransformWeight, r: f64) -> Complex64 {
    let kf = k.as_f64();
    let a = 0.5 - 0.5 * kf;
    let g = complex_gamma(Complex64::new(a, r)) * complex_gamma(Complex64::new(a, -r));
    let phase = (1.0 + kf) * std::f64::consts::FRAC_PI_2;
    let num = Complex64::new(0.0, 2.0 * std::f64::consts::PI * std::f64::consts::PI)
        * Complex64::new(phase.cos(), phase.sin());
    num / g
}
