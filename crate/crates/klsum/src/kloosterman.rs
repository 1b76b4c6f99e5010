//! Exact evaluation of the generalized sums
//!
//! ```text
//!              ___
//!              \
//! S(m,n,c,nu) =  )   conj(nu(gamma)) e( (m~ a + n~ d) / c ),
//!              /___
//!            d in [0,c)
//!           gcd(d,c) = 1
//! ```
//!
//! with `a = d^{-1} mod c` in `[0, c)`, `b = (ad-1)/c`,
//! `gamma = (a, b; c, d)`, and the shifted indices `m~ = m - alpha`,
//! `n~ = n - alpha` for the multiplier's cusp parameter `alpha`.
//!
//! Every term's phase is assembled as an exact rational mod 1; floating
//! point enters only in the final `cos`/`sin` per term, and terms are
//! combined with compensated (Neumaier) summation.  Two independent
//! routes are kept side by side and cross-tested:
//!
//! * [`kloosterman_sum`] — the production route: for the supported
//!   multiplier families every term phase is an integer numerator over
//!   the common denominator `48c` (eta phases have denominator dividing
//!   `24`, theta phases `8`, twists `2`, and the exponential part
//!   `24c`), so the inner loop runs entirely in machine integers.
//! * [`kloosterman_sum_generic`] — the straight-from-the-definition
//!   route through [`crate::multiplier::eval`] and arbitrary-precision
//!   rationals.
//!
//! Sweeps over the modulus ([`partial_sums`]) parallelize per modulus but
//! always reduce serially in ascending order, so parallel and serial runs
//! are bit-identical; evaluated sums can be persisted in a
//! [`ResultCache`].  Memory stays O(1) per sum — inverses come from the
//! extended Euclidean algorithm, never from precomputed tables.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{e2pi, kronecker_i64, mod_inverse_i64, Phase};
use crate::bessel::{bessel_i, bessel_j, TransformWeight};
use crate::cache::{CachedSum, ResultCache};
use crate::multiplier::{alpha, eval, GammaElement, MultiplierBase, MultiplierSpec, MultiplierValue};
use crate::{Error, Result};

/// Largest supported modulus: keeps every intermediate of the integer
/// phase arithmetic comfortably inside `u64`/`i128`.
pub const MAX_MODULUS: u64 = 1_000_000_000_000_000;

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

/// Neumaier-compensated running sum of `f64` values.
///
/// Deterministic for a fixed addition order; used for every multi-term
/// accumulation in the crate so that serial and parallel sweeps agree
/// bitwise (the reduction order is fixed even when term values are
/// produced concurrently).
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> NeumaierSum {
        NeumaierSum::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Component-wise Neumaier accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexAccumulator {
    pub fn new() -> ComplexAccumulator {
        ComplexAccumulator::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

// ---------------------------------------------------------------------------
// Queries and values
// ---------------------------------------------------------------------------

/// One sum to evaluate: indices `m, n`, multiplier, and modulus `c`
/// (which the multiplier's level must divide).
#[derive(Debug, Clone)]
pub struct KloostermanQuery {
    pub m: i64,
    pub n: i64,
    pub nu: MultiplierSpec,
    pub c: u64,
}

/// An evaluated sum.
#[derive(Debug, Clone, PartialEq)]
pub struct KloostermanValue {
    /// The complex value (compensated sum of unit terms).
    pub value: Complex64,
    /// Number of summed terms: coprime residues `d` minus skipped
    /// zero-character terms.  The triangle inequality
    /// `|value| <= term_count` always holds.
    pub term_count: u64,
    /// Terms whose twist character evaluated to zero (skipped, never
    /// summed).  Zero for every multiplier whose twist modulus divides
    /// the level.
    pub skipped: u64,
    /// Largest reduced denominator among the term phases — a diagnostic
    /// for root-of-unity structure.  Zero when the value was loaded from
    /// a cache (not persisted).
    pub max_phase_den: BigUint,
}

fn validate_query(q: &KloostermanQuery) -> Result<()> {
    if q.c == 0 {
        return Err(Error::invalid("modulus c must be >= 1"));
    }
    if q.c > MAX_MODULUS {
        return Err(Error::regime(format!(
            "modulus {} exceeds the supported maximum {MAX_MODULUS}",
            q.c
        )));
    }
    if q.c % q.nu.level() != 0 {
        return Err(Error::invalid(format!(
            "level {} does not divide modulus {}",
            q.nu.level(),
            q.c
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fast integer-phase route
// ---------------------------------------------------------------------------

/// `24 alpha` for the supported multiplier families (alpha has
/// denominator dividing 24: 0, 23/24, or 1/24).
fn alpha24(nu: &MultiplierSpec) -> i64 {
    match (nu.base(), nu.is_conjugated()) {
        (MultiplierBase::Eta, false) => 23,
        (MultiplierBase::Eta, true) => 1,
        _ => 0,
    }
}

/// Evaluate one sum through the integer-phase fast route.
///
/// All phases are exact integer numerators over `48c`; see the module
/// docs for the denominator bookkeeping.  The result is identical (as an
/// exact phase multiset) to [`kloosterman_sum_generic`], which is the
/// cross-test.
///
/// # Examples
///
/// `S(1,1,1)` with the trivial multiplier is the single term `e(0) = 1`.
///
/// # Edge cases
///
/// `c = 1` has the single residue `d = 0` with `a = 0`, `b = -1`.
pub fn kloosterman_sum(q: &KloostermanQuery) -> Result<KloostermanValue> {
    validate_query(q)?;
    let c = q.c;
    let den48 = 48u64 * c; // c <= MAX_MODULUS keeps 70c < u64::MAX
    let den48_i = den48 as i128;
    let a24 = alpha24(&q.nu);
    // Exponential part: (m~ a + n~ d)/c = (2(24m - a24) a + 2(24n - a24) d)/48c.
    let em = (2 * (24 * q.m as i128 - a24 as i128)).rem_euclid(den48_i) as u64;
    let en = (2 * (24 * q.n as i128 - a24 as i128)).rem_euclid(den48_i) as u64;
    let conj_sign: i128 = if q.nu.is_conjugated() { -1 } else { 1 };
    let twist = q.nu.twist().map(|t| t as i64);
    let c24 = c % 24;
    let c2m1_24 = (c24 * c24 + 23) % 24; // (c^2 - 1) mod 24
    let c_odd = c % 2 == 1;
    let theta_base = q.nu.base() == MultiplierBase::Theta;
    let eta_base = q.nu.base() == MultiplierBase::Eta;
    debug_assert!(!theta_base || c % 4 == 0, "theta level forces 4 | c");

    let mut acc = ComplexAccumulator::new();
    let mut term_count = 0u64;
    let mut skipped = 0u64;
    let mut max_den = 1u64;

    for d in 0..c {
        if d.gcd(&c) != 1 {
            continue;
        }
        // Twist character chi(d) in {0, ±1} -> phase numerator over 48c.
        let chi_num: u64 = match twist {
            None => 0,
            Some(t) => match kronecker_i64(d as i64, t) {
                0 => {
                    skipped += 1;
                    continue;
                }
                -1 => 24 * c,
                _ => 0,
            },
        };

        let a = mod_inverse_i64(d as i64, c as i64).expect("gcd(d, c) = 1") as u64;

        // Base multiplier phase numerator over 48c.
        let base_num: u64 = if eta_base {
            let b = ((a as i128) * (d as i128) - 1).div_euclid(c as i128);
            let kr = if c_odd {
                kronecker_i64(d as i64, c as i64)
            } else {
                kronecker_i64(c as i64, d as i64)
            };
            debug_assert!(kr != 0);
            let sign_num: u64 = if kr == -1 { 24 * c } else { 0 };
            // E mod 24 with everything reduced first.
            let a24m = (a % 24) as i64;
            let d24 = (d % 24) as i64;
            let b24 = b.rem_euclid(24) as i64;
            let e_raw: i64 = if c_odd {
                (a24m + d24) * c24 as i64 - b24 * d24 * c2m1_24 as i64 - 3 * c24 as i64
            } else {
                (a24m + d24) * c24 as i64 - b24 * d24 * c2m1_24 as i64 + 3 * d24
                    - 3
                    - 3 * c24 as i64 * d24
            };
            let e24 = e_raw.rem_euclid(24) as u64;
            (sign_num + e24 * 2 * c) % den48
        } else if theta_base {
            let kr = kronecker_i64(c as i64, d as i64);
            debug_assert!(kr != 0);
            let sign_num: u64 = if kr == -1 { 24 * c } else { 0 };
            // epsilon_d^{-1}: phase 0 for d = 1 mod 4, 3/4 for d = 3 mod 4.
            let eps_num: u64 = if d % 4 == 3 { 36 * c } else { 0 };
            (sign_num + eps_num) % den48
        } else {
            0
        };

        // term phase = -conj_sign (chi + base) + exponential part, over 48c.
        let e_num = ((em as u128 * a as u128 + en as u128 * d as u128) % den48 as u128) as i128;
        let term_num =
            (e_num - conj_sign * (chi_num as i128 + base_num as i128)).rem_euclid(den48_i) as u64;

        let den = den48 / term_num.gcd(&den48);
        if den > max_den {
            max_den = den;
        }
        acc.add(e2pi(term_num as f64 / den48 as f64));
        term_count += 1;
    }

    Ok(KloostermanValue {
        value: acc.value(),
        term_count,
        skipped,
        max_phase_den: BigUint::from(max_den),
    })
}

// ---------------------------------------------------------------------------
// Generic exact-rational route
// ---------------------------------------------------------------------------

/// Evaluate one sum straight from the definition: build each
/// `gamma = (a, b; c, d)`, evaluate the multiplier through
/// [`crate::multiplier::eval`], and compose exact rational phases.
///
/// Slower by orders of magnitude; kept as the independent reference that
/// the fast route is tested against.
pub fn kloosterman_sum_generic(q: &KloostermanQuery) -> Result<KloostermanValue> {
    validate_query(q)?;
    let c_big = num_bigint::BigInt::from(q.c);
    let data = alpha(&q.nu);
    let m_tilde = data.tilde(q.m);
    let n_tilde = data.tilde(q.n);

    let mut acc = ComplexAccumulator::new();
    let mut term_count = 0u64;
    let mut skipped = 0u64;
    let mut max_den = BigUint::zero();

    for d in 0..q.c {
        if d.gcd(&q.c) != 1 {
            continue;
        }
        let d_big = num_bigint::BigInt::from(d);
        let a_big = crate::arith::mod_inverse_big(&d_big, &c_big).expect("gcd(d, c) = 1");
        let b_big = (&a_big * &d_big - num_bigint::BigInt::from(1)) / &c_big;
        let gamma = GammaElement::new(a_big.clone(), b_big, c_big.clone(), d_big.clone())?;
        let nu_phase = match eval(&q.nu, &gamma)? {
            MultiplierValue::Zero => {
                skipped += 1;
                continue;
            }
            MultiplierValue::Unit(p) => p,
        };
        let exp_part = Phase::new(
            (&m_tilde * num_rational::BigRational::from(a_big)
                + &n_tilde * num_rational::BigRational::from(d_big))
                / num_rational::BigRational::from(c_big.clone()),
        );
        let term = exp_part.sub(&nu_phase);
        let den = term
            .as_rational()
            .denom()
            .to_biguint()
            .expect("reduced denominators are positive");
        if den > max_den {
            max_den = den;
        }
        acc.add(term.to_complex());
        term_count += 1;
    }
    if max_den.is_zero() {
        max_den = BigUint::from(1u32);
    }

    Ok(KloostermanValue {
        value: acc.value(),
        term_count,
        skipped,
        max_phase_den: max_den,
    })
}

/// Brute-force classical Kloosterman sum `S(m, n, c)`: two nested loops
/// over all pairs `(a, d)` with `ad = 1 mod c`, no modular inverses.
/// Test oracle for the trivial-multiplier reduction; O(c^2).
pub fn classical_kloosterman_brute(m: i64, n: i64, c: u64) -> Complex64 {
    let mut acc = ComplexAccumulator::new();
    let c_i = c as i128;
    for d in 0..c_i {
        for a in 0..c_i {
            if (a * d).rem_euclid(c_i) == 1i128.rem_euclid(c_i) {
                let num = (m as i128 * a + n as i128 * d).rem_euclid(c_i);
                acc.add(e2pi(num as f64 / c as f64));
            }
        }
    }
    acc.value()
}

// ---------------------------------------------------------------------------
// Partial sums over the modulus
// ---------------------------------------------------------------------------

/// Which moduli get an output row (evaluation always covers every
/// admissible modulus; sampling only thins the rows).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplePlan {
    /// A row for every admissible modulus.
    All,
    /// Rows at the last admissible modulus `<= level * 2^j` for each `j`.
    Dyadic,
    /// Rows at the last admissible modulus `<= j * step` for each `j >= 1`.
    Grid(u64),
}

/// One row of a partial-sum series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub c: u64,
    /// `S(m, n, c, nu)`.
    pub s_value: Complex64,
    pub term_count: u64,
    pub skipped: u64,
    /// `sum_{c' <= c admissible} S(m,n,c',nu) / c'` — compensated, fixed
    /// ascending order.
    pub running_sum: Complex64,
}

/// A sweep of sums over all admissible moduli `c <= x_max`.
#[derive(Debug, Clone)]
pub struct PartialSumSeries {
    pub nu: MultiplierSpec,
    pub m: i64,
    pub n: i64,
    pub x_max: u64,
    pub rows: Vec<SeriesRow>,
}

fn admissible_moduli(level: u64, x_max: u64) -> impl Iterator<Item = u64> {
    (1..=x_max / level).map(move |t| t * level)
}

fn row_moduli(level: u64, x_max: u64, plan: SamplePlan) -> Result<Vec<u64>> {
    let last = |bound: u64| -> Option<u64> {
        let t = bound / level;
        (t >= 1).then_some(t * level)
    };
    let mut out = Vec::new();
    match plan {
        SamplePlan::All => out.extend(admissible_moduli(level, x_max)),
        SamplePlan::Dyadic => {
            let mut target = level;
            loop {
                if let Some(c) = last(target.min(x_max)) {
                    if out.last() != Some(&c) {
                        out.push(c);
                    }
                }
                if target >= x_max {
                    break;
                }
                target = target.saturating_mul(2);
            }
        }
        SamplePlan::Grid(step) => {
            if step == 0 {
                return Err(Error::invalid("grid step must be >= 1"));
            }
            let mut target = step;
            while target <= x_max {
                if let Some(c) = last(target) {
                    if out.last() != Some(&c) {
                        out.push(c);
                    }
                }
                match target.checked_add(step) {
                    Some(t) => target = t,
                    None => break,
                }
            }
            // Always record the endpoint row.
            if let Some(c) = last(x_max) {
                if out.last() != Some(&c) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// Evaluate the given queries, possibly in parallel.  Results come back
/// in input order; any error aborts.
fn evaluate_batch(queries: &[KloostermanQuery], allow_parallel: bool) -> Result<Vec<KloostermanValue>> {
    #[cfg(feature = "parallel")]
    {
        if allow_parallel && queries.len() > 1 {
            use rayon::prelude::*;
            return queries.par_iter().map(kloosterman_sum).collect();
        }
    }
    let _ = allow_parallel;
    queries.iter().map(kloosterman_sum).collect()
}

fn partial_sums_impl(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    x_max: u64,
    plan: SamplePlan,
    mut cache: Option<&mut ResultCache>,
    allow_parallel: bool,
) -> Result<PartialSumSeries> {
    let level = nu.level();
    let fingerprint = nu.fingerprint();
    let cs: Vec<u64> = admissible_moduli(level, x_max).collect();
    let rows_at: Vec<u64> = row_moduli(level, x_max, plan)?;

    // Resolve each modulus: cache hit or pending computation.
    let mut values: Vec<Option<KloostermanValue>> = Vec::with_capacity(cs.len());
    let mut pending: Vec<(usize, KloostermanQuery)> = Vec::new();
    for (i, &c) in cs.iter().enumerate() {
        let hit = cache
            .as_deref()
            .and_then(|k| k.get(&fingerprint, m, n, c))
            .copied();
        match hit {
            Some(CachedSum { value, term_count }) => values.push(Some(KloostermanValue {
                value,
                term_count,
                skipped: 0,
                max_phase_den: BigUint::zero(),
            })),
            None => {
                values.push(None);
                pending.push((
                    i,
                    KloostermanQuery {
                        m,
                        n,
                        nu: nu.clone(),
                        c,
                    },
                ));
            }
        }
    }
    let queries: Vec<KloostermanQuery> = pending.iter().map(|(_, q)| q.clone()).collect();
    let computed = evaluate_batch(&queries, allow_parallel)?;
    for ((i, _), value) in pending.into_iter().zip(computed) {
        if let Some(k) = cache.as_deref_mut() {
            k.insert(
                &fingerprint,
                m,
                n,
                cs[i],
                CachedSum {
                    value: value.value,
                    term_count: value.term_count,
                },
            )?;
        }
        values[i] = Some(value);
    }
    if let Some(k) = cache.as_deref_mut() {
        k.flush()?;
    }

    // Serial ascending reduction — the deterministic part.
    let mut acc = ComplexAccumulator::new();
    let mut rows = Vec::with_capacity(rows_at.len());
    let mut next_row = rows_at.iter().peekable();
    for (i, &c) in cs.iter().enumerate() {
        let v = values[i].as_ref().expect("every modulus resolved");
        acc.add(v.value / c as f64);
        if next_row.peek() == Some(&&c) {
            next_row.next();
            rows.push(SeriesRow {
                c,
                s_value: v.value,
                term_count: v.term_count,
                skipped: v.skipped,
                running_sum: acc.value(),
            });
        }
    }

    Ok(PartialSumSeries {
        nu: nu.clone(),
        m,
        n,
        x_max,
        rows,
    })
}

/// Sweep `S(m,n,c,nu)/c` over all admissible `c <= x_max`.
///
/// Evaluation of distinct moduli may run concurrently (with the
/// `parallel` feature), but the running sums are reduced by a single
/// consumer in ascending `c`, so the output is bit-identical to
/// [`partial_sums_serial`].
///
/// # Edge cases
///
/// `x_max < level` yields an empty series (no admissible moduli).
pub fn partial_sums(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    x_max: u64,
    plan: SamplePlan,
) -> Result<PartialSumSeries> {
    partial_sums_impl(nu, m, n, x_max, plan, None, true)
}

/// [`partial_sums`] with a persistent result cache: hits skip
/// evaluation, misses are evaluated and appended.  Warm reruns are
/// bit-identical to cold ones (the cache text format round-trips `f64`
/// exactly).
pub fn partial_sums_with_cache(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    x_max: u64,
    plan: SamplePlan,
    cache: &mut ResultCache,
) -> Result<PartialSumSeries> {
    partial_sums_impl(nu, m, n, x_max, plan, Some(cache), true)
}

/// Single-threaded reference sweep (never uses the thread pool), for
/// determinism comparisons.
pub fn partial_sums_serial(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    x_max: u64,
    plan: SamplePlan,
) -> Result<PartialSumSeries> {
    partial_sums_impl(nu, m, n, x_max, plan, None, false)
}

// ---------------------------------------------------------------------------
// Windowed averages
// ---------------------------------------------------------------------------

/// `sum |S(m,n,c,nu)|/c` over a window of moduli, with its normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedAverage {
    /// `sum_{c in [y, x] admissible} |S(m,n,c,nu)| / c`.
    pub total: f64,
    /// `total / (sqrt(x) - sqrt(y))` — the scale the window bound is
    /// measured against.
    pub ratio: f64,
    /// Number of admissible moduli in the window.
    pub window_terms: u64,
}

/// Average `|S|/c` over the window `y <= c <= x`.
///
/// # Errors
///
/// `InvalidInput` unless `0 < y < x`; `Regime` when the window is
/// narrower than `x^{2/3}` (too short for the normalization to be
/// meaningful).
///
/// # Edge cases
///
/// A window containing no admissible moduli returns zeros.
pub fn windowed_average(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    y: f64,
    x: f64,
) -> Result<WindowedAverage> {
    if !(y > 0.0 && x > y) {
        return Err(Error::invalid(format!(
            "window must satisfy 0 < y < x, got y = {y}, x = {x}"
        )));
    }
    if x - y < x.powf(2.0 / 3.0) * (1.0 - 1e-12) {
        return Err(Error::regime(format!(
            "window [{y}, {x}] is narrower than x^(2/3) = {}",
            x.powf(2.0 / 3.0)
        )));
    }
    let level = nu.level();
    let first = {
        let lo = y.ceil() as u64;
        lo.div_ceil(level) * level
    };
    let last = (x.floor() as u64) / level * level;
    let mut total = NeumaierSum::new();
    let mut window_terms = 0u64;
    let mut c = first.max(level);
    while c <= last {
        let v = kloosterman_sum(&KloostermanQuery {
            m,
            n,
            nu: nu.clone(),
            c,
        })?;
        total.add(v.value.norm() / c as f64);
        window_terms += 1;
        c += level;
    }
    let total = total.value();
    let ratio = if window_terms == 0 {
        0.0
    } else {
        total / (x.sqrt() - y.sqrt())
    };
    Ok(WindowedAverage {
        total,
        ratio,
        window_terms,
    })
}

// ---------------------------------------------------------------------------
// Bessel-weighted tails
// ---------------------------------------------------------------------------

/// Which Bessel family weights the tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    I,
    J,
}

/// A truncated Bessel-weighted tail sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselTail {
    /// `sum S(m,n,c,nu)/c * B(4 pi sqrt(|m~ n~|) / c)` over admissible
    /// `c` in `(alpha sqrt(|m~ n~|), c_max]`.
    pub value: Complex64,
    /// Contribution of the last decade `c in (c_max/10, c_max]` — a
    /// convergence diagnostic (small when the truncation has settled).
    pub last_decade: Complex64,
    pub terms: u64,
}

/// Tail of the weighted sum over large moduli, truncated at `c_max`.
///
/// The Bessel argument is `4 pi sqrt(|m~ n~|) / c`; the absolute value
/// makes the shifted product's sign a caller-side convention (the `kind`
/// selects the family that convention demands).  Admissible moduli start
/// strictly above `alpha * sqrt(|m~ n~|)`.
///
/// # Errors
///
/// `InvalidInput` for `alpha <= 0`, a vanishing shifted product, or the
/// unsupported `(I, 3/2)` combination.
///
/// # Edge cases
///
/// `c_max` below the first admissible modulus gives an empty (zero)
/// tail.
pub fn bessel_tail(
    nu: &MultiplierSpec,
    m: i64,
    n: i64,
    alpha_cut: f64,
    kind: BesselKind,
    beta: TransformWeight,
    c_max: u64,
) -> Result<BesselTail> {
    if !(alpha_cut > 0.0) {
        return Err(Error::invalid("cut parameter alpha must be positive"));
    }
    if kind == BesselKind::I && beta == TransformWeight::ThreeHalves {
        return Err(Error::invalid(
            "I-Bessel weights are supported only at index 1/2",
        ));
    }
    let data = alpha(nu);
    let prod = data.tilde(m).to_f64().expect("small rational")
        * data.tilde(n).to_f64().expect("small rational");
    if prod == 0.0 {
        return Err(Error::invalid(
            "shifted product m~ n~ vanishes; the Bessel argument degenerates",
        ));
    }
    let root = prod.abs().sqrt();
    let arg_scale = 4.0 * std::f64::consts::PI * root;
    let threshold = alpha_cut * root;

    let level = nu.level();
    let mut acc = ComplexAccumulator::new();
    let mut decade = ComplexAccumulator::new();
    let mut terms = 0u64;
    let mut c = level;
    while c <= c_max {
        if c as f64 > threshold {
            let v = kloosterman_sum(&KloostermanQuery {
                m,
                n,
                nu: nu.clone(),
                c,
            })?;
            let u = arg_scale / c as f64;
            let weight = match kind {
                BesselKind::J => bessel_j(beta.as_f64(), u)?,
                BesselKind::I => bessel_i(beta.as_f64(), u)?,
            };
            let term = v.value / c as f64 * weight;
            acc.add(term);
            if c as f64 * 10.0 > c_max as f64 {
                decade.add(term);
            }
            terms += 1;
        }
        c += level;
    }
    Ok(BesselTail {
        value: acc.value(),
        last_decade: decade.value(),
        terms,
    })
}

// ---------------------------------------------------------------------------
// Growth fit
// ---------------------------------------------------------------------------

/// A least-squares slope of `log |running_sum|` against `log X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    /// Fitted exponent (the slope).
    pub exponent: f64,
    /// Coefficient of determination of the linear fit (1 for an exact
    /// power law; defined as 1 when the data are constant).
    pub r2: f64,
    /// Number of dyadic points used.
    pub points: usize,
}

/// Fit `|running_sum(X)| ~ X^e` at the dyadic cuts
/// `X = x_min, 2 x_min, 4 x_min, ...` up to the series end, reading each
/// cut's running sum from the last row at or below it.
///
/// Diagnostic only — no pass/fail semantics.  Cuts whose running sum is
/// exactly zero are dropped (their log is undefined).
///
/// # Errors
///
/// `InvalidInput` with fewer than 4 usable dyadic points.
pub fn growth_fit(series: &PartialSumSeries, x_min: u64) -> Result<GrowthFit> {
    if x_min == 0 {
        return Err(Error::invalid("x_min must be positive"));
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut target = x_min;
    while target <= series.x_max {
        if let Some(row) = series.rows.iter().rev().find(|r| r.c <= target) {
            let mag = row.running_sum.norm();
            if mag > 0.0 {
                pts.push(((target as f64).ln(), mag.ln()));
            }
        }
        match target.checked_mul(2) {
            Some(t) => target = t,
            None => break,
        }
    }
    if pts.len() < 4 {
        return Err(Error::invalid(format!(
            "growth fit needs at least 4 dyadic points, found {}",
            pts.len()
        )));
    }
    let len = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx; // sxx > 0: dyadic abscissae are distinct
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (mean_y + slope * (p.0 - mean_x))).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(GrowthFit {
        exponent: slope,
        r2,
        points: pts.len(),
    })
}
