//! Multiplier systems on `Gamma_0(N)`: the eta multiplier (by two
//! independent exact formulas), the theta multiplier, real-character
//! twists, conjugates, the cusp parameter `alpha_nu`, and the weight-`k`
//! cocycle `w_k`.
//!
//! All multiplier values are unit complex numbers represented as exact
//! rational [`Phase`]s; nothing is rounded until a phase is turned into a
//! complex number.
//!
//! # Conventions
//!
//! * `gamma = (a, b; c, d)` with `a d - b c = 1`; membership in
//!   `Gamma_0(N)` means `N | c`.
//! * The twist by modulus `Q` is the real character
//!   `chi(gamma) = kronecker(d, Q)` evaluated at the lower-right entry.
//!   For a fundamental discriminant `D = -3` this is `(d | 3)`, the
//!   character attached to the twisted eta multiplier of the exact
//!   formula.  `chi` is completely multiplicative in `d`, and on
//!   `Gamma_0(N)` with `Q | N` it is a genuine character
//!   (`d_12 = c_1 b_2 + d_1 d_2 = d_1 d_2 mod Q`), so the twisted
//!   multiplier satisfies the same weight-`k` consistency relation as its
//!   base.  With `Q` not dividing `N` the character property is not
//!   guaranteed and `chi` may vanish; vanishing is reported as
//!   [`MultiplierValue::Zero`], never silently dropped.
//! * `nu(-I) = e(-k/2)` for the un-twisted bases; elements with `c < 0`
//!   evaluate through `nu(gamma) = e(k/2) * nu(-gamma)` and `c = 0`
//!   through the translation rule `nu(T^b) = e(-alpha b)` together with
//!   the `nu(-I)` factor.  (A twist with `chi(-1) = -1` shifts `nu(-I)`
//!   by a sign; the composition below reproduces exactly the value forced
//!   by the consistency relation, because `chi(d)` is evaluated at the
//!   original entry `d` and `chi(-d) = chi(-1) chi(d)`.)

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{dedekind_sum, epsilon_phase, kronecker_big, mod_inverse_big, Phase};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Group elements
// ---------------------------------------------------------------------------

/// An element of `SL_2(Z)` with arbitrary-precision entries.
///
/// The determinant condition `a d - b c = 1` is validated at construction
/// and preserved by [`GammaElement::mul`] and [`GammaElement::neg`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GammaElement {
    /// Build `(a, b; c, d)`, checking the determinant.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<GammaElement> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::invalid(format!(
                "matrix ({a}, {b}; {c}, {d}) has determinant {det}, not 1"
            )));
        }
        Ok(GammaElement { a, b, c, d })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<GammaElement> {
        GammaElement::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d))
    }

    pub fn identity() -> GammaElement {
        GammaElement::from_i64(1, 0, 0, 1).expect("identity is unimodular")
    }

    /// The translation `T^b = (1, b; 0, 1)`.
    pub fn translation(b: i64) -> GammaElement {
        GammaElement::from_i64(1, b, 0, 1).expect("translations are unimodular")
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GammaElement) -> GammaElement {
        GammaElement {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// `-gamma` (same Moebius action, opposite matrix).
    pub fn neg(&self) -> GammaElement {
        GammaElement {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Is `level | c`?
    pub fn in_gamma0(&self, level: u64) -> bool {
        (&self.c % BigInt::from(level)).is_zero()
    }

    fn entries_f64(&self) -> (f64, f64, f64, f64) {
        (
            self.a.to_f64().expect("entry fits f64"),
            self.b.to_f64().expect("entry fits f64"),
            self.c.to_f64().expect("entry fits f64"),
            self.d.to_f64().expect("entry fits f64"),
        )
    }
}

impl std::fmt::Display for GammaElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// A half-integer weight, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfInt {
    halves: i32,
}

impl HalfInt {
    pub fn from_halves(halves: i32) -> HalfInt {
        HalfInt { halves }
    }

    pub fn halves(self) -> i32 {
        self.halves
    }

    pub fn as_f64(self) -> f64 {
        self.halves as f64 / 2.0
    }

    pub fn negated(self) -> HalfInt {
        HalfInt { halves: -self.halves }
    }

    /// `k/2` as an exact phase (the `nu(-I)` / sign-normalization unit).
    fn half_phase(self) -> Phase {
        Phase::from_ratio(self.halves as i64, 4).expect("den 4 is nonzero")
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.halves % 2 == 0 {
            write!(f, "{}", self.halves / 2)
        } else {
            write!(f, "{}/2", self.halves)
        }
    }
}

// ---------------------------------------------------------------------------
// Multiplier specifications
// ---------------------------------------------------------------------------

/// The base multiplier system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierBase {
    /// Dedekind eta's multiplier, weight 1/2.
    Eta,
    /// The standard theta multiplier `(c|d) epsilon_d^{-1}` on `Gamma_0(4)`.
    Theta,
    /// The constant multiplier 1 in weight 0 (classical Kloosterman sums).
    TrivialWeight0,
}

impl MultiplierBase {
    fn tag(self) -> &'static str {
        match self {
            MultiplierBase::Eta => "eta",
            MultiplierBase::Theta => "theta",
            MultiplierBase::TrivialWeight0 => "trivial",
        }
    }
}

/// A full multiplier specification: base, optional real-character twist,
/// conjugation flag, weight, and level.
///
/// Construct with [`MultiplierSpec::eta`], [`MultiplierSpec::theta`], or
/// [`MultiplierSpec::trivial`], then refine with
/// [`MultiplierSpec::twisted`], [`MultiplierSpec::conjugated`], and
/// [`MultiplierSpec::with_weight`].
///
/// ```
/// use klsum::multiplier::MultiplierSpec;
/// let nu = MultiplierSpec::eta(3).unwrap().twisted(3).unwrap().conjugated();
/// assert_eq!(nu.fingerprint(), "eta,conj=1,twist=3,k=-1/2,N=3");
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplierSpec {
    base: MultiplierBase,
    twist: Option<u64>,
    conjugated: bool,
    weight: HalfInt,
    level: u64,
}

impl MultiplierSpec {
    /// The trivial weight-0 multiplier at level 1.
    pub fn trivial() -> MultiplierSpec {
        MultiplierSpec {
            base: MultiplierBase::TrivialWeight0,
            twist: None,
            conjugated: false,
            weight: HalfInt::from_halves(0),
            level: 1,
        }
    }

    /// The eta multiplier (weight 1/2) carried at the given level.
    pub fn eta(level: u64) -> Result<MultiplierSpec> {
        if level == 0 {
            return Err(Error::invalid("level must be positive"));
        }
        Ok(MultiplierSpec {
            base: MultiplierBase::Eta,
            twist: None,
            conjugated: false,
            weight: HalfInt::from_halves(1),
            level,
        })
    }

    /// The theta multiplier (weight 1/2); requires `4 | level`.
    pub fn theta(level: u64) -> Result<MultiplierSpec> {
        if level == 0 || level % 4 != 0 {
            return Err(Error::invalid(format!(
                "theta multiplier requires 4 | level, got level {level}"
            )));
        }
        Ok(MultiplierSpec {
            base: MultiplierBase::Theta,
            twist: None,
            conjugated: false,
            weight: HalfInt::from_halves(1),
            level,
        })
    }

    /// Twist by the real character `kronecker(., q)` with positive modulus
    /// `q` (use `q = |D|` for a fundamental discriminant `D`).  Only the
    /// eta and theta bases are twisted; the character-axiom guarantees
    /// need `q | level`, which is not enforced (vanishing characters are
    /// reported at evaluation time instead).
    pub fn twisted(mut self, q: u64) -> Result<MultiplierSpec> {
        if q == 0 {
            return Err(Error::invalid("twist modulus must be positive"));
        }
        if self.base == MultiplierBase::TrivialWeight0 {
            return Err(Error::invalid("the trivial multiplier is not twisted"));
        }
        self.twist = Some(q);
        Ok(self)
    }

    /// Complex-conjugate multiplier: toggles the flag and negates the
    /// weight.
    pub fn conjugated(mut self) -> MultiplierSpec {
        self.conjugated = !self.conjugated;
        self.weight = self.weight.negated();
        self
    }

    /// Override the weight within the allowed set: `{±1/2, ±3/2}` for
    /// eta/theta (sign matching the conjugation flag), `0` for trivial.
    /// The multiplier's values do not depend on this choice; it feeds the
    /// cocycle checks and sign normalizations, which only see the weight
    /// mod 2.
    pub fn with_weight(mut self, halves: i32) -> Result<MultiplierSpec> {
        match self.base {
            MultiplierBase::TrivialWeight0 => {
                if halves != 0 {
                    return Err(Error::invalid("trivial multiplier has weight 0"));
                }
            }
            _ => {
                if !matches!(halves.abs(), 1 | 3) {
                    return Err(Error::invalid(format!(
                        "weight must be ±1/2 or ±3/2 (got {halves} halves)"
                    )));
                }
                let want_negative = self.conjugated;
                if (halves < 0) != want_negative {
                    return Err(Error::invalid(
                        "weight sign must match the conjugation flag".to_string(),
                    ));
                }
            }
        }
        self.weight = HalfInt::from_halves(halves);
        Ok(self)
    }

    pub fn base(&self) -> MultiplierBase {
        self.base
    }
    pub fn twist(&self) -> Option<u64> {
        self.twist
    }
    pub fn is_conjugated(&self) -> bool {
        self.conjugated
    }
    pub fn weight(&self) -> HalfInt {
        self.weight
    }
    pub fn level(&self) -> u64 {
        self.level
    }

    /// Canonical cache/artifact fingerprint, e.g.
    /// `eta,conj=1,twist=3,k=-1/2,N=3` (`twist=0` when untwisted).
    pub fn fingerprint(&self) -> String {
        format!(
            "{},conj={},twist={},k={},N={}",
            self.base.tag(),
            u8::from(self.conjugated),
            self.twist.unwrap_or(0),
            self.weight,
            self.level
        )
    }
}

// ---------------------------------------------------------------------------
// Cusp parameter alpha
// ---------------------------------------------------------------------------

/// The cusp parameter `alpha` of a multiplier at infinity, with the shift
/// map `n -> n~ = n - alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaData {
    alpha: BigRational,
}

impl AlphaData {
    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// `n~ = n - alpha` as an exact rational.
    pub fn tilde(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n)) - &self.alpha
    }
}

/// `alpha` in `[0, 1)` with `nu(T) = e(-alpha)`.
///
/// Base values: eta `23/24` (since `nu_eta(T) = e(1/24)`), theta and
/// trivial `0`.  Twisting leaves `alpha` unchanged (`chi(1) = 1`);
/// conjugation maps `alpha -> 1 - alpha` for `alpha > 0` and fixes `0`.
/// For the conjugate eta family this gives `alpha = 1/24`, so
/// `24 n~ = 24n - 1`.
pub fn alpha(nu: &MultiplierSpec) -> AlphaData {
    let base = match nu.base {
        MultiplierBase::Eta => BigRational::new(BigInt::from(23), BigInt::from(24)),
        MultiplierBase::Theta | MultiplierBase::TrivialWeight0 => BigRational::zero(),
    };
    let alpha = if nu.conjugated && !base.is_zero() {
        BigRational::one() - base
    } else {
        base
    };
    AlphaData { alpha }
}

// ---------------------------------------------------------------------------
// Base evaluators
// ---------------------------------------------------------------------------

/// Translation-family phase for `c = 0` (so `gamma = ±T^{±b}`), given the
/// base alpha and the weight used in the `nu(-I)` factor.
fn translation_phase(gamma: &GammaElement, base_alpha: &BigRational, k: HalfInt) -> Result<Phase> {
    debug_assert!(gamma.c.is_zero());
    let alpha_phase = Phase::new(-base_alpha);
    if gamma.d.is_one() {
        // nu(T^b) = e(-alpha b)
        Ok(alpha_phase.mul_int(&gamma.b))
    } else if (-&gamma.d).is_one() {
        // gamma = -T^{-b'}, b' = -b: nu = nu(-I) e(-alpha(-b)) with
        // nu(-I) = e(-k/2).
        Ok(k.half_phase().neg().add(&alpha_phase.mul_int(&(-&gamma.b))))
    } else {
        Err(Error::invalid(format!(
            "c = 0 requires d = ±1 in {gamma}"
        )))
    }
}

const ETA_WEIGHT: HalfInt = HalfInt { halves: 1 };

fn eta_alpha_base() -> BigRational {
    BigRational::new(BigInt::from(23), BigInt::from(24))
}

/// Eta multiplier phase by Rademacher's Dedekind-sum formula:
///
/// ```text
/// nu_eta(gamma) = e(-1/8) e^{-pi i s(d,c)} e((a+d)/(24c)),  c > 0,
/// ```
///
/// i.e. the exact phase `-1/8 - s(d,c)/2 + (a+d)/(24c)` (mod 1), with
/// `s(d, c)` the classical Dedekind sum.  `c = 0` is handled by the
/// translation rule `nu_eta(T^b) = e(b/24)` (and the `nu(-I) = e(-1/4)`
/// factor for `d = -1`); `c < 0` is rejected — normalize via
/// `nu_eta(gamma) = i^{±1} nu_eta(-gamma)` first, as [`eval`] does.
///
/// O(log c) via the Dedekind reciprocity descent.
pub fn eval_eta_rademacher(gamma: &GammaElement) -> Result<Phase> {
    if gamma.c.is_negative() {
        return Err(Error::invalid(format!(
            "eta formulas require c >= 0 (got {gamma}); evaluate at -gamma and \
             multiply by e(k/2)"
        )));
    }
    if gamma.c.is_zero() {
        return translation_phase(gamma, &eta_alpha_base(), ETA_WEIGHT);
    }
    let s = dedekind_sum(&gamma.d, &gamma.c)?;
    let minus_eighth = BigRational::new(BigInt::from(-1), BigInt::from(8));
    let half_s = s / BigRational::from(BigInt::from(2));
    let trace_term = BigRational::new(&gamma.a + &gamma.d, BigInt::from(24) * &gamma.c);
    Ok(Phase::new(minus_eighth - half_s + trace_term))
}

/// Eta multiplier phase by Knopp's closed formula:
///
/// ```text
/// c odd:  (d|c) e( ((a+d)c - b d (c^2-1) - 3c) / 24 )
/// c even: (c|d) e( ((a+d)c - b d (c^2-1) + 3d - 3 - 3cd) / 24 )
/// ```
///
/// Same domain handling as [`eval_eta_rademacher`]; the two agree exactly
/// (tested elementwise, and relied on as a dual derivation route).
pub fn eval_eta_knopp(gamma: &GammaElement) -> Result<Phase> {
    if gamma.c.is_negative() {
        return Err(Error::invalid(format!(
            "eta formulas require c >= 0 (got {gamma}); evaluate at -gamma and \
             multiply by e(k/2)"
        )));
    }
    if gamma.c.is_zero() {
        return translation_phase(gamma, &eta_alpha_base(), ETA_WEIGHT);
    }
    let (a, b, c, d) = (&gamma.a, &gamma.b, &gamma.c, &gamma.d);
    let c2m1 = c * c - BigInt::one();
    let (kron, exponent) = if c.is_odd() {
        (kronecker_big(d, c), (a + d) * c - b * d * &c2m1 - c * 3)
    } else {
        (
            kronecker_big(c, d),
            (a + d) * c - b * d * &c2m1 + d * 3 - BigInt::from(3) - c * d * 3,
        )
    };
    debug_assert!(kron != 0, "gcd(c, d) = 1 forces a nonzero symbol");
    let sign_phase = if kron == -1 {
        Phase::from_ratio(1, 2)?
    } else {
        Phase::zero()
    };
    let e_part = Phase::new(BigRational::new(exponent, BigInt::from(24)));
    Ok(sign_phase.add(&e_part))
}

/// Theta multiplier phase `nu_theta(gamma) = (c|d) epsilon_d^{-1}` for
/// `gamma` in `Gamma_0(4)` — valid for every such `gamma`, including
/// `c <= 0` and `d < 0` (the closed formula already matches the
/// sign-normalization rules; tested).  Values are quartic roots of unity.
///
/// # Errors
///
/// `InvalidInput` unless `4 | c`.
pub fn eval_theta(gamma: &GammaElement) -> Result<Phase> {
    if !(&gamma.c % BigInt::from(4)).is_zero() {
        return Err(Error::invalid(format!(
            "theta multiplier needs 4 | c, got {gamma}"
        )));
    }
    // 4 | c and det 1 force d odd.
    let kron = kronecker_big(&gamma.c, &gamma.d);
    debug_assert!(kron != 0);
    let sign_phase = if kron == -1 {
        Phase::from_ratio(1, 2)?
    } else {
        Phase::zero()
    };
    let eps_inv = epsilon_phase(&gamma.d)?.neg();
    Ok(sign_phase.add(&eps_inv))
}

// ---------------------------------------------------------------------------
// Full evaluation
// ---------------------------------------------------------------------------

/// Result of evaluating a multiplier: a unit complex number given by its
/// exact phase, or zero (a vanishing twist character).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiplierValue {
    Unit(Phase),
    Zero,
}

impl MultiplierValue {
    /// The complex value (`0` for [`MultiplierValue::Zero`]).
    pub fn to_complex(&self) -> Complex64 {
        match self {
            MultiplierValue::Unit(p) => p.to_complex(),
            MultiplierValue::Zero => Complex64::new(0.0, 0.0),
        }
    }

    /// The phase, if the value is a unit.
    pub fn phase(&self) -> Option<&Phase> {
        match self {
            MultiplierValue::Unit(p) => Some(p),
            MultiplierValue::Zero => None,
        }
    }
}

/// Evaluate a full multiplier specification at `gamma`.
///
/// Composition order: base phase (with the `c <= 0` normalization), then
/// the twist character at the original entry `d`, then conjugation
/// (negating the whole phase).  See the module docs for why this order
/// reproduces the consistency-relation values for every sign of `c`.
///
/// # Errors
///
/// `InvalidInput` when `level` does not divide `c`, or the element is
/// outside a base formula's domain.  A vanishing twist is NOT an error:
/// it returns [`MultiplierValue::Zero`] so callers can count and skip.
pub fn eval(nu: &MultiplierSpec, gamma: &GammaElement) -> Result<MultiplierValue> {
    if !gamma.in_gamma0(nu.level) {
        return Err(Error::invalid(format!(
            "{gamma} is not in Gamma_0({}): level does not divide c",
            nu.level
        )));
    }

    // Twist character chi(d) in {0, ±1}.
    let mut phase = Phase::zero();
    if let Some(q) = nu.twist {
        match kronecker_big(&gamma.d, &BigInt::from(q)) {
            0 => return Ok(MultiplierValue::Zero),
            -1 => phase = Phase::from_ratio(1, 2)?,
            _ => {}
        }
    }

    // Base phase with sign normalization.
    let base_phase = match nu.base {
        MultiplierBase::TrivialWeight0 => Phase::zero(),
        MultiplierBase::Theta => eval_theta(gamma)?,
        MultiplierBase::Eta => {
            if gamma.c.is_negative() {
                // nu(gamma) = e(k/2) nu(-gamma) with the base weight.
                ETA_WEIGHT.half_phase().add(&eval_eta_knopp(&gamma.neg())?)
            } else {
                eval_eta_knopp(gamma)?
            }
        }
    };
    phase = phase.add(&base_phase);

    if nu.conjugated {
        phase = phase.neg();
    }
    Ok(MultiplierValue::Unit(phase))
}

// ---------------------------------------------------------------------------
// Cocycle
// ---------------------------------------------------------------------------

/// The weight-`k` consistency cocycle
///
/// ```text
/// w_k(g1, g2) = j(g2, tau)^k j(g1, g2 tau)^k j(g1 g2, tau)^{-k}
/// ```
///
/// with `j(g, tau) = e^{i arg(c tau + d)}`, `arg` in `(-pi, pi]`.  The
/// value is a root of unity independent of `tau` (grid-tested); it equals
/// `e^{i k Delta}` with `Delta` in `{-2 pi, 0, 2 pi}`.
///
/// Matrix entries are converted to `f64`, which is exact for the test
/// ranges this is used with.
pub fn cocycle_w(
    g1: &GammaElement,
    g2: &GammaElement,
    k: HalfInt,
    tau: Complex64,
) -> Complex64 {
    assert!(tau.im > 0.0, "tau must lie in the upper half plane");
    let arg_j = |g: &GammaElement, z: Complex64| -> f64 {
        let (_, _, c, d) = g.entries_f64();
        (z * c + d).arg()
    };
    let (a2, b2, c2, d2) = g2.entries_f64();
    let g2_tau = (tau * a2 + b2) / (tau * c2 + d2);
    let g12 = g1.mul(g2);
    let total = arg_j(g2, tau) + arg_j(g1, g2_tau) - arg_j(&g12, tau);
    Complex64::from_polar(1.0, k.as_f64() * total)
}

// ---------------------------------------------------------------------------
// Random elements (for consistency sweeps)
// ---------------------------------------------------------------------------

/// A pseudorandom element of `Gamma_0(level)` with entries of moderate
/// size, for consistency sweeps: `c` is a level multiple in
/// `[-30 level, 30 level]` (possibly 0), `d` runs over residues coprime
/// to `c`, and the `(a, b)` row is a random solution of the determinant
/// equation.
pub fn random_gamma0_element(level: u64, rng: &mut impl Rng) -> GammaElement {
    let level = level as i64;
    let t: i64 = rng.gen_range(-30..=30);
    let c = level * t;
    if c == 0 {
        let d: i64 = if rng.gen::<bool>() { 1 } else { -1 };
        let b: i64 = rng.gen_range(-40..=40);
        return GammaElement::from_i64(d, b, 0, d).expect("det d^2 = 1");
    }
    loop {
        let d: i64 = rng.gen_range(-(3 * c.abs())..=3 * c.abs());
        let g = BigInt::from(d).gcd(&BigInt::from(c));
        if !g.is_one() {
            continue;
        }
        // a = d^{-1} mod |c| plus a random multiple of c.
        let a0 = mod_inverse_big(&BigInt::from(d), &BigInt::from(c.abs()))
            .expect("coprime by construction");
        let shift: i64 = rng.gen_range(-2..=2);
        let a = a0 + BigInt::from(c) * BigInt::from(shift);
        let b = (&a * BigInt::from(d) - BigInt::one()) / BigInt::from(c);
        return GammaElement::new(a, b, BigInt::from(c), BigInt::from(d))
            .expect("determinant 1 by construction");
    }
}

/// Convenience: `nu(gamma)` as a complex number (0 for vanishing twists).
pub fn eval_complex(nu: &MultiplierSpec, gamma: &GammaElement) -> Result<Complex64> {
    Ok(eval(nu, gamma)?.to_complex())
}
