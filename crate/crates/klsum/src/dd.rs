//! Minimal double-double ("dd") arithmetic: unevaluated sums `hi + lo` of two
//! `f64`s carrying roughly 32 significant decimal digits.
//!
//! Power series for `J_nu(u)` suffer catastrophic cancellation: the largest
//! term grows like `e^u` while the sum stays bounded, so plain `f64`
//! accumulation loses `u / ln 10` digits and is numerically dead near
//! `u ~ 35`.  Accumulating the series in dd keeps ~32 digits through the
//! cancellation, leaving ~1e-11 absolute accuracy even at `u = 50`
//! (amplification `e^50 ~ 5e21`).
//!
//! Only the handful of operations the series kernels need are implemented:
//! error-free transforms (`two_sum`, `two_prod` via FMA), normalized
//! add/sub/mul/div, and a complex pair [`Cdd`] for purely-imaginary-order
//! series.  The algorithms are the standard Dekker/Knuth/Bailey ones.
//!
//! This is deliberately not a general-purpose float type: no NaN/inf
//! handling beyond what the underlying `f64` ops do, no rounding-mode
//! tricks, no transcendentals.  Callers keep arguments in the regimes the
//! series kernels validate.

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`
/// exactly.  (Knuth two-sum; no magnitude precondition.)
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|` (Dekker fast two-sum).
#[inline(always)]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A double-double number: the unevaluated, normalized sum `hi + lo` with
/// `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Lift an `f64` exactly.
    #[inline(always)]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two `f64`s as a dd.
    #[inline(always)]
    pub fn from_product(a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    /// Round to nearest `f64`.
    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline(always)]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline(always)]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    /// Full-precision addition.
    #[inline(always)]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    /// Full-precision multiplication.
    #[inline(always)]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    /// Multiply by a plain `f64`.
    #[inline(always)]
    pub fn mul_f64(self, c: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, c);
        let p2 = p2 + self.lo * c;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    /// Full-precision division (three-step long division).
    #[inline(always)]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }
}

/// Complex double-double: real and imaginary parts are each [`Dd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline(always)]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline(always)]
    pub fn add(self, other: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    #[inline(always)]
    pub fn mul(self, other: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    /// Scale by a real dd factor.
    #[inline(always)]
    pub fn scale(self, c: Dd) -> Cdd {
        Cdd {
            re: self.re.mul(c),
            im: self.im.mul(c),
        }
    }

    /// Complex division `(a + bi) / (c + di)` via the conjugate.
    #[inline(always)]
    pub fn div(self, other: Cdd) -> Cdd {
        let denom = other.re.mul(other.re).add(other.im.mul(other.im));
        let num = self.mul(Cdd {
            re: other.re,
            im: other.im.neg(),
        });
        Cdd {
            re: num.re.div(denom),
            im: num.im.div(denom),
        }
    }

    /// Cheap magnitude estimate (`f64` hypot of the high words), used only
    /// for truncation decisions, never for results.
    #[inline(always)]
    pub fn mag_estimate(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}
