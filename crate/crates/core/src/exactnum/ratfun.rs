use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::Error;

thread_local! {
    static THRESHOLD: RefCell<Option<Rat>> = const { RefCell::new(None) };
}

/// Runs `f` while recording the largest sign-stability threshold of every
/// rational function whose sign is inspected on this thread.
///
/// Any rational `t0` strictly above the returned bound evaluates every
/// inspected function to a value of the same sign, so re-running the same
/// computation over `Rat` at `t0` takes identical branches.
pub fn record_thresholds<R>(f: impl FnOnce() -> R) -> (R, Rat) {
    let saved = THRESHOLD.with(|cell| cell.replace(Some(Rat::zero())));
    let out = f();
    let bound = THRESHOLD
        .with(|cell| cell.replace(saved))
        .unwrap_or_else(Rat::zero);
    THRESHOLD.with(|cell| {
        if let Some(outer) = cell.borrow_mut().as_mut() {
            if bound > *outer {
                *outer = bound.clone();
            }
        }
    });
    (out, bound)
}

fn note_threshold(f: &RatFun) {
    THRESHOLD.with(|cell| {
        if let Some(current) = cell.borrow_mut().as_mut() {
            let tau = f.threshold();
            if tau > *current {
                *current = tau;
            }
        }
    });
}

/// Dual valuation value: `NegInf` is the valuation of zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    NegInf,
    Finite(Rat),
}

impl Val {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Val::Finite(r) => Some(r),
            Val::NegInf => None,
        }
    }
}

/// Result of instantiating a rational function at a rational parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rat,
    /// Beyond this parameter value the sign of `f(t0)` equals the sign of `f`.
    pub threshold: Rat,
}

/// Rational function in one parameter `t`, ordered by its behavior as
/// `t -> +inf`. Numerator and denominator are coprime and the denominator
/// is monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun, Error> {
        if den.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(RatFun::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            num.cancel_common(&den)
        };
        let lead = den.lead().expect("nonzero denominator").clone();
        if lead == Rat::one() {
            RatFun { num, den }
        } else {
            let inv = lead.recip();
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> RatFun {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// The parameter `t` itself.
    pub fn t() -> RatFun {
        RatFun::monomial(Rat::one(), 1)
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        if k >= 0 {
            RatFun {
                num: Poly::monomial(c, k as usize),
                den: Poly::one(),
            }
        } else {
            RatFun {
                num: Poly::constant(c),
                den: Poly::monomial(Rat::one(), (-k) as usize),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero_exact(&self) -> bool {
        self.num.is_zero()
    }

    /// Sign in the ordered field: the sign of the numerator's leading
    /// coefficient.
    pub fn sign(&self) -> Ordering {
        note_threshold(self);
        match self.num.lead() {
            None => Ordering::Equal,
            Some(c) => c.signum(),
        }
    }

    /// `deg(num) - deg(den)`, or `None` for zero.
    pub fn valstar_degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().unwrap() as i64)
    }

    /// Dual valuation with the exponent scale divided out.
    pub fn valstar(&self, scale: u64) -> Val {
        match self.valstar_degree() {
            None => Val::NegInf,
            Some(d) => Val::Finite(Rat::new(d, scale as i64)),
        }
    }

    /// Threshold beyond which `sign(f(t0)) = sign(f)` and `f` has no pole.
    pub fn threshold(&self) -> Rat {
        let a = self.num.cauchy_bound();
        let b = self.den.cauchy_bound();
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn eval_at(&self, t0: &Rat) -> Result<Evaluation, Error> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(Error::Pole(t0.clone()));
        }
        Ok(Evaluation {
            value: self.num.eval(t0) / d,
            threshold: self.threshold(),
        })
    }

    pub fn recip(&self) -> Result<RatFun, Error> {
        if self.num.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(RatFun::reduced(self.den.clone(), self.num.clone()))
    }

    fn add_ref(&self, rhs: &RatFun) -> RatFun {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::reduced(self.num.add(&rhs.num), self.den.clone());
        }
        // Denominators that are both powers of t combine without a gcd.
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let a = self.den.degree().unwrap();
            let b = rhs.den.degree().unwrap();
            let k = a.max(b);
            let num = self.num.shift(k - a).add(&rhs.num.shift(k - b));
            return RatFun::reduced(num, Poly::monomial(Rat::one(), k));
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        RatFun::reduced(num, self.den.mul(&rhs.den))
    }

    fn mul_ref(&self, rhs: &RatFun) -> RatFun {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun {
                num: self.num.mul(&rhs.num),
                den: Poly::one(),
            };
        }
        RatFun::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    fn neg_ref(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

/// Order of two rational functions in the field.
pub fn of_compare(f: &RatFun, g: &RatFun) -> Ordering {
    (f - g).sign()
}

impl PartialOrd for RatFun {
    fn partial_cmp(&self, other: &RatFun) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFun {
    fn cmp(&self, other: &RatFun) -> Ordering {
        of_compare(self, other)
    }
}

impl<'a, 'b> Add<&'b RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &'b RatFun) -> RatFun {
        self.add_ref(rhs)
    }
}

impl<'a, 'b> Sub<&'b RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &'b RatFun) -> RatFun {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<'a, 'b> Mul<&'b RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &'b RatFun) -> RatFun {
        self.mul_ref(rhs)
    }
}

impl<'a, 'b> Div<&'b RatFun> for &'a RatFun {
    type Output = RatFun;
    /// Panics on division by zero; use [`RatFun::recip`] for a fallible form.
    fn div(self, rhs: &'b RatFun) -> RatFun {
        self.mul_ref(&rhs.recip().expect("division by zero rational function"))
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        self.neg_ref()
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatFunJson {
    num: Vec<Rat>,
    den: Vec<Rat>,
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatFunJson {
            num: self.num.coeffs().to_vec(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<RatFun, D::Error> {
        let raw = RatFunJson::deserialize(deserializer)?;
        RatFun::new(Poly::from_coeffs(raw.num), Poly::from_coeffs(raw.den))
            .map_err(serde::de::Error::custom)
    }
}
