use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rat::Rat;

/// Univariate polynomial in `t` over the rationals, coefficients stored
/// low degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: Rat, k: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Rat::one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Lowest index with a nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the polynomial is `c * t^k` for a single term.
    pub fn is_monomial(&self) -> bool {
        match self.low_order() {
            Some(k) => k + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let v = match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(v);
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divides by `t^k`; the caller guarantees divisibility.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.low_order().map_or(true, |l| l >= k));
        if self.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[d].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if *l != Rat::one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let k = self.low_order().unwrap().min(other.low_order().unwrap());
        // t^k factors are the common case for monomial lifts.
        if self.is_monomial() || other.is_monomial() {
            return Poly::monomial(Rat::one(), k);
        }
        let a = self.unshift(self.low_order().unwrap());
        let b = other.unshift(other.low_order().unwrap());
        let g = match modular_gcd(&a, &b) {
            Some((g, _, _)) => g,
            None => euclid_gcd(&a, &b),
        };
        g.shift(k)
    }

    /// `(self / g, other / g)` for `g` the gcd of two nonzero polynomials.
    pub fn cancel_common(&self, other: &Poly) -> (Poly, Poly) {
        let (la, lb) = (
            self.low_order().expect("nonzero"),
            other.low_order().expect("nonzero"),
        );
        let k = la.min(lb);
        if self.is_monomial() || other.is_monomial() {
            return (self.unshift(k), other.unshift(k));
        }
        let a = self.unshift(la);
        let b = other.unshift(lb);
        let (qa, qb) = match modular_gcd(&a, &b) {
            Some((_, qa, qb)) => (qa, qb),
            None => {
                let g = euclid_gcd(&a, &b);
                (a.div_rem(&g).0, b.div_rem(&g).0)
            }
        };
        (qa.shift(la - k), qb.shift(lb - k))
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Cauchy bound `1 + max |a_i / a_lead|`: every real root lies strictly
    /// below it in absolute value. Zero for constants.
    pub fn cauchy_bound(&self) -> Rat {
        match self.degree() {
            None | Some(0) => Rat::zero(),
            Some(d) => {
                let lead = self.coeffs[d].abs();
                let worst = self.coeffs[..d]
                    .iter()
                    .map(|c| c.abs())
                    .max()
                    .unwrap_or_else(Rat::zero);
                Rat::one() + worst / lead
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Monic gcd by the Euclidean algorithm.
fn euclid_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.monic(), b.monic());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    a.monic()
}

/// Mersenne prime used for the modular gcd.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let r = (x as u64 & P) + (x >> 61) as u64;
    let r = (r & P) + (r >> 61);
    if r >= P {
        r - P
    } else {
        r
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

/// Image mod `P`, or `None` when `P` divides a denominator.
fn reduce(c: &Rat) -> Option<u64> {
    if let Some((n, d)) = c.as_small() {
        let (n, d) = (n.rem_euclid(P as i64) as u64, d as u64 % P);
        return (d != 0).then(|| mul_mod(n, inv_mod(d)));
    }
    let p = BigInt::from(P);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd of the images mod `P`, or `None` when a denominator or a
/// leading coefficient vanishes mod `P`.
fn gcd_mod_p(a: &Poly, b: &Poly) -> Option<Vec<u64>> {
    let image = |f: &Poly| -> Option<Vec<u64>> {
        let v = f.coeffs.iter().map(reduce).collect::<Option<Vec<u64>>>()?;
        (v.last() != Some(&0)).then_some(v)
    };
    let mut x = image(a)?;
    let mut y = image(b)?;
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let inv = inv_mod(*y.last().unwrap());
        while x.len() >= y.len() {
            let c = mul_mod(*x.last().unwrap(), inv);
            let shift = x.len() - y.len();
            for (j, &yc) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + P - mul_mod(c, yc)) % P;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    let inv = inv_mod(*x.last().unwrap());
    Some(x.into_iter().map(|c| mul_mod(c, inv)).collect())
}

/// The rational `n/d` with `|n|, d < sqrt(P/2)` congruent to `c`, if any.
fn reconstruct(c: u64) -> Option<Rat> {
    let bound = 1i128 << 30;
    let (mut r0, mut r1) = (P as i128, c as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() >= bound {
        return None;
    }
    let (n, d) = if s1 < 0 { (-r1, -s1) } else { (r1, s1) };
    Some(Rat::new(n as i64, d as i64))
}

/// Gcd of two nonzero polynomials from their images mod `P`: a trivial
/// image proves coprimality (a common factor keeps its degree mod `P`);
/// otherwise the image is lifted back and accepted only if it divides both
/// inputs, since its degree bounds that of the true gcd from above.
/// Returns the gcd together with both cofactors.
fn modular_gcd(a: &Poly, b: &Poly) -> Option<(Poly, Poly, Poly)> {
    let g = gcd_mod_p(a, b)?;
    if g.len() == 1 {
        return Some((Poly::one(), a.clone(), b.clone()));
    }
    let g = Poly::from_coeffs(
        g.into_iter()
            .map(reconstruct)
            .collect::<Option<Vec<Rat>>>()?,
    );
    let (qa, ra) = a.div_rem(&g);
    if !ra.is_zero() {
        return None;
    }
    let (qb, rb) = b.div_rem(&g);
    rb.is_zero().then_some((g, qa, qb))
}
