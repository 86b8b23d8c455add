//! Exact arithmetic on sums `Σ c_d √d` with rational `c_d` and squarefree `d`.
//!
//! Square roots of distinct squarefree integers are linearly independent
//! over the rationals, so a non-zero sum has a sign that interval refinement
//! always settles, and an irrational sum is never an integer. Comparisons
//! and floors are therefore exact; no floating point is involved.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    /// squarefree radicand -> coefficient; radicand 1 is the rational part
    terms: BTreeMap<u64, BigRational>,
}

/// `m = q² · d` with `d` squarefree.
fn split_square(mut m: u64) -> (u64, u64) {
    let mut q = 1;
    let mut d = 1;
    let mut p = 2u64;
    while p * p <= m {
        while m.is_multiple_of(p * p) {
            m /= p * p;
            q *= p;
        }
        if m.is_multiple_of(p) {
            m /= p;
            d *= p;
        }
        p += 1;
    }
    (q, d * m)
}

fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn int(v: i128) -> Self {
        Self::rational(ratio(v, 1))
    }

    pub fn frac(num: i128, den: i128) -> Self {
        Self::rational(ratio(num, den))
    }

    pub fn rational(r: BigRational) -> Self {
        let mut s = Surd::zero();
        s.push(1, r);
        s
    }

    /// `√m` for a non-negative integer `m`.
    pub fn sqrt(m: u64) -> Self {
        if m == 0 {
            return Surd::zero();
        }
        let (q, d) = split_square(m);
        let mut s = Surd::zero();
        s.push(d, ratio(q as i128, 1));
        s
    }

    fn push(&mut self, d: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(d).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Surd::zero();
        for (&d, v) in &self.terms {
            out.push(d, v * c);
        }
        out
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&d| d == 1)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Bounds `[lo, hi]` with `hi - lo` at most `terms · max|c| · 2^-bits`;
    /// the true value is strictly inside unless the sum is rational.
    fn enclose(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (&d, c) in &self.terms {
            if d == 1 {
                lo += c;
                hi += c;
                continue;
            }
            let r = (BigInt::from(d) << (2 * bits)).sqrt();
            let a = BigRational::new(r.clone(), scale.clone());
            let b = BigRational::new(r + 1, scale.clone());
            if c.is_positive() {
                lo += c * a;
                hi += c * b;
            } else {
                lo += c * b;
                hi += c * a;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(&BigRational::zero());
        }
        let mut bits = 32;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(bits <= 1 << 16, "sign refinement did not converge");
        }
    }

    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let mut bits = 32;
        loop {
            let (lo, hi) = self.enclose(bits);
            let (a, b) = (lo.floor().to_integer(), hi.floor().to_integer());
            if a == b {
                return a;
            }
            bits *= 2;
            assert!(bits <= 1 << 16, "floor refinement did not converge");
        }
    }

    /// `floor` narrowed to `i128`.
    pub fn floor_i128(&self) -> i128 {
        self.floor().to_i128().expect("floor fits in i128")
    }

    pub fn ceil_i128(&self) -> i128 {
        -(-self.clone()).floor_i128()
    }

    /// Approximation for display only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose(64);
        let mid = (lo + hi) / ratio(2, 1);
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        for (d, c) in rhs.terms {
            self.push(d, c);
        }
        self
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&ratio(-1, 1))
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let mut out = Surd::zero();
        for (&d, a) in &self.terms {
            for (&e, b) in &rhs.terms {
                let (q, f) = split_square(d * e);
                out.push(f, a * b * ratio(q as i128, 1));
            }
        }
        out
    }
}

impl From<i128> for Surd {
    fn from(v: i128) -> Self {
        Surd::int(v)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if d == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({d})")?;
            }
        }
        if !self.is_rational() {
            write!(f, " (~{:.4})", self.to_f64())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
