use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Fraction;

/// An exact binary rational `man * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

pub(crate) fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `floor(x / 2^k)`.
pub(crate) fn shr_floor(x: &BigInt, k: u64) -> BigInt {
    x.div_floor(&pow2(k))
}

/// `ceil(x / 2^k)`.
pub(crate) fn shr_ceil(x: &BigInt, k: u64) -> BigInt {
    -((-x).div_floor(&pow2(k)))
}

pub(crate) fn div_ceil(x: &BigInt, d: &BigInt) -> BigInt {
    -((-x).div_floor(d))
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    fn normalized(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`. Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.man.is_zero() {
            i64::MIN
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// `floor(self * 2^w)`.
    pub fn floor_scaled(&self, w: i64) -> BigInt {
        let e = self.exp + w;
        if e >= 0 {
            &self.man << (e as u64)
        } else {
            shr_floor(&self.man, (-e) as u64)
        }
    }

    /// `ceil(self * 2^w)`.
    pub fn ceil_scaled(&self, w: i64) -> BigInt {
        let e = self.exp + w;
        if e >= 0 {
            &self.man << (e as u64)
        } else {
            shr_ceil(&self.man, (-e) as u64)
        }
    }

    /// Truncate toward minus infinity so at most `bits` significant bits remain.
    pub fn round_floor(&self, bits: u32) -> Dyadic {
        let len = self.man.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let s = len - bits as u64;
        Dyadic::new(shr_floor(&self.man, s), self.exp + s as i64)
    }

    /// Round toward plus infinity so at most `bits` significant bits remain.
    pub fn round_ceil(&self, bits: u32) -> Dyadic {
        let len = self.man.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let s = len - bits as u64;
        Dyadic::new(shr_ceil(&self.man, s), self.exp + s as i64)
    }

    pub fn to_fraction(&self) -> Fraction {
        if self.exp >= 0 {
            Fraction::from_integer(&self.man << (self.exp as u64))
        } else {
            Fraction::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let len = self.man.bits() as i64;
        let (m, e) = if len > 60 {
            (shr_floor(&self.man, (len - 60) as u64), self.exp + len - 60)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_string().parse::<f64>().unwrap_or(f64::NAN);
        mf * 2f64.powi(e.clamp(-100_000, 100_000) as i32)
    }

    /// Compare against an exact rational without rounding.
    pub fn cmp_fraction(&self, r: &Fraction) -> Ordering {
        // self = man * 2^exp ; compare man * 2^exp * den  vs  num
        let den = r.denom();
        let num = r.numer();
        if self.exp >= 0 {
            ((&self.man << (self.exp as u64)) * den).cmp(num)
        } else {
            (&self.man * den).cmp(&(num << ((-self.exp) as u64)))
        }
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exp.min(b.exp);
    let am = &a.man << ((a.exp - e) as u64);
    let bm = &b.man << ((b.exp - e) as u64);
    (am, bm, e)
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl std::ops::Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl std::ops::Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &rhs.man, self.exp + rhs.exp)
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}
