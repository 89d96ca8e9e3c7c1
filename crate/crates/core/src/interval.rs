//! Closed intervals with exact rational endpoints.
//!
//! Endpoints are kept on a dyadic grid `2^-bits` by outward rounding, so
//! repeated arithmetic does not blow up the size of the rationals. Every
//! transcendental enclosure carries an explicit truncation bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn floor_to_grid(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.floor().to_integer(), pow2(bits))
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn ceil_to_grid(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.ceil().to_integer(), pow2(bits))
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(n.into()))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Distance from the interval to zero; zero when it straddles the origin.
    pub fn magnitude_lower(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn round_outward(&self, bits: u32) -> Self {
        Interval {
            lo: floor_to_grid(&self.lo, bits),
            hi: ceil_to_grid(&self.hi, bits),
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Self {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.mul(&Interval::point(c.clone()))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: BigRational::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        }
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Enclosure of `ln` over a strictly positive interval, with endpoints on
    /// the `2^-bits` grid.
    pub fn ln(&self, bits: u32) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let lo = ln_enclosure(&self.lo, bits).lo;
        let hi = ln_enclosure(&self.hi, bits).hi;
        Some(Interval { lo, hi })
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded outward to `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> DecimalInterval {
        DecimalInterval {
            lo: decimal_string(&self.lo, digits, false),
            hi: decimal_string(&self.hi, digits, true),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.to_decimal(12);
        write!(f, "[{}, {}]", d.lo, d.hi)
    }
}

/// Interval with decimal-string endpoints, as emitted in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecimalInterval {
    pub lo: String,
    pub hi: String,
}

fn decimal_string(x: &BigRational, digits: u32, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let neg = n.is_negative();
    let mag = n.abs();
    let (int_part, frac_part) = mag.div_rem(&scale);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// `atanh(z)` for rational `|z| <= 1/3`, as a fixed-point sum scaled by
/// `2^prec` together with an absolute error bound in units of `2^-prec`.
fn atanh_fixed(z: &BigRational, prec: u32) -> (BigInt, BigInt) {
    if z.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let zabs = z.abs().to_f64().unwrap() * (1.0 + 1e-12) + 1e-300;
    assert!(zabs < 0.34, "atanh argument out of range");
    // tail after n terms <= |z|^(2n+1) / ((2n+1)(1-z^2)) < 2^-prec
    let per_term = -2.0 * zabs.log2();
    let n_terms = ((prec as f64 + 2.0) / per_term).ceil() as u64 + 1;
    let scale = pow2(prec);
    let zsq = z * z;
    let (zn, zd) = (zsq.numer().clone(), zsq.denom().clone());
    let mut p = (z * BigRational::from_integer(scale)).floor().to_integer();
    let mut sum = BigInt::zero();
    for i in 0..n_terms {
        sum += p.div_floor(&BigInt::from(2 * i + 1));
        p = (&p * &zn).div_floor(&zd);
    }
    // each term is off by at most i + 2 ulps, plus one ulp of series tail
    let err = BigInt::from(n_terms * (n_terms + 3) / 2 + 1);
    (sum, err)
}

/// Enclosure of `ln(x)` for a positive rational.
pub fn ln_enclosure(x: &BigRational, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of non-positive value");
    let prec = bits + 48;
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let mut k = nb - db;
    let two = BigRational::from_integer(2.into());
    let mut y = if k >= 0 {
        x / BigRational::from_integer(pow2(k as u32))
    } else {
        x * BigRational::from_integer(pow2((-k) as u32))
    };
    let upper = BigRational::new(4.into(), 3.into());
    let lower = BigRational::new(2.into(), 3.into());
    while y >= upper {
        y /= &two;
        k += 1;
    }
    while y < lower {
        y *= &two;
        k -= 1;
    }
    let one = BigRational::one();
    let z = (&y - &one) / (&y + &one);
    // atanh is increasing, so z rounded down (up) to the working grid gives
    // a lower (upper) bound while keeping the series in small integers
    let (sl, el) = atanh_fixed(&floor_to_grid(&z, prec), prec);
    let (sh, eh) = atanh_fixed(&ceil_to_grid(&z, prec), prec);
    let (s3, e3) = atanh_fixed(&BigRational::new(1.into(), 3.into()), prec);
    let kb = BigInt::from(k);
    let log2_err = kb.abs() * &e3;
    let lo_num = (&kb * &s3 + &sl - &log2_err - &el) * 2;
    let hi_num = (&kb * &s3 + &sh + &log2_err + &eh) * 2;
    let denom = pow2(prec);
    let lo = BigRational::new(lo_num, denom.clone());
    let hi = BigRational::new(hi_num, denom);
    Interval { lo, hi }.round_outward(bits)
}
