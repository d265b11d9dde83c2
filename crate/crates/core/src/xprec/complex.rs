use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use super::XReal;
use crate::error::{Error, Result};

/// Complex number with extended-precision parts.
#[derive(Clone, PartialEq, Eq)]
pub struct XComplex {
    pub re: XReal,
    pub im: XReal,
}

impl XComplex {
    pub fn new(re: XReal, im: XReal) -> Self {
        XComplex { re, im }
    }

    pub fn from_real(re: XReal) -> Self {
        let im = XReal::zero(re.digits());
        XComplex { re, im }
    }

    /// Parses real and imaginary decimal literals.
    pub fn parse(re: &str, im: &str, digits: usize) -> Result<Self> {
        Ok(XComplex { re: XReal::parse(re, digits)?, im: XReal::parse(im, digits)? })
    }

    pub fn zero(digits: usize) -> Self {
        XComplex { re: XReal::zero(digits), im: XReal::zero(digits) }
    }

    pub fn one(digits: usize) -> Self {
        XComplex { re: XReal::one(digits), im: XReal::zero(digits) }
    }

    pub fn i(digits: usize) -> Self {
        XComplex { re: XReal::zero(digits), im: XReal::one(digits) }
    }

    pub fn digits(&self) -> usize {
        self.re.digits().max(self.im.digits())
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        XComplex { re: self.re.with_digits(digits), im: self.im.with_digits(digits) }
    }

    pub fn conj(&self) -> Self {
        XComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> XReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> XReal {
        self.re.hypot(&self.im)
    }

    pub fn scale(&self, factor: &XReal) -> Self {
        XComplex { re: &self.re * factor, im: &self.im * factor }
    }

    pub fn checked_div(&self, rhs: &XComplex) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("complex division by zero".into()));
        }
        let denom = rhs.norm_sqr();
        let re = &self.re * &rhs.re + &self.im * &rhs.im;
        let im = &self.im * &rhs.re - &self.re * &rhs.im;
        Ok(XComplex { re: re / &denom, im: im / &denom })
    }

    pub fn recip(&self) -> Result<Self> {
        XComplex::one(self.digits()).checked_div(self)
    }
}

impl fmt::Display for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = match f.precision() {
            Some(p) => self.im.abs().to_sci_string(p),
            None => self.im.abs().to_exact_string(),
        };
        let sign = if self.im.is_negative() { '-' } else { '+' };
        match f.precision() {
            Some(p) => write!(f, "{:.*} {sign} {im}i", p, self.re),
            None => write!(f, "{} {sign} {im}i", self.re),
        }
    }
}

impl fmt::Debug for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl Neg for &XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex { re: -self.re, im: -self.im }
    }
}

impl Add<&XComplex> for &XComplex {
    type Output = XComplex;
    fn add(self, rhs: &XComplex) -> XComplex {
        XComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&XComplex> for &XComplex {
    type Output = XComplex;
    fn sub(self, rhs: &XComplex) -> XComplex {
        XComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&XComplex> for &XComplex {
    type Output = XComplex;
    fn mul(self, rhs: &XComplex) -> XComplex {
        XComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Panics on a zero divisor; see [`XComplex::checked_div`].
impl Div<&XComplex> for &XComplex {
    type Output = XComplex;
    fn div(self, rhs: &XComplex) -> XComplex {
        self.checked_div(rhs).expect("XComplex division by zero")
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<XComplex> for XComplex {
            type Output = XComplex;
            fn $method(self, rhs: XComplex) -> XComplex {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&XComplex> for XComplex {
            type Output = XComplex;
            fn $method(self, rhs: &XComplex) -> XComplex {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<XComplex> for &XComplex {
            type Output = XComplex;
            fn $method(self, rhs: XComplex) -> XComplex {
                $trait::$method(self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&XComplex> for XComplex {
    fn add_assign(&mut self, rhs: &XComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<XComplex> for XComplex {
    fn add_assign(&mut self, rhs: XComplex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&XComplex> for XComplex {
    fn sub_assign(&mut self, rhs: &XComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta1() -> XComplex {
        XComplex::parse("-8.8977731864688888199e0", "1.6630982619902085304e1", 50).unwrap()
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = XComplex::i(30);
        assert_eq!(&i * &i, -XComplex::one(30));
    }

    #[test]
    fn inverse_property() {
        let t = theta1();
        let back = &t.recip().unwrap() * &t;
        assert!(agree(&back, &XComplex::one(50), 48));
    }

    #[test]
    fn conjugate_flips_table_imaginary_part() {
        let c = theta1().conj();
        assert_eq!(c.im.to_sci_string(20), "-1.6630982619902085304e1");
        assert_eq!(c.conj(), theta1());
    }

    #[test]
    fn abs_is_nonnegative_and_consistent() {
        let t = theta1();
        let abs = t.abs();
        assert!(abs.is_positive());
        let diff = (&abs.square() - &t.norm_sqr()).abs();
        assert!(diff.log10_abs() < -45.0);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(theta1().checked_div(&XComplex::zero(50)).is_err());
    }

    fn agree(a: &XComplex, b: &XComplex, digits: usize) -> bool {
        crate::xprec::agreeing_digits(a, b, 200) >= digits
    }
}
