use std::fmt;

use super::rat::Rat;

/// `re + im·ζ` with `ζ² = −1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        Self::real(Rat::one())
    }

    /// The imaginary unit ζ.
    pub fn zeta() -> Self {
        GaussRational { re: Rat::zero(), im: Rat::one() }
    }

    pub fn real(re: Rat) -> Self {
        GaussRational { re, im: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Rat::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Both parts are integers, i.e. the value is a Gaussian integer.
    pub fn is_gauss_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn neg(&self) -> Self {
        GaussRational { re: self.re.neg(), im: if self.im.is_zero() { Rat::zero() } else { self.im.neg() } }
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRational { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRational { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(self.re.mul(&o.re));
        }
        if self.im.is_zero() {
            return GaussRational { re: self.re.mul(&o.re), im: self.re.mul(&o.im) };
        }
        if o.im.is_zero() {
            return GaussRational { re: self.re.mul(&o.re), im: self.im.mul(&o.re) };
        }
        GaussRational {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GaussRational { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn norm(&self) -> Rat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        if self.im.is_zero() {
            return Self::real(self.re.inv());
        }
        let n = self.norm().inv();
        GaussRational { re: self.re.mul(&n), im: self.im.neg().mul(&n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        if o.im.is_zero() {
            let d = o.re.inv();
            return self.scale(&d);
        }
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: i32) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Sign used when printing a term: a real negative or a purely imaginary
    /// negative coefficient is printed as `- |c|`.
    pub(crate) fn leading_negative(&self) -> bool {
        if self.im.is_zero() {
            self.re.signum() < 0
        } else if self.re.is_zero() {
            self.im.signum() < 0
        } else {
            false
        }
    }
}

impl From<Rat> for GaussRational {
    fn from(r: Rat) -> Self {
        GaussRational::real(r)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if self.im == Rat::from_int(-1) {
            "-i".to_string()
        } else {
            format!("{}*i", self.im)
        };
        if self.re.is_zero() {
            return write!(f, "{im}");
        }
        if self.im.signum() < 0 {
            write!(f, "({} - {})", self.re, im.trim_start_matches('-'))
        } else {
            write!(f, "({} + {})", self.re, im)
        }
    }
}
