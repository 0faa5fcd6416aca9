//! Exact arithmetic in ℤ_d for prime d ≠ 2.
//!
//! Every exponent appearing in the constructions (the n, m, b, m̈, m₀ labels
//! and the ubiquitous modular half b/2 = b(d+1)/2 mod d) lives here. All
//! values are canonical residues in [0, d).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::Error;

/// Default cap on the supported dimension so dense d²×d² matrices stay small.
pub const DEFAULT_MAX_D: u64 = 101;

/// A validated prime dimension d, d ≥ 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeDim {
    d: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl PrimeDim {
    /// Validates d against the default cap ([`DEFAULT_MAX_D`]).
    pub fn new(d: u64) -> Result<Self, Error> {
        Self::with_max(d, DEFAULT_MAX_D)
    }

    /// Validates d against a caller-chosen cap.
    pub fn with_max(d: u64, max: u64) -> Result<Self, Error> {
        if d == 2 {
            return Err(Error::IsTwo);
        }
        if d < 3 {
            return Err(Error::TooSmall(d));
        }
        if d > max {
            return Err(Error::TooLarge { d, max });
        }
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        Ok(PrimeDim { d })
    }

    pub fn d(self) -> u64 {
        self.d
    }

    /// d as usize, for indexing.
    pub fn du(self) -> usize {
        self.d as usize
    }

    pub fn elem(self, value: i64) -> FieldElem {
        FieldElem::new(value, self)
    }

    /// The modular half 1/2 = (d+1)/2 mod d.
    pub fn half(self) -> FieldElem {
        self.elem(((self.d + 1) / 2) as i64)
    }

    /// All residues 0..d.
    pub fn elems(self) -> impl Iterator<Item = FieldElem> {
        (0..self.d).map(move |v| FieldElem {
            value: v,
            dim: self,
        })
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

/// A residue mod d. Negative inputs are normalized at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    dim: PrimeDim,
}

impl FieldElem {
    pub fn new(value: i64, dim: PrimeDim) -> Self {
        let d = dim.d as i64;
        FieldElem {
            value: value.rem_euclid(d) as u64,
            dim,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn vu(self) -> usize {
        self.value as usize
    }

    pub fn dim(self) -> PrimeDim {
        self.dim
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(self) -> Result<FieldElem, Error> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        // d is tiny, Fermat exponentiation is plenty.
        let d = self.dim.d;
        let mut acc: u64 = 1;
        let mut base = self.value % d;
        let mut e = d - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % d;
            }
            base = base * base % d;
            e >>= 1;
        }
        Ok(FieldElem {
            value: acc,
            dim: self.dim,
        })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! check_dims {
    ($a:expr, $b:expr) => {
        assert_eq!(
            $a.dim, $b.dim,
            "field elements over different dimensions ({} vs {})",
            $a.dim, $b.dim
        );
    };
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        check_dims!(self, rhs);
        FieldElem {
            value: (self.value + rhs.value) % self.dim.d,
            dim: self.dim,
        }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        check_dims!(self, rhs);
        FieldElem {
            value: (self.value + self.dim.d - rhs.value) % self.dim.d,
            dim: self.dim,
        }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        check_dims!(self, rhs);
        FieldElem {
            value: self.value * rhs.value % self.dim.d,
            dim: self.dim,
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            value: (self.dim.d - self.value) % self.dim.d,
            dim: self.dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_dim_validates() {
        assert_eq!(PrimeDim::new(3).unwrap().d(), 3);
        assert_eq!(PrimeDim::new(2), Err(Error::IsTwo));
        assert_eq!(PrimeDim::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeDim::new(1), Err(Error::TooSmall(1)));
        assert_eq!(
            PrimeDim::new(103),
            Err(Error::TooLarge { d: 103, max: 101 })
        );
        assert_eq!(PrimeDim::with_max(103, 200).unwrap().d(), 103);
    }

    #[test]
    fn arithmetic_examples() {
        let d3 = PrimeDim::new(3).unwrap();
        assert_eq!((d3.elem(2) + d3.elem(2)).value(), 1);
        let d7 = PrimeDim::new(7).unwrap();
        assert_eq!((d7.elem(3) * d7.elem(5)).value(), 1);
        let d5 = PrimeDim::new(5).unwrap();
        assert_eq!((-d5.elem(2)).value(), 3);
        assert_eq!(d5.elem(-2).value(), 3);
    }

    #[test]
    fn inverses() {
        let d7 = PrimeDim::new(7).unwrap();
        assert_eq!(d7.elem(2).inv().unwrap().value(), 4);
        let d3 = PrimeDim::new(3).unwrap();
        assert_eq!(d3.elem(2).inv().unwrap().value(), 2);
        let d5 = PrimeDim::new(5).unwrap();
        assert_eq!(d5.elem(1).inv().unwrap().value(), 1);
        assert_eq!(d5.elem(0).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn half_is_inverse_of_two() {
        for d in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let dim = PrimeDim::new(d).unwrap();
            let h = dim.half();
            assert_eq!((h + h).value(), 1, "2*half != 1 for d={d}");
            assert_eq!(h, dim.elem(2).inv().unwrap());
        }
        assert_eq!(PrimeDim::new(7).unwrap().half().value(), 4);
        assert_eq!(PrimeDim::new(3).unwrap().half().value(), 2);
        assert_eq!(PrimeDim::new(5).unwrap().half().value(), 3);
    }

    #[test]
    fn inverse_exhaustive() {
        for d in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let dim = PrimeDim::new(d).unwrap();
            for a in dim.elems().skip(1) {
                assert_eq!((a * a.inv().unwrap()).value(), 1);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for d in [3u64, 5, 7, 11, 13] {
            let dim = PrimeDim::new(d).unwrap();
            for a in dim.elems() {
                for b in dim.elems() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(a - b, -(b - a));
                    for c in dim.elems() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "different dimensions")]
    fn dim_mismatch_panics() {
        let a = PrimeDim::new(3).unwrap().elem(1);
        let b = PrimeDim::new(5).unwrap().elem(1);
        let _ = a + b;
    }
}
