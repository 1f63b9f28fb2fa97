//! Exact truncated formal power series over the rationals, enough to state
//! the Catalan generating-function identities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Count, Error, Result};

/// Coefficients for `x^0 ..= x^order`. Arithmetic truncates to the smaller
/// order of the two operands and never silently extends it.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({})", self)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            match i {
                0 => parts.push(c),
                1 => parts.push(format!("{c} x")),
                _ => parts.push(format!("{c} x^{i}")),
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("series needs at least the constant term".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The identity series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// `1/(1-x) = 1 + x + x^2 + ...`
    pub fn geometric(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::one(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient as a nonnegative integer, erroring on fractions/negatives.
    pub fn coeff_count(&self, i: usize) -> Result<Count> {
        let c = &self.coeffs[i];
        if !c.is_integer() || c.is_negative() {
            return Err(Error::NonIntegralCoefficient(c.to_string()));
        }
        c.numer()
            .to_biguint()
            .ok_or_else(|| Error::NonIntegralCoefficient(c.to_string()))
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 0..=order.min(self.order()) {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i).min(other.order()) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `g` into `self` by Horner evaluation; `g` must have zero
    /// constant term for the truncation to be well defined.
    pub fn compose(&self, g: &TruncatedSeries) -> Result<TruncatedSeries> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(g.order());
        let mut acc = TruncatedSeries::zero(order);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

/// `C(x) = sum_m C_m x^m` via the functional equation `C = 1 + x C^2`,
/// i.e. the convolution recurrence for the Catalan numbers.
pub fn catalan_series(order: usize) -> TruncatedSeries {
    let mut c: Vec<BigRational> = Vec::with_capacity(order + 1);
    c.push(BigRational::one());
    for m in 1..=order {
        let mut sum = BigRational::zero();
        for i in 0..m {
            sum += &c[i] * &c[m - 1 - i];
        }
        c.push(sum);
    }
    TruncatedSeries { coeffs: c }
}

/// `(x C(x))^h * C(x C(x))` truncated to `order`.
pub fn thm1_gf(h: u32, order: usize) -> Result<TruncatedSeries> {
    let c = catalan_series(order);
    let xc = TruncatedSeries::x(order).mul(&c);
    Ok(xc.pow(h).mul(&c.compose(&xc)?))
}

/// Verify `sum_{j>=0} binom(l+j, l) z^j == 1/(1-z)^{l+1}` coefficientwise
/// up to `order`.
pub fn binomial_identity_check(l: u32, order: usize) -> bool {
    let rhs = TruncatedSeries::geometric(order).pow(l + 1);
    (0..=order).all(|j| {
        let lhs = binom_rat(l as u64 + j as u64, l as u64);
        lhs == *rhs.coeff(j)
    })
}

fn binom_rat(n: u64, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= rat(n - i);
        acc /= rat(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.numer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn catalan_coefficients() {
        let c = catalan_series(8);
        assert_eq!(ints(&c), vec![1, 1, 2, 5, 14, 42, 132, 429, 1430]);
    }

    #[test]
    fn catalan_functional_equation() {
        // C = 1 + x C^2
        let n = 12;
        let c = catalan_series(n);
        let rhs = TruncatedSeries::one(n).add(&TruncatedSeries::x(n).mul(&c.pow(2)));
        assert_eq!(c, rhs);
    }

    #[test]
    fn shift_and_pow() {
        let c = catalan_series(4);
        let xc = TruncatedSeries::x(4).mul(&c);
        assert_eq!(ints(&xc), vec![0, 1, 1, 2, 5]);
        assert_eq!(c.pow(0), TruncatedSeries::one(4));
        assert_eq!(c.pow(2), c.mul(&c));
    }

    #[test]
    fn compose_identity_and_catalan() {
        let n = 10;
        let c = catalan_series(n);
        assert_eq!(c.compose(&TruncatedSeries::x(n)).unwrap(), c);
        // C(x) = 1/(1 - x C(x))
        let xc = TruncatedSeries::x(n).mul(&c);
        let geo = TruncatedSeries::geometric(n);
        assert_eq!(geo.compose(&xc).unwrap(), c);
        assert!(c.compose(&c).is_err());
    }

    #[test]
    fn thm1_gf_low_coefficients() {
        for h in 0..=4u32 {
            let g = thm1_gf(h, 8).unwrap();
            for s in 0..h as usize {
                assert!(g.coeff(s).is_zero(), "h={h} s={s}");
            }
            assert!(g.coeff(h as usize).is_one(), "h={h}");
        }
    }

    #[test]
    fn binomial_identity() {
        for l in 0..=8u32 {
            assert!(binomial_identity_check(l, 32));
        }
        assert!(binomial_identity_check(0, 10));
        assert!(binomial_identity_check(3, 20));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in proptest::collection::vec(-9i64..=9, 7),
                       b in proptest::collection::vec(-9i64..=9, 7),
                       c in proptest::collection::vec(-9i64..=9, 7)) {
            let mk = |v: &Vec<i64>| TruncatedSeries::from_coeffs(
                v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
            ).unwrap();
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }
    }
}
