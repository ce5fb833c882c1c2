//! Exact scalar arithmetic in the field Q(√2, √3, √5), plus integer
//! combinatorics helpers.
//!
//! Every structure constant of the builtin spaces lives in this field, so all
//! bracket-level identities can be checked with zero tolerance.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Number of basis elements of Q(√2,√3,√5) over Q.
pub const RADICAL_DIM: usize = 8;

/// Basis radicands in serialization order: {1, √2, √3, √5, √6, √10, √15, √30}.
pub const RADICANDS: [u32; RADICAL_DIM] = [1, 2, 3, 5, 6, 10, 15, 30];

/// Square-free masks over the primes (2,3,5) for each basis index
/// (bit 0 ↔ 2, bit 1 ↔ 3, bit 2 ↔ 5).
const MASK_OF_INDEX: [usize; RADICAL_DIM] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// Inverse lookup: basis index of each mask.
const INDEX_OF_MASK: [usize; RADICAL_DIM] = [0, 1, 2, 4, 3, 5, 6, 7];

/// Primes attached to the mask bits.
const MASK_PRIMES: [i64; 3] = [2, 3, 5];

fn f64_sqrt_radicands() -> [f64; RADICAL_DIM] {
    let mut out = [0.0; RADICAL_DIM];
    for (i, r) in RADICANDS.iter().enumerate() {
        out[i] = (*r as f64).sqrt();
    }
    out
}

/// An element of Q(√2,√3,√5): eight rational coordinates on the basis
/// {1, √2, √3, √5, √6, √10, √15, √30}.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Radical {
    coeffs: [Rational; RADICAL_DIM],
}

impl Radical {
    /// The zero element.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The multiplicative identity.
    pub fn one() -> Self {
        Self::rational(1, 1)
    }

    /// The rational `num/den` as an element of the field.
    ///
    /// Panics if `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        let mut out = Self::default();
        out.coeffs[0] = Rational::new(BigInt::from(num), BigInt::from(den));
        out
    }

    /// `num/den · √radicand`, where `radicand` must be one of
    /// {1, 2, 3, 5, 6, 10, 15, 30}.
    ///
    /// Panics on an unsupported radicand or `den == 0`.
    pub fn surd(num: i64, den: i64, radicand: u32) -> Self {
        let idx = RADICANDS
            .iter()
            .position(|r| *r == radicand)
            .unwrap_or_else(|| panic!("radicand {radicand} is not in the field basis"));
        let mut out = Self::default();
        out.coeffs[idx] = Rational::new(BigInt::from(num), BigInt::from(den));
        out
    }

    /// Builds an element from its eight rational coordinates
    /// (basis order {1, √2, √3, √5, √6, √10, √15, √30}).
    pub fn from_coeffs(coeffs: [Rational; RADICAL_DIM]) -> Self {
        Self { coeffs }
    }

    /// From a plain rational.
    pub fn from_rational(q: Rational) -> Self {
        let mut out = Self::default();
        out.coeffs[0] = q;
        out
    }

    /// Coordinate on the `i`-th basis element.
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// The rational part (coordinate on the basis element 1).
    pub fn rational_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// True iff the element is rational (all radical coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Double-precision evaluation.
    pub fn to_f64(&self) -> f64 {
        let sqrts = f64_sqrt_radicands();
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += rational_to_f64(c) * sqrts[i];
            }
        }
        acc
    }

    /// Exact multiplicative inverse; `None` for zero.
    ///
    /// Solves the 8×8 rational linear system M·y = e₁ where M is the matrix
    /// of multiplication by `self` on the field basis.
    pub fn inverse(&self) -> Option<Radical> {
        if self.is_zero() {
            return None;
        }
        // Column j of M: coordinates of self · basis_j.
        let mut m = vec![vec![Rational::zero(); RADICAL_DIM + 1]; RADICAL_DIM];
        for j in 0..RADICAL_DIM {
            let mut basis_j = Radical::default();
            basis_j.coeffs[j] = Rational::one();
            let col = self.clone() * basis_j;
            for i in 0..RADICAL_DIM {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m[0][RADICAL_DIM] = Rational::one();

        // Gaussian elimination with exact pivoting.
        for col in 0..RADICAL_DIM {
            let pivot_row = (col..RADICAL_DIM).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot_row);
            let pivot = m[col][col].clone();
            for x in m[col][col..].iter_mut() {
                *x /= pivot.clone();
            }
            for row in 0..RADICAL_DIM {
                if row != col && !m[row][col].is_zero() {
                    let factor = m[row][col].clone();
                    for c in col..=RADICAL_DIM {
                        let delta = &factor * &m[col][c];
                        m[row][c] -= delta;
                    }
                }
            }
        }
        let mut out = Radical::default();
        for i in 0..RADICAL_DIM {
            out.coeffs[i] = m[i][RADICAL_DIM].clone();
        }
        Some(out)
    }

    /// Serializes the coordinates as eight `"num/den"` strings
    /// (the algebra-spec file format).
    pub fn to_coeff_strings(&self) -> [String; RADICAL_DIM] {
        std::array::from_fn(|i| {
            let c = &self.coeffs[i];
            if c.denom().is_one() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            }
        })
    }

    /// Parses eight `"num/den"` (or `"num"`) strings into an element.
    pub fn from_coeff_strings(strings: &[String]) -> std::result::Result<Self, String> {
        if strings.len() != RADICAL_DIM {
            return Err(format!(
                "coefficient array must have {RADICAL_DIM} entries, got {}",
                strings.len()
            ));
        }
        let mut out = Self::default();
        for (i, s) in strings.iter().enumerate() {
            let q = Rational::from_str(s.trim())
                .map_err(|e| format!("bad rational `{s}` at index {i}: {e}"))?;
            out.coeffs[i] = q;
        }
        Ok(out)
    }
}

/// Converts a big rational to f64.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Add for Radical {
    type Output = Radical;
    fn add(mut self, rhs: Radical) -> Radical {
        self += rhs;
        self
    }
}

impl AddAssign for Radical {
    fn add_assign(&mut self, rhs: Radical) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(mut self, rhs: Radical) -> Radical {
        self -= rhs;
        self
    }
}

impl SubAssign for Radical {
    fn sub_assign(&mut self, rhs: Radical) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(mut self) -> Radical {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        (&self).mul(&rhs)
    }
}

impl Mul for &Radical {
    type Output = Radical;
    fn mul(self, rhs: &Radical) -> Radical {
        let mut out = Radical::default();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (mi, mj) = (MASK_OF_INDEX[i], MASK_OF_INDEX[j]);
                // √r_i · √r_j = (product of shared primes) · √(r_i⊕r_j):
                // shared prime factors come out squared.
                let mut factor: i64 = 1;
                let shared = mi & mj;
                for (bit, p) in MASK_PRIMES.iter().enumerate() {
                    if shared & (1 << bit) != 0 {
                        factor *= p;
                    }
                }
                let k = INDEX_OF_MASK[mi ^ mj];
                let mut term = a * b;
                if factor != 1 {
                    term *= Rational::from_integer(BigInt::from(factor));
                }
                out.coeffs[k] += term;
            }
        }
        out
    }
}

impl MulAssign for Radical {
    fn mul_assign(&mut self, rhs: Radical) {
        *self = (&*self).mul(&rhs);
    }
}

impl Div for Radical {
    type Output = Radical;
    fn div(self, rhs: Radical) -> Radical {
        let inv = rhs
            .inverse()
            .expect("division by zero in Q(\u{221a}2,\u{221a}3,\u{221a}5)");
        (&self).mul(&inv)
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Radical::zero()
    }
    fn is_zero(&self) -> bool {
        Radical::is_zero(self)
    }
}

impl One for Radical {
    fn one() -> Self {
        Radical::one()
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mag_str = if mag.denom().is_one() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            let term = if i == 0 {
                mag_str
            } else if mag.is_one() {
                format!("sqrt({})", RADICANDS[i])
            } else if mag.denom().is_one() {
                format!("{}*sqrt({})", mag_str, RADICANDS[i])
            } else {
                format!("({})*sqrt({})", mag_str, RADICANDS[i])
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// Scalar ring shared by the exact and floating-point evaluation modes.
///
/// `f64` gives the numeric mode; [`Radical`] gives zero-tolerance exact mode.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    /// Whether arithmetic in this ring is exact (identities may be asserted
    /// with zero tolerance).
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_radical(r: &Radical) -> Self;
    fn to_f64_approx(&self) -> f64;
}

impl Ring for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_radical(r: &Radical) -> Self {
        r.to_f64()
    }
    fn to_f64_approx(&self) -> f64 {
        *self
    }
}

impl Ring for Radical {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Radical::rational(num, den)
    }
    fn from_radical(r: &Radical) -> Self {
        r.clone()
    }
    fn to_f64_approx(&self) -> f64 {
        self.to_f64()
    }
}

/// Binomial coefficient C(n, k) as a big integer; 0 when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Binomial coefficient as i64 for small arguments (panics on overflow).
pub fn binomial_i64(n: u64, k: i64) -> i64 {
    binomial(n, k)
        .to_i64()
        .expect("binomial coefficient exceeds i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sqrt(r: u32) -> Radical {
        Radical::surd(1, 1, r)
    }

    #[test]
    fn basis_products_close() {
        // √2·√3 = √6
        assert_eq!(sqrt(2) * sqrt(3), sqrt(6));
        // √6·√10 = 2√15
        assert_eq!(sqrt(6) * sqrt(10), Radical::surd(2, 1, 15));
        // √15·√30 = 15√2
        assert_eq!(sqrt(15) * sqrt(30), Radical::surd(15, 1, 2));
        // (1+√2)(1−√2) = −1
        let a = Radical::one() + sqrt(2);
        let b = Radical::one() - sqrt(2);
        assert_eq!(a * b, Radical::rational(-1, 1));
    }

    #[test]
    fn to_f64_matches_analytic_values() {
        let ulp = |x: f64| x.abs() * f64::EPSILON;
        assert_eq!(Radical::one().to_f64(), 1.0);
        assert!((sqrt(15).to_f64() - 15.0_f64.sqrt()).abs() <= 4.0 * ulp(15.0_f64.sqrt()));
        assert_eq!(Radical::rational(-3, 2).to_f64(), -1.5);
        // √(3/2) = √6/2 and √(5/2) = √10/2
        assert!((Radical::surd(1, 2, 6).to_f64() - 1.5_f64.sqrt()).abs() <= 4.0 * ulp(1.5_f64.sqrt()));
        assert!((Radical::surd(1, 2, 10).to_f64() - 2.5_f64.sqrt()).abs() <= 4.0 * ulp(2.5_f64.sqrt()));
    }

    #[test]
    fn inverse_is_exact() {
        let x = Radical::rational(3, 2) + Radical::surd(-1, 2, 6) + Radical::surd(5, 7, 30);
        let inv = x.inverse().expect("nonzero");
        assert_eq!(x * inv, Radical::one());
        assert!(Radical::zero().inverse().is_none());
        // Division hits the same path.
        let y = Radical::surd(2, 3, 10);
        assert_eq!(y.clone() / y, Radical::one());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(8, 4), BigInt::from(70));
        // C(2k+2, i) = C(2k,i) + 2C(2k,i−1) + C(2k,i−2) at k=3, i=4:
        assert_eq!(
            binomial(8, 4),
            binomial(6, 4) + 2 * binomial(6, 3) + binomial(6, 2)
        );
        assert_eq!(binomial(17, 0), BigInt::from(1));
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
    }

    #[test]
    fn coeff_string_round_trip() {
        let x = Radical::rational(-7, 3) + Radical::surd(2, 5, 15);
        let s = x.to_coeff_strings();
        let y = Radical::from_coeff_strings(&s.to_vec().iter().cloned().collect::<Vec<_>>()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display_renders_signed_terms() {
        let x = Radical::rational(3, 2) - Radical::surd(1, 2, 6);
        assert_eq!(x.to_string(), "3/2 - (1/2)*sqrt(6)");
        assert_eq!(Radical::zero().to_string(), "0");
        assert_eq!((-sqrt(15)).to_string(), "-sqrt(15)");
    }

    prop_compose! {
        fn arb_radical()(nums in prop::array::uniform8(-100i64..=100),
                         dens in prop::array::uniform8(1i64..=10)) -> Radical {
            let mut coeffs: [Rational; RADICAL_DIM] = Default::default();
            for i in 0..RADICAL_DIM {
                coeffs[i] = Rational::new(BigInt::from(nums[i]), BigInt::from(dens[i]));
            }
            Radical::from_coeffs(coeffs)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms_hold_exactly(a in arb_radical(), b in arb_radical(), c in arb_radical()) {
            // Associativity of multiplication.
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            // Distributivity.
            prop_assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c.clone()
            );
            // Commutativity.
            prop_assert_eq!(a.clone() * b.clone(), b * a);
        }

        #[test]
        fn to_f64_is_ring_homomorphism(a in arb_radical(), b in arb_radical()) {
            let prod = a.clone() * b.clone();
            let lhs = prod.to_f64();
            let rhs = a.to_f64() * b.to_f64();
            // Scale by the term-magnitude sum of the product, which bounds the
            // rounding noise of the float evaluation even under cancellation.
            let scale = (0..RADICAL_DIM)
                .map(|i| rational_to_f64(&prod.coeff(i).abs()) * (RADICANDS[i] as f64).sqrt())
                .sum::<f64>()
                .max(a.to_f64().abs() * b.to_f64().abs())
                .max(1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale,
                "lhs={lhs}, rhs={rhs}, scale={scale}");
        }
    }
}
