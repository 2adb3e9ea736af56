use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::poly::serialize_bigint;
use super::{Error, IntPoly};

/// Default working precision for series arithmetic. Every example in scope
/// resolves well below this depth.
pub const DEFAULT_PRECISION: usize = 64;

/// A power series window: exactly `precision` coefficients, over Z when
/// `modulus` is 0 and over Z/nZ when `modulus` is n > 0.
/// Invariant: positive modulus forces every coefficient into [0, n).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    modulus: u64,
    precision: usize,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(modulus: u64, precision: usize, mut coeffs: Vec<BigInt>) -> Self {
        assert!(precision > 0, "precision must be positive");
        coeffs.resize(precision, BigInt::zero());
        if modulus > 0 {
            let n = BigInt::from(modulus);
            for c in coeffs.iter_mut() {
                *c = c.mod_floor(&n);
            }
        }
        TruncatedSeries {
            modulus,
            precision,
            coeffs,
        }
    }

    pub fn from_i64(modulus: u64, precision: usize, coeffs: &[i64]) -> Self {
        Self::new(
            modulus,
            precision,
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn from_poly(p: &IntPoly, modulus: u64, precision: usize) -> Self {
        Self::new(modulus, precision, p.coeffs().to_vec())
    }

    pub fn one(modulus: u64, precision: usize) -> Self {
        Self::new(modulus, precision, vec![BigInt::one()])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The polynomial holding the window's coefficients verbatim.
    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    /// Re-truncates to a smaller precision.
    pub fn truncated(&self, precision: usize) -> Self {
        assert!(precision <= self.precision);
        TruncatedSeries {
            modulus: self.modulus,
            precision,
            coeffs: self.coeffs[..precision].to_vec(),
        }
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        struct B<'a>(&'a BigInt);
        impl Serialize for B<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        for c in &self.coeffs {
            seq.serialize_element(&B(c))?;
        }
        seq.end()
    }
}

/// Cauchy product truncated at the smaller precision of the operands.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch {
            left: a.modulus,
            right: b.modulus,
        });
    }
    let prec = a.precision.min(b.precision);
    let mut out = vec![BigInt::zero(); prec];
    for i in 0..prec.min(a.coeffs.len()) {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..(prec - i).min(b.coeffs.len()) {
            out[i + j] += &a.coeffs[i] * &b.coeffs[j];
        }
    }
    Ok(TruncatedSeries::new(a.modulus, prec, out))
}

/// Multiplicative inverse via the recurrence
/// b_k = b_0 (−a_1 b_{k−1} − ... − a_k b_0), valid exactly when the
/// constant term is a unit of the base ring (±1 over Z, invertible mod n).
pub fn series_invert(a: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
    let a0 = a.constant_term();
    let b0 = if a.modulus == 0 {
        if a0.abs().is_one() {
            a0.clone()
        } else {
            return Err(Error::NotAUnit { constant: a0 });
        }
    } else {
        let n = BigInt::from(a.modulus);
        let e = a0.extended_gcd(&n);
        if !e.gcd.is_one() {
            return Err(Error::NotAUnit { constant: a0 });
        }
        e.x.mod_floor(&n)
    };
    let mut b = vec![BigInt::zero(); a.precision];
    b[0] = b0.clone();
    for k in 1..a.precision {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s -= a.coeff(i) * &b[k - i];
        }
        let mut c = &b0 * s;
        if a.modulus > 0 {
            c = c.mod_floor(&BigInt::from(a.modulus));
        }
        b[k] = c;
    }
    Ok(TruncatedSeries::new(a.modulus, a.precision, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_normalized_on_entry() {
        let s = TruncatedSeries::from_i64(5, 4, &[-1, 7, 5, 3]);
        assert_eq!(
            s.coeffs(),
            &[
                BigInt::from(4),
                BigInt::from(2),
                BigInt::from(0),
                BigInt::from(3)
            ]
        );
    }

    #[test]
    fn mul_examples() {
        // (1+x)(1-x) = 1 - x^2 over Z
        let a = TruncatedSeries::from_i64(0, 8, &[1, 1]);
        let b = TruncatedSeries::from_i64(0, 8, &[1, -1]);
        let p = series_mul(&a, &b).unwrap();
        assert_eq!(p, TruncatedSeries::from_i64(0, 8, &[1, 0, -1]));
        // (2+x)^2 = 4 + 4x + x^2
        let c = TruncatedSeries::from_i64(0, 8, &[2, 1]);
        let sq = series_mul(&c, &c).unwrap();
        assert_eq!(sq, TruncatedSeries::from_i64(0, 8, &[4, 4, 1]));
    }

    #[test]
    fn mul_takes_min_precision_and_checks_modulus() {
        let a = TruncatedSeries::from_i64(0, 8, &[1, 1]);
        let b = TruncatedSeries::from_i64(0, 3, &[1, 1]);
        assert_eq!(series_mul(&a, &b).unwrap().precision(), 3);
        let c = TruncatedSeries::from_i64(4, 8, &[1, 1]);
        assert!(matches!(
            series_mul(&a, &c),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn invert_geometric() {
        let a = TruncatedSeries::from_i64(0, 6, &[1, 1]);
        let inv = series_invert(&a).unwrap();
        assert_eq!(inv, TruncatedSeries::from_i64(0, 6, &[1, -1, 1, -1, 1, -1]));
    }

    #[test]
    fn invert_mod_8_frozen() {
        // frozen oracle: (3+x)^{-1} mod 8 = 3,7,3,7,...
        let a = TruncatedSeries::from_i64(8, 8, &[3, 1]);
        let inv = series_invert(&a).unwrap();
        assert_eq!(
            inv,
            TruncatedSeries::from_i64(8, 8, &[3, 7, 3, 7, 3, 7, 3, 7])
        );
        assert!(series_mul(&a, &inv).unwrap().is_one());
    }

    #[test]
    fn invert_rejects_non_units() {
        let a = TruncatedSeries::from_i64(0, 4, &[2, 1]);
        assert!(matches!(series_invert(&a), Err(Error::NotAUnit { .. })));
        let b = TruncatedSeries::from_i64(8, 4, &[2, 1]);
        assert!(matches!(series_invert(&b), Err(Error::NotAUnit { .. })));
    }
}
