use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::QPoly;
use super::{Error, IntPoly};

/// Endpoint of a root-counting interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl Bound {
    pub fn from_i64(v: i64) -> Self {
        Bound::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Bound::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

/// Sturm chain of a squarefree polynomial. First element is the input,
/// second its derivative, then negated remainders, each cleared to a
/// primitive integer polynomial by a positive rational (signs preserved).
#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    pub fn build(p: &IntPoly) -> Result<Self, Error> {
        if p.is_zero() {
            return Err(Error::NonSquarefreeInput);
        }
        let d = p.derivative();
        if !d.is_zero() {
            let g = QPoly::from_int(p).gcd(&QPoly::from_int(&d));
            if g.degree() > 0 {
                return Err(Error::NonSquarefreeInput);
            }
        }
        let mut polys = vec![p.clone()];
        if d.is_zero() {
            return Ok(SturmChain { polys });
        }
        polys.push(d);
        loop {
            let prev = QPoly::from_int(&polys[polys.len() - 2]);
            let last = QPoly::from_int(&polys[polys.len() - 1]);
            let (_, rem) = prev.divrem(&last);
            if rem.is_zero() {
                break;
            }
            polys.push(rem.neg_cleared());
        }
        Ok(SturmChain { polys })
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    /// Sign variations at a point, zeros skipped.
    fn variations(&self, at: &Bound) -> usize {
        let mut count = 0;
        let mut last: Option<i8> = None;
        for f in &self.polys {
            let s = sign_at(f, at);
            if s == 0 {
                continue;
            }
            if let Some(p) = last {
                if p != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }
}

fn sign_at(f: &IntPoly, at: &Bound) -> i8 {
    match at {
        Bound::Finite(x) => {
            let v = f.eval_rational(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
        Bound::PosInf => {
            let l = f.leading();
            if l.is_zero() {
                0
            } else if l.is_positive() {
                1
            } else {
                -1
            }
        }
        Bound::NegInf => {
            let l = f.leading();
            if l.is_zero() {
                return 0;
            }
            let deg = f.degree().unwrap_or(0);
            let base: i8 = if l.is_positive() { 1 } else { -1 };
            if deg % 2 == 0 {
                base
            } else {
                -base
            }
        }
    }
}

/// Number of distinct real roots of squarefree p in the half-open interval
/// (lo, hi]. Errors with NonSquarefreeInput when gcd(p, p') is nonconstant.
pub fn sturm_count(p: &IntPoly, lo: &Bound, hi: &Bound) -> Result<usize, Error> {
    let chain = SturmChain::build(p)?;
    let va = chain.variations(lo);
    let vb = chain.variations(hi);
    Ok(va.saturating_sub(vb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_pair_counted() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    }

    #[test]
    fn no_real_roots() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
    }

    #[test]
    fn quartic_two_real_roots() {
        let p = IntPoly::from_i64(&[-2, 0, 0, 0, 1]);
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
        // both lie in (-2, 2]
        assert_eq!(
            sturm_count(&p, &Bound::from_i64(-2), &Bound::from_i64(2)).unwrap(),
            2
        );
        // one in (0, 2]
        assert_eq!(
            sturm_count(&p, &Bound::from_i64(0), &Bound::from_i64(2)).unwrap(),
            1
        );
    }

    #[test]
    fn half_open_endpoints() {
        // roots 2 and 3; (2, 3] contains only 3, (1, 2] only 2
        let p = IntPoly::from_i64(&[6, -5, 1]);
        assert_eq!(
            sturm_count(&p, &Bound::from_i64(2), &Bound::from_i64(3)).unwrap(),
            1
        );
        assert_eq!(
            sturm_count(&p, &Bound::from_i64(1), &Bound::from_i64(2)).unwrap(),
            1
        );
        assert_eq!(
            sturm_count(&p, &Bound::from_i64(3), &Bound::from_i64(5)).unwrap(),
            0
        );
    }

    #[test]
    fn rejects_repeated_roots() {
        let p = IntPoly::from_i64(&[9, -6, 1]); // (x-3)^2
        assert!(matches!(
            sturm_count(&p, &Bound::NegInf, &Bound::PosInf),
            Err(Error::NonSquarefreeInput)
        ));
    }

    #[test]
    fn rational_bounds() {
        // roots of 2x^2 - 1... not monic; use x^2 - 2 on (1/2, 3/2] -> sqrt2 ~ 1.414
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(
            sturm_count(&p, &Bound::from_ratio(1, 2), &Bound::from_ratio(3, 2)).unwrap(),
            1
        );
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let p = IntPoly::from_i64(&[5]);
        assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
    }
}
