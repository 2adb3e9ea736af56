use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Error;

/// Dense integer polynomial, coefficients stored lowest degree first.
/// Invariant: the highest-index coefficient is nonzero unless the polynomial
/// is zero (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// Coefficient-wise gcd; zero polynomial has content 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Reverse the coefficient list: x^n p(1/x) for n = deg p.
    /// Requires a nonzero constant term to be degree-preserving.
    pub fn reversed(&self) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::new(coeffs)
    }

    /// p(c*x) with rational c, cleared to an integer polynomial by scaling
    /// through the lcm of denominators. Only the root set matters to callers.
    pub fn scale_arg(&self, c: &BigRational) -> IntPoly {
        let mut num = BigRational::one();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(BigRational::from_integer(a.clone()) * &num);
            num *= c;
        }
        clear_denominators(&out)
    }

    /// Exact division by a monic divisor; panics if the division is inexact.
    /// Used only where exactness is an established invariant.
    pub fn div_exact_monic(&self, d: &IntPoly) -> IntPoly {
        assert!(d.is_monic(), "divisor must be monic");
        let (q, r) = self.divrem_monic(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Division with remainder by a monic divisor, entirely over Z.
    pub fn divrem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone();
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = &rem[idx] - &q * dc;
            }
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }
}

/// Clears a rational coefficient vector to a primitive integer polynomial
/// with the same roots and the sign of the leading coefficient preserved.
pub(crate) fn clear_denominators(coeffs: &[BigRational]) -> IntPoly {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let p = IntPoly::new(ints);
    let g = p.content();
    if g.is_zero() || g.is_one() {
        return p;
    }
    IntPoly::new(p.coeffs.iter().map(|c| c / &g).collect())
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::new(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        IntPoly::new(out)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Textual form is the comma-separated coefficient list, lowest degree first,
/// so "210,1,0,1" is 210 + x + x^3. The zero polynomial prints as "0".
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{}]", self)
    }
}

impl FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let t = part.trim();
            let c = t
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))?;
            coeffs.push(c);
        }
        Ok(IntPoly::new(coeffs))
    }
}

pub(crate) fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v.clone()) {
        Ok(small) => s.serialize_i64(small),
        Err(_) => s.collect_str(v),
    }
}

impl Serialize for IntPoly {
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

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Small(i64),
            Big(String),
        }
        let raw = Vec::<Coeff>::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for c in raw {
            coeffs.push(match c {
                Coeff::Small(v) => BigInt::from(v),
                Coeff::Big(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| serde::de::Error::custom(format!("bad coefficient: {e}")))?,
            });
        }
        Ok(IntPoly::new(coeffs))
    }
}

/// Squarefree decomposition of a monic integer polynomial via Yun's
/// algorithm over Q. Returns pairs (h_j, m_j) with f = prod h_j^{m_j},
/// each h_j monic squarefree, pairwise coprime. Monic factors of a monic
/// integer polynomial are integral, so the outputs stay in Z[x].
pub fn squarefree_decomp(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>, Error> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let f_q = QPoly::from_int(f);
    let df = QPoly::from_int(&f.derivative());
    let a0 = f_q.gcd(&df);
    let mut b = f_q.div(&a0);
    let mut c = df.div(&a0);
    let mut out = Vec::new();
    let mut m = 1u32;
    loop {
        let d = &c - &b.derivative();
        if d.is_zero() {
            if b.degree() > 0 {
                out.push((b.to_monic_int(), m));
            }
            break;
        }
        let h = b.gcd(&d);
        if h.degree() > 0 {
            out.push((h.to_monic_int(), m));
        }
        b = b.div(&h);
        c = d.div(&h);
        m += 1;
        if b.degree() == 0 {
            break;
        }
    }
    Ok(out)
}

/// Monic rational polynomial arithmetic used internally by the squarefree
/// decomposition and the Sturm chain. Not exported: callers see IntPoly.
#[derive(Clone)]
pub(crate) struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        QPoly {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree with the convention deg 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly { coeffs: vec![] };
        }
        QPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree();
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly { coeffs: vec![] }, self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        let mut i = rem.len();
        while i > dd {
            i -= 1;
            let q = &rem[i] * &lead_inv;
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let t = &q * dc;
                rem[idx] = &rem[idx] - &t;
            }
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn div(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact rational polynomial division");
        q
    }

    /// Monic gcd; gcd with zero is the monic normalization of the other side.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        QPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    /// Negates, then clears to a primitive integer polynomial by a positive
    /// rational factor; the sign pattern of the negation survives.
    pub fn neg_cleared(&self) -> IntPoly {
        let negated: Vec<BigRational> = self.coeffs.iter().map(|c| -c).collect();
        clear_denominators(&negated)
    }

    /// Converts a monic rational polynomial known to be integral.
    pub fn to_monic_int(&self) -> IntPoly {
        let p = self.monic();
        IntPoly::new(
            p.coeffs
                .iter()
                .map(|c| {
                    assert!(c.denom().is_one(), "monic factor not integral");
                    c.numer().clone()
                })
                .collect(),
        )
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = rhs.coeffs.get(i).unwrap_or(&zero);
            out.push(a - b);
        }
        QPoly::new(out)
    }
}
