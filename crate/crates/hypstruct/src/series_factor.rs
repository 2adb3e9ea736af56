//! Factorization of monic integer polynomials inside the power series ring
//! Z[[x]], with a primality certificate attached to every reported factor.
//!
//! The pipeline: squarefree-decompose over Q, Hensel-split each part along
//! the prime factorization of its constant term, then push every resulting
//! series through a chain of primality criteria. Factors that no criterion
//! decides are reported as Undetermined, never guessed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exact_kernel::{
    clear_denominators, series_mul, squarefree_decomp, IntPoly, QPoly, TruncatedSeries,
};
use crate::Error;

/// Why a factor is known to be irreducible in Z[[x]], or that it is not known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Constant term is plus or minus a prime.
    PrimeConstant,
    /// Degree-one coefficient is coprime to the constant's prime.
    UnitXCoefficient,
    /// Single-slope Newton polygon with slope denominator equal to its length.
    NewtonIrreducible,
    /// Integer-slope twist reduces to a polynomial irreducible mod q.
    QIrreducibleLinearLike,
    Undetermined,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::PrimeConstant => "PrimeConstant",
            Certificate::UnitXCoefficient => "UnitXCoefficient",
            Certificate::NewtonIrreducible => "NewtonIrreducible",
            Certificate::QIrreducibleLinearLike => "QIrreducibleLinearLike",
            Certificate::Undetermined => "Undetermined",
        }
    }

    pub fn is_certified(self) -> bool {
        self != Certificate::Undetermined
    }
}

/// Outcome of the certificate chain on a single series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimalityVerdict {
    /// Irreducible, with the first criterion that fired. Never carries
    /// Certificate::Undetermined.
    Prime(Certificate),
    /// A nontrivial split: both parts are non-units and their product
    /// reproduces the input to working precision.
    Composite(Box<(TruncatedSeries, TruncatedSeries)>),
    Undetermined,
}

/// One segment of a Newton lower polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSegment {
    pub slope: BigRational,
    pub length: usize,
}

/// One factor of a report: a series with constant term q^e, its multiplicity
/// inherited from the squarefree decomposition, and its certificate.
#[derive(Debug, Clone)]
pub struct SeriesFactor {
    pub series: TruncatedSeries,
    pub constant_prime: BigInt,
    pub constant_exponent: u32,
    pub multiplicity: u32,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Certified,
    PartiallyCertified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "Certified",
            Status::PartiallyCertified => "PartiallyCertified",
        }
    }
}

/// Full factorization of a monic polynomial in Z[[x]].
///
/// Invariant: sign * prod factors[i].series ^ multiplicity == input to the
/// stated precision. When status is PartiallyCertified, `bracket` holds
/// certified lower and upper bounds on the true number of distinct primes.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub input: IntPoly,
    pub sign: i8,
    pub factors: Vec<SeriesFactor>,
    pub status: Status,
    pub precision: usize,
    pub bracket: Option<(usize, usize)>,
}

impl FactorizationReport {
    /// Multiplicity signature (n_1, ..., n_r) in report order; meaningful as
    /// the divisor-poset data only when status is Certified.
    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.multiplicity).collect()
    }
}

impl Serialize for SeriesFactor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SeriesFactor", 4)?;
        st.serialize_field("coeffs", &self.series)?;
        st.serialize_field(
            "constant",
            &format!("{}^{}", self.constant_prime, self.constant_exponent),
        )?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("certificate", self.certificate.as_str())?;
        st.end()
    }
}

impl Serialize for FactorizationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FactorizationReport", 4)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("factors", &self.factors)?;
        st.serialize_field("status", self.status.as_str())?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}

/// Units of Z[[x]] are exactly the series with constant term 1 or -1; units
/// of (Z/n)[[x]] are those whose constant is invertible mod n.
pub fn is_series_unit(f: &TruncatedSeries) -> bool {
    let c = f.constant_term();
    if f.modulus() == 0 {
        c.abs().is_one()
    } else {
        c.gcd(&BigInt::from(f.modulus())).is_one()
    }
}

/// Trial-division prime factorization of n >= 2, primes ascending.
fn prime_factorization(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_mod_floor(&d);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if m > BigInt::one() {
        out.push((m, 1));
    }
    out
}

fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let f = prime_factorization(n);
    f.len() == 1 && f[0].1 == 1
}

/// All positive divisors of n, ascending; None when there are more than the
/// cap (root extraction is then skipped rather than stalled).
fn divisors_sorted(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let mut divs = vec![BigInt::one()];
    for (q, e) in prime_factorization(n) {
        let old = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &q;
            for d in &old {
                divs.push(d * &power);
            }
            if divs.len() > cap {
                return None;
            }
        }
    }
    divs.sort();
    Some(divs)
}

/// Splits a monic polynomial with nonzero constant into its integer-root
/// linear factors and the rootless remainder, roots by ascending magnitude
/// with the positive sign first.
fn split_integer_roots(h: &IntPoly) -> Vec<IntPoly> {
    let mut pieces = Vec::new();
    let mut cur = h.clone();
    'outer: while cur.degree().unwrap_or(0) >= 1 {
        let divs = match divisors_sorted(&cur.constant_term().abs(), 4096) {
            Some(d) => d,
            None => break,
        };
        for d in &divs {
            for r in [d.clone(), -d] {
                if cur.eval(&r).is_zero() {
                    let lin = IntPoly::new(vec![-&r, BigInt::one()]);
                    let (quot, rem) = cur.divrem_monic(&lin);
                    assert!(rem.is_zero());
                    pieces.push(lin);
                    cur = quot;
                    continue 'outer;
                }
            }
        }
        break;
    }
    if cur.degree().unwrap_or(0) >= 1 {
        pieces.push(cur);
    }
    pieces
}

fn pow_big(q: &BigInt, e: u32) -> BigInt {
    let mut out = BigInt::one();
    for _ in 0..e {
        out *= q;
    }
    out
}

/// q-adic valuation of a nonzero integer.
fn val_q(a: &BigInt, q: &BigInt) -> u32 {
    let mut m = a.clone();
    let mut v = 0u32;
    loop {
        let (d, r) = m.div_mod_floor(q);
        if !r.is_zero() {
            return v;
        }
        m = d;
        v += 1;
    }
}

/// Hensel lift of the coprime constant split c = g0 * h0 through the
/// coefficients of the target series. At degree k the defining equation
/// g0*h_k + h0*g_k = r_k leaves g_k free mod g0; the canonical solution
/// takes g_k in [0, g0).
fn hensel_split(c: &[BigInt], g0: &BigInt, h0: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let egcd = g0.extended_gcd(h0);
    assert!(egcd.gcd.is_one(), "constant split must be coprime");
    let v = egcd.y;
    let n = c.len();
    let mut g = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    g.push(g0.clone());
    h.push(h0.clone());
    for k in 1..n {
        let mut r = c[k].clone();
        for i in 1..k {
            r -= &g[i] * &h[k - i];
        }
        let gk = (&v * &r).mod_floor(g0);
        let num = &r - h0 * &gk;
        let (hk, rem) = num.div_mod_floor(g0);
        assert!(rem.is_zero(), "hensel step must divide exactly");
        g.push(gk);
        h.push(hk);
    }
    (g, h)
}

/// Splits monic f into one series per distinct prime of |f(0)|, primes
/// ascending, each block carrying the full q-power of the constant. The
/// product of the outputs times sgn(f(0)) reproduces f to the precision.
pub fn constant_split(f: &IntPoly, precision: usize) -> Result<Vec<TruncatedSeries>, Error> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let c = f.constant_term();
    if c.is_zero() || c.abs().is_one() {
        return Err(Error::DegenerateConstant);
    }
    let negate = c.is_negative();
    let mut rest: Vec<BigInt> = (0..precision)
        .map(|i| if negate { -f.coeff(i) } else { f.coeff(i) })
        .collect();
    let primes = prime_factorization(&c.abs());
    let mut out = Vec::with_capacity(primes.len());
    for (idx, (q, e)) in primes.iter().enumerate() {
        if idx + 1 == primes.len() {
            out.push(TruncatedSeries::new(0, precision, rest));
            break;
        }
        let g0 = pow_big(q, *e);
        let h0 = &rest[0] / &g0;
        let (g, h) = hensel_split(&rest, &g0, &h0);
        out.push(TruncatedSeries::new(0, precision, g));
        rest = h;
    }
    Ok(out)
}

fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) as i128 * (p.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Lower Newton polygon of f with respect to the prime q: the lower convex
/// hull of the points (i, v_q(a_i)) over nonzero coefficients, returned as
/// segments of strictly increasing slope.
pub fn newton_polygon(f: &IntPoly, q: &BigInt) -> Result<Vec<NewtonSegment>, Error> {
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstant);
    }
    let points: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i as i64, val_q(a, q) as i64))
        .collect();
    let hull = lower_hull(&points);
    Ok(hull
        .windows(2)
        .map(|w| NewtonSegment {
            slope: BigRational::new(BigInt::from(w[1].1 - w[0].1), BigInt::from(w[1].0 - w[0].0)),
            length: (w[1].0 - w[0].0) as usize,
        })
        .collect())
}

// --- Polynomial arithmetic over F_q, only what the irreducibility test needs.

fn fq_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn fq_inv(a: &BigInt, q: &BigInt) -> BigInt {
    let e = a.extended_gcd(q);
    assert!(e.gcd.is_one(), "inverse of a zero divisor mod q");
    e.x.mod_floor(q)
}

/// Remainder of a modulo monic m, coefficients reduced mod q.
fn fq_rem(a: &[BigInt], m: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let lead_inv = fq_inv(&m[dm], q);
    let mut r: Vec<BigInt> = a.iter().map(|c| c.mod_floor(q)).collect();
    r = fq_trim(r);
    while r.len() > dm {
        let k = r.len() - 1;
        let f = (&r[k] * &lead_inv).mod_floor(q);
        for (j, mc) in m.iter().enumerate() {
            let idx = k - dm + j;
            r[idx] = (&r[idx] - &f * mc).mod_floor(q);
        }
        r = fq_trim(r);
    }
    r
}

fn fq_mulmod(a: &[BigInt], b: &[BigInt], m: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] = (&prod[i + j] + ai * bj).mod_floor(q);
        }
    }
    fq_rem(&prod, m, q)
}

fn fq_powmod(base: &[BigInt], exp: &BigInt, m: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let mut result = fq_rem(&[BigInt::one()], m, q);
    let mut b = base.to_vec();
    let mut e = exp.clone();
    while e.is_positive() {
        if e.is_odd() {
            result = fq_mulmod(&result, &b, m, q);
        }
        b = fq_mulmod(&b, &b, m, q);
        e /= 2;
    }
    result
}

fn fq_sub(a: &[BigInt], b: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    fq_trim(
        (0..n)
            .map(|i| {
                (a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).mod_floor(q)
            })
            .collect(),
    )
}

fn fq_gcd(a: &[BigInt], b: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let mut x = fq_trim(a.iter().map(|c| c.mod_floor(q)).collect());
    let mut y = fq_trim(b.iter().map(|c| c.mod_floor(q)).collect());
    while !y.is_empty() {
        let r = fq_rem(&x, &y, q);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a polynomial over F_q.
fn fq_irreducible(m: &[BigInt], q: &BigInt) -> bool {
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let y = vec![BigInt::zero(), BigInt::one()];
    // x^(q^n) == x mod m
    let qn = {
        let mut e = BigInt::one();
        for _ in 0..n {
            e *= q;
        }
        e
    };
    let frob = fq_powmod(&y, &qn, m, q);
    if frob != fq_rem(&y, m, q) {
        return false;
    }
    // for each prime r | n: gcd(x^(q^(n/r)) - x, m) must be constant
    let n_big = BigInt::from(n);
    for (r, _) in prime_factorization(&n_big) {
        let d = n / usize::try_from(r).unwrap();
        let mut qd = BigInt::one();
        for _ in 0..d {
            qd *= q;
        }
        let power = fq_powmod(&y, &qd, m, q);
        let diff = fq_sub(&power, &fq_rem(&y, m, q), q);
        let g = fq_gcd(&diff, m, q);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

// --- The certificate chain.

struct HullData {
    /// Weierstrass length: first index with coefficient coprime to q.
    wlen: usize,
    /// Hull of (i, v_q(a_i)) for i <= wlen is the single segment (0,e)-(wlen,0).
    single_segment: bool,
}

fn series_hull(coeffs: &[BigInt], q: &BigInt, e: u32) -> Option<HullData> {
    let wlen = coeffs
        .iter()
        .position(|a| !a.is_zero() && val_q(a, q) == 0)?;
    let points: Vec<(i64, i64)> = coeffs[..=wlen]
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i as i64, val_q(a, q) as i64))
        .collect();
    let hull = lower_hull(&points);
    let single_segment = hull == vec![(0, e as i64), (wlen as i64, 0)];
    Some(HullData {
        wlen,
        single_segment,
    })
}

/// Searches for an explicit nontrivial split of a series with polynomial
/// support: a repeated Q-factor with non-unit constant, or an integer root
/// of the form +-q^j. Infinite-tail series are left alone; a factorization
/// of a truncation would not witness anything about the series itself.
fn composite_search(
    coeffs: &[BigInt],
    q: &BigInt,
    e: u32,
    precision: usize,
) -> Option<(IntPoly, IntPoly)> {
    let support = coeffs.iter().rposition(|c| !c.is_zero())?;
    if support + 2 > precision || support == 0 {
        return None;
    }
    let p = IntPoly::new(coeffs[..=support].to_vec());
    // repeated factor over Q with non-unit constant
    let d = p.derivative();
    if !d.is_zero() {
        let g = QPoly::from_int(&p).gcd(&QPoly::from_int(&d));
        if g.degree() > 0 {
            let c = clear_denominators(&g.coeffs);
            let c0 = c.constant_term();
            if !c0.is_zero() && !c0.abs().is_one() {
                let w = QPoly::from_int(&p).div(&QPoly::from_int(&c));
                let w = clear_denominators(&w.coeffs);
                if !w.constant_term().abs().is_one() {
                    return Some((c, w));
                }
            }
        }
    }
    // integer roots +-q^j leaving a non-unit quotient
    for j in 1..e {
        let mag = pow_big(q, j);
        for root in [mag.clone(), -mag] {
            if p.eval(&root).is_zero() {
                let lin = IntPoly::new(vec![-&root, BigInt::one()]);
                let (quot, rem) = p.divrem_monic(&lin);
                assert!(rem.is_zero());
                return Some((lin, quot));
            }
        }
    }
    None
}

fn certificate_chain(
    f: &TruncatedSeries,
    q: &BigInt,
) -> Result<(PrimalityVerdict, Option<usize>), Error> {
    assert_eq!(f.modulus(), 0, "primality lives over Z");
    let c = f.constant_term();
    let bad = || Error::ConstantNotPrimePower {
        constant: f.constant_term(),
    };
    if c.is_zero() || !is_prime(q) {
        return Err(bad());
    }
    let e = val_q(&c.abs(), q);
    if e == 0 || c.abs() != pow_big(q, e) {
        return Err(bad());
    }
    if e == 1 {
        return Ok((PrimalityVerdict::Prime(Certificate::PrimeConstant), None));
    }
    let n = f.precision();
    if f.coeffs().iter().all(|a| a.mod_floor(q).is_zero()) {
        // divisible by the prime constant q itself
        let unit_part: Vec<BigInt> = f.coeffs().iter().map(|a| a / q).collect();
        let qs = TruncatedSeries::new(0, n, vec![q.clone()]);
        let rest = TruncatedSeries::new(0, n, unit_part);
        return Ok((PrimalityVerdict::Composite(Box::new((qs, rest))), None));
    }
    if f.coeff(1).gcd(q).is_one() {
        return Ok((PrimalityVerdict::Prime(Certificate::UnitXCoefficient), None));
    }
    let hull = series_hull(f.coeffs(), q, e).expect("content check guarantees a unit coefficient");
    let wlen = hull.wlen;
    if hull.single_segment {
        let l = wlen as u32;
        if e.gcd(&l) == 1 {
            return Ok((
                PrimalityVerdict::Prime(Certificate::NewtonIrreducible),
                Some(wlen),
            ));
        }
        if e % l == 0 {
            // twist x -> q^s y and divide by q^e; on the single segment this
            // yields a unit-constant polynomial whose mod-q irreducibility
            // certifies the Weierstrass part
            let s = e / l;
            let twisted: Vec<BigInt> = (0..=wlen)
                .map(|i| {
                    let a = f.coeff(i);
                    if a.is_zero() {
                        return BigInt::zero();
                    }
                    let expected = e as i64 - (s as i64) * i as i64;
                    if (val_q(&a, q) as i64) != expected {
                        return BigInt::zero();
                    }
                    (a / pow_big(q, expected as u32)).mod_floor(q)
                })
                .collect();
            if fq_irreducible(&fq_trim(twisted), q) {
                return Ok((
                    PrimalityVerdict::Prime(Certificate::QIrreducibleLinearLike),
                    Some(wlen),
                ));
            }
        }
    }
    if let Some((a, b)) = composite_search(f.coeffs(), q, e, n) {
        return Ok((
            PrimalityVerdict::Composite(Box::new((
                TruncatedSeries::from_poly(&a, 0, n),
                TruncatedSeries::from_poly(&b, 0, n),
            ))),
            Some(wlen),
        ));
    }
    Ok((PrimalityVerdict::Undetermined, Some(wlen)))
}

/// Decides primality of a series over Z whose constant term is plus or minus
/// a prime power q^e, by the first criterion that applies.
pub fn primality_certificate(
    f: &TruncatedSeries,
    q: &BigInt,
) -> Result<PrimalityVerdict, Error> {
    certificate_chain(f, q).map(|(v, _)| v)
}

// --- Signature assembly.

struct Row {
    series: TruncatedSeries,
    exponent: u32,
    certificate: Certificate,
    /// Upper bound on the number of distinct primes inside this row.
    split_bound: usize,
}

/// Pushes a positive-constant series through the chain, subdividing on every
/// explicit composite witness. Terminates because the constant exponent
/// strictly decreases along each branch.
fn refine(series: TruncatedSeries, q: &BigInt, rows: &mut Vec<Row>) -> Result<(), Error> {
    let (verdict, wlen) = certificate_chain(&series, q)?;
    let e = val_q(&series.constant_term().abs(), q);
    match verdict {
        PrimalityVerdict::Prime(cert) => rows.push(Row {
            series,
            exponent: e,
            certificate: cert,
            split_bound: 1,
        }),
        PrimalityVerdict::Undetermined => {
            let bound = wlen.map_or(e as usize, |l| l.min(e as usize)).max(1);
            rows.push(Row {
                series,
                exponent: e,
                certificate: Certificate::Undetermined,
                split_bound: bound,
            });
        }
        PrimalityVerdict::Composite(parts) => {
            let (mut a, mut b) = *parts;
            if a.constant_term().is_negative() {
                a = negate_series(&a);
                b = negate_series(&b);
            }
            refine(a, q, rows)?;
            refine(b, q, rows)?;
        }
    }
    Ok(())
}

fn negate_series(s: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::new(
        s.modulus(),
        s.precision(),
        s.coeffs().iter().map(|c| -c).collect(),
    )
}

/// Does b divide a in Z[[x]] to the common precision? The divisor constant
/// must be nonzero; division proceeds coefficient by coefficient.
fn divides_to_precision(b: &TruncatedSeries, a: &TruncatedSeries) -> bool {
    let n = a.precision().min(b.precision());
    let d0 = b.constant_term();
    let mut c: Vec<BigInt> = Vec::with_capacity(n);
    for k in 0..n {
        let mut num = a.coeff(k);
        for (i, ci) in c.iter().enumerate() {
            num -= ci * b.coeff(k - i);
        }
        let (ck, rem) = num.div_mod_floor(&d0);
        if !rem.is_zero() {
            return false;
        }
        c.push(ck);
    }
    true
}

/// Factors monic f in Z[[x]] and certifies as much of the result as the
/// criteria allow. Status Certified means: every factor carries a primality
/// certificate and factors sharing a constant prime power are pairwise
/// witnessed non-associate.
pub fn factor_signature(f: &IntPoly, precision: usize) -> Result<FactorizationReport, Error> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let c0 = f.constant_term();
    if c0.is_zero() || c0.abs().is_one() {
        return Err(Error::DegenerateConstant);
    }
    let parts = squarefree_decomp(f)?;

    // pieces with constant +-1 (integer-root factors x -+ 1 and rootless
    // remainders with unit constant) are units of Z[[x]]; their product is
    // folded back into a reported factor below so the identity stays exact
    let mut unit_product = TruncatedSeries::one(0, precision);
    let mut have_units = false;
    let mut factors: Vec<SeriesFactor> = Vec::new();
    let mut bounds: Vec<usize> = Vec::new();
    for (h, m) in &parts {
        for piece in split_integer_roots(h) {
            let pc = piece.constant_term();
            if pc.abs().is_one() {
                let series = if pc.is_negative() {
                    negate_series(&TruncatedSeries::from_poly(&piece, 0, precision))
                } else {
                    TruncatedSeries::from_poly(&piece, 0, precision)
                };
                for _ in 0..*m {
                    unit_product = series_mul(&unit_product, &series)?;
                }
                have_units = true;
                continue;
            }
            for series in constant_split(&piece, precision)? {
                let q = prime_factorization(&series.constant_term())[0].0.clone();
                let mut rows = Vec::new();
                refine(series, &q, &mut rows)?;
                for r in rows {
                    factors.push(SeriesFactor {
                        series: r.series,
                        constant_prime: q.clone(),
                        constant_exponent: r.exponent,
                        multiplicity: *m,
                        certificate: r.certificate,
                    });
                    bounds.push(r.split_bound);
                }
            }
        }
    }

    if have_units && !unit_product.is_one() {
        // fold into a multiplicity-1 factor; if none exists, peel one copy
        // off a repeated factor so the folded unit is not raised to a power
        match factors.iter().position(|f| f.multiplicity == 1) {
            Some(i) => {
                let folded = series_mul(&factors[i].series, &unit_product)?;
                factors[i].series = folded;
            }
            None => {
                let mut peeled = factors[0].clone();
                factors[0].multiplicity -= 1;
                peeled.multiplicity = 1;
                peeled.series = series_mul(&peeled.series, &unit_product)?;
                factors.insert(0, peeled);
                let b = bounds[0];
                bounds.insert(0, b);
            }
        }
    }

    let sign: i8 = if c0.is_negative() { -1 } else { 1 };

    // product identity: sign * prod factors^mult == f to precision
    let mut prod = TruncatedSeries::one(0, precision);
    for fac in &factors {
        for _ in 0..fac.multiplicity {
            prod = series_mul(&prod, &fac.series)?;
        }
    }
    let target: Vec<BigInt> = (0..precision)
        .map(|i| if sign < 0 { -f.coeff(i) } else { f.coeff(i) })
        .collect();
    assert_eq!(
        prod.coeffs(),
        &target[..],
        "factor product must reconstruct the input"
    );

    // distinctness: factors with different primes or different exponents are
    // never associates; same (q, e) pairs are associates exactly when one
    // divides the other to precision
    let mut all_distinct = true;
    let mut merged: Vec<usize> = (0..factors.len()).collect();
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let (a, b) = (&factors[i], &factors[j]);
            if a.constant_prime == b.constant_prime && a.constant_exponent == b.constant_exponent
            {
                if divides_to_precision(&b.series, &a.series) {
                    all_distinct = false;
                    let root = merged[i];
                    merged[j] = root;
                }
            }
        }
    }
    let all_certified = factors.iter().all(|f| f.certificate.is_certified());
    let status = if all_certified && all_distinct {
        Status::Certified
    } else {
        Status::PartiallyCertified
    };

    let bracket = if status == Status::Certified {
        None
    } else {
        let mut distinct_certified: Vec<usize> = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            if f.certificate.is_certified() && merged[i] == i {
                distinct_certified.push(i);
            }
        }
        // every constant prime contributes at least one series prime
        let mut lower = 0usize;
        let mut seen: Vec<&BigInt> = Vec::new();
        for q in factors.iter().map(|f| &f.constant_prime) {
            if !seen.contains(&q) {
                seen.push(q);
                let certified_here = distinct_certified
                    .iter()
                    .filter(|&&i| &factors[i].constant_prime == q)
                    .count();
                lower += certified_here.max(1);
            }
        }
        // possibly-associate rows still count toward the upper bound; only
        // the lower bound collapses them
        let upper = factors
            .iter()
            .zip(&bounds)
            .map(|(f, &b)| if f.certificate.is_certified() { 1 } else { b })
            .sum();
        Some((lower, upper))
    };

    Ok(FactorizationReport {
        input: f.clone(),
        sign,
        factors,
        status,
        precision,
        bracket,
    })
}
