//! Ideals of completed rings and their digit-string dictionary.
//!
//! Two ambients share one interface: power series over Z/nZ (every ideal is
//! equivalent to m(Z/nZ)[[x]] for a divisor m of n) and completions
//! Z[[x]]/(f) for monic expanding f (every saturated ideal is generated by a
//! divisor of f, recorded as an exponent vector against the factor
//! signature).  Digit strings are finite fractional prefixes; membership in a
//! confining set C(a) is the formal test "prefix polynomial lies in
//! a + (x^k)", decided exactly by lattice arithmetic over a depth-k window.
//! The inverse problem (recovering an ideal from a membership oracle) is a
//! limit; results are depth-qualified and never claim exact equality.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::gcd;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::exact_kernel::{
    hnf, hnf_contains, series_invert, series_mul, IntMatrix, IntPoly, TruncatedSeries,
};
use crate::radix::{digits as expansion_digits, GammaRing};
use crate::series_factor::{factor_signature, FactorizationReport, Status};

/// Admissible-prefix enumerations larger than this are reported as
/// incomplete rather than materialized.
const PREFIX_CAP: usize = 1 << 12;

/// Ambient ring of a digit-string computation: a lamplighter modulus n
/// (series over Z/nZ, digits in [0, n)) or a completion presented by an
/// expanding integer matrix (digits in [0, |p(0)|)).
#[derive(Debug, Clone, PartialEq)]
pub enum Ambient {
    Lamplighter { n: u64 },
    Gamma(Arc<GammaRing>),
}

impl Ambient {
    /// Number of digit values available at each position.
    pub fn transversal_size(&self) -> u64 {
        match self {
            Ambient::Lamplighter { n } => *n,
            Ambient::Gamma(ring) => ring.transversal_size(),
        }
    }

    fn check(&self) -> Result<(), Error> {
        if let Ambient::Lamplighter { n } = self {
            if *n < 2 {
                return Err(Error::Parse(format!("lamplighter modulus {n} must be at least 2")));
            }
        }
        Ok(())
    }
}

/// A finite fractional digit prefix, deepest digit first: digits[i] is the
/// coefficient of x^i in the prefix polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitString {
    #[serde(skip)]
    ambient: Ambient,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn new(ambient: Ambient, digits: Vec<u64>) -> Result<Self, Error> {
        ambient.check()?;
        let d = ambient.transversal_size();
        for &a in &digits {
            if a >= d {
                return Err(Error::Parse(format!("digit {a} outside transversal [0, {d})")));
            }
        }
        Ok(DigitString { ambient, digits })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Canonical ideal representation in either ambient.
///
/// Lamplighter ideals store the canonical divisor m of n generating the
/// coefficient subgroup, with m = 0 for the zero ideal.  Divisor ideals
/// store exponents against the rows of a factor signature, bounded by the
/// multiplicities, together with a power of the radix: the ideal is
/// x^shift * prod p_j^{e_j}.  Saturated representatives have shift 0.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealRep {
    LamplighterIdeal {
        n: u64,
        m: u64,
    },
    DivisorIdeal {
        f_signature: FactorizationReport,
        exponents: Vec<u32>,
        shift: usize,
    },
}

impl IdealRep {
    /// Lamplighter ideal with m reduced to the canonical divisor of n.
    pub fn lamplighter(n: u64, m: u64) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Parse(format!("lamplighter modulus {n} must be at least 2")));
        }
        let g = gcd(m % n, n);
        Ok(IdealRep::LamplighterIdeal { n, m: g % n })
    }

    /// Saturated divisor ideal (shift 0).
    pub fn divisor(f_signature: FactorizationReport, exponents: Vec<u32>) -> Result<Self, Error> {
        IdealRep::divisor_shifted(f_signature, exponents, 0)
    }

    pub fn divisor_shifted(
        f_signature: FactorizationReport,
        exponents: Vec<u32>,
        shift: usize,
    ) -> Result<Self, Error> {
        if exponents.len() != f_signature.factors.len() {
            return Err(Error::Parse(format!(
                "{} exponents against {} signature rows",
                exponents.len(),
                f_signature.factors.len()
            )));
        }
        for (e, f) in exponents.iter().zip(&f_signature.factors) {
            if *e > f.multiplicity {
                return Err(Error::Parse(format!(
                    "exponent {e} exceeds multiplicity {}",
                    f.multiplicity
                )));
            }
        }
        Ok(IdealRep::DivisorIdeal { f_signature, exponents, shift })
    }
}

/// Divisor reps compare by defining polynomial, exponents, and shift; the
/// signature's precision and certificates are presentation data.
impl PartialEq for IdealRep {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                IdealRep::LamplighterIdeal { n: n1, m: m1 },
                IdealRep::LamplighterIdeal { n: n2, m: m2 },
            ) => n1 == n2 && m1 == m2,
            (
                IdealRep::DivisorIdeal { f_signature: s1, exponents: e1, shift: k1 },
                IdealRep::DivisorIdeal { f_signature: s2, exponents: e2, shift: k2 },
            ) => s1.input == s2.input && e1 == e2 && k1 == k2,
            _ => false,
        }
    }
}

/// Outcome of comparing two ideals in the containment preorder, reported on
/// saturated representatives: Less means the first divisor divides the
/// second (the first ideal contains the second up to radix powers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdealOrder {
    Less,
    Equivalent,
    Greater,
    Incomparable,
}

/// Compares saturated representatives: componentwise on exponent vectors
/// for divisor ideals, by divisibility of m for lamplighter ideals.  Shifts
/// are ignored (a radix power is invertible after saturation).
pub fn ideal_preorder(a: &IdealRep, b: &IdealRep) -> Result<IdealOrder, Error> {
    match (a, b) {
        (
            IdealRep::LamplighterIdeal { n: n1, m: m1 },
            IdealRep::LamplighterIdeal { n: n2, m: m2 },
        ) => {
            if n1 != n2 {
                return Err(Error::AmbientMismatch);
            }
            let da = if *m1 == 0 { *n1 } else { *m1 };
            let db = if *m2 == 0 { *n2 } else { *m2 };
            Ok(if da == db {
                IdealOrder::Equivalent
            } else if db % da == 0 {
                IdealOrder::Less
            } else if da % db == 0 {
                IdealOrder::Greater
            } else {
                IdealOrder::Incomparable
            })
        }
        (
            IdealRep::DivisorIdeal { f_signature: s1, exponents: e1, .. },
            IdealRep::DivisorIdeal { f_signature: s2, exponents: e2, .. },
        ) => {
            if s1.input != s2.input || e1.len() != e2.len() {
                return Err(Error::AmbientMismatch);
            }
            let le = e1.iter().zip(e2).all(|(a, b)| a <= b);
            let ge = e1.iter().zip(e2).all(|(a, b)| a >= b);
            Ok(match (le, ge) {
                (true, true) => IdealOrder::Equivalent,
                (true, false) => IdealOrder::Less,
                (false, true) => IdealOrder::Greater,
                (false, false) => IdealOrder::Incomparable,
            })
        }
        _ => Err(Error::AmbientMismatch),
    }
}

// ---------------------------------------------------------------------------
// lamplighter ideals: monomial witnesses and classification

/// Witness that m * x^degree lies in the ideal generated by a series:
/// series_mul(f, cofactor) agrees with m * x^degree to the working
/// precision minus degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialWitness {
    pub m: u64,
    pub degree: usize,
    pub cofactor: TruncatedSeries,
}

/// Finds the canonical monomial in the principal ideal (f) of (Z/nZ)[[x]]:
/// m is the positive divisor of n generating the subgroup spanned by the
/// coefficients, and an explicit cofactor realizes m * x^degree.
pub fn monomial_in_ideal(n: u64, f: &TruncatedSeries) -> Result<MonomialWitness, Error> {
    if n < 2 {
        return Err(Error::Parse(format!("modulus {n} must be at least 2")));
    }
    if f.modulus() != 0 && f.modulus() != n {
        return Err(Error::ModulusMismatch { left: n, right: f.modulus() });
    }
    let f = TruncatedSeries::new(n, f.precision().max(1), f.coeffs().to_vec());
    let coeffs: Vec<u64> = f.coeffs().iter().map(|c| c.to_u64().unwrap()).collect();
    let m = coeffs.iter().fold(n, |acc, &c| gcd(acc, c));
    if m == n {
        return Err(Error::ZeroSeries);
    }
    if m == 1 {
        let (degree, cofactor) = unit_monomial(&f)?;
        return Ok(MonomialWitness { m: 1, degree, cofactor });
    }
    // split f = m*g with the coefficients of g generating Z/nZ; the quotient
    // lifts are coprime to n/m, so a single slot absorbs any shared factor
    let mut b: Vec<u64> = coeffs.iter().map(|&c| c / m).collect();
    let step = n / m;
    if b.iter().fold(n, |acc, &c| gcd(acc, c)) != 1 {
        let rest = b[1..].iter().fold(n, |acc, &c| gcd(acc, c));
        let t = (0..n)
            .find(|t| gcd(rest, (b[0] + t * step) % n) == 1)
            .ok_or_else(|| Error::Parse("no unit normalization of the quotient series".into()))?;
        b[0] = (b[0] + t * step) % n;
    }
    let g = TruncatedSeries::new(n, f.precision(), b.iter().map(|&c| BigInt::from(c)).collect());
    let (degree, cofactor) = unit_monomial(&g)?;
    Ok(MonomialWitness { m, degree, cofactor })
}

/// Classifies the ideal generated by the given series: the result m
/// generates the subgroup of Z/nZ spanned by all coefficients, computed by
/// combining per-generator monomial witnesses.  Returns 0 for the zero
/// ideal.
pub fn classify_ideal_lamplighter(
    n: u64,
    gens: &[TruncatedSeries],
    depth: usize,
) -> Result<u64, Error> {
    if n < 2 {
        return Err(Error::Parse(format!("modulus {n} must be at least 2")));
    }
    if depth == 0 {
        return Err(Error::Parse("depth must be positive".into()));
    }
    let mut m = n;
    for g in gens {
        if g.modulus() != 0 && g.modulus() != n {
            return Err(Error::ModulusMismatch { left: n, right: g.modulus() });
        }
        let trimmed = TruncatedSeries::new(n, g.precision().min(depth).max(1), g.coeffs().to_vec());
        match monomial_in_ideal(n, &trimmed) {
            Ok(w) => m = gcd(m, w.m),
            Err(Error::ZeroSeries) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(if m == n { 0 } else { m })
}

/// Cofactor construction for a series whose coefficients generate Z/nZ:
/// returns (l, h) with g*h = x^l.  Recursion on the number of prime factors
/// of n; the base case inverts the unit tail directly.
fn unit_monomial(g: &TruncatedSeries) -> Result<(usize, TruncatedSeries), Error> {
    let n = g.modulus();
    let prec = g.precision();
    let p = smallest_prime_factor(n);
    if p == n {
        let l = (0..prec)
            .find(|&i| !g.coeff(i).is_zero())
            .ok_or(Error::ZeroSeries)?;
        let h = series_invert(&series_shift_down(g, l))?;
        return Ok((l, h));
    }
    let npr = n / p;
    // npr*g = npr*x^l1*a with 0 < a(0) < p, hence a invertible mod n
    let scaled: Vec<u64> = (0..prec)
        .map(|i| (g.coeff(i).to_u64().unwrap() * npr) % n)
        .collect();
    let l1 = scaled
        .iter()
        .position(|&c| c != 0)
        .ok_or(Error::ZeroSeries)?;
    let a = TruncatedSeries::new(
        n,
        prec,
        scaled[l1..].iter().map(|&c| BigInt::from(c / npr)).collect(),
    );
    let g1 = series_invert(&a)?;
    // recurse with one prime factor removed
    let gbar = TruncatedSeries::new(npr, prec, g.coeffs().to_vec());
    let (l2, hbar) = unit_monomial(&gbar)?;
    let h0 = TruncatedSeries::new(n, prec, hbar.coeffs().to_vec());
    // correction: g*h0 = x^l2 + npr*u, and npr*g*g1 = npr*x^l1
    let prod = series_mul(&g, &h0)?;
    let u_coeffs: Vec<BigInt> = (0..prec)
        .map(|i| {
            let mut c = prod.coeff(i).to_u64().unwrap();
            if i == l2 {
                c -= 1;
            }
            debug_assert_eq!(c % npr, 0);
            BigInt::from(c / npr)
        })
        .collect();
    let u = TruncatedSeries::new(n, prec, u_coeffs);
    let corr = series_scale(&series_mul(&g1, &u)?, npr);
    let h = series_sub(&series_shift_up(&h0, l1), &corr);
    Ok((l1 + l2, h))
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            return q;
        }
        q += 1;
    }
    n
}

fn series_shift_down(s: &TruncatedSeries, l: usize) -> TruncatedSeries {
    TruncatedSeries::new(s.modulus(), s.precision(), s.coeffs()[l..].to_vec())
}

fn series_shift_up(s: &TruncatedSeries, l: usize) -> TruncatedSeries {
    let prec = s.precision();
    let mut coeffs = vec![BigInt::zero(); l];
    coeffs.extend_from_slice(s.coeffs());
    coeffs.truncate(prec);
    TruncatedSeries::new(s.modulus(), prec, coeffs)
}

fn series_scale(s: &TruncatedSeries, c: u64) -> TruncatedSeries {
    TruncatedSeries::new(
        s.modulus(),
        s.precision(),
        s.coeffs().iter().map(|a| a * BigInt::from(c)).collect(),
    )
}

fn series_sub(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let prec = a.precision().min(b.precision());
    TruncatedSeries::new(
        a.modulus(),
        prec,
        (0..prec).map(|i| a.coeff(i) - b.coeff(i)).collect(),
    )
}

// ---------------------------------------------------------------------------
// divisor ideals: window lattices over Z^{deg f}

/// Columns of gamma^k as lattice generators.
fn gamma_power_cols(gamma: &IntMatrix, k: usize) -> Vec<Vec<BigInt>> {
    let gk = gamma.pow(k as u32);
    (0..gamma.dim()).map(|j| gk.column(j)).collect()
}

/// Sum of coeffs[i] * gamma^i * v.
fn poly_eval_vec(gamma: &IntMatrix, v: &[BigInt], coeffs: &[BigInt]) -> Vec<BigInt> {
    let n = gamma.dim();
    let mut acc = vec![BigInt::zero(); n];
    let mut pw = v.to_vec();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            for (a, p) in acc.iter_mut().zip(&pw) {
                *a += c * p;
            }
        }
        if i + 1 < coeffs.len() {
            pw = gamma.mul_vec(&pw);
        }
    }
    acc
}

/// Canonical HNF of the lattice spanned by the given generator vectors,
/// zero columns trimmed; equal lattices produce identical output.
fn lattice_hnf(dim: usize, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| gens.iter().map(|g| g[i].clone()).collect())
        .collect();
    let (h, _) = hnf(&rows);
    let keep = (0..gens.len())
        .filter(|&c| (0..dim).any(|r| !h[r][c].is_zero()))
        .count();
    (0..dim).map(|r| h[r][..keep].to_vec()).collect()
}

fn hnf_columns(h: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let dim = h.len();
    let ncols = if dim == 0 { 0 } else { h[0].len() };
    (0..ncols)
        .map(|c| (0..dim).map(|r| h[r][c].clone()).collect())
        .collect()
}

/// HNF of the depth-k window of the principal ideal generated by the series
/// with the given coefficients: the span of g, gamma*g, gamma^2*g, ...
/// together with gamma^k * Z^n.  Generation stops at the first power that
/// fails to enlarge the lattice; with the gamma^k columns present this
/// certifies closure under gamma.
fn window_lattice(
    gamma: &IntMatrix,
    v: &[BigInt],
    gen_coeffs: &[BigInt],
    k: usize,
) -> Vec<Vec<BigInt>> {
    let n = gamma.dim();
    let mut gens = gamma_power_cols(gamma, k);
    let mut cur = lattice_hnf(n, &gens);
    let mut g = poly_eval_vec(gamma, v, gen_coeffs);
    loop {
        if g.iter().all(|c| c.is_zero()) {
            break;
        }
        gens.push(g.clone());
        let next = lattice_hnf(n, &gens);
        if next == cur {
            break;
        }
        cur = next;
        g = gamma.mul_vec(&g);
    }
    cur
}

/// Coefficients of x^shift * prod p_j^{e_j} modulo x^k, exact because the
/// factor series are stored beyond the window.
fn divisor_window_coeffs(
    f_signature: &FactorizationReport,
    exponents: &[u32],
    shift: usize,
    k: usize,
) -> Result<Vec<BigInt>, Error> {
    if shift >= k {
        return Ok(Vec::new());
    }
    let mut prod = TruncatedSeries::one(0, k);
    for (factor, &e) in f_signature.factors.iter().zip(exponents) {
        if e == 0 {
            continue;
        }
        if factor.series.precision() < k {
            return Err(Error::DepthExceeded { depth: factor.series.precision() });
        }
        let base = factor.series.truncated(k);
        for _ in 0..e {
            prod = series_mul(&prod, &base)?;
        }
    }
    let mut coeffs = vec![BigInt::zero(); shift];
    coeffs.extend_from_slice(prod.coeffs());
    coeffs.truncate(k);
    Ok(coeffs)
}

/// Decides whether the prefix polynomial of a digit string lies in
/// a + (x^k), k the digit count.  Exact at every depth: lattice membership
/// over a window for divisor ideals, coefficientwise divisibility for
/// lamplighter ideals.  The empty string is integral and always belongs.
pub fn confining_membership(
    element: &DigitString,
    ideal: &IdealRep,
    depth: usize,
) -> Result<bool, Error> {
    let k = element.digits.len();
    if k > depth {
        return Err(Error::DepthExceeded { depth });
    }
    match (&element.ambient, ideal) {
        (Ambient::Lamplighter { n }, IdealRep::LamplighterIdeal { n: n2, m }) => {
            if n != n2 {
                return Err(Error::AmbientMismatch);
            }
            let div = if *m == 0 { *n } else { *m };
            Ok(element.digits.iter().all(|a| a % div == 0))
        }
        (Ambient::Gamma(ring), IdealRep::DivisorIdeal { f_signature, exponents, shift }) => {
            if ring.defining_poly() != &f_signature.input {
                return Err(Error::AmbientMismatch);
            }
            if k == 0 {
                return Ok(true);
            }
            let gen_coeffs = divisor_window_coeffs(f_signature, exponents, *shift, k)?;
            let window = window_lattice(ring.gamma(), ring.cyclic_vector(), &gen_coeffs, k);
            let digit_coeffs: Vec<BigInt> =
                element.digits.iter().map(|&a| BigInt::from(a)).collect();
            let target = poly_eval_vec(ring.gamma(), ring.cyclic_vector(), &digit_coeffs);
            Ok(hnf_contains(&window, &target))
        }
        _ => Err(Error::AmbientMismatch),
    }
}

/// Saturation of the ideal generated by integer polynomials in the
/// completion described by a certified signature: the exponent vector of
/// the smallest divisor ideal containing every generator.  Window
/// membership at finite depth is necessary; it is asserted sufficient only
/// when stable across two depths, so the result is the standing policy
/// rather than a certificate.
pub fn saturate(
    f_signature: &FactorizationReport,
    gens: &[IntPoly],
    precision: usize,
) -> Result<IdealRep, Error> {
    if f_signature.status != Status::Certified {
        return Err(Error::UncertifiedSignature);
    }
    let f = &f_signature.input;
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let n = match f.degree() {
        Some(d) if d > 0 => d,
        _ => return Err(Error::DegenerateConstant),
    };
    let mults = f_signature.exponents();
    let gamma = IntMatrix::companion(f)?;
    let mut e1 = vec![BigInt::zero(); n];
    e1[0] = BigInt::from(1);

    let mut reduced: Vec<Vec<BigInt>> = Vec::new();
    for g in gens {
        let (_, r) = g.divrem_monic(f);
        let mut vec = r.coeffs().to_vec();
        vec.resize(n, BigInt::zero());
        if vec.iter().any(|c| !c.is_zero()) {
            reduced.push(vec);
        }
    }
    // all generators vanish mod f: the zero ideal, the top divisor
    if reduced.is_empty() {
        return IdealRep::divisor(f_signature.clone(), mults);
    }

    let deep = precision.min(f_signature.precision).max(2);
    let shallow = (deep / 2).max(1);
    let mut exponents = Vec::with_capacity(f_signature.factors.len());
    for (j, factor) in f_signature.factors.iter().enumerate() {
        let mut best = 0u32;
        for e in 1..=factor.multiplicity {
            let mut probe = vec![0u32; f_signature.factors.len()];
            probe[j] = e;
            let stable = [shallow, deep].iter().all(|&w| {
                let coeffs = match divisor_window_coeffs(f_signature, &probe, 0, w) {
                    Ok(c) => c,
                    Err(_) => return false,
                };
                let window = window_lattice(&gamma, &e1, &coeffs, w);
                reduced.iter().all(|g| hnf_contains(&window, g))
            });
            if stable {
                best = e;
            } else {
                break;
            }
        }
        exponents.push(best);
    }
    IdealRep::divisor(f_signature.clone(), exponents)
}

// ---------------------------------------------------------------------------
// recovering an ideal from a membership oracle

/// Depth-qualified answer of [`ideal_from_confining`]: the admissible
/// prefixes at the final depth and, when recognition succeeds, the matching
/// saturated ideal.  `complete` marks whether `prefixes` is the full
/// admissible set or a spanning sample.
#[derive(Debug, Clone, Serialize)]
pub struct ConfiningProfile {
    pub depth: usize,
    pub prefixes: Vec<Vec<u64>>,
    pub complete: bool,
    pub ideal: Option<IdealRep>,
}

/// Recovers an ideal from a membership oracle on digit strings, probing to
/// strings of length depth + 1.  The admissible prefixes at each level form
/// a subgroup of the digit window, so a generating set is maintained by
/// lifting generators one level at a time; the oracle is consulted
/// O(depth * dim * d) times.  When the learned window matches a divisor
/// (or lamplighter) ideal exactly, that saturated representative is
/// reported; oracles inconsistent with any ideal yield `ideal: None`.
pub fn ideal_from_confining<F>(
    ambient: &Ambient,
    oracle: F,
    depth: usize,
) -> Result<ConfiningProfile, Error>
where
    F: Fn(&DigitString) -> bool,
{
    ambient.check()?;
    match ambient {
        Ambient::Lamplighter { n } => lamplighter_profile(ambient, *n, &oracle, depth),
        Ambient::Gamma(ring) => gamma_profile(ambient, ring, &oracle, depth),
    }
}

fn lamplighter_profile<F>(
    ambient: &Ambient,
    n: u64,
    oracle: &F,
    depth: usize,
) -> Result<ConfiningProfile, Error>
where
    F: Fn(&DigitString) -> bool,
{
    let levels = depth + 1;
    let mut ok = true;
    let mut slot_m = n;
    for k in 0..levels {
        let passing: Vec<u64> = (0..n)
            .filter(|&j| {
                let mut digits = vec![0u64; k];
                digits.push(j);
                oracle(&DigitString { ambient: ambient.clone(), digits })
            })
            .collect();
        let g = passing.iter().fold(n, |acc, &j| gcd(acc, j));
        let expected: Vec<u64> = (0..n).step_by(g.max(1) as usize).collect();
        if passing != expected {
            ok = false;
            break;
        }
        if k == 0 {
            slot_m = g;
        } else if g != slot_m {
            ok = false;
            break;
        }
    }
    // cross-slot probe: the all-m string must itself be admissible
    if ok && slot_m > 0 && slot_m < n {
        let digits = vec![slot_m; levels];
        if !oracle(&DigitString { ambient: ambient.clone(), digits }) {
            ok = false;
        }
    }
    if !ok {
        return Ok(ConfiningProfile { depth, prefixes: Vec::new(), complete: false, ideal: None });
    }
    let m_canon = if slot_m == n { 0 } else { slot_m };
    let ideal = IdealRep::lamplighter(n, m_canon)?;
    let digit_set: Vec<u64> = (0..n).step_by(slot_m.max(1) as usize).collect();
    let mut prefixes: Vec<Vec<u64>> = vec![Vec::new()];
    let mut complete = true;
    for _ in 0..levels {
        let mut next = Vec::with_capacity(prefixes.len() * digit_set.len());
        for p in &prefixes {
            for &j in &digit_set {
                let mut q = p.clone();
                q.push(j);
                next.push(q);
            }
        }
        if next.len() > PREFIX_CAP {
            complete = false;
            break;
        }
        prefixes = next;
    }
    if !complete {
        // spanning sample: one generator per slot
        prefixes = (0..levels)
            .map(|k| {
                let mut digits = vec![0u64; levels];
                digits[k] = slot_m;
                digits
            })
            .collect();
        prefixes.sort();
        prefixes.dedup();
    }
    Ok(ConfiningProfile { depth, prefixes, complete, ideal: Some(ideal) })
}

fn gamma_profile<F>(
    ambient: &Ambient,
    ring: &Arc<GammaRing>,
    oracle: &F,
    depth: usize,
) -> Result<ConfiningProfile, Error>
where
    F: Fn(&DigitString) -> bool,
{
    let n = ring.degree();
    let d = ring.transversal_size();
    let gamma = ring.gamma();
    let v = ring.cyclic_vector();
    let levels = depth + 1;

    let query = |vec: &[BigInt], len: usize| -> bool {
        let digits = expansion_digits(ring, vec, len);
        oracle(&DigitString { ambient: ambient.clone(), digits })
    };

    // level k holds a generating set of the admissible subgroup modulo
    // gamma^k; each generator lifts along the fiber g + gamma^k * j * v
    let mut ok = true;
    let mut wgens: Vec<Vec<BigInt>> = gamma_power_cols(gamma, 0);
    let mut gk = IntMatrix::identity(n);
    let mut window = lattice_hnf(n, &wgens);
    for k in 0..levels {
        let gkv = gk.mul_vec(v);
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for g in &wgens {
            let mut lifted = false;
            for j in 0..d {
                let jb = BigInt::from(j);
                let cand: Vec<BigInt> =
                    g.iter().zip(&gkv).map(|(a, b)| a + &jb * b).collect();
                if query(&cand, k + 1) {
                    next.push(cand);
                    lifted = true;
                    break;
                }
            }
            if !lifted {
                ok = false;
            }
        }
        for j in 1..d {
            let jb = BigInt::from(j);
            let cand: Vec<BigInt> = gkv.iter().map(|b| &jb * b).collect();
            if query(&cand, k + 1) {
                next.push(cand);
            }
        }
        gk = gk.mul(gamma);
        next.extend(gamma_power_cols(gamma, k + 1));
        window = lattice_hnf(n, &next);
        wgens = hnf_columns(&window);
    }

    // the learned window collects positive answers only; reject oracles
    // that deny the zero prefix before attempting recognition
    if !query(&vec![BigInt::zero(); n], levels) {
        ok = false;
    }
    let mut recognized = if ok { recognize_window(ring, &wgens, &window, levels) } else { None };
    let mut prefixes = spanning_prefixes(ring, &wgens, levels);
    let mut complete = false;
    if recognized.is_some() {
        match enumerate_window_prefixes(ring, &wgens, levels) {
            Some(list) => {
                // every string of the census must be admissible per the oracle
                let digits_ok = list.iter().all(|s| {
                    oracle(&DigitString { ambient: ambient.clone(), digits: s.clone() })
                });
                if digits_ok {
                    prefixes = list;
                    complete = true;
                } else {
                    recognized = None;
                }
            }
            None => {
                // census too large: probe subgroup closure on generator sums
                let closed = wgens.iter().enumerate().all(|(i, a)| {
                    wgens.iter().skip(i).all(|b| {
                        let sum: Vec<BigInt> =
                            a.iter().zip(b).map(|(x, y)| x + y).collect();
                        query(&sum, levels)
                    })
                });
                if !closed {
                    recognized = None;
                }
            }
        }
    }
    Ok(ConfiningProfile { depth, prefixes, complete, ideal: recognized })
}

/// Matches the learned window against a shifted divisor ideal of the
/// defining polynomial; on success reports the saturated representative.
fn recognize_window(
    ring: &GammaRing,
    wgens: &[Vec<BigInt>],
    window: &[Vec<BigInt>],
    levels: usize,
) -> Option<IdealRep> {
    let sig = factor_signature(ring.defining_poly(), levels.max(crate::exact_kernel::DEFAULT_PRECISION)).ok()?;
    if sig.status != Status::Certified {
        return None;
    }
    let gamma = ring.gamma();
    let v = ring.cyclic_vector();
    let n = ring.degree();

    let mut exponents = Vec::with_capacity(sig.factors.len());
    for (j, factor) in sig.factors.iter().enumerate() {
        let mut best = 0u32;
        for e in 1..=factor.multiplicity {
            let mut probe = vec![0u32; sig.factors.len()];
            probe[j] = e;
            let coeffs = divisor_window_coeffs(&sig, &probe, 0, levels).ok()?;
            let w = window_lattice(gamma, v, &coeffs, levels);
            if wgens.iter().all(|g| hnf_contains(&w, g)) {
                best = e;
            } else {
                break;
            }
        }
        exponents.push(best);
    }
    let mut shift = 0usize;
    for k in 1..=levels {
        let w = lattice_hnf(n, &gamma_power_cols(gamma, k));
        if wgens.iter().all(|g| hnf_contains(&w, g)) {
            shift = k;
        } else {
            break;
        }
    }
    let coeffs = divisor_window_coeffs(&sig, &exponents, shift, levels).ok()?;
    let candidate = window_lattice(gamma, v, &coeffs, levels);
    if candidate == window {
        IdealRep::divisor(sig, exponents).ok()
    } else {
        None
    }
}

/// Full admissible set at the final level, rebuilt from the learned window
/// one digit at a time; None when the census exceeds the cap.
fn enumerate_window_prefixes(
    ring: &GammaRing,
    wgens: &[Vec<BigInt>],
    levels: usize,
) -> Option<Vec<Vec<u64>>> {
    let n = ring.degree();
    let d = ring.transversal_size();
    let gamma = ring.gamma();
    let v = ring.cyclic_vector();
    let mut level: Vec<(Vec<u64>, Vec<BigInt>)> =
        vec![(Vec::new(), vec![BigInt::zero(); n])];
    let mut gkv = v.to_vec();
    for k in 0..levels {
        let mut gens = wgens.to_vec();
        gens.extend(gamma_power_cols(gamma, k + 1));
        let h = lattice_hnf(n, &gens);
        let mut next = Vec::new();
        for (s, vec) in &level {
            for j in 0..d {
                let jb = BigInt::from(j);
                let cand: Vec<BigInt> =
                    vec.iter().zip(&gkv).map(|(a, b)| a + &jb * b).collect();
                if hnf_contains(&h, &cand) {
                    let mut q = s.clone();
                    q.push(j);
                    next.push((q, cand));
                }
            }
            if next.len() > PREFIX_CAP {
                return None;
            }
        }
        level = next;
        gkv = gamma.mul_vec(&gkv);
    }
    let mut out: Vec<Vec<u64>> = level.into_iter().map(|(s, _)| s).collect();
    out.sort();
    out
        .windows(2)
        .all(|w| w[0] != w[1])
        .then_some(())
        .map(|_| out)
}

/// Digit strings of the window generators: a spanning sample of admissible
/// prefixes when the full set is too large or unverified.
fn spanning_prefixes(ring: &GammaRing, wgens: &[Vec<BigInt>], levels: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = wgens
        .iter()
        .map(|g| expansion_digits(ring, g, levels))
        .filter(|s| s.iter().any(|&a| a != 0))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_kernel::DEFAULT_PRECISION;

    fn ser(n: u64, coeffs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64(n, DEFAULT_PRECISION, coeffs)
    }

    fn poly(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    fn ring_of(coeffs: &[i64]) -> Arc<GammaRing> {
        Arc::new(GammaRing::from_poly(poly(coeffs)).unwrap())
    }

    /// (x-2)(x-3)^2 = x^3 - 8x^2 + 21x - 18.
    fn two_three_squared() -> IntPoly {
        poly(&[-18, 21, -8, 1])
    }

    fn assert_witness(n: u64, f: &TruncatedSeries, w: &MonomialWitness) {
        let prod = series_mul(
            &TruncatedSeries::new(n, f.precision(), f.coeffs().to_vec()),
            &w.cofactor,
        )
        .unwrap();
        let horizon = prod.precision() - w.degree;
        for i in 0..horizon {
            let expect = if i == w.degree { w.m % n } else { 0 };
            assert_eq!(prod.coeff(i), BigInt::from(expect), "coefficient {i}");
        }
    }

    #[test]
    fn monomial_single_x_over_two() {
        let w = monomial_in_ideal(2, &ser(2, &[0, 1])).unwrap();
        assert_eq!((w.m, w.degree), (1, 1));
        assert_witness(2, &ser(2, &[0, 1]), &w);
    }

    #[test]
    fn monomial_even_series_mod_four() {
        let f = ser(4, &[2, 2]);
        let w = monomial_in_ideal(4, &f).unwrap();
        assert_eq!((w.m, w.degree), (2, 0));
        assert_witness(4, &f, &w);
    }

    #[test]
    fn monomial_mixed_primes_mod_six() {
        let f = ser(6, &[2, 3]);
        let w = monomial_in_ideal(6, &f).unwrap();
        assert_eq!(w.m, 1);
        assert_witness(6, &f, &w);
    }

    #[test]
    fn monomial_quotient_needs_adjustment() {
        // 18 = 6*3 mod 24 and gcd(3, 24) = 3: the quotient series is fixed
        // up by a multiple of 24/6 before inversion
        let f = ser(24, &[18]);
        let w = monomial_in_ideal(24, &f).unwrap();
        assert_eq!(w.m, 6);
        assert_witness(24, &f, &w);
    }

    #[test]
    fn monomial_rejects_zero_and_char_zero() {
        assert_eq!(monomial_in_ideal(4, &ser(4, &[0, 0])), Err(Error::ZeroSeries));
        assert!(matches!(
            monomial_in_ideal(0, &ser(4, &[1])),
            Err(Error::Parse(_))
        ));
        assert_eq!(
            monomial_in_ideal(4, &ser(6, &[1])),
            Err(Error::ModulusMismatch { left: 4, right: 6 })
        );
    }

    #[test]
    fn classify_worked_examples() {
        assert_eq!(
            classify_ideal_lamplighter(12, &[ser(12, &[4]), ser(12, &[0, 6])], 16).unwrap(),
            2
        );
        assert_eq!(classify_ideal_lamplighter(8, &[ser(8, &[2, 4])], 16).unwrap(), 2);
    }

    #[test]
    fn classify_zero_ideal_and_mismatch() {
        assert_eq!(classify_ideal_lamplighter(9, &[ser(9, &[0])], 8).unwrap(), 0);
        assert_eq!(classify_ideal_lamplighter(9, &[], 8).unwrap(), 0);
        assert_eq!(
            classify_ideal_lamplighter(12, &[ser(6, &[2])], 8),
            Err(Error::ModulusMismatch { left: 12, right: 6 })
        );
    }

    #[test]
    fn lamplighter_rep_canonicalizes() {
        assert_eq!(
            IdealRep::lamplighter(12, 8).unwrap(),
            IdealRep::LamplighterIdeal { n: 12, m: 4 }
        );
        assert_eq!(
            IdealRep::lamplighter(12, 0).unwrap(),
            IdealRep::LamplighterIdeal { n: 12, m: 0 }
        );
        assert_eq!(
            IdealRep::lamplighter(12, 24).unwrap(),
            IdealRep::LamplighterIdeal { n: 12, m: 0 }
        );
    }

    #[test]
    fn saturate_whole_relation_gives_top_divisor() {
        let f = two_three_squared();
        let sig = factor_signature(&f, DEFAULT_PRECISION).unwrap();
        let rep = saturate(&sig, &[f.clone()], 32).unwrap();
        match &rep {
            IdealRep::DivisorIdeal { exponents, shift, .. } => {
                assert_eq!(exponents, &sig.exponents());
                assert_eq!(*shift, 0);
            }
            _ => panic!("divisor rep expected"),
        }
    }

    #[test]
    fn saturate_partial_generators() {
        let f = two_three_squared();
        let sig = factor_signature(&f, DEFAULT_PRECISION).unwrap();
        let exps = |gens: &[IntPoly]| match saturate(&sig, gens, 32).unwrap() {
            IdealRep::DivisorIdeal { exponents, .. } => exponents,
            _ => panic!("divisor rep expected"),
        };
        assert_eq!(exps(&[poly(&[9, -6, 1])]), vec![0, 2]);
        assert_eq!(exps(&[poly(&[-2, 1])]), vec![1, 0]);
        assert_eq!(exps(&[poly(&[1])]), vec![0, 0]);
        // minimum over generators, componentwise
        assert_eq!(exps(&[poly(&[-2, 1]), poly(&[9, -6, 1])]), vec![0, 0]);
    }

    #[test]
    fn saturate_strips_radix_factors() {
        // over x - 2 the element 2 is the radix itself; its saturation is
        // the unit ideal
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        match saturate(&sig, &[poly(&[2])], 32).unwrap() {
            IdealRep::DivisorIdeal { exponents, .. } => assert_eq!(exponents, vec![0]),
            _ => panic!("divisor rep expected"),
        }
    }

    #[test]
    fn saturate_requires_certified_signature() {
        let sig = factor_signature(&poly(&[125, -5, 1]), DEFAULT_PRECISION).unwrap();
        assert_eq!(sig.status, Status::PartiallyCertified);
        assert_eq!(
            saturate(&sig, &[poly(&[5])], 32),
            Err(Error::UncertifiedSignature)
        );
    }

    #[test]
    fn membership_empty_string_is_integral() {
        let ring = ring_of(&[-2, 1]);
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor(sig, vec![1]).unwrap();
        let s = DigitString::new(Ambient::Gamma(ring), Vec::new()).unwrap();
        assert!(confining_membership(&s, &ideal, 8).unwrap());
        let lamp = IdealRep::lamplighter(4, 2).unwrap();
        let t = DigitString::new(Ambient::Lamplighter { n: 4 }, Vec::new()).unwrap();
        assert!(confining_membership(&t, &lamp, 8).unwrap());
    }

    #[test]
    fn membership_lamplighter_digitwise() {
        let amb = Ambient::Lamplighter { n: 4 };
        let even = IdealRep::lamplighter(4, 2).unwrap();
        let zero = IdealRep::lamplighter(4, 0).unwrap();
        let s = |digits: &[u64]| DigitString::new(amb.clone(), digits.to_vec()).unwrap();
        assert!(confining_membership(&s(&[2, 0, 2]), &even, 8).unwrap());
        assert!(!confining_membership(&s(&[1]), &even, 8).unwrap());
        assert!(confining_membership(&s(&[0, 0]), &zero, 8).unwrap());
        assert!(!confining_membership(&s(&[2]), &zero, 8).unwrap());
    }

    #[test]
    fn membership_depth_gate() {
        let amb = Ambient::Lamplighter { n: 4 };
        let ideal = IdealRep::lamplighter(4, 2).unwrap();
        let s = DigitString::new(amb, vec![0, 0, 0]).unwrap();
        assert_eq!(
            confining_membership(&s, &ideal, 2),
            Err(Error::DepthExceeded { depth: 2 })
        );
    }

    #[test]
    fn membership_dyadic_sixteen() {
        // base 2, ideal (2^4): the fractional string .10101 fails the formal
        // prefix test, while its zero-padded form .101010000 (the same
        // value) succeeds
        let ring = ring_of(&[-2, 1]);
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor_shifted(sig, vec![0], 4).unwrap();
        let amb = Ambient::Gamma(ring);
        let padded = DigitString::new(amb.clone(), vec![0, 0, 0, 0, 1, 0, 1, 0, 1]).unwrap();
        assert!(confining_membership(&padded, &ideal, 12).unwrap());
        let raw = DigitString::new(amb, vec![1, 0, 1, 0, 1]).unwrap();
        assert!(!confining_membership(&raw, &ideal, 12).unwrap());
    }

    #[test]
    fn membership_dyadic_parity() {
        // base 2, ideal (2): no element has first fractional digit 1
        let ring = ring_of(&[-2, 1]);
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor_shifted(sig, vec![0], 1).unwrap();
        let amb = Ambient::Gamma(ring);
        let one = DigitString::new(amb.clone(), vec![1]).unwrap();
        assert!(!confining_membership(&one, &ideal, 8).unwrap());
        let zero = DigitString::new(amb, vec![0]).unwrap();
        assert!(confining_membership(&zero, &ideal, 8).unwrap());
    }

    #[test]
    fn membership_prime_window_sqrt_two() {
        let ring = ring_of(&[-2, 0, 1]);
        let sig = factor_signature(&poly(&[-2, 0, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor(sig, vec![1]).unwrap();
        let amb = Ambient::Gamma(ring);
        let s = |digits: &[u64]| DigitString::new(amb.clone(), digits.to_vec()).unwrap();
        assert!(!confining_membership(&s(&[1]), &ideal, 8).unwrap());
        assert!(confining_membership(&s(&[0]), &ideal, 8).unwrap());
    }

    #[test]
    fn membership_deep_zero_monotone() {
        let ring = ring_of(&[-2, 0, 1]);
        let sig = factor_signature(&poly(&[-2, 0, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor(sig, vec![1]).unwrap();
        let amb = Ambient::Gamma(ring);
        for digits in [vec![0], vec![0, 1], vec![0, 1, 1], vec![1, 0, 1]] {
            let s = DigitString::new(amb.clone(), digits.clone()).unwrap();
            if confining_membership(&s, &ideal, 12).unwrap() {
                let mut deeper = vec![0];
                deeper.extend(digits);
                let t = DigitString::new(amb.clone(), deeper).unwrap();
                assert!(confining_membership(&t, &ideal, 12).unwrap());
            }
        }
    }

    #[test]
    fn membership_ambient_mismatch() {
        let ring = ring_of(&[-2, 0, 1]);
        let sig = factor_signature(&two_three_squared(), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor(sig, vec![0, 0]).unwrap();
        let s = DigitString::new(Ambient::Gamma(ring), vec![0]).unwrap();
        assert_eq!(confining_membership(&s, &ideal, 8), Err(Error::AmbientMismatch));
        let lamp = IdealRep::lamplighter(6, 2).unwrap();
        assert_eq!(confining_membership(&s, &lamp, 8), Err(Error::AmbientMismatch));
        let t = DigitString::new(Ambient::Lamplighter { n: 4 }, vec![0]).unwrap();
        let other = IdealRep::lamplighter(6, 2).unwrap();
        assert_eq!(confining_membership(&t, &other, 8), Err(Error::AmbientMismatch));
    }

    #[test]
    fn preorder_divisor_cases() {
        let sig = factor_signature(&two_three_squared(), DEFAULT_PRECISION).unwrap();
        let rep = |e: &[u32]| IdealRep::divisor(sig.clone(), e.to_vec()).unwrap();
        assert_eq!(ideal_preorder(&rep(&[1, 0]), &rep(&[1, 2])).unwrap(), IdealOrder::Less);
        assert_eq!(ideal_preorder(&rep(&[1, 2]), &rep(&[1, 0])).unwrap(), IdealOrder::Greater);
        assert_eq!(ideal_preorder(&rep(&[0, 1]), &rep(&[0, 1])).unwrap(), IdealOrder::Equivalent);
        assert_eq!(
            ideal_preorder(&rep(&[1, 0]), &rep(&[0, 2])).unwrap(),
            IdealOrder::Incomparable
        );
        // shifts are saturation artifacts and do not affect the order
        let shifted = IdealRep::divisor_shifted(sig.clone(), vec![0, 0], 3).unwrap();
        assert_eq!(ideal_preorder(&shifted, &rep(&[0, 0])).unwrap(), IdealOrder::Equivalent);
        let other = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let foreign = IdealRep::divisor(other, vec![0]).unwrap();
        assert_eq!(ideal_preorder(&rep(&[1, 0]), &foreign), Err(Error::AmbientMismatch));
    }

    #[test]
    fn preorder_lamplighter_cases() {
        let rep = |m: u64| IdealRep::lamplighter(12, m).unwrap();
        assert_eq!(ideal_preorder(&rep(2), &rep(3)).unwrap(), IdealOrder::Incomparable);
        assert_eq!(ideal_preorder(&rep(2), &rep(4)).unwrap(), IdealOrder::Less);
        assert_eq!(ideal_preorder(&rep(0), &rep(2)).unwrap(), IdealOrder::Greater);
        assert_eq!(ideal_preorder(&rep(0), &rep(0)).unwrap(), IdealOrder::Equivalent);
        let foreign = IdealRep::lamplighter(8, 2).unwrap();
        assert_eq!(ideal_preorder(&rep(2), &foreign), Err(Error::AmbientMismatch));
    }

    #[test]
    fn recover_divisor_ideals_roundtrip() {
        let f = two_three_squared();
        let ring = Arc::new(GammaRing::from_poly(f.clone()).unwrap());
        let sig = factor_signature(&f, DEFAULT_PRECISION).unwrap();
        let amb = Ambient::Gamma(ring);
        let depth = 6;
        for exps in [vec![0u32, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 2], vec![1, 2]] {
            let ideal = IdealRep::divisor(sig.clone(), exps.clone()).unwrap();
            let profile = ideal_from_confining(
                &amb,
                |s| confining_membership(s, &ideal, depth + 1).unwrap(),
                depth,
            )
            .unwrap();
            assert_eq!(profile.ideal, Some(ideal), "exponents {exps:?}");
        }
    }

    #[test]
    fn recover_shifted_ideal_as_saturation() {
        let f = two_three_squared();
        let ring = Arc::new(GammaRing::from_poly(f.clone()).unwrap());
        let sig = factor_signature(&f, DEFAULT_PRECISION).unwrap();
        let amb = Ambient::Gamma(ring);
        let depth = 6;
        let shifted = IdealRep::divisor_shifted(sig.clone(), vec![1, 0], 2).unwrap();
        let profile = ideal_from_confining(
            &amb,
            |s| confining_membership(s, &shifted, depth + 1).unwrap(),
            depth,
        )
        .unwrap();
        let saturated = IdealRep::divisor(sig, vec![1, 0]).unwrap();
        assert_eq!(profile.ideal, Some(saturated));
    }

    #[test]
    fn recover_dyadic_parity_with_full_census() {
        let ring = ring_of(&[-2, 1]);
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let ideal = IdealRep::divisor_shifted(sig.clone(), vec![0], 1).unwrap();
        let amb = Ambient::Gamma(ring);
        let depth = 5;
        let profile = ideal_from_confining(
            &amb,
            |s| confining_membership(s, &ideal, depth + 1).unwrap(),
            depth,
        )
        .unwrap();
        // (2) saturates to the unit ideal
        let saturated = IdealRep::divisor(sig, vec![0]).unwrap();
        assert_eq!(profile.ideal, Some(saturated));
        assert!(profile.complete);
        // admissible strings are exactly those with even leading digit
        assert_eq!(profile.prefixes.len(), 1 << depth);
        assert!(profile.prefixes.iter().all(|s| s.len() == depth + 1 && s[0] == 0));
    }

    #[test]
    fn recover_lamplighter_divisors() {
        let amb = Ambient::Lamplighter { n: 12 };
        for m in [1u64, 2, 3, 4, 6, 0] {
            let ideal = IdealRep::lamplighter(12, m).unwrap();
            let profile = ideal_from_confining(
                &amb,
                |s| confining_membership(s, &ideal, 16).unwrap(),
                3,
            )
            .unwrap();
            assert_eq!(profile.ideal, Some(ideal), "m = {m}");
            if m == 6 {
                assert!(profile.complete);
                assert_eq!(profile.prefixes.len(), 16);
            }
        }
    }

    #[test]
    fn recover_rejects_inconsistent_oracle() {
        let amb = Ambient::Lamplighter { n: 6 };
        let profile = ideal_from_confining(
            &amb,
            |s| s.digits().iter().sum::<u64>() % 3 == 1,
            4,
        )
        .unwrap();
        assert_eq!(profile.ideal, None);
        assert!(!profile.complete);
        let ring = ring_of(&[-2, 1]);
        let gprofile = ideal_from_confining(
            &Ambient::Gamma(ring),
            |s| s.digits().iter().sum::<u64>() % 2 == 1,
            4,
        )
        .unwrap();
        assert_eq!(gprofile.ideal, None);
    }

    #[test]
    fn recover_everything_oracle_gives_unit_ideal() {
        let ring = ring_of(&[-2, 0, 1]);
        let profile = ideal_from_confining(&Ambient::Gamma(ring), |_| true, 4).unwrap();
        match profile.ideal {
            Some(IdealRep::DivisorIdeal { exponents, shift, .. }) => {
                assert!(exponents.iter().all(|&e| e == 0));
                assert_eq!(shift, 0);
            }
            other => panic!("unit divisor ideal expected, got {other:?}"),
        }
    }

    #[test]
    fn digit_string_validation() {
        let amb = Ambient::Lamplighter { n: 4 };
        assert!(DigitString::new(amb.clone(), vec![0, 3]).is_ok());
        assert!(DigitString::new(amb, vec![4]).is_err());
        let ring = ring_of(&[-2, 1]);
        assert!(DigitString::new(Ambient::Gamma(ring), vec![2]).is_err());
        assert!(Ambient::Lamplighter { n: 1 }.check().is_err());
    }

    #[test]
    fn serialization_shapes() {
        let lamp = IdealRep::lamplighter(12, 2).unwrap();
        let v = serde_json::to_value(&lamp).unwrap();
        assert_eq!(v["lamplighter_ideal"]["n"], 12);
        assert_eq!(v["lamplighter_ideal"]["m"], 2);
        let sig = factor_signature(&poly(&[-2, 1]), DEFAULT_PRECISION).unwrap();
        let div = IdealRep::divisor_shifted(sig, vec![1], 0).unwrap();
        let w = serde_json::to_value(&div).unwrap();
        assert_eq!(w["divisor_ideal"]["exponents"], serde_json::json!([1]));
        assert_eq!(w["divisor_ideal"]["shift"], 0);
        let s = DigitString::new(Ambient::Lamplighter { n: 4 }, vec![0, 2]).unwrap();
        let sv = serde_json::to_value(&s).unwrap();
        assert_eq!(sv, serde_json::json!({ "digits": [0, 2] }));
    }
}
