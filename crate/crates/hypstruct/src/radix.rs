//! Base-gamma positional arithmetic on the lattice Z^n.
//!
//! A [`GammaRing`] packages a monic integer polynomial p together with a
//! matrix gamma acting on Z^n and a distinguished cyclic vector, so that Z^n
//! is identified with Z[x]/(p) and the residues 0..|p(0)| form a transversal
//! of the sublattice gamma Z^n. Every lattice vector then has a unique digit
//! expansion r = a_0 + a_1*gamma + a_2*gamma^2 + ... with digits in the
//! transversal, and for expanding gamma the digit stream is eventually
//! periodic. [`Address`] is the canonical finite description of such a
//! stream, extended below the radix point to cover gamma^{-k} R.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::exact_kernel::{IntMatrix, IntPoly};

/// Default cap on the infinity norm of carry vectors in address arithmetic.
pub const DEFAULT_CARRY_CAP: u64 = 1 << 20;

/// States explored before digit expansion gives up on finding a cycle.
const STATE_CAP: usize = 1 << 16;

/// Ambient data for digit expansions: the defining polynomial, the acting
/// matrix, the cyclic vector identifying Z^n with Z[x]/(p), and the
/// transversal size d = |p(0)|.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRing {
    p: IntPoly,
    n: usize,
    gamma: IntMatrix,
    v: Vec<BigInt>,
    d: u64,
    d_big: BigInt,
    carry_cap: u64,
    // gamma is the companion matrix of p and v = e_1; digit steps then run in
    // O(n) without a linear solve.
    companion_basis: bool,
}

impl GammaRing {
    /// Ring presented by a monic polynomial; gamma is its companion matrix
    /// and the cyclic vector is e_1.
    pub fn from_poly(p: IntPoly) -> Result<Self, Error> {
        let n = match p.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(Error::Parse("defining polynomial must be nonconstant".into())),
        };
        let gamma = IntMatrix::companion(&p)?;
        let mut v = vec![BigInt::zero(); n];
        v[0] = BigInt::one();
        let (d, d_big) = transversal_size(&p)?;
        Ok(GammaRing {
            p,
            n,
            gamma,
            v,
            d,
            d_big,
            carry_cap: DEFAULT_CARRY_CAP,
            companion_basis: true,
        })
    }

    /// Ring presented by an arbitrary matrix with a certified cyclic vector.
    /// The Krylov matrix [v, gamma v, ..., gamma^{n-1} v] must be unimodular;
    /// that is exactly the condition for the residues 0..d to be a
    /// transversal in this basis.
    pub fn from_matrix(gamma: IntMatrix, v: Vec<BigInt>) -> Result<Self, Error> {
        let n = gamma.dim();
        if v.len() != n {
            return Err(Error::Parse("cyclic vector has wrong length".into()));
        }
        let p = gamma.char_poly();
        let kry = krylov(&gamma, &v);
        let kdet = kry.det();
        if kdet.abs() != BigInt::one() {
            return Err(Error::NotCyclic { bound: n as u64 });
        }
        let (d, d_big) = transversal_size(&p)?;
        let companion_basis =
            IntMatrix::companion(&p).map(|c| c == gamma).unwrap_or(false) && is_e1(&v);
        Ok(GammaRing {
            p,
            n,
            gamma,
            v,
            d,
            d_big,
            carry_cap: DEFAULT_CARRY_CAP,
            companion_basis,
        })
    }

    /// Replaces the carry cap used by address arithmetic.
    pub fn with_carry_cap(mut self, cap: u64) -> Self {
        self.carry_cap = cap;
        self
    }

    pub fn defining_poly(&self) -> &IntPoly {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &IntMatrix {
        &self.gamma
    }

    pub fn cyclic_vector(&self) -> &[BigInt] {
        &self.v
    }

    pub fn transversal_size(&self) -> u64 {
        self.d
    }

    /// One digit step: the unique a in [0, d) with x - a*v in gamma Z^n,
    /// together with the exact preimage gamma^{-1}(x - a*v).
    fn digit_step(&self, x: &[BigInt]) -> (u64, Vec<BigInt>) {
        self.digit_step_scaled(x, &BigInt::one())
            .expect("unit denominator always has a digit")
    }

    /// Digit step for the scaled state x/m with m coprime to d. The digit a
    /// satisfies x - a*m*v in gamma Z^n; the next numerator is its exact
    /// gamma-preimage, which stays integral because gamma R-hat meets Z^n in
    /// gamma Z^n.
    fn digit_step_scaled(&self, x: &[BigInt], m: &BigInt) -> Result<(u64, Vec<BigInt>), Error> {
        if self.companion_basis {
            let e = m.mod_floor(&self.d_big).extended_gcd(&self.d_big);
            if !e.gcd.is_one() {
                return Err(Error::NotIntegral(format!(
                    "denominator {} shares a factor with the transversal size {}",
                    m, self.d
                )));
            }
            let a = (&x[0] * e.x).mod_floor(&self.d_big);
            let digit = a.to_u64().expect("residue fits: a < d");
            let w0 = &x[0] - &a * m;
            // Companion solve: columns of gamma are e_2, ..., e_n and
            // -(p_0, ..., p_{n-1}), so back-substitution starts from the top
            // coordinate.
            let p0 = self.p.coeff(0);
            let mut next = vec![BigInt::zero(); self.n];
            let top = -w0 / &p0;
            for i in 1..self.n {
                next[i - 1] = &x[i] + self.p.coeff(i) * &top;
            }
            next[self.n - 1] = top;
            return Ok((digit, next));
        }
        for t in 0..self.d {
            let tm = BigInt::from(t) * m;
            let w: Vec<BigInt> = x.iter().zip(&self.v).map(|(xi, vi)| xi - &tm * vi).collect();
            if let Some(next) = self.gamma.solve_integer(&w) {
                return Ok((t, next));
            }
        }
        Err(Error::NotIntegral(format!(
            "no residue in [0, {}) matches the state; denominator {} is not invertible here",
            self.d, m
        )))
    }

    /// Multiplies two lattice vectors as ring elements: a is rewritten in the
    /// Krylov basis and applied to b as a polynomial in gamma.
    fn ring_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sigma = if self.companion_basis {
            a.to_vec()
        } else {
            krylov(&self.gamma, &self.v)
                .solve_integer(a)
                .expect("Krylov matrix is unimodular")
        };
        let mut acc: Vec<BigInt> = b.iter().map(|bi| &sigma[0] * bi).collect();
        let mut w = b.to_vec();
        for s in sigma.iter().skip(1) {
            w = self.gamma.mul_vec(&w);
            for (ai, wi) in acc.iter_mut().zip(&w) {
                *ai += s * wi;
            }
        }
        acc
    }
}

fn transversal_size(p: &IntPoly) -> Result<(u64, BigInt), Error> {
    let c = p.constant_term();
    if !p.is_monic() {
        return Err(Error::NonMonic);
    }
    if c.is_zero() || c.abs().is_one() {
        return Err(Error::DegenerateConstant);
    }
    let d_big = c.abs();
    let d = d_big
        .to_u64()
        .ok_or_else(|| Error::Parse("transversal size exceeds u64".into()))?;
    Ok((d, d_big))
}

fn krylov(gamma: &IntMatrix, v: &[BigInt]) -> IntMatrix {
    let n = gamma.dim();
    let mut cols = Vec::with_capacity(n);
    let mut w = v.to_vec();
    for _ in 0..n {
        cols.push(w.clone());
        w = gamma.mul_vec(&w);
    }
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for col in &cols {
            entries.push(col[r].clone());
        }
    }
    IntMatrix::new(n, entries)
}

fn is_e1(v: &[BigInt]) -> bool {
    v.first().map(|c| c.is_one()).unwrap_or(false) && v.iter().skip(1).all(|c| c.is_zero())
}

/// Canonical eventually periodic digit expansion. `frac_digits` holds the
/// coefficients of gamma^{-k}, ..., gamma^{-1} (deepest first), `preperiod`
/// the digits of gamma^0, gamma^1, ... before the repeating block, and
/// `period` the minimal repeating block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Address {
    #[serde(skip)]
    ring: Arc<GammaRing>,
    #[serde(rename = "frac")]
    frac_digits: Vec<u64>,
    #[serde(rename = "pre")]
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl Address {
    /// Builds an address from raw digit lists and puts it in canonical form.
    pub fn new(
        ring: &GammaRing,
        frac_digits: Vec<u64>,
        preperiod: Vec<u64>,
        period: Vec<u64>,
    ) -> Result<Self, Error> {
        if period.is_empty() {
            return Err(Error::Parse("period block must be nonempty".into()));
        }
        for &a in frac_digits.iter().chain(&preperiod).chain(&period) {
            if a >= ring.d {
                return Err(Error::Parse(format!(
                    "digit {} outside the transversal [0, {})",
                    a, ring.d
                )));
            }
        }
        Ok(Self::canonical(
            Arc::new(ring.clone()),
            frac_digits,
            preperiod,
            period,
        ))
    }

    fn canonical(
        ring: Arc<GammaRing>,
        mut frac: Vec<u64>,
        mut pre: Vec<u64>,
        mut per: Vec<u64>,
    ) -> Self {
        // Minimal repeating block: the true period of an eventually periodic
        // stream divides any witnessed one.
        let k = per.len();
        for l in 1..=k {
            if k % l == 0 && per.iter().enumerate().all(|(i, a)| *a == per[i % l]) {
                per.truncate(l);
                break;
            }
        }
        // Absorb preperiod digits that already agree with the cycle.
        while let Some(&last) = pre.last() {
            if last == *per.last().expect("period nonempty") {
                pre.pop();
                per.rotate_right(1);
            } else {
                break;
            }
        }
        // Trailing zeros at the deepest fractional positions carry no value.
        while frac.first() == Some(&0) {
            frac.remove(0);
        }
        Address {
            ring,
            frac_digits: frac,
            preperiod: pre,
            period: per,
        }
    }

    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn frac_digits(&self) -> &[u64] {
        &self.frac_digits
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_integral(&self) -> bool {
        self.frac_digits.is_empty()
    }

    /// Digit at signed position i (coefficient of gamma^i); positions below
    /// the stored fractional depth are zero.
    pub fn digit_at(&self, pos: i64) -> u64 {
        let f = self.frac_digits.len() as i64;
        if pos < 0 {
            let idx = pos + f;
            if idx < 0 {
                0
            } else {
                self.frac_digits[idx as usize]
            }
        } else {
            let pos = pos as usize;
            if pos < self.preperiod.len() {
                self.preperiod[pos]
            } else {
                self.period[(pos - self.preperiod.len()) % self.period.len()]
            }
        }
    }

    /// Exact value as (numerator vector, integer denominator, radix shift):
    /// the address represents (y/m) * gamma^{-f}. The denominator comes from
    /// inverting 1 - gamma^k on the periodic tail and is always coprime to
    /// the transversal size.
    fn value(&self) -> (Vec<BigInt>, BigInt, usize) {
        let ring = &*self.ring;
        let n = ring.n;
        let f = self.frac_digits.len();
        let head: Vec<u64> = self
            .frac_digits
            .iter()
            .chain(&self.preperiod)
            .copied()
            .collect();
        // Head value: sum of a_i gamma^i v over the non-repeating digits.
        let mut head_val = vec![BigInt::zero(); n];
        let mut w = ring.v.clone();
        for &a in &head {
            for (h, wi) in head_val.iter_mut().zip(&w) {
                *h += BigInt::from(a) * wi;
            }
            w = ring.gamma.mul_vec(&w);
        }
        // Periodic tail: x = (1 - gamma^k)^{-1} w_per, exact over Q.
        let k = self.period.len() as u32;
        let mut per_val = vec![BigInt::zero(); n];
        let mut u = ring.v.clone();
        for &a in &self.period {
            for (h, ui) in per_val.iter_mut().zip(&u) {
                *h += BigInt::from(a) * ui;
            }
            u = ring.gamma.mul_vec(&u);
        }
        let m = IntMatrix::identity(n).sub(&ring.gamma.pow(k));
        let inv = m
            .inverse_rational()
            .expect("1 - gamma^k is invertible when no eigenvalue is a root of unity");
        let tail: Vec<BigRational> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| &inv[r][c] * BigRational::from(per_val[c].clone()))
                    .sum()
            })
            .collect();
        // Shift the tail past the head: value = head + gamma^{head len} tail.
        let shift = ring.gamma.pow(head.len() as u32);
        let shifted: Vec<BigRational> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| BigRational::from(shift.entry(r, c).clone()) * &tail[c])
                    .sum::<BigRational>()
                    + BigRational::from(head_val[r].clone())
            })
            .collect();
        let mut denom = BigInt::one();
        for q in &shifted {
            denom = denom.lcm(q.denom());
        }
        let y: Vec<BigInt> = shifted
            .iter()
            .map(|q| q.numer() * (&denom / q.denom()))
            .collect();
        (y, denom, f)
    }
}

impl fmt::Display for Address {
    /// Digits are written high position to low, with the repeating block in
    /// parentheses on the left and a radix point before the fractional part.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.ring.d > 10;
        let join = |digits: &mut dyn Iterator<Item = u64>| -> String {
            let parts: Vec<String> = digits.map(|a| a.to_string()).collect();
            parts.join(if wide { "," } else { "" })
        };
        write!(out, "({})", join(&mut self.period.iter().rev().copied()))?;
        write!(out, "{}", join(&mut self.preperiod.iter().rev().copied()))?;
        if !self.frac_digits.is_empty() {
            write!(out, ".{}", join(&mut self.frac_digits.iter().rev().copied()))?;
        }
        Ok(())
    }
}

/// First `count` digits of the expansion of the lattice vector `r`.
pub fn digits(ring: &GammaRing, r: &[BigInt], count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut state = r.to_vec();
    for _ in 0..count {
        let (a, next) = ring.digit_step(&state);
        out.push(a);
        state = next;
    }
    out
}

/// Full eventually periodic address of a lattice vector. The digit states
/// are exact, so the expansion is periodic exactly when a state recurs; a
/// ring that is not expanding makes the states wander and trips the cap.
pub fn periodic_address(ring: &GammaRing, r: &[BigInt]) -> Result<Address, Error> {
    expand_scaled(ring, r.to_vec(), BigInt::one(), 0)
}

/// Address of r / gamma^k. The digits of r simply shift k places past the
/// radix point.
pub fn fractional_expand(ring: &GammaRing, r: &[BigInt], k: usize) -> Result<Address, Error> {
    expand_scaled(ring, r.to_vec(), BigInt::one(), k)
}

/// Expands (y/m) * gamma^{-f}. States are numerator vectors over the fixed
/// denominator m; a recurring state closes the period.
fn expand_scaled(ring: &GammaRing, y: Vec<BigInt>, m: BigInt, f: usize) -> Result<Address, Error> {
    let mut m = m;
    let mut y = y;
    // Reduce the scalar denominator against the numerator content.
    let mut g = m.clone();
    for yi in &y {
        g = g.gcd(yi);
    }
    if !g.is_one() {
        m /= &g;
        for yi in &mut y {
            *yi /= &g;
        }
    }
    let norm_cap = state_norm_cap(&y, &ring.d_big);
    let mut frac = Vec::with_capacity(f);
    let mut state = y;
    for _ in 0..f {
        let (a, next) = ring.digit_step_scaled(&state, &m)?;
        frac.push(a);
        state = next;
    }
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut digs: Vec<u64> = Vec::new();
    loop {
        if let Some(&first) = seen.get(&state) {
            let per = digs.split_off(first);
            return Ok(Address::canonical(
                Arc::new(ring.clone()),
                frac,
                digs,
                per,
            ));
        }
        if seen.len() >= STATE_CAP || state.iter().any(|c| c.abs() > norm_cap) {
            return Err(Error::NotExpanding(format!(
                "digit states did not recur within {} steps",
                seen.len()
            )));
        }
        seen.insert(state.clone(), digs.len());
        let (a, next) = ring.digit_step_scaled(&state, &m)?;
        digs.push(a);
        state = next;
    }
}

/// Generous headroom over any state reachable from x0 in an expanding ring;
/// exponential escape hits it quickly, so divergence is cheap to detect.
fn state_norm_cap(x0: &[BigInt], d: &BigInt) -> BigInt {
    let mut base = d.clone();
    for c in x0 {
        if c.abs() > base {
            base = c.abs();
        }
    }
    (base + 2) << 48
}

/// Digit-stream sum with exact carries: at each position the two digits and
/// the incoming carry form a lattice vector whose digit step emits the
/// output digit and the next carry. Carries stay bounded over an expanding
/// ring, so the machine state (two stream phases plus carry) recurs.
pub fn address_add(a: &Address, b: &Address) -> Result<Address, Error> {
    let ring = same_ring(a, b)?;
    let n = ring.n;
    let f = a.frac_digits.len().max(b.frac_digits.len()) as i64;
    let na = a.preperiod.len();
    let nb = b.preperiod.len();
    let (ka, kb) = (a.period.len(), b.period.len());
    let hash_from = na.max(nb) as i64;
    let cap = BigInt::from(ring.carry_cap);

    let mut carry = vec![BigInt::zero(); n];
    let mut out: Vec<u64> = Vec::new();
    let mut seen: HashMap<(usize, usize, Vec<BigInt>), i64> = HashMap::new();
    let mut pos = -f;
    let (cut, end) = loop {
        if pos >= hash_from {
            let key = (
                (pos as usize - na) % ka,
                (pos as usize - nb) % kb,
                carry.clone(),
            );
            if let Some(prev) = seen.insert(key, pos) {
                break (prev, pos);
            }
        }
        let da = BigInt::from(a.digit_at(pos));
        let db = BigInt::from(b.digit_at(pos));
        let s: Vec<BigInt> = (0..n)
            .map(|i| (&da + &db) * &ring.v[i] + &carry[i])
            .collect();
        let (c, next) = ring.digit_step(&s);
        if next.iter().any(|c| c.abs() > cap) {
            return Err(Error::CarryOverflow {
                bound: ring.carry_cap,
            });
        }
        out.push(c);
        carry = next;
        pos += 1;
    };

    let f = f as usize;
    let frac = out[..f].to_vec();
    let pre = out[f..f + cut as usize].to_vec();
    let per = out[f + cut as usize..f + end as usize].to_vec();
    Ok(Address::canonical(Arc::new(ring.clone()), frac, pre, per))
}

/// Digit-stream product. The convolution carries of two infinite streams
/// grow without bound, so instead the exact values are multiplied in the
/// ring and the product is re-expanded; the result agrees with the
/// convolution digits to every depth.
pub fn address_mul(a: &Address, b: &Address) -> Result<Address, Error> {
    let ring = same_ring(a, b)?;
    let (ya, ma, fa) = a.value();
    let (yb, mb, fb) = b.value();
    let y = ring.ring_mul(&ya, &yb);
    expand_scaled(ring, y, ma * mb, fa + fb)
}

fn same_ring<'a>(a: &'a Address, b: &Address) -> Result<&'a GammaRing, Error> {
    if *a.ring != *b.ring {
        return Err(Error::RingMismatch);
    }
    Ok(&a.ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(coeffs: &[i64]) -> GammaRing {
        GammaRing::from_poly(IntPoly::from_i64(coeffs)).unwrap()
    }

    fn base2() -> GammaRing {
        // x - 2: plain binary.
        ring(&[-2, 1])
    }

    fn bv(coords: &[i64]) -> Vec<BigInt> {
        coords.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn digits_of_minus_one_base_two() {
        assert_eq!(digits(&base2(), &bv(&[-1]), 8), vec![1; 8]);
    }

    #[test]
    fn digits_of_zero_are_zero() {
        assert_eq!(digits(&base2(), &bv(&[0]), 6), vec![0; 6]);
        assert_eq!(digits(&ring(&[-2, 0, 1]), &bv(&[0, 0]), 6), vec![0; 6]);
    }

    #[test]
    fn digits_alternate_for_minus_one_over_sqrt_two() {
        // x^2 - 2: -1 expands as 1 + gamma^2 + gamma^4 + ...
        let r = ring(&[-2, 0, 1]);
        assert_eq!(digits(&r, &bv(&[-1, 0]), 8), vec![1, 0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn periodic_address_of_minus_thirteen() {
        let a = periodic_address(&base2(), &bv(&[-13])).unwrap();
        assert_eq!(a.preperiod(), &[1, 1, 0, 0]);
        assert_eq!(a.period(), &[1]);
        assert!(a.is_integral());
    }

    #[test]
    fn periodic_address_cubic_block() {
        // x^3 - x - 2: -1 expands with repeating block 1, 1, 0 from the start.
        let r = ring(&[-2, -1, 0, 1]);
        let a = periodic_address(&r, &bv(&[-1, 0, 0])).unwrap();
        assert_eq!(a.preperiod(), &[] as &[u64]);
        assert_eq!(a.period(), &[1, 1, 0]);
    }

    #[test]
    fn periodic_address_finite_expansion() {
        let a = periodic_address(&base2(), &bv(&[5])).unwrap();
        assert_eq!(a.preperiod(), &[1, 0, 1]);
        assert_eq!(a.period(), &[0]);
    }

    #[test]
    fn partial_sums_land_in_gamma_powers() {
        // r - (a_0 + ... + a_{k-1} gamma^{k-1}) v must lie in gamma^k Z^n.
        let r = ring(&[-2, 0, 1]);
        let x = bv(&[7, -3]);
        let digs = digits(&r, &x, 8);
        for k in 1..=8usize {
            let mut partial = vec![BigInt::zero(); 2];
            let mut w = r.cyclic_vector().to_vec();
            for &a in &digs[..k] {
                for (p, wi) in partial.iter_mut().zip(&w) {
                    *p += BigInt::from(a) * wi;
                }
                w = r.gamma().mul_vec(&w);
            }
            let diff: Vec<BigInt> = x.iter().zip(&partial).map(|(a, b)| a - b).collect();
            assert!(r.gamma().pow(k as u32).solve_integer(&diff).is_some());
        }
    }

    #[test]
    fn general_matrix_agrees_with_companion_presentation() {
        // gamma = [[2,1],[0,3]] with cyclic vector (0,1); char poly
        // x^2 - 5x + 6. The vector (3,4) is -5 + 3x in the Krylov basis.
        let gamma = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let g = GammaRing::from_matrix(gamma, bv(&[0, 1])).unwrap();
        let c = ring(&[6, -5, 1]);
        assert_eq!(g.transversal_size(), 6);
        assert!(!g.companion_basis);
        assert_eq!(
            digits(&g, &bv(&[3, 4]), 12),
            digits(&c, &bv(&[-5, 3]), 12)
        );
    }

    #[test]
    fn non_cyclic_vector_rejected() {
        let gamma = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        assert_eq!(
            GammaRing::from_matrix(gamma, bv(&[1, 1])),
            Err(Error::NotCyclic { bound: 2 })
        );
    }

    #[test]
    fn unit_constant_rejected() {
        let err = GammaRing::from_poly(IntPoly::from_i64(&[-1, 1, 1])).unwrap_err();
        assert_eq!(err, Error::DegenerateConstant);
    }

    #[test]
    fn non_expanding_state_escape_detected() {
        // x^2 - 4x + 2 has a root 2 - sqrt(2) inside the unit circle, so the
        // digit states of -1 grow exponentially instead of recurring.
        let r = ring(&[2, -4, 1]);
        assert!(matches!(
            periodic_address(&r, &bv(&[-1, 0])),
            Err(Error::NotExpanding(_))
        ));
    }

    #[test]
    fn add_three_plus_five() {
        let b = base2();
        let s = address_add(
            &periodic_address(&b, &bv(&[3])).unwrap(),
            &periodic_address(&b, &bv(&[5])).unwrap(),
        )
        .unwrap();
        assert_eq!(s, periodic_address(&b, &bv(&[8])).unwrap());
    }

    #[test]
    fn add_collapses_infinite_carry() {
        let b = base2();
        let zero = periodic_address(&b, &bv(&[0])).unwrap();
        let s = address_add(
            &periodic_address(&b, &bv(&[-1])).unwrap(),
            &periodic_address(&b, &bv(&[1])).unwrap(),
        )
        .unwrap();
        assert_eq!(s, zero);

        let q = ring(&[-2, 0, 1]);
        let s = address_add(
            &periodic_address(&q, &bv(&[-1, 0])).unwrap(),
            &periodic_address(&q, &bv(&[1, 0])).unwrap(),
        )
        .unwrap();
        assert_eq!(s, periodic_address(&q, &bv(&[0, 0])).unwrap());
    }

    #[test]
    fn add_requires_matching_rings() {
        let a = periodic_address(&base2(), &bv(&[1])).unwrap();
        let b = periodic_address(&ring(&[-3, 1]), &bv(&[1])).unwrap();
        assert_eq!(address_add(&a, &b), Err(Error::RingMismatch));
    }

    #[test]
    fn carry_cap_trips() {
        let tight = base2().with_carry_cap(0);
        let m = periodic_address(&tight, &bv(&[-1])).unwrap();
        assert_eq!(
            address_add(&m, &m),
            Err(Error::CarryOverflow { bound: 0 })
        );
    }

    #[test]
    fn mul_three_times_five() {
        let b = base2();
        let p = address_mul(
            &periodic_address(&b, &bv(&[3])).unwrap(),
            &periodic_address(&b, &bv(&[5])).unwrap(),
        )
        .unwrap();
        assert_eq!(p, periodic_address(&b, &bv(&[15])).unwrap());
    }

    #[test]
    fn mul_minus_one_squared_is_one() {
        let b = base2();
        let m = periodic_address(&b, &bv(&[-1])).unwrap();
        assert_eq!(
            address_mul(&m, &m).unwrap(),
            periodic_address(&b, &bv(&[1])).unwrap()
        );
    }

    #[test]
    fn mul_by_zero_is_zero() {
        let b = base2();
        let zero = periodic_address(&b, &bv(&[0])).unwrap();
        let m = periodic_address(&b, &bv(&[-13])).unwrap();
        assert_eq!(address_mul(&m, &zero).unwrap(), zero);
    }

    #[test]
    fn fractional_three_halves() {
        let a = fractional_expand(&base2(), &bv(&[3]), 1).unwrap();
        assert_eq!(a.frac_digits(), &[1]);
        assert_eq!(a.preperiod(), &[1]);
        assert_eq!(a.period(), &[0]);
        assert_eq!(a.to_string(), "(0)1.1");
    }

    #[test]
    fn fractional_whole_value_normalizes() {
        // 4 / gamma^2 = 1 in base 2; the fractional zeros disappear.
        let a = fractional_expand(&base2(), &bv(&[4]), 2).unwrap();
        assert!(a.is_integral());
        assert_eq!(a, periodic_address(&base2(), &bv(&[1])).unwrap());
    }

    #[test]
    fn fractional_shift_moves_the_point() {
        let b = base2();
        let k1 = fractional_expand(&b, &bv(&[3]), 1).unwrap();
        let k2 = fractional_expand(&b, &bv(&[3]), 2).unwrap();
        for pos in -4..6 {
            assert_eq!(k1.digit_at(pos - 1), k2.digit_at(pos - 2));
        }
        assert_eq!(k2.frac_digits(), &[1, 1]);
    }

    #[test]
    fn rational_state_expansion() {
        // -1/3 in base 2 is the pure cycle 1, 0.
        let a = expand_scaled(&base2(), bv(&[-1]), BigInt::from(3), 0).unwrap();
        assert_eq!(a.preperiod(), &[] as &[u64]);
        assert_eq!(a.period(), &[1, 0]);
    }

    #[test]
    fn rational_square_through_mul() {
        // (-1/3)^2 = 1/9 = .(011100) shifted: digit 1 then cycle 0,0,1,1,1,0.
        let b = base2();
        let third = Address::new(&b, vec![], vec![], vec![1, 0]).unwrap();
        let ninth = address_mul(&third, &third).unwrap();
        assert_eq!(ninth.preperiod(), &[1]);
        assert_eq!(ninth.period(), &[0, 0, 1, 1, 1, 0]);
    }

    #[test]
    fn half_is_not_two_adic() {
        let err = expand_scaled(&base2(), bv(&[1]), BigInt::from(2), 0).unwrap_err();
        assert!(matches!(err, Error::NotIntegral(_)));
    }

    #[test]
    fn canonical_form_minimizes_and_absorbs() {
        let b = base2();
        let a = Address::new(&b, vec![], vec![1], vec![1, 1]).unwrap();
        assert_eq!(a.preperiod(), &[] as &[u64]);
        assert_eq!(a.period(), &[1]);
        assert_eq!(a, periodic_address(&b, &bv(&[-1])).unwrap());
    }

    #[test]
    fn display_layout() {
        let a = periodic_address(&base2(), &bv(&[-13])).unwrap();
        assert_eq!(a.to_string(), "(1)0011");
    }

    #[test]
    fn json_shape() {
        let a = fractional_expand(&base2(), &bv(&[3]), 1).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"frac":[1],"pre":[1],"period":[0]}"#
        );
    }
}
