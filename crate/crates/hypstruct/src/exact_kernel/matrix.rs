use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::poly::serialize_bigint;
use super::{Error, IntPoly};

/// Square integer matrix, row-major. The determinant is computed on first
/// request and cached; the entries are immutable after construction so the
/// cache can never go stale.
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
    det_cache: OnceLock<BigInt>,
}

impl Clone for IntMatrix {
    fn clone(&self) -> Self {
        let det_cache = OnceLock::new();
        if let Some(d) = self.det_cache.get() {
            let _ = det_cache.set(d.clone());
        }
        IntMatrix {
            n: self.n,
            entries: self.entries.clone(),
            det_cache,
        }
    }
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}
impl Eq for IntMatrix {}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        IntMatrix {
            n,
            entries,
            det_cache: OnceLock::new(),
        }
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Self {
        Self::new(n, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            entries.extend(r.iter().map(|&e| BigInt::from(e)));
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self::new(n, entries)
    }

    /// Companion matrix of a monic polynomial in the multiplication-by-x
    /// convention: column i maps to e_{i+1}, the last column holds the
    /// negated lower coefficients.
    pub fn companion(p: &IntPoly) -> Result<Self, Error> {
        if !p.is_monic() {
            return Err(Error::NonMonic);
        }
        let n = p.degree().unwrap();
        if n == 0 {
            return Err(Error::NonMonic);
        }
        let mut m = vec![BigInt::zero(); n * n];
        for i in 1..n {
            m[i * n + (i - 1)] = BigInt::one();
        }
        for i in 0..n {
            m[i * n + (n - 1)] = -p.coeff(i);
        }
        Ok(Self::new(n, m))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.n).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entry(k, j);
                }
            }
        }
        IntMatrix::new(n, out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.n {
                    s += self.entry(i, j) * &v[j];
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix::new(
            self.n,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Fraction-free Bareiss determinant; exact, cached.
    pub fn det(&self) -> BigInt {
        self.det_cache
            .get_or_init(|| {
                let n = self.n;
                if n == 0 {
                    return BigInt::one();
                }
                let mut m = self.entries.clone();
                let mut sign = BigInt::one();
                let mut prev = BigInt::one();
                for k in 0..n - 1 {
                    if m[k * n + k].is_zero() {
                        let swap = (k + 1..n).find(|&r| !m[r * n + k].is_zero());
                        match swap {
                            None => return BigInt::zero(),
                            Some(r) => {
                                for c in 0..n {
                                    m.swap(k * n + c, r * n + c);
                                }
                                sign = -sign;
                            }
                        }
                    }
                    for i in k + 1..n {
                        for j in k + 1..n {
                            let num = &m[i * n + j] * &m[k * n + k]
                                - &m[i * n + k] * &m[k * n + j];
                            m[i * n + j] = &num / &prev;
                        }
                        m[i * n + k] = BigInt::zero();
                    }
                    prev = m[k * n + k].clone();
                }
                sign * m[(n - 1) * n + (n - 1)].clone()
            })
            .clone()
    }

    /// Exact rational inverse. Errors on singular input.
    pub fn inverse_rational(&self) -> Result<Vec<Vec<BigRational>>, Error> {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self.entry(i, j).clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => return Err(Error::SingularMatrix),
            };
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for j in 0..2 * n {
                a[col][j] = &a[col][j] * &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Solves self * x = b over the integers; None when the exact solution
    /// has a non-integer coordinate.
    pub fn solve_integer(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let inv = self.inverse_rational().ok()?;
        let mut out = Vec::with_capacity(self.n);
        for row in &inv {
            let mut s = BigRational::zero();
            for (c, bi) in row.iter().zip(b) {
                s += c * BigRational::from_integer(bi.clone());
            }
            if !s.denom().is_one() {
                return None;
            }
            out.push(s.to_integer());
        }
        Some(out)
    }

    /// Characteristic polynomial det(xI − γ) by the Faddeev–LeVerrier
    /// recurrence; all divisions are exact over Z.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let mut tr = BigInt::zero();
            for i in 0..n {
                tr += m.entry(i, i);
            }
            let c = -tr / BigInt::from(k);
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let idx = i * n + i;
                m.entries[idx] = &m.entries[idx] + &c;
            }
            m.det_cache = OnceLock::new();
        }
        IntPoly::new(coeffs)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entry(i, j).to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }
}

/// Matrices parse from semicolon-separated rows of comma-separated entries,
/// e.g. "2,0,0;0,3,1;0,0,3".
impl FromStr for IntMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for row in s.split(';') {
            let mut r = Vec::new();
            for part in row.split(',') {
                let t = part.trim();
                r.push(
                    t.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {t:?}")))?,
                );
            }
            rows.push(r);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        Ok(IntMatrix::new(n, rows.into_iter().flatten().collect()))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{}]", self)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                struct B<'a>(&'a BigInt);
                impl Serialize for B<'_> {
                    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                        serialize_bigint(self.0, s)
                    }
                }
                for c in self.0 {
                    seq.serialize_element(&B(c))?;
                }
                seq.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.n))?;
        for i in 0..self.n {
            seq.serialize_element(&Row(&self.entries[i * self.n..(i + 1) * self.n]))?;
        }
        seq.end()
    }
}

/// Column-style Hermite normal form of a rectangular integer matrix given as
/// rows. Returns (H, U) with H = M·U, U unimodular, H in lower-triangular
/// column echelon form: pivots positive, entries left of a pivot in its row
/// reduced into [0, pivot), zero columns pushed to the right.
pub fn hnf(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut h: Vec<Vec<BigInt>> = rows.to_vec();
    for r in &h {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let col_op = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        // column dst -= q * column src
        for row in h.iter_mut() {
            let t = q * &row[src];
            row[dst] = &row[dst] - t;
        }
        for row in u.iter_mut() {
            let t = q * &row[src];
            row[dst] = &row[dst] - t;
        }
    };
    let col_swap = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in h.iter_mut() {
            row.swap(a, b);
        }
        for row in u.iter_mut() {
            row.swap(a, b);
        }
    };
    let col_neg = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, c: usize| {
        for row in h.iter_mut() {
            row[c] = -row[c].clone();
        }
        for row in u.iter_mut() {
            row[c] = -row[c].clone();
        }
    };

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_col = 0usize;
    for r in 0..nrows {
        if next_col >= ncols {
            break;
        }
        // gcd-eliminate across columns next_col.. in row r
        loop {
            let nz: Vec<usize> = (next_col..ncols).filter(|&c| !h[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            // smallest |entry| becomes the reducer
            let &best = nz
                .iter()
                .min_by_key(|&&c| h[r][c].abs())
                .unwrap();
            for &c in &nz {
                if c == best {
                    continue;
                }
                let q = div_floor_nearest(&h[r][c], &h[r][best]);
                if !q.is_zero() {
                    col_op(&mut h, &mut u, c, best, &q);
                }
            }
        }
        let nz = (next_col..ncols).find(|&c| !h[r][c].is_zero());
        if let Some(c) = nz {
            if c != next_col {
                col_swap(&mut h, &mut u, next_col, c);
            }
            if h[r][next_col].is_negative() {
                col_neg(&mut h, &mut u, next_col);
            }
            pivots.push((r, next_col));
            next_col += 1;
        }
    }
    // reduce entries left of each pivot into [0, pivot)
    for &(r, c) in &pivots {
        for dst in 0..c {
            let p = h[r][c].clone();
            let q = h[r][dst].div_floor(&p);
            if !q.is_zero() {
                col_op(&mut h, &mut u, dst, c, &q);
            }
        }
    }
    (h, u)
}

/// Rounded quotient: q minimizing |a - q b|; keeps HNF intermediates small.
fn div_floor_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if r.abs() * 2 > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Lattice membership: does v lie in the column span of H (an HNF output)?
pub fn hnf_contains(h: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let nrows = h.len();
    assert_eq!(v.len(), nrows);
    let ncols = if nrows == 0 { 0 } else { h[0].len() };
    let mut target = v.to_vec();
    let mut col = 0usize;
    for r in 0..nrows {
        if col < ncols && !h[r][col].is_zero() {
            let (q, rem) = target[r].div_mod_floor(&h[r][col]);
            if !rem.is_zero() {
                return false;
            }
            for i in 0..nrows {
                let t = &q * &h[i][col];
                target[i] = &target[i] - t;
            }
            col += 1;
        } else if !target[r].is_zero() {
            return false;
        }
    }
    target.iter().all(|t| t.is_zero())
}
