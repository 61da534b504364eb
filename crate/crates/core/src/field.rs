//! Small finite fields and exact linear algebra over them.
//!
//! Elements of `GF(p^k)` are encoded as integers `c0 + c1 p + ... `, the
//! coefficients of a polynomial reduced modulo a fixed irreducible one.

use std::fmt;

use crate::error::{Error, Result};

pub type FElem = u8;

/// `GF(q)` for a prime `q < 256`, or `q` in {4, 8, 9}.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: usize,
    p: usize,
    add: Vec<FElem>,
    mul: Vec<FElem>,
    neg: Vec<FElem>,
    inv: Vec<FElem>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        // low-to-high coefficients of the monic modulus, leading term omitted
        let (p, modulus): (usize, &[usize]) = match q {
            4 => (2, &[1, 1]),
            8 => (2, &[1, 1, 0]),
            9 => (3, &[1, 0]),
            q if is_prime(q) && q < 256 => (q, &[]),
            0 | 1 => return Err(Error::UnsupportedField(format!("{q} is not a field order"))),
            q => return Err(Error::UnsupportedField(format!("GF({q}) is not supported"))),
        };
        let k = modulus.len().max(1);
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; k];
            for c in d.iter_mut() {
                *c = x % p;
                x /= p;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for x in 0..q {
            for y in 0..q {
                let (dx, dy) = (digits(x), digits(y));
                let sum: Vec<usize> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[x * q + y] = encode(&sum) as FElem;
                let prod = if modulus.is_empty() {
                    x * y % p
                } else {
                    let mut full = vec![0; 2 * k - 1];
                    for i in 0..k {
                        for j in 0..k {
                            full[i + j] = (full[i + j] + dx[i] * dy[j]) % p;
                        }
                    }
                    // x^k = -modulus(x)
                    for deg in (k..full.len()).rev() {
                        let c = full[deg];
                        full[deg] = 0;
                        for (i, &m) in modulus.iter().enumerate() {
                            full[deg - k + i] = (full[deg - k + i] + c * (p - m % p)) % p;
                        }
                    }
                    encode(&full[..k])
                };
                mul[x * q + y] = prod as FElem;
            }
        }
        let neg = (0..q)
            .map(|x| (0..q).find(|&y| add[x * q + y] == 0).expect("additive inverse") as FElem)
            .collect();
        let mut inv = vec![0; q];
        for (x, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = (1..q)
                .find(|&y| mul[x * q + y] == 1)
                .ok_or_else(|| Error::UnsupportedField(format!("{x} has no inverse in GF({q})")))?
                as FElem;
        }
        let field = FiniteField { q, p, add, mul, neg, inv };
        if q <= 16 {
            field.check_axioms()?;
        }
        Ok(field)
    }

    /// Parses a field description: an order, or one of the markers for an
    /// infinite field, which are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "R" | "C" | "inf" | "infinite" => Err(Error::UnsupportedField(
                "infinite fields need no cover argument and are not handled".into(),
            )),
            t => t
                .parse::<usize>()
                .map_err(|_| Error::UnsupportedField(format!("bad field order `{t}`")))
                .and_then(FiniteField::new),
        }
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q as FElem;
        for a in 0..q {
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::UnsupportedField("commutativity fails".into()));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return Err(Error::UnsupportedField("field axioms fail".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: FElem) -> FElem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FElem) -> Option<FElem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn check(&self, a: usize) -> Result<FElem> {
        if a < self.q {
            Ok(a as FElem)
        } else {
            Err(Error::OutOfRange { element: a, size: self.q })
        }
    }

    /// All vectors of length `dim`, counting in base `q` with the last
    /// coordinate fastest, capped at `cap` vectors.
    pub fn vectors(&self, dim: usize, cap: usize) -> Result<Vec<Vec<FElem>>> {
        let count = u32::try_from(dim)
            .ok()
            .and_then(|d| self.q.checked_pow(d))
            .filter(|&c| c <= cap)
            .ok_or_else(|| Error::cap(format!("vectors of GF({})^{dim}", self.q), cap as u64))?;
        Ok((0..count)
            .map(|mut i| {
                let mut v = vec![0; dim];
                for c in v.iter_mut().rev() {
                    *c = (i % self.q) as FElem;
                    i /= self.q;
                }
                v
            })
            .collect())
    }
}

/// A dense matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &FiniteField, rows: &[Vec<usize>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::LinearAlgebra("ragged matrix rows".into()));
            }
            for &x in row {
                data.push(field.check(x)?);
            }
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// The matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<FElem>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FElem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row_vecs(&self) -> Vec<Vec<FElem>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[FElem]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<FElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, field: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &FiniteField, v: &[FElem]) -> Vec<FElem> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| field.add(acc, field.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    fn zip(&self, other: &Matrix, op: impl Fn(FElem, FElem) -> FElem) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, field: &FiniteField, other: &Matrix) -> Matrix {
        self.zip(other, |a, b| field.add(a, b))
    }

    pub fn sub(&self, field: &FiniteField, other: &Matrix) -> Matrix {
        self.zip(other, |a, b| field.sub(a, b))
    }

    pub fn scale(&self, field: &FiniteField, c: FElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| field.mul(c, a)).collect(),
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, field: &FiniteField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(p, c), m.get(row, c));
                    m.set(p, c, b);
                    m.set(row, c, a);
                }
            }
            let inv = field.inv(m.get(row, col)).expect("nonzero pivot");
            for c in 0..m.cols {
                m.set(row, c, field.mul(inv, m.get(row, c)));
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r != row && factor != 0 {
                    for c in 0..m.cols {
                        let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        self.rref(field).1.len()
    }

    /// A basis of `{x : self·x = 0}`.
    pub fn kernel(&self, field: &FiniteField) -> Vec<Vec<FElem>> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(r.get(i, f));
                }
                v
            })
            .collect()
    }

    /// Pivot columns of `self`, which form a basis of its image.
    pub fn image_columns(&self, field: &FiniteField) -> Vec<usize> {
        self.rref(field).1
    }

    pub fn inverse(&self, field: &FiniteField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    /// One solution of `self·x = b`, free variables set to zero.
    pub fn solve(&self, field: &FiniteField, b: &[FElem]) -> Option<Vec<FElem>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols);
        }
        Some(x)
    }
}

/// A subspace of `GF(q)^n`, kept as the reduced row echelon form of a
/// spanning set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FElem>>,
}

impl Subspace {
    pub fn span(field: &FiniteField, ambient: usize, vectors: &[Vec<FElem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::LinearAlgebra(format!(
                "vector of length {} in a space of dimension {ambient}",
                v.len()
            )));
        }
        let mut m = Matrix::zeros(vectors.len(), ambient);
        for (i, v) in vectors.iter().enumerate() {
            for (j, &x) in v.iter().enumerate() {
                m.set(i, j, field.check(x as usize)?);
            }
        }
        let (r, pivots) = m.rref(field);
        let basis = r.row_vecs().into_iter().take(pivots.len()).collect();
        Ok(Subspace { ambient, basis })
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient)
                .map(|i| {
                    let mut v = vec![0; ambient];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FElem>] {
        &self.basis
    }

    pub fn contains(&self, field: &FiniteField, v: &[FElem]) -> bool {
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        Subspace::span(field, self.ambient, &all).is_ok_and(|s| s.dim() == self.dim())
    }

    pub fn is_subspace_of(&self, field: &FiniteField, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(field, v))
    }

    /// `self ∩ other`, from the kernel of `[B_self^T | -B_other^T]`.
    pub fn intersect(&self, field: &FiniteField, other: &Subspace) -> Subspace {
        let n = self.ambient;
        let (a, b) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(n, a + b);
        for (j, v) in self.basis.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, v[i]);
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for i in 0..n {
                m.set(i, a + j, field.neg(v[i]));
            }
        }
        let vectors: Vec<Vec<FElem>> = m
            .kernel(field)
            .into_iter()
            .map(|c| {
                (0..n)
                    .map(|i| {
                        (0..a).fold(0, |acc, j| field.add(acc, field.mul(c[j], self.basis[j][i])))
                    })
                    .collect()
            })
            .collect();
        Subspace::span(field, n, &vectors).expect("vectors of the ambient length")
    }

    /// Completes the basis with standard vectors to a basis of the whole
    /// space; the first `dim()` entries are the basis itself.
    pub fn extend_to_full_basis(&self, field: &FiniteField) -> Vec<Vec<FElem>> {
        let mut out = self.basis.clone();
        for i in 0..self.ambient {
            let mut e = vec![0; self.ambient];
            e[i] = 1;
            let trial: Vec<Vec<FElem>> = out.iter().cloned().chain([e.clone()]).collect();
            if Subspace::span(field, self.ambient, &trial).is_ok_and(|s| s.dim() == trial.len()) {
                out.push(e);
            }
        }
        out
    }
}
