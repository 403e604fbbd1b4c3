//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything downstream reduces to the primitives here: rank, kernel,
//! solve, cokernel and Kronecker products of dense row-major matrices.
//! Elimination pivots on the first nonzero entry, so every echelon form
//! (and hence every derived basis in the crate) is deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Index;

/// The coefficient field: GF(p) for a prime p < 2^31, or Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    PrimeField(u32),
    Rationals,
}

/// A scalar in one of the supported fields. GF(p) values are kept reduced
/// in [0, p); rationals are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub enum Scalar {
    Fp(u64),
    Rat(BigRational),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator {den} vanishes in GF({p})")]
    DenominatorVanishes { p: u32, den: i64 },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// GF(p) with primality enforced.
    pub fn prime(p: u32) -> Result<FieldSpec, ExactError> {
        if !is_prime(p) {
            return Err(ExactError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::PrimeField(_) => Scalar::Fp(0),
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::PrimeField(_) => Scalar::Fp(1),
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::PrimeField(p) => {
                let p = *p as i64;
                Scalar::Fp(n.rem_euclid(p) as u64)
            }
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    /// num/den as a field element; errors when den is zero in the field.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar, ExactError> {
        if den == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        match self {
            FieldSpec::PrimeField(p) => {
                if den.rem_euclid(*p as i64) == 0 {
                    return Err(ExactError::DenominatorVanishes { p: *p, den });
                }
                Ok(self.mul(&self.from_i64(num), &self.inv(&self.from_i64(den))))
            }
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x + y) % (*p as u64))
            }
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(x * y % (*p as u64))
            }
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::PrimeField(p), Scalar::Fp(x)) => Scalar::Fp((*p as u64 - x) % *p as u64),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::PrimeField(p), Scalar::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Fp(mod_inverse(*x, *p as u64))
            }
            (FieldSpec::Rationals, Scalar::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rat(x.recip())
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }
}

/// Extended-Euclid modular inverse; requires gcd(a, p) = 1.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "element not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// Render as the presentation-file coefficient syntax.
    pub fn render(&self) -> String {
        format!("{self:?}")
    }

    /// Exact integer value if the scalar is an integer rational or any
    /// prime-field element (reported as its canonical representative).
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Scalar::Fp(x) => Some(*x as i64),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    let n = r.numer();
                    if n.abs() <= BigInt::from(i64::MAX) {
                        return Some(i64::try_from(n).ok()?);
                    }
                }
                None
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Dense row-major matrix over a fixed field.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of reduced row echelon elimination.
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        self.get(i, j)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from integer rows (test and fixture convenience).
    pub fn from_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert!(row.len() == c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert!(self.field == other.field, "field mismatch");
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "dimension mismatch in add: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut m = self.clone();
        for k in 0..m.entries.len() {
            m.entries[k] = self.field.add(&m.entries[k], &other.entries[k]);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = self.field.neg(e);
        }
        m
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = self.field.mul(e, s);
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert!(self.field == other.field, "field mismatch");
        assert!(
            self.cols == other.rows,
            "dimension mismatch in mul: {}x{} * {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let f = self.field;
        let mut m = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = m.get(i, j);
                    m.set(i, j, f.add(cur, &f.mul(a, b)));
                }
            }
        }
        m
    }

    /// Kronecker product: (a (x) b)(x (x) y) = a x (x) b y, with row-major
    /// block layout ((a (x) b))[i1*rb+i2, j1*cb+j2] = a[i1,j1] b[i2,j2].
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert!(self.field == other.field, "field mismatch");
        let f = self.field;
        let mut m = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if f.is_zero(a) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if f.is_zero(b) {
                            continue;
                        }
                        m.set(i1 * other.rows + i2, j1 * other.cols + j2, f.mul(a, b));
                    }
                }
            }
        }
        m
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty(), "hstack of nothing");
        let rows = parts[0].rows;
        let field = parts[0].field;
        assert!(parts.iter().all(|p| p.rows == rows && p.field == field));
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    m.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        m
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty(), "vstack of nothing");
        let cols = parts[0].cols;
        let field = parts[0].field;
        assert!(parts.iter().all(|p| p.cols == cols && p.field == field));
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rows {
                for j in 0..cols {
                    m.set(off + i, j, p.get(i, j).clone());
                }
            }
            off += p.rows;
        }
        m
    }

    pub fn block_diag(field: FieldSpec, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            assert!(p.field == field, "field mismatch");
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m.set(ro + i, co + j, p.get(i, j).clone());
                }
            }
            ro += p.rows;
            co += p.cols;
        }
        m
    }

    pub fn col(&self, j: usize) -> Matrix {
        assert!(j < self.cols);
        let mut m = Matrix::zeros(self.field, self.rows, 1);
        for i in 0..self.rows {
            m.set(i, 0, self.get(i, j).clone());
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form. Pivot choice: scan columns left to right,
    /// take the first row with a nonzero entry. Exact arithmetic makes this
    /// stable and canonical.
    pub fn rref(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel as columns, one per free column of the
    /// reduced echelon form, in ascending free-column order.
    pub fn kernel_basis(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.rref();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (out, &fc) in free.iter().enumerate() {
            k.set(fc, out, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                k.set(pc, out, f.neg(reduced.get(pi, fc)));
            }
        }
        k
    }

    /// Particular solution X of self * X = b (every column), free variables
    /// set to zero; None when some column of b is outside the column space.
    /// Panics on row-count mismatch.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert!(self.field == b.field, "field mismatch");
        assert!(
            self.rows == b.rows,
            "dimension mismatch in solve: {} rows vs {} rows",
            self.rows,
            b.rows
        );
        let aug = Matrix::hstack(&[self, b]);
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let f = self.field;
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, reduced.get(pi, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Cokernel of self as a map into k^rows: a full-row-rank projection Q
    /// with Q * self = 0 and rows(Q) = rows - rank. Rows are the canonical
    /// representatives of the non-pivot coordinates of the column space.
    pub fn cokernel(&self) -> (Matrix, usize) {
        let f = self.field;
        let Echelon { reduced: r, pivots } = self.transpose().rref();
        let non_pivot: Vec<usize> = (0..self.rows).filter(|i| !pivots.contains(i)).collect();
        let dim = non_pivot.len();
        let mut q = Matrix::zeros(f, dim, self.rows);
        for (k, &np) in non_pivot.iter().enumerate() {
            q.set(k, np, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                q.set(k, pc, f.neg(r.get(pi, np)));
            }
        }
        (q, dim)
    }

    /// Canonical basis of the column space, as columns (reduced column
    /// echelon form, i.e. transposed rref of the transpose).
    pub fn image_basis(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.transpose().rref();
        reduced.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose()
    }

    /// Does the column space contain every column of `other`?
    pub fn col_space_contains(&self, other: &Matrix) -> bool {
        self.solve(other).is_some()
    }

    /// Column-space equality via canonical bases.
    pub fn subspace_eq(&self, other: &Matrix) -> bool {
        self.image_basis() == other.image_basis()
    }

    /// Canonical basis of the sum of column spaces.
    pub fn sum_spans(field: FieldSpec, dim: usize, parts: &[&Matrix]) -> Matrix {
        if parts.is_empty() {
            return Matrix::zeros(field, dim, 0);
        }
        assert!(parts.iter().all(|p| p.rows == dim));
        Matrix::hstack(parts).image_basis()
    }

    /// Cokernel projection together with a section: Q * self = 0,
    /// Q has full row rank, Q * S = identity. The section's columns are the
    /// standard basis vectors at the non-pivot coordinates, so quotient
    /// coordinates are literally a subset of ambient coordinates.
    pub fn cokernel_parts(&self) -> (Matrix, Matrix, usize) {
        let f = self.field;
        let Echelon { reduced: r, pivots } = self.transpose().rref();
        let non_pivot: Vec<usize> = (0..self.rows).filter(|i| !pivots.contains(i)).collect();
        let dim = non_pivot.len();
        let mut q = Matrix::zeros(f, dim, self.rows);
        let mut s = Matrix::zeros(f, self.rows, dim);
        for (k, &np) in non_pivot.iter().enumerate() {
            q.set(k, np, f.one());
            s.set(np, k, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                q.set(k, pc, f.neg(r.get(pi, np)));
            }
        }
        (q, s, dim)
    }
}

/// Permutation matrix exchanging tensor factors: maps e_{i*n+j} to e_{j*m+i}
/// for i < m, j < n. Satisfies swap * (x (x) y) = y (x) x.
pub fn swap_tensor(field: FieldSpec, m: usize, n: usize) -> Matrix {
    let mut s = Matrix::zeros(field, m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            s.set(j * m + i, i * n + j, field.one());
        }
    }
    s
}
