//! Dense exact matrices, canonical subspaces, kernels, minimal polynomials.
//!
//! Convention fixed for the whole crate: vectors are ROWS and operators act by
//! right multiplication `v -> v * A`. Consequently the "kernel" of interest is
//! the left kernel `{ x : x * M = 0 }`, and the radical of a bilinear form
//! with Gram matrix `M` is exactly `left_kernel(M)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::Polynomial;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            spec,
            rows,
            cols,
            entries: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    /// Builds a matrix from rows, validating rectangularity and a uniform
    /// field.
    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(height * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {width}",
                    row.len()
                )));
            }
            for s in row {
                if s.spec() != spec {
                    return Err(Error::FieldMismatch(spec, s.spec()));
                }
                entries.push(s);
            }
        }
        Ok(Matrix {
            spec,
            rows: height,
            cols: width,
            entries,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_integers(spec: FieldSpec, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| spec.from_integer(n)).collect())
            .collect();
        Matrix::from_rows(spec, rows).expect("rectangular integer rows")
    }

    pub fn from_fn(spec: FieldSpec, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(spec, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.expect_shape(other);
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.expect_shape(other);
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Matrix product. Panics on incompatible shapes (validated call sites).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.spec, other.spec, "matrix product field mismatch");
        let mut out = Matrix::zero(self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack width mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix {
            spec: self.spec,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Stacks `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack height mismatch");
        Matrix::from_fn(self.spec, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Flattens the entries into a single row vector (row-major).
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    fn expect_shape(&self, other: &Matrix) {
        assert_eq!(
            (self.rows, self.cols, self.spec),
            (other.rows, other.cols, other.spec),
            "matrix shape or field mismatch"
        );
    }

    /// Reduced row echelon form together with the rank and an invertible
    /// `transform` with `transform * self = reduced`.
    ///
    /// Pivots are the first nonzero entry in column order, tie-broken by
    /// lowest row index; exact division makes magnitude heuristics
    /// unnecessary.
    pub fn rref(&self) -> Rref {
        let mut r = self.clone();
        let mut t = Matrix::identity(self.spec, self.rows);
        let mut pivot_row = 0;
        let mut pivot_cols = Vec::new();
        for col in 0..r.cols {
            let Some(src) = (pivot_row..r.rows).find(|&i| !r.get(i, col).is_zero()) else {
                continue;
            };
            r.swap_rows(pivot_row, src);
            t.swap_rows(pivot_row, src);
            let inv = r.get(pivot_row, col).inv().expect("pivot is nonzero");
            r.scale_row(pivot_row, &inv);
            t.scale_row(pivot_row, &inv);
            for i in 0..r.rows {
                if i != pivot_row && !r.get(i, col).is_zero() {
                    let factor = r.get(i, col).clone();
                    r.sub_scaled_row(i, pivot_row, &factor);
                    t.sub_scaled_row(i, pivot_row, &factor);
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
            if pivot_row == r.rows {
                break;
            }
        }
        Rref {
            reduced: r,
            rank: pivot_row,
            transform: t,
            pivot_cols,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    /// row_i -= c * row_src
    fn sub_scaled_row(&mut self, i: usize, src: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j) - &(c * self.get(src, j));
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free-enough forward elimination (exact field
    /// division, swap sign tracking).
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.spec.one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return self.spec.zero();
            };
            if src != col {
                m.swap_rows(col, src);
                det = -&det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in col + 1..n {
                if !m.get(i, col).is_zero() {
                    let factor = m.get(i, col) * &inv;
                    m.sub_scaled_row(i, col, &factor);
                }
            }
        }
        det
    }

    /// Exact inverse; `Err(Singular)` when the rank is deficient.
    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let rref = self.rref();
        if rref.rank < self.rows {
            return Err(Error::Singular);
        }
        Ok(rref.transform)
    }

    /// The left kernel `{ x : x * self = 0 }` as a canonical subspace of the
    /// row space `K^rows`.
    pub fn left_kernel(&self) -> Subspace {
        let rref = self.rref();
        // rows of the transform beyond the rank map onto zero rows of the
        // reduced matrix, so they span the left kernel
        let rows = (rref.rank..self.rows)
            .map(|i| rref.transform.row(i).to_vec())
            .collect();
        Subspace::from_rows(self.spec, rows, self.rows).expect("kernel rows are rectangular")
    }

    /// Minimal polynomial: the monic least-degree `m` with `m(self) = 0`,
    /// found as the first linear dependency among `I, T, T^2, ...` viewed as
    /// vectors of length `rows * cols`.
    pub fn min_poly(&self) -> Polynomial {
        assert!(self.is_square(), "minimal polynomial of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Polynomial::one(self.spec);
        }
        let mut power = Matrix::identity(self.spec, n);
        let mut krylov = Matrix::from_rows(self.spec, vec![power.vectorize()]).unwrap();
        loop {
            power = power.mul(self);
            let target = power.vectorize();
            if let Some(combo) = solve_left(&krylov, &target) {
                let k = combo.len();
                let mut coeffs: Vec<Scalar> = combo.into_iter().map(|c| -&c).collect();
                coeffs.push(self.spec.one());
                debug_assert_eq!(coeffs.len(), k + 1);
                return Polynomial::from_coeffs(self.spec, coeffs);
            }
            let row = Matrix::from_rows(self.spec, vec![target]).unwrap();
            krylov = krylov.vstack(&row);
            assert!(
                krylov.rows() <= n * n + 1,
                "Cayley-Hamilton bounds the minimal polynomial degree"
            );
        }
    }

    /// The eigenspace `{ v : v * self = lambda * v }` for a row-operator.
    pub fn eigenspace(&self, lambda: &Scalar) -> Subspace {
        assert!(self.is_square(), "eigenspace of a non-square matrix");
        let shifted = self.sub(&Matrix::identity(self.spec, self.rows).scale(lambda));
        shifted.left_kernel()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{} over {}: {})", self.rows, self.cols, self.spec, self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let texts: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::to_string).collect())
            .collect();
        let width = texts
            .iter()
            .flatten()
            .map(String::len)
            .max()
            .unwrap_or(1);
        for (i, row) in texts.iter().enumerate() {
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{cell:>width$}")?;
            }
            write!(f, "]")?;
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        if self.rows == 0 {
            write!(f, "[]")?;
        }
        Ok(())
    }
}

/// Result of Gauss-Jordan elimination.
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub transform: Matrix,
    pub pivot_cols: Vec<usize>,
}

/// Solves `x * a = b` for a row vector `x`, or `None` when `b` is outside the
/// row space of `a`.
pub fn solve_left(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.cols(), b.len(), "solve_left shape mismatch");
    let rref = a.rref();
    let mut residual = b.to_vec();
    let mut coeffs = vec![a.spec().zero(); a.rows()];
    for (row, &col) in rref.pivot_cols.iter().enumerate() {
        let c = residual[col].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..a.cols() {
            residual[j] = &residual[j] - &(&c * rref.reduced.get(row, j));
        }
        coeffs[row] = c;
    }
    if residual.iter().any(|s| !s.is_zero()) {
        return None;
    }
    // b = coeffs * reduced = (coeffs * transform) * a
    Some(mul_row(&coeffs, &rref.transform))
}

/// Row vector times matrix: `v * m`.
pub fn mul_row(v: &[Scalar], m: &Matrix) -> Vec<Scalar> {
    assert_eq!(v.len(), m.rows(), "row-vector product shape mismatch");
    let mut out = vec![m.spec().zero(); m.cols()];
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            out[j] = &out[j] + &(c * m.get(i, j));
        }
    }
    out
}

/// Gram matrix of a form restricted to the rows of `basis`: `B * M * B^t`.
///
/// `gram` must be symmetric `n x n` and `basis` a `k x n` matrix of
/// independent rows; the result is the `k x k` symmetric Gram matrix of the
/// restricted form.
pub fn restrict_form(gram: &Matrix, basis: &Matrix) -> Result<Matrix> {
    if !gram.is_square() || gram.cols() != basis.cols() {
        return Err(Error::DimensionMismatch(format!(
            "cannot restrict a {}x{} form to a basis of width {}",
            gram.rows(),
            gram.cols(),
            basis.cols()
        )));
    }
    Ok(basis.mul(gram).mul(&basis.transpose()))
}

/// A subspace of the row space `K^ambient_dim`, held as a canonical reduced
/// row echelon basis so that equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    spec: FieldSpec,
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(spec: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            spec,
            ambient_dim,
            basis: Matrix::zero(spec, 0, ambient_dim),
        }
    }

    pub fn full(spec: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            spec,
            ambient_dim,
            basis: Matrix::identity(spec, ambient_dim),
        }
    }

    /// Span of the rows of `m`, canonicalized.
    pub fn from_matrix(m: &Matrix, ambient_dim: usize) -> Subspace {
        assert_eq!(m.cols(), ambient_dim, "ambient dimension mismatch");
        let rref = m.rref();
        if rref.rank == 0 {
            return Subspace::zero(m.spec(), ambient_dim);
        }
        let rows = (0..rref.rank).map(|i| rref.reduced.row(i).to_vec()).collect();
        Subspace {
            spec: m.spec(),
            ambient_dim,
            basis: Matrix::from_rows(m.spec(), rows).expect("rectangular basis rows"),
        }
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<Scalar>>, ambient_dim: usize) -> Result<Subspace> {
        let m = Matrix::from_rows(spec, rows)?;
        if m.rows() > 0 && m.cols() != ambient_dim {
            return Err(Error::AmbientMismatch(m.cols(), ambient_dim));
        }
        if m.rows() == 0 {
            return Ok(Subspace::zero(spec, ambient_dim));
        }
        Ok(Subspace::from_matrix(&m, ambient_dim))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical RREF basis, rows = basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        solve_left(&self.basis, v).is_some()
    }

    /// Coordinates of `v` relative to the canonical basis, if `v` lies in the
    /// subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        solve_left(&self.basis, v)
    }

    fn expect_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim || self.spec != other.spec {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// Lattice join: span of the union of the bases.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.expect_ambient(other)?;
        Ok(Subspace::from_matrix(
            &self.basis.vstack(&other.basis),
            self.ambient_dim,
        ))
    }

    /// Lattice meet, via the left kernel of the stacked bases: a kernel row
    /// `(a, b)` with `a * B1 = b * B2` names a common vector.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.expect_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.spec, self.ambient_dim));
        }
        let stacked = self.basis.vstack(&other.basis.neg());
        let kernel = stacked.left_kernel();
        let rows = (0..kernel.dim())
            .map(|i| {
                let combo = &kernel.basis().row(i)[..self.dim()];
                mul_row(combo, &self.basis)
            })
            .collect();
        Subspace::from_rows(self.spec, rows, self.ambient_dim)
    }

    /// A deterministic complement: the standard basis vectors at the columns
    /// not pivoted by this subspace's RREF basis.
    pub fn complement(&self) -> Subspace {
        let pivots: Vec<usize> = self.basis.rref().pivot_cols;
        let rows: Vec<Vec<Scalar>> = (0..self.ambient_dim)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut row = vec![self.spec.zero(); self.ambient_dim];
                row[c] = self.spec.one();
                row
            })
            .collect();
        Subspace::from_rows(self.spec, rows, self.ambient_dim).expect("standard rows")
    }

    /// A deterministic complement of `self` inside `outer` (requires
    /// `self` to be contained in `outer`): computed in `outer`-coordinates by
    /// the same non-pivot-column rule, then mapped back.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace> {
        self.expect_ambient(outer)?;
        let coords: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|i| {
                outer
                    .coords_of(self.basis.row(i))
                    .ok_or_else(|| Error::DimensionMismatch("subspace not contained in outer".into()))
            })
            .collect::<Result<_>>()?;
        let inner_in_coords = Subspace::from_rows(self.spec, coords, outer.dim())?;
        let comp = inner_in_coords.complement();
        let rows = (0..comp.dim())
            .map(|i| mul_row(comp.basis().row(i), outer.basis()))
            .collect();
        Subspace::from_rows(self.spec, rows, self.ambient_dim)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "span{{")?;
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, s) in self.basis.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}
