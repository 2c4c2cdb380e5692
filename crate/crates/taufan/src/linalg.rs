//! Dense exact linear algebra over a [`Field`].
//!
//! Everything downstream (Hom spaces, kernels, presentations, submodule
//! enumeration) reduces to row reduction of small dense matrices, so this
//! module favours clarity over asymptotics. Zero-row and zero-column
//! matrices are first-class citizens: vertex spaces of representations are
//! frequently 0-dimensional.

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field> {
    pub field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>, // row-major
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_int_rows(field: F, rows: &[Vec<i64>]) -> Self {
        let f = field.clone();
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Matrix::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.field.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn block_diag(field: F, blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.field.clone(), self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // find pivot row
            let mut pr = None;
            for i in r..self.rows {
                if !f.is_zero(self.get(i, c)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            self.swap_rows(r, pr);
            // normalize
            let inv = f.inv(self.get(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            // eliminate
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, returned as the columns of a matrix.
    pub fn kernel_basis(&self) -> Matrix<F> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                // row pi of rref: x_pc + sum over free cols of coeff * x_free = 0
                let coeff = m.get(pi, fc).clone();
                out.set(pc, k, f.neg(&coeff));
            }
        }
        out
    }

    /// Basis of the column space, as the columns of a matrix.
    pub fn column_space_basis(&self) -> Matrix<F> {
        let mut m = self.clone();
        let pivots = m.rref();
        self.select_cols(&pivots)
    }

    /// Solve self * x = b for one solution, or None if inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let bm = Matrix::from_rows(f.clone(), b.iter().map(|x| vec![x.clone()]).collect());
        let mut aug = self.hstack(&bm);
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column
        }
        let mut x = vec![f.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(pi, self.cols).clone();
        }
        Some(x)
    }

    /// Solve self * X = B for all columns of B at once.
    pub fn solve_matrix(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(b.nrows(), self.rows);
        let f = self.field.clone();
        let mut aug = self.hstack(b);
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(f, self.cols, b.ncols());
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..b.ncols() {
                x.set(pc, j, aug.get(pi, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.field.clone(), self.rows);
        let x = self.solve_matrix(&id)?;
        // solve_matrix returns a solution of AX = I; for square A this is the
        // two-sided inverse iff A has full rank.
        if self.mul(&x) == id {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Matrix power (square matrices).
    pub fn pow(&self, mut e: usize) -> Matrix<F> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Does v lie in the column span?
    pub fn col_span_contains(&self, v: &[F::Elem]) -> bool {
        self.solve(v).is_some()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
}

/// Minimal polynomial of a square matrix, as coefficients c_0..c_d of
/// x^d + c_{d-1} x^{d-1} + ... + c_0 (monic, returned without the leading 1).
pub fn minimal_polynomial<F: Field>(m: &Matrix<F>) -> Vec<F::Elem> {
    let f = m.field.clone();
    let n = m.nrows();
    if n == 0 {
        return vec![]; // minimal polynomial 1 of the empty matrix
    }
    // Stack powers I, M, M^2, ... as vectors until linearly dependent.
    let mut powers: Vec<Matrix<F>> = vec![Matrix::identity(f.clone(), n)];
    loop {
        let k = powers.len();
        // rows = flattened powers, solve for dependence of the last one on earlier ones
        let prev = Matrix::from_rows(
            f.clone(),
            (0..n * n)
                .map(|idx| (0..k - 1).map(|p| powers[p].entries()[idx].clone()).collect())
                .collect(),
        );
        let last = powers[k - 1].entries().to_vec();
        if k > 1 {
            if let Some(coeffs) = prev.solve(&last) {
                // M^{k-1} = sum coeffs[i] M^i  =>  min poly = x^{k-1} - sum coeffs[i] x^i
                return coeffs.iter().map(|c| f.neg(c)).collect();
            }
        }
        let next = powers[k - 1].mul(m);
        powers.push(next);
        if powers.len() > n + 1 {
            unreachable!("minimal polynomial degree exceeds dimension");
        }
    }
}

/// Evaluate a monic polynomial (given by its non-leading coefficients
/// c_0..c_{d-1}) at a matrix: M^d + c_{d-1} M^{d-1} + ... + c_0 I.
pub fn eval_monic_poly<F: Field>(m: &Matrix<F>, coeffs: &[F::Elem]) -> Matrix<F> {
    let f = m.field.clone();
    let n = m.nrows();
    let mut acc = Matrix::identity(f.clone(), n); // running power of M, top down via Horner
    // Horner: ((1*M + c_{d-1})*M + c_{d-2})*M + ... + c_0
    for c in coeffs.iter().rev() {
        acc = acc.mul(m);
        for i in 0..n {
            let v = f.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

pub fn is_nilpotent<F: Field>(m: &Matrix<F>) -> bool {
    if m.nrows() == 0 {
        return true;
    }
    m.pow(m.nrows()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rref_and_kernel() {
        let q = Rationals;
        let m = Matrix::from_int_rows(q, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.ncols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let q = Rationals;
        let m = Matrix::from_int_rows(q, &[vec![2, 1], vec![1, 1]]);
        let x = m.solve(&[q.from_int(3), q.from_int(2)]).unwrap();
        assert_eq!(x, vec![q.from_int(1), q.from_int(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q, 2));
        let sing = Matrix::from_int_rows(q, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn empty_shapes() {
        let f2 = PrimeField::new(2).unwrap();
        let a = Matrix::zero(f2, 0, 3);
        assert_eq!(a.rank(), 0);
        let k = a.kernel_basis();
        assert_eq!(k.ncols(), 3); // everything in the kernel
        let b = Matrix::zero(f2, 3, 0);
        assert_eq!(b.kernel_basis().ncols(), 0);
        assert!(b.solve(&[0, 0, 0]).is_some());
    }

    #[test]
    fn minimal_poly_of_projection() {
        let q = Rationals;
        // diag(1,0): min poly x^2 - x, stored as [c0, c1] = [0, -1]
        let m = Matrix::from_int_rows(q, &[vec![1, 0], vec![0, 0]]);
        let mp = minimal_polynomial(&m);
        assert_eq!(mp, vec![q.from_int(0), q.from_int(-1)]);
        assert!(eval_monic_poly(&m, &mp).is_zero());
        assert!(!is_nilpotent(&m));
        let n = Matrix::from_int_rows(q, &[vec![0, 1], vec![0, 0]]);
        assert!(is_nilpotent(&n));
    }
}
