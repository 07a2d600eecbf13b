//! Dense matrices over an exact field and exact Gauss–Jordan solving.

use std::fmt;

use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of reducing `[A | B]`: pivot columns of `A` and the solution
/// `X` with `A X = B` (free variables set to zero), if consistent.
pub struct Solved<F> {
    pub pivots: Vec<usize>,
    pub solution: Option<Matrix<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        Self::identity(n).scale(&c)
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| if x.is_zero() { F::zero() } else { x.clone() * c.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F {
        assert!(self.is_square());
        (0..self.rows).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Gauss–Jordan on `[self | rhs]`, preferring light pivots.
    pub fn solve(&self, rhs: &Self) -> Solved<F> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let k = rhs.cols;
        let mut a = self.hcat(rhs);
        let mut pivots = Vec::new();
        let mut used = vec![false; a.rows];
        let mut pivot_rows = Vec::new();
        for c in 0..n {
            // candidate rows not yet used with a nonzero entry in column c
            let mut best: Option<(usize, usize, usize)> = None;
            for r in 0..a.rows {
                if used[r] {
                    continue;
                }
                let v = a.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let w = v.weight();
                let nnz = (c..n).filter(|&j| !a.get(r, j).is_zero()).count();
                if best.is_none_or(|(_, bw, bn)| (w, nnz) < (bw, bn)) {
                    best = Some((r, w, nnz));
                }
            }
            let Some((r, _, _)) = best else { continue };
            used[r] = true;
            let inv = a.get(r, c).inv().unwrap();
            for j in 0..n + k {
                let v = a.get(r, j).clone();
                if !v.is_zero() {
                    a.set(r, j, v * inv.clone());
                }
            }
            for r2 in 0..a.rows {
                if r2 == r {
                    continue;
                }
                let f = a.get(r2, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n + k {
                    let v = a.get(r, j);
                    if v.is_zero() {
                        continue;
                    }
                    let nv = a.get(r2, j).clone() - f.clone() * v.clone();
                    a.set(r2, j, nv);
                }
            }
            pivots.push(c);
            pivot_rows.push(r);
        }
        // consistency: unused rows must have zero right-hand side
        for r in 0..a.rows {
            if !used[r] && (n..n + k).any(|j| !a.get(r, j).is_zero()) {
                return Solved { pivots, solution: None };
            }
        }
        let mut x = Self::zeros(n, k);
        for (&c, &r) in pivots.iter().zip(&pivot_rows) {
            for j in 0..k {
                x.set(c, j, a.get(r, n + j).clone());
            }
        }
        Solved { pivots, solution: Some(x) }
    }

    pub fn rank(&self) -> usize {
        self.solve(&Self::zeros(self.rows, 0)).pivots.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let s = self.solve(&Self::identity(self.rows));
        if s.pivots.len() < self.rows {
            return None;
        }
        s.solution
    }

    /// Determinant by fraction-producing elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for r in c..n {
                let v = a.get(r, c);
                if !v.is_zero() && best.is_none_or(|(_, w)| v.weight() < w) {
                    best = Some((r, v.weight()));
                }
            }
            let Some((r, _)) = best else { return F::zero() };
            if r != c {
                for j in 0..n {
                    let t = a.get(r, j).clone();
                    a.set(r, j, a.get(c, j).clone());
                    a.set(c, j, t);
                }
                det = -det;
            }
            let p = a.get(c, c).clone();
            det = det * p.clone();
            let inv = p.inv().unwrap();
            for r2 in c + 1..n {
                let f = a.get(r2, c).clone();
                if f.is_zero() {
                    continue;
                }
                let f = f * inv.clone();
                for j in c..n {
                    let v = a.get(c, j);
                    if v.is_zero() {
                        continue;
                    }
                    let nv = a.get(r2, j).clone() - f.clone() * v.clone();
                    a.set(r2, j, nv);
                }
            }
        }
        det
    }

    /// Basis of the right kernel, one column per free variable.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let n = self.cols;
        let s = self.solve(&Self::zeros(self.rows, 0));
        let pivots = s.pivots;
        // recompute the reduced form to read off relations
        let reduced = self.rref();
        let mut out = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); n];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced.get(row, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// Reduced row echelon form (pivot rows first, in pivot order).
    pub fn rref(&self) -> Self {
        let mut a = self.clone();
        let mut row = 0;
        for c in 0..a.cols {
            if row == a.rows {
                break;
            }
            let mut best: Option<(usize, usize)> = None;
            for r in row..a.rows {
                let v = a.get(r, c);
                if !v.is_zero() && best.is_none_or(|(_, w)| v.weight() < w) {
                    best = Some((r, v.weight()));
                }
            }
            let Some((r, _)) = best else { continue };
            if r != row {
                for j in 0..a.cols {
                    let t = a.get(r, j).clone();
                    a.set(r, j, a.get(row, j).clone());
                    a.set(row, j, t);
                }
            }
            let inv = a.get(row, c).inv().unwrap();
            for j in 0..a.cols {
                let v = a.get(row, j).clone();
                if !v.is_zero() {
                    a.set(row, j, v * inv.clone());
                }
            }
            for r2 in 0..a.rows {
                if r2 == row {
                    continue;
                }
                let f = a.get(r2, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    let v = a.get(row, j);
                    if v.is_zero() {
                        continue;
                    }
                    let nv = a.get(r2, j).clone() - f.clone() * v.clone();
                    a.set(r2, j, nv);
                }
            }
            row += 1;
        }
        a
    }

    /// Adjugate via cofactors (small matrices only).
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let minor = Self::from_fn(n - 1, n - 1, |a, b| {
                let r = if a < j { a } else { a + 1 };
                let c = if b < i { b } else { b + 1 };
                self.get(r, c).clone()
            });
            let d = minor.det();
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Coefficients `c_0..c_n` of `det(lambda I - self)`, `c_n = 1`.
    pub fn charpoly(&self) -> Vec<F> {
        // Faddeev–LeVerrier (characteristic zero)
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = self.mul(&m).add(&Self::identity(n).scale(&coeffs[n + 1 - k]));
            let c = -(self.mul(&m).trace()) * F::from_i64(k as i64).inv().unwrap();
            coeffs[n - k] = c;
        }
        coeffs
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
