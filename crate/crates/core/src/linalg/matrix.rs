use std::fmt;

use super::ring::RingSpec;

/// Dense row-major matrix of residues mod p^e.
///
/// Maps act on row vectors: the image of the i-th basis vector is row i,
/// so composition "first F then G" is the product `F * G`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Builds a matrix row by row from the image of each basis vector.
    pub fn from_fn_rows(rows: usize, cols: usize, mut f: impl FnMut(usize) -> Vec<u64>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let r = f(i);
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, ring: &RingSpec) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let q = ring.modulus();
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = (*o + a * b) % q;
                }
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data: out }
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u64], ring: &RingSpec) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let q = ring.modulus();
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = (*o + a * b) % q;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, ring: &RingSpec) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix, ring: &RingSpec) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64, ring: &RingSpec) -> Matrix {
        let data = self.data.iter().map(|&a| ring.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, ring: &RingSpec) -> Matrix {
        self.scale(ring.modulus() - 1, ring)
    }

    /// Reduces column j modulo p^{exps[j]}.
    pub fn reduce_columns(&mut self, exps: &[u32], ring: &RingSpec) {
        assert_eq!(exps.len(), self.cols);
        let mods: Vec<u64> = exps.iter().map(|&a| ring.pow(a)).collect();
        for i in 0..self.rows {
            for (x, &m) in self.row_mut(i).iter_mut().zip(&mods) {
                *x %= m;
            }
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            let dst = &mut self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + block.cols];
            dst.copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Matrix::from_fn_rows(rows, cols, |i| self.row(r0 + i)[c0..c0 + cols].to_vec())
    }

    /// Kronecker product; row (i, k) column (j, l) holds a[i][j] * b[k][l].
    pub fn kron(&self, other: &Matrix, ring: &RingSpec) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            m.set(i * other.rows + k, j * other.cols + l, ring.mul(a, b));
                        }
                    }
                }
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn_rows(idx.len(), self.cols, |i| self.row(idx[i]).to_vec())
    }

    pub fn nonzero_rows(&self) -> Matrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| self.row(i).iter().any(|&x| x != 0)).collect();
        self.select_rows(&keep)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            write!(f, "{:?}", &self.row(i)[..self.cols.min(16)])?;
            if self.cols > 16 {
                write!(f, "..")?;
            }
        }
        if self.rows > 16 {
            write!(f, "..")?;
        }
        write!(f, "]")
    }
}
