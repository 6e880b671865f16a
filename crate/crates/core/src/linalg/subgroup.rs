//! Kernels, preimages and subquotients for maps between finite modules
//! ⊕ Z/p^{a_i}.
//!
//! An element x of ⊕ Z/p^{a_i} is embedded in the free module (Z/p^e)^n
//! by x_i ↦ p^{e-a_i} x_i. Subgroups then become ordinary row spans and
//! Howell forms decide equality and containment without relation rows.

use super::finab::FinAb;
use super::howell::{free_kernel, free_solve, howell, Howell};
use super::matrix::Matrix;
use super::ring::RingSpec;
use super::smith::smith;
use crate::error::{Error, Result};

pub fn embed_vec(v: &[u64], exps: &[u32], ring: &RingSpec) -> Vec<u64> {
    let e = ring.e();
    let q = ring.modulus();
    v.iter().zip(exps).map(|(&x, &a)| x % ring.pow(a) * ring.pow(e - a) % q).collect()
}

pub fn embed_rows(m: &Matrix, exps: &[u32], ring: &RingSpec) -> Matrix {
    Matrix::from_fn_rows(m.rows(), m.cols(), |i| embed_vec(m.row(i), exps, ring))
}

/// Inverse of [`embed_vec`] on embedded vectors.
pub fn unembed_vec(v: &[u64], exps: &[u32], ring: &RingSpec) -> Vec<u64> {
    let e = ring.e();
    v.iter()
        .zip(exps)
        .map(|(&x, &a)| {
            let s = ring.pow(e - a);
            debug_assert_eq!(x % s, 0, "vector is not in the embedded submodule");
            x / s
        })
        .collect()
}

/// Checks that `f` is a well defined map ⊕Z/p^{src} → ⊕Z/p^{tgt}:
/// p^{a_i} F[i][j] ≡ 0 mod p^{b_j}.
pub fn check_map(f: &Matrix, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Result<()> {
    if f.rows() != src.len() || f.cols() != tgt.len() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} but modules have ranks {} and {}",
            f.rows(),
            f.cols(),
            src.len(),
            tgt.len()
        )));
    }
    for (i, &a) in src.iter().enumerate() {
        for (j, &b) in tgt.iter().enumerate() {
            let x = f.get(i, j);
            if b > a && x % ring.pow(b - a) != 0 {
                return Err(Error::OrderMismatch {
                    source_index: i,
                    target_index: j,
                    source_exp: a,
                    target_exp: b,
                    entry: x,
                });
            }
        }
    }
    Ok(())
}

fn scaled(f: &Matrix, tgt: &[u32], ring: &RingSpec) -> Matrix {
    let e = ring.e();
    let mut s = f.clone();
    for i in 0..s.rows() {
        for (x, &b) in s.row_mut(i).iter_mut().zip(tgt) {
            *x = ring.mul(*x, ring.pow(e - b));
        }
    }
    s
}

/// Generators (rows, source coordinates) of ker f.
pub fn kernel(f: &Matrix, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Result<Matrix> {
    check_map(f, src, tgt, ring)?;
    Ok(kernel_unchecked(f, src, tgt, ring))
}

pub(crate) fn kernel_unchecked(f: &Matrix, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Matrix {
    let mut k = free_kernel(&scaled(f, tgt, ring), ring);
    k.reduce_columns(src, ring);
    k.nonzero_rows()
}

/// Some x with x·f = y in the target module, or `None` when y is not in the image.
pub fn solve(f: &Matrix, y: &[u64], src: &[u32], tgt: &[u32], ring: &RingSpec) -> Result<Option<Vec<u64>>> {
    check_map(f, src, tgt, ring)?;
    if y.len() != tgt.len() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for rank {}", y.len(), tgt.len())));
    }
    Ok(solve_unchecked(f, y, src, tgt, ring))
}

pub(crate) fn solve_unchecked(f: &Matrix, y: &[u64], src: &[u32], tgt: &[u32], ring: &RingSpec) -> Option<Vec<u64>> {
    let ys = embed_vec(y, tgt, ring);
    free_solve(&scaled(f, tgt, ring), &ys, ring)
        .map(|x| x.iter().zip(src).map(|(&v, &a)| v % ring.pow(a)).collect())
}

/// Subgroup of ⊕Z/p^{a_i} held as a Howell form of embedded generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub exps: Vec<u32>,
    pub howell: Howell,
}

impl Subgroup {
    pub fn new(gens: &Matrix, exps: &[u32], ring: &RingSpec) -> Self {
        Subgroup { exps: exps.to_vec(), howell: howell(&embed_rows(gens, exps, ring), ring) }
    }

    pub fn order_log(&self, ring: &RingSpec) -> u64 {
        self.howell.order_log(ring)
    }

    pub fn contains(&self, v: &[u64], ring: &RingSpec) -> bool {
        self.howell.contains(&embed_vec(v, &self.exps, ring), ring)
    }

    pub fn contains_all(&self, gens: &Matrix, ring: &RingSpec) -> bool {
        (0..gens.rows()).all(|i| self.contains(gens.row(i), ring))
    }

    /// Lexicographically least element of the coset v + self.
    pub fn reduce(&self, v: &[u64], ring: &RingSpec) -> Vec<u64> {
        unembed_vec(&self.howell.reduce(&embed_vec(v, &self.exps, ring), ring), &self.exps, ring)
    }

    /// Generators in module coordinates.
    pub fn generators(&self, ring: &RingSpec) -> Matrix {
        let f = &self.howell.form;
        Matrix::from_fn_rows(f.rows(), f.cols(), |i| unembed_vec(f.row(i), &self.exps, ring))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps && self.howell.form == other.howell.form
    }
}

/// The quotient span(gens) / span(sub_gens) with explicit coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: RingSpec,
    exps: Vec<u32>,
    top: Subgroup,
    bottom: Subgroup,
    /// Column transform: coordinates of x·top.form are read off from x·q.
    q: Matrix,
    /// For each invariant factor, the column of `q` and its exponent.
    factors: Vec<(usize, u32)>,
    /// One generator per invariant factor, module coordinates.
    gens: Matrix,
}

impl Subquotient {
    pub fn new(gens: &Matrix, sub_gens: &Matrix, exps: &[u32], ring: &RingSpec) -> Result<Self> {
        let top = Subgroup::new(gens, exps, ring);
        let bottom = Subgroup::new(sub_gens, exps, ring);
        if !top.contains_all(&bottom.generators(ring), ring) {
            return Err(Error::NotASubgroup("sub_gens not contained in span(gens)".into()));
        }
        let zh = &top.howell.form;
        let k = zh.rows();
        let stacked = zh.vstack(&bottom.howell.form);
        let rel_full = free_kernel(&stacked, ring);
        let rel = rel_full.block(0, 0, rel_full.rows(), k);
        let s = smith(&rel, ring);
        let e = ring.e();
        let mut factors: Vec<(usize, u32)> =
            (0..k).map(|t| (t, s.diag.get(t).copied().unwrap_or(e))).filter(|&(_, v)| v > 0).collect();
        factors.sort_by_key(|&(t, v)| (v, t));
        let basis = s.q_inv.mul(zh, ring);
        let gens = Matrix::from_fn_rows(factors.len(), exps.len(), |i| unembed_vec(basis.row(factors[i].0), exps, ring));
        Ok(Subquotient { ring: *ring, exps: exps.to_vec(), top, bottom, q: s.q, factors, gens })
    }

    pub fn invariants(&self) -> FinAb {
        FinAb::new(self.ring.p(), self.factors.iter().map(|&(_, v)| v))
    }

    /// Exponent of each coordinate, in the order of [`FinAb::exps`].
    pub fn factor_exps(&self) -> Vec<u32> {
        self.factors.iter().map(|&(_, v)| v).collect()
    }

    pub fn order_log(&self) -> u64 {
        self.factors.iter().map(|&(_, v)| v as u64).sum()
    }

    pub fn top(&self) -> &Subgroup {
        &self.top
    }

    pub fn bottom(&self) -> &Subgroup {
        &self.bottom
    }

    /// Generators of the invariant factors, as elements of the ambient module.
    pub fn generators(&self) -> &Matrix {
        &self.gens
    }

    /// Coordinates of the class of v, or `None` if v is outside the top group.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let ring = &self.ring;
        let w = embed_vec(v, &self.exps, ring);
        let x = free_solve(&self.top.howell.form, &w, ring)?;
        let y = if x.is_empty() { Vec::new() } else { Matrix::from_rows(x.len(), &[x]).mul(&self.q, ring).row(0).to_vec() };
        Some(self.factors.iter().map(|&(t, v)| y[t] % ring.pow(v)).collect())
    }

    /// Lexicographically least representative of the class with the given coordinates.
    pub fn representative(&self, coords: &[u64]) -> Vec<u64> {
        let ring = &self.ring;
        let mut v = vec![0u64; self.exps.len()];
        for (c, row) in coords.iter().zip(self.gens.row_vecs()) {
            for (x, &g) in v.iter_mut().zip(&row) {
                *x = ring.add(*x, ring.mul(*c, g));
            }
        }
        for (x, &a) in v.iter_mut().zip(&self.exps) {
            *x %= ring.pow(a);
        }
        self.bottom.reduce(&v, ring)
    }

    pub fn is_zero_class(&self, v: &[u64]) -> bool {
        self.bottom.contains(v, &self.ring)
    }
}

pub fn subquotient_invariants(gens: &Matrix, ambient: &[u32], sub_gens: &Matrix, ring: &RingSpec) -> Result<FinAb> {
    Ok(Subquotient::new(gens, sub_gens, ambient, ring)?.invariants())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_style_examples() {
        let z4 = RingSpec::new(2, 2).unwrap();
        let all = Matrix::identity(1);
        let two = Matrix::from_rows(1, &[vec![2]]);
        assert_eq!(subquotient_invariants(&all, &[2], &two, &z4).unwrap().to_string(), "Z/2");
        assert!(subquotient_invariants(&two, &[2], &two, &z4).unwrap().is_zero());
        let g = Matrix::from_rows(2, &[vec![2, 0], vec![0, 2]]);
        let zero = Matrix::zeros(0, 2);
        assert_eq!(subquotient_invariants(&g, &[2, 2], &zero, &z4).unwrap().to_string(), "Z/2 ⊕ Z/2");
        assert!(matches!(subquotient_invariants(&two, &[2], &all, &z4), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn reduction_kernel_in_mixed_orders() {
        let z4 = RingSpec::new(2, 2).unwrap();
        let red = Matrix::from_rows(1, &[vec![1]]);
        let k = kernel(&red, &[2], &[1], &z4).unwrap();
        assert_eq!(Subgroup::new(&k, &[2], &z4), Subgroup::new(&Matrix::from_rows(1, &[vec![2]]), &[2], &z4));
        let bad = Matrix::from_rows(1, &[vec![1]]);
        assert!(matches!(kernel(&bad, &[1], &[2], &z4), Err(Error::OrderMismatch { .. })));
    }
}
