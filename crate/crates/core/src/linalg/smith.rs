//! Smith form over the local ring Z/p^e with both transforms.

use super::matrix::Matrix;
use super::ring::RingSpec;

/// `p * a * q = d` where `d` is diagonal with entries p^{diag[t]} for
/// t < diag.len() and zero elsewhere; `q_inv` is the inverse of `q`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: Matrix,
    pub q: Matrix,
    pub q_inv: Matrix,
    pub diag: Vec<u32>,
}

pub fn smith(a: &Matrix, ring: &RingSpec) -> Smith {
    smith_impl(a, ring, true)
}

/// Only the diagonal valuations; skips the transform bookkeeping.
pub fn smith_diagonal(a: &Matrix, ring: &RingSpec) -> Vec<u32> {
    smith_impl(a, ring, false).diag
}

fn smith_impl(a: &Matrix, ring: &RingSpec, track: bool) -> Smith {
    let qm = ring.modulus();
    let qq = qm * qm;
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let (mut p, mut q, mut q_inv) = if track {
        (Matrix::identity(m), Matrix::identity(n), Matrix::identity(n))
    } else {
        (Matrix::zeros(0, 0), Matrix::zeros(0, 0), Matrix::zeros(0, 0))
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for i in t..m {
            for j in t..n {
                let x = w.get(i, j);
                if x != 0 {
                    let v = ring.valuation(x);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        if bi != t {
            swap_rows(&mut w, bi, t);
            if track {
                swap_rows(&mut p, bi, t);
            }
        }
        if bj != t {
            swap_cols(&mut w, bj, t);
            if track {
                swap_cols(&mut q, bj, t);
                swap_rows(&mut q_inv, bj, t);
            }
        }
        let pv = ring.pow(v);
        let unit = w.get(t, t) / pv;
        if unit != 1 {
            let inv = ring.inv_unit(unit);
            for x in w.row_mut(t) {
                *x = *x * inv % qm;
            }
            if track {
                for x in p.row_mut(t) {
                    *x = *x * inv % qm;
                }
            }
        }
        for i in t + 1..m {
            let k = w.get(i, t) / pv;
            if k != 0 {
                for j in t..n {
                    let s = w.get(t, j);
                    w.set(i, j, (w.get(i, j) + qq - k * s) % qm);
                }
                if track {
                    for j in 0..m {
                        let s = p.get(t, j);
                        p.set(i, j, (p.get(i, j) + qq - k * s) % qm);
                    }
                }
            }
        }
        for j in t + 1..n {
            let k = w.get(t, j) / pv;
            if k != 0 {
                // column j -= k * column t; row t of w is zero beyond the pivot
                // once rows below are cleared, so only (t, j) changes.
                w.set(t, j, 0);
                if track {
                    for i in 0..n {
                        let s = q.get(i, t);
                        q.set(i, j, (q.get(i, j) + qq - k * s) % qm);
                    }
                    for l in 0..n {
                        let s = q_inv.get(j, l);
                        q_inv.set(t, l, (q_inv.get(t, l) + k * s) % qm);
                    }
                }
            }
        }
        diag.push(v);
        t += 1;
    }
    Smith { p, q, q_inv, diag }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j);
        m.set(a, j, m.get(b, j));
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a);
        m.set(i, a, m.get(i, b));
        m.set(i, b, x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_diagonalise() {
        let ring = RingSpec::new(3, 2).unwrap();
        let a = Matrix::from_rows(3, &[vec![3, 6, 1], vec![0, 3, 2], vec![3, 0, 0]]);
        let s = smith(&a, &ring);
        let d = s.p.mul(&a, &ring).mul(&s.q, &ring);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < s.diag.len() { ring.pow(s.diag[i]) % 9 } else { 0 };
                assert_eq!(d.get(i, j), expect, "entry ({i},{j})");
            }
        }
        assert_eq!(s.q.mul(&s.q_inv, &ring), Matrix::identity(3));
    }
}
