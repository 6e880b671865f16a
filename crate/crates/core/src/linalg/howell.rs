//! Howell normal form over Z/p^e.
//!
//! Z/p^e is a local ring, so every nonzero residue is a unit times a power
//! of p and pivots can be normalised to exact powers p^v. The Howell
//! property (for every pivot p^v the row multiple p^{e-v} * row lies in
//! the span of the later rows) is what makes "rows with leading zeros"
//! span the whole subgroup of vectors with those leading zeros.

use super::matrix::Matrix;
use super::ring::RingSpec;

/// Echelon data of a Howell form: for each row, its pivot column and the
/// valuation v of its pivot p^v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    pub form: Matrix,
    pub pivots: Vec<(usize, u32)>,
}

impl Howell {
    /// log_p of the order of the row span.
    pub fn order_log(&self, ring: &RingSpec) -> u64 {
        self.pivots.iter().map(|&(_, v)| (ring.e() - v) as u64).sum()
    }

    /// Canonical remainder of `v` modulo the row span; zero iff `v` is in the span.
    /// Each pivot entry is reduced into [0, p^v), which yields the
    /// lexicographically least element of the coset.
    pub fn reduce(&self, v: &[u64], ring: &RingSpec) -> Vec<u64> {
        let q = ring.modulus();
        let mut out: Vec<u64> = v.iter().map(|&x| x % q).collect();
        for (k, &(c, pv_exp)) in self.pivots.iter().enumerate() {
            let pv = ring.pow(pv_exp);
            let t = out[c] / pv;
            if t != 0 {
                sub_multiple(&mut out, self.form.row(k), t, c, q);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64], ring: &RingSpec) -> bool {
        self.reduce(v, ring).iter().all(|&x| x == 0)
    }
}

#[inline]
fn sub_multiple(dst: &mut [u64], src: &[u64], k: u64, from: usize, q: u64) {
    let qq = q * q;
    for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
        if s != 0 {
            *d = (*d + qq - k * s) % q;
        }
    }
}

/// Howell normal form of the row span of `m`.
pub fn howell_form(m: &Matrix, ring: &RingSpec) -> Matrix {
    howell(m, ring).form
}

pub fn howell(m: &Matrix, ring: &RingSpec) -> Howell {
    let q = ring.modulus();
    let e = ring.e();
    let cols = m.cols();
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&x| x % q).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        let mut best: Option<(usize, u32)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            let x = row[c];
            if x != 0 {
                let v = ring.valuation(x);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        rows.swap(r, bi);
        let pv = ring.pow(v);
        let unit = rows[r][c] / pv;
        if unit != 1 {
            let inv = ring.inv_unit(unit);
            for x in rows[r][c..].iter_mut() {
                *x = *x * inv % q;
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for row in rows.iter_mut().skip(r + 1) {
            let a = row[c];
            if a != 0 {
                sub_multiple(row, &pivot_row, a / pv, c, q);
            }
        }
        if v > 0 {
            let s = ring.pow(e - v);
            let ann: Vec<u64> = pivot_row.iter().map(|&x| x * s % q).collect();
            if ann.iter().any(|&x| x != 0) {
                rows.push(ann);
            }
        }
        rows[r] = pivot_row;
        pivots.push((c, v));
        r += 1;
    }
    rows.truncate(r);
    for k in 0..r {
        let (c, v) = pivots[k];
        let pv = ring.pow(v);
        let (above, rest) = rows.split_at_mut(k);
        let prow = &rest[0];
        for row in above.iter_mut() {
            let t = row[c] / pv;
            if t != 0 {
                sub_multiple(row, prow, t, c, q);
            }
        }
    }
    let form = Matrix::from_rows(cols, &rows);
    Howell { form, pivots }
}

/// Generators (as rows) of { x : x * a = 0 } in (Z/p^e)^rows.
pub fn free_kernel(a: &Matrix, ring: &RingSpec) -> Matrix {
    let m = a.rows();
    let n = a.cols();
    let h = howell(&a.hstack(&Matrix::identity(m)), ring);
    let keep: Vec<Vec<u64>> = h
        .pivots
        .iter()
        .enumerate()
        .filter(|(_, &(c, _))| c >= n)
        .map(|(k, _)| h.form.row(k)[n..].to_vec())
        .collect();
    Matrix::from_rows(m, &keep)
}

/// Some x with x * a = y over the free module, if one exists.
pub fn free_solve(a: &Matrix, y: &[u64], ring: &RingSpec) -> Option<Vec<u64>> {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(y.len(), n);
    let h = howell(&a.hstack(&Matrix::identity(m)), ring);
    let q = ring.modulus();
    let mut v: Vec<u64> = y.iter().map(|&x| x % q).collect();
    v.extend(std::iter::repeat_n(0, m));
    for (k, &(c, pe)) in h.pivots.iter().enumerate() {
        if c >= n {
            break;
        }
        let pv = ring.pow(pe);
        if v[c] % pv != 0 {
            return None;
        }
        let t = v[c] / pv;
        if t != 0 {
            sub_multiple(&mut v, h.form.row(k), t, c, q);
        }
    }
    if v[..n].iter().any(|&x| x != 0) {
        return None;
    }
    Some(v[n..].iter().map(|&x| ring.neg(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u64, e: u32) -> RingSpec {
        RingSpec::new(p, e).unwrap()
    }

    #[test]
    fn small_examples() {
        let z4 = r(2, 2);
        assert_eq!(howell_form(&Matrix::from_rows(1, &[vec![2]]), &z4), Matrix::from_rows(1, &[vec![2]]));
        assert_eq!(howell_form(&Matrix::from_rows(1, &[vec![3]]), &z4), Matrix::from_rows(1, &[vec![1]]));
        assert_eq!(
            howell_form(&Matrix::from_rows(2, &[vec![2, 1]]), &z4),
            Matrix::from_rows(2, &[vec![2, 1], vec![0, 2]])
        );
    }

    #[test]
    fn kernel_and_solve() {
        let z8 = r(2, 3);
        let two = Matrix::from_rows(1, &[vec![2]]);
        let k = free_kernel(&two, &z8);
        assert_eq!(howell_form(&k, &z8), Matrix::from_rows(1, &[vec![4]]));
        let x = free_solve(&two, &[4], &z8).unwrap();
        assert_eq!(z8.mul(x[0], 2), 4);
        assert!(free_solve(&two, &[3], &z8).is_none());
    }
}
