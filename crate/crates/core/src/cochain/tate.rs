//! Tate cohomology: the complete complex spliced from chains and cochains by
//! the norm, the periodic model for cyclic groups and the finite duality pairing.

use std::sync::Arc;

use super::{check_cap, coboundary_matrix, cochain_exps, tuple_count, tuple_index, tuple_of, DEGREE_CAP};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::subgroup::kernel_unchecked;
use crate::linalg::{FinAb, Matrix};
use crate::module::GModule;

/// Exponents of Ĉ^k: cochains G^k → M for k ≥ 0 and chains M^{G^{−1−k}} for k < 0.
pub fn tate_exps(m: &GModule, k: i64) -> Vec<u32> {
    let arity = if k >= 0 { k } else { -1 - k };
    cochain_exps(m, arity as usize)
}

/// The norm N = Σ_g A_g: Ĉ^{−1} = M → Ĉ^0 = M.
pub fn norm_matrix(m: &GModule) -> Matrix {
    let ring = *m.ring();
    let mut acc = Matrix::zeros(m.rank(), m.rank());
    for g in 0..m.group().order() {
        acc = acc.add(&m.action(g), &ring);
    }
    acc.reduce_columns(m.exps(), &ring);
    acc
}

/// d: Ĉ^{−2−k} → Ĉ^{−1−k}, dual to the bar boundary:
/// (dψ)(s) = Σ_t t^{-1}·ψ(t, s) + Σ_{j=1..k} (−1)^j Σ_{merge_j(u) = s} ψ(u) + (−1)^{k+1} Σ_t ψ(s, t).
pub fn chain_boundary_matrix(m: &GModule, k: usize) -> Matrix {
    let g = m.group();
    let ring = *m.ring();
    let n = g.order();
    let r = m.rank();
    let mut d = Matrix::zeros(tuple_count(n, k + 1) * r, tuple_count(n, k) * r);
    let actions: Vec<Matrix> = (0..n).map(|x| m.action(x).into_owned()).collect();
    let add = |d: &mut Matrix, row: usize, col: usize, block: Option<&Matrix>, c: u64| {
        for a in 0..r {
            for b in 0..r {
                let x = match block {
                    Some(m) => ring.mul(m.get(a, b), c),
                    None if a == b => c,
                    None => 0,
                };
                if x != 0 {
                    let cur = d.get(row * r + a, col * r + b);
                    d.set(row * r + a, col * r + b, ring.add(cur, x));
                }
            }
        }
    };
    for u_idx in 0..tuple_count(n, k + 1) {
        let u = tuple_of(u_idx, k + 1, n);
        add(&mut d, u_idx, tuple_index(&u[1..], n), Some(&actions[g.inv(u[0])]), 1);
        for j in 1..=k {
            let mut s = u[..j - 1].to_vec();
            s.push(g.mul(u[j - 1], u[j]));
            s.extend_from_slice(&u[j + 1..]);
            add(&mut d, u_idx, tuple_index(&s, n), None, ring.sign(j as i64, 1));
        }
        add(&mut d, u_idx, tuple_index(&u[..k], n), None, ring.sign(k as i64 + 1, 1));
    }
    d.reduce_columns(&cochain_exps(m, k), &ring);
    d
}

/// The complete complex Ĉ^{lo−1} → ⋯ → Ĉ^{hi+1} over the trivial group, so that
/// cohomology in lo..=hi is Tate cohomology.
pub fn tate_complex(m: &GModule, lo: i64, hi: i64) -> Result<Complex> {
    check_cap(lo, DEGREE_CAP)?;
    check_cap(hi, DEGREE_CAP)?;
    let ring = *m.ring();
    let trivial = Arc::new(FiniteGroup::trivial());
    if hi < lo {
        return Ok(Complex::zero(ring, trivial));
    }
    let terms = (lo - 1..=hi + 1).map(|k| GModule::plain(ring, tate_exps(m, k))).collect();
    let diffs = (lo - 1..=hi)
        .map(|k| match k {
            k if k >= 0 => coboundary_matrix(m, k as usize),
            -1 => norm_matrix(m),
            k => chain_boundary_matrix(m, (-2 - k) as usize),
        })
        .collect();
    Ok(Complex::new_unchecked(lo - 1, terms, diffs, ring, trivial))
}

pub fn tate_cohomology(m: &GModule, i: i64) -> Result<FinAb> {
    Ok(tate_complex(m, i, i)?.cohomology(i))
}

/// The periodic model for a cyclic group with least generator σ: every term
/// is M, with d = σ − 1 out of even degrees and d = N out of odd degrees.
pub fn periodic_complex(m: &GModule, lo: i64, hi: i64) -> Result<Complex> {
    let g = m.group();
    let sigma = g.cyclic_generator().ok_or_else(|| Error::InvalidGroup(format!("{} is not cyclic", g.label())))?;
    let ring = *m.ring();
    let trivial = Arc::new(FiniteGroup::trivial());
    if hi < lo {
        return Ok(Complex::zero(ring, trivial));
    }
    let mut t = m.action(sigma).sub(&Matrix::identity(m.rank()), &ring);
    t.reduce_columns(m.exps(), &ring);
    let norm = norm_matrix(m);
    let terms = (lo - 1..=hi + 1).map(|_| m.underlying()).collect();
    let diffs = (lo - 1..=hi).map(|k| if k.rem_euclid(2) == 0 { t.clone() } else { norm.clone() }).collect();
    Ok(Complex::new_unchecked(lo - 1, terms, diffs, ring, trivial))
}

/// The duality pairing Ĥ^n(G, M) × Ĥ^{−n−1}(G, M^∨) → Ĥ^{−1}(G, Z/p^e) ⊂ Z/p^e
/// for cyclic G, evaluated in the periodic model.
#[derive(Clone, Debug)]
pub struct TatePairing {
    pub degree: i64,
    pub left: FinAb,
    pub right: FinAb,
    /// values[a][b] = ⟨x_a, y_b⟩ on the invariant-factor generators.
    pub values: Vec<Vec<u64>>,
    pub perfect: bool,
}

pub fn cyclic_tate_pairing(m: &GModule, n: i64) -> Result<TatePairing> {
    check_cap(n, DEGREE_CAP)?;
    check_cap(-n - 1, DEGREE_CAP)?;
    let ring = *m.ring();
    let dual = m.dual();
    let left_sq = periodic_complex(m, n, n)?.cohomology_sq(n);
    let right_sq = periodic_complex(&dual, -n - 1, -n - 1)?.cohomology_sq(-n - 1);
    let (alpha, beta) = (left_sq.factor_exps(), right_sq.factor_exps());
    let unit = |k: usize, len: usize| {
        let mut v = vec![0u64; len];
        v[k] = 1;
        v
    };
    let xs: Vec<Vec<u64>> = (0..alpha.len()).map(|a| left_sq.representative(&unit(a, alpha.len()))).collect();
    let ys: Vec<Vec<u64>> = (0..beta.len()).map(|b| right_sq.representative(&unit(b, beta.len()))).collect();
    let ev = m.evaluation_pairing();
    let r = m.rank();
    let pair = |y: &[u64], x: &[u64]| -> u64 {
        let mut acc = 0;
        for (i, &yi) in y.iter().enumerate() {
            for (j, &xj) in x.iter().enumerate() {
                acc = ring.add(acc, ring.mul(ring.mul(yi, xj), ev.matrix.get(i * r + j, 0)));
            }
        }
        acc
    };
    let values: Vec<Vec<u64>> = xs.iter().map(|x| ys.iter().map(|y| pair(y, x)).collect()).collect();
    // x ↦ ⟨x, −⟩ ∈ ⊕_b Hom(Z/p^{β_b}, Z/p^e) ≅ ⊕_b Z/p^{β_b}.
    let phi = Matrix::from_fn_rows(alpha.len(), beta.len(), |a| {
        beta.iter().enumerate().map(|(b, &e)| values[a][b] / ring.pow(ring.e() - e) % ring.pow(e)).collect()
    });
    let left = left_sq.invariants();
    let right = right_sq.invariants();
    let injective = if alpha.is_empty() {
        true
    } else if beta.is_empty() {
        false
    } else {
        let ker = kernel_unchecked(&phi, &alpha, &beta, &ring);
        (0..ker.rows()).all(|k| ker.row(k).iter().zip(&alpha).all(|(&v, &a)| v % ring.pow(a) == 0))
    };
    let perfect = left.order_log() == right.order_log() && injective;
    Ok(TatePairing { degree: n, left, right, values, perfect })
}
