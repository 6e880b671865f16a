//! The bar resolution ⋯ → X_1 → X_0 → Z over the integers, with basis
//! [g_0 | g_1, …, g_n] of X_n = Z[G^{n+1}] and the G-action on g_0.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{tuple_count, tuple_index, tuple_of};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::module::GModule;

/// A sparse integer matrix acting on row vectors; row k lists (column, coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    fn from_rows(cols: usize, rows: Vec<BTreeMap<usize, i64>>) -> Self {
        let rows = rows.into_iter().map(|r| r.into_iter().filter(|&(_, c)| c != 0).collect()).collect();
        IntMatrix { cols, rows }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { cols: n, rows: (0..n).map(|k| vec![(k, 1)]).collect() }
    }

    /// The composite "self, then other".
    pub fn then(&self, other: &IntMatrix) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BTreeMap::new();
                for &(j, a) in r {
                    for &(k, b) in &other.rows[j] {
                        *acc.entry(k).or_insert(0) += a * b;
                    }
                }
                acc
            })
            .collect();
        IntMatrix::from_rows(other.cols, rows)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc = BTreeMap::new();
                for &(k, c) in a.iter().chain(b) {
                    *acc.entry(k).or_insert(0) += c;
                }
                acc
            })
            .collect();
        IntMatrix::from_rows(self.cols, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }
}

#[derive(Clone, Debug)]
pub struct BarResolution {
    group: Arc<FiniteGroup>,
}

impl BarResolution {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        BarResolution { group }
    }

    /// Z-rank of X_n.
    pub fn rank(&self, n: usize) -> usize {
        tuple_count(self.group.order(), n + 1)
    }

    fn index(&self, g0: usize, t: &[usize]) -> usize {
        g0 * tuple_count(self.group.order(), t.len()) + tuple_index(t, self.group.order())
    }

    /// ∂[g_0|g_1,…,g_n] = [g_0g_1|g_2,…] + Σ_{k<n} (−1)^k [g_0|…,g_kg_{k+1},…] + (−1)^n [g_0|g_1,…,g_{n−1}].
    fn boundary_terms(&self, g0: usize, t: &[usize]) -> Vec<(usize, Vec<usize>, i64)> {
        let g = &self.group;
        let n = t.len();
        let mut out = vec![(g.mul(g0, t[0]), t[1..].to_vec(), 1)];
        for k in 1..n {
            let mut s = t[..k - 1].to_vec();
            s.push(g.mul(t[k - 1], t[k]));
            s.extend_from_slice(&t[k + 1..]);
            out.push((g0, s, if k % 2 == 0 { 1 } else { -1 }));
        }
        out.push((g0, t[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 }));
        out
    }

    /// ∂_n: X_n → X_{n−1} for n ≥ 1.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        assert!(n >= 1, "∂_0 is the augmentation");
        let order = self.group.order();
        let rows = (0..self.rank(n))
            .map(|idx| {
                let (g0, t) = (idx / tuple_count(order, n), tuple_of(idx % tuple_count(order, n), n, order));
                let mut acc = BTreeMap::new();
                for (h, s, c) in self.boundary_terms(g0, &t) {
                    *acc.entry(self.index(h, &s)).or_insert(0) += c;
                }
                acc
            })
            .collect();
        IntMatrix::from_rows(self.rank(n - 1), rows)
    }

    /// The augmentation X_0 → Z, [g] ↦ 1.
    pub fn augmentation(&self) -> IntMatrix {
        IntMatrix { cols: 1, rows: vec![vec![(0, 1)]; self.rank(0)] }
    }

    /// The Z-linear contraction h_n: X_n → X_{n+1}, [g_0|t] ↦ [1|g_0, t];
    /// h_{−1}: Z → X_0 sends 1 to [1].
    pub fn contraction(&self, n: i64) -> IntMatrix {
        if n < 0 {
            return IntMatrix { cols: self.rank(0), rows: vec![vec![(0, 1)]] };
        }
        let n = n as usize;
        let order = self.group.order();
        let rows = (0..self.rank(n))
            .map(|idx| {
                let (g0, t) = (idx / tuple_count(order, n), tuple_of(idx % tuple_count(order, n), n, order));
                let mut s = vec![g0];
                s.extend(t);
                vec![(self.index(0, &s), 1)]
            })
            .collect();
        IntMatrix { cols: self.rank(n + 1), rows }
    }

    /// Certifies exactness of X_top → ⋯ → X_0 → Z → 0 over the integers:
    /// ∂∘∂ = 0, and the contraction satisfies h∂ + ∂h = 1 at every X_n, n < top.
    pub fn check_exact(&self, top: usize) -> Result<()> {
        let eps = self.augmentation();
        if !self.contraction(-1).then(&eps).add(&IntMatrix { cols: 1, rows: vec![vec![(0, -1)]] }).is_zero() {
            return Err(Error::NotExact("ε∘h ≠ 1 on Z".into()));
        }
        for n in 1..=top {
            let d = self.boundary(n);
            let prev = if n == 1 { eps.clone() } else { self.boundary(n - 1) };
            if !d.then(&prev).is_zero() {
                return Err(Error::NotExact(format!("∂∘∂ ≠ 0 on X_{n}")));
            }
        }
        for n in 0..top {
            let down = if n == 0 { eps.then(&self.contraction(-1)) } else { self.boundary(n).then(&self.contraction(n as i64 - 1)) };
            let up = self.contraction(n as i64).then(&self.boundary(n + 1));
            let minus_id = IntMatrix { cols: self.rank(n), rows: (0..self.rank(n)).map(|k| vec![(k, -1)]).collect() };
            if let Some(k) = up.add(&down).add(&minus_id).rows.iter().position(|r| !r.is_empty()) {
                return Err(Error::NotExact(format!("h∂ + ∂h ≠ 1 on X_{n} at basis element {k}")));
            }
        }
        Ok(())
    }

    /// The coboundary of Hom_G(X_•, M) in the coordinates φ ↦ (t ↦ φ[1|t]),
    /// i.e. C^n(G, M) → C^{n+1}(G, M) obtained from ∂_{n+1}.
    pub fn hom_coboundary(&self, m: &GModule, n: usize) -> Matrix {
        let order = self.group.order();
        let ring = *m.ring();
        let r = m.rank();
        let mut d = Matrix::zeros(tuple_count(order, n) * r, tuple_count(order, n + 1) * r);
        for s_idx in 0..tuple_count(order, n + 1) {
            let s = tuple_of(s_idx, n + 1, order);
            for (h, t, c) in self.boundary_terms(0, &s) {
                // φ[h|t] = h·φ[1|t]
                let a = m.action(h);
                let t_idx = tuple_index(&t, order);
                for k in 0..r {
                    for l in 0..r {
                        let v = ring.mul(a.get(k, l), ring.reduce(c));
                        if v != 0 {
                            let cur = d.get(t_idx * r + k, s_idx * r + l);
                            d.set(t_idx * r + k, s_idx * r + l, ring.add(cur, v));
                        }
                    }
                }
            }
        }
        d.reduce_columns(&super::cochain_exps(m, n + 1), &ring);
        d
    }
}
