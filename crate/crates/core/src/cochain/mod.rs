//! Inhomogeneous cochains of finite groups: cochain and hypercochain
//! complexes, cup products, standard maps and long exact sequences.

pub mod bar;
mod cup;
mod maps;
pub mod tate;
mod total;

pub use cup::{cup_matrix, pairing_chain_map, total_cup, Pairing};
pub use maps::{corestriction, inflation, pullback, quotient_group, restriction, SubgroupOf};
pub use total::{hyper_cochain_complex, total_complex, total_map, TotalLayout};

use std::sync::Arc;

use crate::complex::{long_exact_sequence, ChainMap, Complex, LesReport};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{FinAb, Matrix, RingSpec};
use crate::module::{GModule, ModuleMap};

/// Highest cohomological degree computed by default.
pub const DEGREE_CAP: usize = 3;

pub(crate) fn check_cap(deg: i64, cap: usize) -> Result<()> {
    if deg > cap as i64 || deg < -(cap as i64) - 1 {
        return Err(Error::CapExceeded { requested: deg, cap: cap as i64 });
    }
    Ok(())
}

/// Number of tuples in G^deg.
pub fn tuple_count(n: usize, deg: usize) -> usize {
    n.pow(deg as u32)
}

/// The tuple (g_1, …, g_deg) with index `idx`, g_1 most significant.
pub fn tuple_of(mut idx: usize, deg: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; deg];
    for k in (0..deg).rev() {
        t[k] = idx % n;
        idx /= n;
    }
    t
}

pub fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &g| acc * n + g)
}

/// Product g_1 ⋯ g_k of a tuple.
pub(crate) fn tuple_product(g: &FiniteGroup, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| g.mul(acc, x))
}

fn sign(ring: &RingSpec, k: i64) -> u64 {
    ring.sign(k, 1)
}

/// A function G^degree → M stored densely, tuples in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    module: GModule,
    degree: usize,
    table: Vec<u64>,
}

impl Cochain {
    pub fn new(module: GModule, degree: usize, table: Vec<u64>) -> Result<Self> {
        let expected = tuple_count(module.group().order(), degree) * module.rank();
        if table.len() != expected {
            return Err(Error::DimensionMismatch(format!("cochain table has {} entries, expected {expected}", table.len())));
        }
        let mut c = Cochain { module, degree, table };
        c.reduce();
        Ok(c)
    }

    pub fn zero(module: GModule, degree: usize) -> Self {
        let len = tuple_count(module.group().order(), degree) * module.rank();
        Cochain { module, degree, table: vec![0; len] }
    }

    pub fn from_fn(module: GModule, degree: usize, mut f: impl FnMut(&[usize]) -> Vec<u64>) -> Self {
        let n = module.group().order();
        let mut table = Vec::with_capacity(tuple_count(n, degree) * module.rank());
        for idx in 0..tuple_count(n, degree) {
            table.extend(f(&tuple_of(idx, degree, n)));
        }
        let mut c = Cochain { module, degree, table };
        c.reduce();
        c
    }

    fn reduce(&mut self) {
        let r = self.module.rank();
        if r == 0 {
            return;
        }
        let ring = *self.module.ring();
        for chunk in self.table.chunks_mut(r) {
            for (x, &a) in chunk.iter_mut().zip(self.module.exps()) {
                *x %= ring.pow(a);
            }
        }
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn value(&self, args: &[usize]) -> &[u64] {
        let r = self.module.rank();
        let k = tuple_index(args, self.module.group().order());
        &self.table[k * r..(k + 1) * r]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| self.module.ring().add(a, b)).collect();
        Cochain::new(self.module.clone(), self.degree, table).expect("same shape")
    }

    pub fn scale(&self, c: u64) -> Cochain {
        let table = self.table.iter().map(|&a| self.module.ring().mul(a, c)).collect();
        Cochain::new(self.module.clone(), self.degree, table).expect("same shape")
    }

    /// (δc)(g_1,…,g_{n+1}) = g_1·c(g_2,…) + Σ_k (−1)^k c(…,g_k g_{k+1},…) + (−1)^{n+1} c(g_1,…,g_n).
    pub fn coboundary(&self) -> Cochain {
        let m = &self.module;
        let g = m.group();
        let ring = *m.ring();
        let n = self.degree;
        Cochain::from_fn(m.clone(), n + 1, |s| {
            let mut v = m.act(s[0], self.value(&s[1..]));
            for k in 1..=n {
                let mut t: Vec<usize> = s[..k - 1].to_vec();
                t.push(g.mul(s[k - 1], s[k]));
                t.extend_from_slice(&s[k + 1..]);
                v = m.add(&v, &m.scale(sign(&ring, k as i64), self.value(&t)));
            }
            m.add(&v, &m.scale(sign(&ring, n as i64 + 1), self.value(&s[..n])))
        })
    }

    /// (α∪β)(σ_1,…,σ_{i+j}) = ⟨α(σ_1,…,σ_i), σ_1⋯σ_i·β(σ_{i+1},…,σ_{i+j})⟩.
    pub fn cup(&self, other: &Cochain, pairing: &Pairing) -> Result<Cochain> {
        if pairing.left() != &self.module || pairing.right() != &other.module {
            return Err(Error::DimensionMismatch("pairing is defined on different modules".into()));
        }
        let (i, j) = (self.degree, other.degree);
        let g = self.module.group().clone();
        Ok(Cochain::from_fn(pairing.target().clone(), i + j, |s| {
            let a = self.value(&s[..i]);
            let b = other.module.act(tuple_product(&g, &s[..i]), other.value(&s[i..]));
            pairing.apply(a, &b)
        }))
    }

    /// Stable text form: one "(g_1,…,g_n) ↦ [x_1, …]" entry per nonzero value.
    pub fn render(&self) -> String {
        let n = self.module.group().order();
        let r = self.module.rank();
        let mut parts = Vec::new();
        for idx in 0..tuple_count(n, self.degree) {
            let v = &self.table[idx * r..(idx + 1) * r];
            if v.iter().any(|&x| x != 0) {
                let t: Vec<String> = tuple_of(idx, self.degree, n).iter().map(|x| x.to_string()).collect();
                let vals: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                parts.push(format!("({}) ↦ [{}]", t.join(","), vals.join(", ")));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Matrix of δ^n: C^n(G, M) → C^{n+1}(G, M); rows and columns are indexed by
/// (tuple, basis vector).
pub fn coboundary_matrix(m: &GModule, n: usize) -> Matrix {
    let g = m.group();
    let ring = *m.ring();
    let order = g.order();
    let r = m.rank();
    let mut d = Matrix::zeros(tuple_count(order, n) * r, tuple_count(order, n + 1) * r);
    let actions: Vec<Matrix> = (0..order).map(|x| m.action(x).into_owned()).collect();
    let add_block = |d: &mut Matrix, t: usize, s: usize, block: Option<&Matrix>, c: u64| {
        for k in 0..r {
            for l in 0..r {
                let x = match block {
                    Some(b) => ring.mul(b.get(k, l), c),
                    None if k == l => c,
                    None => 0,
                };
                if x != 0 {
                    let cur = d.get(t * r + k, s * r + l);
                    d.set(t * r + k, s * r + l, ring.add(cur, x));
                }
            }
        }
    };
    for s_idx in 0..tuple_count(order, n + 1) {
        let s = tuple_of(s_idx, n + 1, order);
        add_block(&mut d, tuple_index(&s[1..], order), s_idx, Some(&actions[s[0]]), 1);
        for k in 1..=n {
            let mut t: Vec<usize> = s[..k - 1].to_vec();
            t.push(g.mul(s[k - 1], s[k]));
            t.extend_from_slice(&s[k + 1..]);
            add_block(&mut d, tuple_index(&t, order), s_idx, None, sign(&ring, k as i64));
        }
        add_block(&mut d, tuple_index(&s[..n], order), s_idx, None, sign(&ring, n as i64 + 1));
    }
    d.reduce_columns(&cochain_exps(m, n + 1), &ring);
    d
}

/// Exponents of C^n(G, M) = M^{G^n}.
pub fn cochain_exps(m: &GModule, n: usize) -> Vec<u32> {
    m.exps().repeat(tuple_count(m.group().order(), n))
}

/// C^0(G,M) → … → C^{top}(G,M) as a complex over the trivial group.
pub fn cochain_complex(m: &GModule, top: usize) -> Result<Complex> {
    check_cap(top as i64, DEGREE_CAP + 1)?;
    let ring = *m.ring();
    let terms = (0..=top).map(|n| GModule::plain(ring, cochain_exps(m, n))).collect();
    let diffs = (0..top).map(|n| coboundary_matrix(m, n)).collect();
    Ok(Complex::new_unchecked(0, terms, diffs, ring, Arc::new(FiniteGroup::trivial())))
}

/// H^i(G, M) with representative cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyClasses {
    pub degree: usize,
    pub invariants: FinAb,
    /// One representative per invariant factor (lexicographically least in its class).
    pub representatives: Vec<Cochain>,
}

pub fn cochain_cohomology(m: &GModule, i: usize) -> Result<FinAb> {
    check_cap(i as i64, DEGREE_CAP)?;
    Ok(cochain_complex(m, i + 1)?.cohomology(i as i64))
}

pub fn cohomology_classes(m: &GModule, i: usize) -> Result<CohomologyClasses> {
    check_cap(i as i64, DEGREE_CAP)?;
    let c = cochain_complex(m, i + 1)?;
    let sq = c.cohomology_sq(i as i64);
    let k = sq.factor_exps().len();
    let representatives = (0..k)
        .map(|t| {
            let mut coords = vec![0u64; k];
            coords[t] = 1;
            Cochain::new(m.clone(), i, sq.representative(&coords)).expect("cocycle shape")
        })
        .collect();
    Ok(CohomologyClasses { degree: i, invariants: sq.invariants(), representatives })
}

/// Whether a cocycle is a coboundary.
pub fn is_coboundary(c: &Cochain) -> bool {
    if c.degree == 0 {
        return c.is_zero();
    }
    let m = &c.module;
    let d = coboundary_matrix(m, c.degree - 1);
    crate::linalg::subgroup::solve_unchecked(&d, &c.table, &cochain_exps(m, c.degree - 1), &cochain_exps(m, c.degree), m.ring()).is_some()
}

/// The long exact cohomology sequence of 0 → A → B → C → 0 for G-modules,
/// with connecting maps, in degrees 0..=top.
pub fn cochain_les(alpha: &ModuleMap, beta: &ModuleMap, top: usize) -> Result<LesReport> {
    check_cap(top as i64, DEGREE_CAP)?;
    let (a, b, c) = (&alpha.source, &alpha.target, &beta.target);
    if &beta.source != b {
        return Err(Error::NotExact("maps are not composable".into()));
    }
    let ca = cochain_complex(a, top + 1)?;
    let cb = cochain_complex(b, top + 1)?;
    let cc = cochain_complex(c, top + 1)?;
    let ring = *a.ring();
    let i = ChainMap::from_fn_unchecked(ca.clone(), cb.clone(), |n| {
        Matrix::identity(tuple_count(a.group().order(), n as usize)).kron(&alpha.matrix, &ring)
    });
    let p = ChainMap::from_fn_unchecked(cb, cc, |n| Matrix::identity(tuple_count(b.group().order(), n as usize)).kron(&beta.matrix, &ring));
    long_exact_sequence(&i, &p, 0, top as i64)
}
