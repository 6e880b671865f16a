//! Random instances for property checks: modules, equivariant maps,
//! complexes and chain maps.

use std::sync::Arc;

use rand::Rng;

use crate::complex::{ChainMap, Complex};
use crate::group::FiniteGroup;
use crate::linalg::subgroup::kernel_unchecked;
use crate::linalg::{Matrix, RingSpec};
use crate::module::{Character, GModule};

pub fn random_exps<R: Rng>(rng: &mut R, ring: &RingSpec, rank: usize) -> Vec<u32> {
    (0..rank).map(|_| rng.gen_range(1..=ring.e())).collect()
}

/// A uniformly random matrix respecting the order congruences of ⊕Z/p^{src} → ⊕Z/p^{tgt}.
pub fn random_map_matrix<R: Rng>(rng: &mut R, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Matrix {
    Matrix::from_fn_rows(src.len(), tgt.len(), |i| {
        tgt.iter()
            .map(|&b| {
                let step = ring.pow(b.saturating_sub(src[i]));
                rng.gen_range(0..ring.pow(b) / step) * step
            })
            .collect()
    })
}

/// Σ_g A_g F B_{g^{-1}}, which commutes with the actions.
pub fn equivariant_average(f: &Matrix, m: &GModule, n: &GModule) -> Matrix {
    let ring = m.ring();
    let g = m.group();
    if g.order() == 1 {
        return f.clone();
    }
    let mut acc = Matrix::zeros(f.rows(), f.cols());
    for x in 0..g.order() {
        let t = m.action(x).mul(f, ring).mul(&n.action(g.inv(x)), ring);
        acc = acc.add(&t, ring);
    }
    acc.reduce_columns(n.exps(), ring);
    acc
}

/// A random equivariant map M → N; the raw random matrix is used directly
/// when the group is trivial.
pub fn random_equivariant<R: Rng>(rng: &mut R, m: &GModule, n: &GModule) -> Matrix {
    let f = random_map_matrix(rng, m.exps(), n.exps(), m.ring());
    if m.group().order() == 1 {
        return f;
    }
    // Averaging can kill everything when p divides |G|; mix in the
    // identity-coset-supported part so maps between equal modules are not always zero.
    let avg = equivariant_average(&f, m, n);
    if avg.is_zero() && m == n && rng.gen_bool(0.5) {
        return Matrix::identity(m.rank()).scale(rng.gen_range(0..m.ring().modulus()), m.ring());
    }
    avg
}

/// Permutation module Z/p^a[G/H] for a subgroup H (left cosets, least-element order).
pub fn permutation_module(ring: RingSpec, group: Arc<FiniteGroup>, h: &[usize], a: u32) -> GModule {
    let cosets = group.left_cosets(h);
    let k = cosets.len();
    let find = |x: usize| cosets.iter().position(|c| c.contains(&x)).expect("coset");
    let action = (0..group.order())
        .map(|g| {
            let mut m = Matrix::zeros(k, k);
            for (i, c) in cosets.iter().enumerate() {
                m.set(i, find(group.mul(g, c[0])), 1);
            }
            m
        })
        .collect();
    GModule::new(ring, group, vec![a; k], action).expect("permutation action")
}

/// Characters G → {±1} (and the trivial one) that factor through an index-2 subgroup.
pub fn sign_characters(group: &FiniteGroup, ring: &RingSpec) -> Vec<Character> {
    let mut out = vec![Character::trivial(group)];
    if ring.modulus() <= 2 {
        return out;
    }
    let n = group.order();
    // Index-2 subgroups are kernels of sign characters; search subsets via generated subgroups.
    let mut seen = Vec::new();
    for a in 0..n {
        for b in a..n {
            let h = group.generated(&[a, b]);
            if h.len() * 2 == n && !seen.contains(&h) {
                let values = (0..n).map(|g| if h.contains(&g) { 1 } else { ring.modulus() - 1 }).collect();
                if let Ok(chi) = Character::new(group, ring, values) {
                    out.push(chi);
                }
                seen.push(h);
            }
        }
    }
    out
}

/// A random module built from trivial, sign-twisted and permutation summands.
pub fn random_module<R: Rng>(rng: &mut R, ring: RingSpec, group: Arc<FiniteGroup>, max_rank: usize) -> GModule {
    let chars = sign_characters(&group, &ring);
    let mut m = GModule::trivial(ring, group.clone(), Vec::new());
    let target = rng.gen_range(1..=max_rank.max(1));
    while m.rank() < target {
        let a = rng.gen_range(1..=ring.e());
        let room = target - m.rank();
        let piece = match rng.gen_range(0..3) {
            0 if group.order() <= room && group.order() > 1 => permutation_module(ring, group.clone(), &[0], a),
            1 if chars.len() > 1 => {
                let chi = &chars[rng.gen_range(1..chars.len())];
                GModule::character(ring, group.clone(), a, chi).expect("character module")
            }
            _ => GModule::trivial(ring, group.clone(), vec![a]),
        };
        m = m.direct_sum(&piece).expect("same group");
    }
    m
}

/// A random complex of length `len` starting in degree `lo`: each differential
/// has rows drawn from the kernel of the next one, so d∘d = 0 by construction.
pub fn random_complex<R: Rng>(rng: &mut R, ring: RingSpec, group: Arc<FiniteGroup>, lo: i64, len: usize, max_rank: usize) -> Complex {
    let terms: Vec<GModule> = (0..len).map(|_| random_module(rng, ring, group.clone(), max_rank)).collect();
    let mut diffs: Vec<Matrix> = vec![Matrix::zeros(0, 0); len.saturating_sub(1)];
    for k in (0..len.saturating_sub(1)).rev() {
        let (s, t) = (&terms[k], &terms[k + 1]);
        let f = random_equivariant(rng, s, t);
        diffs[k] = if k + 1 < diffs.len() {
            // Project the rows of f into ker d^{k+1} by composing with a map that lands there.
            let next = &diffs[k + 1];
            let ker = kernel_unchecked(next, t.exps(), terms[k + 2].exps(), &ring);
            if ker.rows() == 0 {
                Matrix::zeros(s.rank(), t.rank())
            } else {
                let coeff = Matrix::from_fn_rows(s.rank(), ker.rows(), |_| (0..ker.rows()).map(|_| rng.gen_range(0..ring.modulus())).collect());
                let mut cand = coeff.mul(&ker, &ring);
                if crate::linalg::subgroup::check_map(&cand, s.exps(), t.exps(), &ring).is_err() {
                    for (i, &a) in s.exps().iter().enumerate() {
                        let sc = ring.pow(ring.e() - a);
                        cand.row_mut(i).iter_mut().for_each(|x| *x = ring.mul(*x, sc));
                    }
                }
                let cand = equivariant_average(&cand, s, t);
                let mut dd = cand.mul(next, &ring);
                dd.reduce_columns(terms[k + 2].exps(), &ring);
                if dd.is_zero() && crate::linalg::subgroup::check_map(&cand, s.exps(), t.exps(), &ring).is_ok() {
                    cand
                } else {
                    Matrix::zeros(s.rank(), t.rank())
                }
            }
        } else {
            f
        };
    }
    Complex::new(lo, terms, diffs, ring, group).expect("random complex is valid")
}

/// A random chain map X → X ⊕ W (W random): c·inclusion plus the null-homotopic d∘h + h∘d.
pub fn random_chain_map<R: Rng>(rng: &mut R, x: &Complex, max_rank: usize) -> ChainMap {
    let ring = *x.ring();
    let g = x.group().clone();
    let w = random_complex(rng, ring, g.clone(), x.lo(), (x.hi() - x.lo() + 1).max(0) as usize, max_rank);
    let y = direct_sum_complex(x, &w);
    let c = rng.gen_range(0..ring.modulus());
    let h: Vec<Matrix> = (x.lo()..=x.hi() + 1).map(|i| random_equivariant(rng, &x.term(i), &y.term(i - 1))).collect();
    let hc = |i: i64| -> Matrix {
        let k = i - x.lo();
        if k >= 0 && (k as usize) < h.len() {
            h[k as usize].clone()
        } else {
            Matrix::zeros(x.rank(i), y.rank(i - 1))
        }
    };
    ChainMap::from_fn(x.clone(), y.clone(), |i| {
        let mut inc = Matrix::zeros(x.rank(i), y.rank(i));
        inc.set_block(0, 0, &Matrix::identity(x.rank(i)).scale(c, &ring));
        let nul = hc(i).mul(&y.diff(i - 1), &ring).add(&x.diff(i).mul(&hc(i + 1), &ring), &ring);
        inc.add(&nul, &ring)
    })
    .expect("random chain map is valid")
}

/// Degreewise direct sum of two complexes.
pub fn direct_sum_complex(x: &Complex, w: &Complex) -> Complex {
    let ring = *x.ring();
    let lo = x.lo().min(w.lo());
    let hi = x.hi().max(w.hi());
    let terms = (lo..=hi).map(|i| x.term(i).direct_sum(&w.term(i)).expect("same group")).collect();
    let diffs = (lo..hi).map(|i| x.diff(i).direct_sum(&w.diff(i))).collect();
    Complex::new(lo, terms, diffs, ring, x.group().clone()).expect("direct sum of complexes")
}
