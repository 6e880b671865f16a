//! Compactly supported cochains: the fibre of restriction to a finite set of
//! local places, its long exact sequence, cup products and duality triangles.

use std::sync::Arc;

use crate::cochain::tate::tate_complex;
use crate::cochain::{cochain_complex, pairing_chain_map, pullback, tuple_count, tuple_of, tuple_index, Pairing, SubgroupOf};
use crate::complex::{
    cone_cup, curry, fiber, hom_precompose, long_exact_sequence, shift, shift_map, tensor_complex, translation_tensor_right, truncate, ChainMap, Complex, ConeCup,
    GradedLayout, LesReport, Triangle, TrianglePair, TruncationKind, TwoOfThreeReport,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::iwasawa::{induced_module, shapiro_map};
use crate::linalg::{FinAb, Matrix, RingSpec};
use crate::module::{GModule, ModuleMap};
use crate::random::direct_sum_complex;

/// A local place: a group H_v with a homomorphism φ_v: H_v → G. Tate places
/// use complete (Tate) cochains in place of ordinary ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    pub group: Arc<FiniteGroup>,
    pub phi: Vec<usize>,
    pub tate: bool,
}

impl Place {
    pub fn new(group: Arc<FiniteGroup>, phi: Vec<usize>, tate: bool) -> Self {
        Place { group, phi, tate }
    }

    /// The inclusion of a subgroup of G, given by its elements.
    pub fn subgroup(g: &FiniteGroup, elems: &[usize], tate: bool) -> Result<Self> {
        let s = SubgroupOf::new(g, elems)?;
        Ok(Place { group: s.group, phi: s.elems, tate })
    }

    /// The identity of G.
    pub fn identity(g: Arc<FiniteGroup>, tate: bool) -> Self {
        let phi = (0..g.order()).collect();
        Place { group: g, phi, tate }
    }
}

/// A group G with a finite set S of places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDatum {
    group: Arc<FiniteGroup>,
    places: Vec<Place>,
}

impl LocalDatum {
    pub fn new(group: Arc<FiniteGroup>, places: Vec<Place>) -> Result<Self> {
        for (v, pl) in places.iter().enumerate() {
            pl.group.check_hom(&group, &pl.phi).map_err(|e| Error::MalformedDatum(format!("place {v}: {e}")))?;
        }
        Ok(LocalDatum { group, places })
    }

    pub fn empty(group: Arc<FiniteGroup>) -> Self {
        LocalDatum { group, places: Vec::new() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn has_tate(&self) -> bool {
        self.places.iter().any(|p| p.tate)
    }

    /// Lowest degree in which the local complex computes genuine cohomology.
    pub fn local_lo(&self, top: usize) -> i64 {
        if self.has_tate() {
            -(top as i64)
        } else {
            0
        }
    }

    /// Degrees in which compactly supported cohomology is computed exactly.
    pub fn window(&self, top: usize) -> (i64, i64) {
        let lo = if self.has_tate() { self.local_lo(top) + 1 } else { 0 };
        (lo, top as i64 - 1)
    }

    fn check_module(&self, m: &GModule) -> Result<()> {
        if m.group().as_ref() != self.group.as_ref() {
            return Err(Error::MalformedDatum("module is over a different group".into()));
        }
        Ok(())
    }

    fn check_no_tate(&self, what: &str) -> Result<()> {
        if self.has_tate() {
            return Err(Error::MalformedDatum(format!("{what} is only available without Tate places")));
        }
        Ok(())
    }
}

fn place_complex(m: &GModule, pl: &Place, top: usize) -> Result<Complex> {
    let mv = m.restrict(pl.group.clone(), &pl.phi)?;
    if pl.tate {
        tate_complex(&mv, -(top as i64), top as i64 - 1)
    } else {
        cochain_complex(&mv, top)
    }
}

fn place_complexes(d: &LocalDatum, m: &GModule, top: usize) -> Result<Vec<Complex>> {
    d.places.iter().map(|pl| place_complex(m, pl, top)).collect()
}

fn sum_complexes(parts: &[Complex], ring: RingSpec) -> Complex {
    match parts.split_first() {
        None => Complex::zero(ring, Arc::new(FiniteGroup::trivial())),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, c| direct_sum_complex(&acc, c)),
    }
}

/// Offset of each place's summand in degree n of the local complex.
fn place_offsets(parts: &[Complex], n: i64) -> Vec<usize> {
    let mut off = 0;
    parts
        .iter()
        .map(|c| {
            let o = off;
            off += c.rank(n);
            o
        })
        .collect()
}

/// ⊕_v C(H_v, φ_v^*M), in cochain degrees up to `top`.
pub fn local_complex(d: &LocalDatum, m: &GModule, top: usize) -> Result<Complex> {
    d.check_module(m)?;
    Ok(sum_complexes(&place_complexes(d, m, top)?, *m.ring()))
}

/// Restriction res_S: C(G, M) → ⊕_v C(H_v, φ_v^*M).
pub fn res_s(d: &LocalDatum, m: &GModule, top: usize) -> Result<ChainMap> {
    d.check_module(m)?;
    let global = cochain_complex(m, top)?;
    let parts = place_complexes(d, m, top)?;
    let local = sum_complexes(&parts, *m.ring());
    let pulls: Vec<ChainMap> = d.places.iter().map(|pl| pullback(m, pl.group.clone(), &pl.phi, top)).collect::<Result<_>>()?;
    ChainMap::from_fn(global.clone(), local.clone(), |n| {
        let mut f = Matrix::zeros(global.rank(n), local.rank(n));
        if n >= 0 {
            for (p, off) in pulls.iter().zip(place_offsets(&parts, n)) {
                f.set_block(0, off, &p.component(n));
            }
        }
        f
    })
}

/// C_c(G, S; M) = Cone(res_S)[−1] with E^i = C^i(G, M) ⊕ C^{i−1}_S and
/// d(a, b) = (da, −res_S(a) − db), together with the maps of the sequence
/// C_S[−1] → C_c → C(G, M).
#[derive(Clone, Debug)]
pub struct CompactComplex {
    pub complex: Complex,
    pub global: Complex,
    pub local: Complex,
    pub res: ChainMap,
    pub projection: ChainMap,
    pub inclusion: ChainMap,
    /// Degrees in which the cohomology of `complex` is exact.
    pub window: (i64, i64),
}

impl CompactComplex {
    pub fn cohomology(&self, i: i64) -> FinAb {
        self.complex.cohomology(i)
    }
}

pub fn compact_complex(d: &LocalDatum, m: &GModule, top: usize) -> Result<CompactComplex> {
    let res = res_s(d, m, top)?;
    let (complex, projection) = fiber(&res);
    let local_shift = shift(&res.target, -1);
    let inclusion = ChainMap::from_fn(local_shift.clone(), complex.clone(), |i| {
        let mut f = Matrix::zeros(local_shift.rank(i), complex.rank(i));
        f.set_block(0, res.source.rank(i), &Matrix::identity(local_shift.rank(i)));
        f
    })?;
    Ok(CompactComplex { global: res.source.clone(), local: res.target.clone(), complex, res, projection, inclusion, window: d.window(top) })
}

pub fn compact_cohomology(d: &LocalDatum, m: &GModule, i: i64, top: usize) -> Result<FinAb> {
    Ok(compact_complex(d, m, top)?.cohomology(i))
}

/// The long exact sequence ⋯ → H^{i−1}_S → H^i_c → H^i(G, M) → H^i_S → ⋯
/// over the exact window.
pub fn compact_les(d: &LocalDatum, m: &GModule, top: usize) -> Result<LesReport> {
    let cc = compact_complex(d, m, top)?;
    let (lo, hi) = cc.window;
    long_exact_sequence(&cc.inclusion, &cc.projection, lo, hi)
}

/// The map C_c(G, S; M) → C_c(G, S; N) induced by an equivariant M → N.
pub fn compact_module_map(d: &LocalDatum, f: &ModuleMap, top: usize) -> Result<ChainMap> {
    let src = compact_complex(d, &f.source, top)?;
    let tgt = compact_complex(d, &f.target, top)?;
    let ring = *f.source.ring();
    let on_cochains = |n: i64, order: usize| {
        if n < 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::identity(tuple_count(order, n as usize)).kron(&f.matrix, &ring)
        }
    };
    let parts = place_complexes(d, &f.source, top)?;
    let tparts = place_complexes(d, &f.target, top)?;
    let local_block = |n: i64| {
        let mut b = Matrix::zeros(src.local.rank(n), tgt.local.rank(n));
        let (so, to) = (place_offsets(&parts, n), place_offsets(&tparts, n));
        for (v, pl) in d.places.iter().enumerate() {
            let blk = if pl.tate && n < 0 {
                let k = if n == -1 { 0 } else { (-1 - n) as usize };
                Matrix::identity(tuple_count(pl.group.order(), k)).kron(&f.matrix, &ring)
            } else {
                on_cochains(n, pl.group.order())
            };
            if blk.rows() > 0 {
                b.set_block(so[v], to[v], &blk);
            }
        }
        b
    };
    ChainMap::from_fn(src.complex.clone(), tgt.complex.clone(), |i| {
        let mut m = Matrix::zeros(src.complex.rank(i), tgt.complex.rank(i));
        if src.global.rank(i) > 0 {
            m.set_block(0, 0, &on_cochains(i, d.group.order()));
        }
        m.set_block(src.global.rank(i), tgt.global.rank(i), &local_block(i - 1));
        m
    })
}

/// Products on compactly supported cochains for a pairing L × R → T:
/// ∪_c: C(G, L) ⊗ C_c(R) → C_c(T), _c∪: C_c(L) ⊗ C(G, R) → C_c(T), the
/// local product ∪_S, and the two cone products with their homotopy.
#[derive(Clone, Debug)]
pub struct CompactCups {
    pub cone: ConeCup,
    pub cup_c: ChainMap,
    pub c_cup: ChainMap,
    pub cup_s: ChainMap,
}

fn local_cup(d: &LocalDatum, pairing: &Pairing, top: usize) -> Result<ChainMap> {
    let (l, r, t) = (pairing.left(), pairing.right(), pairing.target());
    let ring = *l.ring();
    let (pl, pr, pt) = (place_complexes(d, l, top)?, place_complexes(d, r, top)?, place_complexes(d, t, top)?);
    let (cl, cr, ct) = (sum_complexes(&pl, ring), sum_complexes(&pr, ring), sum_complexes(&pt, ring));
    let cups: Vec<ChainMap> = d
        .places
        .iter()
        .map(|v| {
            let restrict = |m: &GModule| m.restrict(v.group.clone(), &v.phi);
            let pv = Pairing::new(restrict(l)?, restrict(r)?, restrict(t)?, pairing.matrix().clone())?;
            pairing_chain_map(&pv, top)
        })
        .collect::<Result<_>>()?;
    let src = tensor_complex(&cl, &cr);
    ChainMap::from_fn(src.clone(), ct.clone(), |n| {
        let mut out = Matrix::zeros(src.rank(n), ct.rank(n));
        let lay = GradedLayout::tensor(&cl, &cr, n);
        let to = place_offsets(&pt, n);
        for &(i, off, _) in &lay.blocks {
            let j = n - i;
            let (lo_i, ro_j) = (place_offsets(&pl, i), place_offsets(&pr, j));
            for (v, cup) in cups.iter().enumerate() {
                let vlay = GradedLayout::tensor(&pl[v], &pr[v], n);
                let Some(voff) = vlay.offset(i) else { continue };
                let comp = cup.component(n);
                let (nl, nr) = (pl[v].rank(i), pr[v].rank(j));
                for a in 0..nl {
                    for b in 0..nr {
                        let row = comp.row(voff + a * nr + b);
                        let dst = off + (lo_i[v] + a) * cr.rank(j) + ro_j[v] + b;
                        for (c, &x) in row.iter().enumerate() {
                            out.set(dst, to[v] + c, x);
                        }
                    }
                }
            }
        }
        out
    })
}

pub fn compact_cups(d: &LocalDatum, pairing: &Pairing, top: usize) -> Result<CompactCups> {
    d.check_no_tate("the compact cup product")?;
    d.check_module(pairing.left())?;
    let cup_g = pairing_chain_map(pairing, top)?;
    let cup_s = local_cup(d, pairing, top)?;
    let f1 = res_s(d, pairing.left(), top)?;
    let f2 = res_s(d, pairing.right(), top)?;
    let f3 = res_s(d, pairing.target(), top)?;
    let cone = cone_cup(&cup_g, &cup_s, &f1, &f2, &f3)?;
    let (a1, a2) = (&f1.source, &f2.source);
    let (e1, e2) = (&cone.e1, &cone.e2);

    // ∪_c: rows of cup0 whose first factor lies in the C(G, L) part of E1.
    let src_c = tensor_complex(a1, e2);
    let cup_c = ChainMap::from_fn(src_c.clone(), cone.e3.clone(), |n| {
        let comp = cone.cup0.component(n);
        let (sl, cl) = (GradedLayout::tensor(a1, e2, n), GradedLayout::tensor(e1, e2, n));
        Matrix::from_fn_rows(src_c.rank(n), cone.e3.rank(n), |row| {
            let &(i, off, _) = sl.blocks.iter().rev().find(|b| b.1 <= row).expect("row in layout");
            let k = row - off;
            comp.row(cl.offset(i).expect("summand") + k).to_vec()
        })
    })?;

    // _c∪: rows of cup1 whose second factor lies in the C(G, R) part of E2.
    let src_d = tensor_complex(e1, a2);
    let c_cup = ChainMap::from_fn(src_d.clone(), cone.e3.clone(), |n| {
        let comp = cone.cup1.component(n);
        let (sl, cl) = (GradedLayout::tensor(e1, a2, n), GradedLayout::tensor(e1, e2, n));
        Matrix::from_fn_rows(src_d.rank(n), cone.e3.rank(n), |row| {
            let &(i, off, _) = sl.blocks.iter().rev().find(|b| b.1 <= row).expect("row in layout");
            let (u, w) = ((row - off) / a2.rank(n - i), (row - off) % a2.rank(n - i));
            comp.row(cl.offset(i).expect("summand") + u * e2.rank(n - i) + w).to_vec()
        })
    })?;
    Ok(CompactCups { cone, cup_c, c_cup, cup_s })
}

/// A trace C_c(G, S; μ) → μ[−n] for μ = Z/p^e with trivial action, given by
/// its coordinates on C_c^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceDatum {
    pub degree: i64,
    pub functional: Vec<u64>,
}

/// Windows (first, last) of degrees where each row of the duality triangle
/// computes genuine cohomology.
#[derive(Clone, Debug)]
pub struct DualityTriangle {
    pub pair: TrianglePair,
    pub windows: [(i64, i64); 3],
    /// Per row, (degree, is H^degree an isomorphism) over its window.
    pub statuses: [Vec<(i64, bool)>; 3],
    pub report: TwoOfThreeReport,
}

/// The morphism of triangles from C(G, M) → C_S(M) → Cone to the dual
/// triangle Hom(C_c(M^∨), μ[−n]) → Hom(C_S(M^∨)[−1], μ[−n]) → Cone, built
/// from the cup products and the trace.
pub fn duality_triangle(d: &LocalDatum, m: &GModule, trace: &TraceDatum, top: usize) -> Result<DualityTriangle> {
    d.check_no_tate("the duality triangle")?;
    d.check_module(m)?;
    let ring = *m.ring();
    let n = trace.degree;
    let dual = m.dual();
    let ev = Pairing::evaluation(&dual);
    let pairing = Pairing::new(m.clone(), dual.clone(), ev.target().clone(), ev.matrix().clone())?;
    let mu = pairing.target().clone();

    let cc_mu = compact_complex(d, &mu, top)?;
    let (c_lo, c_hi) = cc_mu.window;
    if n < c_lo || n > c_hi {
        return Err(Error::MalformedDatum(format!("trace degree {n} lies outside {c_lo}..={c_hi}")));
    }
    if trace.functional.len() != cc_mu.complex.rank(n) {
        return Err(Error::MalformedDatum(format!("trace has {} coordinates, expected {}", trace.functional.len(), cc_mu.complex.rank(n))));
    }
    let j = Complex::concentrated(GModule::plain(ring, vec![ring.e()]), n);
    let column = Matrix::from_fn_rows(trace.functional.len(), 1, |r| vec![trace.functional[r]]);
    let theta = ChainMap::new(cc_mu.complex.clone(), j.clone(), n, vec![column]).map_err(|e| Error::MalformedDatum(format!("trace: {e}")))?;
    if let Some(i) = (n..=c_hi).find(|&i| !theta.is_quasi_iso_in(i)) {
        return Err(Error::TraceNotQuasiIso(format!("H^{i}_c(μ) → H^{i}(μ[−{n}]) is not bijective")));
    }

    let cups = compact_cups(d, &pairing, top)?;
    let cc_dual = compact_complex(d, &dual, top)?;
    let global = cochain_complex(m, top)?;
    let local = local_complex(d, m, top)?;
    let local_dual_shift = shift(&cc_dual.local, -1);

    let a = curry(&cups.cup_c.then(&theta), &global, &cc_dual.complex)?;
    let tr = translation_tensor_right(&local, &cc_dual.local, -1);
    let q = tr.then(&shift_map(&cups.cup_s, -1)).then(&cc_mu.inclusion).then(&theta);
    let b = curry(&q, &local, &local_dual_shift)?;
    let f_dual = hom_precompose(&cc_dual.inclusion, &j);
    let res = res_s(d, m, top)?;
    let pair = TrianglePair::new(Triangle::new(res), Triangle::new(f_dual), a, b, None)?;

    // Without Tate places every complex here is exact below its top degree,
    // and the Hom duals are exact above n − top.
    let top_i = top as i64;
    let windows = [(n - top_i + 1, top_i - 1), (n - top_i, top_i - 1), (n - top_i + 1, top_i - 2)];
    let maps = [&pair.a, &pair.b, &pair.c];
    let statuses: [Vec<(i64, bool)>; 3] = std::array::from_fn(|k| (windows[k].0..=windows[k].1).map(|i| (i, maps[k].is_quasi_iso_in(i))).collect());
    let quasi_iso: [bool; 3] = std::array::from_fn(|k| statuses[k].iter().all(|s| s.1));
    let count = quasi_iso.iter().filter(|&&q| q).count();
    let deduced = (0..3).rev().find(|&k| (0..3).filter(|&j| j != k).all(|j| quasi_iso[j]));
    let report = TwoOfThreeReport { quasi_iso, deduced, consistent: count != 2 };
    Ok(DualityTriangle { pair, windows, statuses, report })
}

/// The Shapiro comparison C_c(G, S; M_U) → C_c(U, S_U; M) for a normal
/// subgroup U, where S_U lists, for every place v and every double coset
/// φ_v(H_v)σU, the place φ_v^{-1}(U) → U, h ↦ σ^{-1}φ_v(h)σ.
#[derive(Clone, Debug)]
pub struct ShapiroCompact {
    pub induced: LocalDatum,
    /// Double-coset representatives σ, one per induced place.
    pub representatives: Vec<usize>,
    /// Brutal truncations to degrees ≤ top of both compact complexes.
    pub map: ChainMap,
    pub window: (i64, i64),
}

impl ShapiroCompact {
    pub fn is_quasi_iso(&self) -> bool {
        (self.window.0..=self.window.1).all(|i| self.map.is_quasi_iso_in(i))
    }
}

/// Induced places S_U with their double-coset representatives and the
/// index of the place of S they come from.
pub fn induced_places(d: &LocalDatum, u: &SubgroupOf) -> Result<(LocalDatum, Vec<(usize, usize)>)> {
    let g = d.group.as_ref();
    if !g.is_normal(&u.elems) {
        return Err(Error::NotNormal(format!("{:?}", u.elems)));
    }
    let mut places = Vec::new();
    let mut origin = Vec::new();
    for (v, pl) in d.places.iter().enumerate() {
        if pl.tate {
            return Err(Error::MalformedDatum("compact Shapiro is only available without Tate places".into()));
        }
        let inner: Vec<usize> = (0..pl.group.order()).filter(|&h| u.index_of(pl.phi[h]).is_some()).collect();
        let sub = SubgroupOf::new(&pl.group, &inner)?;
        let mut seen = vec![false; g.order()];
        for s in 0..g.order() {
            if seen[s] {
                continue;
            }
            for &h in &pl.phi {
                for &x in &u.elems {
                    seen[g.mul(g.mul(h, s), x)] = true;
                }
            }
            let si = g.inv(s);
            let psi = sub.elems.iter().map(|&h| u.index_of(g.mul(g.mul(si, pl.phi[h]), s)).expect("normal subgroup")).collect();
            places.push(Place::new(sub.group.clone(), psi, false));
            origin.push((v, s));
        }
    }
    Ok((LocalDatum::new(u.group.clone(), places)?, origin))
}

pub fn shapiro_compact(d: &LocalDatum, u: &SubgroupOf, m: &GModule, top: usize) -> Result<ShapiroCompact> {
    d.check_module(m)?;
    let g = d.group.clone();
    let ring = *m.ring();
    let (induced, origin) = induced_places(d, u)?;
    let ind = induced_module(m, u);
    let m_u = m.restrict(u.group.clone(), &u.elems)?;
    let big = top + 1;
    let src = compact_complex(d, &ind, big)?;
    let tgt = compact_complex(&induced, &m_u, big)?;
    let sh = shapiro_map(m, u, big)?;
    let r = m.rank();
    let ri = ind.rank();
    let ev = Matrix::from_fn_rows(ri, r, |row| {
        let mut v = vec![0; r];
        if row < r {
            v[row] = 1;
        }
        v
    });

    let src_parts = place_complexes(d, &ind, big)?;
    let tgt_parts = place_complexes(&induced, &m_u, big)?;
    let local_map = |n: i64| -> Matrix {
        let mut out = Matrix::zeros(src.local.rank(n), tgt.local.rank(n));
        if n < 0 {
            return out;
        }
        let (so, to) = (place_offsets(&src_parts, n), place_offsets(&tgt_parts, n));
        for (w, &(v, s)) in origin.iter().enumerate() {
            let pl = &d.places[v];
            let sub_pl = &induced.places[w];
            let e = ind.action(g.inv(s)).mul(&ev, &ring);
            let inner: Vec<usize> = (0..pl.group.order()).filter(|&h| u.index_of(pl.phi[h]).is_some()).collect();
            let (nv, nw) = (pl.group.order(), sub_pl.group.order());
            for t in 0..tuple_count(nw, n as usize) {
                let image: Vec<usize> = tuple_of(t, n as usize, nw).iter().map(|&x| inner[x]).collect();
                let row = tuple_index(&image, nv);
                out.set_block(so[v] + row * ri, to[w] + t * r, &e);
            }
        }
        out
    };

    // K(f)(h_1..h_{n−1}) = Σ_j (−1)^j ev f(ψh_1, …, ψh_j, σ^{-1}, φh_{j+1}, …, φh_{n−1}).
    let homotopy = |n: i64| -> Matrix {
        let mut out = Matrix::zeros(src.global.rank(n), tgt.local.rank(n - 1));
        if n < 1 {
            return out;
        }
        let to = place_offsets(&tgt_parts, n - 1);
        let ng = g.order();
        for (w, &(v, s)) in origin.iter().enumerate() {
            let pl = &d.places[v];
            let sub_pl = &induced.places[w];
            let inner: Vec<usize> = (0..pl.group.order()).filter(|&h| u.index_of(pl.phi[h]).is_some()).collect();
            let nw = sub_pl.group.order();
            for t in 0..tuple_count(nw, (n - 1) as usize) {
                let hs = tuple_of(t, (n - 1) as usize, nw);
                for jj in 0..n as usize {
                    let mut args: Vec<usize> = hs[..jj].iter().map(|&x| u.elems[sub_pl.phi[x]]).collect();
                    args.push(g.inv(s));
                    args.extend(hs[jj..].iter().map(|&x| pl.phi[inner[x]]));
                    let row = tuple_index(&args, ng) * ri;
                    let blk = if jj % 2 == 0 { ev.clone() } else { ev.neg(&ring) };
                    let cur = out.block(row, to[w] + t * r, ri, r);
                    out.set_block(row, to[w] + t * r, &cur.add(&blk, &ring));
                }
            }
        }
        out
    };

    let full = ChainMap::from_fn_unchecked(src.complex.clone(), tgt.complex.clone(), |i| {
        let mut f = Matrix::zeros(src.complex.rank(i), tgt.complex.rank(i));
        let (sg, tg) = (src.global.rank(i), tgt.global.rank(i));
        if sg > 0 {
            f.set_block(0, 0, &sh.component(i));
            f.set_block(0, tg, &homotopy(i));
        }
        f.set_block(sg, tg, &local_map(i - 1));
        f
    });
    let top_i = top as i64;
    let ts = truncate(&src.complex, TruncationKind::SigmaLe, top_i);
    let tt = truncate(&tgt.complex, TruncationKind::SigmaLe, top_i);
    let map = ChainMap::new(ts.complex.clone(), tt.complex.clone(), ts.complex.lo(), (ts.complex.lo()..=top_i).map(|i| full.component(i)).collect())?;
    Ok(ShapiroCompact { induced, representatives: origin.iter().map(|o| o.1).collect(), map, window: (0, top_i - 1) })
}
