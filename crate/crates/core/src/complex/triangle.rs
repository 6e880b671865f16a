//! Morphisms of exact triangles X → Y → Cone(f) → X[1] and the
//! two-out-of-three property.

use super::ops::{cone, ConeData};
use super::{ChainMap, Homotopy};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// The exact triangle X → Y → Cone(f) → X[1] of a chain map f.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: ChainMap,
    pub cone: ConeData,
}

impl Triangle {
    pub fn new(f: ChainMap) -> Self {
        let cone = cone(&f);
        Triangle { f, cone }
    }
}

/// A morphism between two triangles: a: X → X', b: Y → Y', a homotopy h
/// from f'∘a to b∘f, and the induced c: Cone(f) → Cone(f'),
/// c(y, x) = (b(y) + h(x), a(x)).
#[derive(Clone, Debug)]
pub struct TrianglePair {
    pub top: Triangle,
    pub bottom: Triangle,
    pub a: ChainMap,
    pub b: ChainMap,
    pub homotopy: Homotopy,
    pub c: ChainMap,
}

impl TrianglePair {
    pub fn new(top: Triangle, bottom: Triangle, a: ChainMap, b: ChainMap, h: Option<Homotopy>) -> Result<Self> {
        let malformed = |s: &str| Error::MalformedTriangle(s.to_string());
        if a.source != top.f.source || a.target != bottom.f.source {
            return Err(malformed("a must map the source of f to the source of f'"));
        }
        if b.source != top.f.target || b.target != bottom.f.target {
            return Err(malformed("b must map the target of f to the target of f'"));
        }
        a.validate().map_err(|e| Error::MalformedTriangle(format!("a: {e}")))?;
        b.validate().map_err(|e| Error::MalformedTriangle(format!("b: {e}")))?;
        let fa = a.then(&bottom.f);
        let bf = top.f.then(&b);
        let homotopy = match h {
            Some(h) => h,
            None => Homotopy::new(fa.clone(), bf.clone(), 0, Vec::new()).map_err(|e| Error::MalformedTriangle(format!("square does not commute: {e}")))?,
        };
        if homotopy.source_map != fa || homotopy.target_map != bf {
            return Err(malformed("homotopy must go from f'∘a to b∘f"));
        }
        homotopy.validate().map_err(|e| Error::MalformedTriangle(format!("{e}")))?;
        let (y, x) = (&top.f.target, &top.f.source);
        let (y2, x2) = (&bottom.f.target, &bottom.f.source);
        let src = top.cone.cone.clone();
        let tgt = bottom.cone.cone.clone();
        let c = ChainMap::from_fn(src.clone(), tgt.clone(), |i| {
            let mut m = Matrix::zeros(src.rank(i), tgt.rank(i));
            m.set_block(0, 0, &b.component(i));
            m.set_block(y.rank(i), 0, &homotopy.component(i + 1));
            m.set_block(y.rank(i), y2.rank(i), &a.component(i + 1));
            debug_assert_eq!(x.rank(i + 1) + y.rank(i), src.rank(i));
            debug_assert_eq!(x2.rank(i + 1) + y2.rank(i), tgt.rank(i));
            m
        })
        .map_err(|e| Error::MalformedTriangle(format!("induced map on cones: {e}")))?;
        Ok(TrianglePair { top, bottom, a, b, homotopy, c })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoOfThreeReport {
    /// Quasi-isomorphism status of a, b and c.
    pub quasi_iso: [bool; 3],
    /// A map whose quasi-isomorphism status follows from the other two, if any.
    pub deduced: Option<usize>,
    /// False only if exactly two maps are quasi-isomorphisms, which would
    /// contradict the five lemma.
    pub consistent: bool,
}

pub fn two_out_of_three(tp: &TrianglePair) -> TwoOfThreeReport {
    let quasi_iso = [tp.a.is_quasi_iso(), tp.b.is_quasi_iso(), tp.c.is_quasi_iso()];
    let count = quasi_iso.iter().filter(|&&q| q).count();
    let deduced = (0..3).rev().find(|&k| (0..3).filter(|&j| j != k).all(|j| quasi_iso[j]));
    TwoOfThreeReport { quasi_iso, deduced, consistent: count != 2 }
}
