//! Monoids of integral affine functions, toric duals and their Hilbert bases,
//! strata, positive homomorphisms and R-saturation.

pub(crate) mod hilbert;
mod lattice_monoid;

pub use hilbert::{dual_hilbert_basis, hilbert_basis, DualBasis, HilbertBasis, MAX_HILBERT_CANDIDATES, MAX_HILBERT_DIM};
pub use lattice_monoid::{agree_on_box, AffineMonoid, MonoidHom, MonoidKind, Presentation};

use std::collections::BTreeSet;

use crate::error::{check_dim, Error, Result};
use crate::lattice::Relation;
use crate::polytope::{Face, Halfspace, IntAffineFunc, Polytope};
use crate::Rational;

/// Is `f >= 0` on `P`?
pub fn af_contains(p: &Polytope, f: &IntAffineFunc) -> Result<bool> {
    check_dim(p.ambient_dim(), f.dim())?;
    Ok(!p.meets(&f.neg(), Relation::Gt))
}

/// Is `f > 0` on `P`?
pub fn af_strictly_positive(p: &Polytope, f: &IntAffineFunc) -> Result<bool> {
    check_dim(p.ambient_dim(), f.dim())?;
    Ok(!p.meets(&f.neg(), Relation::Ge))
}

/// A face of `P` together with the dimension of the corresponding stratum of
/// the underlying scheme.
#[derive(Clone, Debug)]
pub struct StratumRecord {
    pub face: Face,
    pub stratum_dim: usize,
}

/// One stratum per face; a face of dimension `k` gives a stratum of dimension
/// `dim P - k`.
pub fn strata(p: &Polytope) -> Result<Vec<StratumRecord>> {
    if p.contains_line() {
        return Err(Error::ContainsLine);
    }
    let d = p.dimension();
    let mut out: Vec<StratumRecord> = p
        .faces()
        .into_iter()
        .map(|face| {
            let stratum_dim = d - face.dimension();
            StratumRecord { face, stratum_dim }
        })
        .collect();
    out.sort_by(|a, b| b.stratum_dim.cmp(&a.stratum_dim).then_with(|| a.face.tight.cmp(&b.face.tight)));
    Ok(out)
}

/// Finite `G` such that every element of `Af(P)` is a nonnegative constant plus
/// an `N`-combination of `G`.
///
/// For each minimal face of the closure pick a point `v`; on the normal cone at
/// `v` the minimum of `s . x` is `s . v`, so the Hilbert basis `h` of that
/// normal cone gives the generators `h . (x - v)`.
pub fn generators_mod_constants(p: &Polytope) -> Result<Vec<IntAffineFunc>> {
    let n = p.ambient_dim();
    if n > MAX_HILBERT_DIM {
        return Err(Error::DimensionBound { found: n, bound: MAX_HILBERT_DIM });
    }
    let closed = p.closure();
    let faces = closed.faces();
    let minimal = faces.iter().filter(|f| !faces.iter().any(|g| g.tight != f.tight && g.is_subface_of(f)));
    let mut out = BTreeSet::new();
    for face in minimal {
        let v = face.polytope.witness();
        // Tangent cone at v: constraints tight there, constants dropped.
        let tight: Vec<Halfspace> = closed
            .constraints()
            .iter()
            .filter(|h| num_traits::Zero::is_zero(&h.func.evaluate(&v)))
            .map(|h| Halfspace::ge(IntAffineFunc::linear(h.func.slope.clone())))
            .collect();
        let tangent = Polytope::new(n, tight)?;
        for h in dual_hilbert_basis(&tangent)?.generators {
            let hv: Rational = IntAffineFunc::linear(h.clone()).evaluate(&v);
            out.insert(IntAffineFunc::new(h, -hv));
        }
    }
    Ok(out.into_iter().collect())
}

/// The stalk of the ghost sheaf at points of the stratum of `face`: `Af(F)`.
pub fn stalk_ghost(p: &Polytope, face: &Polytope) -> Result<AffineMonoid> {
    check_dim(p.ambient_dim(), face.ambient_dim())?;
    if !p.faces().iter().any(|f| f.polytope.set_eq(face)) {
        return Err(Error::NotAFace);
    }
    AffineMonoid::af_of_polytope(face.clone())
}

#[cfg(test)]
mod tests;
