use std::collections::HashSet;

use super::hilbert::{dual_hilbert_basis, DualBasis, MAX_HILBERT_DIM};
use super::{af_contains, generators_mod_constants};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{integer_kernel, smith_normal_form, solve_particular, Matrix};
use crate::polytope::{cone_from_rays, cone_rays, dot, primitive_direction, rat_vec, Halfspace, IntAffineFunc, Polytope};
use crate::{Int, IntMatrix, IntVec, RatVec, Rational};

/// `N^k` modulo relations `lhs = rhs`, embedded in a lattice by an integer
/// matrix whose columns are the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<(IntVec, IntVec)>,
    pub embedding: IntMatrix,
}

fn relation_rows(k: usize, relations: &[(IntVec, IntVec)]) -> Result<Vec<IntVec>> {
    relations
        .iter()
        .map(|(a, b)| {
            check_dim(k, a.len())?;
            check_dim(k, b.len())?;
            if a.iter().chain(b).any(|x| *x < 0) {
                return Err(Error::Invalid("relation sides must lie in N^k".into()));
            }
            Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
        })
        .collect()
}

/// Is `v` in the integer span of `rows`?
fn in_integer_span(rows: &[IntVec], v: &[Int]) -> bool {
    if rows.is_empty() {
        return v.iter().all(|x| *x == 0);
    }
    let a = smith_normal_form(&Matrix::from_rows(rows.to_vec())).elementary_divisors();
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    let b = smith_normal_form(&Matrix::from_rows(with)).elementary_divisors();
    a == b
}

impl Presentation {
    /// Computes an embedding of the group `Z^k / relations` from a Smith normal
    /// form. Fails if the group has torsion.
    pub fn new(generators: usize, relations: Vec<(IntVec, IntVec)>) -> Result<Self> {
        let rows = relation_rows(generators, &relations)?;
        if rows.is_empty() {
            return Ok(Presentation { generators, relations, embedding: IntMatrix::identity(generators) });
        }
        let snf = smith_normal_form(&IntMatrix::from_rows_with_cols(rows, generators));
        if snf.elementary_divisors().iter().any(|d| *d != 1) {
            return Err(Error::Invalid("the group of the presented monoid has torsion".into()));
        }
        let r = snf.rank();
        let e = IntMatrix::from_fn(generators - r, generators, |j, i| *snf.v.get(i, r + j));
        Ok(Presentation { generators, relations, embedding: e })
    }

    /// Uses the given embedding after checking that its kernel is exactly the
    /// relation lattice and that it is onto its target lattice.
    pub fn with_embedding(generators: usize, relations: Vec<(IntVec, IntVec)>, embedding: IntMatrix) -> Result<Self> {
        check_dim(generators, embedding.cols())?;
        let rows = relation_rows(generators, &relations)?;
        for r in &rows {
            if embedding.mul_vec(r).iter().any(|x| *x != 0) {
                return Err(Error::Invalid("embedding does not respect a relation".into()));
            }
        }
        for v in integer_kernel(&embedding) {
            if !in_integer_span(&rows, &v) {
                return Err(Error::Invalid("embedding identifies elements not related by the relations".into()));
            }
        }
        let snf = smith_normal_form(&embedding);
        if snf.rank() != embedding.rows() || snf.elementary_divisors().iter().any(|d| *d != 1) {
            return Err(Error::Invalid("embedding is not onto its target lattice".into()));
        }
        Ok(Presentation { generators, relations, embedding })
    }

    pub fn rank(&self) -> usize {
        self.embedding.rows()
    }

    /// Images of the generators.
    pub fn images(&self) -> Vec<IntVec> {
        (0..self.generators).map(|i| self.embedding.column(i)).collect()
    }

    pub fn embed(&self, x: &[Int]) -> Result<IntVec> {
        check_dim(self.generators, x.len())?;
        Ok(self.embedding.mul_vec(x))
    }

    /// Is `g` an `N`-combination of the generator images?
    fn contains(&self, g: &[Int]) -> Result<bool> {
        let gens: Vec<IntVec> = self.images().into_iter().filter(|v| v.iter().any(|x| *x != 0)).collect();
        let n = self.rank();
        let grading = Polytope::try_new(n, gens.iter().map(|v| Halfspace::ge(IntAffineFunc::from_ints(v, -1))).collect())?
            .ok_or_else(|| Error::Invalid("membership search needs a pointed monoid".into()))?;
        let w = primitive_direction(&grading.witness());
        let mut failed = HashSet::new();
        Ok(reach(g, 0, &gens, &w, &mut failed))
    }
}

fn reach(x: &[Int], from: usize, gens: &[IntVec], w: &[Int], failed: &mut HashSet<(IntVec, usize)>) -> bool {
    if x.iter().all(|v| *v == 0) {
        return true;
    }
    if dot(w, x) <= 0 || failed.contains(&(x.to_vec(), from)) {
        return false;
    }
    for i in from..gens.len() {
        let y: IntVec = x.iter().zip(&gens[i]).map(|(a, b)| a - b).collect();
        if reach(&y, i, gens, w, failed) {
            return true;
        }
    }
    failed.insert((x.to_vec(), from));
    false
}

/// The kinds of monoid the crate works with.
#[derive(Clone, Debug)]
pub enum MonoidKind {
    /// `Af(P)`, with generators modulo nonnegative constants.
    AfOfPolytope { polytope: Polytope, generators: Vec<IntAffineFunc> },
    /// Integral linear functions nonnegative on a cone.
    ToricDual { cone: Polytope, basis: DualBasis },
    Presented(Presentation),
    /// Lattice points of a finite union of half-open cones at the origin.
    Conditions { rank: usize, pieces: Vec<Polytope> },
}

/// A monoid together with the lattice basis of the elements that are sent to
/// units; every other element is in `alpha^{-1}(0)`.
#[derive(Clone, Debug)]
pub struct AffineMonoid {
    pub kind: MonoidKind,
    pub units: Vec<IntVec>,
}

/// A homomorphism from the group of a lattice monoid to `R`, written in the
/// lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    pub values: RatVec,
}

impl MonoidHom {
    pub fn new(values: RatVec) -> Self {
        MonoidHom { values }
    }

    pub fn from_ints(values: &[Int]) -> Self {
        MonoidHom { values: rat_vec(values) }
    }

    /// The homomorphism taking the given values on the generators of a
    /// presentation. Fails if the values do not respect the relations.
    pub fn on_generators(p: &Presentation, values: &[Rational]) -> Result<Self> {
        check_dim(p.generators, values.len())?;
        let rows: Vec<RatVec> = p.images().iter().map(|v| rat_vec(v)).collect();
        solve_particular(&rows, values, p.rank())
            .map(MonoidHom::new)
            .ok_or_else(|| Error::Invalid("values do not respect the relations".into()))
    }

    pub fn evaluate(&self, g: &[Int]) -> Rational {
        self.values.iter().zip(g).map(|(a, b)| a * Rational::from_integer((*b).into())).sum()
    }
}

impl AffineMonoid {
    pub fn af_of_polytope(polytope: Polytope) -> Result<Self> {
        let generators = generators_mod_constants(&polytope)?;
        Ok(AffineMonoid { kind: MonoidKind::AfOfPolytope { polytope, generators }, units: Vec::new() })
    }

    pub fn toric_dual(cone: Polytope) -> Result<Self> {
        let basis = dual_hilbert_basis(&cone)?;
        let units = basis.units.clone();
        Ok(AffineMonoid { kind: MonoidKind::ToricDual { cone, basis }, units })
    }

    pub fn presented(p: Presentation) -> Self {
        AffineMonoid { kind: MonoidKind::Presented(p), units: Vec::new() }
    }

    pub fn from_conditions(rank: usize, pieces: Vec<Polytope>) -> Result<Self> {
        for p in &pieces {
            check_dim(rank, p.ambient_dim())?;
            if !p.is_cone_at_origin() {
                return Err(Error::NotACone("monoid pieces must be cones at the origin".into()));
            }
        }
        Ok(AffineMonoid { kind: MonoidKind::Conditions { rank, pieces }, units: Vec::new() })
    }

    /// Designates the unit lattice. Each basis vector and its negative must be
    /// in the monoid.
    pub fn with_units(mut self, units: Vec<IntVec>) -> Result<Self> {
        for u in &units {
            let neg: IntVec = u.iter().map(|x| -x).collect();
            if !self.contains(u)? || !self.contains(&neg)? {
                return Err(Error::Invalid(format!("{u:?} is not a unit of the monoid")));
            }
        }
        self.units = units;
        Ok(self)
    }

    /// Rank of the ambient lattice; `None` for `Af(P)`.
    pub fn rank(&self) -> Option<usize> {
        match &self.kind {
            MonoidKind::AfOfPolytope { .. } => None,
            MonoidKind::ToricDual { cone, .. } => Some(cone.ambient_dim()),
            MonoidKind::Presented(p) => Some(p.rank()),
            MonoidKind::Conditions { rank, .. } => Some(*rank),
        }
    }

    fn lattice_rank(&self) -> Result<usize> {
        self.rank().ok_or_else(|| Error::Invalid("Af(P) is not a lattice monoid".into()))
    }

    /// Membership of a lattice element.
    pub fn contains(&self, g: &[Int]) -> Result<bool> {
        check_dim(self.lattice_rank()?, g.len())?;
        match &self.kind {
            MonoidKind::AfOfPolytope { .. } => unreachable!(),
            MonoidKind::ToricDual { cone, .. } => af_contains(&cone.closed_recession_cone(), &IntAffineFunc::linear(g.to_vec())),
            MonoidKind::Presented(p) => p.contains(g),
            MonoidKind::Conditions { pieces, .. } => {
                let x = rat_vec(g);
                for p in pieces {
                    if p.contains(&x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Membership of a function in `Af(P)`.
    pub fn contains_function(&self, f: &IntAffineFunc) -> Result<bool> {
        match &self.kind {
            MonoidKind::AfOfPolytope { polytope, .. } => af_contains(polytope, f),
            _ => Err(Error::Invalid("not a monoid of affine functions".into())),
        }
    }

    /// Half-open cones whose lattice points make up the monoid (for a
    /// presentation, its saturation).
    pub fn pieces(&self) -> Result<Vec<Polytope>> {
        let n = self.lattice_rank()?;
        Ok(match &self.kind {
            MonoidKind::AfOfPolytope { .. } => unreachable!(),
            MonoidKind::ToricDual { cone, .. } => {
                let slopes: Vec<IntVec> = cone.constraints().iter().map(|h| h.func.slope.clone()).collect();
                vec![cone_from_rays(&slopes, n)?]
            }
            MonoidKind::Presented(p) => vec![cone_from_rays(&p.images(), n)?],
            MonoidKind::Conditions { pieces, .. } => pieces.clone(),
        })
    }

    /// Constraints on `h` (in lattice coordinates) for `h` to be positive:
    /// zero on units, nonnegative on the monoid, positive off the units.
    pub fn positive_constraints(&self) -> Result<Vec<Halfspace>> {
        let n = self.lattice_rank()?;
        let units_perp = if self.units.is_empty() {
            IntMatrix::identity(n).to_rows()
        } else {
            integer_kernel(&IntMatrix::from_rows_with_cols(self.units.clone(), n))
        };
        let mut cs = Vec::new();
        for u in &self.units {
            cs.push(Halfspace::ge(IntAffineFunc::linear(u.clone())));
            cs.push(Halfspace::ge(IntAffineFunc::linear(u.iter().map(|x| -x).collect())));
        }
        for piece in self.pieces()? {
            let gens = cone_rays(&piece.closure());
            for l in &gens.lineality {
                cs.push(Halfspace::ge(IntAffineFunc::linear(l.clone())));
                cs.push(Halfspace::ge(IntAffineFunc::linear(l.iter().map(|x| -x).collect())));
            }
            for r in &gens.rays {
                cs.push(Halfspace::ge(IntAffineFunc::linear(r.clone())));
            }
            for face in piece.closure().faces() {
                let Some(meet) = piece.intersect(&face.polytope)? else { continue };
                let inside_units = units_perp.iter().all(|w| {
                    let f = IntAffineFunc::linear(w.clone());
                    !meet.meets(&f, crate::lattice::Relation::Gt) && !meet.meets(&f.neg(), crate::lattice::Relation::Gt)
                });
                if inside_units {
                    continue;
                }
                let c = primitive_direction(&face.polytope.relative_interior().witness());
                cs.push(Halfspace::gt(IntAffineFunc::linear(c)));
            }
        }
        Ok(cs)
    }

    /// The cone of positive homomorphisms.
    pub fn positive_cone(&self) -> Result<Polytope> {
        let n = self.lattice_rank()?;
        if n > MAX_HILBERT_DIM {
            return Err(Error::DimensionBound { found: n, bound: MAX_HILBERT_DIM });
        }
        Polytope::try_new(n, self.positive_constraints()?)?.ok_or(Error::EmptyPositiveCone)
    }

    pub fn is_positive_hom(&self, h: &MonoidHom) -> Result<bool> {
        check_dim(self.lattice_rank()?, h.values.len())?;
        Ok(self.positive_constraints()?.iter().all(|c| c.holds(&h.values)))
    }

    /// Adds every lattice element on which all positive homomorphisms are
    /// strictly positive.
    pub fn r_saturate(&self) -> Result<AffineMonoid> {
        let n = self.lattice_rank()?;
        let h = self.positive_cone()?;
        let closed = h.closure();
        let gens = cone_rays(&closed);
        let mut cs = Vec::new();
        for l in &gens.lineality {
            cs.push(Halfspace::ge(IntAffineFunc::linear(l.clone())));
            cs.push(Halfspace::ge(IntAffineFunc::linear(l.iter().map(|x| -x).collect())));
        }
        for r in &gens.rays {
            cs.push(Halfspace::ge(IntAffineFunc::linear(r.clone())));
        }
        for face in closed.faces() {
            if h.meets_polytope(&face.polytope) {
                let c = primitive_direction(&face.polytope.relative_interior().witness());
                cs.push(Halfspace::gt(IntAffineFunc::linear(c)));
            }
        }
        let mut pieces = self.pieces()?;
        if let Some(extra) = Polytope::try_new(n, cs)? {
            if !pieces.iter().any(|p| extra.is_subset_of(p)) {
                pieces.push(extra);
            }
        }
        Ok(AffineMonoid { kind: MonoidKind::Conditions { rank: n, pieces }, units: self.units.clone() })
    }
}

/// Do two lattice monoids have the same elements in the box `[lo, hi]^rank`?
pub fn agree_on_box(a: &AffineMonoid, b: &AffineMonoid, lo: Int, hi: Int) -> Result<bool> {
    let n = a.lattice_rank()?;
    check_dim(n, b.lattice_rank()?)?;
    let mut g = vec![lo; n];
    loop {
        if a.contains(&g)? != b.contains(&g)? {
            return Ok(false);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(true);
            }
            if g[i] < hi {
                g[i] += 1;
                break;
            }
            g[i] = lo;
            i += 1;
        }
    }
}
