//! Half-open integral affine polytopes.
//!
//! A [`Polytope`] is the solution set in `R^n` of finitely many inequalities
//! `f(x) >= 0` or `f(x) > 0`, where each `f` has an integer slope and a
//! rational constant. Polytopes are never empty; operations whose result may
//! be empty return `Option`.

mod cone;
mod faces;
mod map;

pub use cone::{cone_from_rays, cone_rays, ConeGenerators};
pub use faces::Face;
pub use map::IntAffineMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{integer_kernel, rank, to_primitive_integer, Constraint, LinearSystem, Relation};
use crate::{Int, IntMatrix, IntVec, RatSystem, RatVec, Rational};

/// An integral affine function `x -> slope . x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntAffineFunc {
    pub slope: IntVec,
    pub constant: Rational,
}

impl IntAffineFunc {
    pub fn new(slope: IntVec, constant: Rational) -> Self {
        IntAffineFunc { slope, constant }
    }

    pub fn linear(slope: IntVec) -> Self {
        IntAffineFunc { slope, constant: Rational::zero() }
    }

    pub fn from_ints(slope: &[Int], constant: Int) -> Self {
        IntAffineFunc { slope: slope.to_vec(), constant: Rational::from_integer(constant.into()) }
    }

    pub fn constant_fn(dim: usize, c: Rational) -> Self {
        IntAffineFunc { slope: vec![0; dim], constant: c }
    }

    /// The coordinate function `x_i` on `R^dim`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut slope = vec![0; dim];
        slope[i] = 1;
        IntAffineFunc::linear(slope)
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.slope
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + Rational::from_integer((*a).into()) * b)
    }

    pub fn is_constant(&self) -> bool {
        self.slope.iter().all(|s| *s == 0)
    }

    pub fn add(&self, other: &IntAffineFunc) -> IntAffineFunc {
        IntAffineFunc {
            slope: self.slope.iter().zip(&other.slope).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn neg(&self) -> IntAffineFunc {
        IntAffineFunc { slope: self.slope.iter().map(|a| -a).collect(), constant: -&self.constant }
    }

    pub fn scale(&self, k: Int) -> IntAffineFunc {
        IntAffineFunc {
            slope: self.slope.iter().map(|a| a * k).collect(),
            constant: &self.constant * Rational::from_integer(k.into()),
        }
    }

    pub fn shift(&self, c: &Rational) -> IntAffineFunc {
        IntAffineFunc { slope: self.slope.clone(), constant: &self.constant + c }
    }

    /// Divides slope and constant by the content of the slope.
    pub fn normalized(&self) -> IntAffineFunc {
        let g = self.slope.iter().fold(0, |g: Int, s| g.gcd(s));
        if g <= 1 {
            return self.clone();
        }
        IntAffineFunc {
            slope: self.slope.iter().map(|s| s / g).collect(),
            constant: &self.constant / Rational::from_integer(g.into()),
        }
    }

    /// Pads with zero slope entries on the left and right.
    pub fn embed(&self, before: usize, after: usize) -> IntAffineFunc {
        let mut slope = vec![0; before];
        slope.extend_from_slice(&self.slope);
        slope.extend(std::iter::repeat_n(0, after));
        IntAffineFunc { slope, constant: self.constant.clone() }
    }

    pub(crate) fn to_constraint(&self, rel: Relation) -> Constraint<Rational> {
        Constraint::new(
            self.slope.iter().map(|s| Rational::from_integer((*s).into())).collect(),
            self.constant.clone(),
            rel,
        )
    }
}

/// Strictness of a polytope inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Ge,
    Gt,
}

impl Rel {
    fn relation(self) -> Relation {
        match self {
            Rel::Ge => Relation::Ge,
            Rel::Gt => Relation::Gt,
        }
    }
}

/// `func >= 0` or `func > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub func: IntAffineFunc,
    pub rel: Rel,
}

impl Halfspace {
    pub fn ge(func: IntAffineFunc) -> Self {
        Halfspace { func, rel: Rel::Ge }
    }

    pub fn gt(func: IntAffineFunc) -> Self {
        Halfspace { func, rel: Rel::Gt }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.func.evaluate(x);
        match self.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }

    fn to_constraint(&self) -> Constraint<Rational> {
        self.func.to_constraint(self.rel.relation())
    }

    /// The halfspace of points violating this one.
    fn complement(&self) -> Constraint<Rational> {
        match self.rel {
            Rel::Ge => self.func.neg().to_constraint(Relation::Gt),
            Rel::Gt => self.func.neg().to_constraint(Relation::Ge),
        }
    }
}

/// A nonempty half-open integral affine polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    ambient_dim: usize,
    constraints: Vec<Halfspace>,
}

impl Polytope {
    /// Normalizes the constraints and checks nonemptiness.
    pub fn new(ambient_dim: usize, constraints: Vec<Halfspace>) -> Result<Polytope> {
        Self::try_new(ambient_dim, constraints)?.ok_or(Error::Empty)
    }

    /// Like [`Polytope::new`] but reports emptiness as `Ok(None)`.
    pub fn try_new(ambient_dim: usize, constraints: Vec<Halfspace>) -> Result<Option<Polytope>> {
        let mut out: Vec<Halfspace> = Vec::with_capacity(constraints.len());
        for h in constraints {
            check_dim(ambient_dim, h.func.dim())?;
            let func = h.func.normalized();
            if func.is_constant() {
                let ok = match h.rel {
                    Rel::Ge => !func.constant.is_negative(),
                    Rel::Gt => func.constant.is_positive(),
                };
                if ok {
                    continue;
                }
                return Ok(None);
            }
            match out.iter_mut().find(|o| o.func.slope == func.slope) {
                Some(o) => {
                    if func.constant < o.func.constant || (func.constant == o.func.constant && h.rel == Rel::Gt) {
                        *o = Halfspace { func, rel: h.rel };
                    }
                }
                None => out.push(Halfspace { func, rel: h.rel }),
            }
        }
        let p = Polytope { ambient_dim, constraints: out };
        Ok(p.system().is_feasible().then_some(p))
    }

    /// All of `R^n`.
    pub fn whole_space(n: usize) -> Polytope {
        Polytope { ambient_dim: n, constraints: Vec::new() }
    }

    /// The closed orthant `[0, inf)^n`.
    pub fn orthant(n: usize) -> Polytope {
        let cs = (0..n).map(|i| Halfspace::ge(IntAffineFunc::coordinate(n, i))).collect();
        Polytope { ambient_dim: n, constraints: cs }
    }

    /// The open orthant `(0, inf)^n`.
    pub fn open_orthant(n: usize) -> Polytope {
        let cs = (0..n).map(|i| Halfspace::gt(IntAffineFunc::coordinate(n, i))).collect();
        Polytope { ambient_dim: n, constraints: cs }
    }

    /// The standard closed simplex `{x >= 0, 1 - sum x >= 0}`.
    pub fn standard_simplex(n: usize) -> Polytope {
        let mut cs: Vec<Halfspace> = (0..n).map(|i| Halfspace::ge(IntAffineFunc::coordinate(n, i))).collect();
        cs.push(Halfspace::ge(IntAffineFunc::from_ints(&vec![-1; n], 1)));
        Polytope { ambient_dim: n, constraints: cs }
    }

    /// The single rational point `x`.
    pub fn point(x: &[Rational]) -> Polytope {
        let n = x.len();
        let mut cs = Vec::new();
        for (i, xi) in x.iter().enumerate() {
            let f = IntAffineFunc::coordinate(n, i).shift(&-xi);
            cs.push(Halfspace::ge(f.neg()));
            cs.push(Halfspace::ge(f));
        }
        Polytope { ambient_dim: n, constraints: cs }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    /// The constraints as a rational linear system.
    pub fn system(&self) -> RatSystem {
        LinearSystem::with_constraints(
            self.ambient_dim,
            self.constraints.iter().map(Halfspace::to_constraint).collect(),
        )
    }

    fn system_with(&self, extra: impl IntoIterator<Item = Constraint<Rational>>) -> RatSystem {
        let mut s = self.system();
        for c in extra {
            s.push(c);
        }
        s
    }

    /// A deterministic rational point of the polytope.
    pub fn witness(&self) -> RatVec {
        self.system().feasible().expect("polytopes are nonempty")
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.ambient_dim, x.len())?;
        Ok(self.constraints.iter().all(|h| h.holds(x)))
    }

    /// Is `{x in P : f(x) rel 0}` nonempty?
    pub fn meets(&self, f: &IntAffineFunc, rel: Relation) -> bool {
        self.system_with([f.to_constraint(rel)]).is_feasible()
    }

    /// Intersection with extra halfspaces; `None` if empty.
    pub fn intersect_halfspaces(&self, extra: &[Halfspace]) -> Result<Option<Polytope>> {
        let mut cs = self.constraints.clone();
        cs.extend(extra.iter().cloned());
        Polytope::try_new(self.ambient_dim, cs)
    }

    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        self.intersect_halfspaces(&other.constraints)
    }

    /// Adds `f = 0` as a pair of non-strict constraints.
    pub fn with_equalities(&self, eqs: &[IntAffineFunc]) -> Result<Option<Polytope>> {
        let extra: Vec<Halfspace> = eqs
            .iter()
            .flat_map(|f| [Halfspace::ge(f.clone()), Halfspace::ge(f.neg())])
            .collect();
        self.intersect_halfspaces(&extra)
    }

    /// Indices of non-strict constraints that vanish identically on `P`.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| {
                let h = &self.constraints[i];
                h.rel == Rel::Ge && !self.meets(&h.func, Relation::Gt)
            })
            .collect()
    }

    fn slope_rows(&self, idx: &[usize]) -> Vec<RatVec> {
        idx.iter()
            .map(|&i| {
                self.constraints[i]
                    .func
                    .slope
                    .iter()
                    .map(|s| Rational::from_integer((*s).into()))
                    .collect()
            })
            .collect()
    }

    /// Dimension of the affine hull.
    pub fn dimension(&self) -> usize {
        let eq = self.implicit_equalities();
        self.ambient_dim - rank(&self.slope_rows(&eq))
    }

    /// Integer basis of the direction lattice of the affine hull.
    pub fn direction_lattice(&self) -> Vec<IntVec> {
        let eq = self.implicit_equalities();
        let rows: Vec<IntVec> = eq.iter().map(|&i| self.constraints[i].func.slope.clone()).collect();
        integer_kernel(&IntMatrix::from_rows_with_cols(rows, self.ambient_dim))
    }

    pub fn is_closed(&self) -> bool {
        self.constraints.iter().all(|h| h.rel == Rel::Ge)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.ambient_dim
    }

    /// Replaces every strict inequality by its non-strict version.
    pub fn closure(&self) -> Polytope {
        Polytope {
            ambient_dim: self.ambient_dim,
            constraints: self.constraints.iter().map(|h| Halfspace::ge(h.func.clone())).collect(),
        }
    }

    /// Makes every constraint that is not an implicit equality strict; the
    /// implicit equalities are kept as equalities.
    pub fn relative_interior(&self) -> Polytope {
        let eq = self.implicit_equalities();
        let mut cs = Vec::with_capacity(self.constraints.len());
        for (i, h) in self.constraints.iter().enumerate() {
            if eq.contains(&i) {
                cs.push(Halfspace::ge(h.func.clone()));
                cs.push(Halfspace::ge(h.func.neg()));
            } else {
                cs.push(Halfspace::gt(h.func.clone()));
            }
        }
        Polytope::new(self.ambient_dim, cs).expect("relative interior of a nonempty polytope is nonempty")
    }

    pub fn is_relatively_open(&self) -> bool {
        self.set_eq(&self.relative_interior())
    }

    /// Is every point of `self` in `other`?
    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        self.ambient_dim == other.ambient_dim
            && other.constraints.iter().all(|h| !self.system_with([h.complement()]).is_feasible())
    }

    pub fn set_eq(&self, other: &Polytope) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Do the two polytopes share a point?
    pub fn meets_polytope(&self, other: &Polytope) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.system_with(other.constraints.iter().map(Halfspace::to_constraint)).is_feasible()
    }

    /// Integer basis of the lineality space of the closure.
    pub fn lineality_basis(&self) -> Vec<IntVec> {
        let rows: Vec<IntVec> = self.constraints.iter().map(|h| h.func.slope.clone()).collect();
        integer_kernel(&IntMatrix::from_rows_with_cols(rows, self.ambient_dim))
    }

    pub fn contains_line(&self) -> bool {
        !self.lineality_basis().is_empty()
    }

    /// Does the closure recede in direction `u`?
    pub fn recedes_in(&self, u: &[Int]) -> bool {
        self.constraints.iter().all(|h| dot(&h.func.slope, u) >= 0)
    }

    /// Recession cone of the closure, closed.
    pub fn closed_recession_cone(&self) -> Polytope {
        Polytope {
            ambient_dim: self.ambient_dim,
            constraints: self
                .constraints
                .iter()
                .map(|h| Halfspace::ge(IntAffineFunc::linear(h.func.slope.clone())))
                .collect(),
        }
    }

    /// Recession cone of the closure with each constraint's strictness carried
    /// over from `P`. Falls back to the closed recession cone when carrying
    /// strictness over would leave nothing (e.g. bounded open cells).
    pub fn recession_cone(&self) -> Polytope {
        let cs = self
            .constraints
            .iter()
            .map(|h| Halfspace { func: IntAffineFunc::linear(h.func.slope.clone()), rel: h.rel })
            .collect();
        match Polytope::try_new(self.ambient_dim, cs) {
            Ok(Some(p)) => p,
            _ => self.closed_recession_cone(),
        }
    }

    /// A point of a minimal face of the closure, found greedily.
    fn minimal_face_point(&self) -> RatVec {
        let closed = self.closure();
        let mut eqs: Vec<IntAffineFunc> = Vec::new();
        for h in &closed.constraints {
            let mut trial = eqs.clone();
            trial.push(h.func.clone());
            if let Ok(Some(_)) = closed.with_equalities(&trial) {
                eqs = trial;
            }
        }
        closed.with_equalities(&eqs).ok().flatten().expect("greedy face is nonempty").witness()
    }

    /// An apex about which `P` is invariant under positive scaling, if any.
    pub fn cone_apex(&self) -> Option<RatVec> {
        let apex = self.minimal_face_point();
        let shifted = self.translate(&apex.iter().map(|x| -x).collect::<Vec<_>>());
        let rec = self.recession_cone();
        shifted.set_eq(&rec).then_some(apex)
    }

    pub fn is_cone(&self) -> bool {
        self.cone_apex().is_some()
    }

    /// Is `P` a cone with apex at the origin?
    pub fn is_cone_at_origin(&self) -> bool {
        self.set_eq(&self.recession_cone())
    }

    /// `P + v`.
    pub fn translate(&self, v: &[Rational]) -> Polytope {
        let cs = self
            .constraints
            .iter()
            .map(|h| {
                // f(x - v) = slope.x + (c - slope.v)
                let sv = IntAffineFunc::linear(h.func.slope.clone()).evaluate(v);
                Halfspace { func: h.func.shift(&-sv), rel: h.rel }
            })
            .collect();
        Polytope { ambient_dim: self.ambient_dim, constraints: cs }
    }

    /// `{x : map(x) in P}`; `None` if empty.
    pub fn preimage(&self, map: &IntAffineMap) -> Result<Option<Polytope>> {
        check_dim(self.ambient_dim, map.target_dim())?;
        let cs = self.constraints.iter().map(|h| Halfspace { func: map.pull_back(&h.func), rel: h.rel }).collect();
        Polytope::try_new(map.source_dim(), cs)
    }

    /// `P x Q` in `R^(m+n)`.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let (m, n) = (self.ambient_dim, other.ambient_dim);
        let mut cs: Vec<Halfspace> = self
            .constraints
            .iter()
            .map(|h| Halfspace { func: h.func.embed(0, n), rel: h.rel })
            .collect();
        cs.extend(other.constraints.iter().map(|h| Halfspace { func: h.func.embed(m, 0), rel: h.rel }));
        Polytope { ambient_dim: m + n, constraints: cs }
    }

    /// `{(p, q) in P x Q : f(p) = g(q)}`; `None` if empty.
    pub fn fiber_product(p: &Polytope, f: &IntAffineMap, q: &Polytope, g: &IntAffineMap) -> Result<Option<Polytope>> {
        check_dim(p.ambient_dim, f.source_dim())?;
        check_dim(q.ambient_dim, g.source_dim())?;
        check_dim(f.target_dim(), g.target_dim())?;
        let (m, n) = (p.ambient_dim, q.ambient_dim);
        let eqs: Vec<IntAffineFunc> = (0..f.target_dim())
            .map(|i| f.component(i).embed(0, n).add(&g.component(i).embed(m, 0).neg()))
            .collect();
        p.product(q).with_equalities(&eqs)
    }

    /// The image under an integral affine map, computed by projection.
    pub fn image(&self, map: &IntAffineMap) -> Result<Polytope> {
        check_dim(self.ambient_dim, map.source_dim())?;
        let (n, m) = (map.source_dim(), map.target_dim());
        // Variables (y, x): y - A x - t = 0 and x in P.
        let mut sys = LinearSystem::new(m + n);
        for i in 0..m {
            let f = map.component(i).embed(m, 0).neg();
            let mut c = f.to_constraint(Relation::Eq);
            c.coefficients[i] = Rational::one();
            sys.push(c);
        }
        for h in &self.constraints {
            sys.push(h.func.embed(m, 0).to_constraint(h.rel.relation()));
        }
        let proj = sys.project_onto_prefix(m).ok_or(Error::Empty)?;
        Polytope::new(m, integral_halfspaces(&proj))
    }

    /// Coordinate permutation: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Polytope> {
        check_dim(self.ambient_dim, perm.len())?;
        let cs = self
            .constraints
            .iter()
            .map(|h| {
                let slope = perm.iter().map(|&j| h.func.slope[j]).collect();
                Halfspace { func: IntAffineFunc::new(slope, h.func.constant.clone()), rel: h.rel }
            })
            .collect();
        Polytope::new(self.ambient_dim, cs)
    }

    pub fn faces(&self) -> Vec<Face> {
        faces::enumerate(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        crate::json::polytope_to_json(self)
    }
}

/// Converts a rational system into integral halfspaces (equalities become
/// pairs of non-strict inequalities).
pub(crate) fn integral_halfspaces(sys: &RatSystem) -> Vec<Halfspace> {
    let mut out = Vec::new();
    for c in &sys.constraints {
        // Scale by the positive lcm of denominators of all entries.
        let mut all = c.coefficients.clone();
        all.push(c.constant.clone());
        let l = all.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let lq = Rational::from_integer(l);
        let slope: IntVec = c
            .coefficients
            .iter()
            .map(|x| {
                let v = (x * &lq).to_integer();
                num_traits::ToPrimitive::to_i64(&v).expect("slope entry fits in i64")
            })
            .collect();
        let func = IntAffineFunc::new(slope, &c.constant * &lq);
        match c.rel {
            Relation::Ge => out.push(Halfspace::ge(func)),
            Relation::Gt => out.push(Halfspace::gt(func)),
            Relation::Eq => {
                out.push(Halfspace::ge(func.neg()));
                out.push(Halfspace::ge(func));
            }
        }
    }
    out
}

pub(crate) fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn rat(n: Int) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn rat_vec(v: &[Int]) -> RatVec {
    v.iter().map(|x| rat(*x)).collect()
}

/// Primitive integer direction of a rational vector.
pub(crate) fn primitive_direction(v: &[Rational]) -> IntVec {
    to_primitive_integer(v)
        .into_iter()
        .map(|x| num_traits::ToPrimitive::to_i64(&x).expect("direction entry fits in i64"))
        .collect()
}

#[cfg(test)]
mod tests;
