use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::ExactField;

/// How `coefficients . x + constant` compares with zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ge,
    Gt,
    Eq,
}

/// `coefficients . x + constant  (rel)  0`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint<F> {
    pub coefficients: Vec<F>,
    pub constant: F,
    pub rel: Relation,
}

impl<F: ExactField> Constraint<F> {
    pub fn new(coefficients: Vec<F>, constant: F, rel: Relation) -> Self {
        Constraint { coefficients, constant, rel }
    }

    pub fn evaluate(&self, x: &[F]) -> F {
        self.coefficients
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_satisfied(&self, x: &[F]) -> bool {
        let v = self.evaluate(x);
        match self.rel {
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    /// For a constraint without variables: does it hold?
    fn constant_holds(&self) -> bool {
        match self.rel {
            Relation::Ge => !self.constant.is_negative(),
            Relation::Gt => self.constant.is_positive(),
            Relation::Eq => self.constant.is_zero(),
        }
    }

    fn scaled(&self, f: &F) -> Self {
        Constraint {
            coefficients: self.coefficients.iter().map(|c| c.clone() * f.clone()).collect(),
            constant: self.constant.clone() * f.clone(),
            rel: self.rel,
        }
    }

    /// Scales so the first nonzero coefficient is +1 (equalities) or ±1
    /// (inequalities, positive scaling only).
    fn normalized(&self) -> Self {
        let Some(lead) = self.coefficients.iter().find(|c| !c.is_zero()) else {
            return self.clone();
        };
        let f = match self.rel {
            Relation::Eq => F::one() / lead.clone(),
            _ => F::one() / lead.abs(),
        };
        self.scaled(&f)
    }
}

/// A finite conjunction of linear constraints in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem<F> {
    pub dim: usize,
    pub constraints: Vec<Constraint<F>>,
}

/// Result of eliminating one variable: the constraints mentioning it, kept
/// for back-substitution.
struct EliminationStep<F> {
    var: usize,
    involved: Vec<Constraint<F>>,
}

enum Reduced<F> {
    Infeasible,
    Ok(Vec<Constraint<F>>),
}

impl<F: ExactField> LinearSystem<F> {
    pub fn new(dim: usize) -> Self {
        LinearSystem { dim, constraints: Vec::new() }
    }

    pub fn with_constraints(dim: usize, constraints: Vec<Constraint<F>>) -> Self {
        for c in &constraints {
            assert_eq!(c.coefficients.len(), dim, "constraint dimension mismatch");
        }
        LinearSystem { dim, constraints }
    }

    pub fn push(&mut self, c: Constraint<F>) {
        assert_eq!(c.coefficients.len(), self.dim, "constraint dimension mismatch");
        self.constraints.push(c);
    }

    pub fn is_satisfied(&self, x: &[F]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// A rational point satisfying every constraint, or `None` if there is
    /// none. Deterministic.
    pub fn feasible(&self) -> Option<Vec<F>> {
        let mut steps = Vec::new();
        let mut current = match reduce(self.constraints.clone()) {
            Reduced::Infeasible => return None,
            Reduced::Ok(c) => c,
        };
        for var in (0..self.dim).rev() {
            let (next, step) = eliminate(current, var);
            steps.push(step);
            current = match reduce(next) {
                Reduced::Infeasible => return None,
                Reduced::Ok(c) => c,
            };
        }
        if !current.iter().all(Constraint::constant_holds) {
            return None;
        }
        let mut x = vec![F::zero(); self.dim];
        for step in steps.iter().rev() {
            x[step.var] = choose_value(&step.involved, step.var, &x);
        }
        debug_assert!(self.is_satisfied(&x), "back-substitution produced an infeasible point");
        Some(x)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible().is_some()
    }

    /// Projection onto the first `keep` variables: a system in `keep`
    /// variables whose solution set is the image of this one. Returns `None`
    /// if the system is infeasible.
    pub fn project_onto_prefix(&self, keep: usize) -> Option<LinearSystem<F>> {
        assert!(keep <= self.dim);
        let mut current = match reduce(self.constraints.clone()) {
            Reduced::Infeasible => return None,
            Reduced::Ok(c) => c,
        };
        for var in (keep..self.dim).rev() {
            let (next, _) = eliminate(current, var);
            current = match reduce(next) {
                Reduced::Infeasible => return None,
                Reduced::Ok(c) => c,
            };
        }
        let constraints: Vec<Constraint<F>> = current
            .into_iter()
            .map(|mut c| {
                c.coefficients.truncate(keep);
                c
            })
            .collect();
        let out = LinearSystem { dim: keep, constraints };
        out.is_feasible().then_some(out)
    }
}

/// Eliminates `var`: by substitution if an equality mentions it, otherwise by
/// pairing lower and upper bounds. A pair involving a strict bound yields a
/// strict consequence.
fn eliminate<F: ExactField>(cs: Vec<Constraint<F>>, var: usize) -> (Vec<Constraint<F>>, EliminationStep<F>) {
    let (involved, rest): (Vec<_>, Vec<_>) = cs.into_iter().partition(|c| !c.coefficients[var].is_zero());
    let mut out = rest;
    if let Some(pos) = involved.iter().position(|c| c.rel == Relation::Eq) {
        // var = -(eq without var) / a
        let eq = involved[pos].clone();
        let a = eq.coefficients[var].clone();
        for (i, c) in involved.iter().enumerate() {
            if i == pos {
                continue;
            }
            let f = c.coefficients[var].clone() / a.clone();
            let coefficients = c
                .coefficients
                .iter()
                .zip(&eq.coefficients)
                .map(|(ci, ei)| ci.clone() - f.clone() * ei.clone())
                .collect();
            out.push(Constraint {
                coefficients,
                constant: c.constant.clone() - f * eq.constant.clone(),
                rel: c.rel,
            });
        }
        return (out, EliminationStep { var, involved });
    }
    let lower: Vec<&Constraint<F>> = involved.iter().filter(|c| c.coefficients[var].is_positive()).collect();
    let upper: Vec<&Constraint<F>> = involved.iter().filter(|c| c.coefficients[var].is_negative()).collect();
    for l in &lower {
        for u in &upper {
            let a = l.coefficients[var].clone();
            let b = -u.coefficients[var].clone();
            let coefficients = l
                .coefficients
                .iter()
                .zip(&u.coefficients)
                .map(|(x, y)| x.clone() * b.clone() + y.clone() * a.clone())
                .collect();
            let rel = if l.rel == Relation::Gt || u.rel == Relation::Gt { Relation::Gt } else { Relation::Ge };
            out.push(Constraint {
                coefficients,
                constant: l.constant.clone() * b.clone() + u.constant.clone() * a.clone(),
                rel,
            });
        }
    }
    (out, EliminationStep { var, involved })
}

/// Normalizes, removes duplicates and dominated parallel constraints, merges
/// opposite inequalities into equalities, and detects constant
/// contradictions.
fn reduce<F: ExactField>(cs: Vec<Constraint<F>>) -> Reduced<F> {
    let mut ineq: BTreeMap<Vec<F>, (F, Relation)> = BTreeMap::new();
    let mut eqs: BTreeMap<Vec<F>, F> = BTreeMap::new();
    for c in cs {
        if c.is_trivial() {
            if !c.constant_holds() {
                return Reduced::Infeasible;
            }
            continue;
        }
        let c = c.normalized();
        match c.rel {
            Relation::Eq => match eqs.get(&c.coefficients) {
                Some(k) if *k != c.constant => return Reduced::Infeasible,
                Some(_) => {}
                None => {
                    eqs.insert(c.coefficients, c.constant);
                }
            },
            rel => {
                let entry = ineq.entry(c.coefficients).or_insert((c.constant.clone(), rel));
                // Smaller constant is tighter; at equal constants, strict wins.
                if c.constant < entry.0 || (c.constant == entry.0 && rel == Relation::Gt) {
                    *entry = (c.constant, rel);
                }
            }
        }
    }
    // Opposite pairs a.x + c >= 0, -a.x + d >= 0 pin -c <= a.x <= d.
    let keys: Vec<Vec<F>> = ineq.keys().cloned().collect();
    for k in keys {
        let neg: Vec<F> = k.iter().map(|x| -x.clone()).collect();
        let (Some((c, r1)), Some((d, r2))) = (ineq.get(&k).cloned(), ineq.get(&neg).cloned()) else {
            continue;
        };
        let lo = -c.clone();
        if lo > d {
            return Reduced::Infeasible;
        }
        if lo == d {
            if r1 == Relation::Gt || r2 == Relation::Gt {
                return Reduced::Infeasible;
            }
            ineq.remove(&k);
            ineq.remove(&neg);
            let e = Constraint::new(k, c, Relation::Eq).normalized();
            match eqs.get(&e.coefficients) {
                Some(x) if *x != e.constant => return Reduced::Infeasible,
                _ => {
                    eqs.insert(e.coefficients, e.constant);
                }
            }
        }
    }
    let mut out: Vec<Constraint<F>> = eqs
        .into_iter()
        .map(|(k, c)| Constraint::new(k, c, Relation::Eq))
        .collect();
    out.extend(ineq.into_iter().map(|(k, (c, r))| Constraint::new(k, c, r)));
    Reduced::Ok(out)
}

/// Picks a value for `var` given values of all lower-indexed variables.
fn choose_value<F: ExactField>(involved: &[Constraint<F>], var: usize, x: &[F]) -> F {
    // Each constraint reads a * x_var + rest (rel) 0 with x_var's slot zeroed.
    let mut lo: Option<(F, bool)> = None;
    let mut hi: Option<(F, bool)> = None;
    for c in involved {
        let a = c.coefficients[var].clone();
        let mut rest = c.constant.clone();
        for (j, cj) in c.coefficients.iter().enumerate() {
            if j != var && !cj.is_zero() {
                rest = rest + cj.clone() * x[j].clone();
            }
        }
        let bound = -rest / a.clone();
        match c.rel {
            Relation::Eq => return bound,
            rel => {
                let strict = rel == Relation::Gt;
                if a.is_positive() {
                    if lo.as_ref().is_none_or(|(v, s)| bound > *v || (bound == *v && strict && !s)) {
                        lo = Some((bound, strict));
                    }
                } else if hi.as_ref().is_none_or(|(v, s)| bound < *v || (bound == *v && strict && !s)) {
                    hi = Some((bound, strict));
                }
            }
        }
    }
    let two = F::one() + F::one();
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) if l == h => l,
        (Some((l, _)), Some((h, _))) => (l + h) / two,
        (Some((l, strict)), None) => if strict { l + F::one() } else { l },
        (None, Some((h, strict))) => if strict { h - F::one() } else { h },
        (None, None) => F::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn c(coeffs: &[i64], k: i64, rel: Relation) -> Constraint<Q> {
        Constraint::new(coeffs.iter().map(|&x| Q::from_integer(x)).collect(), Q::from_integer(k), rel)
    }

    #[test]
    fn unit_interval_is_feasible() {
        let s = LinearSystem::with_constraints(1, vec![c(&[1], 0, Relation::Ge), c(&[-1], 1, Relation::Ge)]);
        let x = s.feasible().unwrap();
        assert!(s.is_satisfied(&x));
    }

    #[test]
    fn strict_against_closed_is_infeasible() {
        let s = LinearSystem::with_constraints(1, vec![c(&[1], 0, Relation::Gt), c(&[-1], 0, Relation::Ge)]);
        assert!(s.feasible().is_none());
    }

    #[test]
    fn mixed_system_has_witness() {
        let s = LinearSystem::with_constraints(
            2,
            vec![
                c(&[1, 1], -1, Relation::Ge),
                c(&[1, 0], 0, Relation::Ge),
                c(&[0, 1], 0, Relation::Ge),
                c(&[1, -1], 0, Relation::Gt),
            ],
        );
        let x = s.feasible().unwrap();
        assert!(s.is_satisfied(&x));
    }

    #[test]
    fn equalities_are_substituted() {
        // x + y = 2, x - y = 0, x > 0
        let s = LinearSystem::with_constraints(
            2,
            vec![c(&[1, 1], -2, Relation::Eq), c(&[1, -1], 0, Relation::Eq), c(&[1, 0], 0, Relation::Gt)],
        );
        assert_eq!(s.feasible().unwrap(), vec![Q::from_integer(1), Q::from_integer(1)]);
        let bad = LinearSystem::with_constraints(
            2,
            vec![c(&[1, 1], -2, Relation::Eq), c(&[1, 1], -3, Relation::Eq)],
        );
        assert!(bad.feasible().is_none());
    }

    #[test]
    fn projection_of_triangle() {
        // {0 <= t <= x} projected to x gives x >= 0.
        let s = LinearSystem::with_constraints(2, vec![c(&[0, 1], 0, Relation::Ge), c(&[1, -1], 0, Relation::Ge)]);
        let p = s.project_onto_prefix(1).unwrap();
        assert!(p.is_satisfied(&[Q::from_integer(3)]));
        assert!(!p.is_satisfied(&[Q::from_integer(-1)]));
    }
}
