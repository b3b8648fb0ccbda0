use std::collections::{BTreeSet, VecDeque};

use super::{IntAffineFunc, Polytope, Rel};

/// A nonempty face of a polytope: the common zero set of some of its
/// non-strict constraint functions.
#[derive(Clone, Debug)]
pub struct Face {
    /// Indices into the parent's constraint list that vanish on the face.
    pub tight: Vec<usize>,
    pub zero_set: Vec<IntAffineFunc>,
    pub polytope: Polytope,
}

impl Face {
    pub fn dimension(&self) -> usize {
        self.polytope.dimension()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        other.tight.iter().all(|i| self.tight.contains(i))
    }
}

/// Tight sets are closed: a face determined by some constraints is recorded
/// with every constraint that vanishes on it, so each face appears once.
fn close_tight(p: &Polytope, face: &Polytope) -> Vec<usize> {
    (0..p.constraints.len())
        .filter(|&i| {
            let h = &p.constraints[i];
            h.rel == Rel::Ge && !face.meets(&h.func, crate::lattice::Relation::Gt)
        })
        .collect()
}

pub(super) fn enumerate(p: &Polytope) -> Vec<Face> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let top = close_tight(p, p);
    seen.insert(top.clone());
    let mut queue = VecDeque::from([(top, p.clone())]);
    while let Some((tight, poly)) = queue.pop_front() {
        for i in 0..p.constraints.len() {
            if tight.contains(&i) || p.constraints[i].rel == Rel::Gt {
                continue;
            }
            let f = &p.constraints[i].func;
            let Ok(Some(sub)) = poly.with_equalities(std::slice::from_ref(f)) else {
                continue;
            };
            let t = close_tight(p, &sub);
            if seen.insert(t.clone()) {
                queue.push_back((t, sub));
            }
        }
        let zero_set = tight.iter().map(|&i| p.constraints[i].func.clone()).collect();
        out.push(Face { tight, zero_set, polytope: poly });
    }
    out.sort_by(|a, b| {
        b.polytope
            .dimension()
            .cmp(&a.polytope.dimension())
            .then_with(|| a.tight.cmp(&b.tight))
    });
    out
}
