use serde::Serialize;

use crate::error::Result;
use crate::monoid::{AffineMonoid, MonoidHom, Presentation};
use crate::polytope::{cone_from_rays, Halfspace, IntAffineFunc, Polytope};
use crate::{Int, IntMatrix, IntVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The chart `N^4 / ((1,1,0,0) = (0,0,1,1))` of a node, the fiber monoid of
/// a point on the cut edge and the checks relating them.
#[derive(Clone, Debug)]
pub struct CutEdgeMonoids {
    pub chart: Presentation,
    /// Stalks of the chart at the node, along `x != 0` and along `y != 0`.
    pub chart_stalks: Vec<AffineMonoid>,
    /// `M (+) N` with `M = {(a, b) : a = 0 => b = 0}`, taken as a union of
    /// pieces.
    pub naive: AffineMonoid,
    pub fiber: AffineMonoid,
    /// `fiber` with the first coordinate inverted.
    pub fiber_localized: AffineMonoid,
    /// `(a, b, c, d) -> (a + c, b + c, b + d)`.
    pub inclusion: IntMatrix,
    pub checks: Vec<MonoidCheck>,
}

impl CutEdgeMonoids {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn ge(slope: &[Int]) -> Halfspace {
    Halfspace::ge(IntAffineFunc::linear(slope.to_vec()))
}

fn gt(slope: &[Int]) -> Halfspace {
    Halfspace::gt(IntAffineFunc::linear(slope.to_vec()))
}

/// `a = 0 = c => b = 0` on `N^3`.
fn in_fiber(v: &[Int]) -> bool {
    v.iter().all(|x| *x >= 0) && (v[0] != 0 || v[2] != 0 || v[1] == 0)
}

/// The expected positive homomorphisms in the coordinates `(a + c, b + c,
/// b + d)`: nonnegative on the first two, not both zero, positive on the
/// third.
fn expected_positive(h: &[Int]) -> bool {
    h[0] >= 0 && h[1] >= 0 && h[0] + h[1] > 0 && h[2] > 0
}

fn positive_somewhere(stalks: &[AffineMonoid], h: &MonoidHom) -> Result<bool> {
    for s in stalks {
        if s.is_positive_hom(h)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn cut_edge_monoids() -> Result<CutEdgeMonoids> {
    let rel = vec![(vec![1, 1, 0, 0], vec![0, 0, 1, 1])];
    let inclusion = IntMatrix::from_rows(vec![vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![0, 1, 0, 1]]);
    let chart = Presentation::with_embedding(4, rel, inclusion.clone())?;
    let images = chart.images();
    let stalk = |unit: Option<IntVec>| -> Result<AffineMonoid> {
        let mut rays = images.clone();
        if let Some(u) = &unit {
            rays.push(u.iter().map(|x| -x).collect());
        }
        let m = AffineMonoid::from_conditions(3, vec![cone_from_rays(&rays, 3)?])?;
        match unit {
            Some(u) => m.with_units(vec![u]),
            None => Ok(m),
        }
    };
    let chart_stalks = vec![stalk(None)?, stalk(Some(images[0].clone()))?, stalk(Some(images[1].clone()))?];

    let origin_line = Polytope::new(3, vec![ge(&[1, 0, 0]), ge(&[-1, 0, 0]), ge(&[0, 1, 0]), ge(&[0, -1, 0]), ge(&[0, 0, 1])])?;
    let wedge = Polytope::new(3, vec![gt(&[1, 0, 0]), ge(&[0, 1, 0]), ge(&[0, 0, 1])])?;
    let naive = AffineMonoid::from_conditions(3, vec![origin_line, wedge])?;
    let fiber = naive.r_saturate()?;
    let fiber_localized = AffineMonoid::from_conditions(3, vec![Polytope::new(3, vec![ge(&[0, 1, 0]), ge(&[0, 0, 1])])?])?
        .with_units(vec![vec![1, 0, 0]])?;

    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| checks.push(MonoidCheck { name: name.into(), passed, detail });

    let mut wrong = Vec::new();
    let mut naive_gaps = 0;
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 0..=6 {
                let v = [a, b, c];
                if fiber.contains(&v)? != in_fiber(&v) {
                    wrong.push(v);
                }
                if naive.contains(&v)? != in_fiber(&v) {
                    naive_gaps += 1;
                }
            }
        }
    }
    push("saturation", wrong.is_empty(), format!("{} disagreements with a = 0 = c => b = 0 on [0,6]^3", wrong.len()));
    push("not a product", naive_gaps > 0, format!("M (+) N misses {naive_gaps} elements of the saturation"));

    let mut mismatches = Vec::new();
    let mut positives = 0;
    for x1 in 0..=3 {
        for x2 in 0..=3 {
            for x3 in 0..=3 {
                for x4 in 0..=3 {
                    let x = [x1, x2, x3, x4];
                    // On (-1, 0, 1, 0) the value is h[1] = x2 - x4.
                    let h: IntVec = vec![x1 + x4, x2 - x4, x3 + x4];
                    let hom = MonoidHom::from_ints(&h);
                    let pulled = positive_somewhere(&chart_stalks, &hom)? && h[1] >= 0;
                    let from_fiber = positive_somewhere(&[fiber.clone(), fiber_localized.clone()], &hom)?;
                    if pulled != from_fiber || from_fiber != expected_positive(&h) {
                        mismatches.push(x);
                    }
                    positives += usize::from(from_fiber);
                }
            }
        }
    }
    push(
        "positive homomorphisms",
        mismatches.is_empty(),
        format!("{} of 256 grid points disagree; {positives} positive", mismatches.len()),
    );
    let named = [([1, 0, 1, 0], true), ([1, 0, 0, 0], false), ([1, 0, 1, 1], false)];
    let ok = named.iter().all(|(x, want)| {
        let h = MonoidHom::from_ints(&[x[0] + x[3], x[1] - x[3], x[2] + x[3]]);
        positive_somewhere(&[fiber.clone(), fiber_localized.clone()], &h).is_ok_and(|p| p == *want)
    });
    push("examples", ok, "a + c + b + d positive; a + c not; a + c + b + d + (a + d) negative on (-1,0,1,0)".into());

    Ok(CutEdgeMonoids { chart, chart_stalks, naive, fiber, fiber_localized, inclusion, checks })
}
