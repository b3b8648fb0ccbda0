//! JSON encodings of rationals, polytopes, maps, complexes, atlases,
//! subdivisions and monoids.
//!
//! Rationals are written as strings `"p"` or `"p/q"`. On input, integers are
//! accepted as JSON numbers as well.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::atlas::{Atlas, Gluing, Mode, TropicalComplex};
use crate::error::{Error, Result};
use crate::monoid::{AffineMonoid, MonoidKind, Presentation};
use crate::polytope::{Halfspace, IntAffineFunc, IntAffineMap, Polytope, Rel};
use crate::refinement::Subdivision;
use crate::scalar::{format_rational, parse_rational};
use crate::{Int, IntMatrix, IntVec, RatVec, Rational};

#[derive(Serialize, Deserialize)]
struct ConstraintRepr {
    slope: IntVec,
    #[serde(default = "zero_value")]
    constant: Value,
    rel: Rel,
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    ambient_dim: usize,
    #[serde(default)]
    constraints: Vec<ConstraintRepr>,
}

fn zero_value() -> Value {
    json!("0")
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Invalid(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| Error::Invalid(format!("non-integral number {n}; write rationals as \"p/q\""))),
        other => Err(Error::Invalid(format!("expected a rational, found {other}"))),
    }
}

pub fn rat_vec_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn rat_vec_from_json(v: &Value) -> Result<RatVec> {
    v.as_array()
        .ok_or_else(|| Error::Invalid("expected an array of rationals".into()))?
        .iter()
        .map(rational_from_json)
        .collect()
}

pub fn func_to_json(f: &IntAffineFunc) -> Value {
    json!({"slope": f.slope, "constant": rational_to_json(&f.constant)})
}

pub fn func_from_json(v: &Value) -> Result<IntAffineFunc> {
    let slope: IntVec = decode(field(v, "slope")?, "slope")?;
    let constant = match v.get("constant") {
        Some(c) => rational_from_json(c)?,
        None => Rational::from_integer(0.into()),
    };
    Ok(IntAffineFunc::new(slope, constant))
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    let cs: Vec<Value> = p
        .constraints()
        .iter()
        .map(|h| json!({"slope": h.func.slope, "constant": rational_to_json(&h.func.constant), "rel": h.rel}))
        .collect();
    json!({"ambient_dim": p.ambient_dim(), "constraints": cs})
}

pub fn polytope_from_json(v: &Value) -> Result<Polytope> {
    let repr: PolytopeRepr =
        serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("polytope: {e}")))?;
    let mut cs = Vec::with_capacity(repr.constraints.len());
    for c in repr.constraints {
        let constant = rational_from_json(&c.constant)?;
        cs.push(Halfspace { func: IntAffineFunc::new(c.slope, constant), rel: c.rel });
    }
    Polytope::new(repr.ambient_dim, cs)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Invalid(format!("missing field {key:?}")))
}

fn decode<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("{what}: {e}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Invalid(format!("{what}: expected an array")))
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    json!(m.to_rows())
}

/// Rows of integers; `cols` is needed only when there are no rows.
pub fn matrix_from_json(v: &Value, cols: Option<usize>) -> Result<IntMatrix> {
    let rows: Vec<Vec<Int>> = decode(v, "matrix")?;
    let width = rows.first().map(Vec::len).or(cols).unwrap_or(0);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Invalid("matrix: rows of different lengths".into()));
    }
    Ok(IntMatrix::from_rows_with_cols(rows, width))
}

/// `{"matrix": [[..]], "translation": ["p/q", ..], "source_dim": k}`; the
/// translation defaults to zero and `source_dim` is only needed for maps to
/// a point.
pub fn map_to_json(m: &IntAffineMap) -> Value {
    json!({"matrix": matrix_to_json(&m.matrix), "translation": rat_vec_to_json(&m.translation), "source_dim": m.source_dim()})
}

pub fn map_from_json(v: &Value) -> Result<IntAffineMap> {
    let cols = v.get("source_dim").and_then(Value::as_u64).map(|c| c as usize);
    let matrix = matrix_from_json(field(v, "matrix")?, cols)?;
    if let Some(c) = cols {
        if matrix.rows() > 0 && matrix.cols() != c {
            return Err(Error::DimensionMismatch { expected: c, found: matrix.cols() });
        }
    }
    match v.get("translation") {
        Some(t) => IntAffineMap::new(matrix, rat_vec_from_json(t)?),
        None => Ok(IntAffineMap::linear(matrix)),
    }
}

fn gluing_to_json(g: &Gluing) -> Value {
    json!({"a": g.a, "face_a": polytope_to_json(&g.face_a), "b": g.b, "face_b": polytope_to_json(&g.face_b), "map": map_to_json(&g.map)})
}

/// A face is given either as a polytope or as an index into the face list of
/// its cell.
fn face_from_json(v: &Value, cell: Option<&Polytope>) -> Result<Polytope> {
    match (v.as_u64(), cell) {
        (Some(i), Some(c)) => c
            .faces()
            .into_iter()
            .nth(i as usize)
            .map(|f| f.polytope)
            .ok_or_else(|| Error::DanglingReference(format!("face {i}"))),
        (Some(i), None) => Err(Error::DanglingReference(format!("face {i} of a missing cell"))),
        (None, _) => polytope_from_json(v),
    }
}

fn gluings_from_json(v: Option<&Value>, cells: &[Polytope]) -> Result<Vec<Gluing>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    array(v, "gluings")?
        .iter()
        .map(|g| {
            let a: usize = decode(field(g, "a")?, "gluing index")?;
            let b: usize = decode(field(g, "b")?, "gluing index")?;
            Ok(Gluing {
                a,
                face_a: face_from_json(field(g, "face_a")?, cells.get(a))?,
                b,
                face_b: face_from_json(field(g, "face_b")?, cells.get(b))?,
                map: map_from_json(field(g, "map")?)?,
            })
        })
        .collect()
}

fn polytopes_from_json(v: &Value, what: &str) -> Result<Vec<Polytope>> {
    array(v, what)?.iter().map(polytope_from_json).collect()
}

pub fn atlas_to_json(a: &Atlas) -> Value {
    json!({
        "charts": a.charts().iter().map(polytope_to_json).collect::<Vec<_>>(),
        "gluings": a.gluings().iter().map(gluing_to_json).collect::<Vec<_>>(),
        "mode": a.mode,
    })
}

pub fn atlas_from_json(v: &Value) -> Result<Atlas> {
    let charts = polytopes_from_json(field(v, "charts")?, "charts")?;
    let gluings = gluings_from_json(v.get("gluings"), &charts)?;
    let mode: Mode = match v.get("mode") {
        Some(m) => decode(m, "mode")?,
        None => Mode::default(),
    };
    Atlas::new(charts, gluings, mode)
}

/// Embedded complexes are written with `ambient_dim` and no attachments;
/// their attachments are recomputed on input.
pub fn complex_to_json(c: &TropicalComplex) -> Value {
    let cells: Vec<Value> = c.cells().iter().map(polytope_to_json).collect();
    match c.ambient_dim().filter(|_| c.is_embedded()) {
        Some(n) => json!({"ambient_dim": n, "cells": cells}),
        None => json!({"cells": cells, "attachments": c.attachments().iter().map(gluing_to_json).collect::<Vec<_>>()}),
    }
}

pub fn complex_from_json(v: &Value) -> Result<TropicalComplex> {
    let cells = polytopes_from_json(field(v, "cells")?, "cells")?;
    if v.get("attachments").is_some() {
        let attachments = gluings_from_json(v.get("attachments"), &cells)?;
        return TropicalComplex::new(cells, attachments);
    }
    let n = match v.get("ambient_dim") {
        Some(d) => decode(d, "ambient_dim")?,
        None => cells.first().map(Polytope::ambient_dim).ok_or_else(|| Error::Invalid("a complex needs cells or ambient_dim".into()))?,
    };
    TropicalComplex::embedded(n, cells)
}

pub fn subdivision_to_json(s: &Subdivision) -> Value {
    let map: Vec<Value> = s.cell_map.iter().map(|(t, m)| json!({"target": t, "map": map_to_json(m)})).collect();
    json!({"target": complex_to_json(&s.target), "refined": complex_to_json(&s.refined), "cell_map": map})
}

/// `cell_map` entries default to the identity map; an absent `cell_map`
/// sends every refined cell to target cell 0.
pub fn subdivision_from_json(v: &Value) -> Result<Subdivision> {
    let target = complex_from_json(field(v, "target")?)?;
    let refined = complex_from_json(field(v, "refined")?)?;
    let cell_map = match v.get("cell_map") {
        Some(m) => array(m, "cell_map")?
            .iter()
            .zip(refined.cells())
            .map(|(e, cell)| {
                let t: usize = decode(field(e, "target")?, "cell_map target")?;
                let map = match e.get("map") {
                    Some(m) => map_from_json(m)?,
                    None => IntAffineMap::identity(cell.ambient_dim()),
                };
                Ok((t, map))
            })
            .collect::<Result<Vec<_>>>()?,
        None => refined.cells().iter().map(|c| (0, IntAffineMap::identity(c.ambient_dim()))).collect(),
    };
    Subdivision::new(target, refined, cell_map)
}

pub fn monoid_to_json(m: &AffineMonoid) -> Value {
    let mut v = match &m.kind {
        MonoidKind::AfOfPolytope { polytope, .. } => json!({"kind": "af", "polytope": polytope_to_json(polytope)}),
        MonoidKind::ToricDual { cone, .. } => json!({"kind": "toric_dual", "cone": polytope_to_json(cone)}),
        MonoidKind::Presented(p) => json!({
            "kind": "presented",
            "generators": p.generators,
            "relations": p.relations,
            "embedding": matrix_to_json(&p.embedding),
        }),
        MonoidKind::Conditions { rank, pieces } => {
            json!({"kind": "conditions", "rank": rank, "pieces": pieces.iter().map(polytope_to_json).collect::<Vec<_>>()})
        }
    };
    if !m.units.is_empty() {
        v["units"] = json!(m.units);
    }
    v
}

/// Kinds `af`, `toric_dual`, `presented` (embedding optional) and
/// `conditions`, each with optional `units`.
pub fn monoid_from_json(v: &Value) -> Result<AffineMonoid> {
    let kind: String = decode(field(v, "kind")?, "kind")?;
    let m = match kind.as_str() {
        "af" => AffineMonoid::af_of_polytope(polytope_from_json(field(v, "polytope")?)?)?,
        "toric_dual" => AffineMonoid::toric_dual(polytope_from_json(field(v, "cone")?)?)?,
        "presented" => {
            let k: usize = decode(field(v, "generators")?, "generators")?;
            let relations: Vec<(IntVec, IntVec)> = match v.get("relations") {
                Some(r) => decode(r, "relations")?,
                None => Vec::new(),
            };
            let p = match v.get("embedding") {
                Some(e) => Presentation::with_embedding(k, relations, matrix_from_json(e, Some(k))?)?,
                None => Presentation::new(k, relations)?,
            };
            AffineMonoid::presented(p)
        }
        "conditions" => {
            let rank: usize = decode(field(v, "rank")?, "rank")?;
            AffineMonoid::from_conditions(rank, polytopes_from_json(field(v, "pieces")?, "pieces")?)?
        }
        other => return Err(Error::Invalid(format!("unknown monoid kind {other:?}"))),
    };
    match v.get("units") {
        Some(u) => m.with_units(decode(u, "units")?),
        None => Ok(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let v = json!({"ambient_dim": 2, "constraints": [
            {"slope": [1, 0], "constant": 0, "rel": "ge"},
            {"slope": [0, 2], "constant": "1/3", "rel": "gt"}
        ]});
        let p = polytope_from_json(&v).unwrap();
        let back = polytope_from_json(&polytope_to_json(&p)).unwrap();
        assert_eq!(p, back);
        assert_eq!(p.constraints()[1].func.constant, Rational::new(1.into(), 6.into()));
    }

    #[test]
    fn empty_polytope_rejected() {
        let v = json!({"ambient_dim": 1, "constraints": [
            {"slope": [1], "constant": "-1", "rel": "ge"},
            {"slope": [-1], "constant": "0", "rel": "ge"}
        ]});
        assert_eq!(polytope_from_json(&v), Err(Error::Empty));
    }

    #[test]
    fn map_and_complex_round_trip() {
        let m = IntAffineMap::new(IntMatrix::from_rows(vec![vec![1, 2], vec![0, -1]]), vec![Rational::new(1.into(), 2.into()), Rational::from_integer(0.into())]).unwrap();
        assert_eq!(map_from_json(&map_to_json(&m)).unwrap(), m);
        let to_point = IntAffineMap::linear(IntMatrix::zeros(0, 3));
        assert_eq!(map_from_json(&map_to_json(&to_point)).unwrap().source_dim(), 3);

        let c = TropicalComplex::embedded(1, vec![Polytope::orthant(1), Polytope::point(&[Rational::from_integer(0.into())])]).unwrap();
        let back = complex_from_json(&complex_to_json(&c)).unwrap();
        assert_eq!(back.cells(), c.cells());
        assert_eq!(back.attachments().len(), c.attachments().len());
        let s = Subdivision::identity(&c);
        let back = subdivision_from_json(&subdivision_to_json(&s)).unwrap();
        assert_eq!(back.cell_map, s.cell_map);
    }

    #[test]
    fn atlas_with_face_indices() {
        let v = json!({
            "charts": [
                {"ambient_dim": 1, "constraints": [{"slope": [1], "rel": "ge"}, {"slope": [-1], "constant": 1, "rel": "ge"}]},
                {"ambient_dim": 1, "constraints": [{"slope": [1], "rel": "ge"}, {"slope": [-1], "constant": 1, "rel": "ge"}]}
            ],
            "gluings": [{"a": 0, "face_a": {"ambient_dim": 1, "constraints": [{"slope": [1], "constant": -1, "rel": "ge"}, {"slope": [-1], "constant": 1, "rel": "ge"}]},
                         "b": 1, "face_b": {"ambient_dim": 1, "constraints": [{"slope": [1], "rel": "ge"}, {"slope": [-1], "rel": "ge"}]},
                         "map": {"matrix": [[1]], "translation": ["-1"]}}],
            "mode": "exploded"
        });
        let a = atlas_from_json(&v).unwrap();
        assert_eq!(a.mode, Mode::Exploded);
        let again = atlas_from_json(&atlas_to_json(&a)).unwrap();
        assert_eq!(again.gluings().len(), 1);
        assert!(again.gluings()[0].face_b.set_eq(&a.gluings()[0].face_b));
    }

    #[test]
    fn monoid_round_trip() {
        let v = json!({"kind": "presented", "generators": 4, "relations": [[[1, 1, 0, 0], [0, 0, 1, 1]]],
                       "embedding": [[1, 0, 1, 0], [0, 1, 1, 0], [0, 1, 0, 1]]});
        let m = monoid_from_json(&v).unwrap();
        assert!(m.contains(&[1, 1, 1]).unwrap());
        assert_eq!(monoid_to_json(&m), v);
        let bad = json!({"kind": "free"});
        assert!(monoid_from_json(&bad).is_err());
    }
}
