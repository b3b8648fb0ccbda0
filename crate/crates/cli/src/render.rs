use std::fmt::Write;

use num_traits::ToPrimitive;
use tropex_core::curves::{CurveType, TropicalCurve};
use tropex_core::polytope::{Halfspace, IntAffineFunc, IntAffineMap, Polytope};
use tropex_core::{Error, Int, Rational, Result};

/// Half-width of the drawn window.
const BOUND: Int = 6;

fn f(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

/// Maps cells to the plane: the identity in dimension 2, otherwise an explicit
/// projection.
pub struct Plane {
    project: Option<IntAffineMap>,
}

impl Plane {
    pub fn new(ambient: usize, project: Option<IntAffineMap>) -> Result<Plane> {
        match &project {
            Some(p) if p.target_dim() != 2 || p.source_dim() != ambient => {
                Err(Error::Invalid(format!("--project must be a 2 x {ambient} matrix")))
            }
            Some(_) => Ok(Plane { project }),
            None if ambient == 2 => Ok(Plane { project: None }),
            None => Err(Error::Invalid(format!("drawing a {ambient}-dimensional complex needs --project"))),
        }
    }

    fn cell(&self, p: &Polytope) -> Result<Polytope> {
        let closed = p.closure();
        match &self.project {
            Some(m) => closed.image(m),
            None => Ok(closed),
        }
    }

    fn point(&self, x: &[Rational]) -> Result<(f64, f64)> {
        let y = match &self.project {
            Some(m) => m.apply(x)?,
            None => x.to_vec(),
        };
        Ok((f(&y[0]), f(&y[1])))
    }

    fn direction(&self, u: &[Int]) -> (f64, f64) {
        match &self.project {
            Some(m) => {
                let v = m.matrix.mul_vec(u);
                (v[0] as f64, v[1] as f64)
            }
            None => (u[0] as f64, u[1] as f64),
        }
    }
}

/// Corners of a planar polytope clipped to the window, in angular order.
fn corners(p: &Polytope) -> Result<Vec<(f64, f64)>> {
    let mut cs: Vec<Halfspace> = p.constraints().to_vec();
    for i in 0..2 {
        let x = IntAffineFunc::coordinate(2, i);
        let b = IntAffineFunc::constant_fn(2, Rational::from_integer(BOUND.into()));
        cs.push(Halfspace::ge(b.add(&x.neg())));
        cs.push(Halfspace::ge(b.add(&x)));
    }
    let Some(clipped) = Polytope::try_new(2, cs)? else { return Ok(Vec::new()) };
    let mut pts: Vec<(f64, f64)> = clipped
        .faces()
        .into_iter()
        .filter(|face| face.dimension() == 0)
        .map(|face| {
            let w = face.polytope.witness();
            (f(&w[0]), f(&w[1]))
        })
        .collect();
    let n = pts.len().max(1) as f64;
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    Ok(pts)
}

fn header(out: &mut String) {
    let b = BOUND as f64 + 0.5;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="480" height="480">"#,
        -b,
        -b,
        2.0 * b,
        2.0 * b
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="0.04">"#);
}

fn footer(out: &mut String) {
    out.push_str("</g>\n</svg>\n");
}

fn draw_cell(out: &mut String, p: &Polytope) -> Result<()> {
    let pts = corners(p)?;
    let list = |pts: &[(f64, f64)]| pts.iter().map(|(x, y)| format!("{x:.4},{y:.4}")).collect::<Vec<_>>().join(" ");
    match p.dimension() {
        0 => {
            if let Some((x, y)) = pts.first() {
                let _ = writeln!(out, r#"<circle cx="{x:.4}" cy="{y:.4}" r="0.08" fill="black"/>"#);
            }
        }
        1 => {
            let _ = writeln!(out, r#"<polyline points="{}" stroke="black" fill="none"/>"#, list(&pts));
        }
        _ => {
            let _ = writeln!(out, r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.4" stroke="#3182bd"/>"##, list(&pts));
        }
    }
    Ok(())
}

pub fn complex_svg(cells: &[Polytope], plane: &Plane) -> Result<String> {
    let mut out = String::new();
    header(&mut out);
    let mut drawn: Vec<Polytope> = cells.iter().map(|c| plane.cell(c)).collect::<Result<_>>()?;
    drawn.sort_by_key(|p| std::cmp::Reverse(p.dimension()));
    for p in &drawn {
        draw_cell(&mut out, p)?;
    }
    footer(&mut out);
    Ok(out)
}

/// The cells in the background and the curve on top; ends run to the edge of
/// the window.
pub fn curve_svg(cells: &[Polytope], curve: &TropicalCurve, plane: &Plane) -> Result<String> {
    let mut out = complex_svg(cells, plane)?;
    out.truncate(out.len() - "</g>\n</svg>\n".len());
    let far = 4.0 * BOUND as f64;
    for q in 0..curve.ty.internal().len() {
        let (a, b) = curve.segment(q);
        let ((x1, y1), (x2, y2)) = (plane.point(&a)?, plane.point(&b)?);
        let _ = writeln!(out, r#"<line x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}" stroke="crimson" stroke-width="0.08"/>"#);
    }
    for e in curve.ty.external() {
        let (x1, y1) = plane.point(&curve.positions[e.vertex])?;
        let (dx, dy) = plane.direction(&e.u);
        let norm = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (x2, y2) = (x1 + far * dx / norm, y1 + far * dy / norm);
        let _ = writeln!(out, r#"<line x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}" stroke="crimson" stroke-width="0.08"/>"#);
    }
    for p in &curve.positions {
        let (x, y) = plane.point(p)?;
        let _ = writeln!(out, r#"<circle cx="{x:.4}" cy="{y:.4}" r="0.12" fill="crimson"/>"#);
    }
    footer(&mut out);
    Ok(out)
}

/// Hasse diagram of the faces.
pub fn face_lattice_dot(p: &Polytope) -> String {
    let faces = p.faces();
    let mut out = String::from("digraph faces {\n  rankdir=BT;\n");
    for (i, face) in faces.iter().enumerate() {
        let _ = writeln!(out, "  f{i} [label=\"dim {} {:?}\"];", face.dimension(), face.tight);
    }
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            let covers = a.dimension() + 1 == b.dimension() && b.tight.iter().all(|t| a.tight.contains(t));
            if covers {
                let _ = writeln!(out, "  f{i} -> f{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn curve_graph_dot(t: &CurveType) -> String {
    let mut out = String::from("graph curve {\n");
    for (v, cell) in t.vertices().iter().enumerate() {
        let _ = writeln!(out, "  v{v} [label=\"v{v} in cell {cell}\"];");
    }
    for (q, e) in t.internal().iter().enumerate() {
        let _ = writeln!(out, "  v{} -- v{} [label=\"e{q} {:?}\"];", e.tail, e.head, e.u);
    }
    for (k, e) in t.external().iter().enumerate() {
        let _ = writeln!(out, "  x{k} [shape=point];");
        let _ = writeln!(out, "  v{} -- x{k} [label=\"end {:?}\"];", e.vertex, e.u);
    }
    out.push_str("}\n");
    out
}
