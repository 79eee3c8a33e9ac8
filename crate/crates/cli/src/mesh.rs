//! Ball-clipped meshes of crooked planes, written as OBJ.
//!
//! Each planar piece is a convex cone in its plane. Its intersection with the
//! ball of radius `R` is approximated from inside: the cross-section circle is
//! replaced by an inscribed polygon, which is then clipped by the cone's
//! half-planes in the piece's own `(s, t)` coordinates.

use std::fmt::Write;

use crooked::crooked::{pieces, CrookedPlane, PlanarPiece, PIECE_NAMES};
use crooked::scalar::{Float, Q};
use crooked::Result;

pub const SEGMENTS: usize = 96;

type P3 = [f64; 3];

fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn mul(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: P3) -> P3 {
    mul(a, 1.0 / dot(a, a).sqrt())
}

/// One clipped piece: a convex polygon, counterclockwise about `d1 × d2`.
#[derive(Clone, Debug)]
pub struct Patch {
    pub piece: &'static str,
    pub polygon: Vec<P3>,
}

#[derive(Clone, Debug)]
pub struct PlaneMesh {
    pub name: String,
    pub patches: Vec<Patch>,
}

impl PlaneMesh {
    pub fn vertices(&self) -> usize {
        self.patches.iter().map(|p| p.polygon.len()).sum()
    }

    /// Triangles in a fan over each polygon.
    pub fn faces(&self) -> usize {
        self.patches.iter().map(|p| p.polygon.len().saturating_sub(2)).sum()
    }
}

/// Sutherland–Hodgman against `a·s + b·t ≥ 0`.
fn clip(poly: &[[f64; 2]], a: f64, b: f64) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| a * p[0] + b * p[1];
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (k, cur) in poly.iter().enumerate() {
        let prev = &poly[(k + poly.len() - 1) % poly.len()];
        let (fc, fp) = (f(cur), f(prev));
        if fc >= 0.0 {
            if fp < 0.0 {
                let t = fp / (fp - fc);
                out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
            }
            out.push(*cur);
        } else if fp >= 0.0 {
            let t = fp / (fp - fc);
            out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
        }
    }
    out
}

pub fn clip_piece(piece: &PlanarPiece<Float>, radius: f64) -> Vec<P3> {
    let (o, d1, d2) = (piece.origin.approx(), piece.d1.approx(), piece.d2.approx());
    let n = unit(cross(d1, d2));
    let centre = mul(n, dot(o, n));
    let r2 = radius * radius - dot(centre, centre);
    if r2 <= 0.0 {
        return vec![];
    }
    let r = r2.sqrt();
    let e1 = unit(d1);
    let e2 = cross(n, e1);
    // Coordinates in the basis (d1, d2) through the Gram matrix.
    let (g11, g12, g22) = (dot(d1, d1), dot(d1, d2), dot(d2, d2));
    let det = g11 * g22 - g12 * g12;
    let to_st = |x: P3| {
        let y = sub(x, o);
        let (r1, r2) = (dot(d1, y), dot(d2, y));
        [(g22 * r1 - g12 * r2) / det, (g11 * r2 - g12 * r1) / det]
    };
    let mut poly: Vec<[f64; 2]> = (0..SEGMENTS)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / SEGMENTS as f64;
            to_st(add(centre, add(mul(e1, r * th.cos()), mul(e2, r * th.sin()))))
        })
        .collect();
    for (a, b) in &piece.constraints {
        if poly.is_empty() {
            break;
        }
        poly = clip(&poly, a.value(), b.value());
    }
    if poly.len() < 3 {
        return vec![];
    }
    poly.iter().map(|[s, t]| add(o, add(mul(d1, *s), mul(d2, *t)))).collect()
}

pub fn plane_mesh(name: &str, c: &CrookedPlane<Q>, radius: f64) -> Result<PlaneMesh> {
    let cf = c.map(|x| Float::new(crooked::scalar::Scalar::approx(x)));
    let patches = pieces(&cf)?
        .iter()
        .zip(PIECE_NAMES)
        .map(|(p, name)| Patch { piece: name, polygon: clip_piece(p, radius) })
        .collect();
    Ok(PlaneMesh { name: name.into(), patches })
}

fn write_object(out: &mut String, m: &PlaneMesh, offset: usize) -> usize {
    writeln!(out, "o {}", m.name).unwrap();
    let mut next = offset;
    for p in &m.patches {
        if p.polygon.is_empty() {
            continue;
        }
        writeln!(out, "g {}_{}", m.name, p.piece.replace(' ', "_")).unwrap();
        for v in &p.polygon {
            writeln!(out, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]).unwrap();
        }
        for k in 1..p.polygon.len() - 1 {
            writeln!(out, "f {} {} {}", next + 1, next + k + 1, next + k + 2).unwrap();
        }
        next += p.polygon.len();
    }
    next
}

pub fn obj(m: &PlaneMesh, header: &str) -> String {
    let mut out = format!("# {header}\n");
    write_object(&mut out, m, 0);
    out
}

pub fn scene(meshes: &[PlaneMesh], header: &str) -> String {
    let mut out = format!("# {header}\n");
    let mut offset = 0;
    for m in meshes {
        offset = write_object(&mut out, m, offset);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crooked::minkowski::Vec3;
    use crooked::scalar::q;

    fn plane() -> CrookedPlane<Q> {
        CrookedPlane::new(Vec3::new(q(3, 1), q(1, 2), q(1, 1)), Vec3::new(q(1, 3), q(-1, 1), q(1, 2))).unwrap()
    }

    #[test]
    fn vertices_lie_on_their_pieces_inside_the_ball() {
        let c = plane();
        let m = plane_mesh("c", &c, 10.0).unwrap();
        let cf = c.map(|x| Float::new(crooked::scalar::Scalar::approx(x)));
        let ps = pieces(&cf).unwrap();
        for (patch, piece) in m.patches.iter().zip(&ps) {
            assert!(patch.polygon.len() >= 3, "{}", patch.piece);
            let (o, d1, d2) = (piece.origin.approx(), piece.d1.approx(), piece.d2.approx());
            let n = unit(cross(d1, d2));
            for v in &patch.polygon {
                assert!(dot(sub(*v, o), n).abs() < 1e-9, "{}", dot(sub(*v, o), n));
                assert!(dot(*v, *v).sqrt() <= 10.0 + 1e-9, "{} {} {:?}", patch.piece, dot(*v, *v).sqrt(), v);
            }
            // Consistent orientation: every fan triangle has normal along d1 × d2.
            let p = &patch.polygon;
            for k in 1..p.len() - 1 {
                let t = cross(sub(p[k], p[0]), sub(p[k + 1], p[0]));
                assert!(dot(t, n) >= -1e-12);
            }
        }
    }

    #[test]
    fn zero_radius_is_empty() {
        let m = plane_mesh("c", &plane(), 0.0).unwrap();
        assert_eq!(m.vertices(), 0);
        assert_eq!(m.faces(), 0);
    }

    #[test]
    fn clipping_keeps_the_half_plane() {
        let square = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let half = clip(&square, 1.0, 0.0);
        assert_eq!(half.len(), 4);
        assert!(half.iter().all(|p| p[0] >= 0.0));
    }
}
