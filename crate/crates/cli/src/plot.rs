//! SVG pictures and CSV sample grids of fiber regions.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use orbifloer_core::lattice::RationalVector;
use orbifloer_core::polyhedron::{Constraint, Polyhedron};
use orbifloer_core::region::query_point;
use orbifloer_core::{FiberRegion, StackyModel};

use crate::CliError;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn f(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Vertices of a bounded planar polyhedron (its closure), in angular order.
fn polygon(p: &Polyhedron) -> Vec<[BigRational; 2]> {
    let cl = p.closure();
    let cs: &[Constraint] = &cl.constraints;
    let mut pts: Vec<[BigRational; 2]> = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let (a, b) = (&cs[i], &cs[j]);
            let det = &a.coeffs[0] * &b.coeffs[1] - &a.coeffs[1] * &b.coeffs[0];
            if det.is_zero() {
                continue;
            }
            // a·x + a0 = 0, b·x + b0 = 0
            let x = (&a.coeffs[1] * &b.constant - &b.coeffs[1] * &a.constant) / &det;
            let y = (&b.coeffs[0] * &a.constant - &a.coeffs[0] * &b.constant) / &det;
            let pt = [x, y];
            if cl.contains(&pt) && !pts.contains(&pt) {
                pts.push(pt);
            }
        }
    }
    if pts.len() > 2 {
        let n = pts.len() as f64;
        let cx = pts.iter().map(|p| f(&p[0])).sum::<f64>() / n;
        let cy = pts.iter().map(|p| f(&p[1])).sum::<f64>() / n;
        pts.sort_by(|p, q| {
            let ap = (f(&p[1]) - cy).atan2(f(&p[0]) - cx);
            let aq = (f(&q[1]) - cy).atan2(f(&q[0]) - cx);
            ap.total_cmp(&aq)
        });
    }
    pts
}

fn color(label: &str) -> String {
    // FNV-1a
    let h = label.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    format!("hsl({}, 65%, 55%)", h % 360)
}

/// Renders the polytope and the region pieces of a two-dimensional model.
pub fn svg(m: &StackyModel, r: &FiberRegion) -> String {
    let verts: Vec<(f64, f64)> = m.vertices().iter().map(|v| (f(&v.point.0[0]), f(&v.point.0[1]))).collect();
    let (x0, x1) = verts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = verts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let scale = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0);
    let map = |x: f64, y: f64| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);
    let pts = |ps: &[[BigRational; 2]]| {
        ps.iter()
            .map(|p| {
                let (x, y) = map(f(&p[0]), f(&p[1]));
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let outline = polygon(&m.interior_polyhedron());
    let bounds = m.interior_polyhedron().closure();
    for piece in &r.pieces {
        let mut p = piece.region.clone();
        for c in &bounds.constraints {
            p.push(c.clone());
        }
        let poly = polygon(&p);
        let col = color(&piece.scenario.label());
        let title = format!("<title>{}</title>", piece.scenario.label());
        match poly.len() {
            0 => {}
            1 => {
                let (x, y) = map(f(&poly[0][0]), f(&poly[0][1]));
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{col}">{title}</circle>"#);
            }
            2 => {
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" stroke="{col}" stroke-width="3" fill="none">{title}</polyline>"#,
                    pts(&poly)
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    r#"<polygon points="{}" fill="{col}" fill-opacity="0.35" stroke="none">{title}</polygon>"#,
                    pts(&poly)
                );
            }
        }
    }
    let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, pts(&outline));
    out.push_str("</svg>\n");
    out
}

/// Membership on a regular grid over the bounding box of the polytope:
/// `n` cell midpoints per axis, points outside the open polytope skipped.
pub fn grid_csv(m: &StackyModel, r: &FiberRegion, n: usize) -> Result<String, CliError> {
    let dim = m.dim();
    let mut lo = vec![None::<BigRational>; dim];
    let mut hi = vec![None::<BigRational>; dim];
    for v in m.vertices() {
        for i in 0..dim {
            let x = &v.point.0[i];
            if lo[i].as_ref().is_none_or(|l| x < l) {
                lo[i] = Some(x.clone());
            }
            if hi[i].as_ref().is_none_or(|h| x > h) {
                hi[i] = Some(x.clone());
            }
        }
    }
    let header: Vec<String> = (1..=dim).map(|i| format!("u{i}")).chain(["member".into(), "pieces".into()]).collect();
    let mut out = header.join(",") + "\n";
    let total = n.checked_pow(dim as u32).ok_or_else(|| CliError::validation("grid too large"))?;
    let two_n = BigRational::from_integer(BigInt::from(2 * n));
    for idx in 0..total {
        let mut k = idx;
        let mut coords = Vec::with_capacity(dim);
        for i in 0..dim {
            let (l, h) = (lo[i].clone().unwrap_or_default(), hi[i].clone().unwrap_or_default());
            let step = BigRational::from_integer(BigInt::from(2 * (k % n) + 1));
            coords.push(&l + (h - &l) * step / &two_n);
            k /= n;
        }
        let u = RationalVector(coords);
        if !m.is_interior(&u) {
            continue;
        }
        let q = query_point(m, r, &u)?;
        let serials: Vec<String> = q.pieces.iter().map(|&(i, _)| r.pieces[i].scenario.serial.to_string()).collect();
        let cells: Vec<String> = u.0.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{},{},{}", cells.join(","), q.member, serials.join(";"));
    }
    Ok(out)
}
