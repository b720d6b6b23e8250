//! Deterministic SVG rendering of a polygon and an optional packing.
//!
//! Fixed canvas transform: one lattice unit is 100 px, the margin is
//! 20 px, and the y axis is flipped so the lattice reads the usual way
//! up. Every polygon is emitted counterclockwise starting from its
//! lexicographically smallest vertex, and every coordinate is printed
//! with exactly three decimals, so equal inputs give byte-equal
//! output.

use num_traits::Zero;

use delpack::delzant::DelzantPolygon;
use delpack::exactgeom::{rat_int, ConvexPolygon, Point, Rational};
use delpack::packing::{is_admissible_packing, simplex_at};

use crate::doc::{fixed3, CliError};

const UNIT: i64 = 100;
const MARGIN: i64 = 20;

struct Canvas {
    min_x: Rational,
    max_y: Rational,
    width: Rational,
    height: Rational,
}

impl Canvas {
    fn around(p: &ConvexPolygon) -> Canvas {
        let vs = p.vertices();
        let mut min_x = vs[0].x.clone();
        let mut max_x = vs[0].x.clone();
        let mut min_y = vs[0].y.clone();
        let mut max_y = vs[0].y.clone();
        for v in vs {
            min_x = min_x.min(v.x.clone());
            max_x = max_x.max(v.x.clone());
            min_y = min_y.min(v.y.clone());
            max_y = max_y.max(v.y.clone());
        }
        let unit = rat_int(UNIT);
        let margin2 = rat_int(2 * MARGIN);
        Canvas {
            width: &(&(&max_x - &min_x) * &unit) + &margin2,
            height: &(&(&max_y - &min_y) * &unit) + &margin2,
            min_x,
            max_y,
        }
    }

    fn place(&self, v: &Point) -> (String, String) {
        let unit = rat_int(UNIT);
        let margin = rat_int(MARGIN);
        let x = &(&(&v.x - &self.min_x) * &unit) + &margin;
        let y = &(&(&self.max_y - &v.y) * &unit) + &margin;
        (fixed3(&x), fixed3(&y))
    }

    fn points_attr(&self, ring: &[Point]) -> String {
        let parts: Vec<String> = ring
            .iter()
            .map(|v| {
                let (x, y) = self.place(v);
                format!("{},{}", x, y)
            })
            .collect();
        parts.join(" ")
    }
}

/// Renders the polygon outline and, when radii are given, one shaded
/// triangle per positive radius. Radii must list one value per vertex
/// and form an admissible packing.
pub fn render(d: &DelzantPolygon, packing: Option<&[Rational]>) -> Result<String, CliError> {
    let triangles: Vec<(usize, ConvexPolygon)> = match packing {
        None => Vec::new(),
        Some(radii) => {
            if radii.len() != d.vertex_count() {
                return Err(CliError::Precondition(format!(
                    "packing lists {} radii for {} vertices",
                    radii.len(),
                    d.vertex_count()
                )));
            }
            if !is_admissible_packing(d, radii) {
                return Err(CliError::Precondition(
                    "radii do not form an admissible packing".to_string(),
                ));
            }
            radii
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(i, r)| {
                    let s = simplex_at(d, i, r).expect("admissible packing radii are in range");
                    (i, s.triangle)
                })
                .collect()
        }
    };

    let canvas = Canvas::around(d.base());
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = fixed3(&canvas.width),
        h = fixed3(&canvas.height)
    ));
    out.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"#f7f6f1\" stroke=\"#333333\" stroke-width=\"2\"/>\n",
        canvas.points_attr(&d.base().rotated_to_min())
    ));
    for (i, t) in &triangles {
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"#5b84a8\" fill-opacity=\"0.6\" stroke=\"#2c4f6e\" stroke-width=\"1\">\n    <title>simplex at vertex {}</title>\n  </polygon>\n",
            canvas.points_attr(&t.rotated_to_min()),
            i
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
