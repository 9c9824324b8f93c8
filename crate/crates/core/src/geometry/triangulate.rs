use super::point::{orient, Point2};
use super::polygon::{bbox_extent, SimplePolygon, Triangle};
use crate::error::{Error, Result};

/// Fan triangulation for convex polygons, ear clipping otherwise.
/// Zero-area triangles from collinear vertices are dropped.
pub fn triangulate_polygon(poly: &SimplePolygon) -> Result<Vec<Triangle>> {
    let v = poly.vertices();
    if poly.area() <= 0.0 {
        return Err(Error::InvalidPolygon("cannot triangulate a zero-area polygon".into()));
    }
    if poly.is_convex() {
        return Ok((1..v.len() - 1)
            .map(|i| Triangle([v[0], v[i], v[i + 1]]))
            .filter(|t| t.signed_area() > 0.0)
            .collect());
    }
    ear_clip(v)
}

fn ear_clip(v: &[Point2]) -> Result<Vec<Triangle>> {
    let scale = bbox_extent(v);
    let eps = 1e-14 * scale * scale;
    let mut ring: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len() - 2);
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (v[ring[(i + n - 1) % n]], v[ring[i]], v[ring[(i + 1) % n]]);
            if orient(a, b, c) <= eps {
                return false;
            }
            // no other ring vertex inside or on the candidate ear
            ring.iter().all(|&k| {
                let p = v[k];
                if p == a || p == b || p == c {
                    return true;
                }
                !(orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0)
            })
        });
        match ear {
            Some(i) => {
                let t = Triangle([v[ring[(i + n - 1) % n]], v[ring[i]], v[ring[(i + 1) % n]]]);
                out.push(t);
                ring.remove(i);
            }
            None => {
                // Collinear vertex: remove it without emitting a triangle.
                let flat = (0..n).find(|&i| {
                    orient(v[ring[(i + n - 1) % n]], v[ring[i]], v[ring[(i + 1) % n]]).abs() <= eps
                });
                match flat {
                    Some(i) => {
                        ring.remove(i);
                    }
                    None => {
                        return Err(Error::InvalidPolygon(
                            "ear clipping found no ear (polygon not simple?)".into(),
                        ))
                    }
                }
            }
        }
    }
    let t = Triangle([v[ring[0]], v[ring[1]], v[ring[2]]]);
    if t.signed_area() > eps {
        out.push(t);
    }
    Ok(out)
}
