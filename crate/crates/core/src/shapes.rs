//! Built-in test shapes and the raster primitives used to draw them.
//!
//! Experiments normally take greyscale raster inputs; the builtins cover the
//! standard bench shapes (solid convex, holed, strongly concave, a lizard
//! silhouette, and the Iberian peninsula with its city convex hull) without
//! shipping binary assets.

use crate::error::{Error, Result};
use crate::geometry::{ShapeMask, Vec2};

pub fn fill_circle(mask: &mut ShapeMask, center: Vec2, r: f64) {
    fill_ellipse(mask, center, r, r);
}

pub fn fill_ellipse(mask: &mut ShapeMask, center: Vec2, rx: f64, ry: f64) {
    let x0 = ((center.x - rx).floor() as i32).max(0);
    let x1 = ((center.x + rx).ceil() as i32).min(mask.width() as i32 - 1);
    let y0 = ((center.y - ry).floor() as i32).max(0);
    let y1 = ((center.y + ry).ceil() as i32).min(mask.height() as i32 - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let dx = (x as f64 - center.x) / rx;
            let dy = (y as f64 - center.y) / ry;
            if dx * dx + dy * dy <= 1.0 {
                mask.set((x, y), true);
            }
        }
    }
}

/// Thick segment with round caps.
pub fn fill_capsule(mask: &mut ShapeMask, a: Vec2, b: Vec2, r: f64) {
    let x0 = ((a.x.min(b.x) - r).floor() as i32).max(0);
    let x1 = ((a.x.max(b.x) + r).ceil() as i32).min(mask.width() as i32 - 1);
    let y0 = ((a.y.min(b.y) - r).floor() as i32).max(0);
    let y1 = ((a.y.max(b.y) + r).ceil() as i32).min(mask.height() as i32 - 1);
    let d = b.sub(a);
    let len2 = d.dot(d);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = Vec2::new(x as f64, y as f64);
            let t = if len2 > 0.0 {
                (p.sub(a).dot(d) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let closest = a.add(d.scale(t));
            if p.dist(closest) <= r {
                mask.set((x, y), true);
            }
        }
    }
}

/// Even-odd scanline fill of a simple polygon.
pub fn fill_polygon(mask: &mut ShapeMask, vertices: &[Vec2]) {
    if vertices.len() < 3 {
        return;
    }
    for y in 0..mask.height() as i32 {
        let fy = y as f64;
        let mut xs: Vec<f64> = Vec::new();
        for i in 0..vertices.len() {
            let a = vertices[i];
            let b = vertices[(i + 1) % vertices.len()];
            if (a.y <= fy && fy < b.y) || (b.y <= fy && fy < a.y) {
                xs.push(a.x + (fy - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for pair in xs.chunks_exact(2) {
            let start = pair[0].ceil() as i32;
            let end = pair[1].floor() as i32;
            for x in start.max(0)..=end.min(mask.width() as i32 - 1) {
                mask.set((x, y), true);
            }
        }
    }
}

/// Convex hull (monotone chain), counter-clockwise in screen coordinates.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Vec2, a: Vec2, b: Vec2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Annular arc: the ring `r_inner..=r_outer` with an angular gap of
/// `gap_half_angle_deg` either side of `gap_center_deg` removed.
pub fn fill_ring_arc(
    mask: &mut ShapeMask,
    center: Vec2,
    r_inner: f64,
    r_outer: f64,
    gap_center_deg: f64,
    gap_half_angle_deg: f64,
) {
    for y in 0..mask.height() as i32 {
        for x in 0..mask.width() as i32 {
            let dx = x as f64 - center.x;
            let dy = y as f64 - center.y;
            let r = dx.hypot(dy);
            if r < r_inner || r > r_outer {
                continue;
            }
            let angle = dy.atan2(dx).to_degrees();
            let mut delta = (angle - gap_center_deg).rem_euclid(360.0);
            if delta > 180.0 {
                delta -= 360.0;
            }
            if delta.abs() > gap_half_angle_deg {
                mask.set((x, y), true);
            }
        }
    }
}

fn lizard() -> ShapeMask {
    let mut m = ShapeMask::new(240, 190);
    let v = Vec2::new;
    // body and head
    fill_ellipse(&mut m, v(120.0, 95.0), 48.0, 26.0);
    fill_circle(&mut m, v(175.0, 85.0), 15.0);
    fill_capsule(&mut m, v(175.0, 85.0), v(196.0, 79.0), 8.0);
    // tapering tail
    fill_capsule(&mut m, v(74.0, 103.0), v(43.0, 120.0), 7.0);
    fill_capsule(&mut m, v(43.0, 120.0), v(24.0, 138.0), 4.5);
    // splayed legs
    fill_capsule(&mut m, v(150.0, 75.0), v(168.0, 52.0), 5.5);
    fill_capsule(&mut m, v(148.0, 114.0), v(166.0, 137.0), 5.5);
    fill_capsule(&mut m, v(90.0, 74.0), v(74.0, 50.0), 5.5);
    fill_capsule(&mut m, v(88.0, 115.0), v(72.0, 139.0), 5.5);
    m
}

fn iberia_outline() -> Vec<Vec2> {
    // rough mainland silhouette, x east / y south
    [
        (30.0, 25.0),
        (60.0, 14.0),
        (95.0, 18.0),
        (130.0, 22.0),
        (160.0, 28.0),
        (205.0, 45.0),
        (195.0, 62.0),
        (175.0, 105.0),
        (172.0, 128.0),
        (150.0, 165.0),
        (118.0, 170.0),
        (85.0, 178.0),
        (70.0, 170.0),
        (40.0, 140.0),
        (18.0, 120.0),
        (14.0, 95.0),
        (22.0, 75.0),
        (18.0, 48.0),
    ]
    .into_iter()
    .map(|(x, y)| Vec2::new(x, y))
    .collect()
}

fn iberia_cities() -> Vec<Vec2> {
    // 23 populous mainland cities, same rough canvas as the outline
    [
        (105.0, 95.0),
        (193.0, 60.0),
        (172.0, 105.0),
        (78.0, 155.0),
        (152.0, 62.0),
        (100.0, 172.0),
        (160.0, 135.0),
        (128.0, 26.0),
        (170.0, 127.0),
        (95.0, 142.0),
        (88.0, 60.0),
        (25.0, 48.0),
        (92.0, 20.0),
        (30.0, 27.0),
        (118.0, 158.0),
        (167.0, 130.0),
        (88.0, 24.0),
        (163.0, 145.0),
        (72.0, 165.0),
        (140.0, 35.0),
        (20.0, 118.0),
        (24.0, 73.0),
        (28.0, 62.0),
    ]
    .into_iter()
    .map(|(x, y)| Vec2::new(x, y))
    .collect()
}

/// Shapes usable as `builtin:<name>` mask inputs.
pub const BUILTIN_NAMES: &[&str] = &[
    "circle",
    "annulus",
    "ring_arc",
    "lizard",
    "iberia",
    "iberia_hull",
];

pub fn builtin_mask(name: &str) -> Result<ShapeMask> {
    let mask = match name {
        "circle" => {
            let mut m = ShapeMask::new(120, 120);
            fill_circle(&mut m, Vec2::new(60.0, 60.0), 45.0);
            m
        }
        "annulus" => {
            let mut m = ShapeMask::new(130, 130);
            fill_ring_arc(&mut m, Vec2::new(65.0, 65.0), 20.0, 52.0, 0.0, 0.0);
            m
        }
        "ring_arc" => {
            let mut m = ShapeMask::new(140, 140);
            fill_ring_arc(&mut m, Vec2::new(70.0, 70.0), 38.0, 58.0, 0.0, 60.0);
            m
        }
        "lizard" => lizard(),
        "iberia" => {
            let mut m = ShapeMask::new(220, 200);
            fill_polygon(&mut m, &iberia_outline());
            m
        }
        "iberia_hull" => {
            let mut m = ShapeMask::new(220, 200);
            let hull = convex_hull(&iberia_cities());
            fill_polygon(&mut m, &hull);
            m
        }
        other => {
            return Err(Error::input(format!(
                "unknown builtin shape '{other}' (available: {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    debug_assert!(mask.count() > 0);
    Ok(mask)
}
