//! Spatial inputs and reference statistics: shape masks, spatially encoded
//! 1D series, exact centroids and means that the blob runs are scored
//! against.

use crate::error::{Error, Result};
use crate::raster::GreyImage;
use crate::Cell;
use rand::Rng;

/// Continuous 2D position in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        self.sub(other).norm()
    }

    /// Lattice cell containing this position.
    pub fn cell(self) -> Cell {
        (self.x.floor() as i32, self.y.floor() as i32)
    }
}

/// Unit vector for a heading in degrees (x right, y down).
pub fn heading_vec(heading_deg: f64) -> Vec2 {
    let r = heading_deg.to_radians();
    Vec2::new(r.cos(), r.sin())
}

/// Binary raster shape: the cells a pattern covers.
#[derive(Debug, Clone)]
pub struct ShapeMask {
    width: usize,
    height: usize,
    inside: Vec<bool>,
}

impl ShapeMask {
    pub fn new(width: usize, height: usize) -> Self {
        ShapeMask {
            width,
            height,
            inside: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn contains(&self, (x, y): Cell) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.inside[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, (x, y): Cell, value: bool) {
        assert!(x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height);
        self.inside[y as usize * self.width + x as usize] = value;
    }

    /// Inside cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.inside[y * self.width + x] {
                    out.push((x as i32, y as i32));
                }
            }
        }
        out
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// True when every inside cell is reachable from every other through
    /// 4-neighbor steps.
    pub fn is_four_connected(&self) -> bool {
        let cells = self.cells();
        let Some(&start) = cells.first() else {
            return false;
        };
        let mut seen = vec![false; self.width * self.height];
        let mut stack = vec![start];
        seen[start.1 as usize * self.width + start.0 as usize] = true;
        let mut reached = 0usize;
        while let Some((x, y)) = stack.pop() {
            reached += 1;
            for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if self.contains((nx, ny)) && !seen[ny as usize * self.width + nx as usize] {
                    seen[ny as usize * self.width + nx as usize] = true;
                    stack.push((nx, ny));
                }
            }
        }
        reached == cells.len()
    }
}

/// Threshold a greyscale raster into a mask: a cell is inside when its pixel
/// value is at least `threshold`.
pub fn load_shape_mask(image: &GreyImage, threshold: u8) -> Result<ShapeMask> {
    let mut mask = ShapeMask::new(image.width(), image.height());
    for y in 0..image.height() {
        for x in 0..image.width() {
            if image.get(x, y) >= threshold {
                mask.set((x as i32, y as i32), true);
            }
        }
    }
    if mask.count() == 0 {
        return Err(Error::input("shape mask has no inside cells"));
    }
    Ok(mask)
}

/// Exact centroid of a mask: arithmetic mean of inside-cell coordinates.
pub fn image_centroid(mask: &ShapeMask) -> Result<Vec2> {
    let mut n = 0usize;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.contains((x as i32, y as i32)) {
                sx += x as f64;
                sy += y as f64;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(Error::input("centroid of empty mask"));
    }
    Ok(Vec2::new(sx / n as f64, sy / n as f64))
}

/// Mean of particle positions.
pub fn centroid_of(positions: &[Vec2]) -> Result<Vec2> {
    if positions.is_empty() {
        return Err(Error::Estimation("centroid of empty population".into()));
    }
    let mut s = Vec2::default();
    for p in positions {
        s = s.add(*p);
    }
    Ok(s.scale(1.0 / positions.len() as f64))
}

/// A 1D numeric series with its admissible value range.
#[derive(Debug, Clone)]
pub struct DataSeries {
    pub values: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub sorted: bool,
}

impl DataSeries {
    pub fn new(values: Vec<f64>, lo: f64, hi: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::input("series needs at least two values"));
        }
        if values.iter().any(|v| *v < lo || *v > hi) {
            return Err(Error::input("series value outside its domain"));
        }
        Ok(DataSeries {
            values,
            lo,
            hi,
            sorted: false,
        })
    }

    pub fn sort(&mut self) {
        self.values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        self.sorted = true;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Population standard deviation of the values.
    pub fn std_dev(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = arithmetic_mean(self);
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        var.sqrt()
    }
}

/// `n` independent uniform draws in `[lo, hi)`.
pub fn gen_uniform_series<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<DataSeries> {
    if n < 2 {
        return Err(Error::input("series needs at least two values"));
    }
    if lo >= hi {
        return Err(Error::input("series range must be non-empty"));
    }
    let values = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    DataSeries::new(values, lo, hi)
}

/// Heavily top-biased series on [0, 100]: each value uniform in [80, 100]
/// with probability 0.9, otherwise uniform in [0, 20].
pub fn gen_skewed_series<R: Rng>(n: usize, rng: &mut R) -> Result<DataSeries> {
    if n < 2 {
        return Err(Error::input("series needs at least two values"));
    }
    let values = (0..n)
        .map(|_| {
            if rng.gen_bool(0.9) {
                rng.gen_range(80.0..100.0)
            } else {
                rng.gen_range(0.0..20.0)
            }
        })
        .collect();
    DataSeries::new(values, 0.0, 100.0)
}

pub fn arithmetic_mean(series: &DataSeries) -> f64 {
    series.values.iter().sum::<f64>() / series.values.len() as f64
}

/// How a series is laid out on the lattice: evenly spaced points on the X
/// axis, values mapped to rows on an inverted Y axis (larger value, lower
/// row), joined by thick straight strokes.
#[derive(Debug, Clone)]
pub struct SeriesEncoding {
    /// Pixels between consecutive data points.
    pub x_spacing: usize,
    /// Stroke width of the connecting segments, pixels.
    pub stroke_width: f64,
    /// Pixels per value unit on the Y axis.
    pub px_per_unit: f64,
    /// Blank border around the encoded geometry, pixels.
    pub margin: usize,
}

impl Default for SeriesEncoding {
    fn default() -> Self {
        SeriesEncoding {
            x_spacing: 20,
            stroke_width: 6.0,
            px_per_unit: 1.0,
            margin: 20,
        }
    }
}

impl SeriesEncoding {
    /// Row for a value: inverted axis, affine and monotone decreasing.
    pub fn value_to_row(&self, value: f64, hi: f64) -> f64 {
        self.margin as f64 + (hi - value) * self.px_per_unit
    }

    /// Value for a row; inverse of [`SeriesEncoding::value_to_row`].
    pub fn row_to_value(&self, row: f64, hi: f64) -> f64 {
        hi - (row - self.margin as f64) / self.px_per_unit
    }

    pub fn point(&self, index: usize, value: f64, hi: f64) -> Vec2 {
        Vec2::new(
            (self.margin + index * self.x_spacing) as f64,
            self.value_to_row(value, hi),
        )
    }

    pub fn canvas_size(&self, series: &DataSeries) -> (usize, usize) {
        let w = 2 * self.margin + (series.len() - 1) * self.x_spacing;
        let h = 2 * self.margin + ((series.hi - series.lo) * self.px_per_unit).ceil() as usize;
        (w + 1, h + 1)
    }
}

/// Rasterize a series as data points joined by thick straight segments.
///
/// A cell belongs to a segment's stroke when its signed perpendicular offset
/// from the ideal line lies in `[-w/2, w/2)` and its projection falls within
/// the segment, or when it sits inside an end cap. The half-open band makes
/// an axis-aligned stroke exactly `stroke_width` cells wide.
pub fn encode_series(series: &DataSeries, enc: &SeriesEncoding) -> Result<ShapeMask> {
    if enc.stroke_width < 1.0 {
        return Err(Error::input("stroke width must be at least one pixel"));
    }
    let (w, h) = enc.canvas_size(series);
    let points: Vec<Vec2> = series
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| enc.point(i, v, series.hi))
        .collect();
    for p in &points {
        if p.x < 0.0 || p.y < 0.0 || p.x >= w as f64 || p.y >= h as f64 {
            return Err(Error::input("encoded geometry leaves the lattice"));
        }
    }

    let mut mask = ShapeMask::new(w, h);
    let half = enc.stroke_width / 2.0;
    for seg in points.windows(2) {
        stroke_segment(&mut mask, seg[0], seg[1], half);
    }
    Ok(mask)
}

fn stroke_segment(mask: &mut ShapeMask, a: Vec2, b: Vec2, half_width: f64) {
    let d = b.sub(a);
    let len = d.norm();
    let x0 = (a.x.min(b.x) - half_width - 1.0).floor().max(0.0) as i32;
    let x1 = (a.x.max(b.x) + half_width + 1.0).ceil().min(mask.width() as f64 - 1.0) as i32;
    let y0 = (a.y.min(b.y) - half_width - 1.0).floor().max(0.0) as i32;
    let y1 = (a.y.max(b.y) + half_width + 1.0).ceil().min(mask.height() as f64 - 1.0) as i32;
    if len == 0.0 {
        for y in y0..=y1 {
            for x in x0..=x1 {
                if Vec2::new(x as f64, y as f64).dist(a) < half_width {
                    mask.set((x, y), true);
                }
            }
        }
        return;
    }
    let dir = d.scale(1.0 / len);
    let normal = Vec2::new(-dir.y, dir.x);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = Vec2::new(x as f64, y as f64);
            let rel = p.sub(a);
            let along = rel.dot(dir);
            let inside = if along >= 0.0 && along <= len {
                let off = rel.dot(normal);
                off >= -half_width && off < half_width
            } else {
                // round caps keep consecutive strokes connected
                p.dist(a) < half_width || p.dist(b) < half_width
            };
            if inside {
                mask.set((x, y), true);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn centroid_of_solid_square() {
        let mut m = ShapeMask::new(5, 5);
        for y in 0..3 {
            for x in 0..3 {
                m.set((x, y), true);
            }
        }
        let c = image_centroid(&m).unwrap();
        assert_eq!((c.x, c.y), (1.0, 1.0));
    }

    #[test]
    fn centroid_of_two_cells() {
        let mut m = ShapeMask::new(6, 2);
        m.set((0, 0), true);
        m.set((4, 0), true);
        let c = image_centroid(&m).unwrap();
        assert_eq!((c.x, c.y), (2.0, 0.0));
    }

    #[test]
    fn centroid_of_l_pentomino_matches_enumeration() {
        // cells (0,0) (0,1) (0,2) (0,3) (1,3)
        let cells = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 3)];
        let mut m = ShapeMask::new(4, 6);
        for &c in &cells {
            m.set(c, true);
        }
        // brute-force coordinate average, column-major to vary the order
        let mut sx = 0.0;
        let mut sy = 0.0;
        for x in 0..4i32 {
            for y in 0..6i32 {
                if m.contains((x, y)) {
                    sx += x as f64;
                    sy += y as f64;
                }
            }
        }
        let c = image_centroid(&m).unwrap();
        assert_eq!(c.x, sx / 5.0);
        assert_eq!(c.y, sy / 5.0);
        assert_eq!((c.x, c.y), (0.2, 1.8));
    }

    #[test]
    fn empty_mask_is_an_input_error() {
        let m = ShapeMask::new(3, 3);
        assert!(image_centroid(&m).is_err());
    }

    #[test]
    fn population_centroid() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0)];
        let c = centroid_of(&pts).unwrap();
        assert_eq!((c.x, c.y), (1.0, 0.0));
        let single = [Vec2::new(3.5, 4.5)];
        let c = centroid_of(&single).unwrap();
        assert_eq!((c.x, c.y), (3.5, 4.5));
        assert!(centroid_of(&[]).is_err());
    }

    #[test]
    fn uniform_series_stats_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s = gen_uniform_series(100_000, 0.0, 100.0, &mut rng).unwrap();
        let mean = arithmetic_mean(&s);
        assert!((mean - 50.0).abs() < 0.5, "mean {mean}");

        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        let a = gen_uniform_series(20, 0.0, 100.0, &mut r1).unwrap();
        let b = gen_uniform_series(20, 0.0, 100.0, &mut r2).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn skewed_series_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = gen_skewed_series(100_000, &mut rng).unwrap();
        let frac_high = s.values.iter().filter(|&&v| v >= 80.0).count() as f64 / 1e5;
        assert!((frac_high - 0.9).abs() < 0.01, "high fraction {frac_high}");
        // analytic expectation 0.9*90 + 0.1*10 = 82
        let mean = arithmetic_mean(&s);
        assert!((mean - 82.0).abs() < 0.5, "mean {mean}");
    }

    #[test]
    fn arithmetic_mean_basics() {
        let s = DataSeries::new(vec![1.0, 2.0, 3.0], 0.0, 10.0).unwrap();
        assert_eq!(arithmetic_mean(&s), 2.0);
        let c = DataSeries::new(vec![4.0; 5], 0.0, 10.0).unwrap();
        assert_eq!(arithmetic_mean(&c), 4.0);
    }

    #[test]
    fn constant_series_encodes_to_flat_band() {
        let s = DataSeries::new(vec![50.0; 5], 0.0, 100.0).unwrap();
        let enc = SeriesEncoding::default();
        let mask = encode_series(&s, &enc).unwrap();
        let row = enc.value_to_row(50.0, 100.0) as i32;
        // band is exactly stroke_width cells tall at mid-segment
        let x = (enc.margin + enc.x_spacing) as i32;
        let tall: Vec<i32> = (0..mask.height() as i32)
            .filter(|&y| mask.contains((x, y)))
            .collect();
        assert_eq!(tall.len(), 6);
        assert!(tall.contains(&row));
        assert!(mask.is_four_connected());
    }

    #[test]
    fn zigzag_mask_matches_polygon_oracle_within_two_percent() {
        let values: Vec<f64> = (0..10)
            .map(|i| if i % 2 == 0 { 10.0 } else { 90.0 })
            .collect();
        let s = DataSeries::new(values, 0.0, 100.0).unwrap();
        let enc = SeriesEncoding::default();
        let mask = encode_series(&s, &enc).unwrap();

        // oracle: each stroke as a rotated rectangle plus disc caps
        let points: Vec<Vec2> = s
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| enc.point(i, v, s.hi))
            .collect();
        let half = enc.stroke_width / 2.0;
        let mut count = 0usize;
        for y in 0..mask.height() as i32 {
            for x in 0..mask.width() as i32 {
                let p = Vec2::new(x as f64, y as f64);
                let covered = points.windows(2).any(|seg| {
                    let (a, b) = (seg[0], seg[1]);
                    let d = b.sub(a);
                    let len = d.norm();
                    let dir = d.scale(1.0 / len);
                    let n = Vec2::new(-dir.y, dir.x);
                    let rel = p.sub(a);
                    let along = rel.dot(dir);
                    (along >= 0.0 && along <= len && rel.dot(n).abs() <= half)
                        || p.dist(a) <= half
                        || p.dist(b) <= half
                });
                if covered {
                    count += 1;
                }
            }
        }
        let got = mask.count() as f64;
        assert!(
            (got - count as f64).abs() / count as f64 <= 0.02,
            "stroked {got} cells, oracle {count}"
        );
        assert!(mask.is_four_connected());
    }

    #[test]
    fn y_mapping_is_monotone_decreasing() {
        let enc = SeriesEncoding::default();
        let mut prev = f64::INFINITY;
        for v in 0..=100 {
            let row = enc.value_to_row(v as f64, 100.0);
            assert!(row < prev);
            prev = row;
            // exact inverse
            let back = enc.row_to_value(row, 100.0);
            assert!((back - v as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn removing_a_segment_disconnects_the_path() {
        let s = DataSeries::new(vec![20.0, 80.0, 30.0, 70.0], 0.0, 100.0).unwrap();
        let enc = SeriesEncoding::default();
        let full = encode_series(&s, &enc).unwrap();
        assert!(full.is_four_connected());

        // rebuild skipping the middle segment
        let points: Vec<Vec2> = s
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| enc.point(i, v, s.hi))
            .collect();
        let mut broken = ShapeMask::new(full.width(), full.height());
        stroke_segment(&mut broken, points[0], points[1], enc.stroke_width / 2.0);
        stroke_segment(&mut broken, points[2], points[3], enc.stroke_width / 2.0);
        assert!(!broken.is_four_connected());
    }
}
