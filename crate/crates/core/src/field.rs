//! The diffusive chemoattractant lattice and the illumination (repellent)
//! overlay that attenuates what agents sense inside exposed regions.

use crate::Cell;

/// 2D grid of non-negative chemoattractant concentrations.
///
/// Concentrations are arbitrary units. Dimensions are fixed for the lifetime
/// of a run; every operation preserves non-negativity.
#[derive(Debug, Clone)]
pub struct TrailField {
    width: usize,
    height: usize,
    values: Vec<f64>,
    // scratch row sums reused across diffusion passes
    row_sums: Vec<f64>,
    back: Vec<f64>,
}

impl TrailField {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "field dimensions must be positive");
        TrailField {
            width,
            height,
            values: vec![0.0; width * height],
            row_sums: vec![0.0; width * height],
            back: vec![0.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, (x, y): Cell) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    #[inline]
    fn idx(&self, (x, y): Cell) -> usize {
        debug_assert!(self.in_bounds((x, y)));
        y as usize * self.width + x as usize
    }

    /// Concentration at `cell`; out-of-bounds reads are zero.
    #[inline]
    pub fn sample(&self, cell: Cell) -> f64 {
        if self.in_bounds(cell) {
            self.values[self.idx(cell)]
        } else {
            0.0
        }
    }

    /// Concentration at `cell` as sensed through an illumination mask:
    /// exposed cells read attenuated by the mask weight while the mask is
    /// active. Out-of-bounds reads are zero.
    ///
    /// The attenuation is applied per sampled sensor cell, so a sensor
    /// pointing into shade reads full strength even when the agent itself
    /// stands in the light.
    #[inline]
    pub fn sample_weighted(&self, cell: Cell, mask: &IlluminationMask) -> f64 {
        let v = self.sample(cell);
        if mask.active && self.in_bounds(cell) && mask.exposed[self.idx(cell)] {
            v * mask.weight
        } else {
            v
        }
    }

    /// [`TrailField::sample_weighted`] as seen by a sensor of finite
    /// resolution: the weighted value is truncated to whole `resolution`
    /// units, so concentrations closer together than one unit read equal.
    /// Illumination then does more than scale: gradients attenuated below
    /// the resolution floor vanish entirely, and material in brightly lit
    /// regions loses its bearings instead of merely dimming them.
    #[inline]
    pub fn sample_quantized(&self, cell: Cell, mask: &IlluminationMask, resolution: f64) -> f64 {
        let v = self.sample_weighted(cell, mask);
        if resolution > 0.0 {
            (v / resolution).floor() * resolution
        } else {
            v
        }
    }

    /// Add `amount` of chemoattractant at an in-bounds cell.
    ///
    /// Out-of-bounds deposits are caller bugs, not runtime conditions.
    pub fn deposit(&mut self, cell: Cell, amount: f64) {
        assert!(self.in_bounds(cell), "deposit out of bounds at {cell:?}");
        assert!(amount >= 0.0, "deposit amount must be non-negative");
        let i = self.idx(cell);
        self.values[i] += amount;
    }

    /// Additive projection of `magnitude` onto every site. Empty site sets
    /// are a no-op. Projection commutes with itself on disjoint site sets.
    pub fn project_attractant(&mut self, sites: &[Cell], magnitude: f64) {
        for &cell in sites {
            self.deposit(cell, magnitude);
        }
    }

    /// One diffusion step: every cell becomes `damping` times the zero-padded
    /// 3x3 mean of its neighborhood (out-of-bounds neighbors contribute zero
    /// but still count in the divisor of nine, so mass leaks at the edges).
    ///
    /// Implemented as a separable pass (horizontal then vertical 3-sums);
    /// deterministic, bit-identical for identical inputs.
    pub fn diffuse_and_damp(&mut self, damping: f64) {
        assert!(
            damping > 0.0 && damping <= 1.0,
            "damping must be in (0, 1]"
        );
        let w = self.width;
        let h = self.height;
        let k = damping / 9.0;
        let v = &self.values;
        let hs = &mut self.row_sums;

        for y in 0..h {
            let row = &v[y * w..(y + 1) * w];
            let out = &mut hs[y * w..(y + 1) * w];
            if w == 1 {
                out[0] = row[0];
                continue;
            }
            out[0] = row[0] + row[1];
            for x in 1..w - 1 {
                out[x] = row[x - 1] + row[x] + row[x + 1];
            }
            out[w - 1] = row[w - 2] + row[w - 1];
        }

        let back = &mut self.back;
        for y in 0..h {
            let above = if y > 0 { Some(&hs[(y - 1) * w..y * w]) } else { None };
            let below = if y + 1 < h {
                Some(&hs[(y + 1) * w..(y + 2) * w])
            } else {
                None
            };
            let mid = &hs[y * w..(y + 1) * w];
            let out = &mut back[y * w..(y + 1) * w];
            match (above, below) {
                (Some(a), Some(b)) => {
                    for x in 0..w {
                        out[x] = (a[x] + mid[x] + b[x]) * k;
                    }
                }
                (Some(a), None) => {
                    for x in 0..w {
                        out[x] = (a[x] + mid[x]) * k;
                    }
                }
                (None, Some(b)) => {
                    for x in 0..w {
                        out[x] = (mid[x] + b[x]) * k;
                    }
                }
                (None, None) => {
                    for x in 0..w {
                        out[x] = mid[x] * k;
                    }
                }
            }
        }

        std::mem::swap(&mut self.values, &mut self.back);
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn set(&mut self, cell: Cell, value: f64) {
        let i = self.idx(cell);
        self.values[i] = value;
    }

    pub fn fill(&mut self, value: f64) {
        assert!(value >= 0.0);
        self.values.fill(value);
    }
}

/// Simulated illumination: a per-cell exposure map plus a sensing weight.
///
/// While active, chemoattractant sensed at exposed cells is multiplied by
/// `weight`, turning light into a repellent without touching the stored
/// field values.
#[derive(Debug, Clone)]
pub struct IlluminationMask {
    width: usize,
    height: usize,
    pub active: bool,
    exposed: Vec<bool>,
    weight: f64,
}

impl IlluminationMask {
    /// Inactive mask covering a `width` x `height` lattice.
    pub fn inactive(width: usize, height: usize, weight: f64) -> Self {
        assert!(weight > 0.0 && weight <= 1.0, "weight must be in (0, 1]");
        IlluminationMask {
            width,
            height,
            active: false,
            exposed: vec![false; width * height],
            weight,
        }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Expose the whole lattice except the axis-aligned rectangle
    /// `[x0, x1) x [y0, y1)` (clipped to bounds) and activate the mask.
    pub fn expose_all_except_rect(&mut self, x0: i32, y0: i32, x1: i32, y1: i32) {
        for y in 0..self.height as i32 {
            for x in 0..self.width as i32 {
                let shaded = x >= x0 && x < x1 && y >= y0 && y < y1;
                self.exposed[y as usize * self.width + x as usize] = !shaded;
            }
        }
        self.active = true;
    }

    /// Expose an explicit set of cells and activate the mask.
    pub fn expose_cells(&mut self, cells: &[Cell]) {
        self.exposed.fill(false);
        for &(x, y) in cells {
            if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
                self.exposed[y as usize * self.width + x as usize] = true;
            }
        }
        self.active = true;
    }

    pub fn deactivate(&mut self) {
        self.active = false;
    }

    pub fn is_exposed(&self, (x, y): Cell) -> bool {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return false;
        }
        self.exposed[y as usize * self.width + x as usize]
    }
}
