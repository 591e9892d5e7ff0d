//! Single-occupancy particle grid: each lattice site stores at most one
//! particle identity, and every live particle appears in exactly one cell.

use crate::Cell;

const EMPTY: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cells: Vec<u32>,
}

impl OccupancyGrid {
    pub fn new(width: usize, height: usize) -> Self {
        OccupancyGrid {
            width,
            height,
            cells: vec![EMPTY; width * height],
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

    /// Identity of the particle at `cell`, if any. Out of bounds is vacant.
    #[inline]
    pub fn occupant(&self, cell: Cell) -> Option<usize> {
        if !self.in_bounds(cell) {
            return None;
        }
        match self.cells[self.idx(cell)] {
            EMPTY => None,
            id => Some(id as usize),
        }
    }

    #[inline]
    pub fn is_free(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && self.cells[self.idx(cell)] == EMPTY
    }

    pub fn place(&mut self, cell: Cell, id: usize) {
        let i = self.idx(cell);
        debug_assert_eq!(self.cells[i], EMPTY, "cell {cell:?} already occupied");
        self.cells[i] = id as u32;
    }

    pub fn vacate(&mut self, cell: Cell) {
        let i = self.idx(cell);
        debug_assert_ne!(self.cells[i], EMPTY, "vacating empty cell {cell:?}");
        self.cells[i] = EMPTY;
    }

    pub fn relocate(&mut self, from: Cell, to: Cell, id: usize) {
        self.vacate(from);
        self.place(to, id);
    }

    /// Rebuild the whole grid from particle cells, in index order.
    pub fn rebuild(&mut self, cells: impl Iterator<Item = Cell>) {
        self.cells.fill(EMPTY);
        for (id, cell) in cells.enumerate() {
            self.place(cell, id);
        }
    }

    /// Number of occupied cells in the `(2r+1) x (2r+1)` window centered on
    /// `cell`, clipped to the lattice. Includes the center if occupied.
    pub fn count_window(&self, (cx, cy): Cell, r: i32) -> usize {
        let x0 = (cx - r).max(0);
        let x1 = (cx + r).min(self.width as i32 - 1);
        let y0 = (cy - r).max(0);
        let y1 = (cy + r).min(self.height as i32 - 1);
        let mut n = 0;
        for y in y0..=y1 {
            let row = y as usize * self.width;
            for x in x0..=x1 {
                if self.cells[row + x as usize] != EMPTY {
                    n += 1;
                }
            }
        }
        n
    }

    /// Empty in-bounds cells of the 3x3 neighborhood around `cell`,
    /// excluding the center, in row-major order.
    pub fn free_neighbors3(&self, (cx, cy): Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(8);
        for dy in -1..=1 {
            for dx in -1..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let c = (cx + dx, cy + dy);
                if self.is_free(c) {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != EMPTY).count()
    }

    /// Check the occupancy/particle bijection: every particle's cell points
    /// back at it and no extra cells are occupied.
    pub fn is_bijection(&self, cells: &[Cell]) -> bool {
        if self.occupied_count() != cells.len() {
            return false;
        }
        cells
            .iter()
            .enumerate()
            .all(|(id, &cell)| self.occupant(cell) == Some(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn place_and_relocate() {
        let mut g = OccupancyGrid::new(4, 4);
        g.place((1, 1), 0);
        assert_eq!(g.occupant((1, 1)), Some(0));
        assert!(!g.is_free((1, 1)));
        g.relocate((1, 1), (2, 1), 0);
        assert!(g.is_free((1, 1)));
        assert_eq!(g.occupant((2, 1)), Some(0));
    }

    #[test]
    fn window_counts_clip_at_edges() {
        let mut g = OccupancyGrid::new(5, 5);
        g.place((0, 0), 0);
        g.place((1, 0), 1);
        g.place((4, 4), 2);
        assert_eq!(g.count_window((0, 0), 1), 2);
        assert_eq!(g.count_window((2, 2), 2), 3);
        assert_eq!(g.count_window((2, 2), 1), 0);
    }

    #[test]
    fn free_neighbors_exclude_center_and_occupied() {
        let mut g = OccupancyGrid::new(3, 3);
        g.place((1, 1), 0);
        g.place((0, 0), 1);
        let free = g.free_neighbors3((1, 1));
        assert_eq!(free.len(), 7);
        assert!(!free.contains(&(0, 0)));
        assert!(!free.contains(&(1, 1)));
    }

    #[test]
    fn bijection_check() {
        let mut g = OccupancyGrid::new(4, 4);
        let cells = vec![(0, 0), (3, 2)];
        g.rebuild(cells.iter().copied());
        assert!(g.is_bijection(&cells));
        g.place((1, 1), 9);
        assert!(!g.is_bijection(&cells));
    }
}
