//! Single-particle behavior: the two-stage sense/move algorithm.
//!
//! Each particle carries a continuous position, a heading, and (in
//! oscillatory mode) an internal pending-displacement accumulator. The
//! sensory stage swings the heading towards the strongest of three offset
//! chemoattractant reads; the motor stage attempts a one-pixel move and
//! deposits trail only on a successful change of lattice cell.

use crate::field::{IlluminationMask, TrailField};
use crate::geometry::{heading_vec, Vec2};
use crate::occupancy::OccupancyGrid;
use rand::Rng;

/// Sensor geometry: offset distance and angles, all in pixels/degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    /// Distance from the particle to each sensor (SO). At least 3 px for
    /// the collective coupling to emerge.
    pub offset: f64,
    /// Angle between the forward sensor and each side sensor (SA).
    pub angle_deg: f64,
    /// Rotation applied when turning towards a side sensor (RA).
    pub rotation_deg: f64,
    /// Smallest concentration difference a sensor resolves; zero for exact
    /// sensing. See [`crate::field::TrailField::sample_quantized`].
    pub resolution: f64,
}

impl Default for SensorParams {
    fn default() -> Self {
        SensorParams {
            offset: 9.0,
            angle_deg: 90.0,
            rotation_deg: 45.0,
            resolution: 0.0,
        }
    }
}

impl SensorParams {
    pub fn validate(&self) -> crate::Result<()> {
        if self.offset < 3.0 {
            return Err(crate::Error::config("sensor offset must be at least 3 px"));
        }
        for (name, v) in [("sensor angle", self.angle_deg), ("rotation angle", self.rotation_deg)] {
            if !(v > 0.0 && v <= 180.0) {
                return Err(crate::Error::config(format!(
                    "{name} must lie in (0, 180] degrees"
                )));
            }
        }
        if self.resolution < 0.0 {
            return Err(crate::Error::config("sensor resolution must be non-negative"));
        }
        Ok(())
    }
}

/// Motor behavior of the population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotorMode {
    /// Blocked particles pick a fresh random heading; smooth adaptation.
    Fluid,
    /// Blocked particles hold their heading and accumulate intended
    /// displacement until the cell ahead frees, damped by a reset
    /// probability per step. Produces travelling waves and amoeboid motion.
    Oscillatory { reset_probability: f64 },
}

impl MotorMode {
    pub fn oscillatory_default() -> Self {
        MotorMode::Oscillatory {
            reset_probability: 0.05,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if let MotorMode::Oscillatory { reset_probability } = self {
            if !(0.0..=1.0).contains(reset_probability) {
                return Err(crate::Error::config("reset probability must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// One particle of the virtual material.
#[derive(Debug, Clone)]
pub struct Particle {
    /// Continuous position; `pos.cell()` is the occupied lattice cell.
    pub pos: Vec2,
    /// Heading in degrees, normalized to [0, 360).
    pub heading: f64,
    /// Accumulated intended displacement while blocked (oscillatory mode
    /// only; stays zero in fluid mode).
    pub osc_pending: Vec2,
    /// Set when the motor stage changed cell this step; cleared each step.
    pub moved: bool,
}

impl Particle {
    pub fn new(pos: Vec2, heading: f64) -> Self {
        Particle {
            pos,
            heading: normalize_heading(heading),
            osc_pending: Vec2::default(),
            moved: false,
        }
    }
}

pub fn normalize_heading(h: f64) -> f64 {
    let r = h.rem_euclid(360.0);
    if r == 360.0 {
        0.0
    } else {
        r
    }
}

fn uniform_heading<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..360.0)
}

/// Chemoattractant at the three forward-biased sensors (FL, F, FR).
pub fn sensor_reads(
    p: &Particle,
    field: &TrailField,
    mask: &IlluminationMask,
    sp: &SensorParams,
) -> (f64, f64, f64) {
    let read = |angle: f64| {
        let cell = p.pos.add(heading_vec(angle).scale(sp.offset)).cell();
        field.sample_quantized(cell, mask, sp.resolution)
    };
    (
        read(p.heading - sp.angle_deg),
        read(p.heading),
        read(p.heading + sp.angle_deg),
    )
}

/// Sensory stage: rotate towards the strongest local chemoattractant source.
///
/// Branches, in order: forward strictly strongest keeps the heading; forward
/// strictly weakest turns by RA to a side chosen uniformly at random; else
/// the stronger side wins; exact ties keep the heading.
pub fn sensory_stage<R: Rng>(
    p: &Particle,
    field: &TrailField,
    mask: &IlluminationMask,
    sp: &SensorParams,
    rng: &mut R,
) -> f64 {
    let (fl, f, fr) = sensor_reads(p, field, mask, sp);
    steer(p.heading, fl, f, fr, sp.rotation_deg, rng)
}

/// The branching rule on raw sensor values; separated out so it can be
/// driven exhaustively in tests.
pub fn steer<R: Rng>(heading: f64, fl: f64, f: f64, fr: f64, ra: f64, rng: &mut R) -> f64 {
    let new = if f > fl && f > fr {
        heading
    } else if fl > f && fr > f {
        if rng.gen_bool(0.5) {
            heading - ra
        } else {
            heading + ra
        }
    } else if fl > fr {
        heading - ra
    } else if fr > fl {
        heading + ra
    } else {
        heading
    };
    normalize_heading(new)
}

/// Fluid-mode motor stage: attempt a one-pixel move along the heading.
///
/// Succeeds when the destination cell is in bounds and either unoccupied or
/// the particle's own cell; deposits `deposit` only when the cell changed.
/// A blocked particle stays put and picks a fresh uniform heading.
pub fn motor_stage_fluid<R: Rng>(
    id: usize,
    p: &mut Particle,
    field: &mut TrailField,
    occupancy: &mut OccupancyGrid,
    deposit: f64,
    rng: &mut R,
) {
    let candidate = p.pos.add(heading_vec(p.heading));
    let old_cell = p.pos.cell();
    let new_cell = candidate.cell();
    let admissible =
        occupancy.in_bounds(new_cell) && (new_cell == old_cell || occupancy.is_free(new_cell));
    if admissible {
        if new_cell != old_cell {
            occupancy.relocate(old_cell, new_cell, id);
            field.deposit(new_cell, deposit);
            p.moved = true;
        }
        p.pos = candidate;
    } else {
        p.heading = uniform_heading(rng);
    }
}

/// Oscillatory-mode motor stage: blocked particles hold their heading and
/// keep incrementing an internal displacement accumulator until the cell
/// directly ahead frees; the stored displacement then discharges as a
/// committed straight surge, one pixel per step, during which the sensory
/// stage leaves the particle alone. Compressed regions released together
/// move coherently, which is what produces the travelling waves and the
/// emergent amoeboid motion of a dense blob. With probability
/// `reset_probability` per blocked step the particle gives up, zeroing the
/// accumulator and picking a fresh heading; at 1.0 the mode degenerates to
/// fluid-style blocking.
pub fn motor_stage_oscillatory<R: Rng>(
    id: usize,
    p: &mut Particle,
    field: &mut TrailField,
    occupancy: &mut OccupancyGrid,
    deposit: f64,
    reset_probability: f64,
    rng: &mut R,
) {
    let step_vec = heading_vec(p.heading);
    let candidate = p.pos.add(step_vec);
    let old_cell = p.pos.cell();
    let front_cell = candidate.cell();
    let admissible =
        occupancy.in_bounds(front_cell) && (front_cell == old_cell || occupancy.is_free(front_cell));
    if admissible {
        if front_cell != old_cell {
            occupancy.relocate(old_cell, front_cell, id);
            field.deposit(front_cell, deposit);
            p.moved = true;
        }
        p.pos = candidate;
        // discharge one pixel of stored displacement
        let pending = p.osc_pending.norm();
        if pending > 0.0 {
            let remaining = (pending - 1.0).max(0.0);
            p.osc_pending = if remaining > 0.0 {
                step_vec.scale(remaining)
            } else {
                Vec2::default()
            };
        }
    } else {
        p.osc_pending = p.osc_pending.add(step_vec);
        if rng.gen_bool(reset_probability) {
            p.osc_pending = Vec2::default();
            p.heading = uniform_heading(rng);
        }
    }
}

/// A particle whose internal accumulator is discharging is committed to its
/// stored direction; the sensory stage skips it.
pub fn is_committed(p: &Particle) -> bool {
    p.osc_pending.norm() > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn world_bits(w: usize, h: usize) -> (TrailField, OccupancyGrid, IlluminationMask) {
        (
            TrailField::new(w, h),
            OccupancyGrid::new(w, h),
            IlluminationMask::inactive(w, h, 0.1),
        )
    }

    #[test]
    fn forward_strongest_keeps_heading() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(steer(90.0, 1.0, 5.0, 1.0, 45.0, &mut rng), 90.0);
    }

    #[test]
    fn stronger_side_wins() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // left sensor strongest: turn towards it
        assert_eq!(steer(90.0, 5.0, 1.0, 1.0, 45.0, &mut rng), 45.0);
        assert_eq!(steer(90.0, 1.0, 1.0, 5.0, 45.0, &mut rng), 135.0);
        // side beats forward even when forward is not the weakest
        assert_eq!(steer(90.0, 5.0, 3.0, 1.0, 45.0, &mut rng), 45.0);
    }

    #[test]
    fn total_tie_keeps_heading() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(steer(10.0, 0.0, 0.0, 0.0, 45.0, &mut rng), 10.0);
        assert_eq!(steer(10.0, 2.0, 2.0, 2.0, 45.0, &mut rng), 10.0);
    }

    #[test]
    fn forward_weakest_turns_either_way_evenly() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = 10_000;
        let mut left = 0;
        for _ in 0..n {
            let h = steer(90.0, 5.0, 1.0, 5.0, 45.0, &mut rng);
            assert!(h == 45.0 || h == 135.0);
            if h == 45.0 {
                left += 1;
            }
        }
        let freq = left as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.05, "left turn frequency {freq}");
    }

    #[test]
    fn argmax_invariant_under_uniform_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (fl, f, fr): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            let c = 0.1;
            let mut ra = ChaCha8Rng::seed_from_u64(77);
            let mut rb = ChaCha8Rng::seed_from_u64(77);
            let a = steer(90.0, fl, f, fr, 45.0, &mut ra);
            let b = steer(90.0, fl * c, f * c, fr * c, 45.0, &mut rb);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sensors_sample_at_offset_positions() {
        let (mut field, _occ, mask) = world_bits(30, 30);
        let sp = SensorParams::default();
        // heading 0: F at +9 in x, FL at heading -90 (up), FR at +90 (down)
        let p = Particle::new(Vec2::new(15.0, 15.0), 0.0);
        field.deposit((24, 15), 3.0); // forward sensor cell
        field.deposit((15, 6), 1.0); // left sensor cell
        let (fl, f, fr) = sensor_reads(&p, &field, &mask, &sp);
        assert_eq!((fl, f, fr), (1.0, 3.0, 0.0));
    }

    #[test]
    fn fluid_move_deposits_on_cell_change() {
        let (mut field, mut occ, _mask) = world_bits(10, 10);
        let mut p = Particle::new(Vec2::new(2.0, 5.0), 0.0);
        occ.place(p.pos.cell(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        motor_stage_fluid(0, &mut p, &mut field, &mut occ, 5.0, &mut rng);
        assert_eq!(p.pos, Vec2::new(3.0, 5.0));
        assert!(p.moved);
        assert_eq!(field.sample((3, 5)), 5.0);
        assert_eq!(occ.occupant((3, 5)), Some(0));
        assert!(occ.is_free((2, 5)));
    }

    #[test]
    fn blocked_fluid_particle_rerandomizes_without_deposit() {
        let (mut field, mut occ, _mask) = world_bits(10, 10);
        let mut p = Particle::new(Vec2::new(2.0, 5.0), 0.0);
        occ.place(p.pos.cell(), 0);
        occ.place((3, 5), 1); // blocker ahead
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        motor_stage_fluid(0, &mut p, &mut field, &mut occ, 5.0, &mut rng);
        assert_eq!(p.pos, Vec2::new(2.0, 5.0));
        assert!(!p.moved);
        assert_eq!(field.sum(), 0.0);
        assert!((0.0..360.0).contains(&p.heading));
    }

    #[test]
    fn subcell_move_updates_position_without_deposit() {
        let (mut field, mut occ, _mask) = world_bits(10, 10);
        // heading 45 from (0.1, 0.1): first step stays in cell (0,0)
        let mut p = Particle::new(Vec2::new(0.1, 0.1), 45.0);
        occ.place(p.pos.cell(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        motor_stage_fluid(0, &mut p, &mut field, &mut occ, 5.0, &mut rng);
        assert_eq!(p.pos.cell(), (0, 0));
        assert!(!p.moved);
        assert_eq!(field.sum(), 0.0);
        // second step crosses into (1,1) and deposits exactly once
        motor_stage_fluid(0, &mut p, &mut field, &mut occ, 5.0, &mut rng);
        assert_eq!(p.pos.cell(), (1, 1));
        assert_eq!(field.sum(), 5.0);
    }

    #[test]
    fn oscillatory_particle_waits_then_takes_freed_cell() {
        let (mut field, mut occ, _mask) = world_bits(10, 10);
        let mut p = Particle::new(Vec2::new(2.0, 5.0), 0.0);
        occ.place(p.pos.cell(), 0);
        occ.place((3, 5), 1);
        // reset probability zero: pure waiting
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for k in 1..=3 {
            motor_stage_oscillatory(0, &mut p, &mut field, &mut occ, 5.0, 0.0, &mut rng);
            assert_eq!(p.pos, Vec2::new(2.0, 5.0));
            assert_eq!(p.osc_pending.x, k as f64);
            assert!(is_committed(&p));
        }
        assert_eq!(field.sum(), 0.0);
        occ.vacate((3, 5));
        // the freeing step moves exactly one cell and starts the discharge
        motor_stage_oscillatory(0, &mut p, &mut field, &mut occ, 5.0, 0.0, &mut rng);
        assert_eq!(p.pos, Vec2::new(3.0, 5.0));
        assert_eq!(p.osc_pending.x, 2.0);
        assert_eq!(field.sample((3, 5)), 5.0);
        assert!(p.moved);
        // stored displacement drains one pixel per free step
        motor_stage_oscillatory(0, &mut p, &mut field, &mut occ, 5.0, 0.0, &mut rng);
        motor_stage_oscillatory(0, &mut p, &mut field, &mut occ, 5.0, 0.0, &mut rng);
        assert_eq!(p.pos, Vec2::new(5.0, 5.0));
        assert_eq!(p.osc_pending, Vec2::default());
        assert!(!is_committed(&p));
    }

    #[test]
    fn oscillatory_reset_probability_one_acts_like_fluid_blocking() {
        let (mut field, mut occ, _mask) = world_bits(10, 10);
        let mut p = Particle::new(Vec2::new(2.0, 5.0), 0.0);
        occ.place(p.pos.cell(), 0);
        occ.place((3, 5), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        motor_stage_oscillatory(0, &mut p, &mut field, &mut occ, 5.0, 1.0, &mut rng);
        // reset fired: accumulator cleared, heading resampled, no move
        assert_eq!(p.pos, Vec2::new(2.0, 5.0));
        assert_eq!(p.osc_pending, Vec2::default());
        assert_eq!(field.sum(), 0.0);
    }

    #[test]
    fn heading_normalization() {
        assert_eq!(normalize_heading(-45.0), 315.0);
        assert_eq!(normalize_heading(360.0), 0.0);
        assert_eq!(normalize_heading(725.0), 5.0);
    }
}
