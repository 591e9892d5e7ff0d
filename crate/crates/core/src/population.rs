//! Population dynamics: uniform random shrinkage for large solid blobs, and
//! the paired division/survival turnover rules that let thin material shrink
//! without breaking apart.

use crate::agent::{Particle, normalize_heading};
use crate::geometry::Vec2;
use crate::occupancy::OccupancyGrid;
use rand::Rng;

/// Random removal of particles, optionally delayed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkPolicy {
    /// Per-particle removal probability per scheduler step.
    pub p_remove: f64,
    /// First step at which removal applies (0 = immediate).
    pub start_step: u64,
}

impl ShrinkPolicy {
    pub fn immediate(p_remove: f64) -> Self {
        ShrinkPolicy {
            p_remove,
            start_step: 0,
        }
    }

    pub fn delayed(p_remove: f64, start_step: u64) -> Self {
        ShrinkPolicy {
            p_remove,
            start_step,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(0.0..=1.0).contains(&self.p_remove) {
            return Err(crate::Error::config("removal probability must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Division/survival turnover thresholds.
///
/// Division: a particle that moved forward this step and counts between
/// `division_min` and `division_max` particles (itself included) in its
/// `(2*division_radius+1)`-sided window spawns one child at a random empty
/// cell of its 3x3 neighborhood, if one exists. The parent must also touch
/// at least `min_contact` other particles in its immediate 3x3: division
/// exists to keep thin *material* connected, and without a contact
/// condition every particle or pair that wanders off the blob founds a
/// colony that doubles each invocation until the lattice saturates. The
/// default of 2 keeps one-pixel strands fertile (a chain particle touches
/// both chain neighbors) while shed singletons and pairs stay sterile.
/// Survival: a particle counting more than `survival_max` in its smaller
/// window, itself included, is deleted (25 of 25 at the defaults, so only
/// fully packed cores are culled).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnoverPolicy {
    /// Steps between turnover tests.
    pub frequency: u64,
    /// First step at which turnover applies; lets the material relax off
    /// its artificially packed initial pattern before births and deaths
    /// start competing.
    pub start_step: u64,
    pub division_radius: i32,
    pub division_min: usize,
    pub division_max: usize,
    /// Minimum touching neighbors a parent needs to divide (see type docs).
    pub min_contact: usize,
    pub survival_radius: i32,
    pub survival_min: usize,
    pub survival_max: usize,
}

impl Default for TurnoverPolicy {
    fn default() -> Self {
        TurnoverPolicy {
            frequency: 2,
            start_step: 0,
            division_radius: 4, // 9x9 window
            division_min: 1,
            division_max: 10,
            min_contact: 2,
            survival_radius: 2, // 5x5 window
            survival_min: 0,
            survival_max: 24,
        }
    }
}

impl TurnoverPolicy {
    pub fn validate(&self) -> crate::Result<()> {
        if self.frequency < 1 {
            return Err(crate::Error::config("turnover frequency must be at least 1"));
        }
        if self.division_radius < 1 || self.survival_radius < 1 {
            return Err(crate::Error::config("turnover windows must be at least 3x3"));
        }
        Ok(())
    }
}

/// Remove each live particle independently with the policy probability once
/// the start step has been reached. Returns the number removed.
pub fn apply_shrinkage<R: Rng>(
    particles: &mut Vec<Particle>,
    occupancy: &mut OccupancyGrid,
    policy: &ShrinkPolicy,
    step: u64,
    rng: &mut R,
) -> usize {
    if step < policy.start_step || policy.p_remove <= 0.0 {
        return 0;
    }
    let before = particles.len();
    let keep: Vec<bool> = particles
        .iter()
        .map(|_| !rng.gen_bool(policy.p_remove))
        .collect();
    let mut it = keep.iter();
    particles.retain(|_| *it.next().unwrap());
    let removed = before - particles.len();
    if removed > 0 {
        occupancy.rebuild(particles.iter().map(|p| p.pos.cell()));
    }
    removed
}

/// One turnover pass: division tests against pre-turnover occupancy, then
/// survival tests against the occupancy including newborns, with all
/// deletions applied at the end. Returns (born, died).
pub fn apply_turnover<R: Rng>(
    particles: &mut Vec<Particle>,
    occupancy: &mut OccupancyGrid,
    policy: &TurnoverPolicy,
    rng: &mut R,
) -> (usize, usize) {
    let parents = particles.len();

    // division candidates evaluated on a pre-turnover snapshot of counts
    // (the window count includes the particle itself)
    let division_counts: Vec<(usize, usize)> = particles
        .iter()
        .map(|p| {
            let cell = p.pos.cell();
            (
                occupancy.count_window(cell, policy.division_radius),
                occupancy.count_window(cell, 1),
            )
        })
        .collect();

    let mut born = 0usize;
    for i in 0..parents {
        let (count, contact) = division_counts[i];
        if !particles[i].moved || count < policy.division_min || count > policy.division_max {
            continue;
        }
        if contact < policy.min_contact + 1 {
            continue;
        }
        // the empty-cell check uses live occupancy so newborns never stack
        let free = occupancy.free_neighbors3(particles[i].pos.cell());
        if free.is_empty() {
            continue;
        }
        let cell = free[rng.gen_range(0..free.len())];
        let heading = normalize_heading(rng.gen_range(0.0..360.0));
        let child = Particle::new(Vec2::new(cell.0 as f64, cell.1 as f64), heading);
        occupancy.place(cell, particles.len());
        particles.push(child);
        born += 1;
    }

    // survival on the updated occupancy; deletions applied after all tests
    let keep: Vec<bool> = particles
        .iter()
        .map(|p| {
            let count = occupancy.count_window(p.pos.cell(), policy.survival_radius);
            count >= policy.survival_min && count <= policy.survival_max
        })
        .collect();
    let died = keep.iter().filter(|&&k| !k).count();
    if died > 0 {
        let mut it = keep.iter();
        particles.retain(|_| *it.next().unwrap());
    }
    // indices shifted by births and deaths
    if born > 0 || died > 0 {
        occupancy.rebuild(particles.iter().map(|p| p.pos.cell()));
    }
    (born, died)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn particle_at(x: i32, y: i32) -> Particle {
        Particle::new(Vec2::new(x as f64, y as f64), 0.0)
    }

    fn setup(cells: &[(i32, i32)], w: usize, h: usize) -> (Vec<Particle>, OccupancyGrid) {
        let particles: Vec<Particle> = cells.iter().map(|&(x, y)| particle_at(x, y)).collect();
        let mut occ = OccupancyGrid::new(w, h);
        occ.rebuild(particles.iter().map(|p| p.pos.cell()));
        (particles, occ)
    }

    #[test]
    fn zero_probability_removes_nothing() {
        let (mut particles, mut occ) = setup(&[(1, 1), (2, 2)], 8, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let removed = apply_shrinkage(
            &mut particles,
            &mut occ,
            &ShrinkPolicy::immediate(0.0),
            0,
            &mut rng,
        );
        assert_eq!(removed, 0);
        assert_eq!(particles.len(), 2);
    }

    #[test]
    fn probability_one_clears_population() {
        let (mut particles, mut occ) = setup(&[(1, 1), (2, 2), (3, 3)], 8, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let removed = apply_shrinkage(
            &mut particles,
            &mut occ,
            &ShrinkPolicy::immediate(1.0),
            0,
            &mut rng,
        );
        assert_eq!(removed, 3);
        assert!(particles.is_empty());
        assert_eq!(occ.occupied_count(), 0);
    }

    #[test]
    fn delayed_policy_waits_for_start_step() {
        let (mut particles, mut occ) = setup(&[(1, 1)], 8, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let policy = ShrinkPolicy::delayed(1.0, 100);
        assert_eq!(apply_shrinkage(&mut particles, &mut occ, &policy, 99, &mut rng), 0);
        assert_eq!(apply_shrinkage(&mut particles, &mut occ, &policy, 100, &mut rng), 1);
    }

    #[test]
    fn binomial_removal_expectation() {
        // 10_000 particles at p = 0.0005: mean removals per step is 5
        let cells: Vec<(i32, i32)> = (0..10_000).map(|i| (i % 100, i / 100)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 1000;
        let mut total = 0usize;
        for _ in 0..trials {
            let (mut particles, mut occ) = setup(&cells, 100, 100);
            total += apply_shrinkage(
                &mut particles,
                &mut occ,
                &ShrinkPolicy::immediate(0.0005),
                0,
                &mut rng,
            );
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 5.0).abs() < 1.0, "mean removals {mean}");
    }

    #[test]
    fn strand_mover_divides_once() {
        // one-pixel strand: the middle particle touches both chain
        // neighbors and sits in thin material
        let (mut particles, mut occ) = setup(&[(5, 5), (6, 5), (4, 5)], 12, 12);
        particles[0].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (born, died) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!((born, died), (1, 0));
        assert_eq!(particles.len(), 4);
        // child landed on a previously empty cell adjacent to the parent
        let parent = particles[0].pos.cell();
        let child = particles[3].pos.cell();
        assert_ne!(parent, child);
        assert!(!occ.free_neighbors3(parent).contains(&child));
        assert!((parent.0 - child.0).abs() <= 1 && (parent.1 - child.1).abs() <= 1);
        assert!(occ.is_bijection(&particles.iter().map(|p| p.pos.cell()).collect::<Vec<_>>()));
    }

    #[test]
    fn isolated_mover_never_seeds_a_colony() {
        let (mut particles, mut occ) = setup(&[(5, 5)], 12, 12);
        particles[0].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);
    }

    #[test]
    fn shed_pair_is_sterile() {
        let (mut particles, mut occ) = setup(&[(5, 5), (6, 5)], 12, 12);
        particles[0].moved = true;
        particles[1].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);
    }

    #[test]
    fn stationary_particle_does_not_divide() {
        let (mut particles, mut occ) = setup(&[(5, 5), (6, 5), (4, 5)], 12, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);
    }

    #[test]
    fn overcrowded_particle_is_deleted() {
        // fully packed 5x5 block: center counts 25 > 24 and is deleted;
        // every other member counts at most 20 and survives
        let mut cells = Vec::new();
        for y in 3..8 {
            for x in 3..8 {
                cells.push((x, y));
            }
        }
        let (mut particles, mut occ) = setup(&cells, 16, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (born, died) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);
        assert_eq!(died, 1);
        assert!(!particles.iter().any(|p| p.pos.cell() == (5, 5)));
    }

    #[test]
    fn division_respects_window_maximum() {
        // strand mover at (5,5) plus 8 outliers on row 2: window count 11,
        // one over the division maximum
        let mut cells = vec![(5, 5), (6, 5), (4, 5)];
        for k in 0..8 {
            cells.push((1 + k, 2));
        }
        let (mut particles, mut occ) = setup(&cells, 16, 16);
        particles[0].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);

        // drop one outlier: count 10 sits at the maximum and divides
        let (mut particles, mut occ) = setup(&cells[..10], 16, 16);
        particles[0].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 1);
    }

    #[test]
    fn packed_neighborhood_blocks_division_even_at_low_count() {
        // mover with all eight neighbors occupied but 9x9 count 9 <= 10:
        // division test passes yet there is no empty adjacent cell
        let mut cells = vec![(5, 5)];
        for (dx, dy) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
            cells.push((5 + dx, 5 + dy));
        }
        let (mut particles, mut occ) = setup(&cells, 16, 16);
        particles[0].moved = true;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (born, _) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 0);
    }

    #[test]
    fn at_most_one_child_per_parent_per_invocation() {
        // 2x2 block: every member touches three others and counts 4 in its
        // 9x9, so all four movers divide exactly once
        let (mut particles, mut occ) = setup(&[(5, 5), (6, 5), (5, 6), (6, 6)], 20, 20);
        for p in particles.iter_mut() {
            p.moved = true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (born, died) = apply_turnover(&mut particles, &mut occ, &TurnoverPolicy::default(), &mut rng);
        assert_eq!(born, 4);
        assert_eq!(died, 0);
        assert_eq!(particles.len(), 8);
    }
}
