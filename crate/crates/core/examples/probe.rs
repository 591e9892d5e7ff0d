// Temporary density probe for calibrating turnover dynamics.
use plasmo::stimulus::{StimulusEvent, StimulusKind};
use plasmo::world::{World, WorldConfig};
use plasmo::Cell;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let turnover_freq: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let steps: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1500);
    let start: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);

    let mut wc = WorldConfig::new(240, 140);
    wc.damping = 0.9;
    if turnover_freq > 0 {
        wc.turnover = Some(plasmo::population::TurnoverPolicy {
            frequency: turnover_freq,
            start_step: start,
            ..Default::default()
        });
    }
    let mut w = World::new(wc, 1).unwrap();
    let mut sites: Vec<Cell> = Vec::new();
    for y in 67..73 {
        for x in 40..200 {
            sites.push((x, y));
        }
    }
    w.seed_on_cells(&sites, 1.0).unwrap();
    w.stimuli_mut()
        .push(StimulusEvent {
            start: 0,
            duration: 20,
            kind: StimulusKind::AttractantPattern(sites),
            magnitude: 10.0,
        })
        .unwrap();

    for s in 0..=steps {
        if s % 100 == 0 {
            let n = w.population();
            let mean5: f64 = w
                .particles()
                .iter()
                .map(|p| w.occupancy().count_window(p.pos.cell(), 2) as f64)
                .sum::<f64>()
                / n.max(1) as f64;
            let full5 = w
                .particles()
                .iter()
                .filter(|p| w.occupancy().count_window(p.pos.cell(), 2) == 25)
                .count();
            let sparse9 = w
                .particles()
                .iter()
                .filter(|p| {
                    let c = w.occupancy().count_window(p.pos.cell(), 4) - 1;
                    (1..=10).contains(&c)
                })
                .count();
            println!(
                "step {s:5} pop {n:6} mean5x5 {mean5:5.1} full5x5 {full5:5} divisible {sparse9:5}"
            );
        }
        w.scheduler_step();
    }
}
