// Temporary probe: does a static illumination hole pull the blob?
use plasmo::stimulus::{StimulusEvent, StimulusKind};
use plasmo::world::{World, WorldConfig};
use plasmo::agent::MotorMode;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let offset: i32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let p_reset: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let mut wc = WorldConfig::new(200, 200);
    wc.damping = 0.93;
    wc.motor = if p_reset >= 1.5 {
        MotorMode::Fluid
    } else {
        MotorMode::Oscillatory { reset_probability: p_reset }
    };
    let mut w = World::new(wc, 5).unwrap();
    w.seed_window(1500, 80).unwrap();
    for _ in 0..250 {
        w.scheduler_step();
    }
    let c0 = w.centroid().unwrap();
    // hole centered offset px to the right of the arena center
    let hx = 100 + offset;
    let start = w.step_count();
    w.stimuli_mut()
        .push(StimulusEvent {
            start,
            duration: 100_000,
            kind: StimulusKind::Illumination {
                x0: hx - 25,
                y0: 75,
                x1: hx + 25,
                y1: 125,
            },
            magnitude: 0.0,
        })
        .unwrap();
    for s in 0..1500u64 {
        w.scheduler_step();
        if s % 250 == 249 {
            let c = w.centroid().unwrap();
            println!(
                "step +{:4}: centroid ({:6.1},{:6.1}) moved ({:+6.1},{:+6.1}) mask_active {}",
                s + 1,
                c.x,
                c.y,
                c.x - c0.x,
                c.y - c0.y,
                w.illumination().active
            );
        }
    }
}
