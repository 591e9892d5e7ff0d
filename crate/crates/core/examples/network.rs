// Temporary probe: does the low-density regime form transport networks?
use plasmo::world::{World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let coverage: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.08);
    let steps: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let mut wc = WorldConfig::new(200, 200);
    wc.damping = 0.9;
    let mut w = World::new(wc, 9).unwrap();
    let n = (200.0 * 200.0 * coverage) as usize;
    w.seed_window(n, 198).unwrap();
    for _ in 0..steps {
        w.scheduler_step();
    }
    // character rendering, 2x2 cells per char
    let mut grid = vec![0u8; 100 * 100];
    for p in w.particles() {
        let (x, y) = p.pos.cell();
        grid[(y / 2) as usize * 100 + (x / 2) as usize] += 1;
    }
    for row in 0..50 {
        let line: String = (0..100)
            .map(|c| match grid[row * 2 * 100 + c] {
                0 => ' ',
                1 => '.',
                2 => 'o',
                _ => '#',
            })
            .collect();
        println!("{line}");
    }
    // lane statistic: particles with 2-4 occupied neighbors in 3x3
    let lane = w
        .particles()
        .iter()
        .filter(|p| {
            let c = w.occupancy().count_window(p.pos.cell(), 1);
            (3..=5).contains(&c)
        })
        .count();
    println!(
        "pop {} lane-like fraction {:.2}",
        w.population(),
        lane as f64 / w.population() as f64
    );
}
