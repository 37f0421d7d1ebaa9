//! Drives the blend-weight schedule with a synthetic gradient-magnitude
//! stream: noisy decay (no advance while the slope is steep) flattening into
//! plateaus (advance on every refilled buffer).
//!
//!     cargo run --release --example homotopy_schedule

use aircombat::homotopy::{fit_slope, HomotopySchedule, ScheduleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let cfg = ScheduleConfig {
        big_n: 10,
        big_m: 50,
        epsilon: 1e-3,
    };
    let mut schedule = HomotopySchedule::new(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    println!("decaying stream: slope stays above the threshold");
    for step in 0..200 {
        let value = 2.0 * (-0.01 * step as f64).exp() + 1e-4 * rng.random_range(-1.0..1.0);
        schedule.record(value).unwrap();
        if schedule.maybe_advance() {
            println!("  advanced at step {step} (unexpected)");
        }
    }
    println!("  q still {:.2} after 200 steep-slope samples", schedule.q());

    println!("plateau stream: every refilled buffer advances");
    let mut step = 0;
    while schedule.q() > 0.0 {
        let value = 0.05 + 1e-5 * rng.random_range(-1.0..1.0);
        schedule.record(value).unwrap();
        if schedule.maybe_advance() {
            println!("  step {step:>4}: advanced to q = {:.2} (n = {})", schedule.q(), schedule.n());
        }
        step += 1;
    }
    println!("terminal: q = {} after {} advances", schedule.q(), schedule.n());

    let ramp: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
    println!("ols slope of a 0.1-ramp: {:.6}", fit_slope(&ramp).unwrap());
}
