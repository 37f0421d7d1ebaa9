//! Integrates the point-mass model open loop and prints the trajectory:
//! first with neutral controls from the standard reset attitude (the red
//! aircraft's behavior in the attack task), then held at level trim.
//!
//!     cargo run --release --example dynamics_rollout

use aircombat::flight_dynamics::{
    check_limits, step, AircraftParams, ControlRates, UcavState,
};

fn fly(label: &str, mut state: UcavState, params: &AircraftParams, steps: usize) {
    println!("--- {label} ---");
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "t[s]", "h[m]", "v[m/s]", "gamma", "alpha", "n"
    );
    for i in 1..=steps {
        state = step(&state, ControlRates::default(), params);
        let status = check_limits(&state, params);
        if i % 50 == 0 || status.overloaded {
            let (n, _) =
                aircombat::flight_dynamics::load_and_pressure(state.alpha, state.v, params);
            println!(
                "{:>6.1} {:>9.1} {:>9.1} {:>9.3} {:>9.3} {:>9.2}",
                i as f64 * params.dt,
                state.altitude(),
                state.v,
                state.gamma,
                state.alpha,
                n
            );
        }
        if status.overloaded {
            println!("overloaded at step {i}: {:?}", status.reasons);
            return;
        }
    }
    println!("still inside limits after {steps} steps");
}

fn main() {
    let params = AircraftParams::default();
    let start = UcavState::level(0.0, 0.0, 5000.0, 150.0, 0.0);

    fly("neutral controls (alpha = 0)", start, &params, 2000);

    let mut trimmed = start;
    trimmed.alpha = params.level_trim_alpha(start.v);
    println!();
    fly(
        &format!(
            "level trim (alpha = {:.2} deg)",
            trimmed.alpha.to_degrees()
        ),
        trimmed,
        &params,
        2000,
    );
}
