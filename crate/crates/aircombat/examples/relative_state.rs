//! Computes the engagement geometry and the normalized observation vector
//! for a few canned situations.
//!
//!     cargo run --release --example relative_state

use aircombat::combat_geometry::{observe, relative_geometry};
use aircombat::flight_dynamics::{AircraftParams, UcavState};

fn show(label: &str, own: &UcavState, opp: &UcavState) {
    let params = AircraftParams::default();
    let geo = relative_geometry(own, opp).unwrap();
    let obs = observe(own, opp, &params, 10_000.0).unwrap();
    println!("--- {label} ---");
    println!(
        "  ata {:>7.2} deg   aa {:>7.2} deg   d_los {:>8.1} m",
        geo.ata.to_degrees(),
        geo.aa.to_degrees(),
        geo.d_los
    );
    println!(
        "  projections: ata_xoy {:>7.2}  ata_yoz {:>7.2}  aa_xoy {:>7.2}  aa_yoz {:>7.2} (deg)",
        geo.ata_xoy.to_degrees(),
        geo.ata_yoz.to_degrees(),
        geo.aa_xoy.to_degrees(),
        geo.aa_yoz.to_degrees()
    );
    println!("  observation: {:?}", obs.0.map(|v| (v * 1000.0).round() / 1000.0));
}

fn main() {
    let chase_own = UcavState::level(0.0, 0.0, 5000.0, 150.0, 0.0);
    let chase_opp = UcavState::level(1500.0, 0.0, 5000.0, 150.0, 0.0);
    show("tail chase, dead six", &chase_own, &chase_opp);

    let head_on_opp = UcavState::level(4000.0, 0.0, 5000.0, 150.0, std::f64::consts::PI);
    show("head on", &chase_own, &head_on_opp);

    let crossing = UcavState::level(2000.0, 2000.0, 5800.0, 200.0, 1.2);
    show("crossing, above", &chase_own, &crossing);
}
