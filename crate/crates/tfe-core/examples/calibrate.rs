//! Regenerate the frozen calibration constants.
//!
//! Runs the seeded calibration corpus, prints the observed maximum ratio per
//! calibrated estimate and the constant (1.5× maximum) to paste into
//! `src/inequalities/calibration.rs`.
//!
//! ```text
//! cargo run --release -p tfe-core --example calibrate [seed] [count] [n]
//! ```

use tfe_core::inequalities::calibration::{
    observed_maxima, CALIBRATION_COUNT, CALIBRATION_GRID, CALIBRATION_MARGIN, CALIBRATION_SEED,
};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(CALIBRATION_SEED);
    let count = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(CALIBRATION_COUNT);
    let n = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(CALIBRATION_GRID);

    eprintln!("calibrating over {count} samples (seed {seed}, n = {n}) ...");
    let maxima = observed_maxima(seed, count, n).expect("calibration corpus failed");

    println!("// Values produced by examples/calibrate.rs (seed {seed}, {count} samples,");
    println!("// n = {n}); each is 1.5x the observed corpus maximum.");
    for (key, max) in &maxima {
        let constant = CALIBRATION_MARGIN * max;
        println!(
            "pub const {}: f64 = {:.6}; // observed max {:.6}",
            key.to_uppercase(),
            constant,
            max
        );
    }
}
