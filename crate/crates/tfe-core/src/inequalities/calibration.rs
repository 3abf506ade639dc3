//! Frozen calibration constants for the implicit-constant estimates.
//!
//! The estimates carry constants that provably exist but are never
//! quantified. Each entry below is 1.5× the maximum ratio observed over the
//! frozen calibration corpus described by [`CALIBRATION_SEED`],
//! [`CALIBRATION_COUNT`] and [`CALIBRATION_GRID`] — regenerate with
//! `cargo run --release -p tfe-core --example calibrate` after any change to
//! the corpus or the norm evaluation. They are regression bounds for this
//! artifact, not sharp constants.

use std::sync::Arc;

use rayon::prelude::*;

use crate::spectral::Grid;
use crate::Result;

/// Seed of the frozen calibration corpus.
pub const CALIBRATION_SEED: u64 = 20260810;
/// Sample count of the frozen calibration corpus.
pub const CALIBRATION_COUNT: usize = 10_000;
/// Grid size the corpus was evaluated on.
pub const CALIBRATION_GRID: usize = 64;

/// Safety factor applied to the observed maximum ratio.
pub const CALIBRATION_MARGIN: f64 = 1.5;

/// Calibrated constant for a check key. Panics on unknown keys, which would
/// be a programming error, not an input error.
pub fn constant(key: &str) -> f64 {
    match key {
        "gn_sup_c0" => GN_SUP_C0,
        "gn_interp_c" => GN_INTERP_C,
        "l310_316" => L310_316,
        "l310_317" => L310_317,
        "l310_318_p2" => L310_318_P2,
        "l310_318_p4" => L310_318_P4,
        "l310_318_p6" => L310_318_P6,
        "l310_318_pinf" => L310_318_PINF,
        "l310_319" => L310_319,
        "l310_320_p2" => L310_320_P2,
        "l310_320_p4" => L310_320_P4,
        "l310_320_p8" => L310_320_P8,
        "l310_321_e01" => L310_321_E01,
        "l310_321_e05" => L310_321_E05,
        "l310_322_log" => L310_322_LOG,
        "l311_m1" => L311_M1,
        "l311_m2" => L311_M2,
        "l311_m3" => L311_M3,
        _ => panic!("unknown calibration key '{key}'"),
    }
}

// Values produced by examples/calibrate.rs (seed 20260810, 10000 samples,
// n = 64); each is 1.5x the observed corpus maximum.
pub const GN_SUP_C0: f64 = 0.967054; // observed max 0.644703
pub const GN_INTERP_C: f64 = 2.040897; // observed max 1.360598
pub const L310_316: f64 = 1.416947; // observed max 0.944631
pub const L310_317: f64 = 0.025343; // observed max 0.016895 (1/48 at the parabola)
pub const L310_318_P2: f64 = 2.121320; // observed max 1.414214 (= √2, an identity at p = 2)
pub const L310_318_P4: f64 = 1.400351; // observed max 0.933568
pub const L310_318_P6: f64 = 1.293556; // observed max 0.862370
pub const L310_318_PINF: f64 = 1.343453; // observed max 0.895636
pub const L310_319: f64 = 1.566893; // observed max 1.044595
pub const L310_320_P2: f64 = 0.504490; // observed max 0.336326
pub const L310_320_P4: f64 = 0.726324; // observed max 0.484216
pub const L310_320_P8: f64 = 1.036434; // observed max 0.690956
pub const L310_321_E01: f64 = 1.094288; // observed max 0.729525
pub const L310_321_E05: f64 = 0.547644; // observed max 0.365096
pub const L310_322_LOG: f64 = 0.516199; // observed max 0.344133
pub const L311_M1: f64 = 0.671727; // observed max 0.447818
pub const L311_M2: f64 = 0.445986; // observed max 0.297324
pub const L311_M3: f64 = 0.401867; // observed max 0.267911

/// Observed maximum ratio per calibrated key over a seeded corpus.
/// Multiply by [`CALIBRATION_MARGIN`] to obtain shippable constants.
pub fn observed_maxima(seed: u64, count: usize, grid_n: usize) -> Result<Vec<(String, f64)>> {
    let grid: Arc<Grid> = Grid::new(grid_n)?;
    let maxima = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let reports = super::evaluate_sample(&grid, seed, k)?;
            Ok(reports
                .into_iter()
                .filter(|r| r.calibrated)
                .map(|r| (r.key, r.ratio))
                .collect::<Vec<_>>())
        })
        .try_reduce(Vec::new, |mut acc: Vec<(&'static str, f64)>, batch| {
            for (key, ratio) in batch {
                match acc.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, m)) => *m = m.max(ratio),
                    None => acc.push((key, ratio)),
                }
            }
            Ok(acc)
        })?;
    let mut named: Vec<(String, f64)> = maxima
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    named.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(named)
}
