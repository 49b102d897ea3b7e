//! Deterministic parallel path generation: path `i` always uses the stream
//! block `i`, so output does not depend on the thread count.

use deterministic_bridge::{PathSample, TimeGrid};
use gaussian_core::{PathRng, Result};
use info_process::{euler_simulate_info, EulerInfoRun, EulerOptions, InfoModel};
use random_bridge::RandomBridgeModel;
use rayon::prelude::*;

pub fn exact_paths(
    model: &RandomBridgeModel,
    grid: &TimeGrid,
    n: usize,
    seed: u64,
    until_absorbed: bool,
) -> Vec<PathSample> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = PathRng::new(seed, i as u64);
            if until_absorbed {
                model.sample_path_until_absorbed(grid, &mut rng)
            } else {
                model.sample_path(grid, &mut rng)
            }
        })
        .collect()
}

pub fn euler_paths(
    model: &InfoModel,
    grid: &TimeGrid,
    n: usize,
    seed: u64,
    opts: &EulerOptions,
) -> Result<Vec<EulerInfoRun>> {
    (0..n).into_par_iter().map(|i| euler_simulate_info(model, grid, &mut PathRng::new(seed, i as u64), opts)).collect()
}
