//! Rayon drivers. Each returns exactly what its serial core counterpart
//! returns; only the scheduling differs.

use boxcar_core::risk::{check_monotone, risk_at, SweepRecord};
use boxcar_core::sim::{should_stop, summarize, Experiment, MonteCarlo, CHECKPOINT, MIN_REPS};
use boxcar_core::{Result, SmoothnessClass, Spectrum, Tabulated};
use rayon::prelude::*;

/// Risk at every `ε`, in input order, then the monotonicity check.
pub fn sweep<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: &[f64],
    rtol: f64,
) -> Result<Vec<SweepRecord>> {
    let recs = eps
        .par_iter()
        .map(|&e| risk_at(kernel, class, e, rtol).map(|r| SweepRecord::from_result(e, class, &r)))
        .collect::<Result<Vec<_>>>()?;
    check_monotone(&recs)?;
    Ok(recs)
}

/// Repetitions run a checkpoint at a time, so early stopping lands on the
/// same repetition count as the serial loop.
pub fn monte_carlo(exp: &Experiment, reps: usize, seed: u64) -> MonteCarlo {
    let mut losses: Vec<f64> = Vec::with_capacity(reps);
    while losses.len() < reps {
        let n = losses.len();
        let next = if n < MIN_REPS { MIN_REPS } else { n + CHECKPOINT }.min(reps);
        let chunk: Vec<f64> = (n..next).into_par_iter().map(|rep| exp.loss(seed, rep as u64)).collect();
        losses.extend(chunk);
        if should_stop(&losses) {
            break;
        }
    }
    summarize(&losses)
}

/// `r_1..r_{k_max}` computed in parallel.
pub fn tabulate<S: Spectrum + Clone>(kernel: &S, k_max: u64) -> Result<Tabulated<S>> {
    let table = (1..=k_max)
        .into_par_iter()
        .map(|k| kernel.eigenvalue(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tabulated::from_table(kernel.clone(), table))
}
