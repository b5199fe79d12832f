use serde::{Deserialize, Serialize};

use crate::lattice::Distribution;
use crate::{Result, WalkError};

/// Mean and standard deviation of the walker position after a step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadStats {
    pub step_index: usize,
    pub mean: f64,
    pub stddev: f64,
}

/// Moments of `dist` conditioned on survival (divided by its mass).
pub fn spread_stats(dist: &Distribution, step_index: usize) -> Result<SpreadStats> {
    let mass = dist.mass();
    if mass <= 0.0 {
        return Err(WalkError::ZeroMass);
    }
    let mean = dist.iter().map(|(x, p)| x as f64 * p).sum::<f64>() / mass;
    // Central second moment avoids cancellation for offset walks.
    let var = dist
        .iter()
        .map(|(x, p)| (x as f64 - mean).powi(2) * p)
        .sum::<f64>()
        / mass;
    Ok(SpreadStats {
        step_index,
        mean,
        stddev: var.max(0.0).sqrt(),
    })
}

/// Least-squares slope of `ln(stddev)` against `ln(step_index)`: about 1 for
/// ballistic spreading and 1/2 for diffusive spreading.
pub fn spreading_exponent(stats: &[SpreadStats]) -> Result<f64> {
    if stats.len() < 3 {
        return Err(WalkError::InvalidInput(format!(
            "spreading exponent needs at least 3 points, got {}",
            stats.len()
        )));
    }
    if let Some(s) = stats
        .iter()
        .find(|s| s.step_index == 0 || s.stddev.is_nan() || s.stddev <= 0.0)
    {
        return Err(WalkError::InvalidInput(format!(
            "step {} has stddev {}; need step >= 1 and stddev > 0",
            s.step_index, s.stddev
        )));
    }
    let xs: Vec<f64> = stats.iter().map(|s| (s.step_index as f64).ln()).collect();
    let ys: Vec<f64> = stats.iter().map(|s| s.stddev.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(WalkError::InvalidInput(
            "spreading exponent needs at least two distinct step indices".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// `d = 1/2 sum_j |p(j) - r(j)|` over the union of supports.
pub fn l1_distance(p: &Distribution, r: &Distribution) -> Result<f64> {
    p.require_normalized()?;
    r.require_normalized()?;
    let total: f64 = p
        .union_support(r)
        .into_iter()
        .map(|x| (p.get(x) - r.get(x)).abs())
        .sum();
    Ok((0.5 * total).min(1.0))
}

/// Classical unbiased walk after `n` steps from the origin:
/// `p(n - 2k) = C(n, k) / 2^n`.
///
/// Built by repeated halving of Pascal rows, which stays finite for any `n`.
pub fn binomial_reference(n: usize) -> Distribution {
    let mut row = vec![1.0_f64];
    for _ in 0..n {
        let mut next = vec![0.0; row.len() + 1];
        for (k, &p) in row.iter().enumerate() {
            next[k] += 0.5 * p;
            next[k + 1] += 0.5 * p;
        }
        row = next;
    }
    // row[k] is the weight of k right-moves, position 2k - n.
    let n = n as i64;
    Distribution::from_pairs(
        row.into_iter()
            .enumerate()
            .map(|(k, p)| (2 * k as i64 - n, p)),
    )
    .expect("binomial weights are finite and non-negative")
}
