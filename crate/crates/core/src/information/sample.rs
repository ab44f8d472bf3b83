use rand::Rng;
use rayon::prelude::*;

use super::{mi_value, normalized_value, JointDistribution, MeasuredQuantity, Provenance};
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

pub const DEFAULT_RESAMPLES: usize = 200;

/// A point estimate with its bootstrap standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl From<Estimate> for MeasuredQuantity {
    fn from(e: Estimate) -> Self {
        MeasuredQuantity::plug_in(e.value, e.stderr)
    }
}

/// Observed pairs of symbol indices, kept so statistics can be bootstrapped.
#[derive(Debug, Clone)]
pub struct PairSample {
    pairs: Vec<(u32, u32)>,
    rows: usize,
    cols: usize,
    seed: u64,
}

impl PairSample {
    pub fn new(pairs: Vec<(u32, u32)>, rows: usize, cols: usize, seed: u64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidInput("empty sample".into()));
        }
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x as usize >= rows || y as usize >= cols) {
            return Err(Error::InvalidInput(format!("pair ({x}, {y}) outside {rows}x{cols}")));
        }
        Ok(Self { pairs, rows, cols, seed })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    fn counts<'a>(&self, pairs: impl Iterator<Item = &'a (u32, u32)>) -> Vec<f64> {
        let mut c = vec![0.0; self.rows * self.cols];
        for &(x, y) in pairs {
            c[x as usize * self.cols + y as usize] += 1.0;
        }
        c
    }

    /// The plug-in frequency matrix.
    pub fn joint(&self) -> JointDistribution {
        let provenance = Provenance::Empirical {
            samples: self.pairs.len() as u64,
            seed: self.seed,
        };
        JointDistribution::from_weights(self.rows, self.cols, &self.counts(self.pairs.iter()), provenance)
            .expect("a nonempty sample has positive counts")
    }

    /// Applies `stat` to the plug-in joint and to `resamples` bootstrap
    /// resamples; the standard error is the spread of the resampled values.
    /// Resamples whose statistic is undefined are skipped.
    pub fn bootstrap<F>(&self, resamples: usize, stat: F) -> Result<Estimate>
    where
        F: Fn(&JointDistribution) -> Result<f64> + Sync,
    {
        let value = stat(&self.joint())?;
        let mut out = self.bootstrap_many(resamples, |j| vec![stat(j).unwrap_or(f64::NAN)]);
        out[0].value = value;
        Ok(out[0])
    }

    /// Several statistics over one set of resamples. A `NaN` marks an
    /// undefined value and is left out of that statistic's spread.
    pub fn bootstrap_many<F>(&self, resamples: usize, stats: F) -> Vec<Estimate>
    where
        F: Fn(&JointDistribution) -> Vec<f64> + Sync,
    {
        let point = stats(&self.joint());
        let n = self.pairs.len();
        let draws: Vec<Vec<f64>> = (0..resamples)
            .into_par_iter()
            .map(|b| {
                let mut rng = stream(self.seed, Purpose::Bootstrap, b as u64);
                let picks = (0..n).map(|_| &self.pairs[rng.random_range(0..n)]);
                let w = self.counts(picks);
                let j = JointDistribution::from_weights(self.rows, self.cols, &w, Provenance::Exact)
                    .expect("resamples are nonempty");
                stats(&j)
            })
            .collect();
        point
            .iter()
            .enumerate()
            .map(|(i, &value)| {
                let column: Vec<f64> = draws.iter().map(|d| d[i]).filter(|v| v.is_finite()).collect();
                Estimate {
                    value,
                    stderr: std_dev(&column),
                }
            })
            .collect()
    }

    pub fn mutual_information(&self, resamples: usize) -> Result<Estimate> {
        self.bootstrap(resamples, |j| Ok(mi_value(j)))
    }

    pub fn normalized_mi(&self, resamples: usize) -> Result<Estimate> {
        self.bootstrap(resamples, normalized_value)
    }
}

pub(crate) fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

/// Plug-in joint of a sample over alphabets of the given sizes.
pub fn empirical_joint(pairs: &[(u32, u32)], rows: usize, cols: usize, seed: u64) -> Result<JointDistribution> {
    Ok(PairSample::new(pairs.to_vec(), rows, cols, seed)?.joint())
}
