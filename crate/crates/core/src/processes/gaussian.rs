//! Signs of a linear Gaussian factor: `Y_v = Σ_w α_{dist(v,w)} Z_w` with
//! i.i.d. standard normal `Z`, and `X_v = sign(Y_v)`.
//!
//! With `α_0 = 0` and `α_j = j^{-1/2-ε} (d-1)^{-j/2}`, the covariance of
//! `Y_u`, `Y_v` at distance `k` is a sum over vertex classes: a vertex whose
//! projection onto the `u`-`v` path sits at position `j` and which is `n`
//! steps off the path is at distances `a = j + n` and `b = k - j + n`.

use rand_distr::{Distribution as _, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::measurement::{Context, ProcessMeasurement};
use crate::error::{Error, Result};
use crate::information::{
    binary_symmetric_mi, correlation_of_functions, JointDistribution, MeasuredQuantity, PairSample,
    Provenance, DEFAULT_RESAMPLES,
};
use crate::rng::{chunks, stream, Purpose};
use crate::tree::{dist, vertex_at_distance, BallRegion, DEFAULT_BALL_BUDGET};
use crate::words::{Signature, Word};

pub const DEFAULT_TAIL_CUTOFF: usize = 100_000;
/// Largest accepted ratio of the truncation remainder to the truncated value.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1.0;

const REPLICA_CHUNK: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSignSpec {
    pub d: u32,
    pub eps: f64,
    /// `D`: coefficients beyond this distance are dropped.
    pub truncation: usize,
    /// The tail `D < max(a, b)` is summed explicitly for offsets up to this
    /// value and bounded analytically beyond it.
    pub tail_cutoff: usize,
    pub tail_tolerance: f64,
}

impl GaussianSignSpec {
    pub fn new(d: u32, eps: f64, truncation: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidInput(format!("degree {d} < 3")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidInput(format!("eps = {eps} must be positive")));
        }
        if truncation == 0 {
            return Err(Error::InvalidInput("truncation radius must be positive".into()));
        }
        Ok(Self {
            d,
            eps,
            truncation,
            tail_cutoff: DEFAULT_TAIL_CUTOFF.max(truncation),
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        })
    }

    pub fn alpha(&self, j: usize) -> f64 {
        if j == 0 || j > self.truncation {
            return 0.0;
        }
        let j = j as f64;
        j.powf(-0.5 - self.eps) * (self.d as f64 - 1.0).powf(-j / 2.0)
    }
}

/// `cov(Y_u, Y_v)` of the truncated field and the distance to the full one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovSeries {
    pub k: usize,
    /// Exact covariance of the field truncated at `D`.
    pub truncated: f64,
    /// Terms with `max(a, b) > D` and offset at most the tail cutoff.
    pub explicit_tail: f64,
    /// Bound on all remaining terms.
    pub tail_bound: f64,
}

impl CovSeries {
    /// `truncated + explicit_tail`, the best point value for the full field.
    pub fn value(&self) -> f64 {
        self.truncated + self.explicit_tail
    }

    /// `full - truncated` lies in `[explicit_tail, remainder]`.
    pub fn remainder(&self) -> f64 {
        self.explicit_tail + self.tail_bound
    }
}

/// Per-level sums: `levels[m]` collects the terms with `max(a, b) = m`.
fn level_sums(spec: &GaussianSignSpec, k: usize) -> (Vec<f64>, f64) {
    let d = spec.d as f64;
    let power = -0.5 - spec.eps;
    let cutoff = spec.tail_cutoff;
    let mut levels = vec![0.0; cutoff + k + 1];
    let analytic = (cutoff as f64).powf(-2.0 * spec.eps) / (2.0 * spec.eps);
    if k == 0 {
        let c = d / (d - 1.0);
        for (n, level) in levels.iter_mut().enumerate().take(cutoff + 1).skip(1) {
            *level = c * (n as f64).powf(2.0 * power);
        }
        return (levels, c * analytic);
    }
    let scale = (d - 1.0).powf(-(k as f64) / 2.0);
    let interior = (d - 2.0) / (d - 1.0);
    let mut bound = 0.0;
    for j in 0..=k {
        let endpoint = j == 0 || j == k;
        let off_path = if endpoint { scale } else { interior * scale };
        bound += off_path * analytic;
        for n in 0..=cutoff {
            let (a, b) = (j + n, k - j + n);
            if a == 0 || b == 0 {
                continue;
            }
            let weight = if n == 0 { scale } else { off_path };
            levels[a.max(b)] += weight * ((a * b) as f64).powf(power);
        }
    }
    (levels, bound)
}

/// The covariance series at distance `k`. Fails when the remainder exceeds
/// `tail_tolerance` times the truncated value, naming a sufficient `D`.
pub fn gaussian_cov(spec: &GaussianSignSpec, k: usize) -> Result<CovSeries> {
    if spec.tail_cutoff < spec.truncation {
        return Err(Error::InvalidInput("tail cutoff must be at least the truncation radius".into()));
    }
    let (levels, tail_bound) = level_sums(spec, k);
    let d_max = spec.truncation.min(levels.len() - 1);
    let truncated: f64 = levels[..=d_max].iter().sum();
    let explicit_tail: f64 = levels[d_max + 1..].iter().sum();
    let series = CovSeries {
        k,
        truncated,
        explicit_tail,
        tail_bound,
    };
    if series.remainder() > spec.tail_tolerance * truncated {
        let mut acc = truncated;
        let mut rest = explicit_tail;
        let mut required = spec.tail_cutoff;
        for (m, level) in levels.iter().enumerate().skip(d_max + 1) {
            acc += level;
            rest -= level;
            if rest + tail_bound <= spec.tail_tolerance * acc {
                required = m;
                break;
            }
        }
        return Err(Error::TruncationTail {
            given: spec.truncation,
            required,
            tail: series.remainder(),
            tolerance: spec.tail_tolerance * truncated,
        });
    }
    Ok(series)
}

/// `corr(sign W, sign W')` for a centered Gaussian pair with correlation
/// `ρ`: `(2/π) arcsin ρ`.
pub fn sign_corr(rho: f64) -> Result<f64> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::InvalidInput(format!("correlation {rho} outside [-1, 1]")));
    }
    Ok(std::f64::consts::FRAC_2_PI * rho.asin())
}

/// Mutual information of two `±1` signs with correlation `c`.
fn sign_mi(c: f64) -> Result<f64> {
    binary_symmetric_mi(((1.0 + c) / 2.0).clamp(0.0, 1.0))
}

/// Closed-form and sampled measurements at one distance.
#[derive(Debug, Clone, Serialize)]
pub struct GaussianSignReport {
    pub k: usize,
    /// Correlation of `Y_u`, `Y_v` for the truncated field.
    pub rho_truncated: f64,
    /// Point value and enclosing interval for the full field.
    pub rho: f64,
    pub rho_interval: (f64, f64),
    pub corr: f64,
    pub corr_interval: (f64, f64),
    pub mi: f64,
    pub mi_interval: (f64, f64),
    /// Largest gap between the truncated field and any value in the
    /// full-field interval, in correlation and in MI units.
    pub corr_remainder: f64,
    pub mi_remainder: f64,
    pub closed: ProcessMeasurement,
    pub monte_carlo: Option<ProcessMeasurement>,
    /// Signed correlation of the sampled signs.
    pub mc_corr: Option<MeasuredQuantity>,
}

impl GaussianSignReport {
    pub fn corr_truncated(&self) -> f64 {
        sign_corr(self.rho_truncated).expect("a correlation")
    }

    /// Sampled correlation and MI agree with the full-field closed form
    /// within three standard errors plus the truncation remainder.
    pub fn agrees(&self) -> Option<bool> {
        let mc = self.monte_carlo.as_ref()?;
        let c = self.mc_corr?;
        let corr_ok = (c.value - self.corr).abs() <= 3.0 * c.stderr + self.corr_remainder;
        let mi_ok = (mc.mi.value - self.mi).abs() <= 3.0 * mc.mi.stderr + self.mi_remainder;
        Some(corr_ok && mi_ok)
    }

    /// As [`Self::agrees`] against the truncated field, with no remainder.
    pub fn agrees_truncated(&self) -> Option<bool> {
        let mc = self.monte_carlo.as_ref()?;
        let c = self.mc_corr?;
        let ct = self.corr_truncated();
        let mt = sign_mi(ct).ok()?;
        Some(
            (c.value - ct).abs() <= 3.0 * c.stderr
                && (mc.mi.value - mt).abs() <= 3.0 * mc.mi.stderr,
        )
    }
}

fn signs_joint(q: f64, provenance: Provenance) -> Result<JointDistribution> {
    Ok(JointDistribution::symmetric_binary(q)?.with_provenance(provenance))
}

/// Closed form at distance `k`, plus `samples` Monte Carlo replicas of the
/// truncated field when `samples > 0`.
pub fn gaussian_sign_measure(
    spec: &GaussianSignSpec,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<GaussianSignReport> {
    let var = gaussian_cov(spec, 0)?;
    let cov = gaussian_cov(spec, k)?;
    let rho_truncated = (cov.truncated / var.truncated).min(1.0);
    let rho = (cov.value() / var.value()).min(1.0);
    let rho_interval = (
        (cov.value() / (var.value() + var.tail_bound)).min(1.0),
        ((cov.value() + cov.tail_bound) / var.value()).min(1.0),
    );
    let corr = sign_corr(rho)?;
    let corr_interval = (sign_corr(rho_interval.0)?, sign_corr(rho_interval.1)?);
    let mi = sign_mi(corr)?;
    let mi_interval = (sign_mi(corr_interval.0)?, sign_mi(corr_interval.1)?);
    let corr_t = sign_corr(rho_truncated)?;
    let mi_t = sign_mi(corr_t)?;
    let corr_remainder = corr_interval.1.max(corr_t) - corr_interval.0.min(corr_t);
    let mi_remainder = mi_interval.1.max(mi_t) - mi_interval.0.min(mi_t);

    let cx = || Context {
        process: "gaussian-sign",
        d: spec.d,
        k,
        radius: spec.truncation,
    };
    let closed = ProcessMeasurement::from_joint(cx(), signs_joint((1.0 + corr) / 2.0, Provenance::ClosedForm)?)?;
    let (monte_carlo, mc_corr) = if samples > 0 {
        let sample = sample_signs(spec, k, samples, seed)?;
        let m = ProcessMeasurement::from_sample(cx(), &sample, DEFAULT_RESAMPLES, seed)?;
        let signs = [-1.0, 1.0];
        let c = sample.bootstrap(DEFAULT_RESAMPLES, |j| correlation_of_functions(j, &signs, &signs))?;
        (Some(m), Some(MeasuredQuantity::from(c)))
    } else {
        (None, None)
    };
    Ok(GaussianSignReport {
        k,
        rho_truncated,
        rho,
        rho_interval,
        corr,
        corr_interval,
        mi,
        mi_interval,
        corr_remainder,
        mi_remainder,
        closed,
        monte_carlo,
        mc_corr,
    })
}

/// Sign pairs of the truncated field; index 0 is `-1`, and `sign(0) = +1`.
pub fn sample_signs(spec: &GaussianSignSpec, k: usize, samples: u64, seed: u64) -> Result<PairSample> {
    let u = Word::identity(Signature::involutions(spec.d)?);
    let v = vertex_at_distance(spec.d, k)?;
    let region = BallRegion::union(
        &[(u.clone(), spec.truncation), (v.clone(), spec.truncation)],
        DEFAULT_BALL_BUDGET,
    )?;
    let weights: Vec<(f64, f64)> = region
        .vertices()
        .iter()
        .map(|w| Ok((spec.alpha(dist(&u, w)?), spec.alpha(dist(&v, w)?))))
        .collect::<Result<_>>()?;
    let parts: Vec<Vec<(u32, u32)>> = chunks(samples, REPLICA_CHUNK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(start, end)| {
            (start..end)
                .map(|i| {
                    let mut rng = stream(seed, Purpose::Replica, i);
                    let (mut yu, mut yv) = (0.0, 0.0);
                    for &(au, av) in &weights {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        yu += au * z;
                        yv += av * z;
                    }
                    (u32::from(yu >= 0.0), u32::from(yv >= 0.0))
                })
                .collect()
        })
        .collect();
    PairSample::new(parts.concat(), 2, 2, seed)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidInput("need two or more positive points".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
