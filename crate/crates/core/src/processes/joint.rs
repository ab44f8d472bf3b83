use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rayon::prelude::*;

use super::measurement::{Context, ProcessMeasurement};
use super::rule::{BallTemplate, BlockFactorRule};
use crate::error::{Error, Result};
use crate::information::{JointDistribution, PairSample, Provenance, DEFAULT_RESAMPLES};
use crate::rng::{chunks, stream, Purpose};
use crate::tree::{vertex_at_distance, BallRegion, DEFAULT_BALL_BUDGET};
use crate::words::{Signature, Word};

/// Default cap on the number of label configurations summed exactly.
pub const DEFAULT_CONFIG_BUDGET: u128 = 1 << 24;

const ENUM_CHUNK: u64 = 1 << 12;
const REPLICA_CHUNK: u64 = 1 << 10;

/// `B_R(u) ∪ B_R(v)` with `dist(u, v) = k`, and the rooted balls read by
/// the rule at `u` and at `v`.
pub struct PairRegion {
    pub region: BallRegion,
    at_u: BallTemplate,
    at_v: BallTemplate,
}

impl PairRegion {
    pub fn new(d: u32, k: usize, radius: usize) -> Result<Self> {
        let u = Word::identity(Signature::involutions(d)?);
        let v = vertex_at_distance(d, k)?;
        let region = BallRegion::union(&[(u.clone(), radius), (v.clone(), radius)], DEFAULT_BALL_BUDGET)?;
        let adj = region.adjacency();
        let iu = region.index_of(&u).expect("center is in its ball");
        let iv = region.index_of(&v).expect("center is in its ball");
        Ok(Self {
            at_u: BallTemplate::new(&adj, iu, radius),
            at_v: BallTemplate::new(&adj, iv, radius),
            region,
        })
    }

    fn outputs(&self, rule: &BlockFactorRule, labels: &[u32]) -> Result<(u32, u32)> {
        Ok((rule.apply(&self.at_u.fill(labels))?, rule.apply(&self.at_v.fill(labels))?))
    }
}

/// Exact law of `(X_u, X_v)` by summing the product measure over every label
/// configuration on `B_R(u) ∪ B_R(v)`.
pub fn exact_joint(rule: &BlockFactorRule, d: u32, k: usize, budget: u128) -> Result<ProcessMeasurement> {
    let pr = PairRegion::new(d, k, rule.radius())?;
    let n = pr.region.len();
    let probs = rule.input().probabilities();
    let base = probs.len() as u128;
    let needed = base.checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "exact enumeration (fall back to Monte Carlo)",
            needed,
            budget,
        });
    }
    let m = rule.outputs().len();
    let partials: Vec<Result<Vec<f64>>> = chunks(needed as u64, ENUM_CHUNK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(start, end)| {
            let mut acc = vec![0.0; m * m];
            let mut labels = vec![0u32; n];
            for config in start..end {
                let mut c = config;
                let mut p = 1.0;
                for slot in labels.iter_mut() {
                    *slot = (c % base as u64) as u32;
                    c /= base as u64;
                    p *= probs[*slot as usize];
                }
                if p == 0.0 {
                    continue;
                }
                let (x, y) = pr.outputs(rule, &labels)?;
                acc[x as usize * m + y as usize] += p;
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![0.0; m * m];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part?) {
            *t += p;
        }
    }
    let joint = JointDistribution::from_weights(m, m, &total, Provenance::Exact)?
        .with_alphabets(rule.outputs().to_vec(), rule.outputs().to_vec())?;
    ProcessMeasurement::from_joint(
        Context {
            process: rule.name(),
            d,
            k,
            radius: rule.radius(),
        },
        joint,
    )
}

/// Sampled `(X_u, X_v)` pairs: replica `i` draws fresh labels on the region
/// from its own stream.
pub fn sample_pairs(rule: &BlockFactorRule, d: u32, k: usize, samples: u64, seed: u64) -> Result<PairSample> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let pr = PairRegion::new(d, k, rule.radius())?;
    let n = pr.region.len();
    let law = WeightedIndex::new(rule.input().probabilities())
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let parts: Vec<Result<Vec<(u32, u32)>>> = chunks(samples, REPLICA_CHUNK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(start, end)| {
            let mut labels = vec![0u32; n];
            let mut out = Vec::with_capacity((end - start) as usize);
            for i in start..end {
                let mut rng = stream(seed, Purpose::Replica, i);
                for slot in labels.iter_mut() {
                    *slot = law.sample(&mut rng) as u32;
                }
                out.push(pr.outputs(rule, &labels)?);
            }
            Ok(out)
        })
        .collect();
    let mut pairs = Vec::with_capacity(samples as usize);
    for p in parts {
        pairs.extend(p?);
    }
    let m = rule.outputs().len();
    PairSample::new(pairs, m, m, seed)
}

/// Monte Carlo estimate of the law of `(X_u, X_v)` with bootstrap errors.
pub fn mc_joint(rule: &BlockFactorRule, d: u32, k: usize, samples: u64, seed: u64) -> Result<ProcessMeasurement> {
    let sample = sample_pairs(rule, d, k, samples, seed)?;
    let mut m = ProcessMeasurement::from_sample(
        Context {
            process: rule.name(),
            d,
            k,
            radius: rule.radius(),
        },
        &sample,
        DEFAULT_RESAMPLES,
        seed,
    )?;
    if let Some(j) = m.joint.take() {
        m.joint = Some(j.with_alphabets(rule.outputs().to_vec(), rule.outputs().to_vec())?);
    }
    Ok(m)
}

/// Exact when the configuration count fits the budget, sampled otherwise.
pub fn measure_rule(
    rule: &BlockFactorRule,
    d: u32,
    k: usize,
    budget: u128,
    samples: u64,
    seed: u64,
) -> Result<ProcessMeasurement> {
    match exact_joint(rule, d, k, budget) {
        Err(Error::BudgetExceeded { .. }) => mc_joint(rule, d, k, samples, seed),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{beta_k, thm2_bound};

    /// Majority at `d = 3`, `R = 1` by plain nested loops over the six
    /// labels of two adjacent stars: `u`, `v`, two more leaves at each.
    fn majority_edge_oracle() -> [[f64; 2]; 2] {
        let maj = |root: u32, others: [u32; 3]| {
            let ones = root + others.iter().sum::<u32>();
            match ones.cmp(&2) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => root,
            }
        };
        let mut j = [[0.0; 2]; 2];
        for c in 0..64u32 {
            let b = |i: u32| (c >> i) & 1;
            let (u, v) = (b(0), b(1));
            let xu = maj(u, [v, b(2), b(3)]);
            let xv = maj(v, [u, b(4), b(5)]);
            j[xu as usize][xv as usize] += 1.0 / 64.0;
        }
        j
    }

    #[test]
    fn majority_edge_matches_nested_loops() {
        let m = exact_joint(&BlockFactorRule::majority(1).unwrap(), 3, 1, DEFAULT_CONFIG_BUDGET).unwrap();
        let j = m.joint.as_ref().unwrap();
        let oracle = majority_edge_oracle();
        for x in 0..2 {
            for y in 0..2 {
                assert!((j.get(x, y) - oracle[x][y]).abs() < 1e-15);
            }
        }
        assert!(m.all_pass());
        m.check_exchangeable().unwrap();
    }

    #[test]
    fn identity_and_parity_are_independent() {
        for k in 1..=4 {
            let m = exact_joint(&BlockFactorRule::identity(2).unwrap(), 3, k, DEFAULT_CONFIG_BUDGET).unwrap();
            assert!(m.mi.value.abs() < 1e-15);
        }
        let m = exact_joint(&BlockFactorRule::parity(1).unwrap(), 3, 1, DEFAULT_CONFIG_BUDGET).unwrap();
        assert!(m.mi.value.abs() < 1e-14);
    }

    #[test]
    fn majority_complies_with_zero_slack() {
        let rule = BlockFactorRule::majority(1).unwrap();
        for k in 1..=3 {
            let m = exact_joint(&rule, 3, k, 1 << 14).unwrap();
            assert!(m.normalized.value <= beta_k(3, k).unwrap());
            assert!(m.mi.value <= thm2_bound(3, k, 2).unwrap());
            assert!(m.verdicts.iter().all(|v| v.slack == 0.0 && v.pass));
            m.check_exchangeable().unwrap();
        }
        // beyond 2R the balls are disjoint
        let m = exact_joint(&rule, 3, 3, 1 << 14).unwrap();
        assert!(m.mi.value.abs() < 1e-15);
    }

    #[test]
    fn budget_is_enforced() {
        let err = exact_joint(&BlockFactorRule::majority(2).unwrap(), 3, 1, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let rule = BlockFactorRule::majority(1).unwrap();
        let exact = exact_joint(&rule, 3, 1, DEFAULT_CONFIG_BUDGET).unwrap();
        let mc = mc_joint(&rule, 3, 1, 20_000, 7).unwrap();
        assert!((mc.mi.value - exact.mi.value).abs() <= 3.0 * mc.mi.stderr + 1e-3);
        assert_eq!(mc.samples, 20_000);
        let again = mc_joint(&rule, 3, 1, 20_000, 7).unwrap();
        assert_eq!(mc.to_json(), again.to_json());
    }

    #[test]
    fn identity_monte_carlo_is_near_zero() {
        let m = mc_joint(&BlockFactorRule::identity(2).unwrap(), 3, 2, 10_000, 3).unwrap();
        assert!(m.mi.value <= 3.0 * m.mi.stderr);
    }

    #[test]
    fn fallback_to_sampling() {
        let m = measure_rule(&BlockFactorRule::majority(2).unwrap(), 3, 1, 1000, 500, 1).unwrap();
        assert_eq!(m.samples, 500);
    }
}
