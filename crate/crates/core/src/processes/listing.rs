//! The ball-listing factor: with a coloring in which vertices up to distance
//! `L = 2R + k` apart get distinct colors, and i.i.d. uniform labels in
//! `{1..N}`, each vertex outputs the (color, label) pairs of its radius-`R`
//! ball ordered by color.
//!
//! Given the color sets `K_u`, `K_v` of the two balls, the shared labels are
//! exactly those of `B_R(u) ∩ B_R(v)`, so
//! `I(X_u; X_v) = I(K_u; K_v) + |B_R(u) ∩ B_R(v)| log N` and
//! `H(X_v) = H(K_v) + |B_R(v)| log N`. Only the color terms need sampling.

use std::collections::HashMap;

use rand::RngCore;
use rayon::prelude::*;

use super::graph::FiniteGraph;
use super::local::{sparse_coloring_on_balls, DEFAULT_ROUND_CAP};
use super::measurement::{MeasurementMethod, ProcessMeasurement, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::information::{entropy, mi_value, MeasuredQuantity, PairSample, DEFAULT_RESAMPLES};
use crate::rng::{stream, Purpose};
use crate::tree::{dist, listing_ratio, vertex_at_distance, BallRegion, DEFAULT_BALL_BUDGET};
use crate::words::{Signature, Word};

/// The `N → ∞` limit `|B_R(u) ∩ B_R(v)| / |B_R(v)|`.
pub fn listing_normalized_mi(d: u32, radius: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("distance must be at least 1".into()));
    }
    listing_ratio(d, radius, k)
}

/// A finite piece of the tree around `u` and `v` on which colorings are
/// sampled, with the two radius-`R` balls located in it.
pub struct ListingSetup {
    d: u32,
    radius: usize,
    k: usize,
    separation: usize,
    graph: FiniteGraph,
    balls: Vec<Vec<usize>>,
    ball_u: Vec<usize>,
    ball_v: Vec<usize>,
    shared: usize,
}

impl ListingSetup {
    /// Colorings live on `B_{R+L}(u) ∪ B_{R+L}(v)`.
    pub fn new(d: u32, radius: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("distance must be at least 1".into()));
        }
        let separation = 2 * radius + k;
        let u = Word::identity(Signature::involutions(d)?);
        let v = vertex_at_distance(d, k)?;
        let outer = radius + separation;
        let region = BallRegion::union(&[(u.clone(), outer), (v.clone(), outer)], DEFAULT_BALL_BUDGET)?;
        let mut ball_u = Vec::new();
        let mut ball_v = Vec::new();
        for (i, w) in region.vertices().iter().enumerate() {
            if dist(&u, w)? <= radius {
                ball_u.push(i);
            }
            if dist(&v, w)? <= radius {
                ball_v.push(i);
            }
        }
        let shared = ball_u.iter().filter(|i| ball_v.contains(i)).count();
        let graph = FiniteGraph::from_region(&region);
        let balls = graph.balls(separation);
        Ok(Self {
            d,
            radius,
            k,
            separation,
            graph,
            balls,
            ball_u,
            ball_v,
            shared,
        })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    /// `L = 2R + k`.
    pub fn separation(&self) -> usize {
        self.separation
    }

    /// `|B_R(u) ∩ B_R(v)|`.
    pub fn shared(&self) -> usize {
        self.shared
    }

    /// `samples` independent colorings; coloring `i` uses its own stream.
    pub fn sample_colorings(&self, samples: u64, seed: u64) -> Result<Vec<Vec<u32>>> {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let sub = stream(seed, Purpose::Coloring, i).next_u64();
                Ok(sparse_coloring_on_balls(&self.balls, sub, DEFAULT_ROUND_CAP)?.colors)
            })
            .collect()
    }

    fn color_set(&self, coloring: &[u32], ball: &[usize]) -> Vec<u32> {
        let mut set: Vec<u32> = ball.iter().map(|&i| coloring[i]).collect();
        set.sort_unstable();
        set
    }

    /// The listing measurement at label count `n_labels` from given
    /// colorings of [`Self::graph`].
    pub fn measure(&self, n_labels: u64, colorings: &[Vec<u32>], seed: u64) -> Result<ProcessMeasurement> {
        if n_labels < 1 {
            return Err(Error::InvalidInput("label count must be at least 1".into()));
        }
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut pairs = Vec::with_capacity(colorings.len());
        for c in colorings {
            if c.len() != self.graph.len() {
                return Err(Error::InvalidInput("coloring size does not match the region".into()));
            }
            let (su, sv) = (self.color_set(c, &self.ball_u), self.color_set(c, &self.ball_v));
            let union: Vec<u32> = {
                let mut all: Vec<u32> = self
                    .ball_u
                    .iter()
                    .chain(&self.ball_v)
                    .map(|&i| c[i])
                    .collect();
                all.sort_unstable();
                all
            };
            let distinct = union.windows(2).filter(|w| w[0] != w[1]).count() + 1;
            if distinct != self.ball_u.len() + self.ball_v.len() - self.shared {
                return Err(Error::InvalidInput(format!(
                    "coloring repeats a color within distance {}",
                    self.separation
                )));
            }
            let mut id = |s: Vec<u32>| {
                let next = ids.len() as u32;
                *ids.entry(s).or_insert(next)
            };
            let x = id(su);
            let y = id(sv);
            pairs.push((x, y));
        }
        let m = ids.len();
        let sample = PairSample::new(pairs, m, m, seed)?;
        let log_n = (n_labels as f64).ln();
        let shared = self.shared as f64 * log_n;
        let own = self.ball_v.len() as f64 * log_n;
        let est = sample.bootstrap_many(DEFAULT_RESAMPLES, |j| {
            let i = mi_value(j) + shared;
            let h = entropy(&j.marginal_y()).value + own;
            vec![h, i, if h > 0.0 { i / h } else { f64::NAN }]
        });
        if !(est[0].value > 0.0) {
            return Err(Error::Undefined {
                quantity: "normalized mutual information",
                reason: "the listing output is constant".into(),
            });
        }
        let outputs = (n_labels as usize)
            .saturating_pow(self.ball_v.len() as u32)
            .saturating_mul(m);
        let measurement = ProcessMeasurement {
            schema: SCHEMA_VERSION,
            process: "listing".into(),
            d: self.d,
            k: self.k,
            radius: self.radius,
            method: MeasurementMethod::MonteCarlo,
            samples: colorings.len() as u64,
            seed: Some(seed),
            outputs,
            entropy: MeasuredQuantity::from(est[0]),
            mi: MeasuredQuantity::from(est[1]),
            normalized: MeasuredQuantity::from(est[2]),
            correlation: None,
            verdicts: Vec::new(),
            joint: None,
        };
        measurement.with_verdicts()
    }
}

/// Finite-`N` listing measurement with colorings sampled on a tree piece.
pub fn listing_finite_n_mi(
    d: u32,
    radius: usize,
    k: usize,
    n_labels: u64,
    samples: u64,
    seed: u64,
) -> Result<ProcessMeasurement> {
    let setup = ListingSetup::new(d, radius, k)?;
    let colorings = setup.sample_colorings(samples, seed)?;
    setup.measure(n_labels, &colorings, seed)
}
