use rand::Rng;
use serde::Serialize;

use super::graph::FiniteGraph;
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

pub const DEFAULT_ROUND_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Undefined,
    One,
    Zero,
}

/// Runs proposal rounds on the candidate vertices until each is either
/// selected or has a selected vertex within distance `L`. Selected vertices
/// are pairwise more than `L` apart.
fn select_sparse(
    balls: &[Vec<usize>],
    candidates: &[bool],
    seed: u64,
    purpose: Purpose,
    phase: u64,
    cap: usize,
) -> Result<(Vec<bool>, usize)> {
    let n = balls.len();
    let mut state: Vec<State> = candidates
        .iter()
        .map(|&c| if c { State::Undefined } else { State::Zero })
        .collect();
    let mut proposing = vec![false; n];
    for round in 0..cap {
        if !state.contains(&State::Undefined) {
            return Ok((state.iter().map(|&s| s == State::One).collect(), round));
        }
        let mut rng = stream(seed, purpose, (phase << 24) | round as u64);
        for v in 0..n {
            proposing[v] = state[v] == State::Undefined && rng.random_bool(0.5);
        }
        for v in 0..n {
            if proposing[v] && balls[v].iter().all(|&w| w == v || !proposing[w]) {
                state[v] = State::One;
            }
        }
        for v in 0..n {
            if state[v] == State::Undefined && balls[v].iter().any(|&w| state[w] == State::One) {
                state[v] = State::Zero;
            }
        }
    }
    Err(Error::RoundCap {
        cap,
        undefined: state.iter().filter(|&&s| s == State::Undefined).count(),
    })
}

/// Output of the sparse-set dynamics: label 1 on a set whose members are
/// more than `L` apart and which meets every ball of radius `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseSet {
    pub labels: Vec<u8>,
    pub rounds: usize,
}

pub fn sparse_set_labeling(g: &FiniteGraph, l: usize, seed: u64) -> Result<SparseSet> {
    sparse_set_labeling_with_cap(g, l, seed, DEFAULT_ROUND_CAP)
}

pub fn sparse_set_labeling_with_cap(g: &FiniteGraph, l: usize, seed: u64, cap: usize) -> Result<SparseSet> {
    if l == 0 {
        return Err(Error::InvalidInput("separation distance must be at least 1".into()));
    }
    let balls = g.balls(l);
    let (chosen, rounds) = select_sparse(&balls, &vec![true; g.len()], seed, Purpose::Proposal, 0, cap)?;
    Ok(SparseSet {
        labels: chosen.into_iter().map(u8::from).collect(),
        rounds,
    })
}

/// A coloring where vertices of equal color are more than `L` apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: Vec<u32>,
    pub rounds_per_phase: Vec<usize>,
}

impl Coloring {
    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c as usize + 1)
    }
}

/// Colors in phases: each phase runs the sparse-set dynamics on the vertices
/// still uncolored and gives the selected ones the next color.
pub fn sparse_coloring(g: &FiniteGraph, l: usize, seed: u64) -> Result<Coloring> {
    sparse_coloring_with_cap(g, l, seed, DEFAULT_ROUND_CAP)
}

pub fn sparse_coloring_with_cap(g: &FiniteGraph, l: usize, seed: u64, cap: usize) -> Result<Coloring> {
    if l == 0 {
        return Err(Error::InvalidInput("separation distance must be at least 1".into()));
    }
    let balls = g.balls(l);
    sparse_coloring_on_balls(&balls, seed, cap)
}

pub(crate) fn sparse_coloring_on_balls(balls: &[Vec<usize>], seed: u64, cap: usize) -> Result<Coloring> {
    let n = balls.len();
    let mut colors = vec![u32::MAX; n];
    let mut rounds_per_phase = Vec::new();
    let mut phase = 0u32;
    while colors.contains(&u32::MAX) {
        let uncolored: Vec<bool> = colors.iter().map(|&c| c == u32::MAX).collect();
        let (chosen, rounds) = select_sparse(balls, &uncolored, seed, Purpose::Coloring, phase as u64, cap)?;
        for (c, pick) in colors.iter_mut().zip(chosen) {
            if pick {
                *c = phase;
            }
        }
        rounds_per_phase.push(rounds);
        phase += 1;
    }
    Ok(Coloring {
        colors,
        rounds_per_phase,
    })
}

/// Result of checking a labeling against its two defining properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SparseSetCheck {
    /// Label-1 vertices are pairwise more than `L` apart.
    pub separation: bool,
    /// Every vertex has a label-1 vertex within distance `L`.
    pub domination: bool,
}

/// Checks both properties by breadth-first search; `only` restricts the
/// domination check to the listed vertices (all when `None`).
pub fn check_sparse_set(g: &FiniteGraph, labels: &[u8], l: usize, only: Option<&[usize]>) -> SparseSetCheck {
    let mut separation = true;
    for v in (0..g.len()).filter(|&v| labels[v] == 1) {
        separation &= g.ball(v, l).iter().all(|&w| w == v || labels[w] == 0);
    }
    let all: Vec<usize>;
    let targets = match only {
        Some(t) => t,
        None => {
            all = (0..g.len()).collect();
            &all
        }
    };
    let domination = targets.iter().all(|&v| g.ball(v, l).iter().any(|&w| labels[w] == 1));
    SparseSetCheck { separation, domination }
}

/// Vertices sharing a color are more than `L` apart.
pub fn check_coloring(g: &FiniteGraph, colors: &[u32], l: usize) -> bool {
    (0..g.len()).all(|v| g.ball(v, l).iter().all(|&w| w == v || colors[w] != colors[v]))
}
