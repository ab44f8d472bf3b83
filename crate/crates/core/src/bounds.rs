//! Upper bounds on correlation between distant vertices, and verdicts that
//! compare measurements against them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::information::{
    mi_value, normalized_value, JointDistribution, MeasuredQuantity, Method, Provenance,
};
use crate::tree::listing_ratio;

/// Absorbs rounding in exact comparisons such as `1/2 ≤ 1/2`.
const FLOAT_SLACK: f64 = 1e-12;

fn check_degree(d: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("degree {d} < 3")));
    }
    Ok(())
}

/// Best possible bound on `I(X_u; X_v) / H(X_v)` at distance `k`:
/// `2 / (d (d-1)^l)` for `k = 2l + 1` and `1 / (d-1)^l` for `k = 2l`.
pub fn beta_k(d: u32, k: usize) -> Result<f64> {
    check_degree(d)?;
    if k == 0 {
        return Err(Error::InvalidInput("distance must be at least 1".into()));
    }
    let base = (d as f64 - 1.0).powi((k / 2) as i32);
    Ok(if k % 2 == 1 {
        2.0 / (d as f64 * base)
    } else {
        1.0 / base
    })
}

/// Bound on the mutual information for a process with `m` values:
/// `m (k+1)^2 / (d-1)^k`.
pub fn thm2_bound(d: u32, k: usize, m: usize) -> Result<f64> {
    check_degree(d)?;
    Ok(m as f64 * ((k + 1) as f64).powi(2) / (d as f64 - 1.0).powi(k as i32))
}

/// Correlation decay for real-valued factors: `(k + 1 - 2k/d) (d-1)^{-k/2}`.
pub fn corr_decay_bound(d: u32, k: usize) -> Result<f64> {
    check_degree(d)?;
    let (d, k) = (d as f64, k as f64);
    Ok((k + 1.0 - 2.0 * k / d) * (d - 1.0).powf(-k / 2.0))
}

/// Outcome of comparing one measurement to one bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub name: String,
    pub d: u32,
    pub k: usize,
    pub bound: f64,
    pub measured: MeasuredQuantity,
    pub slack: f64,
    pub pass: bool,
}

impl BoundVerdict {
    /// Passes iff `measured ≤ bound + 3·stderr`; exact values get no slack.
    pub fn compare(name: &str, d: u32, k: usize, bound: f64, measured: MeasuredQuantity) -> Self {
        let slack = match measured.method {
            Method::PlugIn => 3.0 * measured.stderr,
            Method::Exact | Method::ClosedForm => 0.0,
        };
        Self {
            name: name.to_string(),
            d,
            k,
            bound,
            measured,
            slack,
            pass: measured.value <= bound + slack + FLOAT_SLACK,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn csv_header() -> &'static str {
        "bound,d,k,measured,stderr,bound_value,slack,status"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.10},{:.10},{:.10},{:.10},{}",
            self.name,
            self.d,
            self.k,
            self.measured.value,
            self.measured.stderr,
            self.bound,
            self.slack,
            self.status()
        )
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let relation = if self.pass { "≤" } else { ">" };
        write!(
            f,
            "{} (d={},k={}): measured {:.6} {relation} {:.6} + {:.6} {}",
            self.name,
            self.d,
            self.k,
            self.measured.value,
            self.bound,
            self.slack,
            self.status()
        )
    }
}

fn marginal_gap(j: &JointDistribution) -> f64 {
    let p = j.marginal_x();
    let q = j.marginal_y();
    if p.len() != q.len() {
        return f64::INFINITY;
    }
    p.probabilities()
        .iter()
        .zip(q.probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn marginal_tolerance(j: &JointDistribution) -> f64 {
    match j.provenance() {
        Provenance::Empirical { samples, .. } => 5.0 / (samples as f64).sqrt(),
        _ => 1e-9,
    }
}

fn check_equal_marginals(j: &JointDistribution) -> Result<()> {
    let gap = marginal_gap(j);
    if gap > marginal_tolerance(j) {
        return Err(Error::InvalidInput(format!(
            "marginals differ by {gap:.3e}; not the law of an invariant pair"
        )));
    }
    Ok(())
}

fn measured_of(j: &JointDistribution, value: f64) -> MeasuredQuantity {
    match j.provenance() {
        Provenance::Exact => MeasuredQuantity::exact(value),
        Provenance::ClosedForm => MeasuredQuantity::closed_form(value),
        Provenance::Empirical { .. } => MeasuredQuantity::plug_in(value, 0.0),
    }
}

/// Neighbors satisfy `I(X_u; X_v) / H(X_v) ≤ 2/d`, equivalently
/// `H(X_u, X_v) ≥ 2(d-1)/d · H(X_v)`.
pub fn check_edge_vertex(j: &JointDistribution, d: u32) -> Result<BoundVerdict> {
    check_equal_marginals(j)?;
    let ratio = normalized_value(j)?;
    check_edge_vertex_measured(measured_of(j, ratio), d)
}

/// As [`check_edge_vertex`] for an already measured normalized MI.
pub fn check_edge_vertex_measured(normalized: MeasuredQuantity, d: u32) -> Result<BoundVerdict> {
    Ok(BoundVerdict::compare("edge-vertex", d, 1, beta_k(d, 1)?, normalized))
}

/// Compares a normalized MI at distance `k` with `β_k`.
pub fn check_universal(normalized: MeasuredQuantity, d: u32, k: usize) -> Result<BoundVerdict> {
    Ok(BoundVerdict::compare("universal-bound", d, k, beta_k(d, k)?, normalized))
}

/// Compares a raw MI at distance `k` with the bound for an `m`-valued process.
pub fn check_fixed_process(mi: MeasuredQuantity, d: u32, k: usize, m: usize) -> Result<BoundVerdict> {
    Ok(BoundVerdict::compare("fixed-process", d, k, thm2_bound(d, k, m)?, mi))
}

/// For a factor of i.i.d. on the free group of rank `r`, the average over
/// the generators of `I(X_g; X_{g a_i}) / H(X_g)` is at most `1/r`. The `d`
/// field of the verdict holds `2r`.
pub fn check_free_group_avg(joints: &[JointDistribution], r: usize) -> Result<BoundVerdict> {
    if r < 2 {
        return Err(Error::InvalidInput(format!("rank {r} < 2")));
    }
    if joints.len() != r {
        return Err(Error::InvalidInput(format!("{} joints for rank {r}", joints.len())));
    }
    let mut sum = 0.0;
    for j in joints {
        check_equal_marginals(j)?;
        sum += normalized_value(j)?;
    }
    let measured = if joints.iter().all(|j| j.provenance() == Provenance::Exact) {
        MeasuredQuantity::exact(sum / r as f64)
    } else {
        MeasuredQuantity::plug_in(sum / r as f64, 0.0)
    };
    Ok(BoundVerdict::compare(
        "free-group-average",
        2 * r as u32,
        1,
        1.0 / r as f64,
        measured,
    ))
}

/// One row of the sharpness table: the listing process at radius `R`
/// against the best possible constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub d: u32,
    pub k: usize,
    pub radius: usize,
    pub ratio: f64,
    pub beta: f64,
    pub gap: f64,
}

/// Listing ratios for `1 ≤ k ≤ k_max` and `1 ≤ R ≤ R_max`, ordered by `k`
/// then `R`. The gap `β_k - ratio` shrinks as `R` grows.
pub fn sharpness_report(d: u32, k_max: usize, r_max: usize) -> Result<Vec<SharpnessRow>> {
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let beta = beta_k(d, k)?;
        for radius in 1..=r_max {
            let ratio = listing_ratio(d, radius, k)?;
            rows.push(SharpnessRow {
                d,
                k,
                radius,
                ratio,
                beta,
                gap: beta - ratio,
            });
        }
    }
    Ok(rows)
}

/// Raw mutual information of a joint as a measured quantity.
pub fn measured_mi(j: &JointDistribution) -> MeasuredQuantity {
    measured_of(j, mi_value(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::information::{tensor_power, Distribution};

    #[test]
    fn beta_examples() {
        assert!((beta_k(3, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((beta_k(3, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((beta_k(4, 3).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(beta_k(3, 0).is_err());
        assert!(beta_k(2, 1).is_err());
    }

    #[test]
    fn beta_recurrences() {
        for d in 3..=8 {
            for l in 1..=6 {
                let odd = beta_k(d, 2 * l + 1).unwrap();
                let even = beta_k(d, 2 * l).unwrap();
                assert!((odd - even * 2.0 / d as f64).abs() < 1e-15);
            }
            for k in 1..=10 {
                let a = beta_k(d, k + 2).unwrap();
                let b = beta_k(d, k).unwrap() / (d as f64 - 1.0);
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fixed_process_examples() {
        assert!((thm2_bound(3, 2, 2).unwrap() - 4.5).abs() < 1e-15);
        assert!((thm2_bound(3, 1, 2).unwrap() - 4.0).abs() < 1e-15);
        assert!((thm2_bound(5, 3, 4).unwrap() - 2.0 * thm2_bound(5, 3, 2).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn correlation_decay_examples() {
        assert!((corr_decay_bound(3, 1).unwrap() - 0.942809).abs() < 1e-6);
        assert!((corr_decay_bound(3, 2).unwrap() - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn edge_vertex_examples() {
        let u = Distribution::uniform(2);
        let v = check_edge_vertex(&JointDistribution::product(&u, &u), 3).unwrap();
        assert!(v.pass);
        assert_eq!(v.measured.value, 0.0);
        let v = check_edge_vertex(&JointDistribution::diagonal(&u), 3).unwrap();
        assert!(!v.pass);
        let skew = JointDistribution::new(vec![vec![0.6, 0.2], vec![0.1, 0.1]], Provenance::Exact).unwrap();
        assert!(matches!(check_edge_vertex(&skew, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn edge_vertex_invariant_under_tensor_power() {
        for q in [0.55, 0.6, 0.7, 0.9] {
            let j = JointDistribution::symmetric_binary(q).unwrap();
            let a = check_edge_vertex(&j, 3).unwrap();
            let b = check_edge_vertex(&tensor_power(&j, 3, 1000).unwrap(), 3).unwrap();
            assert_eq!(a.pass, b.pass);
            assert!((a.measured.value - b.measured.value).abs() < 1e-12);
        }
    }

    #[test]
    fn free_group_average_examples() {
        let u = Distribution::uniform(2);
        let prod = JointDistribution::product(&u, &u);
        let diag = JointDistribution::diagonal(&u);
        assert!(check_free_group_avg(&[prod.clone(), prod.clone(), prod.clone()], 3).unwrap().pass);
        let v = check_free_group_avg(&[diag.clone(), prod.clone()], 2).unwrap();
        assert!(v.pass);
        assert!((v.measured.value - 0.5).abs() < 1e-15);
        assert!(!check_free_group_avg(&[diag.clone(), diag.clone()], 2).unwrap().pass);
        assert!(check_free_group_avg(&[prod], 2).is_err());
        // all equal: reduces to the single normalized MI
        let sym = JointDistribution::symmetric_binary(0.75).unwrap();
        let v = check_free_group_avg(&[sym.clone(), sym.clone()], 2).unwrap();
        assert!((v.measured.value - normalized_value(&sym).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn slack_policy() {
        let v = BoundVerdict::compare("x", 3, 1, 0.5, MeasuredQuantity::plug_in(0.52, 0.01));
        assert!(v.pass);
        assert!((v.slack - 0.03).abs() < 1e-15);
        let v = BoundVerdict::compare("x", 3, 1, 0.5, MeasuredQuantity::exact(0.52));
        assert!(!v.pass);
        assert_eq!(v.slack, 0.0);
    }

    #[test]
    fn verdict_rendering() {
        let v = check_universal(MeasuredQuantity::plug_in(0.41, 0.002), 3, 2).unwrap();
        assert_eq!(
            v.to_string(),
            "universal-bound (d=3,k=2): measured 0.410000 ≤ 0.500000 + 0.006000 PASS"
        );
        assert!(v.csv_row().starts_with("universal-bound,3,2,"));
    }

    #[test]
    fn sharpness_examples() {
        let rows = sharpness_report(3, 1, 2).unwrap();
        let row = rows.iter().find(|r| r.radius == 2).unwrap();
        assert!((row.ratio - 0.6).abs() < 1e-15);
        assert!((row.gap - (2.0 / 3.0 - 0.6)).abs() < 1e-12);
        let rows = sharpness_report(3, 5, 2).unwrap();
        assert_eq!(rows.iter().find(|r| r.k == 5 && r.radius == 2).unwrap().ratio, 0.0);
    }

    #[test]
    fn sharpness_gap_shrinks() {
        for d in [3, 4] {
            let rows = sharpness_report(d, 4, 6).unwrap();
            for k in 1..=4 {
                let gaps: Vec<f64> = rows.iter().filter(|r| r.k == k).map(|r| r.gap).collect();
                assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-15), "d={d} k={k} {gaps:?}");
                assert!(gaps[5] < gaps[4], "d={d} k={k}");
            }
        }
    }
}
