use serde::Serialize;

use crate::bounds::{check_edge_vertex_measured, check_fixed_process, check_universal, BoundVerdict};
use crate::error::{Error, Result};
use crate::information::{
    maximal_correlation, mi_value, normalized_value, JointDistribution, MeasuredQuantity, PairSample, Provenance,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementMethod {
    ExactEnumeration,
    MonteCarlo,
    ClosedForm,
}

impl MeasurementMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasurementMethod::ExactEnumeration => "exact-enumeration",
            MeasurementMethod::MonteCarlo => "monte-carlo",
            MeasurementMethod::ClosedForm => "closed-form",
        }
    }
}

/// The law of `(X_u, X_v)` at distance `k` for one process, with the derived
/// information quantities and the bound verdicts that apply.
#[derive(Debug, Clone, Serialize)]
pub struct ProcessMeasurement {
    pub schema: u32,
    pub process: String,
    pub d: u32,
    pub k: usize,
    pub radius: usize,
    pub method: MeasurementMethod,
    pub samples: u64,
    pub seed: Option<u64>,
    /// Number of output values, the `m` of the fixed-process bound.
    pub outputs: usize,
    /// `H(X_v)`.
    pub entropy: MeasuredQuantity,
    /// `I(X_u; X_v)`.
    pub mi: MeasuredQuantity,
    /// `I(X_u; X_v) / H(X_v)`.
    pub normalized: MeasuredQuantity,
    /// Maximal correlation of the pair, when the joint law is available.
    pub correlation: Option<MeasuredQuantity>,
    pub verdicts: Vec<BoundVerdict>,
    #[serde(skip)]
    pub joint: Option<JointDistribution>,
}

pub struct Context<'a> {
    pub process: &'a str,
    pub d: u32,
    pub k: usize,
    pub radius: usize,
}

impl ProcessMeasurement {
    /// From an exact or closed-form joint law; all standard errors are zero.
    pub fn from_joint(cx: Context<'_>, joint: JointDistribution) -> Result<Self> {
        let (method, wrap): (_, fn(f64) -> MeasuredQuantity) = match joint.provenance() {
            Provenance::Exact => (MeasurementMethod::ExactEnumeration, MeasuredQuantity::exact),
            Provenance::ClosedForm => (MeasurementMethod::ClosedForm, MeasuredQuantity::closed_form),
            Provenance::Empirical { .. } => {
                return Err(Error::InvalidInput("empirical joints need a sample".into()))
            }
        };
        let entropy = crate::information::entropy(&joint.marginal_y()).value;
        let m = Self {
            schema: SCHEMA_VERSION,
            process: cx.process.to_string(),
            d: cx.d,
            k: cx.k,
            radius: cx.radius,
            method,
            samples: 0,
            seed: None,
            outputs: joint.cols(),
            entropy: wrap(entropy),
            mi: wrap(mi_value(&joint)),
            normalized: wrap(normalized_value(&joint)?),
            correlation: Some(wrap(maximal_correlation(&joint)?)),
            verdicts: Vec::new(),
            joint: Some(joint),
        };
        m.with_verdicts()
    }

    /// From sampled pairs, with bootstrap standard errors.
    pub fn from_sample(cx: Context<'_>, sample: &PairSample, resamples: usize, seed: u64) -> Result<Self> {
        let joint = sample.joint();
        normalized_value(&joint)?;
        let est = sample.bootstrap_many(resamples, |j| {
            vec![
                crate::information::entropy(&j.marginal_y()).value,
                mi_value(j),
                normalized_value(j).unwrap_or(f64::NAN),
                maximal_correlation(j).unwrap_or(f64::NAN),
            ]
        });
        let m = Self {
            schema: SCHEMA_VERSION,
            process: cx.process.to_string(),
            d: cx.d,
            k: cx.k,
            radius: cx.radius,
            method: MeasurementMethod::MonteCarlo,
            samples: sample.len() as u64,
            seed: Some(seed),
            outputs: joint.cols(),
            entropy: est[0].into(),
            mi: est[1].into(),
            normalized: est[2].into(),
            correlation: Some(est[3].into()),
            verdicts: Vec::new(),
            joint: Some(joint),
        };
        m.with_verdicts()
    }

    /// Replaces the verdicts with the normalized-MI bound (`edge-vertex` at
    /// `k = 1`) and the fixed-process bound.
    pub fn with_verdicts(mut self) -> Result<Self> {
        self.verdicts.clear();
        if self.k >= 1 {
            self.verdicts.push(if self.k == 1 {
                check_edge_vertex_measured(self.normalized, self.d)?
            } else {
                check_universal(self.normalized, self.d, self.k)?
            });
            self.verdicts.push(check_fixed_process(self.mi, self.d, self.k, self.outputs)?);
        }
        Ok(self)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// The pair is exchangeable: the joint equals its transpose within
    /// `1e-12` (exact) or three standard errors per entry (sampled).
    pub fn check_exchangeable(&self) -> Result<()> {
        let Some(j) = &self.joint else {
            return Ok(());
        };
        let worst = match j.provenance() {
            Provenance::Empirical { samples, .. } => {
                let n = samples as f64;
                let mut worst: f64 = 0.0;
                for x in 0..j.rows() {
                    for y in 0..x {
                        let (a, b) = (j.get(x, y), j.get(y, x));
                        let se = ((a + b) / n).sqrt();
                        let excess = (a - b).abs() - 3.0 * se;
                        worst = worst.max(excess);
                    }
                }
                worst
            }
            _ => j.asymmetry() - 1e-12,
        };
        if worst > 0.0 {
            return Err(Error::InvalidInput(format!(
                "joint for {} at k={} is not exchangeable (excess {worst:.3e})",
                self.process, self.k
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("measurements always serialize");
        let joint = match &self.joint {
            Some(j) => serde_json::from_str(&j.to_json()).expect("joint JSON is valid"),
            None => serde_json::Value::Null,
        };
        v["joint"] = joint;
        serde_json::to_string(&v).expect("measurements always serialize")
    }

    pub fn csv_header() -> &'static str {
        "schema,process,d,k,R,method,samples,seed,outputs,H,H_stderr,I,I_stderr,I_over_H,I_over_H_stderr,corr,corr_stderr,verdicts"
    }

    pub fn csv_row(&self) -> String {
        let verdicts: Vec<String> = self
            .verdicts
            .iter()
            .map(|v| format!("{}:{:.10}:{}", v.name, v.bound, v.status()))
            .collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{:.10},{:.10},{:.10},{:.10},{:.10},{:.10},{},{},{}",
            self.schema,
            self.process,
            self.d,
            self.k,
            self.radius,
            self.method.as_str(),
            self.samples,
            self.seed.map_or(String::new(), |s| s.to_string()),
            self.outputs,
            self.entropy.value,
            self.entropy.stderr,
            self.mi.value,
            self.mi.stderr,
            self.normalized.value,
            self.normalized.stderr,
            self.correlation.map_or(String::new(), |c| format!("{:.10}", c.value)),
            self.correlation.map_or(String::new(), |c| format!("{:.10}", c.stderr)),
            verdicts.join(";")
        )
    }
}
