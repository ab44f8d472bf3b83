//! Entropy, mutual information and maximal correlation of finite joint laws.
//!
//! All quantities are in nats. `0 log 0` is taken to be `0`.

mod maxcorr;
mod sample;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use maxcorr::{correlation_of_functions, max_single_function_correlation, maximal_correlation};
pub use sample::{empirical_joint, Estimate, PairSample, DEFAULT_RESAMPLES};

const SUM_TOLERANCE: f64 = 1e-12;

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        check_probabilities(&p)?;
        Ok(Self(p))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {x} is not a probability")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// Where a joint law came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    ClosedForm,
    Empirical { samples: u64, seed: u64 },
}

/// How a [`MeasuredQuantity`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    ClosedForm,
    PlugIn,
}

impl Method {
    fn of(p: Provenance) -> Self {
        match p {
            Provenance::Exact => Method::Exact,
            Provenance::ClosedForm => Method::ClosedForm,
            Provenance::Empirical { .. } => Method::PlugIn,
        }
    }
}

/// A value with its standard error (zero for exact and closed-form values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredQuantity {
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
}

impl MeasuredQuantity {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            method: Method::Exact,
        }
    }

    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            method: Method::ClosedForm,
        }
    }

    pub fn plug_in(value: f64, stderr: f64) -> Self {
        Self {
            value,
            stderr,
            method: Method::PlugIn,
        }
    }

    pub fn in_bits(&self) -> Self {
        Self {
            value: self.value / std::f64::consts::LN_2,
            stderr: self.stderr / std::f64::consts::LN_2,
            method: self.method,
        }
    }
}

impl fmt::Display for MeasuredQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.6} (nats)", self.value, self.stderr)
    }
}

/// Which variable a conditional entropy conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Rows, the first variable.
    X,
    /// Columns, the second variable.
    Y,
}

/// Joint law of a pair `(X, Y)` on finite alphabets, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    alphabet_x: Vec<String>,
    alphabet_y: Vec<String>,
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    provenance: Provenance,
}

#[derive(Serialize)]
struct JointJson<'a> {
    #[serde(rename = "alphabetX")]
    alphabet_x: &'a [String],
    #[serde(rename = "alphabetY")]
    alphabet_y: &'a [String],
    matrix: Vec<&'a [f64]>,
    provenance: Provenance,
}

impl JointDistribution {
    pub fn new(matrix: Vec<Vec<f64>>, provenance: Provenance) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("matrix must be non-empty and rectangular".into()));
        }
        Self::from_flat(rows, cols, matrix.concat(), provenance)
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution("shape does not match data".into()));
        }
        check_probabilities(&data)?;
        Ok(Self {
            alphabet_x: (0..rows).map(|i| i.to_string()).collect(),
            alphabet_y: (0..cols).map(|i| i.to_string()).collect(),
            data,
            rows,
            cols,
            provenance,
        })
    }

    /// Normalizes nonnegative weights (e.g. counts or accumulated masses).
    pub fn from_weights(rows: usize, cols: usize, weights: &[f64], provenance: Provenance) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::from_flat(rows, cols, weights.iter().map(|w| w / total).collect(), provenance)
    }

    /// The law of `(X, Y)` for independent `X ~ p`, `Y ~ q`.
    pub fn product(p: &Distribution, q: &Distribution) -> Self {
        let data = p
            .0
            .iter()
            .flat_map(|a| q.0.iter().map(move |b| a * b))
            .collect();
        Self {
            alphabet_x: (0..p.len()).map(|i| i.to_string()).collect(),
            alphabet_y: (0..q.len()).map(|i| i.to_string()).collect(),
            data,
            rows: p.len(),
            cols: q.len(),
            provenance: Provenance::Exact,
        }
    }

    /// `X = Y` with the given marginal.
    pub fn diagonal(p: &Distribution) -> Self {
        let m = p.len();
        let mut data = vec![0.0; m * m];
        for (i, &pi) in p.0.iter().enumerate() {
            data[i * m + i] = pi;
        }
        Self {
            alphabet_x: (0..m).map(|i| i.to_string()).collect(),
            alphabet_y: (0..m).map(|i| i.to_string()).collect(),
            data,
            rows: m,
            cols: m,
            provenance: Provenance::Exact,
        }
    }

    /// Uniform `±1` marginals with `P(X = Y) = q`; index 0 is `-1`.
    pub fn symmetric_binary(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidInput(format!("q = {q} is not a probability")));
        }
        let mut j = Self::new(
            vec![vec![q / 2.0, (1.0 - q) / 2.0], vec![(1.0 - q) / 2.0, q / 2.0]],
            Provenance::Exact,
        )?;
        j.alphabet_x = vec!["-1".into(), "+1".into()];
        j.alphabet_y = j.alphabet_x.clone();
        Ok(j)
    }

    pub fn with_alphabets(mut self, x: Vec<String>, y: Vec<String>) -> Result<Self> {
        if x.len() != self.rows || y.len() != self.cols {
            return Err(Error::InvalidInput("alphabet size does not match matrix".into()));
        }
        self.alphabet_x = x;
        self.alphabet_y = y;
        Ok(self)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.cols + y]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn alphabet_x(&self) -> &[String] {
        &self.alphabet_x
    }

    pub fn alphabet_y(&self) -> &[String] {
        &self.alphabet_y
    }

    pub fn marginal_x(&self) -> Distribution {
        Distribution(self.data.chunks(self.cols).map(|r| r.iter().sum()).collect())
    }

    pub fn marginal_y(&self) -> Distribution {
        let mut q = vec![0.0; self.cols];
        for row in self.data.chunks(self.cols) {
            for (acc, v) in q.iter_mut().zip(row) {
                *acc += v;
            }
        }
        Distribution(q)
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for x in 0..self.rows {
            for y in 0..self.cols {
                data[y * self.rows + x] = self.get(x, y);
            }
        }
        Self {
            alphabet_x: self.alphabet_y.clone(),
            alphabet_y: self.alphabet_x.clone(),
            data,
            rows: self.cols,
            cols: self.rows,
            provenance: self.provenance,
        }
    }

    /// Largest entrywise gap between the matrix and its transpose.
    pub fn asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for x in 0..self.rows {
            for y in 0..x {
                worst = worst.max((self.get(x, y) - self.get(y, x)).abs());
            }
        }
        worst
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JointJson {
            alphabet_x: &self.alphabet_x,
            alphabet_y: &self.alphabet_y,
            matrix: self.data.chunks(self.cols).collect(),
            provenance: self.provenance,
        })
        .expect("joints always serialize")
    }

    fn quantity(&self, value: f64) -> MeasuredQuantity {
        MeasuredQuantity {
            value,
            stderr: 0.0,
            method: Method::of(self.provenance),
        }
    }
}

fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// `H(p) = -Σ p_i log p_i`.
pub fn entropy(p: &Distribution) -> MeasuredQuantity {
    MeasuredQuantity::exact(entropy_of(&p.0))
}

pub fn joint_entropy(j: &JointDistribution) -> MeasuredQuantity {
    j.quantity(entropy_of(&j.data))
}

/// `I(X;Y) = H(X) + H(Y) - H(X,Y)`.
pub fn mutual_information(j: &JointDistribution) -> MeasuredQuantity {
    j.quantity(mi_value(j))
}

pub(crate) fn mi_value(j: &JointDistribution) -> f64 {
    entropy_of(&j.marginal_x().0) + entropy_of(&j.marginal_y().0) - entropy_of(&j.data)
}

/// `H(X | Y)` when `given = Axis::Y`, `H(Y | X)` when `given = Axis::X`.
pub fn conditional_entropy(j: &JointDistribution, given: Axis) -> MeasuredQuantity {
    let h_given = match given {
        Axis::X => entropy_of(&j.marginal_x().0),
        Axis::Y => entropy_of(&j.marginal_y().0),
    };
    j.quantity(entropy_of(&j.data) - h_given)
}

/// `I(X;Y) / H(Y)`; the second variable plays the role of `X_v`.
pub fn normalized_mi(j: &JointDistribution) -> Result<MeasuredQuantity> {
    normalized_value(j).map(|v| j.quantity(v))
}

pub(crate) fn normalized_value(j: &JointDistribution) -> Result<f64> {
    let h = entropy_of(&j.marginal_y().0);
    if h <= 0.0 {
        return Err(Error::Undefined {
            quantity: "normalized mutual information",
            reason: "the marginal has zero entropy".into(),
        });
    }
    Ok(mi_value(j) / h)
}

/// Joint law of `n` independent copies of the pair.
pub fn tensor_power(j: &JointDistribution, n: usize, budget: usize) -> Result<JointDistribution> {
    if n == 0 {
        return Err(Error::InvalidInput("tensor power needs n >= 1".into()));
    }
    let needed = (j.rows as u128 * j.cols as u128).saturating_pow(n as u32);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "tensor power",
            needed,
            budget: budget as u128,
        });
    }
    let mut acc = j.clone();
    for _ in 1..n {
        let rows = acc.rows * j.rows;
        let cols = acc.cols * j.cols;
        let mut data = vec![0.0; rows * cols];
        for ax in 0..acc.rows {
            for ay in 0..acc.cols {
                let a = acc.get(ax, ay);
                for bx in 0..j.rows {
                    for by in 0..j.cols {
                        data[(ax * j.rows + bx) * cols + ay * j.cols + by] = a * j.get(bx, by);
                    }
                }
            }
        }
        let names = |outer: &[String], inner: &[String]| -> Vec<String> {
            outer
                .iter()
                .flat_map(|o| inner.iter().map(move |i| format!("{o},{i}")))
                .collect()
        };
        acc = JointDistribution {
            alphabet_x: names(&acc.alphabet_x, &j.alphabet_x),
            alphabet_y: names(&acc.alphabet_y, &j.alphabet_y),
            data,
            rows,
            cols,
            provenance: j.provenance,
        };
    }
    Ok(acc)
}

/// Mutual information of a symmetric `±1` pair with `P(X = Y) = q`.
pub fn binary_symmetric_mi(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidInput(format!("q = {q} is not a probability")));
    }
    Ok(std::f64::consts::LN_2 - entropy_of(&[q, 1.0 - q]))
}
