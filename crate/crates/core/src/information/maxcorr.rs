use super::JointDistribution;
use crate::error::{Error, Result};

/// Off-diagonal mass, relative to the matrix norm, at which rotations stop.
const TOLERANCE: f64 = 1e-14;
/// Rounding floor for nearly zero matrices; eigenvalues live in [0, 1].
const ABSOLUTE_FLOOR: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// `Q_{xy} = J_{xy} / sqrt(p_x q_y)` on the support of both marginals,
/// with the square-root marginals.
struct Normalized {
    q: Vec<f64>,
    rows: usize,
    cols: usize,
    sqrt_p: Vec<f64>,
    sqrt_q: Vec<f64>,
}

impl Normalized {
    fn new(j: &JointDistribution) -> Self {
        let p = j.marginal_x();
        let q = j.marginal_y();
        let xs: Vec<usize> = (0..j.rows()).filter(|&x| p.0[x] > 0.0).collect();
        let ys: Vec<usize> = (0..j.cols()).filter(|&y| q.0[y] > 0.0).collect();
        let mut m = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                m.push(j.get(x, y) / (p.0[x] * q.0[y]).sqrt());
            }
        }
        Self {
            q: m,
            rows: xs.len(),
            cols: ys.len(),
            sqrt_p: xs.iter().map(|&x| p.0[x].sqrt()).collect(),
            sqrt_q: ys.iter().map(|&y| q.0[y].sqrt()).collect(),
        }
    }
}

/// `P A P` for the projector `P = I - u uᵀ`, `A` symmetric `n × n`.
fn deflate(a: &mut [f64], n: usize, unit: &[f64]) {
    let au: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * unit[j]).sum()).collect();
    let uau: f64 = unit.iter().zip(&au).map(|(x, y)| x * y).sum();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] += -au[i] * unit[j] - unit[i] * au[j] + uau * unit[i] * unit[j];
        }
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let off = |a: &[f64]| -> f64 {
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for sweep in 0..MAX_SWEEPS {
        let residual = off(&a);
        if residual <= (TOLERANCE * scale).max(ABSOLUTE_FLOOR) {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        if sweep + 1 == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: MAX_SWEEPS,
                residual,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    unreachable!()
}

/// Supremum of `|corr(f(X), g(Y))|` over real functions `f`, `g`: the second
/// singular value of `Q`, read off the spectrum of `QᵀQ` with the trivial
/// pair `(sqrt p, sqrt q)` deflated. States of probability zero are dropped.
pub fn maximal_correlation(j: &JointDistribution) -> Result<f64> {
    let n = Normalized::new(j);
    if n.rows < 2 || n.cols < 2 {
        return Ok(0.0);
    }
    let c = n.cols;
    let mut gram = vec![0.0; c * c];
    for a in 0..c {
        for b in 0..c {
            gram[a * c + b] = (0..n.rows).map(|x| n.q[x * c + a] * n.q[x * c + b]).sum();
        }
    }
    deflate(&mut gram, c, &n.sqrt_q);
    let top = symmetric_eigenvalues(gram, c)?.into_iter().fold(0.0, f64::max);
    Ok(top.sqrt().min(1.0))
}

/// Supremum of `|corr(f(X₁), f(X₂))|` over a single real function `f`, for
/// an exchangeable pair. The normalized matrix is then symmetric, and the
/// answer is its largest nontrivial eigenvalue in absolute value.
pub fn max_single_function_correlation(j: &JointDistribution) -> Result<f64> {
    if j.asymmetry() > 1e-9 {
        return Err(Error::InvalidInput("joint is not exchangeable".into()));
    }
    let n = Normalized::new(j);
    if n.rows < 2 {
        return Ok(0.0);
    }
    let mut q = n.q.clone();
    deflate(&mut q, n.rows, &n.sqrt_p);
    let top = symmetric_eigenvalues(q, n.rows)?
        .into_iter()
        .fold(0.0, |acc: f64, e| acc.max(e.abs()));
    Ok(top.min(1.0))
}

/// Pearson correlation of `f(X)` and `g(Y)`.
pub fn correlation_of_functions(j: &JointDistribution, f: &[f64], g: &[f64]) -> Result<f64> {
    if f.len() != j.rows() || g.len() != j.cols() {
        return Err(Error::InvalidInput("function table size does not match alphabet".into()));
    }
    let p = j.marginal_x();
    let q = j.marginal_y();
    let mean = |d: &[f64], h: &[f64]| d.iter().zip(h).map(|(a, b)| a * b).sum::<f64>();
    let (mf, mg) = (mean(&p.0, f), mean(&q.0, g));
    let var_f: f64 = p.0.iter().zip(f).map(|(a, b)| a * (b - mf).powi(2)).sum();
    let var_g: f64 = q.0.iter().zip(g).map(|(a, b)| a * (b - mg).powi(2)).sum();
    if var_f <= 1e-300 || var_g <= 1e-300 {
        return Err(Error::Undefined {
            quantity: "correlation",
            reason: "a function has zero variance".into(),
        });
    }
    let mut cov = 0.0;
    for x in 0..j.rows() {
        for y in 0..j.cols() {
            cov += j.get(x, y) * (f[x] - mf) * (g[y] - mg);
        }
    }
    Ok((cov / (var_f * var_g).sqrt()).clamp(-1.0, 1.0))
}
