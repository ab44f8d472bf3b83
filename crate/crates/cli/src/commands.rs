use std::path::Path;

use anyhow::{bail, Context as _};
use serde_json::{json, Value};

use fiid::bounds::{sharpness_report, thm2_bound};
use fiid::information::MeasuredQuantity;
use fiid::processes::{
    check_coloring, check_sparse_set, exact_joint, gaussian_sign_measure, listing_finite_n_mi, loglog_slope,
    measure_rule, random_regular_graph, sparse_coloring_with_cap, sparse_set_labeling_with_cap, GaussianSignReport,
    GaussianSignSpec, PairRegion, ProcessKind, ProcessMeasurement,
};
use fiid::tree::ball_size;
use fiid::words::{build_generators, rank_formula, verify_coset_factorization, verify_free_claim_with_budget};

use crate::config::MeasureEntry;
use crate::report::{ok, status, Report};

pub const DEFAULT_BLOCK_SAMPLES: u64 = 100_000;
pub const DEFAULT_LISTING_SAMPLES: u64 = 2_000;
pub const DEFAULT_EPS: f64 = 0.25;
pub const DEFAULT_MC_TRUNCATION: usize = 8;
pub const DEFAULT_CLOSED_TRUNCATION: usize = 400;

fn quantity(q: MeasuredQuantity, bits: bool) -> String {
    let (q, unit) = if bits { (q.in_bits(), "bits") } else { (q, "nats") };
    format!("{:.6} ± {:.6} {unit}", q.value, q.stderr)
}

fn json_of(s: &str) -> Value {
    serde_json::from_str(s).expect("library JSON is valid")
}

pub fn generators(d: u32, k: usize, n_max: usize, budget: u64, list: bool, seed: u64) -> anyhow::Result<Report> {
    let set = build_generators(d, k)?;
    set.check_invariants()?;
    let formula = rank_formula(d, k);
    let rank = set.elements().len();
    let verify = verify_free_claim_with_budget(&set, n_max, budget)?;
    let mut r = Report::new(
        "generators",
        seed,
        "d,k,construction,rank,formula,n_max,covered,checked,min_lengths,status",
    );
    r.pass = rank as u128 == formula && verify.passed();
    r.line(format!(
        "d={d} k={k} construction={} words={rank} formula={formula}",
        set.construction().as_str()
    ));
    if list {
        for w in set.elements() {
            r.line(format!("  {w}"));
        }
    }
    r.line(format!(
        "rank {rank}, free-claim {} (n ≤ {})",
        verify.status(),
        verify.covered
    ));
    let mins: Vec<String> = verify.min_length_by_n.iter().map(|m| m.to_string()).collect();
    r.line(format!(
        "checked {} products, shortest reduced product for n = 1..{}: {}",
        verify.checked,
        verify.covered,
        mins.join(" ")
    ));
    if let Some(f) = &verify.failure {
        r.line(format!("failure: {f}"));
    }
    if let Some(w) = &verify.witness {
        r.line(format!("witness: {}", w.join(" · ")));
    }
    if rank as u128 != formula {
        r.line(format!("rank mismatch: built {rank}, formula {formula}"));
    }
    r.csv_rows.push(format!(
        "{d},{k},{},{rank},{formula},{n_max},{},{},{},{}",
        set.construction().as_str(),
        verify.covered,
        verify.checked,
        mins.join(" "),
        verify.status()
    ));
    r.rows.push(json!({
        "d": d,
        "k": k,
        "formula": formula.to_string(),
        "set": json_of(&set.to_json()),
        "verification": verify,
    }));
    Ok(r)
}

pub fn factorization(d: u32, k: usize, max_len: usize, budget: u64, seed: u64) -> anyhow::Result<Report> {
    let rep = verify_coset_factorization(d, k, max_len, budget)?;
    let expected = ball_size(d, max_len);
    let mut r = Report::new("factorization", seed, "d,k,L,elements,ball_size,status");
    if !rep.complete {
        r.pass = false;
        r.line(format!(
            "d={d} k={k} L={max_len}: sequence budget {budget} too small, nothing checked"
        ));
    } else {
        r.pass = rep.passed() && rep.checked as u128 == expected;
        r.line(format!(
            "d={d} k={k} L={max_len}: elements {} (|B_{max_len}| = {expected}), unique factorization {}",
            rep.checked,
            status(r.pass)
        ));
        if let Some(f) = &rep.failure {
            r.line(format!("failure: {f}"));
        }
    }
    r.csv_rows.push(format!("{d},{k},{max_len},{},{expected},{}", rep.checked, status(r.pass)));
    r.rows.push(json!({ "d": d, "k": k, "L": max_len, "ball_size": expected.to_string(), "verification": rep }));
    Ok(r)
}

pub fn sharpness(d: u32, k_max: usize, r_max: usize, seed: u64) -> anyhow::Result<Report> {
    let rows = sharpness_report(d, k_max, r_max)?;
    let mut r = Report::new("sharpness", seed, "d,k,R,ratio,beta,gap");
    r.line(format!("{:>3} {:>4} {:>12} {:>12} {:>12}", "k", "R", "ratio", "beta_k", "gap"));
    for row in &rows {
        r.pass &= row.gap >= -1e-12;
        r.line(format!(
            "{:>3} {:>4} {:>12.8} {:>12.8} {:>12.8}",
            row.k, row.radius, row.ratio, row.beta, row.gap
        ));
        r.csv_rows.push(format!(
            "{},{},{},{:.12},{:.12},{:.12}",
            row.d, row.k, row.radius, row.ratio, row.beta, row.gap
        ));
        r.rows.push(serde_json::to_value(row)?);
    }
    Ok(r)
}

fn push_measurement(r: &mut Report, m: &ProcessMeasurement, bits: bool) {
    r.pass &= m.all_pass();
    r.line(format!(
        "{} d={} k={} R={} {} samples={} seed={} outputs={}",
        m.process,
        m.d,
        m.k,
        m.radius,
        m.method.as_str(),
        m.samples,
        m.seed.map_or("-".to_string(), |s| s.to_string()),
        m.outputs
    ));
    r.line(format!("  H(X_v)       = {}", quantity(m.entropy, bits)));
    r.line(format!("  I(X_u;X_v)   = {}", quantity(m.mi, bits)));
    r.line(format!("  I/H          = {:.6} ± {:.6}", m.normalized.value, m.normalized.stderr));
    if let Some(c) = m.correlation {
        r.line(format!("  max corr     = {:.6} ± {:.6}", c.value, c.stderr));
    }
    for v in &m.verdicts {
        r.line(format!("  {v}"));
    }
    r.csv_rows.push(m.csv_row());
    r.rows.push(json_of(&m.to_json()));
}

fn push_agreement(r: &mut Report, g: &GaussianSignReport) {
    let (Some(agree), Some(mc), Some(c)) = (g.agrees(), g.monte_carlo.as_ref(), g.mc_corr) else {
        return;
    };
    r.pass &= agree;
    r.line(format!(
        "  closed-form agreement (k={}): corr {:.6} vs {:.6}, MI {:.6} vs {:.6}, within 3 stderr + remainder {}",
        g.k,
        c.value,
        g.corr,
        mc.mi.value,
        g.mi,
        status(agree)
    ));
}

pub fn measure(
    entries: &[MeasureEntry],
    master_seed: u64,
    budget: u128,
    bits: bool,
    dump_region: Option<&Path>,
) -> anyhow::Result<Report> {
    let mut r = Report::new("measure", master_seed, ProcessMeasurement::csv_header());
    if let (Some(path), Some(e)) = (dump_region, entries.first()) {
        let radius = match e.process.parse::<ProcessKind>()? {
            ProcessKind::GaussianSign => e.truncation.unwrap_or(DEFAULT_MC_TRUNCATION),
            _ => e.radius,
        };
        let region = PairRegion::new(e.d, e.k.lo, radius)?;
        std::fs::write(path, region.region.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    for e in entries {
        let kind: ProcessKind = e.process.parse()?;
        let seed = e.seed.unwrap_or(master_seed);
        match kind {
            ProcessKind::Identity | ProcessKind::Majority | ProcessKind::Parity => {
                if e.eps.is_some() || e.truncation.is_some() {
                    bail!("--eps and --D apply only to gaussian-sign");
                }
                if e.labels.is_some() && kind != ProcessKind::Identity {
                    bail!("--labels applies only to identity and listing");
                }
                let labels = e.labels.unwrap_or(2) as usize;
                let rule = kind.block_rule(e.radius, labels)?.expect("block processes have rules");
                for k in e.k.iter() {
                    let m = match e.samples {
                        Some(0) => exact_joint(&rule, e.d, k, budget)?,
                        s => measure_rule(&rule, e.d, k, budget, s.unwrap_or(DEFAULT_BLOCK_SAMPLES), seed)?,
                    };
                    push_measurement(&mut r, &m, bits);
                }
            }
            ProcessKind::Listing => {
                if e.eps.is_some() || e.truncation.is_some() {
                    bail!("--eps and --D apply only to gaussian-sign");
                }
                let samples = e.samples.unwrap_or(DEFAULT_LISTING_SAMPLES);
                if samples == 0 {
                    bail!("listing is always sampled; --samples must be positive");
                }
                for k in e.k.iter() {
                    let m = listing_finite_n_mi(e.d, e.radius, k, e.labels.unwrap_or(2), samples, seed)?;
                    push_measurement(&mut r, &m, bits);
                }
            }
            ProcessKind::GaussianSign => {
                if e.labels.is_some() {
                    bail!("--labels does not apply to gaussian-sign");
                }
                let spec = GaussianSignSpec::new(
                    e.d,
                    e.eps.unwrap_or(DEFAULT_EPS),
                    e.truncation.unwrap_or(DEFAULT_MC_TRUNCATION),
                )?;
                for k in e.k.iter() {
                    let g = gaussian_sign_measure(&spec, k, e.samples.unwrap_or(DEFAULT_BLOCK_SAMPLES), seed)?;
                    push_measurement(&mut r, &g.closed, bits);
                    if let Some(mc) = &g.monte_carlo {
                        push_measurement(&mut r, mc, bits);
                    }
                    push_agreement(&mut r, &g);
                }
            }
        }
    }
    Ok(r)
}

pub struct GaussianArgs {
    pub d: u32,
    pub eps: f64,
    pub k_max: usize,
    pub truncation: usize,
    pub samples: u64,
    pub tail_tolerance: Option<f64>,
}

pub fn gaussian(a: &GaussianArgs, seed: u64) -> anyhow::Result<Report> {
    if a.k_max == 0 {
        bail!("--kmax must be at least 1");
    }
    let mut spec = GaussianSignSpec::new(a.d, a.eps, a.truncation)?;
    if let Some(t) = a.tail_tolerance {
        spec.tail_tolerance = t;
    }
    let mut r = Report::new(
        "gaussian",
        seed,
        "d,eps,D,k,rho,corr,mi,mi_lo,mi_hi,mi_scaled,bound,status,mc_samples,mc_corr,mc_corr_stderr,mc_mi,mc_mi_stderr,agrees",
    );
    let base = a.d as f64 - 1.0;
    r.line(format!(
        "d={} eps={} D={} samples={}{}",
        a.d,
        a.eps,
        a.truncation,
        a.samples,
        if a.samples == 0 { " (closed form only)" } else { "" }
    ));
    r.line(format!(
        "{:>3} {:>10} {:>10} {:>12} {:>12} {:>12} {:>6}{}",
        "k",
        "rho",
        "corr",
        "MI",
        "MI*(d-1)^k",
        "bound",
        "check",
        if a.samples > 0 { "   mc corr          mc MI            agree" } else { "" }
    ));
    let mut scaled = Vec::new();
    for k in 1..=a.k_max {
        let g = gaussian_sign_measure(&spec, k, a.samples, seed)?;
        let bound = thm2_bound(a.d, k, 2)?;
        let s = g.mi * base.powi(k as i32);
        let within = g.mi <= bound;
        let agree = g.agrees();
        r.pass &= within && agree.unwrap_or(true);
        scaled.push((k, s));
        let mut line = format!(
            "{k:>3} {:>10.6} {:>10.6} {:>12.4e} {:>12.6} {:>12.4e} {:>6}",
            g.rho,
            g.corr,
            g.mi,
            s,
            bound,
            status(within)
        );
        let mut mc_cols = ",,,,,".to_string();
        if let (Some(mc), Some(c), Some(ag)) = (&g.monte_carlo, g.mc_corr, agree) {
            line.push_str(&format!(
                "   {:.5}±{:.5}  {:.5}±{:.5}  {}",
                c.value,
                c.stderr,
                mc.mi.value,
                mc.mi.stderr,
                status(ag)
            ));
            mc_cols = format!(
                "{},{:.10},{:.10},{:.10},{:.10},{}",
                mc.samples,
                c.value,
                c.stderr,
                mc.mi.value,
                mc.mi.stderr,
                status(ag)
            );
        }
        r.line(line);
        r.csv_rows.push(format!(
            "{},{},{},{k},{:.12},{:.12},{:.12e},{:.12e},{:.12e},{:.12},{:.12e},{},{mc_cols}",
            a.d,
            a.eps,
            a.truncation,
            g.rho,
            g.corr,
            g.mi,
            g.mi_interval.0,
            g.mi_interval.1,
            s,
            bound,
            status(within)
        ));
        let mut row = serde_json::to_value(&g)?;
        row["closed"] = json_of(&g.closed.to_json());
        row["monte_carlo"] = g.monte_carlo.as_ref().map_or(Value::Null, |m| json_of(&m.to_json()));
        row["mi_scaled"] = json!(s);
        row["bound"] = json!(bound);
        r.rows.push(row);
    }
    let tail: Vec<(f64, f64)> = scaled
        .iter()
        .filter(|&&(k, _)| k >= 2)
        .map(|&(k, s)| (k as f64, s))
        .collect();
    let slope = loglog_slope(&tail).ok();
    let increasing = tail.windows(2).all(|w| w[1].1 > w[0].1);
    if let Some(sl) = slope {
        r.line(format!(
            "fitted exponent of MI*(d-1)^k against k over k=2..{}: {sl:.4} (reported, not asserted)",
            a.k_max
        ));
        r.line(format!(
            "MI*(d-1)^k strictly increasing over k=2..{}: {}",
            a.k_max,
            if increasing { "yes" } else { "no" }
        ));
    }
    r.extra = json!({ "fitted_exponent": slope, "scaled_increasing": increasing, "parameters": spec });
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SparseMode {
    Set,
    Coloring,
}

pub fn sparse(n: usize, d: usize, l: usize, mode: SparseMode, cap: usize, seed: u64) -> anyhow::Result<Report> {
    let g = random_regular_graph(n, d, seed)?;
    let cycles = g.count_short_cycles(6);
    let mut r = Report::new("sparse", seed, "n,d,L,mode,rounds,colors,color_bound,separation,domination,status");
    let cyc: Vec<String> = cycles.iter().map(|c| c.to_string()).collect();
    r.line(format!(
        "graph n={n} d={d} edges={} cycles of length 3..6: {}",
        g.edge_count(),
        cyc.join(" ")
    ));
    match mode {
        SparseMode::Set => {
            let s = sparse_set_labeling_with_cap(&g, l, seed, cap)?;
            let c = check_sparse_set(&g, &s.labels, l, None);
            let size = s.labels.iter().filter(|&&b| b == 1).count();
            r.pass = c.separation && c.domination;
            r.line(format!("L={l} selected {size} vertices"));
            r.line(format!(
                "separation {}, domination {}, rounds={}",
                ok(c.separation),
                ok(c.domination),
                s.rounds
            ));
            r.csv_rows.push(format!(
                "{n},{d},{l},set,{},,,{},{},{}",
                s.rounds,
                c.separation,
                c.domination,
                status(r.pass)
            ));
            r.rows.push(json!({
                "n": n, "d": d, "L": l, "mode": "set", "rounds": s.rounds, "selected": size,
                "separation": c.separation, "domination": c.domination, "cycles": cycles, "labels": s.labels,
            }));
        }
        SparseMode::Coloring => {
            let c = sparse_coloring_with_cap(&g, l, seed, cap)?;
            let separated = check_coloring(&g, &c.colors, l);
            let bound = ball_size(d as u32, l);
            let count = c.color_count();
            r.pass = separated && count as u128 <= bound;
            let rel = if count as u128 <= bound { "≤" } else { ">" };
            r.line(format!(
                "colors {count} {rel} {bound} = |B_{l}| in T_{d}, separation {}, phases={} rounds={}",
                ok(separated),
                c.rounds_per_phase.len(),
                c.rounds_per_phase.iter().sum::<usize>()
            ));
            r.csv_rows.push(format!(
                "{n},{d},{l},coloring,{},{count},{bound},{separated},,{}",
                c.rounds_per_phase.iter().sum::<usize>(),
                status(r.pass)
            ));
            r.rows.push(json!({
                "n": n, "d": d, "L": l, "mode": "coloring", "colors": count, "color_bound": bound.to_string(),
                "separation": separated, "rounds_per_phase": c.rounds_per_phase, "cycles": cycles,
                "coloring": c.colors,
            }));
        }
    }
    Ok(r)
}
