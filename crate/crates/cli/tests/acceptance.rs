//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fiid::bounds::thm2_bound;
use fiid::information::{
    max_single_function_correlation, maximal_correlation, mutual_information, JointDistribution, Provenance,
};
use fiid::processes::{
    check_coloring, check_sparse_set, exact_joint, gaussian_sign_measure, listing_normalized_mi,
    random_regular_graph, sparse_coloring, sparse_set_labeling, BlockFactorRule, GaussianSignSpec,
    MeasurementMethod,
};
use fiid::tree::ball_size;
use fiid::words::{build_generators, verify_coset_factorization, verify_free_claim, DEFAULT_SEQUENCE_BUDGET};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Independent of the library's formula helpers.
fn beta(d: u32, k: usize) -> f64 {
    let l = (k / 2) as i32;
    let b = (d as f64 - 1.0).powi(l);
    if k % 2 == 1 {
        2.0 / (d as f64 * b)
    } else {
        1.0 / b
    }
}

fn c1_ranks() -> Check {
    for d in 3u32..=6 {
        for k in 2usize..=7 {
            let l = (k / 2) as u32;
            let want = if k % 2 == 1 {
                d as usize * (d as usize - 1).pow(l) / 2
            } else {
                (d as usize - 1).pow(l)
            };
            let set = build_generators(d, k).map_err(|e| e.to_string())?;
            ensure(set.elements().len() == want, || {
                format!("d={d} k={k}: {} words, want {want}", set.elements().len())
            })?;
        }
    }
    Ok("24 (d,k) pairs".into())
}

fn c2_free_claim() -> Check {
    let mut total = 0;
    for d in 3u32..=5 {
        for k in 2usize..=5 {
            let set = build_generators(d, k).map_err(|e| e.to_string())?;
            let r = verify_free_claim(&set, 3).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("d={d} k={k}: {} {:?}", r.status(), r.failure))?;
            total += r.checked;
        }
    }
    Ok(format!("{total} products"))
}

fn c3_factorization() -> Check {
    let r = verify_coset_factorization(4, 3, 4, DEFAULT_SEQUENCE_BUDGET).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.failure))?;
    ensure(ball_size(4, 4) == 161, || format!("ball_size(4,4) = {}", ball_size(4, 4)))?;
    ensure(r.checked == 161, || format!("{} elements", r.checked))?;
    Ok("161 elements, one factorization each".into())
}

fn c4_majority() -> Check {
    let rule = BlockFactorRule::majority(1).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for k in 1..=3usize {
        let m = exact_joint(&rule, 3, k, 1 << 14).map_err(|e| e.to_string())?;
        ensure(m.method == MeasurementMethod::ExactEnumeration, || "not exact".into())?;
        let fixed = 2.0 * ((k + 1) * (k + 1)) as f64 / 2f64.powi(k as i32);
        ensure(m.normalized.value <= beta(3, k), || {
            format!("k={k}: I/H = {} > {}", m.normalized.value, beta(3, k))
        })?;
        ensure(m.mi.value <= fixed, || format!("k={k}: I = {} > {fixed}", m.mi.value))?;
        parts.push(format!("k={k} I/H={:.4}", m.normalized.value));
    }
    Ok(parts.join(", "))
}

fn c5_sharpness() -> Check {
    let mut parts = Vec::new();
    for k in 1..=4usize {
        let b = beta(3, k);
        let at10 = listing_normalized_mi(3, 10, k).map_err(|e| e.to_string())?;
        ensure((at10 - b).abs() <= 0.05, || format!("k={k}: ratio {at10} vs {b}"))?;
        let mut prev = f64::INFINITY;
        for r in k..=10 {
            let gap = b - listing_normalized_mi(3, r, k).map_err(|e| e.to_string())?;
            ensure(gap <= prev, || format!("k={k}: gap grows at R={r}"))?;
            prev = gap;
        }
        parts.push(format!("k={k} gap {:.4}", b - at10));
    }
    Ok(parts.join(", "))
}

fn random_joint(rng: &mut ChaCha8Rng, m: usize, n: usize) -> JointDistribution {
    let w: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>().powi(3)).collect();
    JointDistribution::from_weights(m, n, &w, Provenance::Exact).unwrap()
}

fn c6_quadratic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(406);
    for _ in 0..1000 {
        let m = rng.random_range(1..=5);
        let n = rng.random_range(1..=5);
        let j = random_joint(&mut rng, m, n);
        let a = maximal_correlation(&j).map_err(|e| e.to_string())?;
        let i = mutual_information(&j).value;
        ensure(i <= (m as f64 - 1.0) * a * a + 1e-8, || format!("m={m} n={n}: I={i} α={a}"))?;
    }
    for s in 0..=100 {
        let q = s as f64 / 100.0;
        let j = JointDistribution::symmetric_binary(q).unwrap();
        let a = maximal_correlation(&j).map_err(|e| e.to_string())?;
        ensure((a - (2.0 * q - 1.0).abs()).abs() <= 1e-8, || format!("q={q}: α={a}"))?;
    }
    Ok("1000 joints, 101 binary checks".into())
}

fn c7_single_function() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = rng.random_range(2..=5);
        let w: Vec<f64> = (0..m * m).map(|_| rng.random::<f64>().powi(3)).collect();
        let sym: Vec<f64> = (0..m * m).map(|i| w[i] + w[(i % m) * m + i / m]).collect();
        let j = JointDistribution::from_weights(m, m, &sym, Provenance::Exact).unwrap();
        let two = maximal_correlation(&j).map_err(|e| e.to_string())?;
        let one = max_single_function_correlation(&j).map_err(|e| e.to_string())?;
        worst = worst.max(two - one);
        ensure(two - one <= 1e-6, || format!("{two} vs {one}"))?;
    }
    Ok(format!("largest gap {worst:.2e}"))
}

fn c8_gaussian() -> Check {
    let mc = GaussianSignSpec::new(3, 0.25, 8).map_err(|e| e.to_string())?;
    for k in 1..=4 {
        let g = gaussian_sign_measure(&mc, k, 100_000, 2026).map_err(|e| e.to_string())?;
        ensure(g.agrees() == Some(true), || {
            format!("k={k}: corr {:?} vs {}, mi {:?} vs {}", g.mc_corr, g.corr, g.monte_carlo.map(|m| m.mi), g.mi)
        })?;
    }
    let closed = GaussianSignSpec::new(3, 0.25, 400).map_err(|e| e.to_string())?;
    let mut scaled = Vec::new();
    for k in 1..=8 {
        let g = gaussian_sign_measure(&closed, k, 0, 0).map_err(|e| e.to_string())?;
        let b = thm2_bound(3, k, 2).map_err(|e| e.to_string())?;
        ensure(g.mi <= b, || format!("k={k}: MI {} > {b}", g.mi))?;
        if k >= 2 {
            scaled.push(g.mi * 2f64.powi(k as i32));
        }
    }
    ensure(scaled.windows(2).all(|w| w[1] > w[0]), || format!("MI·2^k = {scaled:?}"))?;
    Ok(format!("MI·2^k from {:.4} to {:.4}", scaled[0], scaled[scaled.len() - 1]))
}

fn c9_local() -> Check {
    let g = random_regular_graph(1000, 3, 9).map_err(|e| e.to_string())?;
    let s = sparse_set_labeling(&g, 2, 9).map_err(|e| e.to_string())?;
    let c = check_sparse_set(&g, &s.labels, 2, None);
    ensure(c.separation && c.domination, || format!("{c:?}"))?;
    let col = sparse_coloring(&g, 2, 9).map_err(|e| e.to_string())?;
    ensure(check_coloring(&g, &col.colors, 2), || "coloring not separated".into())?;
    ensure(col.color_count() <= 10, || format!("{} colors", col.color_count()))?;
    Ok(format!("{} rounds, {} colors", s.rounds, col.color_count()))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fiid"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c10_determinism() -> Check {
    let runs: [&[&str]; 6] = [
        &["gaussian", "--kmax", "4", "--D", "8", "--samples", "100000", "--seed", "2026", "--format", "csv"],
        &["measure", "--process", "majority", "--k", "1-3", "--samples", "20000", "--budget", "1", "--format", "json"],
        &["measure", "--process", "gaussian-sign", "--k", "2", "--samples", "20000", "--seed", "4"],
        &["measure", "--process", "listing", "--k", "1", "--samples", "300", "--labels", "16", "--format", "csv"],
        &["sparse", "--n", "1000", "--L", "2", "--mode", "set", "--seed", "9", "--format", "json"],
        &["sparse", "--n", "1000", "--L", "2", "--mode", "coloring", "--seed", "9", "--format", "json"],
    ];
    for args in runs {
        let reference = run_cli(args, None)?;
        for t in ["1", "2", "4", "1"] {
            ensure(run_cli(args, Some(t))? == reference, || format!("{args:?} differs at --threads {t}"))?;
        }
    }
    Ok("6 commands × 5 runs byte-identical".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("generating-set ranks", 1, c1_ranks),
        ("bounded free claim", 60, c2_free_claim),
        ("coset factorization", 10, c3_factorization),
        ("exact majority compliance", 10, c4_majority),
        ("listing sharpness trend", 1, c5_sharpness),
        ("mutual information vs maximal correlation", 30, c6_quadratic),
        ("single-function maximal correlation", 60, c7_single_function),
        ("gaussian-sign pipeline", 120, c8_gaussian),
        ("sparse sets and colorings", 30, c9_local),
        ("determinism across thread counts", 300, c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let outcome = match result {
            Ok(_) if took > Duration::from_secs(limit) => Err(format!("took {took:.2?}, limit {limit} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
