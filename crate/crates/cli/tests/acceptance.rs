//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! report is printed in order; exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cyclewalk::analytic::{
    cross_check_single_node, limiting_single_node, tvd_limit_single_node_asymptotic,
    tvd_pair_closed, tvd_pair_sum, QuadLaw,
};
use cyclewalk::initial::{make_pair, make_quad, make_single_node};
use cyclewalk::spectral::{eigenvalue, eigenvector, limiting_distribution, SpectralBasis};
use cyclewalk::verify::gram_deviation;
use cyclewalk::walk::{
    averaged_distribution, evolve_averaged, step, tvd, tvd_series, AveragedWalk,
};
use cyclewalk::{CycleParams, Error, PairBranch};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cycle(d: usize) -> CycleParams {
    CycleParams::new(d).unwrap()
}

fn within(label: &str, value: f64, target: f64, tol: f64) -> Outcome {
    let gap = (value - target).abs();
    if gap <= tol {
        Ok(format!("{label} = {value:.6} (|Δ| = {gap:.1e} <= {tol:e})"))
    } else {
        Err(format!(
            "{label} = {value:.6}, target {target}, |Δ| = {gap:.3e} > {tol:e}"
        ))
    }
}

fn timed(limit: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = body()?;
    let elapsed = start.elapsed();
    if elapsed > limit {
        return Err(format!("{detail}; took {elapsed:?} > {limit:?}"));
    }
    Ok(format!("{detail}; {:.0?}", elapsed))
}

fn eigen_relation() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut worst: f64 = 0.0;
        for d in [4, 6, 8, 12, 24, 50] {
            let p = cycle(d);
            for j in 0..d {
                for k in 0..2 {
                    let phi = eigenvector(j, k, p).unwrap();
                    let c = eigenvalue(j, k, p).unwrap();
                    let residual = step(&phi)
                        .amplitudes()
                        .iter()
                        .zip(phi.amplitudes())
                        .map(|(u, v)| (u - c * v).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if residual >= 1e-10 {
                        return Err(format!("d={d} j={j} k={k}: residual {residual:e}"));
                    }
                    worst = worst.max(residual);
                }
            }
        }
        Ok(format!("max ‖Uφ - cφ‖ = {worst:.2e} < 1e-10"))
    })
}

fn completeness() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in (4..=50).step_by(2) {
        let dev = gram_deviation(cycle(d));
        if dev > 1e-11 {
            return Err(format!("d={d}: Gram deviation {dev:e}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("max |G - I| = {worst:.2e} <= 1e-11 for d = 4..50"))
}

fn figure_one() -> Outcome {
    timed(Duration::from_secs(2), || {
        let p = cycle(24);
        let series = tvd_series(&make_single_node(p, 0).unwrap(), 5000);
        let simulated = series.last().unwrap().delta;
        let exact = tvd(&limiting_single_node(p, 0).map_err(|e| e.to_string())?);
        let asymptotic = tvd_limit_single_node_asymptotic(p).map_err(|e| e.to_string())?;
        let a = within("Δ_5000 vs exact Δ∞", simulated, exact, 0.005)?;
        let b = within("exact Δ∞", exact, 0.054, 0.001)?;
        let c = within("asymptotic Δ∞", asymptotic, 0.054, 0.001)?;
        Ok(format!("{a}; {b}; {c}"))
    })
}

fn figure_two() -> Outcome {
    let p = cycle(24);
    let series = tvd_series(&make_pair(p, 3, 0, PairBranch::Lower).unwrap(), 5000);
    let (lo, hi) = series
        .deltas()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    if hi - lo > 1e-12 {
        return Err(format!("Δ_t spread {:e} > 1e-12", hi - lo));
    }
    let closed = tvd_pair_closed(p, 3).unwrap().expect("3 divides 12");
    let agree = within("Δ_t vs closed form", hi, closed, 1e-9)?;
    let rounded = format!("{closed:.3}");
    if rounded != "0.204" {
        return Err(format!("closed form rounds to {rounded}, expected 0.204"));
    }
    Ok(format!(
        "spread {:.1e}; {agree}; rounds to {rounded}",
        hi - lo
    ))
}

fn figure_three() -> Outcome {
    let p = cycle(24);
    let law = QuadLaw::new(p, 3, 0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut deltas = Vec::with_capacity(1001);
    for sample in AveragedWalk::new(make_quad(p, 3, 0).unwrap()).take(1001) {
        let closed = law.at(sample.t).map_err(|e| e.to_string())?;
        worst = worst.max(sample.averaged.max_abs_diff(&closed));
        deltas.push(sample.delta);
    }
    if worst > 1e-7 {
        return Err(format!("p̄_t vs damped law: {worst:e} > 1e-7"));
    }
    let tail = deltas[900..=1000].iter().sum::<f64>() / 101.0;
    if tail <= deltas[0] {
        return Err(format!(
            "tail mean {tail:.6} does not exceed Δ_0 = {:.6}",
            deltas[0]
        ));
    }
    Ok(format!(
        "max pointwise gap {worst:.2e} <= 1e-7; tail mean Δ = {tail:.4} > Δ_0 = {:.4}",
        deltas[0]
    ))
}

fn limit_oracles() -> Outcome {
    let p = cycle(24);
    let psi = make_single_node(p, 0).unwrap();
    let basis = SpectralBasis::new(p).unwrap();
    let projected = limiting_distribution(&psi, &basis).map_err(|e| e.to_string())?;
    let long_run = averaged_distribution(&psi, 100_000);
    let gap = projected.total_variation(&long_run);
    if gap >= 1e-3 {
        return Err(format!("projection vs t=1e5 average: TV {gap:e} >= 1e-3"));
    }
    match cross_check_single_node(p, 0) {
        Ok(closed) => Ok(format!(
            "TV(projection, p̄_100000) = {gap:.2e} < 1e-3; closed form max gap {:.2e} <= 1e-9",
            closed.max_abs_diff(&projected)
        )),
        Err(Error::FormulaDiscrepancy { what, deviation }) => Err(format!(
            "formula discrepancy: {what}, deviation {deviation:e}"
        )),
        Err(other) => Err(other.to_string()),
    }
}

fn consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in (4..=64).step_by(2) {
        let p = cycle(d);
        for m in 1..=p.m_max() {
            if !p.half().is_multiple_of(m) {
                continue;
            }
            let sum = tvd_pair_sum(p, m).unwrap();
            let closed = tvd_pair_closed(p, m).unwrap().unwrap();
            let gap = (sum - closed).abs();
            if gap > 1e-12 {
                return Err(format!("d={d} m={m}: sum {sum} vs closed {closed}"));
            }
            worst = worst.max(gap);
            cases += 1;
        }
        if d >= 8 && p.half() % 2 == 1 {
            let branch = tvd_limit_single_node_asymptotic(p).unwrap();
            if branch != 1.0 / d as f64 {
                return Err(format!("d={d}: odd-half branch returned {branch}"));
            }
        }
    }
    Ok(format!(
        "{cases} (d, m) cases, max gap {worst:.2e} <= 1e-12; 1/d branch exact"
    ))
}

fn conservation() -> Outcome {
    let mut norm_drift: f64 = 0.0;
    let mut mass_drift: f64 = 0.0;
    for d in [4, 24, 50] {
        let p = cycle(d);
        let states = [
            make_single_node(p, 1).unwrap(),
            make_pair(p, p.m_max(), 1, PairBranch::Lower).unwrap(),
            cyclewalk::verify::generic_state(p, 4),
        ];
        for psi0 in states {
            let mut psi = psi0.clone();
            for _ in 0..10_000 {
                psi.step_mut();
                norm_drift = norm_drift.max((psi.norm() - 1.0).abs());
            }
            let (averaged, _) = evolve_averaged(&psi0, 2000);
            for dist in averaged {
                mass_drift = mass_drift.max((dist.total() - 1.0).abs());
            }
        }
    }
    if norm_drift > 1e-9 {
        return Err(format!("norm drift {norm_drift:e} > 1e-9"));
    }
    if mass_drift > 1e-10 {
        return Err(format!("distribution mass drift {mass_drift:e} > 1e-10"));
    }
    for d in [8, 24] {
        let p = cycle(d);
        for v0 in 0..d {
            let mut psi = make_single_node(p, v0).unwrap();
            for t in 0..=500 {
                for (v, x) in psi.node_probabilities().into_iter().enumerate() {
                    if (v + t + d - v0) % 2 == 1 && x != 0.0 {
                        return Err(format!("d={d} v0={v0}: p_{t}({v}) = {x:e}"));
                    }
                }
                psi.step_mut();
            }
        }
    }
    Ok(format!(
        "norm drift {norm_drift:.1e} <= 1e-9; mass drift {mass_drift:.1e} <= 1e-10; parity exact"
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cyclewalk");
    let runs: [&[&str]; 4] = [
        &["figure", "1"],
        &["figure", "2"],
        &["figure", "3"],
        &[
            "simulate",
            "--d",
            "24",
            "--initial",
            "quad:3,0",
            "--t-max",
            "300",
            "--what",
            "analytic_comparison",
        ],
    ];
    for args in runs {
        let once = || {
            let out = Command::new(bin)
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{args:?} exited with {}", out.status));
            }
            Ok(out.stdout)
        };
        if once()? != once()? {
            return Err(format!("{args:?} output differs between runs"));
        }
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 eigen-relation", eigen_relation),
        ("AC2 orthonormal completeness", completeness),
        ("AC3 figure 1 (single node)", figure_one),
        ("AC4 figure 2 (degenerate pair)", figure_two),
        ("AC5 figure 3 (quad)", figure_three),
        ("AC6 limiting-distribution oracles", limit_oracles),
        ("AC7 closed-form consistency", consistency),
        ("AC8 conservation", conservation),
        ("AC9 CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
