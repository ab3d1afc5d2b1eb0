//! Invariant suite over fixed parameter grids.
//!
//! Each property returns a short detail line on success and a reason on
//! failure. The suite is what the `verify` subcommand prints.

use num_complex::Complex64;

use crate::analytic::{
    cross_check_single_node, limiting_pair, limiting_single_node, tvd_limit_single_node_asymptotic,
    tvd_pair_closed, tvd_pair_sum, QuadLaw,
};
use crate::initial::{make_pair, make_quad, make_single_node, InitialStateSpec, PairBranch};
use crate::spectral::{
    decompose, index_classes, limiting_distribution, reconstruct, EigenIndex, EigenPair,
    SpectralBasis,
};
use crate::walk::{
    apply_coin, apply_shift, node_distribution, step, AveragedWalk, CycleParams, WalkState,
};

/// Deliberate corruptions used as negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Negate every `c_jk` seen by the eigen-relation property.
    pub flip_eigenvalue_sign: bool,
}

type Check = fn(&Faults) -> Result<String, String>;

#[derive(Clone, Copy)]
pub struct Property {
    pub module: &'static str,
    pub name: &'static str,
    check: Check,
}

impl Property {
    pub fn run(&self, faults: &Faults) -> PropertyOutcome {
        let (passed, detail) = match (self.check)(faults) {
            Ok(detail) => (true, detail),
            Err(reason) => (false, reason),
        };
        PropertyOutcome {
            module: self.module,
            name: self.name,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn properties() -> Vec<Property> {
    macro_rules! prop {
        ($module:literal, $name:literal, $check:expr) => {
            Property {
                module: $module,
                name: $name,
                check: $check,
            }
        };
    }
    vec![
        prop!(
            "walk",
            "norm preservation over 10^4 steps",
            norm_preservation
        ),
        prop!(
            "walk",
            "step equals dense walk operator",
            step_matches_dense
        ),
        prop!("walk", "coin is an involution", coin_involution),
        prop!("walk", "shift is a slot permutation", shift_permutation),
        prop!(
            "walk",
            "parity confinement from a single node",
            parity_confinement
        ),
        prop!(
            "walk",
            "distribution mass after 10^4 steps",
            distribution_mass
        ),
        prop!("spectral", "eigen-relation", eigen_relation),
        prop!("spectral", "orthonormal completeness", completeness),
        prop!("spectral", "conjugate symmetry", conjugate_symmetry),
        prop!(
            "spectral",
            "limit invariant under one step",
            limit_step_invariance
        ),
        prop!(
            "spectral",
            "decompose/reconstruct identity",
            decompose_reconstruct
        ),
        prop!("spectral", "class shape matches index rule", class_shape),
        prop!(
            "initial",
            "constructors are normalized",
            constructors_normalized
        ),
        prop!(
            "initial",
            "pair states evolve by a global phase",
            pair_global_phase
        ),
        prop!(
            "initial",
            "quad states span two conjugate classes",
            quad_classes
        ),
        prop!(
            "analytic",
            "closed-form distributions are normalized",
            analytic_normalized
        ),
        prop!(
            "analytic",
            "single-node formula equals spectral projection",
            single_node_oracle
        ),
        prop!(
            "analytic",
            "pair formula equals frozen distribution",
            pair_frozen
        ),
        prop!(
            "analytic",
            "quad law equals simulated average",
            quad_law_simulation
        ),
        prop!(
            "analytic",
            "pair sum equals pair closed form",
            pair_sum_closed_form
        ),
        prop!(
            "analytic",
            "asymptotic distance approaches exact",
            asymptotic_trend
        ),
    ]
}

/// Runs every property.
pub fn run(faults: &Faults) -> Vec<PropertyOutcome> {
    let props = properties();
    std::thread::scope(|scope| {
        let handles: Vec<_> = props
            .iter()
            .map(|p| scope.spawn(move || p.run(faults)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("property check panicked"))
            .collect()
    })
}

/// Dense `2d × 2d` matrix of one step, built entry by entry from the coin and
/// shift definitions. Row/column index is the coin-major slot `s * d + v`.
pub fn dense_walk_operator(params: CycleParams) -> Vec<Vec<Complex64>> {
    let d = params.nodes();
    let n = params.dim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = vec![vec![Complex64::default(); n]; n];
    for s_in in 0..2 {
        for v in 0..d {
            for s_out in 0..2 {
                let coin = if s_in * s_out == 1 { -h } else { h };
                // coin 0 → v+1, coin 1 → v-1
                let target = if s_out == 0 {
                    (v + 1) % d
                } else {
                    (v + d - 1) % d
                };
                u[s_out * d + target][s_in * d + v] = Complex64::new(coin, 0.0);
            }
        }
    }
    u
}

pub fn dense_apply(matrix: &[Vec<Complex64>], amps: &[Complex64]) -> Vec<Complex64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(amps).map(|(m, a)| m * a).sum())
        .collect()
}

/// Deterministic, non-symmetric normalized state for grid checks.
pub fn generic_state(params: CycleParams, seed: u64) -> WalkState {
    let n = params.dim();
    let mut amps: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = (i as f64 + 1.0) * (seed as f64 + 1.618_033_988_75);
            Complex64::new((1.3 * x).sin() + 0.2, (0.7 * x * x).cos())
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    WalkState::new(params, amps).expect("normalized by construction")
}

fn cycle(d: usize) -> CycleParams {
    CycleParams::new(d).expect("grid cycle sizes are valid")
}

fn even_sizes(max: usize) -> impl Iterator<Item = CycleParams> {
    (4..=max).step_by(2).map(cycle)
}

fn fail(msg: String) -> Result<String, String> {
    Err(msg)
}

fn norm_preservation(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [4, 24, 50] {
        let p = cycle(d);
        for mut psi in [make_single_node(p, 1).unwrap(), generic_state(p, 7)] {
            for _ in 0..10_000 {
                psi.step_mut();
                worst = worst.max((psi.norm() - 1.0).abs());
            }
        }
    }
    if worst > 1e-9 {
        return fail(format!("norm drift {worst:e} > 1e-9"));
    }
    Ok(format!("max |‖ψ_t‖ - 1| = {worst:.2e}"))
}

fn step_matches_dense(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [4, 6, 8, 12, 24] {
        let p = cycle(d);
        let u = dense_walk_operator(p);
        let mut inputs: Vec<WalkState> = (0..2)
            .flat_map(|s| (0..d).map(move |v| WalkState::basis(p, s, v).unwrap()))
            .collect();
        inputs.push(generic_state(p, 3));
        for psi in inputs {
            let dense = dense_apply(&u, psi.amplitudes());
            let fast = step(&psi);
            for (a, b) in dense.iter().zip(fast.amplitudes()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    if worst > 1e-13 {
        return fail(format!("max entry deviation {worst:e} > 1e-13"));
    }
    Ok(format!("max entry deviation {worst:.2e}"))
}

fn coin_involution(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for p in even_sizes(24) {
        let psi = generic_state(p, 11);
        worst = worst.max(apply_coin(&apply_coin(&psi)).max_abs_diff(&psi));
    }
    if worst > 1e-14 {
        return fail(format!("H·H deviates by {worst:e}"));
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn shift_permutation(_: &Faults) -> Result<String, String> {
    for p in even_sizes(24) {
        let psi = generic_state(p, 5);
        let shifted = apply_shift(&psi);
        let key = |a: &Complex64| (a.re.to_bits(), a.im.to_bits());
        let mut before: Vec<_> = psi.amplitudes().iter().map(key).collect();
        let mut after: Vec<_> = shifted.amplitudes().iter().map(key).collect();
        before.sort_unstable();
        after.sort_unstable();
        if before != after {
            return fail(format!("{p}: shifted amplitudes are not a permutation"));
        }
    }
    Ok("bitwise permutation for d = 4..24".into())
}

fn parity_confinement(_: &Faults) -> Result<String, String> {
    for d in [8, 24, 26] {
        let p = cycle(d);
        for v0 in [0, 3] {
            let mut psi = make_single_node(p, v0).unwrap();
            for t in 0..=1000 {
                for (v, x) in psi.node_probabilities().into_iter().enumerate() {
                    if (v + t + d - v0) % 2 == 1 && x != 0.0 {
                        return fail(format!("{p} v0={v0}: p_{t}({v}) = {x:e}"));
                    }
                }
                psi.step_mut();
            }
        }
    }
    Ok("exact zeros on the wrong parity, t <= 1000".into())
}

fn distribution_mass(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [6, 24, 50] {
        let p = cycle(d);
        let mut psi = generic_state(p, 2);
        for _ in 0..10_000 {
            psi.step_mut();
        }
        worst = worst.max((node_distribution(&psi).total() - 1.0).abs());
    }
    if worst > 1e-12 {
        return fail(format!("mass deviation {worst:e} > 1e-12"));
    }
    Ok(format!("max |Σp - 1| = {worst:.2e}"))
}

fn eigen_relation(faults: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [4, 6, 8, 12, 24, 50] {
        let p = cycle(d);
        for slot in 0..p.dim() {
            let idx = EigenIndex::from_slot(slot);
            let pair = EigenPair::new(idx.j, idx.k, p).map_err(|e| e.to_string())?;
            let c = if faults.flip_eigenvalue_sign {
                -pair.c
            } else {
                pair.c
            };
            let phi = pair.vector(p);
            let lhs = step(&phi);
            let residual = lhs
                .amplitudes()
                .iter()
                .zip(phi.amplitudes())
                .map(|(u, v)| (u - c * v).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual >= 1e-10 {
                return fail(format!(
                    "{p} (j={}, k={}): ‖Uφ - cφ‖ = {residual:e}",
                    idx.j, idx.k
                ));
            }
            worst = worst.max(residual);
        }
    }
    Ok(format!("max ‖Uφ - cφ‖ = {worst:.2e}"))
}

/// Largest deviation of the eigenvector Gram matrix from the identity.
pub fn gram_deviation(params: CycleParams) -> f64 {
    let vectors: Vec<WalkState> = (0..params.dim())
        .map(|slot| {
            let idx = EigenIndex::from_slot(slot);
            EigenPair::new(idx.j, idx.k, params).unwrap().vector(params)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (a, x) in vectors.iter().enumerate() {
        for (b, y) in vectors.iter().enumerate().skip(a) {
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((x.inner(y).unwrap() - expect).norm());
        }
    }
    worst
}

fn completeness(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for p in even_sizes(50) {
        let dev = gram_deviation(p);
        if dev > 1e-11 {
            return fail(format!("{p}: Gram deviation {dev:e} > 1e-11"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("max Gram deviation {worst:.2e} for d = 4..50"))
}

fn conjugate_symmetry(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for p in even_sizes(50) {
        for m in 1..p.half() {
            for k in 0..2 {
                let c = EigenPair::new(m, k, p).unwrap().c;
                let mirrored = EigenPair::new(p.half() + m, k, p).unwrap().c;
                worst = worst.max((mirrored - c.conj()).norm());
            }
        }
    }
    if worst > 1e-13 {
        return fail(format!("max deviation {worst:e} > 1e-13"));
    }
    Ok(format!("max |c_(d/2+m) - conj c_m| = {worst:.2e}"))
}

fn limit_step_invariance(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [6, 12, 24, 32] {
        let p = cycle(d);
        let basis = SpectralBasis::new(p).map_err(|e| e.to_string())?;
        for psi in [make_single_node(p, 0).unwrap(), generic_state(p, 9)] {
            let before = limiting_distribution(&psi, &basis).map_err(|e| e.to_string())?;
            let after = limiting_distribution(&step(&psi), &basis).map_err(|e| e.to_string())?;
            worst = worst.max(before.max_abs_diff(&after));
        }
    }
    if worst > 1e-11 {
        return fail(format!("π(Ψ) vs π(UΨ) deviation {worst:e} > 1e-11"));
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn decompose_reconstruct(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [4, 10, 24, 50] {
        let p = cycle(d);
        let basis = SpectralBasis::new(p).map_err(|e| e.to_string())?;
        // coefficient vector → state → coefficient vector
        let coefs: Vec<Complex64> = generic_state(p, 13).amplitudes().to_vec();
        let amps = reconstruct(&coefs, &basis).map_err(|e| e.to_string())?;
        let state = WalkState::new(p, amps).map_err(|e| e.to_string())?;
        let back = decompose(&state, &basis).map_err(|e| e.to_string())?;
        for (a, b) in coefs.iter().zip(&back) {
            worst = worst.max((a - b).norm());
        }
        // state → coefficients → state, plus Parseval
        let psi = generic_state(p, 17);
        let coefs = decompose(&psi, &basis).map_err(|e| e.to_string())?;
        let parseval: f64 = coefs.iter().map(|c| c.norm_sqr()).sum();
        worst = worst.max((parseval - 1.0).abs());
        let amps = reconstruct(&coefs, &basis).map_err(|e| e.to_string())?;
        for (a, b) in amps.iter().zip(psi.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    if worst > 1e-11 {
        return fail(format!("round-trip deviation {worst:e} > 1e-11"));
    }
    Ok(format!("max round-trip deviation {worst:.2e}"))
}

fn class_shape(_: &Faults) -> Result<String, String> {
    for p in even_sizes(64) {
        let basis = SpectralBasis::new(p).map_err(|e| e.to_string())?;
        let numeric: Vec<_> = basis.classes().iter().map(|c| c.members.clone()).collect();
        if numeric != index_classes(p) {
            return fail(format!("{p}: classes disagree with index rule"));
        }
        if basis
            .classes()
            .iter()
            .any(|c| c.members.iter().any(|m| m.k != c.members[0].k))
        {
            return fail(format!("{p}: a class mixes k = 0 and k = 1"));
        }
    }
    Ok("numeric grouping equals {j, d/2 - j} per k for d = 4..64".into())
}

fn all_specs(p: CycleParams) -> Vec<InitialStateSpec> {
    let mut specs: Vec<InitialStateSpec> = (0..p.nodes())
        .map(|v0| InitialStateSpec::SingleNode { v0 })
        .collect();
    for k in 0..2 {
        for m in 0..=p.m_max() {
            specs.push(InitialStateSpec::Pair {
                m,
                k,
                branch: PairBranch::Lower,
            });
            if m >= 1 {
                specs.push(InitialStateSpec::Pair {
                    m,
                    k,
                    branch: PairBranch::Upper,
                });
                specs.push(InitialStateSpec::Quad { m, k });
            }
        }
    }
    specs
}

fn constructors_normalized(_: &Faults) -> Result<String, String> {
    let mut count = 0;
    for p in even_sizes(32) {
        for spec in all_specs(p) {
            let psi = spec.build(p).map_err(|e| format!("{p} {spec}: {e}"))?;
            if (psi.norm() - 1.0).abs() > 1e-12 {
                return fail(format!("{p} {spec}: norm {}", psi.norm()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} states within 1e-12"))
}

fn pair_global_phase(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [8, 12, 24, 30] {
        let p = cycle(d);
        for spec in all_specs(p) {
            let InitialStateSpec::Pair { m, k, branch } = spec else {
                continue;
            };
            let (ja, jb) = match branch {
                PairBranch::Lower => (m, p.half() - m),
                PairBranch::Upper => (p.half() + m, d - m),
            };
            let ca = EigenPair::new(ja, k, p).unwrap().c;
            let cb = EigenPair::new(jb, k, p).unwrap().c;
            if (ca - cb).norm() > 1e-12 {
                return fail(format!(
                    "{p} {spec}: eigenvalues differ by {:e}",
                    (ca - cb).norm()
                ));
            }
            let psi0 = make_pair(p, m, k, branch).unwrap();
            let mut psi = psi0.clone();
            for _ in 0..500 {
                psi.step_mut();
                worst = worst.max((psi.inner(&psi0).unwrap().norm() - 1.0).abs());
            }
        }
    }
    if worst > 1e-10 {
        return fail(format!("|⟨Ψ_t|Ψ_0⟩| deviates from 1 by {worst:e}"));
    }
    Ok(format!("max ||⟨Ψ_t|Ψ_0⟩| - 1| = {worst:.2e}"))
}

fn quad_classes(_: &Faults) -> Result<String, String> {
    for d in [8, 12, 24, 32] {
        let p = cycle(d);
        let basis = SpectralBasis::new(p).map_err(|e| e.to_string())?;
        for m in 1..=p.m_max() {
            for k in 0..2 {
                let coefs = decompose(&make_quad(p, m, k).unwrap(), &basis).unwrap();
                let touched: Vec<_> = basis
                    .classes()
                    .iter()
                    .filter(|c| c.members.iter().any(|i| coefs[i.slot()].norm() > 1e-12))
                    .collect();
                if touched.len() != 2 {
                    return fail(format!("{p} m={m} k={k}: spans {} classes", touched.len()));
                }
                let phase = EigenPair::new(m, k, p).unwrap().phase;
                let (a, b) = (touched[0].eigenvalue, touched[1].eigenvalue);
                let e = Complex64::from_polar(1.0, phase);
                let conjugate = (a - b.conj()).norm() < 1e-12
                    && ((a - e).norm() < 1e-12 || (b - e).norm() < 1e-12);
                if !conjugate {
                    return fail(format!(
                        "{p} m={m} k={k}: eigenvalues {a} and {b} not e^(±iφ)"
                    ));
                }
            }
        }
    }
    Ok("two classes with eigenvalues e^(±iφ_mk) for d in {8,12,24,32}".into())
}

fn analytic_normalized(_: &Faults) -> Result<String, String> {
    let mut count = 0;
    for p in even_sizes(64) {
        for v0 in [0, p.nodes() / 3] {
            limiting_single_node(p, v0).map_err(|e| e.to_string())?;
            count += 1;
        }
        for m in 0..=p.m_max() {
            limiting_pair(p, m).map_err(|e| e.to_string())?;
            count += 1;
            if m >= 1 {
                let law = QuadLaw::new(p, m, 0).map_err(|e| e.to_string())?;
                for t in [0, 1, 7, 100] {
                    law.at(t).map_err(|e| e.to_string())?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!(
        "{count} closed-form distributions sum to 1 within 1e-10"
    ))
}

fn single_node_oracle(_: &Faults) -> Result<String, String> {
    for d in [8, 12, 16, 24, 32] {
        cross_check_single_node(cycle(d), 0).map_err(|e| e.to_string())?;
    }
    Ok("pointwise within 1e-9 for d in {8,12,16,24,32}".into())
}

fn pair_frozen(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for p in even_sizes(32) {
        for spec in all_specs(p) {
            let InitialStateSpec::Pair { m, .. } = spec else {
                continue;
            };
            let p0 = node_distribution(&spec.build(p).unwrap());
            let closed = limiting_pair(p, m).map_err(|e| e.to_string())?;
            worst = worst.max(closed.max_abs_diff(&p0));
        }
    }
    if worst > 1e-12 {
        return fail(format!("max pointwise deviation {worst:e} > 1e-12"));
    }
    Ok(format!("max pointwise deviation {worst:.2e}"))
}

/// Largest pointwise gap between the simulated running mean and the quad law for `t ≤ t_max`.
pub fn quad_law_deviation(
    params: CycleParams,
    m: usize,
    k: usize,
    t_max: usize,
) -> crate::Result<f64> {
    let law = QuadLaw::new(params, m, k)?;
    let walk = AveragedWalk::new(make_quad(params, m, k)?);
    let mut worst: f64 = 0.0;
    for sample in walk.take(t_max + 1) {
        worst = worst.max(sample.averaged.max_abs_diff(&law.at(sample.t)?));
    }
    Ok(worst)
}

fn quad_law_simulation(_: &Faults) -> Result<String, String> {
    let worst = quad_law_deviation(cycle(24), 3, 0, 1000).map_err(|e| e.to_string())?;
    if worst > 1e-9 {
        return fail(format!("d=24 m=3 k=0: deviation {worst:e} > 1e-9"));
    }
    let mut extra: f64 = 0.0;
    for (d, m, k) in [(8, 1, 1), (16, 3, 0), (20, 4, 1), (32, 7, 0)] {
        extra = extra.max(quad_law_deviation(cycle(d), m, k, 300).map_err(|e| e.to_string())?);
    }
    if extra > 1e-9 {
        return fail(format!(
            "additional (d, m, k) grid: deviation {extra:e} > 1e-9"
        ));
    }
    Ok(format!("d=24 m=3: {worst:.2e}; other modes: {extra:.2e}"))
}

fn pair_sum_closed_form(_: &Faults) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in even_sizes(64) {
        for m in 1..=p.m_max() {
            if let Some(closed) = tvd_pair_closed(p, m).map_err(|e| e.to_string())? {
                let sum = tvd_pair_sum(p, m).map_err(|e| e.to_string())?;
                worst = worst.max((sum - closed).abs());
                count += 1;
            }
        }
    }
    if worst > 1e-12 {
        return fail(format!("max |sum - closed| = {worst:e} > 1e-12"));
    }
    Ok(format!(
        "{count} (d, m) cases, max |sum - closed| = {worst:.2e}"
    ))
}

fn asymptotic_trend(_: &Faults) -> Result<String, String> {
    let gap = |d: usize| -> Result<f64, String> {
        let p = cycle(d);
        let exact = crate::walk::tvd(&limiting_single_node(p, 0).map_err(|e| e.to_string())?);
        let approx = tvd_limit_single_node_asymptotic(p).map_err(|e| e.to_string())?;
        Ok((exact - approx).abs())
    };
    let gaps: Vec<(usize, f64)> = [16, 24, 32, 48, 64]
        .into_iter()
        .map(|d| gap(d).map(|g| (d, g)))
        .collect::<Result<_, _>>()?;
    let (first, last) = (gaps[0].1, gaps[gaps.len() - 1].1);
    let listing: Vec<String> = gaps
        .iter()
        .map(|(d, g)| format!("d={d}: {g:.2e}"))
        .collect();
    if last >= first {
        return fail(format!("gap does not shrink: {}", listing.join(", ")));
    }
    Ok(listing.join(", "))
}
