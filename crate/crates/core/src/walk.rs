//! State vectors of the coined walk on an even cycle and their evolution.
//!
//! The Hilbert space is `coin ⊗ position` with coin `s ∈ {0, 1}` and node
//! `v ∈ {0, …, d-1}`. Amplitudes are stored coin-major: slot `s * d + v`.
//!
//! One step is `U = S (H ⊗ I)`: a Hadamard on every coin pair followed by a
//! coin-conditioned shift. Coin 0 moves one node up (`v → v+1`) and coin 1
//! moves one node down (`v → v-1`), all indices mod `d`. This orientation is
//! the one under which the closed-form eigensystem in [`crate::spectral`]
//! holds exactly.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `‖ψ‖² - 1` accepted when a state is built from raw amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance on `Σ p(v) - 1` accepted for a node distribution.
pub const DISTRIBUTION_SUM_TOLERANCE: f64 = 1e-10;
/// Rounding noise below this magnitude is clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-14;

/// Size of the cycle. Always even and at least 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleParams {
    d: usize,
}

impl CycleParams {
    pub fn new(d: usize) -> Result<Self> {
        if d < 4 || !d.is_multiple_of(2) {
            return Err(Error::InvalidCycleSize(d));
        }
        Ok(CycleParams { d })
    }

    /// Number of nodes `d`.
    #[inline]
    pub fn nodes(&self) -> usize {
        self.d
    }

    /// `d / 2`.
    #[inline]
    pub fn half(&self) -> usize {
        self.d / 2
    }

    /// Dimension of the full coin ⊗ position space, `2d`.
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.d
    }

    /// Largest mode index for the degenerate pair and quad states, `⌊(d-2)/4⌋`.
    #[inline]
    pub fn m_max(&self) -> usize {
        (self.d - 2) / 4
    }

    #[inline]
    pub(crate) fn slot(&self, s: usize, v: usize) -> usize {
        s * self.d + v
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.d {
            Ok(())
        } else {
            Err(Error::out_of_range("node", v, format!("0..{}", self.d)))
        }
    }
}

impl fmt::Display for CycleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)
    }
}

/// A normalized pure state of the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    params: CycleParams,
    amps: Vec<Complex64>,
}

impl WalkState {
    /// Builds a state from coin-major amplitudes, checking length and normalization.
    pub fn new(params: CycleParams, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != params.dim() {
            return Err(Error::DimensionMismatch {
                expected: params.dim(),
                actual: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr.is_nan() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(WalkState { params, amps })
    }

    /// `|s, v⟩`.
    pub fn basis(params: CycleParams, s: usize, v: usize) -> Result<Self> {
        if s > 1 {
            return Err(Error::out_of_range("coin", s, "0..2"));
        }
        params.check_node(v)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); params.dim()];
        amps[params.slot(s, v)] = Complex64::new(1.0, 0.0);
        Ok(WalkState { params, amps })
    }

    pub(crate) fn from_parts_unchecked(params: CycleParams, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), params.dim());
        WalkState { params, amps }
    }

    #[inline]
    pub fn params(&self) -> CycleParams {
        self.params
    }

    /// Coin-major amplitude slice, `γ[s * d + v]`.
    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, s: usize, v: usize) -> Complex64 {
        self.amps[self.params.slot(s, v)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WalkState) -> Result<Complex64> {
        if self.params != other.params {
            return Err(Error::DimensionMismatch {
                expected: self.params.dim(),
                actual: other.params.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise distance between two states of the same cycle.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        assert_eq!(self.params, other.params, "states live on different cycles");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: Complex64) -> WalkState {
        WalkState {
            params: self.params,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn apply_coin_mut(&mut self) {
        let d = self.params.nodes();
        let (up, down) = self.amps.split_at_mut(d);
        for (a0, a1) in up.iter_mut().zip(down.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = scale_by_inv_sqrt2(x + y);
            *a1 = scale_by_inv_sqrt2(x - y);
        }
    }

    /// Pure permutation of slots: coin 0 rotates up, coin 1 rotates down.
    pub fn apply_shift_mut(&mut self) {
        let d = self.params.nodes();
        let (up, down) = self.amps.split_at_mut(d);
        up.rotate_right(1);
        down.rotate_left(1);
    }

    pub fn step_mut(&mut self) {
        self.apply_coin_mut();
        self.apply_shift_mut();
    }

    pub fn node_probabilities(&self) -> Vec<f64> {
        let d = self.params.nodes();
        (0..d)
            .map(|v| self.amps[v].norm_sqr() + self.amps[d + v].norm_sqr())
            .collect()
    }
}

/// `1/√2` split as `HI + LO`; the rounded `HI` alone biases the norm upward
/// by about 2e-16 per step.
const INV_SQRT2_HI: f64 = std::f64::consts::FRAC_1_SQRT_2;
const INV_SQRT2_LO: f64 = -4.833_646_656_726_457e-17;

#[inline]
fn scale_by_inv_sqrt2(z: Complex64) -> Complex64 {
    Complex64::new(
        z.re.mul_add(INV_SQRT2_HI, z.re * INV_SQRT2_LO),
        z.im.mul_add(INV_SQRT2_HI, z.im * INV_SQRT2_LO),
    )
}

/// `(H ⊗ I) ψ`.
pub fn apply_coin(state: &WalkState) -> WalkState {
    let mut out = state.clone();
    out.apply_coin_mut();
    out
}

/// `S ψ`.
pub fn apply_shift(state: &WalkState) -> WalkState {
    let mut out = state.clone();
    out.apply_shift_mut();
    out
}

/// `U ψ = S (H ⊗ I) ψ`.
pub fn step(state: &WalkState) -> WalkState {
    let mut out = state.clone();
    out.step_mut();
    out
}

/// `p(v) = |γ_{0,v}|² + |γ_{1,v}|²`.
pub fn node_distribution(state: &WalkState) -> Distribution {
    Distribution::from_parts_clamped(state.params, state.node_probabilities())
}

/// A probability distribution over the nodes of the cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    params: CycleParams,
    p: Vec<f64>,
}

impl Distribution {
    /// Validates length, sign (down to `-1e-14`, then clamped) and total mass.
    pub fn new(params: CycleParams, p: Vec<f64>) -> Result<Self> {
        if p.len() != params.nodes() {
            return Err(Error::DimensionMismatch {
                expected: params.nodes(),
                actual: p.len(),
            });
        }
        if let Some((v, &x)) = p
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < -NEGATIVE_CLAMP)
        {
            return Err(Error::InvalidDistribution(format!("p({v}) = {x}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total} deviates from 1 by {:e}",
                (total - 1.0).abs()
            )));
        }
        Ok(Self::from_parts_clamped(params, p))
    }

    pub(crate) fn from_parts_clamped(params: CycleParams, mut p: Vec<f64>) -> Self {
        for x in &mut p {
            if *x < NEGATIVE_CLAMP && *x > -NEGATIVE_CLAMP {
                *x = x.max(0.0);
            }
        }
        Distribution { params, p }
    }

    pub fn uniform(params: CycleParams) -> Self {
        let d = params.nodes();
        Distribution {
            params,
            p: vec![1.0 / d as f64; d],
        }
    }

    pub fn point_mass(params: CycleParams, v: usize) -> Result<Self> {
        params.check_node(v)?;
        let mut p = vec![0.0; params.nodes()];
        p[v] = 1.0;
        Ok(Distribution { params, p })
    }

    #[inline]
    pub fn params(&self) -> CycleParams {
        self.params
    }

    #[inline]
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Total variation distance to another distribution on the same cycle.
    pub fn total_variation(&self, other: &Distribution) -> f64 {
        assert_eq!(
            self.params, other.params,
            "distributions live on different cycles"
        );
        0.5 * self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        assert_eq!(
            self.params, other.params,
            "distributions live on different cycles"
        );
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, v: usize) -> &f64 {
        &self.p[v]
    }
}

/// Distance from the uniform distribution, `½ Σ_v |p(v) - 1/d|`.
pub fn tvd(dist: &Distribution) -> f64 {
    let d = dist.params.nodes();
    let u = 1.0 / d as f64;
    let delta = 0.5 * dist.p.iter().map(|&x| (x.max(0.0) - u).abs()).sum::<f64>();
    delta.clamp(0.0, 1.0 - u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvdPoint {
    pub t: usize,
    pub delta: f64,
}

/// `Δ_t` for consecutive `t = 0, 1, …`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TvdSeries {
    entries: Vec<TvdPoint>,
}

impl TvdSeries {
    pub fn entries(&self) -> &[TvdPoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn deltas(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.delta)
    }

    pub fn last(&self) -> Option<TvdPoint> {
        self.entries.last().copied()
    }

    fn push(&mut self, t: usize, delta: f64) {
        debug_assert!(self.entries.last().map_or(t == 0, |e| e.t + 1 == t));
        self.entries.push(TvdPoint { t, delta });
    }
}

impl FromIterator<TvdPoint> for TvdSeries {
    fn from_iter<I: IntoIterator<Item = TvdPoint>>(iter: I) -> Self {
        let mut series = TvdSeries::default();
        for point in iter {
            series.push(point.t, point.delta);
        }
        series
    }
}

/// One sample of an averaged trajectory.
#[derive(Debug, Clone)]
pub struct AveragedSample {
    pub t: usize,
    /// `p_t`
    pub current: Distribution,
    /// `p̄_t`, the mean of `p_0, …, p_t`
    pub averaged: Distribution,
    /// `Δ_t`, computed from `p̄_t`
    pub delta: f64,
}

/// Unbounded iterator over `(p_t, p̄_t, Δ_t)` for `t = 0, 1, …`.
///
/// The running mean is updated as `p̄_t = p̄_{t-1} + (p_t - p̄_{t-1}) / (t+1)`.
#[derive(Debug, Clone)]
pub struct AveragedWalk {
    state: WalkState,
    mean: Vec<f64>,
    t: usize,
}

impl AveragedWalk {
    pub fn new(state0: WalkState) -> Self {
        AveragedWalk {
            mean: vec![0.0; state0.params.nodes()],
            state: state0,
            t: 0,
        }
    }

    /// State at the time of the next sample.
    pub fn state(&self) -> &WalkState {
        &self.state
    }

    /// Advances by one step and returns `(t, Δ_t)` without materializing distributions.
    pub fn advance(&mut self) -> (usize, f64) {
        let t = self.t;
        self.accumulate();
        let delta = tvd(&Distribution::from_parts_clamped(
            self.state.params,
            self.mean.clone(),
        ));
        self.state.step_mut();
        self.t += 1;
        (t, delta)
    }

    /// Current running mean.
    pub fn mean(&self) -> Distribution {
        Distribution::from_parts_clamped(self.state.params, self.mean.clone())
    }

    fn accumulate(&mut self) -> Vec<f64> {
        let current = self.state.node_probabilities();
        let weight = 1.0 / (self.t as f64 + 1.0);
        for (m, p) in self.mean.iter_mut().zip(&current) {
            *m += (p - *m) * weight;
        }
        current
    }
}

impl Iterator for AveragedWalk {
    type Item = AveragedSample;

    fn next(&mut self) -> Option<AveragedSample> {
        let t = self.t;
        let params = self.state.params;
        let current = Distribution::from_parts_clamped(params, self.accumulate());
        let averaged = Distribution::from_parts_clamped(params, self.mean.clone());
        let delta = tvd(&averaged);
        self.state.step_mut();
        self.t += 1;
        Some(AveragedSample {
            t,
            current,
            averaged,
            delta,
        })
    }
}

/// Evolves `state0` for `t_max` steps and returns every `p̄_t` together with `Δ_t`.
pub fn evolve_averaged(state0: &WalkState, t_max: usize) -> (Vec<Distribution>, TvdSeries) {
    let mut averaged = Vec::with_capacity(t_max + 1);
    let mut series = TvdSeries::default();
    for sample in AveragedWalk::new(state0.clone()).take(t_max + 1) {
        series.push(sample.t, sample.delta);
        averaged.push(sample.averaged);
    }
    (averaged, series)
}

/// Like [`evolve_averaged`] but keeps only `Δ_t`.
pub fn tvd_series(state0: &WalkState, t_max: usize) -> TvdSeries {
    let mut walk = AveragedWalk::new(state0.clone());
    let mut series = TvdSeries::default();
    for _ in 0..=t_max {
        let (t, delta) = walk.advance();
        series.push(t, delta);
    }
    series
}

/// `p̄_{t_max}` without storing the intermediate distributions.
pub fn averaged_distribution(state0: &WalkState, t_max: usize) -> Distribution {
    let mut walk = AveragedWalk::new(state0.clone());
    for _ in 0..=t_max {
        walk.accumulate();
        walk.state.step_mut();
        walk.t += 1;
    }
    walk.mean()
}
