//! Closed-form limiting distributions and distances for the three
//! initial-state families.
//!
//! These are checks against simulation and spectral projection, not a
//! replacement for them: every function validates its own output and reports
//! a [`Error::FormulaDiscrepancy`] instead of returning a bad distribution.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::initial::make_quad;
use crate::spectral::{limiting_distribution, EigenPair, SpectralBasis};
use crate::walk::{node_distribution, tvd, CycleParams, Distribution};

/// Pointwise agreement required between the single-node formula and spectral projection.
pub const SINGLE_NODE_CROSS_CHECK: f64 = 1e-9;
/// Agreement required between the general pair sum and its closed form.
pub const PAIR_CLOSED_FORM_TOLERANCE: f64 = 1e-12;
const PAIR_SUM_TOLERANCE: f64 = 1e-12;

/// Constants shared by the single-node formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormContext {
    pub params: CycleParams,
    /// `3 - 2√2`
    pub z: f64,
    /// 1 when `d/2` is even, 0 when it is odd.
    pub xi: u32,
}

impl ClosedFormContext {
    pub fn new(params: CycleParams) -> Self {
        ClosedFormContext {
            params,
            z: 3.0 - 2.0 * 2f64.sqrt(),
            xi: if params.half().is_multiple_of(2) {
                1
            } else {
                0
            },
        }
    }

    /// Cycle distance between `v` and `v0`.
    pub fn distance(&self, v: usize, v0: usize) -> usize {
        let d = self.params.nodes();
        let diff = v.abs_diff(v0);
        diff.min(d - diff)
    }

    /// `f(x) = √2 z^x / (1 - (-z)^{d/2}) - δ_{x0} - 1/d`.
    pub fn f(&self, x: usize) -> f64 {
        let d = self.params.nodes();
        let half = self.params.half() as i32;
        let denom = 1.0 - (-self.z).powi(half);
        let delta = if x == 0 { 1.0 } else { 0.0 };
        2f64.sqrt() / denom * self.z.powi(x as i32) - delta - 1.0 / d as f64
    }
}

/// Per-mode constants for the pair and quad families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMode {
    pub m: usize,
    /// `2πm/d`
    pub alpha: f64,
    /// `⌊d/(4m) - 1/2⌋`, defined only when `m ≥ 1` divides `d/2`.
    pub eta: Option<usize>,
}

impl PairMode {
    pub fn new(params: CycleParams, m: usize) -> Result<Self> {
        if m > params.m_max() {
            return Err(Error::out_of_range(
                "m",
                m,
                format!("0..={}", params.m_max()),
            ));
        }
        let d = params.nodes();
        let eta = (m >= 1 && params.half().is_multiple_of(m)).then(|| (d - 2 * m) / (4 * m));
        Ok(PairMode {
            m,
            alpha: 2.0 * PI * m as f64 / d as f64,
            eta,
        })
    }

    /// `sin α / (d √(1 + cos²α))`.
    fn amplitude(&self, d: usize) -> f64 {
        let (sin, cos) = self.alpha.sin_cos();
        sin / (d as f64 * (1.0 + cos * cos).sqrt())
    }
}

/// Limit of `p̄_t` for the single-node start at `v0`.
pub fn limiting_single_node(params: CycleParams, v0: usize) -> Result<Distribution> {
    params.check_node(v0)?;
    let ctx = ClosedFormContext::new(params);
    let d = params.nodes();
    let sign = if ctx.xi == 1 { -1.0 } else { 1.0 };
    let pi: Vec<f64> = (0..d)
        .map(|v| {
            let s = ctx.distance(v, v0);
            let s_opposite = params.half() - s;
            (1.0 + ctx.f(s) - sign * ctx.f(s_opposite)) / d as f64
        })
        .collect();
    validated(params, pi, "single-node limiting distribution")
}

/// [`limiting_single_node`] checked pointwise against spectral projection.
///
/// The projection is authoritative; a mismatch beyond
/// [`SINGLE_NODE_CROSS_CHECK`] is a [`Error::FormulaDiscrepancy`].
pub fn cross_check_single_node(params: CycleParams, v0: usize) -> Result<Distribution> {
    let closed = limiting_single_node(params, v0)?;
    let basis = SpectralBasis::new(params)?;
    let state = crate::initial::make_single_node(params, v0)?;
    let projected = limiting_distribution(&state, &basis)?;
    let deviation = closed.max_abs_diff(&projected);
    if deviation > SINGLE_NODE_CROSS_CHECK {
        return Err(Error::FormulaDiscrepancy {
            what: format!("single-node closed form vs spectral projection ({params}, v0={v0})"),
            deviation,
        });
    }
    Ok(closed)
}

/// Large-`d` approximation of `Δ∞` for the single-node start.
///
/// `1/d` when `d/2` is odd, otherwise `2/d - 4/d² (1 - 2 (log₂d - 1/2) / log₂z)`.
pub fn tvd_limit_single_node_asymptotic(params: CycleParams) -> Result<f64> {
    let d = params.nodes();
    if d < 8 {
        return Err(Error::DegenerateParameter(format!(
            "large-d approximation needs d >= 8, got d={d}"
        )));
    }
    let ctx = ClosedFormContext::new(params);
    let df = d as f64;
    Ok(if ctx.xi == 0 {
        1.0 / df
    } else {
        2.0 / df - 4.0 / (df * df) * (1.0 - 2.0 * (df.log2() - 0.5) / ctx.z.log2())
    })
}

/// Frozen distribution of a degenerate pair state,
/// `1/d + (-1)^v sin α sin(α(2v+1)) / (d √(1 + cos²α))`.
pub fn limiting_pair(params: CycleParams, m: usize) -> Result<Distribution> {
    let mode = PairMode::new(params, m)?;
    let d = params.nodes();
    let amp = mode.amplitude(d);
    let pi: Vec<f64> = (0..d)
        .map(|v| {
            let parity = if v % 2 == 0 { 1.0 } else { -1.0 };
            1.0 / d as f64 + parity * amp * (mode.alpha * (2 * v + 1) as f64).sin()
        })
        .collect();
    let total: f64 = pi.iter().sum();
    if (total - 1.0).abs() > PAIR_SUM_TOLERANCE {
        return Err(Error::FormulaDiscrepancy {
            what: format!("pair limiting distribution normalization ({params}, m={m})"),
            deviation: (total - 1.0).abs(),
        });
    }
    validated(params, pi, "pair limiting distribution")
}

/// `Δ` of a pair state as the general sum `½ sin α / (d √(1+cos²α)) Σ_v |sin(α(2v+1))|`.
pub fn tvd_pair_sum(params: CycleParams, m: usize) -> Result<f64> {
    let mode = PairMode::new(params, m)?;
    let d = params.nodes();
    let sum: f64 = (0..d)
        .map(|v| (mode.alpha * (2 * v + 1) as f64).sin().abs())
        .sum();
    Ok(0.5 * mode.amplitude(d) * sum)
}

/// `(m/d) (1 - cos(2α(η+1))) / √(1 + cos²α)`, available when `m ≥ 1` divides `d/2`.
pub fn tvd_pair_closed(params: CycleParams, m: usize) -> Result<Option<f64>> {
    let mode = PairMode::new(params, m)?;
    let d = params.nodes() as f64;
    Ok(mode.eta.map(|eta| {
        let cos = mode.alpha.cos();
        m as f64 / d / (1.0 + cos * cos).sqrt()
            * (1.0 - (2.0 * mode.alpha * (eta + 1) as f64).cos())
    }))
}

/// Constant `Δ_t` of a pair state. Cross-checks the closed form whenever it applies.
pub fn tvd_pair(params: CycleParams, m: usize) -> Result<f64> {
    let sum = tvd_pair_sum(params, m)?;
    if let Some(closed) = tvd_pair_closed(params, m)? {
        let deviation = (sum - closed).abs();
        if deviation > PAIR_CLOSED_FORM_TOLERANCE {
            return Err(Error::FormulaDiscrepancy {
                what: format!("pair distance sum vs closed form ({params}, m={m})"),
                deviation,
            });
        }
    }
    Ok(sum)
}

/// `p̄_t = A + B sin(2φ(t+1)) / (t+1)` for the quad state, with `A = π`
/// (the pair limit) and `B = (p_0 - π) / sin 2φ`.
#[derive(Debug, Clone)]
pub struct QuadLaw {
    pub params: CycleParams,
    pub m: usize,
    pub k: usize,
    /// Principal argument of `c_mk`.
    pub phase: f64,
    /// `A(v)`
    pub limit: Distribution,
    /// `B(v)`
    pub damping: Vec<f64>,
}

impl QuadLaw {
    pub fn new(params: CycleParams, m: usize, k: usize) -> Result<Self> {
        let state = make_quad(params, m, k)?;
        let p0 = node_distribution(&state);
        let limit = limiting_pair(params, m)?;
        let phase = EigenPair::new(m, k, params)?.phase;
        let sin2 = (2.0 * phase).sin();
        if sin2.abs() < 1e-12 {
            return Err(Error::DegenerateParameter(format!(
                "sin(2φ) vanishes for m={m}, k={k}, {params}"
            )));
        }
        let damping = p0
            .probabilities()
            .iter()
            .zip(limit.probabilities())
            .map(|(p, a)| (p - a) / sin2)
            .collect();
        Ok(QuadLaw {
            params,
            m,
            k,
            phase,
            limit,
            damping,
        })
    }

    pub fn at(&self, t: usize) -> Result<Distribution> {
        let n = t as f64 + 1.0;
        let factor = (2.0 * self.phase * n).sin() / n;
        let p: Vec<f64> = self
            .limit
            .probabilities()
            .iter()
            .zip(&self.damping)
            .map(|(a, b)| a + b * factor)
            .collect();
        validated(self.params, p, "quad time-averaged distribution")
    }

    /// `Δ_t` of the closed-form `p̄_t`.
    pub fn tvd_at(&self, t: usize) -> Result<f64> {
        Ok(tvd(&self.at(t)?))
    }
}

/// Closed-form `p̄_t` of the quad state at a single time.
pub fn averaged_quad(params: CycleParams, m: usize, k: usize, t: usize) -> Result<Distribution> {
    QuadLaw::new(params, m, k)?.at(t)
}

fn validated(params: CycleParams, p: Vec<f64>, what: &str) -> Result<Distribution> {
    let total: f64 = p.iter().sum();
    Distribution::new(params, p).map_err(|err| match err {
        Error::InvalidDistribution(reason) => Error::FormulaDiscrepancy {
            what: format!("{what} ({params}): {reason}"),
            deviation: (total - 1.0).abs(),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{make_pair, PairBranch};
    use approx::assert_abs_diff_eq;

    fn params(d: usize) -> CycleParams {
        CycleParams::new(d).unwrap()
    }

    #[test]
    fn context_constants() {
        let ctx = ClosedFormContext::new(params(24));
        assert!(ctx.z > 0.0 && ctx.z < 1.0);
        assert_abs_diff_eq!(ctx.z, 0.171_572_875_253_809_9, epsilon = 1e-15);
        assert_eq!(ctx.xi, 1);
        assert_eq!(ClosedFormContext::new(params(26)).xi, 0);
        assert_eq!(ctx.distance(1, 23), 2);
        assert_eq!(ctx.distance(12, 0), 12);
    }

    #[test]
    fn eta_only_when_m_divides_half() {
        let p = params(24);
        assert_eq!(PairMode::new(p, 3).unwrap().eta, Some(1));
        assert_eq!(PairMode::new(p, 1).unwrap().eta, Some(5));
        assert_eq!(PairMode::new(p, 5).unwrap().eta, None);
        assert_eq!(PairMode::new(p, 0).unwrap().eta, None);
        assert!(PairMode::new(p, 6).is_err());
        for m in 1..=p.m_max() {
            let alpha = PairMode::new(p, m).unwrap().alpha;
            assert!(alpha > 0.0 && alpha < PI / 2.0);
        }
    }

    #[test]
    fn single_node_limit_is_symmetric_about_start() {
        let p = params(24);
        for v0 in [0, 5, 23] {
            let pi = limiting_single_node(p, v0).unwrap();
            for w in 0..12 {
                assert_abs_diff_eq!(pi[(v0 + w) % 24], pi[(v0 + 24 - w) % 24], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn single_node_limit_for_d24() {
        let pi = cross_check_single_node(params(24), 0).unwrap();
        // 0.054 is printed to three decimals
        assert!((tvd(&pi) - 0.054).abs() <= 0.001);
    }

    #[test]
    fn asymptotic_branches() {
        assert_eq!(
            tvd_limit_single_node_asymptotic(params(26)).unwrap(),
            1.0 / 26.0
        );
        let d24 = tvd_limit_single_node_asymptotic(params(24)).unwrap();
        assert!((d24 - 0.054).abs() <= 0.0005, "{d24}");
        let exact = tvd(&limiting_single_node(params(24), 0).unwrap());
        assert!((d24 - exact).abs() < 0.005);
        assert!(tvd_limit_single_node_asymptotic(params(6)).is_err());
    }

    #[test]
    fn pair_limit_at_m_zero_is_uniform() {
        let p = params(20);
        assert!(
            limiting_pair(p, 0)
                .unwrap()
                .max_abs_diff(&Distribution::uniform(p))
                < 1e-16
        );
        assert_eq!(tvd_pair(p, 0).unwrap(), 0.0);
    }

    #[test]
    fn pair_limit_is_the_frozen_distribution() {
        let p = params(24);
        let closed = limiting_pair(p, 3).unwrap();
        for k in 0..2 {
            for branch in [PairBranch::Lower, PairBranch::Upper] {
                let p0 = node_distribution(&make_pair(p, 3, k, branch).unwrap());
                assert!(closed.max_abs_diff(&p0) < 1e-12, "k={k} {branch:?}");
            }
        }
    }

    #[test]
    fn pair_distance_for_m3_d24() {
        let p = params(24);
        let delta = tvd_pair(p, 3).unwrap();
        assert_eq!(format!("{delta:.3}"), "0.204");
        assert_abs_diff_eq!(delta, tvd(&limiting_pair(p, 3).unwrap()), epsilon = 1e-12);
        assert_abs_diff_eq!(
            tvd_pair_closed(p, 3).unwrap().unwrap(),
            delta,
            epsilon = 1e-12
        );
    }

    #[test]
    fn quad_law_endpoints() {
        let p = params(24);
        let law = QuadLaw::new(p, 3, 0).unwrap();
        assert_abs_diff_eq!(law.phase, -PI / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (2.0 * law.phase).sin(),
            -(3f64.sqrt()) / 2.0,
            epsilon = 1e-15
        );
        let p0 = node_distribution(&make_quad(p, 3, 0).unwrap());
        assert!(law.at(0).unwrap().max_abs_diff(&p0) < 1e-15);
        assert!(law.at(10_000_000).unwrap().max_abs_diff(&law.limit) < 1e-8);
        assert!(
            averaged_quad(p, 3, 0, 17)
                .unwrap()
                .max_abs_diff(&law.at(17).unwrap())
                == 0.0
        );
    }

    #[test]
    fn quad_law_rejects_invalid_modes() {
        assert!(QuadLaw::new(params(24), 0, 0).is_err());
        assert!(QuadLaw::new(params(24), 6, 0).is_err());
    }
}
