use clap::ValueEnum;

use cyclewalk::analytic::{cross_check_single_node, limiting_pair, tvd_pair, QuadLaw};
use cyclewalk::spectral::{limiting_distribution, SpectralBasis};
use cyclewalk::walk::{averaged_distribution, tvd_series, AveragedWalk};
use cyclewalk::{CycleParams, Distribution, Error, InitialStateSpec, Result};

use crate::table::Table;

/// Guard against accidental unbounded runs.
pub const MAX_T: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Output {
    /// `t,delta`: distance of the running mean from uniform at every step.
    TvdSeries,
    /// `v,p`: running mean at `t_max`.
    AveragedDistribution,
    /// `v,p`: limit of the running mean by eigenspace projection.
    LimitingDistribution,
    /// `v,p,analytic`: running mean at `t_max` next to the closed form.
    AnalyticComparison,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub initial: InitialStateSpec,
    pub t_max: usize,
    pub what: Output,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<CycleParams> {
        let params = CycleParams::new(self.d)?;
        self.initial.validate(params)?;
        if self.t_max > MAX_T {
            return Err(Error::IndexOutOfRange {
                what: "t_max",
                index: self.t_max,
                range: format!("0..={MAX_T}"),
            });
        }
        Ok(params)
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Table> {
    let params = config.validate()?;
    let state0 = config.initial.build(params)?;
    match config.what {
        Output::TvdSeries => {
            let mut table = Table::new(&["t", "delta"]);
            for point in tvd_series(&state0, config.t_max).entries() {
                table.push(point.t, &[point.delta]);
            }
            Ok(table)
        }
        Output::AveragedDistribution => Ok(distribution_table(&averaged_distribution(
            &state0,
            config.t_max,
        ))),
        Output::LimitingDistribution => {
            let basis = SpectralBasis::new(params)?;
            Ok(distribution_table(&limiting_distribution(&state0, &basis)?))
        }
        Output::AnalyticComparison => {
            let simulated = averaged_distribution(&state0, config.t_max);
            let analytic = match config.initial {
                InitialStateSpec::SingleNode { v0 } => cross_check_single_node(params, v0)?,
                InitialStateSpec::Pair { m, .. } => limiting_pair(params, m)?,
                InitialStateSpec::Quad { m, k } => QuadLaw::new(params, m, k)?.at(config.t_max)?,
            };
            let mut table = Table::new(&["v", "p", "analytic"]);
            for v in 0..params.nodes() {
                table.push(v, &[simulated[v], analytic[v]]);
            }
            Ok(table)
        }
    }
}

fn distribution_table(dist: &Distribution) -> Table {
    let mut table = Table::new(&["v", "p"]);
    for (v, &p) in dist.probabilities().iter().enumerate() {
        table.push(v, &[p]);
    }
    table
}

/// Cycle size, initial state and default horizon of each figure preset.
pub fn figure_preset(n: u8) -> Option<(usize, InitialStateSpec, usize)> {
    use cyclewalk::PairBranch;
    match n {
        1 => Some((24, InitialStateSpec::SingleNode { v0: 0 }, 5000)),
        2 => Some((
            24,
            InitialStateSpec::Pair {
                m: 3,
                k: 0,
                branch: PairBranch::Lower,
            },
            200,
        )),
        3 => Some((24, InitialStateSpec::Quad { m: 3, k: 0 }, 1000)),
        _ => None,
    }
}

/// Figure 1 is `t,delta`; figures 2 and 3 add the closed-form distance per step.
pub fn figure(n: u8, t_max: Option<usize>) -> Result<Table> {
    let (d, initial, default_t) = figure_preset(n).ok_or_else(|| Error::IndexOutOfRange {
        what: "figure",
        index: n as usize,
        range: "1..=3".into(),
    })?;
    let t_max = t_max.unwrap_or(default_t);
    let config = ExperimentConfig {
        d,
        initial,
        t_max,
        what: Output::TvdSeries,
    };
    let params = config.validate()?;
    if n == 1 {
        return run(&config);
    }

    let mut table = Table::new(&["t", "delta", "analytic"]);
    let state0 = initial.build(params)?;
    let mut walk = AveragedWalk::new(state0);
    match initial {
        InitialStateSpec::Pair { m, .. } => {
            let analytic = tvd_pair(params, m)?;
            for _ in 0..=t_max {
                let (t, delta) = walk.advance();
                table.push(t, &[delta, analytic]);
            }
        }
        InitialStateSpec::Quad { m, k } => {
            let law = QuadLaw::new(params, m, k)?;
            for _ in 0..=t_max {
                let (t, delta) = walk.advance();
                table.push(t, &[delta, law.tvd_at(t)?]);
            }
        }
        InitialStateSpec::SingleNode { .. } => unreachable!("figure 1 handled above"),
    }
    Ok(table)
}
