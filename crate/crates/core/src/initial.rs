//! The three families of initial states: a single occupied node, a pair of
//! degenerate eigenvectors, and a signed quad spanning two conjugate classes.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::EigenPair;
use crate::walk::{CycleParams, WalkState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairBranch {
    /// `(φ_{m,k} + φ_{d/2-m,k}) / √2`, `0 ≤ m ≤ m_max`
    Lower,
    /// `(φ_{d/2+m,k} + φ_{d-m,k}) / √2`, `1 ≤ m ≤ m_max`
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialStateSpec {
    SingleNode {
        v0: usize,
    },
    Pair {
        m: usize,
        k: usize,
        branch: PairBranch,
    },
    Quad {
        m: usize,
        k: usize,
    },
}

impl InitialStateSpec {
    /// Checks the parameter ranges against a concrete cycle.
    pub fn validate(&self, params: CycleParams) -> Result<()> {
        let m_max = params.m_max();
        match *self {
            InitialStateSpec::SingleNode { v0 } => params.check_node(v0),
            InitialStateSpec::Pair { m, k, branch } => {
                check_k(k)?;
                let lo = match branch {
                    PairBranch::Lower => 0,
                    PairBranch::Upper => 1,
                };
                check_mode(m, lo, m_max)
            }
            InitialStateSpec::Quad { m, k } => {
                check_k(k)?;
                check_mode(m, 1, m_max)
            }
        }
    }

    pub fn build(&self, params: CycleParams) -> Result<WalkState> {
        match *self {
            InitialStateSpec::SingleNode { v0 } => make_single_node(params, v0),
            InitialStateSpec::Pair { m, k, branch } => make_pair(params, m, k, branch),
            InitialStateSpec::Quad { m, k } => make_quad(params, m, k),
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k > 1 {
        return Err(Error::out_of_range("k", k, "0..2"));
    }
    Ok(())
}

fn check_mode(m: usize, lo: usize, m_max: usize) -> Result<()> {
    if m < lo || m > m_max {
        return Err(Error::out_of_range("m", m, format!("{lo}..={m_max}")));
    }
    Ok(())
}

impl fmt::Display for InitialStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialStateSpec::SingleNode { v0 } => write!(f, "single:{v0}"),
            InitialStateSpec::Pair {
                m,
                k,
                branch: PairBranch::Lower,
            } => write!(f, "pair:{m},{k}"),
            InitialStateSpec::Pair {
                m,
                k,
                branch: PairBranch::Upper,
            } => write!(f, "pair:{m},{k},upper"),
            InitialStateSpec::Quad { m, k } => write!(f, "quad:{m},{k}"),
        }
    }
}

/// Parses `single:<v0>`, `pair:<m>,<k>[,upper]` and `quad:<m>,<k>`.
impl FromStr for InitialStateSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = input
            .split_once(':')
            .ok_or_else(|| fail("expected <kind>:<args>"))?;
        let args: Vec<&str> = rest.split(',').map(str::trim).collect();
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| fail(&format!("{s:?} is not a nonnegative integer")))
        };
        match (kind.trim(), args.as_slice()) {
            ("single", [v0]) => Ok(InitialStateSpec::SingleNode { v0: int(v0)? }),
            ("pair", [m, k]) => Ok(InitialStateSpec::Pair {
                m: int(m)?,
                k: int(k)?,
                branch: PairBranch::Lower,
            }),
            ("pair", [m, k, branch]) => {
                let branch = match *branch {
                    "upper" => PairBranch::Upper,
                    "lower" => PairBranch::Lower,
                    _ => return Err(fail("pair branch must be `upper` or `lower`")),
                };
                Ok(InitialStateSpec::Pair {
                    m: int(m)?,
                    k: int(k)?,
                    branch,
                })
            }
            ("quad", [m, k]) => Ok(InitialStateSpec::Quad {
                m: int(m)?,
                k: int(k)?,
            }),
            ("single" | "pair" | "quad", _) => Err(fail("wrong number of arguments")),
            _ => Err(fail("kind must be single, pair or quad")),
        }
    }
}

/// `((|0⟩ + i|1⟩)/√2) ⊗ |v0⟩`.
///
/// This coin state is the one whose spectral coefficients are
/// `a_jk (1 + i b_jk*) / √2 · ω^{-j v0}`.
pub fn make_single_node(params: CycleParams, v0: usize) -> Result<WalkState> {
    params.check_node(v0)?;
    let mut amps = vec![Complex64::default(); params.dim()];
    amps[v0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[params.nodes() + v0] = Complex64::new(0.0, FRAC_1_SQRT_2);
    WalkState::new(params, amps)
}

pub fn make_pair(params: CycleParams, m: usize, k: usize, branch: PairBranch) -> Result<WalkState> {
    InitialStateSpec::Pair { m, k, branch }.validate(params)?;
    let (d, h) = (params.nodes(), params.half());
    let js = match branch {
        PairBranch::Lower => [m, h - m],
        PairBranch::Upper => [h + m, d - m],
    };
    superpose(params, k, &[(js[0], FRAC_1_SQRT_2), (js[1], FRAC_1_SQRT_2)])
}

/// `(φ_{m,k} + φ_{d/2-m,k} - φ_{d/2+m,k} - φ_{d-m,k}) / 2`.
pub fn make_quad(params: CycleParams, m: usize, k: usize) -> Result<WalkState> {
    InitialStateSpec::Quad { m, k }.validate(params)?;
    let (d, h) = (params.nodes(), params.half());
    superpose(
        params,
        k,
        &[(m, 0.5), (h - m, 0.5), (h + m, -0.5), (d - m, -0.5)],
    )
}

fn superpose(params: CycleParams, k: usize, terms: &[(usize, f64)]) -> Result<WalkState> {
    let mut amps = vec![Complex64::default(); params.dim()];
    for &(j, weight) in terms {
        let phi = EigenPair::new(j, k, params)?.vector(params);
        for (acc, a) in amps.iter_mut().zip(phi.amplitudes()) {
            *acc += a * weight;
        }
    }
    WalkState::new(params, amps)
}
