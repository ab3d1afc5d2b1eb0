//! Closed-form eigensystem of the walk operator.
//!
//! For `j ∈ {0, …, d-1}` and `k ∈ {0, 1}`, with `θ = 2πj/d` and `ω = e^{2πi/d}`:
//!
//! ```text
//! c_jk = ((-1)^k √(1 + cos²θ) - i sin θ) / √2
//! b_jk = ω^j ((-1)^k √(1 + cos²θ) - cos θ)
//! a_jk = 1 / √(d (1 + |b_jk|²))
//! φ_jk = (a_jk |0⟩ + a_jk b_jk |1⟩) ⊗ Σ_v ω^{jv} |v⟩
//! ```
//!
//! Nothing here calls a numerical eigensolver. Eigenvectors are materialized
//! on demand in `O(d)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::{CycleParams, Distribution, WalkState};

/// Two eigenvalues closer than this are treated as one eigenvalue.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Label `(j, k)` of an eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenIndex {
    pub j: usize,
    pub k: usize,
}

impl EigenIndex {
    pub fn new(j: usize, k: usize) -> Self {
        EigenIndex { j, k }
    }

    /// Position in coefficient arrays, `2j + k`.
    #[inline]
    pub fn slot(self) -> usize {
        2 * self.j + self.k
    }

    #[inline]
    pub fn from_slot(slot: usize) -> Self {
        EigenIndex {
            j: slot / 2,
            k: slot % 2,
        }
    }

    fn check(self, params: CycleParams) -> Result<()> {
        if self.j >= params.nodes() {
            return Err(Error::out_of_range(
                "eigen j",
                self.j,
                format!("0..{}", params.nodes()),
            ));
        }
        if self.k > 1 {
            return Err(Error::out_of_range("eigen k", self.k, "0..2"));
        }
        Ok(())
    }
}

/// Eigenvalue and coefficients of one eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub j: usize,
    pub k: usize,
    /// `c_jk`, unit modulus.
    pub c: Complex64,
    /// `a_jk`, the normalization factor.
    pub a: f64,
    /// `b_jk`, ratio of the coin-1 to the coin-0 amplitude.
    pub b: Complex64,
    /// Principal argument of `c`, in `(-π, π]`.
    pub phase: f64,
}

impl EigenPair {
    pub fn new(j: usize, k: usize, params: CycleParams) -> Result<Self> {
        let idx = EigenIndex::new(j, k);
        idx.check(params)?;
        let d = params.nodes();
        let theta = 2.0 * PI * j as f64 / d as f64;
        let (sin, cos) = theta.sin_cos();
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let root = (1.0 + cos * cos).sqrt();

        let c = Complex64::new(sign * root, -sin) * FRAC_1_SQRT_2;
        let b = root_of_unity(j, d) * (sign * root - cos);
        let a = 1.0 / (d as f64 * (1.0 + b.norm_sqr())).sqrt();
        let mut phase = c.arg();
        if phase <= -PI {
            phase += 2.0 * PI;
        }
        Ok(EigenPair {
            j,
            k,
            c,
            a,
            b,
            phase,
        })
    }

    pub fn index(&self) -> EigenIndex {
        EigenIndex::new(self.j, self.k)
    }

    /// `φ_jk` as a state vector.
    pub fn vector(&self, params: CycleParams) -> WalkState {
        let d = params.nodes();
        let up = Complex64::new(self.a, 0.0);
        let down = self.b * self.a;
        let mut amps = Vec::with_capacity(2 * d);
        amps.extend((0..d).map(|v| up * root_of_unity(self.j * v, d)));
        amps.extend((0..d).map(|v| down * root_of_unity(self.j * v, d)));
        WalkState::from_parts_unchecked(params, amps)
    }
}

/// `ω^n` with the exponent reduced mod `d` before the trig call.
fn root_of_unity(n: usize, d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (n % d) as f64 / d as f64)
}

/// `c_jk`.
pub fn eigenvalue(j: usize, k: usize, params: CycleParams) -> Result<Complex64> {
    Ok(EigenPair::new(j, k, params)?.c)
}

/// `φ_jk`, normalized.
pub fn eigenvector(j: usize, k: usize, params: CycleParams) -> Result<WalkState> {
    Ok(EigenPair::new(j, k, params)?.vector(params))
}

/// Eigenvectors sharing one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenClass {
    pub eigenvalue: Complex64,
    /// Sorted member labels.
    pub members: Vec<EigenIndex>,
}

/// The full eigensystem of one cycle, grouped into degenerate classes.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    params: CycleParams,
    pairs: Vec<EigenPair>,
    classes: Vec<EigenClass>,
}

impl SpectralBasis {
    /// Builds all `2d` pairs and groups them by eigenvalue.
    ///
    /// Fails with [`Error::ClassMismatch`] if floating-point grouping and the
    /// index rule `{j, (d/2 - j) mod d}` disagree.
    pub fn new(params: CycleParams) -> Result<Self> {
        let pairs = (0..params.dim())
            .map(|slot| {
                let idx = EigenIndex::from_slot(slot);
                EigenPair::new(idx.j, idx.k, params)
            })
            .collect::<Result<Vec<_>>>()?;
        let classes = group_by_eigenvalue(&pairs);
        let expected = index_classes(params);
        let found: Vec<Vec<EigenIndex>> = classes.iter().map(|c| c.members.clone()).collect();
        if found != expected {
            return Err(Error::ClassMismatch(format!(
                "{} numeric classes vs {} index classes for {params}",
                found.len(),
                expected.len()
            )));
        }
        Ok(SpectralBasis {
            params,
            pairs,
            classes,
        })
    }

    #[inline]
    pub fn params(&self) -> CycleParams {
        self.params
    }

    /// All pairs, in slot order `2j + k`.
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn pair(&self, idx: EigenIndex) -> &EigenPair {
        &self.pairs[idx.slot()]
    }

    pub fn classes(&self) -> &[EigenClass] {
        &self.classes
    }

    pub fn vector(&self, idx: EigenIndex) -> WalkState {
        self.pair(idx).vector(self.params)
    }

    fn check_params(&self, params: CycleParams) -> Result<()> {
        if params != self.params {
            return Err(Error::DimensionMismatch {
                expected: self.params.dim(),
                actual: params.dim(),
            });
        }
        Ok(())
    }
}

/// Classes in the order their first member appears in slot order.
fn group_by_eigenvalue(pairs: &[EigenPair]) -> Vec<EigenClass> {
    let mut classes: Vec<EigenClass> = Vec::new();
    for pair in pairs {
        match classes
            .iter_mut()
            .find(|cls| (cls.eigenvalue - pair.c).norm() < DEGENERACY_TOLERANCE)
        {
            Some(cls) => cls.members.push(pair.index()),
            None => classes.push(EigenClass {
                eigenvalue: pair.c,
                members: vec![pair.index()],
            }),
        }
    }
    for cls in &mut classes {
        cls.members.sort();
    }
    classes
}

/// `{j, (d/2 - j) mod d}` per `k`, ordered like [`group_by_eigenvalue`].
pub fn index_classes(params: CycleParams) -> Vec<Vec<EigenIndex>> {
    let d = params.nodes();
    let mut seen = vec![false; params.dim()];
    let mut out = Vec::new();
    for slot in 0..params.dim() {
        if seen[slot] {
            continue;
        }
        let idx = EigenIndex::from_slot(slot);
        let partner = EigenIndex::new((params.half() + d - idx.j) % d, idx.k);
        let mut members = vec![idx];
        if partner != idx {
            members.push(partner);
        }
        members.sort();
        for m in &members {
            seen[m.slot()] = true;
        }
        out.push(members);
    }
    out
}

/// Partition of `(j, k)` labels into eigenvalue classes.
pub fn degenerate_classes(basis: &SpectralBasis) -> &[EigenClass] {
    basis.classes()
}

/// Spectral coefficients `⟨φ_jk|ψ⟩` in slot order `2j + k`.
pub fn decompose(state: &WalkState, basis: &SpectralBasis) -> Result<Vec<Complex64>> {
    basis.check_params(state.params())?;
    let params = basis.params;
    let d = params.nodes();
    let (up, down) = state.amplitudes().split_at(d);
    let roots: Vec<Complex64> = (0..d).map(|n| root_of_unity(n, d)).collect();

    let mut coefs = Vec::with_capacity(params.dim());
    for j in 0..d {
        // Σ_v ω^{-jv} γ_s(v)
        let (mut f0, mut f1) = (Complex64::default(), Complex64::default());
        for v in 0..d {
            let w = roots[(j * v) % d].conj();
            f0 += w * up[v];
            f1 += w * down[v];
        }
        for k in 0..2 {
            let pair = &basis.pairs[EigenIndex::new(j, k).slot()];
            coefs.push((f0 + pair.b.conj() * f1) * pair.a);
        }
    }
    Ok(coefs)
}

/// `Σ coef_jk φ_jk`, as raw coin-major amplitudes.
pub fn reconstruct(coefs: &[Complex64], basis: &SpectralBasis) -> Result<Vec<Complex64>> {
    let params = basis.params;
    if coefs.len() != params.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.dim(),
            actual: coefs.len(),
        });
    }
    let d = params.nodes();
    let mut amps = vec![Complex64::default(); params.dim()];
    for (pair, &coef) in basis.pairs.iter().zip(coefs) {
        let up = coef * pair.a;
        let down = up * pair.b;
        for v in 0..d {
            let w = root_of_unity(pair.j * v, d);
            amps[v] += up * w;
            amps[d + v] += down * w;
        }
    }
    Ok(amps)
}

/// `U^t ψ` computed as `Σ c_jk^t ⟨φ_jk|ψ⟩ φ_jk`.
pub fn evolve_spectral(state: &WalkState, basis: &SpectralBasis, t: u64) -> Result<WalkState> {
    let coefs = decompose(state, basis)?;
    let phased: Vec<Complex64> = coefs
        .iter()
        .zip(&basis.pairs)
        .map(|(coef, pair)| coef * Complex64::from_polar(1.0, pair.phase * t as f64))
        .collect();
    let amps = reconstruct(&phased, basis)?;
    Ok(WalkState::from_parts_unchecked(basis.params, amps))
}

/// Limit of the time-averaged node distribution, `π(v) = Σ_λ Σ_s |⟨s,v|P_λ|ψ⟩|²`.
///
/// Cross terms between distinct eigenvalues average out, so only the
/// projection onto each degenerate class survives.
pub fn limiting_distribution(state0: &WalkState, basis: &SpectralBasis) -> Result<Distribution> {
    let coefs = decompose(state0, basis)?;
    let params = basis.params;
    let d = params.nodes();
    let mut pi = vec![0.0; d];
    let mut projected = vec![Complex64::default(); params.dim()];
    for class in &basis.classes {
        projected.fill(Complex64::default());
        for &idx in &class.members {
            let coef = coefs[idx.slot()];
            if coef.norm_sqr() == 0.0 {
                continue;
            }
            let phi = basis.vector(idx);
            for (acc, amp) in projected.iter_mut().zip(phi.amplitudes()) {
                *acc += coef * amp;
            }
        }
        for v in 0..d {
            pi[v] += projected[v].norm_sqr() + projected[d + v].norm_sqr();
        }
    }
    Distribution::new(params, pi)
}
