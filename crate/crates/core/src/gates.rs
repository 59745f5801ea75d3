//! Gates realized by free evolution of the well.
//!
//! With the dimensionless phase `θ = ħπ²t/(2mL²)` the free propagator is
//! `U(θ) = diag(exp(-iθn²))`. A gate is realized by picking `θ` and coding
//! the logical basis into well levels so that `U(θ)` restricted to the
//! coded subspace equals the target up to a global phase.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;

/// Fidelity needed for a construction to pass.
pub const FIDELITY_TOL: f64 = 1e-10;
/// Orthonormality tolerance for codewords.
pub const CODING_TOL: f64 = 1e-12;
/// Verification truncation used by the builtin constructions.
pub const DEFAULT_MAX_LEVEL: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GateError {
    #[error("codewords are not orthonormal")]
    NotOrthonormal,
    #[error("well levels start at 1")]
    ZeroLevel,
    #[error("coding uses level {level} beyond the truncation {max_level}")]
    LevelBeyondTruncation { level: usize, max_level: usize },
    #[error("target is {target}x{target} but the coding has {coded} codewords")]
    DimensionMismatch { target: usize, coded: usize },
    #[error("target is not unitary")]
    TargetNotUnitary,
    #[error("phase {0} outside [-π, π)")]
    PhaseOutOfRange(f64),
    #[error("coding must have at least one codeword")]
    Empty,
}

/// Images of the logical computational basis states as finite
/// superpositions of well levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCoding {
    codewords: Vec<Vec<(usize, Complex64)>>,
}

impl LevelCoding {
    pub fn new(codewords: Vec<Vec<(usize, Complex64)>>) -> Result<Self, GateError> {
        if codewords.is_empty() {
            return Err(GateError::Empty);
        }
        if codewords.iter().flatten().any(|&(n, _)| n == 0) {
            return Err(GateError::ZeroLevel);
        }
        let coding = Self { codewords };
        let top = coding.max_level();
        let v = coding.isometry(top)?;
        if v.adjoint().matmul(&v).max_abs_diff(&CMatrix::identity(coding.logical_dim())) > CODING_TOL {
            return Err(GateError::NotOrthonormal);
        }
        Ok(coding)
    }

    /// Codes the eigenvectors `eigvecs[k]` of a logical gate onto the level
    /// superpositions `images[k]`; the images of the computational basis
    /// follow by linearity.
    pub fn from_eigenvectors(
        eigvecs: &[Vec<Complex64>],
        images: &[Vec<(usize, Complex64)>],
    ) -> Result<Self, GateError> {
        let d = eigvecs.len();
        if images.len() != d || eigvecs.iter().any(|e| e.len() != d) {
            return Err(GateError::DimensionMismatch { target: d, coded: images.len() });
        }
        let codewords = (0..d)
            .map(|j| {
                let mut word: Vec<(usize, Complex64)> = Vec::new();
                for (e, image) in eigvecs.iter().zip(images) {
                    let weight = e[j].conj();
                    for &(n, a) in image {
                        match word.iter_mut().find(|(m, _)| *m == n) {
                            Some((_, acc)) => *acc += weight * a,
                            None => word.push((n, weight * a)),
                        }
                    }
                }
                word
            })
            .collect();
        Self::new(codewords)
    }

    pub fn logical_dim(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[Vec<(usize, Complex64)>] {
        &self.codewords
    }

    pub fn max_level(&self) -> usize {
        self.codewords.iter().flatten().map(|&(n, _)| n).max().unwrap_or(1)
    }

    /// `max_level x logical_dim` matrix whose columns are the codewords.
    pub fn isometry(&self, max_level: usize) -> Result<CMatrix, GateError> {
        let mut v = CMatrix::zeros(max_level, self.logical_dim());
        for (j, word) in self.codewords.iter().enumerate() {
            for &(n, a) in word {
                if n == 0 {
                    return Err(GateError::ZeroLevel);
                }
                if n > max_level {
                    return Err(GateError::LevelBeyondTruncation { level: n, max_level });
                }
                v[(n - 1, j)] += a;
            }
        }
        Ok(v)
    }

    /// Level-space vector of length `max_level` coding the logical `state`.
    pub fn encode(&self, state: &[Complex64], max_level: usize) -> Result<Vec<Complex64>, GateError> {
        Ok(self.isometry(max_level)?.mul_vec(state))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateConstruction {
    pub name: String,
    pub target: CMatrix,
    pub coding: LevelCoding,
    /// Dimensionless evolution phase `θ`.
    pub phi: f64,
    pub max_level: usize,
}

impl GateConstruction {
    pub fn new(
        name: &str,
        target: CMatrix,
        coding: LevelCoding,
        phi: f64,
        max_level: usize,
    ) -> Result<Self, GateError> {
        if !target.is_square() || target.rows() != coding.logical_dim() {
            return Err(GateError::DimensionMismatch { target: target.rows(), coded: coding.logical_dim() });
        }
        if !target.is_unitary(CODING_TOL) {
            return Err(GateError::TargetNotUnitary);
        }
        Ok(Self { name: name.to_string(), target, coding, phi, max_level })
    }

    /// Same construction evolved for `phi + delta` instead.
    pub fn perturbed(&self, delta: f64) -> Self {
        Self { phi: self.phi + delta, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub name: String,
    pub phi: f64,
    pub fidelity: f64,
    /// `max |A†A - I|` of the realized logical gate.
    pub unitary_defect: f64,
    pub pass: bool,
}

/// `diag(exp(-iθn²))` for `n = 1..=max_level`.
pub fn free_evolution(theta: f64, max_level: usize) -> CMatrix {
    let diag: Vec<Complex64> = (1..=max_level)
        .map(|n| {
            let n2 = (n * n) as f64;
            Complex64::from_polar(1.0, -theta * n2)
        })
        .collect();
    CMatrix::from_diagonal(&diag)
}

/// `exp(-iφ) exp(-iφ(n² - 1))` on the diagonal; `φ` in `[-π, π)`.
pub fn gamma(phi: f64, max_level: usize) -> Result<CMatrix, GateError> {
    if !(-PI..PI).contains(&phi) {
        return Err(GateError::PhaseOutOfRange(phi));
    }
    let global = Complex64::from_polar(1.0, -phi);
    let diag: Vec<Complex64> =
        (1..=max_level).map(|n| global * Complex64::from_polar(1.0, -phi * ((n * n) as f64 - 1.0))).collect();
    Ok(CMatrix::from_diagonal(&diag))
}

/// `|tr(A† B)| / d`: 1 exactly when `A` and `B` agree up to a global phase
/// (for unitary `A`, `B`).
pub fn fidelity(realized: &CMatrix, target: &CMatrix) -> f64 {
    let d = target.rows() as f64;
    realized.adjoint().matmul(target).trace().norm() / d
}

/// `V† U(θ) V` on the coded subspace.
pub fn realized_gate(gc: &GateConstruction) -> Result<CMatrix, GateError> {
    let v = gc.coding.isometry(gc.max_level)?;
    Ok(v.adjoint().matmul(&free_evolution(gc.phi, gc.max_level)).matmul(&v))
}

/// Applies the construction's free evolution to a level-space vector.
pub fn evolve_levels(gc: &GateConstruction, levels: &[Complex64]) -> Vec<Complex64> {
    free_evolution(gc.phi, levels.len()).mul_vec(levels)
}

pub fn verify(gc: &GateConstruction) -> Result<GateReport, GateError> {
    let a = realized_gate(gc)?;
    let defect = a.adjoint().matmul(&a).max_abs_diff(&CMatrix::identity(a.rows()));
    let fid = fidelity(&a, &gc.target);
    Ok(GateReport {
        name: gc.name.clone(),
        phi: gc.phi,
        fidelity: fid,
        unitary_defect: defect,
        pass: fid >= 1.0 - FIDELITY_TOL && defect <= FIDELITY_TOL,
    })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn level(n: usize) -> Vec<(usize, Complex64)> {
    vec![(n, c(1.0, 0.0))]
}

/// `diag(1, e^{iπ/4})` with `|0> -> |1>`, `|1> -> |2>` at `θ = -π/12`.
pub fn builtin_phase_gate() -> GateConstruction {
    let target = CMatrix::from_diagonal(&[c(1.0, 0.0), Complex64::from_polar(1.0, FRAC_PI_4)]);
    let coding = LevelCoding::new(vec![level(1), level(2)]).expect("orthonormal");
    GateConstruction::new("phase", target, coding, -PI / 12.0, DEFAULT_MAX_LEVEL).expect("valid construction")
}

/// CNOT with `|00> -> |2>`, `|01> -> |4>`, `|10> -> (|6> + |1>)/√2`,
/// `|11> -> (|6> - |1>)/√2` at `θ = π`, where level 1 picks up a sign and
/// levels 2, 4, 6 do not.
pub fn builtin_cnot_gate() -> GateConstruction {
    let mut target = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        target[(i, j)] = c(1.0, 0.0);
    }
    let r = FRAC_1_SQRT_2;
    let coding = LevelCoding::new(vec![
        level(2),
        level(4),
        vec![(6, c(r, 0.0)), (1, c(r, 0.0))],
        vec![(6, c(r, 0.0)), (1, c(-r, 0.0))],
    ])
    .expect("orthonormal");
    GateConstruction::new("cnot", target, coding, PI, DEFAULT_MAX_LEVEL).expect("valid construction")
}

/// Hadamard: its +1 eigenvector is coded onto `|2>`, its -1 eigenvector onto
/// `|1>`, and `θ = π/3` gives those levels the relative phase `-1`.
pub fn builtin_hadamard_gate() -> GateConstruction {
    let r = FRAC_1_SQRT_2;
    let target = CMatrix::from_fn(2, 2, |i, j| c(if i == 1 && j == 1 { -r } else { r }, 0.0));
    let (s, co) = FRAC_PI_8.sin_cos();
    let plus = vec![c(co, 0.0), c(s, 0.0)];
    let minus = vec![c(-s, 0.0), c(co, 0.0)];
    let coding = LevelCoding::from_eigenvectors(&[plus, minus], &[level(2), level(1)]).expect("orthonormal");
    GateConstruction::new("hadamard", target, coding, PI / 3.0, DEFAULT_MAX_LEVEL).expect("valid construction")
}

pub fn builtin_gates() -> Vec<GateConstruction> {
    vec![builtin_phase_gate(), builtin_cnot_gate(), builtin_hadamard_gate()]
}
