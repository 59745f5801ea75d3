//! Time evolution along `H_A(t/T)` with the Cayley (Crank–Nicolson) step
//!
//! ```text
//! ψ(t + δt) = (1 - (i/2) H_A δt) / (1 + (i/2) H_A δt) ψ(t)
//! ```
//!
//! starting from the uniform state, and the observables recorded along the
//! way: level probabilities, per-variable `<n_i^2>` and the ground energy.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, CMatrix};
use crate::operators::{self, HiForm, TruncatedOperator, TruncationSpec};
use crate::poly::Polynomial;
use crate::spectra;
use crate::Error;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolveError {
    #[error("invalid evolution parameters: {0}")]
    InvalidParams(&'static str),
    #[error("state has dimension {state} but the Hamiltonian has {operator}")]
    DimensionMismatch { state: usize, operator: usize },
    #[error("Cayley system is singular")]
    Singular,
    #[error("non-finite amplitude after step {step}")]
    NonFinite { step: usize },
}

/// Where in each step the interpolation parameter is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// `s = τ/T` at the start of the step.
    #[default]
    Start,
    /// `s = (τ + δt/2)/T`.
    Midpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionParams {
    pub total_time: f64,
    pub dt: f64,
    /// Steps between `E0` samples.
    pub e0_stride: usize,
    /// Steps between recorded trace rows.
    pub record_stride: usize,
    pub hi_form: HiForm,
    pub schedule: Schedule,
}

impl EvolutionParams {
    /// `total_time` must be a positive multiple of `dt`. Strides default to
    /// about 500 `E0` samples and 1000 rows per run.
    pub fn new(total_time: f64, dt: f64) -> Result<Self, EvolveError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(EvolveError::InvalidParams("dt must be positive and finite"));
        }
        if !(total_time.is_finite() && total_time >= dt) {
            return Err(EvolveError::InvalidParams("T must be finite and at least dt"));
        }
        let ratio = total_time / dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(EvolveError::InvalidParams("T must be a whole number of dt steps"));
        }
        let steps = ratio.round() as usize;
        Ok(Self {
            total_time,
            dt,
            e0_stride: (steps / 500).max(1),
            record_stride: (steps / 1000).max(1),
            hi_form: HiForm::default(),
            schedule: Schedule::default(),
        })
    }

    pub fn with_e0_stride(mut self, stride: usize) -> Self {
        self.e0_stride = stride;
        self
    }

    pub fn with_record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn with_hi_form(mut self, form: HiForm) -> Self {
        self.hi_form = form;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn steps(&self) -> usize {
        (self.total_time / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<(), EvolveError> {
        Self::new(self.total_time, self.dt)?;
        if self.e0_stride == 0 || self.record_stride == 0 {
            return Err(EvolveError::InvalidParams("strides must be at least 1"));
        }
        Ok(())
    }

    /// Interpolation parameter used for the step starting at `step`.
    pub fn s_at(&self, step: usize) -> f64 {
        let steps = self.steps() as f64;
        let s = match self.schedule {
            Schedule::Start => step as f64 / steps,
            Schedule::Midpoint => (step as f64 + 0.5) / steps,
        };
        s.min(1.0)
    }
}

/// `ψ(t)` in the composite level basis.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub t: f64,
    pub amplitudes: Vec<Complex64>,
}

impl EvolutionState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::vec_norm(&self.amplitudes)
    }

    /// `|c_n|^2` for every composite index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Every amplitude `1/√dim` at `t = 0`.
pub fn uniform_initial_state(dim: usize) -> EvolutionState {
    assert!(dim >= 1, "dimension must be positive");
    let a = 1.0 / (dim as f64).sqrt();
    EvolutionState { t: 0.0, amplitudes: vec![Complex64::new(a, 0.0); dim] }
}

/// Solves `(I + (i/2) H δt) ψ' = (I - (i/2) H δt) ψ`.
pub fn cayley_step(state: &EvolutionState, ha: &TruncatedOperator, dt: f64) -> Result<EvolutionState, EvolveError> {
    if state.dim() != ha.dim() {
        return Err(EvolveError::DimensionMismatch { state: state.dim(), operator: ha.dim() });
    }
    let n = ha.dim();
    let half = Complex64::new(0.0, 0.5 * dt);
    let h = ha.matrix();
    let hpsi = h.mul_vec(&state.amplitudes);
    let rhs: Vec<Complex64> = state.amplitudes.iter().zip(&hpsi).map(|(&p, &hp)| p - half * hp).collect();
    let mut lhs = h.scaled(half);
    for i in 0..n {
        lhs[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let next = linalg::solve(&lhs, &rhs).ok_or(EvolveError::Singular)?;
    Ok(EvolutionState { t: state.t + dt, amplitudes: next })
}

/// The explicit single-step propagator `(I + (i/2)Hδt)^-1 (I - (i/2)Hδt)`.
pub fn cayley_propagator(ha: &TruncatedOperator, dt: f64) -> Result<CMatrix, EvolveError> {
    let n = ha.dim();
    let half = Complex64::new(0.0, 0.5 * dt);
    let plus = CMatrix::identity(n).lin_comb(1.0, &ha.matrix().scaled(half), 1.0);
    let minus = CMatrix::identity(n).lin_comb(1.0, &ha.matrix().scaled(half), -1.0);
    let lu = linalg::Lu::factor(&plus).ok_or(EvolveError::Singular)?;
    let mut out = CMatrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| minus[(i, j)]).collect();
        for (i, z) in lu.solve(&col).into_iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    Ok(out)
}

/// One recorded instant of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub t: f64,
    pub probabilities: Vec<f64>,
    /// `<n_i^2(t)>` per variable.
    pub expectations: Vec<f64>,
    pub e0: Option<f64>,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    /// Canonical text of the equation's left-hand side.
    pub equation: String,
    pub variables: Vec<String>,
    pub spec: TruncationSpec,
    pub params: EvolutionParams,
    pub rows: Vec<TraceRow>,
    pub final_state: EvolutionState,
    /// Largest `|‖ψ(t+δt)‖ - ‖ψ(t)‖|` over all steps.
    pub max_step_norm_drift: f64,
}

impl EvolutionTrace {
    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("final row is always recorded")
    }

    /// `|‖ψ(T)‖ - 1|`.
    pub fn final_norm_drift(&self) -> f64 {
        (self.final_state.norm() - 1.0).abs()
    }
}

/// Runs the adiabatic evolution for `p` on the truncation `spec`.
pub fn run_evolution(p: &Polynomial, spec: TruncationSpec, params: &EvolutionParams) -> Result<EvolutionTrace, Error> {
    let hd = operators::build_hd(p, spec)?;
    let hi = operators::build_hi(spec, params.hi_form);
    let mut trace = run_with_operators(&hd, &hi, spec, params)?;
    trace.equation = p.print_canonical();
    trace.variables = p.variables().to_vec();
    Ok(trace)
}

/// Same loop as [`run_evolution`] with caller-supplied endpoint operators.
pub fn run_with_operators(
    hd: &TruncatedOperator,
    hi: &TruncatedOperator,
    spec: TruncationSpec,
    params: &EvolutionParams,
) -> Result<EvolutionTrace, Error> {
    params.validate()?;
    if hd.dim() != spec.dim() {
        return Err(EvolveError::DimensionMismatch { state: spec.dim(), operator: hd.dim() }.into());
    }
    if hd.real_diagonal().iter().any(|v| !v.is_finite()) {
        return Err(EvolveError::NonFinite { step: 0 }.into());
    }
    let steps = params.steps();
    let squares: Vec<Vec<f64>> =
        spec.indexer().iter().map(|levels| levels.iter().map(|&n| (n * n) as f64).collect()).collect();

    let record = |state: &EvolutionState, step: usize, with_e0: bool| -> Result<TraceRow, Error> {
        let probabilities = state.probabilities();
        let mut expectations = vec![0.0; spec.k()];
        for (prob, sq) in probabilities.iter().zip(&squares) {
            for (e, &v) in expectations.iter_mut().zip(sq) {
                *e += prob * v;
            }
        }
        let (e0, gap) = if with_e0 {
            let s = step as f64 / steps as f64;
            let ha = operators::build_ha(hd, hi, s)?;
            let (e0, gap) = spectra::smallest_eigenvalue(&ha)?;
            (Some(e0), Some(gap))
        } else {
            (None, None)
        };
        Ok(TraceRow { step, t: state.t, probabilities, expectations, e0, gap })
    };

    let mut state = uniform_initial_state(spec.dim());
    let mut rows = vec![record(&state, 0, true)?];
    let mut max_drift: f64 = 0.0;
    for step in 0..steps {
        let ha = operators::build_ha(hd, hi, params.s_at(step))?;
        let before = state.norm();
        state = cayley_step(&state, &ha, params.dt)?;
        // Time as an exact multiple of dt rather than an accumulated sum.
        state.t = (step + 1) as f64 * params.dt;
        if state.amplitudes.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(EvolveError::NonFinite { step: step + 1 }.into());
        }
        max_drift = max_drift.max((state.norm() - before).abs());
        let done = step + 1;
        let is_last = done == steps;
        let want_e0 = is_last || done % params.e0_stride == 0;
        if is_last || want_e0 || done % params.record_stride == 0 {
            rows.push(record(&state, done, want_e0)?);
        }
    }
    Ok(EvolutionTrace {
        equation: String::new(),
        variables: Vec::new(),
        spec,
        params: params.clone(),
        rows,
        final_state: state,
        max_step_norm_drift: max_drift,
    })
}
