//! The decision procedure: evolve, read off the dominant level tuple, and
//! confirm or reject it.
//!
//! A positive answer is only ever given after exact integer evaluation of
//! `D` at the decoded point, so `HasSolution` is a certificate. A negative
//! answer is scoped to the truncation: no solution with every `n_i <= P`.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::evolve::{run_evolution, EvolutionParams, EvolutionTrace};
use crate::operators::TruncationSpec;
use crate::poly::Polynomial;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    HasSolution,
    NoSolution,
    Inconclusive,
    /// `D` is identically zero; every point is a solution.
    DegenerateZero,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            VerdictStatus::HasSolution => "HasSolution",
            VerdictStatus::NoSolution => "NoSolution",
            VerdictStatus::Inconclusive => "Inconclusive",
            VerdictStatus::DegenerateZero => "DegenerateZero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionThresholds {
    /// Minimum final probability of the dominant state.
    pub dominance: f64,
    /// `E0(T)` above this counts as nonzero. Nonzero diagonal entries of
    /// `H_D` are squares of nonzero integers, hence at least 1.
    pub energy: f64,
}

impl Default for DecisionThresholds {
    fn default() -> Self {
        Self { dominance: 0.5, energy: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub equation: String,
    pub variables: Vec<String>,
    pub levels: usize,
    pub total_time: f64,
    pub dt: f64,
    /// Level tuple `(n_1, ..., n_k)` with the largest final probability.
    pub dominant_state: Option<Vec<usize>>,
    pub dominant_probability: f64,
    /// `x_i = n_i^2`, present only for `HasSolution`.
    pub solution: Option<Vec<BigInt>>,
    pub e0_final: f64,
    pub expectations_final: Vec<f64>,
}

/// Argmax of `probabilities`, ties going to the smallest index.
pub fn dominant_index(probabilities: &[f64]) -> Option<(usize, f64)> {
    probabilities.iter().copied().enumerate().fold(None, |best, (i, p)| match best {
        Some((_, bp)) if p <= bp => best,
        _ => Some((i, p)),
    })
}

pub fn decide(
    p: &Polynomial,
    levels: usize,
    max_dim: usize,
    params: &EvolutionParams,
    thresholds: &DecisionThresholds,
) -> Result<Verdict, Error> {
    decide_traced(p, levels, max_dim, params, thresholds).map(|(v, _)| v)
}

/// [`decide`] that also hands back the evolution trace, when one was run.
pub fn decide_traced(
    p: &Polynomial,
    levels: usize,
    max_dim: usize,
    params: &EvolutionParams,
    thresholds: &DecisionThresholds,
) -> Result<(Verdict, Option<EvolutionTrace>), Error> {
    let mut verdict = Verdict {
        status: VerdictStatus::DegenerateZero,
        equation: p.print_canonical(),
        variables: p.variables().to_vec(),
        levels,
        total_time: params.total_time,
        dt: params.dt,
        dominant_state: None,
        dominant_probability: 0.0,
        solution: None,
        e0_final: 0.0,
        expectations_final: Vec::new(),
    };
    if p.is_zero() {
        return Ok((verdict, None));
    }
    if p.num_vars() == 0 {
        // A nonzero constant: `H_D` is that constant squared on every state.
        let c = p.evaluate(&[])?;
        verdict.status = VerdictStatus::NoSolution;
        verdict.e0_final = (&c * &c).to_f64().unwrap_or(f64::INFINITY);
        return Ok((verdict, None));
    }

    let spec = TruncationSpec::for_polynomial(p, levels, max_dim)?;
    let trace = run_evolution(p, spec, params)?;
    let last = trace.last();
    let (index, probability) = dominant_index(&last.probabilities).expect("dimension >= 1");
    let state = spec.indexer().levels_of(index)?;
    verdict.dominant_probability = probability.clamp(0.0, 1.0);
    verdict.e0_final = last.e0.expect("final row carries E0");
    verdict.expectations_final = last.expectations.clone();

    verdict.status = if probability < thresholds.dominance {
        VerdictStatus::Inconclusive
    } else {
        let candidate: Vec<BigInt> = state.iter().map(|&n| BigInt::from(n) * BigInt::from(n)).collect();
        if p.evaluate(&candidate)?.is_zero() {
            verdict.solution = Some(candidate);
            VerdictStatus::HasSolution
        } else if verdict.e0_final > thresholds.energy {
            VerdictStatus::NoSolution
        } else {
            VerdictStatus::Inconclusive
        }
    };
    verdict.dominant_state = Some(state);
    Ok((verdict, Some(trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DEFAULT_MAX_DIM;
    use crate::poly::parse;

    fn run(eq: &str, levels: usize, t: f64) -> Verdict {
        let params = EvolutionParams::new(t, 1.0).unwrap();
        decide(&parse(eq).unwrap(), levels, DEFAULT_MAX_DIM, &params, &DecisionThresholds::default()).unwrap()
    }

    #[test]
    fn argmax_ties_take_smallest_index() {
        assert_eq!(dominant_index(&[0.25, 0.5, 0.5, 0.1]), Some((1, 0.5)));
        assert_eq!(dominant_index(&[]), None);
    }

    #[test]
    fn zero_polynomial_is_degenerate() {
        let v = run("x - x", 3, 10.0);
        assert_eq!(v.status, VerdictStatus::DegenerateZero);
        assert!(v.dominant_state.is_none());
    }

    #[test]
    fn nonzero_constant_has_no_solution() {
        let v = run("3", 3, 10.0);
        assert_eq!(v.status, VerdictStatus::NoSolution);
        assert_eq!(v.e0_final, 9.0);
    }

    #[test]
    fn short_run_is_inconclusive() {
        let v = run("x - 16", 6, 5.0);
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        assert!(v.dominant_probability < 0.5);
        assert!(v.solution.is_none());
    }

    #[test]
    fn solution_outside_truncation_is_not_claimed() {
        // x = 49 needs n = 7 > P.
        let v = run("x - 49", 6, 2000.0);
        assert_ne!(v.status, VerdictStatus::HasSolution);
        assert_eq!(v.levels, 6);
    }

    #[test]
    fn square_root_instance_has_solution() {
        let v = run("x - 16", 6, 2000.0);
        assert_eq!(v.status, VerdictStatus::HasSolution);
        assert_eq!(v.dominant_state.as_deref(), Some(&[4][..]));
        assert_eq!(v.solution, Some(alloc::vec![BigInt::from(16)]));
    }

    #[test]
    fn dimension_cap_propagates() {
        let params = EvolutionParams::new(10.0, 1.0).unwrap();
        let err = decide(&parse("x*y").unwrap(), 10, 50, &params, &DecisionThresholds::default()).unwrap_err();
        assert!(matches!(err, Error::Operator(crate::operators::OperatorError::DimensionCap { .. })));
    }
}
