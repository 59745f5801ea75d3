//! Ground energy `E0` and spectral gap of Hermitian truncated operators,
//! and the flow of `E0` along the adiabatic interpolation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::evolve::EvolutionParams;
use crate::linalg::{self, CMatrix, Lu};
use crate::operators::{self, TruncatedOperator, TruncationSpec};
use crate::poly::Polynomial;
use crate::Error;

/// Operators up to this dimension get a full dense eigensolve.
pub const DENSE_LIMIT: usize = 64;
/// Residual tolerance `‖Hv - λv‖`, relative to `max(1, ‖H‖)`.
pub const RESIDUAL_TOL: f64 = 1e-10;

const BLOCK: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("operator contains non-finite entries")]
    NonFinite,
}

/// One point of the spectral flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSample {
    pub t: f64,
    pub s: f64,
    pub e0: f64,
    /// `e1 - e0`; infinite for a one-dimensional operator.
    pub gap: f64,
}

/// All eigenvalues in ascending order by a dense solve.
pub fn eigenvalues(h: &TruncatedOperator) -> Result<Vec<f64>, SpectraError> {
    check_finite(h)?;
    if h.is_diagonal() {
        let mut d = h.real_diagonal();
        d.sort_by(f64::total_cmp);
        return Ok(d);
    }
    linalg::hermitian_eigenvalues(h.matrix()).ok_or(SpectraError::NoConvergence { iterations: 60 })
}

/// `(e0, e1 - e0)` for the two lowest eigenvalues.
///
/// Diagonal operators are read off directly. Up to [`DENSE_LIMIT`] a dense
/// tridiagonal QL solve is used, above it shifted block inverse iteration.
pub fn smallest_eigenvalue(h: &TruncatedOperator) -> Result<(f64, f64), SpectraError> {
    check_finite(h)?;
    if h.dim() <= DENSE_LIMIT || h.is_diagonal() {
        let ev = eigenvalues(h)?;
        return Ok(pair(&ev));
    }
    inverse_iteration(h.matrix(), 10 * h.dim())
}

fn pair(ev: &[f64]) -> (f64, f64) {
    match ev {
        [e0] => (*e0, f64::INFINITY),
        [e0, e1, ..] => (*e0, (e1 - e0).max(0.0)),
        [] => unreachable!("operators have dimension >= 1"),
    }
}

fn check_finite(h: &TruncatedOperator) -> Result<(), SpectraError> {
    if h.matrix().as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(SpectraError::NonFinite)
    }
}

/// Block inverse iteration with Rayleigh–Ritz, shift fixed strictly below
/// the Gershgorin bound so the iteration can only lock onto the bottom of
/// the spectrum.
pub(crate) fn inverse_iteration(h: &CMatrix, max_iter: usize) -> Result<(f64, f64), SpectraError> {
    let n = h.rows();
    let b = n.min(BLOCK);
    let norm = h.max_row_sum().max(1.0);
    let gershgorin = (0..n)
        .map(|i| {
            let off: f64 = h.row(i).iter().enumerate().filter(|&(j, _)| j != i).map(|(_, z)| z.norm()).sum();
            h[(i, i)].re - off
        })
        .fold(f64::INFINITY, f64::min);
    let sigma = gershgorin - 1e-6 * norm;
    let mut shifted = h.clone();
    for i in 0..n {
        shifted[(i, i)] -= Complex64::new(sigma, 0.0);
    }
    let lu = Lu::factor(&shifted).ok_or(SpectraError::NoConvergence { iterations: 0 })?;

    let mut block: Vec<Vec<Complex64>> = (0..b).map(|j| seed_vector(n, j)).collect();
    orthonormalize(&mut block);
    let wanted = b.min(2);
    for iter in 1..=max_iter {
        let mut next: Vec<Vec<Complex64>> = block.iter().map(|x| lu.solve(x)).collect();
        orthonormalize(&mut next);
        let h_next: Vec<Vec<Complex64>> = next.iter().map(|q| h.mul_vec(q)).collect();
        let projected = CMatrix::from_fn(b, b, |i, j| linalg::inner(&next[i], &h_next[j]));
        let projected = projected.lin_comb(0.5, &projected.adjoint(), 0.5);
        let (theta, w) =
            linalg::hermitian_eigh_jacobi(&projected).ok_or(SpectraError::NoConvergence { iterations: iter })?;
        let rotate = |basis: &[Vec<Complex64>], col: usize| -> Vec<Complex64> {
            (0..n).map(|r| (0..b).map(|i| basis[i][r] * w[(i, col)]).sum()).collect()
        };
        let ritz: Vec<Vec<Complex64>> = (0..b).map(|c| rotate(&next, c)).collect();
        let converged = (0..wanted).all(|c| {
            let hx = rotate(&h_next, c);
            let r: f64 = hx.iter().zip(&ritz[c]).map(|(a, x)| (a - x * theta[c]).norm_sqr()).sum::<f64>().sqrt();
            r <= RESIDUAL_TOL * norm
        });
        block = ritz;
        if converged {
            return Ok(pair(&theta[..wanted]));
        }
    }
    Err(SpectraError::NoConvergence { iterations: max_iter })
}

/// Deterministic start vectors: the uniform state first, then fixed
/// quasi-random vectors.
fn seed_vector(n: usize, j: usize) -> Vec<Complex64> {
    if j == 0 {
        return vec![Complex64::new(1.0, 0.0); n];
    }
    let mut state = 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(j as u64 + 1);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let re = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let im = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            Complex64::new(re, im)
        })
        .collect()
}

/// Modified Gram–Schmidt; a collapsed column is replaced by a fresh seed.
fn orthonormalize(block: &mut [Vec<Complex64>]) {
    for j in 0..block.len() {
        for attempt in 0..4 {
            for i in 0..j {
                let proj = linalg::inner(&block[i], &block[j]);
                let (head, tail) = block.split_at_mut(j);
                for (x, q) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= q * proj;
                }
            }
            let norm = linalg::vec_norm(&block[j]);
            if norm > 1e-300 {
                for x in block[j].iter_mut() {
                    *x /= norm;
                }
                break;
            }
            block[j] = seed_vector(block[j].len(), j + 7 * (attempt + 1));
        }
    }
}

/// Samples `E0(H_A(τ/T))` every `e0_stride` steps, always including the
/// first and last step.
pub fn spectral_flow(
    p: &Polynomial,
    spec: TruncationSpec,
    params: &EvolutionParams,
) -> Result<Vec<SpectralSample>, Error> {
    let hd = operators::build_hd(p, spec)?;
    let hi = operators::build_hi(spec, params.hi_form);
    let steps = params.steps();
    let mut out = Vec::new();
    let mut step = 0;
    loop {
        let s = step as f64 / steps as f64;
        let ha = operators::build_ha(&hd, &hi, s)?;
        let (e0, gap) = smallest_eigenvalue(&ha)?;
        out.push(SpectralSample { t: step as f64 * params.dt, s, e0, gap });
        if step == steps {
            break;
        }
        step = (step + params.e0_stride).min(steps);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_hd, build_hi, HiForm};
    use crate::poly::parse;

    #[test]
    fn hi_ground_energy_and_gap() {
        let hi = build_hi(TruncationSpec::new(1, 4).unwrap(), HiForm::ComplementProjector);
        let (e0, gap) = smallest_eigenvalue(&hi).unwrap();
        assert!(e0.abs() < 1e-12);
        assert!((gap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hd_ground_energies() {
        let spec = TruncationSpec::new(1, 6).unwrap();
        let (e0, _) = smallest_eigenvalue(&build_hd(&parse("x - 7").unwrap(), spec).unwrap()).unwrap();
        assert_eq!(e0, 4.0);
        let (e0, gap) = smallest_eigenvalue(&build_hd(&parse("x - 16").unwrap(), spec).unwrap()).unwrap();
        assert_eq!((e0, gap), (0.0, 49.0));
    }

    #[test]
    fn one_dimensional_gap_is_infinite() {
        let op = TruncatedOperator::from_real_diagonal(&[3.0]);
        assert_eq!(smallest_eigenvalue(&op).unwrap(), (3.0, f64::INFINITY));
    }

    #[test]
    fn non_finite_rejected() {
        let op = TruncatedOperator::from_real_diagonal(&[f64::INFINITY, 1.0]);
        assert_eq!(smallest_eigenvalue(&op), Err(SpectraError::NonFinite));
    }

    #[test]
    fn inverse_iteration_matches_dense_on_interpolation() {
        // dim 81 > DENSE_LIMIT
        let p = parse("x*y - 2*x - 3").unwrap();
        let spec = TruncationSpec::new(2, 9).unwrap();
        let hd = build_hd(&p, spec).unwrap();
        let hi = build_hi(spec, HiForm::ComplementProjector);
        for s in [0.0, 0.001, 0.01, 0.1, 0.5, 0.9, 1.0] {
            let ha = operators::build_ha(&hd, &hi, s).unwrap();
            let dense = eigenvalues(&ha).unwrap();
            let (e0, gap) = inverse_iteration(ha.matrix(), 10 * ha.dim()).unwrap();
            let scale = dense.last().unwrap().abs().max(1.0);
            assert!((e0 - dense[0]).abs() < 1e-8 * scale, "s={s}: {e0} vs {}", dense[0]);
            assert!((gap - (dense[1] - dense[0])).abs() < 1e-8 * scale, "s={s}");
        }
    }

    #[test]
    fn flow_endpoints() {
        let p = parse("x - 7").unwrap();
        let spec = TruncationSpec::new(1, 6).unwrap();
        let params = EvolutionParams::new(200.0, 1.0).unwrap().with_e0_stride(7);
        let flow = spectral_flow(&p, spec, &params).unwrap();
        assert_eq!(flow.first().unwrap().s, 0.0);
        assert!(flow[0].e0.abs() < 1e-10);
        let last = flow.last().unwrap();
        assert_eq!((last.s, last.t), (1.0, 200.0));
        assert!((last.e0 - 4.0).abs() < 1e-8);
        assert_eq!(flow.len(), 200 / 7 + 2);
    }
}
