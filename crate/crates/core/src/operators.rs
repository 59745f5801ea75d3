//! Truncated operators on the `P^k`-dimensional tensor space spanned by the
//! well levels `|n1, ..., nk>` with every `ni` in `1..=P`.
//!
//! Natural units throughout: the well's energy prefactor is 1, so the
//! Hamiltonian of one factor is the number-squared operator `M|n> = n^2|n>`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::linalg::CMatrix;
use crate::poly::Polynomial;

/// Largest tensor dimension accepted unless overridden.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Entrywise tolerance for the Hermitian invariant.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("need at least one variable")]
    NoVariables,
    #[error("truncation level must be at least 1")]
    ZeroLevels,
    #[error("dimension {levels}^{k} exceeds the cap of {max_dim}")]
    DimensionCap { k: usize, levels: usize, max_dim: usize },
    #[error("polynomial has {got} variables but the truncation has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("level {level} out of range 1..={levels}")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("composite index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("interpolation parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
}

/// Number of tensor factors `k` and levels per factor `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    k: usize,
    levels: usize,
    dim: usize,
}

impl TruncationSpec {
    pub fn new(k: usize, levels: usize) -> Result<Self, OperatorError> {
        Self::with_max_dim(k, levels, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(k: usize, levels: usize, max_dim: usize) -> Result<Self, OperatorError> {
        if k == 0 {
            return Err(OperatorError::NoVariables);
        }
        if levels == 0 {
            return Err(OperatorError::ZeroLevels);
        }
        let cap = OperatorError::DimensionCap { k, levels, max_dim };
        let exp = u32::try_from(k).map_err(|_| cap.clone())?;
        let dim = levels.checked_pow(exp).ok_or(cap.clone())?;
        if dim > max_dim {
            return Err(cap);
        }
        Ok(Self { k, levels, dim })
    }

    /// Truncation sized for `p` with `levels` per variable.
    pub fn for_polynomial(p: &Polynomial, levels: usize, max_dim: usize) -> Result<Self, OperatorError> {
        Self::with_max_dim(p.num_vars(), levels, max_dim)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indexer(&self) -> BasisIndexer {
        BasisIndexer { spec: *self }
    }
}

/// Row-major bijection between composite indices and level tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndexer {
    spec: TruncationSpec,
}

impl BasisIndexer {
    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    /// `Σ (n_i - 1) P^(k - i)` for 1-based levels.
    pub fn index_of(&self, levels: &[usize]) -> Result<usize, OperatorError> {
        if levels.len() != self.spec.k {
            return Err(OperatorError::Arity { expected: self.spec.k, got: levels.len() });
        }
        let p = self.spec.levels;
        levels.iter().try_fold(0usize, |acc, &n| {
            if n == 0 || n > p {
                Err(OperatorError::LevelOutOfRange { level: n, levels: p })
            } else {
                Ok(acc * p + (n - 1))
            }
        })
    }

    pub fn levels_of(&self, index: usize) -> Result<Vec<usize>, OperatorError> {
        if index >= self.spec.dim {
            return Err(OperatorError::IndexOutOfRange { index, dim: self.spec.dim });
        }
        let p = self.spec.levels;
        let mut out = alloc::vec![0; self.spec.k];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = rest % p + 1;
            rest /= p;
        }
        Ok(out)
    }

    /// Level tuples in composite-index order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.spec.dim).map(|i| self.levels_of(i).expect("index in range"))
    }
}

/// Dense Hermitian matrix on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: CMatrix,
}

impl TruncatedOperator {
    /// Wraps a matrix after checking it is square and Hermitian.
    pub fn new(matrix: CMatrix) -> Result<Self, OperatorError> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(OperatorError::NotHermitian);
        }
        Ok(Self { matrix })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self { matrix: CMatrix::from_real_diagonal(diag) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.matrix.is_diagonal()
    }
}

/// Interaction Hamiltonian variants built from the all-ones matrix `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HiForm {
    /// `I - J/dim`: projector onto the complement of the uniform state.
    #[default]
    ComplementProjector,
    /// `J` itself.
    Ones,
    /// `dim·I - J`, the complete-graph Laplacian.
    Laplacian,
}

impl HiForm {
    pub const ALL: [HiForm; 3] = [HiForm::ComplementProjector, HiForm::Ones, HiForm::Laplacian];

    pub fn name(self) -> &'static str {
        match self {
            HiForm::ComplementProjector => "complement_projector",
            HiForm::Ones => "ones",
            HiForm::Laplacian => "laplacian",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// `diag(1, 4, ..., P^2)`.
pub fn build_m(levels: usize) -> TruncatedOperator {
    let diag: Vec<f64> = (1..=levels).map(|n| (n * n) as f64).collect();
    TruncatedOperator::from_real_diagonal(&diag)
}

/// Exact diagonal of `H_D = D(M1, ..., Mk)^2`: entry `D(n1^2, ..., nk^2)^2`
/// for every basis tuple, in composite-index order.
pub fn hd_diagonal_exact(p: &Polynomial, spec: TruncationSpec) -> Result<Vec<BigInt>, OperatorError> {
    if p.num_vars() != spec.k() {
        return Err(OperatorError::Arity { expected: spec.k(), got: p.num_vars() });
    }
    spec.indexer()
        .iter()
        .map(|levels| {
            let point: Vec<BigInt> = levels.iter().map(|&n| BigInt::from(n) * BigInt::from(n)).collect();
            let value = p.evaluate(&point).expect("arity checked");
            Ok(&value * &value)
        })
        .collect()
}

/// The codifying Hamiltonian. Every `M_i` is diagonal, so the operator
/// polynomial is diagonal with entries given by scalar evaluation.
pub fn build_hd(p: &Polynomial, spec: TruncationSpec) -> Result<TruncatedOperator, OperatorError> {
    let diag: Vec<f64> = hd_diagonal_exact(p, spec)?.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect();
    Ok(TruncatedOperator::from_real_diagonal(&diag))
}

pub fn build_hi(spec: TruncationSpec, form: HiForm) -> TruncatedOperator {
    let n = spec.dim();
    let nf = n as f64;
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let v = match form {
            HiForm::ComplementProjector => delta - 1.0 / nf,
            HiForm::Ones => 1.0,
            HiForm::Laplacian => nf * delta - 1.0,
        };
        Complex64::new(v, 0.0)
    });
    TruncatedOperator { matrix }
}

/// `(1 - s) H_I + s H_D`.
pub fn build_ha(hd: &TruncatedOperator, hi: &TruncatedOperator, s: f64) -> Result<TruncatedOperator, OperatorError> {
    if hd.dim() != hi.dim() {
        return Err(OperatorError::DimensionMismatch { left: hd.dim(), right: hi.dim() });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(OperatorError::ParameterOutOfRange(s));
    }
    Ok(TruncatedOperator { matrix: hi.matrix.lin_comb(1.0 - s, &hd.matrix, s) })
}
