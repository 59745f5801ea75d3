//! Reference computations that tests check the engine against. Nothing here
//! shares a code path with the implementation it checks: eigenvalues come
//! from a real-symmetric Jacobi sweep, `H_D` from literal matrix
//! substitution, evolutions from scalar Cayley phases, and expressions are
//! evaluated straight from their syntax tree.

use iswhm_core::evolve::EvolutionParams;
use iswhm_core::poly::Polynomial;
use iswhm_core::{BigInt, CMatrix, Complex64, TruncationSpec};
use rand::Rng;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi on its real
/// embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the Hermitian
/// spectrum with every value doubled.
pub fn jacobi_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..200 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off <= 1e-30 * total.max(1.0) {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

/// `D(M_1, ..., M_k)^2` built as a matrix polynomial: each `M_i` is the
/// tensor product of `diag(1, 4, ..., P^2)` in factor `i` with identities
/// elsewhere, monomials are matrix products, and the result is squared by a
/// matrix product.
pub fn hd_by_matrix_substitution(p: &Polynomial, spec: TruncationSpec) -> CMatrix {
    let levels = spec.levels();
    let m1 = CMatrix::from_real_diagonal(&(1..=levels).map(|n| (n * n) as f64).collect::<Vec<_>>());
    let id = CMatrix::identity(levels);
    let factors: Vec<CMatrix> = (0..spec.k())
        .map(|i| (0..spec.k()).fold(CMatrix::identity(1), |acc, j| acc.kron(if i == j { &m1 } else { &id })))
        .collect();
    let dim = spec.dim();
    let mut d = CMatrix::zeros(dim, dim);
    for (exps, coeff) in p.terms() {
        let c: f64 = coeff.to_string().parse().unwrap();
        let mut mono = CMatrix::identity(dim);
        for (f, &e) in factors.iter().zip(exps) {
            for _ in 0..e {
                mono = mono.matmul(f);
            }
        }
        d = d.lin_comb(1.0, &mono, c);
    }
    d.matmul(&d)
}

/// Final amplitudes of a run whose endpoint Hamiltonians are both diagonal:
/// each component just accumulates scalar Cayley factors.
pub fn diagonal_evolution(hd: &[f64], hi: &[f64], params: &EvolutionParams) -> Vec<Complex64> {
    let dim = hd.len();
    let mut amps = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for step in 0..params.steps() {
        let s = params.s_at(step);
        for (i, a) in amps.iter_mut().enumerate() {
            let e = (1.0 - s) * hi[i] + s * hd[i];
            let x = 0.5 * e * params.dt;
            *a *= Complex64::new(1.0, -x) / Complex64::new(1.0, x);
        }
    }
    amps
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gen_range(-5.0..5.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random polynomial in exactly `k` variables with small coefficients.
pub fn random_polynomial<R: Rng>(rng: &mut R, k: usize, max_degree: u32, max_coeff: i64) -> Polynomial {
    let names: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    loop {
        let nterms = rng.gen_range(1..=4);
        let mut terms: Vec<(Vec<u32>, BigInt)> = (0..nterms)
            .map(|_| {
                let exps = (0..k).map(|_| rng.gen_range(0..=max_degree)).collect();
                (exps, BigInt::from(rng.gen_range(-max_coeff..=max_coeff)))
            })
            .collect();
        // make every variable appear
        for i in 0..k {
            let mut exps = vec![0; k];
            exps[i] = 1;
            terms.push((exps, BigInt::from(rng.gen_range(1..=max_coeff))));
        }
        let p = Polynomial::from_terms(names.clone(), terms).unwrap();
        if p.num_vars() == k {
            return p;
        }
    }
}

/// Expression syntax tree for generating parser inputs.
#[derive(Debug, Clone)]
pub enum Expr {
    Num(i64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

pub const EXPR_VARS: [&str; 3] = ["x", "y", "zeta_2"];

impl Expr {
    pub fn random<R: Rng>(rng: &mut R, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.5) {
                Expr::Num(rng.gen_range(0..20))
            } else {
                Expr::Var(rng.gen_range(0..EXPR_VARS.len()))
            };
        }
        let sub = |rng: &mut R| Box::new(Expr::random(rng, depth - 1));
        match rng.gen_range(0..5) {
            0 => Expr::Neg(sub(rng)),
            1 => Expr::Add(sub(rng), sub(rng)),
            2 => Expr::Sub(sub(rng), sub(rng)),
            3 => Expr::Mul(sub(rng), sub(rng)),
            _ => Expr::Pow(sub(rng), rng.gen_range(0..4)),
        }
    }

    /// Fully parenthesized source text.
    pub fn render(&self) -> String {
        match self {
            Expr::Num(n) => n.to_string(),
            Expr::Var(i) => EXPR_VARS[*i].to_string(),
            Expr::Neg(a) => format!("-({})", a.render()),
            Expr::Add(a, b) => format!("({}) + ({})", a.render(), b.render()),
            Expr::Sub(a, b) => format!("({}) - ({})", a.render(), b.render()),
            Expr::Mul(a, b) => format!("({})*({})", a.render(), b.render()),
            Expr::Pow(a, e) => format!("({})^{e}", a.render()),
        }
    }

    /// Direct evaluation with variables bound by name index.
    pub fn eval(&self, values: &[BigInt; 3]) -> BigInt {
        match self {
            Expr::Num(n) => BigInt::from(*n),
            Expr::Var(i) => values[*i].clone(),
            Expr::Neg(a) => -a.eval(values),
            Expr::Add(a, b) => a.eval(values) + b.eval(values),
            Expr::Sub(a, b) => a.eval(values) - b.eval(values),
            Expr::Mul(a, b) => a.eval(values) * b.eval(values),
            Expr::Pow(a, e) => a.eval(values).pow(*e),
        }
    }
}

/// Values for the polynomial's own variable order, taken from a binding of
/// [`EXPR_VARS`].
pub fn bind(p: &Polynomial, values: &[BigInt; 3]) -> Vec<BigInt> {
    p.variables().iter().map(|v| values[EXPR_VARS.iter().position(|w| w == v).unwrap()].clone()).collect()
}
