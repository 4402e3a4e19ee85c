//! Quadrature on the open unit simplex against a Dirichlet weight.
//!
//! With `t_N = 1 − Σ_{j<N} t_j`, the stick-breaking substitution
//! `t₁ = u₁, t₂ = u₂(1−u₁), …` turns
//!
//! ```text
//! ∫_{T^{N−1}} f(t) ∏_j t_j^{α_j − 1} dt
//! ```
//!
//! into an iterated integral over `[0,1]^{N−1}` whose `i`-th factor carries
//! the Beta weight `u^{α_i − 1} (1−u)^{α_{i+1} + … + α_N − 1}`. Each factor
//! gets a Gauss–Jacobi rule for exactly that weight, so endpoint
//! singularities (`α < 1`) are absorbed and never sampled.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::poly::Rational;
use crate::special::{self, pochhammer_ratio_exact};
use num_traits::Signed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("Dirichlet parameters must be positive, got {0}")]
    NonPositiveParameter(f64),
    #[error("need at least {min} simplex coordinates, got {got}")]
    TooFewCoordinates { min: usize, got: usize },
    #[error("points per dimension must be at least 1")]
    NoPoints,
    #[error("Gauss-Jacobi node computation failed: {0}")]
    NodeFailure(String),
    #[error("integrand is not finite at node {index}")]
    NonFinite { index: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Gauss rule for `∫₀¹ g(u) u^{a−1} (1−u)^{b−1} du`, exact for polynomial
/// `g` of degree `≤ 2q − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaGauss {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl BetaGauss {
    pub fn new(q: usize, a: f64, b: f64) -> Result<Self, QuadratureError> {
        if q == 0 {
            return Err(QuadratureError::NoPoints);
        }
        for p in [a, b] {
            if !(p > 0.0) || !p.is_finite() {
                return Err(QuadratureError::NonPositiveParameter(p));
            }
        }
        let (diag, off) = shifted_jacobi_recurrence(q, a, b);
        let mass = (special::log_gamma(a).unwrap() + special::log_gamma(b).unwrap()
            - special::log_gamma(a + b).unwrap())
        .exp();

        let mut nodes = if q == 1 {
            vec![diag[0]]
        } else {
            let mut jacobi = DMatrix::<f64>::zeros(q, q);
            for k in 0..q {
                jacobi[(k, k)] = diag[k];
                if k + 1 < q {
                    jacobi[(k, k + 1)] = off[k + 1];
                    jacobi[(k + 1, k)] = off[k + 1];
                }
            }
            let eigen = SymmetricEigen::new(jacobi);
            let mut ev: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
            ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
            ev
        };

        // Newton polish on the monic recurrence; restores relative accuracy
        // for nodes crowded against u = 0.
        for u in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = monic_eval(q, *u, &diag, &off);
                if dp == 0.0 || !dp.is_finite() {
                    break;
                }
                let step = p / dp;
                *u -= step;
                if step.abs() <= f64::EPSILON * u.abs() {
                    break;
                }
            }
        }
        for (k, &u) in nodes.iter().enumerate() {
            if !(u > 0.0 && u < 1.0) {
                return Err(QuadratureError::NodeFailure(format!(
                    "node {k} = {u} outside (0, 1) for a = {a}, b = {b}, q = {q}"
                )));
            }
            if k > 0 && u <= nodes[k - 1] {
                return Err(QuadratureError::NodeFailure(format!(
                    "nodes not distinct for a = {a}, b = {b}, q = {q}"
                )));
            }
        }

        // Christoffel numbers from the orthonormal recurrence
        let weights = nodes
            .iter()
            .map(|&u| {
                let mut prev = 0.0;
                let mut cur = 1.0;
                let mut sum = 1.0;
                for k in 0..q - 1 {
                    let next = ((u - diag[k]) * cur - off[k] * prev) / off[k + 1];
                    prev = cur;
                    cur = next;
                    sum += cur * cur;
                }
                mass / sum
            })
            .collect();
        Ok(BetaGauss { nodes, weights })
    }
}

/// Recurrence coefficients of the monic orthogonal polynomials for
/// `u^{a−1}(1−u)^{b−1}` on `[0,1]`: `P_{k+1} = (u − diag_k) P_k − off_k² P_{k−1}`.
/// `off[0]` is unused and set to zero; `off` has `q + 1` entries.
fn shifted_jacobi_recurrence(q: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    // Jacobi exponents on [-1, 1]: (1-x)^alpha (1+x)^beta with u = (1+x)/2
    let alpha = b - 1.0;
    let beta = a - 1.0;
    let s = alpha + beta;
    let mut diag = Vec::with_capacity(q);
    let mut off = vec![0.0; q + 1];
    for k in 0..q {
        let d = if k == 0 {
            (beta - alpha) / (s + 2.0)
        } else {
            let kk = 2.0 * k as f64 + s;
            (beta * beta - alpha * alpha) / (kk * (kk + 2.0))
        };
        diag.push((1.0 + d) / 2.0);
    }
    for (k, slot) in off.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let kk = 2.0 * kf + s;
        let sq = if k == 1 {
            // (1 + alpha + beta) cancels; it vanishes when a + b = 1
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s) * (2.0 + s) * (3.0 + s))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + s) / (kk * kk * (kk + 1.0) * (kk - 1.0))
        };
        *slot = sq.sqrt() / 2.0;
    }
    (diag, off)
}

fn monic_eval(q: usize, u: f64, diag: &[f64], off: &[f64]) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..q {
        let b2 = off[k] * off[k];
        let p_next = (u - diag[k]) * p - b2 * p_prev;
        let d_next = p + (u - diag[k]) * d - b2 * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Tensor rule on `T^{N−1}` for the Dirichlet weight with parameters `alphas`.
///
/// Nodes are full `t`-vectors of length `N`, the last coordinate being
/// `1 − Σ_{j<N} t_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexRule {
    alphas: Vec<f64>,
    points_per_dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SimplexRule {
    /// Rule for the symmetric weight `∏_{j=1}^{n} t_j^{κ−1}` on `T^{n−1}`.
    pub fn new(n: usize, kappa: f64, q: usize) -> Result<Self, QuadratureError> {
        if n < 2 {
            return Err(QuadratureError::TooFewCoordinates { min: 2, got: n });
        }
        Self::dirichlet(&vec![kappa; n], q)
    }

    /// Rule for a general Dirichlet weight `∏ t_j^{α_j − 1}`.
    pub fn dirichlet(alphas: &[f64], q: usize) -> Result<Self, QuadratureError> {
        if alphas.len() < 2 {
            return Err(QuadratureError::TooFewCoordinates {
                min: 2,
                got: alphas.len(),
            });
        }
        if q == 0 {
            return Err(QuadratureError::NoPoints);
        }
        if let Some(&bad) = alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(QuadratureError::NonPositiveParameter(bad));
        }
        let dims = alphas.len() - 1;
        let sticks = (0..dims)
            .map(|i| BetaGauss::new(q, alphas[i], alphas[i + 1..].iter().sum()))
            .collect::<Result<Vec<_>, _>>()?;

        let count = q.pow(dims as u32);
        let mut nodes = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; dims];
        for _ in 0..count {
            let mut t = Vec::with_capacity(alphas.len());
            let mut remaining = 1.0;
            let mut w = 1.0;
            for (stick, &k) in sticks.iter().zip(&idx) {
                let u = stick.nodes[k];
                t.push(u * remaining);
                remaining *= 1.0 - u;
                w *= stick.weights[k];
            }
            t.push(remaining);
            nodes.push(t);
            weights.push(w);
            // odometer, last stick fastest
            for d in (0..dims).rev() {
                idx[d] += 1;
                if idx[d] < q {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(SimplexRule {
            alphas: alphas.to_vec(),
            points_per_dim: q,
            nodes,
            weights,
        })
    }

    /// Shared rule for `(n, κ, q)`, built at most once per process.
    pub fn cached(n: usize, kappa: f64, q: usize) -> Result<Arc<Self>, QuadratureError> {
        type Cache = Mutex<HashMap<(usize, u64, usize), Arc<SimplexRule>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(rule) = guard.get(&(n, kappa.to_bits(), q)) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(n, kappa, q)?);
        guard.insert((n, kappa.to_bits(), q), Arc::clone(&rule));
        Ok(rule)
    }

    /// Number of simplex coordinates `N` (including the dependent one).
    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// The common parameter when the weight is symmetric.
    pub fn kappa(&self) -> Option<f64> {
        let k = self.alphas[0];
        self.alphas.iter().all(|&a| a == k).then_some(k)
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes.iter().map(Vec::as_slice).zip(self.weights.iter().copied())
    }

    /// Closed-form mass `∏Γ(α_j) / Γ(Σα_j)` of the weight.
    pub fn total_mass(&self) -> f64 {
        1.0 / special::dirichlet_normalizer(&self.alphas).expect("positive parameters")
    }

    /// `Σ_k w_k f(t_k)`, reduced pairwise in node order.
    pub fn integrate<F>(&self, f: F) -> Result<f64, QuadratureError>
    where
        F: Fn(&[f64]) -> f64,
    {
        let mut terms = Vec::with_capacity(self.nodes.len());
        for (index, (t, w)) in self.nodes().enumerate() {
            let v = f(t);
            if !v.is_finite() {
                return Err(QuadratureError::NonFinite { index });
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Integral divided by the weight's mass, i.e. a Dirichlet expectation.
    pub fn expectation<F>(&self, f: F) -> Result<f64, QuadratureError>
    where
        F: Fn(&[f64]) -> f64,
    {
        Ok(self.integrate(f)? / self.total_mass())
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Normalized Dirichlet moment `E[∏ t_j^{m_j}] = ∏(κ)_{m_j} / (nκ)_{|m|}`
/// for the symmetric weight on `n` coordinates.
pub fn dirichlet_moment(n: usize, kappa: &Rational, m: &[u32]) -> Result<Rational, QuadratureError> {
    if m.len() != n {
        return Err(QuadratureError::DimensionMismatch {
            expected: n,
            got: m.len(),
        });
    }
    dirichlet_moment_general(&vec![kappa.clone(); n], m)
}

/// `E[∏ t_j^{m_j}] = ∏(α_j)_{m_j} / (Σα)_{|m|}` for general parameters.
pub fn dirichlet_moment_general(alphas: &[Rational], m: &[u32]) -> Result<Rational, QuadratureError> {
    if m.len() != alphas.len() {
        return Err(QuadratureError::DimensionMismatch {
            expected: alphas.len(),
            got: m.len(),
        });
    }
    if let Some(a) = alphas.iter().find(|a| !a.is_positive()) {
        return Err(QuadratureError::NonPositiveParameter(crate::poly::rational_to_f64(a)));
    }
    Ok(pochhammer_ratio_exact(alphas, m))
}
