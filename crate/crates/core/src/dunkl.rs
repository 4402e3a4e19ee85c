//! Dunkl kernel, generalized Bessel function and intertwining operator for
//! the symmetric group `S_n` (root system `A_{n−1}`).
//!
//! Kernels are evaluated only in the directions `y = e_ℓ`, where closed
//! forms exist:
//!
//! ```text
//! E_κ(x, e_ℓ) = Φ₂⁽ⁿ⁾[κ,…,κ+1 (slot ℓ),…,κ; nκ+1; x]
//!             = e^{x_n} Φ₂⁽ⁿ⁻¹⁾[κ,…,κ+1 (slot ℓ),…; nκ+1; x₁−x_n, …, x_{n−1}−x_n]
//!             = n c_κ ∫_{T^{n−1}} e^{⟨x,t⟩} t_ℓ ∏ t_j^{κ−1} dt
//!
//! J_κ(λ(ν), x) = Φ₂⁽ⁿ⁾[κ,…,κ; nκ; νx]
//!              = e^{νx_n} Φ₂⁽ⁿ⁻¹⁾[κ,…,κ; nκ; ν(x_j − x_n)]   (x on Σx_j = 0)
//!              = c_κ ∫_{T^{n−1}} e^{ν⟨x,t⟩} ∏ t_j^{κ−1} dt
//! ```
//!
//! with `c_κ = Γ(nκ)/Γ(κ)ⁿ` and `λ(ν) = (−ν/n, …, −ν/n, (n−1)ν/n)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::poly::{MultiPoly, Multiplicity, PolyError, Rational, Transposition};
use crate::quadrature::{dirichlet_moment, QuadratureError, SimplexRule};
use crate::special::{self, humbert_phi2, on_hyperplane, HumbertSpec, SeriesError, SeriesParams, SeriesValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DunklError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("{0} requires kappa > 0")]
    NeedsPositiveKappa(&'static str),
}

/// How a kernel or Bessel value is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// `n`-variable Humbert series; valid for every real `x`.
    Series,
    /// `(n−1)`-variable Humbert series after factoring out `e^{x_n}`.
    Reduced,
    /// Simplex integral with the Dirichlet weight.
    Quadrature,
    /// Series value, cross-checked against quadrature.
    Both,
}

impl Method {
    fn uses_quadrature(self) -> bool {
        matches!(self, Method::Quadrature | Method::Both)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Reduced => "reduced",
            Method::Quadrature => "quadrature",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "series" => Ok(Method::Series),
            "reduced" => Ok(Method::Reduced),
            "quadrature" => Ok(Method::Quadrature),
            "both" => Ok(Method::Both),
            other => Err(DunklError::InvalidQuery(format!("unknown method {other:?}"))),
        }
    }
}

/// Series truncation and quadrature resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accuracy {
    pub series: SeriesParams,
    /// Gauss–Jacobi points per simplex dimension.
    pub q: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            series: SeriesParams::default(),
            q: 12,
        }
    }
}

/// A computed value with its error information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// Series truncation bound, or for quadrature the change against a
    /// rule with four more points per dimension.
    pub err_bound: f64,
    pub method: Method,
    /// `|series − quadrature|` when `method` is [`Method::Both`].
    pub discrepancy: Option<f64>,
}

/// `E_κ(x, e_ℓ)` request.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelQuery {
    kappa: Multiplicity,
    x: Vec<f64>,
    ell: usize,
    method: Method,
    accuracy: Accuracy,
}

impl KernelQuery {
    pub fn new(kappa: Multiplicity, x: Vec<f64>, ell: usize, method: Method) -> Result<Self, DunklError> {
        let n = x.len();
        if n < 2 {
            return Err(DunklError::InvalidQuery(format!("need n >= 2, got {n}")));
        }
        if ell == 0 || ell > n {
            return Err(DunklError::InvalidQuery(format!("ell = {ell} outside 1..={n}")));
        }
        check_point(&x)?;
        if method.uses_quadrature() && kappa.to_f64() <= 0.0 {
            return Err(DunklError::NeedsPositiveKappa("quadrature"));
        }
        Ok(KernelQuery {
            kappa,
            x,
            ell,
            method,
            accuracy: Accuracy::default(),
        })
    }

    pub fn with_accuracy(mut self, accuracy: Accuracy) -> Self {
        self.accuracy = accuracy;
        self
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn kappa(&self) -> &Multiplicity {
        &self.kappa
    }

    pub fn method(&self) -> Method {
        self.method
    }
}

/// `J_κ(λ(ν), x)` request.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselSpec {
    kappa: Multiplicity,
    nu: f64,
    x: Vec<f64>,
}

impl BesselSpec {
    pub fn new(kappa: Multiplicity, nu: f64, x: Vec<f64>) -> Result<Self, DunklError> {
        if x.len() < 2 {
            return Err(DunklError::InvalidQuery(format!("need n >= 2, got {}", x.len())));
        }
        check_point(&x)?;
        if !nu.is_finite() {
            return Err(DunklError::InvalidQuery("nu must be finite".into()));
        }
        Ok(BesselSpec { kappa, nu, x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kappa(&self) -> &Multiplicity {
        &self.kappa
    }
}

fn check_point(x: &[f64]) -> Result<(), DunklError> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(DunklError::InvalidQuery("x must be finite".into()))
    }
}

fn positive_kappa(kappa: f64, what: &'static str) -> Result<(), DunklError> {
    if kappa > 0.0 {
        Ok(())
    } else {
        Err(DunklError::NeedsPositiveKappa(what))
    }
}

/// `c_κ = Γ(nκ) / Γ(κ)ⁿ`.
pub fn c_kappa(n: usize, kappa: f64) -> Result<f64, DunklError> {
    positive_kappa(kappa, "c_kappa")?;
    Ok(special::dirichlet_normalizer(&vec![kappa; n])?)
}

/// `c_κ⁽ⁿ⁾ = n c_κ = Γ(nκ+1) / (κ Γ(κ)ⁿ)`.
pub fn c_kappa_single(n: usize, kappa: f64) -> Result<f64, DunklError> {
    positive_kappa(kappa, "c_kappa")?;
    let nk = n as f64 * kappa;
    let ln = special::log_gamma(nk + 1.0)? - kappa.ln() - n as f64 * special::log_gamma(kappa)?;
    Ok(ln.exp())
}

fn from_series(v: SeriesValue, scale: f64, method: Method) -> Evaluation {
    Evaluation {
        value: scale * v.value,
        err_bound: scale * v.error_bound,
        method,
        discrepancy: None,
    }
}

// ---------------------------------------------------------------------------
// generalized Bessel function
// ---------------------------------------------------------------------------

/// `J_κ(λ(ν), x) = Φ₂⁽ⁿ⁾[κ,…,κ; nκ; νx]`, any real `x`.
pub fn bessel_series(spec: &BesselSpec, params: &SeriesParams) -> Result<Evaluation, DunklError> {
    let n = spec.n();
    let kappa = spec.kappa.to_f64();
    let x: Vec<f64> = spec.x.iter().map(|v| spec.nu * v).collect();
    if kappa == 0.0 {
        return Ok(bessel_at_zero_kappa(&x, Method::Series));
    }
    let h = HumbertSpec::new(vec![kappa; n], n as f64 * kappa, x)?;
    Ok(from_series(humbert_phi2(&h, params)?, 1.0, Method::Series))
}

/// `J_κ(λ(ν), x) = e^{νx_n} Φ₂⁽ⁿ⁻¹⁾[κ,…,κ; nκ; ν(x₁−x_n), …]`, only on the
/// hyperplane `Σx_j = 0`.
pub fn bessel_reduced(spec: &BesselSpec, params: &SeriesParams) -> Result<Evaluation, DunklError> {
    if !on_hyperplane(&spec.x) {
        return Err(SeriesError::OffHyperplane(spec.x.iter().sum()).into());
    }
    let n = spec.n();
    let kappa = spec.kappa.to_f64();
    let xn = spec.x[n - 1];
    if kappa == 0.0 {
        let x: Vec<f64> = spec.x.iter().map(|v| spec.nu * v).collect();
        return Ok(bessel_at_zero_kappa(&x, Method::Reduced));
    }
    let diffs = spec.x[..n - 1].iter().map(|v| spec.nu * (v - xn)).collect();
    let h = HumbertSpec::new(vec![kappa; n - 1], n as f64 * kappa, diffs)?;
    Ok(from_series(
        humbert_phi2(&h, params)?,
        (spec.nu * xn).exp(),
        Method::Reduced,
    ))
}

// At κ = 0 only the single-index terms of the series survive.
fn bessel_at_zero_kappa(x: &[f64], method: Method) -> Evaluation {
    let value = x.iter().map(|v| v.exp()).sum::<f64>() / x.len() as f64;
    Evaluation {
        value,
        err_bound: 0.0,
        method,
        discrepancy: None,
    }
}

fn quadrature_value<F>(n: usize, kappa: f64, q: usize, f: F) -> Result<(f64, f64), DunklError>
where
    F: Fn(&[f64]) -> f64,
{
    let rule = SimplexRule::cached(n, kappa, q)?;
    let finer = SimplexRule::cached(n, kappa, q + 4)?;
    let v = rule.integrate(&f)?;
    let w = finer.integrate(&f)?;
    Ok((v, (v - w).abs()))
}

/// `J_κ(λ(ν), x) = c_κ ∫ e^{ν⟨x,t⟩} ∏t_j^{κ−1} dt`.
pub fn bessel_quadrature(spec: &BesselSpec, q: usize) -> Result<Evaluation, DunklError> {
    let n = spec.n();
    let kappa = spec.kappa.to_f64();
    let c = c_kappa(n, kappa)?;
    let (v, est) = quadrature_value(n, kappa, q, |t| (spec.nu * dot(&spec.x, t)).exp())?;
    Ok(Evaluation {
        value: c * v,
        err_bound: c * est,
        method: Method::Quadrature,
        discrepancy: None,
    })
}

pub fn bessel(spec: &BesselSpec, method: Method, accuracy: &Accuracy) -> Result<Evaluation, DunklError> {
    match method {
        Method::Series => bessel_series(spec, &accuracy.series),
        Method::Reduced => bessel_reduced(spec, &accuracy.series),
        Method::Quadrature => bessel_quadrature(spec, accuracy.q),
        Method::Both => {
            let s = bessel_series(spec, &accuracy.series)?;
            let quad = bessel_quadrature(spec, accuracy.q)?;
            Ok(Evaluation {
                method: Method::Both,
                discrepancy: Some((s.value - quad.value).abs()),
                ..s
            })
        }
    }
}

fn dot(x: &[f64], t: &[f64]) -> f64 {
    x.iter().zip(t).map(|(a, b)| a * b).sum()
}

// ---------------------------------------------------------------------------
// Dunkl kernel
// ---------------------------------------------------------------------------

fn kernel_parameters(n: usize, kappa: f64, ell: usize) -> (Vec<f64>, f64) {
    let mut b = vec![kappa; n];
    b[ell - 1] += 1.0;
    (b, n as f64 * kappa + 1.0)
}

/// `E_κ(x, e_ℓ) = Φ₂⁽ⁿ⁾[κ,…,κ+1,…,κ; nκ+1; x]`.
pub fn kernel_series(query: &KernelQuery) -> Result<Evaluation, DunklError> {
    let (b, c) = kernel_parameters(query.n(), query.kappa.to_f64(), query.ell);
    let h = HumbertSpec::new(b, c, query.x.clone())?;
    Ok(from_series(
        humbert_phi2(&h, &query.accuracy.series)?,
        1.0,
        Method::Series,
    ))
}

/// `E_κ(x, e_ℓ) = e^{x_n} Φ₂⁽ⁿ⁻¹⁾[b₁,…,b_{n−1}; nκ+1; x_j − x_n]`.
pub fn kernel_reduced(query: &KernelQuery) -> Result<Evaluation, DunklError> {
    let n = query.n();
    let (mut b, c) = kernel_parameters(n, query.kappa.to_f64(), query.ell);
    b.truncate(n - 1);
    let xn = query.x[n - 1];
    let diffs = query.x[..n - 1].iter().map(|v| v - xn).collect();
    let h = HumbertSpec::new(b, c, diffs)?;
    Ok(from_series(
        humbert_phi2(&h, &query.accuracy.series)?,
        xn.exp(),
        Method::Reduced,
    ))
}

/// `E_κ(x, e_ℓ) = n c_κ ∫ e^{⟨x,t⟩} t_ℓ ∏t_j^{κ−1} dt`.
pub fn kernel_quadrature(query: &KernelQuery) -> Result<Evaluation, DunklError> {
    let n = query.n();
    let kappa = query.kappa.to_f64();
    let c = c_kappa_single(n, kappa)?;
    let l = query.ell - 1;
    let (v, est) = quadrature_value(n, kappa, query.accuracy.q, |t| dot(&query.x, t).exp() * t[l])?;
    Ok(Evaluation {
        value: c * v,
        err_bound: c * est,
        method: Method::Quadrature,
        discrepancy: None,
    })
}

pub fn dunkl_kernel(query: &KernelQuery) -> Result<Evaluation, DunklError> {
    match query.method {
        Method::Series => kernel_series(query),
        Method::Reduced => kernel_reduced(query),
        Method::Quadrature => kernel_quadrature(query),
        Method::Both => {
            let s = kernel_series(query)?;
            let quad = kernel_quadrature(query)?;
            Ok(Evaluation {
                method: Method::Both,
                discrepancy: Some((s.value - quad.value).abs()),
                ..s
            })
        }
    }
}

/// `J_κ(e₁, x) = (1/n) Σ_j E_κ(x(1 j), e₁)`, each kernel evaluated with
/// `method`.
pub fn bessel_by_symmetrization(
    x: &[f64],
    kappa: &Multiplicity,
    method: Method,
    accuracy: &Accuracy,
) -> Result<Evaluation, DunklError> {
    let n = x.len();
    let mut total = 0.0;
    let mut err = 0.0;
    let mut disc: Option<f64> = None;
    for j in 1..=n {
        let y = if j == 1 {
            x.to_vec()
        } else {
            Transposition::new(1, j)?.apply_to_point(x)
        };
        let e = dunkl_kernel(&KernelQuery::new(kappa.clone(), y, 1, method)?.with_accuracy(*accuracy))?;
        total += e.value;
        err += e.err_bound;
        if let Some(d) = e.discrepancy {
            disc = Some(disc.unwrap_or(0.0).max(d));
        }
    }
    Ok(Evaluation {
        value: total / n as f64,
        err_bound: err / n as f64,
        method,
        discrepancy: disc,
    })
}

// ---------------------------------------------------------------------------
// intertwining operator
// ---------------------------------------------------------------------------

/// All exponent vectors of length `n` with entries summing to `m`.
pub fn compositions(n: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=m).rev() {
            prefix.push(k);
            rec(n, m - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, m, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn multinomial(m: u32, parts: &[u32]) -> BigInt {
    let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    parts.iter().fold(fact(m), |acc, &p| acc / fact(p))
}

fn exact_kappa(kappa: &Rational) -> Result<(), DunklError> {
    if kappa.is_positive() {
        Ok(())
    } else {
        Err(DunklError::NeedsPositiveKappa("exact intertwining"))
    }
}

/// `V_κ(x_ℓ^m) = n c_κ ∫ ⟨x,t⟩^m t_ℓ ∏t_j^{κ−1} dt`, expanded multinomially
/// and integrated term by term with exact Dirichlet moments:
/// `V_κ(x_ℓ^m) = n Σ_{|α|=m} (m; α) E[t^{α+e_ℓ}] x^α`.
pub fn intertwine_monomial(n: usize, ell: usize, m: u32, kappa: &Rational) -> Result<MultiPoly, DunklError> {
    exact_kappa(kappa)?;
    if n < 2 || ell == 0 || ell > n {
        return Err(DunklError::InvalidQuery(format!(
            "need n >= 2 and 1 <= ell <= n, got n = {n}, ell = {ell}"
        )));
    }
    let scale = Rational::from_integer(BigInt::from(n));
    let mut out = MultiPoly::zero(n);
    for alpha in compositions(n, m) {
        let mut shifted = alpha.clone();
        shifted[ell - 1] += 1;
        let coeff = dirichlet_moment(n, kappa, &shifted)? * Rational::from_integer(multinomial(m, &alpha)) * &scale;
        out = &out + &MultiPoly::monomial(alpha, coeff);
    }
    Ok(out)
}

/// `Σ_{σ∈S_n} ⟨x, e_n σ⟩^m = (n−1)! Σ_k x_k^m`.
pub fn symmetric_power_sum(n: usize, m: u32) -> MultiPoly {
    let fact: BigInt = (1..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let mut out = MultiPoly::zero(n);
    for k in 0..n {
        let mut e = vec![0; n];
        e[k] = m;
        out = &out + &MultiPoly::monomial(e, Rational::from_integer(fact.clone()));
    }
    out
}

/// `V_κ[Σ_σ ⟨·, e_nσ⟩^m] = n! c_κ ∫ ⟨x,t⟩^m ∏t_j^{κ−1} dt`, exactly.
pub fn intertwine_symmetric_power(n: usize, m: u32, kappa: &Rational) -> Result<MultiPoly, DunklError> {
    exact_kappa(kappa)?;
    if n < 2 {
        return Err(DunklError::InvalidQuery(format!("need n >= 2, got {n}")));
    }
    let n_fact: BigInt = (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let scale = Rational::from_integer(n_fact);
    let mut out = MultiPoly::zero(n);
    for alpha in compositions(n, m) {
        let coeff = dirichlet_moment(n, kappa, &alpha)? * Rational::from_integer(multinomial(m, &alpha)) * &scale;
        out = &out + &MultiPoly::monomial(alpha, coeff);
    }
    Ok(out)
}

fn rule_kappa(rule: &SimplexRule, x: &[f64]) -> Result<f64, DunklError> {
    let kappa = rule
        .kappa()
        .ok_or_else(|| DunklError::InvalidQuery("rule must carry the symmetric Dirichlet weight".into()))?;
    if rule.n() != x.len() {
        return Err(DunklError::InvalidQuery(format!(
            "rule has {} coordinates but x has {}",
            rule.n(),
            x.len()
        )));
    }
    check_point(x)?;
    Ok(kappa)
}

/// `V_κ F(x)` for `F(x) = f(x_ℓ)`:
/// `c_κ⁽ⁿ⁾ ∫ f(⟨x,t⟩) t_ℓ ∏t_j^{κ−1} dt`. The multiplicity is the rule's.
pub fn intertwine_single<F>(f: F, ell: usize, x: &[f64], rule: &SimplexRule) -> Result<f64, DunklError>
where
    F: Fn(f64) -> f64,
{
    let kappa = rule_kappa(rule, x)?;
    let n = x.len();
    if ell == 0 || ell > n {
        return Err(DunklError::InvalidQuery(format!("ell = {ell} outside 1..={n}")));
    }
    let c = c_kappa_single(n, kappa)?;
    Ok(c * rule.integrate(|t| f(dot(x, t)) * t[ell - 1])?)
}

/// `V_κ F(x)` for `F(x) = Σ_{σ∈S_n} f((xσ)_j)`:
/// `n! c_κ ∫ f(⟨x,t⟩) ∏t_j^{κ−1} dt`.
pub fn intertwine_symmetric<F>(f: F, x: &[f64], rule: &SimplexRule) -> Result<f64, DunklError>
where
    F: Fn(f64) -> f64,
{
    let kappa = rule_kappa(rule, x)?;
    let n = x.len();
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let c = c_kappa(n, kappa)?;
    Ok(n_fact * c * rule.integrate(|t| f(dot(x, t)))?)
}

// ---------------------------------------------------------------------------
// limit and shift identities
// ---------------------------------------------------------------------------

/// Outcome of comparing the scaled Heckman–Opdam function with `J_κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCheck {
    pub m: f64,
    /// `F_κ(λ(mν) + ρ(κ), x/m)`.
    pub value: f64,
    /// `J_κ(λ(ν), x)` from the Humbert series.
    pub bessel: f64,
    pub deviation: f64,
}

/// Evaluates `F_κ(mλ(ν) + ρ(κ), x/m)` via the degenerate closed form with
/// `ν ↦ mν`, `x ↦ x/m` (`λ` is linear in `ν`), and compares with `J_κ`.
pub fn limit_check(m: f64, nu: f64, kappa: f64, x: &[f64], params: &SeriesParams) -> Result<LimitCheck, DunklError> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(DunklError::InvalidQuery(format!("scaling m must be positive, got {m}")));
    }
    positive_kappa(kappa, "limit check")?;
    let scaled: Vec<f64> = x.iter().map(|v| v / m).collect();
    let value = special::degenerate_ho(m * nu, kappa, &scaled, params)?.value;
    let spec = BesselSpec::new(Multiplicity::float(kappa)?, nu, x.to_vec())?;
    let bessel = bessel_series(&spec, params)?.value;
    Ok(LimitCheck {
        m,
        value,
        bessel,
        deviation: (value - bessel).abs(),
    })
}

/// Both sides of `E_κ(x, e_ℓ) = n ∂_ℓ J_κ(e_ℓ, x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

/// Finite-difference step for [`shift_check`].
pub const SHIFT_STEP: f64 = 1e-4;

/// Checks `E_κ(x, e_ℓ) = n ∂_ℓ J_κ(x)`. Both sides use quadrature; the
/// derivative is a central difference with one Richardson level.
pub fn shift_check(x: &[f64], kappa: f64, ell: usize, q: usize) -> Result<ShiftCheck, DunklError> {
    positive_kappa(kappa, "shift check")?;
    let n = x.len();
    if n < 2 || ell == 0 || ell > n {
        return Err(DunklError::InvalidQuery(format!(
            "need n >= 2 and 1 <= ell <= n, got n = {n}, ell = {ell}"
        )));
    }
    check_point(x)?;
    let rule = SimplexRule::cached(n, kappa, q)?;
    let lhs = c_kappa_single(n, kappa)? * rule.integrate(|t| dot(x, t).exp() * t[ell - 1])?;

    let c = c_kappa(n, kappa)?;
    let bessel_at = |shift: f64| -> Result<f64, DunklError> {
        let mut y = x.to_vec();
        y[ell - 1] += shift;
        Ok(c * rule.integrate(|t| dot(&y, t).exp())?)
    };
    let central = |h: f64| -> Result<f64, DunklError> { Ok((bessel_at(h)? - bessel_at(-h)?) / (2.0 * h)) };
    let coarse = central(SHIFT_STEP)?;
    let fine = central(SHIFT_STEP / 2.0)?;
    let derivative = (4.0 * fine - coarse) / 3.0;
    let rhs = n as f64 * derivative;
    Ok(ShiftCheck {
        lhs,
        rhs,
        deviation: (lhs - rhs).abs(),
    })
}
