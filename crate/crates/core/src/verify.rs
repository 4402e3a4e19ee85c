//! Identity verification suite.
//!
//! Every identity in [`manifest`] checks one relation between the kernel,
//! the Bessel function, the intertwiner and the underlying special
//! functions, over a deterministic parameter grid. Each parameter point
//! yields one [`VerifyReport`]; the CLI writes them as JSON lines.
//!
//! Exact identities report `metric = 0` on success and the largest
//! offending coefficient otherwise, against `threshold = 0`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dunkl::{
    self, bessel_by_symmetrization, bessel_reduced, bessel_series, intertwine_monomial, intertwine_single,
    intertwine_symmetric, intertwine_symmetric_power, kernel_quadrature, kernel_reduced, kernel_series,
    symmetric_power_sum, Accuracy, BesselSpec, DunklError, KernelQuery, Method,
};
use crate::poly::{parse_rational, rational_to_f64, MultiPoly, Multiplicity, Rational};
use crate::quadrature::{dirichlet_moment, SimplexRule};
use crate::special::{
    degenerate_ho, dirichlet_normalizer, humbert_phi2, lauricella_fd, pochhammer, HumbertSpec, LauricellaSpec,
    SeriesParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),
}

/// Outcome of one identity at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub metric: f64,
    pub threshold: f64,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl VerifyReport {
    fn new(id: &str, params: BTreeMap<String, String>, metric: f64, threshold: f64) -> Self {
        VerifyReport {
            id: id.to_string(),
            params,
            metric,
            threshold,
            passed: metric <= threshold,
            runtime_ms: 0,
        }
    }

    fn failed(id: &str, mut params: BTreeMap<String, String>, threshold: f64, err: &DunklError) -> Self {
        params.insert("error".into(), err.to_string());
        Self::new(id, params, f64::INFINITY, threshold)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Suite configuration. Grid overrides replace each identity's default
/// `n` or `κ` values when set.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub points: usize,
    pub q: usize,
    pub series: SeriesParams,
    pub max_degree: u32,
    pub ns: Option<Vec<usize>>,
    pub kappas: Option<Vec<Rational>>,
    /// Record wall-clock time in `runtime_ms`; off gives bit-identical reruns.
    pub timing: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20_240_917,
            points: 20,
            q: 12,
            series: SeriesParams::default(),
            max_degree: 8,
            ns: None,
            kappas: None,
            timing: true,
        }
    }
}

impl VerifyConfig {
    fn accuracy(&self) -> Accuracy {
        Accuracy {
            series: self.series,
            q: self.q,
        }
    }

    fn ns(&self, default: &[usize]) -> Vec<usize> {
        self.ns.clone().unwrap_or_else(|| default.to_vec())
    }

    fn kappas(&self, default: &[&str]) -> Vec<Rational> {
        self.kappas.clone().unwrap_or_else(|| {
            default
                .iter()
                .map(|s| parse_rational(s).expect("grid literal"))
                .collect()
        })
    }

    /// Seeded points in `[lo, hi]^n`, a distinct stream per identity and `n`.
    fn sample(&self, id: &str, n: usize, count: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(id) ^ (n as u64).wrapping_mul(0x9e37_79b9));
        (0..count)
            .map(|_| (0..n).map(|_| rng.random_range(lo..=hi)).collect())
            .collect()
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Kappa grids used when the config does not override them.
const KAPPA_EXACT: &[&str] = &["1/3", "1/2", "1", "7/4"];
const KAPPA_NUMERIC: &[&str] = &["1/2", "1", "5/2"];
const KAPPA_WIDE: &[&str] = &["1/3", "1/2", "1", "7/4", "5/2"];

type Runner = fn(&Identity, &VerifyConfig) -> Vec<VerifyReport>;

/// One entry of the suite.
pub struct Identity {
    pub id: &'static str,
    /// The relation being checked.
    pub statement: &'static str,
    /// Pass threshold for every report of this identity.
    pub threshold: f64,
    run: Runner,
}

impl std::fmt::Debug for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Identity").field("id", &self.id).finish()
    }
}

/// All identities, sorted by id.
pub fn manifest() -> &'static [Identity] {
    &MANIFEST
}

static MANIFEST: [Identity; 22] = [
    Identity {
        id: "bessel-quadrature",
        statement: "J(x) = Φ₂⁽ⁿ⁾[κ…κ; nκ; x] = c_κ ∫ e^{⟨x,t⟩} ∏t_j^{κ-1} dt",
        threshold: 1e-10,
        run: check_bessel_quadrature,
    },
    Identity {
        id: "bessel-reduced",
        statement: "Φ₂⁽ⁿ⁾[κ…κ; nκ; νx] = e^{νx_n} Φ₂⁽ⁿ⁻¹⁾[κ…κ; nκ; ν(x_j - x_n)] on Σx = 0",
        threshold: 1e-10,
        run: check_bessel_reduced,
    },
    Identity {
        id: "bessel-single-direction",
        statement: "V_κ[(1/n!) Σ_σ e^{⟨·, e_ℓσ⟩}](x) = J_κ(e_ℓ, x)",
        threshold: 1e-10,
        run: check_bessel_single_direction,
    },
    Identity {
        id: "confluence",
        statement: "F_D(a; b; c; x/a) → Φ₂[b; c; x] as a → ∞, monotonically in error",
        threshold: 1e-3,
        run: check_confluence,
    },
    Identity {
        id: "degenerate-ho",
        statement: "shell-convolution F_D equals direct multi-index summation in the degenerate closed form",
        threshold: 1e-12,
        run: check_degenerate_ho,
    },
    Identity {
        id: "diagonal",
        statement: "E_κ((s,…,s), e_ℓ) = J_κ((s,…,s)) = e^s (relative)",
        threshold: 1e-12,
        run: check_diagonal,
    },
    Identity {
        id: "humbert-integral",
        statement: "Φ₂[b; c; x] = Γ(c)/(Γ(c-Σb)∏Γ(b_j)) ∫ e^{⟨x,t⟩} (1-Σt)^{c-Σb-1} ∏t_j^{b_j-1} dt (relative)",
        threshold: 1e-10,
        run: check_humbert_integral,
    },
    Identity {
        id: "ir1",
        statement: "D_i V_κ(x_ℓ^m) = V_κ(∂_i x_ℓ^m), exact",
        threshold: 0.0,
        run: check_intertwining,
    },
    Identity {
        id: "kappa-zero",
        statement: "|V_κ(x_ℓ^m) - x_ℓ^m| ≤ C_m κ coefficient-wise at κ = 1e-6",
        threshold: 1.0,
        run: check_kappa_zero,
    },
    Identity {
        id: "kernel-quadrature",
        statement: "E_κ(x, e_ℓ) = Φ₂⁽ⁿ⁾[…κ+1…; nκ+1; x] = n c_κ ∫ e^{⟨x,t⟩} t_ℓ ∏t_j^{κ-1} dt > 0",
        threshold: 1e-10,
        run: check_kernel_quadrature,
    },
    Identity {
        id: "kernel-sum",
        statement: "Σ_ℓ E_κ(x, e_ℓ) = n J_κ(x)",
        threshold: 1e-10,
        run: check_kernel_sum,
    },
    Identity {
        id: "normalization-degree",
        statement: "V_κ 1 = 1 and V_κ(x_ℓ^m) is homogeneous of degree m, exact",
        threshold: 0.0,
        run: check_normalization_degree,
    },
    Identity {
        id: "permutation-symmetry",
        statement: "J_κ(xσ) = J_κ(x) for all σ ∈ S_n, and J_κ > 0",
        threshold: 1e-12,
        run: check_permutation_symmetry,
    },
    Identity {
        id: "quadrature-exactness",
        statement: "normalized rule moments equal ∏(κ)_{m_j}/(nκ)_{|m|} through degree 2q-1 (relative)",
        threshold: 1e-12,
        run: check_quadrature_exactness,
    },
    Identity {
        id: "rational-limit",
        statement: "F_κ(λ(mν)+ρ, x/m) → J_κ(λ(ν), x), deviation strictly decreasing over m = 10, 50, 200",
        threshold: 1e-3,
        run: check_rational_limit,
    },
    Identity {
        id: "shift-a2",
        statement: "E_κ(x, e₃) = 3 ∂₃ J_κ(x) for n = 3",
        threshold: 1e-8,
        run: check_shift_a2,
    },
    Identity {
        id: "shift-general",
        statement: "E_κ(x, e_ℓ) = n ∂_ℓ J_κ(x) for n ≤ 4",
        threshold: 1e-8,
        run: check_shift_general,
    },
    Identity {
        id: "single-intertwiner",
        statement: "V_κ f(x_ℓ) = c_κ⁽ⁿ⁾ ∫ f(⟨x,t⟩) t_ℓ ∏t_j^{κ-1} dt for f = u^m and f = exp (relative)",
        threshold: 1e-10,
        run: check_single_intertwiner,
    },
    Identity {
        id: "symmetric-intertwiner",
        statement: "V_κ Σ_σ f((xσ)_j) = n! c_κ ∫ f(⟨x,t⟩) ∏t_j^{κ-1} dt for f = u^m and f = exp (relative)",
        threshold: 1e-10,
        run: check_symmetric_intertwiner,
    },
    Identity {
        id: "symmetric-power",
        statement: "V_κ[Σ_σ ⟨·, e_nσ⟩^m] = n! Σ_{|α|=m} (m; α) E[t^α] x^α = (n-1)! Σ_ℓ V_κ(x_ℓ^m), exact",
        threshold: 0.0,
        run: check_symmetric_power,
    },
    Identity {
        id: "symmetrization",
        statement: "J_κ(e₁, x) = (1/n) Σ_j E_κ(x(1 j), e₁)",
        threshold: 1e-10,
        run: check_symmetrization,
    },
    Identity {
        id: "thm41-triple",
        statement:
            "Φ₂⁽³⁾[κ,κ,κ+1; 3κ+1; x] = e^{x₃} Φ₂⁽²⁾[κ,κ; 3κ+1; x₁-x₃, x₂-x₃] = 3 c_κ ∫ e^{⟨x,t⟩} t₃ ∏t_j^{κ-1} dt",
        threshold: 1e-10,
        run: check_triple,
    },
];

/// Run the selected identities. Reports come back ordered by identity id,
/// then by parameter point in grid order.
pub fn run_suite<S: AsRef<str>>(selection: &[S], config: &VerifyConfig) -> Result<Vec<VerifyReport>, VerifyError> {
    let mut chosen: Vec<&Identity> = Vec::new();
    for id in selection {
        let id = id.as_ref();
        let identity = manifest()
            .iter()
            .find(|i| i.id == id)
            .ok_or_else(|| VerifyError::UnknownIdentity(id.to_string()))?;
        if !chosen.iter().any(|c| c.id == identity.id) {
            chosen.push(identity);
        }
    }
    chosen.sort_by_key(|i| i.id);
    let batches: Vec<Vec<VerifyReport>> = chosen
        .par_iter()
        .map(|identity| {
            let mut reports = (identity.run)(identity, config);
            if !config.timing {
                for r in &mut reports {
                    r.runtime_ms = 0;
                }
            }
            reports
        })
        .collect();
    Ok(batches.into_iter().flatten().collect())
}

pub fn all_ids() -> Vec<&'static str> {
    manifest().iter().map(|i| i.id).collect()
}

macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = BTreeMap::new();
        $(m.insert($k.to_string(), $v.to_string());)*
        m
    }};
}

/// Time `body`, turning an error into a failed report.
fn timed<F>(identity: &Identity, params: BTreeMap<String, String>, body: F) -> VerifyReport
where
    F: FnOnce() -> Result<f64, DunklError>,
{
    let start = Instant::now();
    let mut report = match body() {
        Ok(metric) => VerifyReport::new(identity.id, params, metric, identity.threshold),
        Err(e) => VerifyReport::failed(identity.id, params, identity.threshold, &e),
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    report
}

fn fmt_point(x: &[f64]) -> String {
    x.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",")
}

fn float_kappa(k: &Rational) -> Multiplicity {
    Multiplicity::float(rational_to_f64(k)).expect("grid kappa is nonnegative")
}

fn max_abs_coeff(p: &MultiPoly) -> f64 {
    p.terms().map(|(_, c)| rational_to_f64(&c.abs())).fold(0.0, f64::max)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

// ---------------------------------------------------------------------------
// exact polynomial identities
// ---------------------------------------------------------------------------

fn check_intertwining(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_EXACT) {
            let params = params! {"n" => n, "kappa" => &kappa, "max_degree" => config.max_degree};
            let mut offending: Option<String> = None;
            let mut report = timed(identity, params, || {
                let mk = Multiplicity::Exact(kappa.clone());
                let mut worst: f64 = 0.0;
                for ell in 1..=n {
                    let mut lower = MultiPoly::zero(n);
                    for m in 0..=config.max_degree {
                        let v = intertwine_monomial(n, ell, m, &kappa)?;
                        for i in 1..=n {
                            let lhs = v.dunkl(i, &mk)?;
                            // V(∂_i x_ℓ^m) = δ_iℓ m V(x_ℓ^{m-1})
                            let rhs = if i == ell && m > 0 {
                                lower.scale(&Rational::from_integer(m.into()))
                            } else {
                                MultiPoly::zero(n)
                            };
                            let diff = &lhs - &rhs;
                            if !diff.is_zero() {
                                worst = worst.max(max_abs_coeff(&diff));
                                offending.get_or_insert_with(|| format!("l={ell} i={i} m={m}: {diff}"));
                            }
                        }
                        lower = v;
                    }
                }
                Ok(worst)
            });
            if let Some(o) = offending {
                report.params.insert("offending".into(), o);
            }
            out.push(report);
        }
    }
    out
}

fn check_normalization_degree(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_EXACT) {
            let params = params! {"n" => n, "kappa" => &kappa, "max_degree" => config.max_degree};
            out.push(timed(identity, params, || {
                let mut failures = 0.0;
                for ell in 1..=n {
                    if intertwine_monomial(n, ell, 0, &kappa)? != MultiPoly::one(n) {
                        failures += 1.0;
                    }
                    for m in 1..=config.max_degree {
                        let v = intertwine_monomial(n, ell, m, &kappa)?;
                        if !v.is_homogeneous() || v.total_degree() != Some(m) {
                            failures += 1.0;
                        }
                    }
                }
                Ok(failures)
            }));
        }
    }
    out
}

fn check_symmetric_power(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_EXACT) {
            let params = params! {"n" => n, "kappa" => &kappa, "max_degree" => config.max_degree};
            out.push(timed(identity, params, || {
                let fact: u64 = (1..n as u64).product();
                let fact = Rational::from_integer(fact.into());
                let mut worst: f64 = 0.0;
                for m in 0..=config.max_degree {
                    let lhs = intertwine_symmetric_power(n, m, &kappa)?;
                    let mut rhs = MultiPoly::zero(n);
                    for ell in 1..=n {
                        rhs = &rhs + &intertwine_monomial(n, ell, m, &kappa)?;
                    }
                    worst = worst.max(max_abs_coeff(&(&lhs - &rhs.scale(&fact))));
                    // the symmetric input is fixed in degree one
                    if m == 1 {
                        worst = worst.max(max_abs_coeff(&(&lhs - &symmetric_power_sum(n, 1))));
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_kappa_zero(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    // Largest |coefficient of V_κ(x_ℓ^m) − x_ℓ^m| / κ observed at n = 4 as
    // κ → 0. The observations grow like (n − 1), so larger n scale the bound.
    const C_BOUND: [f64; 5] = [0.0, 3.0, 4.5, 5.5, 6.25];
    let kappa = parse_rational("1/1000000").unwrap();
    let kf = rational_to_f64(&kappa);
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for m in 0..=4u32 {
            let c_bound = C_BOUND[m as usize] * ((n as f64 - 1.0) / 3.0).max(1.0);
            let params = params! {"n" => n, "m" => m, "kappa" => &kappa, "c_bound" => c_bound};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for ell in 1..=n {
                    let v = intertwine_monomial(n, ell, m, &kappa)?;
                    let mut e = vec![0; n];
                    e[ell - 1] = m;
                    let diff = &v - &MultiPoly::monomial(e, Rational::from_integer(1.into()));
                    worst = worst.max(max_abs_coeff(&diff));
                }
                // ratio to the allowed C_m κ; m = 0 must be exact
                Ok(if m == 0 {
                    if worst == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    worst / (c_bound * kf)
                })
            }));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// quadrature and series identities
// ---------------------------------------------------------------------------

fn check_quadrature_exactness(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for q in [4usize, 8] {
        for n in config.ns(&[2, 3, 4]) {
            for kappa in config.kappas(&["1/2", "1", "5/2"]) {
                let params = params! {"n" => n, "kappa" => &kappa, "q" => q, "max_degree" => 2 * q - 1};
                out.push(timed(identity, params, || {
                    let rule = SimplexRule::new(n, rational_to_f64(&kappa), q)?;
                    let mass = rule.total_mass();
                    let mut worst: f64 = 0.0;
                    for degree in 0..=(2 * q as u32 - 1) {
                        for m in dunkl::compositions(n, degree) {
                            let got = rule
                                .integrate(|t| t.iter().zip(&m).map(|(tj, &e)| tj.powi(e as i32)).product())?
                                / mass;
                            let want = rational_to_f64(&dirichlet_moment(n, &kappa, &m)?);
                            worst = worst.max((got - want).abs() / want);
                        }
                    }
                    Ok(worst)
                }));
            }
        }
    }
    out
}

fn check_humbert_integral(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(identity.id));
    let mut out = Vec::new();
    for case in 0..10 {
        let n = 1 + case % 3;
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..2.0)).collect();
        let gap = rng.random_range(0.3..1.5);
        let c = b.iter().sum::<f64>() + gap;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
        let params = params! {"b" => fmt_point(&b), "c" => c, "x" => fmt_point(&x), "q" => 16};
        out.push(timed(identity, params, || {
            let series = humbert_phi2(&HumbertSpec::new(b.clone(), c, x.clone())?, &config.series)?.value;
            let mut alphas = b.clone();
            alphas.push(gap);
            let rule = SimplexRule::dirichlet(&alphas, 16)?;
            let integral = dirichlet_normalizer(&alphas)?
                * rule.integrate(|t| x.iter().zip(t).map(|(a, b)| a * b).sum::<f64>().exp())?;
            Ok(relative(series, integral))
        }));
    }
    out
}

fn check_confluence(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(identity.id));
    let mut out = Vec::new();
    for case in 0..10 {
        let n = 1 + case % 3;
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
        let c = b.iter().sum::<f64>() + rng.random_range(0.0..1.5);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
        let mut params = params! {"b" => fmt_point(&b), "c" => c, "x" => fmt_point(&x)};
        let mut errors = Vec::new();
        let mut report = timed(identity, params.clone(), || {
            let phi = humbert_phi2(&HumbertSpec::new(b.clone(), c, x.clone())?, &config.series)?.value;
            for a in [1e2, 1e3, 1e4] {
                let z = x.iter().map(|v| v / a).collect();
                let fd = lauricella_fd(&LauricellaSpec::new(a, b.clone(), c, z)?, &config.series)?.value;
                errors.push((fd - phi).abs() / (1.0 + phi.abs()));
            }
            let monotone = errors.windows(2).all(|w| w[1] < w[0]);
            Ok(if monotone { errors[2] } else { f64::INFINITY })
        });
        params.insert("errors_a_1e2_1e3_1e4".into(), fmt_point(&errors));
        report.params = params;
        out.push(report);
    }
    out
}

/// Direct multi-index `F_D` sum with per-term Pochhammers.
fn lauricella_naive(a: f64, b: &[f64], c: f64, z: &[f64], order: u32) -> f64 {
    let n = b.len();
    let mut total = 0.0;
    for k in 0..=order {
        for m in dunkl::compositions(n, k) {
            let mut term = pochhammer(a, k) / pochhammer(c, k);
            for j in 0..n {
                term *= pochhammer(b[j], m[j]) * z[j].powi(m[j] as i32) / pochhammer(1.0, m[j]);
            }
            total += term;
        }
    }
    total
}

fn project_to_hyperplane(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
    // put the rounding residue on the last coordinate
    let n = x.len();
    let rest: f64 = x[..n - 1].iter().sum();
    x[n - 1] = -rest;
}

fn check_degenerate_ho(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_WIDE) {
            let k = rational_to_f64(&kappa);
            let points = config.sample(identity.id, n, config.points.min(5), -0.3, 0.3);
            let params = params! {"n" => n, "kappa" => &kappa, "nu" => "0,0.5,1,2.5", "points" => points.len() + 1};
            out.push(timed(identity, params, || {
                let mut worst: f64 = (degenerate_ho(1.0, k, &vec![0.0; n], &config.series)?.value - 1.0).abs();
                for mut x in points.clone() {
                    project_to_hyperplane(&mut x);
                    for nu in [0.0, 0.5, 1.0, 2.5] {
                        let got = degenerate_ho(nu, k, &x, &config.series)?.value;
                        let xn = x[n - 1];
                        let z: Vec<f64> = x[..n - 1].iter().map(|v| -(v - xn).exp_m1()).collect();
                        let pref = (-nu / n as f64 * x[..n - 1].iter().map(|v| v - xn).sum::<f64>()).exp();
                        let want = pref * lauricella_naive(-nu, &vec![k; n - 1], n as f64 * k, &z, 60);
                        worst = worst.max(relative(got, want));
                        if nu == 0.0 {
                            worst = worst.max((got - 1.0).abs());
                        }
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_rational_limit(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let (n, kappa, nu) = (3, 1.0, 1.0);
    let x = [1.0, 0.0, -1.0];
    let mut params = params! {"n" => n, "kappa" => kappa, "nu" => nu, "x" => fmt_point(&x)};
    let mut devs = Vec::new();
    let mut report = timed(identity, params.clone(), || {
        for m in [10.0, 50.0, 200.0, 1e4] {
            devs.push(dunkl::limit_check(m, nu, kappa, &x, &config.series)?.deviation);
        }
        let monotone = devs[0] > devs[1] && devs[1] > devs[2];
        Ok(if monotone { devs[3] } else { f64::INFINITY })
    });
    params.insert("deviation_m_10_50_200_1e4".into(), fmt_point(&devs));
    report.params = params;

    let origin = timed(
        identity,
        params! {"n" => n, "kappa" => kappa, "nu" => nu, "x" => "0,0,0"},
        || {
            let mut worst: f64 = 0.0;
            for m in [10.0, 50.0, 200.0, 1e4] {
                worst = worst.max(dunkl::limit_check(m, nu, kappa, &[0.0; 3], &config.series)?.deviation);
            }
            Ok(worst)
        },
    );
    vec![report, origin]
}

// ---------------------------------------------------------------------------
// kernel and Bessel identities
// ---------------------------------------------------------------------------

fn kernel_query(
    kappa: &Multiplicity,
    x: &[f64],
    ell: usize,
    method: Method,
    acc: Accuracy,
) -> Result<KernelQuery, DunklError> {
    Ok(KernelQuery::new(kappa.clone(), x.to_vec(), ell, method)?.with_accuracy(acc))
}

fn check_triple(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for kappa in config.kappas(KAPPA_NUMERIC) {
        let km = float_kappa(&kappa);
        let points = config.sample(identity.id, 3, config.points, -2.0, 2.0);
        let params = params! {"n" => 3, "kappa" => &kappa, "points" => points.len(), "q" => config.q};
        out.push(timed(identity, params, || {
            let mut worst: f64 = 0.0;
            for x in &points {
                let three = kernel_series(&kernel_query(&km, x, 3, Method::Series, config.accuracy())?)?.value;
                let two = kernel_reduced(&kernel_query(&km, x, 3, Method::Reduced, config.accuracy())?)?.value;
                let quad = kernel_quadrature(&kernel_query(&km, x, 3, Method::Quadrature, config.accuracy())?)?.value;
                worst = worst
                    .max((three - two).abs())
                    .max((three - quad).abs())
                    .max((two - quad).abs());
            }
            Ok(worst)
        }));
    }
    out
}

fn check_kernel_quadrature(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len(), "q" => config.q};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    for ell in 1..=n {
                        let s = kernel_series(&kernel_query(&km, x, ell, Method::Series, config.accuracy())?)?.value;
                        let quad =
                            kernel_quadrature(&kernel_query(&km, x, ell, Method::Quadrature, config.accuracy())?)?
                                .value;
                        if !(s > 0.0 && quad > 0.0) {
                            return Ok(f64::INFINITY);
                        }
                        worst = worst.max((s - quad).abs());
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_bessel_quadrature(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len(), "q" => config.q};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    let spec = BesselSpec::new(km.clone(), 1.0, x.clone())?;
                    let e = dunkl::bessel(&spec, Method::Both, &config.accuracy())?;
                    worst = worst.max(e.discrepancy.unwrap_or(f64::INFINITY));
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_bessel_reduced(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_WIDE) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "nu" => "0.5,1", "points" => points.len()};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for mut x in points.clone() {
                    project_to_hyperplane(&mut x);
                    for nu in [0.5, 1.0] {
                        let spec = BesselSpec::new(km.clone(), nu, x.clone())?;
                        let a = bessel_series(&spec, &config.series)?.value;
                        let b = bessel_reduced(&spec, &config.series)?.value;
                        worst = worst.max((a - b).abs());
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_kernel_sum(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len()};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    let mut total = 0.0;
                    for ell in 1..=n {
                        total += kernel_series(&kernel_query(&km, x, ell, Method::Series, config.accuracy())?)?.value;
                    }
                    let j = bessel_series(&BesselSpec::new(km.clone(), 1.0, x.clone())?, &config.series)?.value;
                    worst = worst.max((total - n as f64 * j).abs());
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_symmetrization(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len()};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    let sym = bessel_by_symmetrization(x, &km, Method::Reduced, &config.accuracy())?.value;
                    let direct = bessel_series(&BesselSpec::new(km.clone(), 1.0, x.clone())?, &config.series)?.value;
                    worst = worst.max((sym - direct).abs());
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_permutation_symmetry(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points.min(5), -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len()};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    for method in [Method::Series, Method::Quadrature] {
                        let at = |y: Vec<f64>| -> Result<f64, DunklError> {
                            Ok(dunkl::bessel(&BesselSpec::new(km.clone(), 1.0, y)?, method, &config.accuracy())?.value)
                        };
                        let base = at(x.clone())?;
                        if !(base > 0.0) {
                            return Ok(f64::INFINITY);
                        }
                        for p in permutations(n) {
                            let y: Vec<f64> = p.iter().map(|&i| x[i]).collect();
                            worst = worst.max(relative(at(y)?, base));
                        }
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_diagonal(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_WIDE) {
            let km = float_kappa(&kappa);
            let params = params! {"n" => n, "kappa" => &kappa, "s" => "-2..2 step 0.5"};
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for step in 0..=8 {
                    let s = -2.0 + 0.5 * step as f64;
                    let x = vec![s; n];
                    let want = s.exp();
                    for ell in 1..=n {
                        let e = kernel_series(&kernel_query(&km, &x, ell, Method::Series, config.accuracy())?)?;
                        worst = worst.max((e.value - want).abs() / want);
                    }
                    let j = bessel_series(&BesselSpec::new(km.clone(), 1.0, x)?, &config.series)?;
                    worst = worst.max((j.value - want).abs() / want);
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_single_intertwiner(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_EXACT) {
            let k = rational_to_f64(&kappa);
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points.min(5), -2.0, 2.0);
            let params =
                params! {"n" => n, "kappa" => &kappa, "points" => points.len(), "max_degree" => config.max_degree};
            out.push(timed(identity, params, || {
                let rule = SimplexRule::cached(n, k, config.q)?;
                let mut worst: f64 = 0.0;
                for ell in 1..=n {
                    let polys = (0..=config.max_degree)
                        .map(|m| intertwine_monomial(n, ell, m, &kappa))
                        .collect::<Result<Vec<_>, _>>()?;
                    for x in &points {
                        for (m, p) in polys.iter().enumerate() {
                            let numeric = intertwine_single(|u| u.powi(m as i32), ell, x, &rule)?;
                            worst = worst.max(relative(numeric, p.eval(x)));
                        }
                        let e = intertwine_single(f64::exp, ell, x, &rule)?;
                        let series =
                            kernel_series(&kernel_query(&km, x, ell, Method::Series, config.accuracy())?)?.value;
                        worst = worst.max(relative(e, series));
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_symmetric_intertwiner(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_EXACT) {
            let k = rational_to_f64(&kappa);
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points.min(5), -2.0, 2.0);
            let params =
                params! {"n" => n, "kappa" => &kappa, "points" => points.len(), "max_degree" => config.max_degree};
            out.push(timed(identity, params, || {
                let rule = SimplexRule::cached(n, k, config.q)?;
                let polys = (0..=config.max_degree)
                    .map(|m| intertwine_symmetric_power(n, m, &kappa))
                    .collect::<Result<Vec<_>, _>>()?;
                let n_minus_1_fact: f64 = (1..n).map(|i| i as f64).product();
                let mut worst: f64 = 0.0;
                for x in &points {
                    for (m, p) in polys.iter().enumerate() {
                        let numeric = intertwine_symmetric(|u| u.powi(m as i32), x, &rule)?;
                        worst = worst.max(relative(numeric, p.eval(x)));
                    }
                    let e = intertwine_symmetric(|u| u.exp() / n_minus_1_fact, x, &rule)?;
                    let j = bessel_series(&BesselSpec::new(km.clone(), 1.0, x.clone())?, &config.series)?.value;
                    worst = worst.max(relative(e, n as f64 * j));
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_bessel_single_direction(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for n in config.ns(&[2, 3, 4]) {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let k = rational_to_f64(&kappa);
            let km = float_kappa(&kappa);
            let points = config.sample(identity.id, n, config.points, -2.0, 2.0);
            let params = params! {"n" => n, "kappa" => &kappa, "points" => points.len()};
            out.push(timed(identity, params, || {
                let rule = SimplexRule::cached(n, k, config.q)?;
                let n_fact: f64 = (1..=n).map(|i| i as f64).product();
                let mut worst: f64 = 0.0;
                for x in &points {
                    let v = intertwine_symmetric(|u| u.exp() / n_fact, x, &rule)?;
                    let j = bessel_series(&BesselSpec::new(km.clone(), 1.0, x.clone())?, &config.series)?.value;
                    worst = worst.max(relative(v, j));
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn shift_reports(identity: &Identity, config: &VerifyConfig, ns: &[usize], only_last: bool) -> Vec<VerifyReport> {
    let mut out = Vec::new();
    for &n in ns {
        for kappa in config.kappas(KAPPA_NUMERIC) {
            let k = rational_to_f64(&kappa);
            let points = config.sample(identity.id, n, 10, -2.0, 2.0);
            let ells: Vec<usize> = if only_last { vec![n] } else { (1..=n).collect() };
            let params = params! {
                "n" => n, "kappa" => &kappa, "points" => points.len(), "h" => dunkl::SHIFT_STEP,
                "ell" => ells.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","),
            };
            out.push(timed(identity, params, || {
                let mut worst: f64 = 0.0;
                for x in &points {
                    for &ell in &ells {
                        worst = worst.max(dunkl::shift_check(x, k, ell, config.q)?.deviation);
                    }
                }
                Ok(worst)
            }));
        }
    }
    out
}

fn check_shift_a2(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    shift_reports(identity, config, &[3], true)
}

fn check_shift_general(identity: &Identity, config: &VerifyConfig) -> Vec<VerifyReport> {
    shift_reports(identity, config, &config.ns(&[2, 3, 4]), false)
}

/// `E_κ(x, e₃) = 3 ∂₃ J_κ(x)` at one point, as a report.
pub fn shift_check_a2(x: &[f64; 3], kappa: f64, q: usize) -> VerifyReport {
    let identity = manifest().iter().find(|i| i.id == "shift-a2").expect("registered");
    timed(
        identity,
        params! {"n" => 3, "kappa" => kappa, "x" => fmt_point(x)},
        || Ok(dunkl::shift_check(x, kappa, 3, q)?.deviation),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_is_sorted_and_unique() {
        let ids = all_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn empty_selection_is_empty() {
        let none: [&str; 0] = [];
        assert!(run_suite(&none, &VerifyConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert_eq!(
            run_suite(&["nosuch"], &VerifyConfig::default()).unwrap_err(),
            VerifyError::UnknownIdentity("nosuch".into())
        );
    }

    #[test]
    fn ir1_small_grid_is_exact() {
        let config = VerifyConfig {
            ns: Some(vec![3]),
            kappas: Some(vec![parse_rational("1/2").unwrap()]),
            max_degree: 4,
            ..Default::default()
        };
        let reports = run_suite(&["ir1"], &config).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed);
        assert_eq!(reports[0].metric, 0.0);
    }

    #[test]
    fn report_json_schema() {
        let r = VerifyReport::new("x", params! {"n" => 3}, 0.5, 1.0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["id", "metric", "params", "passed", "runtime_ms", "threshold"]);
        assert_eq!(v["params"]["n"], "3");
    }

    #[test]
    fn shift_check_a2_report() {
        let r = shift_check_a2(&[1.0, 0.0, -1.0], 1.0, 12);
        assert!(r.passed, "{r:?}");
        let d = shift_check_a2(&[0.0; 3], 1.0, 12);
        assert!(d.passed && d.metric < 1e-10);
    }

    #[test]
    fn naive_fd_matches_shell_sum() {
        let z = [0.2, -0.3];
        let naive = lauricella_naive(0.7, &[1.1, 0.4], 2.2, &z, 40);
        let fast = lauricella_fd(
            &LauricellaSpec::new(0.7, vec![1.1, 0.4], 2.2, z.to_vec()).unwrap(),
            &SeriesParams::default(),
        )
        .unwrap()
        .value;
        assert!((naive - fast).abs() < 1e-14);
    }

    #[test]
    fn projection_lands_on_hyperplane() {
        let mut x = vec![0.3, 1.7, -0.25, 0.9];
        project_to_hyperplane(&mut x);
        assert!(crate::special::on_hyperplane(&x));
        assert!(x.iter().sum::<f64>().abs() < 1e-15);
    }

    #[test]
    fn zero_moment_is_exact() {
        let k = parse_rational("1/3").unwrap();
        assert_eq!(
            dirichlet_moment(3, &k, &[0, 0, 0]).unwrap(),
            parse_rational("1").unwrap()
        );
    }
}
