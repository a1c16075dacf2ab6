//! Convex minimization of divergences over operator hulls.
//!
//! The workhorse is Frank–Wolfe over the weight simplex of a finite hull,
//! with away steps and exact (golden-section) line search. The linear
//! minimization oracle is the set's support function evaluated on the
//! derivative operator Ξ_{α,z}: the directional derivative of
//! `D_{α,z}(ρ‖·)` at σ along ξ is `-Tr[Ξ ξ]/Q`, so the oracle and the
//! optimality certificate `sup_τ Tr[τ Ξ] - Q ≤ 0` are the same object and
//! certified gaps come for free.
//!
//! The module also owns the conditional-entropy fixed point (the minimizer
//! over product-marginal sets) and the saddle-point construction for the
//! Chernoff and Hoeffding reliability functions: both outer problems are
//! solved separately (`α0 ∈ argmax_α inf_σ`, `σ0 ∈ argmin_σ sup_α`) and the
//! returned residuals measure how well (α0, σ0) closes the minimax chain.

use crate::divergence::{d_zero, q_alpha_z, xi_q, DivergenceSpec, ExtendedValue};
use crate::error::{Error, Result};
use crate::opcore::{kron, trace_product, DensityState, HermitianOperator, MatrixFn, SystemShape};
use crate::sets::{linear_max_over, ConvexSetSpec, LiftedSet};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Frank–Wolfe duality-gap termination (objective units).
    pub fw_gap_tol: f64,
    pub max_iterations: usize,
    /// Certificate tolerance, relative to 1 + |Q|.
    pub certificate_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            fw_gap_tol: 1e-9,
            max_iterations: 100_000,
            certificate_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizationResult {
    pub sigma_opt: HermitianOperator,
    /// Simplex weights over the hull extremes (orbit extremes for lifts;
    /// a single weight for product-marginal sets).
    pub weights: Vec<f64>,
    pub value: ExtendedValue,
    pub q_value: f64,
    /// sup_τ Tr[τ Ξ(ρ, σ_opt)] - Q; non-positive (up to tolerance) at optima.
    pub certificate_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize D_{α,z}(ρ‖·) over a convex set.
pub fn minimize_divergence(
    rho: &DensityState,
    set: &ConvexSetSpec,
    spec: &DivergenceSpec,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    spec.validate()?;
    if let ConvexSetSpec::ProductMarginal { shape } = set {
        let fp = conditional_entropy_fixed_point(rho, shape, spec)?;
        return marginal_minimization_result(rho, shape, spec, fp);
    }
    if !set.contains_support_of(rho)? {
        return Err(Error::NoSupportElement);
    }
    let extremes = set.extreme_points()?;
    minimize_over_extremes(rho, &extremes, spec, opts)
}

/// Minimize over an n-copy lift (ρ_n must already live on the lifted space).
pub fn minimize_divergence_lifted(
    rho_n: &DensityState,
    lifted: &LiftedSet,
    spec: &DivergenceSpec,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    spec.validate()?;
    if rho_n.dim() != lifted.dim() {
        return Err(Error::ShapeMismatch(format!(
            "state dim {} vs lifted dim {}",
            rho_n.dim(),
            lifted.dim()
        )));
    }
    minimize_over_extremes(rho_n, lifted.extremes(), spec, opts)
}

fn minimize_over_extremes(
    rho: &DensityState,
    extremes: &[HermitianOperator],
    spec: &DivergenceSpec,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    let objective = |sigma: &HermitianOperator| -> f64 {
        match q_alpha_z(rho, sigma, spec) {
            Ok((_, d)) if d.is_finite() => d.value,
            _ => f64::INFINITY,
        }
    };
    let gradient = |sigma: &HermitianOperator| -> Result<HermitianOperator> {
        let (xi, q) = xi_q(rho, sigma, spec)?;
        Ok(xi.scale(-1.0 / q))
    };
    let outcome = fw_minimize(extremes, &objective, &gradient, opts)?;
    let (_, value) = q_alpha_z(rho, &outcome.sigma, spec)?;
    // certificate at the final iterate; if it sits on a support boundary,
    // certify a hair inside
    let (xi, q) = match xi_q(rho, &outcome.sigma, spec) {
        Ok(pair) => pair,
        Err(_) => {
            let uniform = vec![1.0 / extremes.len() as f64; extremes.len()];
            let eps = 1e-10;
            let nudged: Vec<f64> = outcome
                .weights
                .iter()
                .zip(&uniform)
                .map(|(a, b)| (1.0 - eps) * a + eps * b)
                .collect();
            xi_q(rho, &mix(extremes, &nudged), spec)?
        }
    };
    let sup = linear_max_over(extremes, &xi)?;
    Ok(MinimizationResult {
        sigma_opt: outcome.sigma,
        weights: outcome.weights,
        value,
        q_value: q,
        certificate_gap: sup.value - q,
        iterations: outcome.iterations,
        converged: outcome.converged,
    })
}

/// First-order optimality gap `sup_{τ∈S} Tr[τ Ξ_{α,z}(ρ,σ0)] - Q_{α,z}(ρ‖σ0)`.
/// Within tolerance of zero exactly at minimizers (the condition is an iff).
pub fn optimality_certificate(
    rho: &DensityState,
    sigma0: &HermitianOperator,
    set: &ConvexSetSpec,
    spec: &DivergenceSpec,
) -> Result<f64> {
    let (xi, q) = xi_q(rho, sigma0, spec)?;
    let sup = set.linear_max(&xi)?;
    Ok(sup.value - q)
}

struct FwOutcome {
    weights: Vec<f64>,
    sigma: HermitianOperator,
    iterations: usize,
    converged: bool,
}

fn mix(extremes: &[HermitianOperator], weights: &[f64]) -> HermitianOperator {
    let terms: Vec<(f64, &HermitianOperator)> = weights
        .iter()
        .copied()
        .zip(extremes.iter())
        .collect();
    HermitianOperator::linear_combination(&terms)
}

/// Away-step Frank–Wolfe with golden-section line search over the simplex.
///
/// `grad` returns the operator G whose pairing Tr[G τ] is the directional
/// derivative along a vertex τ; a failing gradient at a boundary iterate is
/// retried on a point nudged toward the uniform mixture (supports can
/// collapse at the boundary).
fn fw_minimize(
    extremes: &[HermitianOperator],
    f: &dyn Fn(&HermitianOperator) -> f64,
    grad: &dyn Fn(&HermitianOperator) -> Result<HermitianOperator>,
    opts: &SolveOptions,
) -> Result<FwOutcome> {
    let k = extremes.len();
    if k == 0 {
        return Err(Error::validation("hull", "no extremes"));
    }
    let mut w = vec![1.0 / k as f64; k];
    if k == 1 {
        return Ok(FwOutcome {
            weights: w,
            sigma: extremes[0].clone(),
            iterations: 0,
            converged: true,
        });
    }

    let uniform = vec![1.0 / k as f64; k];
    let mut sigma = mix(extremes, &w);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        let g_op = match grad(&sigma) {
            Ok(g) => g,
            Err(_) => {
                let eps = 1e-12;
                let nudged: Vec<f64> = w
                    .iter()
                    .zip(&uniform)
                    .map(|(a, b)| (1.0 - eps) * a + eps * b)
                    .collect();
                grad(&mix(extremes, &nudged))?
            }
        };
        let g: Vec<f64> = extremes.iter().map(|t| trace_product(t, &g_op)).collect();
        let g_at_w: f64 = g.iter().zip(&w).map(|(gi, wi)| gi * wi).sum();

        let i_fw = argmin(&g);
        let fw_gap = g_at_w - g[i_fw];
        if fw_gap <= opts.fw_gap_tol {
            converged = true;
            break;
        }
        let i_away = w
            .iter()
            .enumerate()
            .filter(|(_, wi)| **wi > 0.0)
            .max_by(|a, b| g[a.0].partial_cmp(&g[b.0]).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(i_fw);
        let away_gap = g[i_away] - g_at_w;

        // candidate step: line-searched weights, or None when nothing improves
        let attempt = |dir_idx: usize, gamma_max: f64, away: bool| -> Option<Vec<f64>> {
            if gamma_max <= 1e-13 {
                return None;
            }
            let weights_at = |gamma: f64| -> Vec<f64> {
                let mut out = w.clone();
                for (j, wj) in out.iter_mut().enumerate() {
                    if away {
                        *wj = if j == dir_idx {
                            (1.0 + gamma) * *wj - gamma
                        } else {
                            (1.0 + gamma) * *wj
                        };
                    } else {
                        *wj = if j == dir_idx {
                            (1.0 - gamma) * *wj + gamma
                        } else {
                            (1.0 - gamma) * *wj
                        };
                    }
                    if *wj < 0.0 {
                        *wj = 0.0;
                    }
                }
                out
            };
            let f_of = |gamma: f64| f(&mix(extremes, &weights_at(gamma)));
            let (gamma_in, f_in) = golden_min(&f_of, 0.0, gamma_max, 1e-13 * (1.0 + gamma_max));
            let f_end = f_of(gamma_max);
            let f_zero = f_of(0.0);
            let gamma = if f_end <= f_in && f_end <= f_zero {
                gamma_max
            } else if f_in < f_zero {
                gamma_in
            } else {
                return None;
            };
            Some(weights_at(gamma))
        };

        let away_first = away_gap > fw_gap && w[i_away] < 1.0;
        let step = if away_first {
            let wm = w[i_away];
            attempt(i_away, wm / (1.0 - wm), true).or_else(|| attempt(i_fw, 1.0, false))
        } else {
            attempt(i_fw, 1.0, false)
        };
        let Some(new_w) = step else {
            // numerical plateau: neither direction improves
            converged = fw_gap <= 100.0 * opts.fw_gap_tol.max(1e-12);
            break;
        };
        w = new_w;
        // snap float dust to exact zero so dropped atoms leave the active set
        let total: f64 = w.iter().sum();
        for wi in &mut w {
            *wi /= total;
            if *wi < 1e-14 {
                *wi = 0.0;
            }
        }
        let total: f64 = w.iter().sum();
        for wi in &mut w {
            *wi /= total;
        }
        sigma = mix(extremes, &w);
    }

    Ok(FwOutcome {
        weights: w,
        sigma,
        iterations,
        converged,
    })
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] < v[best] - 1e-15 {
            best = i;
        }
    }
    best
}

/// Golden-section minimization of a unimodal function on [a,b]; returns the
/// best of the interior estimate and both endpoints.
pub fn golden_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    [(a, f(a)), (b, f(b)), (xm, f(xm))]
        .into_iter()
        .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap()
}

/// Golden-section maximization after a coarse bracket scan; a flat function
/// reports its smallest abscissa (documented tie-break).
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let probes = 9;
    let mut lo_val = f64::INFINITY;
    let mut hi_val = f64::NEG_INFINITY;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let mut xs = Vec::with_capacity(probes);
    for i in 0..probes {
        let x = a + (b - a) * i as f64 / (probes - 1) as f64;
        let v = f(x);
        xs.push((x, v));
        lo_val = lo_val.min(v);
        hi_val = hi_val.max(v);
        if v > best_v + 1e-15 {
            best_v = v;
            best_i = i;
        }
    }
    if hi_val.is_finite() && hi_val - lo_val <= 1e-12 * (1.0 + hi_val.abs()) {
        return (a, xs[0].1);
    }
    let cell = (b - a) / (probes - 1) as f64;
    let lo = (xs[best_i].0 - cell).max(a);
    let hi = (xs[best_i].0 + cell).min(b);
    let neg = |x: f64| -f(x);
    let (x, fv) = golden_min(&neg, lo, hi, xtol);
    (x, -fv)
}

/// Result of the conditional-entropy fixed point.
#[derive(Debug, Clone)]
pub struct ConditionalEntropyResult {
    /// inf_σ D(ρ_AB ‖ π_A ⊗ σ_B) - ln d_A, the formula as written.
    pub value: f64,
    /// The minimized divergence itself.
    pub raw_min_divergence: f64,
    pub sigma_b: HermitianOperator,
    pub fixpoint_residual: f64,
    pub iterations: usize,
}

/// Minimizes D_{α,z}(ρ_AB ‖ π_A ⊗ σ_B) over states σ_B by damped fixed-point
/// iteration on σ_B ∝ Tr_A[((π⊗σ)^{(1-α)/2z} ρ^{α/z} (π⊗σ)^{(1-α)/2z})^z],
/// and reports the α-z conditional entropy in the `inf − ln d_A` convention.
pub fn conditional_entropy(
    rho_ab: &DensityState,
    shape: &SystemShape,
    spec: &DivergenceSpec,
) -> Result<ConditionalEntropyResult> {
    spec.validate()?;
    if !spec.in_dp_region() {
        return Err(Error::validation(
            "divergence",
            "conditional entropy needs (alpha, z) in the DP region",
        ));
    }
    conditional_entropy_fixed_point(rho_ab, shape, spec)
}

fn conditional_entropy_fixed_point(
    rho_ab: &DensityState,
    shape: &SystemShape,
    spec: &DivergenceSpec,
) -> Result<ConditionalEntropyResult> {
    if shape.local_dims.len() != 2 {
        return Err(Error::ShapeMismatch(
            "conditional entropy expects a bipartite shape".into(),
        ));
    }
    shape.check_operator(rho_ab.op())?;
    let d_a = shape.local_dims[0];
    let pi_a = HermitianOperator::identity(d_a).scale(1.0 / d_a as f64);

    if spec.is_umegaki() {
        // D(ρ‖π_A ⊗ σ_B) = ln d_A - H(A|B) + D(ρ_B‖σ_B): the optimizer is ρ_B
        let sigma_b = rho_ab.op().partial_trace(shape, 0)?;
        let raw = raw_divergence(rho_ab, &pi_a, &sigma_b, spec)?;
        return Ok(ConditionalEntropyResult {
            value: raw - (d_a as f64).ln(),
            raw_min_divergence: raw,
            sigma_b,
            fixpoint_residual: 0.0,
            iterations: 1,
        });
    }

    let alpha = spec.alpha;
    let z = spec.z_value();
    let half_theta = (1.0 - alpha) / (2.0 * z);
    let rho_pow = rho_ab.op().pow(alpha / z)?;

    let update = |sigma_b: &HermitianOperator| -> Result<HermitianOperator> {
        let joint = kron(&pi_a, sigma_b);
        let sandwich = joint.pow(half_theta)?;
        let core = HermitianOperator::from_computed(
            sandwich.matrix() * rho_pow.matrix() * sandwich.matrix(),
        );
        let powered = core.pow(z)?;
        let gamma = powered.trace();
        if !(gamma > 1e-300) {
            return Err(Error::FixpointDiverged {
                iterations: 0,
                residual: f64::INFINITY,
            });
        }
        powered.partial_trace(shape, 0).map(|u| u.scale(1.0 / gamma))
    };

    let mut sigma_b = rho_ab.op().partial_trace(shape, 0)?;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let damping = 0.5;
    for iter in 0..10_000 {
        iterations = iter + 1;
        let next = update(&sigma_b)?;
        residual = sigma_b.distance_max(&next);
        sigma_b = HermitianOperator::linear_combination(&[
            (1.0 - damping, &sigma_b),
            (damping, &next),
        ]);
        if residual <= 1e-10 {
            break;
        }
    }
    if residual > 1e-10 {
        return Err(Error::FixpointDiverged { iterations, residual });
    }
    let raw = raw_divergence(rho_ab, &pi_a, &sigma_b, spec)?;
    Ok(ConditionalEntropyResult {
        value: raw - (d_a as f64).ln(),
        raw_min_divergence: raw,
        sigma_b,
        fixpoint_residual: residual,
        iterations,
    })
}

fn raw_divergence(
    rho_ab: &DensityState,
    pi_a: &HermitianOperator,
    sigma_b: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<f64> {
    let joint = kron(pi_a, sigma_b);
    q_alpha_z(rho_ab, &joint, spec)?
        .1
        .expect_finite("conditional-entropy divergence")
}

fn marginal_minimization_result(
    rho: &DensityState,
    shape: &SystemShape,
    spec: &DivergenceSpec,
    fp: ConditionalEntropyResult,
) -> Result<MinimizationResult> {
    let d_a = shape.local_dims[0];
    let pi_a = HermitianOperator::identity(d_a).scale(1.0 / d_a as f64);
    let sigma_opt = kron(&pi_a, &fp.sigma_b);
    let (xi, q) = xi_q(rho, &sigma_opt, spec)?;
    let set = ConvexSetSpec::ProductMarginal { shape: shape.clone() };
    let sup = set.linear_max(&xi)?;
    let converged = fp.fixpoint_residual <= 1e-10;
    Ok(MinimizationResult {
        sigma_opt,
        weights: vec![1.0],
        value: ExtendedValue::finite(fp.raw_min_divergence),
        q_value: q,
        certificate_gap: sup.value - q,
        iterations: fp.iterations,
        converged,
    })
}

/// Eigen-overlap form of T(α) = Tr[ρ^α σ^{1-α}] with generalized powers,
/// cheap to re-evaluate across α for a fixed pair.
pub struct TraceAlpha {
    lam: Vec<f64>,
    mu: Vec<f64>,
    overlap: Vec<Vec<f64>>,
    lam_mask: Vec<bool>,
    mu_mask: Vec<bool>,
}

impl TraceAlpha {
    pub fn new(rho: &DensityState, sigma: &HermitianOperator) -> TraceAlpha {
        let er = rho.op().eig();
        let es = sigma.eig();
        let d = rho.dim();
        let mut overlap = vec![vec![0.0; d]; d];
        for j in 0..d {
            for k in 0..d {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for i in 0..d {
                    acc += er.vectors[(i, j)].conj() * es.vectors[(i, k)];
                }
                overlap[j][k] = acc.norm_sqr();
            }
        }
        TraceAlpha {
            lam: rho.op().clamped_eigenvalues(),
            mu: sigma.clamped_eigenvalues(),
            overlap,
            lam_mask: rho.op().support_mask(),
            mu_mask: sigma.support_mask(),
        }
    }

    /// Tr[ρ^α σ^{1-α}] on the supports.
    pub fn eval(&self, alpha: f64) -> f64 {
        let d = self.lam.len();
        let mut acc = 0.0;
        for j in 0..d {
            if !self.lam_mask[j] {
                continue;
            }
            let lj = self.lam[j].powf(alpha);
            for k in 0..d {
                if self.mu_mask[k] {
                    acc += lj * self.mu[k].powf(1.0 - alpha) * self.overlap[j][k];
                }
            }
        }
        acc
    }
}

/// Saddle output for the Chernoff / Hoeffding reliability functions.
#[derive(Debug, Clone)]
pub struct SaddleReport {
    pub alpha0: f64,
    pub sigma0: HermitianOperator,
    pub sigma0_weights: Vec<f64>,
    pub value: f64,
    /// |φ(α0,σ0) - sup_α φ(α,σ0)|
    pub residual_alpha: f64,
    /// |φ(α0,σ0) - inf_σ φ(α0,σ)|
    pub residual_sigma: f64,
}

/// φ_ρ(α, σ) = -ln Tr[ρ^α σ^{1-α}] (+∞ on orthogonal pairs).
fn phi(tr: &TraceAlpha, alpha: f64) -> f64 {
    let t = tr.eval(alpha);
    if t <= 1e-300 {
        f64::INFINITY
    } else {
        -t.ln()
    }
}

/// Gradient operator of σ ↦ φ(α, σ): -DK_{x^{1-α}}(σ)[ρ^α] / T.
fn phi_sigma_gradient(
    rho: &DensityState,
    sigma: &HermitianOperator,
    alpha: f64,
) -> Result<HermitianOperator> {
    let t = TraceAlpha::new(rho, sigma).eval(alpha);
    if t <= 1e-300 {
        return Err(Error::SupportViolation("phi gradient at orthogonal pair".into()));
    }
    let rho_a = rho.op().pow(alpha)?;
    let dk = frechet_on_support(sigma, MatrixFn::Power(1.0 - alpha), &rho_a)?;
    Ok(dk.scale(-1.0 / t))
}

/// Daleckii–Krein derivative with the direction silently restricted to
/// supp(A); the restriction is exact for log and fractional powers.
fn frechet_on_support(
    a: &HermitianOperator,
    f: MatrixFn,
    h: &HermitianOperator,
) -> Result<HermitianOperator> {
    if a.support_rank() == a.dim() {
        return a.frechet_dk(f, h);
    }
    let p = a.support_projector();
    let restricted = HermitianOperator::from_computed(p.matrix() * h.matrix() * p.matrix());
    a.frechet_dk(f, &restricted)
}

/// Chernoff saddle: α0 maximizes the concave `α ↦ min_σ φ(α,σ)` on [0,1],
/// σ0 minimizes the convex `σ ↦ sup_α φ(α,σ)` over the hull.
pub fn chernoff_saddle(
    rho: &DensityState,
    set: &ConvexSetSpec,
    opts: &SolveOptions,
) -> Result<SaddleReport> {
    if !set.contains_support_of(rho)? {
        return Err(Error::NoSupportElement);
    }
    let extremes = set.extreme_points()?;

    let inner_min = |alpha: f64| -> Result<FwOutcome> {
        let objective = |sigma: &HermitianOperator| phi(&TraceAlpha::new(rho, sigma), alpha);
        let gradient = |sigma: &HermitianOperator| phi_sigma_gradient(rho, sigma, alpha);
        fw_minimize(&extremes, &objective, &gradient, opts)
    };
    let g = |alpha: f64| -> f64 {
        inner_min(alpha)
            .map(|o| phi(&TraceAlpha::new(rho, &o.sigma), alpha))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (alpha0, _) = golden_max(&g, 0.0, 1.0, 1e-10);

    // σ0 via Danskin: the gradient of sup_α φ(α,·) at σ is the σ-gradient at
    // the inner argmax α*(σ)
    let sup_alpha = |sigma: &HermitianOperator| -> (f64, f64) {
        let tr = TraceAlpha::new(rho, sigma);
        golden_max(&|a: f64| phi(&tr, a), 0.0, 1.0, 1e-10)
    };
    let objective = |sigma: &HermitianOperator| sup_alpha(sigma).1;
    let gradient = |sigma: &HermitianOperator| {
        let (a_star, _) = sup_alpha(sigma);
        phi_sigma_gradient(rho, sigma, a_star.clamp(0.0, 1.0 - 1e-12))
    };
    let outcome = fw_minimize(&extremes, &objective, &gradient, opts)?;
    let sigma0 = outcome.sigma;

    let tr0 = TraceAlpha::new(rho, &sigma0);
    let value = phi(&tr0, alpha0);
    let (_, sup_at_sigma0) = golden_max(&|a: f64| phi(&tr0, a), 0.0, 1.0, 1e-10);
    let inf_at_alpha0 = inner_min(alpha0)
        .map(|o| phi(&TraceAlpha::new(rho, &o.sigma), alpha0))
        .unwrap_or(f64::NEG_INFINITY);
    Ok(SaddleReport {
        alpha0,
        sigma0,
        sigma0_weights: outcome.weights,
        value,
        residual_alpha: (value - sup_at_sigma0).abs(),
        residual_sigma: (value - inf_at_alpha0).abs(),
    })
}

/// ψ_{r,ρ}(α, σ) = ((α-1)/α) r - (1/α) ln Tr[ρ^α σ^{1-α}]; the α = 1 value
/// is the continuous extension -ln Tr[ρ σ^0].
fn psi(tr: &TraceAlpha, alpha: f64, rate: f64) -> f64 {
    let t = tr.eval(alpha);
    if t <= 1e-300 {
        return f64::INFINITY;
    }
    (alpha - 1.0) / alpha * rate - t.ln() / alpha
}

/// Hoeffding saddle for `max{0, D_0(ρ‖S)} < r`; concavity is used in the
/// reparametrization β = 1/α.
pub fn hoeffding_saddle(
    rho: &DensityState,
    set: &ConvexSetSpec,
    rate: f64,
    opts: &SolveOptions,
) -> Result<SaddleReport> {
    if !set.contains_support_of(rho)? {
        return Err(Error::NoSupportElement);
    }
    let extremes = set.extreme_points()?;
    // window lower end: min_σ D_0 over the hull equals the min over extremes
    // (-ln of the linear overlap is minimized at a vertex)
    let d0 = extremes
        .iter()
        .map(|t| d_zero(rho, t).map(|v| v.value))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let lo = d0.max(0.0);
    if rate <= lo {
        return Err(Error::RateOutOfWindow { rate, lo, hi: f64::INFINITY });
    }

    let inner_min = |alpha: f64| -> Result<FwOutcome> {
        let objective = |sigma: &HermitianOperator| psi(&TraceAlpha::new(rho, sigma), alpha, rate);
        let gradient = |sigma: &HermitianOperator| {
            Ok(phi_sigma_gradient(rho, sigma, alpha)?.scale(1.0 / alpha))
        };
        fw_minimize(&extremes, &objective, &gradient, opts)
    };
    let g_beta = |beta: f64| -> f64 {
        let alpha = 1.0 / beta;
        inner_min(alpha)
            .map(|o| psi(&TraceAlpha::new(rho, &o.sigma), alpha, rate))
            .unwrap_or(f64::NEG_INFINITY)
    };

    // bracket the concave maximum in β = 1/α
    let mut beta_hi = 2.0;
    let mut best = g_beta(1.0);
    while beta_hi < 1e6 {
        let v = g_beta(beta_hi);
        if v < best - 1e-12 {
            break;
        }
        best = best.max(v);
        beta_hi *= 2.0;
    }
    let (beta0, _) = golden_max(&g_beta, 1.0, beta_hi, 1e-10);
    let alpha0 = 1.0 / beta0;

    let sup_alpha = |sigma: &HermitianOperator| -> (f64, f64) {
        let tr = TraceAlpha::new(rho, sigma);
        let h = |beta: f64| psi(&tr, 1.0 / beta, rate);
        let (b, v) = golden_max(&h, 1.0, beta_hi, 1e-10);
        (1.0 / b, v)
    };
    let objective = |sigma: &HermitianOperator| sup_alpha(sigma).1;
    let gradient = |sigma: &HermitianOperator| {
        let (a_star, _) = sup_alpha(sigma);
        Ok(phi_sigma_gradient(rho, sigma, a_star)?.scale(1.0 / a_star))
    };
    let outcome = fw_minimize(&extremes, &objective, &gradient, opts)?;
    let sigma0 = outcome.sigma;

    let tr0 = TraceAlpha::new(rho, &sigma0);
    let value = psi(&tr0, alpha0, rate);
    let (_, sup_val) = sup_alpha(&sigma0);
    let inf_val = inner_min(alpha0)
        .map(|o| psi(&TraceAlpha::new(rho, &o.sigma), alpha0, rate))
        .unwrap_or(f64::NEG_INFINITY);
    Ok(SaddleReport {
        alpha0,
        sigma0,
        sigma0_weights: outcome.weights,
        value,
        residual_alpha: (value - sup_val).abs(),
        residual_sigma: (value - inf_val).abs(),
    })
}

/// Frank–Wolfe with forward-difference directional gradients, for scalar
/// objectives without an analytic derivative operator (D↓, D̃_∞ hulls).
/// Two-extreme hulls use an exact golden scan instead.
pub fn minimize_scalar_over_hull(
    extremes: &[HermitianOperator],
    f: &dyn Fn(&HermitianOperator) -> f64,
) -> Result<(f64, Vec<f64>)> {
    let k = extremes.len();
    match k {
        0 => Err(Error::validation("hull", "no extremes")),
        1 => Ok((f(&extremes[0]), vec![1.0])),
        2 => {
            let obj = |w: f64| {
                f(&HermitianOperator::linear_combination(&[
                    (w, &extremes[0]),
                    (1.0 - w, &extremes[1]),
                ]))
            };
            let (w, v) = golden_min(&obj, 0.0, 1.0, 1e-12);
            Ok((v, vec![w, 1.0 - w]))
        }
        _ => {
            let mut w = vec![1.0 / k as f64; k];
            let mut value = f(&mix(extremes, &w));
            for _ in 0..5000 {
                let sigma = mix(extremes, &w);
                let h = 1e-7;
                let g: Vec<f64> = extremes
                    .iter()
                    .map(|t| {
                        let probe =
                            HermitianOperator::linear_combination(&[(1.0 - h, &sigma), (h, t)]);
                        (f(&probe) - value) / h
                    })
                    .collect();
                let i_fw = argmin(&g);
                let g_at_w: f64 = g.iter().zip(&w).map(|(a, b)| a * b).sum();
                if g_at_w - g[i_fw] <= 1e-9 {
                    break;
                }
                let f_of = |gamma: f64| {
                    let mut ww = w.clone();
                    for (j, wj) in ww.iter_mut().enumerate() {
                        *wj = if j == i_fw {
                            (1.0 - gamma) * *wj + gamma
                        } else {
                            (1.0 - gamma) * *wj
                        };
                    }
                    f(&mix(extremes, &ww))
                };
                let (gamma, fv) = golden_min(&f_of, 0.0, 1.0, 1e-12);
                if fv >= value - 1e-15 {
                    break;
                }
                value = fv;
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj = if j == i_fw {
                        (1.0 - gamma) * *wj + gamma
                    } else {
                        (1.0 - gamma) * *wj
                    };
                }
            }
            Ok((value, w))
        }
    }
}
