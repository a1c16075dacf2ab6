//! Quantum divergence evaluations.
//!
//! The α-z Rényi relative entropy is
//! `D_{α,z}(ρ‖σ) = (α-1)^{-1} ln Tr[(ρ^{α/2z} σ^{(1-α)/z} ρ^{α/2z})^z]`,
//! with the Petz family at z=1, the sandwiched family at z=α, and Umegaki's
//! relative entropy in the limit α→1. `Q_{α,z} = exp((α-1) D_{α,z})` is the
//! trace functional before the log. Generalized inverses are taken on
//! supports throughout, and the case split
//! `(α<1 ∧ ρ ̸⊥ σ) ∨ ρ ≪ σ` decides finiteness.
//!
//! The module also carries the first-order optimality operators χ and Ξ.
//! Ξ is assembled from exact divided differences in the eigenbasis of σ:
//! by the integral representation
//! `(x^θ - y^θ)/(θ(x-y)) = ∫ x^{-(1-θ+it)/2} y^{-(1-θ-it)/2} β_θ(t) dt`
//! this closed form is identical to the t-integral, so no quadrature error
//! enters certificates; the quadrature is kept as a validation oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcore::{
    divided_difference, trace_product, DensityState, HermitianOperator, MatrixFn,
};

/// Traces below this are treated as orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// The z parameter, explicit or tied to α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZSpec {
    Value(f64),
    /// z = α (sandwiched family).
    AlphaLinked,
    /// z = 1 (Petz family).
    PetzOne,
    /// z = |1-α| (reversed sandwiched line).
    ReversedLine,
}

/// The pair (α, z) selecting which D_{α,z} is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceSpec {
    pub alpha: f64,
    pub z: ZSpec,
}

impl DivergenceSpec {
    /// Umegaki relative entropy (α = 1; z unused at this point of the family).
    pub fn umegaki() -> Self {
        DivergenceSpec { alpha: 1.0, z: ZSpec::PetzOne }
    }

    pub fn petz(alpha: f64) -> Self {
        DivergenceSpec { alpha, z: ZSpec::PetzOne }
    }

    pub fn sandwiched(alpha: f64) -> Self {
        DivergenceSpec { alpha, z: ZSpec::AlphaLinked }
    }

    pub fn reversed(alpha: f64) -> Self {
        DivergenceSpec { alpha, z: ZSpec::ReversedLine }
    }

    pub fn alpha_z(alpha: f64, z: f64) -> Self {
        DivergenceSpec { alpha, z: ZSpec::Value(z) }
    }

    pub fn z_value(&self) -> f64 {
        match self.z {
            ZSpec::Value(v) => v,
            ZSpec::AlphaLinked => self.alpha,
            ZSpec::PetzOne => 1.0,
            ZSpec::ReversedLine => (1.0 - self.alpha).abs(),
        }
    }

    pub fn is_umegaki(&self) -> bool {
        self.alpha == 1.0
    }

    /// θ = (1-α)/z; zero at α = 1.
    pub fn theta(&self) -> f64 {
        if self.is_umegaki() {
            0.0
        } else {
            (1.0 - self.alpha) / self.z_value()
        }
    }

    /// The |1-α|/z = 1 boundary (log-fidelity, reversed sandwiched,
    /// min/max relative entropy limits), where additivity always holds.
    pub fn is_line_case(&self) -> bool {
        if self.is_umegaki() {
            return false;
        }
        ((1.0 - self.alpha).abs() / self.z_value() - 1.0).abs() <= 1e-12
    }

    /// Membership in the data-processing region 𝒟.
    pub fn in_dp_region(&self) -> bool {
        let a = self.alpha;
        let z = self.z_value();
        if a == 1.0 {
            return z > 0.0 || matches!(self.z, ZSpec::PetzOne | ZSpec::AlphaLinked);
        }
        if (0.0..1.0).contains(&a) {
            z >= a.max(1.0 - a) - 1e-12
        } else if a > 1.0 {
            z >= (a / 2.0).max(a - 1.0) - 1e-12 && z <= a + 1e-12
        } else {
            false
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::validation("divergence.alpha", "alpha must be a finite positive real"));
        }
        if !self.is_umegaki() && !(self.z_value() > 0.0) {
            return Err(Error::validation("divergence.z", "z must resolve to a positive real"));
        }
        Ok(())
    }
}

/// Real value that may be +∞; infinite exactly when the support condition
/// of the defining case split fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedValue {
    pub value: f64,
    pub support_ok: bool,
}

impl ExtendedValue {
    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite());
        ExtendedValue { value, support_ok: true }
    }

    pub fn infinite() -> Self {
        ExtendedValue { value: f64::INFINITY, support_ok: false }
    }

    pub fn is_finite(&self) -> bool {
        self.support_ok
    }

    /// Finite value or an error for callers that need finiteness.
    pub fn expect_finite(&self, what: &str) -> Result<f64> {
        if self.support_ok {
            Ok(self.value)
        } else {
            Err(Error::SupportViolation(format!("{what} is infinite")))
        }
    }
}

/// `Tr[ρσ] ≤ 1e-12` orthogonality test.
pub fn orthogonal(rho: &HermitianOperator, sigma: &HermitianOperator) -> bool {
    trace_product(rho, sigma) <= ORTHOGONALITY_TOL
}

/// First divided difference of log or a power on positive reals.
pub fn delta_divided(f: MatrixFn, x: f64, y: f64) -> f64 {
    divided_difference(f, x, y)
}

/// β_θ(t) = sin(θπ) / (2θ (cosh(πt) + cos(θπ))), the probability density of
/// the integral representation; the θ→0 formula π / (2(cosh(πt)+1)) is used
/// when |θ| ≤ 1e-8.
pub fn beta_density(theta: f64, t: f64) -> f64 {
    use std::f64::consts::PI;
    debug_assert!(theta.abs() < 1.0);
    let ch = (PI * t).cosh();
    if theta.abs() <= 1e-8 {
        PI / (2.0 * (ch + 1.0))
    } else {
        (theta * PI).sin() / (2.0 * theta * (ch + (theta * PI).cos()))
    }
}

/// Integrates a bounded complex map against β_θ over the real line via
/// adaptive double-exponential quadrature truncated at |t| ≤ T; with the
/// default T = 12 the discarded β_θ tail mass is below 1e-14.
pub fn beta_quadrature(g: impl Fn(f64) -> Complex64, theta: f64) -> Result<Complex64> {
    beta_quadrature_with(g, theta, 12.0, 1e-10)
}

pub fn beta_quadrature_with(
    g: impl Fn(f64) -> Complex64,
    theta: f64,
    t_max: f64,
    rel_target: f64,
) -> Result<Complex64> {
    tanh_sinh_complex(|t| g(t) * beta_density(theta, t), -t_max, t_max, rel_target)
}

/// Tanh-sinh quadrature of a smooth complex integrand on [a, b].
///
/// Doubles the node density per level and stops when successive levels agree
/// to `rel_target` relative to max(|I|, sup|f| sampled).
pub fn tanh_sinh_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    rel_target: f64,
) -> Result<Complex64> {
    use std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let u_max = 3.8;
    let eval = |u: f64| -> Complex64 {
        let s = FRAC_PI_2 * u.sinh();
        let x = c + d * s.tanh();
        let w = d * FRAC_PI_2 * u.cosh() / s.cosh().powi(2);
        if w == 0.0 || !w.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        f(x) * w
    };

    let mut sup_f: f64 = 0.0;
    let mut h = 0.5;
    // level 0: nodes at multiples of h
    let mut total = eval(0.0);
    sup_f = sup_f.max(total.norm());
    let mut k = 1;
    while (k as f64) * h <= u_max {
        let u = k as f64 * h;
        let (a, b) = (eval(u), eval(-u));
        sup_f = sup_f.max(a.norm()).max(b.norm());
        total += a + b;
        k += 1;
    }
    let mut integral = total * h;

    for _level in 0..16 {
        // refine: add midpoints at odd multiples of h/2
        let h2 = 0.5 * h;
        let mut added = Complex64::new(0.0, 0.0);
        let mut k = 1;
        while (k as f64) * h2 <= u_max {
            let u = k as f64 * h2;
            let (a, b) = (eval(u), eval(-u));
            sup_f = sup_f.max(a.norm()).max(b.norm());
            added += a + b;
            k += 2;
        }
        let refined = (total + added) * h2;
        let err = (refined - integral).norm();
        let scale = refined.norm().max(sup_f).max(1e-300);
        total += added;
        h = h2;
        let done = err <= rel_target * scale;
        integral = refined;
        if done {
            return Ok(integral);
        }
    }
    Err(Error::QuadratureNonConvergent(format!(
        "tanh-sinh stalled on [{a}, {b}]"
    )))
}

/// Whether supp(ρ) ⊆ supp(σ).
fn absolutely_continuous(rho: &DensityState, sigma: &HermitianOperator) -> bool {
    sigma.support_contains(rho.op())
}

/// Q_{α,z} and D_{α,z} with the defining case split. Subnormalized σ is
/// allowed; infinities are values, not errors.
pub fn q_alpha_z(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<(ExtendedValue, ExtendedValue)> {
    spec.validate()?;
    sigma.require_psd()?;
    if spec.is_umegaki() {
        return umegaki(rho, sigma);
    }
    let alpha = spec.alpha;
    if alpha < 1.0 {
        if orthogonal(rho.op(), sigma) {
            return Ok((ExtendedValue::infinite(), ExtendedValue::infinite()));
        }
    } else if !absolutely_continuous(rho, sigma) {
        return Ok((ExtendedValue::infinite(), ExtendedValue::infinite()));
    }
    let z = spec.z_value();
    let theta = spec.theta();
    let a_half = rho.op().pow(alpha / (2.0 * z))?;
    let s_theta = sigma.pow(theta)?;
    let inner = HermitianOperator::from_computed(
        a_half.matrix() * s_theta.matrix() * a_half.matrix(),
    );
    let thr = 1e-14 * inner.max_eigenvalue().max(0.0);
    let q: f64 = inner
        .clamped_eigenvalues()
        .iter()
        .filter(|&&l| l > thr)
        .map(|&l| l.powf(z))
        .sum();
    if q <= 1e-300 {
        return Ok((ExtendedValue::infinite(), ExtendedValue::infinite()));
    }
    let d = q.ln() / (alpha - 1.0);
    Ok((ExtendedValue::finite(q), ExtendedValue::finite(d)))
}

/// D_{α,z} alone.
pub fn d_alpha_z(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<ExtendedValue> {
    Ok(q_alpha_z(rho, sigma, spec)?.1)
}

/// Umegaki relative entropy Tr[ρ(ln ρ - ln σ)], +∞ unless supp(ρ) ⊆ supp(σ).
pub fn umegaki(
    rho: &DensityState,
    sigma: &HermitianOperator,
) -> Result<(ExtendedValue, ExtendedValue)> {
    sigma.require_psd()?;
    if !absolutely_continuous(rho, sigma) {
        return Ok((ExtendedValue::infinite(), ExtendedValue::infinite()));
    }
    let thr = 1e-14;
    let ent: f64 = rho
        .op()
        .clamped_eigenvalues()
        .iter()
        .filter(|&&l| l > thr)
        .map(|&l| l * l.ln())
        .sum();
    let log_sigma = sigma.log_on_support()?;
    let d = ent - trace_product(rho.op(), &log_sigma);
    Ok((ExtendedValue::finite(1.0), ExtendedValue::finite(d)))
}

/// D_0 = -ln Tr[ρ^0 σ], the α→0 Petz limit; +∞ iff ρ ⊥ σ.
pub fn d_zero(rho: &DensityState, sigma: &HermitianOperator) -> Result<ExtendedValue> {
    sigma.require_psd()?;
    let overlap = trace_product(&rho.op().support_projector(), sigma);
    if overlap <= ORTHOGONALITY_TOL {
        Ok(ExtendedValue::infinite())
    } else {
        Ok(ExtendedValue::finite(-overlap.ln()))
    }
}

/// D̃_∞ = ln λ_max(σ^{-1/2} ρ σ^{-1/2}); +∞ unless supp(ρ) ⊆ supp(σ).
pub fn d_max(rho: &DensityState, sigma: &HermitianOperator) -> Result<ExtendedValue> {
    sigma.require_psd()?;
    if !absolutely_continuous(rho, sigma) {
        return Ok(ExtendedValue::infinite());
    }
    let s = sigma.pow(-0.5)?;
    let m = HermitianOperator::from_computed(s.matrix() * rho.op().matrix() * s.matrix());
    Ok(ExtendedValue::finite(m.max_eigenvalue().ln()))
}

/// Reversed-line limit D↓(ρ‖σ) = D(ρ‖diag_ρ(ν_1, ν_2/ν_1, …)), with
/// ν_k the leading principal minors of σ in ρ's eigenbasis (descending
/// eigenvalue order); +∞ when a needed minor ratio degenerates.
pub fn d_down(rho: &DensityState, sigma: &HermitianOperator) -> Result<ExtendedValue> {
    sigma.require_psd()?;
    let d = rho.dim();
    let eig = rho.op().eig();
    let lam: Vec<f64> = rho.op().clamped_eigenvalues();
    // descending order columns of rho's eigenbasis
    let order: Vec<usize> = (0..d).rev().collect();
    let mut v = crate::opcore::CMat::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..d {
            v[(i, col)] = eig.vectors[(i, k)];
        }
    }
    let st = v.adjoint() * sigma.matrix() * &v;
    let thr = 1e-14;
    let mut prev = 1.0_f64;
    let mut degenerate = false;
    let mut acc = 0.0_f64;
    for k in 0..d {
        let minor = st.view((0, 0), (k + 1, k + 1)).determinant().re;
        let ratio = if degenerate || minor <= 0.0 {
            degenerate = true;
            0.0
        } else {
            minor / prev
        };
        let weight = lam[order[k]];
        if weight > thr {
            if ratio <= 0.0 {
                return Ok(ExtendedValue::infinite());
            }
            acc += weight * (weight.ln() - ratio.ln());
        }
        if !degenerate {
            prev = minor;
        }
    }
    Ok(ExtendedValue::finite(acc))
}

fn check_optimizer_support(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<()> {
    let theta = spec.theta();
    if (theta - 1.0).abs() <= 1e-12 {
        // supp(ρ) = supp(ρ^0 σ ρ^0)
        let p = rho.op().support_projector();
        let squeezed =
            HermitianOperator::from_computed(p.matrix() * sigma.matrix() * p.matrix());
        if squeezed.support_rank() != rho.op().support_rank() {
            return Err(Error::SupportViolation(
                "supp(rho) != supp(rho^0 sigma rho^0) on the (1-alpha)/z = 1 line".into(),
            ));
        }
    } else if !absolutely_continuous(rho, sigma) {
        return Err(Error::SupportViolation("supp(rho) not contained in supp(sigma)".into()));
    }
    Ok(())
}

/// χ_{α,z}(ρ,σ) = ρ^{α/2z} (ρ^{α/2z} σ^{(1-α)/z} ρ^{α/2z})^{z-1} ρ^{α/2z},
/// generalized powers on supports.
pub fn chi_alpha_z(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<HermitianOperator> {
    spec.validate()?;
    sigma.require_psd()?;
    check_optimizer_support(rho, sigma, spec)?;
    if spec.is_umegaki() {
        return Ok(rho.op().clone());
    }
    let z = spec.z_value();
    let theta = spec.theta();
    let a_half = rho.op().pow(spec.alpha / (2.0 * z))?;
    let s_theta = sigma.pow(theta)?;
    let inner = HermitianOperator::from_computed(
        a_half.matrix() * s_theta.matrix() * a_half.matrix(),
    );
    let mid = inner.pow(z - 1.0)?;
    Ok(HermitianOperator::from_computed(
        a_half.matrix() * mid.matrix() * a_half.matrix(),
    ))
}

/// Ξ_{α,z}(ρ,σ): the derivative operator of the optimality condition
/// `sup_τ Tr[τ Ξ] = Q_{α,z}(ρ‖σ0)`.
///
/// Computed in closed form via divided differences in σ's eigenbasis
/// (`Ξ_jk = Δ_{x^θ}(μ_j, μ_k)/θ · χ_jk`), with the boundary cases
/// Ξ = χ at z = 1-α and Ξ = σ^{-1} χ σ^{-1} at z = α-1.
pub fn xi_alpha_z(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<HermitianOperator> {
    let chi = chi_alpha_z(rho, sigma, spec)?;
    xi_from_chi(&chi, sigma, spec, rho)
}

/// χ, Ξ and Q together (χ is shared between Ξ and the trace identity
/// Q = Tr[χ σ^θ]).
pub fn xi_q(
    rho: &DensityState,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
) -> Result<(HermitianOperator, f64)> {
    let chi = chi_alpha_z(rho, sigma, spec)?;
    let q = if spec.is_umegaki() {
        1.0
    } else {
        let s_theta = sigma.pow(spec.theta())?;
        trace_product(&chi, &s_theta)
    };
    let xi = xi_from_chi(&chi, sigma, spec, rho)?;
    Ok((xi, q))
}

fn xi_from_chi(
    chi: &HermitianOperator,
    sigma: &HermitianOperator,
    spec: &DivergenceSpec,
    rho: &DensityState,
) -> Result<HermitianOperator> {
    let theta = spec.theta();
    if (theta - 1.0).abs() <= 1e-12 {
        return Ok(chi.clone());
    }
    if (theta + 1.0).abs() <= 1e-12 {
        // z = α-1 needs full-rank ρ for the optimality characterization
        if rho.op().support_rank() != rho.dim() {
            return Err(Error::SupportViolation(
                "z = alpha - 1 requires a full-rank state".into(),
            ));
        }
        let s_inv = sigma.pow(-1.0)?;
        return Ok(HermitianOperator::from_computed(
            s_inv.matrix() * chi.matrix() * s_inv.matrix(),
        ));
    }
    let eig = sigma.eig();
    let mask = sigma.support_mask();
    let mu = sigma.clamped_eigenvalues();
    let ct = eig.vectors.adjoint() * chi.matrix() * &eig.vectors;
    let d = sigma.dim();
    let mut xt = crate::opcore::CMat::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            if mask[j] && mask[k] {
                let w = if theta == 0.0 {
                    divided_difference(MatrixFn::Log, mu[j], mu[k])
                } else {
                    divided_difference(MatrixFn::Power(theta), mu[j], mu[k]) / theta
                };
                xt[(j, k)] = ct[(j, k)] * w;
            }
        }
    }
    Ok(HermitianOperator::from_computed(
        &eig.vectors * xt * eig.vectors.adjoint(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::kron;
    use crate::testkit::{random_density, random_psd, rng};
    use std::f64::consts::{E, PI};

    fn diag_state(entries: &[f64]) -> DensityState {
        DensityState::new(HermitianOperator::from_real_diagonal(entries)).unwrap()
    }

    #[test]
    fn delta_divided_examples() {
        assert!((delta_divided(MatrixFn::Log, 2.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((delta_divided(MatrixFn::Log, E, 1.0) - 1.0 / (E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn delta_divided_matches_beta_quadrature() {
        // Δ_{x^θ}(x,y)/θ = ∫ x^{-(1-θ+it)/2} y^{-(1-θ-it)/2} β_θ(t) dt
        let theta = 0.3;
        for &(x, y) in &[(0.7_f64, 0.3_f64), (2.0, 0.5), (1.3, 1.2999)] {
            let integral = beta_quadrature(
                |t| {
                    let ex = Complex64::new(-(1.0 - theta) / 2.0, -t / 2.0) * x.ln();
                    let ey = Complex64::new(-(1.0 - theta) / 2.0, t / 2.0) * y.ln();
                    (ex + ey).exp()
                },
                theta,
            )
            .unwrap();
            let closed = delta_divided(MatrixFn::Power(theta), x, y) / theta;
            assert!(
                (integral.re - closed).abs() <= 1e-8 * closed.abs(),
                "x={x} y={y}: {} vs {closed}",
                integral.re
            );
            assert!(integral.im.abs() < 1e-10);
        }
    }

    #[test]
    fn beta_density_values() {
        assert!((beta_density(0.0, 0.0) - PI / 4.0).abs() < 1e-15);
        // sin(π/2) / (2·0.5·(cosh 0 + cos(π/2))) = 1
        assert!((beta_density(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(beta_density(0.4, 1.3), beta_density(0.4, -1.3));
        assert!((beta_density(0.6, 0.7) - beta_density(-0.6, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn beta_is_probability_measure() {
        for &theta in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
            let total = beta_quadrature(|_| Complex64::new(1.0, 0.0), theta).unwrap();
            assert!(
                (total.re - 1.0).abs() <= 1e-10,
                "theta={theta} mass={}",
                total.re
            );
        }
    }

    #[test]
    fn beta_quadrature_log_divided_difference() {
        let (x, y) = (0.7_f64, 0.3_f64);
        let integral = beta_quadrature(
            |t| {
                let ex = Complex64::new(-0.5, -t / 2.0) * x.ln();
                let ey = Complex64::new(-0.5, t / 2.0) * y.ln();
                (ex + ey).exp()
            },
            0.0,
        )
        .unwrap();
        let expect = delta_divided(MatrixFn::Log, x, y);
        assert!((integral.re - expect).abs() < 1e-10);
    }

    #[test]
    fn beta_fourier_transform() {
        // ∫ e^{ict} β_0(t) dt = Δ_log(e^{-c}, e^{c}) = c / sinh(c)
        for &cc in &[0.5, 1.0, 2.3] {
            let val = beta_quadrature(|t| Complex64::new(0.0, cc * t).exp(), 0.0).unwrap();
            let expect = cc / cc.sinh();
            assert!((val.re - expect).abs() < 1e-10, "c={cc}");
        }
    }

    #[test]
    fn q_of_state_with_itself() {
        let mut r = rng(31);
        let rho = random_density(&mut r, 3, true);
        for spec in [
            DivergenceSpec::umegaki(),
            DivergenceSpec::petz(0.5),
            DivergenceSpec::sandwiched(2.0),
            DivergenceSpec::alpha_z(0.5, 0.5),
        ] {
            let (q, d) = q_alpha_z(&rho, rho.op(), &spec).unwrap();
            assert!((q.value - 1.0).abs() < 1e-10, "{spec:?}");
            assert!(d.value.abs() < 1e-10, "{spec:?}");
        }
    }

    #[test]
    fn umegaki_paper_anchor() {
        // D(|+><+| ‖ diag(0.7, 0.3)) = -(ln 0.7 + ln 0.3)/2 = 0.78025 nats
        let rho = DensityState::plus_state();
        let sigma = HermitianOperator::from_real_diagonal(&[0.7, 0.3]);
        let (_, d) = umegaki(&rho, &sigma).unwrap();
        let expect = -0.5 * (0.7_f64.ln() + 0.3_f64.ln());
        assert!((d.value - expect).abs() < 1e-12);
        assert!((d.value - 0.7803).abs() < 5e-3);
    }

    #[test]
    fn classical_alpha_z_formula() {
        // commuting pair: D_{α,z} = (α-1)^{-1} ln Σ p^α q^{1-α}, any z
        let rho = diag_state(&[0.9, 0.1]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        let alpha = 0.5;
        let expect = (0.9_f64.powf(alpha) * 0.5_f64.powf(1.0 - alpha)
            + 0.1_f64.powf(alpha) * 0.5_f64.powf(1.0 - alpha))
        .ln()
            / (alpha - 1.0);
        for z in [0.5, 1.0, 2.0] {
            let (_, d) = q_alpha_z(&rho, &sigma, &DivergenceSpec::alpha_z(alpha, z)).unwrap();
            assert!((d.value - expect).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn support_case_split() {
        let rho = diag_state(&[1.0, 0.0]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        // α<1 and orthogonal -> +∞
        let (_, d) = q_alpha_z(&rho, &sigma, &DivergenceSpec::petz(0.5)).unwrap();
        assert!(!d.is_finite());
        // α>1 and not absolutely continuous -> +∞
        let tilted = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        let singular = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        let rho_mixed = diag_state(&[0.5, 0.5]);
        let (_, d2) = q_alpha_z(&rho_mixed, &singular, &DivergenceSpec::sandwiched(2.0)).unwrap();
        assert!(!d2.is_finite());
        let (_, d3) = q_alpha_z(&rho_mixed, &tilted, &DivergenceSpec::sandwiched(2.0)).unwrap();
        assert!(d3.is_finite());
    }

    #[test]
    fn specializations_and_umegaki_limit() {
        let mut r = rng(37);
        let rho = random_density(&mut r, 3, true);
        let sigma = random_psd(&mut r, 3, true);
        // Petz via explicit z=1, sandwiched via z=α
        let d_petz = d_alpha_z(&rho, &sigma, &DivergenceSpec::petz(0.7)).unwrap().value;
        let d_petz2 = d_alpha_z(&rho, &sigma, &DivergenceSpec::alpha_z(0.7, 1.0)).unwrap().value;
        assert!((d_petz - d_petz2).abs() < 1e-12);
        let du = umegaki(&rho, &sigma).unwrap().1.value;
        for &alpha in &[0.999, 1.001] {
            let d = d_alpha_z(&rho, &sigma, &DivergenceSpec::petz(alpha)).unwrap().value;
            assert!((d - du).abs() <= 1e-2, "alpha={alpha}: {d} vs {du}");
            let ds = d_alpha_z(&rho, &sigma, &DivergenceSpec::sandwiched(alpha)).unwrap().value;
            assert!((ds - du).abs() <= 1e-2, "alpha={alpha}: {ds} vs {du}");
        }
    }

    #[test]
    fn reversed_line_monotone_in_alpha() {
        let mut r = rng(41);
        let rho = random_density(&mut r, 2, true);
        let sigma = random_density(&mut r, 2, true).op().clone();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..10 {
            let alpha = i as f64 / 10.0;
            let d = d_alpha_z(&rho, &sigma, &DivergenceSpec::reversed(alpha)).unwrap().value;
            assert!(d >= prev - 1e-10, "alpha={alpha}");
            prev = d;
        }
    }

    #[test]
    fn sandwiched_psi_properties() {
        // ψ(α) = ln Q̃_α convex with ψ(1) = 0; D̃_α nondecreasing
        let mut r = rng(43);
        let rho = random_density(&mut r, 2, true);
        let sigma = random_density(&mut r, 2, true).op().clone();
        let alphas: Vec<f64> = (1..40).map(|i| 0.25 + i as f64 * 0.25).collect();
        let psi: Vec<f64> = alphas
            .iter()
            .map(|&a| {
                let (q, _) = q_alpha_z(&rho, &sigma, &DivergenceSpec::sandwiched(a)).unwrap();
                q.value.ln()
            })
            .collect();
        let (q1, _) = q_alpha_z(&rho, &sigma, &DivergenceSpec::sandwiched(1.0 + 1e-9)).unwrap();
        assert!(q1.value.ln().abs() < 1e-6);
        for w in psi.windows(3) {
            assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-9, "psi convexity");
        }
        let mut prev = f64::NEG_INFINITY;
        for (&a, &p) in alphas.iter().zip(&psi) {
            if (a - 1.0).abs() < 1e-9 {
                continue;
            }
            let d = p / (a - 1.0);
            assert!(d >= prev - 1e-8, "D̃ monotone at alpha={a}");
            prev = d;
        }
    }

    #[test]
    fn tensor_additivity() {
        let mut r = rng(47);
        let r1 = random_density(&mut r, 2, true);
        let r2 = random_density(&mut r, 2, true);
        let s1 = random_psd(&mut r, 2, true);
        let s2 = random_psd(&mut r, 2, true);
        let rho12 = DensityState::new(kron(r1.op(), r2.op())).unwrap();
        let sig12 = kron(&s1, &s2);
        for spec in [
            DivergenceSpec::umegaki(),
            DivergenceSpec::petz(0.5),
            DivergenceSpec::sandwiched(2.0),
            DivergenceSpec::alpha_z(0.5, 0.7),
        ] {
            let lhs = d_alpha_z(&rho12, &sig12, &spec).unwrap().value;
            let rhs = d_alpha_z(&r1, &s1, &spec).unwrap().value
                + d_alpha_z(&r2, &s2, &spec).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-9, "{spec:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn data_processing_under_partial_trace() {
        use crate::opcore::SystemShape;
        let mut r = rng(53);
        let shape = SystemShape::new(vec![2, 2]);
        for spec in [
            DivergenceSpec::umegaki(),
            DivergenceSpec::petz(0.5),
            DivergenceSpec::sandwiched(2.0),
        ] {
            for _ in 0..5 {
                let rho = random_density(&mut r, 4, true);
                let sigma = random_density(&mut r, 4, true).op().clone();
                let full = d_alpha_z(&rho, &sigma, &spec).unwrap().value;
                let rho_b = DensityState::new(rho.op().partial_trace(&shape, 0).unwrap()).unwrap();
                let sig_b = sigma.partial_trace(&shape, 0).unwrap();
                let reduced = d_alpha_z(&rho_b, &sig_b, &spec).unwrap().value;
                assert!(reduced <= full + 1e-9, "{spec:?}");
            }
        }
    }

    #[test]
    fn d_zero_examples() {
        let mut r = rng(59);
        let rho = random_density(&mut r, 3, true);
        let sigma = random_density(&mut r, 3, true).op().clone();
        assert!(d_zero(&rho, &sigma).unwrap().value.abs() < 1e-10);
        let pure = diag_state(&[1.0, 0.0]);
        let half = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        assert!((d_zero(&pure, &half).unwrap().value - 2.0_f64.ln()).abs() < 1e-12);
        // α→0 limit of the Petz family
        let d_small = d_alpha_z(&rho, &sigma, &DivergenceSpec::petz(1e-6)).unwrap().value;
        assert!((d_small - d_zero(&rho, &sigma).unwrap().value).abs() <= 1e-4);
    }

    #[test]
    fn d_max_examples() {
        let rho = diag_state(&[0.9, 0.1]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        assert!((d_max(&rho, &sigma).unwrap().value - 1.8_f64.ln()).abs() < 1e-12);
        assert!(d_max(&rho, rho.op()).unwrap().value.abs() < 1e-12);
        let mut r = rng(61);
        let a = random_density(&mut r, 2, true);
        let b = random_density(&mut r, 2, true).op().clone();
        let big = d_alpha_z(&a, &b, &DivergenceSpec::sandwiched(200.0)).unwrap().value;
        assert!((big - d_max(&a, &b).unwrap().value).abs() <= 2e-2);
    }

    #[test]
    fn d_down_properties() {
        let mut r = rng(67);
        // commuting pair: minors telescope to eigenvalues
        let rho = diag_state(&[0.6, 0.3, 0.1]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.2, 0.5, 0.3]);
        let dd = d_down(&rho, &sigma).unwrap().value;
        let du = umegaki(&rho, &sigma).unwrap().1.value;
        assert!((dd - du).abs() < 1e-10);
        // d_down <= D on random qubit pairs
        for _ in 0..100 {
            let a = random_density(&mut r, 2, true);
            let b = random_density(&mut r, 2, true).op().clone();
            let lhs = d_down(&a, &b).unwrap().value;
            let rhs = umegaki(&a, &b).unwrap().1.value;
            assert!(lhs <= rhs + 1e-9, "{lhs} vs {rhs}");
        }
        // pure state: D↓ = -ln <+|σ|+>
        let plus = DensityState::plus_state();
        let sig = HermitianOperator::from_real_diagonal(&[0.7, 0.3]);
        let dd = d_down(&plus, &sig).unwrap().value;
        assert!((dd - 2.0_f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn d_down_is_reversed_line_limit() {
        // The sandwich carries λ^{α/(1-α)}, which drops below the eigensolver
        // noise floor for α much past 0.9; probe the approach there.
        for seed in [71, 72] {
            let mut r = rng(seed);
            let rho = random_density(&mut r, 2, true);
            let sigma = random_density(&mut r, 2, true).op().clone();
            let near = d_alpha_z(&rho, &sigma, &DivergenceSpec::reversed(0.9)).unwrap().value;
            let mid = d_alpha_z(&rho, &sigma, &DivergenceSpec::reversed(0.8)).unwrap().value;
            let dd = d_down(&rho, &sigma).unwrap().value;
            assert!(mid <= near + 1e-12 && near <= dd + 1e-9, "{mid} {near} {dd}");
            assert!((near - dd).abs() < 5e-2, "{near} vs {dd}");
        }
    }

    #[test]
    fn chi_trace_identity_and_special_cases() {
        let mut r = rng(73);
        // ρ=σ full-rank: χ = ρ^{(α-1)/z + 1}, so ρ^{1/2} at (α,z) = (0.5,1)
        // (the inner operator collapses to ρ^{1/z} and the z-1 power telescopes)
        let rho = random_density(&mut r, 3, true);
        let chi = chi_alpha_z(&rho, rho.op(), &DivergenceSpec::petz(0.5)).unwrap();
        assert!(chi.distance_max(&rho.op().pow(0.5).unwrap()) < 1e-10);
        let chi_u = chi_alpha_z(&rho, rho.op(), &DivergenceSpec::umegaki()).unwrap();
        assert!(chi_u.distance_max(rho.op()) < 1e-12);
        // Tr[χ σ^θ] = Q on random pairs
        for spec in [
            DivergenceSpec::petz(0.5),
            DivergenceSpec::sandwiched(2.0),
            DivergenceSpec::alpha_z(1.5, 1.2),
        ] {
            for _ in 0..17 {
                let rho = random_density(&mut r, 3, true);
                let sigma = random_density(&mut r, 3, true).op().clone();
                let chi = chi_alpha_z(&rho, &sigma, &spec).unwrap();
                chi.require_psd().unwrap();
                let s_theta = sigma.pow(spec.theta()).unwrap();
                let lhs = trace_product(&chi, &s_theta);
                let (q, _) = q_alpha_z(&rho, &sigma, &spec).unwrap();
                assert!(
                    (lhs - q.value).abs() <= 1e-9 * q.value.abs().max(1.0),
                    "{spec:?}"
                );
            }
        }
    }

    #[test]
    fn chi_commuting_diagonal_formula() {
        let rho = diag_state(&[0.7, 0.3]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.4, 0.6]);
        let spec = DivergenceSpec::alpha_z(2.0, 1.5);
        let chi = chi_alpha_z(&rho, &sigma, &spec).unwrap();
        let z = 1.5;
        let theta = spec.theta();
        for i in 0..2 {
            let p: f64 = rho.op().matrix()[(i, i)].re;
            let s: f64 = sigma.matrix()[(i, i)].re;
            let expect = p.powf(2.0) * s.powf(theta * (z - 1.0));
            assert!((chi.matrix()[(i, i)].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn xi_umegaki_normalization() {
        // Tr[σ Ξ(ρ,σ)] = 1 for full-rank σ (equality attained at τ = σ0)
        let mut r = rng(79);
        for _ in 0..10 {
            let rho = random_density(&mut r, 3, true);
            let sigma = random_density(&mut r, 3, true).op().clone();
            let xi = xi_alpha_z(&rho, &sigma, &DivergenceSpec::umegaki()).unwrap();
            assert!((trace_product(&sigma, &xi) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn xi_matches_quadrature_oracle() {
        let mut r = rng(83);
        let rho = random_density(&mut r, 3, true);
        let sigma = random_density(&mut r, 3, true).op().clone();
        for spec in [
            DivergenceSpec::petz(0.6),
            DivergenceSpec::sandwiched(1.8),
            DivergenceSpec::umegaki(),
        ] {
            let theta = spec.theta();
            let chi = chi_alpha_z(&rho, &sigma, &spec).unwrap();
            let xi = xi_alpha_z(&rho, &sigma, &spec).unwrap();
            // oracle: entrywise quadrature of σ^{-(1-θ+it)/2} χ σ^{-(1-θ-it)/2}
            let d = sigma.dim();
            let mut worst = 0.0_f64;
            for i in 0..d {
                for j in 0..d {
                    let val = beta_quadrature(
                        |t| {
                            let left = sigma
                                .complex_power(Complex64::new(-(1.0 - theta) / 2.0, -t / 2.0))
                                .unwrap();
                            let right = sigma
                                .complex_power(Complex64::new(-(1.0 - theta) / 2.0, t / 2.0))
                                .unwrap();
                            (left * chi.matrix() * right)[(i, j)]
                        },
                        theta,
                    )
                    .unwrap();
                    worst = worst.max((val - xi.matrix()[(i, j)]).norm());
                }
            }
            let scale = xi.max_abs().max(1.0);
            assert!(worst <= 1e-8 * scale, "{spec:?}: worst {worst}");
        }
    }

    #[test]
    fn xi_commuting_formula() {
        // commuting pair: Ξ = ρ^α σ^{-α} on the support
        let rho = diag_state(&[0.7, 0.3]);
        let sigma = HermitianOperator::from_real_diagonal(&[0.4, 0.6]);
        for spec in [DivergenceSpec::petz(0.5), DivergenceSpec::sandwiched(2.0)] {
            let xi = xi_alpha_z(&rho, &sigma, &spec).unwrap();
            for i in 0..2 {
                let p: f64 = rho.op().matrix()[(i, i)].re;
                let s: f64 = sigma.matrix()[(i, i)].re;
                let expect = p.powf(spec.alpha) * s.powf(-spec.alpha);
                assert!(
                    (xi.matrix()[(i, i)].re - expect).abs() < 1e-10,
                    "{spec:?} i={i}"
                );
            }
        }
    }

    #[test]
    fn xi_line_and_inverse_cases() {
        let mut r = rng(89);
        let rho = random_density(&mut r, 2, true);
        let sigma = random_density(&mut r, 2, true).op().clone();
        // z = 1-α: Ξ = χ
        let line = DivergenceSpec::reversed(0.3);
        let xi = xi_alpha_z(&rho, &sigma, &line).unwrap();
        let chi = chi_alpha_z(&rho, &sigma, &line).unwrap();
        assert!(xi.distance_max(&chi) < 1e-12);
        // z = α-1: Ξ = σ^{-1} χ σ^{-1}
        let spec = DivergenceSpec::alpha_z(2.0, 1.0);
        assert!((spec.theta() + 1.0).abs() < 1e-12);
        let xi = xi_alpha_z(&rho, &sigma, &spec).unwrap();
        let chi = chi_alpha_z(&rho, &sigma, &spec).unwrap();
        let si = sigma.pow(-1.0).unwrap();
        let expect = HermitianOperator::from_computed(si.matrix() * chi.matrix() * si.matrix());
        assert!(xi.distance_max(&expect) < 1e-9);
    }

    #[test]
    fn dp_region_membership() {
        assert!(DivergenceSpec::petz(0.5).in_dp_region());
        assert!(DivergenceSpec::sandwiched(2.0).in_dp_region());
        assert!(DivergenceSpec::alpha_z(0.5, 0.5).in_dp_region());
        assert!(!DivergenceSpec::alpha_z(0.9, 0.3).in_dp_region());
        assert!(!DivergenceSpec::alpha_z(2.0, 0.5).in_dp_region());
        assert!(DivergenceSpec::umegaki().in_dp_region());
        assert!(DivergenceSpec::reversed(0.3).in_dp_region());
        assert!(!DivergenceSpec::reversed(0.7).in_dp_region());
        assert!(DivergenceSpec::reversed(0.7).is_line_case());
    }
}
