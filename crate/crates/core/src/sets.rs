//! Convex compact sets of positive operators.
//!
//! Every set is used through two oracles: its extreme points and the
//! support function `h_S(X) = sup_{σ∈S} Tr[σX]` (the linear-maximization
//! oracle of Frank–Wolfe and of the optimality certificates). Builtins
//! lower to finite hulls over commuting or small families:
//!
//! * `AvQubit(λ)` — conv{ diag((1+λ)/2, (1-λ)/2), |-><-| }, the arbitrarily
//!   varying qubit source.
//! * `WernerRainsSlice(d)` — the twirled (Werner-diagonal) slice of the
//!   Rains set { σ ≥ 0 : ‖σ^{T_B}‖_1 ≤ 1 }. The partial transpose is
//!   diagonal in the {I, maximally-entangled} decomposition, so the trace
//!   norm is piecewise linear and the slice is a 2-D polytope.
//! * `ManaStrangeSlice` — the twirled slice of subnormalized qutrit states
//!   with non-positive mana, spanned by the strange-state projector and the
//!   complementary mixture; the Wigner trace norm is again piecewise linear.
//! * `ProductMarginal` — { π_A ⊗ σ_B : σ_B a state }; not finitely
//!   generated, but its linear maximizer is λ_max(Tr_A X / d_A).
//!
//! Lifts to n copies enumerate permutation orbits of product extremes:
//! against permutation-invariant objectives the symmetrized orbit hull
//! attains the same minimum as the full product hull, turning k^n extremes
//! into C(n+k-1, k-1) weights.

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::opcore::{
    antisymmetric_projector, kron, symmetric_projector, trace_product, CMat, DensityState,
    HermitianOperator, SystemShape,
};

#[derive(Debug, Clone)]
pub enum ConvexSetSpec {
    FiniteHull(Vec<HermitianOperator>),
    AvQubit { lambda: f64 },
    WernerRainsSlice { d: usize },
    ManaStrangeSlice,
    SingleState(HermitianOperator),
    /// π_A ⊗ (free state on B); shape = [d_A, d_B].
    ProductMarginal { shape: SystemShape },
}

/// Result of a linear maximization over a set.
#[derive(Debug, Clone)]
pub struct SupportPoint {
    pub value: f64,
    pub maximizer: HermitianOperator,
    /// Index into `extreme_points()` when the set is finitely generated.
    pub extreme_index: Option<usize>,
}

impl ConvexSetSpec {
    pub fn av_qubit(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::validation("av_qubit.lambda", "lambda must lie in [0,1)"));
        }
        Ok(ConvexSetSpec::AvQubit { lambda })
    }

    pub fn base_dim(&self) -> usize {
        match self {
            ConvexSetSpec::FiniteHull(v) => v.first().map_or(0, |m| m.dim()),
            ConvexSetSpec::AvQubit { .. } => 2,
            ConvexSetSpec::WernerRainsSlice { d } => d * d,
            ConvexSetSpec::ManaStrangeSlice => 3,
            ConvexSetSpec::SingleState(s) => s.dim(),
            ConvexSetSpec::ProductMarginal { shape } => shape.dim(),
        }
    }

    pub fn is_finitely_generated(&self) -> bool {
        !matches!(self, ConvexSetSpec::ProductMarginal { .. })
    }

    /// Deduplicated extreme points. Builtins lower to finite hulls here.
    pub fn extreme_points(&self) -> Result<Vec<HermitianOperator>> {
        let raw = match self {
            ConvexSetSpec::FiniteHull(v) => {
                if v.is_empty() {
                    return Err(Error::validation("hull.extremes", "empty hull"));
                }
                let d = v[0].dim();
                for (i, m) in v.iter().enumerate() {
                    if m.dim() != d {
                        return Err(Error::ShapeMismatch(format!(
                            "hull extreme {i} has dim {} != {d}",
                            m.dim()
                        )));
                    }
                    m.require_psd()?;
                }
                v.clone()
            }
            ConvexSetSpec::AvQubit { lambda } => {
                let sigma = HermitianOperator::from_real_diagonal(&[
                    (1.0 + lambda) / 2.0,
                    (1.0 - lambda) / 2.0,
                ]);
                vec![sigma, DensityState::minus_state().op().clone()]
            }
            ConvexSetSpec::WernerRainsSlice { d } => werner_rains_extremes(*d)?,
            ConvexSetSpec::ManaStrangeSlice => mana_strange_extremes(),
            ConvexSetSpec::SingleState(s) => {
                s.require_psd()?;
                vec![s.clone()]
            }
            ConvexSetSpec::ProductMarginal { .. } => {
                return Err(Error::NotFinitelyGenerated(
                    "product-marginal set has a continuum of extreme points".into(),
                ))
            }
        };
        Ok(dedup_operators(raw))
    }

    /// Support function h_S(X) with the argmax extreme index; ties broken by
    /// lowest index. Requires a finitely generated set.
    pub fn support_function(&self, x: &HermitianOperator) -> Result<(f64, usize)> {
        let sp = self.linear_max(x)?;
        match sp.extreme_index {
            Some(i) => Ok((sp.value, i)),
            None => Err(Error::NotFinitelyGenerated(
                "support_function needs a finite hull; use linear_max".into(),
            )),
        }
    }

    /// Linear maximization valid for every variant.
    pub fn linear_max(&self, x: &HermitianOperator) -> Result<SupportPoint> {
        match self {
            ConvexSetSpec::ProductMarginal { shape } => {
                if shape.dim() != x.dim() {
                    return Err(Error::ShapeMismatch("linear_max input dim".into()));
                }
                let d_a = shape.local_dims[0];
                let reduced = x.partial_trace(shape, 0)?.scale(1.0 / d_a as f64);
                let eig = reduced.eig();
                let k = reduced.dim() - 1;
                let value = eig.values[k];
                let ket: Vec<Complex64> =
                    (0..reduced.dim()).map(|i| eig.vectors[(i, k)]).collect();
                let pi_a = HermitianOperator::identity(d_a).scale(1.0 / d_a as f64);
                let maximizer = kron(&pi_a, &HermitianOperator::pure_projector(&ket));
                Ok(SupportPoint { value, maximizer, extreme_index: None })
            }
            _ => {
                let extremes = self.extreme_points()?;
                linear_max_over(&extremes, x)
            }
        }
    }

    /// Assumption 2: some element's support contains supp(ρ). The uniform
    /// mixture of extremes carries the union of their supports.
    pub fn contains_support_of(&self, rho: &DensityState) -> Result<bool> {
        match self {
            ConvexSetSpec::ProductMarginal { shape } => {
                Ok(shape.dim() == rho.dim()) // π_A ⊗ π_B is full rank
            }
            _ => {
                let avg = self.uniform_mixture()?;
                Ok(avg.support_contains(rho.op()))
            }
        }
    }

    /// Uniform mixture of the extreme points.
    pub fn uniform_mixture(&self) -> Result<HermitianOperator> {
        let ex = self.extreme_points()?;
        let w = 1.0 / ex.len() as f64;
        let refs: Vec<(f64, &HermitianOperator)> = ex.iter().map(|e| (w, e)).collect();
        Ok(HermitianOperator::linear_combination(&refs))
    }

    /// n-copy lift over permutation orbits of product extremes.
    pub fn lift(&self, n: usize, cap: usize) -> Result<LiftedSet> {
        let extremes = self.extreme_points()?;
        LiftedSet::new(extremes, self.base_dim(), n, cap)
    }

    /// JSON descriptor per the wire format.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("set descriptor must be a JSON object".into()))?;
        let ty = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::validation("set.type", "missing string field"))?;
        let known: &[&str] = match ty {
            "hull" => &["type", "extremes"],
            "av_qubit" => &["type", "lambda"],
            "werner_rains" => &["type", "d"],
            "mana_strange" => &["type"],
            "single" => &["type", "state"],
            other => {
                return Err(Error::validation(
                    "set.type",
                    format!("unknown set type {other:?}"),
                ))
            }
        };
        for key in obj.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::validation(
                    format!("set.{key}"),
                    "unknown field".to_string(),
                ));
            }
        }
        match ty {
            "hull" => {
                let arr = obj
                    .get("extremes")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::validation("set.extremes", "expected array"))?;
                let mut ex = Vec::with_capacity(arr.len());
                for (i, m) in arr.iter().enumerate() {
                    ex.push(matrix_from_json(m, &format!("set.extremes[{i}]"))?);
                }
                Ok(ConvexSetSpec::FiniteHull(ex))
            }
            "av_qubit" => {
                let lam = obj
                    .get("lambda")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::validation("set.lambda", "expected number"))?;
                ConvexSetSpec::av_qubit(lam)
            }
            "werner_rains" => {
                let d = obj
                    .get("d")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::validation("set.d", "expected positive integer"))?;
                if d < 2 {
                    return Err(Error::validation("set.d", "d must be >= 2"));
                }
                Ok(ConvexSetSpec::WernerRainsSlice { d: d as usize })
            }
            "mana_strange" => Ok(ConvexSetSpec::ManaStrangeSlice),
            "single" => {
                let m = obj
                    .get("state")
                    .ok_or_else(|| Error::validation("set.state", "missing matrix"))?;
                Ok(ConvexSetSpec::SingleState(matrix_from_json(m, "set.state")?))
            }
            _ => unreachable!(),
        }
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(match self {
            ConvexSetSpec::FiniteHull(ex) => serde_json::json!({
                "type": "hull",
                "extremes": ex.iter().map(matrix_to_json).collect::<Vec<_>>(),
            }),
            ConvexSetSpec::AvQubit { lambda } => {
                serde_json::json!({"type": "av_qubit", "lambda": lambda})
            }
            ConvexSetSpec::WernerRainsSlice { d } => {
                serde_json::json!({"type": "werner_rains", "d": d})
            }
            ConvexSetSpec::ManaStrangeSlice => serde_json::json!({"type": "mana_strange"}),
            ConvexSetSpec::SingleState(s) => {
                serde_json::json!({"type": "single", "state": matrix_to_json(s)})
            }
            ConvexSetSpec::ProductMarginal { .. } => {
                return Err(Error::NotFinitelyGenerated(
                    "product-marginal sets have no wire format".into(),
                ))
            }
        })
    }
}

pub fn linear_max_over(extremes: &[HermitianOperator], x: &HermitianOperator) -> Result<SupportPoint> {
    if extremes.is_empty() {
        return Err(Error::validation("hull", "no extremes"));
    }
    let mut best = f64::NEG_INFINITY;
    let mut idx = 0;
    for (i, tau) in extremes.iter().enumerate() {
        let v = trace_product(tau, x);
        if v > best + 1e-15 {
            best = v;
            idx = i;
        }
    }
    Ok(SupportPoint {
        value: best,
        maximizer: extremes[idx].clone(),
        extreme_index: Some(idx),
    })
}

/// Product hull of two sets (extremes are pairwise Kronecker products).
pub fn tensor_product_hull(a: &ConvexSetSpec, b: &ConvexSetSpec) -> Result<ConvexSetSpec> {
    let ea = a.extreme_points()?;
    let eb = b.extreme_points()?;
    let mut out = Vec::with_capacity(ea.len() * eb.len());
    for x in &ea {
        for y in &eb {
            out.push(kron(x, y));
        }
    }
    Ok(ConvexSetSpec::FiniteHull(out))
}

fn dedup_operators(ops: Vec<HermitianOperator>) -> Vec<HermitianOperator> {
    let mut out: Vec<HermitianOperator> = Vec::with_capacity(ops.len());
    for op in ops {
        if !out.iter().any(|seen| seen.distance_max(&op) <= 1e-12) {
            out.push(op);
        }
    }
    out
}

/// Vertices of { z >= 0 : Σ_i |<f_i, z>| <= 1 } for a piecewise-linear gauge
/// on the quadrant, ordered as origin then increasing angle.
fn polygon_slice_vertices(funcs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    use std::f64::consts::FRAC_PI_2;
    let mut angles = vec![0.0, FRAC_PI_2];
    for &(s, t) in funcs {
        // kink where s cos φ + t sin φ = 0 inside the open quadrant
        if s * t < 0.0 {
            let phi = (-s / t).atan();
            if phi > 1e-12 && phi < FRAC_PI_2 - 1e-12 {
                angles.push(phi);
            }
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let gauge = |x: f64, y: f64| -> f64 {
        funcs.iter().map(|&(s, t)| (s * x + t * y).abs()).sum()
    };
    let mut pts: Vec<(f64, f64)> = angles
        .iter()
        .map(|&phi| {
            let (c, s) = (phi.cos(), phi.sin());
            let n = gauge(c, s);
            (c / n, s / n)
        })
        .collect();
    // prune boundary points that are not kinks (collinear triples)
    let mut keep = vec![true; pts.len()];
    for i in 1..pts.len().saturating_sub(1) {
        let (ax, ay) = pts[i - 1];
        let (bx, by) = pts[i];
        let (cx, cy) = pts[i + 1];
        let cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        if cross.abs() < 1e-12 {
            keep[i] = false;
        }
    }
    pts = pts
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    let mut out = vec![(0.0, 0.0)];
    out.extend(pts);
    out
}

/// Twirled Rains slice: σ = a 2P_sym/(d(d+1)) + b 2P_as/(d(d-1)) with
/// a, b >= 0 and ‖σ^{T_B}‖_1 = [a(d-1) + b(d+1) + |a-b|]/d <= 1.
fn werner_rains_extremes(d: usize) -> Result<Vec<HermitianOperator>> {
    if d < 2 {
        return Err(Error::validation("werner_rains.d", "d must be >= 2"));
    }
    let dd = d as f64;
    let funcs = [
        // (d^2-1) copies of the eigenvalue u = a/(d(d+1)) + b/(d(d-1))
        (
            (dd * dd - 1.0) / (dd * (dd + 1.0)),
            (dd * dd - 1.0) / (dd * (dd - 1.0)),
        ),
        // the maximally-entangled eigenvalue u + v = (a-b)/d
        (1.0 / dd, -1.0 / dd),
    ];
    let sym = symmetric_projector(d).scale(2.0 / (dd * (dd + 1.0)));
    let asym = antisymmetric_projector(d).scale(2.0 / (dd * (dd - 1.0)));
    Ok(polygon_slice_vertices(&funcs)
        .into_iter()
        .map(|(a, b)| HermitianOperator::linear_combination(&[(a, &sym), (b, &asym)]))
        .collect())
}

/// Qutrit phase-point operators A_u = T_u A_0 T_u^dag with A_0 the parity
/// operator; the Wigner function is W_σ(u) = Tr[A_u σ]/3.
pub fn qutrit_phase_point_operators() -> Vec<HermitianOperator> {
    let d = 3usize;
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut a0 = CMat::zeros(d, d);
    for x in 0..d {
        a0[((d - x) % d, x)] = Complex64::new(1.0, 0.0);
    }
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            // T = X^a Z^b (the phase cancels under conjugation)
            let mut t = CMat::zeros(d, d);
            for j in 0..d {
                t[((j + a) % d, j)] = omega.powu(b as u32 * j as u32);
            }
            let m = &t * &a0 * t.adjoint();
            out.push(HermitianOperator::from_computed(m));
        }
    }
    out
}

/// Wigner trace norm Σ_u |Tr[A_u σ]| / 3 of a qutrit operator.
pub fn wigner_trace_norm(op: &HermitianOperator) -> f64 {
    qutrit_phase_point_operators()
        .iter()
        .map(|a| (trace_product(a, op) / 3.0).abs())
        .sum()
}

/// Twirled mana slice: σ = x S + y (I-S)/2 with x, y >= 0 and Wigner trace
/// norm at most one.
fn mana_strange_extremes() -> Vec<HermitianOperator> {
    let s = DensityState::strange_projector();
    let m = HermitianOperator::identity(3).sub(&s).scale(0.5);
    let funcs: Vec<(f64, f64)> = qutrit_phase_point_operators()
        .iter()
        .map(|a| (trace_product(a, &s) / 3.0, trace_product(a, &m) / 3.0))
        .collect();
    polygon_slice_vertices(&funcs)
        .into_iter()
        .map(|(x, y)| HermitianOperator::linear_combination(&[(x, &s), (y, &m)]))
        .collect()
}

/// n-copy lift of a finite hull over permutation orbits.
#[derive(Debug, Clone)]
pub struct LiftedSet {
    base_extremes: Vec<HermitianOperator>,
    base_dim: usize,
    n_copies: usize,
    /// (sorted multi-index, number of distinct permutations)
    orbit_reps: Vec<(Vec<usize>, usize)>,
    extremes: Vec<HermitianOperator>,
}

impl LiftedSet {
    pub fn new(
        base_extremes: Vec<HermitianOperator>,
        base_dim: usize,
        n: usize,
        cap: usize,
    ) -> Result<Self> {
        assert!(n >= 1);
        let target = base_dim
            .checked_pow(n as u32)
            .ok_or(Error::SizeCap { requested: usize::MAX, cap })?;
        if target > cap {
            return Err(Error::SizeCap { requested: target, cap });
        }
        let k = base_extremes.len();
        let mut orbit_reps = Vec::new();
        let mut extremes = Vec::new();
        for rep in multisets(k, n) {
            let perms = distinct_permutations(&rep);
            let mult = perms.len();
            let mut acc: Option<CMat> = None;
            for perm in &perms {
                let mut prod = base_extremes[perm[0]].matrix().clone();
                for &i in &perm[1..] {
                    prod = prod.kronecker(base_extremes[i].matrix());
                }
                acc = Some(match acc {
                    None => prod,
                    Some(a) => a + prod,
                });
            }
            let avg = HermitianOperator::from_computed(
                acc.expect("nonempty orbit") * Complex64::new(1.0 / mult as f64, 0.0),
            );
            orbit_reps.push((rep, mult));
            extremes.push(avg);
        }
        Ok(LiftedSet {
            base_extremes,
            base_dim,
            n_copies: n,
            orbit_reps,
            extremes,
        })
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn dim(&self) -> usize {
        self.base_dim.pow(self.n_copies as u32)
    }

    /// Symmetrized orbit extremes (the optimization variables).
    pub fn extremes(&self) -> &[HermitianOperator] {
        &self.extremes
    }

    pub fn orbit_reps(&self) -> &[(Vec<usize>, usize)] {
        &self.orbit_reps
    }

    /// Support function over the full product hull (all k^n product
    /// extremes), needed for non-symmetric inputs.
    pub fn support_function(&self, x: &HermitianOperator) -> Result<(f64, Vec<usize>)> {
        if x.dim() != self.dim() {
            return Err(Error::ShapeMismatch("lifted support input dim".into()));
        }
        let k = self.base_extremes.len();
        let total = k.pow(self.n_copies as u32);
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = vec![0usize; self.n_copies];
        let mut idx = vec![0usize; self.n_copies];
        for flat in 0..total {
            let mut rem = flat;
            for slot in (0..self.n_copies).rev() {
                idx[slot] = rem % k;
                rem /= k;
            }
            let mut prod = self.base_extremes[idx[0]].matrix().clone();
            for &i in &idx[1..] {
                prod = prod.kronecker(self.base_extremes[i].matrix());
            }
            let v = trace_product(&HermitianOperator::from_computed(prod), x);
            if v > best + 1e-15 {
                best = v;
                best_idx.copy_from_slice(&idx);
            }
        }
        Ok((best, best_idx))
    }

    /// Linear maximization over orbit extremes; coincides with the full hull
    /// for permutation-invariant `x`.
    pub fn orbit_linear_max(&self, x: &HermitianOperator) -> Result<SupportPoint> {
        linear_max_over(&self.extremes, x)
    }
}

/// Sorted multisets of size n over {0..k-1}.
fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(k, n, i, cur, out);
            cur.pop();
        }
    }
    rec(k, n, 0, &mut cur, &mut out);
    out
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Parses a row-major complex matrix encoded as [[[re,im], ...], ...].
pub fn matrix_from_json(v: &Value, path: &str) -> Result<HermitianOperator> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::validation(path, "expected array of rows"))?;
    let d = rows.len();
    if d == 0 {
        return Err(Error::validation(path, "empty matrix"));
    }
    let mut m = CMat::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .ok_or_else(|| Error::validation(format!("{path}[{i}]"), "expected array"))?;
        if cols.len() != d {
            return Err(Error::validation(
                format!("{path}[{i}]"),
                format!("expected {d} entries, got {}", cols.len()),
            ));
        }
        for (j, entry) in cols.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| {
                    Error::validation(format!("{path}[{i}][{j}]"), "expected [re, im]")
                })?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::validation(format!("{path}[{i}][{j}][0]"), "expected number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::validation(format!("{path}[{i}][{j}][1]"), "expected number"))?;
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    HermitianOperator::new(m).map_err(|e| match e {
        Error::NonHermitian { asymmetry, .. } => Error::validation(
            path,
            format!("matrix is not Hermitian (asymmetry {asymmetry:.3e})"),
        ),
        other => other,
    })
}

pub fn matrix_to_json(op: &HermitianOperator) -> Value {
    let d = op.dim();
    let rows: Vec<Value> = (0..d)
        .map(|i| {
            let cols: Vec<Value> = (0..d)
                .map(|j| {
                    let z = op.matrix()[(i, j)];
                    serde_json::json!([z.re, z.im])
                })
                .collect();
            Value::Array(cols)
        })
        .collect();
    Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::SystemShape;
    use crate::testkit::{random_psd, rng};

    #[test]
    fn av_qubit_extremes() {
        let set = ConvexSetSpec::av_qubit(0.4).unwrap();
        let ex = set.extreme_points().unwrap();
        assert_eq!(ex.len(), 2);
        assert!(ex[0]
            .distance_max(&HermitianOperator::from_real_diagonal(&[0.7, 0.3]))
            < 1e-14);
        assert!(ex[1].distance_max(DensityState::minus_state().op()) < 1e-14);
    }

    #[test]
    fn single_state_extremes() {
        let mut r = rng(101);
        let s = random_psd(&mut r, 3, true);
        let set = ConvexSetSpec::SingleState(s.clone());
        let ex = set.extreme_points().unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex[0].distance_max(&s) < 1e-15);
        let x = random_psd(&mut r, 3, false);
        let (h, idx) = set.support_function(&x).unwrap();
        assert_eq!(idx, 0);
        assert!((h - trace_product(&s, &x)).abs() < 1e-12);
    }

    #[test]
    fn av_support_function_example() {
        // h over AVQubit(0) at X = |+><+| is max(1/2, 0) = 1/2
        let set = ConvexSetSpec::av_qubit(0.0).unwrap();
        let x = DensityState::plus_state().op().clone();
        let (h, idx) = set.support_function(&x).unwrap();
        assert!((h - 0.5).abs() < 1e-12);
        assert_eq!(idx, 0);
    }

    fn point_in_polygon(poly: &[(f64, f64)], p: (f64, f64), tol: f64) -> bool {
        // poly in counterclockwise order
        let n = poly.len();
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross < -tol {
                return false;
            }
        }
        true
    }

    #[test]
    fn werner_rains_slice_vertices() {
        let set = ConvexSetSpec::WernerRainsSlice { d: 2 };
        let ex = set.extreme_points().unwrap();
        // analytic vertices (0,0), (1,0), (1/2,1/2), (0,1/2)
        assert_eq!(ex.len(), 4);
        let shape = SystemShape::new(vec![2, 2]);
        for e in &ex {
            e.require_psd().unwrap();
            let pt = e.partial_transpose(&shape, 1).unwrap();
            let n1: f64 = pt.eigenvalues().iter().map(|x| x.abs()).sum();
            assert!(n1 <= 1.0 + 1e-10, "vertex violates the Rains constraint");
        }
        // rejection sampling of the constraint region lands inside the hull
        let verts = [(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (0.0, 0.5)];
        let mut r = rng(103);
        let mut accepted = 0;
        while accepted < 10_000 {
            let a = 1.5 * r.uniform();
            let b = 1.5 * r.uniform();
            let n1 = (a + 3.0 * b + (a - b).abs()) / 2.0; // d=2 trace norm
            if n1 <= 1.0 {
                accepted += 1;
                assert!(
                    point_in_polygon(&verts, (a, b), 1e-9),
                    "feasible point ({a},{b}) outside vertex hull"
                );
            }
        }
    }

    #[test]
    fn mana_strange_slice_vertices() {
        let set = ConvexSetSpec::ManaStrangeSlice;
        let ex = set.extreme_points().unwrap();
        assert_eq!(ex.len(), 4);
        for e in &ex {
            e.require_psd().unwrap();
            assert!(wigner_trace_norm(e) <= 1.0 + 1e-10);
        }
        // expected coefficients: (0,0), (3/5,0), (1/2,1/2), (0,1)
        let s = DensityState::strange_projector();
        let scaled = s.scale(0.6);
        assert!(ex.iter().any(|e| e.distance_max(&scaled) < 1e-9));
        let m = HermitianOperator::identity(3).sub(&s).scale(0.5);
        assert!(ex.iter().any(|e| e.distance_max(&m) < 1e-9));
        // the maximally mixed state is a mixture of the vertices
        let mixed = HermitianOperator::identity(3).scale(1.0 / 3.0);
        let combo = HermitianOperator::linear_combination(&[
            (2.0 / 3.0, &ex[2]),
            (1.0 / 3.0, &ex[3]),
        ]);
        assert!(combo.distance_max(&mixed) < 1e-9);
    }

    #[test]
    fn strange_state_wigner_norm() {
        let s = DensityState::strange_projector();
        assert!((wigner_trace_norm(&s) - 5.0 / 3.0).abs() < 1e-12);
        let mixed = HermitianOperator::identity(3).scale(1.0 / 3.0);
        assert!((wigner_trace_norm(&mixed) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assumption2_full_rank_elements() {
        let plus = DensityState::plus_state();
        let av = ConvexSetSpec::av_qubit(0.4).unwrap();
        assert!(av.contains_support_of(&plus).unwrap());
        let werner_set = ConvexSetSpec::WernerRainsSlice { d: 2 };
        let w0 = DensityState::werner(0.0, 2).unwrap();
        assert!(werner_set.contains_support_of(&w0).unwrap());
        let mana = ConvexSetSpec::ManaStrangeSlice;
        let strange = DensityState::noisy_strange(0.9).unwrap();
        assert!(mana.contains_support_of(&strange).unwrap());
    }

    #[test]
    fn lift_counts() {
        let set = ConvexSetSpec::av_qubit(0.4).unwrap();
        let l2 = set.lift(2, 4096).unwrap();
        assert_eq!(l2.extremes().len(), 3);
        let l6 = set.lift(6, 4096).unwrap();
        assert_eq!(l6.extremes().len(), 7); // C(7,1)
        for e in l6.extremes() {
            e.require_psd().unwrap();
            assert_eq!(e.dim(), 64);
        }
    }

    #[test]
    fn lifted_extremes_are_permutation_invariant() {
        let set = ConvexSetSpec::av_qubit(0.3).unwrap();
        let l = set.lift(3, 4096).unwrap();
        let shape = SystemShape::new(vec![2, 2, 2]);
        for e in l.extremes() {
            for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]] {
                let p = e.permute_systems(&shape, &perm).unwrap();
                assert!(p.distance_max(e) < 1e-12);
            }
        }
    }

    #[test]
    fn support_function_multiplicative_on_products() {
        let mut r = rng(107);
        let set = ConvexSetSpec::av_qubit(0.4).unwrap();
        let lifted = set.lift(2, 4096).unwrap();
        for _ in 0..20 {
            let x = random_psd(&mut r, 2, false);
            let y = random_psd(&mut r, 2, false);
            let hx = set.support_function(&x).unwrap().0;
            let hy = set.support_function(&y).unwrap().0;
            let (hxy, _) = lifted.support_function(&kron(&x, &y)).unwrap();
            assert!(
                (hxy - hx * hy).abs() <= 1e-9 * (1.0 + (hx * hy).abs()),
                "{hxy} vs {}",
                hx * hy
            );
        }
    }

    #[test]
    fn product_marginal_linear_max() {
        let shape = SystemShape::new(vec![2, 2]);
        let set = ConvexSetSpec::ProductMarginal { shape: shape.clone() };
        assert!(set.extreme_points().is_err());
        let mut r = rng(109);
        let x = random_psd(&mut r, 4, false);
        let sp = set.linear_max(&x).unwrap();
        // value is λ_max(Tr_A X)/2 and the maximizer is feasible
        let reduced = x.partial_trace(&shape, 0).unwrap().scale(0.5);
        assert!((sp.value - reduced.max_eigenvalue()).abs() < 1e-10);
        assert!((sp.maximizer.trace() - 1.0).abs() < 1e-10);
        assert!((trace_product(&sp.maximizer, &x) - sp.value).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let mut r = rng(113);
        let specs = vec![
            ConvexSetSpec::av_qubit(0.4).unwrap(),
            ConvexSetSpec::WernerRainsSlice { d: 2 },
            ConvexSetSpec::ManaStrangeSlice,
            ConvexSetSpec::SingleState(random_psd(&mut r, 2, true)),
            ConvexSetSpec::FiniteHull(vec![
                random_psd(&mut r, 2, true),
                random_psd(&mut r, 2, true),
            ]),
        ];
        for spec in specs {
            let v = spec.to_json().unwrap();
            let back = ConvexSetSpec::from_json(&v).unwrap();
            let ea = spec.extreme_points().unwrap();
            let eb = back.extreme_points().unwrap();
            assert_eq!(ea.len(), eb.len());
            for (a, b) in ea.iter().zip(&eb) {
                assert!(a.distance_max(b) < 1e-12);
            }
        }
    }

    #[test]
    fn json_rejects_unknown_fields_and_bad_matrices() {
        let v: Value = serde_json::from_str(r#"{"type":"av_qubit","lambda":0.4,"extra":1}"#).unwrap();
        assert!(matches!(
            ConvexSetSpec::from_json(&v),
            Err(Error::Validation { .. })
        ));
        let v: Value =
            serde_json::from_str(r#"{"type":"single","state":[[[1.0,0.0],[0.5,0.0]],[[0.0,0.0],[0.0,0.0]]]}"#)
                .unwrap();
        let err = ConvexSetSpec::from_json(&v).unwrap_err();
        assert!(err.to_string().contains("set.state"), "{err}");
    }
}
