//! Flows, transport of Killing generators and local Killing fields.
//!
//! Along an integral curve of `X = Σ ξ_i X_i` the frame components `u` of a
//! Killing field obey `du_k/dt = −Σ_ij ξ_i u_j γ_ij^k(x(t))`. All integration
//! is fixed-step classical RK4.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::{derived_curvature, structure_values, FrameSpec};
use crate::killing::{generator_map, killing_spaces, largest_singular_value, KillingFiltration};
use crate::numerics::{norm, Numerics};

/// Largest defect treated as identically zero by [`verify_curvature_ode`].
pub const VANISHING_DEFECT: f64 = 1e-10;
/// Accepted range of `defect(h) / defect(h/2)`.
pub const DEFECT_RATIO_RANGE: (f64, f64) = (3.5, 4.5);

fn rk4_step(state: &[f64], h: f64, f: &impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<Vec<f64>> {
    let shifted = |base: &[f64], k: &[f64], c: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, k)| b + c * k).collect()
    };
    let k1 = f(state)?;
    let k2 = f(&shifted(state, &k1, h / 2.0))?;
    let k3 = f(&shifted(state, &k2, h / 2.0))?;
    let k4 = f(&shifted(state, &k3, h))?;
    Ok((0..state.len())
        .map(|i| state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

fn check_len(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

fn step_count(t_end: f64, step: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::PreconditionViolated(format!(
            "need step > 0 and duration ≥ 0, got {step} and {t_end}"
        )));
    }
    Ok((t_end / step - 1e-9).ceil().max(0.0) as usize)
}

/// Right-hand side of the co-integrated system `(x, u)`.
fn transport_rhs(spec: &FrameSpec, xi: &[f64], state: &[f64]) -> Result<Vec<f64>> {
    let n = spec.dim();
    let (x, u) = state.split_at(n);
    let (f, gamma) = structure_values(spec, x)?;
    let mut out: Vec<f64> = (0..n)
        .map(|m| (0..n).map(|i| xi[i] * f[(i, m)]).sum())
        .collect();
    for k in 0..n {
        let mut du = 0.0;
        for (i, &a) in xi.iter().enumerate() {
            for (j, &b) in u.iter().enumerate() {
                du -= a * b * gamma[(i * n + j) * n + k];
            }
        }
        out.push(du);
    }
    Ok(out)
}

/// Sampled integral curve, optionally with a transported generator.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPath {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Frame components `u(t)`; empty for a bare flow.
    pub generators: Vec<Vec<f64>>,
    pub warnings: Vec<TransportWarning>,
}

impl TransportPath {
    pub fn end_point(&self) -> &[f64] {
        self.points.last().expect("paths hold the initial point")
    }

    pub fn end_generator(&self) -> &[f64] {
        self.generators
            .last()
            .expect("transport paths hold the initial generator")
    }
}

/// The transported generator left `Kill^{n+1}` by more than the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportWarning {
    pub t: f64,
    pub point: Vec<f64>,
    pub residual: f64,
    pub threshold: f64,
}

impl std::fmt::Display for TransportWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "generator residual {:.1e} exceeds {:.1e} at t = {} (x = {:?})",
            self.residual, self.threshold, self.t, self.point
        )
    }
}

fn integrate(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    u0: Option<&[f64]>,
    t_end: f64,
    step: f64,
) -> Result<TransportPath> {
    let n = spec.dim();
    check_len(n, x0)?;
    check_len(n, xi)?;
    if !spec.contains(x0) {
        return Err(Error::OutsideDomain { point: x0.to_vec() });
    }
    let steps = step_count(t_end, step)?;
    let h = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    let mut state: Vec<f64> = x0.to_vec();
    if let Some(u) = u0 {
        check_len(n, u)?;
        state.extend_from_slice(u);
    }
    let rhs = |s: &[f64]| -> Result<Vec<f64>> {
        if u0.is_some() {
            transport_rhs(spec, xi, s)
        } else {
            spec.frame_velocity(s, xi)
        }
    };
    let mut path = TransportPath {
        times: vec![0.0],
        points: vec![x0.to_vec()],
        generators: u0.map(|u| vec![u.to_vec()]).unwrap_or_default(),
        warnings: Vec::new(),
    };
    for s in 1..=steps {
        let t = s as f64 * h;
        state = rk4_step(&state, h, &rhs).map_err(|e| match e {
            Error::Eval { .. } | Error::Jet(_) | Error::DegenerateFrame { .. }
                if !spec.contains(&state[..n]) =>
            {
                Error::DomainExit {
                    t,
                    point: state[..n].to_vec(),
                }
            }
            other => other,
        })?;
        if !spec.contains(&state[..n]) {
            return Err(Error::DomainExit {
                t,
                point: state[..n].to_vec(),
            });
        }
        path.times.push(t);
        path.points.push(state[..n].to_vec());
        if u0.is_some() {
            path.generators.push(state[n..].to_vec());
        }
    }
    Ok(path)
}

/// Integral curve of `Σ ξ_i X_i` from `x0` for time `t_end`.
pub fn flow(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    t_end: f64,
    step: f64,
) -> Result<TransportPath> {
    integrate(spec, x0, xi, None, t_end, step)
}

/// `(residual, threshold)` for the first order `r ≤ n+1` at which `a` fails
/// to be a Killing generator, or `None` when it passes every order.
fn membership_violation(filtration: &KillingFiltration, a: &[f64], tol: f64) -> Option<(f64, f64)> {
    let scale = norm(a);
    (1..=filtration.curvature().dim() + 1).find_map(|r| {
        let c = filtration.generator_map(r);
        let residual = (&c * DVector::from_column_slice(a)).norm();
        let threshold = tol * scale * largest_singular_value(&c).max(1.0);
        (residual > threshold).then_some((residual, threshold))
    })
}

fn require_generator(spec: &FrameSpec, x0: &[f64], a: &[f64], numerics: &Numerics) -> Result<()> {
    let n = spec.dim();
    check_len(n, a)?;
    let filtration = killing_spaces(spec, x0, n + 2, numerics)?;
    if let Some((residual, _)) = membership_violation(&filtration, a, numerics.transport_tol) {
        return Err(Error::PreconditionViolated(format!(
            "generator not in Kill^{{n+1}}(x0): residual {residual:.1e}"
        )));
    }
    Ok(())
}

/// Transport the Killing generator `a ∈ Kill^{n+1}(x0)` along the integral
/// curve of `Σ ξ_i X_i`. Points where `u(t)` is not in `Kill^{n+1}`,
/// including `t = 0`, are reported as warnings (and logged), not errors.
pub fn transport_generator(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    a: &[f64],
    t_end: f64,
    numerics: &Numerics,
) -> Result<TransportPath> {
    let n = spec.dim();
    check_len(n, a)?;
    let mut path = integrate(spec, x0, xi, Some(a), t_end, numerics.ode_step)?;
    let stride = (path.times.len() / 100).max(1);
    for idx in (0..path.times.len()).step_by(stride) {
        let filtration = killing_spaces(spec, &path.points[idx], n + 2, numerics)?;
        if let Some((residual, threshold)) =
            membership_violation(&filtration, &path.generators[idx], numerics.transport_tol)
        {
            let warning = TransportWarning {
                t: path.times[idx],
                point: path.points[idx].clone(),
                residual,
                threshold,
            };
            log::warn!("{warning}");
            path.warnings.push(warning);
        }
    }
    Ok(path)
}

/// A vector field given through a chart `p ↦ (x(p), v(x(p)))`.
pub trait ChartedField {
    fn dim(&self) -> usize;
    /// Point and coordinate components of the field at chart parameter `p`.
    fn sample(&self, spec: &FrameSpec, p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)>;
}

/// A field given directly in coordinates; the chart is the identity.
pub struct CoordinateField<F> {
    dim: usize,
    field: F,
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> CoordinateField<F> {
    pub fn new(dim: usize, field: F) -> Self {
        CoordinateField { dim, field }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> ChartedField for CoordinateField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, _spec: &FrameSpec, p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((p.to_vec(), (self.field)(p)))
    }
}

/// The Killing field with frame components `a` at `x0`, reconstructed on
/// frame-exponential normal coordinates: the value at `exp_{x0}(Σ y_i X_i)`
/// is `a` transported along the ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialKillingField {
    pub origin: Vec<f64>,
    pub generator: Vec<f64>,
    pub ode_step: f64,
}

/// One reconstructed value of a Killing field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    /// Normal coordinates `y`.
    pub chart: Vec<f64>,
    pub point: Vec<f64>,
    /// Frame components.
    pub frame_components: Vec<f64>,
    /// Coordinate components.
    pub vector: Vec<f64>,
}

impl RadialKillingField {
    pub fn evaluate(&self, spec: &FrameSpec, y: &[f64]) -> Result<FieldSample> {
        let n = spec.dim();
        check_len(n, y)?;
        let len = norm(y);
        let path = if len == 0.0 {
            TransportPath {
                times: vec![0.0],
                points: vec![self.origin.clone()],
                generators: vec![self.generator.clone()],
                warnings: Vec::new(),
            }
        } else {
            // Unit-time ray with one RK4 step per `ode_step` of arc parameter.
            let steps = (len / self.ode_step).ceil().max(1.0);
            integrate(
                spec,
                &self.origin,
                y,
                Some(&self.generator),
                1.0,
                1.0 / steps,
            )?
        };
        let point = path.end_point().to_vec();
        let u = path.end_generator().to_vec();
        let vector = spec.frame_velocity(&point, &u)?;
        Ok(FieldSample {
            chart: y.to_vec(),
            point,
            frame_components: u,
            vector,
        })
    }

    /// Samples on the cubic lattice `spacing · {−w, …, w}ⁿ` of normal
    /// coordinates, in lexicographic order with the first axis slowest.
    pub fn lattice(
        &self,
        spec: &FrameSpec,
        spacing: f64,
        half_width: usize,
    ) -> Result<Vec<FieldSample>> {
        lattice_points(spec.dim(), spacing, half_width)
            .par_iter()
            .map(|y| self.evaluate(spec, y))
            .collect()
    }
}

impl ChartedField for RadialKillingField {
    fn dim(&self) -> usize {
        self.origin.len()
    }

    fn sample(&self, spec: &FrameSpec, p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let s = self.evaluate(spec, p)?;
        Ok((s.point, s.vector))
    }
}

pub fn lattice_points(n: usize, spacing: f64, half_width: usize) -> Vec<Vec<f64>> {
    let side = 2 * half_width + 1;
    (0..side.pow(n as u32))
        .map(|mut idx| {
            let mut y = vec![0.0; n];
            for axis in (0..n).rev() {
                y[axis] = (idx % side) as f64 * spacing - half_width as f64 * spacing;
                idx /= side;
            }
            y
        })
        .collect()
}

/// Build the Killing field generated by `a ∈ Kill^{n+1}(x0)`.
pub fn killing_field(
    spec: &FrameSpec,
    x0: &[f64],
    a: &[f64],
    numerics: &Numerics,
) -> Result<RadialKillingField> {
    require_generator(spec, x0, a, numerics)?;
    Ok(RadialKillingField {
        origin: x0.to_vec(),
        generator: a.to_vec(),
        ode_step: numerics.ode_step,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KillingCheck {
    /// Chart parameters checked.
    pub samples: Vec<Vec<f64>>,
    /// `max_i ‖[Â, X_i]‖` at each sample.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Point and vector at `p`, with their chart Jacobians.
type ChartJacobians = (Vec<f64>, Vec<f64>, DMatrix<f64>, DMatrix<f64>);

/// Fourth-order central difference of `f` along every axis of `p`.
fn chart_jacobians<F: ChartedField + ?Sized>(
    field: &F,
    spec: &FrameSpec,
    p: &[f64],
    h: f64,
) -> Result<ChartJacobians> {
    let n = p.len();
    let (x, v) = field.sample(spec, p)?;
    let mut dx = DMatrix::zeros(n, n);
    let mut dv = DMatrix::zeros(n, n);
    for axis in 0..n {
        let at = |offset: f64| {
            let mut q = p.to_vec();
            q[axis] += offset;
            field.sample(spec, &q)
        };
        let (xp1, vp1) = at(h)?;
        let (xm1, vm1) = at(-h)?;
        let (xp2, vp2) = at(2.0 * h)?;
        let (xm2, vm2) = at(-2.0 * h)?;
        for m in 0..n {
            dx[(m, axis)] = (8.0 * (xp1[m] - xm1[m]) - (xp2[m] - xm2[m])) / (12.0 * h);
            dv[(m, axis)] = (8.0 * (vp1[m] - vm1[m]) - (vp2[m] - vm2[m])) / (12.0 * h);
        }
    }
    Ok((x, v, dx, dv))
}

/// `max_i ‖[Â, X_i](x(p))‖` using finite differences in the chart.
pub fn killing_residual<F: ChartedField + ?Sized>(
    spec: &FrameSpec,
    field: &F,
    p: &[f64],
    fd_step: f64,
) -> Result<f64> {
    let n = spec.dim();
    check_len(n, p)?;
    let (x, v, dx, dv) = chart_jacobians(field, spec, p, fd_step)?;
    let inv = dx.clone().try_inverse().ok_or_else(|| {
        Error::PreconditionViolated(format!("chart is singular at parameter {p:?}"))
    })?;
    // ∂v^m/∂x^q
    let grad_v = dv * inv;
    let jets = spec.frame_jets(&x, 1)?;
    let mut unit = vec![0u32; n];
    let mut worst: f64 = 0.0;
    for row in &jets {
        let mut bracket = vec![0.0; n];
        for (m, entry) in row.iter().enumerate() {
            // (v·∇)F_i^m
            for q in 0..n {
                unit.iter_mut().for_each(|a| *a = 0);
                unit[q] = 1;
                bracket[m] += v[q] * entry.coeff(&unit);
            }
            // −(F_i·∇)v^m
            for (q, fq) in row.iter().enumerate() {
                bracket[m] -= fq.value() * grad_v[(m, q)];
            }
        }
        worst = worst.max(norm(&bracket));
    }
    Ok(worst)
}

/// Check `[Â, X_i] = 0` at the given chart parameters.
pub fn verify_killing<F: ChartedField + Sync + ?Sized>(
    spec: &FrameSpec,
    field: &F,
    samples: &[Vec<f64>],
    numerics: &Numerics,
) -> Result<KillingCheck> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples(
            "verify_killing needs at least one sample".into(),
        ));
    }
    let residuals = samples
        .par_iter()
        .map(|p| killing_residual(spec, field, p, numerics.fd_step))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(KillingCheck {
        samples: samples.to_vec(),
        residuals,
        max_residual,
        tolerance: numerics.killing_tol,
        passed: max_residual <= numerics.killing_tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    /// Order `s` of the residual `‖C^s_{x(t)}(u(t))‖`.
    pub order: usize,
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Transport `a` (member or not) along the curve of `Σ ξ_i X_i` and measure
/// how far `u(t)` is from `Kill^s(x(t))`. Requires `k_s = k_{s+1}` at every
/// sampled path point.
pub fn verify_transport_invariance(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    a: &[f64],
    t_end: f64,
    order: usize,
    numerics: &Numerics,
) -> Result<InvarianceCheck> {
    if order == 0 {
        return Err(Error::PreconditionViolated(
            "invariance order must be at least 1".into(),
        ));
    }
    let path = integrate(spec, x0, xi, Some(a), t_end, numerics.ode_step)?;
    let stride = (path.times.len() / 100).max(1);
    let indices: Vec<usize> = (0..path.times.len()).step_by(stride).collect();
    let residuals =
        indices
            .par_iter()
            .map(|&idx| {
                let filtration = killing_spaces(spec, &path.points[idx], order + 1, numerics)
                    .map_err(|e| match e {
                        // k_{s+1} < k_s still lets us read both dimensions off the
                        // raw maps; report it as the precondition failure below.
                        Error::StabilizationNotFound { .. } => Error::PreconditionViolated(
                            format!("k_{order} != k_{} at x = {:?}", order + 1, path.points[idx]),
                        ),
                        other => other,
                    })?;
                if filtration.dim(order) != filtration.dim(order + 1) {
                    return Err(Error::PreconditionViolated(format!(
                        "k_{order} != k_{} at x = {:?}",
                        order + 1,
                        path.points[idx]
                    )));
                }
                Ok(filtration.residual(order, &path.generators[idx]))
            })
            .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(InvarianceCheck {
        order,
        times: indices.iter().map(|&i| path.times[i]).collect(),
        residuals,
        max_residual,
        tolerance: numerics.transport_tol,
        passed: max_residual <= numerics.transport_tol,
    })
}

/// One sample of the differentiated-invariant identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectSample {
    pub order: usize,
    pub t: f64,
    pub defect_h: f64,
    pub defect_half: f64,
    /// `defect_h / defect_half`, `None` when `defect_h` vanishes.
    pub ratio: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOdeCheck {
    pub step: f64,
    pub samples: Vec<DefectSample>,
    pub passed: bool,
}

/// `W_r(u(t), ·)` and `W_{r+1}(u(t), ξ, ·)` along a path, at sample indices.
fn defects(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    a: &[f64],
    orders: &[usize],
    times: &[f64],
    h: f64,
) -> Result<Vec<Vec<f64>>> {
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let steps = (t_max / h).round() as usize + 1;
    let path = integrate(spec, x0, xi, Some(a), steps as f64 * h, h)?;
    let r_max = orders.iter().copied().max().unwrap_or(1);
    let contracted = |idx: usize| -> Result<_> {
        derived_curvature(spec, &path.points[idx], r_max + 1)?.contract(&path.generators[idx])
    };
    times
        .par_iter()
        .map(|&t| {
            let idx = (t / h).round() as usize;
            if idx == 0 {
                return Err(Error::PreconditionViolated(
                    "defect samples need t ≥ h".into(),
                ));
            }
            let plus = contracted(idx + 1)?;
            let minus = contracted(idx - 1)?;
            let here = contracted(idx)?;
            let along = here.contract(xi)?;
            orders
                .iter()
                .map(|&r| {
                    // After one contraction, W_r(u, ·) sits in block r−1.
                    let (p, m) = (plus.curvature_block(r - 1), minus.curvature_block(r - 1));
                    let (po, mo) = (plus.observable_block(r - 1), minus.observable_block(r - 1));
                    let target = along
                        .curvature_block(r - 1)
                        .iter()
                        .chain(along.observable_block(r - 1));
                    let fd = p
                        .iter()
                        .zip(m)
                        .chain(po.iter().zip(mo))
                        .map(|(a, b)| (a - b) / (2.0 * h));
                    let diff: Vec<f64> = fd.zip(target).map(|(d, w)| d - w).collect();
                    Ok(norm(&diff))
                })
                .collect()
        })
        .collect()
}

/// Check `d/dt W_r(A_t, ·) = W_{r+1}(A_t, X, ·)` along the curve of
/// `X = Σ ξ_i X_i` by central differences at steps `h` and `h/2`: the defect
/// must either vanish or shrink by a factor close to 4.
#[allow(clippy::too_many_arguments)]
pub fn verify_curvature_ode(
    spec: &FrameSpec,
    x0: &[f64],
    xi: &[f64],
    a: &[f64],
    orders: &[usize],
    duration: f64,
    sample_count: usize,
    h: f64,
) -> Result<CurvatureOdeCheck> {
    if sample_count == 0 || orders.is_empty() || orders.contains(&0) {
        return Err(Error::InsufficientSamples(
            "need at least one sample time and orders ≥ 1".into(),
        ));
    }
    check_len(spec.dim(), a)?;
    let times: Vec<f64> = (1..=sample_count)
        .map(|j| j as f64 * duration / sample_count as f64)
        .collect();
    let coarse = defects(spec, x0, xi, a, orders, &times, h)?;
    let fine = defects(spec, x0, xi, a, orders, &times, h / 2.0)?;
    let mut samples = Vec::new();
    for (ti, &t) in times.iter().enumerate() {
        for (oi, &order) in orders.iter().enumerate() {
            let (dh, dh2) = (coarse[ti][oi], fine[ti][oi]);
            let (ratio, passed) = if dh <= VANISHING_DEFECT {
                (None, dh2 <= VANISHING_DEFECT)
            } else {
                let ratio = dh / dh2;
                (
                    Some(ratio),
                    (DEFECT_RATIO_RANGE.0..=DEFECT_RATIO_RANGE.1).contains(&ratio),
                )
            };
            samples.push(DefectSample {
                order,
                t,
                defect_h: dh,
                defect_half: dh2,
                ratio,
                passed,
            });
        }
    }
    let passed = samples.iter().all(|s| s.passed);
    Ok(CurvatureOdeCheck {
        step: h,
        samples,
        passed,
    })
}

/// Write field samples as CSV with columns `x1..xn, u1..un, v1..vn`.
pub fn write_field_csv(path: &Path, samples: &[FieldSample]) -> Result<()> {
    let io = |e: csv::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let n = samples.first().map_or(0, |s| s.point.len());
    let header: Vec<String> = ["x", "u", "v"]
        .iter()
        .flat_map(|p| (1..=n).map(move |i| format!("{p}{i}")))
        .collect();
    w.write_record(&header).map_err(io)?;
    for s in samples {
        let row: Vec<String> = s
            .point
            .iter()
            .chain(&s.frame_components)
            .chain(&s.vector)
            .map(|v| format!("{v:.12e}"))
            .collect();
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(())
}

/// `‖C^r_x(a)‖` for every order up to `r_max`.
pub fn generator_residuals(
    spec: &FrameSpec,
    x: &[f64],
    a: &[f64],
    r_max: usize,
) -> Result<Vec<f64>> {
    let d = derived_curvature(spec, x, r_max)?;
    Ok((1..=r_max)
        .map(|r| (generator_map(&d, r) * DVector::from_column_slice(a)).norm())
        .collect())
}
