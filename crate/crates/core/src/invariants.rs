//! Self-consistency checks that hold for every frame.

use crate::error::{Error, Result};
use crate::frame::{derived_curvature, structure_functions, FrameSpec};
use crate::integrator::flow;
use crate::killing::{killing_spaces, KillingFiltration};
use crate::numerics::{norm, Numerics};

/// Tolerance of [`reconstruction_error`], relative.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Tolerance of [`jacobi_error`].
pub const JACOBI_TOL: f64 = 1e-8;
/// Step and relative tolerance of [`derivative_flow_error`].
pub const DERIVATIVE_FD_STEP: f64 = 1e-4;
pub const DERIVATIVE_FD_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl InvariantCheck {
    fn below(name: &str, value: f64, tolerance: f64) -> Self {
        InvariantCheck {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

/// `max_{i<j} ‖Σ_k γ_ij^k X_k − [X_i, X_j]‖ / max(‖[X_i, X_j]‖, 1)` at `x`.
pub fn reconstruction_error(spec: &FrameSpec, x: &[f64]) -> Result<f64> {
    let n = spec.dim();
    let st = structure_functions(spec, x, 0)?;
    let jets = spec.frame_jets(x, 1)?;
    let d = |i: usize, m: usize, p: usize| {
        let mut alpha = vec![0u32; n];
        alpha[p] = 1;
        jets[i][m].coeff(&alpha)
    };
    let f = st.frame();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let bracket: Vec<f64> = (0..n)
                .map(|m| {
                    (0..n)
                        .map(|p| f[(i, p)] * d(j, m, p) - f[(j, p)] * d(i, m, p))
                        .sum()
                })
                .collect();
            let diff: Vec<f64> = (0..n)
                .map(|m| (0..n).map(|k| st.gamma(i, j, k) * f[(k, m)]).sum::<f64>() - bracket[m])
                .collect();
            worst = worst.max(norm(&diff) / norm(&bracket).max(1.0));
        }
    }
    Ok(worst)
}

/// Largest violation of the Jacobi identity written in structure functions,
/// `Σ_cyc (X_i.γ_jl^p + Σ_k γ_jl^k γ_ik^p) = 0`, over all triples.
pub fn jacobi_error(spec: &FrameSpec, x: &[f64]) -> Result<f64> {
    let n = spec.dim();
    let st = structure_functions(spec, x, 1)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                for p in 0..n {
                    let mut total = 0.0;
                    for (a, b, c) in [(i, j, l), (j, l, i), (l, i, j)] {
                        total += st.frame_derivative(a, b, c, p).expect("order-1 jets");
                        total += (0..n)
                            .map(|k| st.gamma(b, c, k) * st.gamma(a, k, p))
                            .sum::<f64>();
                    }
                    worst = worst.max(total.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Largest relative gap between `W_{s+1}(e_i ⊗ ·)` and the central difference
/// of `W_s` along the flow of `X_i`, over `s ≤ r_max` and all `i`.
pub fn derivative_flow_error(spec: &FrameSpec, x: &[f64], r_max: usize, h: f64) -> Result<f64> {
    let n = spec.dim();
    let here = derived_curvature(spec, x, r_max + 1)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let plus = flow(spec, x, &e, h, h)?;
        e[i] = -1.0;
        let minus = flow(spec, x, &e, h, h)?;
        let dp = derived_curvature(spec, plus.end_point(), r_max)?;
        let dm = derived_curvature(spec, minus.end_point(), r_max)?;
        for s in 0..=r_max {
            for (next, p, m) in [
                (
                    here.curvature_block(s + 1),
                    dp.curvature_block(s),
                    dm.curvature_block(s),
                ),
                (
                    here.observable_block(s + 1),
                    dp.observable_block(s),
                    dm.observable_block(s),
                ),
            ] {
                let chunk = p.len();
                let exact = &next[i * chunk..(i + 1) * chunk];
                let diff: Vec<f64> = exact
                    .iter()
                    .zip(p.iter().zip(m))
                    .map(|(w, (a, b))| w - (a - b) / (2.0 * h))
                    .collect();
                worst = worst.max(norm(&diff) / norm(exact).max(1.0));
            }
        }
    }
    Ok(worst)
}

/// Exact integer checks on a filtration: monotone dimensions, nested
/// kernels and the stabilization bound `s₀ ≤ n + 1`.
pub fn filtration_checks(f: &KillingFiltration, numerics: &Numerics) -> Vec<InvariantCheck> {
    let n = f.curvature().dim();
    let monotone = f.dims().windows(2).all(|w| w[1] <= w[0]);
    let nesting = (2..=f.max_order())
        .flat_map(|r| f.basis_vectors(r).into_iter().map(move |a| (r, a)))
        .map(|(r, a)| {
            let scale = crate::killing::largest_singular_value(&f.generator_map(r - 1)).max(1.0);
            f.residual(r - 1, &a) / scale
        })
        .fold(0.0, f64::max);
    vec![
        InvariantCheck {
            name: "k_r non-increasing".into(),
            value: f64::from(u8::from(!monotone)),
            tolerance: 0.0,
            passed: monotone,
        },
        InvariantCheck::below("kernel nesting residual", nesting, numerics.rank_tol),
        InvariantCheck {
            name: "s0 <= n+1".into(),
            value: f.stabilization_order() as f64,
            tolerance: (n + 1) as f64,
            passed: f.stabilization_order() <= n + 1,
        },
    ]
}

/// All per-point suites at `x`, each reported as one row.
pub fn point_suite(
    spec: &FrameSpec,
    x: &[f64],
    numerics: &Numerics,
) -> Result<Vec<InvariantCheck>> {
    let n = spec.dim();
    let mut out = vec![InvariantCheck::below(
        "structure reconstruction",
        reconstruction_error(spec, x)?,
        RECONSTRUCTION_TOL,
    )];
    if n >= 3 {
        out.push(InvariantCheck::below(
            "Jacobi identity",
            jacobi_error(spec, x)?,
            JACOBI_TOL,
        ));
    }
    let r_max = spec.max_curvature_order().saturating_sub(1).min(n);
    match derivative_flow_error(spec, x, r_max, DERIVATIVE_FD_STEP) {
        Ok(e) => out.push(InvariantCheck::below(
            "derivative along flow",
            e,
            DERIVATIVE_FD_TOL,
        )),
        Err(Error::DomainExit { .. }) => {}
        Err(e) => return Err(e),
    }
    out.extend(filtration_checks(
        &killing_spaces(spec, x, n + 2, numerics)?,
        numerics,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_invariants() {
        let rows = vec![
            vec!["1", "0", "0"],
            vec!["0", "1", "x"],
            vec!["0", "0", "1"],
        ];
        let spec =
            FrameSpec::new(&["x", "y", "z"], &rows, &[] as &[&str], &[(-2.0, 2.0); 3]).unwrap();
        let checks = point_suite(&spec, &[0.3, -0.4, 0.5], &Numerics::default()).unwrap();
        assert_eq!(checks.len(), 6);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn quadratic_invariants() {
        let rows = vec![vec!["1", "0"], vec!["0", "1+x^2"]];
        let spec = FrameSpec::new(&["x", "y"], &rows, &["x*y"], &[(-2.0, 2.0); 2]).unwrap();
        let checks = point_suite(&spec, &[0.7, 0.2], &Numerics::default()).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
