#![allow(dead_code)]

use parsym_core::FrameSpec;
use proptest::prelude::*;

pub mod random_frame;

pub const COORDS: [&str; 3] = ["x", "y", "z"];

pub fn frame(rows: &[&[&str]], phi: &[&str], half_width: f64) -> FrameSpec {
    let n = rows.len();
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    FrameSpec::new(
        &COORDS[..n],
        &rows,
        phi,
        &vec![(-half_width, half_width); n],
    )
    .unwrap()
}

pub fn flat(n: usize) -> FrameSpec {
    let rows: Vec<Vec<&str>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }).collect())
        .collect();
    let refs: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
    frame(&refs, &[], 3.0)
}

pub fn affine() -> FrameSpec {
    frame(&[&["1", "0"], &["0", "exp(x)"]], &[], 3.0)
}

pub fn quadratic() -> FrameSpec {
    frame(&[&["1", "0"], &["0", "1+x^2"]], &[], 3.0)
}

pub fn heisenberg() -> FrameSpec {
    frame(
        &[&["1", "0", "0"], &["0", "1", "x"], &["0", "0", "1"]],
        &[],
        3.0,
    )
}

/// A non-homogeneous 3D frame with everything coupled.
pub fn twisted() -> FrameSpec {
    frame(
        &[
            &["1", "0", "0.3*sin(y)"],
            &["0.2*z", "1+x^2/4", "0"],
            &["0", "0.1*cos(x)", "exp(y/3)"],
        ],
        &[],
        1.5,
    )
}

/// Random smooth expressions in the first `dim` coordinates, bounded on
/// `[-1, 1]^dim` and free of domain restrictions.
pub fn expression(dim: usize) -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0..dim).prop_map(|i| COORDS[i].to_string()),
        (-30i32..30).prop_map(|c| format!("{}", c as f64 / 10.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (1 + ({b})^2)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("atan({a})")),
            inner.clone().prop_map(|a| format!("tanh({a})")),
            inner.clone().prop_map(|a| format!("exp(tanh({a}))")),
            inner.clone().prop_map(|a| format!("log(2 + sin({a}))")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("({a})^3")),
        ]
    })
}

pub fn point(dim: usize, half_width: f64) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-half_width..half_width, dim)
}

pub fn coords(dim: usize) -> Vec<String> {
    COORDS[..dim].iter().map(|s| s.to_string()).collect()
}

/// Sixth-order central stencils for derivatives of order 0..=3, as
/// `(offset, weight)` in units of the step.
fn stencil(order: u32) -> &'static [(i32, f64)] {
    const D0: [(i32, f64); 1] = [(0, 1.0)];
    const D1: [(i32, f64); 6] = [
        (-3, -1.0 / 60.0),
        (-2, 3.0 / 20.0),
        (-1, -0.75),
        (1, 0.75),
        (2, -3.0 / 20.0),
        (3, 1.0 / 60.0),
    ];
    const D2: [(i32, f64); 7] = [
        (-3, 1.0 / 90.0),
        (-2, -3.0 / 20.0),
        (-1, 1.5),
        (0, -49.0 / 18.0),
        (1, 1.5),
        (2, -3.0 / 20.0),
        (3, 1.0 / 90.0),
    ];
    const D3: [(i32, f64); 8] = [
        (-4, -7.0 / 240.0),
        (-3, 0.3),
        (-2, -169.0 / 120.0),
        (-1, 61.0 / 30.0),
        (1, -61.0 / 30.0),
        (2, 169.0 / 120.0),
        (3, -0.3),
        (4, 7.0 / 240.0),
    ];
    match order {
        0 => &D0,
        1 => &D1,
        2 => &D2,
        3 => &D3,
        _ => panic!("stencils cover orders up to 3"),
    }
}

/// Finite-difference estimate of the Taylor coefficient `∂^α f(x) / α!`.
pub fn fd_taylor(f: &impl Fn(&[f64]) -> f64, x: &[f64], alpha: &[u32], h: f64) -> f64 {
    fn rec(
        f: &impl Fn(&[f64]) -> f64,
        p: &mut Vec<f64>,
        alpha: &[u32],
        axis: usize,
        h: f64,
    ) -> f64 {
        if axis == alpha.len() {
            return f(p);
        }
        let base = p[axis];
        let mut total = 0.0;
        for &(offset, w) in stencil(alpha[axis]) {
            p[axis] = base + offset as f64 * h;
            total += w * rec(f, p, alpha, axis + 1, h);
        }
        p[axis] = base;
        total
    }
    let order: u32 = alpha.iter().sum();
    let factorial: f64 = alpha
        .iter()
        .map(|&a| (1..=a).product::<u32>() as f64)
        .product();
    rec(f, &mut x.to_vec(), alpha, 0, h) / (h.powi(order as i32) * factorial)
}

/// Local length scale of a function from its Taylor coefficients:
/// `min_k (max(|c_0|, 1) / ‖c_k‖)^{1/k}`, capped at 1.
pub fn length_scale(coeffs: &[f64], multi_indices: &[Vec<u32>]) -> f64 {
    let base = coeffs[0].abs().max(1.0);
    let max_order = multi_indices
        .iter()
        .map(|a| a.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    (1..=max_order)
        .map(|k| {
            let size = coeffs
                .iter()
                .zip(multi_indices)
                .filter(|(_, a)| a.iter().sum::<u32>() == k)
                .map(|(c, _)| c.abs())
                .fold(0.0, f64::max);
            if size == 0.0 {
                1.0
            } else {
                (base / size).powf(1.0 / k as f64)
            }
        })
        .fold(1.0, f64::min)
}
