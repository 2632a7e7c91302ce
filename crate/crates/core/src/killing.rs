//! Killing generators.
//!
//! `A ∈ ℝⁿ` is a Killing generator of order `r` at `x` when
//! `𝒟ʳK(x) ⌞ A = 0`. The linear map `C^r_x : A ↦ 𝒟ʳK(x) ⌞ A` is assembled as a
//! dense matrix whose column `i` stacks the first-slot-`i` chunks of blocks
//! `1..=r` (curvature, then observables); `Killʳ(x)` is its null space.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frame::{derived_curvature, DerivedCurvature, FrameSpec};
use crate::numerics::{relative_deviation, Numerics};

/// Matrix of `C^r : A ↦ 𝒟ʳK ⌞ A` (rows = entries of blocks `1..=r`).
pub fn generator_map(d: &DerivedCurvature, r: usize) -> DMatrix<f64> {
    let n = d.dim();
    assert!(
        r >= 1 && r <= d.order(),
        "generator map order {r} outside 1..={}",
        d.order()
    );
    let blocks: Vec<&[f64]> = (1..=r)
        .map(|s| d.curvature_block(s))
        .chain((1..=r).map(|s| d.observable_block(s)))
        .collect();
    let rows: usize = blocks.iter().map(|b| b.len() / n).sum();
    let mut m = DMatrix::zeros(rows, n);
    for i in 0..n {
        let mut row = 0;
        for block in &blocks {
            let chunk = block.len() / n;
            for (offset, &v) in block[i * chunk..(i + 1) * chunk].iter().enumerate() {
                m[(row + offset, i)] = v;
            }
            row += chunk;
        }
    }
    m
}

/// `𝒟ʳK(x) ⌞ A`.
pub fn contract(d: &DerivedCurvature, a: &[f64]) -> Result<DerivedCurvature> {
    d.contract(a)
}

pub fn largest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Orthonormal basis (as columns) of the vectors `v` with `‖m v‖` at or below
/// `threshold` in the singular-value sense.
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    let mut basis = DMatrix::zeros(cols, kernel.len());
    for (c, &i) in kernel.iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

/// `Killʳ(x)` for `r = 1..=R` at one point.
#[derive(Debug, Clone)]
pub struct KillingFiltration {
    point: Vec<f64>,
    bases: Vec<DMatrix<f64>>,
    dims: Vec<usize>,
    stabilization: usize,
    curvature: DerivedCurvature,
}

impl KillingFiltration {
    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn max_order(&self) -> usize {
        self.dims.len()
    }

    /// `k_r(x)`.
    pub fn dim(&self, r: usize) -> usize {
        self.dims[r - 1]
    }

    /// `(k_1, …, k_R)`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Orthonormal basis of `Killʳ(x)` as columns (`n × k_r`).
    pub fn basis(&self, r: usize) -> &DMatrix<f64> {
        &self.bases[r - 1]
    }

    pub fn basis_vectors(&self, r: usize) -> Vec<Vec<f64>> {
        let b = self.basis(r);
        (0..b.ncols())
            .map(|c| b.column(c).iter().copied().collect())
            .collect()
    }

    /// Singer stabilization order `s₀ = min{r : k_r = k_{r+1}}`.
    pub fn stabilization_order(&self) -> usize {
        self.stabilization
    }

    /// The order-`R` derived curvature the filtration was computed from.
    pub fn curvature(&self) -> &DerivedCurvature {
        &self.curvature
    }

    pub fn generator_map(&self, r: usize) -> DMatrix<f64> {
        generator_map(&self.curvature, r)
    }

    /// `‖C^r_x(a)‖`.
    pub fn residual(&self, r: usize, a: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(a);
        (self.generator_map(r) * v).norm()
    }
}

/// Compute `Killʳ(x)`, `r = 1..=max_order`, by nested null spaces: `Kill^{r}`
/// is found inside the basis of `Kill^{r−1}`, so the nesting holds exactly.
pub fn killing_spaces(
    spec: &FrameSpec,
    x: &[f64],
    max_order: usize,
    numerics: &Numerics,
) -> Result<KillingFiltration> {
    if max_order == 0 {
        return Err(Error::PreconditionViolated(
            "maximum Killing order must be at least 1".into(),
        ));
    }
    let d = derived_curvature(spec, x, max_order)?;
    filtration_from_curvature(d, max_order, numerics)
}

pub(crate) fn filtration_from_curvature(
    d: DerivedCurvature,
    max_order: usize,
    numerics: &Numerics,
) -> Result<KillingFiltration> {
    let n = d.dim();
    let mut basis = DMatrix::<f64>::identity(n, n);
    let mut bases = Vec::with_capacity(max_order);
    let mut dims = Vec::with_capacity(max_order);
    for r in 1..=max_order {
        let c = generator_map(&d, r);
        if basis.ncols() > 0 {
            let threshold = numerics.rank_threshold(largest_singular_value(&c));
            let restricted = &c * &basis;
            let inner = null_space(&restricted, threshold);
            basis = &basis * inner;
        }
        dims.push(basis.ncols());
        bases.push(basis.clone());
    }
    let stabilization = (1..max_order).find(|&r| dims[r - 1] == dims[r]);
    let stabilization = stabilization.ok_or_else(|| Error::StabilizationNotFound {
        max_order,
        dims: dims.clone(),
    })?;
    Ok(KillingFiltration {
        point: d.point().to_vec(),
        bases,
        dims,
        stabilization,
        curvature: d,
    })
}

/// Outcome of sampling `k_1..k_{n+2}` around a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub point: Vec<f64>,
    pub in_domain: bool,
    /// `(k_1, …, k_{n+2})` at the centre.
    pub dims: Vec<usize>,
    pub radius: f64,
    pub probe_count: usize,
    /// Probe points whose dimensions disagreed with the centre.
    pub mismatches: Vec<(Vec<f64>, Vec<usize>)>,
}

/// Deterministic, roughly uniform unit vectors in `ℝⁿ`.
///
/// In the plane the angles are offset by half a step so that no probe is
/// horizontal and hence none lands on a neighbouring grid column.
pub fn probe_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    match n {
        1 => (0..count)
            .map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }])
            .collect(),
        2 => (0..count)
            .map(|i| {
                let angle = std::f64::consts::TAU * (i as f64 + 0.5) / count as f64;
                vec![angle.cos(), angle.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci sphere
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let theta = golden * i as f64;
                    vec![rho * theta.cos(), rho * theta.sin(), z]
                })
                .collect()
        }
        _ => {
            // Halton points mapped to the cube, then normalized.
            const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
            let radical_inverse = |mut i: u64, base: u64| {
                let mut f = 1.0;
                let mut r = 0.0;
                while i > 0 {
                    f /= base as f64;
                    r += f * (i % base) as f64;
                    i /= base;
                }
                r
            };
            (1..=count as u64)
                .map(|i| {
                    let v: Vec<f64> = (0..n)
                        .map(|d| {
                            2.0 * radical_inverse(
                                i,
                                PRIMES[d % PRIMES.len()] + 2 * (d / PRIMES.len()) as u64,
                            ) - 1.0
                        })
                        .collect();
                    let norm = crate::numerics::norm(&v).max(f64::MIN_POSITIVE);
                    v.into_iter().map(|c| c / norm).collect()
                })
                .collect()
        }
    }
}

/// Probe points on the shells of radius `ρ` and `ρ/2` around `x`.
pub fn probe_points(x: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    let dirs = probe_directions(x.len(), count);
    [radius, radius / 2.0]
        .iter()
        .flat_map(|&rho| {
            dirs.iter()
                .map(move |d| x.iter().zip(d).map(|(xi, di)| xi + rho * di).collect())
        })
        .collect()
}

/// Sampling test for "k_1, …, k_{n+2} are locally constant at x".
pub fn integrability_probe(
    spec: &FrameSpec,
    x: &[f64],
    radius: f64,
    count: usize,
    numerics: &Numerics,
) -> Result<ProbeResult> {
    let inside = x.len() == spec.dim()
        && x.iter()
            .zip(spec.domain())
            .all(|(v, (lo, hi))| *lo <= v - radius && v + radius <= *hi);
    if !inside {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    let order = spec.dim() + 2;
    let center = killing_spaces(spec, x, order, numerics)?;
    probe_around(spec, x, center.dims(), radius, count, numerics)
}

/// [`integrability_probe`] without the domain-box precondition, reusing the
/// centre dimensions the caller already has.
pub(crate) fn probe_around(
    spec: &FrameSpec,
    x: &[f64],
    center_dims: &[usize],
    radius: f64,
    count: usize,
    numerics: &Numerics,
) -> Result<ProbeResult> {
    let order = spec.dim() + 2;
    let mut mismatches = Vec::new();
    for p in probe_points(x, radius, count) {
        let f = killing_spaces(spec, &p, order, numerics)?;
        if f.dims() != center_dims {
            mismatches.push((p, f.dims().to_vec()));
        }
    }
    Ok(ProbeResult {
        point: x.to_vec(),
        in_domain: mismatches.is_empty(),
        dims: center_dims.to_vec(),
        radius,
        probe_count: count,
        mismatches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomogeneityVerdict {
    /// Both the constant-invariants and the full-rank tests pass.
    BothTests,
    ConstantInvariants,
    FullRankGenerators,
    NotHomogeneous,
}

impl HomogeneityVerdict {
    pub fn is_homogeneous(self) -> bool {
        self != HomogeneityVerdict::NotHomogeneous
    }

    pub fn describe(self) -> &'static str {
        match self {
            HomogeneityVerdict::BothTests => "locally homogeneous (both tests)",
            HomogeneityVerdict::ConstantInvariants => "locally homogeneous (constant invariants)",
            HomogeneityVerdict::FullRankGenerators => {
                "locally homogeneous (full-rank Killing generators)"
            }
            HomogeneityVerdict::NotHomogeneous => "not locally homogeneous on the sampled region",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    pub samples: Vec<Vec<f64>>,
    /// Derivative order `n + 1` used by the constancy test.
    pub order: usize,
    /// Largest per-component relative deviation of `𝒟^{n+1}K` from the first sample.
    pub max_deviation: f64,
    pub const_tol: f64,
    pub invariants_constant: bool,
    /// `k_{n+1}` at each sample.
    pub top_dims: Vec<usize>,
    pub generators_full_rank: bool,
    pub verdict: HomogeneityVerdict,
}

/// Local homogeneity over a set of sample points.
pub fn homogeneity_report(
    spec: &FrameSpec,
    samples: &[Vec<f64>],
    numerics: &Numerics,
) -> Result<HomogeneityReport> {
    let n = spec.dim();
    let filtrations = samples
        .iter()
        .map(|x| killing_spaces(spec, x, n + 2, numerics))
        .collect::<Result<Vec<_>>>()?;
    Ok(homogeneity_from_filtrations(n, &filtrations, numerics))
}

pub(crate) fn homogeneity_from_filtrations(
    n: usize,
    filtrations: &[KillingFiltration],
    numerics: &Numerics,
) -> HomogeneityReport {
    let order = n + 1;
    homogeneity_from_invariants(
        n,
        filtrations.iter().map(|f| f.point().to_vec()).collect(),
        &filtrations
            .iter()
            .map(|f| f.curvature().truncated(order).flatten())
            .collect::<Vec<_>>(),
        filtrations.iter().map(|f| f.dim(order)).collect(),
        numerics,
    )
}

/// Homogeneity from per-sample `𝒟^{n+1}K` (flattened) and `k_{n+1}`.
pub(crate) fn homogeneity_from_invariants(
    n: usize,
    samples: Vec<Vec<f64>>,
    invariants: &[Vec<f64>],
    top_dims: Vec<usize>,
    numerics: &Numerics,
) -> HomogeneityReport {
    let max_deviation = invariants
        .iter()
        .skip(1)
        .map(|v| relative_deviation(&invariants[0], v))
        .fold(0.0, f64::max);
    let invariants_constant = max_deviation <= numerics.const_tol;
    let generators_full_rank = !top_dims.is_empty() && top_dims.iter().all(|&k| k == n);
    let verdict = match (invariants_constant, generators_full_rank) {
        (true, true) => HomogeneityVerdict::BothTests,
        (true, false) => HomogeneityVerdict::ConstantInvariants,
        (false, true) => HomogeneityVerdict::FullRankGenerators,
        (false, false) => HomogeneityVerdict::NotHomogeneous,
    };
    HomogeneityReport {
        samples,
        order: n + 1,
        max_deviation,
        const_tol: numerics.const_tol,
        invariants_constant,
        top_dims,
        generators_full_rank,
        verdict,
    }
}
