//! Frames (absolute parallelisms), their structure functions and the curvature
//! map with its iterated frame derivatives.
//!
//! A frame is `n` vector fields `X_1..X_n` on a coordinate box, given by the
//! expression matrix `F` with `F[i][m]` the `m`-th coordinate component of
//! `X_i`. Brackets decompose as `[X_i, X_j] = Σ_k γ_ij^k X_k` and the curvature
//! is `K(e_i, e_j) = −(γ_ij^1, …, γ_ij^n)`.
//!
//! Derivative blocks follow the slot convention
//! `W_s(e_{i1} ⊗ … ⊗ e_{is}) = X_{i1}.(X_{i2}.( … (X_{is}.K)))`: the first
//! tensor slot is the outermost derivative. Block `s` is stored flat, indexed
//! `[(i1, …, is)][pair][k]` with the slot tuple in base-`n` positional order
//! (first slot most significant) and `pair` enumerating `i < j`
//! lexicographically.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::jet::{Jet, JetSpace};

/// `|det F| ≤ DEGENERACY_TOL · (max |F_ij|)^n` is treated as singular.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FrameSpec {
    coords: Vec<String>,
    frame: Vec<Vec<Expr>>,
    frame_sources: Vec<Vec<String>>,
    observables: Vec<Expr>,
    observable_sources: Vec<String>,
    domain: Vec<(f64, f64)>,
    max_order: usize,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FrameSpec {
    /// `frame[i]` holds the coordinate components of the `i`-th field.
    pub fn new<S: AsRef<str>>(
        coords: &[S],
        frame: &[Vec<S>],
        observables: &[S],
        domain: &[(f64, f64)],
    ) -> Result<FrameSpec> {
        let coords: Vec<String> = coords.iter().map(|c| c.as_ref().to_string()).collect();
        let n = coords.len();
        if n == 0 {
            return Err(Error::InvalidSpec(
                "at least one coordinate is required".into(),
            ));
        }
        for (i, c) in coords.iter().enumerate() {
            if !is_identifier(c) {
                return Err(Error::InvalidSpec(format!(
                    "`{c}` is not a valid coordinate name"
                )));
            }
            if expr::Func::from_name(c).is_some() {
                return Err(Error::InvalidSpec(format!(
                    "`{c}` is a reserved function name"
                )));
            }
            if coords[..i].contains(c) {
                return Err(Error::InvalidSpec(format!("duplicate coordinate `{c}`")));
            }
        }
        if frame.len() != n || frame.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpec(format!(
                "expected {n} rows of {n} entries"
            )));
        }
        if domain.len() != n {
            return Err(Error::InvalidSpec(format!(
                "expected {n} domain intervals, got {}",
                domain.len()
            )));
        }
        if let Some((lo, hi)) = domain
            .iter()
            .find(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
        {
            return Err(Error::InvalidSpec(format!(
                "empty or non-finite interval [{lo}, {hi}]"
            )));
        }
        let parse = |src: &str| {
            expr::parse(src, &coords).map_err(|error| Error::Parse {
                source_text: src.to_string(),
                error,
            })
        };
        let frame_sources: Vec<Vec<String>> = frame
            .iter()
            .map(|row| row.iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        let frame_exprs = frame_sources
            .iter()
            .map(|row| row.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let observable_sources: Vec<String> =
            observables.iter().map(|s| s.as_ref().to_string()).collect();
        let observable_exprs = observable_sources
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(FrameSpec {
            coords,
            frame: frame_exprs,
            frame_sources,
            observables: observable_exprs,
            observable_sources,
            domain: domain.to_vec(),
            max_order: n + 3,
        })
    }

    /// Set the jet budget: the highest derivative order taken of the frame
    /// expressions. Curvature derivatives are available up to `max_order − 1`.
    pub fn with_max_order(mut self, max_order: usize) -> Result<FrameSpec> {
        if max_order < 1 {
            return Err(Error::InvalidSpec("max_order must be at least 1".into()));
        }
        self.max_order = max_order;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn frame_sources(&self) -> &[Vec<String>] {
        &self.frame_sources
    }

    pub fn observable_sources(&self) -> &[String] {
        &self.observable_sources
    }

    pub fn observable_count(&self) -> usize {
        self.observables.len()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Highest curvature derivative order available under the jet budget.
    pub fn max_curvature_order(&self) -> usize {
        self.max_order - 1
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.domain)
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn eval_error(x: &[f64]) -> impl Fn(expr::EvalError) -> Error + '_ {
        move |error| Error::Eval {
            point: x.to_vec(),
            error,
        }
    }

    /// `F(x)`, row `i` = coordinate components of `X_i(x)`.
    pub fn frame_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let n = self.dim();
        let mut f = DMatrix::zeros(n, n);
        for (i, row) in self.frame.iter().enumerate() {
            for (m, e) in row.iter().enumerate() {
                f[(i, m)] = e.eval(x).map_err(Self::eval_error(x))?;
            }
        }
        Ok(f)
    }

    /// Coordinate velocity of the ω-constant field with frame components `a`.
    pub fn frame_velocity(&self, x: &[f64], a: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        let f = self.frame_matrix(x)?;
        Ok((0..self.dim())
            .map(|m| (0..self.dim()).map(|i| a[i] * f[(i, m)]).sum())
            .collect())
    }

    pub fn observable_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        self.observables
            .iter()
            .map(|e| e.eval(x).map_err(Self::eval_error(x)))
            .collect()
    }

    /// Jets of every frame entry at `x`, `[i][m]`.
    pub fn frame_jets(&self, x: &[f64], order: usize) -> Result<Vec<Vec<Jet>>> {
        self.check_point(x)?;
        let (space, vars) = coordinate_jets(x, order)?;
        self.frame
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.eval_jet_with(&space, &vars).map_err(Self::eval_error(x)))
                    .collect()
            })
            .collect()
    }

    pub fn observable_jets(&self, x: &[f64], order: usize) -> Result<Vec<Jet>> {
        self.check_point(x)?;
        let (space, vars) = coordinate_jets(x, order)?;
        self.observables
            .iter()
            .map(|e| e.eval_jet_with(&space, &vars).map_err(Self::eval_error(x)))
            .collect()
    }

    pub fn check_nondegenerate(&self, x: &[f64], f: &DMatrix<f64>) -> Result<()> {
        self.check_determinant(x, f.amax(), f.determinant())
    }

    fn check_determinant(&self, x: &[f64], scale: f64, det: f64) -> Result<()> {
        if scale == 0.0
            || !det.is_finite()
            || det.abs() <= DEGENERACY_TOL * scale.powi(self.dim() as i32)
        {
            return Err(Error::DegenerateFrame {
                point: x.to_vec(),
                det,
            });
        }
        Ok(())
    }
}

fn coordinate_jets(x: &[f64], order: usize) -> Result<(JetSpace, Vec<Jet>)> {
    let space = JetSpace::new(x.len(), order);
    let vars = x
        .iter()
        .enumerate()
        .map(|(i, &v)| Jet::variable(&space, i, v))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((space, vars))
}

/// Number of pairs `i < j`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j`, in lexicographic enumeration.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// The pairs `i < j` in storage order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Structure functions `γ_ij^k` at a point, optionally with their jets.
#[derive(Debug, Clone)]
pub struct StructureTensor {
    point: Vec<f64>,
    n: usize,
    frame: DMatrix<f64>,
    values: Vec<f64>,
    jets: Vec<Jet>,
}

impl StructureTensor {
    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn jet_order(&self) -> usize {
        self.jets[0].order()
    }

    /// `γ_ij^k(x)`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[(i * self.n + j) * self.n + k]
    }

    pub fn gamma_jet(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.jets[(i * self.n + j) * self.n + k]
    }

    /// `F(x)`, row `i` = coordinate components of `X_i(x)`.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// `(X_dir . γ_ij^k)(x)`; needs jets of order ≥ 1.
    pub fn frame_derivative(&self, dir: usize, i: usize, j: usize, k: usize) -> Option<f64> {
        let jet = self.gamma_jet(i, j, k);
        if jet.order() == 0 {
            return None;
        }
        let mut alpha = vec![0u32; self.n];
        Some(
            (0..self.n)
                .map(|m| {
                    alpha.iter_mut().for_each(|a| *a = 0);
                    alpha[m] = 1;
                    self.frame[(dir, m)] * jet.coeff(&alpha)
                })
                .sum(),
        )
    }
}

struct FrameExpansion {
    /// Frame jets truncated to the structure-function order.
    frame: Vec<Vec<Jet>>,
    frame_value: DMatrix<f64>,
    /// `γ_ij^k` jets at `(i * n + j) * n + k`.
    gamma: Vec<Jet>,
}

fn expand(spec: &FrameSpec, x: &[f64], order: usize) -> Result<FrameExpansion> {
    let n = spec.dim();
    let fj = spec.frame_jets(x, order + 1)?;
    let frame_value = DMatrix::from_fn(n, n, |i, m| fj[i][m].value());
    spec.check_nondegenerate(x, &frame_value)?;

    let partials: Vec<Vec<Vec<Jet>>> = fj
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| (0..n).map(|p| e.partial(p)).collect())
                .collect()
        })
        .collect::<std::result::Result<_, _>>()?;
    let ft: Vec<Vec<Jet>> = fj
        .iter()
        .map(|row| row.iter().map(|e| e.truncate(order)).collect())
        .collect();
    let space = ft[0][0].space().clone();

    // M[m][k] = F_k^m, so that Σ_k M[m][k] γ^k = bracket^m.
    let inverse = invert_jet_matrix(&frame_value.transpose(), |m, k| ft[k][m].clone(), &space)?;

    let mut gamma = vec![Jet::zero(&space); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let bracket: Vec<Jet> = (0..n)
                .map(|m| {
                    let mut acc = Jet::zero(&space);
                    for p in 0..n {
                        acc = &acc + &(&ft[i][p] * &partials[j][m][p]);
                        acc = &acc - &(&ft[j][p] * &partials[i][m][p]);
                    }
                    acc
                })
                .collect();
            for k in 0..n {
                let mut g = Jet::zero(&space);
                for (m, b) in bracket.iter().enumerate() {
                    g = &g + &(&inverse[k][m] * b);
                }
                gamma[(j * n + i) * n + k] = -&g;
                gamma[(i * n + j) * n + k] = g;
            }
        }
    }
    Ok(FrameExpansion {
        frame: ft,
        frame_value,
        gamma,
    })
}

/// Inverse of a jet-valued matrix `M = M0 + N` (`N` nilpotent) as
/// `Σ_t (−M0⁻¹ N)^t M0⁻¹`; the series terminates at the truncation order.
fn invert_jet_matrix(
    constant: &DMatrix<f64>,
    entry: impl Fn(usize, usize) -> Jet,
    space: &JetSpace,
) -> Result<Vec<Vec<Jet>>> {
    let n = constant.nrows();
    let inv0 = constant
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateFrame {
            point: vec![],
            det: constant.determinant(),
        })?;
    let nilpotent: Vec<Vec<Jet>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut e = entry(r, c);
                    let mut coeffs = e.coeffs().to_vec();
                    coeffs[0] = 0.0;
                    e = Jet::from_coeffs(space, coeffs).expect("same space");
                    e
                })
                .collect()
        })
        .collect();
    // step = −M0⁻¹ N
    let step: Vec<Vec<Jet>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut acc = Jet::zero(space);
                    for t in 0..n {
                        acc.add_scaled(-inv0[(r, t)], &nilpotent[t][c])
                            .expect("same space");
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut term: Vec<Vec<Jet>> = (0..n)
        .map(|r| (0..n).map(|c| Jet::constant(space, inv0[(r, c)])).collect())
        .collect();
    let mut sum = term.clone();
    for _ in 0..space.order() {
        term = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let mut acc = Jet::zero(space);
                        for t in 0..n {
                            acc = &acc + &(&step[r][t] * &term[t][c]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        for r in 0..n {
            for c in 0..n {
                sum[r][c] = &sum[r][c] + &term[r][c];
            }
        }
    }
    Ok(sum)
}

/// `F(x)` and the values `γ_ij^k(x)` (indexed `(i * n + j) * n + k`), using
/// first-order jets only.
pub fn structure_values(spec: &FrameSpec, x: &[f64]) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let n = spec.dim();
    let fj = spec.frame_jets(x, 1)?;
    let f = DMatrix::from_fn(n, n, |i, m| fj[i][m].value());
    let lu = f.transpose().lu();
    let det = lu.determinant();
    spec.check_determinant(x, f.amax(), det)?;
    let first: Vec<usize> = (0..n)
        .map(|p| {
            let mut alpha = vec![0u32; n];
            alpha[p] = 1;
            fj[0][0].space().index_of(&alpha).expect("order-1 jets")
        })
        .collect();
    let mut d = vec![0.0; n * n * n];
    for i in 0..n {
        for m in 0..n {
            let c = fj[i][m].coeffs();
            for (p, &idx) in first.iter().enumerate() {
                d[(i * n + m) * n + p] = c[idx];
            }
        }
    }
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let bracket = nalgebra::DVector::from_fn(n, |m, _| {
                (0..n)
                    .map(|p| {
                        f[(i, p)] * d[(j * n + m) * n + p] - f[(j, p)] * d[(i * n + m) * n + p]
                    })
                    .sum()
            });
            let g = lu.solve(&bracket).ok_or_else(|| Error::DegenerateFrame {
                point: x.to_vec(),
                det,
            })?;
            for k in 0..n {
                gamma[(i * n + j) * n + k] = g[k];
                gamma[(j * n + i) * n + k] = -g[k];
            }
        }
    }
    Ok((f, gamma))
}

/// Structure functions at `x` with jets of order `jet_order`.
pub fn structure_functions(
    spec: &FrameSpec,
    x: &[f64],
    jet_order: usize,
) -> Result<StructureTensor> {
    if jet_order + 1 > spec.max_order() {
        return Err(Error::OrderOverflow {
            requested: jet_order + 1,
            max: spec.max_order(),
        });
    }
    let exp = expand(spec, x, jet_order)?;
    let values = exp.gamma.iter().map(Jet::value).collect();
    Ok(StructureTensor {
        point: x.to_vec(),
        n: spec.dim(),
        frame: exp.frame_value,
        values,
        jets: exp.gamma,
    })
}

/// The tuple `(W_0, …, W_r)` of the curvature and its frame derivatives at a
/// point, plus the matching observable blocks `(Φ_0, …, Φ_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedCurvature {
    point: Vec<f64>,
    n: usize,
    /// Degree of block 0; `1` after one contraction, and so on.
    base_degree: usize,
    curvature: Vec<Vec<f64>>,
    observables: Vec<Vec<f64>>,
    observable_count: usize,
}

impl DerivedCurvature {
    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Highest block index `r`.
    pub fn order(&self) -> usize {
        self.curvature.len() - 1
    }

    pub fn observable_count(&self) -> usize {
        self.observable_count
    }

    /// Values per slot tuple in a curvature block (`pairs × n`).
    pub fn curvature_width(&self) -> usize {
        pair_count(self.n) * self.n
    }

    pub fn curvature_block(&self, s: usize) -> &[f64] {
        &self.curvature[s]
    }

    pub fn observable_block(&self, s: usize) -> &[f64] {
        &self.observables[s]
    }

    /// `W_s(e_{slots[0]} ⊗ …)` evaluated on `(e_i, e_j)`, component `k`.
    /// Only meaningful before any contraction.
    pub fn curvature_entry(&self, slots: &[usize], i: usize, j: usize, k: usize) -> f64 {
        let s = slots.len();
        let tuple = slots.iter().fold(0, |acc, &v| acc * self.n + v);
        let (sign, a, b) = if i < j { (1.0, i, j) } else { (-1.0, j, i) };
        if a == b {
            return 0.0;
        }
        sign * self.curvature[s]
            [(tuple * pair_count(self.n) + pair_index(a, b, self.n)) * self.n + k]
    }

    pub fn observable_entry(&self, slots: &[usize], obs: usize) -> f64 {
        let tuple = slots.iter().fold(0, |acc, &v| acc * self.n + v);
        self.observables[slots.len()][tuple * self.observable_count + obs]
    }

    /// All blocks, curvature first, then observables.
    pub fn flatten(&self) -> Vec<f64> {
        self.curvature
            .iter()
            .chain(&self.observables)
            .flatten()
            .copied()
            .collect()
    }

    /// Keep only blocks `0..=order`.
    pub fn truncated(&self, order: usize) -> DerivedCurvature {
        let keep = order.min(self.order()) + 1;
        DerivedCurvature {
            curvature: self.curvature[..keep].to_vec(),
            observables: self.observables[..keep].to_vec(),
            ..self.clone()
        }
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// First-slot contraction `(W_0, …, W_r) ⌞ A = (W_1 ⌞ A, …, W_r ⌞ A)`
    /// with `(W ⌞ A)(ξ) = W(A ⊗ ξ)`; observable blocks alike.
    pub fn contract(&self, a: &[f64]) -> Result<DerivedCurvature> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        if self.order() == 0 {
            return Err(Error::PreconditionViolated(
                "cannot contract an order-0 tuple".into(),
            ));
        }
        let contract_blocks = |blocks: &[Vec<f64>]| -> Vec<Vec<f64>> {
            blocks[1..]
                .iter()
                .map(|block| {
                    let chunk = block.len() / self.n;
                    let mut out = vec![0.0; chunk];
                    for (i, &ai) in a.iter().enumerate() {
                        if ai == 0.0 {
                            continue;
                        }
                        for (o, w) in out.iter_mut().zip(&block[i * chunk..(i + 1) * chunk]) {
                            *o += ai * w;
                        }
                    }
                    out
                })
                .collect()
        };
        Ok(DerivedCurvature {
            point: self.point.clone(),
            n: self.n,
            base_degree: self.base_degree + 1,
            curvature: contract_blocks(&self.curvature),
            observables: contract_blocks(&self.observables),
            observable_count: self.observable_count,
        })
    }
}

/// Iterated frame derivatives of jet-valued fields.
///
/// `base` holds `width` jets of order `r`; block `s` of the result has
/// `n^s · width` values laid out `[(i1, …, is)][entry]`.
fn frame_derivative_blocks(
    base: Vec<Jet>,
    frame: &[Vec<Jet>],
    width: usize,
    r: usize,
) -> Result<Vec<Vec<f64>>> {
    let n = frame.len();
    let mut blocks = Vec::with_capacity(r + 1);
    blocks.push(base.iter().map(Jet::value).collect());
    let mut level = base;
    for s in 1..=r {
        let order = r - s;
        let f: Vec<Vec<Jet>> = frame
            .iter()
            .map(|row| row.iter().map(|e| e.truncate(order)).collect())
            .collect();
        let space = JetSpace::new(n, order);
        let inner = n.pow(s as u32 - 1);
        let mut next = vec![Jet::zero(&space); n * inner * width];
        for rest in 0..inner {
            for e in 0..width {
                let g = &level[rest * width + e];
                let dg: Vec<Jet> = (0..n)
                    .map(|m| g.partial(m))
                    .collect::<std::result::Result<_, _>>()?;
                for (i1, row) in f.iter().enumerate() {
                    let mut acc = Jet::zero(&space);
                    for (fm, dm) in row.iter().zip(&dg) {
                        acc = &acc + &(fm * dm);
                    }
                    next[(i1 * inner + rest) * width + e] = acc;
                }
            }
        }
        blocks.push(next.iter().map(Jet::value).collect());
        level = next;
    }
    Ok(blocks)
}

/// `𝒟^r K` (and `𝒟^r φ`) at `x`.
pub fn derived_curvature(spec: &FrameSpec, x: &[f64], r: usize) -> Result<DerivedCurvature> {
    if r > spec.max_curvature_order() {
        return Err(Error::OrderOverflow {
            requested: r,
            max: spec.max_curvature_order(),
        });
    }
    let n = spec.dim();
    let exp = expand(spec, x, r)?;
    let base: Vec<Jet> = pairs(n)
        .into_iter()
        .flat_map(|(i, j)| (0..n).map(move |k| (i, j, k)))
        .map(|(i, j, k)| -&exp.gamma[(i * n + j) * n + k])
        .collect();
    let curvature = frame_derivative_blocks(base, &exp.frame, pair_count(n) * n, r)?;
    let obs = spec.observable_jets(x, r)?;
    let observables = frame_derivative_blocks(obs, &exp.frame, spec.observable_count(), r)?;
    Ok(DerivedCurvature {
        point: x.to_vec(),
        n,
        base_degree: 0,
        curvature,
        observables,
        observable_count: spec.observable_count(),
    })
}

/// `K(x)`, the order-0 tuple.
pub fn curvature(spec: &FrameSpec, x: &[f64]) -> Result<DerivedCurvature> {
    derived_curvature(spec, x, 0)
}
