//! Truncated multivariate Taylor series ("jets").
//!
//! A [`Jet`] of dimension `d` and order `R` stores the Taylor coefficients
//! `c_α = ∂^α f(x₀) / α!` for every multi-index `|α| ≤ R`, densely, in
//! graded-lexicographic order. Because the layout is graded, the first
//! `C(d + R', R')` coefficients of an order-`R` jet are exactly its order-`R'`
//! truncation.
//!
//! Layouts are shared through [`JetSpace`], which caches the index tables for
//! each `(dim, order)` pair.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jet shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("{func} is not analytic at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("cannot differentiate an order-0 jet")]
    OrderUnderflow,
    #[error("axis {axis} out of range for a {dim}-variable jet")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("{0} produced a non-finite coefficient")]
    NonFinite(&'static str),
}

/// Univariate analytic functions that can be composed with a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Analytic {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Atan,
    Recip,
}

impl Analytic {
    pub fn name(self) -> &'static str {
        match self {
            Analytic::Sin => "sin",
            Analytic::Cos => "cos",
            Analytic::Tan => "tan",
            Analytic::Exp => "exp",
            Analytic::Log => "log",
            Analytic::Sqrt => "sqrt",
            Analytic::Sinh => "sinh",
            Analytic::Cosh => "cosh",
            Analytic::Tanh => "tanh",
            Analytic::Atan => "atan",
            Analytic::Recip => "reciprocal",
        }
    }

    /// Plain scalar evaluation with the same domain rules as [`Jet::compose`].
    pub fn apply(self, c: f64) -> Result<f64, JetError> {
        let v = taylor_coefficients(self, c, 0)?[0];
        Ok(v)
    }
}

/// Taylor coefficients `g^(k)(c)/k!`, `k = 0..=order`, of `g` at `c`.
pub fn taylor_coefficients(g: Analytic, c: f64, order: usize) -> Result<Vec<f64>, JetError> {
    let domain = |value| JetError::Domain {
        func: g.name(),
        value,
    };
    let mut out = vec![0.0; order + 1];
    let mut inv_fact = 1.0;
    match g {
        Analytic::Exp => {
            let e = c.exp();
            for (k, slot) in out.iter_mut().enumerate() {
                if k > 0 {
                    inv_fact /= k as f64;
                }
                *slot = e * inv_fact;
            }
        }
        Analytic::Sin | Analytic::Cos => {
            let (s, co) = c.sin_cos();
            let cycle = if g == Analytic::Sin {
                [s, co, -s, -co]
            } else {
                [co, -s, -co, s]
            };
            for (k, slot) in out.iter_mut().enumerate() {
                if k > 0 {
                    inv_fact /= k as f64;
                }
                *slot = cycle[k % 4] * inv_fact;
            }
        }
        Analytic::Sinh | Analytic::Cosh => {
            let (sh, ch) = (c.sinh(), c.cosh());
            let cycle = if g == Analytic::Sinh {
                [sh, ch]
            } else {
                [ch, sh]
            };
            for (k, slot) in out.iter_mut().enumerate() {
                if k > 0 {
                    inv_fact /= k as f64;
                }
                *slot = cycle[k % 2] * inv_fact;
            }
        }
        Analytic::Log => {
            if c <= 0.0 {
                return Err(domain(c));
            }
            out[0] = c.ln();
            let mut pow = 1.0;
            for (k, slot) in out.iter_mut().enumerate().skip(1) {
                pow /= c;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                *slot = sign * pow / k as f64;
            }
        }
        Analytic::Recip => {
            if c == 0.0 {
                return Err(domain(c));
            }
            let mut term = 1.0 / c;
            for slot in out.iter_mut() {
                *slot = term;
                term *= -1.0 / c;
            }
        }
        Analytic::Sqrt => {
            if c <= 0.0 {
                return Err(domain(c));
            }
            let mut binom = 1.0;
            let mut term = c.sqrt();
            for (k, slot) in out.iter_mut().enumerate() {
                if k > 0 {
                    binom *= (0.5 - (k as f64 - 1.0)) / k as f64;
                    term /= c;
                }
                *slot = binom * term;
            }
        }
        Analytic::Tan | Analytic::Tanh => {
            // T' = 1 ± T²
            let sign = if g == Analytic::Tan { 1.0 } else { -1.0 };
            out[0] = if g == Analytic::Tan {
                c.tan()
            } else {
                c.tanh()
            };
            for k in 0..order {
                let conv: f64 = (0..=k).map(|j| out[j] * out[k - j]).sum();
                let delta = if k == 0 { 1.0 } else { 0.0 };
                out[k + 1] = (delta + sign * conv) / (k + 1) as f64;
            }
        }
        Analytic::Atan => {
            // atan' = 1 / (q0 + q1 h + h²)
            let q0 = 1.0 + c * c;
            let q1 = 2.0 * c;
            let mut d = vec![0.0; order];
            for k in 0..order {
                let mut acc = if k == 0 { 1.0 } else { 0.0 };
                if k >= 1 {
                    acc -= q1 * d[k - 1];
                }
                if k >= 2 {
                    acc -= d[k - 2];
                }
                d[k] = acc / q0;
            }
            out[0] = c.atan();
            for k in 0..order {
                out[k + 1] = d[k] / (k + 1) as f64;
            }
        }
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(JetError::NonFinite(g.name()));
    }
    Ok(out)
}

struct Layout {
    dim: usize,
    order: usize,
    indices: Vec<Vec<u32>>,
    /// `(i, j, k)` with `α_i + α_j = α_k`, `|α_k| ≤ order`.
    mul_table: Vec<(u32, u32, u32)>,
    /// Per axis: for each index of the order-(R−1) layout, the source index in
    /// this layout and the factor `α_axis + 1`.
    partials: Vec<Vec<(u32, f64)>>,
    lookup: HashMap<Vec<u32>, usize>,
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Multi-indices of total degree exactly `degree`, in lexicographically
/// descending order (first variable most significant).
fn indices_of_degree(dim: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == dim {
        prefix.push(degree);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        indices_of_degree(dim, degree - first, prefix, out);
        prefix.pop();
    }
}

impl Layout {
    fn build(dim: usize, order: usize) -> Layout {
        let mut indices = Vec::with_capacity(binomial(dim + order, order));
        if dim == 0 {
            indices.push(Vec::new());
        } else {
            for degree in 0..=order as u32 {
                indices_of_degree(dim, degree, &mut Vec::with_capacity(dim), &mut indices);
            }
        }
        let lookup: HashMap<Vec<u32>, usize> = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut mul_table = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            let deg_a: u32 = a.iter().sum();
            for (j, b) in indices.iter().enumerate() {
                let deg_b: u32 = b.iter().sum();
                if (deg_a + deg_b) as usize > order {
                    continue;
                }
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                mul_table.push((i as u32, j as u32, lookup[&sum] as u32));
            }
        }
        let mut partials = vec![Vec::new(); dim];
        if order > 0 {
            let lower = binomial(dim + order - 1, order - 1);
            for (axis, table) in partials.iter_mut().enumerate() {
                for alpha in &indices[..lower] {
                    let mut shifted = alpha.clone();
                    shifted[axis] += 1;
                    table.push((lookup[&shifted] as u32, f64::from(alpha[axis] + 1)));
                }
            }
        }
        Layout {
            dim,
            order,
            indices,
            mul_table,
            partials,
            lookup,
        }
    }
}

/// Shape descriptor `(dim, order)` of a family of jets.
#[derive(Clone)]
pub struct JetSpace {
    layout: Arc<Layout>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetSpace(dim={}, order={})", self.dim(), self.order())
    }
}

impl PartialEq for JetSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.layout, &other.layout)
            || (self.dim() == other.dim() && self.order() == other.order())
    }
}

type LayoutCache = HashMap<(usize, usize), Arc<Layout>>;

impl JetSpace {
    pub fn new(dim: usize, order: usize) -> JetSpace {
        static CACHE: OnceLock<Mutex<LayoutCache>> = OnceLock::new();
        thread_local! {
            static LOCAL: RefCell<LayoutCache> = RefCell::new(HashMap::new());
        }
        let layout = LOCAL.with(|local| {
            local
                .borrow_mut()
                .entry((dim, order))
                .or_insert_with(|| {
                    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
                    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
                    guard
                        .entry((dim, order))
                        .or_insert_with(|| Arc::new(Layout::build(dim, order)))
                        .clone()
                })
                .clone()
        });
        JetSpace { layout }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    /// Number of stored coefficients, `C(dim + order, order)`.
    pub fn len(&self) -> usize {
        self.layout.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.indices.is_empty()
    }

    pub fn multi_indices(&self) -> &[Vec<u32>] {
        &self.layout.indices
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.layout.lookup.get(alpha).copied()
    }

    pub fn lower(&self) -> Option<JetSpace> {
        (self.order() > 0).then(|| JetSpace::new(self.dim(), self.order() - 1))
    }
}

#[derive(Clone, PartialEq)]
pub struct Jet {
    space: JetSpace,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.space.dim())
            .field("order", &self.space.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Jet {
    pub fn zero(space: &JetSpace) -> Jet {
        Jet {
            space: space.clone(),
            coeffs: vec![0.0; space.len()],
        }
    }

    pub fn constant(space: &JetSpace, value: f64) -> Jet {
        let mut jet = Jet::zero(space);
        jet.coeffs[0] = value;
        jet
    }

    /// The coordinate function `x_axis` expanded at a point whose
    /// `axis`-th coordinate is `value`.
    pub fn variable(space: &JetSpace, axis: usize, value: f64) -> Result<Jet, JetError> {
        if axis >= space.dim() {
            return Err(JetError::AxisOutOfRange {
                axis,
                dim: space.dim(),
            });
        }
        let mut jet = Jet::constant(space, value);
        if space.order() > 0 {
            let mut alpha = vec![0; space.dim()];
            alpha[axis] = 1;
            let idx = space.index_of(&alpha).expect("degree-1 index present");
            jet.coeffs[idx] = 1.0;
        }
        Ok(jet)
    }

    pub fn from_coeffs(space: &JetSpace, coeffs: Vec<f64>) -> Result<Jet, JetError> {
        if coeffs.len() != space.len() {
            return Err(JetError::DimensionMismatch(
                space.dim(),
                space.order(),
                0,
                coeffs.len(),
            ));
        }
        Ok(Jet {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn order(&self) -> usize {
        self.space.order()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Constant term, i.e. the function value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient of `α`; zero for indices above the truncation order.
    pub fn coeff(&self, alpha: &[u32]) -> f64 {
        self.space.index_of(alpha).map_or(0.0, |i| self.coeffs[i])
    }

    fn check_shape(&self, other: &Jet) -> Result<(), JetError> {
        if self.space != other.space {
            return Err(JetError::DimensionMismatch(
                self.dim(),
                self.order(),
                other.dim(),
                other.order(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Jet {
            space: self.space.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Jet {
            space: self.space.clone(),
            coeffs,
        })
    }

    /// Truncated product: `c_γ = Σ_{α+β=γ} a_α b_β`.
    pub fn checked_mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_shape(other)?;
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for &(i, j, k) in &self.space.layout.mul_table {
            coeffs[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Ok(Jet {
            space: self.space.clone(),
            coeffs,
        })
    }

    /// `self += factor * other`, shapes assumed equal.
    pub fn add_scaled(&mut self, factor: f64, other: &Jet) -> Result<(), JetError> {
        self.check_shape(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `g(self)` by Horner evaluation of `g`'s univariate Taylor polynomial at
    /// the nilpotent part `self − value`.
    pub fn compose(&self, g: Analytic) -> Result<Jet, JetError> {
        let order = self.order();
        let taylor = taylor_coefficients(g, self.value(), order)?;
        let mut nilpotent = self.clone();
        nilpotent.coeffs[0] = 0.0;
        let mut acc = Jet::constant(&self.space, taylor[order]);
        for k in (0..order).rev() {
            acc = acc.checked_mul(&nilpotent)?;
            acc.coeffs[0] += taylor[k];
        }
        acc.ensure_finite(g.name())
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        self.compose(Analytic::Recip)
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_shape(other)?;
        self.checked_mul(&other.recip()?)?.ensure_finite("division")
    }

    /// Integer power by repeated squaring; negative exponents go through the
    /// reciprocal.
    pub fn powi(&self, exponent: i64) -> Result<Jet, JetError> {
        let mut result = Jet::constant(&self.space, 1.0);
        let mut base = if exponent < 0 {
            self.recip()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        result.ensure_finite("powi")
    }

    /// Jet of `∂f/∂x_axis`, one order lower.
    pub fn partial(&self, axis: usize) -> Result<Jet, JetError> {
        if axis >= self.dim() {
            return Err(JetError::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        let lower = self.space.lower().ok_or(JetError::OrderUnderflow)?;
        let coeffs = self.space.layout.partials[axis]
            .iter()
            .map(|&(src, factor)| factor * self.coeffs[src as usize])
            .collect();
        Ok(Jet {
            space: lower,
            coeffs,
        })
    }

    /// Drop every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let space = JetSpace::new(self.dim(), order);
        let coeffs = self.coeffs[..space.len()].to_vec();
        Jet { space, coeffs }
    }

    fn ensure_finite(self, op: &'static str) -> Result<Jet, JetError> {
        if self.coeffs.iter().all(|c| c.is_finite()) {
            Ok(self)
        } else {
            Err(JetError::NonFinite(op))
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.checked_add(rhs).expect("jet shapes must agree")
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.checked_sub(rhs).expect("jet shapes must agree")
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.checked_mul(rhs).expect("jet shapes must agree")
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
