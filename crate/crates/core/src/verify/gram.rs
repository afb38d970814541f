//! Gram matrices of factor and product bases in four inner products.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::BcKind;
use crate::error::{Error, Result};
use crate::factor::FactorBasis;
use crate::math;
use crate::product::{EnergyForm, ProductBasis};
use crate::verify::quadrature::{default_order, QuadratureRule};
use crate::verify::FactorTable;

/// Inner products on `H¹`; boundary weights come from the basis itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InnerProductKind {
    /// `∫uv`.
    L2,
    /// `∫∇u·∇v + ∫uv`.
    H1Full,
    /// `∫∇u·∇v`.
    GradOnly,
    /// `∫∇u·∇v + ∫_∂ b u v dσ`.
    BWeighted,
}

impl InnerProductKind {
    pub fn name(&self) -> &'static str {
        match self {
            InnerProductKind::L2 => "l2",
            InnerProductKind::H1Full => "h1",
            InnerProductKind::GradOnly => "grad",
            InnerProductKind::BWeighted => "b",
        }
    }
}

/// A Gram matrix and its max-norm distance from the identity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GramReport {
    pub order: usize,
    /// Row-major `order x order`.
    pub matrix: Vec<f64>,
    pub deviation: f64,
    /// Entry attaining `deviation`.
    pub worst: (usize, usize),
}

impl GramReport {
    fn from_matrix(order: usize, matrix: Vec<f64>) -> Self {
        let mut deviation = 0.0;
        let mut worst = (0, 0);
        for i in 0..order {
            for j in 0..order {
                let target = if i == j { 1.0 } else { 0.0 };
                let d = (matrix[i * order + j] - target).abs();
                if d > deviation {
                    deviation = d;
                    worst = (i, j);
                }
            }
        }
        Self {
            order,
            matrix,
            deviation,
            worst,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.order + j]
    }
}

/// Bases whose Gram matrix can be formed.
pub trait GramBasis {
    fn gram_report(&self, ip: InnerProductKind, n: usize) -> Result<GramReport>;
}

impl GramBasis for FactorBasis {
    fn gram_report(&self, ip: InnerProductKind, n: usize) -> Result<GramReport> {
        gram_factor(self, ip, n)
    }
}

impl GramBasis for ProductBasis {
    fn gram_report(&self, ip: InnerProductKind, n: usize) -> Result<GramReport> {
        gram_product(self, ip, n)
    }
}

/// Gram matrix of the first `n` members of `basis` after scaling each to
/// unit norm in `ip`.
pub fn gram<B: GramBasis>(basis: &B, ip: InnerProductKind, n: usize) -> Result<GramReport> {
    basis.gram_report(ip, n)
}

fn unsupported(what: &str, ip: InnerProductKind, why: &str) -> Error {
    Error::UnsupportedInnerProduct(format!("{what} in the {} inner product: {why}", ip.name()))
}

// Closed-form squared ip-norm of a stored factor mode, or an error when the
// factor family is not orthogonal (or not definite) in `ip`.
fn factor_norm_sq(kind: BcKind, value: f64, ip: InnerProductKind) -> Result<f64> {
    use InnerProductKind::*;
    let l2 = match kind {
        BcKind::Dirichlet => 1.0,
        BcKind::Neumann => 1.0 / (1.0 + value),
        BcKind::Robin => 1.0 / value,
        BcKind::Steklov => {
            return match ip {
                BWeighted => Ok(1.0),
                _ => Err(unsupported(
                    "Steklov modes",
                    ip,
                    "only the b-inner product makes them orthogonal",
                )),
            }
        }
    };
    match (kind, ip) {
        (_, L2) => Ok(l2),
        (BcKind::Robin, GradOnly | H1Full) => Err(unsupported(
            "Robin modes",
            ip,
            "boundary terms make them non-orthogonal",
        )),
        (BcKind::Neumann, GradOnly | BWeighted) => Err(unsupported(
            "a basis containing the Neumann constant",
            ip,
            "its gradient norm is zero",
        )),
        (_, H1Full) => Ok((1.0 + value) * l2),
        (_, GradOnly | BWeighted) => Ok(value * l2),
    }
}

/// Gram matrix of factor modes by 1-D quadrature.
pub fn gram_factor(basis: &FactorBasis, ip: InnerProductKind, n: usize) -> Result<GramReport> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    let trimmed = basis.truncated(n)?;
    let table = FactorTable::for_basis(&trimmed)?;
    let first = trimmed.first_index();
    let mut scales = Vec::with_capacity(n);
    for m in &trimmed.modes {
        scales.push(1.0 / math::sqrt(factor_norm_sq(basis.bc.kind, m.value, ip)?));
    }
    let mut g = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..=a {
            let (i, j) = (first + a, first + b);
            let raw = match ip {
                InnerProductKind::L2 => table.l2(i, j),
                InnerProductKind::GradOnly => table.grad(i, j),
                InnerProductKind::H1Full => table.grad(i, j) + table.l2(i, j),
                InnerProductKind::BWeighted => table.grad(i, j) + table.boundary(i, j),
            };
            let v = raw * scales[a] * scales[b];
            g[a * n + b] = v;
            g[b * n + a] = v;
        }
    }
    Ok(GramReport::from_matrix(n, g))
}

fn has_robin(basis: &ProductBasis) -> bool {
    basis.combo.bc1.kind == BcKind::Robin || basis.combo.bc2.kind == BcKind::Robin
}

// Scale of dyad `p` for `ip`: stored scalings where they apply, otherwise the
// closed form from the factor norms.
fn product_scale(basis: &ProductBasis, p: usize, ip: InnerProductKind) -> Result<f64> {
    let stored = match (ip, basis.energy_form) {
        (InnerProductKind::L2, _) => Some(basis.scalings[p].l2_scale),
        (InnerProductKind::GradOnly, EnergyForm::Gradient)
        | (InnerProductKind::H1Full, EnergyForm::H1)
        | (InnerProductKind::BWeighted, EnergyForm::BWeighted) => Some(basis.scalings[p].energy_scale),
        _ => None,
    };
    if let Some(s) = stored {
        return Ok(s);
    }
    if has_robin(basis) {
        return Err(unsupported(
            "a Robin product basis",
            ip,
            "dyads are orthogonal only in L2 and the b-inner product",
        ));
    }
    if ip == InnerProductKind::BWeighted {
        return Err(unsupported("this combo", ip, "it carries no boundary weights"));
    }
    let pair = basis.pairs[p];
    let v1 = basis.basis1.value(pair.j)?;
    let v2 = basis.basis2.value(pair.k)?;
    let m = factor_norm_sq(basis.combo.bc1.kind, v1, InnerProductKind::L2)?
        * factor_norm_sq(basis.combo.bc2.kind, v2, InnerProductKind::L2)?;
    let energy = match ip {
        InnerProductKind::H1Full => 1.0 + v1 + v2,
        _ => v1 + v2,
    };
    if energy <= 0.0 {
        return Err(unsupported(
            "a basis containing the Neumann constant",
            ip,
            "its gradient norm is zero",
        ));
    }
    Ok(1.0 / math::sqrt(energy * m))
}

/// Gram matrix of the first `n` dyads by tensor Gauss-Legendre quadrature
/// on the rectangle (and on its edges for the b-inner product).
pub fn gram_product(basis: &ProductBasis, ip: InnerProductKind, n: usize) -> Result<GramReport> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    if n > basis.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            first: 1,
            last: basis.len(),
        });
    }
    let scales = (0..n).map(|p| product_scale(basis, p, ip)).collect::<Result<Vec<_>>>()?;
    let pairs = &basis.pairs[..n];
    let max_j = pairs.iter().map(|p| p.j).max().unwrap_or(1);
    let max_k = pairs.iter().map(|p| p.k).max().unwrap_or(1);
    let dom = basis.domain;
    let (xs, wx) = QuadratureRule::gauss_legendre(default_order(max_j))?.mapped(dom.factor1.a(), dom.factor1.b());
    let (ys, wy) = QuadratureRule::gauss_legendre(default_order(max_k))?.mapped(dom.factor2.a(), dom.factor2.b());
    let (nx, ny) = (xs.len(), ys.len());

    // dyad value and gradient at every tensor node
    let mut val = vec![0.0; n * nx * ny];
    let mut gx = vec![0.0; n * nx * ny];
    let mut gy = vec![0.0; n * nx * ny];
    for (p, pair) in pairs.iter().enumerate() {
        let s = scales[p];
        let e: Vec<(f64, f64)> = xs.iter().map(|&x| basis.basis1.eval(pair.j, x)).collect::<Result<_>>()?;
        let f: Vec<(f64, f64)> = ys.iter().map(|&y| basis.basis2.eval(pair.k, y)).collect::<Result<_>>()?;
        for (a, &(ev, ed)) in e.iter().enumerate() {
            for (c, &(fv, fd)) in f.iter().enumerate() {
                let idx = p * nx * ny + a * ny + c;
                val[idx] = s * ev * fv;
                gx[idx] = s * ed * fv;
                gy[idx] = s * ev * fd;
            }
        }
    }
    let area_weights: Vec<f64> = wx.iter().flat_map(|&a| wy.iter().map(move |&c| a * c)).collect();

    // traces on the four edges, for the b-inner product
    let edges = if ip == InnerProductKind::BWeighted {
        Some(edge_traces(basis, &scales, &xs, &ys)?)
    } else {
        None
    };

    let mut g = vec![0.0; n * n];
    let block = nx * ny;
    for p in 0..n {
        for q in 0..=p {
            let (vp, vq) = (&val[p * block..(p + 1) * block], &val[q * block..(q + 1) * block]);
            let grad = || {
                let (xp, xq) = (&gx[p * block..(p + 1) * block], &gx[q * block..(q + 1) * block]);
                let (yp, yq) = (&gy[p * block..(p + 1) * block], &gy[q * block..(q + 1) * block]);
                super::weighted_dot(&area_weights, xp, xq) + super::weighted_dot(&area_weights, yp, yq)
            };
            let v = match ip {
                InnerProductKind::L2 => super::weighted_dot(&area_weights, vp, vq),
                InnerProductKind::GradOnly => grad(),
                InnerProductKind::H1Full => grad() + super::weighted_dot(&area_weights, vp, vq),
                InnerProductKind::BWeighted => {
                    let tr = edges.as_ref().expect("edge traces computed for b-inner product");
                    grad() + tr.pair(p, q, &wx, &wy)
                }
            };
            g[p * n + q] = v;
            g[q * n + p] = v;
        }
    }
    Ok(GramReport::from_matrix(n, g))
}

struct EdgeTraces {
    // per dyad: values along x = a1, x = b1 (sampled at ys) and y = a2, y = b2 (at xs)
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
    bottom: Vec<Vec<f64>>,
    top: Vec<Vec<f64>>,
    weights: [f64; 4],
}

impl EdgeTraces {
    fn pair(&self, p: usize, q: usize, wx: &[f64], wy: &[f64]) -> f64 {
        let [bl, br, bb, bt] = self.weights;
        bl * super::weighted_dot(wy, &self.left[p], &self.left[q])
            + br * super::weighted_dot(wy, &self.right[p], &self.right[q])
            + bb * super::weighted_dot(wx, &self.bottom[p], &self.bottom[q])
            + bt * super::weighted_dot(wx, &self.top[p], &self.top[q])
    }
}

fn edge_traces(basis: &ProductBasis, scales: &[f64], xs: &[f64], ys: &[f64]) -> Result<EdgeTraces> {
    use crate::domain::Side;
    let dom = basis.domain;
    let (a1, b1, a2, b2) = (dom.factor1.a(), dom.factor1.b(), dom.factor2.a(), dom.factor2.b());
    let mut tr = EdgeTraces {
        left: Vec::new(),
        right: Vec::new(),
        bottom: Vec::new(),
        top: Vec::new(),
        weights: [
            basis.combo.bc1.weight(Side::Left),
            basis.combo.bc1.weight(Side::Right),
            basis.combo.bc2.weight(Side::Left),
            basis.combo.bc2.weight(Side::Right),
        ],
    };
    for (p, pair) in basis.pairs[..scales.len()].iter().enumerate() {
        let s = scales[p];
        let e = |x: f64| basis.basis1.eval(pair.j, x).map(|v| v.0);
        let f = |y: f64| basis.basis2.eval(pair.k, y).map(|v| v.0);
        let (ea, eb) = (e(a1)?, e(b1)?);
        let (fa, fb) = (f(a2)?, f(b2)?);
        let fy: Vec<f64> = ys.iter().map(|&y| f(y)).collect::<Result<_>>()?;
        let ex: Vec<f64> = xs.iter().map(|&x| e(x)).collect::<Result<_>>()?;
        tr.left.push(fy.iter().map(|v| s * ea * v).collect());
        tr.right.push(fy.iter().map(|v| s * eb * v).collect());
        tr.bottom.push(ex.iter().map(|v| s * fa * v).collect());
        tr.top.push(ex.iter().map(|v| s * fb * v).collect());
    }
    Ok(tr)
}
