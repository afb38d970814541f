//! Weak residuals `|a(u, h) - λ m(u, h)|` against piecewise-linear hats.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{BcKind, BoundaryCondition, Eigenpair1D, Interval, Side};
use crate::error::{Error, Result};
use crate::math;
use crate::product::{ProductBasis, TwoParamFamily};
use crate::verify::quadrature::QuadratureRule;

/// Hat mesh used by [`weak_residual_factor`] and [`two_param_residual`].
pub const FACTOR_TEST_ELEMENTS: usize = 256;
/// Hat mesh per direction used by [`weak_residual_product`].
pub const PRODUCT_TEST_ELEMENTS: usize = 32;

/// Gauss points per element for hat integrals.
const ELEMENT_ORDER: usize = 8;

/// Integrals of a function against the hats of a uniform mesh.
struct HatIntegrals {
    /// `∫ u h_i`.
    mass: Vec<f64>,
    /// `∫ u' h_i'`.
    stiff: Vec<f64>,
    /// `u(a)`, `u(b)`.
    ends: (f64, f64),
    /// `∫ h_i²`, `∫ h_i'²`.
    hat_l2: Vec<f64>,
    hat_grad: Vec<f64>,
}

fn hat_integrals<F: Fn(f64) -> (f64, f64)>(interval: Interval, elements: usize, u: F) -> Result<HatIntegrals> {
    if elements < 2 {
        return Err(Error::MeshTooCoarse(elements));
    }
    let rule = QuadratureRule::gauss_legendre(ELEMENT_ORDER)?;
    let h = interval.length() / elements as f64;
    let mut mass = vec![0.0; elements + 1];
    let mut stiff = vec![0.0; elements + 1];
    for e in 0..elements {
        let x0 = interval.a() + e as f64 * h;
        let (xs, ws) = rule.mapped(x0, x0 + h);
        for (&x, &w) in xs.iter().zip(&ws) {
            let (v, d) = u(x);
            let s = (x - x0) / h;
            mass[e] += w * v * (1.0 - s);
            mass[e + 1] += w * v * s;
            stiff[e] -= w * d / h;
            stiff[e + 1] += w * d / h;
        }
    }
    let mut hat_l2 = vec![2.0 * h / 3.0; elements + 1];
    let mut hat_grad = vec![2.0 / h; elements + 1];
    for end in [0, elements] {
        hat_l2[end] = h / 3.0;
        hat_grad[end] = 1.0 / h;
    }
    Ok(HatIntegrals {
        mass,
        stiff,
        ends: (u(interval.a()).0, u(interval.b()).0),
        hat_l2,
        hat_grad,
    })
}

// Range of admissible hats: Dirichlet tests vanish at the endpoints.
fn test_nodes(kind: BcKind, elements: usize) -> core::ops::RangeInclusive<usize> {
    if kind == BcKind::Dirichlet {
        1..=elements - 1
    } else {
        0..=elements
    }
}

// ∫_∂ b u h over the endpoints for hat i: only the end hats see the boundary.
fn boundary_term(bc: &BoundaryCondition, hi: &HatIntegrals, i: usize, elements: usize) -> f64 {
    let mut t = 0.0;
    if i == 0 {
        t += bc.weight(Side::Left) * hi.ends.0;
    }
    if i == elements {
        t += bc.weight(Side::Right) * hi.ends.1;
    }
    t
}

/// Weak residual of a factor eigenpair on the default 256-element hat mesh,
/// normalized by `‖h‖_{1,2}`.
pub fn weak_residual_factor(mode: &Eigenpair1D, bc: &BoundaryCondition, interval: Interval) -> Result<f64> {
    weak_residual_factor_with(mode, mode.value, bc, interval, FACTOR_TEST_ELEMENTS)
}

/// As [`weak_residual_factor`], with an explicit eigenvalue and hat mesh.
///
/// For Robin the form carries `∑ b u h` on the left; for Steklov the right
/// side is `value · ∑ b u h` instead of `value · ∫ u h`.
pub fn weak_residual_factor_with(
    mode: &Eigenpair1D,
    value: f64,
    bc: &BoundaryCondition,
    interval: Interval,
    elements: usize,
) -> Result<f64> {
    let a = interval.a();
    let hi = hat_integrals(interval, elements, |x| {
        let [v, d, _] = mode.form.eval_local(x - a);
        (v, d)
    })?;
    let mut worst: f64 = 0.0;
    for i in test_nodes(bc.kind, elements) {
        let bterm = boundary_term(bc, &hi, i, elements);
        let r = match bc.kind {
            BcKind::Dirichlet | BcKind::Neumann => hi.stiff[i] - value * hi.mass[i],
            BcKind::Robin => hi.stiff[i] + bterm - value * hi.mass[i],
            BcKind::Steklov => hi.stiff[i] - value * bterm,
        };
        let norm = math::sqrt(hi.hat_l2[i] + hi.hat_grad[i]);
        worst = worst.max(r.abs() / norm);
    }
    Ok(worst)
}

/// Residual of the `L²`-scaled dyad at `position` with its combined eigenvalue,
/// over the 32 x 32 tensor hats.
pub fn weak_residual_product(basis: &ProductBasis, position: usize) -> Result<f64> {
    let pair = *basis.pairs.get(position).ok_or(Error::IndexOutOfRange {
        index: position,
        first: 0,
        last: basis.len().saturating_sub(1),
    })?;
    weak_residual_dyad(basis, pair.j, pair.k, pair.combined_value, PRODUCT_TEST_ELEMENTS)
}

/// Residual of the `L²`-unit dyad `e_j ⊗ f_k` tested against Q1 hats
/// `h_i(x) h_l(y)` on an `elements x elements` grid, normalized by the hat
/// `H¹` norm. Robin edges contribute `∫ b u h dσ` to the form.
pub fn weak_residual_dyad(basis: &ProductBasis, j: usize, k: usize, value: f64, elements: usize) -> Result<f64> {
    let (b1, b2) = (&basis.basis1, &basis.basis2);
    let m1 = b1.mode(j)?;
    let m2 = b2.mode(k)?;
    let scale = crate::product::pair_scaling(&basis.combo, m1.value, m2.value).l2_scale;
    let (i1, i2) = (b1.interval, b2.interval);
    let hx = hat_integrals(i1, elements, |x| {
        let [v, d, _] = m1.form.eval_local(x - i1.a());
        (v, d)
    })?;
    let hy = hat_integrals(i2, elements, |y| {
        let [v, d, _] = m2.form.eval_local(y - i2.a());
        (v, d)
    })?;
    let (bc1, bc2) = (basis.combo.bc1, basis.combo.bc2);
    let mut worst: f64 = 0.0;
    for i in test_nodes(bc1.kind, elements) {
        let ax = hx.stiff[i] + boundary_term(&bc1, &hx, i, elements);
        for l in test_nodes(bc2.kind, elements) {
            let ay = hy.stiff[l] + boundary_term(&bc2, &hy, l, elements);
            let form = ax * hy.mass[l] + hx.mass[i] * ay;
            let r = scale * (form - value * hx.mass[i] * hy.mass[l]);
            let norm2 = hx.hat_grad[i] * hy.hat_l2[l] + hx.hat_l2[i] * hy.hat_grad[l] + hx.hat_l2[i] * hy.hat_l2[l];
            worst = worst.max(r.abs() / math::sqrt(norm2));
        }
    }
    Ok(worst)
}

/// Residual of a two-parameter dyad `e_j ⊗ s_k` on the default hat meshes.
pub fn two_param_residual(family: &TwoParamFamily, j: usize, k: usize, lambda: f64, delta: f64) -> Result<f64> {
    two_param_residual_with(family, j, k, lambda, delta, FACTOR_TEST_ELEMENTS)
}

/// `max |[u,h] − λ<u,h>₂ − δ ∫_{Ω1} ∫_{∂Ω2} b₂ u h dσ₂ dx|` over test dyads
/// `h₁ ⊗ h₂` of factor hats, unnormalized. `[u,h]` is the gradient form plus,
/// for a Robin first factor, the `b₁` edge term.
pub fn two_param_residual_with(
    family: &TwoParamFamily,
    j: usize,
    k: usize,
    lambda: f64,
    delta: f64,
    elements: usize,
) -> Result<f64> {
    let (b1, b2) = (&family.basis1, &family.basis2);
    let m1 = b1.mode(j)?;
    let m2 = b2.mode(k)?;
    let (i1, i2) = (b1.interval, b2.interval);
    let hx = hat_integrals(i1, elements, |x| {
        let [v, d, _] = m1.form.eval_local(x - i1.a());
        (v, d)
    })?;
    let hy = hat_integrals(i2, elements, |y| {
        let [v, d, _] = m2.form.eval_local(y - i2.a());
        (v, d)
    })?;
    let (bc1, bc2) = (family.combo.bc1, family.combo.bc2);
    let mut worst: f64 = 0.0;
    for i in test_nodes(bc1.kind, elements) {
        // Robin term only for a Robin first factor; Dirichlet/Neumann weights are zero
        let ax = hx.stiff[i] + boundary_term(&bc1, &hx, i, elements) - lambda * hx.mass[i];
        for l in 0..=elements {
            let ay = hy.stiff[l] - delta * boundary_term(&bc2, &hy, l, elements);
            let r = ax * hy.mass[l] + hx.mass[i] * ay;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}
