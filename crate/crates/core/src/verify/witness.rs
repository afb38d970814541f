//! Two-parameter dyads sharing a first factor need not be gradient-orthogonal.

use crate::domain::{BoundaryCondition, ComboSpec, RectangleDomain, Side};
use crate::error::Result;
use crate::product::two_param_pairs;
use crate::verify::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessReport {
    pub b2: (f64, f64),
    /// `[u_{1,0}, u_{1,1}]_∇` on the rectangle.
    pub gradient_inner: f64,
    /// `<s_0, s_1>_{b,∂}` on the second factor.
    pub boundary_inner: f64,
}

/// `[u_{1,0}, u_{1,1}]_∇` for Dirichlet x Steklov on the unit square with
/// `b₂ = (1, 2)`.
pub fn nonorthogonality_witness() -> Result<f64> {
    nonorthogonality_witness_with(1.0, 2.0).map(|r| r.gradient_inner)
}

/// The witness for Steklov weights `(b_left, b_right)` on the second factor.
pub fn nonorthogonality_witness_with(b_left: f64, b_right: f64) -> Result<WitnessReport> {
    let combo = ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::steklov(b_left, b_right));
    let fam = two_param_pairs(combo, RectangleDomain::unit_square(), 1)?;
    let rule = QuadratureRule::gauss_legendre(32)?;
    let (pts, ws) = rule.mapped(0.0, 1.0);
    let mut inner = 0.0;
    for (&x, &wx) in pts.iter().zip(&ws) {
        for (&y, &wy) in pts.iter().zip(&ws) {
            let u = fam.eval(1, 0, x, y)?;
            let v = fam.eval(1, 1, x, y)?;
            inner += wx * wy * (u.dx * v.dx + u.dy * v.dy);
        }
    }
    let s = &fam.basis2;
    let mut boundary = 0.0;
    for side in [Side::Left, Side::Right] {
        let y = s.interval.endpoint(side);
        boundary += s.bc.weight(side) * s.eval(0, y)?.0 * s.eval(1, y)?.0;
    }
    Ok(WitnessReport {
        b2: (b_left, b_right),
        gradient_inner: inner,
        boundary_inner: boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn asymmetric_weights_break_orthogonality() {
        let v = nonorthogonality_witness().unwrap();
        // λ₁₁ <s₀, s₁>₂ with s₀ = 1/√3, s₁ = √(3/5)(y − 2/3)
        let expected = -PI * PI / (6.0 * 5.0_f64.sqrt());
        assert!((v - expected).abs() < 1e-12, "{v}");
    }

    #[test]
    fn symmetric_weights_restore_orthogonality() {
        let r = nonorthogonality_witness_with(1.0, 1.0).unwrap();
        assert!(r.gradient_inner.abs() < 1e-12);
        assert!(r.boundary_inner.abs() < 1e-14);
        let r = nonorthogonality_witness_with(1.0, 2.0).unwrap();
        assert!(r.boundary_inner.abs() < 1e-14);
    }
}
