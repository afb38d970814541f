//! Fast diagonalization of `−Δu + μu = f` in a product eigenbasis.

use alloc::vec::Vec;

use crate::domain::{ComboSpec, RectangleDomain};
use crate::error::{Error, Result};
use crate::fem::{assemble, solve_linear, Mesh};
use crate::math;
use crate::product::{build_product_basis, ProductBasis, Scaling};
use crate::verify::parseval::parseval_check;
use crate::verify::quadrature::{default_order, QuadratureRule};

/// What to do with a pair whose combined eigenvalue is zero when `μ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ZeroMode {
    /// Report a singular shift.
    #[default]
    Reject,
    /// Drop the mode, provided `f` has no component on it.
    Skip,
}

/// A right-hand side component on a skipped zero mode below this multiple of
/// `‖f‖₂` counts as zero.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

/// Modal solution `u = ∑ c_p u_p` with `c_p = <f, u_p>₂ / (λ_p + μ)` over `L²`-unit dyads.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModalSolution {
    pub basis: ProductBasis,
    pub rhs_coeffs: Vec<f64>,
    pub sol_coeffs: Vec<f64>,
    pub shift: f64,
    /// `‖f‖₂²` by quadrature.
    pub rhs_norm_sq: f64,
}

impl ModalSolution {
    /// `u(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let mut s = 0.0;
        for (p, &c) in self.sol_coeffs.iter().enumerate() {
            if c != 0.0 {
                s += c * self.basis.eval(p, x, y, Scaling::L2)?.value;
            }
        }
        Ok(s)
    }

    /// `(∑ (λ+μ) c², ∑ c · f̂)`; equal when the diagonal solve is consistent.
    pub fn energy_identity(&self) -> (f64, f64) {
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for (p, (&c, &f)) in self.sol_coeffs.iter().zip(&self.rhs_coeffs).enumerate() {
            lhs += (self.basis.pairs[p].combined_value + self.shift) * c * c;
            rhs += c * f;
        }
        (lhs, rhs)
    }

    /// `‖u‖₂` from the coefficients.
    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.sol_coeffs.iter().map(|c| c * c).sum())
    }

    /// `‖u‖₂` by tensor quadrature of the synthesized function.
    pub fn l2_norm_quadrature(&self, order: usize) -> Result<f64> {
        let rule = QuadratureRule::gauss_legendre(order)?;
        let d = self.basis.domain;
        let (xs, wx) = rule.mapped(d.factor1.a(), d.factor1.b());
        let (ys, wy) = rule.mapped(d.factor2.a(), d.factor2.b());
        let mut s = 0.0;
        for (&x, &a) in xs.iter().zip(&wx) {
            for (&y, &c) in ys.iter().zip(&wy) {
                let u = self.eval(x, y)?;
                s += a * c * u * u;
            }
        }
        Ok(math::sqrt(s))
    }
}

/// Solves `−Δu + μu = f` with the first `n_pairs` dyads of `combo`.
pub fn solve_modal<F: Fn(f64, f64) -> f64>(
    combo: ComboSpec,
    domain: RectangleDomain,
    f: F,
    mu: f64,
    n_pairs: usize,
    zero_mode: ZeroMode,
) -> Result<ModalSolution> {
    combo.require_single_parameter()?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::UnsupportedHypothesis(alloc::format!("shift must be finite and non-negative, got {mu}")));
    }
    let basis = build_product_basis(combo, domain, n_pairs)?;
    let rep = parseval_check(f, &basis, n_pairs)?;
    let fnorm = math::sqrt(rep.norm_sq);
    let mut sol = Vec::with_capacity(n_pairs);
    for (pair, &r) in basis.pairs.iter().zip(&rep.coefficients) {
        let denominator = pair.combined_value + mu;
        if denominator > 0.0 {
            sol.push(r / denominator);
            continue;
        }
        let singular = Error::SingularShift {
            j: pair.j,
            k: pair.k,
            denominator,
        };
        match zero_mode {
            ZeroMode::Skip if denominator == 0.0 => {
                if r.abs() > COMPATIBILITY_TOL * fnorm.max(1.0) {
                    return Err(Error::IncompatibleRhs { coefficient: r });
                }
                sol.push(0.0);
            }
            _ => return Err(singular),
        }
    }
    Ok(ModalSolution {
        basis,
        rhs_coeffs: rep.coefficients,
        sol_coeffs: sol,
        shift: mu,
        rhs_norm_sq: rep.norm_sq,
    })
}

/// Differences between the modal solution and a bilinear FEM solution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FemComparison {
    /// Elements per direction.
    pub elements: (usize, usize),
    /// `√(eᵀ M e)` with `e` the nodal difference over the free nodes.
    pub l2_error: f64,
    pub max_nodal_error: f64,
}

fn elements_for(length: f64, h: f64) -> usize {
    math::round(length / h).max(2.0) as usize
}

/// Compares [`solve_modal`] against `(K + μM + B) u = F` on a uniform grid
/// of spacing about `h`; `F` is the quadrature load of `f`.
pub fn compare_fem<F: Fn(f64, f64) -> f64>(
    combo: ComboSpec,
    domain: RectangleDomain,
    f: F,
    mu: f64,
    h: f64,
    n_pairs: usize,
) -> Result<FemComparison> {
    let modal = solve_modal(combo, domain, &f, mu, n_pairs, ZeroMode::Reject)?;
    compare_with_fem(&modal, &f, h)
}

/// As [`compare_fem`] for an existing modal solution.
pub fn compare_with_fem<F: Fn(f64, f64) -> f64>(modal: &ModalSolution, f: F, h: f64) -> Result<FemComparison> {
    if !(h > 0.0) {
        return Err(Error::UnsupportedHypothesis(alloc::format!("mesh size must be positive, got {h}")));
    }
    let domain = modal.basis.domain;
    let nx = elements_for(domain.factor1.length(), h);
    let ny = elements_for(domain.factor2.length(), h);
    let mesh = Mesh::grid_2d(domain, nx, ny)?;
    let asm = assemble(&mesh, modal.basis.combo)?;
    let a = asm.energy().add_scaled(&asm.m, modal.shift)?;
    let load = asm.load(&f)?;
    let uh = solve_linear(&a, &load)?;
    let mut e = Vec::with_capacity(uh.len());
    for (i, &v) in uh.iter().enumerate() {
        let (x, y) = asm.coords(i);
        e.push(modal.eval(x, y)? - v);
    }
    let max_nodal_error = e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let l2_error = math::sqrt(asm.m.bilinear(&e, &e)?.max(0.0));
    Ok(FemComparison {
        elements: (nx, ny),
        l2_error,
        max_nodal_error,
    })
}

/// Quadrature order adequate for synthesizing `basis` on a grid.
pub fn synthesis_order(basis: &ProductBasis) -> usize {
    let m = basis.pairs.iter().map(|p| p.j.max(p.k)).max().unwrap_or(1);
    default_order(m)
}
