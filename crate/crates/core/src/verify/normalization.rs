//! Norm identities of factor modes and dyads, re-derived by quadrature.

use alloc::vec::Vec;

use crate::domain::{BoundaryCondition, ComboSpec, RectangleDomain, Side};
use crate::error::Result;
use crate::factor::{dirichlet_modes, neumann_modes, robin_modes, steklov_modes};
use crate::product::{build_product_basis, ProductBasis};
use crate::verify::quadrature::{default_order, QuadratureRule};
use crate::verify::FactorTable;

/// Tolerance for identities built from closed-form trigonometric modes.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Tolerance for identities that involve root-found Robin frequencies.
pub const ROOT_FOUND_TOL: f64 = 1e-8;

/// One identity, checked over a family of modes or dyads.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Number of modes or dyads examined.
    pub checked: usize,
    /// Largest `|quadrature − closed form| / max(1, |closed form|)`.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Tracker {
    name: &'static str,
    checked: usize,
    worst: f64,
    tolerance: f64,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            checked: 0,
            worst: 0.0,
            tolerance,
        }
    }

    fn see(&mut self, got: f64, want: f64) {
        let d = (got - want).abs() / want.abs().max(1.0);
        // NaN deviations must fail
        if d.is_nan() || d > self.worst {
            self.worst = if d.is_nan() { f64::INFINITY } else { d };
        }
    }

    fn done(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name,
            checked: self.checked,
            max_deviation: self.worst,
            tolerance: self.tolerance,
            pass: self.worst <= self.tolerance,
        }
    }
}

/// Quadrature integrals of one raw dyad on the rectangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DyadIntegrals {
    pub l2: f64,
    pub grad: f64,
    /// `∫_∂ b u² dσ` with the combo's edge weights.
    pub boundary: f64,
}

pub(crate) fn dyad_integrals(basis: &ProductBasis, j: usize, k: usize) -> Result<DyadIntegrals> {
    let dom = basis.domain;
    let (xs, wx) = QuadratureRule::gauss_legendre(default_order(j))?.mapped(dom.factor1.a(), dom.factor1.b());
    let (ys, wy) = QuadratureRule::gauss_legendre(default_order(k))?.mapped(dom.factor2.a(), dom.factor2.b());
    let e: Vec<(f64, f64)> = xs.iter().map(|&x| basis.basis1.eval(j, x)).collect::<Result<_>>()?;
    let f: Vec<(f64, f64)> = ys.iter().map(|&y| basis.basis2.eval(k, y)).collect::<Result<_>>()?;
    let (mut l2, mut grad) = (0.0, 0.0);
    for (a, &(ev, ed)) in e.iter().enumerate() {
        for (c, &(fv, fd)) in f.iter().enumerate() {
            let w = wx[a] * wy[c];
            let u = ev * fv;
            l2 += w * u * u;
            grad += w * ((ed * fv) * (ed * fv) + (ev * fd) * (ev * fd));
        }
    }
    let mut boundary = 0.0;
    let (bc1, bc2) = (basis.combo.bc1, basis.combo.bc2);
    for side in [Side::Left, Side::Right] {
        let x = dom.factor1.endpoint(side);
        let ex = basis.basis1.eval(j, x)?.0;
        let along: f64 = f.iter().zip(&wy).map(|(fv, w)| w * (ex * fv.0) * (ex * fv.0)).sum();
        boundary += bc1.weight(side) * along;
        let y = dom.factor2.endpoint(side);
        let fy = basis.basis2.eval(k, y)?.0;
        let along: f64 = e.iter().zip(&wx).map(|(ev, w)| w * (ev.0 * fy) * (ev.0 * fy)).sum();
        boundary += bc2.weight(side) * along;
    }
    Ok(DyadIntegrals { l2, grad, boundary })
}

/// Checks every norm identity of the factor families and of the `dd`, `nn`,
/// `rr` and `dn` dyads over the first `count` modes or pairs.
///
/// `robin` supplies the weights on both Robin factors and `steklov` the
/// Steklov weights on the first factor interval.
pub fn normalization_checks(
    domain: &RectangleDomain,
    robin: (f64, f64),
    steklov: (f64, f64),
    count: usize,
) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let iv = domain.factor1;

    // Dirichlet factor: ∫ e_j'² = λ_j, ∫ e_j e_k = δ_jk
    let d = dirichlet_modes(iv, count)?;
    let td = FactorTable::for_basis(&d)?;
    let mut grad_eq = Tracker::new("dirichlet factor: gradient norm equals eigenvalue", CLOSED_FORM_TOL);
    for m in &d.modes {
        grad_eq.checked += 1;
        grad_eq.see(td.grad(m.index, m.index), m.value);
    }
    out.push(grad_eq.done());

    // Neumann factor: <f_j, f_k> = δ_jk / (1 + λ_k)
    let n = neumann_modes(iv, count)?;
    let tn = FactorTable::for_basis(&n)?;
    let mut nl2 = Tracker::new("neumann factor: L2 Gram equals diag 1/(1+lambda)", CLOSED_FORM_TOL);
    for a in &n.modes {
        nl2.checked += 1;
        for b in &n.modes {
            let want = if a.index == b.index { 1.0 / (1.0 + a.value) } else { 0.0 };
            nl2.see(tn.l2(a.index, b.index), want);
        }
    }
    out.push(nl2.done());

    // Robin factor: [g_j, g_k]_b = δ_jk and <g_j, g_k> = δ_jk / λ_k
    let r = robin_modes(iv, robin.0, robin.1, count)?;
    let tr = FactorTable::for_basis(&r)?;
    let mut rb = Tracker::new("robin factor: b-inner Gram equals identity", ROOT_FOUND_TOL);
    let mut rl2 = Tracker::new("robin factor: L2 Gram equals diag 1/lambda", ROOT_FOUND_TOL);
    for a in &r.modes {
        rb.checked += 1;
        rl2.checked += 1;
        for b in &r.modes {
            let same = a.index == b.index;
            rb.see(tr.grad(a.index, b.index) + tr.boundary(a.index, b.index), if same { 1.0 } else { 0.0 });
            rl2.see(tr.l2(a.index, b.index), if same { 1.0 / a.value } else { 0.0 });
        }
    }
    out.push(rb.done());
    out.push(rl2.done());

    // Steklov factor: [s,s]_∇ = δ/(1+δ), <s,s>_{b,∂} = 1/(1+δ), cross terms zero
    let s = steklov_modes(iv, steklov.0, steklov.1)?;
    let ts = FactorTable::for_basis(&s)?;
    let mut sg = Tracker::new("steklov factor: gradient Gram equals diag delta/(1+delta)", CLOSED_FORM_TOL);
    let mut sb = Tracker::new("steklov factor: boundary Gram equals diag 1/(1+delta)", CLOSED_FORM_TOL);
    for a in &s.modes {
        sg.checked += 1;
        sb.checked += 1;
        for b in &s.modes {
            let same = a.index == b.index;
            sg.see(ts.grad(a.index, b.index), if same { a.value / (1.0 + a.value) } else { 0.0 });
            sb.see(ts.boundary(a.index, b.index), if same { 1.0 / (1.0 + a.value) } else { 0.0 });
        }
    }
    out.push(sg.done());
    out.push(sb.done());

    // Dyads
    let dd = build_product_basis(
        ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet()),
        *domain,
        count,
    )?;
    let mut dd_grad = Tracker::new("dd dyads: gradient norm equals eigenvalue sum", CLOSED_FORM_TOL);
    let mut dd_scaled = Tracker::new("dd dyads: energy-scaled gradient norm equals one", CLOSED_FORM_TOL);
    for (p, pair) in dd.pairs.iter().enumerate() {
        let q = dyad_integrals(&dd, pair.j, pair.k)?;
        dd_grad.checked += 1;
        dd_scaled.checked += 1;
        dd_grad.see(q.grad, pair.combined_value);
        let s = dd.scalings[p].energy_scale;
        dd_scaled.see(s * s * q.grad, 1.0);
    }
    out.push(dd_grad.done());
    out.push(dd_scaled.done());

    let nn = build_product_basis(
        ComboSpec::new(BoundaryCondition::neumann(), BoundaryCondition::neumann()),
        *domain,
        count,
    )?;
    let mut nn_l2 = Tracker::new("nn dyads: L2 norm equals 1/((1+l1)(1+l2))", CLOSED_FORM_TOL);
    let mut nn_h1 = Tracker::new("nn dyads: H1 norm equals (1+l1+l2)/((1+l1)(1+l2))", CLOSED_FORM_TOL);
    for pair in &nn.pairs {
        let (l1, l2) = (nn.basis1.value(pair.j)?, nn.basis2.value(pair.k)?);
        let q = dyad_integrals(&nn, pair.j, pair.k)?;
        let denom = (1.0 + l1) * (1.0 + l2);
        nn_l2.checked += 1;
        nn_h1.checked += 1;
        nn_l2.see(q.l2, 1.0 / denom);
        nn_h1.see(q.grad + q.l2, (1.0 + l1 + l2) / denom);
    }
    out.push(nn_l2.done());
    out.push(nn_h1.done());

    let rr = build_product_basis(
        ComboSpec::new(
            BoundaryCondition::robin(robin.0, robin.1),
            BoundaryCondition::robin(robin.0, robin.1),
        ),
        *domain,
        count,
    )?;
    let mut rr_l2 = Tracker::new("rr dyads: (l1+l2) L2 norm equals 1/l1 + 1/l2", ROOT_FOUND_TOL);
    let mut rr_b = Tracker::new("rr dyads: b-norm equals 1/l1 + 1/l2", ROOT_FOUND_TOL);
    for pair in &rr.pairs {
        let (l1, l2) = (rr.basis1.value(pair.j)?, rr.basis2.value(pair.k)?);
        let q = dyad_integrals(&rr, pair.j, pair.k)?;
        let want = 1.0 / l1 + 1.0 / l2;
        rr_l2.checked += 1;
        rr_b.checked += 1;
        rr_l2.see((l1 + l2) * q.l2, want);
        rr_b.see(q.grad + q.boundary, want);
    }
    out.push(rr_l2.done());
    out.push(rr_b.done());

    let dn = build_product_basis(
        ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::neumann()),
        *domain,
        count,
    )?;
    let mut dn_grad = Tracker::new("dn dyads: gradient norm equals (l1+l2)/(1+l2)", CLOSED_FORM_TOL);
    for pair in &dn.pairs {
        let l2 = dn.basis2.value(pair.k)?;
        let q = dyad_integrals(&dn, pair.j, pair.k)?;
        dn_grad.checked += 1;
        dn_grad.see(q.grad, pair.combined_value / (1.0 + l2));
    }
    out.push(dn_grad.done());

    Ok(out)
}

/// Empirical bounds `min, max` of `[u,u]_b / ‖u‖²_{1,2}` over the first
/// `count` Robin modes.
pub fn b_norm_equivalence(iv: crate::domain::Interval, b: (f64, f64), count: usize) -> Result<(f64, f64)> {
    let r = robin_modes(iv, b.0, b.1, count)?;
    let t = FactorTable::for_basis(&r)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for m in &r.modes {
        let i = m.index;
        let q = (t.grad(i, i) + t.boundary(i, i)) / (t.grad(i, i) + t.l2(i, i));
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold_on_a_rectangle() {
        let dom = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
        let checks = normalization_checks(&dom, (1.0, 2.0), (1.0, 2.0), 20).unwrap();
        assert_eq!(checks.len(), 13);
        for c in &checks {
            assert!(c.pass, "{} deviates by {}", c.name, c.max_deviation);
            assert!(c.checked >= 2);
        }
    }

    #[test]
    fn norm_equivalence_bounds_are_positive() {
        let iv = crate::domain::Interval::new(0.0, 1.0).unwrap();
        let (lo, hi) = b_norm_equivalence(iv, (1.0, 1.0), 20).unwrap();
        assert!(lo > 0.0 && lo <= hi);
    }
}
