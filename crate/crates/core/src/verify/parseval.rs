//! Expansion coefficients and Parseval defects in an `L²`-scaled dyad basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::product::ProductBasis;
use crate::verify::quadrature::{default_order, QuadratureRule};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParsevalReport {
    /// `<f, u_p>₂` for the first `n` pairs, in basis order.
    pub coefficients: Vec<f64>,
    /// `‖f‖₂²` by the same quadrature.
    pub norm_sq: f64,
    /// `‖f‖₂² − ∑ c_p²`.
    pub defect: f64,
    /// `defect / ‖f‖₂²` (zero when `f` vanishes).
    pub relative_defect: f64,
}

/// Projects `f` onto the first `n` `L²`-scaled dyads by tensor
/// Gauss-Legendre quadrature.
pub fn parseval_check<F: Fn(f64, f64) -> f64>(f: F, basis: &ProductBasis, n: usize) -> Result<ParsevalReport> {
    let order = |max_index: usize| default_order(max_index);
    parseval_check_with_order(f, basis, n, order)
}

/// As [`parseval_check`]; `order` maps the largest mode index per direction
/// to a quadrature order.
pub fn parseval_check_with_order<F, O>(f: F, basis: &ProductBasis, n: usize, order: O) -> Result<ParsevalReport>
where
    F: Fn(f64, f64) -> f64,
    O: Fn(usize) -> usize,
{
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
    let pairs = &basis.pairs[..n];
    let max_j = pairs.iter().map(|p| p.j).max().unwrap_or(1);
    let max_k = pairs.iter().map(|p| p.k).max().unwrap_or(1);
    let dom = basis.domain;
    let (xs, wx) = QuadratureRule::gauss_legendre(order(max_j))?.mapped(dom.factor1.a(), dom.factor1.b());
    let (ys, wy) = QuadratureRule::gauss_legendre(order(max_k))?.mapped(dom.factor2.a(), dom.factor2.b());
    let (nx, ny) = (xs.len(), ys.len());

    let mut fv = vec![0.0; nx * ny];
    let mut norm_sq = 0.0;
    for (a, &x) in xs.iter().enumerate() {
        for (c, &y) in ys.iter().enumerate() {
            let v = f(x, y);
            fv[a * ny + c] = v;
            norm_sq += wx[a] * wy[c] * v * v;
        }
    }

    // g[j][c] = ∫ e_j(x) f(x, y_c) dx, computed once per factor-1 index
    let first1 = basis.basis1.first_index();
    let mut g = vec![vec![0.0; ny]; max_j - first1 + 1];
    for (row, j) in g.iter_mut().zip(first1..=max_j) {
        for (a, &x) in xs.iter().enumerate() {
            let e = basis.basis1.eval(j, x)?.0 * wx[a];
            for c in 0..ny {
                row[c] += e * fv[a * ny + c];
            }
        }
    }
    let first2 = basis.basis2.first_index();
    let mut ftab = vec![vec![0.0; ny]; max_k - first2 + 1];
    for (row, k) in ftab.iter_mut().zip(first2..=max_k) {
        for (c, &y) in ys.iter().enumerate() {
            row[c] = basis.basis2.eval(k, y)?.0 * wy[c];
        }
    }

    let mut coefficients = Vec::with_capacity(n);
    let mut captured = 0.0;
    for (p, pair) in pairs.iter().enumerate() {
        let row = &g[pair.j - first1];
        let col = &ftab[pair.k - first2];
        let raw: f64 = row.iter().zip(col).map(|(a, b)| a * b).sum();
        let c = raw * basis.scalings[p].l2_scale;
        captured += c * c;
        coefficients.push(c);
    }
    let defect = norm_sq - captured;
    let relative_defect = if norm_sq > 0.0 { defect / norm_sq } else { 0.0 };
    Ok(ParsevalReport {
        coefficients,
        norm_sq,
        defect,
        relative_defect,
    })
}
