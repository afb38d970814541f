//! Block decomposition of `H¹` on a rectangle with unit boundary weights:
//! `H₀¹⊗H₀¹ ⊕ V₀ ⊕ V₁ ⊕ V₂`, where `V₀ = S₁⊗S₂`, `V₁ = Ẽ₁⊗S₂`, `V₂ = S₁⊗Ẽ₂`.
//!
//! `Ẽ` are Dirichlet modes scaled to unit gradient norm and `S` the two
//! Steklov modes of each interval. Orthogonality is asserted in the tensor
//! b-inner product `[f₁⊗f₂, g₁⊗g₂]_⊗ = [f₁, g₁]_b [f₂, g₂]_b`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{Interval, RectangleDomain, Side};
use crate::error::{Error, Result};
use crate::factor::{dirichlet_modes, steklov_modes, FactorBasis};
use crate::math;
use crate::verify::quadrature::{default_order, QuadratureRule};

/// One of the four summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Block {
    /// `Ẽ₁ ⊗ Ẽ₂`, zero trace.
    Interior,
    /// `S₁ ⊗ S₂`.
    V0,
    /// `Ẽ₁ ⊗ S₂`.
    V1,
    /// `S₁ ⊗ Ẽ₂`.
    V2,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::Interior, Block::V0, Block::V1, Block::V2];

    pub fn name(&self) -> &'static str {
        match self {
            Block::Interior => "h0xh0",
            Block::V0 => "v0",
            Block::V1 => "v1",
            Block::V2 => "v2",
        }
    }
}

/// A factor function: scaled Dirichlet mode `ẽ_j` (`j >= 1`) or Steklov mode `s_k` (`k ∈ {0, 1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FactorMode {
    Dirichlet(usize),
    Steklov(usize),
}

/// A basis dyad of one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceDyad {
    pub block: Block,
    pub x: FactorMode,
    pub y: FactorMode,
}

/// The factor functions of one interval: `ẽ_1..ẽ_n` and `s_0, s_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFactor {
    pub dirichlet: FactorBasis,
    pub steklov: FactorBasis,
}

impl TraceFactor {
    fn new(interval: Interval, n: usize) -> Result<Self> {
        Ok(Self {
            dirichlet: dirichlet_modes(interval, n)?,
            steklov: steklov_modes(interval, 1.0, 1.0)?,
        })
    }

    pub fn interval(&self) -> Interval {
        self.dirichlet.interval
    }

    /// Value, first and second derivative.
    pub fn eval(&self, mode: FactorMode, x: f64) -> Result<[f64; 3]> {
        match mode {
            FactorMode::Dirichlet(j) => {
                let lam = self.dirichlet.value(j)?;
                let [v, d, dd] = self.dirichlet.eval_full(j, x)?;
                let s = 1.0 / math::sqrt(lam);
                Ok([s * v, s * d, s * dd])
            }
            FactorMode::Steklov(k) => self.steklov.eval_full(k, x),
        }
    }

    fn modes(&self) -> Vec<FactorMode> {
        let mut m: Vec<FactorMode> = (1..=self.dirichlet.count).map(FactorMode::Dirichlet).collect();
        m.push(FactorMode::Steklov(0));
        m.push(FactorMode::Steklov(1));
        m
    }
}

/// Orthonormal bases of the four blocks at truncation `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBlocks {
    pub domain: RectangleDomain,
    pub n: usize,
    pub factor1: TraceFactor,
    pub factor2: TraceFactor,
    pub block00: Vec<TraceDyad>,
    pub v0: Vec<TraceDyad>,
    pub v1: Vec<TraceDyad>,
    pub v2: Vec<TraceDyad>,
}

impl TraceBlocks {
    pub fn block(&self, b: Block) -> &[TraceDyad] {
        match b {
            Block::Interior => &self.block00,
            Block::V0 => &self.v0,
            Block::V1 => &self.v1,
            Block::V2 => &self.v2,
        }
    }

    /// Sizes in the order interior, `V₀`, `V₁`, `V₂`.
    pub fn sizes(&self) -> [usize; 4] {
        [self.block00.len(), self.v0.len(), self.v1.len(), self.v2.len()]
    }

    /// All dyads, block by block.
    pub fn all(&self) -> Vec<TraceDyad> {
        Block::ALL.iter().flat_map(|&b| self.block(b).iter().copied()).collect()
    }

    /// Value and gradient of a dyad at `(x, y)`.
    pub fn eval(&self, d: &TraceDyad, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let [ev, ed, _] = self.factor1.eval(d.x, x)?;
        let [fv, fd, _] = self.factor2.eval(d.y, y)?;
        Ok((ev * fv, ed * fv, ev * fd))
    }

    /// `Δ(e ⊗ f) = e'' f + e f''` at `(x, y)`.
    pub fn laplacian(&self, d: &TraceDyad, x: f64, y: f64) -> Result<f64> {
        let [ev, _, edd] = self.factor1.eval(d.x, x)?;
        let [fv, _, fdd] = self.factor2.eval(d.y, y)?;
        Ok(edd * fv + ev * fdd)
    }
}

/// Builds the blocks with `b ≡ 1` on every edge.
pub fn build_trace_blocks(domain: RectangleDomain, n: usize) -> Result<TraceBlocks> {
    build_trace_blocks_with_weights(domain, n, [1.0; 4])
}

/// As [`build_trace_blocks`]; any weight other than 1 is refused because the
/// decomposition is only established for unit weights.
pub fn build_trace_blocks_with_weights(domain: RectangleDomain, n: usize, weights: [f64; 4]) -> Result<TraceBlocks> {
    if let Some(w) = weights.iter().find(|&&w| w != 1.0) {
        return Err(Error::UnsupportedHypothesis(format!(
            "trace blocks need b = 1 on every edge, got {w}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    let factor1 = TraceFactor::new(domain.factor1, n)?;
    let factor2 = TraceFactor::new(domain.factor2, n)?;
    let dyad = |block, x, y| TraceDyad { block, x, y };
    let mut block00 = Vec::with_capacity(n * n);
    for j in 1..=n {
        for k in 1..=n {
            block00.push(dyad(Block::Interior, FactorMode::Dirichlet(j), FactorMode::Dirichlet(k)));
        }
    }
    let mut v0 = Vec::with_capacity(4);
    for i in 0..2 {
        for k in 0..2 {
            v0.push(dyad(Block::V0, FactorMode::Steklov(i), FactorMode::Steklov(k)));
        }
    }
    let mut v1 = Vec::with_capacity(2 * n);
    let mut v2 = Vec::with_capacity(2 * n);
    for j in 1..=n {
        for k in 0..2 {
            v1.push(dyad(Block::V1, FactorMode::Dirichlet(j), FactorMode::Steklov(k)));
            v2.push(dyad(Block::V2, FactorMode::Steklov(k), FactorMode::Dirichlet(j)));
        }
    }
    Ok(TraceBlocks {
        domain,
        n,
        factor1,
        factor2,
        block00,
        v0,
        v1,
        v2,
    })
}

/// Factor b-inner products `[u, v]_b = ∫u'v' + u(a)v(a) + u(b)v(b)` by quadrature.
struct FactorInner {
    xs: Vec<f64>,
    ws: Vec<f64>,
    interval: Interval,
}

impl FactorInner {
    fn new(interval: Interval, order: usize) -> Result<Self> {
        let (xs, ws) = QuadratureRule::gauss_legendre(order)?.mapped(interval.a(), interval.b());
        Ok(Self { xs, ws, interval })
    }

    fn inner<U, V>(&self, u: U, v: V) -> Result<f64>
    where
        U: Fn(f64) -> Result<(f64, f64)>,
        V: Fn(f64) -> Result<(f64, f64)>,
    {
        let mut s = 0.0;
        for (&x, &w) in self.xs.iter().zip(&self.ws) {
            s += w * u(x)?.1 * v(x)?.1;
        }
        for side in [Side::Left, Side::Right] {
            let x = self.interval.endpoint(side);
            s += u(x)?.0 * v(x)?.0;
        }
        Ok(s)
    }
}

fn factor_gram(f: &TraceFactor) -> Result<(Vec<FactorMode>, Vec<f64>)> {
    let modes = f.modes();
    let m = modes.len();
    let fi = FactorInner::new(f.interval(), default_order(f.dirichlet.count))?;
    let mut g = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..=a {
            let ua = |x: f64| f.eval(modes[a], x).map(|[v, d, _]| (v, d));
            let ub = |x: f64| f.eval(modes[b], x).map(|[v, d, _]| (v, d));
            let v = fi.inner(ua, ub)?;
            g[a * m + b] = v;
            g[b * m + a] = v;
        }
    }
    Ok((modes, g))
}

/// Full Gram matrix of all block dyads in the tensor b-inner product.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossGram {
    pub order: usize,
    pub matrix: Vec<f64>,
    /// `max |G − I|` over all entries.
    pub deviation: f64,
    /// `max |G|` over entries coupling different blocks.
    pub max_cross_block: f64,
}

/// Assembles the Gram matrix of every block dyad from factor b-inner products.
pub fn cross_gram(blocks: &TraceBlocks) -> Result<CrossGram> {
    let (m1, g1) = factor_gram(&blocks.factor1)?;
    let (m2, g2) = factor_gram(&blocks.factor2)?;
    let pos = |modes: &[FactorMode], m: FactorMode| modes.iter().position(|&x| x == m).expect("factor mode listed");
    let all = blocks.all();
    let n = all.len();
    let (s1, s2) = (m1.len(), m2.len());
    let idx: Vec<(usize, usize)> = all.iter().map(|d| (pos(&m1, d.x), pos(&m2, d.y))).collect();
    let mut matrix = vec![0.0; n * n];
    let mut deviation: f64 = 0.0;
    let mut max_cross_block: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            let v = g1[idx[p].0 * s1 + idx[q].0] * g2[idx[p].1 * s2 + idx[q].1];
            matrix[p * n + q] = v;
            let target = if p == q { 1.0 } else { 0.0 };
            deviation = deviation.max((v - target).abs());
            if all[p].block != all[q].block {
                max_cross_block = max_cross_block.max(v.abs());
            }
        }
    }
    Ok(CrossGram {
        order: n,
        matrix,
        deviation,
        max_cross_block,
    })
}

/// A factor function given as a closure returning `(value, derivative)`.
pub type FactorFn<'a> = Box<dyn Fn(f64) -> (f64, f64) + 'a>;

/// `c · f_x(x) f_y(y)`.
pub struct DyadTerm<'a> {
    pub coeff: f64,
    pub fx: FactorFn<'a>,
    pub fy: FactorFn<'a>,
}

/// A finite sum of dyads; the only inputs [`decompose`] accepts.
#[derive(Default)]
pub struct DyadSum<'a> {
    pub terms: Vec<DyadTerm<'a>>,
}

impl<'a> DyadSum<'a> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single<X, Y>(fx: X, fy: Y) -> Self
    where
        X: Fn(f64) -> (f64, f64) + 'a,
        Y: Fn(f64) -> (f64, f64) + 'a,
    {
        let mut s = Self::new();
        s.push(1.0, fx, fy);
        s
    }

    pub fn push<X, Y>(&mut self, coeff: f64, fx: X, fy: Y)
    where
        X: Fn(f64) -> (f64, f64) + 'a,
        Y: Fn(f64) -> (f64, f64) + 'a,
    {
        self.terms.push(DyadTerm {
            coeff,
            fx: Box::new(fx),
            fy: Box::new(fy),
        });
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff * (t.fx)(x).0 * (t.fy)(y).0).sum()
    }
}

/// Coefficients of a dyad sum on every block and the captured norm.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decomposition {
    pub interior: Vec<f64>,
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    /// `‖f‖²_⊗`.
    pub norm_sq: f64,
    /// `‖f‖²_⊗ − ∑ c²`.
    pub defect: f64,
}

impl Decomposition {
    pub fn block(&self, b: Block) -> &[f64] {
        match b {
            Block::Interior => &self.interior,
            Block::V0 => &self.v0,
            Block::V1 => &self.v1,
            Block::V2 => &self.v2,
        }
    }

    /// `∑ c²` per block, in the order of [`Block::ALL`].
    pub fn block_energy(&self) -> [f64; 4] {
        Block::ALL.map(|b| self.block(b).iter().map(|c| c * c).sum())
    }
}

fn ok<'f>(g: &'f FactorFn<'_>) -> impl Fn(f64) -> Result<(f64, f64)> + 'f {
    move |x| Ok(g(x))
}

/// Expands `f` in the block bases: each coefficient is `[f, d]_⊗`.
pub fn decompose(f: &DyadSum<'_>, blocks: &TraceBlocks) -> Result<Decomposition> {
    let order = |fac: &TraceFactor| default_order(fac.dirichlet.count).max(64);
    let fi1 = FactorInner::new(blocks.factor1.interval(), order(&blocks.factor1))?;
    let fi2 = FactorInner::new(blocks.factor2.interval(), order(&blocks.factor2))?;

    let mut norm_sq = 0.0;
    for s in &f.terms {
        for t in &f.terms {
            norm_sq += s.coeff * t.coeff * fi1.inner(ok(&s.fx), ok(&t.fx))? * fi2.inner(ok(&s.fy), ok(&t.fy))?;
        }
    }

    let coeff = |d: &TraceDyad| -> Result<f64> {
        let mut c = 0.0;
        for t in &f.terms {
            let bx = |x: f64| blocks.factor1.eval(d.x, x).map(|[v, dv, _]| (v, dv));
            let by = |y: f64| blocks.factor2.eval(d.y, y).map(|[v, dv, _]| (v, dv));
            c += t.coeff * fi1.inner(ok(&t.fx), bx)? * fi2.inner(ok(&t.fy), by)?;
        }
        Ok(c)
    };
    let collect = |b: Block| blocks.block(b).iter().map(coeff).collect::<Result<Vec<f64>>>();
    let interior = collect(Block::Interior)?;
    let v0 = collect(Block::V0)?;
    let v1 = collect(Block::V1)?;
    let v2 = collect(Block::V2)?;
    let captured: f64 = [&interior, &v0, &v1, &v2].iter().flat_map(|v| v.iter()).map(|c| c * c).sum();
    Ok(Decomposition {
        interior,
        v0,
        v1,
        v2,
        norm_sq,
        defect: norm_sq - captured,
    })
}

/// An edge of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Edge {
    /// `x = a₁`.
    Left,
    /// `x = b₁`.
    Right,
    /// `y = a₂`.
    Bottom,
    /// `y = b₂`.
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Edge::Left),
            "right" => Ok(Edge::Right),
            "bottom" => Ok(Edge::Bottom),
            "top" => Ok(Edge::Top),
            other => Err(Error::InvalidEdge(format!("{other} (expected left, right, bottom or top)"))),
        }
    }

    /// The point on this edge at running coordinate `t` (`y` on vertical
    /// edges, `x` on horizontal ones).
    pub fn point(&self, domain: &RectangleDomain, t: f64) -> Result<(f64, f64)> {
        let (iv1, iv2) = (domain.factor1, domain.factor2);
        let (along, p) = match self {
            Edge::Left => (iv2, (iv1.a(), t)),
            Edge::Right => (iv2, (iv1.b(), t)),
            Edge::Bottom => (iv1, (t, iv2.a())),
            Edge::Top => (iv1, (t, iv2.b())),
        };
        if !along.contains(t) {
            return Err(Error::OutOfDomain {
                x: t,
                a: along.a(),
                b: along.b(),
            });
        }
        Ok(p)
    }

    /// Outward unit normal.
    pub fn normal(&self) -> (f64, f64) {
        match self {
            Edge::Left => (-1.0, 0.0),
            Edge::Right => (1.0, 0.0),
            Edge::Bottom => (0.0, -1.0),
            Edge::Top => (0.0, 1.0),
        }
    }

    fn along<'a>(&self, domain: &'a RectangleDomain) -> &'a Interval {
        match self {
            Edge::Left | Edge::Right => &domain.factor2,
            Edge::Bottom | Edge::Top => &domain.factor1,
        }
    }
}

/// Boundary values `γf` at the given running coordinates of `edge`.
pub fn trace_restrict<F: Fn(f64, f64) -> f64>(f: F, domain: &RectangleDomain, edge: Edge, points: &[f64]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&t| edge.point(domain, t).map(|(x, y)| f(x, y)))
        .collect()
}

/// `‖Δu‖_{L²}` of a block dyad by tensor quadrature; zero iff the dyad is harmonic.
pub fn laplacian_norm(blocks: &TraceBlocks, d: &TraceDyad) -> Result<f64> {
    let order = default_order(blocks.n).max(48);
    let rule = QuadratureRule::gauss_legendre(order)?;
    let (xs, wx) = rule.mapped(blocks.domain.factor1.a(), blocks.domain.factor1.b());
    let (ys, wy) = rule.mapped(blocks.domain.factor2.a(), blocks.domain.factor2.b());
    let mut s = 0.0;
    for (&x, &a) in xs.iter().zip(&wx) {
        for (&y, &c) in ys.iter().zip(&wy) {
            let l = blocks.laplacian(d, x, y)?;
            s += a * c * l * l;
        }
    }
    Ok(math::sqrt(s))
}

/// How far a function is from satisfying `∂u/∂ν = δ u` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SteklovDefect {
    /// Best-fit `δ = <∂_ν u, u>_∂ / <u, u>_∂`.
    pub delta: f64,
    /// `‖∂_ν u − δ u‖_∂ / ‖u‖_∂`.
    pub residual: f64,
}

/// Steklov defect (unit weight) of `u` given as `(value, ∂x, ∂y)`, by
/// Gauss-Legendre quadrature along each edge.
pub fn steklov_defect<F>(u: F, domain: &RectangleDomain, order: usize) -> Result<SteklovDefect>
where
    F: Fn(f64, f64) -> Result<(f64, f64, f64)>,
{
    let rule = QuadratureRule::gauss_legendre(order)?;
    let mut samples: Vec<(f64, f64, f64)> = Vec::new(); // (weight, u, ∂νu)
    for edge in Edge::ALL {
        let along = edge.along(domain);
        let (ts, ws) = rule.mapped(along.a(), along.b());
        let (nx, ny) = edge.normal();
        for (&t, &w) in ts.iter().zip(&ws) {
            let (x, y) = edge.point(domain, t)?;
            let (v, dx, dy) = u(x, y)?;
            samples.push((w, v, nx * dx + ny * dy));
        }
    }
    let uu: f64 = samples.iter().map(|(w, v, _)| w * v * v).sum();
    let nu: f64 = samples.iter().map(|(w, v, n)| w * v * n).sum();
    if uu <= 0.0 {
        return Err(Error::UnsupportedHypothesis("function has zero trace".into()));
    }
    let delta = nu / uu;
    let rr: f64 = samples.iter().map(|(w, v, n)| w * (n - delta * v) * (n - delta * v)).sum();
    Ok(SteklovDefect {
        delta,
        residual: math::sqrt(rr / uu),
    })
}

/// Steklov defect of a block dyad.
pub fn steklov_defect_dyad(blocks: &TraceBlocks, d: &TraceDyad) -> Result<SteklovDefect> {
    steklov_defect(|x, y| blocks.eval(d, x, y), &blocks.domain, default_order(blocks.n))
}
