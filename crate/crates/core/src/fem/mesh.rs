//! Uniform P1 / Q1 meshes and exact element assembly.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{BcKind, BoundaryCondition, ComboSpec, Interval, RectangleDomain, Side};
use crate::error::{Error, Result};
use crate::fem::linalg::SymMatrix;
use crate::verify::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MeshKind {
    Uniform1D,
    UniformGrid2D,
}

/// Uniform mesh of an interval (P1) or a rectangle (Q1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    kind: MeshKind,
    nx: usize,
    ny: usize,
    x: Interval,
    y: Interval,
}

impl Mesh {
    pub fn uniform_1d(interval: Interval, elements: usize) -> Result<Self> {
        if elements < 2 {
            return Err(Error::MeshTooCoarse(elements));
        }
        Ok(Self {
            kind: MeshKind::Uniform1D,
            nx: elements,
            ny: 0,
            x: interval,
            y: interval,
        })
    }

    pub fn grid_2d(domain: RectangleDomain, nx: usize, ny: usize) -> Result<Self> {
        for n in [nx, ny] {
            if n < 2 {
                return Err(Error::MeshTooCoarse(n));
            }
        }
        Ok(Self {
            kind: MeshKind::UniformGrid2D,
            nx,
            ny,
            x: domain.factor1,
            y: domain.factor2,
        })
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    /// Elements along x and along y (zero for a 1-D mesh).
    pub fn elements(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn interval(&self) -> Interval {
        self.x
    }

    pub fn rectangle(&self) -> Option<RectangleDomain> {
        match self.kind {
            MeshKind::Uniform1D => None,
            MeshKind::UniformGrid2D => Some(RectangleDomain::new(self.x, self.y)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self.kind {
            MeshKind::Uniform1D => self.nx + 1,
            MeshKind::UniformGrid2D => (self.nx + 1) * (self.ny + 1),
        }
    }

    pub fn hx(&self) -> f64 {
        self.x.length() / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        match self.kind {
            MeshKind::Uniform1D => 0.0,
            MeshKind::UniformGrid2D => self.y.length() / self.ny as f64,
        }
    }

    /// Coordinates of a node; `y` is zero on a 1-D mesh.
    pub fn node(&self, index: usize) -> (f64, f64) {
        match self.kind {
            MeshKind::Uniform1D => (self.x.a() + index as f64 * self.hx(), 0.0),
            MeshKind::UniformGrid2D => {
                let i = index % (self.nx + 1);
                let j = index / (self.nx + 1);
                (
                    self.x.a() + i as f64 * self.hx(),
                    self.y.a() + j as f64 * self.hy(),
                )
            }
        }
    }
}

/// Boundary data for [`assemble`]: one condition on an interval or a combo on a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshBc {
    Interval(BoundaryCondition),
    Rectangle(ComboSpec),
}

impl From<BoundaryCondition> for MeshBc {
    fn from(bc: BoundaryCondition) -> Self {
        MeshBc::Interval(bc)
    }
}

impl From<ComboSpec> for MeshBc {
    fn from(combo: ComboSpec) -> Self {
        MeshBc::Rectangle(combo)
    }
}

/// Assembled stiffness `K`, mass `M` and boundary-weight `B` matrices on
/// the unknowns that survive Dirichlet elimination.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub mesh: Mesh,
    pub k: SymMatrix,
    pub m: SymMatrix,
    pub b: SymMatrix,
    /// Mesh node index of each unknown, ascending.
    pub free: Vec<usize>,
}

impl Assembly {
    pub fn unknowns(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of unknown `i`.
    pub fn coords(&self, i: usize) -> (f64, f64) {
        self.mesh.node(self.free[i])
    }

    /// Interpolates `f` at the unknowns.
    pub fn interpolate<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.unknowns())
            .map(|i| {
                let (x, y) = self.coords(i);
                f(x, y)
            })
            .collect()
    }

    /// Load vector `∫ f φ_i` with a 3-point Gauss rule per element direction.
    pub fn load<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Vec<f64>> {
        let rule = QuadratureRule::gauss_legendre(3)?;
        let mesh = &self.mesh;
        let mut full = vec![0.0; mesh.node_count()];
        let hx = mesh.hx();
        match mesh.kind {
            MeshKind::Uniform1D => {
                for e in 0..mesh.nx {
                    let x0 = mesh.x.a() + e as f64 * hx;
                    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                        let s = 0.5 * (t + 1.0);
                        let fv = f(x0 + s * hx, 0.0) * w * 0.5 * hx;
                        full[e] += fv * (1.0 - s);
                        full[e + 1] += fv * s;
                    }
                }
            }
            MeshKind::UniformGrid2D => {
                let hy = mesh.hy();
                let stride = mesh.nx + 1;
                for ey in 0..mesh.ny {
                    let y0 = mesh.y.a() + ey as f64 * hy;
                    for ex in 0..mesh.nx {
                        let x0 = mesh.x.a() + ex as f64 * hx;
                        let base = ey * stride + ex;
                        for (tx, wx) in rule.nodes.iter().zip(&rule.weights) {
                            let sx = 0.5 * (tx + 1.0);
                            for (ty, wy) in rule.nodes.iter().zip(&rule.weights) {
                                let sy = 0.5 * (ty + 1.0);
                                let fv = f(x0 + sx * hx, y0 + sy * hy) * wx * wy * 0.25 * hx * hy;
                                full[base] += fv * (1.0 - sx) * (1.0 - sy);
                                full[base + 1] += fv * sx * (1.0 - sy);
                                full[base + stride] += fv * (1.0 - sx) * sy;
                                full[base + stride + 1] += fv * sx * sy;
                            }
                        }
                    }
                }
            }
        }
        Ok(self.free.iter().map(|&n| full[n]).collect())
    }

    /// The pencil matrix of the energy form: `K + B`.
    pub fn energy(&self) -> SymMatrix {
        self.k
            .add_scaled(&self.b, 1.0)
            .expect("K and B share the unknown set")
    }
}

// 1-D P1 element matrices on an element of length h.
fn stiff_1d(h: f64) -> [[f64; 2]; 2] {
    [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]]
}

fn mass_1d(h: f64) -> [[f64; 2]; 2] {
    [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]]
}

fn eliminates(bc: &BoundaryCondition) -> bool {
    bc.kind == BcKind::Dirichlet
}

fn carries_weight(bc: &BoundaryCondition) -> bool {
    matches!(bc.kind, BcKind::Robin | BcKind::Steklov)
}

/// Assembles `K ≈ ∫∇u·∇h`, `M ≈ ∫u h` and `B ≈ ∫_∂ b u h dσ` with exact
/// element integrals. Dirichlet nodes are removed from the unknowns.
pub fn assemble(mesh: &Mesh, bc: impl Into<MeshBc>) -> Result<Assembly> {
    let bc = bc.into();
    let (bc1, bc2) = match (mesh.kind, bc) {
        (MeshKind::Uniform1D, MeshBc::Interval(b)) => (b, b),
        (MeshKind::UniformGrid2D, MeshBc::Rectangle(c)) => (c.bc1, c.bc2),
        (MeshKind::Uniform1D, MeshBc::Rectangle(_)) => {
            return Err(Error::UnsupportedCombo(
                "a 1-D mesh takes a single boundary condition".into(),
            ))
        }
        (MeshKind::UniformGrid2D, MeshBc::Interval(_)) => {
            return Err(Error::UnsupportedCombo(
                "a 2-D mesh takes a combo of two boundary conditions".into(),
            ))
        }
    };
    for c in [&bc1, &bc2] {
        if carries_weight(c) {
            c.check_weights(0.0)?;
        }
    }
    match mesh.kind {
        MeshKind::Uniform1D => assemble_1d(mesh, &bc1),
        MeshKind::UniformGrid2D => assemble_2d(mesh, &bc1, &bc2),
    }
}

fn free_map(total: usize, is_fixed: impl Fn(usize) -> bool) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    let mut free = Vec::new();
    let mut map = vec![None; total];
    for (n, slot) in map.iter_mut().enumerate() {
        if !is_fixed(n) {
            *slot = Some(free.len());
            free.push(n);
        }
    }
    if free.is_empty() {
        return Err(Error::NoUnknowns);
    }
    Ok((free, map))
}

fn scatter(target: &mut SymMatrix, map: &[Option<usize>], nodes: &[usize], local: &[f64], stride: usize) {
    for (a, &na) in nodes.iter().enumerate() {
        let Some(ia) = map[na] else { continue };
        for (b, &nb) in nodes.iter().enumerate() {
            let Some(ib) = map[nb] else { continue };
            if ib <= ia {
                target.add(ia, ib, local[a * stride + b]);
            }
        }
    }
}

fn assemble_1d(mesh: &Mesh, bc: &BoundaryCondition) -> Result<Assembly> {
    let n = mesh.nx;
    let fixed = eliminates(bc);
    let (free, map) = free_map(n + 1, |i| fixed && (i == 0 || i == n))?;
    let order = free.len();
    let mut k = SymMatrix::zeros(order);
    let mut m = SymMatrix::zeros(order);
    let mut b = SymMatrix::zeros(order);
    let h = mesh.hx();
    let ke = stiff_1d(h);
    let me = mass_1d(h);
    let kl = [ke[0][0], ke[0][1], ke[1][0], ke[1][1]];
    let ml = [me[0][0], me[0][1], me[1][0], me[1][1]];
    for e in 0..n {
        let nodes = [e, e + 1];
        scatter(&mut k, &map, &nodes, &kl, 2);
        scatter(&mut m, &map, &nodes, &ml, 2);
    }
    if carries_weight(bc) {
        for (node, side) in [(0, Side::Left), (n, Side::Right)] {
            if let Some(i) = map[node] {
                b.add(i, i, bc.weight(side));
            }
        }
    }
    Ok(Assembly {
        mesh: *mesh,
        k,
        m,
        b,
        free,
    })
}

fn assemble_2d(mesh: &Mesh, bc1: &BoundaryCondition, bc2: &BoundaryCondition) -> Result<Assembly> {
    let (nx, ny) = (mesh.nx, mesh.ny);
    let stride = nx + 1;
    let fix_x = eliminates(bc1);
    let fix_y = eliminates(bc2);
    let (free, map) = free_map((nx + 1) * (ny + 1), |node| {
        let i = node % stride;
        let j = node / stride;
        (fix_x && (i == 0 || i == nx)) || (fix_y && (j == 0 || j == ny))
    })?;
    let order = free.len();
    let mut k = SymMatrix::zeros(order);
    let mut m = SymMatrix::zeros(order);
    let mut b = SymMatrix::zeros(order);
    let (hx, hy) = (mesh.hx(), mesh.hy());
    let (kx, mx) = (stiff_1d(hx), mass_1d(hx));
    let (ky, my) = (stiff_1d(hy), mass_1d(hy));
    // local node order: (0,0), (1,0), (0,1), (1,1) as (x, y) offsets
    let offs = [(0usize, 0usize), (1, 0), (0, 1), (1, 1)];
    let mut kl = [0.0; 16];
    let mut ml = [0.0; 16];
    for (a, &(ax, ay)) in offs.iter().enumerate() {
        for (c, &(cx, cy)) in offs.iter().enumerate() {
            kl[a * 4 + c] = kx[ax][cx] * my[ay][cy] + mx[ax][cx] * ky[ay][cy];
            ml[a * 4 + c] = mx[ax][cx] * my[ay][cy];
        }
    }
    for ey in 0..ny {
        for ex in 0..nx {
            let base = ey * stride + ex;
            let nodes = [base, base + 1, base + stride, base + stride + 1];
            scatter(&mut k, &map, &nodes, &kl, 4);
            scatter(&mut m, &map, &nodes, &ml, 4);
        }
    }
    let edge_1d = |mass: [[f64; 2]; 2], w: f64| [w * mass[0][0], w * mass[0][1], w * mass[1][0], w * mass[1][1]];
    if carries_weight(bc1) {
        // edges x = a1 and x = b1, integrated along y
        for (i, side) in [(0, Side::Left), (nx, Side::Right)] {
            let local = edge_1d(my, bc1.weight(side));
            for ey in 0..ny {
                let nodes = [ey * stride + i, (ey + 1) * stride + i];
                scatter(&mut b, &map, &nodes, &local, 2);
            }
        }
    }
    if carries_weight(bc2) {
        // edges y = a2 and y = b2, integrated along x
        for (j, side) in [(0, Side::Left), (ny, Side::Right)] {
            let local = edge_1d(mx, bc2.weight(side));
            for ex in 0..nx {
                let nodes = [j * stride + ex, j * stride + ex + 1];
                scatter(&mut b, &map, &nodes, &local, 2);
            }
        }
    }
    Ok(Assembly {
        mesh: *mesh,
        k,
        m,
        b,
        free,
    })
}
