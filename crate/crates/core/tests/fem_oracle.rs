use std::f64::consts::PI;

use spectra_core::fem::{assemble, gevp_residual, lowest_values, solve_gevp, Mesh};
use spectra_core::{dirichlet_modes, robin_modes, BoundaryCondition, ComboSpec, Interval, RectangleDomain};

/// 1-D P1 eigenvalue with consistent mass for the mode of frequency `θ = jπh/L`.
fn p1_value(j: usize, h: f64, length: f64) -> f64 {
    let t = j as f64 * PI * h / length;
    6.0 / (h * h) * (1.0 - t.cos()) / (2.0 + t.cos())
}

fn sorted_sums(a: &[f64], b: &[f64], count: usize) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    all
}

fn dd() -> ComboSpec {
    ComboSpec::new(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet())
}

#[test]
fn q1_dirichlet_spectrum_is_the_separable_p1_spectrum() {
    // (K ⊗ M + M ⊗ K) v = λ (M ⊗ M) v has eigenvalues μx(j) + μy(k) exactly
    let dom = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
    let (nx, ny) = (12, 10);
    let asm = assemble(&Mesh::grid_2d(dom, nx, ny).unwrap(), dd()).unwrap();
    let fem = lowest_values(&asm.energy(), &asm.m, 20).unwrap();
    let mx: Vec<f64> = (1..nx).map(|j| p1_value(j, 1.0 / nx as f64, 1.0)).collect();
    let my: Vec<f64> = (1..ny).map(|k| p1_value(k, 2.0 / ny as f64, 2.0)).collect();
    let want = sorted_sums(&mx, &my, 20);
    for (f, w) in fem.iter().zip(&want) {
        assert!((f - w).abs() < 1e-10 * w, "{f} vs {w}");
    }
}

#[test]
fn q1_neumann_spectrum_is_the_separable_p1_spectrum() {
    let dom = RectangleDomain::unit_square();
    let n = 10;
    let nn = ComboSpec::new(BoundaryCondition::neumann(), BoundaryCondition::neumann());
    let asm = assemble(&Mesh::grid_2d(dom, n, n).unwrap(), nn).unwrap();
    let fem = lowest_values(&asm.energy(), &asm.m, 12).unwrap();
    let m: Vec<f64> = (0..=n).map(|j| p1_value(j, 1.0 / n as f64, 1.0)).collect();
    let want = sorted_sums(&m, &m, 12);
    assert!(fem[0].abs() < 1e-10);
    for (f, w) in fem.iter().zip(&want).skip(1) {
        assert!((f - w).abs() < 1e-10 * w, "{f} vs {w}");
    }
}

#[test]
fn unit_square_dirichlet_matches_sums_within_two_percent() {
    let exact: Vec<f64> = {
        let v: Vec<f64> = (1..=10).map(|j| (j as f64 * PI).powi(2)).collect();
        sorted_sums(&v, &v, 15)
    };
    let asm = assemble(&Mesh::grid_2d(RectangleDomain::unit_square(), 32, 32).unwrap(), dd()).unwrap();
    let fem = lowest_values(&asm.energy(), &asm.m, 15).unwrap();
    for (f, e) in fem.iter().zip(&exact) {
        assert!((f - e) / e < 0.02 && f >= e, "{f} vs {e}");
    }
}

#[test]
fn dirichlet_eigenvalue_error_is_second_order() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let err = |n: usize| {
        let asm = assemble(&Mesh::uniform_1d(iv, n).unwrap(), BoundaryCondition::dirichlet()).unwrap();
        let v = lowest_values(&asm.energy(), &asm.m, 1).unwrap()[0];
        (v - PI * PI) / (PI * PI)
    };
    for n in [16, 32, 64] {
        let ratio = err(n) / err(2 * n);
        assert!((3.5..=4.5).contains(&ratio), "h = 1/{n}: ratio {ratio}");
    }
}

#[test]
fn robin_eigenvalue_error_is_second_order() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let bc = BoundaryCondition::robin(1.0, 3.0);
    let exact = robin_modes(iv, 1.0, 3.0, 3).unwrap().values();
    let err = |n: usize| {
        let asm = assemble(&Mesh::uniform_1d(iv, n).unwrap(), bc).unwrap();
        let v = lowest_values(&asm.energy(), &asm.m, 3).unwrap();
        (v[2] - exact[2]).abs()
    };
    let ratio = err(32) / err(64);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn eigenvectors_are_mass_orthonormal_with_small_residuals() {
    let dom = RectangleDomain::with_lengths(1.0, 1.5).unwrap();
    let combo = ComboSpec::new(BoundaryCondition::robin(2.0, 0.5), BoundaryCondition::neumann());
    let asm = assemble(&Mesh::grid_2d(dom, 8, 9).unwrap(), combo).unwrap();
    let a = asm.energy();
    let pairs = solve_gevp(&a, &asm.m, 6).unwrap();
    for (i, p) in pairs.iter().enumerate() {
        assert!(gevp_residual(&a, &asm.m, p.value, &p.vector).unwrap() < 1e-9);
        for (j, q) in pairs.iter().enumerate() {
            let g = asm.m.bilinear(&p.vector, &q.vector).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((g - want).abs() < 1e-9);
        }
    }
}

#[test]
fn fine_1d_dirichlet_meets_closed_form() {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let asm = assemble(&Mesh::uniform_1d(iv, 512).unwrap(), BoundaryCondition::dirichlet()).unwrap();
    let fem = lowest_values(&asm.energy(), &asm.m, 3).unwrap();
    for (f, e) in fem.iter().zip(dirichlet_modes(iv, 3).unwrap().values()) {
        assert!((f - e).abs() / e < 1e-4);
    }
}
