//! End-to-end acceptance gate. Every criterion prints one `PASS`/`FAIL` line;
//! the test fails if any criterion fails.
//!
//! Reference values are computed here from closed forms or independent
//! root finding, never from the library's own construction.

use std::f64::consts::PI;
use std::time::Instant;

use spectra_core::fem::{assemble, lowest_values, Mesh};
use spectra_core::product::build_product_basis;
use spectra_core::solver::{compare_fem, solve_modal, ZeroMode};
use spectra_core::trace::{
    build_trace_blocks, cross_gram, laplacian_norm, steklov_defect_dyad, Block, FactorMode, TraceDyad,
};
use spectra_core::verify::{
    gram_product, nonorthogonality_witness, nonorthogonality_witness_with, normalization_checks,
    parseval_check, two_param_residual, weak_residual_factor, InnerProductKind,
};
use spectra_core::{
    dirichlet_modes, steklov_modes, two_param_pairs, BoundaryCondition, ComboSpec, Interval, RectangleDomain,
};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn combo(a: BoundaryCondition, b: BoundaryCondition) -> ComboSpec {
    ComboSpec::new(a, b)
}

fn d() -> BoundaryCondition {
    BoundaryCondition::dirichlet()
}
fn n() -> BoundaryCondition {
    BoundaryCondition::neumann()
}
fn r1() -> BoundaryCondition {
    BoundaryCondition::robin(1.0, 1.0)
}

/// Smallest `count` sums of two sorted factor spectra, by brute force.
fn smallest_sums(v1: &[f64], v2: &[f64], count: usize) -> Vec<f64> {
    let mut all: Vec<f64> = v1.iter().flat_map(|a| v2.iter().map(move |b| a + b)).collect();
    all.sort_by(|a, b| a.total_cmp(b));
    all.truncate(count);
    all
}

/// Robin frequencies on `(0, 1)` with `b = 1` at both ends: roots of
/// `(ω² − 1) sin ω − 2ω cos ω = 0`, one per interval `(mπ, (m+1)π)`.
fn robin_unit_values(count: usize) -> Vec<f64> {
    let g = |w: f64| (w * w - 1.0) * w.sin() - 2.0 * w * w.cos();
    (0..count)
        .map(|m| {
            let (mut lo, mut hi) = (m as f64 * PI + 1e-9, (m + 1) as f64 * PI - 1e-9);
            let glo = g(lo);
            assert!(glo * g(hi) < 0.0, "no sign change on branch {m}");
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (g(mid) > 0.0) == (glo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let w = 0.5 * (lo + hi);
            w * w
        })
        .collect()
}

/// Group sizes of a sorted list, splitting where the relative gap exceeds `gap`.
fn multiplicities(values: &[f64], gap: f64) -> Vec<usize> {
    let mut out = vec![1];
    for w in values.windows(2) {
        if (w[1] - w[0]).abs() <= gap * w[1].abs().max(1e-300) {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    out
}

fn fem_values(combo: ComboSpec, dom: RectangleDomain, nx: usize, ny: usize, count: usize) -> Vec<f64> {
    let asm = assemble(&Mesh::grid_2d(dom, nx, ny).unwrap(), combo).unwrap();
    lowest_values(&asm.energy(), &asm.m, count).unwrap()
}

fn max_rel(fem: &[f64], exact: &[f64]) -> f64 {
    fem.iter().zip(exact).map(|(f, e)| rel(*f, *e)).fold(0.0, f64::max)
}

fn c1_factor_ground_truth() -> Outcome {
    let b = dirichlet_modes(unit(), 8).map_err(|e| e.to_string())?;
    let mut worst_value: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    for m in &b.modes {
        let exact = (m.index as f64 * PI).powi(2);
        worst_value = worst_value.max(rel(m.value, exact));
        worst_res = worst_res.max(weak_residual_factor(m, &b.bc, unit()).map_err(|e| e.to_string())?);
    }
    let msg = format!("max rel eigenvalue error {worst_value:.2e} (tol 1e-12), max weak residual {worst_res:.2e} (tol 1e-9)");
    check(worst_value <= 1e-12 && worst_res <= 1e-9, msg.clone(), msg)
}

fn c2_dirichlet_product_spectrum() -> Outcome {
    let dom = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
    let v1: Vec<f64> = (1..=20).map(|j| (j as f64 * PI).powi(2)).collect();
    let v2: Vec<f64> = (1..=20).map(|k| (k as f64 * PI / 2.0).powi(2)).collect();
    let exact = smallest_sums(&v1, &v2, 15);
    let dd = combo(d(), d());
    let coarse = fem_values(dd, dom, 32, 32, 15);
    let fine = fem_values(dd, dom, 64, 64, 15);
    let (e32, e64) = (max_rel(&coarse, &exact), max_rel(&fine, &exact));
    let want = multiplicities(&exact, 1e-12);
    let got = multiplicities(&fine, 6e-3);
    let msg = format!(
        "max rel error {e32:.2e} at 32x32 (tol 2e-2), {e64:.2e} at 64x64 (tol 6e-3); multiplicities exact {want:?} fem {got:?}"
    );
    check(e32 <= 2e-2 && e64 <= 6e-3 && want == got, msg.clone(), msg)
}

fn c3_neumann_product_spectrum() -> Outcome {
    let dom = RectangleDomain::unit_square();
    let v: Vec<f64> = (0..20).map(|j| (j as f64 * PI).powi(2)).collect();
    let exact = smallest_sums(&v, &v, 10);
    let fem = fem_values(combo(n(), n()), dom, 32, 32, 10);
    let zero = fem[0].abs();
    let err = max_rel(&fem[1..], &exact[1..]);
    let msg = format!("max rel error {err:.2e} (tol 2e-2), zero eigenvalue {zero:.2e} (tol 1e-8)");
    check(err <= 2e-2 && zero <= 1e-8, msg.clone(), msg)
}

fn c4_robin_product_spectrum() -> Outcome {
    let dom = RectangleDomain::unit_square();
    let v = robin_unit_values(12);
    let exact = smallest_sums(&v, &v, 10);
    let fem = fem_values(combo(r1(), r1()), dom, 32, 32, 10);
    let err = max_rel(&fem, &exact);
    let msg = format!("max rel error {err:.2e} (tol 2e-2), lowest sum {:.6}", exact[0]);
    check(err <= 2e-2, msg.clone(), msg)
}

fn c5_normalization_identities() -> Outcome {
    let dom = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
    let checks = normalization_checks(&dom, (1.0, 1.0), (1.0, 2.0), 50).map_err(|e| e.to_string())?;
    let failed: Vec<String> = checks
        .iter()
        // a Steklov interval has exactly two modes
        .filter(|c| !c.pass || c.checked < if c.name.starts_with("steklov") { 2 } else { 50 })
        .map(|c| format!("{} ({:.2e} > {:.0e})", c.name, c.max_deviation, c.tolerance))
        .collect();
    let worst = checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    check(
        failed.is_empty(),
        format!("{} identities over 50 modes or pairs, worst deviation {worst:.2e}", checks.len()),
        format!("failed: {}", failed.join("; ")),
    )
}

fn c6_gram_identity() -> Outcome {
    let dom = RectangleDomain::with_lengths(1.0, 2.0).unwrap();
    let cases = [
        ("dd", combo(d(), d()), InnerProductKind::GradOnly, 1e-9),
        ("nn", combo(n(), n()), InnerProductKind::H1Full, 1e-9),
        ("rr", combo(r1(), BoundaryCondition::robin(2.0, 0.5)), InnerProductKind::BWeighted, 1e-8),
        ("dn", combo(d(), n()), InnerProductKind::GradOnly, 1e-9),
        ("dr", combo(d(), r1()), InnerProductKind::BWeighted, 1e-8),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, c, energy, tol) in cases {
        let basis = build_product_basis(c, dom, 25).map_err(|e| e.to_string())?;
        let l2 = gram_product(&basis, InnerProductKind::L2, 25).map_err(|e| e.to_string())?.deviation;
        let en = gram_product(&basis, energy, 25).map_err(|e| e.to_string())?.deviation;
        ok &= l2 <= tol && en <= tol;
        parts.push(format!("{name} {l2:.1e}/{en:.1e}"));
    }
    let msg = format!("L2/energy deviations: {}", parts.join(", "));
    check(ok, msg.clone(), msg)
}

fn c7_two_parameter() -> Outcome {
    let dom = RectangleDomain::unit_square();
    let s = BoundaryCondition::steklov(1.0, 2.0);
    let mut worst: f64 = 0.0;
    for c in [combo(d(), s), combo(n(), s), combo(r1(), s)] {
        let fam = two_param_pairs(c, dom, 5).map_err(|e| e.to_string())?;
        for p in &fam.pairs {
            let r = two_param_residual(&fam, p.index.j, p.index.k, p.lambda, p.delta).map_err(|e| e.to_string())?;
            worst = worst.max(r);
        }
    }
    let w = nonorthogonality_witness().map_err(|e| e.to_string())?;
    let control = nonorthogonality_witness_with(1.0, 1.0).map_err(|e| e.to_string())?.gradient_inner;
    let msg = format!("max residual {worst:.2e} (tol 1e-8), witness {w:.6} (need |.| >= 1e-2), control {control:.1e} (tol 1e-10)");
    check(worst <= 1e-8 && w.abs() >= 1e-2 && control.abs() <= 1e-10, msg.clone(), msg)
}

fn c8_steklov_interval() -> Outcome {
    let s = steklov_modes(unit(), 1.0, 1.0).map_err(|e| e.to_string())?;
    // [s₁, s₁]_∇ by 8-point Gauss-Legendre (exact for the constant integrand)
    let nodes = [
        0.183_434_642_495_649_8,
        -0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        -0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        -0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
        -0.960_289_856_497_536_3,
    ];
    let weights = [
        0.362_683_783_378_362,
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
        0.101_228_536_290_376_3,
    ];
    let mut grad = 0.0;
    for (t, w) in nodes.iter().zip(weights) {
        let dv = s.eval(1, 0.5 * (t + 1.0)).map_err(|e| e.to_string())?.1;
        grad += 0.5 * w * dv * dv;
    }
    let at = |x: f64| s.eval(1, x).map(|v| v.0).map_err(|e| e.to_string());
    let boundary = at(0.0)?.powi(2) + at(1.0)?.powi(2);
    let deltas = s.values();
    let err = [
        (deltas[0] - 0.0).abs(),
        (deltas[1] - 2.0).abs(),
        (grad - 2.0 / 3.0).abs(),
        (boundary - 1.0 / 3.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let msg = format!(
        "{} modes, delta = {deltas:?}, [s1,s1]_grad = {grad:.15}, <s1,s1>_b = {boundary:.15}, max error {err:.1e} (tol 1e-12)",
        s.modes.len()
    );
    check(s.modes.len() == 2 && err <= 1e-12, msg.clone(), msg)
}

fn c9_trace_blocks() -> Outcome {
    let blocks = build_trace_blocks(RectangleDomain::unit_square(), 4).map_err(|e| e.to_string())?;
    let sizes = blocks.sizes();
    let g = cross_gram(&blocks).map_err(|e| e.to_string())?;
    // ẽ₁ ⊗ s₀ is a block basis element but not harmonic
    let v1 = TraceDyad {
        block: Block::V1,
        x: FactorMode::Dirichlet(1),
        y: FactorMode::Steklov(0),
    };
    let lap = laplacian_norm(&blocks, &v1).map_err(|e| e.to_string())?;
    // s₁ ⊗ s₁ on (0,2)x(0,1) and s₀ ⊗ s₁ on the unit square are harmonic but not Steklov eigenfunctions
    let wide = build_trace_blocks(RectangleDomain::with_lengths(2.0, 1.0).unwrap(), 1).map_err(|e| e.to_string())?;
    let ss = |x, y| TraceDyad {
        block: Block::V0,
        x: FactorMode::Steklov(x),
        y: FactorMode::Steklov(y),
    };
    let st_wide = steklov_defect_dyad(&wide, &ss(1, 1)).map_err(|e| e.to_string())?.residual;
    let st_square = steklov_defect_dyad(&blocks, &ss(0, 1)).map_err(|e| e.to_string())?.residual;
    let msg = format!(
        "sizes {sizes:?}, cross-Gram deviation {:.2e} (tol 1e-9), laplacian norm {lap:.3} , steklov residuals {st_wide:.3} / {st_square:.3} (need >= 1e-2)",
        g.deviation
    );
    check(
        sizes == [16, 4, 8, 8] && g.deviation <= 1e-9 && lap >= 1e-2 && st_wide >= 1e-2 && st_square >= 1e-2,
        msg.clone(),
        msg,
    )
}

fn c10_parseval() -> Outcome {
    let basis = build_product_basis(combo(d(), d()), RectangleDomain::unit_square(), 2500).map_err(|e| e.to_string())?;
    let f = |x: f64, y: f64| x * (1.0 - x) * y * (1.0 - y);
    let rep = parseval_check(f, &basis, 2500).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (p, c) in basis.pairs.iter().zip(&rep.coefficients) {
        let want = if p.j % 2 == 1 && p.k % 2 == 1 {
            32.0 / ((p.j * p.j * p.j * p.k * p.k * p.k) as f64 * PI.powi(6))
        } else {
            0.0
        };
        worst = worst.max((c - want).abs());
    }
    let msg = format!(
        "relative defect {:.2e} (tol 1e-6), max coefficient error {worst:.2e} (tol 1e-10)",
        rep.relative_defect
    );
    check(rep.relative_defect.abs() <= 1e-6 && worst <= 1e-10, msg.clone(), msg)
}

/// `u(1/2, 1/2)` for `−Δu = 1` on the unit square with zero boundary values,
/// summed in one direction in closed form.
fn poisson_center() -> f64 {
    (1..400)
        .step_by(2)
        .map(|j| {
            let a = j as f64 * PI;
            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
            4.0 * sign / a.powi(3) * (1.0 - 1.0 / (a / 2.0).cosh())
        })
        .sum()
}

fn c11_solver() -> Outcome {
    let sq = RectangleDomain::unit_square();
    let dd = combo(d(), d());
    let f = |x: f64, y: f64| (PI * x).sin() * (PI * y).sin();
    let s = solve_modal(dd, sq, f, 0.0, 1, ZeroMode::Reject).map_err(|e| e.to_string())?;
    let mut single: f64 = 0.0;
    for (x, y) in [(0.5, 0.5), (0.1, 0.3), (0.77, 0.41)] {
        single = single.max((s.eval(x, y).map_err(|e| e.to_string())? - f(x, y) / (2.0 * PI * PI)).abs());
    }
    let center = solve_modal(dd, sq, |_, _| 1.0, 0.0, 64 * 64, ZeroMode::Reject)
        .map_err(|e| e.to_string())?
        .eval(0.5, 0.5)
        .map_err(|e| e.to_string())?;
    let oracle = poisson_center();
    let rr = combo(r1(), r1());
    let e32 = compare_fem(rr, sq, |_, _| 1.0, 1.0, 1.0 / 32.0, 400).map_err(|e| e.to_string())?.l2_error;
    let e64 = compare_fem(rr, sq, |_, _| 1.0, 1.0, 1.0 / 64.0, 400).map_err(|e| e.to_string())?.l2_error;
    let ratio = e32 / e64;
    let msg = format!(
        "single mode error {single:.1e} (tol 1e-12), center {center:.10} vs {oracle:.10} (tol 1e-6), fem error ratio {ratio:.3} in [3.5, 4.5]"
    );
    check(
        single <= 1e-12 && (center - oracle).abs() <= 1e-6 && (3.5..=4.5).contains(&ratio),
        msg.clone(),
        msg,
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("factor ground truth", c1_factor_ground_truth),
        ("dirichlet product spectrum", c2_dirichlet_product_spectrum),
        ("neumann product spectrum", c3_neumann_product_spectrum),
        ("robin product spectrum", c4_robin_product_spectrum),
        ("normalization identities", c5_normalization_identities),
        ("gram identity", c6_gram_identity),
        ("two-parameter residuals", c7_two_parameter),
        ("steklov interval", c8_steklov_interval),
        ("trace blocks", c9_trace_blocks),
        ("parseval", c10_parseval),
        ("separable solver", c11_solver),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(m) => println!("PASS {:>2} {name}: {m} [{secs:.2}s]", i + 1),
            Err(m) => {
                println!("FAIL {:>2} {name}: {m} [{secs:.2}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
