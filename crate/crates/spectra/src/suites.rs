use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;

use serde_json::json;
use spectra_core::fem::{assemble, lowest_values, steklov_gevp, Mesh};
use spectra_core::product::{build_product_basis, EnergyForm};
use spectra_core::solver::{compare_with_fem, solve_modal, ZeroMode};
use spectra_core::trace::{build_trace_blocks, cross_gram, steklov_defect_dyad};
use spectra_core::verify::{
    gram_product, nonorthogonality_witness_with, normalization_checks, parseval_check, two_param_residual,
    weak_residual_factor, weak_residual_product, InnerProductKind,
};
use spectra_core::{
    factor_modes, two_param_pairs, validate_spec, BcKind, ComboSpec, Interval, RectangleDomain,
};

use crate::args::{
    combo, combo_with, condition, FactorArgs, Lengths, OracleArgs, ProductArgs, RhsArg, SolveArgs, Suite,
    TraceArgs, TwoParamArgs, VerifyArgs,
};
use crate::io::{write_csv_file, write_dump, MatrixKind};
use crate::report::Report;
use crate::RunError;

fn domain(l: &Lengths) -> Result<RectangleDomain, RunError> {
    Ok(RectangleDomain::with_lengths(l.length, l.length2)?)
}

fn validated(domain: &RectangleDomain, combo: ComboSpec) -> Result<ComboSpec, RunError> {
    let report = validate_spec(domain, &combo);
    if report.is_empty() {
        Ok(combo)
    } else {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        Err(RunError::Invalid(msgs.join("; ")))
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn rhs_fn(rhs: RhsArg, dom: RectangleDomain) -> impl Fn(f64, f64) -> f64 {
    let (l1, l2) = (dom.factor1.length(), dom.factor2.length());
    let (a1, a2) = (dom.factor1.a(), dom.factor2.a());
    move |x, y| {
        let (s, t) = (x - a1, y - a2);
        match rhs {
            RhsArg::One => 1.0,
            RhsArg::Sine => (PI * s / l1).sin() * (PI * t / l2).sin(),
            RhsArg::Bubble => s * (l1 - s) * t * (l2 - t),
        }
    }
}

pub fn factor(a: &FactorArgs) -> Result<Report, RunError> {
    let interval = Interval::with_length(a.length)?;
    let bc = condition(a.bc, (a.b_left, a.b_right));
    let basis = factor_modes(interval, &bc, a.modes)?;
    let mut modes = Vec::new();
    let mut worst: f64 = 0.0;
    for m in &basis.modes {
        let r = weak_residual_factor(m, &bc, interval)?;
        worst = worst.max(r);
        modes.push(json!({ "index": m.index, "value": m.value, "residual": r }));
    }
    let results = json!({
        "eigenvalues": basis.values(),
        "modes": modes,
        "max_residual": worst,
    });
    Ok(Report::new("factor", a, results)
        .tolerance("residual", a.tol)
        .pass(worst <= a.tol))
}

pub fn product(a: &ProductArgs) -> Result<Report, RunError> {
    let dom = domain(&a.lengths)?;
    let c = validated(&dom, combo(a.combo, &a.weights))?;
    let basis = build_product_basis(c, dom, a.n)?;
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for (p, (pair, s)) in basis.pairs.iter().zip(&basis.scalings).enumerate() {
        let r = weak_residual_product(&basis, p)?;
        worst = worst.max(r);
        pairs.push(json!({
            "j": pair.j,
            "k": pair.k,
            "value": pair.combined_value,
            "l2_scale": s.l2_scale,
            "energy_scale": s.energy_scale,
            "residual": r,
        }));
    }
    let results = json!({
        "combo": c.code(),
        "energy_form": format!("{:?}", basis.energy_form).to_lowercase(),
        "pairs": pairs,
        "max_residual": worst,
    });
    Ok(Report::new("product", a, results)
        .tolerance("residual", a.tol)
        .pass(worst <= a.tol))
}

fn energy_kind(form: EnergyForm) -> InnerProductKind {
    match form {
        EnergyForm::Gradient => InnerProductKind::GradOnly,
        EnergyForm::H1 => InnerProductKind::H1Full,
        EnergyForm::BWeighted => InnerProductKind::BWeighted,
    }
}

fn has_robin(c: &ComboSpec) -> bool {
    c.bc1.kind == BcKind::Robin || c.bc2.kind == BcKind::Robin
}

pub fn verify(a: &VerifyArgs) -> Result<Report, RunError> {
    let dom = domain(&a.lengths)?;
    let report = match a.suite {
        Suite::Gram => {
            let c = validated(&dom, combo(a.combo, &a.weights))?;
            let tol = a.tol.unwrap_or(if has_robin(&c) { 1e-8 } else { 1e-9 });
            let basis = build_product_basis(c, dom, a.n)?;
            let ek = energy_kind(basis.energy_form);
            let l2 = gram_product(&basis, InnerProductKind::L2, a.n)?;
            let en = gram_product(&basis, ek, a.n)?;
            if let Some(path) = &a.csv {
                write_csv_file(path, &en.matrix, en.order)?;
            }
            let results = json!({
                "suite": "gram",
                "combo": c.code(),
                "l2": { "deviation": l2.deviation, "worst": l2.worst },
                "energy": { "inner_product": ek.name(), "deviation": en.deviation, "worst": en.worst },
            });
            Report::new("verify", a, results)
                .tolerance("gram_deviation", tol)
                .pass(l2.deviation <= tol && en.deviation <= tol)
        }
        Suite::Normalization => {
            let checks = normalization_checks(&dom, a.weights.first((1.0, 1.0)), a.weights.second((1.0, 1.0)), a.n)?;
            let pass_of = |dev: f64, own: f64| dev <= a.tol.unwrap_or(own);
            let list: Vec<_> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "checked": c.checked,
                        "max_deviation": c.max_deviation,
                        "tolerance": a.tol.unwrap_or(c.tolerance),
                        "pass": pass_of(c.max_deviation, c.tolerance),
                    })
                })
                .collect();
            let pass = checks.iter().all(|c| pass_of(c.max_deviation, c.tolerance));
            let mut r = Report::new("verify", a, json!({ "suite": "normalization", "checks": list })).pass(pass);
            match a.tol {
                Some(t) => r = r.tolerance("identity", t),
                None => {
                    r = r
                        .tolerance("closed_form", spectra_core::verify::normalization::CLOSED_FORM_TOL)
                        .tolerance("root_found", spectra_core::verify::normalization::ROOT_FOUND_TOL)
                }
            }
            r
        }
        Suite::Residual => {
            let c = validated(&dom, combo(a.combo, &a.weights))?;
            let tol = a.tol.unwrap_or(1e-8);
            let basis = build_product_basis(c, dom, a.n)?;
            let res = (0..basis.len())
                .map(|p| weak_residual_product(&basis, p))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = max_of(res.iter().copied());
            let results = json!({ "suite": "residual", "combo": c.code(), "residuals": res, "max_residual": worst });
            Report::new("verify", a, results).tolerance("residual", tol).pass(worst <= tol)
        }
        Suite::Parseval => {
            let c = validated(&dom, combo(a.combo, &a.weights))?;
            let tol = a.tol.unwrap_or(1e-6);
            let basis = build_product_basis(c, dom, a.n)?;
            let rep = parseval_check(rhs_fn(a.rhs, dom), &basis, a.n)?;
            let results = json!({
                "suite": "parseval",
                "combo": c.code(),
                "coefficients": rep.coefficients,
                "norm_sq": rep.norm_sq,
                "defect": rep.defect,
                "relative_defect": rep.relative_defect,
            });
            Report::new("verify", a, results)
                .tolerance("relative_defect", tol)
                .pass(rep.relative_defect.abs() <= tol)
        }
        Suite::Witness => {
            let (bl, br) = a.weights.second((1.0, 2.0));
            let w = nonorthogonality_witness_with(bl, br)?;
            let asymmetric = bl != br;
            let min_abs = 1e-2;
            let control = a.tol.unwrap_or(1e-10);
            let grad_ok = if asymmetric {
                w.gradient_inner.abs() >= min_abs
            } else {
                w.gradient_inner.abs() <= control
            };
            let results = json!({
                "suite": "witness",
                "b2": [bl, br],
                "gradient_inner": w.gradient_inner,
                "boundary_inner": w.boundary_inner,
            });
            Report::new("verify", a, results)
                .tolerance("witness_min_abs", min_abs)
                .tolerance("symmetric_control", control)
                .tolerance("boundary_inner", 1e-12)
                .pass(grad_ok && w.boundary_inner.abs() <= 1e-12)
        }
    };
    Ok(report)
}

fn elements(length: f64, h: f64) -> Result<usize, RunError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(RunError::Invalid(format!("--h must be positive, got {h}")));
    }
    Ok((length / h).round().max(2.0) as usize)
}

fn compare(fem: &[f64], exact: &[f64]) -> (Vec<f64>, f64) {
    let errs: Vec<f64> = fem
        .iter()
        .zip(exact)
        .map(|(f, e)| if *e == 0.0 { f.abs() } else { (f - e).abs() / e.abs() })
        .collect();
    let worst = max_of(errs.iter().copied());
    (errs, worst)
}

pub fn oracle(a: &OracleArgs) -> Result<Report, RunError> {
    let (asm, exact, label) = match (a.combo, a.bc) {
        (Some(c), None) => {
            let dom = domain(&a.lengths)?;
            let c = validated(&dom, combo(c, &a.weights))?;
            if !c.is_single_parameter() {
                return Err(RunError::Invalid(format!(
                    "oracle compares single-parameter spectra; {} is two-parameter",
                    c.code()
                )));
            }
            let (nx, ny) = (elements(dom.factor1.length(), a.h)?, elements(dom.factor2.length(), a.h)?);
            let asm = assemble(&Mesh::grid_2d(dom, nx, ny)?, c)?;
            let exact: Vec<f64> = build_product_basis(c, dom, a.modes)?.pairs.iter().map(|p| p.combined_value).collect();
            (asm, exact, c.code())
        }
        (None, Some(kind)) => {
            let iv = Interval::with_length(a.lengths.length)?;
            let bc = condition(kind, a.weights.first((1.0, 1.0)));
            let asm = assemble(&Mesh::uniform_1d(iv, elements(iv.length(), a.h)?)?, bc)?;
            let exact = factor_modes(iv, &bc, a.modes)?.values();
            (asm, exact, bc.kind.to_string().to_lowercase())
        }
        _ => return Err(RunError::Invalid("oracle needs exactly one of --combo or --bc".into())),
    };
    let fem = if a.bc == Some(crate::args::BcArg::Steklov) {
        steklov_gevp(&asm, exact.len())?.into_iter().map(|p| p.value).collect()
    } else {
        lowest_values(&asm.energy(), &asm.m, exact.len())?
    };
    if let Some(path) = &a.csv {
        write_csv_file(path, &asm.energy().to_dense(), asm.unknowns())?;
    }
    if let Some(path) = &a.dump {
        let mut w = BufWriter::new(File::create(path)?);
        write_dump(&mut w, MatrixKind::Stiffness, &asm.k)?;
        write_dump(&mut w, MatrixKind::Mass, &asm.m)?;
        write_dump(&mut w, MatrixKind::Boundary, &asm.b)?;
    }
    let (errors, worst) = compare(&fem, &exact);
    let (ex, ey) = asm.mesh.elements();
    let results = json!({
        "problem": label,
        "elements": if asm.mesh.rectangle().is_some() { json!([ex, ey]) } else { json!([ex]) },
        "unknowns": asm.unknowns(),
        "fem": fem,
        "exact": exact,
        "errors": errors,
        "max_error": worst,
    });
    Ok(Report::new("oracle", a, results)
        .tolerance("eigenvalue", a.tol)
        .pass(worst <= a.tol))
}

pub fn two_param(a: &TwoParamArgs) -> Result<Report, RunError> {
    let dom = domain(&a.lengths)?;
    let c = validated(&dom, combo_with(a.combo, &a.weights, (1.0, 1.0)))?;
    let fam = two_param_pairs(c, dom, a.n)?;
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for p in &fam.pairs {
        let r = two_param_residual(&fam, p.index.j, p.index.k, p.lambda, p.delta)?;
        worst = worst.max(r);
        pairs.push(json!({ "j": p.index.j, "k": p.index.k, "lambda": p.lambda, "delta": p.delta, "residual": r }));
    }
    let results = json!({ "combo": c.code(), "pairs": pairs, "max_residual": worst });
    Ok(Report::new("two-param", a, results)
        .tolerance("residual", a.tol)
        .pass(worst <= a.tol))
}

pub fn trace(a: &TraceArgs) -> Result<Report, RunError> {
    let dom = domain(&a.lengths)?;
    let blocks = build_trace_blocks(dom, a.n)?;
    let g = cross_gram(&blocks)?;
    if let Some(path) = &a.csv {
        write_csv_file(path, &g.matrix, g.order)?;
    }
    let mut v0 = Vec::new();
    for d in &blocks.v0 {
        let s = steklov_defect_dyad(&blocks, d)?;
        v0.push(json!({ "dyad": format!("{:?}x{:?}", d.x, d.y), "delta": s.delta, "residual": s.residual }));
    }
    let [n00, n0, n1, n2] = blocks.sizes();
    let results = json!({
        "sizes": { "h0xh0": n00, "v0": n0, "v1": n1, "v2": n2 },
        "gram_order": g.order,
        "gram_deviation": g.deviation,
        "max_cross_block": g.max_cross_block,
        "v0_steklov": v0,
    });
    Ok(Report::new("trace", a, results)
        .tolerance("gram_deviation", a.tol)
        .pass(g.deviation <= a.tol))
}

pub fn solve(a: &SolveArgs) -> Result<Report, RunError> {
    let dom = domain(&a.lengths)?;
    let c = validated(&dom, combo(a.combo, &a.weights))?;
    let f = rhs_fn(a.rhs, dom);
    let zero = if a.skip_zero_mode { ZeroMode::Skip } else { ZeroMode::Reject };
    let sol = solve_modal(c, dom, &f, a.mu, a.n, zero)?;
    let (lhs, rhs) = sol.energy_identity();
    let identity = if rhs != 0.0 { (lhs - rhs).abs() / rhs.abs() } else { (lhs - rhs).abs() };
    let (cx, cy) = (
        0.5 * (dom.factor1.a() + dom.factor1.b()),
        0.5 * (dom.factor2.a() + dom.factor2.b()),
    );
    let center = sol.eval(cx, cy)?;
    let u_norm = sol.l2_norm();
    let f_norm = sol.rhs_norm_sq.sqrt();
    let resolvent_ok = a.mu <= 0.0 || u_norm <= f_norm / a.mu;
    let fem = match a.h {
        Some(h) => {
            let cmp = compare_with_fem(&sol, &f, h)?;
            json!({ "elements": [cmp.elements.0, cmp.elements.1], "l2_error": cmp.l2_error, "max_nodal_error": cmp.max_nodal_error })
        }
        None => serde_json::Value::Null,
    };
    let results = json!({
        "combo": c.code(),
        "pairs": sol.basis.len(),
        "center": [cx, cy],
        "center_value": center,
        "l2_norm": u_norm,
        "rhs_l2_norm": f_norm,
        "energy_identity": { "lhs": lhs, "rhs": rhs, "relative_difference": identity },
        "resolvent_bound_holds": resolvent_ok,
        "fem": fem,
    });
    Ok(Report::new("solve", a, results)
        .tolerance("energy_identity", a.tol)
        .pass(identity <= a.tol && resolvent_ok))
}
