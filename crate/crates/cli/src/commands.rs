use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::{Signed, Zero};
use ruelle::cantor::{self, CellFunction};
use ruelle::fixedpoint::{self, CantorFixedSequence, EnergyRecursion};
use ruelle::numbers::{format_rational, parse_rational, rat, to_f64};
use ruelle::solenoid::{
    self, CircleSystem, CocycleVerdict, Overall, Point, SolenoidSystem, SystemFunction,
    TwoCircleSystem, Verdict,
};
use ruelle::{Filter, LaurentPoly, Rational};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::report::{exact, Report, RunConfig, Table};

pub fn config(cli: &Cli, command: &str, params: Value) -> RunConfig {
    let format = if cli.json {
        "json"
    } else if cli.csv {
        "csv"
    } else {
        "text"
    };
    RunConfig {
        command: command.into(),
        seed: cli.seed,
        format,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        params: match params {
            Value::Object(m) => m,
            _ => Map::new(),
        },
    }
}

pub fn build_filter(a: &FilterArgs) -> Result<Filter> {
    Ok(match a.filter {
        FilterKind::Cantor => Filter::cantor(),
        FilterKind::Haar => Filter::haar(),
        FilterKind::Trivial => Filter::trivial(a.branches)?,
        FilterKind::Custom => {
            let num = a
                .numerator
                .as_deref()
                .ok_or_else(|| anyhow!("--filter custom needs --numerator"))?;
            Filter::new(num.parse()?, a.half_scale, a.branches)?
        }
    })
}

fn filter_params(f: &Filter) -> Value {
    json!({
        "numerator": f.numerator().to_string(),
        "half_scale": f.half_scale(),
        "branches": f.branch_count(),
    })
}

fn resolve_steps(a: &VerifyArgs) -> u32 {
    a.n_max.unwrap_or_else(|| {
        fixedpoint::max_growth_steps(a.truncation)
            .map_or(1, |m| m.min(10))
            .max(1)
    })
}

fn add_residual_checks(report: &mut Report, seq: &CantorFixedSequence) -> Value {
    let residual = fixedpoint::fixed_point_residual(seq);
    report.check(
        "residual",
        residual.is_exact_fixed_point(),
        format!(
            "max |r_k| = {} over |k| <= {}",
            format_rational(&residual.max_abs_residual),
            residual.checked_range
        ),
    );
    report.check(
        "structure",
        seq.is_antisymmetric() && seq.has_even_support(),
        "a_(-n) = -a_n and a_n = 0 for odd n",
    );
    report.note("checked range", format!("|k| <= {}", residual.checked_range));
    json!({
        "max_abs": exact(&residual.max_abs_residual),
        "checked_range": residual.checked_range,
        "violations": residual
            .violations
            .iter()
            .map(|(k, r)| json!({ "k": k, "r": exact(r) }))
            .collect::<Vec<_>>(),
    })
}

/// Runs the growth checks and returns the JSON rows and the CSV table.
fn add_growth_checks(
    report: &mut Report,
    seq: &CantorFixedSequence,
    n_max: u32,
    c: &Rational,
) -> Result<(Value, Table)> {
    let growth = fixedpoint::energy_growth(seq, n_max)?;
    let ratio = rat(3, 2);
    let mut table = Table::new(&["n", "S_n_num", "S_n_den", "S_n_float", "bound_float"]);
    let mut first_failure = None;
    let mut rows = Vec::new();
    for (n, s) in &growth {
        let bound = c * num_traits::pow(ratio.clone(), *n as usize);
        if s < &bound && first_failure.is_none() {
            first_failure = Some(*n);
        }
        table.push([
            n.to_string(),
            s.numer().to_string(),
            s.denom().to_string(),
            to_f64(s).to_string(),
            to_f64(&bound).to_string(),
        ]);
        rows.push(json!({ "n": n, "S_n": exact(s), "bound": exact(&bound) }));
    }
    report.check(
        "growth bound",
        first_failure.is_none(),
        match first_failure {
            None => format!("S_n >= {}*(3/2)^n for n <= {n_max}", format_rational(c)),
            Some(n) => format!("fails at n = {n}"),
        },
    );
    let increasing = growth.windows(2).all(|w| w[1].1 > w[0].1);
    report.check("strictly increasing", increasing, "S_0 < S_1 < ... < S_n_max");

    let mut rec = EnergyRecursion::new(seq);
    let mut tails = Vec::new();
    for step in 0..=n_max {
        if step > 0 {
            rec.advance();
        }
        tails.push(rec.monotone_tail());
    }
    let tail_fail = tails.iter().position(|ok| !ok);
    report.check(
        "monotone tail",
        tail_fail.is_none(),
        match tail_fail {
            None => format!("b_k >= b_(k+2) >= 0 on [3^n, K - 2*3^n] for n <= {n_max}"),
            Some(n) => format!("fails at n = {n}"),
        },
    );
    report.note(
        "S_n",
        growth
            .iter()
            .map(|(_, s)| format!("{:.6}", to_f64(s)))
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok((json!({ "rows": rows, "monotone_tail": tails }), table))
}

fn fixed_point_config(cli: &Cli, name: &str, a: &VerifyArgs, with_growth: bool) -> Result<(RunConfig, Rational, u32)> {
    let c = parse_rational(&a.bound_constant)?;
    let n_max = resolve_steps(a);
    let params = if with_growth {
        json!({ "K": a.truncation, "n_max": n_max, "bound_constant": format_rational(&c) })
    } else {
        json!({ "K": a.truncation })
    };
    Ok((config(cli, name, params), c, n_max))
}

/// Residual and growth checks together.
pub fn cmd_verify_fixed_point(cli: &Cli, a: &VerifyArgs) -> Result<Report> {
    let (cfg, c, n_max) = fixed_point_config(cli, "verify-fixed-point", a, true)?;
    let mut report = Report::new(cfg);
    let seq = fixedpoint::build_sequence(a.truncation)?;
    let residual = add_residual_checks(&mut report, &seq);
    let (growth, table) = add_growth_checks(&mut report, &seq, n_max, &c)?;
    report.result = json!({ "residual": residual, "growth": growth });
    report.table = table;
    Ok(report)
}

pub fn cmd_fixedpoint_verify(cli: &Cli, a: &VerifyArgs) -> Result<Report> {
    let (cfg, _, _) = fixed_point_config(cli, "fixedpoint verify", a, false)?;
    let mut report = Report::new(cfg);
    let seq = fixedpoint::build_sequence(a.truncation)?;
    let residual = add_residual_checks(&mut report, &seq);
    let mut table = Table::new(&["k", "residual"]);
    for (k, r) in fixedpoint::fixed_point_residual(&seq).violations {
        table.push([k.to_string(), format_rational(&r)]);
    }
    report.result = json!({ "residual": residual });
    report.table = table;
    Ok(report)
}

pub fn cmd_fixedpoint_growth(cli: &Cli, a: &VerifyArgs) -> Result<Report> {
    let (cfg, c, n_max) = fixed_point_config(cli, "fixedpoint growth", a, true)?;
    let mut report = Report::new(cfg);
    let seq = fixedpoint::build_sequence(a.truncation)?;
    let (growth, table) = add_growth_checks(&mut report, &seq, n_max, &c)?;
    report.result = json!({ "growth": growth });
    report.table = table;
    Ok(report)
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::ChiC => "chi-c",
        Preset::HalfCell => "half-cell",
        Preset::Translate => "translate",
    }
}

pub fn cmd_cascade(cli: &Cli, a: &CascadeArgs) -> Result<Report> {
    let (source, seed_fn) = match &a.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let value: Value = serde_json::from_str(&text)?;
            (path.display().to_string(), CellFunction::from_json(&value)?)
        }
        None => (
            preset_name(a.preset).to_string(),
            match a.preset {
                Preset::ChiC => CellFunction::chi_c(),
                Preset::HalfCell => CellFunction::cell(1, 0),
                Preset::Translate => CellFunction::chi_c().translate(1),
            },
        ),
    };
    let tol = parse_rational(&a.tol)?;
    let mut report = Report::new(config(
        cli,
        "cascade",
        json!({
            "seed_function": source,
            "n_max": a.n_max,
            "max_iter": a.max_iter,
            "tol": format_rational(&tol),
        }),
    ));
    let rep = cantor::cascade_cross_check(&seed_fn, a.n_max, a.max_iter, &tol)?;
    let (estimate, final_mass) = rep.invariant.estimate();

    report.check(
        "exact agreement",
        rep.exact_agreement(),
        "cell norms equal the transfer-side integrals for every n",
    );
    report.check(
        "within mass bound",
        rep.within_bound(),
        format!(
            "|series_n - nu(h0)| <= mass_n + {} for every n",
            format_rational(final_mass)
        ),
    );
    report.note("h0", &rep.seed_correlation);
    report.note(
        "nu(h0) estimate",
        format!("{} (mass bound {})", format_rational(&estimate.re), format_rational(final_mass)),
    );
    report.note(
        "series",
        rep.steps
            .iter()
            .map(|s| format_rational(&s.cell_value))
            .collect::<Vec<_>>()
            .join(", "),
    );

    let mut table = Table::new(&["n", "value_num", "value_den", "float_value"]);
    for s in &rep.steps {
        table.push([
            s.n.to_string(),
            s.cell_value.numer().to_string(),
            s.cell_value.denom().to_string(),
            to_f64(&s.cell_value).to_string(),
        ]);
    }
    let mut result = rep.to_json();
    result["seed_function"] = seed_fn.to_json();
    result["nu_estimate"] = exact(&estimate.re);
    report.result = result;
    report.table = table;
    Ok(report)
}

pub fn cmd_transfer(cli: &Cli, a: &TransferArgs) -> Result<Report> {
    let f: LaurentPoly = a.poly.parse()?;
    let filter = build_filter(&a.filter)?;
    let tol = parse_rational(&a.tol)?;
    let mut report = Report::new(config(
        cli,
        "transfer",
        json!({
            "f": f.to_string(),
            "filter": filter_params(&filter),
            "max_iter": a.max_iter,
            "tol": format_rational(&tol),
        }),
    ));
    report.check("qmf", filter.qmf_check(), "c_(Nk) = delta_(k,0)");
    if !filter.qmf_check() {
        return Ok(report);
    }
    let rep = filter.iterate_to_invariant(&f, a.max_iter, &tol)?;
    report.check(
        "converged",
        rep.converged(),
        format!(
            "nonconstant mass {} after {} iterations",
            format_rational(rep.final_mass()),
            rep.iterations_used
        ),
    );
    if let Some(limit) = &rep.limit {
        let shown = if limit.im.is_zero() {
            format_rational(&limit.re)
        } else {
            format!("{} + {}i", format_rational(&limit.re), format_rational(&limit.im))
        };
        report.note("limit", shown);
    }
    report.note("iterations", rep.iterations_used);
    report.note("final iterate", &rep.final_iterate);

    let mut table = Table::new(&["n", "constant_re", "constant_im", "mass"]);
    for s in &rep.iterates {
        table.push([
            s.n.to_string(),
            format_rational(&s.constant.re),
            format_rational(&s.constant.im),
            format_rational(&s.mass),
        ]);
    }
    let mut result = rep.to_json();
    result["final_iterate"] = rep.final_iterate.to_json();
    report.result = result;
    report.table = table;
    Ok(report)
}

fn proportional_to_chi_c(f: &CellFunction) -> Result<bool> {
    let chi = CellFunction::chi_c();
    let ratio = f.inner(&chi)? / chi.squared_norm();
    Ok(!ratio.is_zero() && *f == chi.scale(&ratio))
}

pub fn cmd_nullspace(cli: &Cli, a: &NullspaceArgs) -> Result<Report> {
    let [lo, hi] = <[i64; 2]>::try_from(a.window.as_slice())
        .map_err(|_| anyhow!("--window takes two integers"))?;
    let mut report = Report::new(config(
        cli,
        "nullspace",
        json!({ "level": a.level, "window": [lo, hi] }),
    ));
    let basis = cantor::refinement_nullspace(a.level, lo, hi)?;
    let solves = basis.iter().all(|b| b.cascade() == *b);
    report.check("refinement equation", solves, "M f = f for every basis vector");
    let spans_chi_c = basis.len() == 1 && proportional_to_chi_c(&basis[0])?;
    report.note("dimension", basis.len());
    report.note("spanned by chi_C", spans_chi_c);

    let mut table = Table::new(&["vector", "offset", "coefficient"]);
    for (i, b) in basis.iter().enumerate() {
        for (k, c) in b.coeffs() {
            table.push([i.to_string(), k.to_string(), format_rational(c)]);
        }
    }
    report.result = json!({
        "dimension": basis.len(),
        "spanned_by_chi_c": spans_chi_c,
        "basis": basis.iter().map(CellFunction::to_json).collect::<Vec<_>>(),
    });
    report.table = table;
    Ok(report)
}

fn build_system(kind: SystemKind, branches: u32) -> Result<Box<dyn SolenoidSystem>> {
    Ok(match kind {
        SystemKind::Cantor => Box::new(CircleSystem::cantor()),
        SystemKind::Circle => Box::new(CircleSystem::trivial(branches)?),
        SystemKind::TwoCircle => Box::new(TwoCircleSystem::new(branches)?),
    })
}

fn estimate_json(e: &solenoid::McEstimate, exact_value: f64) -> Value {
    json!({
        "estimate": e.mean,
        "std_error": e.std_error,
        "samples": e.samples,
        "exact": exact_value,
        "within_3_sigma": e.within_three_sigma(exact_value),
    })
}

pub fn cmd_solenoid_walk(cli: &Cli, a: &WalkArgs) -> Result<Report> {
    let sys = build_system(a.system, a.branches)?;
    let sys = sys.as_ref();
    let poly: LaurentPoly = a.poly.parse()?;
    let f = SystemFunction::uniform(poly.clone(), sys.component_count());
    let x = Point::new(a.component, parse_rational(&a.angle)?);
    sys.check_point(&x)?;
    let mut report = Report::new(config(
        cli,
        "solenoid walk",
        json!({
            "system": sys.name(),
            "filter": filter_params(sys.filter(x.component)),
            "components": sys.component_count(),
            "angle": format_rational(&x.angle),
            "component": x.component,
            "len": a.len,
            "paths": a.paths,
            "f": poly.to_string(),
            "depth": a.depth,
        }),
    ));
    let filter = sys.filter(x.component);
    let len = a.len;

    let first = solenoid::transition_weights(sys, &x)?;
    let mut freq_rows = Vec::new();
    let mut freq_ok = true;
    for (y, w) in &first.branches {
        let est = solenoid::fixed_point_from_cocycle(
            sys,
            &x,
            |p| if p[1] == *y { 1.0 } else { 0.0 },
            1,
            a.paths,
            cli.seed,
        )?;
        let sigma = (w * (1.0 - w) / a.paths as f64).sqrt();
        let ok = (est.mean - w).abs() <= 3.0 * sigma + 1e-12;
        freq_ok &= ok;
        freq_rows.push(json!({
            "preimage": format_rational(&y.angle),
            "weight": w,
            "frequency": est.mean,
            "within_3_sigma": ok,
        }));
    }
    report.check("first-step frequencies", freq_ok, "empirical preimage frequencies within 3 sigma of W");

    let walk = solenoid::fixed_point_from_cocycle(
        sys,
        &x,
        |p| f.evaluate(&p[len]).re,
        len,
        a.paths,
        cli.seed,
    )?;
    let walk_exact = filter.apply_n(&poly, len).evaluate(&x.angle).re;
    report.check(
        "path expectation",
        walk.within_three_sigma(walk_exact),
        format!(
            "E[f(x_{len})] = {:.6} +/- {:.6}, exact (R^{len} f)(x) = {:.6}",
            walk.mean, walk.std_error, walk_exact
        ),
    );

    let depth = a.depth;
    let projection = solenoid::mu_infinity_integral(
        sys,
        |p| f.evaluate(&p[depth]).re,
        depth,
        a.paths,
        cli.seed,
    )?;
    let haar = to_f64(&poly.haar_integral().re);
    report.check(
        "mu_infinity projection",
        projection.within_three_sigma(haar),
        format!(
            "integral of f(x_{depth}) = {:.6} +/- {:.6}, Haar integral = {:.6}",
            projection.mean, projection.std_error, haar
        ),
    );

    let leaves = u128::from(sys.branch_count()).checked_pow(len as u32);
    let tree = match leaves {
        Some(l) if l <= solenoid::TREE_BUDGET => {
            let t = solenoid::tree_expectation(sys, &x, &f, len as u32)?;
            let gap = (t.re - walk_exact).abs();
            report.check("tree expectation", gap <= 1e-10, format!("|tree - exact| = {gap:.3e}"));
            json!({ "value": t.re, "gap": gap })
        }
        _ => Value::Null,
    };

    let max_defect = first
        .defect
        .abs()
        .max(walk.max_defect)
        .max(projection.max_defect);
    report.note("max weight defect", format!("{max_defect:.3e}"));

    let mut table = Table::new(&["quantity", "estimate", "std_error", "exact"]);
    table.push([
        format!("E[f(x_{len})]"),
        walk.mean.to_string(),
        walk.std_error.to_string(),
        walk_exact.to_string(),
    ]);
    table.push([
        format!("mu_inf f(x_{depth})"),
        projection.mean.to_string(),
        projection.std_error.to_string(),
        haar.to_string(),
    ]);
    report.result = json!({
        "seed": cli.seed,
        "defect": { "max": max_defect, "at_start": first.defect },
        "first_step": freq_rows,
        "path_expectation": estimate_json(&walk, walk_exact),
        "projection": estimate_json(&projection, haar),
        "tree": tree,
    });
    report.table = table;
    Ok(report)
}

fn verdict_label(v: Verdict) -> String {
    match v {
        Verdict::Trivial => "trivial".into(),
        Verdict::FlowsToConstant { steps } => format!("flows to constant in {steps}"),
        Verdict::Witness { steps } => format!("non-ergodic witness after {steps}"),
        Verdict::Undecided => "undecided".into(),
    }
}

pub fn cmd_ergodicity(cli: &Cli, a: &ErgodicityArgs) -> Result<Report> {
    let sys = build_system(a.system, a.branches)?;
    let sys = sys.as_ref();
    let comps = sys.component_count();
    let mut report = Report::new(config(
        cli,
        "ergodicity",
        json!({
            "system": sys.name(),
            "branches": sys.branch_count(),
            "components": comps,
            "max_k": a.max_k,
            "steps": a.steps,
            "paths": a.paths,
            "len": a.len,
        }),
    ));

    let mut labels = vec!["1".to_string()];
    let mut tests = vec![SystemFunction::uniform(LaurentPoly::one(), comps)];
    for k in (-a.max_k..=a.max_k).filter(|&k| k != 0) {
        labels.push(format!("z^{k}"));
        tests.push(SystemFunction::uniform(LaurentPoly::monomial(k), comps));
    }
    if comps > 1 {
        for c in 0..comps {
            labels.push(format!("indicator({c})"));
            tests.push(SystemFunction::indicator(c, comps)?);
        }
    }
    let rep = solenoid::ergodicity_diagnostic(sys, &tests, a.steps)?;
    let overall = match rep.overall {
        Overall::ConsistentWithErgodic => "consistent with ergodic",
        Overall::NonErgodic => "non-ergodic witness found",
        Overall::Inconclusive => "inconclusive",
    };
    report.check(
        "diagnostic decided",
        rep.overall != Overall::Inconclusive,
        format!("{overall} ({} test functions)", tests.len()),
    );

    let mut table = Table::new(&["test", "verdict"]);
    let mut entries = Vec::new();
    let mut cocycles = Vec::new();
    let start = rat(1, 7);
    for (label, e) in labels.iter().zip(&rep.entries) {
        table.push([label.clone(), verdict_label(e.verdict)]);
        entries.push(json!({ "test": label, "verdict": verdict_label(e.verdict) }));
        if !matches!(e.verdict, Verdict::Witness { .. }) {
            continue;
        }
        for c in 0..comps {
            let x = Point::new(c, start.clone());
            let limit = solenoid::cocycle_limit(
                sys,
                &e.final_function,
                &x,
                a.len,
                a.paths,
                cli.seed,
                0.0,
            )?;
            let target = e.final_function.evaluate(&x);
            let limits_match = limit.paths.iter().all(|p| p.limit == target);
            let ok = limit.verdict == CocycleVerdict::Cocycle && limits_match;
            report.check(
                &format!("cocycle {label} from component {c}"),
                ok,
                format!(
                    "max tail oscillation {} on {} paths, limit {}",
                    limit.max_oscillation,
                    limit.paths.len(),
                    target.re
                ),
            );
            cocycles.push(json!({
                "test": label,
                "component": c,
                "max_oscillation": limit.max_oscillation,
                "limit": target.re,
                "paths": limit.paths.len(),
            }));
        }
    }
    report.note("verdict", overall);
    report.result = json!({
        "overall": overall,
        "entries": entries,
        "cocycles": cocycles,
    });
    report.table = table;
    Ok(report)
}

pub fn cmd_detail_basis(cli: &Cli, a: &DetailArgs) -> Result<Report> {
    if a.window > 8 {
        bail!("--window above 8 is too large for exact Gram-Schmidt");
    }
    let mut report = Report::new(config(cli, "detail-basis", json!({ "window": a.window })));
    let basis = cantor::detail_basis(a.window)?;
    let expected = 2 * 3usize.pow(a.window.saturating_sub(1));
    report.check(
        "dimension",
        basis.len() == expected,
        format!("{} generators, expected two per integer translate ({expected})", basis.len()),
    );
    let mut orthogonal = true;
    for i in 0..basis.len() {
        for j in 0..i {
            orthogonal &= basis[i].0.inner(&basis[j].0)?.is_zero();
        }
    }
    report.check("mutually orthogonal", orthogonal, "<g_i, g_j> = 0 for i != j");
    let detail = basis.iter().all(|(g, _)| g.mra_project(0).is_zero());
    report.check("orthogonal to V0", detail, "projection onto V0 vanishes");
    let positive = basis
        .iter()
        .all(|(g, n)| n.is_positive() && g.squared_norm() == *n);
    report.check("norms", positive, "recorded squared norms are exact and positive");

    let mut table = Table::new(&["generator", "offset", "coefficient", "squared_norm"]);
    for (i, (g, n)) in basis.iter().enumerate() {
        for (k, c) in g.coeffs() {
            table.push([i.to_string(), k.to_string(), format_rational(c), format_rational(n)]);
        }
    }
    report.note("generators", basis.len());
    report.result = json!({
        "generators": basis
            .iter()
            .map(|(g, n)| json!({ "function": g.to_json(), "squared_norm": exact(n) }))
            .collect::<Vec<_>>(),
    });
    report.table = table;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn filter_args(kind: FilterKind, numerator: Option<&str>) -> FilterArgs {
        FilterArgs {
            filter: kind,
            numerator: numerator.map(String::from),
            half_scale: 1,
            branches: 3,
        }
    }

    #[test]
    fn filters_from_arguments() {
        assert_eq!(build_filter(&filter_args(FilterKind::Cantor, None)).unwrap(), Filter::cantor());
        assert!(build_filter(&filter_args(FilterKind::Custom, None)).is_err());
        let custom = build_filter(&filter_args(FilterKind::Custom, Some("1 + z^2"))).unwrap();
        assert_eq!(custom, Filter::cantor());
        assert!(build_filter(&filter_args(FilterKind::Trivial, None)).unwrap().has_unit_weight());
    }

    #[test]
    fn config_records_format_and_params() {
        let cli = Cli::parse_from(["ruelle", "--csv", "--seed", "7", "transfer", "--f", "z"]);
        let c = config(&cli, "transfer", json!({ "f": "z" }));
        assert_eq!((c.format, c.seed), ("csv", 7));
        assert_eq!(c.params["f"], "z");
    }

    #[test]
    fn nullspace_window_parsing_accepts_negatives() {
        let cli = Cli::parse_from(["ruelle", "nullspace", "--level", "1", "--window", "-2", "3"]);
        let Command::Nullspace(a) = &cli.command else {
            panic!("wrong subcommand");
        };
        let report = cmd_nullspace(&cli, a).unwrap();
        assert_eq!(report.result["dimension"], 1);
    }

    #[test]
    fn verify_defaults_to_largest_allowed_steps() {
        let cli = Cli::parse_from(["ruelle", "verify-fixed-point", "--K", "729"]);
        let Command::VerifyFixedPoint(a) = &cli.command else {
            panic!("wrong subcommand");
        };
        let report = cmd_verify_fixed_point(&cli, a).unwrap();
        assert_eq!(report.config.params["n_max"], 4);
        assert!(report.passed());
        assert_eq!(report.table.rows.len(), 5);
    }
}
