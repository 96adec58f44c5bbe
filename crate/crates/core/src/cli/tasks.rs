use crate::descriptor::{load_map, LoadedMap, LoadedSpace, ProblemFile};
use crate::error::{Error, Result};
use crate::multi::{
    check_condition_i_multi, enumerate_fixed_points_multi, multi_orbit, verify_nadler,
    verify_three_point_multi, MultiClass, MultiMap,
};
use crate::phifun::ComparisonFunction;
use crate::single::{
    check_no_two_cycles, enumerate_fixed_points_single, fit_min_lambda, picard_orbit,
    sampled_ratio_scan, verify_banach, verify_three_point_single, LambdaFit, SampledDomain,
    SingleMap, Tau0Status,
};
use crate::spaces::{comparability_kappa, validate_distance_table, DistanceKind, TriMetricSpace};

use super::report::{
    contraction_verdict, labels_of, Cell, Report, ReportTable, Trace, Verdict, WitnessEntry,
};
use super::RunOptions;

/// Above this comparability constant the sampled continuity argument is
/// numerically meaningless, so `--kappa` flags it.
const KAPPA_WARN: f64 = 1e6;

const SEMIMETRIC_WARNING: &str = "semimetric kind: triangle inequality not checked";

fn space_of(file: &ProblemFile) -> Result<LoadedSpace> {
    file.space
        .as_ref()
        .ok_or_else(|| Error::structural("problem file needs a \"space\""))?
        .load()
}

fn map_of(file: &ProblemFile, space: &LoadedSpace) -> Result<LoadedMap> {
    let map = file
        .map
        .as_ref()
        .ok_or_else(|| Error::structural("problem file needs a \"map\""))?;
    load_map(map, &space.points)
}

/// `phi` if given, else `linear(lambda)`.
fn phi_of(file: &ProblemFile) -> Result<ComparisonFunction> {
    match (&file.phi, file.lambda) {
        (Some(p), _) => p.build(),
        (None, Some(l)) => ComparisonFunction::linear(l.value()),
        (None, None) => Err(Error::structural(
            "single-valued problems need \"phi\" or \"lambda\"",
        )),
    }
}

fn lambda_class_of(file: &ProblemFile) -> Result<(f64, MultiClass)> {
    let lambda = file
        .lambda
        .ok_or_else(|| Error::structural("multi-valued problems need \"lambda\""))?
        .value();
    let class = file
        .class
        .ok_or_else(|| Error::structural("multi-valued problems need \"class\""))?;
    class.check_lambda(lambda)?;
    Ok((lambda, class))
}

fn note_semimetrics(report: &mut Report, space: &LoadedSpace) {
    if space
        .tables
        .values()
        .any(|t| t.kind() == DistanceKind::Semimetric)
    {
        report.warn(SEMIMETRIC_WARNING);
    }
}

pub(super) fn validate(file: &ProblemFile) -> Result<Report> {
    let space = space_of(file)?;
    let mut report = Report::new("validate");
    for (name, table) in &space.tables {
        let violations = validate_distance_table(table);
        report.verdict(Verdict {
            name: format!("{name} is a {}", table.kind()),
            holds: violations.is_empty(),
            required: true,
            detail: if violations.is_empty() {
                "all axioms hold".into()
            } else {
                violations
                    .iter()
                    .map(|v| {
                        format!(
                            "{} at ({})",
                            v.axiom,
                            labels_of(&space.points, &v.witness).join(", ")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("; ")
            },
            witnesses: violations
                .iter()
                .map(|v| WitnessEntry {
                    points: labels_of(&space.points, &v.witness),
                    lhs: v.magnitudes[0],
                    bound: v.magnitudes.iter().skip(1).sum(),
                })
                .collect(),
        });
    }
    if let Some(d1) = space.table("d1") {
        report.verdict(Verdict {
            name: "d1 declared a metric".into(),
            holds: d1.kind() == DistanceKind::Metric,
            required: true,
            detail: format!("d1 has kind {}", d1.kind()),
            witnesses: Vec::new(),
        });
    }
    note_semimetrics(&mut report, &space);
    if file.map.is_some() {
        let kind = match map_of(file, &space)? {
            LoadedMap::Single(_) => "single-valued",
            LoadedMap::Multi(_) => "multi-valued",
        };
        report.verdict(Verdict {
            name: "map is total".into(),
            holds: true,
            required: true,
            detail: format!("{kind} map over {} points", space.points.len()),
            witnesses: Vec::new(),
        });
    }
    Ok(report)
}

pub(super) fn verify(file: &ProblemFile, opts: &RunOptions) -> Result<Report> {
    let space = space_of(file)?;
    let mut report = Report::new("verify");
    note_semimetrics(&mut report, &space);
    match map_of(file, &space)? {
        LoadedMap::Single(f) => verify_single(&mut report, file, &space, &f, opts)?,
        LoadedMap::Multi(f) => verify_multi(&mut report, file, &space, &f)?,
    }
    Ok(report)
}

fn verify_single(
    report: &mut Report,
    file: &ProblemFile,
    space: &LoadedSpace,
    f: &SingleMap,
    opts: &RunOptions,
) -> Result<()> {
    let tri = space.tri_metric()?;
    let phi = phi_of(file)?;
    let pts = tri.space();
    let r = verify_three_point_single(f, &tri, &phi)?;
    report.verdict(contraction_verdict(
        "three-point contraction",
        true,
        pts,
        &r,
    ));

    let cycles = check_no_two_cycles(f);
    report.verdict(Verdict {
        name: "no two-cycles".into(),
        holds: cycles.ok,
        required: true,
        detail: match cycles.witness {
            Some(u) => format!("{} ↔ {}", pts.label(u), pts.label(f.apply(u))),
            None => "F(Fu) ≠ u whenever Fu ≠ u".into(),
        },
        witnesses: Vec::new(),
    });

    match fit_min_lambda(f, &tri)? {
        LambdaFit::Contractive { lambda, triple } => {
            report.value("minimal λ", lambda, Some(labels_of(pts, &triple)))
        }
        LambdaFit::NotContractive { ratio, triple } => {
            report.value(
                "max ratio (not contractive)",
                ratio,
                Some(labels_of(pts, &triple)),
            );
        }
    }

    if let Some(lambda) = phi.linear_lambda() {
        let banach = verify_banach(f, tri.d1(), lambda)?;
        report.verdict(contraction_verdict("Banach on d1", false, pts, &banach));
    }

    if opts.kappa {
        let c = comparability_kappa(&tri)?;
        report.value(
            "comparability κ",
            c.kappa,
            Some(labels_of(pts, &[c.pair.0, c.pair.1])),
        );
        if c.kappa > KAPPA_WARN {
            report.warn(format!(
                "comparability constant κ = {:e} is very large",
                c.kappa
            ));
        }
    }
    Ok(())
}

fn verify_multi(
    report: &mut Report,
    file: &ProblemFile,
    space: &LoadedSpace,
    f: &MultiMap,
) -> Result<()> {
    let (lambda, class) = lambda_class_of(file)?;
    let d = space.metric()?;
    let pts = &space.points;
    let r = verify_three_point_multi(f, d, lambda, class)?;
    report.verdict(contraction_verdict(
        &format!("{class} three-point contraction"),
        true,
        pts,
        &r,
    ));

    let ci = check_condition_i_multi(f);
    report.verdict(Verdict {
        name: "condition (i)".into(),
        holds: ci.ok,
        required: true,
        detail: match ci.witness {
            Some((u, v)) => format!(
                "{} ∈ F{} and {} ∈ F{}",
                pts.label(v),
                pts.label(u),
                pts.label(u),
                pts.label(v)
            ),
            None => "no mutual membership".into(),
        },
        witnesses: Vec::new(),
    });

    if lambda < 1.0 {
        let nadler = verify_nadler(f, d, lambda)?;
        report.verdict(contraction_verdict("Nadler", false, pts, &nadler));
    }
    Ok(())
}

pub(super) fn fixpoints(file: &ProblemFile) -> Result<Report> {
    let space = space_of(file)?;
    let mut report = Report::new("fixpoints");
    let pts = &space.points;
    let fix = match map_of(file, &space)? {
        LoadedMap::Single(f) => {
            let cycles = check_no_two_cycles(&f);
            if !cycles.ok {
                report.warn("map has a point of period two");
            }
            enumerate_fixed_points_single(&f)
        }
        LoadedMap::Multi(f) => enumerate_fixed_points_multi(&f),
    };
    report.fixed_points = Some(labels_of(pts, &fix));
    Ok(report)
}

pub(super) fn iterate(file: &ProblemFile, opts: &RunOptions) -> Result<Report> {
    let space = space_of(file)?;
    let from = opts
        .from
        .as_deref()
        .ok_or_else(|| Error::structural("iterate needs a start label (--from)"))?;
    let u0 = space.points.require(from)?;
    let mut report = Report::new("iterate");
    note_semimetrics(&mut report, &space);
    match map_of(file, &space)? {
        LoadedMap::Single(f) => {
            let tri = space.tri_metric()?;
            iterate_single(&mut report, file, &tri, &f, u0, opts)?
        }
        LoadedMap::Multi(f) => iterate_multi(&mut report, file, &space, &f, u0, opts)?,
    }
    Ok(report)
}

fn iterate_single(
    report: &mut Report,
    file: &ProblemFile,
    tri: &TriMetricSpace,
    f: &SingleMap,
    u0: usize,
    opts: &RunOptions,
) -> Result<()> {
    let phi = phi_of(file)?;
    let pts = tri.space();
    let trace = picard_orbit(f, tri, u0, &phi, opts.max_iter, opts.tol)?;
    match (trace.tau0_status, trace.tau0) {
        (Tau0Status::Defined, Some(t)) => {
            report.value("τ₀", t, Some(labels_of(pts, &trace.points[..1])))
        }
        (Tau0Status::FixedPointFirst, _) => report
            .warn("orbit hits a fixed point within two steps; τ₀ and its bounds are undefined"),
        _ => report.warn("u₂ = u₀: the map has a two-cycle; τ₀ and its bounds are undefined"),
    }

    let mut steps = ReportTable::new(
        "Picard steps",
        &["k", "u_k", "u_k+1", "d1(u_k,u_k+1)", "φ^k(τ₀)"],
    );
    for (k, &s) in trace.step_d1.iter().enumerate() {
        steps.push(vec![
            Cell::Text(k.to_string()),
            pts.label(trace.points[k]).into(),
            pts.label(trace.points[k + 1]).into(),
            s.into(),
            trace
                .bounds
                .get(k)
                .map_or(Cell::Text("-".into()), |&b| b.into()),
        ]);
    }
    report.verdict(Verdict {
        name: "step bounds d1(u_k,u_k+1) ≤ φ^k(τ₀)".into(),
        holds: trace.bound_violations.is_empty(),
        required: true,
        detail: format!(
            "{} step(s), {} bounded",
            trace.step_d1.len(),
            trace.bounds.len()
        ),
        witnesses: trace
            .bound_violations
            .iter()
            .map(|&k| WitnessEntry {
                points: labels_of(pts, &trace.points[k..k + 2]),
                lhs: trace.step_d1[k],
                bound: trace.bounds[k],
            })
            .collect(),
    });
    report.traces.push(Trace {
        title: "Picard orbit".into(),
        points: labels_of(pts, &trace.points),
        terminated: trace.terminated,
        fixed_point: trace.fixed_point.map(|p| pts.label(p).to_owned()),
        steps,
    });
    Ok(())
}

fn iterate_multi(
    report: &mut Report,
    file: &ProblemFile,
    space: &LoadedSpace,
    f: &MultiMap,
    u0: usize,
    opts: &RunOptions,
) -> Result<()> {
    let (lambda, class) = lambda_class_of(file)?;
    let d = space.metric()?;
    let pts = &space.points;
    let trace = multi_orbit(f, d, u0, lambda, class, opts.max_iter)?;

    let mut steps = ReportTable::new(
        "orbit steps",
        &[
            "k",
            "u_k",
            "u_k+1",
            "d(u_k,u_k+1)",
            "H(Fu_k-1,Fu_k)+ε_k",
            "ε_k",
            "theory bound",
        ],
    );
    for (k, &s) in trace.step_d.iter().enumerate() {
        steps.push(vec![
            Cell::Text(k.to_string()),
            pts.label(trace.points[k]).into(),
            pts.label(trace.points[k + 1]).into(),
            s.into(),
            trace.selection_bound[k].map_or(Cell::Text("-".into()), Cell::from),
            trace.eps_schedule[k].into(),
            trace.theory_bound[k].into(),
        ]);
    }
    let mut perims = ReportTable::new("rolling perimeters", &["n", "p_n", "recursion bound"]);
    if let Some(&p0) = trace.p_sequence.first() {
        perims.push(vec![
            Cell::Text("0".into()),
            p0.into(),
            Cell::Text("-".into()),
        ]);
    }
    let checks = trace.recursion_checks();
    for c in &checks {
        perims.push(vec![
            Cell::Text(c.n.to_string()),
            c.p_n.into(),
            c.bound.into(),
        ]);
    }
    report.tables.push(perims);

    let window = |n: usize| -> Vec<String> {
        let mut ext = trace.points.clone();
        ext.extend(trace.fixed_point);
        labels_of(pts, &ext[n..(n + 3).min(ext.len())])
    };
    report.verdict(Verdict {
        name: "perimeter recursion".into(),
        holds: checks.iter().all(|c| c.holds()),
        required: true,
        detail: format!("{} step(s) checked", checks.len()),
        witnesses: checks
            .iter()
            .filter(|c| !c.holds())
            .map(|c| WitnessEntry {
                points: window(c.n),
                lhs: c.p_n,
                bound: c.bound,
            })
            .collect(),
    });
    let tv = trace.theory_violations();
    report.verdict(Verdict {
        name: "closed-form step bound".into(),
        holds: tv.is_empty(),
        required: true,
        detail: format!("{} step(s) checked", trace.step_d.len()),
        witnesses: tv
            .iter()
            .map(|&k| WitnessEntry {
                points: labels_of(pts, &trace.points[k..k + 2]),
                lhs: trace.step_d[k],
                bound: trace.theory_bound[k],
            })
            .collect(),
    });
    if trace.fixed_point.is_none() {
        report.warn(format!(
            "orbit ended without a fixed point: {}",
            trace.terminated
        ));
    }
    report.traces.push(Trace {
        title: format!("{class} orbit"),
        points: labels_of(pts, &trace.points),
        terminated: trace.terminated,
        fixed_point: trace.fixed_point.map(|p| pts.label(p).to_owned()),
        steps,
    });
    Ok(())
}

fn fmt_point(x: f64) -> String {
    crate::numeric::rational_string(x).unwrap_or_else(|| format!("{x}"))
}

pub(super) fn scan(file: &ProblemFile, opts: &RunOptions) -> Result<Report> {
    let setup = file
        .scan
        .as_ref()
        .ok_or_else(|| Error::structural("scan needs a \"scan\" section"))?
        .build()?;
    if opts.grid < 2 {
        return Err(Error::domain(format!(
            "grid needs at least 2 intervals, got {}",
            opts.grid
        )));
    }
    let grid = SampledDomain::uniform(setup.lo, setup.hi, opts.grid)?;
    let r = sampled_ratio_scan(&setup.map, &grid, &setup.metrics)?;
    let mut report = Report::new("scan");
    let at = |t: [f64; 3]| Some(t.iter().map(|&x| fmt_point(x)).collect());
    report.value("max R", r.max_r, at(r.argmax));
    report.value("min R", r.min_r, at(r.argmin));
    report.value("grid points", grid.points().len() as f64, None);
    report.value("ordered triples", r.triple_count as f64, None);
    if let Some(lambda) = setup.lambda {
        let holds = r.max_r <= lambda + crate::numeric::TOL;
        report.verdict(Verdict {
            name: "sampled ratio bound".into(),
            holds,
            required: true,
            detail: format!("max R = {:.12} against λ = {lambda}", r.max_r),
            witnesses: if holds {
                Vec::new()
            } else {
                vec![WitnessEntry {
                    points: r.argmax.iter().map(|&x| fmt_point(x)).collect(),
                    lhs: r.max_r,
                    bound: lambda,
                }]
            },
        });
    }
    report.warn("certificate at grid resolution");
    Ok(report)
}
