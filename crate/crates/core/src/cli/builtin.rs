//! The two worked examples shipped with the binary.

use crate::contraction::Witness;
use crate::error::Result;
use crate::fixtures::{example_2_11, example_3_5, TABLE1_TRIPLES};
use crate::multi::{
    check_condition_i_multi, enumerate_fixed_points_multi, verify_nadler, verify_three_point_multi,
    MultiClass,
};
use crate::numeric::TOL;
use crate::phifun::ComparisonFunction;
use crate::single::{
    enumerate_fixed_points_single, fit_min_lambda, triple_lhs_rhs, verify_three_point_single,
};

use super::report::{
    contraction_verdict, labels_of, Cell, Report, ReportTable, Verdict, WitnessEntry,
};

/// The four-point example: the twelve-row A/B/R table, the full 24-triple
/// certificate at `λ = 23/25`, the swap symmetry of `R` and `Fix(F)`.
pub fn table1_report() -> Result<Report> {
    let (tri, f) = example_2_11();
    let pts = tri.space();
    let mut report = Report::new("table1");

    let mut table = ReportTable::new("A, B and R = A/B", &["(i,j,k)", "A", "B", "R"]);
    for t in TABLE1_TRIPLES {
        let terms = triple_lhs_rhs(&f, &tri, t[0], t[1], t[2])?;
        table.push(vec![
            Cell::Text(format!("({},{},{})", t[0] + 1, t[1] + 1, t[2] + 1)),
            terms.lhs.into(),
            terms.rhs_arg.into(),
            terms.ratio().into(),
        ]);
    }
    report.tables.push(table);

    let phi = ComparisonFunction::linear(23.0 / 25.0)?;
    let r = verify_three_point_single(&f, &tri, &phi)?;
    report.verdict(contraction_verdict(
        "three-point contraction at λ = 23/25",
        true,
        pts,
        &r,
    ));

    let mut asym = Vec::new();
    let mut swaps = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || j == k || k == i {
                    continue;
                }
                swaps += 1;
                let a = triple_lhs_rhs(&f, &tri, i, j, k)?.ratio();
                let b = triple_lhs_rhs(&f, &tri, j, i, k)?.ratio();
                if (a - b).abs() > TOL {
                    asym.push(WitnessEntry {
                        points: labels_of(pts, &[i, j, k]),
                        lhs: a,
                        bound: b,
                    });
                }
            }
        }
    }
    report.verdict(Verdict {
        name: "R(i,j,k) = R(j,i,k)".into(),
        holds: asym.is_empty(),
        required: true,
        detail: format!("{swaps} ordered triples compared"),
        witnesses: asym,
    });

    if let Some(lambda) = fit_min_lambda(&f, &tri)?.lambda() {
        let at = match r.worst {
            Some(Witness::Triple(t)) => Some(labels_of(pts, &t)),
            _ => None,
        };
        report.value("minimal λ", lambda, at);
    }
    report.fixed_points = Some(labels_of(pts, &enumerate_fixed_points_single(&f)));
    Ok(report)
}

/// The three-point multi-valued example: a tilde-class map at `λ = 2/3`
/// for which the Nadler condition fails for every `λ < 1`.
pub fn example35_report() -> Result<Report> {
    let (pts, d, f) = example_3_5();
    let lambda = 2.0 / 3.0;
    let mut report = Report::new("example35");

    let r = verify_three_point_multi(&f, &d, lambda, MultiClass::Tilde)?;
    report.verdict(contraction_verdict(
        "tilde three-point contraction at λ = 2/3",
        true,
        &pts,
        &r,
    ));

    let ci = check_condition_i_multi(&f);
    report.verdict(Verdict {
        name: "condition (i)".into(),
        holds: ci.ok,
        required: true,
        detail: "no mutual membership".into(),
        witnesses: Vec::new(),
    });

    let nadler = verify_nadler(&f, &d, lambda)?;
    report.verdict(contraction_verdict(
        "Nadler at λ = 2/3",
        false,
        &pts,
        &nadler,
    ));
    let ratio = nadler.max_ratio.unwrap_or(0.0);
    report.verdict(Verdict {
        name: "Nadler inapplicable".into(),
        holds: ratio >= 1.0 - TOL,
        required: true,
        detail: "H(Fu,Fv)/d(u,v) reaches 1, so no λ < 1 works".into(),
        witnesses: Vec::new(),
    });
    let at = nadler.worst.map(|w| labels_of(&pts, w.indices()));
    report.value("Nadler max ratio", ratio, at);

    for class in MultiClass::ALL {
        let lam = if class == MultiClass::Bar {
            0.499
        } else {
            lambda
        };
        let r = verify_three_point_multi(&f, &d, lam, class)?;
        if let (Some(m), Some(w)) = (r.max_ratio, r.worst) {
            report.value(
                format!("{class} max ratio"),
                m,
                Some(labels_of(&pts, w.indices())),
            );
        }
    }
    report.fixed_points = Some(labels_of(&pts, &enumerate_fixed_points_multi(&f)));
    Ok(report)
}
