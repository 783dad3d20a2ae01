//! The subcommand implementations. Each returns a `Report` plus the process
//! exit code (0, or 4 when a requested verification fails).

use std::path::Path;

use padic_lattice::{
    brute_cvp_with_budget, brute_lambda2, cvp_with_frame, gen_instance, lvp_with_frame,
    orthogonalize_via_cvp, InvariantReport, LatticeBasis, Vector, WeightSpec,
};

use crate::error::{from_core, CliError, CliResult};
use crate::instance::{
    digest_of, format_norms, format_vector_strings, load_truth, write_json, InstanceFile,
    LoadedInstance, TruthFile,
};
use crate::report::{bracketed, CheckResult, Report};

/// Valuation window for generated diagonal entries.
const GEN_VAL_RANGE: (i64, i64) = (-3, 4);

pub fn orthogonalize(inst: &LoadedInstance, via_cvp: bool) -> CliResult<(Report, u8)> {
    let command = if via_cvp {
        "orthogonalize --via-cvp"
    } else {
        "orthogonalize"
    };
    let mut report = Report::new(command);
    report.instance = Some(inst.digest.clone());

    let p = inst.space.p();
    if via_cvp {
        let reduced = orthogonalize_via_cvp(&inst.basis, |line, t| cvp_with_frame(line, t))
            .map_err(from_core)?;
        report.basis = Some(reduced.vectors().iter().map(bracketed).collect());
        report.norms = Some(format_norms(&reduced.norms(), p));
    } else {
        let reduced = inst.basis.orthogonalize_with_frame();
        report.basis = Some(reduced.basis.vectors().iter().map(bracketed).collect());
        report.norms = Some(format_norms(&reduced.basis.norms(), p));
        report.permutation = Some(reduced.frame_permutation.clone());
    }
    Ok((report, 0))
}

pub fn cvp(inst: &LoadedInstance, verify: bool, budget: u64) -> CliResult<(Report, u8)> {
    let command = if verify { "cvp --verify" } else { "cvp" };
    let mut report = Report::new(command);
    report.instance = Some(inst.digest.clone());

    let target = inst
        .target
        .as_ref()
        .ok_or_else(|| CliError::input("cvp needs a target in the instance file"))?;
    let solved = cvp_with_frame(&inst.basis, target).map_err(from_core)?;

    let p = inst.space.p();
    report.solution = Some(bracketed(&solved.vector));
    report.coefficients = Some(bracketed(&solved.coefficients));
    report.distance = Some(solved.distance.display(p));

    let mut exit = 0;
    if verify {
        let reference = brute_cvp_with_budget(&inst.basis, target, budget).map_err(from_core)?;
        if reference.distance == solved.distance {
            report.verify = Some("PASS".to_string());
        } else {
            report.verify = Some(format!(
                "FAIL (solver {}, brute force {})",
                solved.distance.display(p),
                reference.distance.display(p)
            ));
            exit = 4;
        }
    }
    Ok((report, exit))
}

pub fn lvp(inst: &LoadedInstance, verify: bool) -> CliResult<(Report, u8)> {
    let command = if verify { "lvp --verify" } else { "lvp" };
    let mut report = Report::new(command);
    report.instance = Some(inst.digest.clone());

    let solved = lvp_with_frame(&inst.basis).map_err(from_core)?;
    let coefficients = inst
        .basis
        .matrix()
        .express_in_rowspace(&solved.vector)
        .map_err(from_core)?
        .expect("the solution lies in the lattice");

    let p = inst.space.p();
    report.solution = Some(bracketed(&solved.vector));
    report.coefficients = Some(bracketed(&coefficients));
    report.norm = Some(solved.norm.display(p));

    let mut exit = 0;
    if verify {
        let reference = brute_lambda2(&inst.basis).map_err(from_core)?;
        if reference.norm == solved.norm {
            report.verify = Some("PASS".to_string());
        } else {
            report.verify = Some(format!(
                "FAIL (solver {}, brute force {})",
                solved.norm.display(p),
                reference.norm.display(p)
            ));
            exit = 4;
        }
    }
    Ok((report, exit))
}

pub fn invariants(inst: &LoadedInstance, ladder_len: usize) -> CliResult<(Report, u8)> {
    let mut report = Report::new(format!("invariants --ladder {ladder_len}"));
    report.instance = Some(inst.digest.clone());

    let p = inst.space.p();
    let inv = InvariantReport::compute(&inst.basis, ladder_len);
    report.lambda = Some(format_norms(&inv.maxima, p));
    report.mu = Some(match &inv.escape {
        Some(nv) => nv.display(p),
        None => "undefined: not full rank".to_string(),
    });
    report.ladder = Some(format_norms(&inv.ladder, p));
    Ok((report, 0))
}

fn run_check(
    checks: &mut Vec<CheckResult>,
    name: &str,
    outcome: Result<bool, padic_lattice::Error>,
) {
    let (status, reason) = match outcome {
        Ok(true) => ("PASS", None),
        Ok(false) => ("FAIL", None),
        Err(e) => ("FAIL", Some(e.to_string())),
    };
    checks.push(CheckResult {
        name: name.to_string(),
        status: status.to_string(),
        reason,
    });
}

pub fn check(
    inst: &LoadedInstance,
    truth_path: Option<&Path>,
    budget: u64,
) -> CliResult<(Report, u8)> {
    let command = match truth_path {
        Some(p) => format!("check --truth {}", p.display()),
        None => "check".to_string(),
    };
    let mut report = Report::new(command);
    report.instance = Some(inst.digest.clone());

    let p = inst.space.p();
    let mut checks = Vec::new();

    let reduced = inst.basis.orthogonalize_with_frame().basis;
    run_check(
        &mut checks,
        "orthogonal-output",
        Ok(reduced.is_orthogonal_basis()),
    );
    run_check(
        &mut checks,
        "same-lattice",
        reduced.same_lattice(&inst.basis),
    );
    run_check(
        &mut checks,
        "routes-agree",
        orthogonalize_via_cvp(&inst.basis, |line, t| cvp_with_frame(line, t))
            .map(|via| via.norms() == reduced.norms()),
    );
    if let Some(target) = &inst.target {
        run_check(
            &mut checks,
            "cvp-brute",
            cvp_with_frame(&inst.basis, target).and_then(|solved| {
                brute_cvp_with_budget(&inst.basis, target, budget)
                    .map(|reference| reference.distance == solved.distance)
            }),
        );
    }
    run_check(
        &mut checks,
        "lvp-brute",
        lvp_with_frame(&inst.basis).and_then(|solved| {
            brute_lambda2(&inst.basis).map(|reference| reference.norm == solved.norm)
        }),
    );

    if let Some(path) = truth_path {
        let truth = load_truth(path)?;
        run_check(
            &mut checks,
            "truth-lattice",
            realize_truth_basis(inst, &truth)
                .map(|b| b.is_orthogonal_basis() && b.same_lattice(&inst.basis).unwrap_or(false)),
        );
        let inv = InvariantReport::compute(&inst.basis, truth.ladder.len().max(1));
        run_check(
            &mut checks,
            "truth-maxima",
            Ok(format_norms(&inv.maxima, p) == truth.maxima),
        );
        let mu = inv.escape.as_ref().map(|nv| nv.display(p));
        run_check(&mut checks, "truth-mu", Ok(mu == truth.mu));
        run_check(
            &mut checks,
            "truth-ladder",
            Ok(format_norms(&inv.ladder, p) == truth.ladder),
        );
    }

    let all_pass = checks.iter().all(|c| c.status == "PASS");
    report.checks = Some(checks);
    Ok((report, if all_pass { 0 } else { 4 }))
}

fn realize_truth_basis(
    inst: &LoadedInstance,
    truth: &TruthFile,
) -> Result<LatticeBasis, padic_lattice::Error> {
    let rows = truth
        .orthogonal
        .iter()
        .map(|row| {
            let entries = row
                .iter()
                .map(|s| padic_lattice::parse_rat(s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Vector::new(entries))
        })
        .collect::<Result<Vec<_>, padic_lattice::Error>>()?;
    LatticeBasis::new(inst.space.clone(), rows)
}

pub fn gen(p: u64, dim: usize, rank: usize, seed: u64, out: &Path) -> CliResult<(Report, u8)> {
    let generated =
        gen_instance(p, dim, rank, WeightSpec::Zeros, GEN_VAL_RANGE, seed).map_err(from_core)?;

    let instance = InstanceFile {
        p,
        dim,
        frame: None,
        weights: None,
        basis: generated
            .basis
            .vectors()
            .iter()
            .map(format_vector_strings)
            .collect(),
        target: None,
    };

    let inv = InvariantReport::compute(&generated.orthogonal, padic_lattice::DEFAULT_LADDER_LEN);
    let truth = TruthFile {
        maxima: format_norms(&inv.maxima, p),
        mu: inv.escape.as_ref().map(|nv| nv.display(p)),
        ladder: format_norms(&inv.ladder, p),
        orthogonal: generated
            .orthogonal
            .vectors()
            .iter()
            .map(format_vector_strings)
            .collect(),
    };

    let truth_path = out.with_extension("truth.json");
    let instance_text = write_json(out, &instance)?;
    write_json(&truth_path, &truth)?;

    let mut report = Report::new(format!(
        "gen --p {p} --dim {dim} --rank {rank} --seed {seed}"
    ));
    report.instance = Some(digest_of(instance_text.as_bytes()));
    report.wrote = Some(vec![
        out.display().to_string(),
        truth_path.display().to_string(),
    ]);
    Ok((report, 0))
}
