use std::path::Path;

use pgnlab::exponents::{analyze_periodic, profile_sampled, Bound, Ratio};
use pgnlab::export::{plot_csv, plot_data, plot_periods, plot_svg, trajectory_csv};
use pgnlab::families::crosscheck_printed_formulas;
use pgnlab::independence::{jacobian_rank, ExponentMap, ParamPoint};
use pgnlab::minima::{trajectory, uniform_grid, DirectionVector, OracleError, RadiusSchedule};
use pgnlab::rational::format_rational;
use pgnlab::system::DivisionPointKind;
use pgnlab::transference::{check_profile, pente_verify};
use serde_json::{json, Value};

use crate::args::{
    BuildArgs, ExponentsArgs, JacobianArgs, MapArg, OracleArgs, PlotArgs, PlotFormat,
};
use crate::output::{resolve, write_atomic, write_json, Failure, Outcome, Status, SCHEMA_VERSION};
use crate::source::{self, family_b_params, fraction};

fn status_if(ok: bool, failing: Status) -> Status {
    if ok {
        Status::Ok
    } else {
        failing
    }
}

pub fn build(out_dir: &Path, args: &BuildArgs) -> Result<Outcome, Failure> {
    let src = source::from_family(&args.family)?;
    let artifact = src.artifact();
    let valid = artifact.validation.as_ref().is_some_and(|v| v.valid);
    let path = resolve(out_dir, &args.out);
    write_json(
        &path,
        &serde_json::to_value(&artifact).expect("artifact serializes"),
    )?;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "build",
        "file": path,
        "n": src.system.n(),
        "division_points": src.system.division_points().iter().map(format_rational).collect::<Vec<_>>(),
        "dilation_factor": src.system.dilation_factor().map(format_rational),
        "validation": artifact.validation,
    });
    Ok(Outcome {
        summary,
        status: status_if(valid, Status::CheckFailed),
    })
}

pub fn exponents(out_dir: &Path, args: &ExponentsArgs) -> Result<Outcome, Failure> {
    let src = source::resolve(&args.source)?;
    let sys = &src.system;
    let validation = sys.validate();

    let mut extra = serde_json::Map::new();
    let profile = match &src.infinite {
        Some((_, fam)) => {
            let q_max = sys.division_points()[sys.last_index()].clone();
            let sampled = profile_sampled(sys, &q_max).map_err(Failure::invalid)?;
            let seq = |ratio, bound| {
                let values = sampled.sequence(ratio, bound);
                json!({
                    "values": values.iter().map(format_rational).collect::<Vec<_>>(),
                    "trend": sampled.trend(ratio, bound),
                })
            };
            extra.insert(
                "p1_max_per_period".into(),
                seq(Ratio::Component(1), Bound::Max),
            );
            extra.insert(
                "top_min_per_period".into(),
                seq(Ratio::Component(fam.n + 1), Bound::Min),
            );
            extra.insert(
                "declared_limits".into(),
                fam.limits
                    .iter()
                    .map(|l| json!({"ratio": l.ratio, "bound": l.bound, "value": format_rational(&l.value)}))
                    .collect(),
            );
            sampled.with_limits(&fam.limits)
        }
        None => {
            let analysis = analyze_periodic(sys).map_err(Failure::invalid)?;
            extra.insert(
                "non_unique_component_maxima".into(),
                json!(analysis.non_unique_component_maxima()),
            );
            analysis.profile
        }
    };

    let checks = check_profile(&profile);
    let pente = pente_verify(sys, args.pente_samples, args.seed).map_err(Failure::invalid)?;
    let pente_failures: Vec<_> = pente.iter().filter(|o| !o.holds).collect();
    let crosscheck = match &src.params {
        Some(p) => Some(crosscheck_printed_formulas(p).map_err(Failure::invalid)?),
        None => None,
    };
    let passed = validation.valid && checks.iter().all(|o| o.holds) && pente_failures.is_empty();

    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "exponents",
        "valid": validation.valid,
        "profile": profile,
        "checks": checks,
        "pente": {
            "samples": args.pente_samples,
            "seed": args.seed,
            "outcomes": pente.len(),
            "binding": pente.iter().filter(|o| o.is_binding()).count(),
            "failures": pente_failures,
        },
        "crosscheck": crosscheck,
        "passed": passed,
    });
    report.as_object_mut().expect("object").extend(extra);
    if !validation.valid {
        report["violations"] = json!(validation.violations);
    }
    write_json(&resolve(out_dir, &args.out), &report)?;
    Ok(Outcome {
        summary: report,
        status: status_if(passed, Status::CheckFailed),
    })
}

pub fn plot(out_dir: &Path, args: &PlotArgs) -> Result<Outcome, Failure> {
    let src = source::resolve(&args.source)?;
    let data = match (&args.from, &args.to) {
        (Some(from), Some(to)) => {
            plot_data(&src.system, &fraction("from", from)?, &fraction("to", to)?)
        }
        _ => plot_periods(&src.system, args.plot_periods),
    }
    .map_err(Failure::invalid)?;

    let mut files = Vec::new();
    if matches!(args.format, PlotFormat::Csv | PlotFormat::Both) {
        let path = out_dir.join(format!("{}.csv", args.stem));
        write_atomic(&path, plot_csv(&data).as_bytes())?;
        files.push(path);
    }
    if matches!(args.format, PlotFormat::Svg | PlotFormat::Both) {
        let path = out_dir.join(format!("{}.svg", args.stem));
        write_atomic(&path, plot_svg(&data).as_bytes())?;
        files.push(path);
    }
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "plot",
        "files": files,
        "polylines": data.n + 1,
        "vertices": data.points.len(),
        "markers": {
            "ordinary": data.count(DivisionPointKind::Ordinary),
            "switch": data.count(DivisionPointKind::Switch),
            "boundary": data.count(DivisionPointKind::Boundary),
        },
    });
    Ok(Outcome {
        summary,
        status: Status::Ok,
    })
}

pub fn jacobian(out_dir: &Path, args: &JacobianArgs) -> Result<Outcome, Failure> {
    let params = if args.defaults {
        family_b_params(Some(args.n), true, None, &[])?
    } else {
        let (c, rest) = args
            .coords
            .split_first()
            .ok_or_else(|| Failure::invalid("give --defaults or --coords C,A_2,...,A_n"))?;
        family_b_params(Some(args.n), false, Some(c), rest)?
    };
    let map = match args.map {
        MapArg::W => ExponentMap::W,
        MapArg::F => ExponentMap::F,
    };
    let h = fraction("h", &args.h)?;
    let cert =
        jacobian_rank(map, &ParamPoint::from_params(&params), &h).map_err(Failure::invalid)?;
    let full = cert.rank == args.n;
    let mut report =
        json!({ "schema_version": SCHEMA_VERSION, "command": "jacobian", "full_rank": full });
    report.as_object_mut().expect("object").extend(
        serde_json::to_value(&cert)
            .expect("certificate serializes")
            .as_object()
            .cloned()
            .unwrap_or_default(),
    );
    write_json(&resolve(out_dir, &args.out), &report)?;
    Ok(Outcome {
        summary: report,
        status: status_if(full, Status::CheckFailed),
    })
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::InsufficientRadius { .. } | OracleError::PrecisionCap(_) => {
            Failure::new(Status::OracleInsufficient, e)
        }
        other => Failure::invalid(other),
    }
}

pub fn oracle(out_dir: &Path, args: &OracleArgs) -> Result<Outcome, Failure> {
    let direction = match (&args.cf, &args.direction) {
        (Some(cf), _) => DirectionVector::parse(&format!("cf:{cf}")),
        (None, Some(text)) => DirectionVector::parse(text),
        (None, None) => return Err(Failure::invalid("give --cf or --direction")),
    }
    .map_err(oracle_failure)?;
    if args.step.is_nan() || args.step <= 0.0 || args.qmax.is_nan() || args.qmax < 0.0 {
        return Err(Failure::invalid(
            "--step must be positive and --qmax nonnegative",
        ));
    }
    let schedule = match args.radius {
        Some(r) if r < 1 => return Err(Failure::invalid("--radius must be positive")),
        Some(r) => RadiusSchedule::Fixed(r),
        None => RadiusSchedule::Doubling {
            start: 2,
            max: args.max_radius,
        },
    };
    let traj = trajectory(&direction, &uniform_grid(args.qmax, args.step), schedule)
        .map_err(oracle_failure)?;
    let path = resolve(out_dir, &args.out);
    write_atomic(&path, trajectory_csv(&traj).as_bytes())?;

    let monotone = traj
        .samples
        .windows(2)
        .all(|w| w[0].l.iter().zip(&w[1].l).all(|(a, b)| *b >= a - 1e-12));
    let witnessed = traj.samples.iter().all(|s| {
        s.witnesses
            .iter()
            .zip(&s.l)
            .all(|(x, l)| (direction.stretch(x, s.q).ln() - l).abs() <= 1e-12)
    });
    let sufficient = traj.all_sufficient();
    let summary: Value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "oracle",
        "file": path,
        "direction": direction.components(),
        "samples": traj.samples.len(),
        "all_sufficient": sufficient,
        "monotone": monotone,
        "witnesses_valid": witnessed,
        "ratio_max": traj.ratio_max,
        "ratio_min": traj.ratio_min,
        "sum_deviation": traj.sum_deviation(),
    });
    let status = if !sufficient {
        Status::OracleInsufficient
    } else {
        status_if(monotone && witnessed, Status::CheckFailed)
    };
    Ok(Outcome { summary, status })
}
