use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thermocurv::geometry::MetricKind;
use thermocurv::isothermal::{self, circumference_check, CoordField, SampledField};
use thermocurv::output::{self, RadiusSummary};
use thermocurv::thermo::{self, ChaplyginFamily};
use thermocurv::{parse, Axis, Expr, Grid2, IntegrateOptions, Point2};

use crate::args::{
    ClassifyArgs, Command, CurvatureArgs, EinsteinArgs, FamilyArgs, Figure, FiguresArgs,
    IntegrateArgs, IsothermalCommand, LoglinearArgs, MetricArg, RadiusArgs, RelationArgs,
    SeparableArgs, VerifyArgs,
};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Curvature(a) => curvature(a),
        Command::Einstein(a) => einstein(a),
        Command::Radius(a) => radius(a),
        Command::Classify(a) => classify(a),
        Command::Isothermal(IsothermalCommand::Verify(a)) => verify(a),
        Command::Isothermal(IsothermalCommand::Separable(a)) => separable(a),
        Command::Isothermal(IsothermalCommand::Integrate(a)) => integrate(a),
        Command::Isothermal(IsothermalCommand::Loglinear(a)) => loglinear(a),
        Command::Figures(a) => figures(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => print_stdout(text),
    }
}

/// Writes to stdout, treating a closed pipe as success.
pub fn print_stdout(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn grid(spec: &str) -> Result<Grid2> {
    Ok(spec.parse::<Grid2>()?)
}

fn family(args: &FamilyArgs) -> Result<ChaplyginFamily> {
    let alpha = match (args.family, args.alpha) {
        (Some(_), Some(alpha)) => alpha,
        (Some(_), None) => return Err(CliError::Usage("--family requires --alpha".into())),
        (None, _) => {
            return Err(CliError::Usage(
                "expected --family chaplygin --alpha A".into(),
            ))
        }
    };
    Ok(ChaplyginFamily::new(alpha, args.phi0, args.c)?)
}

fn relation(args: &RelationArgs) -> Result<Expr> {
    match &args.phi {
        Some(text) => Ok(parse(text)?),
        None if args.family.family.is_none() => Err(CliError::Usage(
            "expected --phi EXPR or --family chaplygin --alpha A".into(),
        )),
        None => Ok(thermo::entropy(&family(&args.family)?)),
    }
}

fn curvature(a: CurvatureArgs) -> Result<()> {
    let phi = relation(&a.relation)?;
    let kind = match a.metric {
        MetricArg::Natural => MetricKind::Natural,
        MetricArg::Hessian => MetricKind::Hessian,
    };
    let report = thermocurv::curvature_scan(&phi, kind, &grid(&a.grid)?)?;
    emit(a.out.as_deref(), &output::to_json(&report))
}

#[derive(Serialize)]
struct EinsteinOutput {
    #[serde(rename = "K_source")]
    k_source: &'static str,
    #[serde(flatten)]
    summary: thermocurv::EinsteinSummary,
}

fn einstein(a: EinsteinArgs) -> Result<()> {
    let phi = relation(&a.relation)?;
    let g = grid(&a.grid)?;
    let (k, k_source) = if a.k == "auto" {
        let scan = thermocurv::curvature_scan(&phi, MetricKind::Natural, &g)?;
        (scan.k_mean, "auto")
    } else {
        let k = a
            .k
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--K expects auto or a number, got {:?}", a.k)))?;
        (k, "given")
    };
    let summary = thermocurv::einstein_scan(&phi, k, &g)?;
    emit(
        a.out.as_deref(),
        &output::to_json(&EinsteinOutput { k_source, summary }),
    )
}

fn radius(a: RadiusArgs) -> Result<()> {
    let fam = family(&a.family)?;
    let profile = match (&a.grid, a.v_fixed, &a.u_range) {
        (_, Some(v), Some(range)) => {
            let axis: Axis = range.parse()?;
            let points: Vec<Point2> = axis
                .values()
                .into_iter()
                .map(|u| Point2::new(u, v))
                .collect();
            thermo::radius_profile_at(&fam, &points)?
        }
        (Some(spec), _, _) => thermo::radius_profile(&fam, &grid(spec)?)?,
        _ => {
            return Err(CliError::Usage(
                "expected --grid SPEC or --v-fixed V --u-range SPEC".into(),
            ))
        }
    };
    emit(a.out.as_deref(), &output::radius_csv(&profile))?;
    if let Some(path) = &a.summary {
        write_file(path, &output::to_json(&RadiusSummary::from(&profile)))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassifyRow {
    alpha: f64,
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "min_R2")]
    min_r2: f64,
    cv_sign: thermo::Sign,
    verdict: thermo::Verdict,
}

fn classify(a: ClassifyArgs) -> Result<()> {
    let g = grid(&a.grid)?;
    let rows = a
        .alpha_list
        .iter()
        .map(|&alpha| {
            let c = thermo::classify(&ChaplyginFamily::standard(alpha)?, &g)?;
            Ok(ClassifyRow {
                alpha: c.alpha,
                k: c.k,
                min_r2: c.min_r2,
                cv_sign: c.cv_sign,
                verdict: c.verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(a.out.as_deref(), &output::to_json(&rows))
}

#[derive(Serialize)]
struct VerifyOutput {
    samples: usize,
    max_abs_r1: f64,
    max_abs_r2: f64,
    max_abs_r3: f64,
    max_pullback: f64,
    /// `max |(X2 + Y2 - R2) - (r1 + 2 r2 + r3)|`.
    max_circumference_mismatch: f64,
    max_abs_circumference: f64,
}

fn read_coords(path: &Path) -> Result<SampledField> {
    let csv_err = |source| CliError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing column {name}", path.display())))
    };
    let cols = [column("q1")?, column("q2")?, column("x")?, column("y")?];
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let mut row = [0.0; 4];
        for (slot, &c) in row.iter_mut().zip(&cols) {
            let field = record.get(c).unwrap_or("").trim();
            *slot = field.parse().map_err(|_| {
                CliError::Usage(format!("{}: bad number {field:?}", path.display()))
            })?;
        }
        rows.push(row);
    }
    Ok(SampledField::from_rows(&rows)?)
}

fn verify(a: VerifyArgs) -> Result<()> {
    let phi = parse(&a.phi)?;
    let (field, points) = match (&a.coords, &a.x, &a.y) {
        (Some(path), _, _) => {
            let f = read_coords(path)?;
            let pts = f.points();
            (CoordField::Sampled(f), pts)
        }
        (None, Some(x), Some(y)) => (
            CoordField::closed(parse(x)?, parse(y)?),
            grid(&a.grid)?.points(),
        ),
        _ => {
            return Err(CliError::Usage(
                "expected --coords FILE or --x EXPR --y EXPR".into(),
            ))
        }
    };
    let mut out = VerifyOutput {
        samples: points.len(),
        max_abs_r1: 0.0,
        max_abs_r2: 0.0,
        max_abs_r3: 0.0,
        max_pullback: 0.0,
        max_circumference_mismatch: 0.0,
        max_abs_circumference: 0.0,
    };
    for p in points {
        let r = isothermal::pullback_residuals(&phi, &field, p)?;
        let c = circumference_check(&phi, &field, p)?;
        out.max_abs_r1 = out.max_abs_r1.max(r.r1.abs());
        out.max_abs_r2 = out.max_abs_r2.max(r.r2.abs());
        out.max_abs_r3 = out.max_abs_r3.max(r.r3.abs());
        out.max_pullback = out.max_pullback.max(r.max_abs());
        out.max_circumference_mismatch = out
            .max_circumference_mismatch
            .max((c.residual - (r.r1 + 2.0 * r.r2 + r.r3)).abs());
        out.max_abs_circumference = out.max_abs_circumference.max(c.residual.abs());
    }
    emit(a.out.as_deref(), &output::to_json(&out))
}

fn separable(a: SeparableArgs) -> Result<()> {
    let (s, t) = (parse(&a.s)?, parse(&a.t)?);
    let g = grid(&a.grid)?;
    let field = isothermal::separable_coords(&s, &t, a.c, &g)?;
    let rows = isothermal::tabulate(&(s + t), &field, &g.points())?;
    emit(a.out.as_deref(), &output::coord_csv(&rows))
}

fn integrate(a: IntegrateArgs) -> Result<()> {
    let phi = parse(&a.phi)?;
    let g1 = parse(&a.g1)?;
    let g = grid(&a.grid)?;
    let options = IntegrateOptions {
        require_constraints: !a.allow_constraint_violation,
        constraint_tol: a.constraint_tol,
    };
    let chart = thermocurv::integrate_coords(&phi, &g1, &g, options)?;
    let points = chart.field.points();
    let field = chart.into_field();
    let rows = isothermal::tabulate(&phi, &field, &points)?;
    emit(a.out.as_deref(), &output::coord_csv(&rows))
}

#[derive(Serialize)]
struct LoglinearOutput {
    relation: String,
    x: String,
    /// `y = i * y_coefficient * y_log`.
    y_log: String,
    y_coefficient: f64,
    real: bool,
}

fn loglinear(a: LoglinearArgs) -> Result<()> {
    let coords = isothermal::loglinear_coords(a.xi, a.chi, a.c)?;
    let out = LoglinearOutput {
        relation: isothermal::loglinear_relation(a.xi, a.chi).to_string(),
        x: coords.x.to_string(),
        y_log: coords.y_log.to_string(),
        y_coefficient: coords.y_coefficient,
        real: coords.real,
    };
    emit(a.out.as_deref(), &output::to_json(&out))
}

/// Exponents of the radius-against-`u` curves.
pub const FIG1_ALPHAS: [f64; 4] = [-2.0, -1.0, 0.5, 2.0];

fn figures(a: FiguresArgs) -> Result<()> {
    fs::create_dir_all(&a.out).map_err(|source| CliError::Io {
        path: a.out.display().to_string(),
        source,
    })?;
    match a.figure {
        Figure::Fig1 => {
            let axis = Axis::linear(0.1, 10.0, 200)?;
            let points: Vec<Point2> = axis
                .values()
                .into_iter()
                .map(|u| Point2::new(u, 1.0))
                .collect();
            for alpha in FIG1_ALPHAS {
                let profile =
                    thermo::radius_profile_at(&ChaplyginFamily::standard(alpha)?, &points)?;
                let path = a.out.join(format!("fig1_alpha_{alpha}.csv"));
                write_file(&path, &output::radius_csv(&profile))?;
            }
        }
        Figure::Fig2 => {
            let g = thermo::classification_grid();
            let rows = (-20..20)
                .filter(|&k| k != 0)
                .map(|k| {
                    let alpha = f64::from(k) / 20.0;
                    let p = thermo::radius_profile(&ChaplyginFamily::standard(alpha)?, &g)?;
                    Ok([alpha, p.min_r2, p.max_r2])
                })
                .collect::<Result<Vec<_>>>()?;
            let text = output::csv(["alpha", "min_R2", "max_R2"], rows);
            write_file(&a.out.join("fig2.csv"), &text)?;
        }
    }
    Ok(())
}
