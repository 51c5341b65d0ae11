//! The `fermi-charts` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or domain errors.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{metric_at, static_spherical_metric_at, CatalogEntry};
use crate::chart::{
    cartesian_to_fermi, fermi_metric_at, fermi_polar_metric_at, fermi_to_cartesian,
};
use crate::config::{Direction, GridConfig, HorizonConfig, JacobiConfig, RunConfig};
use crate::error::{Error, Result};
use crate::jacobi::{gaussian_curvature, horizon_scan, jacobi_separation, CurvatureMode, SubmanifoldSlice};
use crate::metric::Metric4;
use crate::ode::IntegratorConfig;
use crate::output::{Cell, OutputFormat, Table};
use crate::point::{Chart, SpacetimePoint};
use crate::validate::run_validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "fermi-charts",
    version,
    about = "Exact Fermi coordinate charts for a family of static spacetimes, \
             cross-checked by numerical geodesic integration"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transform a batch of points between the static chart and Fermi coordinates.
    Transform(CommonArgs),
    /// Evaluate metric components at the configured points.
    Metric(CommonArgs),
    /// Tabulate Gaussian curvature of the (t, rho) slice, analytic vs finite difference.
    Curvature(CommonArgs),
    /// Integrate the Jacobi separation equation and compare with its closed form.
    Jacobi(CommonArgs),
    /// Locate the chart degeneracy radius, when one exists.
    Horizon(CommonArgs),
    /// Run the full verification suite against the configured spacetime.
    Validate(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output encoding.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks (validate only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses arguments from the process environment and runs; returns the exit
/// code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Transform(a) => ("transform", a),
        Command::Metric(a) => ("metric", a),
        Command::Curvature(a) => ("curvature", a),
        Command::Jacobi(a) => ("jacobi", a),
        Command::Horizon(a) => ("horizon", a),
        Command::Validate(a) => ("validate", a),
    };
    match execute(name, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fermi-charts: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(name: &str, args: &CommonArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("{}: {e}", args.config.display())))?;
    let config = RunConfig::from_json_str(&text)?;
    let entry = config.spacetime.into_entry()?;

    let (output, code) = match name {
        "transform" => {
            let table = cmd_transform(&entry, &config)?;
            (table.render(args.format), EXIT_OK)
        }
        "metric" => {
            let table = cmd_metric(&entry, &config)?;
            (table.render(args.format), EXIT_OK)
        }
        "curvature" => {
            let (table, ok) = cmd_curvature(&entry, &config)?;
            (
                table.render(args.format),
                if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
            )
        }
        "jacobi" => {
            let table = cmd_jacobi(&entry, &config)?;
            (table.render(args.format), EXIT_OK)
        }
        "horizon" => {
            let table = cmd_horizon(&entry, &config)?;
            (table.render(args.format), EXIT_OK)
        }
        "validate" => {
            let report = run_validation(&entry, args.seed)?;
            let rendered = match args.format {
                OutputFormat::Json => report.to_json_string(),
                OutputFormat::Csv => validate_table(&report).to_csv(),
            };
            (
                rendered,
                if report.all_passed {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                },
            )
        }
        _ => unreachable!("subcommands are exhaustive"),
    };

    match &args.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(code)
}

fn cmd_transform(entry: &CatalogEntry, config: &RunConfig) -> Result<Table> {
    let tc = config
        .transform
        .as_ref()
        .ok_or_else(|| Error::Config("transform command needs a \"transform\" block".into()))?;
    if tc.points.is_empty() {
        return Err(Error::Config("transform needs at least one point".into()));
    }
    let spec = entry.spec();
    let mut table = Table::new(
        "transform",
        &[
            "in_0", "in_1", "in_2", "in_3", "out_0", "out_1", "out_2", "out_3",
            "roundtrip_err",
        ],
    )
    .with_meta("spacetime", entry.kind().label())
    .with_meta(
        "direction",
        match tc.direction {
            Direction::ToFermi => "to-fermi",
            Direction::FromFermi => "from-fermi",
        },
    );
    for (idx, coords) in tc.points.iter().enumerate() {
        let named = |e: Error| {
            Error::OutsideChart(format!(
                "point {idx} ({}, {}, {}, {}): {e}",
                coords[0], coords[1], coords[2], coords[3]
            ))
        };
        let (out, back) = match tc.direction {
            Direction::FromFermi => {
                let fp = SpacetimePoint::new(Chart::FermiCartesian, *coords);
                let out = fermi_to_cartesian(spec, &fp).map_err(named)?;
                (out, cartesian_to_fermi(spec, &out)?)
            }
            Direction::ToFermi => {
                let p = SpacetimePoint::new(Chart::CartesianStatic, *coords);
                let out = cartesian_to_fermi(spec, &p).map_err(named)?;
                (out, fermi_to_cartesian(spec, &out)?)
            }
        };
        let mut err: f64 = 0.0;
        for (orig, rt) in coords.iter().zip(&back.coords) {
            err = err.max((rt - orig).abs() / orig.abs().max(1.0));
        }
        let mut row: Vec<Cell> = coords.iter().map(|&c| Cell::F64(c)).collect();
        row.extend(out.coords.iter().map(|&c| Cell::F64(c)));
        row.push(Cell::F64(err));
        table.push_row(row);
    }
    Ok(table)
}

fn metric_columns() -> [&'static str; 10] {
    [
        "g_00", "g_01", "g_02", "g_03", "g_11", "g_12", "g_13", "g_22", "g_23", "g_33",
    ]
}

fn metric_cells(g: &Metric4) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(10);
    for mu in 0..4 {
        for nu in mu..4 {
            cells.push(Cell::F64(g.component(mu, nu)));
        }
    }
    cells
}

fn cmd_metric(entry: &CatalogEntry, config: &RunConfig) -> Result<Table> {
    let mc = config
        .metric
        .as_ref()
        .ok_or_else(|| Error::Config("metric command needs a \"metric\" block".into()))?;
    if mc.points.is_empty() {
        return Err(Error::Config("metric needs at least one point".into()));
    }
    let mut columns = vec!["x_0", "x_1", "x_2", "x_3"];
    columns.extend(metric_columns());
    let mut table = Table::new("metric", &columns)
        .with_meta("spacetime", entry.kind().label())
        .with_meta("chart", mc.chart);
    for coords in &mc.points {
        let p = SpacetimePoint::new(mc.chart, *coords);
        let g = match mc.chart {
            Chart::CartesianStatic => metric_at(entry.spec(), &p)?,
            Chart::FermiCartesian => fermi_metric_at(entry.spec(), &p)?,
            Chart::FermiPolar => fermi_polar_metric_at(entry.spec(), &p)?,
            Chart::StaticSpherical => static_spherical_metric_at(entry, &p)?,
        };
        let mut row: Vec<Cell> = coords.iter().map(|&c| Cell::F64(c)).collect();
        row.extend(metric_cells(&g));
        table.push_row(row);
    }
    Ok(table)
}

/// Builds the radial grid: endpoints included, with an endpoint on the chart
/// boundary clamped inward by 1e-9 of the range.
fn radial_grid(slice: &SubmanifoldSlice, grid: &GridConfig) -> Result<Vec<f64>> {
    if grid.count == 0 {
        return Err(Error::Config("grid count must be >= 1".into()));
    }
    let sup = slice.rho_sup();
    let default_max = if sup.is_finite() { 0.9 * sup } else { 3.0 };
    let mut hi = grid.rho_max.unwrap_or(default_max);
    let lo = grid.rho_min;
    if !(lo >= 0.0) || !(hi > lo) {
        return Err(Error::Config(format!(
            "grid range [{lo}, {hi}] is not an increasing range of nonnegative rho"
        )));
    }
    if hi >= sup {
        if hi > sup {
            return Err(Error::OutsideChart(format!(
                "grid rho_max = {hi} beyond the chart bound {sup}"
            )));
        }
        hi -= 1e-9 * (hi - lo);
    }
    if grid.count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..grid.count)
        .map(|i| lo + (hi - lo) * i as f64 / (grid.count - 1) as f64)
        .collect())
}

fn cmd_curvature(entry: &CatalogEntry, config: &RunConfig) -> Result<(Table, bool)> {
    let grid = config.grid.clone().unwrap_or_default();
    let tol = config.tolerances.unwrap_or_default().curvature;
    let slice = SubmanifoldSlice::for_entry(entry);
    let mut table = Table::new("curvature", &["rho", "K_analytic", "K_fd", "abs_diff"])
        .with_meta("spacetime", entry.kind().label())
        .with_meta("tolerance", tol);
    let mut ok = true;
    for rho in radial_grid(&slice, &grid)? {
        let ka = gaussian_curvature(&slice, rho, CurvatureMode::Analytic)?;
        let kf = gaussian_curvature(&slice, rho, CurvatureMode::FiniteDifference)?;
        let diff = (ka - kf).abs();
        ok &= diff <= tol;
        table.push_row(vec![
            Cell::F64(rho),
            Cell::F64(ka),
            Cell::F64(kf),
            Cell::F64(diff),
        ]);
    }
    Ok((table, ok))
}

fn cmd_jacobi(entry: &CatalogEntry, config: &RunConfig) -> Result<Table> {
    let jc: JacobiConfig = config.jacobi.clone().unwrap_or_default();
    if jc.count == 0 {
        return Err(Error::Config("jacobi count must be >= 1".into()));
    }
    let slice = SubmanifoldSlice::for_entry(entry);
    let sup = slice.rho_sup();
    let rho_max = jc
        .rho_max
        .unwrap_or(if sup.is_finite() { 0.9 * sup } else { 3.0 });
    let profile = jacobi_separation(&slice, jc.delta_t, rho_max, &IntegratorConfig::default())?;
    let mut table = Table::new("jacobi", &["rho", "y", "y_closed_form", "abs_diff"])
        .with_meta("spacetime", entry.kind().label())
        .with_meta("delta_t", jc.delta_t);
    let last = profile.rho.len() - 1;
    for j in 0..jc.count {
        let idx = if jc.count == 1 {
            last
        } else {
            (j * last) / (jc.count - 1)
        };
        let closed = jc.delta_t * slice.lapse(profile.rho[idx]);
        table.push_row(vec![
            Cell::F64(profile.rho[idx]),
            Cell::F64(profile.y[idx]),
            Cell::F64(closed),
            Cell::F64((profile.y[idx] - closed).abs()),
        ]);
    }
    Ok(table)
}

fn cmd_horizon(entry: &CatalogEntry, config: &RunConfig) -> Result<Table> {
    let hc: HorizonConfig = config.horizon.unwrap_or_default();
    if !(hc.tolerance > 0.0) {
        return Err(Error::Config("horizon tolerance must be positive".into()));
    }
    let slice = SubmanifoldSlice::for_entry(entry);
    let found = horizon_scan(&slice, hc.tolerance);
    let mut table = Table::new("horizon", &["rho_h"])
        .with_meta("spacetime", entry.kind().label())
        .with_meta("tolerance", hc.tolerance);
    table.push_row(vec![Cell::from(found)]);
    Ok(table)
}

fn validate_table(report: &crate::validate::ValidationReport) -> Table {
    let mut table = Table::new(
        "validate",
        &["check", "passed", "max_error", "tolerance", "samples"],
    )
    .with_meta("spacetime", report.spacetime.clone())
    .with_meta("seed", report.seed);
    for c in &report.checks {
        table.push_row(vec![
            Cell::Str(c.name.clone()),
            Cell::Bool(c.passed),
            Cell::F64(c.max_error),
            Cell::F64(c.tolerance),
            Cell::U64(c.samples),
        ]);
    }
    table
}
