//! `eigencurve`: eigenfunction restriction functionals, sharpness closed
//! forms, and scaling experiments from the command line.
//!
//! Exit codes: 0 success (and, for `experiment`, fits inside the configured
//! bands); 1 experiment outside its band; 2 argument errors; 3 numerical
//! convergence failure.

mod output;
mod parse;

use clap::{Parser, Subcommand, ValueEnum};
use eigencurve_core::functionals::{
    fourier_spectrum, generalized_inner_product, kernel_probe, FunctionalRequest, PairFunction,
    ProbeConfig, Window,
};
use eigencurve_core::geometry::{CurveSpec, Eigenfunction, SpherePoint, Surface};
use eigencurve_core::harness::{
    run_experiment, ExperimentConfig, ExperimentId, ExperimentOutcome, PowerLawFit,
};
use eigencurve_core::quadrature::QuadResult;
use eigencurve_core::sharpness::{
    equator_mixed_inner_product_exact, sharpness_record, telescoping_product_log_form,
};
use eigencurve_core::Error;
use output::{emit, Cell, OutputRecord, Table};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_BAND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "eigencurve",
    version,
    about = "Laplace eigenfunction restrictions to closed curves: functionals, closed forms, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurfaceArg {
    Sphere,
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output path (stdout when omitted); written atomically
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct FunctionArgs {
    #[arg(long, value_enum, default_value = "sphere")]
    surface: SurfaceArg,
    /// Sphere harmonic degree and order, `l,m`
    #[arg(long, value_parser = parse::parse_index)]
    f: Option<(u32, i32)>,
    /// Torus wave modes `m,n[;m,n...]` on one lattice circle
    #[arg(long, value_parser = parse::parse_modes)]
    modes: Option<parse::ModeList>,
    /// Curve: `equator`, `tilted:<alpha>`, `geodesic:<p>,<q>[,<offset>]`
    #[arg(long, value_parser = parse::parse_curve, default_value = "equator")]
    curve: CurveSpec,
    /// Smooth cutoff `center,halfwidth` (full closed curve when omitted)
    #[arg(long, value_parser = parse::parse_window)]
    window: Option<Window>,
    /// Relative quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl FunctionArgs {
    fn eigenfunction(&self) -> Result<(Eigenfunction, String), (u8, String)> {
        match self.surface {
            SurfaceArg::Sphere => {
                let (l, m) = self
                    .f
                    .ok_or((EXIT_USAGE, "--f l,m is required on the sphere".into()))?;
                let f = Eigenfunction::sphere_harmonic(l, m).map_err(usage)?;
                Ok((f, format!("{l},{m}")))
            }
            SurfaceArg::Torus => {
                let parse::ModeList(modes) = self.modes.clone().ok_or((
                    EXIT_USAGE,
                    "--modes m,n[;m,n...] is required on the torus".into(),
                ))?;
                let label = format!(
                    "modes:{}",
                    modes
                        .iter()
                        .map(|(m, n, _)| format!("{m},{n}"))
                        .collect::<Vec<_>>()
                        .join(";")
                );
                Ok((Eigenfunction::torus_wave(&modes).map_err(usage)?, label))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inner product of two eigenfunctions over a curve, optionally windowed
    /// and frequency-twisted
    InnerProduct {
        #[command(flatten)]
        function: FunctionArgs,
        /// Second factor: `l,m` or `one`
        #[arg(long, default_value = "one")]
        g: String,
        /// Frequency of the `e^{-i nu s}` twist
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generalized period: the `nu`-th Fourier coefficient of the restriction
    Period {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        nu: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Batch of generalized periods over a frequency list
    Spectrum {
        #[command(flatten)]
        function: FunctionArgs,
        /// Comma-separated frequencies
        #[arg(long, value_parser = parse::parse_nu_list)]
        nu: parse::FrequencyList,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Windowed stationary-phase kernel over a sphere curve
    KernelProbe {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long, value_parser = parse::parse_curve, default_value = "equator")]
        curve: CurveSpec,
        /// Probe point `theta,phi`
        #[arg(long, value_parser = parse::parse_target)]
        target: SpherePoint,
        #[arg(long, value_parser = parse::parse_window, default_value = "0,0.25")]
        window: Window,
        /// Admissible-distance scale (annulus `[0.9, 1.1] * scale`)
        #[arg(long, default_value_t = 0.5)]
        scale: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact equator closed forms for one `(l, m)` pair (both even)
    Sharpness {
        /// Degree and order, `l,m`
        #[arg(long, value_parser = parse::parse_index)]
        f: (u32, i32),
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one scaling experiment (E1..E6); exits 0 iff fits stay in band
    Experiment {
        /// Experiment id: E1..E6
        id: String,
        /// Smallest degree of the geometric grid
        #[arg(long)]
        lmin: Option<u32>,
        /// Largest degree of the geometric grid
        #[arg(long)]
        lmax: Option<u32>,
        /// The constant `c` in `(0, 1)`
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_parser = parse::parse_curve)]
        curve: Option<CurveSpec>,
        #[arg(long, value_parser = parse::parse_window)]
        window: Option<Window>,
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the randomized probe placement
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn usage(e: Error) -> (u8, String) {
    (EXIT_USAGE, e.to_string())
}

fn numeric(e: Error) -> (u8, String) {
    let code = match e {
        Error::Convergence { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    };
    (code, e.to_string())
}

fn window_cells(window: &Option<Window>) -> (Cell, Cell) {
    match window {
        Some(w) => (Cell::Float(w.center), Cell::Float(w.halfwidth)),
        None => (Cell::Empty, Cell::Empty),
    }
}

fn quad_cells(r: &QuadResult) -> [Cell; 5] {
    [
        Cell::Float(r.value.re),
        Cell::Float(r.value.im),
        Cell::Float(r.value.norm()),
        Cell::Float(r.error_estimate),
        Cell::UInt(r.nodes_used as u64),
    ]
}

fn surface_name(s: Surface) -> &'static str {
    match s {
        Surface::Sphere => "sphere",
        Surface::Torus => "torus",
    }
}

fn write_output(
    output: &OutputArgs,
    command: String,
    table: &Table,
    fit: Option<&PowerLawFit>,
    extra: Vec<(&'static str, Cell)>,
    started: Instant,
) -> Result<(), (u8, String)> {
    let record = OutputRecord {
        command,
        table,
        fit,
        extra,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let payload = match output.format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => record.to_json(),
    };
    emit(output.out.as_deref(), &payload).map_err(|e| (EXIT_USAGE, format!("write failed: {e}")))
}

fn curve_label(curve: &CurveSpec) -> String {
    match curve {
        CurveSpec::Equator => "equator".into(),
        CurveSpec::TiltedGreatCircle { tilt } => format!("tilted:{tilt}"),
        CurveSpec::TorusGeodesic { p, q, offset } => format!("geodesic:{p},{q},{offset}"),
    }
}

fn run() -> Result<u8, (u8, String)> {
    let command_echo = std::env::args().collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    let started = Instant::now();
    match cli.command {
        Command::InnerProduct {
            function,
            g,
            nu,
            output,
        } => {
            let (f, f_label) = function.eigenfunction()?;
            let (pair, g_label) = if g == "one" {
                (PairFunction::One, "one".to_string())
            } else {
                let (l, m) = parse::parse_index(&g).map_err(|e| (EXIT_USAGE, e))?;
                if function.surface == SurfaceArg::Torus {
                    return Err((EXIT_USAGE, "--g l,m pairs live on the sphere".into()));
                }
                (
                    Eigenfunction::sphere_harmonic(l, m).map_err(usage)?.into(),
                    format!("{l},{m}"),
                )
            };
            let req = FunctionalRequest {
                f,
                g: pair,
                curve: function.curve,
                frequency: nu,
                window: function.window,
                tol: function.tol,
            };
            req.validate().map_err(usage)?;
            let r = generalized_inner_product(&req).map_err(numeric)?;
            let mut table = Table::new(vec![
                "surface",
                "f",
                "g",
                "curve",
                "nu",
                "window_center",
                "window_halfwidth",
                "re",
                "im",
                "modulus",
                "error_estimate",
                "nodes",
            ]);
            let (wc, wh) = window_cells(&function.window);
            let [re, im, modulus, err, nodes] = quad_cells(&r);
            table.push(vec![
                Cell::Str(surface_name(function.curve.surface()).into()),
                Cell::Str(f_label),
                Cell::Str(g_label),
                Cell::Str(curve_label(&function.curve)),
                Cell::Float(nu),
                wc,
                wh,
                re,
                im,
                modulus,
                err,
                nodes,
            ]);
            write_output(&output, command_echo, &table, None, vec![], started)?;
            Ok(0)
        }
        Command::Period {
            function,
            nu,
            output,
        } => {
            let (f, f_label) = function.eigenfunction()?;
            let req = FunctionalRequest {
                f,
                g: PairFunction::One,
                curve: function.curve,
                frequency: nu,
                window: function.window,
                tol: function.tol,
            };
            req.validate().map_err(usage)?;
            let r = generalized_inner_product(&req).map_err(numeric)?;
            let mut table = Table::new(vec![
                "surface",
                "f",
                "curve",
                "nu",
                "window_center",
                "window_halfwidth",
                "re",
                "im",
                "modulus",
                "error_estimate",
                "nodes",
            ]);
            let (wc, wh) = window_cells(&function.window);
            let [re, im, modulus, err, nodes] = quad_cells(&r);
            table.push(vec![
                Cell::Str(surface_name(function.curve.surface()).into()),
                Cell::Str(f_label),
                Cell::Str(curve_label(&function.curve)),
                Cell::Float(nu),
                wc,
                wh,
                re,
                im,
                modulus,
                err,
                nodes,
            ]);
            write_output(&output, command_echo, &table, None, vec![], started)?;
            Ok(0)
        }
        Command::Spectrum {
            function,
            nu,
            output,
        } => {
            let (f, f_label) = function.eigenfunction()?;
            let values =
                fourier_spectrum(&f, &function.curve, &nu.0, function.window, function.tol)
                    .map_err(numeric)?;
            let mut table = Table::new(vec!["surface", "f", "curve", "nu", "re", "im", "modulus"]);
            for (nu, value) in values {
                table.push(vec![
                    Cell::Str(surface_name(function.curve.surface()).into()),
                    Cell::Str(f_label.clone()),
                    Cell::Str(curve_label(&function.curve)),
                    Cell::Float(nu),
                    Cell::Float(value.re),
                    Cell::Float(value.im),
                    Cell::Float(value.norm()),
                ]);
            }
            write_output(&output, command_echo, &table, None, vec![], started)?;
            Ok(0)
        }
        Command::KernelProbe {
            lambda,
            nu,
            curve,
            target,
            window,
            scale,
            tol,
            output,
        } => {
            let config = ProbeConfig {
                scale,
                tol,
                ..ProbeConfig::default()
            };
            let r = kernel_probe(lambda, nu, &curve, &target, &window, &config).map_err(numeric)?;
            let mut table = Table::new(vec![
                "lambda",
                "nu",
                "curve",
                "target_theta",
                "target_phi",
                "window_center",
                "window_halfwidth",
                "re",
                "im",
                "modulus",
                "error_estimate",
                "nodes",
            ]);
            let [re, im, modulus, err, nodes] = quad_cells(&r);
            table.push(vec![
                Cell::Float(lambda),
                Cell::Float(nu),
                Cell::Str(curve_label(&curve)),
                Cell::Float(target.colatitude),
                Cell::Float(target.longitude),
                Cell::Float(window.center),
                Cell::Float(window.halfwidth),
                re,
                im,
                modulus,
                err,
                nodes,
            ]);
            write_output(&output, command_echo, &table, None, vec![], started)?;
            Ok(0)
        }
        Command::Sharpness { f: (l, m), output } => {
            if m < 0 {
                return Err((EXIT_USAGE, "sharpness closed forms take m >= 0".into()));
            }
            let record = sharpness_record(l, m as u32).map_err(usage)?;
            let exact = equator_mixed_inner_product_exact(l, m as u32).map_err(usage)?;
            let log_form = telescoping_product_log_form(l, m as u32).map_err(usage)?;
            let mut table = Table::new(vec![
                "degree",
                "order",
                "exact",
                "surrogate",
                "surrogate_ratio",
                "telescoping",
                "telescoping_log_form",
                "ratio_bound",
            ]);
            table.push(vec![
                Cell::UInt(l as u64),
                Cell::UInt(m as u64),
                Cell::Float(exact),
                Cell::Float(record.surrogate_value),
                Cell::Float(record.surrogate_value / record.exact_value),
                Cell::Float(record.telescoping),
                Cell::Float(log_form),
                Cell::Float(record.ratio_bound),
            ]);
            write_output(&output, command_echo, &table, None, vec![], started)?;
            Ok(0)
        }
        Command::Experiment {
            id,
            lmin,
            lmax,
            c,
            curve,
            window,
            tol,
            seed,
            output,
        } => {
            let id: ExperimentId = id.parse().map_err(usage)?;
            let mut config = ExperimentConfig::defaults(id);
            if let Some(v) = lmin {
                config.degree_min = v;
            }
            if let Some(v) = lmax {
                config.degree_max = v;
            }
            if let Some(v) = c {
                config.ratio = v;
            }
            if let Some(v) = curve {
                config.curve = v;
            }
            if let Some(v) = window {
                config.window = Some(v);
            }
            if let Some(v) = tol {
                config.tol = v;
            }
            if let Some(v) = seed {
                config.seed = v;
            }
            let outcome = run_experiment(&config).map_err(|abort| {
                let code = match abort.cause {
                    Error::Convergence { .. } => EXIT_NUMERIC,
                    _ => EXIT_USAGE,
                };
                (code, abort.to_string())
            })?;
            let table = experiment_table(&outcome);
            let mut extra: Vec<(&'static str, Cell)> = vec![
                ("experiment", Cell::Str(id.as_str().into())),
                ("description", Cell::Str(id.description().into())),
                ("pass", Cell::Bool(outcome.pass)),
                ("seed", Cell::UInt(config.seed)),
            ];
            if let Some((lo, hi)) = outcome.exponent_band {
                extra.push(("band_lo", Cell::Float(lo)));
                extra.push(("band_hi", Cell::Float(hi)));
            }
            if let Some(p) = outcome.probe_target {
                extra.push(("probe_theta", Cell::Float(p.colatitude)));
                extra.push(("probe_phi", Cell::Float(p.longitude)));
            }
            summarize_experiment(&outcome);
            write_output(
                &output,
                command_echo,
                &table,
                outcome.fit.as_ref(),
                extra,
                started,
            )?;
            Ok(if outcome.pass { 0 } else { EXIT_BAND })
        }
    }
}

fn experiment_table(outcome: &ExperimentOutcome) -> Table {
    let mut table = Table::new(vec![
        "experiment",
        "series",
        "degree",
        "order",
        "nu",
        "re",
        "im",
        "modulus",
        "provenance",
        "deviation",
    ]);
    for row in &outcome.rows {
        table.push(vec![
            Cell::Str(outcome.id.as_str().into()),
            Cell::Str(row.series.into()),
            Cell::UInt(row.degree as u64),
            Cell::Int(row.order),
            Cell::Float(row.frequency),
            Cell::Float(row.value.re),
            Cell::Float(row.value.im),
            Cell::Float(row.modulus),
            Cell::Str(row.provenance.as_str().into()),
            match row.deviation {
                Some(d) => Cell::Float(d),
                None => Cell::Empty,
            },
        ]);
    }
    table
}

fn summarize_experiment(outcome: &ExperimentOutcome) {
    match (&outcome.fit, outcome.exponent_band) {
        (Some(fit), Some((lo, hi))) => eprintln!(
            "{}: exponent {:.4} (band [{lo:.2}, {hi:.2}], r^2 {:.4}) -> {}",
            outcome.id.as_str(),
            fit.exponent,
            fit.r_squared,
            if outcome.pass { "PASS" } else { "FAIL" },
        ),
        _ => eprintln!(
            "{}: exactness checks -> {}",
            outcome.id.as_str(),
            if outcome.pass { "PASS" } else { "FAIL" },
        ),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
