use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coldclock::experiments::output::{
    format_float, scenario_metadata, svg_line_plot, Column, Table,
};
use coldclock::experiments::{
    default_delta_grid, fit_inverse_square, linspace, run_grid, run_sweep, SweepRange, SweepSpec,
    SweepVariable,
};
use coldclock::model::ModelRegistry;
use coldclock::physics::{peres_bound, rad_to_hz, Geometry, Pulse};
use coldclock::shifts::{
    envelope, gamma_expansion, half_height_estimate, half_height_shift, velocity_average,
};

mod config;

use config::{FileConfig, Overrides};

#[derive(Parser, Debug)]
#[command(
    name = "coldclock",
    version,
    about = "Quantum-motion shifts of Rabi and Ramsey cold-atom clocks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Atomic mass (kg).
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// Atomic velocity (m/s).
    #[arg(long, global = true)]
    velocity: Option<f64>,
    /// Field-zone width l (m).
    #[arg(long, global = true)]
    field_width: Option<f64>,
    /// Gap ratio N = L/l (Ramsey).
    #[arg(long, global = true)]
    gap_ratio: Option<f64>,
    /// pi | pi2 | omega=<rad/s>
    #[arg(long, global = true)]
    pulse: Option<Pulse>,
    #[arg(long, global = true)]
    geometry: Option<Geometry>,
    /// Resonance model used for shifts and curves.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write an SVG plot next to --out.
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Units with hbar = m = 1.
    #[arg(long, global = true)]
    dimensionless: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum and semiclassical resonance curves on a detuning grid.
    Curve {
        /// Lower detuning (rad/s); default -4 Omega.
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Maximum and half-height shifts of one scenario.
    Shift {
        /// Gaussian velocity spread (m/s) for an averaged curve.
        #[arg(long)]
        sigma_v: Option<f64>,
        /// Quadrature nodes for the velocity average.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Shifts (or curves) along one swept parameter.
    Sweep {
        #[arg(long)]
        variable: Option<SweepVariableArg>,
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        log: bool,
    },
    /// Fractional half-height offsets over field widths and gap ratios.
    Grid {
        /// Comma-separated field widths (m).
        #[arg(long, value_delimiter = ',')]
        l_values: Option<Vec<f64>>,
        /// Comma-separated gap ratios; 0 means a Rabi zone.
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<f64>>,
    },
    /// Power-law fit y = c x^p, free and with p = -2.
    Fit {
        /// CSV produced by this tool.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Column names for x and y.
        #[arg(long, default_value = "field_width_m")]
        x: String,
        #[arg(long, default_value = "delta_hh_rad_s")]
        y: String,
        /// Inline data instead of --input.
        #[arg(long, value_delimiter = ',')]
        xs: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        ys: Option<Vec<f64>>,
    },
    /// Time-resolution bound hbar/E for a given velocity.
    Peres,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SweepVariableArg {
    Delta,
    Velocity,
    FieldWidth,
    GapRatio,
}

impl From<SweepVariableArg> for SweepVariable {
    fn from(v: SweepVariableArg) -> Self {
        match v {
            SweepVariableArg::Delta => SweepVariable::Delta,
            SweepVariableArg::Velocity => SweepVariable::Velocity,
            SweepVariableArg::FieldWidth => SweepVariable::FieldWidth,
            SweepVariableArg::GapRatio => SweepVariable::GapRatio,
        }
    }
}

enum Failure {
    Config(anyhow::Error),
    Solver(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

/// Library errors from solvers are exit code 3, everything else 2.
fn classify(e: coldclock::Error) -> Failure {
    match e {
        coldclock::Error::InvalidConfig(_) | coldclock::Error::ZeroCoupling => {
            Failure::Config(e.into())
        }
        _ => Failure::Solver(e.into()),
    }
}

struct Report {
    table: Table,
    plot: Option<String>,
    flagged: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(flagged) => {
            eprintln!("warning: {flagged} row(s) flagged by the solvers");
            ExitCode::from(3)
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failure: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<usize, Failure> {
    let g = &cli.global;
    let file = match &g.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides {
        dimensionless: g.dimensionless,
        mass: g.mass,
        velocity: g.velocity,
        field_width: g.field_width,
        gap_ratio: g.gap_ratio,
        pulse: g.pulse,
        geometry: g.geometry,
        model: g.model.clone(),
    };
    if g.svg && g.out.is_none() {
        return Err(anyhow!("--svg needs --out").into());
    }
    let registry = ModelRegistry::builtin();
    let report = match &cli.command {
        Command::Curve { min, max, count } => {
            curve(&file, &overrides, &registry, *min, *max, *count)?
        }
        Command::Shift { sigma_v, samples } => {
            shift(&file, &overrides, &registry, *sigma_v, *samples)?
        }
        Command::Sweep {
            variable,
            min,
            max,
            count,
            log,
        } => sweep(
            &file, &overrides, &registry, *variable, *min, *max, *count, *log,
        )?,
        Command::Grid { l_values, n_values } => {
            grid(&file, &overrides, l_values.clone(), n_values.clone())?
        }
        Command::Fit {
            input,
            x,
            y,
            xs,
            ys,
        } => fit(input.as_deref(), x, y, xs.clone(), ys.clone())?,
        Command::Peres => peres(&file, &overrides)?,
    };
    emit(g, &report)?;
    Ok(report.flagged)
}

fn emit(g: &Global, report: &Report) -> anyhow::Result<()> {
    let body = match g.format {
        Format::Csv => report.table.to_csv_string(),
        Format::Json => serde_json::to_string_pretty(&report.table.to_json())? + "\n",
    };
    match &g.out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    if g.svg {
        let out = g.out.as_ref().expect("checked above");
        let svg_path = out.with_extension("svg");
        let svg = report
            .plot
            .clone()
            .unwrap_or_else(|| svg_line_plot("(no plot for this command)", "", "", &[]));
        std::fs::write(&svg_path, svg)
            .with_context(|| format!("writing {}", svg_path.display()))?;
    }
    Ok(())
}

fn series(table: &Table, x: &str, y: &str) -> Vec<(f64, f64)> {
    match (table.column(x), table.column(y)) {
        (Some(xs), Some(ys)) => xs.into_iter().zip(ys).collect(),
        _ => Vec::new(),
    }
}

fn curve(
    file: &FileConfig,
    o: &Overrides,
    registry: &ModelRegistry,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
) -> Result<Report, Failure> {
    let r = config::resolve(file, o)?;
    let default = default_delta_grid(&r.scenario);
    let lo = min.or(file.curve.min).unwrap_or(default[0]);
    let hi = max.or(file.curve.max).unwrap_or(default[default.len() - 1]);
    let n = count.or(file.curve.count).unwrap_or(default.len());
    let range = SweepRange {
        min: lo,
        max: hi,
        count: n,
        spacing: Default::default(),
    };
    let mut spec = SweepSpec::new(SweepVariable::Delta, range, r.scenario);
    spec.model = r.model;
    let (table, flagged) = run_sweep(&spec, registry).map_err(classify)?;
    let plot = svg_line_plot(
        &format!("{} resonance", r.scenario.geometry),
        "detuning (rad/s)",
        "P12",
        &[
            ("quantum", series(&table, "delta_rad_s", "p_quantum")),
            (
                "semiclassical",
                series(&table, "delta_rad_s", "p_semiclassical"),
            ),
        ],
    );
    Ok(Report {
        table,
        plot: Some(plot),
        flagged,
    })
}

fn shift(
    file: &FileConfig,
    o: &Overrides,
    registry: &ModelRegistry,
    sigma_v: Option<f64>,
    samples: Option<usize>,
) -> Result<Report, Failure> {
    let r = config::resolve(file, o)?;
    let cfg = r.scenario;
    let sigma_v = sigma_v.or(file.averaging.sigma_v);
    let (result, model_name) = match sigma_v {
        Some(sigma) => {
            let n = samples.or(file.averaging.samples).unwrap_or(48);
            (
                velocity_average(&cfg, sigma, n).map_err(classify)?.shifts,
                "velocity-averaged".to_string(),
            )
        }
        None => {
            let model = registry.create(&r.model, &cfg).map_err(classify)?;
            (
                half_height_shift(model.as_ref()).map_err(classify)?,
                r.model.clone(),
            )
        }
    };
    let theta = (sigma_v.is_none() && r.model == "quantum")
        .then(|| gamma_expansion(&cfg).ok().map(|e| e.predicted_peak()))
        .flatten();
    let mut t = Table::new(vec![
        Column::new("delta_max_rad_s", "rad/s"),
        Column::new("delta_max_hz", "Hz"),
        Column::new("frac_max", "1"),
        Column::new("frac_max_abs", "1"),
        Column::new("theta_root_rad_s", "rad/s"),
        Column::new("envelope_rad_s", "rad/s"),
        Column::new("delta_hh_rad_s", "rad/s"),
        Column::new("delta_hh_hz", "Hz"),
        Column::new("frac_hh", "1"),
        Column::new("frac_hh_abs", "1"),
        Column::new("hh_left_rad_s", "rad/s"),
        Column::new("hh_right_rad_s", "rad/s"),
        Column::new("hh_estimate_rad_s", "rad/s"),
        Column::new("peak_height", "1"),
    ]);
    t.meta("kind", "shift");
    t.meta("model", &model_name);
    if let Some(s) = sigma_v {
        t.meta("sigma_v_m_s", format_float(s));
    }
    scenario_metadata(&mut t, &cfg);
    t.push(vec![
        result.delta_max.into(),
        rad_to_hz(result.delta_max).into(),
        result.frac_max.into(),
        result.frac_max.abs().into(),
        theta.into(),
        envelope(&cfg).into(),
        result.delta_hh.into(),
        rad_to_hz(result.delta_hh).into(),
        result.frac_hh.into(),
        result.frac_hh.abs().into(),
        result.hh_left.into(),
        result.hh_right.into(),
        half_height_estimate(cfg.field_width, &cfg.constants).into(),
        result.peak_height.into(),
    ]);
    Ok(Report {
        table: t,
        plot: None,
        flagged: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    file: &FileConfig,
    o: &Overrides,
    registry: &ModelRegistry,
    variable: Option<SweepVariableArg>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    log: bool,
) -> Result<Report, Failure> {
    let r = config::resolve(file, o)?;
    let section = file.sweep.as_ref();
    let variable: SweepVariable = match (variable, section) {
        (Some(v), _) => v.into(),
        (None, Some(s)) => s.variable,
        (None, None) => return Err(anyhow!("sweep needs --variable or a [sweep] section").into()),
    };
    let mut range = match section {
        Some(s) => config::sweep_range(s),
        None => SweepRange {
            min: f64::NAN,
            max: f64::NAN,
            count: 0,
            spacing: Default::default(),
        },
    };
    range.min = min.unwrap_or(range.min);
    range.max = max.unwrap_or(range.max);
    range.count = count.unwrap_or(range.count);
    if log {
        range.spacing = coldclock::experiments::Spacing::Log;
    }
    let mut spec = SweepSpec::new(variable, range, r.scenario);
    spec.model = r.model;
    if let Some(s) = section {
        spec.outputs = s.outputs;
    }
    let (table, flagged) = run_sweep(&spec, registry).map_err(classify)?;
    let x = table.columns[0].name.clone();
    let plot = if variable == SweepVariable::Delta {
        svg_line_plot(
            "resonance",
            &x,
            "P12",
            &[("quantum", series(&table, &x, "p_quantum"))],
        )
    } else {
        svg_line_plot(
            "shifts",
            &x,
            "fractional offset",
            &[
                ("|frac_max|", series(&table, &x, "frac_max_abs")),
                ("|frac_hh|", series(&table, &x, "frac_hh_abs")),
            ],
        )
    };
    Ok(Report {
        table,
        plot: Some(plot),
        flagged,
    })
}

fn grid(
    file: &FileConfig,
    o: &Overrides,
    l: Option<Vec<f64>>,
    n: Option<Vec<f64>>,
) -> Result<Report, Failure> {
    let mut section = file.grid.clone().unwrap_or(config::GridSection {
        velocity: None,
        l_values: linspace(1e-3, 5e-3, 5),
        n_values: vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0],
    });
    if let Some(l) = l {
        section.l_values = l;
    }
    if let Some(n) = n {
        section.n_values = n;
    }
    let spec = config::grid_spec(file, o, &section)?;
    let result = run_grid(&spec).map_err(classify)?;
    let table = result.to_table();
    let curves: Vec<(String, Vec<(f64, f64)>)> = spec
        .n_values
        .iter()
        .enumerate()
        .map(|(j, &nv)| {
            let pts = (0..spec.l_values.len())
                .map(|i| {
                    let y = result
                        .cell(i, j)
                        .shifts
                        .as_ref()
                        .map(|s| s.frac_hh.abs())
                        .unwrap_or(f64::NAN);
                    (spec.l_values[i], y)
                })
                .collect();
            (format!("N={nv}"), pts)
        })
        .collect();
    let refs: Vec<(&str, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|(n, p)| (n.as_str(), p.clone()))
        .collect();
    let plot = svg_line_plot("half-height offset", "l (m)", "|frac_hh|", &refs);
    Ok(Report {
        table,
        plot: Some(plot),
        flagged: result.flagged(),
    })
}

fn read_columns(path: &Path, x: &str, y: &str) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("column '{name}' not in {}", path.display()))
    };
    let (ix, iy) = (col(x)?, col(y)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rec in reader.records() {
        let rec = rec?;
        let (a, b): (f64, f64) = (rec[ix].parse()?, rec[iy].parse()?);
        if a.is_finite() && b.is_finite() {
            xs.push(a);
            ys.push(b.abs());
        }
    }
    Ok((xs, ys))
}

fn fit(
    input: Option<&Path>,
    x: &str,
    y: &str,
    xs: Option<Vec<f64>>,
    ys: Option<Vec<f64>>,
) -> Result<Report, Failure> {
    let (xs, ys, source) = match (input, xs, ys) {
        (Some(p), None, None) => {
            let (a, b) = read_columns(p, x, y)?;
            (a, b, format!("{} ({x} vs |{y}|)", p.display()))
        }
        (None, Some(a), Some(b)) => (a, b, "inline".to_string()),
        _ => return Err(anyhow!("fit needs either --input or both --xs and --ys").into()),
    };
    let result = fit_inverse_square(&xs, &ys).map_err(|e| Failure::Config(e.into()))?;
    let mut t = Table::new(vec![
        Column::new("model", ""),
        Column::new("c", "y/x^p"),
        Column::new("p", "1"),
        Column::new("rms_residual_log", "1"),
    ]);
    t.meta("kind", "fit");
    t.meta(
        "generator",
        concat!("coldclock ", env!("CARGO_PKG_VERSION")),
    );
    t.meta("source", source);
    t.meta("points", xs.len());
    for (name, f) in [
        ("free", result.free),
        ("inverse_square", result.constrained),
    ] {
        t.push(vec![
            name.into(),
            f.c.into(),
            f.p.into(),
            f.rms_residual.into(),
        ]);
    }
    let data: Vec<(f64, f64)> = xs.iter().zip(&ys).map(|(a, b)| (a.ln(), b.ln())).collect();
    let line: Vec<(f64, f64)> = xs
        .iter()
        .map(|a| (a.ln(), result.free.c.ln() + result.free.p * a.ln()))
        .collect();
    let plot = svg_line_plot(
        "power-law fit",
        "ln x",
        "ln y",
        &[("data", data), ("fit", line)],
    );
    Ok(Report {
        table: t,
        plot: Some(plot),
        flagged: 0,
    })
}

fn peres(file: &FileConfig, o: &Overrides) -> Result<Report, Failure> {
    let r = config::resolve(file, o)?;
    let c = r.scenario.constants;
    let v = r.scenario.velocity;
    if v.is_nan() || v <= 0.0 {
        return Err(anyhow!("velocity must be positive").into());
    }
    let mut t = Table::new(vec![
        Column::new("velocity_m_s", "m/s"),
        Column::new("kinetic_energy_J", "J"),
        Column::new("bound_s", "s"),
    ]);
    t.meta("kind", "peres");
    t.meta(
        "generator",
        concat!("coldclock ", env!("CARGO_PKG_VERSION")),
    );
    t.meta("hbar_J_s", format_float(c.hbar));
    t.meta("mass_kg", format_float(c.mass));
    t.push(vec![
        v.into(),
        (0.5 * c.mass * v * v).into(),
        peres_bound(v, &c).into(),
    ]);
    Ok(Report {
        table: t,
        plot: None,
        flagged: 0,
    })
}
