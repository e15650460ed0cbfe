//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{DocumentError, EvolutionError, SpecError};
use crate::evolution::{evolve, OptimizerConfig, RunArchive};
use crate::grid::{build_grid, entrance_candidate_cells};
use crate::io::pareto::pareto_table;
use crate::io::{canonical_json, merge_fronts, read_layout, render_svg, write_layout, write_pareto_csv, LayoutDocument};
use crate::layout::{EngineSettings, LayoutModel};
use crate::spec::{load_spec, DesignSpec, Objective};

pub const EXIT_ARGS: i32 = 2;
pub const EXIT_SPEC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fieldplan", version, about = "Evolve floorplans from a design specification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a specification and report its grid.
    Validate {
        spec: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Run the optimiser and write archive, layouts, drawings and the Pareto table.
    Generate {
        spec: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Population size (even, at least 4).
        #[arg(long, default_value_t = 50)]
        pop: usize,
        /// Number of generations.
        #[arg(long, default_value_t = 100)]
        gens: usize,
        /// Output directory.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Recompute a layout document's objective vector.
    Evaluate { layout: PathBuf },
    /// Draw a layout document as SVG.
    Render {
        layout: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Merge the Pareto fronts of several archives into one table.
    Pareto {
        #[arg(required = true)]
        archives: Vec<PathBuf>,
        /// Output CSV; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Override the grid cell size in metres.
    #[arg(long)]
    pub cell_size: Option<f64>,
    /// Comma-separated objective names.
    #[arg(long, value_delimiter = ',', value_parser = parse_objective)]
    pub objectives: Option<Vec<Objective>>,
    /// Corridor reuse discount in (0, 1].
    #[arg(long)]
    pub shorten: Option<f64>,
    /// Field activation threshold.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Distance regulariser in the field denominator.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

fn parse_objective(s: &str) -> Result<Objective, SpecError> {
    s.parse()
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn document_failure(path: &Path, e: DocumentError) -> Failure {
    let code = match e {
        DocumentError::Io(_) => EXIT_IO,
        _ => EXIT_SPEC,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn spec_failure(path: &Path, e: SpecError) -> Failure {
    let code = match e {
        SpecError::Io(_) => EXIT_IO,
        _ => EXIT_SPEC,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

impl ModelArgs {
    fn settings(&self) -> Result<EngineSettings, Failure> {
        let mut s = EngineSettings::default();
        if let Some(v) = self.shorten {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Failure::new(EXIT_ARGS, "--shorten must lie in (0, 1]"));
            }
            s.shorten_factor = v;
        }
        if let Some(v) = self.delta {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::new(EXIT_ARGS, "--delta must be positive"));
            }
            s.field.delta = v;
        }
        if let Some(v) = self.epsilon {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::new(EXIT_ARGS, "--epsilon must be positive"));
            }
            s.field.epsilon = v;
        }
        Ok(s)
    }

    /// Load the spec and apply overrides.
    fn spec(&self, path: &Path) -> Result<DesignSpec, Failure> {
        let file = fs::File::open(path).map_err(|e| io_failure(path, e))?;
        let mut spec = load_spec(file).map_err(|e| spec_failure(path, e))?;
        if let Some(s) = self.cell_size {
            if !(s.is_finite() && s > 0.0) {
                return Err(Failure::new(EXIT_ARGS, "--cell-size must be positive"));
            }
            spec.cell_size = s;
        }
        if let Some(objs) = &self.objectives {
            spec.objectives = objs.clone();
        }
        spec.validated().map_err(|e| spec_failure(path, e))
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    spec_fingerprint: String,
    spec: &'a DesignSpec,
    config: &'a OptimizerConfig,
    settings: &'a EngineSettings,
    evaluations: usize,
    pareto_size: usize,
    files: Vec<String>,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    canonical_json(value)
        .map(String::into_bytes)
        .map_err(|e| Failure::new(1, e.to_string()))
}

fn load_layout(path: &Path) -> Result<LayoutDocument, Failure> {
    let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
    read_layout(&bytes).map_err(|e| document_failure(path, e))
}

fn format_vector(doc: &LayoutDocument) -> String {
    doc.objectives
        .iter()
        .map(|o| format!("{}={}\n", o.name, o.value))
        .collect()
}

fn validate(spec_path: &Path, model: &ModelArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = model.spec(spec_path)?;
    model.settings()?;
    let grid = build_grid(&spec).map_err(|e| Failure::new(EXIT_SPEC, e.to_string()))?;
    let entries = entrance_candidate_cells(&spec, &grid).map_err(|e| Failure::new(EXIT_SPEC, e.to_string()))?;
    let mut report = String::new();
    report.push_str(&format!("{}: ok\n", spec_path.display()));
    report.push_str(&format!(
        "grid: {}x{} cells of {} m, {} inside\n",
        grid.columns,
        grid.rows,
        grid.cell_size,
        grid.inside_count()
    ));
    report.push_str(&format!("entry cells: {}\n", entries.len()));
    report.push_str(&format!("windows: {}\n", spec.window_segments().len()));
    for (i, r) in spec.rooms.iter().enumerate() {
        report.push_str(&format!(
            "room {i}: {} ({}) width {}-{} m, height {}-{} m\n",
            r.name,
            r.kind.name(),
            r.width[0],
            r.width[1],
            r.height[0],
            r.height[1]
        ));
    }
    let names: Vec<&str> = spec.objectives.iter().map(|o| o.name()).collect();
    report.push_str(&format!("objectives: {}\n", names.join(", ")));
    out.write_all(report.as_bytes())
        .map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}

fn generate(spec_path: &Path, model: &ModelArgs, config: OptimizerConfig, out_dir: &Path) -> Result<(), Failure> {
    let spec = model.spec(spec_path)?;
    let settings = model.settings()?;
    config
        .validate()
        .map_err(|e| Failure::new(EXIT_ARGS, e.to_string()))?;
    let archive = evolve(&spec, &config, settings).map_err(|e| match e {
        EvolutionError::Grid(g) => Failure::new(EXIT_SPEC, g.to_string()),
        other => Failure::new(1, other.to_string()),
    })?;
    let layout_model =
        LayoutModel::new(spec.clone(), settings).map_err(|e| Failure::new(EXIT_SPEC, e.to_string()))?;

    fs::create_dir_all(out_dir).map_err(|e| io_failure(out_dir, e))?;
    let mut files = vec!["archive.json".to_string(), "pareto.csv".to_string()];
    write_file(&out_dir.join("archive.json"), &json_bytes(&archive)?)?;
    let csv = write_pareto_csv(&archive).map_err(|e| document_failure(out_dir, e))?;
    write_file(&out_dir.join("pareto.csv"), &csv)?;

    for (i, member) in archive.pareto.iter().enumerate() {
        let layout = layout_model
            .generate(&member.genome)
            .map_err(|e| Failure::new(1, e.to_string()))?;
        let doc = LayoutDocument::from_layout(&layout_model, &member.genome, &layout);
        let stem = format!("layout_{i:03}");
        let bytes = write_layout(&doc).map_err(|e| document_failure(out_dir, e))?;
        write_file(&out_dir.join(format!("{stem}.json")), &bytes)?;
        let svg = render_svg(&doc, &layout_model.grid, &spec);
        write_file(&out_dir.join(format!("{stem}.svg")), svg.as_bytes())?;
        files.push(format!("{stem}.json"));
        files.push(format!("{stem}.svg"));
    }

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        spec_fingerprint: spec.fingerprint(),
        spec: &spec,
        config: &config,
        settings: &settings,
        evaluations: archive.evaluations,
        pareto_size: archive.pareto.len(),
        files,
    };
    write_file(&out_dir.join("manifest.json"), &json_bytes(&manifest)?)?;
    eprintln!(
        "{} evaluations, {} Pareto layouts, {:.2} s",
        archive.evaluations,
        archive.pareto.len(),
        archive.wall_clock.as_secs_f64()
    );
    Ok(())
}

fn evaluate(path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = load_layout(path)?;
    let fresh = doc.reevaluate().map_err(|e| document_failure(path, e))?;
    let mut recomputed = doc.clone();
    recomputed.objectives = crate::io::document::objective_values(&fresh);
    out.write_all(format_vector(&recomputed).as_bytes())
        .map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    if fresh != doc.objective_vector() {
        return Err(Failure::new(
            1,
            format!("{}: recomputed objectives differ from the embedded vector", path.display()),
        ));
    }
    Ok(())
}

fn render(path: &Path, target: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = load_layout(path)?;
    let grid = build_grid(&doc.spec).map_err(|e| Failure::new(EXIT_SPEC, e.to_string()))?;
    let svg = render_svg(&doc, &grid, &doc.spec);
    match target {
        Some(p) => write_file(p, svg.as_bytes()),
        None => out
            .write_all(svg.as_bytes())
            .map_err(|e| Failure::new(EXIT_IO, e.to_string())),
    }
}

fn pareto(paths: &[PathBuf], target: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let mut archives: Vec<RunArchive> = Vec::with_capacity(paths.len());
    for p in paths {
        let bytes = fs::read(p).map_err(|e| io_failure(p, e))?;
        let a = serde_json::from_slice(&bytes).map_err(|e| document_failure(p, e.into()))?;
        archives.push(a);
    }
    let (labels, members) = merge_fronts(&archives).map_err(|e| Failure::new(EXIT_SPEC, e.to_string()))?;
    let table = pareto_table(&labels, &members).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    match target {
        Some(p) => write_file(p, &table),
        None => out
            .write_all(&table)
            .map_err(|e| Failure::new(EXIT_IO, e.to_string())),
    }
}

/// Execute a parsed command, writing reports to `out`.
pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { spec, model } => validate(&spec, &model, out),
        Command::Generate {
            spec,
            model,
            seed,
            pop,
            gens,
            out: dir,
        } => {
            let config = OptimizerConfig {
                population_size: pop,
                generations: gens,
                seed,
                ..OptimizerConfig::default()
            };
            generate(&spec, &model, config, &dir)
        }
        Command::Evaluate { layout } => evaluate(&layout, out),
        Command::Render { layout, out: target } => render(&layout, target.as_deref(), out),
        Command::Pareto { archives, out: target } => pareto(&archives, target.as_deref(), out),
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ARGS } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch(cli, &mut lock) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
