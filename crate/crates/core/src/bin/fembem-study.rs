//! Convergence study driver for the L-shape experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fembem::study::{run_study, write_report, ConfigOverrides};

#[derive(Parser, Debug)]
#[command(name = "fembem-study", version, about = "Symmetric FEM-BEM convergence study on the L-shape")]
struct Cli {
    /// key=value configuration file (flags and FEMBEM_* variables take precedence)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Polynomial degree k of the volume space (1 or 2)
    #[arg(long)]
    degree: Option<String>,
    /// Singularity exponent of the exact interior solution
    #[arg(long)]
    alpha: Option<String>,
    /// Inclusive level range A..B
    #[arg(long)]
    levels: Option<String>,
    /// project-u0 or project-both
    #[arg(long)]
    data_mode: Option<String>,
    /// Exactness degree of the triangle rule for loads and errors
    #[arg(long)]
    quad_volume: Option<String>,
    /// Gauss points per segment for boundary data and errors
    #[arg(long)]
    quad_boundary: Option<String>,
    /// Outer Gauss points for disjoint panel pairs
    #[arg(long)]
    panel_points: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Output file (standard output if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write mesh_<level>.txt for every level
    #[arg(long)]
    dump_mesh: bool,
    /// Write matrix_<level>.txt for every level
    #[arg(long)]
    dump_matrix: bool,
    /// Directory for dumps
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

impl Cli {
    fn overrides(&self) -> fembem::Result<ConfigOverrides> {
        let mut o = ConfigOverrides::default();
        let pairs = [
            ("degree", &self.degree),
            ("alpha", &self.alpha),
            ("levels", &self.levels),
            ("data_mode", &self.data_mode),
            ("quad_volume", &self.quad_volume),
            ("quad_boundary", &self.quad_boundary),
            ("panel_points", &self.panel_points),
            ("format", &self.format),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                o.set(k, v)?;
            }
        }
        o.out = self.out.clone();
        o.dump_dir = self.dump_dir.clone();
        if self.dump_mesh {
            o.dump_mesh = Some(true);
        }
        if self.dump_matrix {
            o.dump_matrix = Some(true);
        }
        Ok(o)
    }
}

fn run(cli: &Cli) -> fembem::Result<()> {
    let file = match &cli.config {
        Some(p) => ConfigOverrides::from_key_values(&std::fs::read_to_string(p)?)?,
        None => ConfigOverrides::default(),
    };
    let env = ConfigOverrides::from_env(std::env::vars())?;
    let config = file.merge(env).merge(cli.overrides()?).resolve()?;
    let report = run_study(&config, |r| {
        eprintln!("level {} h={:.4e} dofs={}+{} err_h1={:.3e}", r.level, r.h, r.ndof_fem, r.ndof_bem, r.err_h1)
    })?;
    write_report(&report, &config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
