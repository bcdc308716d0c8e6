//! Convergence study driven by `key=value` pairs on the command line, layered
//! over `FEMBEM_*` environment variables. Prints the CSV report.
//!
//! Usage: `cargo run --release --example convergence_study -- degree=2 levels=0..4`

use fembem::study::{emit_report, run_study, ConfigOverrides};

fn main() -> fembem::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = ConfigOverrides::from_key_values(&args.join("\n"))?;
    let config = ConfigOverrides::from_env(std::env::vars())?.merge(cli).resolve()?;
    eprintln!("k = {}, α = {}, levels {:?}, {}", config.degree, config.alpha, config.levels(), config.data_mode);
    let report = run_study(&config, |r| eprintln!("  level {} done ({} + {} dofs)", r.level, r.ndof_fem, r.ndof_bem))?;
    emit_report(&report, config.format, std::io::stdout().lock())
}
