//! Convergence studies on the L-shape family: configuration, the refinement
//! loop and report output.
//!
//! Configuration layers, later ones winning: built-in defaults, a `key=value`
//! file, `FEMBEM_*` environment variables, command line flags. Keys:
//!
//! | key | env | default |
//! |---|---|---|
//! | `degree` | `FEMBEM_DEGREE` | 1 |
//! | `alpha` | `FEMBEM_ALPHA` | degree + 1/2 |
//! | `levels` (`A..B` or `A`) | `FEMBEM_LEVELS` | `0..6` for k = 1, `0..5` for k = 2 |
//! | `data_mode` (`project-u0`, `project-both`) | `FEMBEM_DATA_MODE` | `project-u0` |
//! | `quad_volume` | `FEMBEM_QUAD_VOLUME` | 10 |
//! | `quad_boundary` | `FEMBEM_QUAD_BOUNDARY` | 16 |
//! | `panel_points` | `FEMBEM_PANEL_POINTS` | 16 |
//! | `format` (`csv`, `json`) | `FEMBEM_FORMAT` | `csv` |
//! | `out` | `FEMBEM_OUT` | standard output |
//! | `dump_mesh`, `dump_matrix` (`true`/`false`) | `FEMBEM_DUMP_MESH`, `FEMBEM_DUMP_MATRIX` | false |
//! | `dump_dir` | `FEMBEM_DUMP_DIR` | `.` |
//!
//! Dumps are written per level as `mesh_<level>.txt` and `matrix_<level>.txt`.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bem::{BemSpace, PanelBasis, PanelIntegrator, TraceSpace};
use crate::coupling::{assemble_rhs_from, assemble_system, solve, DataMode, DataQuadrature};
use crate::error::{Error, Result};
use crate::fem::{build_fe_space, trace_restriction, Coefficient};
use crate::manufactured::{ManufacturedCase, TransmissionData};
use crate::mesh::{boundary_strip, build_lshape, extract_boundary};
use crate::norms::{eoc, error_flux_weighted, error_h1_semi, error_l2, error_l2_strip, EocRow, EocTable, ErrorReport};

pub const ENV_PREFIX: &str = "FEMBEM_";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub degree: usize,
    pub alpha: f64,
    pub level_min: usize,
    pub level_max: usize,
    pub data_mode: DataMode,
    pub quad_volume: usize,
    pub quad_boundary: usize,
    pub panel_points: usize,
    pub format: ReportFormat,
    pub out: Option<PathBuf>,
    pub dump_mesh: bool,
    pub dump_matrix: bool,
    pub dump_dir: PathBuf,
}

impl StudyConfig {
    /// Defaults for degree `k`: α = k + 1/2, levels 0..6 (k = 1) or 0..5 (k = 2).
    pub fn for_degree(k: usize) -> Self {
        StudyConfig {
            degree: k,
            alpha: k as f64 + 0.5,
            level_min: 0,
            level_max: if k == 1 { 6 } else { 5 },
            data_mode: DataMode::ProjectU0,
            quad_volume: 10,
            quad_boundary: 16,
            panel_points: 16,
            format: ReportFormat::Csv,
            out: None,
            dump_mesh: false,
            dump_matrix: false,
            dump_dir: PathBuf::from("."),
        }
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.level_min..=self.level_max
    }

    pub fn quadrature(&self) -> DataQuadrature {
        DataQuadrature { volume_degree: self.quad_volume, boundary_points: self.quad_boundary }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(1..=2).contains(&self.degree) {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.level_min > self.level_max {
            return bad(format!("empty level range {}..{}", self.level_min, self.level_max));
        }
        if self.quad_volume < 2 || self.quad_boundary < 2 || self.panel_points < 2 {
            return bad("quadrature orders must be at least 2".into());
        }
        Ok(())
    }
}

/// A partial configuration from one source; `None` leaves the value to lower layers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub degree: Option<usize>,
    pub alpha: Option<f64>,
    pub levels: Option<(usize, usize)>,
    pub data_mode: Option<DataMode>,
    pub quad_volume: Option<usize>,
    pub quad_boundary: Option<usize>,
    pub panel_points: Option<usize>,
    pub format: Option<ReportFormat>,
    pub out: Option<PathBuf>,
    pub dump_mesh: Option<bool>,
    pub dump_matrix: Option<bool>,
    pub dump_dir: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::InvalidConfig(format!("bad value '{value}' for {key}")))
}

/// Parses `A..B` (inclusive) or a single level `A`.
pub fn parse_levels(s: &str) -> Result<(usize, usize)> {
    let s = s.trim();
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((parse_value("levels", a.trim())?, parse_value("levels", b.trim())?))
        }
        None => {
            let a = parse_value("levels", s)?;
            Ok((a, a))
        }
    }
}

impl ConfigOverrides {
    /// Sets one key. Keys are case-insensitive and `-` is read as `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "degree" => self.degree = Some(parse_value(&key, value)?),
            "alpha" => self.alpha = Some(parse_value(&key, value)?),
            "levels" => self.levels = Some(parse_levels(value)?),
            "data_mode" => self.data_mode = Some(value.parse()?),
            "quad_volume" => self.quad_volume = Some(parse_value(&key, value)?),
            "quad_boundary" => self.quad_boundary = Some(parse_value(&key, value)?),
            "panel_points" => self.panel_points = Some(parse_value(&key, value)?),
            "format" => self.format = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            "dump_mesh" => self.dump_mesh = Some(parse_value(&key, value)?),
            "dump_matrix" => self.dump_matrix = Some(parse_value(&key, value)?),
            "dump_dir" => self.dump_dir = Some(PathBuf::from(value)),
            _ => return Err(Error::InvalidConfig(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key=value", n + 1)))?;
            o.set(k, v)?;
        }
        Ok(o)
    }

    /// Collects `FEMBEM_<KEY>` variables; others are ignored.
    pub fn from_env(vars: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (k, v) in vars {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                o.set(key, &v)?;
            }
        }
        Ok(o)
    }

    /// Layers `other` on top of `self`.
    pub fn merge(mut self, other: ConfigOverrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            degree,
            alpha,
            levels,
            data_mode,
            quad_volume,
            quad_boundary,
            panel_points,
            format,
            out,
            dump_mesh,
            dump_matrix,
            dump_dir
        );
        self
    }

    /// Fills unset values with the defaults of the chosen degree and validates.
    pub fn resolve(self) -> Result<StudyConfig> {
        let mut c = StudyConfig::for_degree(self.degree.unwrap_or(1));
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        if let Some((a, b)) = self.levels {
            c.level_min = a;
            c.level_max = b;
        }
        c.data_mode = self.data_mode.unwrap_or(c.data_mode);
        c.quad_volume = self.quad_volume.unwrap_or(c.quad_volume);
        c.quad_boundary = self.quad_boundary.unwrap_or(c.quad_boundary);
        c.panel_points = self.panel_points.unwrap_or(c.panel_points);
        c.format = self.format.unwrap_or(c.format);
        c.out = self.out.or(c.out);
        c.dump_mesh = self.dump_mesh.unwrap_or(c.dump_mesh);
        c.dump_matrix = self.dump_matrix.unwrap_or(c.dump_matrix);
        c.dump_dir = self.dump_dir.unwrap_or(c.dump_dir);
        c.validate()?;
        Ok(c)
    }
}

/// Solves one level of the study and measures its errors.
pub fn run_level(config: &StudyConfig, case: &ManufacturedCase, level: usize) -> Result<ErrorReport> {
    let k = config.degree;
    let mesh = build_lshape(level);
    let bmesh = extract_boundary(&mesh)?;
    let fe = build_fe_space(&mesh, k)?;
    let trace = trace_restriction(&fe, &bmesh)?;
    let t = TraceSpace::new(&bmesh, k)?;
    let m = BemSpace::new(&bmesh, k - 1)?;
    let integrator = PanelIntegrator::new(config.panel_points);
    let sys = assemble_system(&fe, &trace, &t, &m, &Coefficient::identity(), &integrator)?;
    if config.dump_mesh {
        mesh.write_text(BufWriter::new(File::create(config.dump_dir.join(format!("mesh_{level}.txt")))?))?;
    }
    if config.dump_matrix {
        sys.write_matrix(BufWriter::new(File::create(config.dump_dir.join(format!("matrix_{level}.txt")))?))?;
    }
    let rhs = assemble_rhs_from(&sys, &fe, &t, &m, case, config.data_mode, config.quadrature());
    let sol = solve(&sys, &rhs)?;
    if !(sol.relative_residual <= 1e-10) {
        return Err(Error::Factorization(format!("relative residual {:e} at level {level}", sol.relative_residual)));
    }
    let q = config.quad_volume;
    let normals = &bmesh.outward_normals;
    Ok(ErrorReport {
        level,
        h: mesh.h,
        ndof_fem: fe.n_dofs(),
        ndof_bem: m.n_dofs(),
        err_h1: error_h1_semi(&fe, &sol.u, |x| case.interior_gradient(x), q),
        err_l2: error_l2(&fe, &sol.u, |x| case.interior(x), q),
        err_strip: error_l2_strip(&fe, &sol.u, |x| case.interior(x), &boundary_strip(&mesh), q),
        err_flux: error_flux_weighted(
            &m,
            &sol.phi,
            |x, s| case.exterior_flux(x, normals[s]),
            mesh.h,
            config.quad_boundary,
        ),
    })
}

/// Per-level reports and the orders between consecutive levels.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub reports: Vec<ErrorReport>,
    pub eoc: Vec<EocRow>,
}

impl StudyReport {
    pub fn new(reports: Vec<ErrorReport>) -> Self {
        let EocTable { rows } = eoc(&reports);
        StudyReport { reports, eoc: rows }
    }

    pub fn eoc_table(&self) -> EocTable {
        EocTable { rows: self.eoc.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs every level of the configured range, calling `progress` after each.
pub fn run_study(config: &StudyConfig, mut progress: impl FnMut(&ErrorReport)) -> Result<StudyReport> {
    config.validate()?;
    let case = ManufacturedCase::new(config.alpha)?;
    let mut reports = Vec::new();
    for level in config.levels() {
        let r = run_level(config, &case, level)?;
        progress(&r);
        reports.push(r);
    }
    Ok(StudyReport::new(reports))
}

pub const CSV_HEADER: &str = "level,h,ndof_fem,ndof_bem,err_h1,err_l2,err_strip,err_flux";
pub const CSV_EOC_HEADER: &str = "from_level,to_level,eoc_h1,eoc_l2,eoc_strip,eoc_flux";

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the report as CSV (per-level block, then a blank line and the EOC
/// block when there are at least two levels) or JSON.
pub fn emit_report(report: &StudyReport, format: ReportFormat, mut w: impl Write) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for r in &report.reports {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    r.level,
                    fmt_float(r.h),
                    r.ndof_fem,
                    r.ndof_bem,
                    fmt_float(r.err_h1),
                    fmt_float(r.err_l2),
                    fmt_float(r.err_strip),
                    fmt_float(r.err_flux)
                )?;
            }
            if !report.eoc.is_empty() {
                writeln!(w)?;
                writeln!(w, "{CSV_EOC_HEADER}")?;
                for e in &report.eoc {
                    let cols: Vec<String> = e.orders().iter().map(|o| o.map(fmt_float).unwrap_or_default()).collect();
                    writeln!(w, "{},{},{}", e.from_level, e.to_level, cols.join(","))?;
                }
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// [`emit_report`] to `config.out`, or to standard output when unset.
pub fn write_report(report: &StudyReport, config: &StudyConfig) -> Result<()> {
    match &config.out {
        Some(p) => emit_report(report, config.format, BufWriter::new(File::create(p)?)),
        None => emit_report(report, config.format, std::io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(levels: usize) -> StudyReport {
        StudyReport::new(
            (0..levels)
                .map(|l| {
                    let h = 0.2 / (1 << l) as f64;
                    ErrorReport {
                        level: l,
                        h,
                        ndof_fem: 10 << l,
                        ndof_bem: 8 << l,
                        err_h1: h,
                        err_l2: h * h,
                        err_strip: 0.0,
                        err_flux: h.powf(1.5),
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        emit_report(&StudyReport::default(), ReportFormat::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));

        let mut out = Vec::new();
        emit_report(&sample(1), ReportFormat::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 2);

        let mut out = Vec::new();
        emit_report(&sample(3), ReportFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 3 + 1 + 1 + 2);
        assert_eq!(lines[1], "0,2.0000000000000001e-1,10,8,2.0000000000000001e-1,4.0000000000000008e-2,0.0000000000000000e0,8.9442719099991602e-2");
        assert_eq!(lines[4], "");
        assert_eq!(lines[5], CSV_EOC_HEADER);
        assert!(lines[6].starts_with("0,1,1.0000000000000000e0,2.0000000000000000e0,,1.5"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn json_round_trip() {
        let r = sample(3);
        let mut out = Vec::new();
        emit_report(&r, ReportFormat::Json, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("\"eoc_strip\": null"));
        assert_eq!(StudyReport::from_json(&text).unwrap(), r);
    }

    #[test]
    fn layering() {
        let file = ConfigOverrides::from_key_values("# study\ndegree = 2\nlevels=1..3\nformat=json\n").unwrap();
        let env = ConfigOverrides::from_env([
            ("FEMBEM_LEVELS".to_string(), "0..2".to_string()),
            ("HOME".to_string(), "/root".to_string()),
        ])
        .unwrap();
        let mut flags = ConfigOverrides::default();
        flags.set("data-mode", "project-both").unwrap();
        let c = file.merge(env).merge(flags).resolve().unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.alpha, 2.5);
        assert_eq!((c.level_min, c.level_max), (0, 2));
        assert_eq!(c.format, ReportFormat::Json);
        assert_eq!(c.data_mode, DataMode::ProjectBoth);
        assert_eq!(ConfigOverrides::default().resolve().unwrap(), StudyConfig::for_degree(1));
        assert_eq!(StudyConfig::for_degree(2).levels(), 0..=5);
    }

    #[test]
    fn invalid_configs() {
        assert!(ConfigOverrides::from_key_values("colour=red").is_err());
        assert!(ConfigOverrides::from_key_values("degree").is_err());
        assert!(matches!(ConfigOverrides::from_key_values("data_mode=exact"), Err(Error::UnknownDataMode(_))));
        let mut o = ConfigOverrides::default();
        o.set("levels", "3..1").unwrap();
        assert!(o.clone().resolve().is_err());
        o.set("levels", "2").unwrap();
        o.set("alpha", "-1").unwrap();
        assert!(o.clone().resolve().is_err());
        let mut o = ConfigOverrides::default();
        o.set("degree", "3").unwrap();
        assert!(matches!(o.resolve(), Err(Error::UnsupportedDegree(3))));
        assert_eq!(parse_levels("0..=4").unwrap(), (0, 4));
    }

    #[test]
    fn small_study_is_deterministic() {
        let mut c = StudyConfig::for_degree(1);
        c.level_max = 2;
        let a = run_study(&c, |_| {}).unwrap();
        let b = run_study(&c, |_| {}).unwrap();
        assert_eq!(a.reports.len(), 3);
        assert_eq!(a.eoc.len(), 2);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        emit_report(&a, ReportFormat::Csv, &mut x).unwrap();
        emit_report(&b, ReportFormat::Csv, &mut y).unwrap();
        assert_eq!(x, y);
        for r in &a.reports {
            assert!(r.errors().iter().all(|e| e.is_finite() && *e >= 0.0));
            assert!(r.err_strip <= r.err_l2);
        }
    }
}
