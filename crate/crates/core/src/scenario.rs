//! Scenario files and the runner that turns them into CSV, SVG and a
//! manifest.
//!
//! Grammar: one `key = value` per line, `[section]` headers, `#` comments.
//!
//! ```text
//! name = fig_p3_forcing
//! [system]
//! kind = quasi-harmonic      # full | reduced | quasi-harmonic | cartoon
//! p = 3                      # full chain: N = 2p particles
//! a = 0.01
//! alpha = 1
//! beta = 0                   # full chain only
//! reference = ../data/reference/p3.txt   # quasi-harmonic: work in this table's frame
//! cartoon = 1                # cartoon id
//! omegas = 0.1 1             # cartoon frequencies
//! [initial]
//! x = 0 0.2                  # full vector (q or x), or components: x2 = 0.2
//! v1 = 0
//! [integrator]
//! t_end = 200
//! sample_dt = 1
//! abs_tol = 1e-10
//! rel_tol = 1e-10
//! [output]
//! trajectory = true
//! actions = true
//! energy = true
//! report = true
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::chain::{build_chain, ChainParams, FullChainSystem};
use crate::coupling::{analyze, scaling_equivalence, ScalingFit, PRESENCE_TAU};
use crate::dynamics::diagnostics::{actions_with, energy_series, momentum_drift};
use crate::dynamics::{cartoon_system, integrate, CartoonSystem, Dynamics, IntegratorConfig, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::io::{line_plot_svg, read_system, write_csv};
use crate::reduction::{build_reduced, ReducedSystem};
use crate::spectral::{quasi_harmonic, QuasiHarmonicSystem};
use crate::sweep::format_analysis;

/// Parsed `key = value` lines grouped by section; the root section is `""`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub entries: Vec<ConfigEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut entries: Vec<ConfigEntry> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse { line, msg: "unterminated section header".into() })?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected 'key = value', found '{content}'") })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse { line, msg: "empty key".into() });
            }
            if entries.iter().any(|e| e.section == section && e.key == key) {
                return Err(Error::Parse { line, msg: format!("duplicate key '{key}' in [{section}]") });
            }
            entries.push(ConfigEntry { section: section.clone(), key, value: value.trim().to_string(), line });
        }
        Ok(Self { entries })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&ConfigEntry> {
        self.entries.iter().find(|e| e.section == section && e.key == key)
    }

    pub fn section(&self, section: &str) -> impl Iterator<Item = &ConfigEntry> {
        let s = section.to_string();
        self.entries.iter().filter(move |e| e.section == s)
    }
}

impl ConfigEntry {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: format!("{}: {}", self.key, msg.into()) }
    }

    fn f64(&self) -> Result<f64> {
        self.value.parse().map_err(|_| self.err(format!("bad number '{}'", self.value)))
    }

    fn usize(&self) -> Result<usize> {
        self.value.parse().map_err(|_| self.err(format!("bad integer '{}'", self.value)))
    }

    fn bool(&self) -> Result<bool> {
        match self.value.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            v => Err(self.err(format!("bad boolean '{v}'"))),
        }
    }

    fn vector(&self) -> Result<Vec<f64>> {
        self.value
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| self.err(format!("bad number '{t}'"))))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Full { p: usize, a: f64, alpha: f64, beta: f64 },
    Reduced { p: usize, a: f64, alpha: f64 },
    QuasiHarmonic { p: usize, a: f64, alpha: f64, reference: Option<PathBuf> },
    Cartoon { id: u8, omegas: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub trajectory: bool,
    pub actions: bool,
    pub energy: bool,
    pub report: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { trajectory: true, actions: true, energy: true, report: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub system: SystemSpec,
    /// Positions then velocities, as given (possibly in a reference frame).
    pub x0: Vec<f64>,
    pub v0: Vec<f64>,
    pub integrator: IntegratorConfig,
    pub outputs: Outputs,
    pub source: Option<PathBuf>,
}

/// A scenario's system, resolved and ready to integrate.
#[derive(Debug, Clone)]
pub enum BuiltSystem {
    Full(FullChainSystem),
    Reduced(ReducedSystem),
    Modal { sys: QuasiHarmonicSystem, fit: Option<ScalingFit> },
    Cartoon(CartoonSystem),
}

impl BuiltSystem {
    pub fn dynamics(&self) -> &dyn Dynamics {
        match self {
            BuiltSystem::Full(s) => s,
            BuiltSystem::Reduced(s) => s,
            BuiltSystem::Modal { sys, .. } => sys,
            BuiltSystem::Cartoon(s) => s,
        }
    }

    /// Squared frequencies used for per-mode actions, where defined.
    pub fn action_lambdas(&self) -> Option<Vec<f64>> {
        match self {
            BuiltSystem::Modal { sys, .. } => Some(sys.lambdas.clone()),
            BuiltSystem::Cartoon(c) => Some(c.lambdas()),
            _ => None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            BuiltSystem::Full(_) => "full",
            BuiltSystem::Reduced(_) => "reduced",
            BuiltSystem::Modal { .. } => "quasi-harmonic",
            BuiltSystem::Cartoon(_) => "cartoon",
        }
    }
}

/// Command-line overrides of the integrator section.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub t_end: Option<f64>,
    pub sample_dt: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut IntegratorConfig) {
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.sample_dt {
            cfg.sample_dt = v;
        }
    }
}

const SECTIONS: [&str; 5] = ["", "system", "initial", "integrator", "output"];

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut s = Self::parse(&text, &base)?;
        s.source = Some(path.to_path_buf());
        Ok(s)
    }

    /// Parses scenario text; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let cfg = Config::parse(text)?;
        for e in &cfg.entries {
            if !SECTIONS.contains(&e.section.as_str()) {
                return Err(Error::Parse { line: e.line, msg: format!("unknown section [{}]", e.section) });
            }
        }
        let allow = |section: &str, keys: &[&str]| -> Result<()> {
            for e in cfg.section(section) {
                if !keys.contains(&e.key.as_str()) {
                    return Err(e.err(format!("unknown key in [{section}]")));
                }
            }
            Ok(())
        };
        allow("", &["name", "description"])?;
        allow("integrator", &["t_end", "sample_dt", "abs_tol", "rel_tol", "max_steps"])?;
        allow("output", &["trajectory", "actions", "energy", "report"])?;

        let name = cfg.get("", "name").map(|e| e.value.clone()).ok_or_else(|| Error::Config("scenario has no name".into()))?;
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Config(format!("scenario name '{name}' must be alphanumeric, '_' or '-'")));
        }
        let description = cfg.get("", "description").map(|e| e.value.clone()).unwrap_or_default();

        let system = parse_system_spec(&cfg, base_dir)?;

        let t_end = cfg
            .get("integrator", "t_end")
            .ok_or_else(|| Error::Config("[integrator] t_end is required".into()))?
            .f64()?;
        let mut integrator = IntegratorConfig::new(t_end);
        if let Some(e) = cfg.get("integrator", "sample_dt") {
            integrator.sample_dt = e.f64()?;
        }
        if let Some(e) = cfg.get("integrator", "abs_tol") {
            integrator.abs_tol = e.f64()?;
        }
        if let Some(e) = cfg.get("integrator", "rel_tol") {
            integrator.rel_tol = e.f64()?;
        }
        if let Some(e) = cfg.get("integrator", "max_steps") {
            integrator.max_steps = e.usize()?;
        }
        integrator.validate()?;

        let mut outputs = Outputs::default();
        for e in cfg.section("output") {
            let flag = e.bool()?;
            match e.key.as_str() {
                "trajectory" => outputs.trajectory = flag,
                "actions" => outputs.actions = flag,
                "energy" => outputs.energy = flag,
                _ => outputs.report = flag,
            }
        }

        let dim = system.dim();
        let (x0, v0) = parse_initial(&cfg, dim)?;
        Ok(Self { name, description, system, x0, v0, integrator, outputs, source: None })
    }

    /// Resolves the system and maps the initial state into its coordinates.
    pub fn build(&self) -> Result<BuiltSystem> {
        Ok(match &self.system {
            SystemSpec::Full { p, a, alpha, beta } => {
                let params = ChainParams { n_pairs: *p, a: *a, alpha: *alpha, beta: *beta };
                BuiltSystem::Full(build_chain(params)?)
            }
            SystemSpec::Reduced { p, a, alpha } => BuiltSystem::Reduced(build_reduced(*p, *a, *alpha)?),
            SystemSpec::QuasiHarmonic { p, a, alpha, reference } => {
                let (_, _, ours) = quasi_harmonic(*p, *a, *alpha)?;
                match reference {
                    None => BuiltSystem::Modal { sys: ours, fit: None },
                    Some(path) => {
                        let reference = read_system(path)?;
                        let fit = scaling_equivalence(&ours, &reference, PRESENCE_TAU)?;
                        BuiltSystem::Modal { sys: fit.apply(&ours), fit: Some(fit) }
                    }
                }
            }
            SystemSpec::Cartoon { id, omegas } => BuiltSystem::Cartoon(cartoon_system(*id, omegas)?),
        })
    }

    /// Integrates without writing anything.
    pub fn simulate(&self, overrides: &Overrides) -> Result<(BuiltSystem, Trajectory)> {
        let built = self.build()?;
        let mut cfg = self.integrator;
        overrides.apply(&mut cfg);
        let tr = integrate(built.dynamics(), &self.x0, &self.v0, &cfg)?;
        Ok((built, tr))
    }
}

impl SystemSpec {
    pub fn dim(&self) -> usize {
        match self {
            SystemSpec::Full { p, .. } => 2 * p,
            SystemSpec::Reduced { p, .. } | SystemSpec::QuasiHarmonic { p, .. } => p - 1,
            SystemSpec::Cartoon { omegas, .. } => omegas.len(),
        }
    }
}

fn parse_system_spec(cfg: &Config, base_dir: &Path) -> Result<SystemSpec> {
    let need = |key: &str| cfg.get("system", key).ok_or_else(|| Error::Config(format!("[system] {key} is required")));
    let kind = need("kind")?;
    let keys: &[&str] = match kind.value.as_str() {
        "full" => &["kind", "p", "a", "alpha", "beta"],
        "reduced" => &["kind", "p", "a", "alpha"],
        "quasi-harmonic" => &["kind", "p", "a", "alpha", "reference"],
        "cartoon" => &["kind", "cartoon", "omegas"],
        other => return Err(kind.err(format!("unknown system kind '{other}'"))),
    };
    for e in cfg.section("system") {
        if !keys.contains(&e.key.as_str()) {
            return Err(e.err(format!("not valid for kind '{}'", kind.value)));
        }
    }
    if kind.value == "cartoon" {
        let id = need("cartoon")?;
        let id_val = id.usize()?;
        let omegas = need("omegas")?.vector()?;
        let id_u8 = u8::try_from(id_val).map_err(|_| id.err("cartoon id out of range"))?;
        cartoon_system(id_u8, &omegas).map_err(|e| id.err(e.to_string()))?;
        return Ok(SystemSpec::Cartoon { id: id_u8, omegas });
    }
    let p_entry = need("p")?;
    let p = p_entry.usize()?;
    let a = need("a")?.f64()?;
    let alpha = need("alpha")?.f64()?;
    Ok(match kind.value.as_str() {
        "full" => {
            let beta = cfg.get("system", "beta").map(ConfigEntry::f64).transpose()?.unwrap_or(0.0);
            ChainParams { n_pairs: p, a, alpha, beta }.validate()?;
            SystemSpec::Full { p, a, alpha, beta }
        }
        _ => {
            if p < 3 || p % 2 == 0 {
                return Err(p_entry.err("p must be odd and at least 3"));
            }
            if kind.value == "reduced" {
                SystemSpec::Reduced { p, a, alpha }
            } else {
                let reference = cfg.get("system", "reference").map(|e| base_dir.join(&e.value));
                SystemSpec::QuasiHarmonic { p, a, alpha, reference }
            }
        }
    })
}

fn parse_initial(cfg: &Config, dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    for e in cfg.section("initial") {
        let split = e.key.find(|c: char| c.is_ascii_digit()).unwrap_or(e.key.len());
        let (stem, index) = e.key.split_at(split);
        let target = match stem {
            "q" | "x" => &mut x,
            "v" => &mut v,
            _ => return Err(e.err("initial keys are q, x, v or indexed forms like x2")),
        };
        if index.is_empty() {
            let vals = e.vector()?;
            if vals.len() != dim {
                return Err(e.err(format!("expected {dim} values, found {}", vals.len())));
            }
            target.copy_from_slice(&vals);
        } else {
            let i: usize = index.parse().map_err(|_| e.err("bad component index"))?;
            if i == 0 || i > dim {
                return Err(e.err(format!("component index must lie in 1..={dim}")));
            }
            target[i - 1] = e.f64()?;
        }
    }
    Ok((x, v))
}

/// Result of one scenario run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub name: String,
    pub termination: Termination,
    pub energy_drift: Option<f64>,
    pub momentum_drift: Option<f64>,
    pub files: Vec<PathBuf>,
    pub trajectory: Trajectory,
    pub wall_time: f64,
}

impl RunOutcome {
    pub fn diverged(&self) -> bool {
        !self.termination.is_completed()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |d| format!("{d:e}"))
}

/// Integrates a scenario and writes its outputs into `out_dir/<name>/`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path, overrides: &Overrides) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut cfg = scenario.integrator;
    overrides.apply(&mut cfg);
    cfg.validate()?;
    let built = scenario.build()?;
    let dynamics = built.dynamics();
    let tr = integrate(dynamics, &scenario.x0, &scenario.v0, &cfg)?;

    let dir = out_dir.join(&scenario.name);
    fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    let n = tr.dim;
    let title = |what: &str| format!("{} — {what}", scenario.name);

    if scenario.outputs.trajectory {
        let mut header = vec!["t".to_string()];
        for i in 0..n {
            header.push(dynamics.coordinate_name(i));
            header.push(dynamics.velocity_name(i));
        }
        let rows: Vec<Vec<f64>> = (0..tr.len())
            .map(|s| {
                let mut row = vec![tr.times[s]];
                for i in 0..n {
                    row.push(tr.position(s)[i]);
                    row.push(tr.velocity(s)[i]);
                }
                row
            })
            .collect();
        files.push(write_series(&dir, "trajectory", &header, &rows)?);
        let series: Vec<(String, Vec<f64>)> = (0..n).map(|i| (dynamics.coordinate_name(i), tr.series(i))).collect();
        files.push(write_svg(&dir, "trajectory", &line_plot_svg(&title("positions"), "t", &tr.times, &series))?);
    }

    if scenario.outputs.actions {
        if let Some(lambdas) = built.action_lambdas() {
            let acts = actions_with(&lambdas, &tr)?;
            let mut header = vec!["t".to_string()];
            header.extend((0..n).map(|i| format!("E{}", i + 1)));
            let rows: Vec<Vec<f64>> = acts.times.iter().zip(&acts.actions).map(|(t, a)| std::iter::once(*t).chain(a.iter().copied()).collect()).collect();
            files.push(write_series(&dir, "actions", &header, &rows)?);
            let series: Vec<(String, Vec<f64>)> = (0..n).map(|i| (format!("E{}", i + 1), acts.mode(i))).collect();
            files.push(write_svg(&dir, "actions", &line_plot_svg(&title("mode actions"), "t", &acts.times, &series))?);
        }
    }

    let energies = energy_series(dynamics, &tr);
    let energy_drift = energies.as_ref().map(|e| {
        let e0 = e[0];
        e.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max) / e0.abs().max(1e-12)
    });
    if scenario.outputs.energy {
        if let Some(e) = &energies {
            let rows: Vec<Vec<f64>> = tr.times.iter().zip(e).map(|(t, e)| vec![*t, *e]).collect();
            files.push(write_series(&dir, "energy", &["t".into(), "E".into()], &rows)?);
            files.push(write_svg(&dir, "energy", &line_plot_svg(&title("energy"), "t", &tr.times, &[("E".into(), e.clone())]))?);
        }
    }
    let momentum_drift = match &built {
        BuiltSystem::Full(sys) => Some(momentum_drift(sys, &tr)),
        _ => None,
    };

    if scenario.outputs.report {
        if let BuiltSystem::Modal { fit, .. } = &built {
            let mut text = String::new();
            if let Some(fit) = fit {
                let _ = writeln!(text, "frame: reference table, scaling-fit residual {:e}, sign flips {:?}", fit.residual, fit.flipped());
            }
            // analysis in our own frame, where pair labels are canonical
            let (_, _, ours) = match &scenario.system {
                SystemSpec::QuasiHarmonic { p, a, alpha, .. } => quasi_harmonic(*p, *a, *alpha)?,
                _ => unreachable!("modal systems come from quasi-harmonic specs"),
            };
            text.push_str(&format_analysis(&ours, &analyze(&ours, PRESENCE_TAU)?));
            let path = dir.join("report.txt");
            fs::write(&path, text)?;
            files.push(path);
        }
    }

    let wall_time = start.elapsed().as_secs_f64();
    let mut manifest = String::new();
    let _ = writeln!(manifest, "name = {}", scenario.name);
    if let Some(src) = &scenario.source {
        let _ = writeln!(manifest, "scenario = {}", src.display());
    }
    let _ = writeln!(manifest, "version = {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    let _ = writeln!(manifest, "system = {}", built.kind());
    let _ = writeln!(manifest, "system_spec = {:?}", scenario.system);
    let _ = writeln!(manifest, "x0 = {:?}", scenario.x0);
    let _ = writeln!(manifest, "v0 = {:?}", scenario.v0);
    let _ = writeln!(manifest, "abs_tol = {:e}", cfg.abs_tol);
    let _ = writeln!(manifest, "rel_tol = {:e}", cfg.rel_tol);
    let _ = writeln!(manifest, "t_end = {}", cfg.t_end);
    let _ = writeln!(manifest, "sample_dt = {}", cfg.sample_dt);
    let _ = writeln!(manifest, "termination = {}", tr.termination.describe());
    let _ = writeln!(manifest, "final_time = {}", tr.final_time());
    let _ = writeln!(manifest, "energy_drift = {}", fmt_opt(energy_drift));
    let _ = writeln!(manifest, "momentum_drift = {}", fmt_opt(momentum_drift));
    let _ = writeln!(manifest, "steps_accepted = {}", tr.stats.accepted);
    let _ = writeln!(manifest, "steps_rejected = {}", tr.stats.rejected);
    let _ = writeln!(manifest, "wall_time_s = {wall_time:.3}");
    for f in &files {
        let _ = writeln!(manifest, "output = {}", f.file_name().unwrap_or_default().to_string_lossy());
    }
    let mpath = dir.join("manifest.txt");
    fs::write(&mpath, manifest)?;
    files.push(mpath);

    Ok(RunOutcome {
        name: scenario.name.clone(),
        termination: tr.termination,
        energy_drift,
        momentum_drift,
        files,
        trajectory: tr,
        wall_time,
    })
}

fn write_series(dir: &Path, stem: &str, header: &[String], rows: &[Vec<f64>]) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.csv"));
    write_csv(&path, header, rows)?;
    Ok(path)
}

fn write_svg(dir: &Path, stem: &str, svg: &str) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.svg"));
    fs::write(&path, svg)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "name = demo\n[system]\nkind = reduced\np = 3\na = 0.01\nalpha = 1\n[initial]\nq = 0.1 0\nv2 = 0.01\n[integrator]\nt_end = 5\n";

    #[test]
    fn parses_basic_scenario() {
        let s = Scenario::parse(BASIC, Path::new(".")).unwrap();
        assert_eq!(s.name, "demo");
        assert_eq!(s.x0, vec![0.1, 0.0]);
        assert_eq!(s.v0, vec![0.0, 0.01]);
        assert_eq!(s.integrator.abs_tol, 1e-10);
        assert_eq!(s.integrator.sample_dt, 1.0);
        assert_eq!(s.system, SystemSpec::Reduced { p: 3, a: 0.01, alpha: 1.0 });
    }

    #[test]
    fn errors_report_lines() {
        let line_of = |text: &str| match Scenario::parse(text, Path::new(".")) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of(&BASIC.replace("q = 0.1 0", "q = 0.1 zz")), 8);
        assert_eq!(line_of(&BASIC.replace("v2 = 0.01", "v3 = 0.01")), 9);
        assert_eq!(line_of(&BASIC.replace("alpha = 1", "colour = red")), 6);
        assert_eq!(line_of(&BASIC.replace("[initial]", "[initial")), 7);
        assert_eq!(line_of(&BASIC.replace("q = 0.1 0", "q = 0.1")), 8);
        assert_eq!(line_of(&BASIC.replace("t_end = 5", "t_end = 5\nt_end = 6")), 12);
        assert!(matches!(Scenario::parse(&BASIC.replace("name = demo\n", ""), Path::new(".")), Err(Error::Config(_))));
    }

    #[test]
    fn cartoon_spec() {
        let text = "name = c\n[system]\nkind = cartoon\ncartoon = 2\nomegas = 0.1 1 1.05\n[initial]\nx = 0.1 0.3 0.3\n[integrator]\nt_end = 1\n";
        let s = Scenario::parse(text, Path::new(".")).unwrap();
        assert_eq!(s.system.dim(), 3);
        let bad = text.replace("cartoon = 2", "cartoon = 7");
        assert!(Scenario::parse(&bad, Path::new(".")).is_err());
    }

    #[test]
    fn run_writes_outputs_deterministically() {
        let dir = tempfile::tempdir().unwrap();
        let s = Scenario::parse(BASIC, Path::new(".")).unwrap();
        let a = run_scenario(&s, dir.path(), &Overrides::default()).unwrap();
        let first = fs::read(dir.path().join("demo/trajectory.csv")).unwrap();
        let b = run_scenario(&s, dir.path(), &Overrides::default()).unwrap();
        assert_eq!(first, fs::read(dir.path().join("demo/trajectory.csv")).unwrap());
        assert!(!a.diverged() && !b.diverged());
        assert!(a.energy_drift.unwrap() < 1e-8);
        assert!(dir.path().join("demo/manifest.txt").exists());
        assert!(dir.path().join("demo/energy.svg").exists());
    }
}
