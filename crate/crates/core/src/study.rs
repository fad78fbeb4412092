//! Batch studies driven by a flat `key = value` config with `[sections]`.
//!
//! ```text
//! [study]
//! problem = singular          # singular | manufactured-h2 | transient-manufactured
//! output = out/singular
//! seed = 42
//!
//! [mesh]
//! family = acute              # acute | square | files
//! levels = 4, 8, 16, 32, 64
//!
//! [transient]
//! t_final = 0.5
//! steps = 4, 8, 16
//! coupling = zero             # zero | identity | scaled
//! lambda = 0.5
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{h2_rate_study, observed_orders, ErrorReport};
use crate::assembly::{weak_residual, SteadyProblemData};
use crate::error::{Result, TpfaError};
use crate::mesh::{generate_acute_triangular_grid, generate_square_grid, read_fvca5, read_mesh, AdmissibleMesh};
use crate::singular::{run_level, BENCHMARK_HEADER};
use crate::space::{DiscreteField, SineProduct, Scaled};
use crate::transient::{
    delta_time, energy_checks, solve_transient, zeta_time, CouplingMap, ManufacturedHeat, SpaceTimeField, TimeGrid,
    ZetaNormalization,
};

/// Parsed config text: section name to key/value pairs. Keys before any
/// section header live in section `""`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| TpfaError::Parse { line: i + 1, message: message.into() };
            if let Some(rest) = line.strip_prefix('[') {
                current = rest.strip_suffix(']').ok_or_else(|| err("unterminated section header"))?.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected `key = value`"))?;
            let prev = sections.entry(current.clone()).or_default().insert(k.trim().to_string(), v.trim().to_string());
            if prev.is_some() {
                return Err(err("duplicate key"));
            }
        }
        Ok(Config { sections })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        self.get(section, key)
            .map(|v| v.parse().map_err(|_| TpfaError::Config(format!("[{section}] {key}: cannot parse `{v}`"))))
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>> {
        self.get(section, key)
            .map(|v| {
                v.split(',')
                    .map(|t| t.trim().parse().map_err(|_| TpfaError::Config(format!("[{section}] {key}: bad entry `{t}`"))))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Singular,
    ManufacturedH2,
    TransientManufactured,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    /// Acute triangular grids with `n` pattern repetitions per side.
    Acute(Vec<usize>),
    /// `n × n` square grids.
    Square(Vec<usize>),
    Files(Vec<PathBuf>),
}

impl MeshSource {
    pub fn len(&self) -> usize {
        match self {
            MeshSource::Acute(v) | MeshSource::Square(v) => v.len(),
            MeshSource::Files(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Build or read level `i`.
    pub fn mesh(&self, i: usize) -> Result<AdmissibleMesh> {
        match self {
            MeshSource::Acute(v) => generate_acute_triangular_grid(v[i]),
            MeshSource::Square(v) => generate_square_grid(v[i]),
            MeshSource::Files(v) => load_mesh(&v[i]),
        }
    }
}

/// Read a mesh file; `.typ1`/`.typ2` files use the FVCA reader.
pub fn load_mesh(path: &Path) -> Result<AdmissibleMesh> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("typ1") | Some("typ2") => read_fvca5(&text),
        _ => read_mesh(&text),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransientSettings {
    pub t_final: f64,
    pub coupling: CouplingMap,
    pub zeta: ZetaNormalization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub problem: Problem,
    pub meshes: MeshSource,
    /// Step counts paired with the mesh levels (transient only).
    pub steps: Vec<usize>,
    pub transient: TransientSettings,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Smallest acceptable observed order.
    pub min_order: f64,
}

pub const DEFAULT_SEED: u64 = 42;

impl StudyConfig {
    /// Parse a config; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let c = Config::parse(text)?;
        let problem = match c.get("study", "problem").unwrap_or("singular") {
            "singular" => Problem::Singular,
            "manufactured-h2" => Problem::ManufacturedH2,
            "transient-manufactured" => Problem::TransientManufactured,
            other => return Err(TpfaError::Config(format!("unknown problem `{other}`"))),
        };
        let (family, default_levels, default_order) = match problem {
            Problem::Singular => ("acute", vec![4, 8, 16, 32, 64], 0.85),
            Problem::ManufacturedH2 => ("square", vec![8, 16, 32, 64], 0.95),
            Problem::TransientManufactured => ("square", vec![8, 16, 32], 0.9),
        };
        let levels = c.list("mesh", "levels")?.unwrap_or(default_levels);
        let meshes = match c.get("mesh", "family").unwrap_or(family) {
            "acute" => MeshSource::Acute(levels),
            "square" => MeshSource::Square(levels),
            "files" => MeshSource::Files(
                c.list::<String>("mesh", "files")?
                    .ok_or_else(|| TpfaError::Config("[mesh] files missing".into()))?
                    .into_iter()
                    .map(|f| base.join(f))
                    .collect(),
            ),
            other => return Err(TpfaError::Config(format!("unknown mesh family `{other}`"))),
        };
        if meshes.is_empty() {
            return Err(TpfaError::Config("no mesh levels".into()));
        }
        let coupling = match c.get("transient", "coupling").unwrap_or("zero") {
            "zero" => CouplingMap::Zero,
            "identity" => CouplingMap::Identity,
            "scaled" => CouplingMap::scaled(c.parsed("transient", "lambda")?.unwrap_or(0.5))?,
            other => return Err(TpfaError::Config(format!("unknown coupling `{other}`"))),
        };
        let zeta = match c.get("transient", "zeta").unwrap_or("discrete") {
            "discrete" => ZetaNormalization::DiscreteNorm,
            "gradient" => ZetaNormalization::NormalGradient,
            other => return Err(TpfaError::Config(format!("unknown zeta normalization `{other}`"))),
        };
        let steps = c.list("transient", "steps")?.unwrap_or_else(|| (0..meshes.len()).map(|i| 4 << i).collect());
        if problem == Problem::TransientManufactured && steps.len() != meshes.len() {
            return Err(TpfaError::Config("[transient] steps must pair with the mesh levels".into()));
        }
        Ok(StudyConfig {
            problem,
            meshes,
            steps,
            transient: TransientSettings { t_final: c.parsed("transient", "t_final")?.unwrap_or(0.5), coupling, zeta },
            output: c.get("study", "output").map(|o| base.join(o)),
            seed: c.parsed("study", "seed")?.unwrap_or(DEFAULT_SEED),
            min_order: c.parsed("study", "min_order")?.unwrap_or(default_order),
        })
    }
}

/// Tables and verdicts of one study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutcome {
    pub header: String,
    pub rows: Vec<String>,
    /// Ordered `key = value` summary entries.
    pub summary: Vec<(String, String)>,
    /// Named assertions and whether they held.
    pub checks: Vec<(String, bool)>,
}

impl StudyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn csv(&self) -> String {
        let mut s = format!("{}\n", self.header);
        self.rows.iter().for_each(|r| {
            s.push_str(r);
            s.push('\n');
        });
        s
    }

    /// Whitespace-separated columns with a commented header, for gnuplot.
    pub fn gnuplot(&self) -> String {
        let mut s = format!("# {}\n", self.header.replace(',', " "));
        self.rows.iter().for_each(|r| {
            s.push_str(&r.replace(',', " "));
            s.push('\n');
        });
        s
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}={v}");
        }
        for (k, ok) in &self.checks {
            let _ = writeln!(s, "check.{k}={}", if *ok { "pass" } else { "fail" });
        }
        let _ = writeln!(s, "passed={}", self.passed());
        s
    }

    /// Write `levels.csv`, `levels.dat` and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("levels.csv"), self.csv())?;
        std::fs::write(dir.join("levels.dat"), self.gnuplot())?;
        std::fs::write(dir.join("summary.txt"), self.summary_text())?;
        Ok(())
    }
}

/// CSV header of the per-level rows of a study.
pub fn study_header(problem: Problem) -> String {
    match problem {
        Problem::Singular => format!("{BENCHMARK_HEADER},zeta,cells"),
        Problem::ManufacturedH2 => format!("{},osc_bound", ErrorReport::CSV_HEADER),
        Problem::TransientManufactured => TransientLevel::CSV_HEADER.into(),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Smallest of the last two consecutive orders, i.e. the order over the last
/// three levels; all orders when there are fewer.
fn tail_order(orders: &[f64]) -> f64 {
    orders.iter().rev().take(2).cloned().fold(f64::INFINITY, f64::min)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Run a study. `progress` receives each CSV row as soon as its level is done.
pub fn run_study<P>(cfg: &StudyConfig, mut progress: P) -> Result<StudyOutcome>
where
    P: FnMut(&str) -> Result<()>,
{
    match cfg.problem {
        Problem::Singular => singular_study(cfg, &mut progress),
        Problem::ManufacturedH2 => h2_study(cfg, &mut progress),
        Problem::TransientManufactured => transient_study(cfg, &mut progress),
    }
}

fn singular_study(cfg: &StudyConfig, progress: &mut dyn FnMut(&str) -> Result<()>) -> Result<StudyOutcome> {
    let mut rows = Vec::new();
    let mut reports: Vec<ErrorReport> = Vec::new();
    let mut sandwich_ok = true;
    for i in 0..cfg.meshes.len() {
        let mesh = cfg.meshes.mesh(i)?;
        let level = run_level(&mesh)?;
        sandwich_ok &= level.sandwich.passed() && level.report.delta <= 3.0 * level.report.interp_upper;
        let row = format!("{},{},{}", level.report.benchmark_row(), level.report.conformity, level.cells);
        progress(&row)?;
        rows.push(row);
        reports.push(level.report);
    }
    let h: Vec<f64> = reports.iter().map(|r| r.quality.h).collect();
    let e2: Vec<f64> = reports.iter().map(|r| r.l2_error).collect();
    let e4: Vec<f64> = reports.iter().map(|r| r.delta).collect();
    let orders = observed_orders(&h, &e2);
    let mut checks = vec![
        ("delta_decreasing".to_string(), strictly_decreasing(&e4)),
        ("sandwich".to_string(), sandwich_ok),
        ("zeta_zero".to_string(), reports.iter().all(|r| r.conformity <= 1e-8)),
    ];
    if !orders.is_empty() {
        checks.push(("l2_order".to_string(), tail_order(&orders) >= cfg.min_order));
    }
    Ok(StudyOutcome {
        header: study_header(Problem::Singular),
        rows,
        summary: vec![
            ("problem".into(), "singular".into()),
            ("levels".into(), reports.len().to_string()),
            ("l2_orders".into(), join(&orders)),
            ("delta_orders".into(), join(&observed_orders(&h, &e4))),
        ],
        checks,
    })
}

fn h2_study(cfg: &StudyConfig, progress: &mut dyn FnMut(&str) -> Result<()>) -> Result<StudyOutcome> {
    let source = Scaled { factor: 2.0 * std::f64::consts::PI.powi(2), inner: SineProduct };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    let mut residual: f64 = 0.0;
    for i in 0..cfg.meshes.len() {
        let mesh = cfg.meshes.mesh(i)?;
        let table = h2_rate_study(std::slice::from_ref(&mesh), &SineProduct, &source, SineProduct::h2_norm())?;
        let level = table.levels.into_iter().next().expect("one level");
        // Recheck the discrete equation of this level against a random test field.
        residual = residual.max(random_residual(&mesh, &source, &mut rng)?);
        let row = format!("{},{}", level.report.csv_row(), level.oscillation_bound);
        progress(&row)?;
        rows.push(row);
        levels.push(level);
    }
    let h: Vec<f64> = levels.iter().map(|l| l.report.quality.h).collect();
    let l2_orders = observed_orders(&h, &levels.iter().map(|l| l.report.l2_error).collect::<Vec<_>>());
    let cg_orders = observed_orders(&h, &levels.iter().map(|l| l.report.consistent_grad_error).collect::<Vec<_>>());
    let mut checks = vec![
        ("oscillation_bound".to_string(), levels.iter().all(|l| l.report.theta <= l.oscillation_bound * 1.01)),
        ("scheme_residual".to_string(), residual < 1e-9),
    ];
    if !l2_orders.is_empty() {
        checks.push(("l2_order".to_string(), tail_order(&l2_orders) >= cfg.min_order));
        checks.push(("cgrad_order".to_string(), tail_order(&cg_orders) >= cfg.min_order));
    }
    Ok(StudyOutcome {
        header: study_header(Problem::ManufacturedH2),
        rows,
        summary: vec![
            ("problem".into(), "manufactured-h2".into()),
            ("levels".into(), levels.len().to_string()),
            ("seed".into(), cfg.seed.to_string()),
            ("l2_orders".into(), join(&l2_orders)),
            ("cgrad_orders".into(), join(&cg_orders)),
            ("max_residual".into(), residual.to_string()),
        ],
        checks,
    })
}

fn random_residual(mesh: &AdmissibleMesh, source: &Scaled<SineProduct>, rng: &mut ChaCha8Rng) -> Result<f64> {
    use crate::assembly::{assemble_steady, solve};
    use crate::space::cell_value_moments;
    let f = cell_value_moments(source, mesh)?.iter().zip(mesh.cells()).map(|((m, _), c)| m / c.measure).collect();
    let data = SteadyProblemData { f, flux: vec![0.0; mesh.n_cones()] };
    let u = solve(mesh, &assemble_steady(mesh, &data)?)?;
    let v = DiscreteField::random(mesh, rng);
    Ok(weak_residual(mesh, &u, &v, &data.functional(mesh)?, 0.0).abs())
}

/// One manufactured heat run and its measured quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientLevel {
    pub h: f64,
    pub k: f64,
    pub field: SpaceTimeField,
    pub delta: crate::transient::TimeDistance,
    pub zeta: f64,
    /// `δ^(T)(ū, ṽ)` for the canonical interpolant `ṽ`.
    pub interp_delta: f64,
    pub sweeps: usize,
}

impl TransientLevel {
    pub const CSV_HEADER: &'static str = "h,k,delta,riesz,grad,max_l2,zeta,interp_delta,ratio,sweeps";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.h,
            self.k,
            self.delta.total,
            self.delta.riesz,
            self.delta.gradient,
            self.delta.max_l2,
            self.zeta,
            self.interp_delta,
            self.delta.total / (self.zeta + self.interp_delta),
            self.sweeps
        )
    }
}

/// Solve the manufactured heat problem with the configured coupling.
/// `ξ0 = ū(0) - Φ ū(T)` keeps `ū = e^{-t} sin(πx) sin(πy)` the exact solution.
pub fn transient_level(mesh: &AdmissibleMesh, grid: &TimeGrid, settings: &TransientSettings) -> Result<TransientLevel> {
    let heat = ManufacturedHeat::new(mesh, 1.0)?;
    let mut data = heat.problem(grid)?;
    let factor = 1.0 - settings.coupling.factor() * (-grid.t_final()).exp();
    data.xi0.iter_mut().for_each(|x| *x *= factor);
    data.coupling = settings.coupling;
    let run = solve_transient(mesh, grid, &data)?;
    let delta = delta_time(mesh, &heat, &run.field)?;
    let zeta = zeta_time(mesh, grid, &heat.conformity_slabs(grid), settings.zeta)?;
    let interp_delta = delta_time(mesh, &heat, &heat.interpolant(grid)?)?.total;
    Ok(TransientLevel { h: mesh.quality().h, k: grid.step(), field: run.field, delta, zeta, interp_delta, sweeps: run.sweeps })
}

/// Energy inequalities on seeded random space-time fields; returns the
/// number of violations.
pub fn random_energy_violations(mesh: &AdmissibleMesh, grid: &TimeGrid, count: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..count {
        let fields = (0..=grid.steps()).map(|_| DiscreteField::random(mesh, &mut rng)).collect();
        if !energy_checks(mesh, &SpaceTimeField::new(*grid, fields)?)?.all_hold() {
            bad += 1;
        }
    }
    Ok(bad)
}

fn transient_study(cfg: &StudyConfig, progress: &mut dyn FnMut(&str) -> Result<()>) -> Result<StudyOutcome> {
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    let mut energy_ok = true;
    for (i, &steps) in cfg.steps.iter().enumerate() {
        let mesh = cfg.meshes.mesh(i)?;
        let grid = TimeGrid::new(cfg.transient.t_final, steps)?;
        let level = transient_level(&mesh, &grid, &cfg.transient)?;
        energy_ok &= energy_checks(&mesh, &level.field)?.all_hold();
        let row = level.csv_row();
        progress(&row)?;
        rows.push(row);
        levels.push(level);
    }
    let first = cfg.meshes.mesh(0)?;
    let violations = random_energy_violations(&first, &TimeGrid::new(cfg.transient.t_final, cfg.steps[0])?, 20, cfg.seed)?;
    let h: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let d: Vec<f64> = levels.iter().map(|l| l.delta.total).collect();
    let orders = observed_orders(&h, &d);
    let mut checks = vec![
        ("delta_decreasing".to_string(), strictly_decreasing(&d)),
        ("zeta_below_delta".to_string(), levels.iter().all(|l| l.zeta <= l.delta.total)),
        ("energy".to_string(), energy_ok && violations == 0),
    ];
    if !orders.is_empty() {
        checks.push(("delta_order".to_string(), tail_order(&orders) >= cfg.min_order));
    }
    Ok(StudyOutcome {
        header: study_header(Problem::TransientManufactured),
        rows,
        summary: vec![
            ("problem".into(), "transient-manufactured".into()),
            ("levels".into(), levels.len().to_string()),
            ("seed".into(), cfg.seed.to_string()),
            ("t_final".into(), cfg.transient.t_final.to_string()),
            ("coupling_factor".into(), cfg.transient.coupling.factor().to_string()),
            ("delta_orders".into(), join(&orders)),
            ("random_energy_violations".into(), violations.to_string()),
        ],
        checks,
    })
}

/// Single manufactured heat run on the first configured level: per-step
/// `L^2` norms and the error summary.
pub fn run_transient(cfg: &StudyConfig) -> Result<(String, StudyOutcome)> {
    let mesh = cfg.meshes.mesh(0)?;
    let steps = *cfg.steps.first().ok_or_else(|| TpfaError::Config("[transient] steps missing".into()))?;
    let grid = TimeGrid::new(cfg.transient.t_final, steps)?;
    let level = transient_level(&mesh, &grid, &cfg.transient)?;
    let mut norms = String::from("m,t,l2_norm\n");
    for (m, f) in level.field.fields.iter().enumerate() {
        let _ = writeln!(norms, "{m},{},{}", grid.node(m), f.l2_norm(&mesh));
    }
    let e = energy_checks(&mesh, &level.field)?;
    let outcome = StudyOutcome {
        header: TransientLevel::CSV_HEADER.into(),
        rows: vec![level.csv_row()],
        summary: vec![
            ("problem".into(), "transient-manufactured".into()),
            ("cells".into(), mesh.n_cells().to_string()),
            ("steps".into(), steps.to_string()),
            ("sweeps".into(), level.sweeps.to_string()),
            ("delta".into(), level.delta.total.to_string()),
            ("zeta".into(), level.zeta.to_string()),
        ],
        checks: vec![
            ("zeta_below_delta".into(), level.zeta <= level.delta.total),
            ("energy".into(), e.all_hold()),
        ],
    };
    Ok((norms, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_sections_comments_and_errors() {
        let c = Config::parse("top = 1\n[a]\nx = 2 # note\n\n[b]\nx=3\n").unwrap();
        assert_eq!(c.get("", "top"), Some("1"));
        assert_eq!(c.get("a", "x"), Some("2"));
        assert_eq!(c.get("b", "x"), Some("3"));
        assert!(matches!(Config::parse("[a\n"), Err(TpfaError::Parse { line: 1, .. })));
        assert!(matches!(Config::parse("[a]\nx\n"), Err(TpfaError::Parse { line: 2, .. })));
        assert!(Config::parse("x=1\nx=2\n").is_err());
    }

    #[test]
    fn defaults_and_paths() {
        let cfg = StudyConfig::parse("[study]\nproblem = transient-manufactured\n[mesh]\nlevels = 2, 4\n", Path::new("/tmp")).unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.steps, vec![4, 8]);
        assert_eq!(cfg.meshes, MeshSource::Square(vec![2, 4]));
        let cfg = StudyConfig::parse("[mesh]\nfamily = files\nfiles = a.typ1, b.typ1\n[study]\noutput = out\n", Path::new("/x")).unwrap();
        assert_eq!(cfg.meshes, MeshSource::Files(vec!["/x/a.typ1".into(), "/x/b.typ1".into()]));
        assert_eq!(cfg.output, Some(PathBuf::from("/x/out")));
        assert!(StudyConfig::parse("[study]\nproblem = other\n", Path::new(".")).is_err());
        assert!(StudyConfig::parse("[transient]\ncoupling = scaled\nlambda = 2\n", Path::new(".")).is_err());
    }

    #[test]
    fn outputs_round_trip_floats() {
        let o = StudyOutcome {
            header: "a,b".into(),
            rows: vec![format!("{},{}", 0.1 + 0.2, 1.0 / 3.0)],
            summary: vec![("k".into(), "v".into())],
            checks: vec![("c".into(), true)],
        };
        let row = o.csv().lines().nth(1).unwrap().to_string();
        let vals: Vec<f64> = row.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(vals, vec![0.1 + 0.2, 1.0 / 3.0]);
        assert!(o.gnuplot().starts_with("# a b\n"));
        assert!(o.summary_text().contains("check.c=pass\npassed=true"));
    }

    #[test]
    fn small_transient_study_with_scaled_coupling() {
        let text = "[study]\nproblem = transient-manufactured\n[mesh]\nlevels = 4, 8\n[transient]\nsteps = 2, 4\ncoupling = scaled\nlambda = 0.5\n";
        let cfg = StudyConfig::parse(text, Path::new(".")).unwrap();
        let out = run_study(&cfg, |_| Ok(())).unwrap();
        assert_eq!(out.rows.len(), 2);
        let lookup = |name: &str| out.checks.iter().find(|(k, _)| k == name).unwrap().1;
        assert!(lookup("delta_decreasing") && lookup("zeta_below_delta") && lookup("energy"));
    }
}
