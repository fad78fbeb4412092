//! Batch driver: mesh inspection, studies and the singular benchmark.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use tpfa::mesh::generate_acute_triangular_grid;
use tpfa::study::{load_mesh, run_study, run_transient, MeshSource, Problem, StudyConfig, StudyOutcome, TransientSettings};
use tpfa::transient::{CouplingMap, ZetaNormalization};
use tpfa::TpfaError;

const USAGE: &str = "usage:
  tpfa mesh-info <file>
  tpfa study <config>
  tpfa bench-singular [--meshes <dir> | --generate <levels>]
  tpfa transient <config>

TPFA_THREADS caps the number of worker threads.";

fn main() -> ExitCode {
    if let Some(n) = std::env::var("TPFA_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match args.first().map(String::as_str) {
        Some("mesh-info") if args.len() == 2 => mesh_info(Path::new(&args[1])),
        Some("study") if args.len() == 2 => study(Path::new(&args[1])),
        Some("bench-singular") => bench_singular(&args[1..]),
        Some("transient") if args.len() == 2 => transient(Path::new(&args[1])),
        _ => {
            eprintln!("{USAGE}");
            return ExitCode::from(64);
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_mesh_error(&e) { 2 } else { 1 })
        }
    }
}

fn is_mesh_error(e: &TpfaError) -> bool {
    matches!(
        e,
        TpfaError::OrthogonalityViolation { .. }
            | TpfaError::PointOutsideCell { .. }
            | TpfaError::NonConformity { .. }
            | TpfaError::DegenerateGeometry(_)
            | TpfaError::NonAcutePattern { .. }
            | TpfaError::Parse { .. }
            | TpfaError::Io(_)
    )
}

fn mesh_info(path: &Path) -> tpfa::Result<bool> {
    let mesh = load_mesh(path)?;
    mesh.check_invariants(1e-10)?;
    let q = mesh.quality();
    println!("{} cells, {} vertices, {} edges", mesh.n_cells(), mesh.vertices().len(), mesh.n_faces());
    println!("h = {}", q.h);
    println!("theta = {}", q.theta);
    println!("admissible = true");
    Ok(true)
}

fn read_config(path: &Path) -> tpfa::Result<StudyConfig> {
    let text = std::fs::read_to_string(path)?;
    StudyConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
}

fn report(outcome: &StudyOutcome, dir: Option<&Path>) -> tpfa::Result<bool> {
    if let Some(dir) = dir {
        outcome.write(dir)?;
    }
    print!("{}", outcome.summary_text());
    Ok(outcome.passed())
}

/// Run a study, echoing each row and appending it to `levels.csv` as it
/// completes so that partial results survive a failure.
fn run_with_progress(cfg: &StudyConfig) -> tpfa::Result<bool> {
    let mut partial = match &cfg.output {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Some(std::fs::File::create(dir.join("levels.csv"))?)
        }
        None => None,
    };
    let header = tpfa::study::study_header(cfg.problem);
    if let Some(f) = partial.as_mut() {
        writeln!(f, "{header}")?;
    }
    println!("{header}");
    let outcome = run_study(cfg, |row| {
        if let Some(f) = partial.as_mut() {
            writeln!(f, "{row}")?;
        }
        println!("{row}");
        Ok(())
    })?;
    report(&outcome, cfg.output.as_deref())
}

fn study(path: &Path) -> tpfa::Result<bool> {
    run_with_progress(&read_config(path)?)
}

fn bench_singular(args: &[String]) -> tpfa::Result<bool> {
    let meshes = match args {
        [] => MeshSource::Acute(vec![4, 8, 16, 32, 64]),
        [flag, dir] if flag == "--meshes" => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            MeshSource::Files(files)
        }
        [flag, levels] if flag == "--generate" => {
            let count: usize = levels.parse().map_err(|_| TpfaError::Config(format!("bad level count `{levels}`")))?;
            MeshSource::Acute((0..count).map(|i| 4 << i).collect())
        }
        _ => return Err(TpfaError::Config(USAGE.into())),
    };
    if meshes.is_empty() {
        return Err(TpfaError::Config("no meshes found".into()));
    }
    if let MeshSource::Acute(levels) = &meshes {
        // Fail early with a mesh error if the pattern is not acute.
        generate_acute_triangular_grid(levels[0])?;
    }
    let cfg = StudyConfig {
        problem: Problem::Singular,
        meshes,
        steps: Vec::new(),
        transient: TransientSettings { t_final: 1.0, coupling: CouplingMap::Zero, zeta: ZetaNormalization::default() },
        output: None,
        seed: tpfa::study::DEFAULT_SEED,
        min_order: 0.85,
    };
    run_with_progress(&cfg)
}

fn transient(path: &Path) -> tpfa::Result<bool> {
    let mut cfg = read_config(path)?;
    cfg.problem = Problem::TransientManufactured;
    let (norms, outcome) = run_transient(&cfg)?;
    print!("{norms}");
    if let Some(dir) = &cfg.output {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("norms.csv"), &norms)?;
    }
    println!("{}", outcome.header);
    outcome.rows.iter().for_each(|r| println!("{r}"));
    report(&outcome, cfg.output.as_deref())
}
