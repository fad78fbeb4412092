//! Run a study from a config file (default: an inline smooth-solution
//! study) and print its tables.

use std::path::Path;

use tpfa::study::{run_study, StudyConfig};

const INLINE: &str = "
[study]
problem = manufactured-h2
seed = 42

[mesh]
family = square
levels = 8, 16, 32
";

fn main() -> tpfa::Result<()> {
    let (text, base) = match std::env::args().nth(1) {
        Some(p) => (std::fs::read_to_string(&p)?, Path::new(&p).parent().unwrap_or(Path::new(".")).to_path_buf()),
        None => (INLINE.to_string(), Path::new(".").to_path_buf()),
    };
    let cfg = StudyConfig::parse(&text, &base)?;
    let outcome = run_study(&cfg, |_| Ok(()))?;
    print!("{}", outcome.csv());
    print!("{}", outcome.summary_text());
    if let Some(dir) = &cfg.output {
        outcome.write(dir)?;
    }
    Ok(())
}
