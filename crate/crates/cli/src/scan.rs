use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;
use entbound::scan::{write_csv, Rot4Scanner, ScanRow};

use crate::{Failure, Format};

pub const FILES: [&str; 3] = ["rot4_full", "rot4_p0", "rot4_q0"];

pub fn run(step: f64, out: &Path, format: Format) -> Result<(), Failure> {
    entbound::scan::subdivisions(step)?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let grid = Rot4Scanner::new()?.scan(step)?;
    let parts: [Vec<&ScanRow>; 3] = [grid.rows.iter().collect(), grid.slice_p0(), grid.slice_q0()];
    for (name, rows) in FILES.iter().zip(parts) {
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let path = out.join(format!("{name}.{ext}"));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let w = BufWriter::new(file);
        match format {
            Format::Csv => write_csv(w, rows)?,
            Format::Json => {
                let doc = serde_json::json!({ "step": step, "rows": rows });
                serde_json::to_writer_pretty(w, &doc).context("writing JSON")?;
            }
        }
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
