//! Emission of plain-text gnuplot scripts; no rendering dependency.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::AppError;

/// A CSV source and the legend label to plot it under.
struct Source {
    path: PathBuf,
    label: String,
}

fn discover_sources(input: &Path) -> Result<Vec<Source>, AppError> {
    if input.is_dir() {
        let mut sources: Vec<(f64, Source)> = Vec::new();
        let entries =
            fs::read_dir(input).map_err(|e| AppError::Io(input.to_path_buf(), e))?;
        for entry in entries {
            let entry = entry.map_err(|e| AppError::Io(input.to_path_buf(), e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(alpha) = name.strip_prefix("alpha_").and_then(|s| s.strip_suffix(".csv")) {
                if let Ok(a) = alpha.parse::<f64>() {
                    sources.push((
                        a,
                        Source { path: entry.path(), label: format!("alpha={alpha}") },
                    ));
                }
            }
        }
        if sources.is_empty() {
            return Err(AppError::config(format!(
                "no alpha_*.csv series found in '{}'",
                input.display()
            )));
        }
        sources.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        Ok(sources.into_iter().map(|(_, s)| s).collect())
    } else if input.is_file() {
        Ok(vec![Source { path: input.to_path_buf(), label: "run".into() }])
    } else {
        Err(AppError::config(format!("'{}' is neither a CSV nor a sweep directory", input.display())))
    }
}

fn script(title: &str, ylabel: &str, plots: &[String]) -> String {
    format!(
        "# generated by sqg plot\n\
         set datafile separator \",\"\n\
         set title \"{title}\"\n\
         set xlabel \"t\"\n\
         set ylabel \"{ylabel}\"\n\
         set key top right\n\
         plot \\\n  {}\n",
        plots.join(", \\\n  ")
    )
}

fn curve(source: &Source, using: &str, label: &str) -> String {
    format!("\"{}\" skip 1 using {} with lines title \"{}\"", source.path.display(), using, label)
}

/// Emits `energy.gp`, `linf.gp` and `indicator.gp` into `out_dir` for a
/// diagnostics CSV or a sweep directory. Returns the script paths.
pub fn emit_plots(input: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, AppError> {
    let sources = discover_sources(input)?;
    fs::create_dir_all(out_dir).map_err(|e| AppError::Io(out_dir.to_path_buf(), e))?;

    let energy: Vec<String> =
        sources.iter().map(|s| curve(s, "1:2", &format!("E(t) {}", s.label))).collect();
    let mut linf: Vec<String> = Vec::new();
    for s in &sources {
        linf.push(curve(s, "1:5", &format!("max {}", s.label)));
        linf.push(curve(s, "1:6", &format!("min {}", s.label)));
    }
    let indicator: Vec<String> =
        sources.iter().map(|s| curve(s, "1:7", &format!("B {}", s.label))).collect();

    let files = [
        ("energy.gp", script("modified energy", "E(t)", &energy)),
        ("linf.gp", script("pointwise extrema", "theta", &linf)),
        ("indicator.gp", script("blow-up indicator", "alpha |grad theta|", &indicator)),
    ];
    let mut written = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        fs::write(&path, content).map_err(|e| AppError::Io(path.clone(), e))?;
        written.push(path);
    }
    Ok(written)
}
