use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pysmell::metrics::{count_loc, LocEntry, LocManifest};
use pysmell::report::ParseFailure;
use pysmell::{parse_unit, scan_unit, Detection, ScanReport, ToolConfig};
use rayon::prelude::*;
use walkdir::WalkDir;

/// A file to scan, with the path shown in reports and its project id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InputFile {
    pub display: String,
    pub path: PathBuf,
    pub project: String,
}

fn display_path(p: &Path) -> String {
    p.to_string_lossy().replace('\\', "/")
}

/// Expands the roots into a sorted, duplicate-free file list. The project
/// of a file is the first path component below its root.
pub fn collect_files(roots: &[PathBuf], extensions: &[String]) -> Result<Vec<InputFile>> {
    let mut out = BTreeSet::new();
    for root in roots {
        if !root.exists() {
            bail!("path {} does not exist", root.display());
        }
        if root.is_file() {
            let project = root.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            out.insert(InputFile { display: display_path(root), path: root.clone(), project });
            continue;
        }
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.with_context(|| format!("walking {}", root.display()))?;
            if !entry.file_type().is_file() {
                continue;
            }
            let ext = entry.path().extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_default();
            if !extensions.contains(&ext) {
                continue;
            }
            let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
            let project = rel
                .components()
                .next()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .unwrap_or_default();
            out.insert(InputFile { display: display_path(entry.path()), path: entry.path().to_path_buf(), project });
        }
    }
    Ok(out.into_iter().collect())
}

enum FileOutcome {
    Scanned { detections: Vec<Detection>, loc: usize },
    Failed { failure: ParseFailure, loc: usize },
}

fn scan_one(file: &InputFile, config: &ToolConfig) -> Result<FileOutcome> {
    let bytes = std::fs::read(&file.path).with_context(|| format!("reading {}", file.path.display()))?;
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => {
            let failure = ParseFailure { path: file.display.clone(), line: 1, col: 0, message: "file is not valid UTF-8".into() };
            return Ok(FileOutcome::Failed { failure, loc: 0 });
        }
    };
    let loc = count_loc(&text, config.loc_mode);
    Ok(match parse_unit(file.display.clone(), &text) {
        Ok(unit) => FileOutcome::Scanned { detections: scan_unit(&unit, &config.enabled, &config.smells), loc },
        Err(e) => FileOutcome::Failed { failure: ParseFailure::from(&e), loc },
    })
}

/// Scans every file on `jobs` threads. The result does not depend on `jobs`.
pub fn scan_files(files: &[InputFile], config: &ToolConfig, jobs: usize) -> Result<(ScanReport, LocManifest)> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let outcomes: Vec<Result<FileOutcome>> = pool.install(|| files.par_iter().map(|f| scan_one(f, config)).collect());
    let mut report = ScanReport::new(config.to_value());
    let mut loc = LocManifest { mode: config.loc_mode, files: Vec::with_capacity(files.len()) };
    for (file, outcome) in files.iter().zip(outcomes) {
        let n = match outcome? {
            FileOutcome::Scanned { detections, loc } => {
                report.detections.extend(detections);
                loc
            }
            FileOutcome::Failed { failure, loc } => {
                report.parse_errors.push(failure);
                loc
            }
        };
        report.scanned_files += 1;
        loc.files.push(LocEntry { path: file.display.clone(), project: file.project.clone(), loc: n });
    }
    report.normalize();
    Ok((report, loc))
}
