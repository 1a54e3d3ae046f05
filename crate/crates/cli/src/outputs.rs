//! Report persistence (atomic JSON), sample dumps, the human-readable table
//! and long-format CSV emission for external plotting tools.

use anyhow::{anyhow, Context};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use truncstable::simulate::ExitSample;
use truncstable::verify::VerificationReport;

/// Write-temp-then-rename: a crashed run never leaves a partial file under
/// the final name.
pub fn write_json_atomic<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".tmp.{}",
        path.file_name()
            .ok_or_else(|| anyhow!("output path has no file name"))?
            .to_string_lossy()
    ));
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        serde_json::to_writer_pretty(&mut f, value)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Exit-sample dump: `path_id, exit coordinates, exit_time, steps`.
pub fn write_samples_csv(path: &Path, samples: &[ExitSample]) -> anyhow::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let dim = samples.first().map_or(2, |s| s.exit_position.dim());
    let mut text = String::from("path_id");
    for i in 0..dim {
        write!(text, ",exit_{i}").unwrap();
    }
    text.push_str(",exit_time,steps\n");
    for s in samples {
        write!(text, "{}", s.seed_id).unwrap();
        for i in 0..dim {
            write!(text, ",{}", s.exit_position[i]).unwrap();
        }
        match s.exit_time {
            Some(t) => writeln!(text, ",{t},{}", s.steps).unwrap(),
            None => writeln!(text, ",,{}", s.steps).unwrap(),
        }
    }
    let tmp = dir.join(".tmp.samples.csv");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// One pass/fail row per suite plus fitted constants.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<24} {:<16} {:>7} {:>6} {:>10} {:>8}  constants",
        "suite", "domain", "tuples", "viol", "status", "ms"
    )
    .unwrap();
    for r in reports {
        let status = if !r.required {
            "report"
        } else if r.pass {
            "PASS"
        } else {
            "FAIL"
        };
        let consts = r
            .constants
            .iter()
            .map(|(k, v)| format!("{k}={v:.4}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            out,
            "{:<24} {:<16} {:>7} {:>6} {:>10} {:>8}  {}",
            r.theorem, r.domain, r.tuples_tested, r.violations, status, r.runtime_ms, consts
        )
        .unwrap();
    }
    out
}

/// Long-format CSV for external plotting: `suite, tuple_id, lhs, rhs, ratio,
/// stderr`. The relative-limit suite gets its dedicated
/// `(rho, theta, u, h, ratio, stderr)` schema, and symmetric Green pairs
/// appear as two rows sharing a tuple id.
pub fn emit_plotdata(reports: &[VerificationReport], out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for r in reports {
        let path = out_dir.join(format!("{}.csv", r.theorem));
        let mut text = String::new();
        if r.theorem == "fatou-disc" {
            text.push_str("rho,theta,u,h,ratio,stderr\n");
            for rec in &r.records {
                let rho = rec.extra.get("rho").or(rec.extra.get("phi")).copied();
                let (Some(rho), Some(u), Some(h)) = (
                    rho,
                    rec.extra.get("u").copied(),
                    rec.extra.get("h").copied(),
                ) else {
                    continue;
                };
                let theta = rec.extra.get("theta").copied().unwrap_or(0.0);
                writeln!(text, "{rho},{theta},{u},{h},{},{}", rec.lhs, rec.stderr).unwrap();
            }
        } else {
            text.push_str("suite,tuple_id,lhs,rhs,ratio,stderr\n");
            for rec in &r.records {
                writeln!(
                    text,
                    "{},{},{},{},{},{}",
                    r.theorem, rec.id, rec.lhs, rec.rhs, rec.ratio, rec.stderr
                )
                .unwrap();
                // symmetric Green pairs: emit the swapped orientation under
                // the same tuple id
                if let (Some(gx), Some(gy)) =
                    (rec.extra.get("green_x"), rec.extra.get("green_y"))
                {
                    writeln!(
                        text,
                        "{},{},{},{},{},{}",
                        r.theorem,
                        rec.id,
                        gy,
                        gx,
                        if *gx != 0.0 { gy / gx } else { f64::NAN },
                        rec.stderr
                    )
                    .unwrap();
                }
            }
        }
        let tmp = out_dir.join(format!(".tmp.{}.csv", r.theorem));
        std::fs::write(&tmp, &text)?;
        std::fs::rename(&tmp, &path)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_set_gives_no_files_and_headers_only_for_empty_records() {
        let dir = std::env::temp_dir().join("truncstable-plotdata-test");
        let _ = std::fs::remove_dir_all(&dir);
        let written = emit_plotdata(&[], &dir).unwrap();
        assert!(written.is_empty());

        let rep: VerificationReport = serde_json::from_value(serde_json::json!({
            "theorem": "empty-suite", "domain": "ball", "process": "truncated",
            "alpha": 1.0, "tuples_tested": 0, "constants": {}, "violations": 0,
            "pass": true, "required": true, "notes": [], "records": []
        }))
        .unwrap();
        let written = emit_plotdata(&[rep], &dir).unwrap();
        assert_eq!(written.len(), 1);
        let text = std::fs::read_to_string(&written[0]).unwrap();
        assert_eq!(text, "suite,tuple_id,lhs,rhs,ratio,stderr\n");
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = std::env::temp_dir().join("truncstable-atomic-test");
        let _ = std::fs::remove_dir_all(&dir);
        let path = dir.join("r.json");
        write_json_atomic(&path, &serde_json::json!({"a": 1})).unwrap();
        assert!(path.exists());
        assert!(!dir.join(".tmp.r.json").exists());
    }
}
