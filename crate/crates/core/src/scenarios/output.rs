use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

use super::engine::SweepResult;
use super::figures::{FigureRun, Verdict};

pub const CSV_COLUMNS: [&str; 7] = ["param", "I", "J", "D", "E_N", "separable", "branch"];
pub const CSV_ERROR_COLUMNS: [&str; 4] = ["I_err", "J_err", "D_err", "E_N_err"];

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn sweep_csv(result: &SweepResult) -> Result<Vec<u8>> {
    let with_errors = result.records.iter().any(|r| r.errors.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if with_errors {
        header.extend(CSV_ERROR_COLUMNS);
    }
    w.write_record(&header)?;
    for rec in &result.records {
        let r = &rec.report;
        let mut row = vec![
            rec.param.to_string(),
            r.mutual_info.to_string(),
            r.classical_info.to_string(),
            r.discord.to_string(),
            r.log_negativity.to_string(),
            r.separable.to_string(),
            r.branch.to_string(),
        ];
        if with_errors {
            let e = rec.errors.expect("sampled sweeps carry errors on every record");
            row.extend([e.mutual_info, e.classical_info, e.discord, e.log_negativity].map(|v| v.to_string()));
        }
        w.write_record(&row)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    scenario: &'a str,
    figure: &'a str,
    fingerprint: &'a str,
    version: &'a str,
    parameter: &'a str,
    units: crate::measures::Units,
    config: &'a super::config::ScenarioConfig,
    verdicts: &'a [Verdict],
}

/// Writes one `<curve>.csv` plus `<curve>.json` sidecar per curve into `dir`.
/// Returns the CSV paths in curve order.
pub fn write_figure(run: &FigureRun, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for curve in &run.curves {
        let csv_path = dir.join(format!("{}.csv", curve.scenario));
        write_atomic(&csv_path, &sweep_csv(curve)?)?;
        let sidecar = Sidecar {
            scenario: &curve.scenario,
            figure: &run.name,
            fingerprint: &curve.fingerprint,
            version: &curve.version,
            parameter: &curve.parameter,
            units: curve.units,
            config: &curve.config,
            verdicts: &run.verdicts,
        };
        let json = serde_json::to_vec_pretty(&sidecar)?;
        write_atomic(&dir.join(format!("{}.json", curve.scenario)), &json)?;
        paths.push(csv_path);
    }
    Ok(paths)
}

/// A matplotlib script that plots D against the sweep parameter for every
/// curve of the run. Not executed here.
pub fn plot_script(run: &FigureRun) -> String {
    let files: Vec<String> = run
        .curves
        .iter()
        .map(|c| format!("    (\"{0}\", \"{0}.csv\"),", c.scenario))
        .collect();
    let xlabel = run.curves.first().map(|c| c.parameter.as_str()).unwrap_or("param");
    let log_x = if xlabel == "modulation" { "ax.set_xscale(\"log\")\n" } else { "" };
    format!(
        "import csv\nimport matplotlib.pyplot as plt\n\nCURVES = [\n{}\n]\n\nfig, ax = plt.subplots()\nfor label, path in CURVES:\n    with open(path) as fh:\n        rows = list(csv.DictReader(fh))\n    x = [float(r[\"param\"]) for r in rows]\n    y = [float(r[\"D\"]) for r in rows]\n    if \"D_err\" in rows[0]:\n        ax.errorbar(x, y, yerr=[float(r[\"D_err\"]) for r in rows], label=label, capsize=2)\n    else:\n        ax.plot(x, y, label=label)\n{}ax.set_xlabel(\"{}\")\nax.set_ylabel(\"D\")\nax.legend()\nfig.savefig(\"{}.png\", dpi=150)\n",
        files.join("\n"),
        log_x,
        xlabel,
        run.name
    )
}
