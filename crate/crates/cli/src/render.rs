use seqgroves::VerificationReport;

use crate::error::CliError;
use crate::scenario::{Row, Simulation};
use crate::OutputFormat;

fn csv_string<T: serde::Serialize>(records: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)
            .map_err(|e| CliError::Invariant(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn simulation(sim: &Simulation, format: OutputFormat) -> Result<String, CliError> {
    let rows = sim.rows();
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(sim).expect("serialisable") + "\n"),
        OutputFormat::Csv => csv_string(&rows),
        OutputFormat::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(row_cells).collect();
            Ok(table(
                &[
                    "profile",
                    "player",
                    "announced",
                    "winner",
                    "tax",
                    "utility",
                    "sw",
                ],
                &cells,
            ))
        }
    }
}

fn row_cells(r: &Row) -> Vec<String> {
    vec![
        r.profile.clone(),
        r.player.clone(),
        r.announced.clone(),
        r.winner.to_string(),
        r.tax.to_string(),
        r.utility.to_string(),
        r.sw.to_string(),
    ]
}

#[derive(serde::Serialize)]
struct ReportRow<'a> {
    suite: &'a str,
    instances: u64,
    passed: bool,
    note: &'a str,
}

pub fn reports(reports: &[VerificationReport], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => {
            Ok(serde_json::to_string_pretty(reports).expect("serialisable") + "\n")
        }
        OutputFormat::Csv => {
            let rows: Vec<ReportRow> = reports
                .iter()
                .map(|r| ReportRow {
                    suite: &r.suite,
                    instances: r.instances,
                    passed: r.passed,
                    note: r.witness.as_ref().map_or("", |w| w.note.as_str()),
                })
                .collect();
            csv_string(&rows)
        }
        OutputFormat::Table => {
            let cells: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                        r.suite.clone(),
                        r.instances.to_string(),
                        r.witness.as_ref().map_or(String::new(), |w| w.note.clone()),
                    ]
                })
                .collect();
            Ok(table(&["result", "suite", "instances", "witness"], &cells))
        }
    }
}
