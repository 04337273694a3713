//! Report rendering: json, an aligned text table, csv.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::survey::{FibreReportRecord, SurveyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected text, json or csv)")),
        }
    }
}

pub fn emit_report(report: &SurveyReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(report),
        Format::Csv => csv_table(report),
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn status(r: &FibreReportRecord) -> String {
    if r.error.is_some() {
        "error".into()
    } else if r.alarms.is_empty() {
        "ok".into()
    } else {
        format!("ALARM({})", r.alarms.len())
    }
}

fn text_row(r: &FibreReportRecord) -> Vec<String> {
    let cm = match (&r.cm, &r.equator) {
        (Some(c), _) => format!(
            "deg {} cm {} k0 {} routes {} crit {}{}{}",
            c.solver_degree,
            yn(c.solver_cm),
            yn(c.k0_equal),
            yn(c.two_routes_agree),
            c.criteria[0] as u8,
            c.criteria[1] as u8,
            c.criteria[2] as u8
        ),
        (None, Some(e)) => format!(
            "kT deg {} span {} sub {} cm {}",
            e.period_field_degree,
            e.imaginary_span_dim,
            e.minimal_substructure_dim,
            yn(e.cm_verdict)
        ),
        _ => "-".into(),
    };
    vec![
        format!("({})", r.class.join(",")),
        r.location.clone(),
        r.m.clone(),
        r.norm.clone(),
        r.rho_z.map_or("-".into(), |x| x.to_string()),
        r.field_discriminant.clone().unwrap_or_else(|| "-".into()),
        cm,
        status(r),
    ]
}

fn text(report: &SurveyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", report.scenario);
    if let Some(s) = &report.structure {
        let _ = writeln!(out, "field: [{}]  rank {}  d = {}", s.field.join(", "), s.rank, s.d);
    }
    let header: Vec<String> =
        ["class", "location", "m", "norm", "rho", "disc", "check", "status"].iter().map(|s| s.to_string()).collect();
    let mut rows = vec![header];
    rows.extend(report.records.iter().map(text_row));
    let widths: Vec<usize> = (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    for row in &rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    for r in &report.records {
        for a in &r.alarms {
            let _ = writeln!(out, "alarm ({}): {a}", r.class.join(","));
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "error ({}): {e}", r.class.join(","));
        }
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "classes {} (skipped {} non-positive)  poles {}  equator {}  generic {}",
        s.classes, s.skipped_non_positive, s.poles, s.equator, s.generic
    );
    let _ = writeln!(
        out,
        "cm pass {} fail {}  equator pass {} fail {}  picard violations {}  period failures {}  errors {}  alarms {}",
        s.cm_pass, s.cm_fail, s.equator_pass, s.equator_fail, s.picard_violations, s.period_fail, s.errors, s.alarms
    );
    if let Some(t) = report.timing_ms {
        let _ = writeln!(out, "time {t} ms");
    }
    out
}

/// Column count is fixed by the rank, so every row has the same width.
fn csv_table(report: &SurveyReport) -> String {
    let width = report
        .structure
        .as_ref()
        .map(|s| s.rank + 1)
        .unwrap_or_else(|| report.records.iter().map(|r| r.class.len()).max().unwrap_or(0));
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (0..width).map(|i| format!("class_{i}")).collect();
    header.extend(["location", "rho_z", "field_discriminant", "alarms"].iter().map(|s| s.to_string()));
    w.write_record(&header).expect("in-memory write");
    for r in &report.records {
        let mut row: Vec<String> = (0..width).map(|i| r.class.get(i).cloned().unwrap_or_default()).collect();
        row.push(r.location.clone());
        row.push(r.rho_z.map(|x| x.to_string()).unwrap_or_default());
        row.push(r.field_discriminant.clone().unwrap_or_default());
        row.push(r.alarms.len().to_string());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
