//! Report model and its text, CSV and JSON renderings.
//!
//! Big integers are carried as decimal strings so JSON stays lossless.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodCounts {
    pub exact: u64,
    pub certified: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub onset: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_onset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caveat: Option<bool>,
    pub checked_range: [u64; 2],
    pub failures: Vec<u64>,
    pub method_counts: MethodCounts,
    pub passed: bool,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, q: u64, range: [u64; 2], columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            q,
            property: None,
            onset: None,
            expected_onset: None,
            caveat: None,
            checked_range: range,
            failures: Vec::new(),
            method_counts: MethodCounts::default(),
            passed: true,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub fn serialize_reports(reports: &[Report], format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = match reports {
                [single] => serde_json::to_vec_pretty(single),
                _ => serde_json::to_vec_pretty(reports),
            }
            .expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => to_csv(reports),
        Format::Text => to_text(reports).into_bytes(),
    }
}

/// Inverse of the JSON rendering: accepts one object or an array.
pub fn parse_reports(json: &str) -> serde_json::Result<Vec<Report>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Box<Report>),
        Many(Vec<Report>),
    }
    Ok(match serde_json::from_str(json)? {
        OneOrMany::One(r) => vec![*r],
        OneOrMany::Many(v) => v,
    })
}

fn to_csv(reports: &[Report]) -> Vec<u8> {
    let with_q = reports.len() > 1;
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = reports.first() {
        let mut header: Vec<&str> = Vec::new();
        if with_q {
            header.push("q");
        }
        header.extend(first.columns.iter().map(String::as_str));
        w.write_record(&header).expect("in-memory csv");
    }
    for r in reports {
        let q = r.q.to_string();
        for row in &r.rows {
            let mut rec: Vec<&str> = Vec::with_capacity(row.len() + 1);
            if with_q {
                rec.push(&q);
            }
            rec.extend(row.iter().map(String::as_str));
            w.write_record(&rec).expect("in-memory csv");
        }
    }
    w.into_inner().expect("in-memory csv")
}

fn to_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let mut title = format!("{} q={}", r.command, r.q);
        if let Some(p) = &r.property {
            title.push_str(&format!(" {p}"));
        }
        title.push_str(&format!(" n={}..{}", r.checked_range[0], r.checked_range[1]));
        out.push_str(&title);
        out.push('\n');

        let widths: Vec<usize> = (0..r.columns.len())
            .map(|c| {
                r.rows
                    .iter()
                    .map(|row| row.get(c).map_or(0, |s| s.len()))
                    .chain(std::iter::once(r.columns[c].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        out.push_str(&line(&r.columns));
        out.push('\n');
        for row in &r.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        if let Some(onset) = r.onset {
            out.push_str(&format!("onset: {onset}"));
            if let Some(e) = &r.expected_onset {
                out.push_str(&format!(" (expected {e})"));
            }
            if r.caveat == Some(true) {
                out.push_str(" [caveat: last failure near the horizon]");
            }
            out.push('\n');
        }
        out.push_str(&format!("failures: {:?}\n", r.failures));
        out.push_str(&format!(
            "methods: exact {}, certified {}\n",
            r.method_counts.exact, r.method_counts.certified
        ));
        out.push_str(if r.passed { "result: ok\n" } else { "result: FAILED\n" });
    }
    out
}
