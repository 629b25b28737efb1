use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::experiments::{fit_loglog, FitResult, Verdict};

pub const RESULTS_HEADER: &str = "scenario,param,observable,measured,predicted,tolerance,verdict";
pub const FIT_HEADER: &str = "scenario,observable,parameter,points,slope,intercept,stderr,r_squared,predicted,tolerance,verdict";

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub param: Option<f64>,
    pub observable: String,
    pub measured: f64,
    pub predicted: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    /// The claim a judged row tests; `exploratory` for data rows.
    pub reference: String,
}

impl ResultRow {
    /// Raw measurement with no prediction attached.
    pub fn data(scenario: &str, param: f64, observable: impl Into<String>, measured: f64) -> Self {
        Self {
            scenario: scenario.into(),
            param: Some(param),
            observable: observable.into(),
            measured,
            predicted: None,
            tolerance: None,
            verdict: Verdict::Exploratory,
            reference: "exploratory".into(),
        }
    }

    /// `|measured - predicted| ≤ tolerance`.
    pub fn judged(
        scenario: &str,
        param: Option<f64>,
        observable: impl Into<String>,
        measured: f64,
        predicted: f64,
        tolerance: f64,
        reference: impl Into<String>,
    ) -> Self {
        Self {
            scenario: scenario.into(),
            param,
            observable: observable.into(),
            measured,
            predicted: Some(predicted),
            tolerance: Some(tolerance),
            verdict: Verdict::from_bool((measured - predicted).abs() <= tolerance),
            reference: reference.into(),
        }
    }

    /// `measured ≤ bound`, written with `predicted = 0`, `tolerance = bound`.
    pub fn bounded(scenario: &str, observable: impl Into<String>, measured: f64, bound: f64, reference: impl Into<String>) -> Self {
        Self::judged(scenario, None, observable, measured, 0.0, bound, reference)
    }

    /// Fitted slope row; exploratory when the fit carries no prediction.
    pub fn slope(scenario: &str, observable: &str, fit: &FitResult, reference: &str) -> Self {
        let exploratory = fit.predicted.is_none();
        Self {
            scenario: scenario.into(),
            param: None,
            observable: format!("slope of {observable}"),
            measured: fit.slope,
            predicted: fit.predicted,
            tolerance: fit.tolerance,
            verdict: fit.verdict,
            reference: if exploratory { "exploratory".into() } else { reference.into() },
        }
    }

    /// Row for an experiment aborted by an error.
    pub fn error(scenario: &str, observable: &str, err: &crate::Error) -> Self {
        Self {
            scenario: scenario.into(),
            param: None,
            observable: format!("{observable} [error:{}]", err.class()),
            measured: f64::NAN,
            predicted: None,
            tolerance: None,
            verdict: Verdict::Fail,
            reference: err.to_string(),
        }
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        if verdict == Verdict::Exploratory {
            self.predicted = None;
            self.tolerance = None;
            self.reference = "exploratory".into();
        }
        self
    }
}

/// Seventeen significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.scenario),
            fmt_opt(r.param),
            csv_field(&r.observable),
            fmt_f64(r.measured),
            fmt_opt(r.predicted),
            fmt_opt(r.tolerance),
            r.verdict
        );
    }
    out
}

/// A fit together with the labels it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRecord {
    pub scenario: String,
    pub observable: String,
    pub parameter: String,
    pub points: usize,
    pub fit: FitResult,
}

pub fn fit_csv(fits: &[FitRecord]) -> String {
    let mut out = String::from(FIT_HEADER);
    out.push('\n');
    for f in fits {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&f.scenario),
            csv_field(&f.observable),
            csv_field(&f.parameter),
            f.points,
            fmt_f64(f.fit.slope),
            fmt_f64(f.fit.intercept),
            fmt_f64(f.fit.stderr),
            fmt_f64(f.fit.r_squared),
            fmt_opt(f.fit.predicted),
            fmt_opt(f.fit.tolerance),
            f.fit.verdict
        );
    }
    out
}

pub fn report(config_name: &str, seed: u64, rows: &[ResultRow], fits: &[FitRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {config_name}");
    let _ = writeln!(out, "seed: {seed}");
    let _ = writeln!(out);
    if !fits.is_empty() {
        let _ = writeln!(out, "fits:");
        for f in fits {
            let pred = f.fit.predicted.map(|p| format!("{p:+.4}")).unwrap_or_else(|| "none".into());
            let _ = writeln!(
                out,
                "  {:<40} slope {:+.5} ± {:.1e}  R² {:.6}  predicted {}  [{}]",
                f.observable, f.fit.slope, f.fit.stderr, f.fit.r_squared, pred, f.fit.verdict
            );
        }
        let _ = writeln!(out);
    }
    let judged: Vec<&ResultRow> = rows.iter().filter(|r| r.verdict != Verdict::Exploratory).collect();
    let _ = writeln!(out, "checks:");
    for r in &judged {
        let pred = r.predicted.map(|p| format!("{p:.6e}")).unwrap_or_default();
        let tol = r.tolerance.map(|p| format!("{p:.1e}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "  [{}] {}: measured {:.6e}, predicted {} ± {}  ({})",
            r.verdict, r.observable, r.measured, pred, tol, r.reference
        );
    }
    let failed = judged.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let explored = rows.len() - judged.len();
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "summary: {} checked, {} failed, {} exploratory rows",
        judged.len(),
        failed,
        explored
    );
    let _ = writeln!(out, "overall: {}", if failed == 0 { "pass" } else { "fail" });
    out
}

/// Writes the four result files into `dir`.
pub fn write_all(dir: &Path, echo: &serde_json::Value, rows: &[ResultRow], fits: &[FitRecord], report_text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut echo_text = serde_json::to_string_pretty(echo).map_err(|e| crate::Error::Parse(e.to_string()))?;
    echo_text.push('\n');
    std::fs::write(dir.join("config-echo.json"), echo_text)?;
    std::fs::write(dir.join("results.csv"), results_csv(rows))?;
    std::fs::write(dir.join("fit.csv"), fit_csv(fits))?;
    std::fs::write(dir.join("report.txt"), report_text)?;
    Ok(())
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

/// Re-fits every `(scenario, observable)` series of data rows in a saved
/// `results.csv`.
pub fn refit(csv: &str) -> Result<Vec<FitRecord>> {
    let mut lines = csv.lines();
    match lines.next() {
        Some(h) if h.trim() == RESULTS_HEADER => {}
        other => {
            return Err(crate::Error::Parse(format!(
                "expected header '{RESULTS_HEADER}', found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut series: Vec<((String, String), Vec<(f64, f64)>)> = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f = split_csv_line(line);
        if f.len() != 7 {
            return Err(crate::Error::Parse(format!("line {}: expected 7 fields, found {}", n + 2, f.len())));
        }
        if f[6] != "exploratory" || f[1].is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| crate::Error::Parse(format!("line {}: '{s}': {e}", n + 2)))
        };
        let (x, y) = (parse(&f[1])?, parse(&f[3])?);
        let key = (f[0].clone(), f[2].clone());
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((x, y)),
            None => series.push((key, vec![(x, y)])),
        }
    }
    Ok(series
        .into_iter()
        .filter_map(|((scenario, observable), pts)| {
            fit_loglog(&pts).ok().map(|fit| FitRecord {
                scenario,
                observable,
                parameter: "param".into(),
                points: pts.len(),
                fit,
            })
        })
        .collect())
}
