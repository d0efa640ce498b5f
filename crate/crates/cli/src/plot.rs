use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::args::PlotdataArgs;
use crate::schema::{PlotRow, ResultsFile, RESULTS_SCHEMA};
use crate::{CmdResult, Failure, Run};

/// ML grid points echoed as their own estimator rows when present.
const ML_ROWS: [f64; 3] = [0.0, 0.5, 1.0];

pub(crate) fn read_results(path: &Path) -> CmdResult<ResultsFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid("io", format!("cannot read `{}`: {e}", path.display())))?;
    let results: ResultsFile = serde_json::from_str(&text)
        .map_err(|e| Failure::invalid("schema", format!("`{}`: {e}", path.display())))?;
    if results.schema_version != RESULTS_SCHEMA {
        return Err(Failure::invalid(
            "schema",
            format!(
                "`{}` has schema {}, expected {RESULTS_SCHEMA}",
                path.display(),
                results.schema_version
            ),
        ));
    }
    Ok(results)
}

fn read_benchmark(path: &Path) -> CmdResult<BTreeMap<String, f64>> {
    let bad = |m: String| Failure::invalid("benchmark", format!("`{}`: {m}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let mut values = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("row {} must have exactly two columns", i + 1)));
        }
        let label = record[0].trim().to_owned();
        let value: f64 = record[1]
            .trim()
            .parse()
            .map_err(|_| bad(format!("row {}: `{}` is not a number", i + 1, &record[1])))?;
        if values.insert(label.clone(), value).is_some() {
            return Err(bad(format!("label `{label}` appears twice")));
        }
    }
    Ok(values)
}

pub(crate) fn tidy_rows(
    waves: &[ResultsFile],
    benchmark: Option<&BTreeMap<String, f64>>,
) -> CmdResult<Vec<PlotRow>> {
    let mut seen = HashSet::new();
    for w in waves {
        if !seen.insert(w.label.as_str()) {
            return Err(Failure::invalid(
                "labels",
                format!("duplicate wave label `{}`", w.label),
            ));
        }
    }
    if let Some(bench) = benchmark {
        let missing: Vec<&str> = waves
            .iter()
            .map(|w| w.label.as_str())
            .filter(|l| !bench.contains_key(*l))
            .collect();
        let extra: Vec<&str> = bench
            .keys()
            .map(String::as_str)
            .filter(|l| !seen.contains(l))
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Failure::invalid(
                "benchmark_mismatch",
                format!(
                    "wave labels without benchmark: [{}]; benchmark labels without results: [{}]",
                    missing.join(", "),
                    extra.join(", ")
                ),
            ));
        }
    }
    let mut rows = Vec::new();
    for w in waves {
        let bench = benchmark.and_then(|b| b.get(&w.label)).copied();
        let row = |estimator: String, median: f64| PlotRow {
            wave_label: w.label.clone(),
            estimator,
            median,
            ci_lower: None,
            ci_upper: None,
            rho_median: None,
            rho_lower: None,
            rho_upper: None,
            benchmark: bench,
        };
        if let Some(p) = &w.posterior {
            rows.push(PlotRow {
                ci_lower: Some(p.mu_y.ci_lower),
                ci_upper: Some(p.mu_y.ci_upper),
                rho_median: Some(p.rho1.median),
                rho_lower: Some(p.rho1.ci_lower),
                rho_upper: Some(p.rho1.ci_upper),
                ..row("ppmm".to_owned(), p.mu_y.median)
            });
        }
        for phi in ML_ROWS {
            if let Some(e) = w.ml.iter().find(|e| (e.phi - phi).abs() < 1e-12) {
                rows.push(PlotRow {
                    rho_median: Some(w.proxy.rho1),
                    ..row(format!("ml_phi_{phi}"), e.mu_y)
                });
            }
        }
        rows.push(row("naive".to_owned(), w.sample.mean_y));
    }
    Ok(rows)
}

pub(crate) fn plotdata(a: &PlotdataArgs, run: &mut Run) -> CmdResult<()> {
    let mut waves = Vec::new();
    for path in &a.results {
        run.input(path);
        waves.push(read_results(path)?);
    }
    let benchmark = match &a.benchmark {
        Some(path) => {
            run.input(path);
            Some(read_benchmark(path)?)
        }
        None => None,
    };
    let rows = tidy_rows(&waves, benchmark.as_ref())?;
    run.prepare_out_dir()?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        writer
            .serialize(r)
            .map_err(|e| Failure::invalid("serialization", e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::invalid("serialization", e.to_string()))?;
    run.write("plotdata.csv", bytes)?;
    if a.svg {
        run.write("plot.svg", render_svg(&rows))?;
    }
    Ok(())
}

/// Interval plot: one column per wave with the PPMM interval and median,
/// the naive respondent mean, and the benchmark as a grey line.
pub(crate) fn render_svg(rows: &[PlotRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const LEFT: f64 = 56.0;
    const RIGHT: f64 = 16.0;
    const TOP: f64 = 16.0;
    const BOTTOM: f64 = 40.0;
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.wave_label.as_str()) {
            labels.push(&r.wave_label);
        }
    }
    let step = (W - LEFT - RIGHT) / labels.len().max(1) as f64;
    let x = |i: usize| LEFT + step * (i as f64 + 0.5);
    let y = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * (H - TOP - BOTTOM);
    let find = |label: &str, est: &str| {
        rows.iter()
            .find(|r| r.wave_label == label && r.estimator == est)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" x2="{}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">{v:.2}</text>"##,
            W - RIGHT,
            LEFT - 6.0,
            y(v) + 4.0,
            y = y(v)
        );
    }
    let bench: Vec<(f64, f64)> = labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| {
            rows.iter()
                .find(|r| r.wave_label == *l)?
                .benchmark
                .map(|b| (x(i), y(b)))
        })
        .collect();
    if !bench.is_empty() {
        let points: Vec<String> = bench
            .iter()
            .map(|(a, b)| format!("{a:.1},{b:.1}"))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#888" stroke-width="2"/>"##,
            points.join(" ")
        );
    }
    for (i, label) in labels.iter().enumerate() {
        let cx = x(i);
        if let Some(r) = find(label, "ppmm") {
            if let (Some(lo), Some(hi)) = (r.ci_lower, r.ci_upper) {
                let _ = writeln!(
                    s,
                    r##"<line x1="{cx:.1}" x2="{cx:.1}" y1="{:.1}" y2="{:.1}" stroke="#1f4e99" stroke-width="3"/>"##,
                    y(lo),
                    y(hi)
                );
            }
            let _ = writeln!(
                s,
                r##"<circle cx="{cx:.1}" cy="{:.1}" r="4" fill="#1f4e99"/>"##,
                y(r.median)
            );
        }
        if let Some(r) = find(label, "naive") {
            let _ = writeln!(
                s,
                r##"<rect x="{:.1}" y="{:.1}" width="7" height="7" fill="#c0392b"/>"##,
                cx + 6.0,
                y(r.median) - 3.5
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            H - BOTTOM + 18.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
