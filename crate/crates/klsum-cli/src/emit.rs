//! Artifact rendering: CSV for sweep series, JSON records for
//! everything else, and the machine-readable error record.
//!
//! Byte determinism: floats are printed with `{:.16e}` (17 significant
//! digits — `f64` round-trips exactly), JSON objects use declaration
//! field order, and series rows are emitted in the sweep's fixed
//! ascending-modulus order.  Re-running a fixed config therefore
//! reproduces artifacts byte for byte, warm cache or cold.

use serde::Serialize;

use klsum::exact::ExactFormulaResult;
use klsum::kloosterman::{BesselTail, KloostermanValue, PartialSumSeries, WindowedAverage};
use klsum::quad::QuadValue;
use klsum::verify::CriterionReport;
use klsum::Error;
use num_complex::Complex64;

use crate::config::ExperimentConfig;

/// A complex value in JSON record form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> ComplexJson {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// The CSV rendering of a partial-sum series: fixed header
/// `c,s_re,s_im,run_re,run_im`, one row per series row, `{:.16e}`
/// floats.  An empty series renders as the header alone.
pub fn series_csv(series: &PartialSumSeries) -> String {
    let mut out = String::from("c,s_re,s_im,run_re,run_im\n");
    for row in &series.rows {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            row.c, row.s_value.re, row.s_value.im, row.running_sum.re, row.running_sum.im
        ));
    }
    out
}

#[derive(Serialize)]
struct SumRecord<'a> {
    config: &'a ExperimentConfig,
    value: ComplexJson,
    term_count: u64,
    skipped: u64,
}

/// JSON record for one evaluated sum.
pub fn sum_record(config: &ExperimentConfig, value: &KloostermanValue) -> String {
    pretty(&SumRecord {
        config,
        value: value.value.into(),
        term_count: value.term_count,
        skipped: value.skipped,
    })
}

#[derive(Serialize)]
struct WindowRecord<'a> {
    config: &'a ExperimentConfig,
    total: f64,
    ratio: f64,
    window_terms: u64,
}

/// JSON record for a windowed average.
pub fn window_record(config: &ExperimentConfig, avg: &WindowedAverage) -> String {
    pretty(&WindowRecord {
        config,
        total: avg.total,
        ratio: avg.ratio,
        window_terms: avg.window_terms,
    })
}

#[derive(Serialize)]
struct TailRecord<'a> {
    config: &'a ExperimentConfig,
    value: ComplexJson,
    last_decade: ComplexJson,
    terms: u64,
}

/// JSON record for a Bessel-weighted tail sum.
pub fn tail_record(config: &ExperimentConfig, tail: &BesselTail) -> String {
    pretty(&TailRecord {
        config,
        value: tail.value.into(),
        last_decade: tail.last_decade.into(),
        terms: tail.terms,
    })
}

#[derive(Serialize)]
struct ExactRecord<'a> {
    config: &'a ExperimentConfig,
    n: u64,
    cutoff: u64,
    value: f64,
    im_diagnostic: f64,
    nearest_int: i64,
    distance: f64,
    last_decade_mass: f64,
}

/// JSON record for one exact-formula truncation.
pub fn exact_record(config: &ExperimentConfig, r: &ExactFormulaResult) -> String {
    pretty(&ExactRecord {
        config,
        n: r.n,
        cutoff: r.cutoff,
        value: r.value,
        im_diagnostic: r.im_diagnostic,
        nearest_int: r.nearest_int,
        distance: r.distance,
        last_decade_mass: r.last_decade_mass,
    })
}

#[derive(Serialize)]
struct PhiRecord<'a> {
    config: &'a ExperimentConfig,
    value: ComplexJson,
    error_bound: f64,
}

/// JSON record for one integral-transform evaluation.
pub fn phi_record(config: &ExperimentConfig, q: &QuadValue) -> String {
    pretty(&PhiRecord {
        config,
        value: q.value.into(),
        error_bound: q.error_bound,
    })
}

#[derive(Serialize)]
struct VerifyRecordRow<'a> {
    id: u8,
    name: &'a str,
    passed: bool,
    details: &'a str,
    elapsed_s: f64,
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    config: &'a ExperimentConfig,
    passed: bool,
    criteria: Vec<VerifyRecordRow<'a>>,
}

/// JSON record for a verification run (the human-readable table goes to
/// stdout separately).
pub fn verify_record(config: &ExperimentConfig, reports: &[CriterionReport]) -> String {
    pretty(&VerifyRecord {
        config,
        passed: reports.iter().all(|r| r.passed),
        criteria: reports
            .iter()
            .map(|r| VerifyRecordRow {
                id: r.id,
                name: r.name,
                passed: r.passed,
                details: &r.details,
                elapsed_s: r.elapsed.as_secs_f64(),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<&'a str>,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: ErrorBody<'a>,
}

/// Machine-readable error record (one line, for stderr) plus the exit
/// status the error maps to: invalid input 2, numeric regime 3, cache
/// corruption 4, I/O 1.
pub fn error_record(err: &Error) -> (String, i32) {
    let (kind, line, path, code) = match err {
        Error::InvalidInput(_) => ("invalid-config", None, None, 2),
        Error::Regime(_) => ("numeric-regime", None, None, 3),
        Error::CacheCorrupt { path, line, .. } => {
            ("cache-corrupt", Some(*line), Some(path.as_str()), 4)
        }
        Error::Io(_) => ("io", None, None, 1),
    };
    let record = ErrorRecord {
        error: ErrorBody {
            kind,
            message: err.to_string(),
            line,
            path,
        },
    };
    (
        serde_json::to_string(&record).expect("error serialization cannot fail"),
        code,
    )
}

fn pretty(value: &impl Serialize) -> String {
    let mut text =
        serde_json::to_string_pretty(value).expect("record serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use klsum::kloosterman::{partial_sums, SamplePlan};
    use klsum::multiplier::MultiplierSpec;

    #[test]
    fn csv_has_header_and_one_row_per_series_row() {
        let nu = MultiplierSpec::trivial();
        let series = partial_sums(&nu, 1, 1, 10, SamplePlan::All).unwrap();
        let csv = series_csv(&series);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "c,s_re,s_im,run_re,run_im");
        assert_eq!(lines.len(), 1 + series.rows.len());
        assert!(lines[1].starts_with("1,"));
    }

    #[test]
    fn empty_series_renders_header_only() {
        let nu = MultiplierSpec::eta(3).unwrap();
        let series = partial_sums(&nu, 0, 1, 2, SamplePlan::All).unwrap();
        assert!(series.rows.is_empty());
        assert_eq!(series_csv(&series), "c,s_re,s_im,run_re,run_im\n");
    }

    #[test]
    fn csv_floats_round_trip_exactly() {
        let nu = MultiplierSpec::eta(3).unwrap().twisted(3).unwrap().conjugated();
        let series = partial_sums(&nu, 0, 1, 30, SamplePlan::All).unwrap();
        let csv = series_csv(&series);
        for (line, row) in csv.lines().skip(1).zip(&series.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 5);
            assert_eq!(fields[0].parse::<u64>().unwrap(), row.c);
            assert_eq!(fields[1].parse::<f64>().unwrap(), row.s_value.re);
            assert_eq!(fields[2].parse::<f64>().unwrap(), row.s_value.im);
            assert_eq!(fields[3].parse::<f64>().unwrap(), row.running_sum.re);
            assert_eq!(fields[4].parse::<f64>().unwrap(), row.running_sum.im);
        }
    }

    #[test]
    fn error_records_carry_exit_codes_and_line_numbers() {
        let (rec, code) = error_record(&Error::InvalidInput("bad flag".into()));
        assert_eq!(code, 2);
        assert!(rec.contains("\"invalid-config\""));

        let (rec, code) = error_record(&Error::Regime("order too large".into()));
        assert_eq!(code, 3);
        assert!(rec.contains("\"numeric-regime\""));

        let (rec, code) = error_record(&Error::CacheCorrupt {
            path: "/tmp/x.csv".into(),
            line: 17,
            detail: "wrong field count".into(),
        });
        assert_eq!(code, 4);
        assert!(rec.contains("\"line\":17"));
    }

    #[test]
    fn records_embed_the_config() {
        let mut cfg = ExperimentConfig::default();
        cfg.command = "exact".into();
        let r = ExactFormulaResult {
            n: 5,
            cutoff: 100,
            value: 1.99,
            im_diagnostic: 1e-9,
            nearest_int: 2,
            distance: 0.01,
            last_decade_mass: 0.1,
        };
        let text = exact_record(&cfg, &r);
        assert!(text.contains("\"command\": \"exact\""));
        assert!(text.contains("\"nearest_int\": 2"));
    }
}
