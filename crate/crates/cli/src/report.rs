use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "check_id,paper_ref,lhs,rhs,tolerance,pass,runtime_ms";

/// One acceptance check: the measured side, the reference side, the
/// tolerance that was applied and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check_id: String,
    /// Label of the acceptance criterion the check belongs to, e.g. `AC07`.
    pub paper_ref: String,
    #[serde(with = "real")]
    pub lhs: f64,
    #[serde(with = "real")]
    pub rhs: f64,
    #[serde(with = "real")]
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl CheckRow {
    pub fn new(check_id: &str, criterion: &str, lhs: f64, rhs: f64, tolerance: f64, pass: bool) -> Self {
        Self { check_id: check_id.into(), paper_ref: criterion.into(), lhs, rhs, tolerance, pass, runtime_ms: 0 }
    }

    /// `|lhs − rhs| ≤ tolerance`.
    pub fn close(check_id: &str, criterion: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(check_id, criterion, lhs, rhs, tolerance, (lhs - rhs).abs() <= tolerance)
    }

    /// `lhs ≤ rhs + tolerance`.
    pub fn at_most(check_id: &str, criterion: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(check_id, criterion, lhs, rhs, tolerance, lhs <= rhs + tolerance)
    }

    /// `lhs < rhs`, strictly.
    pub fn below(check_id: &str, criterion: &str, lhs: f64, rhs: f64) -> Self {
        Self::new(check_id, criterion, lhs, rhs, 0.0, lhs < rhs)
    }

    /// `lhs > rhs`, strictly.
    pub fn above(check_id: &str, criterion: &str, lhs: f64, rhs: f64) -> Self {
        Self::new(check_id, criterion, lhs, rhs, 0.0, lhs > rhs)
    }

    /// A check that could not be evaluated.
    pub fn failed(check_id: &str, criterion: &str) -> Self {
        Self::new(check_id, criterion, f64::NAN, f64::NAN, f64::NAN, false)
    }

    fn csv_line(&self, with_runtime: bool) -> String {
        let runtime = if with_runtime { self.runtime_ms.to_string() } else { String::new() };
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{},{}",
            self.check_id, self.paper_ref, self.lhs, self.rhs, self.tolerance, self.pass, runtime
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn new(mut rows: Vec<CheckRow>) -> Self {
        rows.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Self { rows }
    }

    pub fn merge(reports: impl IntoIterator<Item = Report>) -> Self {
        Self::new(reports.into_iter().flat_map(|r| r.rows).collect())
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_csv(&self) -> String {
        self.render_csv(true)
    }

    /// The CSV with the runtime column left empty: the part of the report
    /// that must be reproducible.
    pub fn to_csv_without_runtime(&self) -> String {
        self.render_csv(false)
    }

    fn render_csv(&self, with_runtime: bool) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.csv_line(with_runtime));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// JSON has no NaN or infinity; non-finite values travel as strings.
mod real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(Report::default().to_csv(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_prints_seventeen_significant_digits() {
        let mut row = CheckRow::close("a.b", "AC01", 0.1, 1.0 / 3.0, 1e-9);
        row.runtime_ms = 12;
        let line = Report::new(vec![row]).to_csv().lines().nth(1).unwrap().to_string();
        assert_eq!(line, "a.b,AC01,1.0000000000000001e-1,3.3333333333333331e-1,1.0000000000000001e-9,false,12");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut rows = vec![
            CheckRow::below("x.second", "AC02", std::f64::consts::PI, 1e300),
            CheckRow::failed("x.first", "AC03"),
            CheckRow::at_most("x.third", "AC04", f64::INFINITY, 0.1 + 0.2, 5e-324),
            // Needs correctly rounded parsing; the fast path is off by an ulp.
            CheckRow::close("x.fourth", "AC05", 1.1102230246251565e-16, -3.077668795370414e-7, 1e-10),
        ];
        rows[0].runtime_ms = 99;
        let report = Report::new(rows);
        let back = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(back.to_csv(), report.to_csv());
        for (a, b) in report.rows.iter().zip(&back.rows) {
            assert!(a.lhs.to_bits() == b.lhs.to_bits() || (a.lhs.is_nan() && b.lhs.is_nan()));
            assert_eq!(a.rhs.to_bits(), b.rhs.to_bits());
            assert_eq!(a.tolerance.to_bits(), b.tolerance.to_bits());
        }
    }

    #[test]
    fn rows_are_ordered_by_check_id() {
        let r = Report::merge([
            Report::new(vec![CheckRow::below("b", "AC01", 0.0, 1.0)]),
            Report::new(vec![CheckRow::below("a", "AC01", 0.0, 1.0)]),
        ]);
        assert_eq!(r.rows[0].check_id, "a");
    }
}
