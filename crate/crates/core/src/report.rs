//! Comparison rows shared by the CLI and the reproduction matrix.

use crate::rational::{self, Rational};

/// One scenario compared against its closed form. Rationals render as
/// `num/den` plus a 6-place decimal; comparisons use the exact values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportRow {
    pub scenario: String,
    pub params: String,
    pub constructed: Option<Rational>,
    pub closed: Option<Rational>,
    pub alpha: Option<u64>,
    pub achievable: Option<u64>,
    pub verdict: Option<String>,
}

pub const CSV_HEADER: &str =
    "scenario,params,constructed,constructed_dec,closed,closed_dec,gap,gap_dec,alpha,achievable,verdict";

fn exact(x: &Option<Rational>) -> String {
    x.as_ref().map(rational::format_exact).unwrap_or_default()
}

fn decimal(x: &Option<Rational>) -> String {
    x.as_ref().map(|v| rational::format_decimal(v, 6)).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ReportRow {
    /// `constructed − closed`, when both are known.
    pub fn gap(&self) -> Option<Rational> {
        match (&self.constructed, &self.closed) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let gap = self.gap();
        [
            csv_field(&self.scenario),
            csv_field(&self.params),
            exact(&self.constructed),
            decimal(&self.constructed),
            exact(&self.closed),
            decimal(&self.closed),
            exact(&gap),
            decimal(&gap),
            self.alpha.map(|a| a.to_string()).unwrap_or_default(),
            self.achievable.map(|a| a.to_string()).unwrap_or_default(),
            csv_field(self.verdict.as_deref().unwrap_or("")),
        ]
        .join(",")
    }

    /// `key: value` lines, skipping unknown fields.
    pub fn to_text(&self) -> String {
        let mut out = format!("scenario: {}\nparams: {}\n", self.scenario, self.params);
        let mut line = |k: &str, v: &Option<Rational>| {
            if let Some(v) = v {
                out.push_str(&format!("{k}: {}\n", rational::display(v)));
            }
        };
        line("constructed bound", &self.constructed);
        line("closed form", &self.closed);
        line("gap", &self.gap());
        if let Some(a) = self.alpha {
            out.push_str(&format!("alpha: {a}\n"));
        }
        if let Some(a) = self.achievable {
            out.push_str(&format!("achievable load: {a}\n"));
        }
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn csv_row() {
        let row = ReportRow {
            scenario: "caching".into(),
            params: "K=4 N=4 M=1 F=4".into(),
            constructed: Some(int(6)),
            closed: Some(int(6)),
            ..ReportRow::default()
        };
        assert_eq!(row.to_csv(), "caching,K=4 N=4 M=1 F=4,6,6.000000,6,6.000000,0,0.000000,,,");
        assert_eq!(CSV_HEADER.split(',').count(), row.to_csv().split(',').count());
    }

    #[test]
    fn text_row() {
        let row = ReportRow {
            scenario: "x".into(),
            params: "a, b".into(),
            constructed: Some(ratio(5, 2)),
            closed: Some(int(2)),
            verdict: Some("note, here".into()),
            ..ReportRow::default()
        };
        let text = row.to_text();
        assert!(text.contains("gap: 1/2 (0.500000)"));
        assert!(row.to_csv().starts_with("x,\"a, b\",5/2,2.500000"));
        assert!(row.to_csv().ends_with(",\"note, here\""));
    }
}
