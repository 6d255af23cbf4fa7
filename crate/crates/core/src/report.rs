//! Row-oriented results for verification commands.

use num_complex::Complex64;
use serde::Serialize;

/// One measured quantity against its reference.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub quantity: String,
    pub got: f64,
    pub want: f64,
    pub err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRow {
    /// Equality check: passes when `|got - want| ≤ tol`.
    pub fn compare(quantity: impl Into<String>, got: f64, want: f64, tol: f64) -> CheckRow {
        let err = (got - want).abs();
        CheckRow {
            quantity: quantity.into(),
            got,
            want,
            err,
            tol,
            pass: err <= tol,
        }
    }

    /// Equality check for complex quantities; the displayed values are the
    /// real parts but the error is the full complex distance.
    pub fn compare_complex(
        quantity: impl Into<String>,
        got: Complex64,
        want: Complex64,
        tol: f64,
    ) -> CheckRow {
        let err = (got - want).norm();
        CheckRow {
            quantity: quantity.into(),
            got: got.re,
            want: want.re,
            err,
            tol,
            pass: err <= tol,
        }
    }

    /// One-sided check: passes when `value ≤ limit + slack`.
    pub fn bound(quantity: impl Into<String>, value: f64, limit: f64, slack: f64) -> CheckRow {
        let err = (value - limit).max(0.0);
        CheckRow {
            quantity: quantity.into(),
            got: value,
            want: limit,
            err,
            tol: slack,
            pass: value <= limit + slack,
        }
    }
}

/// A titled collection of checks.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub rows: Vec<CheckRow>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> VerificationReport {
        VerificationReport {
            title: title.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Row with the largest err/tol ratio, for quick diagnosis.
    pub fn worst(&self) -> Option<&CheckRow> {
        self.rows.iter().max_by(|a, b| {
            let ra = a.err / a.tol.max(f64::MIN_POSITIVE);
            let rb = b.err / b.tol.max(f64::MIN_POSITIVE);
            ra.total_cmp(&rb)
        })
    }

    /// Largest err/tol ratio over all rows, 0 for an empty report.
    pub fn worst_ratio(&self) -> f64 {
        self.worst()
            .map(|r| r.err / r.tol.max(f64::MIN_POSITIVE))
            .unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_rows_classify() {
        assert!(CheckRow::compare("a", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!CheckRow::compare("a", 1.0, 1.1, 1e-8).pass);
        let c = CheckRow::compare_complex("c", Complex64::new(1.0, 1e-3), Complex64::new(1.0, 0.0), 1e-6);
        assert!(!c.pass);
        assert!((c.err - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn bound_rows_are_one_sided() {
        assert!(CheckRow::bound("b", 0.5, 1.0, 0.0).pass);
        assert!(CheckRow::bound("b", 1.0 + 1e-9, 1.0, 1e-8).pass);
        assert!(!CheckRow::bound("b", 1.1, 1.0, 1e-8).pass);
    }

    #[test]
    fn report_aggregates() {
        let mut r = VerificationReport::new("t");
        r.push(CheckRow::compare("x", 1.0, 1.0, 1e-12));
        r.push(CheckRow::compare("y", 1.0, 2.0, 1e-12));
        assert!(!r.pass());
        assert_eq!(r.worst().unwrap().quantity, "y");
    }
}
