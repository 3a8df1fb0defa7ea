use serde::{Deserialize, Serialize};

use crate::report::{fmt_num, Check, ExperimentReport};

/// Relative floating-point allowance when comparing the two sides of a
/// constant-free inequality that may hold with equality.
pub const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `lhs ≤ rhs` must hold at every point.
    ConstantFree,
    /// `lhs ≤ C·rhs` with an unspecified absolute `C`; the report carries
    /// the empirical constant `max lhs/rhs`.
    EmpiricalConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub at: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub grid: String,
    pub coordinates: Vec<String>,
    pub kind: BoundKind,
    pub evaluated: usize,
    pub skipped: usize,
    pub violations: usize,
    pub worst_point: Option<BoundPoint>,
    pub empirical_constant: Option<f64>,
    pub rounding_slack: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<BoundPoint>,
    #[serde(skip)]
    keep_points: bool,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        grid: impl Into<String>,
        coordinates: &[&str],
        kind: BoundKind,
    ) -> Self {
        Self {
            name: name.into(),
            grid: grid.into(),
            coordinates: coordinates.iter().map(|s| s.to_string()).collect(),
            kind,
            evaluated: 0,
            skipped: 0,
            violations: 0,
            worst_point: None,
            empirical_constant: None,
            rounding_slack: ROUNDING_SLACK,
            pass: true,
            points: Vec::new(),
            keep_points: false,
        }
    }

    /// Retain every evaluated point (for CSV output).
    pub fn keep_points(mut self) -> Self {
        self.keep_points = true;
        self
    }

    pub fn record(&mut self, at: Vec<f64>, lhs: f64, rhs: f64) {
        let point = BoundPoint {
            at,
            lhs,
            rhs,
            margin: rhs - lhs,
        };
        self.evaluated += 1;
        match self.kind {
            BoundKind::ConstantFree => {
                let scale = lhs.abs().max(rhs.abs());
                if !(lhs <= rhs + ROUNDING_SLACK * scale) {
                    self.violations += 1;
                }
                let worse = self
                    .worst_point
                    .as_ref()
                    .is_none_or(|w| point.margin < w.margin);
                if worse {
                    self.worst_point = Some(point.clone());
                }
            }
            BoundKind::EmpiricalConstant => {
                let ratio = lhs / rhs;
                let worse = self.empirical_constant.is_none_or(|c| ratio > c);
                if worse {
                    self.empirical_constant = Some(ratio);
                    self.worst_point = Some(point.clone());
                }
            }
        }
        if self.keep_points {
            self.points.push(point);
        }
        self.refresh();
    }

    /// A grid point outside the inequality's hypotheses.
    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Associative merge of two reports over disjoint grid cells.
    pub fn merge(mut self, other: BoundReport) -> Self {
        self.evaluated += other.evaluated;
        self.skipped += other.skipped;
        self.violations += other.violations;
        let take_other = match (self.kind, &self.worst_point, &other.worst_point) {
            (_, _, None) => false,
            (_, None, Some(_)) => true,
            (BoundKind::ConstantFree, Some(a), Some(b)) => b.margin < a.margin,
            (BoundKind::EmpiricalConstant, Some(_), Some(_)) => {
                other.empirical_constant > self.empirical_constant
            }
        };
        if take_other {
            self.worst_point = other.worst_point;
            if self.kind == BoundKind::EmpiricalConstant {
                self.empirical_constant = other.empirical_constant;
            }
        }
        self.points.extend(other.points);
        self.refresh();
        self
    }

    fn refresh(&mut self) {
        self.pass = match self.kind {
            BoundKind::ConstantFree => self.violations == 0,
            BoundKind::EmpiricalConstant => self.empirical_constant.is_none_or(f64::is_finite),
        };
    }

    pub fn csv_header(&self) -> String {
        let mut cols = self.coordinates.clone();
        cols.extend(["lhs", "rhs", "margin"].map(String::from));
        cols.join(",")
    }

    /// One CSV row per retained point.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for p in &self.points {
            let row: Vec<String> = p
                .at
                .iter()
                .chain([p.lhs, p.rhs, p.margin].iter())
                .map(|v| fmt_num(*v))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// One experiment record holding several bound reports, one check each.
///
/// Constant-free reports check the violation count; empirical-constant
/// reports check that the constant is finite.
pub fn bounds_experiment(experiment: &str, reports: &[BoundReport]) -> ExperimentReport {
    let mut out = ExperimentReport::new(experiment);
    for r in reports {
        out.set_output(&r.name, r);
        let check = match r.kind {
            BoundKind::ConstantFree => Check::flag(r.name.clone(), r.violations as f64, 0.0, r.pass),
            BoundKind::EmpiricalConstant => Check::flag(
                r.name.clone(),
                r.empirical_constant.unwrap_or(0.0),
                0.0,
                r.pass,
            ),
        };
        out.check(check);
    }
    let grids: Vec<&str> = reports.iter().map(|r| r.grid.as_str()).collect();
    out.with_grid(grids.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_free_tracks_worst_margin() {
        let mut r = BoundReport::new("t", "g", &["x"], BoundKind::ConstantFree);
        r.record(vec![0.0], 1.0, 1.0);
        r.record(vec![1.0], 0.5, 2.0);
        assert!(r.pass);
        assert_eq!(r.worst_point.as_ref().unwrap().at, vec![0.0]);
        r.record(vec![2.0], 3.0, 2.0);
        assert!(!r.pass);
        assert_eq!(r.violations, 1);
    }

    #[test]
    fn rounding_slack_tolerates_ulps() {
        let mut r = BoundReport::new("t", "g", &["x"], BoundKind::ConstantFree);
        r.record(vec![0.0], 1.0 + f64::EPSILON, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn merge_is_associative_on_summaries() {
        let mk = |vals: &[(f64, f64)]| {
            let mut r = BoundReport::new("c", "g", &["i"], BoundKind::EmpiricalConstant);
            for (i, (l, h)) in vals.iter().enumerate() {
                r.record(vec![i as f64], *l, *h);
            }
            r
        };
        let a = mk(&[(1.0, 2.0)]);
        let b = mk(&[(3.0, 2.0), (0.1, 1.0)]);
        let c = mk(&[(2.0, 1.0)]);
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left.empirical_constant, right.empirical_constant);
        assert_eq!(left.evaluated, right.evaluated);
        assert_eq!(left.empirical_constant, Some(2.0));
    }

    #[test]
    fn csv_rows() {
        let mut r = BoundReport::new("t", "g", &["x", "y"], BoundKind::ConstantFree).keep_points();
        r.record(vec![1.0, 2.0], 0.25, 0.5);
        assert_eq!(r.to_csv(), "x,y,lhs,rhs,margin\n1,2,0.25,0.5,0.25\n");
    }
}
