//! ROC curves, trapezoidal AUC, and the absolute area between two curves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A monotone ROC polyline from `(0, 0)` to `(1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// `(fpr, tpr)` vertices, starting at `(0, 0)`.
    pub points: Vec<(f64, f64)>,
    /// Score threshold reached at `points[i + 1]`, descending.
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

/// Builds the ROC curve by sweeping thresholds over the distinct scores in
/// descending order. Tied scores move as one step, which produces a diagonal
/// segment when the tie mixes classes.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::domain(
            "roc_curve",
            format!("{} scores but {} labels", scores.len(), labels.len()),
        ));
    }
    let positives = labels.iter().filter(|&&y| y).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateGroup(format!(
            "{positives} positives and {negatives} negatives"
        )));
    }

    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::domain("roc_curve", "scores must not be NaN"));
    }

    let mut ranked: Vec<(f64, bool)> = scores.iter().copied().zip(labels.iter().copied()).collect();
    // numeric order, so -0.0 and 0.0 tie
    ranked.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).expect("no NaN"));

    let (p, n) = (positives as f64, negatives as f64);
    let mut points = Vec::with_capacity(ranked.len() + 1);
    let mut thresholds = Vec::with_capacity(ranked.len());
    points.push((0.0, 0.0));
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < ranked.len() {
        let threshold = ranked[i].0;
        while i < ranked.len() && ranked[i].0 == threshold {
            if ranked[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / n, tp as f64 / p));
        thresholds.push(threshold);
    }

    let mut curve = RocCurve {
        points,
        thresholds,
        auc: 0.0,
    };
    curve.auc = auc(&curve);
    Ok(curve)
}

/// Trapezoidal area under the polyline.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * 0.5)
        .sum()
}

/// How the area between two curves is integrated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "String", into = "String"))]
pub enum AbrocaMethod {
    /// Exact integral over the merged breakpoints, split at sign changes.
    #[default]
    Exact,
    /// Trapezoid rule on a uniform grid of this many FPR points, for
    /// comparison with grid-interpolating implementations.
    Grid(usize),
}

pub const DEFAULT_GRID_POINTS: usize = 10_000;

impl fmt::Display for AbrocaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbrocaMethod::Exact => f.write_str("exact"),
            AbrocaMethod::Grid(n) => write!(f, "grid:{n}"),
        }
    }
}

impl FromStr for AbrocaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::domain(
                "abroca method",
                format!("expected `exact`, `grid` or `grid:N` with N >= 2, got `{s}`"),
            )
        };
        match s {
            "exact" => Ok(AbrocaMethod::Exact),
            "grid" => Ok(AbrocaMethod::Grid(DEFAULT_GRID_POINTS)),
            _ => {
                let n: usize = s
                    .strip_prefix("grid:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                Ok(AbrocaMethod::Grid(n))
            }
        }
    }
}

impl TryFrom<String> for AbrocaMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AbrocaMethod> for String {
    fn from(m: AbrocaMethod) -> String {
        format!("{m}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbrocaResult {
    pub abroca: f64,
    pub auc_group1: f64,
    pub auc_group2: f64,
    /// `|auc_group1 - auc_group2|`.
    pub abs_auc_diff: f64,
}

/// Non-vertical pieces of a curve: `(f0, t0, f1, t1)` with `f0 < f1`.
///
/// Vertical runs (equal FPR) have zero width; the piece entering an FPR value
/// ends at the lowest TPR there and the piece leaving starts at the highest.
fn segments(curve: &RocCurve) -> Vec<(f64, f64, f64, f64)> {
    curve
        .points
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| (w[0].0, w[0].1, w[1].0, w[1].1))
        .collect()
}

fn along(seg: (f64, f64, f64, f64), f: f64) -> f64 {
    let (f0, t0, f1, t1) = seg;
    if f == f0 {
        t0
    } else if f == f1 {
        t1
    } else {
        t0 + (t1 - t0) * (f - f0) / (f1 - f0)
    }
}

/// Area of `|d|` over a width-`w` interval where `d` runs linearly from `da` to `db`.
fn abs_linear_area(w: f64, da: f64, db: f64) -> f64 {
    if da == 0.0 && db == 0.0 {
        0.0
    } else if (da >= 0.0) == (db >= 0.0) || da == 0.0 || db == 0.0 {
        0.5 * w * (da.abs() + db.abs())
    } else {
        // the two triangles either side of the crossing
        0.5 * w * (da * da + db * db) / (da.abs() + db.abs())
    }
}

fn exact_area(c1: &RocCurve, c2: &RocCurve) -> f64 {
    let s1 = segments(c1);
    let s2 = segments(c2);
    let mut breaks: Vec<f64> = s1.iter().chain(&s2).flat_map(|s| [s.0, s.2]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let (mut i, mut j) = (0, 0);
    let mut area = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        while s1[i].2 <= a {
            i += 1;
        }
        while s2[j].2 <= a {
            j += 1;
        }
        let da = along(s1[i], a) - along(s2[j], a);
        let db = along(s1[i], b) - along(s2[j], b);
        area += abs_linear_area(b - a, da, db);
    }
    area
}

fn tpr_at(segs: &[(f64, f64, f64, f64)], f: f64) -> f64 {
    let k = segs.partition_point(|s| s.2 <= f).min(segs.len() - 1);
    along(segs[k], f)
}

fn grid_area(c1: &RocCurve, c2: &RocCurve, n: usize) -> f64 {
    let s1 = segments(c1);
    let s2 = segments(c2);
    let step = 1.0 / (n - 1) as f64;
    let diff = |k: usize| {
        let f = if k == n - 1 { 1.0 } else { k as f64 * step };
        (tpr_at(&s1, f) - tpr_at(&s2, f)).abs()
    };
    let mut prev = diff(0);
    let mut area = 0.0;
    for k in 1..n {
        let cur = diff(k);
        area += 0.5 * step * (prev + cur);
        prev = cur;
    }
    area
}

/// ABROCA: the integral over FPR of `|tpr1(f) - tpr2(f)|`, each curve linearly
/// interpolated, computed exactly.
pub fn abroca(c1: &RocCurve, c2: &RocCurve) -> AbrocaResult {
    abroca_with(c1, c2, AbrocaMethod::Exact)
}

pub fn abroca_with(c1: &RocCurve, c2: &RocCurve, method: AbrocaMethod) -> AbrocaResult {
    let area = match method {
        AbrocaMethod::Exact => exact_area(c1, c2),
        AbrocaMethod::Grid(n) => grid_area(c1, c2, n.max(2)),
    };
    AbrocaResult {
        abroca: area,
        auc_group1: c1.auc,
        auc_group2: c2.auc,
        abs_auc_diff: (c1.auc - c2.auc).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn curve(scores: &[f64], labels: &[u8]) -> RocCurve {
        let labels: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        roc_curve(scores, &labels).unwrap()
    }

    #[test]
    fn perfect_separation() {
        let c = curve(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0]);
        assert_eq!(
            c.points,
            vec![(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]
        );
        assert_eq!(c.thresholds, vec![0.9, 0.8, 0.2, 0.1]);
        assert_eq!(c.auc, 1.0);
    }

    #[test]
    fn all_tied_gives_diagonal() {
        let c = curve(&[0.3; 6], &[1, 0, 1, 0, 0, 1]);
        assert_eq!(c.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(c.auc, 0.5);
    }

    #[test]
    fn signed_zeros_tie() {
        let c = curve(&[-0.0, 0.0, 1.0, -1.0], &[1, 0, 1, 0]);
        assert_eq!(c.points.len(), 4);
        assert_eq!(c.auc, 0.875);
        assert!(roc_curve(&[0.1, f64::NAN], &[true, false]).is_err());
    }

    #[test]
    fn pair_counting_example() {
        let c = curve(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]);
        assert!((c.auc - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_class_is_degenerate() {
        assert!(matches!(
            roc_curve(&[0.1, 0.2], &[true, true]),
            Err(Error::DegenerateGroup(_))
        ));
        assert!(roc_curve(&[0.1], &[true, false]).is_err());
    }

    #[test]
    fn abroca_examples() {
        let perfect = curve(&[0.9, 0.8, 0.1, 0.2], &[1, 1, 0, 0]);
        let diagonal = curve(&[0.5; 4], &[1, 1, 0, 0]);
        assert_eq!(abroca(&perfect, &perfect).abroca, 0.0);
        assert!((abroca(&diagonal, &perfect).abroca - 0.5).abs() < 1e-15);

        let b = curve(&[0.6, 0.3, 0.5, 0.4], &[1, 1, 0, 0]);
        let r = abroca(&perfect, &b);
        assert_eq!(r.auc_group1, 1.0);
        assert!((r.auc_group2 - 0.5).abs() < 1e-15);
        assert!((r.abroca - 0.5).abs() < 1e-15);
        assert!((r.abs_auc_diff - 0.5).abs() < 1e-15);
    }

    #[test]
    fn crossing_curves_count_both_lobes() {
        // c1 is above c2 until f = 0.7, below it afterwards
        let c1 = RocCurve {
            points: vec![(0.0, 0.0), (0.5, 0.75), (1.0, 1.0)],
            thresholds: vec![0.8, 0.2],
            auc: 0.0,
        };
        let c2 = RocCurve {
            points: vec![(0.0, 0.0), (0.5, 0.25), (0.75, 1.0), (1.0, 1.0)],
            thresholds: vec![0.8, 0.5, 0.2],
            auc: 0.0,
        };
        // 0.125 + 0.05 before the crossing, 0.003125 + 0.015625 after it
        assert!((exact_area(&c1, &c2) - 0.19375).abs() < 1e-15);
        assert!((exact_area(&c2, &c1) - 0.19375).abs() < 1e-15);

        let c3 = RocCurve {
            points: vec![(0.0, 0.0), (0.25, 0.5), (0.5, 0.5), (1.0, 1.0)],
            thresholds: vec![0.9, 0.5, 0.1],
            auc: 0.0,
        };
        let diag = RocCurve {
            points: vec![(0.0, 0.0), (1.0, 1.0)],
            thresholds: vec![0.5],
            auc: 0.0,
        };
        // d = f on [0, .25], .5 - f on [.25, .5], 0 after: two triangles of area 1/32 each
        assert!((exact_area(&c3, &diag) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn grid_mode_approaches_exact() {
        let a = curve(&[0.9, 0.7, 0.65, 0.3, 0.2, 0.1], &[1, 0, 1, 1, 0, 0]);
        let b = curve(&[0.6, 0.55, 0.5, 0.45, 0.4, 0.35], &[0, 1, 1, 0, 1, 0]);
        let exact = abroca(&a, &b).abroca;
        let grid = abroca_with(&a, &b, AbrocaMethod::Grid(DEFAULT_GRID_POINTS)).abroca;
        assert!((exact - grid).abs() < 1e-3, "{exact} vs {grid}");
    }

    #[test]
    fn method_parsing() {
        assert_eq!(
            "exact".parse::<AbrocaMethod>().unwrap(),
            AbrocaMethod::Exact
        );
        assert_eq!(
            "grid".parse::<AbrocaMethod>().unwrap(),
            AbrocaMethod::Grid(10_000)
        );
        assert_eq!(
            "grid:250".parse::<AbrocaMethod>().unwrap(),
            AbrocaMethod::Grid(250)
        );
        assert!("grid:1".parse::<AbrocaMethod>().is_err());
        assert!("spline".parse::<AbrocaMethod>().is_err());
        assert_eq!(String::from(AbrocaMethod::Grid(7)), "grid:7");
    }
}
