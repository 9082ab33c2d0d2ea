//! Two-group univariate populations with known per-group AUCs, and the 80/20 split.
//!
//! Within a group, negatives are drawn from N(0, 1) and positives from N(d, 1),
//! where `d` is the separation that gives the group's target AUC. Group and
//! class counts are fixed by rounding, so each replication has exactly the
//! composition its spec asks for.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{probit, RngStream};

/// Fraction of records assigned to the training partition.
pub const TRAIN_FRACTION: f64 = 0.8;

/// Demographic group tag. The majority is group 1, the minority group 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Majority = 1,
    Minority = 2,
}

/// How group membership and outcome class are assigned to records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Composition {
    /// Counts are the rounded ratios, identical in every replication.
    #[default]
    Exact,
    /// Each record flips independent coins for group and class.
    Binomial,
}

/// Ground-truth parameters of one simulated condition.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PopulationSpec {
    /// AUC of the majority group, in (0.5, 1).
    pub auc_major: f64,
    /// AUC of the minority group, in [0.5, 1).
    pub auc_minor: f64,
    /// Share of records in the minority group.
    pub minority_ratio: f64,
    /// Share of `y = 1` records within each group.
    pub positive_ratio: f64,
    pub n_total: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub composition: Composition,
}

/// Record counts for one group under [`Composition::Exact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCounts {
    pub positives: usize,
    pub negatives: usize,
}

impl GroupCounts {
    pub fn total(&self) -> usize {
        self.positives + self.negatives
    }
}

impl PopulationSpec {
    /// Balanced groups and classes with a majority AUC of 0.8.
    pub fn balanced(n_total: usize, auc_minor: f64) -> Self {
        Self {
            auc_major: 0.8,
            auc_minor,
            minority_ratio: 0.5,
            positive_ratio: 0.5,
            n_total,
            composition: Composition::Exact,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |field, value: f64| {
            if value > 0.0 && value < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpec {
                    field,
                    constraint: "must lie strictly inside (0, 1)",
                    value,
                })
            }
        };
        if !(self.auc_major > 0.5 && self.auc_major < 1.0) {
            return Err(Error::InvalidSpec {
                field: "auc_major",
                constraint: "must lie in (0.5, 1)",
                value: self.auc_major,
            });
        }
        if !(self.auc_minor >= 0.5 && self.auc_minor < 1.0) {
            return Err(Error::InvalidSpec {
                field: "auc_minor",
                constraint: "must lie in [0.5, 1)",
                value: self.auc_minor,
            });
        }
        open_unit("minority_ratio", self.minority_ratio)?;
        open_unit("positive_ratio", self.positive_ratio)?;
        if self.n_total < 10 {
            return Err(Error::InvalidSpec {
                field: "n_total",
                constraint: "must be at least 10",
                value: self.n_total as f64,
            });
        }
        if self.composition == Composition::Exact {
            self.group_counts()?;
        }
        Ok(())
    }

    /// Separation `d` of the majority group.
    pub fn d_major(&self) -> Result<f64> {
        d_from_auc(self.auc_major)
    }

    /// Separation `d` of the minority group.
    pub fn d_minor(&self) -> Result<f64> {
        d_from_auc(self.auc_minor)
    }

    /// Exact per-group counts `[majority, minority]`.
    ///
    /// Minority size is `round(minority_ratio * n_total)` and each group's
    /// positive count is `round(positive_ratio * group_size)`, ties away from zero.
    pub fn group_counts(&self) -> Result<[GroupCounts; 2]> {
        let n_minor = libm::round(self.minority_ratio * self.n_total as f64) as usize;
        let n_major = self.n_total.saturating_sub(n_minor);
        let mut out = [GroupCounts {
            positives: 0,
            negatives: 0,
        }; 2];
        for (slot, (name, size)) in out
            .iter_mut()
            .zip([("majority", n_major), ("minority", n_minor)])
        {
            if size == 0 {
                return Err(Error::DegenerateSpec(format!(
                    "{name} group rounds to 0 records"
                )));
            }
            let positives = libm::round(self.positive_ratio * size as f64) as usize;
            let negatives = size - positives.min(size);
            if positives == 0 || negatives == 0 {
                return Err(Error::DegenerateSpec(format!(
                    "{name} group of {size} records rounds to {positives} positives and {negatives} negatives"
                )));
            }
            *slot = GroupCounts {
                positives,
                negatives,
            };
        }
        Ok(out)
    }

    /// Size of the held-out partition, `n_total - round(0.8 n_total)`.
    pub fn n_test(&self) -> usize {
        self.n_total - train_size(self.n_total)
    }
}

fn train_size(n: usize) -> usize {
    libm::round(TRAIN_FRACTION * n as f64) as usize
}

/// Cohen's d between two unit-variance normals whose two-sample AUC is `auc`:
/// `d = sqrt(2) * probit(auc)`.
pub fn d_from_auc(auc: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&auc) {
        return Err(Error::domain(
            "d_from_auc",
            format!("auc must lie in [0.5, 1), got {auc}"),
        ));
    }
    Ok(SQRT_2 * probit(auc)?)
}

/// Labeled univariate records with group tags, stored column-wise.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub x: Vec<f64>,
    pub y: Vec<bool>,
    pub group: Vec<Group>,
}

impl Dataset {
    pub fn new(x: Vec<f64>, y: Vec<bool>, group: Vec<Group>) -> Result<Self> {
        if x.len() != y.len() || x.len() != group.len() {
            return Err(Error::domain(
                "Dataset::new",
                format!(
                    "column lengths differ: x {}, y {}, group {}",
                    x.len(),
                    y.len(),
                    group.len()
                ),
            ));
        }
        Ok(Self { x, y, group })
    }

    fn with_capacity(n: usize) -> Self {
        Self {
            x: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            group: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, x: f64, y: bool, group: Group) {
        self.x.push(x);
        self.y.push(y);
        self.group.push(group);
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Records at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut out = Dataset::with_capacity(indices.len());
        for &i in indices {
            out.push(self.x[i], self.y[i], self.group[i]);
        }
        out
    }

    /// `(x, y)` columns of one group.
    pub fn group_columns(&self, group: Group) -> (Vec<f64>, Vec<bool>) {
        self.group
            .iter()
            .zip(self.x.iter().zip(&self.y))
            .filter(|(g, _)| **g == group)
            .map(|(_, (x, y))| (*x, *y))
            .unzip()
    }

    /// `(positives, negatives)` within one group.
    pub fn class_counts(&self, group: Group) -> (usize, usize) {
        self.group
            .iter()
            .zip(&self.y)
            .filter(|(g, _)| **g == group)
            .fold(
                (0, 0),
                |(p, n), (_, &y)| if y { (p + 1, n) } else { (p, n + 1) },
            )
    }
}

/// Train/test partition of a generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset {
    pub train: Dataset,
    pub test: Dataset,
}

/// Draws one dataset for `spec`.
///
/// Records are laid out group by group, positives first; [`split`] shuffles them.
pub fn generate(spec: &PopulationSpec, rng: &mut RngStream) -> Result<Dataset> {
    spec.validate()?;
    let d = [spec.d_major()?, spec.d_minor()?];
    match spec.composition {
        Composition::Exact => {
            let counts = spec.group_counts()?;
            let mut data = Dataset::with_capacity(spec.n_total);
            for ((group, counts), d) in [Group::Majority, Group::Minority]
                .into_iter()
                .zip(counts)
                .zip(d)
            {
                for _ in 0..counts.positives {
                    data.push(d + rng.standard_normal(), true, group);
                }
                for _ in 0..counts.negatives {
                    data.push(rng.standard_normal(), false, group);
                }
            }
            Ok(data)
        }
        Composition::Binomial => {
            let mut data = Dataset::with_capacity(spec.n_total);
            for _ in 0..spec.n_total {
                let (group, d) = if rng.random_bool(spec.minority_ratio) {
                    (Group::Minority, d[1])
                } else {
                    (Group::Majority, d[0])
                };
                let y = rng.random_bool(spec.positive_ratio);
                let shift = if y { d } else { 0.0 };
                data.push(shift + rng.standard_normal(), y, group);
            }
            for group in [Group::Majority, Group::Minority] {
                if !data.group.contains(&group) {
                    return Err(Error::DegenerateSpec(format!(
                        "no {group:?} records were drawn"
                    )));
                }
            }
            Ok(data)
        }
    }
}

/// Uniformly random 80/20 partition; `|train| = round(0.8 n)`.
pub fn split(data: &Dataset, rng: &mut RngStream) -> Result<SplitDataset> {
    let n = data.len();
    if n < 10 {
        return Err(Error::domain(
            "split",
            format!("need at least 10 records, got {n}"),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let (train, test) = order.split_at(train_size(n));
    Ok(SplitDataset {
        train: data.subset(train),
        test: data.subset(test),
    })
}
