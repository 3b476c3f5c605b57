//! Non-negative extended-real costs and the recursive cost schemes built on them.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// A non-negative cost that may be `+∞`.
///
/// Addition saturates at infinity and comparisons are total, so `Cost` can be
/// used directly as a sort key. Values built through [`Cost::new`] are never
/// negative and never NaN.
#[derive(Clone, Copy, Default, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct Cost(f64);

impl Cost {
    pub const ZERO: Cost = Cost(0.0);
    pub const ONE: Cost = Cost(1.0);
    pub const INFINITY: Cost = Cost(f64::INFINITY);

    /// Returns `None` for negative or NaN input.
    pub fn new(value: f64) -> Option<Cost> {
        if value >= 0.0 {
            // `+ 0.0` folds -0.0 into 0.0 so the total order stays intuitive.
            Some(Cost(value + 0.0))
        } else {
            None
        }
    }

    /// Wraps a raw value without checking it. Only invalid graphs built with
    /// [`crate::graph::GraphBuilder::build_unchecked`] carry such values.
    pub(crate) fn from_raw(value: f64) -> Cost {
        Cost(value + 0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub(crate) fn is_valid(self) -> bool {
        self.0 >= 0.0
    }
}

impl PartialEq for Cost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Cost {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl From<Cost> for f64 {
    fn from(c: Cost) -> f64 {
        c.0
    }
}

impl TryFrom<f64> for Cost {
    type Error = String;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Cost::new(value).ok_or_else(|| format!("cost must be non-negative, got {value}"))
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// How an AND node combines the cost-inclusive values of its children.
/// OR nodes always take the minimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostScheme {
    #[default]
    Sum,
    Max,
}

impl CostScheme {
    /// Folds child terms. An empty AND node combines to zero under both schemes.
    pub fn combine<I: IntoIterator<Item = Cost>>(self, terms: I) -> Cost {
        match self {
            CostScheme::Sum => terms.into_iter().sum(),
            CostScheme::Max => terms.into_iter().fold(Cost::ZERO, Ord::max),
        }
    }
}

impl fmt::Display for CostScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostScheme::Sum => f.write_str("sum"),
            CostScheme::Max => f.write_str("max"),
        }
    }
}

impl std::str::FromStr for CostScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(CostScheme::Sum),
            "max" => Ok(CostScheme::Max),
            other => Err(format!("unknown cost scheme `{other}` (expected sum or max)")),
        }
    }
}
