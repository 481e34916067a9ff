use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::questions::format_number;

/// Real interval with optional infinite ends. Infinite ends are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "extended")]
    pub lower: f64,
    #[serde(with = "extended")]
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

mod extended {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("+inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => match t.as_str() {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("bad bound {other:?}"))),
            },
        }
    }
}

impl Interval {
    pub fn greater_than(x: f64) -> Self {
        Interval { lower: x, upper: f64::INFINITY, lower_closed: false, upper_closed: false }
    }

    pub fn at_least(x: f64) -> Self {
        Interval { lower: x, upper: f64::INFINITY, lower_closed: true, upper_closed: false }
    }

    pub fn less_than(x: f64) -> Self {
        Interval { lower: f64::NEG_INFINITY, upper: x, lower_closed: false, upper_closed: false }
    }

    pub fn at_most(x: f64) -> Self {
        Interval { lower: f64::NEG_INFINITY, upper: x, lower_closed: false, upper_closed: true }
    }

    pub fn point(x: f64) -> Self {
        Interval { lower: x, upper: x, lower_closed: true, upper_closed: true }
    }

    /// Closed interval between two values given in either order.
    pub fn between(a: f64, b: f64) -> Self {
        Interval { lower: a.min(b), upper: a.max(b), lower_closed: true, upper_closed: true }
    }

    pub fn is_valid(&self) -> bool {
        !self.lower.is_nan()
            && !self.upper.is_nan()
            && self.lower <= self.upper
            && (self.lower.is_finite() || self.upper.is_finite())
            && (self.lower.is_finite() || !self.lower_closed)
            && (self.upper.is_finite() || !self.upper_closed)
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper || (self.lower == self.upper && !(self.lower_closed && self.upper_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_closed { x >= self.lower } else { x > self.lower };
        let below = if self.upper_closed { x <= self.upper } else { x < self.upper };
        above && below
    }

    /// Non-empty intersection.
    pub fn intersects(&self, other: &Interval) -> bool {
        let (lower, lower_closed) = match self.lower.total_cmp(&other.lower) {
            std::cmp::Ordering::Greater => (self.lower, self.lower_closed),
            std::cmp::Ordering::Less => (other.lower, other.lower_closed),
            std::cmp::Ordering::Equal => (self.lower, self.lower_closed && other.lower_closed),
        };
        let (upper, upper_closed) = match self.upper.total_cmp(&other.upper) {
            std::cmp::Ordering::Less => (self.upper, self.upper_closed),
            std::cmp::Ordering::Greater => (other.upper, other.upper_closed),
            std::cmp::Ordering::Equal => (self.upper, self.upper_closed && other.upper_closed),
        };
        lower < upper || (lower == upper && lower_closed && upper_closed)
    }

    /// `self` lies entirely inside `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lower_ok = other.lower < self.lower
            || (other.lower == self.lower && (other.lower_closed || !self.lower_closed));
        let upper_ok = self.upper < other.upper
            || (other.upper == self.upper && (other.upper_closed || !self.upper_closed));
        lower_ok && upper_ok
    }

    /// Comparator wording that the extractor maps back to this interval.
    pub fn canonical_text(&self) -> String {
        let lo = format_number(self.lower);
        let hi = format_number(self.upper);
        match (self.lower.is_finite(), self.upper.is_finite()) {
            (true, false) if self.lower_closed => format!("greater than or equal to {lo}"),
            (true, false) => format!("greater than {lo}"),
            (false, true) if self.upper_closed => format!("less than or equal to {hi}"),
            (false, true) => format!("less than {hi}"),
            _ if self.lower == self.upper => format!("equal to {lo}"),
            _ => format!("between {lo} and {hi}"),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = if self.lower.is_finite() { format_number(self.lower) } else { "-inf".into() };
        let hi = if self.upper.is_finite() { format_number(self.upper) } else { "+inf".into() };
        write!(
            f,
            "{}{lo}, {hi}{}",
            if self.lower_closed { '[' } else { '(' },
            if self.upper_closed { ']' } else { ')' }
        )
    }
}
