//! Extended distances: exact nonnegative rationals together with infinity.
//!
//! Every metric in this crate takes values here. There is no floating point
//! anywhere; comparisons are exact and infinity is absorbing under addition.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A nonnegative exact rational distance, or infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtDist {
    Finite(Ratio<i64>),
    Infinity,
}

impl ExtDist {
    pub const ZERO: ExtDist = ExtDist::Finite(Ratio::new_raw(0, 1));

    pub fn int(n: i64) -> ExtDist {
        assert!(n >= 0, "distances are nonnegative");
        ExtDist::Finite(Ratio::from_integer(n))
    }

    /// Builds `p/q`. Panics on `q == 0` or a negative value.
    pub fn ratio(p: i64, q: i64) -> ExtDist {
        let r = Ratio::new(p, q);
        assert!(!r.is_negative(), "distances are nonnegative");
        ExtDist::Finite(r)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, ExtDist::Finite(r) if r.is_zero())
    }

    /// Largest integer `n >= 0` with `n <= self`, or `None` for infinity.
    pub fn floor_int(self) -> Option<i64> {
        match self {
            ExtDist::Finite(r) => r.floor().to_integer().to_i64(),
            ExtDist::Infinity => None,
        }
    }

    /// Multiplies by a positive rational scale factor.
    pub fn scale(self, c: Ratio<i64>) -> ExtDist {
        assert!(c.is_positive());
        match self {
            ExtDist::Finite(r) => ExtDist::Finite(r * c),
            ExtDist::Infinity => ExtDist::Infinity,
        }
    }

    /// Divides by a positive rational scale factor.
    pub fn unscale(self, c: Ratio<i64>) -> ExtDist {
        assert!(c.is_positive());
        match self {
            ExtDist::Finite(r) => ExtDist::Finite(r / c),
            ExtDist::Infinity => ExtDist::Infinity,
        }
    }

    pub fn double(self) -> ExtDist {
        self.scale(Ratio::from_integer(2))
    }

    pub fn max(self, other: ExtDist) -> ExtDist {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Add for ExtDist {
    type Output = ExtDist;
    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinity,
        }
    }
}

impl Ord for ExtDist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp(b),
            (ExtDist::Finite(_), ExtDist::Infinity) => Ordering::Less,
            (ExtDist::Infinity, ExtDist::Finite(_)) => Ordering::Greater,
            (ExtDist::Infinity, ExtDist::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for ExtDist {
    fn from(n: i64) -> Self {
        ExtDist::int(n)
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            ExtDist::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExtDist::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Wire format: integers as JSON numbers, proper rationals as "p/q" strings,
// infinity as "inf".
impl Serialize for ExtDist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtDist::Finite(r) if r.is_integer() => s.serialize_i64(r.to_integer()),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtDist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => {
                if n < 0 {
                    return Err(D::Error::custom("negative distance"));
                }
                Ok(ExtDist::int(n))
            }
            Raw::Str(s) => parse_ext_dist(&s).map_err(D::Error::custom),
        }
    }
}

pub fn parse_ext_dist(s: &str) -> Result<ExtDist, String> {
    let s = s.trim();
    if s == "inf" || s == "∞" {
        return Ok(ExtDist::Infinity);
    }
    let mk = |p: i64, q: i64| -> Result<ExtDist, String> {
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        let r = Ratio::new(p, q);
        if r.is_negative() {
            return Err(format!("negative distance {s:?}"));
        }
        Ok(ExtDist::Finite(r))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|e| format!("bad numerator {s:?}: {e}"))?;
            let q: i64 = q.trim().parse().map_err(|e| format!("bad denominator {s:?}: {e}"))?;
            mk(p, q)
        }
        None => {
            let n: i64 = s.parse().map_err(|e| format!("bad distance {s:?}: {e}"))?;
            mk(n, 1)
        }
    }
}
