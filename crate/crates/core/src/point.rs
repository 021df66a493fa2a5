//! Points of zoo spaces: integer coordinate vectors, tree words, or a tagged
//! part of a disjoint union.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    /// Integer coordinate vector (Z, N, Z^d, Cayley lattices, rescalings).
    Coords(Vec<i64>),
    /// Word over digits 0..b-1, read root-to-leaf (rooted b-ary tree).
    Word(Vec<u8>),
    /// Point of part `k` of a disjoint union.
    Part(usize, Box<Point>),
}

impl Point {
    pub fn int(x: i64) -> Point {
        Point::Coords(vec![x])
    }

    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            Point::Coords(v) => Some(v),
            _ => None,
        }
    }

    pub fn word(&self) -> Option<&[u8]> {
        match self {
            Point::Word(w) => Some(w),
            _ => None,
        }
    }

    /// Componentwise translation; descends through `Part` wrappers.
    pub fn translate(&self, v: &[i64]) -> Option<Point> {
        match self {
            Point::Coords(c) if c.len() == v.len() => {
                Some(Point::Coords(c.iter().zip(v).map(|(a, b)| a + b).collect()))
            }
            Point::Part(k, inner) => Some(Point::Part(*k, Box::new(inner.translate(v)?))),
            _ => None,
        }
    }

    pub fn append_digit(&self, d: u8) -> Option<Point> {
        match self {
            Point::Word(w) => {
                let mut w = w.clone();
                w.push(d);
                Some(Point::Word(w))
            }
            Point::Part(k, inner) => Some(Point::Part(*k, Box::new(inner.append_digit(d)?))),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Coords(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Point::Coords(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Point::Word(w) if w.is_empty() => write!(f, "ε"),
            Point::Word(w) => {
                for d in w {
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            Point::Part(k, p) => write!(f, "{k}:{p}"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Wire format: coordinate points as arrays of integers, tree words as digit
// strings ("" is the root), disjoint-union points as {"part": k, "point": p}.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Point::Coords(v) => v.serialize(s),
            Point::Word(w) => {
                let txt: String = w.iter().map(|d| char::from(b'0' + d)).collect();
                s.serialize_str(&txt)
            }
            Point::Part(k, p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("part", k)?;
                m.serialize_entry("point", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Coords(Vec<i64>),
            Word(String),
            Part { part: usize, point: Box<Point> },
        }
        match Raw::deserialize(d)? {
            Raw::Coords(v) => Ok(Point::Coords(v)),
            Raw::Word(s) => {
                let mut w = Vec::with_capacity(s.len());
                for c in s.chars() {
                    let d = c
                        .to_digit(10)
                        .ok_or_else(|| D::Error::custom(format!("bad tree word {s:?}")))?;
                    w.push(d as u8);
                }
                Ok(Point::Word(w))
            }
            Raw::Part { part, point } => Ok(Point::Part(part, point)),
        }
    }
}
