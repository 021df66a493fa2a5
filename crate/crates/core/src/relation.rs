//! Binary relations on finite models and the entourage algebra: composition,
//! inverse, powers, diagonal, images under point maps, and distance span.

use crate::dist::ExtDist;
use crate::model::FiniteModel;
use crate::point::Point;
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

/// A finite set of ordered point pairs over a fixed carrier model.
#[derive(Clone)]
pub struct Relation {
    model: Arc<FiniteModel>,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new(model: Arc<FiniteModel>) -> Relation {
        Relation { model, pairs: BTreeSet::new() }
    }

    pub fn from_pairs(model: Arc<FiniteModel>, pairs: &[(Point, Point)]) -> Result<Relation> {
        let mut set = BTreeSet::new();
        for (p, q) in pairs {
            let i = model
                .index_of(p)
                .ok_or_else(|| Error::input(format!("point {p} is not in the carrier")))?;
            let j = model
                .index_of(q)
                .ok_or_else(|| Error::input(format!("point {q} is not in the carrier")))?;
            set.insert((i, j));
        }
        Ok(Relation { model, pairs: set })
    }

    pub fn from_index_pairs(model: Arc<FiniteModel>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let n = model.len();
        let set: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if set.iter().any(|&(i, j)| i >= n || j >= n) {
            return Err(Error::input("index pair outside the carrier"));
        }
        Ok(Relation { model, pairs: set })
    }

    /// The diagonal relation on the carrier.
    pub fn diagonal(model: Arc<FiniteModel>) -> Relation {
        let pairs = (0..model.len()).map(|i| (i, i)).collect();
        Relation { model, pairs }
    }

    pub fn model(&self) -> &Arc<FiniteModel> {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: &Point, q: &Point) -> bool {
        match (self.model.index_of(p), self.model.index_of(q)) {
            (Some(i), Some(j)) => self.pairs.contains(&(i, j)),
            _ => false,
        }
    }

    pub fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn point_pairs(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.pairs.iter().map(|&(i, j)| (self.model.point(i), self.model.point(j)))
    }

    fn same_carrier(&self, other: &Relation) -> bool {
        Arc::ptr_eq(&self.model, &other.model) || self.model.points() == other.model.points()
    }

    /// E o F = { (x, y) : (x, z) in E and (z, y) in F for some z }.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if !self.same_carrier(other) {
            return Err(Error::input("relation composition across different carriers"));
        }
        let mut by_first: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(z, y) in &other.pairs {
            by_first.entry(z).or_default().push(y);
        }
        let mut pairs = BTreeSet::new();
        for &(x, z) in &self.pairs {
            if let Some(ys) = by_first.get(&z) {
                for &y in ys {
                    pairs.insert((x, y));
                }
            }
        }
        Ok(Relation { model: Arc::clone(&self.model), pairs })
    }

    pub fn inverse(&self) -> Relation {
        Relation {
            model: Arc::clone(&self.model),
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// E^0 is the diagonal; E^(n+1) = E^n o E.
    pub fn power(&self, n: u32) -> Result<Relation> {
        let mut acc = Relation::diagonal(Arc::clone(&self.model));
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if !self.same_carrier(other) {
            return Err(Error::input("relation union across different carriers"));
        }
        Ok(Relation {
            model: Arc::clone(&self.model),
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    /// sup { d(x, y) : (x, y) in E }, with sup of the empty set being 0. A
    /// relation is an entourage of the bounded coarse structure at scale K
    /// exactly when its span is <= K.
    pub fn span(&self) -> ExtDist {
        self.pairs
            .iter()
            .map(|&(i, j)| self.model.dist_idx(i, j))
            .fold(ExtDist::ZERO, ExtDist::max)
    }

    /// (f x g)(E) = { (f(x), g(y)) : (x, y) in E }. Both maps must send the
    /// touched points back into the carrier.
    pub fn image<F, G>(&self, f: F, g: G) -> Result<Relation>
    where
        F: Fn(&Point) -> Option<Point>,
        G: Fn(&Point) -> Option<Point>,
    {
        let mut pairs = BTreeSet::new();
        for &(i, j) in &self.pairs {
            let (x, y) = (self.model.point(i), self.model.point(j));
            let fx = f(x).ok_or_else(|| Error::input(format!("map undefined at {x}")))?;
            let gy = g(y).ok_or_else(|| Error::input(format!("map undefined at {y}")))?;
            let a = self
                .model
                .index_of(&fx)
                .ok_or_else(|| Error::input(format!("image point {fx} outside the carrier")))?;
            let b = self
                .model
                .index_of(&gy)
                .ok_or_else(|| Error::input(format!("image point {gy} outside the carrier")))?;
            pairs.insert((a, b));
        }
        Ok(Relation { model: Arc::clone(&self.model), pairs })
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.same_carrier(other) && self.pairs == other.pairs
    }
}
impl Eq for Relation {}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.point_pairs().map(|(p, q)| format!("({p},{q})"))).finish()
    }
}
