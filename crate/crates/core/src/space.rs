//! The space zoo: pointed spaces presented by an extended metric, a base
//! point, and a finite ball enumerator.
//!
//! Every space here is a concrete countable model — the integer line and
//! half-line, integer grids under the l1 or linf norm, rooted b-ary trees
//! with the path metric, Cayley lattices of finitely generated abelian groups
//! under the word metric, finite disjoint unions (parts at infinite distance),
//! and metric rescalings. Distance oracles are pure, exact, and deterministic.

use crate::dist::ExtDist;
use crate::lattice::Lattice;
use crate::point::Point;
use crate::{Error, Result};
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "linf")]
    Linf,
}

impl Norm {
    fn of(self, v: &[i64]) -> i64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::Linf => v.iter().map(|x| x.abs()).max().unwrap_or(0),
        }
    }
}

/// A pointed space with a distance oracle and a ball enumerator.
pub struct Space {
    name: String,
    base: Point,
    kind: SpaceKind,
}

enum SpaceKind {
    /// The integer line Z with d(x, y) = |x - y|.
    Line,
    /// The half-line N.
    HalfLine,
    /// Z^d under the chosen norm.
    Grid { dim: usize, norm: Norm },
    /// Rooted tree in which every node has `arity` children; path metric.
    Tree { arity: u8 },
    /// Sublattice of Z^d generated by `gens`, under the word metric.
    Cayley {
        dim: usize,
        gens: Vec<Vec<i64>>,
        lattice: Lattice,
        cache: Mutex<CayleyCache>,
    },
    /// Finite disjoint union; distinct parts sit at infinite distance.
    DisjointUnion { parts: Vec<Arc<Space>> },
    /// Same points as `inner`, metric multiplied by `factor`.
    Rescale { inner: Arc<Space>, factor: Ratio<i64> },
}

/// Word lengths discovered so far by breadth-first search from the origin.
struct CayleyCache {
    len: HashMap<Vec<i64>, u64>,
    frontier: Vec<Vec<i64>>,
    radius: u64,
}

impl Space {
    pub fn line() -> Space {
        Space { name: "Z".into(), base: Point::int(0), kind: SpaceKind::Line }
    }

    pub fn half_line() -> Space {
        Space { name: "N".into(), base: Point::int(0), kind: SpaceKind::HalfLine }
    }

    pub fn grid(dim: usize, norm: Norm) -> Space {
        assert!(dim >= 1);
        let tag = match norm {
            Norm::L1 => "l1",
            Norm::Linf => "linf",
        };
        Space {
            name: format!("Z{dim}_{tag}"),
            base: Point::Coords(vec![0; dim]),
            kind: SpaceKind::Grid { dim, norm },
        }
    }

    pub fn tree(arity: u8) -> Space {
        assert!(arity >= 1 && arity <= 9);
        Space {
            name: format!("tree{arity}"),
            base: Point::Word(vec![]),
            kind: SpaceKind::Tree { arity },
        }
    }

    pub fn cayley(dim: usize, gens: Vec<Vec<i64>>) -> Result<Space> {
        if gens.is_empty() {
            return Err(Error::input("cayley space needs at least one generator"));
        }
        for g in &gens {
            if g.len() != dim {
                return Err(Error::input("generator dimension mismatch"));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(Error::input("zero generator"));
            }
        }
        let lattice = Lattice::from_generators(dim, &gens);
        let mut cache = CayleyCache { len: HashMap::new(), frontier: vec![vec![0; dim]], radius: 0 };
        cache.len.insert(vec![0; dim], 0);
        Ok(Space {
            name: format!("cayley{dim}"),
            base: Point::Coords(vec![0; dim]),
            kind: SpaceKind::Cayley { dim, gens, lattice, cache: Mutex::new(cache) },
        })
    }

    pub fn disjoint_union(parts: Vec<Arc<Space>>, base_part: usize) -> Result<Space> {
        if parts.is_empty() {
            return Err(Error::input("disjoint union needs at least one part"));
        }
        if base_part >= parts.len() {
            return Err(Error::input("base_part out of range"));
        }
        let base = Point::Part(base_part, Box::new(parts[base_part].base.clone()));
        let name = format!(
            "union({})",
            parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(",")
        );
        Ok(Space { name, base, kind: SpaceKind::DisjointUnion { parts } })
    }

    pub fn rescale(inner: Arc<Space>, factor: Ratio<i64>) -> Result<Space> {
        if !factor.is_positive() {
            return Err(Error::input("rescale factor must be positive"));
        }
        Ok(Space {
            name: format!("rescale({},{}/{})", inner.name, factor.numer(), factor.denom()),
            base: inner.base.clone(),
            kind: SpaceKind::Rescale { inner, factor },
        })
    }

    /// Replaces the base point. The new base must be a point of the space.
    pub fn with_base(mut self, base: Point) -> Result<Space> {
        if !self.contains(&base) {
            return Err(Error::input(format!("base point {base} is not in {}", self.name)));
        }
        self.base = base;
        Ok(self)
    }

    /// Same space, different base point. Cheap for every zoo kind; the
    /// Cayley word-length cache starts fresh (it is origin-relative anyway).
    pub fn rebased(&self, base: Point) -> Result<Space> {
        if !self.contains(&base) {
            return Err(Error::input(format!("base point {base} is not in {}", self.name)));
        }
        let kind = match &self.kind {
            SpaceKind::Line => SpaceKind::Line,
            SpaceKind::HalfLine => SpaceKind::HalfLine,
            SpaceKind::Grid { dim, norm } => SpaceKind::Grid { dim: *dim, norm: *norm },
            SpaceKind::Tree { arity } => SpaceKind::Tree { arity: *arity },
            SpaceKind::Cayley { dim, gens, lattice, .. } => {
                let mut cache =
                    CayleyCache { len: HashMap::new(), frontier: vec![vec![0; *dim]], radius: 0 };
                cache.len.insert(vec![0; *dim], 0);
                SpaceKind::Cayley {
                    dim: *dim,
                    gens: gens.clone(),
                    lattice: lattice.clone(),
                    cache: Mutex::new(cache),
                }
            }
            SpaceKind::DisjointUnion { parts } => {
                SpaceKind::DisjointUnion { parts: parts.clone() }
            }
            SpaceKind::Rescale { inner, factor } => {
                SpaceKind::Rescale { inner: Arc::clone(inner), factor: *factor }
            }
        };
        Ok(Space { name: self.name.clone(), base, kind })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.kind, p) {
            (SpaceKind::Line, Point::Coords(v)) => v.len() == 1,
            (SpaceKind::HalfLine, Point::Coords(v)) => v.len() == 1 && v[0] >= 0,
            (SpaceKind::Grid { dim, .. }, Point::Coords(v)) => v.len() == *dim,
            (SpaceKind::Tree { arity }, Point::Word(w)) => w.iter().all(|&d| d < *arity),
            (SpaceKind::Cayley { dim, lattice, .. }, Point::Coords(v)) => {
                v.len() == *dim && {
                    let diff = sub(v, self.base.coords().unwrap());
                    lattice.contains(&diff)
                }
            }
            (SpaceKind::DisjointUnion { parts }, Point::Part(k, inner)) => {
                *k < parts.len() && parts[*k].contains(inner)
            }
            (SpaceKind::Rescale { inner, .. }, p) => inner.contains(p),
            _ => false,
        }
    }

    /// The metric d_X. Both arguments must be points of the space.
    pub fn dist(&self, p: &Point, q: &Point) -> Result<ExtDist> {
        if !self.contains(p) {
            return Err(Error::input(format!("unknown point {p} in {}", self.name)));
        }
        if !self.contains(q) {
            return Err(Error::input(format!("unknown point {q} in {}", self.name)));
        }
        Ok(self.dist_unchecked(p, q))
    }

    pub(crate) fn dist_unchecked(&self, p: &Point, q: &Point) -> ExtDist {
        match &self.kind {
            SpaceKind::Line | SpaceKind::HalfLine => {
                ExtDist::int((p.coords().unwrap()[0] - q.coords().unwrap()[0]).abs())
            }
            SpaceKind::Grid { norm, .. } => {
                ExtDist::int(norm.of(&sub(p.coords().unwrap(), q.coords().unwrap())))
            }
            SpaceKind::Tree { .. } => {
                let (a, b) = (p.word().unwrap(), q.word().unwrap());
                let lcp = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                ExtDist::int((a.len() + b.len() - 2 * lcp) as i64)
            }
            SpaceKind::Cayley { .. } => {
                let diff = sub(q.coords().unwrap(), p.coords().unwrap());
                ExtDist::int(self.word_length(&diff) as i64)
            }
            SpaceKind::DisjointUnion { parts } => match (p, q) {
                (Point::Part(i, a), Point::Part(j, b)) if i == j => {
                    parts[*i].dist_unchecked(a, b)
                }
                _ => ExtDist::Infinity,
            },
            SpaceKind::Rescale { inner, factor } => {
                inner.dist_unchecked(p, q).scale(*factor)
            }
        }
    }

    /// Word length of a lattice vector; the vector must lie in the lattice.
    fn word_length(&self, t: &[i64]) -> u64 {
        let SpaceKind::Cayley { gens, cache, .. } = &self.kind else { unreachable!() };
        let mut cache = cache.lock().unwrap();
        loop {
            if let Some(&l) = cache.len.get(t) {
                return l;
            }
            cache.expand_one_layer(gens);
        }
    }

    /// The closed ball { x : d(base, x) <= r }, sorted. `r` must be finite.
    pub fn enumerate(&self, r: ExtDist) -> Result<Vec<Point>> {
        if !r.is_finite() {
            return Err(Error::input("ball radius must be finite"));
        }
        let mut pts = self.enumerate_from(&self.base.clone(), r);
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// Points at distance <= r from an arbitrary center point of the space.
    fn enumerate_from(&self, center: &Point, r: ExtDist) -> Vec<Point> {
        let m = r.floor_int().unwrap().max(0);
        match &self.kind {
            SpaceKind::Line => {
                let b = center.coords().unwrap()[0];
                (b - m..=b + m).map(Point::int).collect()
            }
            SpaceKind::HalfLine => {
                let b = center.coords().unwrap()[0];
                ((b - m).max(0)..=b + m).map(Point::int).collect()
            }
            SpaceKind::Grid { dim, norm } => {
                let c = center.coords().unwrap();
                offsets_within(*dim, *norm, m)
                    .into_iter()
                    .map(|o| Point::Coords(add(c, &o)))
                    .collect()
            }
            SpaceKind::Tree { arity } => {
                let xi = center.word().unwrap();
                let mut out = Vec::new();
                for up in 0..=(m as usize).min(xi.len()) {
                    let prefix = &xi[..xi.len() - up];
                    let forbidden = if up > 0 { Some(xi[xi.len() - up]) } else { None };
                    for w in words_up_to(*arity, m as usize - up) {
                        if up > 0 && w.first() == forbidden.as_ref() {
                            continue;
                        }
                        let mut word = prefix.to_vec();
                        word.extend_from_slice(&w);
                        out.push(Point::Word(word));
                    }
                }
                out
            }
            SpaceKind::Cayley { gens, cache, .. } => {
                let mut cache = cache.lock().unwrap();
                while cache.radius < m as u64 {
                    cache.expand_one_layer(gens);
                }
                let c = center.coords().unwrap();
                cache
                    .len
                    .iter()
                    .filter(|(_, &l)| l <= m as u64)
                    .map(|(o, _)| Point::Coords(add(c, o)))
                    .collect()
            }
            SpaceKind::DisjointUnion { parts } => {
                // Other parts sit at infinite distance; the ball stays inside
                // the center's part.
                let Point::Part(k, inner_center) = center else { unreachable!() };
                parts[*k]
                    .enumerate_from(inner_center, r)
                    .into_iter()
                    .map(|p| Point::Part(*k, Box::new(p)))
                    .collect()
            }
            SpaceKind::Rescale { inner, factor } => {
                inner.enumerate_from(center, r.unscale(*factor))
            }
        }
    }

    /// Candidate points at distance <= k from `p`. The result may contain `p`
    /// itself or points outside a caller's carrier; callers filter. Returns
    /// `None` when no better-than-all-pairs strategy exists.
    pub fn neighbors(&self, p: &Point, k: ExtDist) -> Option<Vec<Point>> {
        let m = k.floor_int()?;
        match &self.kind {
            SpaceKind::Line | SpaceKind::HalfLine => {
                let x = p.coords().unwrap()[0];
                Some((x - m..=x + m).filter(|&y| self.contains(&Point::int(y))).map(Point::int).collect())
            }
            SpaceKind::Grid { dim, norm } => Some(
                offsets_within(*dim, *norm, m)
                    .into_iter()
                    .map(|o| Point::Coords(add(p.coords().unwrap(), &o)))
                    .collect(),
            ),
            SpaceKind::Tree { arity } => {
                let w = p.word().unwrap();
                let mut out = Vec::new();
                for up in 0..=(m as usize).min(w.len()) {
                    let prefix = &w[..w.len() - up];
                    for suffix in words_up_to(*arity, m as usize - up) {
                        let mut word = prefix.to_vec();
                        word.extend_from_slice(&suffix);
                        out.push(Point::Word(word));
                    }
                }
                Some(out)
            }
            SpaceKind::Cayley { gens, cache, .. } => {
                let mut cache = cache.lock().unwrap();
                while cache.radius < m as u64 {
                    cache.expand_one_layer(gens);
                }
                let offs: Vec<Vec<i64>> = cache
                    .len
                    .iter()
                    .filter(|(_, &l)| l <= m as u64)
                    .map(|(o, _)| o.clone())
                    .collect();
                drop(cache);
                Some(offs.into_iter().map(|o| Point::Coords(add(p.coords().unwrap(), &o))).collect())
            }
            SpaceKind::DisjointUnion { parts } => {
                let Point::Part(i, inner) = p else { return None };
                let ns = parts[*i].neighbors(inner, k)?;
                Some(ns.into_iter().map(|q| Point::Part(*i, Box::new(q))).collect())
            }
            SpaceKind::Rescale { inner, factor } => inner.neighbors(p, k.unscale(*factor)),
        }
    }
}

impl CayleyCache {
    fn expand_one_layer(&mut self, gens: &[Vec<i64>]) {
        let mut next = Vec::new();
        let new_radius = self.radius + 1;
        for v in std::mem::take(&mut self.frontier) {
            for g in gens {
                for sign in [1i64, -1] {
                    let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + sign * b).collect();
                    if !self.len.contains_key(&w) {
                        self.len.insert(w.clone(), new_radius);
                        next.push(w);
                    }
                }
            }
        }
        self.frontier = next;
        self.radius = new_radius;
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All integer vectors of the given norm-ball radius.
fn offsets_within(dim: usize, norm: Norm, m: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; dim];
    fn rec(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, i: usize, norm: Norm, budget: i64, m: i64) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let range = match norm {
            Norm::L1 => budget,
            Norm::Linf => m,
        };
        for x in -range..=range {
            cur[i] = x;
            let next_budget = match norm {
                Norm::L1 => budget - x.abs(),
                Norm::Linf => m,
            };
            rec(out, cur, i + 1, norm, next_budget, m);
            cur[i] = 0;
        }
    }
    rec(&mut out, &mut cur, 0, norm, m, m);
    out
}

/// All digit words of length <= max over digits 0..arity-1, shortest first.
fn words_up_to(arity: u8, max: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for d in 0..arity {
                let mut w2 = w.clone();
                w2.push(d);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Declarative JSON description of a zoo space.
// ---------------------------------------------------------------------------

/// A space description as it appears in a space file (without the schema
/// stamp). Disjoint-union parts and rescale inners nest the same shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub zoo: String,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Point>,
}

/// Top-level space file: the description plus the schema stamp.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub schema: u32,
    #[serde(flatten)]
    pub desc: SpaceDesc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridParams {
    dim: usize,
    #[serde(default = "default_norm")]
    norm: Norm,
}

fn default_norm() -> Norm {
    Norm::L1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeParams {
    arity: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CayleyParams {
    dim: usize,
    generators: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnionParams {
    parts: Vec<SpaceDesc>,
    #[serde(default)]
    base_part: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RescaleParams {
    factor: ExtDist,
    inner: Box<SpaceDesc>,
}

impl SpaceDesc {
    pub fn build(&self) -> Result<Arc<Space>> {
        let params = self.params.clone();
        let no_params = || -> Result<()> {
            match &params {
                serde_json::Value::Null => Ok(()),
                serde_json::Value::Object(m) if m.is_empty() => Ok(()),
                _ => Err(Error::input(format!("zoo {:?} takes no params", self.zoo))),
            }
        };
        let space = match self.zoo.as_str() {
            "Z" => {
                no_params()?;
                Space::line()
            }
            "N" => {
                no_params()?;
                Space::half_line()
            }
            "Zd" => {
                let p: GridParams = parse_params(params)?;
                Space::grid(p.dim, p.norm)
            }
            "tree" => {
                let p: TreeParams = parse_params(params)?;
                if p.arity < 1 || p.arity > 9 {
                    return Err(Error::input("tree arity must be in 1..=9"));
                }
                Space::tree(p.arity)
            }
            "cayley" => {
                let p: CayleyParams = parse_params(params)?;
                Space::cayley(p.dim, p.generators)?
            }
            "disjoint_union" => {
                let p: UnionParams = parse_params(params)?;
                let parts = p.parts.iter().map(|d| d.build()).collect::<Result<Vec<_>>>()?;
                Space::disjoint_union(parts, p.base_part)?
            }
            "rescale" => {
                let p: RescaleParams = parse_params(params)?;
                let ExtDist::Finite(factor) = p.factor else {
                    return Err(Error::input("rescale factor must be finite"));
                };
                Space::rescale(p.inner.build()?, factor)?
            }
            other => return Err(Error::input(format!("unknown zoo {other:?}"))),
        };
        let space = match &self.base {
            Some(b) => space.with_base(b.clone())?,
            None => space,
        };
        Ok(Arc::new(space))
    }
}

fn parse_params<T: for<'de> Deserialize<'de>>(v: serde_json::Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::input(format!("bad zoo params: {e}")))
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<SpaceFile> {
        let f: SpaceFile = serde_json::from_str(text)?;
        if f.schema != crate::SCHEMA_VERSION {
            return Err(Error::input(format!("unsupported schema version {}", f.schema)));
        }
        Ok(f)
    }

    pub fn build(&self) -> Result<Arc<Space>> {
        self.desc.build()
    }
}

/// Names and parameter summaries of the available zoo constructors.
pub fn zoo_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("Z", "integer line, d(x,y) = |x-y|"),
        ("N", "half-line of naturals"),
        ("Zd", "Z^d grid; params {dim, norm: \"l1\"|\"linf\"}"),
        ("tree", "rooted tree, every node has `arity` children; path metric"),
        ("cayley", "abelian Cayley lattice; params {dim, generators}; BFS word metric"),
        ("disjoint_union", "parts at infinite distance; params {parts, base_part}"),
        ("rescale", "metric multiplied by a positive rational; params {factor, inner}"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_distances() {
        let z = Space::line();
        assert_eq!(z.dist(&Point::int(3), &Point::int(7)).unwrap(), ExtDist::int(4));
        assert_eq!(z.dist(&Point::int(5), &Point::int(5)).unwrap(), ExtDist::ZERO);
    }

    #[test]
    fn line_ball() {
        let z = Space::line();
        let pts = z.enumerate(ExtDist::int(2)).unwrap();
        assert_eq!(pts, (-2..=2).map(Point::int).collect::<Vec<_>>());
    }

    #[test]
    fn half_line_ball_at_zero() {
        let n = Space::half_line();
        assert_eq!(n.enumerate(ExtDist::ZERO).unwrap(), vec![Point::int(0)]);
        assert!(n.dist(&Point::int(-1), &Point::int(0)).is_err());
    }

    #[test]
    fn grid_linf_ball_is_box() {
        let z2 = Space::grid(2, Norm::Linf);
        assert_eq!(z2.enumerate(ExtDist::int(1)).unwrap().len(), 9);
    }

    #[test]
    fn grid_l1_ball_size() {
        let z2 = Space::grid(2, Norm::L1);
        // 1 + 4 + 8 = diamond of radius 2
        assert_eq!(z2.enumerate(ExtDist::int(2)).unwrap().len(), 13);
    }

    #[test]
    fn disjoint_union_cross_part_is_infinite() {
        let u = Space::disjoint_union(vec![Arc::new(Space::line()), Arc::new(Space::line())], 0)
            .unwrap();
        let p = Point::Part(0, Box::new(Point::int(1)));
        let q = Point::Part(1, Box::new(Point::int(1)));
        assert_eq!(u.dist(&p, &q).unwrap(), ExtDist::Infinity);
        assert_eq!(u.dist(&p, &p).unwrap(), ExtDist::ZERO);
        // Balls around the base never reach the other part.
        assert!(u.enumerate(ExtDist::int(5)).unwrap().iter().all(|x| matches!(x, Point::Part(0, _))));
    }

    #[test]
    fn tree_path_metric() {
        let t = Space::tree(2);
        let a = Point::Word(vec![0, 0]);
        let b = Point::Word(vec![0, 1, 1]);
        assert_eq!(t.dist(&a, &b).unwrap(), ExtDist::int(3));
        // ball of radius r has 2^(r+1) - 1 nodes
        assert_eq!(t.enumerate(ExtDist::int(3)).unwrap().len(), 15);
    }

    #[test]
    fn tree_ball_from_inner_base() {
        let t = Space::tree(2).with_base(Point::Word(vec![0, 1])).unwrap();
        let pts = t.enumerate(ExtDist::int(1)).unwrap();
        // the node itself, its parent, and its two children
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(t.dist(t.base(), p).unwrap() <= ExtDist::int(1));
        }
    }

    #[test]
    fn cayley_word_metric_even_lattice() {
        let c = Space::cayley(1, vec![vec![2]]).unwrap();
        assert_eq!(c.dist(&Point::int(0), &Point::int(6)).unwrap(), ExtDist::int(3));
        assert!(c.dist(&Point::int(0), &Point::int(3)).is_err());
        let pts = c.enumerate(ExtDist::int(2)).unwrap();
        assert_eq!(pts, vec![Point::int(-4), Point::int(-2), Point::int(0), Point::int(2), Point::int(4)]);
    }

    #[test]
    fn rescale_doubles_distances() {
        let two_z = Space::rescale(Arc::new(Space::line()), Ratio::from_integer(2)).unwrap();
        assert_eq!(two_z.dist(&Point::int(0), &Point::int(3)).unwrap(), ExtDist::int(6));
        // radius 5 reaches only |x| <= 2 after unscaling
        assert_eq!(two_z.enumerate(ExtDist::int(5)).unwrap().len(), 5);
    }

    #[test]
    fn enumerate_monotone_in_radius() {
        for space in [Space::line(), Space::grid(2, Norm::L1), Space::tree(2)] {
            let mut prev: Vec<Point> = vec![];
            for r in 0..6 {
                let cur = space.enumerate(ExtDist::int(r)).unwrap();
                assert!(prev.iter().all(|p| cur.contains(p)), "ball not monotone at r={r}");
                assert!(cur.contains(space.base()));
                prev = cur;
            }
        }
    }

    #[test]
    fn desc_round_trip() {
        let text = r#"{"schema":1,"zoo":"Zd","params":{"dim":2,"norm":"linf"},"base":[1,1]}"#;
        let f = SpaceFile::parse(text).unwrap();
        let s = f.build().unwrap();
        assert_eq!(s.base(), &Point::Coords(vec![1, 1]));
        assert_eq!(s.enumerate(ExtDist::int(1)).unwrap().len(), 9);
    }

    #[test]
    fn desc_rejects_unknown_fields() {
        let text = r#"{"schema":1,"zoo":"Z","params":{},"extra":true}"#;
        assert!(SpaceFile::parse(text).is_err());
    }
}
