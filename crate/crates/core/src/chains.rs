//! K-chain-connected components, coarsely connected components, annulus
//! towers over a growing radius schedule, and end counting with explicit
//! stabilization flags.
//!
//! Components are computed by union-find with path compression and union by
//! size. Pair generation at scale K uses the space's neighbor enumerator
//! where one exists (lattice offsets, tree moves, Cayley balls) and falls
//! back to all-pairs, which is acceptable at desk scale.

use crate::dist::ExtDist;
use crate::model::{ball, FiniteModel};
use crate::point::Point;
use crate::space::Space;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// A partition of a subset of a finite model into classes. Class ids are
/// canonical: the smallest model index among the members of the class.
pub struct Partition {
    model: Arc<FiniteModel>,
    members: Vec<usize>,
    class_of: HashMap<usize, usize>,
}

impl Partition {
    pub fn model(&self) -> &Arc<FiniteModel> {
        &self.model
    }

    /// Member indices (into the carrier model), sorted.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Canonical class id of a member index.
    pub fn class_of_idx(&self, i: usize) -> Option<usize> {
        self.class_of.get(&i).copied()
    }

    pub fn class_of(&self, p: &Point) -> Option<usize> {
        self.class_of_idx(self.model.index_of(p)?)
    }

    pub fn same_class(&self, p: &Point, q: &Point) -> Option<bool> {
        Some(self.class_of(p)? == self.class_of(q)?)
    }

    /// Distinct class ids, sorted.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.class_of.values().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn class_count(&self) -> usize {
        self.class_ids().len()
    }

    pub fn class_members(&self, id: usize) -> Vec<usize> {
        let mut m: Vec<usize> =
            self.members.iter().copied().filter(|&i| self.class_of[&i] == id).collect();
        m.sort_unstable();
        m
    }

    fn from_union_find(model: Arc<FiniteModel>, members: Vec<usize>, uf: &mut UnionFind, pos: &HashMap<usize, usize>) -> Partition {
        // canonical id: smallest model index in each union-find class
        let mut canon: HashMap<usize, usize> = HashMap::new();
        for &i in &members {
            let root = uf.find(pos[&i]);
            let e = canon.entry(root).or_insert(i);
            if i < *e {
                *e = i;
            }
        }
        let class_of = members.iter().map(|&i| (i, canon[&uf.find(pos[&i])])).collect();
        Partition { model, members, class_of }
    }
}

/// Components of the relation "joined by a finite chain of steps of length
/// <= K" on the given member subset. `k` must be finite.
pub fn k_chain_components_subset(
    model: &Arc<FiniteModel>,
    mut members: Vec<usize>,
    k: ExtDist,
) -> Result<Partition> {
    if !k.is_finite() {
        return Err(Error::input("chain scale K must be finite"));
    }
    members.sort_unstable();
    members.dedup();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut uf = UnionFind::new(members.len());
    let fast = model.space().map(|s| Arc::clone(s)).and_then(|space| {
        // Every member must produce a neighbor list or we fall back entirely.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &i in &members {
            let p = model.point(i);
            let ns = space.neighbors(p, k)?;
            for q in ns {
                if let Some(j) = model.index_of(&q) {
                    if j > i && pos.contains_key(&j) && model.dist_idx(i, j) <= k {
                        edges.push((i, j));
                    }
                }
            }
        }
        Some(edges)
    });
    match fast {
        Some(edges) => {
            for (i, j) in edges {
                uf.union(pos[&i], pos[&j]);
            }
        }
        None => {
            for a in 0..members.len() {
                for b in (a + 1)..members.len() {
                    if model.dist_idx(members[a], members[b]) <= k {
                        uf.union(a, b);
                    }
                }
            }
        }
    }
    Ok(Partition::from_union_find(Arc::clone(model), members, &mut uf, &pos))
}

/// K-chain components of the whole model.
pub fn k_chain_components(model: &Arc<FiniteModel>, k: ExtDist) -> Result<Partition> {
    let members = (0..model.len()).collect();
    k_chain_components_subset(model, members, k)
}

/// Coarsely connected components: same class exactly when the distance is
/// finite. This realizes the component of a point as the union of all bounded
/// sets through it, restricted to the truncation.
pub fn coarsely_connected_components(model: &Arc<FiniteModel>) -> Partition {
    let members: Vec<usize> = (0..model.len()).collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut uf = UnionFind::new(members.len());
    for a in 0..members.len() {
        for b in (a + 1)..members.len() {
            if uf.find(a) != uf.find(b) && model.dist_idx(members[a], members[b]).is_finite() {
                uf.union(a, b);
            }
        }
    }
    Partition::from_union_find(Arc::clone(model), members, &mut uf, &pos)
}

/// Partitions of the sets { x : r_j <= d(xi, x) <= R } at scale K, for a
/// strictly increasing radius schedule, together with the inclusion maps from
/// each level's classes into the previous level's.
pub struct AnnulusTower {
    space: Arc<Space>,
    k: ExtDist,
    radii: Vec<ExtDist>,
    outer: ExtDist,
    model: Arc<FiniteModel>,
    levels: Vec<Partition>,
    /// `inclusions[j]` maps level-(j+1) class ids to level-j class ids.
    inclusions: Vec<HashMap<usize, usize>>,
}

impl AnnulusTower {
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn k(&self) -> ExtDist {
        self.k
    }

    pub fn radii(&self) -> &[ExtDist] {
        &self.radii
    }

    pub fn outer(&self) -> ExtDist {
        self.outer
    }

    pub fn model(&self) -> &Arc<FiniteModel> {
        &self.model
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }

    pub fn inclusions(&self) -> &[HashMap<usize, usize>] {
        &self.inclusions
    }

    /// Class of `p` at level `j`, if `p` lies in that annulus.
    pub fn class_at(&self, j: usize, p: &Point) -> Option<usize> {
        self.levels[j].class_of(p)
    }
}

pub fn annulus_tower(
    space: &Arc<Space>,
    k: ExtDist,
    radii: &[ExtDist],
    outer: ExtDist,
) -> Result<AnnulusTower> {
    if !k.is_finite() {
        return Err(Error::input("chain scale K must be finite"));
    }
    if radii.is_empty() {
        return Err(Error::input("radius schedule must be nonempty"));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::input("radius schedule must be strictly increasing"));
    }
    if *radii.last().unwrap() >= outer {
        return Err(Error::input("all radii must be smaller than the outer horizon"));
    }
    let model = Arc::new(ball(space, outer)?);
    let base = model.base_idx();
    let mut levels = Vec::with_capacity(radii.len());
    for &r in radii {
        let members: Vec<usize> = (0..model.len())
            .filter(|&i| model.dist_idx(base, i) >= r)
            .collect();
        levels.push(k_chain_components_subset(&model, members, k)?);
    }
    let mut inclusions = Vec::new();
    for j in 0..levels.len().saturating_sub(1) {
        let (shallow, deep) = (&levels[j], &levels[j + 1]);
        let mut map = HashMap::new();
        for id in deep.class_ids() {
            // The deep carrier shrinks, so any member locates the class below.
            let rep = deep.class_members(id)[0];
            let below = shallow
                .class_of_idx(rep)
                .expect("deep annulus member missing from shallower annulus");
            map.insert(id, below);
        }
        inclusions.push(map);
    }
    Ok(AnnulusTower {
        space: Arc::clone(space),
        k,
        radii: radii.to_vec(),
        outer,
        model,
        levels,
        inclusions,
    })
}

/// A persistent chain of classes through the tower, shallow to deep, with a
/// far representative point from the deepest class.
#[derive(Clone, Debug, Serialize)]
pub struct Thread {
    pub id: usize,
    pub classes: Vec<usize>,
    pub representative: Point,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndReport {
    pub space: String,
    pub k: ExtDist,
    pub radii: Vec<ExtDist>,
    pub horizons: (ExtDist, ExtDist),
    /// Number of surviving classes per level of the larger-horizon tower.
    pub level_counts: Vec<usize>,
    pub threads: Vec<Thread>,
    pub schedule_stable: bool,
    pub horizon_stable: bool,
    /// The end count; present exactly when both stability flags hold.
    pub count: Option<usize>,
}

impl EndReport {
    pub fn stabilized(&self) -> bool {
        self.schedule_stable && self.horizon_stable
    }
}

/// Deepest-level class ids that reach past the escape threshold, i.e. contain
/// a point with 2 d(xi, x) > horizon. These are the classes treated as
/// unbounded at this horizon.
fn surviving_deep_classes(tower: &AnnulusTower, threshold: ExtDist) -> Vec<usize> {
    let deep = tower.levels().last().unwrap();
    let model = tower.model();
    let base = model.base_idx();
    deep.class_ids()
        .into_iter()
        .filter(|&id| {
            deep.class_members(id)
                .iter()
                .any(|&i| model.dist_idx(base, i).double() > threshold)
        })
        .collect()
}

/// Counts sequential-end candidates by a two-horizon, schedule-dropping
/// stability check. The quantifier over all bounded sets is exhausted by the
/// radius schedule; the report never claims more than its flags.
pub fn end_count(
    space: &Arc<Space>,
    k: ExtDist,
    radii: &[ExtDist],
    horizons: (ExtDist, ExtDist),
) -> Result<EndReport> {
    let (r_small, r_large) = horizons;
    if r_small >= r_large {
        return Err(Error::input("horizons must satisfy R < R'"));
    }
    let small = annulus_tower(space, k, radii, r_small)?;
    let large = annulus_tower(space, k, radii, r_large)?;

    let survivors_small = surviving_deep_classes(&small, r_small);
    let survivors_large = surviving_deep_classes(&large, r_large);

    // Follow each surviving deep class of the large tower down the inclusions.
    let mut threads = Vec::new();
    let model = large.model();
    let base = model.base_idx();
    for (tid, &deep_id) in survivors_large.iter().enumerate() {
        let mut classes = vec![deep_id];
        for incl in large.inclusions().iter().rev() {
            let below = incl[classes.last().unwrap()];
            classes.push(below);
        }
        classes.reverse();
        let rep_idx = large
            .levels()
            .last()
            .unwrap()
            .class_members(deep_id)
            .into_iter()
            .max_by_key(|&i| model.dist_idx(base, i))
            .unwrap();
        threads.push(Thread { id: tid, classes, representative: model.point(rep_idx).clone() });
    }

    // Per-level counts: distinct classes per level that carry a survivor.
    let mut level_counts = Vec::new();
    for j in 0..large.levels().len() {
        let mut ids: Vec<usize> = threads.iter().map(|t| t.classes[j]).collect();
        ids.sort_unstable();
        ids.dedup();
        level_counts.push(ids.len());
    }

    let schedule_stable = level_counts.windows(2).all(|w| w[0] == w[1]);
    let horizon_stable = survivors_small.len() == survivors_large.len();
    let stabilized = schedule_stable && horizon_stable;
    Ok(EndReport {
        space: space.name().to_string(),
        k,
        radii: radii.to_vec(),
        horizons,
        level_counts,
        threads,
        schedule_stable,
        horizon_stable,
        count: if stabilized { Some(survivors_large.len()) } else { None },
    })
}

/// Default geometric schedule: radii K 2^j for j = 1..=m, outer horizon
/// K 2^(m+2), doubled once for the stability check.
pub fn default_schedule(k: ExtDist, m: u32) -> (Vec<ExtDist>, (ExtDist, ExtDist)) {
    let mut radii = Vec::new();
    let mut cur = k.double();
    for _ in 0..m {
        radii.push(cur);
        cur = cur.double();
    }
    let outer = cur.double();
    (radii, (outer, outer.double()))
}

/// Picks a schedule by probing ball sizes: the deepest geometric schedule
/// whose doubled horizon keeps the working ball under `cap` points. Spaces
/// with exponential ball growth fall back to an arithmetic schedule with
/// small horizons.
pub fn adaptive_schedule(
    space: &Arc<Space>,
    k: ExtDist,
    cap: usize,
) -> Result<(Vec<ExtDist>, (ExtDist, ExtDist))> {
    let mut best: Option<u32> = None;
    let mut r = k.double().double();
    for j in 2..=7u32 {
        if space.enumerate(r)?.len() > cap {
            break;
        }
        best = Some(j);
        r = r.double();
    }
    match best {
        Some(j) if j >= 4 => Ok(default_schedule(k, j - 3)),
        _ => {
            let two = k + k;
            let radii = vec![k, two, two + k];
            let five = two + two + k;
            Ok((radii, (five, five + five)))
        }
    }
}

/// DOT rendering of the inclusion forest: one node per class per level,
/// edges are the inclusion maps (deep class to the class it sits inside).
pub fn tower_dot(tower: &AnnulusTower) -> String {
    let mut out = String::from("digraph tower {\n  rankdir=BT;\n");
    for (j, level) in tower.levels().iter().enumerate() {
        let r = tower.radii()[j];
        for id in level.class_ids() {
            let size = level.class_members(id).len();
            let _ = writeln!(
                out,
                "  \"L{j}C{id}\" [label=\"r≥{r} #{id} ({size} pts)\"];"
            );
        }
    }
    for (j, incl) in tower.inclusions().iter().enumerate() {
        let mut pairs: Vec<(usize, usize)> = incl.iter().map(|(&a, &b)| (a, b)).collect();
        pairs.sort_unstable();
        for (deep, shallow) in pairs {
            let _ = writeln!(out, "  \"L{}C{}\" -> \"L{}C{}\";", j + 1, deep, j, shallow);
        }
    }
    out.push_str("}\n");
    out
}
