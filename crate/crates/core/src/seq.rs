//! The coarse-sequence calculus: finitely described base-point-anchored
//! sequences, the subsequence relation with replayable witnesses, even/odd
//! interleaving, base-point transport, and the one-step and chain confluence
//! constructions.
//!
//! Everything infinitary gets horizon semantics: verdicts are True with a
//! witness that replays on the checked prefix, False with a counterexample
//! index backed by an escape argument, or Unknown. A witness never claims
//! more than the prefix it was checked on.

use crate::dist::ExtDist;
use crate::maps::{certify_bornologous, MapModel};
use crate::point::Point;
use crate::space::Space;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex};

/// Probe length used when constructors compute a declared jump bound.
pub const BOUND_PROBE: u64 = 64;

/// Tail rules for explicitly described sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// i -> p + i*v for indices past the prefix (coordinate spaces).
    Affine { p: Vec<i64>, v: Vec<i64> },
    /// Repeat a fixed translation step from the last prefix point.
    Step { v: Vec<i64> },
    /// Append a fixed digit to the word at every step (tree spaces).
    Digit { d: u8 },
}

enum SeqKind {
    Ray { prefix: Vec<Point>, tail: TailRule },
    Pushforward { map: MapModel, inner: Arc<CoarseSequence> },
    Interleave { a: Arc<CoarseSequence>, b: Arc<CoarseSequence> },
    Transported { inner: Arc<CoarseSequence>, base: Point },
    Join { t: Arc<CoarseSequence>, u: Arc<CoarseSequence>, kappa: MonotoneWitness, lambda: MonotoneWitness },
    /// Explicit prefix, then the continuation sequence from `cont_from` on.
    Splice { prefix: Vec<Point>, cont: Arc<CoarseSequence>, cont_from: u64 },
}

/// A coarse sequence: a finitely described map from the naturals into a
/// pointed space, anchored at the base point, with a declared jump bound.
pub struct CoarseSequence {
    space: Arc<Space>,
    kind: SeqKind,
    jump_bound: ExtDist,
    cache: Mutex<Vec<Point>>,
}

impl CoarseSequence {
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn jump_bound(&self) -> ExtDist {
        self.jump_bound
    }

    /// Deterministic evaluation; `eval(0)` is the base point.
    pub fn eval(&self, i: u64) -> Result<Point> {
        let mut cache = self.cache.lock().unwrap();
        self.fill_cache(&mut cache, i)?;
        Ok(cache[i as usize].clone())
    }

    pub fn eval_prefix(&self, upto: u64) -> Result<Vec<Point>> {
        let mut cache = self.cache.lock().unwrap();
        self.fill_cache(&mut cache, upto)?;
        Ok(cache[..=upto as usize].to_vec())
    }

    fn fill_cache(&self, cache: &mut Vec<Point>, upto: u64) -> Result<()> {
        if cache.len() > upto as usize {
            return Ok(());
        }
        match &self.kind {
            SeqKind::Ray { prefix, tail } => {
                while cache.len() <= upto as usize {
                    let i = cache.len() as u64;
                    let p = if (i as usize) < prefix.len() {
                        prefix[i as usize].clone()
                    } else {
                        match tail {
                            TailRule::Affine { p, v } => {
                                let coords: Vec<i64> = p
                                    .iter()
                                    .zip(v)
                                    .map(|(a, b)| a + (i as i64) * b)
                                    .collect();
                                Point::Coords(coords)
                            }
                            TailRule::Step { v } => {
                                let last = cache
                                    .last()
                                    .cloned()
                                    .or_else(|| prefix.last().cloned())
                                    .expect("ray has a starting point");
                                last.translate(v).ok_or_else(|| {
                                    Error::input("step tail does not apply to this point")
                                })?
                            }
                            TailRule::Digit { d } => {
                                let last = cache
                                    .last()
                                    .cloned()
                                    .or_else(|| prefix.last().cloned())
                                    .expect("ray has a starting point");
                                last.append_digit(*d).ok_or_else(|| {
                                    Error::input("digit tail does not apply to this point")
                                })?
                            }
                        }
                    };
                    cache.push(p);
                }
            }
            SeqKind::Pushforward { map, inner } => {
                let pts = inner.eval_prefix(upto)?;
                for i in cache.len()..=upto as usize {
                    cache.push(map.eval(&pts[i])?);
                }
            }
            SeqKind::Interleave { a, b } => {
                let half = upto / 2;
                let av = a.eval_prefix(half)?;
                let bv = b.eval_prefix(half)?;
                for i in cache.len()..=upto as usize {
                    let j = i / 2;
                    cache.push(if i % 2 == 0 { av[j].clone() } else { bv[j].clone() });
                }
            }
            SeqKind::Transported { inner, base } => {
                let pts = inner.eval_prefix(upto)?;
                for i in cache.len()..=upto as usize {
                    cache.push(if i == 0 { base.clone() } else { pts[i].clone() });
                }
            }
            SeqKind::Join { t, u, kappa, lambda } => {
                // Regenerate blockwise from scratch; blocks alternate a
                // t-segment kappa(n)..=kappa(n+1) and a u-segment
                // lambda(n)..=lambda(n+1).
                let mut pts: Vec<Point> = Vec::with_capacity(upto as usize + 1);
                let mut n = 0u64;
                while pts.len() <= upto as usize {
                    for j in kappa.at(n)..=kappa.at(n + 1) {
                        pts.push(t.eval(j)?);
                    }
                    if pts.len() > upto as usize {
                        break;
                    }
                    for j in lambda.at(n)..=lambda.at(n + 1) {
                        pts.push(u.eval(j)?);
                    }
                    n += 1;
                }
                *cache = pts;
            }
            SeqKind::Splice { prefix, cont, cont_from } => {
                for i in cache.len()..=upto as usize {
                    if i < prefix.len() {
                        cache.push(prefix[i].clone());
                    } else {
                        let j = *cont_from + (i - prefix.len()) as u64;
                        cache.push(cont.eval(j)?);
                    }
                }
            }
        }
        Ok(())
    }

    /// Structural equality of descriptions; evaluation-equal sequences with
    /// different descriptions compare unequal here.
    pub fn same_description(&self, other: &CoarseSequence) -> bool {
        crate::maps::same_presentation(&self.space, &other.space)
            && kind_eq(&self.kind, &other.kind)
    }

    // -- constructors ------------------------------------------------------

    /// Explicit finite prefix plus a tail rule. The value at index 0 must be
    /// the base point; the declared jump bound is measured on a probe prefix.
    pub fn ray(space: Arc<Space>, prefix: Vec<Point>, tail: TailRule) -> Result<Arc<CoarseSequence>> {
        if prefix.is_empty() && !matches!(tail, TailRule::Affine { .. }) {
            return Err(Error::input("step and digit tails need a nonempty prefix"));
        }
        for p in &prefix {
            if !space.contains(p) {
                return Err(Error::input(format!("sequence point {p} is not in {}", space.name())));
            }
        }
        let seq = CoarseSequence {
            space,
            kind: SeqKind::Ray { prefix, tail },
            jump_bound: ExtDist::ZERO,
            cache: Mutex::new(Vec::new()),
        };
        finish(seq)
    }

    /// Unit-speed ray in a coordinate space: base, base+v, base+2v, ...
    pub fn affine_ray(space: Arc<Space>, v: Vec<i64>) -> Result<Arc<CoarseSequence>> {
        let p = space
            .base()
            .coords()
            .ok_or_else(|| Error::input("affine ray needs a coordinate space"))?
            .to_vec();
        CoarseSequence::ray(space, vec![], TailRule::Affine { p, v })
    }

    /// f composed with s. `f` must be certified coarse at s's jump bound and
    /// preserve the base point; the jump bound is the certified output scale.
    pub fn push_forward(
        f: &MapModel,
        s: &Arc<CoarseSequence>,
        horizon: ExtDist,
    ) -> Result<Arc<CoarseSequence>> {
        if !crate::maps::same_presentation(&f.source, s.space()) {
            return Err(Error::input("pushforward source mismatch"));
        }
        if !f.preserves_base()? {
            return Err(Error::input(format!(
                "map {} does not preserve the base point",
                f.name()
            )));
        }
        let cert = certify_bornologous(f, s.jump_bound(), horizon)?;
        if !cert.passed() {
            return Err(Error::Certify(format!(
                "map {} is not certified bornologous at scale {}",
                f.name(),
                s.jump_bound()
            )));
        }
        let seq = CoarseSequence {
            space: Arc::clone(&f.target),
            kind: SeqKind::Pushforward { map: f.clone(), inner: Arc::clone(s) },
            jump_bound: cert.scale_out,
            cache: Mutex::new(Vec::new()),
        };
        finish(seq)
    }

    /// The even/odd interleaving t(2j) = a(j), t(2j+1) = b(j). Requires a
    /// bounded pointwise gap on the checked prefix; both inputs are
    /// subsequences of the result by construction.
    pub fn interleave(
        a: &Arc<CoarseSequence>,
        b: &Arc<CoarseSequence>,
        check_n: u64,
    ) -> Result<Arc<CoarseSequence>> {
        if !crate::maps::same_presentation(a.space(), b.space()) {
            return Err(Error::input("interleave needs a shared pointed space"));
        }
        // Gap evidence: the pointwise gap sup must not keep growing when the
        // checked prefix doubles, otherwise the interleaving has no bounded
        // jump and the construction is refused.
        let mut gap = ExtDist::ZERO;
        let mut gap_double = ExtDist::ZERO;
        let mut worst = 0u64;
        for i in 0..=2 * check_n {
            let d = a.space().dist(&a.eval(i)?, &b.eval(i)?)?;
            if !d.is_finite() {
                return Err(Error::input(format!(
                    "interleave refused: infinite pointwise gap at index {i}"
                )));
            }
            if d > gap_double {
                gap_double = d;
                worst = i;
            }
            if i <= check_n {
                gap = gap.max(d);
            }
        }
        if gap_double > gap {
            return Err(Error::input(format!(
                "interleave refused: pointwise gap still growing at index {worst}"
            )));
        }
        let bound = a.jump_bound() + b.jump_bound() + gap;
        let seq = CoarseSequence {
            space: Arc::clone(a.space()),
            kind: SeqKind::Interleave { a: Arc::clone(a), b: Arc::clone(b) },
            jump_bound: bound,
            cache: Mutex::new(Vec::new()),
        };
        finish(seq)
    }

    /// Base-point transport: the value at 0 becomes `new_base`, all later
    /// values are kept. The new base must be at finite distance from the old.
    pub fn transport_base(s: &Arc<CoarseSequence>, new_base: Point) -> Result<Arc<CoarseSequence>> {
        let d = s.space().dist(s.space().base(), &new_base)?;
        if !d.is_finite() {
            return Err(Error::input(
                "cannot transport the base point across coarsely connected components",
            ));
        }
        let space = Arc::new(s.space().rebased(new_base.clone())?);
        // Collapse nested transports: only index 0 is ever rewritten.
        let inner = match &s.kind {
            SeqKind::Transported { inner, .. } => Arc::clone(inner),
            _ => Arc::clone(s),
        };
        let first_jump = space.dist(&new_base, &inner.eval(1)?)?;
        let seq = CoarseSequence {
            space,
            kind: SeqKind::Transported { inner, base: new_base },
            jump_bound: s.jump_bound().max(first_jump),
            cache: Mutex::new(Vec::new()),
        };
        finish(seq)
    }

    /// Explicit prefix spliced onto a continuation sequence.
    pub fn splice(
        space: Arc<Space>,
        prefix: Vec<Point>,
        cont: &Arc<CoarseSequence>,
        cont_from: u64,
        bound_hint: ExtDist,
    ) -> Result<Arc<CoarseSequence>> {
        if prefix.is_empty() {
            return Err(Error::input("splice needs a nonempty prefix"));
        }
        let seq = CoarseSequence {
            space,
            kind: SeqKind::Splice { prefix, cont: Arc::clone(cont), cont_from },
            jump_bound: bound_hint.max(cont.jump_bound()),
            cache: Mutex::new(Vec::new()),
        };
        finish(seq)
    }
}

/// Shared constructor epilogue: check the anchor and measure the jump bound
/// over the probe prefix, keeping any larger declared bound.
fn finish(mut seq: CoarseSequence) -> Result<Arc<CoarseSequence>> {
    let start = seq.eval(0)?;
    if &start != seq.space.base() {
        return Err(Error::input(format!(
            "sequence starts at {start}, not at the base point {}",
            seq.space.base()
        )));
    }
    let pts = seq.eval_prefix(BOUND_PROBE)?;
    let mut sup = ExtDist::ZERO;
    for w in pts.windows(2) {
        let d = seq.space.dist(&w[0], &w[1])?;
        if !d.is_finite() {
            return Err(Error::input("sequence has an infinite jump on the probe prefix"));
        }
        sup = sup.max(d);
    }
    seq.jump_bound = seq.jump_bound.max(sup);
    Ok(Arc::new(seq))
}

fn kind_eq(a: &SeqKind, b: &SeqKind) -> bool {
    match (a, b) {
        (SeqKind::Ray { prefix: p1, tail: t1 }, SeqKind::Ray { prefix: p2, tail: t2 }) => {
            p1 == p2 && t1 == t2
        }
        (
            SeqKind::Pushforward { map: m1, inner: i1 },
            SeqKind::Pushforward { map: m2, inner: i2 },
        ) => m1.kind() == m2.kind() && i1.same_description(i2),
        (SeqKind::Interleave { a: a1, b: b1 }, SeqKind::Interleave { a: a2, b: b2 }) => {
            a1.same_description(a2) && b1.same_description(b2)
        }
        (
            SeqKind::Transported { inner: i1, base: b1 },
            SeqKind::Transported { inner: i2, base: b2 },
        ) => b1 == b2 && i1.same_description(i2),
        (
            SeqKind::Splice { prefix: p1, cont: c1, cont_from: f1 },
            SeqKind::Splice { prefix: p2, cont: c2, cont_from: f2 },
        ) => p1 == p2 && f1 == f2 && c1.same_description(c2),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Monotone witnesses
// ---------------------------------------------------------------------------

/// A strictly monotone function on the naturals: explicit head values, then
/// an arithmetic tail with a fixed positive step. Validity of a witness is
/// always relative to the prefix it was checked on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneWitness {
    head: Vec<u64>,
    tail_step: u64,
}

impl MonotoneWitness {
    pub fn new(head: Vec<u64>, tail_step: u64) -> Result<MonotoneWitness> {
        if head.is_empty() || tail_step == 0 {
            return Err(Error::input("witness needs a nonempty head and a positive step"));
        }
        if !head.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::input("witness head must be strictly increasing"));
        }
        Ok(MonotoneWitness { head, tail_step })
    }

    pub fn identity() -> MonotoneWitness {
        MonotoneWitness { head: vec![0], tail_step: 1 }
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn at(&self, i: u64) -> u64 {
        let n = self.head.len() as u64;
        if i < n {
            self.head[i as usize]
        } else {
            self.head[self.head.len() - 1] + (i - n + 1) * self.tail_step
        }
    }

    /// Composition (self after inner): i -> self(inner(i)). Exact wherever
    /// both factors are exact; the head covers at least `min_head` indices.
    pub fn compose_after(&self, inner: &MonotoneWitness, min_head: u64) -> MonotoneWitness {
        let len = min_head.max(inner.head.len() as u64).max(2);
        let head: Vec<u64> = (0..len).map(|i| self.at(inner.at(i))).collect();
        let step = (self.at(inner.at(len + 1)) - self.at(inner.at(len))).max(1);
        MonotoneWitness { head, tail_step: step }
    }

    /// Prepend 0 as the image of 0, shifting nothing else; used by base
    /// transport, where only index 0 is rewritten on both sides.
    pub fn anchor_zero(&self) -> MonotoneWitness {
        let mut head = self.head.clone();
        if head[0] != 0 {
            head[0] = 0;
        }
        MonotoneWitness { head, tail_step: self.tail_step }
    }
}

/// Replays a subsequence witness: s(i) = t(w(i)) for every i up to `n`.
pub fn replay_witness(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    w: &MonotoneWitness,
    n: u64,
) -> Result<bool> {
    for i in 0..=n {
        if s.eval(i)? != t.eval(w.at(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Subsequence matching
// ---------------------------------------------------------------------------

/// Three-valued subsequence verdict with replayable evidence.
#[derive(Clone, Debug)]
pub enum SubseqVerdict {
    True(MonotoneWitness),
    False { counterexample: u64 },
    Unknown,
}

impl SubseqVerdict {
    pub fn is_true(&self) -> bool {
        matches!(self, SubseqVerdict::True(_))
    }

    pub fn witness(&self) -> Option<&MonotoneWitness> {
        match self {
            SubseqVerdict::True(w) => Some(w),
            _ => None,
        }
    }
}

/// Greedy leftmost matching of s(0..=n) into t(0..=budget). On finite strings
/// greedy leftmost finds an embedding exactly when one exists.
fn greedy_match(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    n: u64,
    budget: u64,
) -> Result<std::result::Result<Vec<u64>, u64>> {
    let tv = t.eval_prefix(budget)?;
    let mut matches = Vec::with_capacity(n as usize + 1);
    let mut next = 0u64;
    for i in 0..=n {
        let si = s.eval(i)?;
        let mut found = None;
        let mut j = next;
        while j <= budget {
            if tv[j as usize] == si {
                found = Some(j);
                break;
            }
            j += 1;
        }
        match found {
            Some(j) => {
                matches.push(j);
                next = j + 1;
            }
            None => return Ok(Err(i)),
        }
    }
    Ok(Ok(matches))
}

fn witness_from_matches(matches: Vec<u64>) -> MonotoneWitness {
    let step = if matches.len() >= 2 {
        (matches[matches.len() - 1] - matches[matches.len() - 2]).max(1)
    } else {
        1
    };
    MonotoneWitness { head: matches, tail_step: step }
}

/// Decides s ⊑ t on the prefix s(0..=n) against t(0..=m), with one budget
/// doubling. False requires a certified miss: the doubled search failed while
/// t's late values already escape past everything s visits; anything weaker
/// is Unknown.
pub fn is_subsequence(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    n: u64,
    m: u64,
) -> Result<SubseqVerdict> {
    if !crate::maps::same_presentation(s.space(), t.space()) {
        return Err(Error::input("subsequence check across different spaces"));
    }
    if m < n {
        return Err(Error::input("search budget must be at least the prefix length"));
    }
    match greedy_match(s, t, n, m)? {
        Ok(matches) => return Ok(SubseqVerdict::True(witness_from_matches(matches))),
        Err(_) => {}
    }
    let m2 = m * 2;
    match greedy_match(s, t, n, m2)? {
        Ok(matches) => Ok(SubseqVerdict::True(witness_from_matches(matches))),
        Err(i0) => {
            let space = s.space();
            let base = space.base();
            let mut s_max = ExtDist::ZERO;
            for i in 0..=n {
                s_max = s_max.max(space.dist(base, &s.eval(i)?)?);
            }
            let mut t_late_min = ExtDist::Infinity;
            for j in m..=m2 {
                t_late_min = t_late_min.min(space.dist(base, &t.eval(j)?)?);
            }
            let threshold = s_max + s.jump_bound() + t.jump_bound();
            if t_late_min > threshold {
                Ok(SubseqVerdict::False { counterexample: i0 })
            } else {
                Ok(SubseqVerdict::Unknown)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Confluence constructions
// ---------------------------------------------------------------------------

/// Result of a confluence construction: the merged sequence plus replayable
/// witnesses embedding both inputs into it.
pub struct JoinOutcome {
    pub merged: Arc<CoarseSequence>,
    pub witness_t: MonotoneWitness,
    pub witness_u: MonotoneWitness,
}

/// One-step confluence: given s = t∘κ = u∘λ (validated on the working
/// prefix), builds the alternating block sequence that has both t and u as
/// subsequences, with its jump bound the maximum of the inputs' bounds.
pub fn join_pair(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    u: &Arc<CoarseSequence>,
    kappa: &MonotoneWitness,
    lambda: &MonotoneWitness,
    check_n: u64,
) -> Result<JoinOutcome> {
    for (name, big, w) in [("t", t, kappa), ("u", u, lambda)] {
        if !replay_witness(s, big, w, check_n)? {
            let bad = (0..=check_n)
                .find(|&i| {
                    s.eval(i).ok().zip(big.eval(w.at(i)).ok()).map(|(a, b)| a != b).unwrap_or(true)
                })
                .unwrap_or(0);
            return Err(Error::input(format!(
                "witness into {name} fails to replay at index {bad}"
            )));
        }
    }
    // s(0) = t(0) = u(0) = base, so both witnesses can be anchored at 0.
    let kappa = kappa.anchor_zero();
    let lambda = lambda.anchor_zero();
    let bound = s.jump_bound().max(t.jump_bound()).max(u.jump_bound());
    let merged = Arc::new(CoarseSequence {
        space: Arc::clone(s.space()),
        kind: SeqKind::Join {
            t: Arc::clone(t),
            u: Arc::clone(u),
            kappa: kappa.clone(),
            lambda: lambda.clone(),
        },
        jump_bound: bound,
        cache: Mutex::new(Vec::new()),
    });

    // Positions of t(j) and u(j) inside the block pattern, recorded while
    // walking the same blocks the evaluator emits. Heads are generous so
    // downstream folds stay inside the exactly computed region.
    let head_len = 2 * check_n + 8;
    let mut wt: Vec<u64> = Vec::new();
    let mut wu: Vec<u64> = Vec::new();
    let mut pos = 0u64;
    let mut n = 0u64;
    while (wt.len() as u64) <= head_len || (wu.len() as u64) <= head_len {
        // t-block covers kappa(n)..=kappa(n+1)
        for j in kappa.at(n)..=kappa.at(n + 1) {
            if j as usize == wt.len() {
                wt.push(pos);
            }
            pos += 1;
        }
        for j in lambda.at(n)..=lambda.at(n + 1) {
            if j as usize == wu.len() {
                wu.push(pos);
            }
            pos += 1;
        }
        n += 1;
    }
    let witness_t = witness_from_matches(wt);
    let witness_u = witness_from_matches(wu);
    Ok(JoinOutcome { merged, witness_t, witness_u })
}

/// Direction of one link in an equivalence chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkDirection {
    /// The previous sequence embeds into this one (witness: prev = this∘w).
    Up,
    /// This sequence embeds into the previous one (witness: this = prev∘w).
    Down,
}

pub struct ChainLink {
    pub direction: LinkDirection,
    pub seq: Arc<CoarseSequence>,
    pub witness: MonotoneWitness,
}

/// Folds an equivalence chain u_0 .. u_n into a single sequence that has both
/// endpoints as subsequences: each Up link triggers a one-step confluence,
/// each Down link composes witnesses.
pub fn merge_chain(
    first: &Arc<CoarseSequence>,
    links: &[ChainLink],
    check_n: u64,
) -> Result<JoinOutcome> {
    let mut merged = Arc::clone(first);
    let mut w_first = MonotoneWitness::identity();
    let mut w_cur = MonotoneWitness::identity();
    let mut cur = Arc::clone(first);
    for link in links {
        match link.direction {
            LinkDirection::Up => {
                // cur ⊑ next and cur ⊑ merged: join next with merged over cur.
                let out = join_pair(&cur, &link.seq, &merged, &link.witness, &w_cur, check_n)?;
                w_first = out.witness_u.compose_after(&w_first, check_n + 2);
                w_cur = out.witness_t;
                merged = out.merged;
            }
            LinkDirection::Down => {
                // next ⊑ cur ⊑ merged: compose the witnesses.
                if !replay_witness(&link.seq, &cur, &link.witness, check_n)? {
                    return Err(Error::input("chain witness fails to replay"));
                }
                w_cur = w_cur.compose_after(&link.witness, check_n + 2);
            }
        }
        cur = Arc::clone(&link.seq);
    }
    if !replay_witness(first, &merged, &w_first, check_n)? {
        return Err(Error::input("merged chain: first endpoint witness fails to replay"));
    }
    if !replay_witness(&cur, &merged, &w_cur, check_n)? {
        return Err(Error::input("merged chain: last endpoint witness fails to replay"));
    }
    Ok(JoinOutcome { merged, witness_t: w_first, witness_u: w_cur })
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// Bornologousness and escape evidence for a sequence prefix.
#[derive(Clone, Debug, Serialize)]
pub struct SeqCertificate {
    pub jump_sup: ExtDist,
    pub declared_bound: ExtDist,
    /// min distance from the base over the window [N/2, N].
    pub escape_at_n: ExtDist,
    /// min distance from the base over the window [N, 2N].
    pub escape_at_2n: ExtDist,
    pub escape_grows: bool,
}

impl SeqCertificate {
    pub fn ok(&self) -> bool {
        self.jump_sup <= self.declared_bound && self.escape_grows
    }
}

/// Checks the jump bound over s(0..N) (a violation is a hard certification
/// failure naming the index) and gathers escape evidence over the windows
/// [N/2, N] and [N, 2N].
pub fn certify_coarse_seq(s: &Arc<CoarseSequence>, n: u64) -> Result<SeqCertificate> {
    if n < 1 {
        return Err(Error::input("certification prefix must be at least 1"));
    }
    let pts = s.eval_prefix(2 * n)?;
    let space = s.space();
    let mut jump_sup = ExtDist::ZERO;
    for i in 0..n as usize {
        let d = space.dist(&pts[i], &pts[i + 1])?;
        if d > s.jump_bound() {
            return Err(Error::Certify(format!(
                "jump bound violated at index {i}: step {d} exceeds declared {}",
                s.jump_bound()
            )));
        }
        jump_sup = jump_sup.max(d);
    }
    let base = space.base();
    let window_min = |lo: u64, hi: u64| -> Result<ExtDist> {
        let mut min = ExtDist::Infinity;
        for i in lo..=hi {
            let d = space.dist(base, &pts[i as usize])?;
            if d < min {
                min = d;
            }
        }
        Ok(min)
    };
    let escape_at_n = window_min(n / 2, n)?;
    let escape_at_2n = window_min(n, 2 * n)?;
    Ok(SeqCertificate {
        jump_sup,
        declared_bound: s.jump_bound(),
        escape_at_n,
        escape_at_2n,
        escape_grows: escape_at_2n > escape_at_n,
    })
}

// ---------------------------------------------------------------------------
// Declarative JSON description
// ---------------------------------------------------------------------------

/// A sequence description as it appears in a sequence file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeqDesc {
    PrefixAffine {
        #[serde(default)]
        prefix: Vec<Point>,
        tail: AffineTail,
    },
    RayRule {
        prefix: Vec<Point>,
        step: StepDesc,
    },
    Pushforward {
        map: crate::maps::MapKind,
        inner: Box<SeqDesc>,
    },
    Interleave {
        a: Box<SeqDesc>,
        b: Box<SeqDesc>,
    },
    Transported {
        base: Point,
        inner: Box<SeqDesc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineTail {
    pub p: Vec<i64>,
    pub v: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDesc {
    Vector(Vec<i64>),
    Digit(u8),
}

impl SeqDesc {
    /// Builds the sequence over the given space. Pushforward descriptions
    /// are interpreted as endomaps of the same space; interleaves are checked
    /// on the default probe prefix.
    pub fn build(&self, space: &Arc<Space>) -> Result<Arc<CoarseSequence>> {
        match self {
            SeqDesc::PrefixAffine { prefix, tail } => CoarseSequence::ray(
                Arc::clone(space),
                prefix.clone(),
                TailRule::Affine { p: tail.p.clone(), v: tail.v.clone() },
            ),
            SeqDesc::RayRule { prefix, step } => {
                let tail = match step {
                    StepDesc::Vector(v) => TailRule::Step { v: v.clone() },
                    StepDesc::Digit(d) => TailRule::Digit { d: *d },
                };
                CoarseSequence::ray(Arc::clone(space), prefix.clone(), tail)
            }
            SeqDesc::Pushforward { map, inner } => {
                let s = inner.build(space)?;
                let f = MapModel::new(
                    Arc::clone(space),
                    Arc::clone(space),
                    map.clone(),
                    "pushforward",
                );
                CoarseSequence::push_forward(&f, &s, ExtDist::int(BOUND_PROBE as i64))
            }
            SeqDesc::Interleave { a, b } => {
                let sa = a.build(space)?;
                let sb = b.build(space)?;
                CoarseSequence::interleave(&sa, &sb, BOUND_PROBE)
            }
            SeqDesc::Transported { base, inner } => {
                let s = inner.build(space)?;
                CoarseSequence::transport_base(&s, base.clone())
            }
        }
    }
}

/// Top-level sequence file: a description plus the schema stamp.
#[derive(Clone, Debug)]
pub struct SeqFile {
    pub schema: u32,
    pub desc: SeqDesc,
    pub name: Option<String>,
}

impl SeqFile {
    pub fn parse(text: &str) -> Result<SeqFile> {
        let mut v: serde_json::Value = serde_json::from_str(text)?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| Error::input("sequence file must be a JSON object"))?;
        let schema = obj
            .remove("schema")
            .and_then(|s| s.as_u64())
            .ok_or_else(|| Error::input("sequence file is missing the schema field"))?
            as u32;
        if schema != crate::SCHEMA_VERSION {
            return Err(Error::input(format!("unsupported schema version {schema}")));
        }
        let name = match obj.remove("name") {
            Some(serde_json::Value::String(s)) => Some(s),
            Some(_) => return Err(Error::input("sequence name must be a string")),
            None => None,
        };
        let desc: SeqDesc = serde_json::from_value(v)?;
        Ok(SeqFile { schema, desc, name })
    }
}
