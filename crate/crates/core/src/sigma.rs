//! Sequential ends and the invariant: classifying coarse sequences against an
//! annulus tower, the four-valued sequence distance, the class-set computation
//! with its two-route crosscheck, and the induced map on classes.

use crate::chains::{annulus_tower, end_count, AnnulusTower, EndReport};
use crate::dist::ExtDist;
use crate::maps::MapModel;
use crate::point::Point;
use crate::seq::{
    certify_coarse_seq, is_subsequence, replay_witness, CoarseSequence, MonotoneWitness,
    SubseqVerdict,
};
use crate::space::Space;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

/// Everything needed to talk about ends of one pointed space at one scale:
/// the large-horizon tower plus the stability report over both horizons.
pub struct SigmaContext {
    space: Arc<Space>,
    k: ExtDist,
    radii: Vec<ExtDist>,
    horizons: (ExtDist, ExtDist),
    tower: AnnulusTower,
    report: EndReport,
    /// How far along a sequence the classifier scans.
    scan: u64,
}

impl SigmaContext {
    pub fn new(
        space: &Arc<Space>,
        k: ExtDist,
        radii: &[ExtDist],
        horizons: (ExtDist, ExtDist),
    ) -> Result<SigmaContext> {
        let report = end_count(space, k, radii, horizons)?;
        let tower = annulus_tower(space, k, radii, horizons.1)?;
        let scan = 4 * horizons.1.floor_int().unwrap_or(1).max(1) as u64 + 16;
        Ok(SigmaContext {
            space: Arc::clone(space),
            k,
            radii: radii.to_vec(),
            horizons,
            tower,
            report,
            scan,
        })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn k(&self) -> ExtDist {
        self.k
    }

    pub fn tower(&self) -> &AnnulusTower {
        &self.tower
    }

    pub fn report(&self) -> &EndReport {
        &self.report
    }
}

/// Where a sequence tail settles at one tower level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelFit {
    pub level: usize,
    /// First scanned index from which the in-ball tail stays in the annulus.
    pub start: u64,
    pub class: usize,
}

/// Outcome of classifying one sequence against a tower.
#[derive(Clone, Debug)]
pub enum Classification {
    Classified { fits: Vec<LevelFit>, thread: Option<usize> },
    Unknown { reason: String },
}

impl Classification {
    pub fn thread(&self) -> Option<usize> {
        match self {
            Classification::Classified { thread, .. } => *thread,
            Classification::Unknown { .. } => None,
        }
    }

    pub fn fits(&self) -> Option<&[LevelFit]> {
        match self {
            Classification::Classified { fits, .. } => Some(fits),
            Classification::Unknown { .. } => None,
        }
    }
}

/// In-ball samples of a sequence prefix: (index, point, distance from base).
fn ball_trace(
    s: &Arc<CoarseSequence>,
    ctx: &SigmaContext,
) -> Result<Vec<(u64, Point, ExtDist)>> {
    let base = ctx.space.base();
    let mut out = Vec::new();
    for i in 0..=ctx.scan {
        let p = s.eval(i)?;
        let d = ctx.space.dist(base, &p)?;
        if d <= ctx.tower.outer() {
            out.push((i, p, d));
        }
    }
    Ok(out)
}

/// Locates the tail of `s` in every level of the tower. A jump bound above
/// the tower scale is a refusal; a tail that straddles classes, or never
/// settles inside an annulus, is Unknown.
pub fn classify_sequence(s: &Arc<CoarseSequence>, ctx: &SigmaContext) -> Result<Classification> {
    if !crate::maps::same_presentation(s.space(), &ctx.space) {
        return Err(Error::input("sequence and tower live in different pointed spaces"));
    }
    if s.jump_bound() > ctx.k {
        return Err(Error::input(format!(
            "sequence jump bound {} exceeds the tower scale {}",
            s.jump_bound(),
            ctx.k
        )));
    }
    let trace = ball_trace(s, ctx)?;
    let mut fits = Vec::new();
    for (j, &r) in ctx.radii.iter().enumerate() {
        // Start after the last in-ball sample that is still too shallow.
        let start = trace
            .iter()
            .filter(|(_, _, d)| *d < r)
            .map(|(i, _, _)| *i + 1)
            .last()
            .unwrap_or(0);
        let window: Vec<&(u64, Point, ExtDist)> =
            trace.iter().filter(|(i, _, _)| *i >= start).collect();
        if window.is_empty() {
            return Ok(Classification::Unknown {
                reason: format!("no tail samples inside annulus level {j}"),
            });
        }
        let mut classes: Vec<usize> = Vec::new();
        for (_, p, _) in &window {
            match ctx.tower.class_at(j, p) {
                Some(c) => classes.push(c),
                None => {
                    return Ok(Classification::Unknown {
                        reason: format!("tail sample escapes the level-{j} carrier"),
                    })
                }
            }
        }
        classes.dedup();
        if classes.len() != 1 {
            return Ok(Classification::Unknown {
                reason: format!("tail straddles {} classes at level {j}", classes.len()),
            });
        }
        fits.push(LevelFit { level: j, start: window[0].0, class: classes[0] });
    }
    let thread = ctx
        .report
        .threads
        .iter()
        .find(|t| t.classes.iter().zip(&fits).all(|(c, f)| *c == f.class))
        .map(|t| t.id);
    Ok(Classification::Classified { fits, thread })
}

// ---------------------------------------------------------------------------
// Bridged supersequence construction
// ---------------------------------------------------------------------------

/// A constructed common supersequence with replayable embeddings. The witness
/// for `s` is total (the construction ends in s's own tail); the witness for
/// `t` is verified up to `verified_t`.
pub struct Supersequence {
    pub v: Arc<CoarseSequence>,
    pub witness_s: MonotoneWitness,
    pub witness_t: MonotoneWitness,
    pub verified_t: u64,
}

pub enum BuildOutcome {
    Built(Box<Supersequence>),
    /// A deep bridge found no K-chain path between its endpoints even though
    /// both lie in the carrier: constructive evidence of distinct ends.
    Disconnected { level: usize },
    Inconclusive { reason: String },
}

/// Breadth-first K-step path inside one annulus carrier (or the whole ball
/// when `level` is None). Endpoints are admitted even if slightly outside the
/// carrier. Returns None when no path exists.
fn bridge(
    ctx: &SigmaContext,
    level: Option<usize>,
    from: &Point,
    to: &Point,
) -> Result<Option<Vec<Point>>> {
    let model = ctx.tower.model();
    let (a, b) = match (model.index_of(from), model.index_of(to)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::input("bridge endpoint escapes the working ball")),
    };
    let mut allowed: HashSet<usize> = match level {
        Some(j) => ctx.tower.levels()[j].members().iter().copied().collect(),
        None => (0..model.len()).collect(),
    };
    allowed.insert(a);
    allowed.insert(b);
    let neighbor_lists = model.space().is_some();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    parent.insert(a, a);
    while let Some(cur) = queue.pop_front() {
        if cur == b {
            break;
        }
        let p = model.point(cur);
        let nexts: Vec<usize> = if neighbor_lists {
            match ctx.space.neighbors(p, ctx.k) {
                Some(ns) => ns
                    .iter()
                    .filter_map(|q| model.index_of(q))
                    .filter(|j| allowed.contains(j) && model.dist_idx(cur, *j) <= ctx.k)
                    .collect(),
                None => allowed
                    .iter()
                    .copied()
                    .filter(|&j| j != cur && model.dist_idx(cur, j) <= ctx.k)
                    .collect(),
            }
        } else {
            allowed
                .iter()
                .copied()
                .filter(|&j| j != cur && model.dist_idx(cur, j) <= ctx.k)
                .collect()
        };
        for n in nexts {
            if !parent.contains_key(&n) {
                parent.insert(n, cur);
                queue.push_back(n);
            }
        }
    }
    if !parent.contains_key(&b) {
        return Ok(None);
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    Ok(Some(path.into_iter().map(|i| model.point(i).clone()).collect()))
}

/// Anchor indices, one per level: strictly increasing sample indices whose
/// points sit in the level's annulus with room for one more jump inside the
/// ball.
fn pick_anchors(
    trace: &[(u64, Point, ExtDist)],
    fits: &[LevelFit],
    radii: &[ExtDist],
    outer: ExtDist,
    bound: ExtDist,
) -> Option<Vec<u64>> {
    let mut anchors = Vec::with_capacity(fits.len());
    let mut prev: Option<u64> = None;
    for (j, fit) in fits.iter().enumerate() {
        let lo = match prev {
            Some(p) => fit.start.max(p + 1),
            None => fit.start,
        };
        let a = trace.iter().find(|(i, _, d)| {
            *i >= lo && *d >= radii[j] && *d + bound <= outer
        })?;
        anchors.push(a.0);
        prev = Some(a.0);
    }
    Some(anchors)
}

/// Builds a common supersequence of s and t by alternating segments of both
/// through deeper and deeper annuli, joined by K-chain bridges. Each bridge
/// at depth j runs inside the annulus one level shallower, so the deepest
/// alternation genuinely separates sequences with distinct tails.
pub fn build_common_supersequence(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    ctx: &SigmaContext,
) -> Result<BuildOutcome> {
    let (fits_s, fits_t) = match (classify_sequence(s, ctx)?, classify_sequence(t, ctx)?) {
        (
            Classification::Classified { fits: fs, .. },
            Classification::Classified { fits: ft, .. },
        ) => (fs, ft),
        (Classification::Unknown { reason }, _) | (_, Classification::Unknown { reason }) => {
            return Ok(BuildOutcome::Inconclusive { reason })
        }
    };
    let trace_s = ball_trace(s, ctx)?;
    let trace_t = ball_trace(t, ctx)?;
    let outer = ctx.tower.outer();
    let anchors_s = pick_anchors(&trace_s, &fits_s, &ctx.radii, outer, s.jump_bound());
    let anchors_t = pick_anchors(&trace_t, &fits_t, &ctx.radii, outer, t.jump_bound());
    let (aa, bb) = match (anchors_s, anchors_t) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Ok(BuildOutcome::Inconclusive {
                reason: "no alternation anchors inside the working ball".into(),
            })
        }
    };
    let m = ctx.radii.len();

    let mut prefix: Vec<Point> = Vec::new();
    let mut pos_s: Vec<u64> = Vec::new(); // pos_s[i] = position of s(i)
    let mut pos_t: Vec<u64> = Vec::new();
    let push = |prefix: &mut Vec<Point>, p: Point| -> u64 {
        prefix.push(p);
        (prefix.len() - 1) as u64
    };

    // Opening: s up to its first anchor, back to the base, t up to its first
    // anchor. The walk back is unconstrained: it only has to exist.
    for i in 0..=aa[0] {
        let pos = push(&mut prefix, s.eval(i)?);
        pos_s.push(pos);
    }
    match bridge(ctx, None, &s.eval(aa[0])?, &t.eval(0)?)? {
        Some(path) => {
            for p in path.into_iter().skip(1) {
                push(&mut prefix, p);
            }
        }
        None => return Ok(BuildOutcome::Disconnected { level: 0 }),
    }
    // The bridge ends at t(0); record that position for the t-witness.
    pos_t.push((prefix.len() - 1) as u64);
    for i in 1..=bb[0] {
        let pos = push(&mut prefix, t.eval(i)?);
        pos_t.push(pos);
    }

    // Deep alternation: at stage j both tails are past radius r_j; bridges
    // run in the annulus one level shallower (unconstrained at stage 0).
    for j in 0..m {
        let carrier = if j == 0 { None } else { Some(j - 1) };
        match bridge(ctx, carrier, &t.eval(bb[j])?, &s.eval(aa[j] + 1)?)? {
            Some(path) => {
                for p in path.into_iter().skip(1) {
                    push(&mut prefix, p);
                }
            }
            None => return Ok(BuildOutcome::Disconnected { level: j }),
        }
        // Position of s(aa[j] + 1), the bridge's last point.
        let mut next_pos = (prefix.len() - 1) as u64;
        if j + 1 < m {
            pos_s.push(next_pos);
            for i in aa[j] + 2..=aa[j + 1] {
                let pos = push(&mut prefix, s.eval(i)?);
                pos_s.push(pos);
            }
            match bridge(ctx, carrier, &s.eval(aa[j + 1])?, &t.eval(bb[j] + 1)?)? {
                Some(path) => {
                    for p in path.into_iter().skip(1) {
                        push(&mut prefix, p);
                    }
                }
                None => return Ok(BuildOutcome::Disconnected { level: j }),
            }
            next_pos = (prefix.len() - 1) as u64;
            pos_t.push(next_pos);
            for i in bb[j] + 2..=bb[j + 1] {
                let pos = push(&mut prefix, t.eval(i)?);
                pos_t.push(pos);
            }
        } else {
            // Deepest stage: drop the bridge's final point from the prefix;
            // the continuation takes over exactly there.
            prefix.pop();
        }
    }

    let cont_from = aa[m - 1] + 1;
    // Measure the true jump sup of the prefix plus the seam into the tail.
    let mut sup = ExtDist::ZERO;
    for w in prefix.windows(2) {
        sup = sup.max(ctx.space.dist(&w[0], &w[1])?);
    }
    sup = sup.max(ctx.space.dist(prefix.last().unwrap(), &s.eval(cont_from)?)?);
    let v = CoarseSequence::splice(Arc::clone(&ctx.space), prefix.clone(), s, cont_from, sup)?;

    pos_s.push(prefix.len() as u64); // s(cont_from) opens the tail
    let witness_s = MonotoneWitness::new(pos_s, 1)?;
    let verified_t = (pos_t.len() - 1) as u64;
    let last_step = if pos_t.len() >= 2 {
        (pos_t[pos_t.len() - 1] - pos_t[pos_t.len() - 2]).max(1)
    } else {
        1
    };
    let witness_t = MonotoneWitness::new(pos_t, last_step)?;
    Ok(BuildOutcome::Built(Box::new(Supersequence { v, witness_s, witness_t, verified_t })))
}

// ---------------------------------------------------------------------------
// Sequence distance
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DistanceParams {
    /// Prefix length for equality checks and witness replays.
    pub check_n: u64,
    /// Search budget for subsequence matching (doubled once internally).
    pub search_m: u64,
}

impl Default for DistanceParams {
    fn default() -> Self {
        DistanceParams { check_n: 256, search_m: 1024 }
    }
}

/// The value of d_S as far as this engine can certify it. The metric only
/// takes the values 0, 1, 2 and infinity; everything else is Unknown.
pub enum SeqDistance {
    Zero,
    One { s_into_t: bool, witness: MonotoneWitness },
    Two(Box<Supersequence>),
    Infinite { thread_s: usize, thread_t: usize },
    Unknown { reason: String },
}

impl SeqDistance {
    pub fn label(&self) -> &'static str {
        match self {
            SeqDistance::Zero => "0",
            SeqDistance::One { .. } => "1",
            SeqDistance::Two(_) => "2",
            SeqDistance::Infinite { .. } => "inf",
            SeqDistance::Unknown { .. } => "unknown",
        }
    }
}

impl std::fmt::Display for SeqDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn sequence_distance(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    ctx: &SigmaContext,
    params: DistanceParams,
) -> Result<SeqDistance> {
    if !crate::maps::same_presentation(s.space(), t.space()) {
        return Err(Error::input("sequence distance across different pointed spaces"));
    }
    // 0: identical descriptions, or evaluation-equal over the doubled prefix.
    if s.same_description(t) {
        return Ok(SeqDistance::Zero);
    }
    let mut eval_equal = true;
    for i in 0..=2 * params.check_n {
        if s.eval(i)? != t.eval(i)? {
            eval_equal = false;
            break;
        }
    }
    if eval_equal {
        return Ok(SeqDistance::Zero);
    }
    // 1: a subsequence relation in either direction.
    if let SubseqVerdict::True(w) = is_subsequence(s, t, params.check_n, params.search_m)? {
        return Ok(SeqDistance::One { s_into_t: true, witness: w });
    }
    if let SubseqVerdict::True(w) = is_subsequence(t, s, params.check_n, params.search_m)? {
        return Ok(SeqDistance::One { s_into_t: false, witness: w });
    }
    // The ends route decides between 2 and infinity.
    let cs = classify_sequence(s, ctx)?;
    let ct = classify_sequence(t, ctx)?;
    match (cs.thread(), ct.thread()) {
        (Some(a), Some(b)) if a != b => Ok(SeqDistance::Infinite { thread_s: a, thread_t: b }),
        (Some(a), Some(b)) => {
            debug_assert_eq!(a, b);
            match build_common_supersequence(s, t, ctx)? {
                BuildOutcome::Built(sup) => {
                    let n = params.check_n.min(sup.verified_t);
                    if !replay_witness(s, &sup.v, &sup.witness_s, params.check_n)?
                        || !replay_witness(t, &sup.v, &sup.witness_t, n)?
                    {
                        return Err(Error::Certify(
                            "constructed supersequence witness fails to replay".into(),
                        ));
                    }
                    let cert = certify_coarse_seq(&sup.v, params.check_n.max(2))?;
                    if !cert.ok() {
                        return Ok(SeqDistance::Unknown {
                            reason: "constructed supersequence fails certification".into(),
                        });
                    }
                    Ok(SeqDistance::Two(sup))
                }
                BuildOutcome::Disconnected { level } => Ok(SeqDistance::Unknown {
                    reason: format!(
                        "same thread but the level-{level} bridge found no path"
                    ),
                }),
                BuildOutcome::Inconclusive { reason } => Ok(SeqDistance::Unknown { reason }),
            }
        }
        _ => Ok(SeqDistance::Unknown {
            reason: "at least one sequence could not be classified".into(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Crosschecks and the class-set computation
// ---------------------------------------------------------------------------

/// Agreement record between the ends route (tower threads) and the sequence
/// route (subsequence matching and bridge construction) on one pair.
#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckRecord {
    pub ends_same: Option<bool>,
    pub seq_same: Option<bool>,
    pub consistent: bool,
}

pub fn crosscheck_equivalence(
    s: &Arc<CoarseSequence>,
    t: &Arc<CoarseSequence>,
    ctx: &SigmaContext,
    params: DistanceParams,
) -> Result<CrosscheckRecord> {
    let ends_same = match (classify_sequence(s, ctx)?.thread(), classify_sequence(t, ctx)?.thread())
    {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let direct = is_subsequence(s, t, params.check_n, params.search_m)?.is_true()
        || is_subsequence(t, s, params.check_n, params.search_m)?.is_true();
    let seq_same = if direct {
        Some(true)
    } else {
        match build_common_supersequence(s, t, ctx)? {
            BuildOutcome::Built(_) => Some(true),
            BuildOutcome::Disconnected { .. } => Some(false),
            BuildOutcome::Inconclusive { .. } => None,
        }
    };
    let consistent = match (ends_same, seq_same) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    Ok(CrosscheckRecord { ends_same, seq_same, consistent })
}

/// One named input sequence for the class-set computation.
pub struct SigmaInput {
    pub name: String,
    pub seq: Arc<CoarseSequence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assignment {
    pub name: String,
    pub thread: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub record: CrosscheckRecord,
}

/// In-memory result of the class-set computation; `report` gives the
/// serializable view.
pub struct SigmaAnalysis<'a> {
    pub ctx: &'a SigmaContext,
    pub inputs: Vec<SigmaInput>,
    pub assignments: Vec<Assignment>,
    pub checks: Vec<PairCheck>,
}

impl SigmaAnalysis<'_> {
    /// Distinct threads among the classified inputs.
    pub fn class_count(&self) -> usize {
        let mut ids: Vec<usize> = self.assignments.iter().filter_map(|a| a.thread).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    pub fn contradictions(&self) -> usize {
        self.checks.iter().filter(|c| !c.record.consistent).count()
    }

    pub fn report(&self) -> SigmaReport {
        SigmaReport {
            schema: crate::SCHEMA_VERSION,
            space: self.ctx.space.name().to_string(),
            k: self.ctx.k,
            radii: self.ctx.radii.clone(),
            horizons: self.ctx.horizons,
            ends: self.ctx.report.clone(),
            assignments: self.assignments.clone(),
            class_count: self.class_count(),
            crosschecks: self.checks.clone(),
            contradictions: self.contradictions(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaReport {
    pub schema: u32,
    pub space: String,
    pub k: ExtDist,
    pub radii: Vec<ExtDist>,
    pub horizons: (ExtDist, ExtDist),
    pub ends: EndReport,
    pub assignments: Vec<Assignment>,
    pub class_count: usize,
    pub crosschecks: Vec<PairCheck>,
    pub contradictions: usize,
}

/// Computes the class set of the given sequences: classify every input
/// against the tower, then crosscheck every pair both ways.
pub fn sigma<'a>(
    ctx: &'a SigmaContext,
    inputs: Vec<SigmaInput>,
    params: DistanceParams,
) -> Result<SigmaAnalysis<'a>> {
    let mut assignments = Vec::with_capacity(inputs.len());
    for input in &inputs {
        match classify_sequence(&input.seq, ctx) {
            Ok(c) => {
                let note = match &c {
                    Classification::Unknown { reason } => Some(reason.clone()),
                    Classification::Classified { thread: None, .. } => {
                        Some("no surviving thread carries this tail".into())
                    }
                    _ => None,
                };
                assignments.push(Assignment { name: input.name.clone(), thread: c.thread(), note });
            }
            Err(e) => {
                assignments.push(Assignment {
                    name: input.name.clone(),
                    thread: None,
                    note: Some(e.to_string()),
                });
            }
        }
    }
    let mut checks = Vec::new();
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            let record = crosscheck_equivalence(&inputs[i].seq, &inputs[j].seq, ctx, params)?;
            checks.push(PairCheck {
                a: inputs[i].name.clone(),
                b: inputs[j].name.clone(),
                record,
            });
        }
    }
    Ok(SigmaAnalysis { ctx, inputs, assignments, checks })
}

/// DOT rendering: one node per thread, one node per sequence, membership
/// edges.
pub fn sigma_dot(analysis: &SigmaAnalysis<'_>) -> String {
    let mut out = String::from("digraph sigma {\n  rankdir=LR;\n");
    for t in &analysis.ctx.report.threads {
        let _ = writeln!(
            out,
            "  \"end{}\" [shape=doublecircle,label=\"end {} @ {}\"];",
            t.id, t.id, t.representative
        );
    }
    for a in &analysis.assignments {
        let _ = writeln!(out, "  \"{}\" [shape=box];", a.name);
        if let Some(th) = a.thread {
            let _ = writeln!(out, "  \"{}\" -> \"end{}\";", a.name, th);
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// The induced map on classes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ThreadImage {
    pub input: String,
    pub source_thread: usize,
    pub image_thread: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaMapReport {
    pub map: String,
    pub images: Vec<ThreadImage>,
    /// True when every source thread has a single image thread across all of
    /// its member sequences.
    pub well_defined: bool,
}

/// Pushes every classified sequence of `src` through `f` and classifies the
/// image in the target context. Well-definedness is checked on the members:
/// two sequences sharing a source thread must land in the same target thread.
pub fn sigma_map(
    f: &MapModel,
    src: &SigmaAnalysis<'_>,
    tgt: &SigmaContext,
    horizon: ExtDist,
) -> Result<SigmaMapReport> {
    if !crate::maps::same_presentation(&f.source, &src.ctx.space) {
        return Err(Error::input("map source does not match the source context"));
    }
    if !crate::maps::same_presentation(&f.target, &tgt.space) {
        return Err(Error::input("map target does not match the target context"));
    }
    let mut images = Vec::new();
    let mut per_thread: HashMap<usize, HashSet<Option<usize>>> = HashMap::new();
    for (input, assignment) in src.inputs.iter().zip(&src.assignments) {
        let Some(source_thread) = assignment.thread else { continue };
        let pushed = CoarseSequence::push_forward(f, &input.seq, horizon)?;
        let image_thread = classify_sequence(&pushed, tgt)?.thread();
        per_thread.entry(source_thread).or_default().insert(image_thread);
        images.push(ThreadImage { input: input.name.clone(), source_thread, image_thread });
    }
    let well_defined = per_thread
        .values()
        .all(|set| set.len() == 1 && !set.contains(&None));
    Ok(SigmaMapReport { map: f.name().to_string(), images, well_defined })
}

// ---------------------------------------------------------------------------
// Thread representatives as sequences
// ---------------------------------------------------------------------------

fn stays_in_thread(ctx: &SigmaContext, classes: &[usize], p: &Point) -> bool {
    (0..ctx.radii.len()).all(|j| match ctx.tower.class_at(j, p) {
        Some(c) => c == classes[j],
        None => true,
    })
}

/// Extends the last step of a walk into a tail rule, when the step is a
/// translation or a digit append.
fn tail_from_step(prev: &Point, last: &Point) -> Option<crate::seq::TailRule> {
    match (prev, last) {
        (Point::Coords(a), Point::Coords(b)) if a.len() == b.len() => {
            let v: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
            if v.iter().all(|&x| x == 0) {
                None
            } else {
                Some(crate::seq::TailRule::Step { v })
            }
        }
        (Point::Word(a), Point::Word(b)) if b.len() == a.len() + 1 && b.starts_with(a) => {
            Some(crate::seq::TailRule::Digit { d: b[a.len()] })
        }
        (Point::Part(i, a), Point::Part(j, b)) if i == j => tail_from_step(a, b),
        _ => None,
    }
}

/// One ray-rule sequence per surviving thread: a shortest K-step walk from
/// the base to the thread's far representative that never enters a foreign
/// class, extended by its final step. Gives the report a certified lower
/// bound on the class count.
pub fn generate_thread_rays(ctx: &SigmaContext) -> Result<Vec<SigmaInput>> {
    let model = ctx.tower.model();
    let neighbor_lists = model.space().is_some();
    let mut out = Vec::new();
    for thread in &ctx.report.threads {
        let target = model
            .index_of(&thread.representative)
            .ok_or_else(|| Error::Certify("thread representative left the ball".into()))?;
        let start = model.base_idx();
        let mut parent: HashMap<usize, usize> = HashMap::from([(start, start)]);
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            if cur == target {
                break;
            }
            let p = model.point(cur);
            let nexts: Vec<usize> = if neighbor_lists {
                match ctx.space.neighbors(p, ctx.k) {
                    Some(ns) => ns.iter().filter_map(|q| model.index_of(q)).collect(),
                    None => (0..model.len()).collect(),
                }
            } else {
                (0..model.len()).collect()
            };
            for n in nexts {
                if n != cur
                    && !parent.contains_key(&n)
                    && model.dist_idx(cur, n) <= ctx.k
                    && stays_in_thread(ctx, &thread.classes, model.point(n))
                {
                    parent.insert(n, cur);
                    queue.push_back(n);
                }
            }
        }
        if !parent.contains_key(&target) {
            return Err(Error::Certify(format!(
                "no in-thread walk reaches the representative of thread {}",
                thread.id
            )));
        }
        let mut idx_path = vec![target];
        let mut cur = target;
        while cur != start {
            cur = parent[&cur];
            idx_path.push(cur);
        }
        idx_path.reverse();
        let path: Vec<Point> = idx_path.iter().map(|&i| model.point(i).clone()).collect();
        if path.len() < 2 {
            return Err(Error::Certify(format!("degenerate walk for thread {}", thread.id)));
        }
        let tail = tail_from_step(&path[path.len() - 2], &path[path.len() - 1]).ok_or_else(
            || Error::Certify(format!("no extendable tail step for thread {}", thread.id)),
        )?;
        let seq = CoarseSequence::ray(Arc::clone(&ctx.space), path, tail)?;
        out.push(SigmaInput { name: format!("thread{}", thread.id), seq });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::default_schedule;

    fn z_ctx() -> SigmaContext {
        let z = Arc::new(Space::line());
        let k = ExtDist::int(1);
        let (radii, horizons) = default_schedule(k, 3);
        SigmaContext::new(&z, k, &radii, horizons).unwrap()
    }

    fn ray(ctx: &SigmaContext, v: i64) -> Arc<CoarseSequence> {
        CoarseSequence::affine_ray(Arc::clone(ctx.space()), vec![v]).unwrap()
    }

    fn small() -> DistanceParams {
        DistanceParams { check_n: 24, search_m: 96 }
    }

    #[test]
    fn rays_classify_to_opposite_threads() {
        let ctx = z_ctx();
        assert_eq!(ctx.report().count, Some(2));
        let plus = classify_sequence(&ray(&ctx, 1), &ctx).unwrap();
        let minus = classify_sequence(&ray(&ctx, -1), &ctx).unwrap();
        let (a, b) = (plus.thread().unwrap(), minus.thread().unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn too_jumpy_sequences_are_refused() {
        let ctx = z_ctx();
        let fast = CoarseSequence::affine_ray(Arc::clone(ctx.space()), vec![3]).unwrap();
        assert!(classify_sequence(&fast, &ctx).is_err());
    }

    #[test]
    fn distance_zero_and_one() {
        let ctx = z_ctx();
        let s = ray(&ctx, 1);
        let also_s = ray(&ctx, 1);
        assert!(matches!(
            sequence_distance(&s, &also_s, &ctx, small()).unwrap(),
            SeqDistance::Zero
        ));
        // Same ray through a doubled index witness: 0, then every other point.
        let skip = CoarseSequence::ray(
            Arc::clone(ctx.space()),
            vec![],
            crate::seq::TailRule::Affine { p: vec![0], v: vec![1] },
        )
        .unwrap();
        let d = sequence_distance(&skip, &s, &ctx, small()).unwrap();
        assert!(matches!(d, SeqDistance::Zero), "got {d}");
    }

    #[test]
    fn distance_infinite_for_opposite_rays() {
        let ctx = z_ctx();
        let d = sequence_distance(&ray(&ctx, 1), &ray(&ctx, -1), &ctx, small()).unwrap();
        assert!(matches!(d, SeqDistance::Infinite { .. }), "got {d}");
    }

    #[test]
    fn distance_two_same_end_incomparable() {
        // Evens versus odds toward +infinity: neither embeds in the other,
        // but they share the end. Needs scale 2.
        let z = Arc::new(Space::line());
        let k = ExtDist::int(2);
        let (radii, horizons) = default_schedule(k, 3);
        let ctx = SigmaContext::new(&z, k, &radii, horizons).unwrap();
        let s = ray(&ctx, 2);
        let t = CoarseSequence::ray(
            Arc::clone(ctx.space()),
            vec![Point::int(0)],
            crate::seq::TailRule::Affine { p: vec![-1], v: vec![2] },
        )
        .unwrap();
        let d = sequence_distance(&s, &t, &ctx, small()).unwrap();
        match d {
            SeqDistance::Two(sup) => {
                assert!(replay_witness(&s, &sup.v, &sup.witness_s, 24).unwrap());
                let n = sup.verified_t.min(24);
                assert!(replay_witness(&t, &sup.v, &sup.witness_t, n).unwrap());
            }
            other => panic!("expected 2, got {other}"),
        }
    }

    #[test]
    fn crosscheck_routes_agree() {
        let ctx = z_ctx();
        let s = ray(&ctx, 1);
        let t = ray(&ctx, -1);
        let rec = crosscheck_equivalence(&s, &t, &ctx, small()).unwrap();
        assert_eq!(rec.ends_same, Some(false));
        assert!(rec.consistent);
    }

    #[test]
    fn sigma_class_count_on_z() {
        let ctx = z_ctx();
        let inputs = vec![
            SigmaInput { name: "plus".into(), seq: ray(&ctx, 1) },
            SigmaInput { name: "minus".into(), seq: ray(&ctx, -1) },
            SigmaInput {
                name: "plus_shifted".into(),
                seq: CoarseSequence::ray(
                    Arc::clone(ctx.space()),
                    vec![Point::int(0), Point::int(1), Point::int(1)],
                    crate::seq::TailRule::Step { v: vec![1] },
                )
                .unwrap(),
            },
        ];
        let analysis = sigma(&ctx, inputs, small()).unwrap();
        assert_eq!(analysis.class_count(), 2);
        assert_eq!(analysis.contradictions(), 0);
        let json = serde_json::to_string(&analysis.report()).unwrap();
        assert!(json.contains("\"class_count\":2"));
        let dot = sigma_dot(&analysis);
        assert!(dot.contains("digraph sigma"));
    }

    #[test]
    fn sigma_map_identity_is_well_defined() {
        let ctx = z_ctx();
        let inputs = vec![
            SigmaInput { name: "plus".into(), seq: ray(&ctx, 1) },
            SigmaInput { name: "minus".into(), seq: ray(&ctx, -1) },
        ];
        let analysis = sigma(&ctx, inputs, small()).unwrap();
        let f = MapModel::identity(Arc::clone(ctx.space()));
        let rep = sigma_map(&f, &analysis, &ctx, ExtDist::int(16)).unwrap();
        assert!(rep.well_defined);
        assert_eq!(rep.images.len(), 2);
        let mut targets: Vec<Option<usize>> =
            rep.images.iter().map(|i| i.image_thread).collect();
        targets.sort_unstable();
        targets.dedup();
        assert_eq!(targets.len(), 2);
    }

    #[test]
    fn generated_rays_cover_both_z_threads() {
        let ctx = z_ctx();
        let rays = generate_thread_rays(&ctx).unwrap();
        assert_eq!(rays.len(), 2);
        let analysis = sigma(&ctx, rays, small()).unwrap();
        assert_eq!(analysis.class_count(), 2);
        assert_eq!(analysis.contradictions(), 0);
    }

    #[test]
    fn adaptive_schedule_matches_space_growth() {
        let z = Arc::new(Space::line());
        let (radii, horizons) = crate::chains::adaptive_schedule(&z, ExtDist::int(1), 30_000).unwrap();
        assert_eq!(radii, vec![ExtDist::int(2), ExtDist::int(4), ExtDist::int(8), ExtDist::int(16)]);
        assert_eq!(horizons, (ExtDist::int(64), ExtDist::int(128)));
        let tree = Arc::new(Space::tree(2));
        let (radii, horizons) = crate::chains::adaptive_schedule(&tree, ExtDist::int(1), 30_000).unwrap();
        assert_eq!(radii, vec![ExtDist::int(1), ExtDist::int(2), ExtDist::int(3)]);
        assert_eq!(horizons, (ExtDist::int(5), ExtDist::int(10)));
    }
}
