//! Shared test oracles: breadth-first components and dynamic-programming
//! subsequence search, both written independently of the library internals.

#![allow(dead_code)]

use coarse_ends_core::{ExtDist, FiniteModel, Point};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// BFS components of the "distance <= k" graph on a member subset, as a map
/// from member index to the smallest member index in its component.
pub fn bfs_components(
    model: &Arc<FiniteModel>,
    members: &[usize],
    k: ExtDist,
) -> HashMap<usize, usize> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut label: HashMap<usize, usize> = HashMap::new();
    for &start in &sorted {
        if label.contains_key(&start) {
            continue;
        }
        // `start` is the smallest unlabeled member, hence its component's id.
        let mut queue = vec![start];
        label.insert(start, start);
        while let Some(cur) = queue.pop() {
            for &next in &sorted {
                if !label.contains_key(&next) && model.dist_idx(cur, next) <= k {
                    label.insert(next, start);
                    queue.push(next);
                }
            }
        }
    }
    label
}

/// Two partitions of the same member set agree iff they induce the same
/// equivalence relation (labels themselves may differ).
pub fn same_partition(a: &HashMap<usize, usize>, b: &HashMap<usize, usize>) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let keys: Vec<usize> = a.keys().copied().collect();
    for (i, &x) in keys.iter().enumerate() {
        for &y in &keys[i + 1..] {
            if (a[&x] == a[&y]) != (b[&x] == b[&y]) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive subsequence search by dynamic programming: can s be embedded
/// into t order-preservingly? Independent of the greedy matcher under test.
pub fn dp_is_subsequence(s: &[Point], t: &[Point]) -> bool {
    let (n, m) = (s.len(), t.len());
    if n == 0 {
        return true;
    }
    // embed[j] = true when s[i..] embeds into t[j..]; computed per row i.
    let mut embed = vec![true; m + 1];
    for i in (0..n).rev() {
        let mut next = vec![false; m + 1];
        for j in (0..m).rev() {
            next[j] = (t[j] == s[i] && embed[j + 1]) || next[j + 1];
        }
        embed = next;
    }
    embed[0]
}

/// A uniformly random strictly increasing head with gaps in 1..=max_gap.
pub fn random_monotone_head(r: &mut ChaCha8Rng, len: usize, max_gap: u64) -> Vec<u64> {
    let mut head = vec![0u64];
    for _ in 1..len {
        let gap = r.gen_range(1..=max_gap);
        head.push(head.last().unwrap() + gap);
    }
    head
}

/// A random finite model: a ball of a random zoo space, sized under 2,000
/// points (near that cap when `big`, small otherwise).
pub fn random_model(r: &mut ChaCha8Rng, big: bool) -> Arc<FiniteModel> {
    use coarse_ends_core::model::ball;
    use coarse_ends_core::space::Norm;
    use coarse_ends_core::Space;
    let space: Arc<Space> = match r.gen_range(0..4) {
        0 => Arc::new(Space::line()),
        1 => Arc::new(Space::grid(2, if r.gen_bool(0.5) { Norm::L1 } else { Norm::Linf })),
        2 => Arc::new(Space::tree(r.gen_range(2..=3))),
        _ => Arc::new(Space::cayley(1, vec![vec![r.gen_range(1..=3)]]).unwrap()),
    };
    let cap = if big { 2_000 } else { r.gen_range(20..300) };
    let mut radius = 1i64;
    let mut m = ball(&space, ExtDist::int(radius)).unwrap();
    while m.len() < cap && radius < 900 {
        radius += 1;
        let next = ball(&space, ExtDist::int(radius)).unwrap();
        if next.len() > 2_000 {
            break;
        }
        m = next;
    }
    Arc::new(m)
}

/// A random nonempty subset of model indices.
pub fn random_members(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let keep_prob = r.gen_range(0.3..1.0);
    let mut members: Vec<usize> = (0..n).filter(|_| r.gen_bool(keep_prob)).collect();
    if members.is_empty() {
        members.push(0);
    }
    members
}

/// Encodes a letter string over {0,1,2} as a coarse sequence in Z: the
/// letters as an explicit prefix, then a tail marching off past 10 so the
/// prefix is the only place letters can match.
pub fn string_seq(
    space: &Arc<coarse_ends_core::Space>,
    letters: &[i64],
) -> Arc<coarse_ends_core::seq::CoarseSequence> {
    use coarse_ends_core::seq::{CoarseSequence, TailRule};
    assert_eq!(letters[0], 0, "sequences are anchored at the base");
    let mut prefix: Vec<Point> = letters.iter().map(|&x| Point::int(x)).collect();
    prefix.push(Point::int(10));
    CoarseSequence::ray(Arc::clone(space), prefix, TailRule::Step { v: vec![1] }).unwrap()
}

/// All strings over {0,1,2} of exactly the given length whose first letter is
/// 0 (the base anchor).
pub fn all_strings(len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![0]];
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..3).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

/// A random base-anchored ray in Z with jump bound at most 2: a short random
/// prefix walk, then a fixed tail step of +-1 or +-2.
pub fn random_z_ray(
    r: &mut ChaCha8Rng,
    z: &Arc<coarse_ends_core::Space>,
) -> Arc<coarse_ends_core::seq::CoarseSequence> {
    use coarse_ends_core::seq::{CoarseSequence, TailRule};
    let plen = r.gen_range(1..8usize);
    let mut prefix = vec![Point::int(0)];
    let mut cur = 0i64;
    for _ in 1..plen {
        cur += r.gen_range(-2..=2i64);
        prefix.push(Point::int(cur));
    }
    let v = [-2i64, -1, 1, 2][r.gen_range(0..4usize)];
    CoarseSequence::ray(Arc::clone(z), prefix, TailRule::Step { v: vec![v] }).unwrap()
}
