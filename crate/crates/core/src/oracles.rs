//! Brute-force ground truth for small instances.
//!
//! Nothing here shares code with the polynomial algorithms: popularity and
//! dominance are decided by maximising the election margin over every
//! competing matching, and stability by a direct pairwise scan.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Man, Matching, Woman};

/// Default bound on `|E|` for exhaustive enumeration.
pub const DEFAULT_ENUM_LIMIT: usize = 24;

/// Current enumeration bound: `POPMATCH_MAX_ENUM` if set and numeric,
/// otherwise [`DEFAULT_ENUM_LIMIT`].
pub fn enumeration_limit() -> usize {
    std::env::var("POPMATCH_MAX_ENUM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_LIMIT)
}

/// Matchings in lexicographic order of their sorted pair lists, without
/// duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchingFamily(Vec<Matching>);

impl MatchingFamily {
    pub fn new(mut v: Vec<Matching>) -> Self {
        v.sort();
        v.dedup();
        MatchingFamily(v)
    }

    pub fn as_slice(&self) -> &[Matching] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, m: &Matching) -> bool {
        self.0.binary_search(m).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matching> {
        self.0.iter()
    }

    /// Members satisfying `keep`, evaluated in parallel.
    pub fn filter(&self, keep: impl Fn(&Matching) -> bool + Sync) -> MatchingFamily {
        MatchingFamily(self.0.par_iter().filter(|m| keep(m)).cloned().collect())
    }

    pub fn into_vec(self) -> Vec<Matching> {
        self.0
    }
}

impl<'a> IntoIterator for &'a MatchingFamily {
    type Item = &'a Matching;
    type IntoIter = std::slice::Iter<'a, Matching>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

pub fn enumerate_matchings(inst: &Instance) -> Result<MatchingFamily> {
    enumerate_matchings_with_limit(inst, enumeration_limit())
}

/// Every matching of `inst`, the empty one included, provided `|E| ≤ limit`.
pub fn enumerate_matchings_with_limit(inst: &Instance, limit: usize) -> Result<MatchingFamily> {
    if inst.num_edges() > limit {
        return Err(Error::TooLarge {
            edges: inst.num_edges(),
            limit,
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; inst.num_women()];
    let mut pairs = Vec::new();
    extend_all(inst, 0, &mut used, &mut pairs, &mut out);
    Ok(MatchingFamily::new(out))
}

fn extend_all(
    inst: &Instance,
    i: usize,
    used: &mut [bool],
    pairs: &mut Vec<Edge>,
    out: &mut Vec<Matching>,
) {
    if i == inst.num_men() {
        out.push(Matching::from_pairs(inst, pairs.iter().copied()).expect("disjoint edges"));
        return;
    }
    extend_all(inst, i + 1, used, pairs, out);
    let a = Man(i);
    for &b in inst.man_prefs(a) {
        if !used[b.0] {
            used[b.0] = true;
            pairs.push((a, b));
            extend_all(inst, i + 1, used, pairs, out);
            pairs.pop();
            used[b.0] = false;
        }
    }
}

fn cmp_man(inst: &Instance, a: Man, x: Option<Woman>, y: Option<Woman>) -> i32 {
    match (x, y) {
        (None, None) => 0,
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        (Some(x), Some(y)) => match inst.man_rank(a, x).cmp(&inst.man_rank(a, y)) {
            Ordering::Less => 1,
            Ordering::Equal => 0,
            Ordering::Greater => -1,
        },
    }
}

fn cmp_woman(inst: &Instance, b: Woman, x: Option<Man>, y: Option<Man>) -> i32 {
    match (x, y) {
        (None, None) => 0,
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        (Some(x), Some(y)) => match inst.woman_rank(b, x).cmp(&inst.woman_rank(b, y)) {
            Ordering::Less => 1,
            Ordering::Equal => 0,
            Ordering::Greater => -1,
        },
    }
}

/// For each size `k`, the largest value of `φ(N,M) − φ(M,N)` over matchings
/// `N` with `|N| = k` (`None` when no matching has that size).
///
/// Dynamic programme over men in id order, keyed by the set of women already
/// used; needs at most 24 women.
pub fn best_margins_by_size(inst: &Instance, m: &Matching) -> Vec<Option<i32>> {
    let nw = inst.num_women();
    assert!(nw <= 24, "margin oracle supports at most 24 women");
    const NONE: i32 = i32::MIN;
    let mut dp = vec![NONE; 1 << nw];
    dp[0] = 0;
    let mut live = vec![0usize];
    for a in inst.men() {
        let mut next = vec![NONE; 1 << nw];
        let mut next_live = Vec::new();
        let here = m.partner_of_man(a);
        let mut relax = |mask: usize, v: i32, next_live: &mut Vec<usize>| {
            if next[mask] == NONE {
                next_live.push(mask);
            }
            if v > next[mask] {
                next[mask] = v;
            }
        };
        for &mask in &live {
            let base = dp[mask];
            relax(mask, base + cmp_man(inst, a, None, here), &mut next_live);
            for &b in inst.man_prefs(a) {
                if mask & (1 << b.0) == 0 {
                    let v = base
                        + cmp_man(inst, a, Some(b), here)
                        + cmp_woman(inst, b, Some(a), m.partner_of_woman(b));
                    relax(mask | (1 << b.0), v, &mut next_live);
                }
            }
        }
        dp = next;
        live = next_live;
    }
    let lonely: Vec<i32> = inst
        .women()
        .map(|b| cmp_woman(inst, b, None, m.partner_of_woman(b)))
        .collect();
    let mut best = vec![None; inst.min_side() + 1];
    for &mask in &live {
        let v = dp[mask]
            + lonely
                .iter()
                .enumerate()
                .filter(|&(b, _)| mask & (1 << b) == 0)
                .map(|(_, x)| x)
                .sum::<i32>();
        let k = mask.count_ones() as usize;
        best[k] = Some(best[k].map_or(v, |x: i32| x.max(v)));
    }
    best
}

/// No matching is more popular than `m`.
pub fn is_popular_by_definition(inst: &Instance, m: &Matching) -> bool {
    best_margins_by_size(inst, m)
        .into_iter()
        .flatten()
        .all(|v| v <= 0)
}

/// No matching defeats `m`: none is more popular, and none strictly larger
/// ties with it.
pub fn is_dominant_by_definition(inst: &Instance, m: &Matching) -> bool {
    best_margins_by_size(inst, m)
        .into_iter()
        .enumerate()
        .all(|(k, v)| v.is_none_or(|v| v < 0 || (v == 0 && k <= m.len())))
}

/// No edge outside `m` whose endpoints both prefer each other.
pub fn is_stable_by_definition(inst: &Instance, m: &Matching) -> bool {
    inst.edges().all(|(a, b)| {
        m.contains((a, b))
            || cmp_man(inst, a, Some(b), m.partner_of_man(a)) <= 0
            || cmp_woman(inst, b, Some(a), m.partner_of_woman(b)) <= 0
    })
}

pub fn popular_set(inst: &Instance) -> Result<MatchingFamily> {
    Ok(popular_among(inst, &enumerate_matchings(inst)?))
}

pub fn dominant_set(inst: &Instance) -> Result<MatchingFamily> {
    Ok(dominant_among(inst, &enumerate_matchings(inst)?))
}

/// Guarded like the other sets, though computed by pruned search.
pub fn stable_set(inst: &Instance) -> Result<MatchingFamily> {
    let limit = enumeration_limit();
    if inst.num_edges() > limit {
        return Err(Error::TooLarge {
            edges: inst.num_edges(),
            limit,
        });
    }
    Ok(all_stable_matchings(inst))
}

pub fn popular_among(inst: &Instance, all: &MatchingFamily) -> MatchingFamily {
    all.filter(|m| is_popular_by_definition(inst, m))
}

pub fn dominant_among(inst: &Instance, all: &MatchingFamily) -> MatchingFamily {
    all.filter(|m| is_dominant_by_definition(inst, m))
}

/// Every stable matching, by backtracking over men with blocking-pair
/// pruning. Usable well beyond the enumeration guard since stable matchings
/// are few.
pub fn all_stable_matchings(inst: &Instance) -> MatchingFamily {
    let mut st = StableSearch {
        inst,
        of_man: vec![None; inst.num_men()],
        of_woman: vec![None; inst.num_women()],
        out: Vec::new(),
    };
    st.go(0);
    MatchingFamily::new(st.out)
}

struct StableSearch<'a> {
    inst: &'a Instance,
    of_man: Vec<Option<Woman>>,
    of_woman: Vec<Option<Man>>,
    out: Vec<Matching>,
}

impl StableSearch<'_> {
    /// Men `0..i` are decided. A woman taken by a decided man keeps him, so
    /// pairs among decided vertices can be checked eagerly.
    fn go(&mut self, i: usize) {
        let inst = self.inst;
        if i == inst.num_men() {
            // women still free may block with anyone who prefers them
            for a in inst.men() {
                let p = self.of_man[a.0];
                let top = p.map_or(inst.man_prefs(a).len(), |b| inst.man_rank(a, b).unwrap());
                if inst.man_prefs(a)[..top]
                    .iter()
                    .any(|b| self.of_woman[b.0].is_none())
                {
                    return;
                }
            }
            let pairs = inst.men().filter_map(|a| self.of_man[a.0].map(|b| (a, b)));
            self.out
                .push(Matching::from_pairs(inst, pairs).expect("disjoint edges"));
            return;
        }
        let a = Man(i);
        let prefs = inst.man_prefs(a);
        for k in 0..=prefs.len() {
            let choice = prefs.get(k).copied();
            if let Some(b) = choice {
                if self.of_woman[b.0].is_some() {
                    continue;
                }
            }
            // a against women he prefers that are already taken
            let blocked_by_a = prefs[..k]
                .iter()
                .any(|&w| self.of_woman[w.0].is_some_and(|h| inst.woman_prefers(w, a, Some(h))));
            if blocked_by_a {
                continue;
            }
            if let Some(b) = choice {
                // earlier men against b
                let blocked_at_b = inst.woman_prefs(b)[..inst.woman_rank(b, a).unwrap()]
                    .iter()
                    .any(|&x| x.0 < i && inst.man_prefers(x, b, self.of_man[x.0]));
                if blocked_at_b {
                    continue;
                }
                self.of_man[a.0] = Some(b);
                self.of_woman[b.0] = Some(a);
                self.go(i + 1);
                self.of_woman[b.0] = None;
                self.of_man[a.0] = None;
            } else {
                self.go(i + 1);
            }
        }
    }
}

/// Edges lying in at least one popular matching, in edge order.
pub fn popular_edges(inst: &Instance) -> Result<Vec<Edge>> {
    let set: BTreeSet<Edge> = popular_set(inst)?.iter().flat_map(|m| m.pairs()).collect();
    Ok(set.into_iter().collect())
}

/// Size of a maximum matching, by augmenting paths.
pub fn maximum_matching_size(inst: &Instance) -> usize {
    fn augment(inst: &Instance, a: Man, seen: &mut [bool], of_woman: &mut [Option<Man>]) -> bool {
        for &b in inst.man_prefs(a) {
            if seen[b.0] {
                continue;
            }
            seen[b.0] = true;
            if of_woman[b.0].is_none_or(|h| augment(inst, h, seen, of_woman)) {
                of_woman[b.0] = Some(a);
                return true;
            }
        }
        false
    }
    let mut of_woman = vec![None; inst.num_women()];
    let mut size = 0;
    for a in inst.men() {
        let mut seen = vec![false; inst.num_women()];
        if augment(inst, a, &mut seen, &mut of_woman) {
            size += 1;
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elections::{compare, defeats};
    use crate::fixtures;
    use crate::instance::generate_random;

    fn mm(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
        Matching::from_ids(inst, pairs).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_matchings(&fixtures::fig1()).unwrap().len(), 5);
        let e = fixtures::empty();
        let all = enumerate_matchings(&e).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all.as_slice()[0].is_empty());
        let k22 = generate_random(2, 2, 1.0, 3).unwrap();
        assert_eq!(enumerate_matchings(&k22).unwrap().len(), 7);
    }

    #[test]
    fn guard_trips() {
        let k = generate_random(5, 5, 1.0, 1).unwrap();
        assert!(matches!(
            enumerate_matchings_with_limit(&k, 24),
            Err(Error::TooLarge {
                edges: 25,
                limit: 24
            })
        ));
        assert_eq!(enumerate_matchings_with_limit(&k, 25).unwrap().len(), 1546);
    }

    #[test]
    fn fig1_sets() {
        let inst = fixtures::fig1();
        let stable = mm(&inst, &[("a1", "b1")]);
        let other = mm(&inst, &[("a1", "b2"), ("a2", "b1")]);
        assert_eq!(stable_set(&inst).unwrap().into_vec(), vec![stable.clone()]);
        assert_eq!(
            popular_set(&inst).unwrap(),
            MatchingFamily::new(vec![stable, other.clone()])
        );
        assert_eq!(dominant_set(&inst).unwrap().into_vec(), vec![other]);
        assert_eq!(popular_edges(&inst).unwrap().len(), 3);
    }

    #[test]
    fn fig3_sets() {
        let inst = fixtures::fig3();
        let m1 = mm(&inst, &[("a1", "b1"), ("a2", "b2")]);
        let m2 = mm(&inst, &[("a1", "b2"), ("a2", "b1")]);
        let pop = popular_set(&inst).unwrap();
        let dom = dominant_set(&inst).unwrap();
        assert!(pop.contains(&m1) && !dom.contains(&m1));
        assert!(dom.contains(&m2));
        assert_eq!(maximum_matching_size(&inst), 3);
    }

    #[test]
    fn empty_instance_sets() {
        let e = fixtures::empty();
        for f in [popular_set, stable_set, dominant_set] {
            assert_eq!(f(&e).unwrap().len(), 1);
        }
        assert_eq!(maximum_matching_size(&e), 0);
        assert_eq!(maximum_matching_size(&fixtures::fig1()), 2);
    }

    #[test]
    fn fig2_popular_edges_include_a2_b2() {
        let inst = fixtures::fig2();
        let e = inst.edge_by_ids("a2", "b2").unwrap();
        assert!(popular_edges(&inst).unwrap().contains(&e));
    }

    #[test]
    fn lone_edge_is_popular() {
        let inst = Instance::from_ids(
            &["x", "y"],
            &["p", "q"],
            &[
                ("x", vec!["p"]),
                ("y", vec!["p", "q"]),
                ("p", vec!["x", "y"]),
                ("q", vec!["y"]),
            ],
        )
        .unwrap();
        let e = inst.edge_by_ids("x", "p").unwrap();
        assert!(popular_edges(&inst).unwrap().contains(&e));
    }

    // the margin programme must agree with literal pairwise elections
    #[test]
    fn margin_oracle_matches_pairwise_elections() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 4);
            let inst = generate_random(n, 4 - (seed as usize % 3), 0.7, seed).unwrap();
            let all = enumerate_matchings_with_limit(&inst, usize::MAX).unwrap();
            for m in &all {
                let pop = all.iter().all(|n| {
                    let r = compare(&inst, n, m);
                    r.for_first <= r.for_second
                });
                let dom = all.iter().all(|n| !defeats(&inst, n, m));
                assert_eq!(pop, is_popular_by_definition(&inst, m), "seed {seed}");
                assert_eq!(dom, is_dominant_by_definition(&inst, m), "seed {seed}");
                assert_eq!(
                    is_stable_by_definition(&inst, m),
                    all_stable_matchings(&inst).contains(m),
                    "seed {seed}"
                );
            }
        }
    }
}
