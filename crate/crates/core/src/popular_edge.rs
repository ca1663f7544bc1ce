//! Popular matchings through a prescribed edge.
//!
//! A popular matching containing `e*` exists iff a stable one or a dominant
//! one does, so two forced-edge proposal runs decide the question: one on
//! `G`, and up to two on the level graph `G'`. The decomposition of a
//! popular matching into a dominant part and a stable part, and the two
//! warm-started runs that push a popular matching to either extreme, are
//! exposed as well.

use crate::error::{Error, Result};
use crate::gale_shapley::{self, ProposalRules, StartState};
use crate::instance::{Edge, Instance, Man, Matching, Woman};
use crate::level_graph::{build_level_graph, map_T};
use crate::verify::{is_popular, partition, Partition};

/// A popular matching split along the partition: `m0` covers
/// `A' ∪ B'` (`A' = A0 ∪ A1`, `B' = B0 ∪ B1`) and `m1` covers the rest,
/// `Y ∪ Z`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub partition: Partition,
    pub m0: Matching,
    pub m1: Matching,
    pub a_prime: Vec<Man>,
    pub b_prime: Vec<Woman>,
    pub y: Vec<Man>,
    pub z: Vec<Woman>,
}

fn require_popular(inst: &Instance, m: &Matching) -> Result<()> {
    match is_popular(inst, m).certificate {
        Some(c) => Err(Error::NotPopular(c.describe(inst))),
        None => Ok(()),
    }
}

pub fn decompose(inst: &Instance, m: &Matching) -> Result<Decomposition> {
    require_popular(inst, m)?;
    let p = partition(inst, m, false);
    if let Some(&a) = p.overlap().first() {
        return Err(Error::NotPopular(format!(
            "{} lies in A0 and A1",
            inst.man_id(a)
        )));
    }
    let (a_prime, y): (Vec<Man>, Vec<Man>) = inst.men().partition(|&a| p.in_a0(a) || p.in_a1(a));
    let (b_prime, z): (Vec<Woman>, Vec<Woman>) =
        inst.women().partition(|&b| p.in_b0(b) || p.in_b1(b));
    let in_a_prime = |a: Man| p.in_a0(a) || p.in_a1(a);
    let m0 = Matching::from_pairs(inst, m.pairs().filter(|&(a, _)| in_a_prime(a)))?;
    let m1 = Matching::from_pairs(inst, m.pairs().filter(|&(a, _)| !in_a_prime(a)))?;
    Ok(Decomposition {
        partition: p,
        m0,
        m1,
        a_prime,
        b_prime,
        y,
        z,
    })
}

/// A dominant matching agreeing with `m` on `A' ∪ B'`.
///
/// Re-solves `Y ∪ Z` in its own level graph, starting from `M1` at level 0
/// and letting the copies `y₁` of men left single by `M1` propose.
pub fn lift_to_dominant(inst: &Instance, m: &Matching) -> Result<Matching> {
    let d = decompose(inst, m)?;
    let h = inst.induced(&d.y, &d.z);
    let m1 = h.restrict(&d.m1);
    let level = build_level_graph(&h.instance);
    let mut pairs = Vec::new();
    let mut free = Vec::new();
    for y in h.instance.men() {
        match m1.partner_of_man(y) {
            Some(z) => {
                pairs.push((level.copy(y, 0), z));
                pairs.push((level.copy(y, 1), level.dummy(y)));
            }
            None => {
                pairs.push((level.copy(y, 0), level.dummy(y)));
                free.push(level.copy(y, 1));
            }
        }
    }
    let start = StartState::warm(Matching::from_pairs(&level.graph, pairs)?, free);
    let out = gale_shapley::run(&level.graph, &ProposalRules::default(), start)?;
    let m1_star = map_T(&level, &out)?;
    Matching::from_pairs(inst, d.m0.pairs().chain(h.lift(&m1_star)))
}

/// A stable matching agreeing with `m` on `Y ∪ Z`.
///
/// Re-solves `A' ∪ B'` with the original lists, keeping `M0`'s `A1` pairs
/// and letting the men of `A0` propose afresh.
pub fn lower_to_stable(inst: &Instance, m: &Matching) -> Result<Matching> {
    let d = decompose(inst, m)?;
    let h = inst.induced(&d.a_prime, &d.b_prime);
    let kept = h.restrict(&Matching::from_pairs(
        inst,
        d.m0.pairs().filter(|&(a, _)| d.partition.in_a1(a)),
    )?);
    let free = d
        .a_prime
        .iter()
        .filter(|&&a| d.partition.in_a0(a))
        .map(|&a| h.man_in_sub(a).unwrap())
        .collect();
    let out = gale_shapley::run(
        &h.instance,
        &ProposalRules::default(),
        StartState::warm(kept, free),
    )?;
    Matching::from_pairs(inst, h.lift(&out).into_iter().chain(d.m1.pairs()))
}

/// A dominant matching containing `e`, if one exists: a stable matching of
/// `G'` through `(u₀, v)` or else `(u₁, v)`, collapsed.
pub fn dominant_with_edge(inst: &Instance, (u, v): Edge) -> Result<Option<Matching>> {
    if u.0 >= inst.num_men() || v.0 >= inst.num_women() || !inst.is_edge(u, v) {
        return Err(Error::NotAnEdge(format!("{u:?}-{v:?}")));
    }
    let level = build_level_graph(inst);
    for i in 0..2 {
        if let Some(s) = gale_shapley::stable_with_edge(&level.graph, (level.copy(u, i), v))? {
            return map_T(&level, &s).map(Some);
        }
    }
    Ok(None)
}

/// Which kind of witness answered a popular-edge query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Stable,
    Dominant,
}

/// A popular matching containing `e`, if any exists. The stable branch is
/// tried first.
pub fn popular_edge(inst: &Instance, e: Edge) -> Result<Option<(Matching, Branch)>> {
    if let Some(m) = gale_shapley::stable_with_edge(inst, e)? {
        return Ok(Some((m, Branch::Stable)));
    }
    Ok(dominant_with_edge(inst, e)?.map(|m| (m, Branch::Dominant)))
}
