//! Is every popular matching stable?
//!
//! If some popular matching is unstable then some dominant one is, and a
//! dominant matching blocked by `(a, b)` is the image of a stable matching
//! of `G'` that keeps `a` at level 0 below `b` and gives `b` a level-1
//! partner she ranks below `a`. Both probes below search for such a stable
//! matching with a restricted proposal run on `G'`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gale_shapley::{self, find_blocking_pair, ProposalRules, StartState};
use crate::instance::{Edge, Instance, Matching};
use crate::level_graph::{build_level_graph, map_T, LevelInstance};

fn check_edge(inst: &Instance, (m, w): Edge) -> Result<()> {
    if m.0 >= inst.num_men() || w.0 >= inst.num_women() || !inst.is_edge(m, w) {
        return Err(Error::NotAnEdge(format!("{m:?}-{w:?}")));
    }
    Ok(())
}

/// A dominant matching containing `e1 = (a, v)` and `e2 = (u, b)` in which
/// `(a, b)` blocks, if one exists.
///
/// Requires `(a, b) ∈ E`, `a` preferring `b` to `v` and `b` preferring `a`
/// to `u`. Pairs sharing a vertex are answered with `None` up front.
pub fn unstable_via_pair(inst: &Instance, e1: Edge, e2: Edge) -> Result<Option<Matching>> {
    check_edge(inst, e1)?;
    check_edge(inst, e2)?;
    let ((a, v), (u, b)) = (e1, e2);
    if a == u || v == b {
        return Ok(None);
    }
    if !inst.is_edge(a, b) || !inst.man_prefers(a, b, Some(v)) || !inst.woman_prefers(b, a, Some(u))
    {
        return Err(Error::Precondition(format!(
            "{} and {} do not leave {} mutually preferred",
            inst.edge_label(e1),
            inst.edge_label(e2),
            inst.edge_label((a, b))
        )));
    }
    let level = build_level_graph(inst);
    Ok(pair_probe(&level, e1, e2))
}

fn pair_probe(level: &LevelInstance, (a, v): Edge, (u, b): Edge) -> Option<Matching> {
    let g = &level.graph;
    let (a0, u1) = (level.copy(a, 0), level.copy(u, 1));
    let rules = ProposalRules::new().with_floor(v, a0).with_floor(b, u1);
    let out = gale_shapley::run(g, &rules, StartState::empty(g)).ok()?;
    if out.contains((a0, v)) && out.contains((u1, b)) && find_blocking_pair(g, &out).is_none() {
        map_T(level, &out).ok()
    } else {
        None
    }
}

/// One probe of the per-edge scan: `b` takes only level-1 men, and `a₀` is
/// turned away by every woman he ranks above `b`.
fn edge_probe(level: &LevelInstance, (a, b): Edge) -> Option<Matching> {
    let inst = &level.base;
    let g = &level.graph;
    let (a0, a1) = (level.copy(a, 0), level.copy(a, 1));
    // odd indices are the level-1 copies
    let mut rules = ProposalRules::new().with_filter(b, |m| m.0 % 2 == 1);
    for &w in &inst.man_prefs(a)[..inst.man_rank(a, b).unwrap()] {
        rules = rules.with_rejection(a0, w);
    }
    let out = gale_shapley::run(g, &rules, StartState::empty(g)).ok()?;
    if find_blocking_pair(g, &out).is_some() || out.partner_of_man(a0) == Some(level.dummy(a)) {
        return None;
    }
    if g.woman_prefers(b, out.partner_of_woman(b)?, Some(a1)) {
        return None;
    }
    let m = map_T(level, &out).ok()?;
    let blocks = inst.man_prefers(a, b, m.partner_of_man(a))
        && inst.woman_prefers(b, a, m.partner_of_woman(b));
    blocks.then_some(m)
}

/// An unstable popular matching with its blocking pair, or `None` when every
/// popular matching is stable. Edges are probed in edge order; the first
/// success is reported even when probes run in parallel.
pub fn exists_unstable_popular(inst: &Instance) -> Option<(Matching, Edge)> {
    let level = build_level_graph(inst);
    let edges: Vec<Edge> = inst.edges().collect();
    edges
        .par_iter()
        .find_map_first(|&e| edge_probe(&level, e).map(|m| (m, e)))
}

/// Same question answered by probing every pair `(a, v), (u, b)` around
/// each candidate blocking edge `(a, b)`.
pub fn exists_unstable_popular_cubic(inst: &Instance) -> Option<(Matching, Edge)> {
    let level = build_level_graph(inst);
    let edges: Vec<Edge> = inst.edges().collect();
    edges.par_iter().find_map_first(|&(a, b)| {
        let below_b = &inst.man_prefs(a)[inst.man_rank(a, b).unwrap() + 1..];
        let below_a = &inst.woman_prefs(b)[inst.woman_rank(b, a).unwrap() + 1..];
        for &v in below_b {
            for &u in below_a {
                if u == a || v == b {
                    continue;
                }
                if let Some(m) = pair_probe(&level, (a, v), (u, b)) {
                    return Some((m, (a, b)));
                }
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gale_shapley::is_stable;
    use crate::verify::is_dominant;

    #[test]
    fn fig1_witness() {
        let inst = fixtures::fig1();
        let expect = Matching::from_ids(&inst, &[("a1", "b2"), ("a2", "b1")]).unwrap();
        let e = |a, b| inst.edge_by_ids(a, b).unwrap();
        let (m, pair) = exists_unstable_popular(&inst).unwrap();
        assert_eq!(m, expect);
        assert_eq!(pair, e("a1", "b1"));
        assert!(is_dominant(&inst, &m).holds && !is_stable(&inst, &m).holds);
        assert_eq!(
            exists_unstable_popular_cubic(&inst).unwrap(),
            (expect.clone(), pair)
        );
        assert_eq!(
            unstable_via_pair(&inst, e("a1", "b2"), e("a2", "b1")).unwrap(),
            Some(expect)
        );
    }

    #[test]
    fn shared_vertex_pairs_are_absent() {
        let inst = fixtures::fig1();
        let e = |a, b| inst.edge_by_ids(a, b).unwrap();
        assert_eq!(
            unstable_via_pair(&inst, e("a1", "b2"), e("a1", "b1")).unwrap(),
            None
        );
        assert!(matches!(
            unstable_via_pair(&inst, e("a1", "b1"), e("a2", "b1")),
            Ok(None)
        ));
        assert!(matches!(
            unstable_via_pair(&inst, e("a2", "b1"), e("a1", "b2")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_edge_has_no_witness() {
        let inst =
            Instance::from_ids(&["x"], &["p"], &[("x", vec!["p"]), ("p", vec!["x"])]).unwrap();
        assert!(exists_unstable_popular(&inst).is_none());
        assert!(exists_unstable_popular_cubic(&inst).is_none());
    }

    #[test]
    fn fig3_agrees_between_routes() {
        let inst = fixtures::fig3();
        let fast = exists_unstable_popular(&inst);
        let slow = exists_unstable_popular_cubic(&inst);
        assert_eq!(fast.is_some(), slow.is_some());
        let (m, (a, b)) = fast.unwrap();
        assert!(is_dominant(&inst, &m).holds);
        assert!(inst.man_prefers(a, b, m.partner_of_man(a)));
        assert!(inst.woman_prefers(b, a, m.partner_of_woman(b)));
    }
}
