//! Votes, head-to-head elections between matchings, and edge labels.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Man, Matching, Vertex, Woman};

/// A vertex's vote between two of its options.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VoteValue {
    Plus,
    Zero,
    Minus,
}

impl fmt::Display for VoteValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VoteValue::Plus => "+",
            VoteValue::Zero => "0",
            VoteValue::Minus => "-",
        })
    }
}

/// `m`'s vote for `x` against `y` (`None` = unmatched).
pub fn man_vote(inst: &Instance, m: Man, x: Woman, y: Option<Woman>) -> VoteValue {
    match y {
        Some(y) if y == x => VoteValue::Zero,
        _ if inst.man_prefers(m, x, y) => VoteValue::Plus,
        _ => VoteValue::Minus,
    }
}

/// `w`'s vote for `x` against `y` (`None` = unmatched).
pub fn woman_vote(inst: &Instance, w: Woman, x: Man, y: Option<Man>) -> VoteValue {
    match y {
        Some(y) if y == x => VoteValue::Zero,
        _ if inst.woman_prefers(w, x, y) => VoteValue::Plus,
        _ => VoteValue::Minus,
    }
}

/// `u`'s vote for neighbour `x` against `y`, where `y = None` stands for
/// being unmatched.
pub fn vote(inst: &Instance, u: Vertex, x: Vertex, y: Option<Vertex>) -> Result<VoteValue> {
    let not_adjacent = |v: Vertex| {
        Error::Precondition(format!(
            "{} is not adjacent to {}",
            inst.vertex_id(v),
            inst.vertex_id(u)
        ))
    };
    match u {
        Vertex::Man(m) => {
            let Vertex::Woman(x) = x else {
                return Err(not_adjacent(x));
            };
            if !inst.is_edge(m, x) {
                return Err(not_adjacent(Vertex::Woman(x)));
            }
            let y = match y {
                None => None,
                Some(Vertex::Woman(y)) if inst.is_edge(m, y) => Some(y),
                Some(v) => return Err(not_adjacent(v)),
            };
            Ok(man_vote(inst, m, x, y))
        }
        Vertex::Woman(w) => {
            let Vertex::Man(x) = x else {
                return Err(not_adjacent(x));
            };
            if !inst.is_edge(x, w) {
                return Err(not_adjacent(Vertex::Man(x)));
            }
            let y = match y {
                None => None,
                Some(Vertex::Man(y)) if inst.is_edge(y, w) => Some(y),
                Some(v) => return Err(not_adjacent(v)),
            };
            Ok(woman_vote(inst, w, x, y))
        }
    }
}

/// Outcome of an election between two matchings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElectionResult {
    /// vertices preferring the first matching
    pub for_first: usize,
    /// vertices preferring the second matching
    pub for_second: usize,
}

impl ElectionResult {
    pub fn margin(&self) -> isize {
        self.for_first as isize - self.for_second as isize
    }

    pub fn reversed(self) -> ElectionResult {
        ElectionResult {
            for_first: self.for_second,
            for_second: self.for_first,
        }
    }
}

/// Runs the election between `first` and `second`: every vertex votes for the
/// matching giving it the better partner, and abstains on a tie.
pub fn compare(inst: &Instance, first: &Matching, second: &Matching) -> ElectionResult {
    let mut r = ElectionResult {
        for_first: 0,
        for_second: 0,
    };
    let mut tally = |pref_first: bool, pref_second: bool| {
        if pref_first {
            r.for_first += 1;
        } else if pref_second {
            r.for_second += 1;
        }
    };
    for m in inst.men() {
        let (p, q) = (first.partner_of_man(m), second.partner_of_man(m));
        if p == q {
            continue;
        }
        let pf = p.is_some_and(|p| inst.man_prefers(m, p, q));
        tally(pf, !pf);
    }
    for w in inst.women() {
        let (p, q) = (first.partner_of_woman(w), second.partner_of_woman(w));
        if p == q {
            continue;
        }
        let pf = p.is_some_and(|p| inst.woman_prefers(w, p, q));
        tally(pf, !pf);
    }
    r
}

pub fn more_popular(inst: &Instance, first: &Matching, second: &Matching) -> bool {
    let r = compare(inst, first, second);
    r.for_first > r.for_second
}

/// `first` defeats `second`: it wins the election, or ties it while being
/// strictly larger.
pub fn defeats(inst: &Instance, first: &Matching, second: &Matching) -> bool {
    let r = compare(inst, first, second);
    r.for_first > r.for_second || (r.for_first == r.for_second && first.len() > second.len())
}

/// The pair of votes on a non-matching edge `(a, b)`: `a`'s vote for `b`
/// against `M(a)`, and `b`'s vote for `a` against `M(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub man: VoteValue,
    pub woman: VoteValue,
}

impl Label {
    pub fn is_plus_plus(&self) -> bool {
        self.man == VoteValue::Plus && self.woman == VoteValue::Plus
    }

    pub fn is_minus_minus(&self) -> bool {
        self.man == VoteValue::Minus && self.woman == VoteValue::Minus
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.man, self.woman)
    }
}

pub fn label_edge(inst: &Instance, m: &Matching, (a, b): Edge) -> Label {
    Label {
        man: man_vote(inst, a, b, m.partner_of_man(a)),
        woman: woman_vote(inst, b, a, m.partner_of_woman(b)),
    }
}

/// Labels of every edge outside `M`, and the subgraph `G_M` obtained by
/// dropping the `(-,-)` edges.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    labels: Vec<(Edge, Label)>,
    gm_edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Label of a non-matching edge; `None` for matching edges and non-edges.
    pub fn label(&self, e: Edge) -> Option<Label> {
        self.labels
            .binary_search_by_key(&e, |&(x, _)| x)
            .ok()
            .map(|i| self.labels[i].1)
    }

    pub fn labels(&self) -> &[(Edge, Label)] {
        &self.labels
    }

    /// Edges of `G_M` in edge order: the matching plus every edge whose
    /// label is not `(-,-)`.
    pub fn gm_edges(&self) -> &[Edge] {
        &self.gm_edges
    }

    pub fn in_gm(&self, e: Edge) -> bool {
        self.gm_edges.binary_search(&e).is_ok()
    }

    /// Non-matching edges labelled `(+,+)`, in edge order.
    pub fn plus_plus_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.labels
            .iter()
            .filter(|(_, l)| l.is_plus_plus())
            .map(|&(e, _)| e)
    }
}

pub fn label_edges(inst: &Instance, m: &Matching) -> LabeledGraph {
    let mut labels = Vec::with_capacity(inst.num_edges());
    let mut gm_edges = Vec::with_capacity(inst.num_edges());
    for e in inst.edges() {
        if m.contains(e) {
            gm_edges.push(e);
            continue;
        }
        let l = label_edge(inst, m, e);
        if !l.is_minus_minus() {
            gm_edges.push(e);
        }
        labels.push((e, l));
    }
    LabeledGraph { labels, gm_edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use VoteValue::*;

    fn mm(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
        Matching::from_ids(inst, pairs).unwrap()
    }

    #[test]
    fn votes_on_fig1() {
        let inst = fixtures::fig1();
        let v = |s| inst.vertex_by_id(s).unwrap();
        assert_eq!(vote(&inst, v("b1"), v("a1"), Some(v("a2"))).unwrap(), Plus);
        assert_eq!(vote(&inst, v("b1"), v("a2"), Some(v("a1"))).unwrap(), Minus);
        assert_eq!(vote(&inst, v("b1"), v("a1"), Some(v("a1"))).unwrap(), Zero);
        assert_eq!(vote(&inst, v("b2"), v("a1"), None).unwrap(), Plus);
        assert!(vote(&inst, v("b2"), v("a2"), None).is_err());
        assert!(vote(&inst, v("a1"), v("a2"), None).is_err());
    }

    #[test]
    fn fig2_election() {
        let inst = fixtures::fig2();
        let m = mm(&inst, &[("a1", "b1"), ("a2", "b2")]);
        let n = mm(&inst, &[("a1", "b3"), ("a2", "b1")]);
        assert_eq!(
            compare(&inst, &m, &n),
            ElectionResult {
                for_first: 2,
                for_second: 3
            }
        );
        assert!(more_popular(&inst, &n, &m));
        assert_eq!(
            compare(&inst, &m, &m),
            ElectionResult {
                for_first: 0,
                for_second: 0
            }
        );
    }

    #[test]
    fn fig3_elections_and_defeat() {
        let inst = fixtures::fig3();
        let m1 = mm(&inst, &[("a1", "b1"), ("a2", "b2")]);
        let m2 = mm(&inst, &[("a1", "b2"), ("a2", "b1")]);
        let m3 = mm(&inst, &[("a1", "b3"), ("a2", "b2"), ("a3", "b1")]);
        // a1 and b1 prefer M1, a3 and b3 prefer M3, a2 and b2 abstain
        assert_eq!(
            compare(&inst, &m1, &m3),
            ElectionResult {
                for_first: 2,
                for_second: 2
            }
        );
        assert_eq!(
            compare(&inst, &m2, &m3),
            ElectionResult {
                for_first: 4,
                for_second: 2
            }
        );
        assert!(defeats(&inst, &m3, &m1));
        assert!(!defeats(&inst, &m1, &m3));
        assert!(defeats(&inst, &m2, &m3));
        assert!(!defeats(&inst, &m1, &m1));
    }

    #[test]
    fn fig1_labels() {
        let inst = fixtures::fig1();
        let m = mm(&inst, &[("a1", "b1")]);
        let g = label_edges(&inst, &m);
        let e = |a, b| inst.edge_by_ids(a, b).unwrap();
        assert_eq!(
            g.label(e("a2", "b1")),
            Some(Label {
                man: Plus,
                woman: Minus
            })
        );
        assert_eq!(
            g.label(e("a1", "b2")),
            Some(Label {
                man: Minus,
                woman: Plus
            })
        );
        assert_eq!(g.label(e("a1", "b1")), None);
        assert_eq!(g.gm_edges().len(), 3);
    }

    #[test]
    fn top_choice_perfect_matching_labels_all_minus_minus() {
        let inst = Instance::from_ids(
            &["x", "y"],
            &["p", "q"],
            &[
                ("x", vec!["p", "q"]),
                ("y", vec!["q", "p"]),
                ("p", vec!["x", "y"]),
                ("q", vec!["y", "x"]),
            ],
        )
        .unwrap();
        let m = mm(&inst, &[("x", "p"), ("y", "q")]);
        let g = label_edges(&inst, &m);
        assert!(g.labels().iter().all(|(_, l)| l.is_minus_minus()));
        assert_eq!(g.gm_edges().len(), 2);
    }

    #[test]
    fn fig3_m2_has_plus_plus_edge() {
        let inst = fixtures::fig3();
        let m2 = mm(&inst, &[("a1", "b2"), ("a2", "b1")]);
        let g = label_edges(&inst, &m2);
        let e = inst.edge_by_ids("a1", "b1").unwrap();
        assert!(g.label(e).unwrap().is_plus_plus());
        assert_eq!(g.plus_plus_edges().collect::<Vec<_>>(), vec![e]);
    }
}
