//! Certificate-producing verifiers for popularity and dominance, and the
//! `A0/A1/B0/B1` partition shared by the surjectivity and decomposition
//! constructions.
//!
//! Popularity is decided by alternating reachability inside `G_M` (the
//! instance minus the `(-,-)` edges). Every alternating path can be oriented
//! so that it crosses each matching edge from man to woman; contracting each
//! matching edge `(a, M(a))` into one node turns the question into plain
//! reachability on a digraph whose arcs are the non-matching `G_M` edges
//! `(a', b)`, running from the node holding `b` to the node holding `a'`.
//! Unmatched women become sources and unmatched men become sinks. `M` is
//! popular iff no `(+,+)` arc is reachable from a source, no `(+,+)` arc
//! reaches a sink, and no `(+,+)` arc reaches the tail of a `(+,+)` arc
//! (itself included, which covers cycles).

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::elections::{label_edges, LabeledGraph};
use crate::instance::{Edge, Instance, Man, Matching, Vertex, Woman};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    BlockingPair,
    /// alternating cycle through a `(+,+)` edge
    PpCycle,
    /// alternating path from an unmatched vertex through a `(+,+)` edge
    PpPathFromUnmatched,
    /// alternating path through two `(+,+)` edges
    TwoPpPath,
    AugmentingPath,
    /// a man lands in both `A0` and `A1`
    PartitionOverlap,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::BlockingPair => "blocking-pair",
            CertificateKind::PpCycle => "pp-cycle",
            CertificateKind::PpPathFromUnmatched => "pp-path-from-unmatched",
            CertificateKind::TwoPpPath => "two-pp-path",
            CertificateKind::AugmentingPath => "augmenting-path",
            CertificateKind::PartitionOverlap => "partition-overlap",
        })
    }
}

/// Evidence that a property fails.
///
/// `witness` is a vertex sequence. Paths list their vertices in order;
/// cycles repeat the first vertex at the end; a blocking pair is `[a, b]`;
/// a partition overlap is the single offending man.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witness: Vec<Vertex>,
}

impl Certificate {
    pub fn blocking_pair((a, b): Edge) -> Self {
        Certificate {
            kind: CertificateKind::BlockingPair,
            witness: vec![a.into(), b.into()],
        }
    }

    pub fn witness_ids<'a>(&self, inst: &'a Instance) -> Vec<&'a str> {
        self.witness.iter().map(|&v| inst.vertex_id(v)).collect()
    }

    pub fn describe(&self, inst: &Instance) -> String {
        format!("{}: {}", self.kind, self.witness_ids(inst).join(" "))
    }

    /// Re-derives the claimed violation from scratch: the witness must be an
    /// alternating path (or cycle) inside `G_M` with the right endpoints and
    /// `(+,+)` count.
    pub fn replay(&self, inst: &Instance, m: &Matching) -> Result<(), String> {
        let g = label_edges(inst, m);
        match self.kind {
            CertificateKind::BlockingPair => {
                let [Vertex::Man(a), Vertex::Woman(b)] = self.witness[..] else {
                    return Err("blocking pair must be [man, woman]".into());
                };
                match g.label((a, b)) {
                    Some(l) if l.is_plus_plus() => Ok(()),
                    _ => Err("pair is not labelled (+,+)".into()),
                }
            }
            CertificateKind::PartitionOverlap => {
                let [Vertex::Man(a)] = self.witness[..] else {
                    return Err("overlap witness must be one man".into());
                };
                let p = partition(inst, m, true);
                if p.a0[a.0].is_some() && p.a1[a.0].is_some() {
                    Ok(())
                } else {
                    Err("man is not in both A0 and A1".into())
                }
            }
            kind => {
                let closed = kind == CertificateKind::PpCycle;
                let steps = walk_steps(inst, m, &g, &self.witness, closed)?;
                let pp = steps.iter().filter(|s| s.plus_plus).count();
                let first = self.witness[0];
                let last = *self.witness.last().unwrap();
                match kind {
                    CertificateKind::PpCycle if pp >= 1 => Ok(()),
                    CertificateKind::TwoPpPath if pp >= 2 => Ok(()),
                    CertificateKind::PpPathFromUnmatched
                        if pp >= 1 && (m.partner(first).is_none() || m.partner(last).is_none()) =>
                    {
                        Ok(())
                    }
                    CertificateKind::AugmentingPath
                        if m.partner(first).is_none()
                            && m.partner(last).is_none()
                            && self.witness.len() >= 2 =>
                    {
                        Ok(())
                    }
                    _ => Err(format!(
                        "witness does not exhibit {kind} ({pp} (+,+) edges)"
                    )),
                }
            }
        }
    }
}

struct Step {
    plus_plus: bool,
}

/// Checks that `seq` is a simple alternating path (or cycle when `closed`)
/// in `G_M` and returns its non-matching steps.
fn walk_steps(
    inst: &Instance,
    m: &Matching,
    g: &LabeledGraph,
    seq: &[Vertex],
    closed: bool,
) -> Result<Vec<Step>, String> {
    if seq.len() < 2 {
        return Err("witness too short".into());
    }
    let body = if closed {
        if seq.first() != seq.last() || seq.len() < 5 {
            return Err("cycle must repeat its first vertex and have at least four edges".into());
        }
        &seq[..seq.len() - 1]
    } else {
        seq
    };
    let mut seen = std::collections::HashSet::new();
    for v in body {
        if !seen.insert(*v) {
            return Err(format!("vertex {} repeats", inst.vertex_id(*v)));
        }
    }
    let mut steps = Vec::new();
    let mut prev_in_m: Option<bool> = None;
    let mut first_in_m = None;
    for pair in seq.windows(2) {
        let e = match (pair[0], pair[1]) {
            (Vertex::Man(a), Vertex::Woman(b)) | (Vertex::Woman(b), Vertex::Man(a)) => (a, b),
            _ => return Err("consecutive vertices on the same side".into()),
        };
        if !inst.is_edge(e.0, e.1) {
            return Err(format!("{} is not an edge", inst.edge_label(e)));
        }
        if !g.in_gm(e) {
            return Err(format!("{} is labelled (-,-)", inst.edge_label(e)));
        }
        let in_m = m.contains(e);
        if prev_in_m == Some(in_m) {
            return Err(format!("alternation broken at {}", inst.edge_label(e)));
        }
        first_in_m.get_or_insert(in_m);
        prev_in_m = Some(in_m);
        if !in_m {
            steps.push(Step {
                plus_plus: g.label(e).is_some_and(|l| l.is_plus_plus()),
            });
        }
    }
    if closed && first_in_m == prev_in_m {
        return Err("cycle does not alternate across its closing vertex".into());
    }
    Ok(steps)
}

/// A verdict with an optional certificate of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            certificate: None,
        }
    }

    pub fn fails(c: Certificate) -> Self {
        Verdict {
            holds: false,
            certificate: Some(c),
        }
    }
}

/// Contracted alternating digraph of `G_M`.
struct AltGraph {
    n_men: usize,
    out_start: Vec<usize>,
    out_arcs: Vec<usize>,
    in_start: Vec<usize>,
    in_arcs: Vec<usize>,
    tails: Vec<usize>,
    heads: Vec<usize>,
    pp: Vec<bool>,
    edges: Vec<Edge>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl AltGraph {
    fn build(inst: &Instance, m: &Matching, g: &LabeledGraph) -> AltGraph {
        let n_men = inst.num_men();
        let n = n_men + inst.num_women();
        let node_of_woman = |b: Woman| m.partner_of_woman(b).map_or(n_men + b.0, |a| a.0);
        let mut tails = Vec::new();
        let mut heads = Vec::new();
        let mut pp = Vec::new();
        let mut edges = Vec::new();
        for &(e, l) in g.labels() {
            if l.is_minus_minus() {
                continue;
            }
            tails.push(node_of_woman(e.1));
            heads.push(e.0 .0);
            pp.push(l.is_plus_plus());
            edges.push(e);
        }
        let csr = |keys: &[usize]| {
            let mut start = vec![0usize; n + 1];
            for &k in keys {
                start[k + 1] += 1;
            }
            for i in 0..n {
                start[i + 1] += start[i];
            }
            let mut fill = start.clone();
            let mut arcs = vec![0usize; keys.len()];
            for (i, &k) in keys.iter().enumerate() {
                arcs[fill[k]] = i;
                fill[k] += 1;
            }
            (start, arcs)
        };
        let (out_start, out_arcs) = csr(&tails);
        let (in_start, in_arcs) = csr(&heads);
        let sources = inst
            .women()
            .filter(|&b| m.partner_of_woman(b).is_none())
            .map(|b| n_men + b.0)
            .collect();
        let sinks = inst
            .men()
            .filter(|&a| m.partner_of_man(a).is_none())
            .map(|a| a.0)
            .collect();
        AltGraph {
            n_men,
            out_start,
            out_arcs,
            in_start,
            in_arcs,
            tails,
            heads,
            pp,
            edges,
            sources,
            sinks,
        }
    }

    fn n(&self) -> usize {
        self.out_start.len() - 1
    }

    fn out(&self, v: usize) -> &[usize] {
        &self.out_arcs[self.out_start[v]..self.out_start[v + 1]]
    }

    fn inc(&self, v: usize) -> &[usize] {
        &self.in_arcs[self.in_start[v]..self.in_start[v + 1]]
    }

    fn reach(&self, starts: impl IntoIterator<Item = usize>, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let arcs = if forward { self.out(v) } else { self.inc(v) };
            for &arc in arcs {
                let u = if forward {
                    self.heads[arc]
                } else {
                    self.tails[arc]
                };
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Shortest node path from any start to a node satisfying `goal`,
    /// never entering `avoid`.
    fn path(
        &self,
        starts: &[usize],
        goal: impl Fn(usize) -> bool,
        avoid: &[usize],
    ) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n()];
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::new();
        for &a in avoid {
            seen[a] = true;
        }
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            if goal(v) {
                let mut p = vec![v];
                let mut cur = v;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    p.push(cur);
                }
                p.reverse();
                return Some(p);
            }
            for &arc in self.out(v) {
                let u = self.heads[arc];
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Expands contracted nodes back into vertices.
    fn vertices(&self, m: &Matching, nodes: &[usize]) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(nodes.len() * 2);
        for &v in nodes {
            if v >= self.n_men {
                out.push(Vertex::Woman(Woman(v - self.n_men)));
            } else {
                let a = Man(v);
                out.push(Vertex::Man(a));
                if let Some(b) = m.partner_of_man(a) {
                    out.push(Vertex::Woman(b));
                }
            }
        }
        out
    }

    fn pp_arcs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.pp.len()).filter(|&i| self.pp[i])
    }

    fn violates_popularity(&self) -> bool {
        let from_src = self.reach(self.sources.iter().copied(), true);
        let to_sink = self.reach(self.sinks.iter().copied(), false);
        let from_pp = self.reach(self.pp_arcs().map(|i| self.heads[i]), true);
        self.pp_arcs()
            .any(|i| from_src[self.tails[i]] || to_sink[self.heads[i]] || from_pp[self.tails[i]])
    }

    /// Finds a simple violation, scanning `(+,+)` edges in edge order and
    /// preferring unmatched-endpoint paths, then two-`(+,+)` paths, then cycles.
    fn popularity_certificate(&self, m: &Matching) -> Option<Certificate> {
        let mut pps: Vec<usize> = self.pp_arcs().collect();
        pps.sort_by_key(|&i| self.edges[i]);
        let is_sink = |v: usize| v < self.n_men && m.partner_of_man(Man(v)).is_none();

        for &p in &pps {
            let (t, h) = (self.tails[p], self.heads[p]);
            if let Some(mut nodes) = self.path(&self.sources, |v| v == t, &[h]) {
                nodes.push(h);
                return Some(Certificate {
                    kind: CertificateKind::PpPathFromUnmatched,
                    witness: self.vertices(m, &nodes),
                });
            }
            if let Some(rest) = self.path(&[h], is_sink, &[t]) {
                let mut nodes = vec![t];
                nodes.extend(rest);
                let mut witness = self.vertices(m, &nodes);
                witness.reverse();
                return Some(Certificate {
                    kind: CertificateKind::PpPathFromUnmatched,
                    witness,
                });
            }
        }
        for &p1 in &pps {
            let (t1, h1) = (self.tails[p1], self.heads[p1]);
            let reach = self.path(&[h1], |_| false, &[t1]);
            debug_assert!(reach.is_none());
            for &p2 in &pps {
                if p2 == p1 {
                    continue;
                }
                let (t2, h2) = (self.tails[p2], self.heads[p2]);
                if h2 == t1 || h2 == h1 || t2 == t1 {
                    continue;
                }
                if let Some(mid) = self.path(&[h1], |v| v == t2, &[t1, h2]) {
                    let mut nodes = vec![t1];
                    nodes.extend(mid);
                    nodes.push(h2);
                    return Some(Certificate {
                        kind: CertificateKind::TwoPpPath,
                        witness: self.vertices(m, &nodes),
                    });
                }
            }
        }
        for &p in &pps {
            let (t, h) = (self.tails[p], self.heads[p]);
            if let Some(nodes) = self.path(&[h], |v| v == t, &[]) {
                let mut witness = self.vertices(m, &nodes);
                witness.push(witness[0]);
                return Some(Certificate {
                    kind: CertificateKind::PpCycle,
                    witness,
                });
            }
        }
        None
    }

    fn augmenting_path(&self, m: &Matching) -> Option<Certificate> {
        let is_sink = |v: usize| v < self.n_men && m.partner_of_man(Man(v)).is_none();
        let nodes = self.path(&self.sources, is_sink, &[])?;
        Some(Certificate {
            kind: CertificateKind::AugmentingPath,
            witness: self.vertices(m, &nodes),
        })
    }
}

/// Popularity test in `O(m)` (plus certificate search on failure).
pub fn is_popular(inst: &Instance, m: &Matching) -> Verdict {
    let g = label_edges(inst, m);
    let h = AltGraph::build(inst, m, &g);
    if !h.violates_popularity() {
        return Verdict::holds();
    }
    let c = h
        .popularity_certificate(m)
        .expect("every alternating walk violation contains a simple one");
    Verdict::fails(c)
}

/// Dominance: popular, and no augmenting path inside `G_M`.
pub fn is_dominant(inst: &Instance, m: &Matching) -> Verdict {
    let g = label_edges(inst, m);
    let h = AltGraph::build(inst, m, &g);
    if h.violates_popularity() {
        return Verdict::fails(
            h.popularity_certificate(m)
                .expect("simple violation exists"),
        );
    }
    match h.augmenting_path(m) {
        Some(c) => Verdict::fails(c),
        None => Verdict::holds(),
    }
}

/// Why a vertex entered its set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// reached from a vertex left unmatched by `M`
    Unmatched,
    /// reached from an endpoint of a `(+,+)` edge
    PlusPlus,
}

/// The sets `A0, A1 ⊆ men` and `B0, B1 ⊆ women`, with the origin of each
/// membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub a0: Vec<Option<Origin>>,
    pub a1: Vec<Option<Origin>>,
    pub b0: Vec<Option<Origin>>,
    pub b1: Vec<Option<Origin>>,
}

fn members<T>(v: &[Option<Origin>], wrap: impl Fn(usize) -> T) -> Vec<T> {
    v.iter()
        .enumerate()
        .filter(|(_, o)| o.is_some())
        .map(|(i, _)| wrap(i))
        .collect()
}

impl Partition {
    pub fn men_a0(&self) -> Vec<Man> {
        members(&self.a0, Man)
    }

    pub fn men_a1(&self) -> Vec<Man> {
        members(&self.a1, Man)
    }

    pub fn women_b0(&self) -> Vec<Woman> {
        members(&self.b0, Woman)
    }

    pub fn women_b1(&self) -> Vec<Woman> {
        members(&self.b1, Woman)
    }

    /// Men in `A0 ∩ A1`.
    pub fn overlap(&self) -> Vec<Man> {
        (0..self.a0.len())
            .filter(|&i| self.a0[i].is_some() && self.a1[i].is_some())
            .map(Man)
            .collect()
    }

    pub fn in_a0(&self, a: Man) -> bool {
        self.a0[a.0].is_some()
    }

    pub fn in_a1(&self, a: Man) -> bool {
        self.a1[a.0].is_some()
    }

    pub fn in_b0(&self, b: Woman) -> bool {
        self.b0[b.0].is_some()
    }

    pub fn in_b1(&self, b: Woman) -> bool {
        self.b1[b.0].is_some()
    }
}

/// Computes the partition by seeding and two closure loops.
///
/// Seeds: every `(+,+)` edge `(y, z)` puts `y` in `A0`, `M(y)` in `B0`, `z`
/// in `B1` and `M(z)` in `A1`. With `seed_unmatched`, unmatched men also
/// start in `A1` and unmatched women in `B0`, and the closure loops only
/// admit matched vertices. Closure: a man adjacent in `G_M` to `B0` joins
/// `A0` (his partner joins `B0`); a woman adjacent in `G_M` to `A1` joins
/// `B1` (her partner joins `A1`). Vertices are processed in id order.
pub fn partition(inst: &Instance, m: &Matching, seed_unmatched: bool) -> Partition {
    let g = label_edges(inst, m);
    let mut p = Partition {
        a0: vec![None; inst.num_men()],
        a1: vec![None; inst.num_men()],
        b0: vec![None; inst.num_women()],
        b1: vec![None; inst.num_women()],
    };
    let mut q0: VecDeque<Woman> = VecDeque::new();
    let mut q1: VecDeque<Man> = VecDeque::new();

    if seed_unmatched {
        for a in inst.men().filter(|&a| m.partner_of_man(a).is_none()) {
            p.a1[a.0] = Some(Origin::Unmatched);
            q1.push_back(a);
        }
        for b in inst.women().filter(|&b| m.partner_of_woman(b).is_none()) {
            p.b0[b.0] = Some(Origin::Unmatched);
            q0.push_back(b);
        }
    }
    for (y, z) in g.plus_plus_edges() {
        p.a0[y.0].get_or_insert(Origin::PlusPlus);
        if let Some(w) = m.partner_of_man(y) {
            if p.b0[w.0].is_none() {
                p.b0[w.0] = Some(Origin::PlusPlus);
                q0.push_back(w);
            }
        }
        p.b1[z.0].get_or_insert(Origin::PlusPlus);
        if let Some(x) = m.partner_of_woman(z) {
            if p.a1[x.0].is_none() {
                p.a1[x.0] = Some(Origin::PlusPlus);
                q1.push_back(x);
            }
        }
    }

    // G_M neighbourhoods over non-matching edges
    let mut men_of: Vec<Vec<Man>> = vec![Vec::new(); inst.num_women()];
    let mut women_of: Vec<Vec<Woman>> = vec![Vec::new(); inst.num_men()];
    for &(e, l) in g.labels() {
        if !l.is_minus_minus() {
            men_of[e.1 .0].push(e.0);
            women_of[e.0 .0].push(e.1);
        }
    }

    while let Some(b) = q0.pop_front() {
        let origin = p.b0[b.0].unwrap();
        for &a in &men_of[b.0] {
            let matched = m.partner_of_man(a).is_some();
            if p.a0[a.0].is_some() || (seed_unmatched && !matched) {
                continue;
            }
            p.a0[a.0] = Some(origin);
            if let Some(w) = m.partner_of_man(a) {
                if p.b0[w.0].is_none() {
                    p.b0[w.0] = Some(origin);
                    q0.push_back(w);
                }
            }
        }
    }
    while let Some(a) = q1.pop_front() {
        let origin = p.a1[a.0].unwrap();
        for &b in &women_of[a.0] {
            let matched = m.partner_of_woman(b).is_some();
            if p.b1[b.0].is_some() || (seed_unmatched && !matched) {
                continue;
            }
            p.b1[b.0] = Some(origin);
            if let Some(x) = m.partner_of_woman(b) {
                if p.a1[x.0].is_none() {
                    p.a1[x.0] = Some(origin);
                    q1.push_back(x);
                }
            }
        }
    }
    p
}
