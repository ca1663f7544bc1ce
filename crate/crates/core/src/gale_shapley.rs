//! Men-proposing deferred acceptance with pluggable proposal restrictions and
//! warm starts.
//!
//! A single engine covers the plain algorithm, forced-edge probes (a woman
//! refuses everyone below a given man), level filters on the blown-up
//! instance, per-pair forced rejections, and runs that resume from a
//! non-empty matching.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Man, Matching, Woman};
use crate::verify::{Certificate, Verdict};

pub type ProposerFilter = Arc<dyn Fn(Man) -> bool + Send + Sync>;

/// Restrictions on which proposals a woman may hold.
///
/// A proposal that a rule forbids is treated as if the edge did not exist:
/// the man is turned away and moves on to his next choice.
#[derive(Clone, Default)]
pub struct ProposalRules {
    /// `w` rejects every proposer she ranks below the given man.
    pub acceptance_floor: HashMap<Woman, Man>,
    /// `w` only considers proposers for which the predicate holds.
    pub level_filter: HashMap<Woman, ProposerFilter>,
    /// Pairs that are always rejected.
    pub forced_rejections: HashSet<Edge>,
}

impl fmt::Debug for ProposalRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProposalRules")
            .field("acceptance_floor", &self.acceptance_floor)
            .field(
                "level_filter",
                &self.level_filter.keys().collect::<Vec<_>>(),
            )
            .field("forced_rejections", &self.forced_rejections)
            .finish()
    }
}

impl ProposalRules {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_floor(mut self, w: Woman, m: Man) -> Self {
        self.acceptance_floor.insert(w, m);
        self
    }

    pub fn with_filter(
        mut self,
        w: Woman,
        f: impl Fn(Man) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.level_filter.insert(w, Arc::new(f));
        self
    }

    pub fn with_rejection(mut self, m: Man, w: Woman) -> Self {
        self.forced_rejections.insert((m, w));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.acceptance_floor.is_empty()
            && self.level_filter.is_empty()
            && self.forced_rejections.is_empty()
    }

    /// Whether `w` may hold a proposal from `m` at all.
    pub fn accepts(&self, inst: &Instance, m: Man, w: Woman) -> bool {
        if self.forced_rejections.contains(&(m, w)) {
            return false;
        }
        if let Some(f) = self.level_filter.get(&w) {
            if !f(m) {
                return false;
            }
        }
        if let Some(&floor) = self.acceptance_floor.get(&w) {
            if inst.woman_rank(w, m) > inst.woman_rank(w, floor) {
                return false;
            }
        }
        true
    }

    fn validate(&self, inst: &Instance) -> Result<()> {
        for (&w, &m) in &self.acceptance_floor {
            if w.0 >= inst.num_women() || m.0 >= inst.num_men() || !inst.is_edge(m, w) {
                return Err(Error::Precondition(format!(
                    "floor {m:?} is not a neighbour of {w:?}"
                )));
            }
        }
        for &w in self.level_filter.keys() {
            if w.0 >= inst.num_women() {
                return Err(Error::Precondition(format!(
                    "filter on unknown woman {w:?}"
                )));
            }
        }
        for &(m, w) in &self.forced_rejections {
            if m.0 >= inst.num_men() || w.0 >= inst.num_women() {
                return Err(Error::Precondition(format!(
                    "rejection of unknown pair {m:?}-{w:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Where a run starts: a matching and the queue of men who propose first.
///
/// Men that are unmatched but not queued never propose.
#[derive(Clone, Debug)]
pub struct StartState {
    pub matching: Matching,
    pub free: Vec<Man>,
}

impl StartState {
    /// Empty matching, every man queued in id order.
    pub fn empty(inst: &Instance) -> Self {
        StartState {
            matching: Matching::empty(inst),
            free: inst.men().collect(),
        }
    }

    pub fn warm(matching: Matching, free: Vec<Man>) -> Self {
        StartState { matching, free }
    }

    /// A start is feasible when every held pair is acceptable, queued men are
    /// free, and no already-matched man forms a blocking pair (such a man
    /// resumes below his current partner and would never revisit it).
    fn validate(&self, inst: &Instance, rules: &ProposalRules) -> Result<()> {
        let m = &self.matching;
        for (a, b) in m.pairs() {
            if !rules.accepts(inst, a, b) {
                return Err(Error::InvalidStart(format!(
                    "{} is held but not acceptable",
                    inst.edge_label((a, b))
                )));
            }
            let top = inst.man_rank(a, b).expect("matching edge");
            for &w in &inst.man_prefs(a)[..top] {
                if rules.accepts(inst, a, w) && inst.woman_prefers(w, a, m.partner_of_woman(w)) {
                    return Err(Error::InvalidStart(format!(
                        "blocking pair {}",
                        inst.edge_label((a, w))
                    )));
                }
            }
        }
        let mut seen = HashSet::new();
        for &a in &self.free {
            if a.0 >= inst.num_men() || m.partner_of_man(a).is_some() || !seen.insert(a) {
                return Err(Error::InvalidStart(format!("{a:?} cannot be queued")));
            }
        }
        Ok(())
    }
}

/// Runs men-proposing deferred acceptance.
///
/// Queued men propose down their lists in FIFO order; a man displaced from a
/// woman joins the back of the queue and resumes just below her. The result
/// is stable with respect to the rule-filtered instance.
pub fn run(inst: &Instance, rules: &ProposalRules, start: StartState) -> Result<Matching> {
    rules.validate(inst)?;
    start.validate(inst, rules)?;
    let StartState {
        matching: mut m,
        free,
    } = start;
    let mut next: Vec<usize> = inst
        .men()
        .map(|a| {
            m.partner_of_man(a)
                .map_or(0, |b| inst.man_rank(a, b).unwrap() + 1)
        })
        .collect();
    let mut queue: VecDeque<Man> = free.into();
    let plain = rules.is_empty();

    while let Some(a) = queue.pop_front() {
        let prefs = inst.man_prefs(a);
        while next[a.0] < prefs.len() {
            let b = prefs[next[a.0]];
            next[a.0] += 1;
            if !plain && !rules.accepts(inst, a, b) {
                continue;
            }
            match m.partner_of_woman(b) {
                None => {
                    m.insert(a, b);
                    break;
                }
                Some(h) if inst.woman_prefers(b, a, Some(h)) => {
                    m.remove_man(h);
                    m.insert(a, b);
                    queue.push_back(h);
                    break;
                }
                Some(_) => {}
            }
        }
    }
    Ok(m)
}

/// The men-optimal stable matching.
pub fn men_optimal(inst: &Instance) -> Matching {
    run(inst, &ProposalRules::default(), StartState::empty(inst)).expect("empty start is feasible")
}

/// The women-optimal stable matching, via the transposed instance.
pub fn women_optimal(inst: &Instance) -> Matching {
    let t = inst.transposed();
    let mt = men_optimal(&t);
    let mut out = Matching::empty(inst);
    for (w_as_man, m_as_woman) in mt.pairs() {
        out.insert(Man(m_as_woman.0), Woman(w_as_man.0));
    }
    out
}

/// The first blocking pair of `m` in edge order, if any.
pub fn find_blocking_pair(inst: &Instance, m: &Matching) -> Option<Edge> {
    for a in inst.men() {
        let p = m.partner_of_man(a);
        let top = p.map_or(inst.man_prefs(a).len(), |b| inst.man_rank(a, b).unwrap());
        let mut best: Option<Woman> = None;
        for &b in &inst.man_prefs(a)[..top] {
            if inst.woman_prefers(b, a, m.partner_of_woman(b)) && best.is_none_or(|x| b < x) {
                best = Some(b);
            }
        }
        if let Some(b) = best {
            return Some((a, b));
        }
    }
    None
}

/// Stability check with the least blocking pair as certificate.
pub fn is_stable(inst: &Instance, m: &Matching) -> Verdict {
    match find_blocking_pair(inst, m) {
        None => Verdict::holds(),
        Some(e) => Verdict::fails(Certificate::blocking_pair(e)),
    }
}

/// The men-optimal stable matching containing `e`, if any stable matching
/// contains it.
pub fn stable_with_edge(inst: &Instance, (u, v): Edge) -> Result<Option<Matching>> {
    if u.0 >= inst.num_men() || v.0 >= inst.num_women() || !inst.is_edge(u, v) {
        return Err(Error::NotAnEdge(format!("{u:?}-{v:?}")));
    }
    let rules = ProposalRules::new().with_floor(v, u);
    let m = run(inst, &rules, StartState::empty(inst))?;
    if m.contains((u, v)) && find_blocking_pair(inst, &m).is_none() {
        Ok(Some(m))
    } else {
        Ok(None)
    }
}
