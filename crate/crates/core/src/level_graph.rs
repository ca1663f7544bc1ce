//! The two-level instance `G'`, the collapse map `T`, its inverse on
//! dominant matchings, and two dominant-matching routines.
//!
//! In `G'` every man `a` becomes `a₀` and `a₁` and gains a private dummy
//! woman `d(a)`. `a₀` ranks `a`'s list then `d(a)`, `a₁` ranks `d(a)` then
//! `a`'s list, `d(a)` ranks `a₀` above `a₁`, and every real woman ranks all
//! level-1 copies above all level-0 copies. `T` drops dummy edges and
//! collapses copies; it maps stable matchings of `G'` onto the dominant
//! matchings of `G`.

use crate::error::{Error, Result};
use crate::gale_shapley;
use crate::instance::{Edge, Instance, Man, Matching, Woman};
use crate::verify::{is_dominant, partition, Certificate, CertificateKind};

/// What a woman of `G'` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelWoman {
    Base(Woman),
    Dummy(Man),
}

/// `G'` together with its provenance maps.
///
/// Men are interleaved as `a₀, a₁` per base man in id order; women are the
/// base women followed by one dummy per base man.
#[derive(Clone, Debug)]
pub struct LevelInstance {
    pub base: Instance,
    pub graph: Instance,
}

impl LevelInstance {
    pub fn copy(&self, a: Man, level: u8) -> Man {
        debug_assert!(level <= 1);
        Man(2 * a.0 + level as usize)
    }

    pub fn dummy(&self, a: Man) -> Woman {
        Woman(self.base.num_women() + a.0)
    }

    /// The base man and level of a level man.
    pub fn origin_of_man(&self, m: Man) -> (Man, u8) {
        (Man(m.0 / 2), (m.0 % 2) as u8)
    }

    pub fn origin_of_woman(&self, w: Woman) -> LevelWoman {
        if w.0 < self.base.num_women() {
            LevelWoman::Base(w)
        } else {
            LevelWoman::Dummy(Man(w.0 - self.base.num_women()))
        }
    }

    /// Extends a per-edge function of `G` to `G'`: copies of `(a,b)` take
    /// `f(a,b)`, dummy edges take `dummy`.
    pub fn lift_edge_values<T: Clone>(&self, f: impl Fn(Edge) -> T, dummy: T) -> Vec<(Edge, T)> {
        self.graph
            .edges()
            .map(|(m, w)| match self.origin_of_woman(w) {
                LevelWoman::Base(b) => ((m, w), f((self.origin_of_man(m).0, b))),
                LevelWoman::Dummy(_) => ((m, w), dummy.clone()),
            })
            .collect()
    }
}

fn marker(inst: &Instance) -> String {
    let longest = inst
        .men()
        .map(|a| inst.man_id(a))
        .chain(inst.women().map(|b| inst.woman_id(b)))
        .map(|id| id.split(|c| c != '\'').map(str::len).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    "'".repeat(longest + 1)
}

/// Builds `G'`. Level ids are `<a><mark>0`, `<a><mark>1` and `<a><mark>d`,
/// where `<mark>` is a run of `'` longer than any run in the base ids.
pub fn build_level_graph(inst: &Instance) -> LevelInstance {
    let mark = marker(inst);
    let n = inst.num_men();
    let nw = inst.num_women();
    let mut men = Vec::with_capacity(2 * n);
    let mut man_prefs = Vec::with_capacity(2 * n);
    for a in inst.men() {
        let id = inst.man_id(a);
        let d = Woman(nw + a.0);
        men.push(format!("{id}{mark}0"));
        men.push(format!("{id}{mark}1"));
        let base: Vec<Woman> = inst.man_prefs(a).to_vec();
        let mut p0 = base.clone();
        p0.push(d);
        let mut p1 = vec![d];
        p1.extend(base);
        man_prefs.push(p0);
        man_prefs.push(p1);
    }
    let mut women: Vec<String> = inst.women().map(|b| inst.woman_id(b).to_string()).collect();
    women.extend(inst.men().map(|a| format!("{}{mark}d", inst.man_id(a))));
    let mut woman_prefs: Vec<Vec<Man>> = inst
        .women()
        .map(|b| {
            let l = inst.woman_prefs(b);
            l.iter()
                .map(|a| Man(2 * a.0 + 1))
                .chain(l.iter().map(|a| Man(2 * a.0)))
                .collect()
        })
        .collect();
    woman_prefs.extend(inst.men().map(|a| vec![Man(2 * a.0), Man(2 * a.0 + 1)]));
    let graph = Instance::from_indexed(men, women, man_prefs, woman_prefs)
        .expect("level graph of a valid instance is valid");
    LevelInstance {
        base: inst.clone(),
        graph,
    }
}

/// The map `T`: drop dummy edges, collapse `aᵢ` to `a`.
#[allow(non_snake_case)]
pub fn map_T(level: &LevelInstance, m: &Matching) -> Result<Matching> {
    let base = &level.base;
    let mut pairs = Vec::new();
    for a in base.men() {
        let real = |i| {
            m.partner_of_man(level.copy(a, i))
                .and_then(|w| match level.origin_of_woman(w) {
                    LevelWoman::Base(b) => Some(b),
                    LevelWoman::Dummy(_) => None,
                })
        };
        match (real(0), real(1)) {
            (Some(_), Some(_)) => {
                return Err(Error::Collapse(format!(
                    "both copies of {} hold real partners",
                    base.man_id(a)
                )))
            }
            (Some(b), None) | (None, Some(b)) => pairs.push((a, b)),
            (None, None) => {}
        }
    }
    Matching::from_pairs(base, pairs)
}

/// Level (0 or 1) of every base vertex under a matching of `G'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FValues {
    pub men: Vec<u8>,
    pub women: Vec<u8>,
}

/// `f(a) = 0` iff `a₁` holds `d(a)`; `f(b) = 1` iff `b` holds a level-1 man.
pub fn f_values(level: &LevelInstance, m: &Matching) -> FValues {
    let men = level
        .base
        .men()
        .map(|a| u8::from(m.partner_of_man(level.copy(a, 1)) != Some(level.dummy(a))))
        .collect();
    let women = level
        .base
        .women()
        .map(|b| {
            u8::from(
                m.partner_of_woman(b)
                    .is_some_and(|x| level.origin_of_man(x).1 == 1),
            )
        })
        .collect();
    FValues { men, women }
}

/// A dominant matching: men-optimal stable matching of `G'`, collapsed.
pub fn dominant_via_level_graph(inst: &Instance) -> Matching {
    let level = build_level_graph(inst);
    let s = gale_shapley::men_optimal(&level.graph);
    map_T(&level, &s).expect("stable matchings of the level graph collapse")
}

/// A dominant matching by the two-level proposal scheme without dummies:
/// each man proposes as `a₀` down his list, then once more as `a₁`; women
/// prefer any level-1 proposer to any level-0 one.
pub fn dominant_two_level(inst: &Instance) -> Matching {
    let mut level = vec![0u8; inst.num_men()];
    let mut next = vec![0usize; inst.num_men()];
    let mut held: Vec<Option<(Man, u8)>> = vec![None; inst.num_women()];
    let mut queue: std::collections::VecDeque<Man> = inst.men().collect();
    let beats = |b: Woman, x: (Man, u8), y: (Man, u8)| {
        x.1 > y.1 || (x.1 == y.1 && inst.woman_prefers(b, x.0, Some(y.0)))
    };
    while let Some(a) = queue.pop_front() {
        let prefs = inst.man_prefs(a);
        loop {
            if next[a.0] == prefs.len() {
                if level[a.0] == 0 {
                    level[a.0] = 1;
                    next[a.0] = 0;
                    continue;
                }
                break;
            }
            let b = prefs[next[a.0]];
            next[a.0] += 1;
            let me = (a, level[a.0]);
            match held[b.0] {
                None => {
                    held[b.0] = Some(me);
                    break;
                }
                Some(h) if beats(b, me, h) => {
                    held[b.0] = Some(me);
                    queue.push_back(h.0);
                    break;
                }
                Some(_) => {}
            }
        }
    }
    let pairs = inst.women().filter_map(|b| held[b.0].map(|(a, _)| (a, b)));
    Matching::from_pairs(inst, pairs).expect("proposals respect edges")
}

/// A stable matching `M'` of `G'` with `T(M') = M`, for dominant `M`.
///
/// Men in `A0` keep `M(a)` at level 0, men in `A1` move to level 1, everyone
/// else stays at level 0.
pub fn inverse_map(level: &LevelInstance, m: &Matching) -> Result<Matching> {
    let inst = &level.base;
    let v = is_dominant(inst, m);
    if let Some(c) = v.certificate {
        return Err(Error::NotDominant(c.describe(inst)));
    }
    let p = partition(inst, m, true);
    if let Some(&a) = p.overlap().first() {
        let c = Certificate {
            kind: CertificateKind::PartitionOverlap,
            witness: vec![a.into()],
        };
        return Err(Error::NotDominant(c.describe(inst)));
    }
    if let Some(b) = p
        .women_b1()
        .into_iter()
        .find(|&b| m.partner_of_woman(b).is_none())
    {
        return Err(Error::NotDominant(format!(
            "unmatched woman {} in B1",
            inst.woman_id(b)
        )));
    }
    let mut pairs = Vec::with_capacity(2 * inst.num_men());
    for a in inst.men() {
        let (a0, a1, d) = (level.copy(a, 0), level.copy(a, 1), level.dummy(a));
        let partner = m.partner_of_man(a);
        if p.in_a1(a) {
            pairs.push((a0, d));
            if let Some(b) = partner {
                pairs.push((a1, b));
            }
        } else {
            if let Some(b) = partner {
                pairs.push((a0, b));
            }
            pairs.push((a1, d));
        }
    }
    Matching::from_pairs(&level.graph, pairs)
}
