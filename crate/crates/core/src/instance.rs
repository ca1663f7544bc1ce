//! Bipartite preference instances and matchings.
//!
//! An [`Instance`] holds two disjoint vertex sides (men and women) and, for
//! every vertex, a strict preference list over its neighbours, most preferred
//! first. Vertices are addressed by dense indices ([`Man`], [`Woman`]) in the
//! order they were declared; "id order" throughout the crate means this
//! declaration order.
//!
//! The text format (`PREF v1`) looks like this:
//!
//! ```text
//! # comment
//! men: a1 a2
//! women: b1 b2
//! a1: b1 b2
//! a2: b1
//! b1: a1 a2
//! b2: a1
//! ```
//!
//! A vertex without a preference line has an empty list.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, InstanceError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Man(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Woman(pub usize);

/// A vertex on either side of the bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Man(Man),
    Woman(Woman),
}

impl From<Man> for Vertex {
    fn from(m: Man) -> Self {
        Vertex::Man(m)
    }
}

impl From<Woman> for Vertex {
    fn from(w: Woman) -> Self {
        Vertex::Woman(w)
    }
}

/// An edge is always written man first.
pub type Edge = (Man, Woman);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    men: Vec<String>,
    women: Vec<String>,
    man_prefs: Vec<Vec<Woman>>,
    woman_prefs: Vec<Vec<Man>>,
    // (neighbour, rank) sorted by neighbour for binary search
    man_ranks: Vec<Vec<(Woman, u32)>>,
    woman_ranks: Vec<Vec<(Man, u32)>>,
    man_index: HashMap<String, Man>,
    woman_index: HashMap<String, Woman>,
    edge_count: usize,
}

fn check_id(id: &str) -> std::result::Result<(), InstanceError> {
    if id.is_empty() || id.contains(':') || id.chars().any(char::is_whitespace) {
        return Err(InstanceError::InvalidId(id.to_string()));
    }
    Ok(())
}

impl Instance {
    /// Builds an instance from ids and index-based preference lists.
    ///
    /// Validates id uniqueness, strictness of every list and adjacency
    /// symmetry. Ids may be any non-empty whitespace-free token; the `:`
    /// restriction is only enforced by [`Instance::from_ids`] and the parser.
    pub fn from_indexed(
        men: Vec<String>,
        women: Vec<String>,
        man_prefs: Vec<Vec<Woman>>,
        woman_prefs: Vec<Vec<Man>>,
    ) -> std::result::Result<Instance, InstanceError> {
        assert_eq!(men.len(), man_prefs.len(), "one list per man");
        assert_eq!(women.len(), woman_prefs.len(), "one list per woman");
        let mut man_index = HashMap::with_capacity(men.len());
        let mut woman_index = HashMap::with_capacity(women.len());
        for (i, id) in men.iter().enumerate() {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(InstanceError::InvalidId(id.clone()));
            }
            if man_index.insert(id.clone(), Man(i)).is_some() {
                return Err(InstanceError::DuplicateVertex(id.clone()));
            }
        }
        for (j, id) in women.iter().enumerate() {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(InstanceError::InvalidId(id.clone()));
            }
            if man_index.contains_key(id) || woman_index.insert(id.clone(), Woman(j)).is_some() {
                return Err(InstanceError::DuplicateVertex(id.clone()));
            }
        }

        let mut man_ranks = Vec::with_capacity(men.len());
        for (i, list) in man_prefs.iter().enumerate() {
            let mut ranks: Vec<(Woman, u32)> = list
                .iter()
                .enumerate()
                .map(|(r, &w)| (w, r as u32))
                .collect();
            ranks.sort_unstable();
            for pair in ranks.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(InstanceError::DuplicateEntry {
                        vertex: men[i].clone(),
                        neighbor: women[pair[0].0 .0].clone(),
                    });
                }
            }
            if let Some(&(w, _)) = ranks.last() {
                if w.0 >= women.len() {
                    return Err(InstanceError::UnknownNeighbor {
                        vertex: men[i].clone(),
                        neighbor: format!("#{}", w.0),
                    });
                }
            }
            man_ranks.push(ranks);
        }
        let mut woman_ranks = Vec::with_capacity(women.len());
        for (j, list) in woman_prefs.iter().enumerate() {
            let mut ranks: Vec<(Man, u32)> = list
                .iter()
                .enumerate()
                .map(|(r, &m)| (m, r as u32))
                .collect();
            ranks.sort_unstable();
            for pair in ranks.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(InstanceError::DuplicateEntry {
                        vertex: women[j].clone(),
                        neighbor: men[pair[0].0 .0].clone(),
                    });
                }
            }
            if let Some(&(m, _)) = ranks.last() {
                if m.0 >= men.len() {
                    return Err(InstanceError::UnknownNeighbor {
                        vertex: women[j].clone(),
                        neighbor: format!("#{}", m.0),
                    });
                }
            }
            woman_ranks.push(ranks);
        }

        let mut edge_count = 0;
        for (i, list) in man_prefs.iter().enumerate() {
            for &w in list {
                if woman_ranks[w.0]
                    .binary_search_by_key(&Man(i), |&(m, _)| m)
                    .is_err()
                {
                    return Err(InstanceError::AsymmetricEdge {
                        man: men[i].clone(),
                        woman: women[w.0].clone(),
                    });
                }
                edge_count += 1;
            }
        }
        for (j, list) in woman_prefs.iter().enumerate() {
            for &m in list {
                if man_ranks[m.0]
                    .binary_search_by_key(&Woman(j), |&(w, _)| w)
                    .is_err()
                {
                    return Err(InstanceError::AsymmetricEdge {
                        man: men[m.0].clone(),
                        woman: women[j].clone(),
                    });
                }
            }
        }

        Ok(Instance {
            men,
            women,
            man_prefs,
            woman_prefs,
            man_ranks,
            woman_ranks,
            man_index,
            woman_index,
            edge_count,
        })
    }

    /// Builds an instance from string ids. `prefs` lists `(vertex, neighbours)`
    /// in decreasing preference; vertices missing from `prefs` get empty lists.
    pub fn from_ids<S: AsRef<str>>(
        men: &[S],
        women: &[S],
        prefs: &[(S, Vec<S>)],
    ) -> std::result::Result<Instance, InstanceError> {
        let men: Vec<String> = men.iter().map(|s| s.as_ref().to_string()).collect();
        let women: Vec<String> = women.iter().map(|s| s.as_ref().to_string()).collect();
        for id in men.iter().chain(&women) {
            check_id(id)?;
        }
        let lookup = Lookup::new(&men, &women)?;
        let mut man_prefs = vec![None; men.len()];
        let mut woman_prefs = vec![None; women.len()];
        for (id, list) in prefs {
            lookup.fill(
                id.as_ref(),
                list.iter().map(AsRef::as_ref),
                &mut man_prefs,
                &mut woman_prefs,
            )?;
        }
        Instance::from_indexed(
            men,
            women,
            man_prefs
                .into_iter()
                .map(Option::unwrap_or_default)
                .collect(),
            woman_prefs
                .into_iter()
                .map(Option::unwrap_or_default)
                .collect(),
        )
    }

    pub fn num_men(&self) -> usize {
        self.men.len()
    }

    pub fn num_women(&self) -> usize {
        self.women.len()
    }

    /// Number of edges, `m`.
    pub fn num_edges(&self) -> usize {
        self.edge_count
    }

    pub fn men(&self) -> impl ExactSizeIterator<Item = Man> + Clone {
        (0..self.men.len()).map(Man)
    }

    pub fn women(&self) -> impl ExactSizeIterator<Item = Woman> + Clone {
        (0..self.women.len()).map(Woman)
    }

    pub fn man_id(&self, m: Man) -> &str {
        &self.men[m.0]
    }

    pub fn woman_id(&self, w: Woman) -> &str {
        &self.women[w.0]
    }

    pub fn vertex_id(&self, v: Vertex) -> &str {
        match v {
            Vertex::Man(m) => self.man_id(m),
            Vertex::Woman(w) => self.woman_id(w),
        }
    }

    pub fn man_by_id(&self, id: &str) -> Option<Man> {
        self.man_index.get(id).copied()
    }

    pub fn woman_by_id(&self, id: &str) -> Option<Woman> {
        self.woman_index.get(id).copied()
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<Vertex> {
        self.man_by_id(id)
            .map(Vertex::Man)
            .or_else(|| self.woman_by_id(id).map(Vertex::Woman))
    }

    /// Looks up an edge by its endpoint ids, in either order.
    pub fn edge_by_ids(&self, u: &str, v: &str) -> Option<Edge> {
        let (m, w) = match (self.vertex_by_id(u)?, self.vertex_by_id(v)?) {
            (Vertex::Man(m), Vertex::Woman(w)) | (Vertex::Woman(w), Vertex::Man(m)) => (m, w),
            _ => return None,
        };
        self.is_edge(m, w).then_some((m, w))
    }

    pub fn man_prefs(&self, m: Man) -> &[Woman] {
        &self.man_prefs[m.0]
    }

    pub fn woman_prefs(&self, w: Woman) -> &[Man] {
        &self.woman_prefs[w.0]
    }

    /// Position of `w` in `m`'s list (0 = top choice).
    pub fn man_rank(&self, m: Man, w: Woman) -> Option<usize> {
        let ranks = &self.man_ranks[m.0];
        ranks
            .binary_search_by_key(&w, |&(x, _)| x)
            .ok()
            .map(|i| ranks[i].1 as usize)
    }

    /// Position of `m` in `w`'s list (0 = top choice).
    pub fn woman_rank(&self, w: Woman, m: Man) -> Option<usize> {
        let ranks = &self.woman_ranks[w.0];
        ranks
            .binary_search_by_key(&m, |&(x, _)| x)
            .ok()
            .map(|i| ranks[i].1 as usize)
    }

    pub fn is_edge(&self, m: Man, w: Woman) -> bool {
        self.man_rank(m, w).is_some()
    }

    /// True iff `m` strictly prefers `x` to `y`; being matched beats being
    /// unmatched (`y = None`).
    pub fn man_prefers(&self, m: Man, x: Woman, y: Option<Woman>) -> bool {
        match y {
            None => true,
            Some(y) => self.man_rank(m, x) < self.man_rank(m, y),
        }
    }

    /// True iff `w` strictly prefers `x` to `y`.
    pub fn woman_prefers(&self, w: Woman, x: Man, y: Option<Man>) -> bool {
        match y {
            None => true,
            Some(y) => self.woman_rank(w, x) < self.woman_rank(w, y),
        }
    }

    /// All edges, ordered by man and then by woman index.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.man_ranks
            .iter()
            .enumerate()
            .flat_map(|(i, ranks)| ranks.iter().map(move |&(w, _)| (Man(i), w)))
    }

    pub fn edge_label(&self, (m, w): Edge) -> String {
        format!("({},{})", self.man_id(m), self.woman_id(w))
    }

    /// `n₀ = min(|A|, |B|)`.
    pub fn min_side(&self) -> usize {
        self.men.len().min(self.women.len())
    }

    /// Swaps the sides: women become the proposing side.
    pub fn transposed(&self) -> Instance {
        Instance::from_indexed(
            self.women.clone(),
            self.men.clone(),
            self.woman_prefs
                .iter()
                .map(|l| l.iter().map(|m| Woman(m.0)).collect())
                .collect(),
            self.man_prefs
                .iter()
                .map(|l| l.iter().map(|w| Man(w.0)).collect())
                .collect(),
        )
        .expect("transpose of a valid instance is valid")
    }

    /// The subgraph induced by the given men and women, with index maps back
    /// to this instance. Preference orders are inherited.
    pub fn induced(&self, men: &[Man], women: &[Woman]) -> Induced {
        let mut man_slot = vec![None; self.num_men()];
        let mut woman_slot = vec![None; self.num_women()];
        for (k, &m) in men.iter().enumerate() {
            man_slot[m.0] = Some(Man(k));
        }
        for (k, &w) in women.iter().enumerate() {
            woman_slot[w.0] = Some(Woman(k));
        }
        let man_prefs = men
            .iter()
            .map(|&m| {
                self.man_prefs(m)
                    .iter()
                    .filter_map(|w| woman_slot[w.0])
                    .collect()
            })
            .collect();
        let woman_prefs = women
            .iter()
            .map(|&w| {
                self.woman_prefs(w)
                    .iter()
                    .filter_map(|m| man_slot[m.0])
                    .collect()
            })
            .collect();
        let instance = Instance::from_indexed(
            men.iter().map(|&m| self.man_id(m).to_string()).collect(),
            women
                .iter()
                .map(|&w| self.woman_id(w).to_string())
                .collect(),
            man_prefs,
            woman_prefs,
        )
        .expect("induced subgraph of a valid instance is valid");
        Induced {
            instance,
            men: men.to_vec(),
            women: women.to_vec(),
            man_slot,
            woman_slot,
        }
    }
}

/// An induced sub-instance together with the maps between its indices and
/// those of the parent instance.
#[derive(Clone, Debug)]
pub struct Induced {
    pub instance: Instance,
    /// sub index → parent man
    pub men: Vec<Man>,
    /// sub index → parent woman
    pub women: Vec<Woman>,
    man_slot: Vec<Option<Man>>,
    woman_slot: Vec<Option<Woman>>,
}

impl Induced {
    /// Restricts a parent matching to the pairs with both endpoints inside.
    pub fn restrict(&self, m: &Matching) -> Matching {
        let mut out = Matching::empty(&self.instance);
        for (a, b) in m.pairs() {
            if let (Some(sa), Some(sb)) = (self.man_slot[a.0], self.woman_slot[b.0]) {
                out.insert(sa, sb);
            }
        }
        out
    }

    /// Parent-instance edges of a sub matching.
    pub fn lift(&self, m: &Matching) -> Vec<Edge> {
        m.pairs()
            .map(|(a, b)| (self.men[a.0], self.women[b.0]))
            .collect()
    }

    pub fn man_in_sub(&self, m: Man) -> Option<Man> {
        self.man_slot[m.0]
    }

    pub fn woman_in_sub(&self, w: Woman) -> Option<Woman> {
        self.woman_slot[w.0]
    }
}

struct Lookup<'a> {
    men: HashMap<&'a str, usize>,
    women: HashMap<&'a str, usize>,
}

impl<'a> Lookup<'a> {
    fn new(men: &'a [String], women: &'a [String]) -> std::result::Result<Self, InstanceError> {
        let mut lm = HashMap::new();
        let mut lw = HashMap::new();
        for (i, id) in men.iter().enumerate() {
            if lm.insert(id.as_str(), i).is_some() {
                return Err(InstanceError::DuplicateVertex(id.clone()));
            }
        }
        for (j, id) in women.iter().enumerate() {
            if lm.contains_key(id.as_str()) || lw.insert(id.as_str(), j).is_some() {
                return Err(InstanceError::DuplicateVertex(id.clone()));
            }
        }
        Ok(Lookup { men: lm, women: lw })
    }

    fn fill<'s>(
        &self,
        id: &str,
        list: impl Iterator<Item = &'s str>,
        man_prefs: &mut [Option<Vec<Woman>>],
        woman_prefs: &mut [Option<Vec<Man>>],
    ) -> std::result::Result<(), InstanceError> {
        let unknown = |n: &str| InstanceError::UnknownNeighbor {
            vertex: id.to_string(),
            neighbor: n.to_string(),
        };
        if let Some(&i) = self.men.get(id) {
            if man_prefs[i].is_some() {
                return Err(InstanceError::DuplicateList(id.to_string()));
            }
            let list = list
                .map(|n| {
                    self.women
                        .get(n)
                        .map(|&j| Woman(j))
                        .ok_or_else(|| unknown(n))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            man_prefs[i] = Some(list);
        } else if let Some(&j) = self.women.get(id) {
            if woman_prefs[j].is_some() {
                return Err(InstanceError::DuplicateList(id.to_string()));
            }
            let list = list
                .map(|n| self.men.get(n).map(|&i| Man(i)).ok_or_else(|| unknown(n)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            woman_prefs[j] = Some(list);
        } else {
            return Err(InstanceError::UnknownVertex(id.to_string()));
        }
        Ok(())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, source: InstanceError) -> Error {
    Error::Parse { line, source }
}

fn header<'t>(
    lines: &mut impl Iterator<Item = (usize, &'t str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, Vec<String>)> {
    let (line, text) = lines.next().ok_or_else(|| {
        parse_err(
            last_line,
            InstanceError::Malformed(format!("missing `{key}:` line")),
        )
    })?;
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| {
            parse_err(
                line,
                InstanceError::Malformed(format!("expected `{key}:` line")),
            )
        })?;
    let ids: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    for id in &ids {
        check_id(id).map_err(|e| parse_err(line, e))?;
    }
    Ok((line, ids))
}

/// Parses a `PREF v1` document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (men_line, men) = header(&mut lines, "men", 1)?;
    let (women_line, women) = header(&mut lines, "women", men_line)?;
    let lookup = Lookup::new(&men, &women).map_err(|e| {
        let line = match &e {
            InstanceError::DuplicateVertex(id) if men.iter().filter(|m| *m == id).count() > 1 => {
                men_line
            }
            _ => women_line,
        };
        parse_err(line, e)
    })?;

    let mut man_prefs: Vec<Option<Vec<Woman>>> = vec![None; men.len()];
    let mut woman_prefs: Vec<Option<Vec<Man>>> = vec![None; women.len()];
    let mut man_line = vec![0usize; men.len()];
    let mut woman_line = vec![0usize; women.len()];
    for (line, text) in lines {
        let (id, rest) = text.split_once(':').ok_or_else(|| {
            parse_err(
                line,
                InstanceError::Malformed("expected `<id>: <ids>`".to_string()),
            )
        })?;
        let id = id.trim();
        check_id(id).map_err(|e| parse_err(line, e))?;
        let list: Vec<&str> = rest.split_whitespace().collect();
        if let Some(bad) = list.iter().find(|n| n.contains(':')) {
            return Err(parse_err(line, InstanceError::InvalidId(bad.to_string())));
        }
        lookup
            .fill(id, list.iter().copied(), &mut man_prefs, &mut woman_prefs)
            .map_err(|e| parse_err(line, e))?;
        if let Some(&i) = lookup.men.get(id) {
            man_line[i] = line;
        } else if let Some(&j) = lookup.women.get(id) {
            woman_line[j] = line;
        }
    }
    let man_prefs: Vec<Vec<Woman>> = man_prefs
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let woman_prefs: Vec<Vec<Man>> = woman_prefs
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();

    // strictness and symmetry, reported against the offending line
    for (i, list) in man_prefs.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        for &w in list {
            if !seen.insert(w) {
                return Err(parse_err(
                    man_line[i],
                    InstanceError::DuplicateEntry {
                        vertex: men[i].clone(),
                        neighbor: women[w.0].clone(),
                    },
                ));
            }
        }
    }
    for (j, list) in woman_prefs.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        for &m in list {
            if !seen.insert(m) {
                return Err(parse_err(
                    woman_line[j],
                    InstanceError::DuplicateEntry {
                        vertex: women[j].clone(),
                        neighbor: men[m.0].clone(),
                    },
                ));
            }
        }
    }
    for (i, list) in man_prefs.iter().enumerate() {
        for &w in list {
            if !woman_prefs[w.0].contains(&Man(i)) {
                return Err(parse_err(
                    man_line[i],
                    InstanceError::AsymmetricEdge {
                        man: men[i].clone(),
                        woman: women[w.0].clone(),
                    },
                ));
            }
        }
    }
    for (j, list) in woman_prefs.iter().enumerate() {
        for &m in list {
            if !man_prefs[m.0].contains(&Woman(j)) {
                return Err(parse_err(
                    woman_line[j],
                    InstanceError::AsymmetricEdge {
                        man: men[m.0].clone(),
                        woman: women[j].clone(),
                    },
                ));
            }
        }
    }

    Instance::from_indexed(men, women, man_prefs, woman_prefs).map_err(|e| parse_err(women_line, e))
}

/// Writes an instance in `PREF v1`; every vertex gets a line.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str("men:");
    for id in &inst.men {
        out.push(' ');
        out.push_str(id);
    }
    out.push_str("\nwomen:");
    for id in &inst.women {
        out.push(' ');
        out.push_str(id);
    }
    out.push('\n');
    for m in inst.men() {
        out.push_str(inst.man_id(m));
        out.push(':');
        for &w in inst.man_prefs(m) {
            out.push(' ');
            out.push_str(inst.woman_id(w));
        }
        out.push('\n');
    }
    for w in inst.women() {
        out.push_str(inst.woman_id(w));
        out.push(':');
        for &m in inst.woman_prefs(w) {
            out.push(' ');
            out.push_str(inst.man_id(m));
        }
        out.push('\n');
    }
    out
}

/// Random instance: every man–woman pair is an edge independently with
/// probability `density`, and each list is a uniformly random permutation of
/// the vertex's neighbours. Fully determined by `seed`.
///
/// Men are named `a1..an`, women `b1..bn`, zero-padded so that id order and
/// lexicographic order agree.
pub fn generate_random(n_men: usize, n_women: usize, density: f64, seed: u64) -> Result<Instance> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width_m = n_men.to_string().len();
    let width_w = n_women.to_string().len();
    let men: Vec<String> = (1..=n_men).map(|i| format!("a{i:0width_m$}")).collect();
    let women: Vec<String> = (1..=n_women).map(|j| format!("b{j:0width_w$}")).collect();

    let mut man_prefs: Vec<Vec<Woman>> = vec![Vec::new(); n_men];
    let mut woman_prefs: Vec<Vec<Man>> = vec![Vec::new(); n_women];
    let total = (n_men as u64) * (n_women as u64);
    if total > 0 {
        // geometric gaps between successes; identical in law to one Bernoulli
        // trial per pair but linear in the number of edges
        let log_q = (1.0 - density).ln();
        let mut pos: u64 = 0;
        loop {
            if density < 1.0 {
                let u: f64 = 1.0 - rng.gen::<f64>();
                let gap = (u.ln() / log_q).floor();
                if !gap.is_finite() || gap >= (total - pos) as f64 {
                    break;
                }
                pos += gap as u64;
            }
            if pos >= total {
                break;
            }
            let i = (pos / n_women as u64) as usize;
            let j = (pos % n_women as u64) as usize;
            man_prefs[i].push(Woman(j));
            woman_prefs[j].push(Man(i));
            pos += 1;
        }
    }
    for list in &mut man_prefs {
        list.shuffle(&mut rng);
    }
    for list in &mut woman_prefs {
        list.shuffle(&mut rng);
    }
    Ok(Instance::from_indexed(men, women, man_prefs, woman_prefs)?)
}

/// A matching of an [`Instance`]: disjoint edges with partner lookup on both
/// sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    of_man: Vec<Option<Woman>>,
    of_woman: Vec<Option<Man>>,
    size: usize,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Matching {
        Matching {
            of_man: vec![None; inst.num_men()],
            of_woman: vec![None; inst.num_women()],
            size: 0,
        }
    }

    /// Validates that every pair is an edge and that no vertex repeats.
    pub fn from_pairs(inst: &Instance, pairs: impl IntoIterator<Item = Edge>) -> Result<Matching> {
        let mut out = Matching::empty(inst);
        for (m, w) in pairs {
            if m.0 >= inst.num_men() || w.0 >= inst.num_women() || !inst.is_edge(m, w) {
                return Err(Error::NotAnEdge(format!("{m:?}-{w:?}")));
            }
            if out.of_man[m.0].is_some() {
                return Err(Error::MatchedTwice(inst.man_id(m).to_string()));
            }
            if out.of_woman[w.0].is_some() {
                return Err(Error::MatchedTwice(inst.woman_id(w).to_string()));
            }
            out.insert(m, w);
        }
        Ok(out)
    }

    /// Builds a matching from `(man id, woman id)` pairs.
    pub fn from_ids<S: AsRef<str>>(inst: &Instance, pairs: &[(S, S)]) -> Result<Matching> {
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let e = inst
                .edge_by_ids(a, b)
                .ok_or_else(|| Error::NotAnEdge(format!("({a},{b})")))?;
            edges.push(e);
        }
        Matching::from_pairs(inst, edges)
    }

    /// Adds a pair, assuming both endpoints are currently free.
    pub(crate) fn insert(&mut self, m: Man, w: Woman) {
        debug_assert!(self.of_man[m.0].is_none() && self.of_woman[w.0].is_none());
        self.of_man[m.0] = Some(w);
        self.of_woman[w.0] = Some(m);
        self.size += 1;
    }

    pub(crate) fn remove_man(&mut self, m: Man) {
        if let Some(w) = self.of_man[m.0].take() {
            self.of_woman[w.0] = None;
            self.size -= 1;
        }
    }

    pub fn partner_of_man(&self, m: Man) -> Option<Woman> {
        self.of_man[m.0]
    }

    pub fn partner_of_woman(&self, w: Woman) -> Option<Man> {
        self.of_woman[w.0]
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::Man(m) => self.partner_of_man(m).map(Vertex::Woman),
            Vertex::Woman(w) => self.partner_of_woman(w).map(Vertex::Man),
        }
    }

    pub fn contains(&self, (m, w): Edge) -> bool {
        self.of_man.get(m.0).copied().flatten() == Some(w)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Pairs in man order.
    pub fn pairs(&self) -> impl Iterator<Item = Edge> + '_ {
        self.of_man
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.map(|w| (Man(i), w)))
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.pairs().collect()
    }

    /// Pairs as `(man id, woman id)`, sorted lexicographically by id.
    pub fn id_pairs<'a>(&self, inst: &'a Instance) -> Vec<(&'a str, &'a str)> {
        let mut v: Vec<_> = self
            .pairs()
            .map(|(m, w)| (inst.man_id(m), inst.woman_id(w)))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn display<'a>(&'a self, inst: &'a Instance) -> MatchingDisplay<'a> {
        MatchingDisplay {
            matching: self,
            inst,
        }
    }
}

impl PartialOrd for Matching {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matching {
    /// Lexicographic on the sorted pair lists.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pairs().cmp(other.pairs())
    }
}

pub struct MatchingDisplay<'a> {
    matching: &'a Matching,
    inst: &'a Instance,
}

impl fmt::Display for MatchingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (a, b)) in self.matching.id_pairs(self.inst).into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

/// One `<man> <woman>` line per pair, sorted by id.
pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    let mut out = String::new();
    for (a, b) in m.id_pairs(inst) {
        out.push_str(a);
        out.push(' ');
        out.push_str(b);
        out.push('\n');
    }
    out
}

pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching> {
    let mut out = Matching::empty(inst);
    for (line, text) in content_lines(text) {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let [a, b] = toks[..] else {
            return Err(Error::MatchingLine {
                line,
                message: "expected `<man> <woman>`".to_string(),
            });
        };
        let (m, w) = inst.edge_by_ids(a, b).ok_or_else(|| Error::MatchingLine {
            line,
            message: format!("({a},{b}) is not an edge"),
        })?;
        if out.partner_of_man(m).is_some() {
            return Err(Error::MatchingLine {
                line,
                message: format!("{} matched twice", inst.man_id(m)),
            });
        }
        if out.partner_of_woman(w).is_some() {
            return Err(Error::MatchingLine {
                line,
                message: format!("{} matched twice", inst.woman_id(w)),
            });
        }
        out.insert(m, w);
    }
    Ok(out)
}
