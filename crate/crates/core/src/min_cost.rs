//! Minimum-cost dominant matchings.
//!
//! Dominant matchings of `G` are exactly the images of stable matchings of
//! `G'`, and costs carry over when copies inherit their base edge's cost and
//! dummy edges cost nothing. The cheapest stable matching of `G'` is found
//! through its rotation poset: every stable matching is the men-optimal one
//! with a closed set of rotations eliminated, so the optimum is a
//! minimum-weight closed set, which reduces to a minimum cut.

use std::collections::{BTreeMap, VecDeque};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gale_shapley;
use crate::instance::{Edge, Instance, Man, Matching, Woman};
use crate::level_graph::{build_level_graph, map_T, LevelInstance, LevelWoman};

/// Exact edge costs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostFunction {
    costs: BTreeMap<Edge, BigRational>,
}

impl CostFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every edge of `inst` gets `f(edge)`.
    pub fn from_fn(inst: &Instance, mut f: impl FnMut(Edge) -> BigRational) -> Self {
        CostFunction {
            costs: inst.edges().map(|e| (e, f(e))).collect(),
        }
    }

    pub fn set(&mut self, e: Edge, c: BigRational) {
        self.costs.insert(e, c);
    }

    pub fn get(&self, e: Edge) -> Option<&BigRational> {
        self.costs.get(&e)
    }

    /// Fails on the first edge of `inst` without a cost.
    pub fn check_total(&self, inst: &Instance) -> Result<()> {
        match inst.edges().find(|e| !self.costs.contains_key(e)) {
            Some(e) => Err(Error::MissingCost(inst.edge_label(e))),
            None => Ok(()),
        }
    }

    pub fn cost_of(&self, inst: &Instance, m: &Matching) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for e in m.pairs() {
            total += self
                .get(e)
                .ok_or_else(|| Error::MissingCost(inst.edge_label(e)))?;
        }
        Ok(total)
    }
}

/// Parses an integer, a decimal like `-2.75`, or a fraction `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if s.contains('/') {
        let r = BigRational::from_str(s).ok()?;
        return Some(r);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Reads `<man> <woman> <cost>` lines; `#` comments and blank lines are
/// skipped.
pub fn parse_costs(text: &str, inst: &Instance) -> Result<CostFunction> {
    let mut c = CostFunction::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::CostLine {
            line: i + 1,
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b, v] = parts[..] else {
            return Err(bad(format!(
                "expected `<man> <woman> <cost>`, got `{line}`"
            )));
        };
        let e = inst
            .edge_by_ids(a, b)
            .ok_or_else(|| bad(format!("({a},{b}) is not an edge")))?;
        let v = parse_rational(v).ok_or_else(|| bad(format!("`{v}` is not a number")))?;
        if c.costs.insert(e, v).is_some() {
            return Err(bad(format!("second cost for ({a},{b})")));
        }
    }
    Ok(c)
}

pub fn serialize_costs(inst: &Instance, c: &CostFunction) -> String {
    let mut lines: Vec<String> = c
        .costs
        .iter()
        .map(|(&e, v)| format!("{} {} {}", inst.man_id(e.0), inst.woman_id(e.1), v))
        .collect();
    lines.sort();
    lines.into_iter().map(|l| l + "\n").collect()
}

/// Costs on `G'`: both copies of `(a, b)` cost `c(a, b)`, dummy edges cost 0.
pub fn extend_costs(level: &LevelInstance, c: &CostFunction) -> Result<CostFunction> {
    c.check_total(&level.base)?;
    let costs = level
        .lift_edge_values(|e| c.get(e).cloned(), Some(BigRational::zero()))
        .into_iter()
        .map(|(e, v)| (e, v.expect("checked total")))
        .collect();
    Ok(CostFunction { costs })
}

/// A rotation: men `m_i` matched to `w_i` move to `w_{i+1}` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub pairs: Vec<(Man, Woman)>,
}

/// Rotations of `inst` in elimination order from the men-optimal to the
/// women-optimal stable matching, with the precedence relation as
/// `(before, after)` index pairs.
#[derive(Clone, Debug)]
pub struct RotationPoset {
    pub men_optimal: Matching,
    pub rotations: Vec<Rotation>,
    pub precedes: Vec<(usize, usize)>,
}

pub fn rotation_poset(inst: &Instance) -> RotationPoset {
    let m0 = gale_shapley::men_optimal(inst);
    let mz = gale_shapley::women_optimal(inst);
    let mut cur = m0.clone();
    // next candidate position in each man's list
    let mut ptr: Vec<usize> = inst
        .men()
        .map(|a| {
            cur.partner_of_man(a)
                .map_or(0, |b| inst.man_rank(a, b).unwrap() + 1)
        })
        .collect();
    // women's partner history: (rotation index that installed him, man)
    let mut history: Vec<Vec<(Option<usize>, Man)>> = inst
        .women()
        .map(|b| {
            cur.partner_of_woman(b)
                .map(|a| vec![(None, a)])
                .unwrap_or_default()
        })
        .collect();
    let mut rotations = Vec::new();
    let mut by_man: Vec<Vec<usize>> = vec![Vec::new(); inst.num_men()];

    let s_of = |a: Man, cur: &Matching, ptr: &mut Vec<usize>| -> Woman {
        let prefs = inst.man_prefs(a);
        loop {
            let w = prefs[ptr[a.0]];
            if cur
                .partner_of_woman(w)
                .is_some_and(|h| inst.woman_prefers(w, a, Some(h)))
            {
                return w;
            }
            ptr[a.0] += 1;
        }
    };

    loop {
        let active: Vec<Man> = inst
            .men()
            .filter(|&a| {
                cur.partner_of_man(a).is_some() && cur.partner_of_man(a) != mz.partner_of_man(a)
            })
            .collect();
        let Some(&start) = active.first() else { break };
        // walk next(m) = M(s(m)) until a man repeats
        let mut seen = vec![usize::MAX; inst.num_men()];
        let mut walk = Vec::new();
        let mut a = start;
        while seen[a.0] == usize::MAX {
            seen[a.0] = walk.len();
            walk.push(a);
            let s = s_of(a, &cur, &mut ptr);
            a = cur.partner_of_woman(s).unwrap();
        }
        let cycle = &walk[seen[a.0]..];
        let pairs: Vec<(Man, Woman)> = cycle
            .iter()
            .map(|&m| (m, cur.partner_of_man(m).unwrap()))
            .collect();
        let idx = rotations.len();
        let k = pairs.len();
        let moves: Vec<(Man, Woman)> = (0..k).map(|i| (pairs[i].0, pairs[(i + 1) % k].1)).collect();
        for &(m, _) in &pairs {
            cur.remove_man(m);
        }
        for &(m, w) in &moves {
            cur.insert(m, w);
            ptr[m.0] = inst.man_rank(m, w).unwrap() + 1;
            history[w.0].push((Some(idx), m));
            by_man[m.0].push(idx);
        }
        rotations.push(Rotation { pairs });
    }

    let mut precedes = Vec::new();
    for list in &by_man {
        for w in list.windows(2) {
            precedes.push((w[0], w[1]));
        }
    }
    for (idx, r) in rotations.iter().enumerate() {
        let k = r.pairs.len();
        for i in 0..k {
            let (m, from) = r.pairs[i];
            let to = r.pairs[(i + 1) % k].1;
            let lo = inst.man_rank(m, from).unwrap() + 1;
            let hi = inst.man_rank(m, to).unwrap();
            for &w in &inst.man_prefs(m)[lo..hi] {
                // the rotation after which w ranks her partner above m
                let crossing = history[w.0]
                    .iter()
                    .find(|&&(_, h)| inst.woman_prefers(w, h, Some(m)))
                    .and_then(|&(r, _)| r);
                if let Some(p) = crossing {
                    precedes.push((p, idx));
                }
            }
        }
    }
    precedes.sort_unstable();
    precedes.dedup();
    RotationPoset {
        men_optimal: m0,
        rotations,
        precedes,
    }
}

/// Applies the chosen rotations (in elimination order) to the men-optimal
/// matching.
pub fn apply_rotations(poset: &RotationPoset, chosen: &[bool]) -> Matching {
    let mut m = poset.men_optimal.clone();
    for (r, _) in poset.rotations.iter().zip(chosen).filter(|(_, &c)| c) {
        let k = r.pairs.len();
        for &(a, _) in &r.pairs {
            m.remove_man(a);
        }
        for i in 0..k {
            m.insert(r.pairs[i].0, r.pairs[(i + 1) % k].1);
        }
    }
    m
}

/// A cheapest stable matching of `inst` under `c`.
pub fn min_cost_stable(inst: &Instance, c: &CostFunction) -> Result<(Matching, BigRational)> {
    c.check_total(inst)?;
    let poset = rotation_poset(inst);
    let weight: Vec<BigRational> = poset
        .rotations
        .iter()
        .map(|r| {
            let k = r.pairs.len();
            (0..k).fold(BigRational::zero(), |acc, i| {
                let (m, w) = r.pairs[i];
                let w2 = r.pairs[(i + 1) % k].1;
                acc + c.get((m, w2)).unwrap() - c.get((m, w)).unwrap()
            })
        })
        .collect();
    let chosen = min_weight_closure(weight.len(), &poset.precedes, &weight);
    let m = apply_rotations(&poset, &chosen);
    let cost = c.cost_of(inst, &m)?;
    Ok((m, cost))
}

/// A dominant matching of minimum total cost, with that cost.
pub fn min_cost_dominant(inst: &Instance, c: &CostFunction) -> Result<(Matching, BigRational)> {
    let level = build_level_graph(inst);
    let lc = extend_costs(&level, c)?;
    let (mp, _) = min_cost_stable(&level.graph, &lc)?;
    let m = map_T(&level, &mp)?;
    let cost = c.cost_of(inst, &m)?;
    Ok((m, cost))
}

/// Cost of a `G'` matching, skipping dummy edges.
pub fn level_cost(level: &LevelInstance, c: &CostFunction, mp: &Matching) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (m, w) in mp.pairs() {
        if let LevelWoman::Base(b) = level.origin_of_woman(w) {
            let e = (level.origin_of_man(m).0, b);
            total += c
                .get(e)
                .ok_or_else(|| Error::MissingCost(level.base.edge_label(e)))?;
        }
    }
    Ok(total)
}

/// A set of nodes closed under predecessors (`(p, q)` means `q` needs `p`)
/// with minimum total weight.
fn min_weight_closure(n: usize, precedes: &[(usize, usize)], weight: &[BigRational]) -> Vec<bool> {
    // maximise profit = -weight over closed sets: source feeds profitable
    // nodes, losing nodes drain to the sink, prerequisites are uncuttable
    let (s, t) = (n, n + 1);
    let mut net = FlowNet::new(n + 2);
    let mut big = BigRational::one();
    for w in weight {
        big += w.abs();
    }
    for (v, w) in weight.iter().enumerate() {
        if w.is_negative() {
            net.add(s, v, -w.clone());
        } else if w.is_positive() {
            net.add(v, t, w.clone());
        }
    }
    for &(p, q) in precedes {
        net.add(q, p, big.clone());
    }
    net.max_flow(s, t);
    let reach = net.residual_reach(s);
    (0..n).map(|v| reach[v]).collect()
}

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<BigRational>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, c: BigRational) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(BigRational::zero());
    }

    /// Shortest augmenting paths; exact arithmetic keeps this finite.
    fn max_flow(&mut self, s: usize, t: usize) {
        loop {
            let mut via = vec![usize::MAX; self.head.len()];
            let mut seen = vec![false; self.head.len()];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if !seen[v] && self.cap[e].is_positive() {
                        seen[v] = true;
                        via[v] = e;
                        q.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return;
            }
            let mut path = Vec::new();
            let mut v = t;
            while v != s {
                let e = via[v];
                path.push(e);
                v = self.to[e ^ 1];
            }
            let push = path.iter().map(|&e| self.cap[e].clone()).min().unwrap();
            for e in path {
                self.cap[e] -= &push;
                self.cap[e ^ 1] += &push;
            }
        }
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if !seen[v] && self.cap[e].is_positive() {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        seen
    }
}

/// `p/q` and a decimal rendering (exact when finite, else 12 places).
pub fn format_rational(r: &BigRational) -> (String, String) {
    let frac = if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    };
    let neg = r.is_negative();
    let a = r.abs();
    let int = a.numer() / a.denom();
    let mut rem = a.numer() % a.denom();
    let mut digits = String::new();
    let ten = BigInt::from(10);
    while !rem.is_zero() && digits.len() < 12 {
        rem *= &ten;
        digits.push_str(&(&rem / a.denom()).to_string());
        rem %= a.denom();
    }
    let mut dec = if neg && !a.is_zero() {
        format!("-{int}")
    } else {
        int.to_string()
    };
    if !digits.is_empty() {
        dec.push('.');
        dec.push_str(&digits);
    }
    (frac, dec)
}
