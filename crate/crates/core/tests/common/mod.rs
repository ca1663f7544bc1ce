#![allow(dead_code)]

use popmatch::instance::generate_random;
use popmatch::oracles::{self, MatchingFamily};
use popmatch::{Instance, Matching};
use rayon::prelude::*;

pub const DENSITIES: [f64; 3] = [0.4, 0.7, 1.0];

/// 216 instances: every side size pair in 1..=6 at each density, twice.
pub fn ensemble() -> Vec<Instance> {
    (0..216u64)
        .map(|i| {
            let men = 1 + (i % 6) as usize;
            let women = 1 + ((i / 6) % 6) as usize;
            let density = DENSITIES[((i / 36) % 3) as usize];
            generate_random(men, women, density, 7_000 + i).unwrap()
        })
        .collect()
}

/// Oracle answers for one instance.
pub struct Truth {
    pub inst: Instance,
    pub all: MatchingFamily,
    pub popular: MatchingFamily,
    pub dominant: MatchingFamily,
    pub stable: MatchingFamily,
}

impl Truth {
    pub fn new(inst: Instance) -> Truth {
        let all = oracles::enumerate_matchings_with_limit(&inst, usize::MAX).unwrap();
        let popular = oracles::popular_among(&inst, &all);
        let dominant = oracles::dominant_among(&inst, &all);
        let stable = oracles::all_stable_matchings(&inst);
        Truth {
            inst,
            all,
            popular,
            dominant,
            stable,
        }
    }

    pub fn popular_edges(&self) -> Vec<popmatch::Edge> {
        let mut v: Vec<_> = self.popular.iter().flat_map(Matching::pairs).collect();
        v.sort();
        v.dedup();
        v
    }
}

pub fn truths(insts: Vec<Instance>) -> Vec<Truth> {
    insts.into_par_iter().map(Truth::new).collect()
}
