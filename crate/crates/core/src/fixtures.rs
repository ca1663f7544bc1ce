//! Small hand-made instances used by tests, examples and documentation.
//!
//! `fig2` follows the drawn graph: `a1` ranks `b1` then `b3`, and `b2`, `b3`
//! and `a3` each have a single neighbour.

use crate::instance::{parse_instance, Instance};

pub const FIG1: &str = include_str!("../data/fig1.pref");
pub const FIG2: &str = include_str!("../data/fig2.pref");
pub const FIG3: &str = include_str!("../data/fig3.pref");
pub const FIG4: &str = include_str!("../data/fig4.pref");
pub const EMPTY: &str = include_str!("../data/empty.pref");

pub fn fig1() -> Instance {
    parse_instance(FIG1).expect("fig1 fixture")
}

pub fn fig2() -> Instance {
    parse_instance(FIG2).expect("fig2 fixture")
}

pub fn fig3() -> Instance {
    parse_instance(FIG3).expect("fig3 fixture")
}

pub fn fig4() -> Instance {
    parse_instance(FIG4).expect("fig4 fixture")
}

pub fn empty() -> Instance {
    parse_instance(EMPTY).expect("empty fixture")
}
