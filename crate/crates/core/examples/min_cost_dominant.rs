//! Cheapest dominant matching under exact rational edge costs.

use num_rational::BigRational;
use popmatch::fixtures;
use popmatch::min_cost::{format_rational, min_cost_dominant, min_cost_stable, parse_costs};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig4();
    // unit cost plus a third on every edge leaving the first choice
    let mut text = String::new();
    for e in inst.edges() {
        let rank = inst.man_rank(e.0, e.1).unwrap();
        text.push_str(&format!(
            "{} {} {}/3\n",
            inst.man_id(e.0),
            inst.woman_id(e.1),
            3 + rank
        ));
    }
    let costs = parse_costs(&text, &inst)?;

    let (s, sc) = min_cost_stable(&inst, &costs)?;
    let (d, dc) = min_cost_dominant(&inst, &costs)?;
    let show = |c: &BigRational| {
        let (frac, dec) = format_rational(c);
        format!("{frac} ({dec})")
    };
    println!("stable   {}  cost {}", s.display(&inst), show(&sc));
    println!("dominant {}  cost {}", d.display(&inst), show(&dc));
    Ok(())
}
