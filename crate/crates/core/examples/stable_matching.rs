//! Men- and women-optimal stable matchings, plus a stable matching forced to
//! contain a chosen edge.
//!
//! ```text
//! cargo run --example stable_matching
//! ```

use popmatch::fixtures;
use popmatch::gale_shapley::{men_optimal, stable_with_edge, women_optimal};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig4();
    println!("men-optimal:   {}", men_optimal(&inst).display(&inst));
    println!("women-optimal: {}", women_optimal(&inst).display(&inst));

    for e in inst.edges() {
        match stable_with_edge(&inst, e)? {
            Some(m) => println!(
                "{:>10} stable with {}",
                inst.edge_label(e),
                m.display(&inst)
            ),
            None => println!("{:>10} in no stable matching", inst.edge_label(e)),
        }
    }
    Ok(())
}
