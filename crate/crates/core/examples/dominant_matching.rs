//! A maximum-size popular matching two ways: a stable matching of the level
//! graph mapped back, and the direct two-level proposal run.

use popmatch::level_graph::{dominant_two_level, dominant_via_level_graph};
use popmatch::verify::is_dominant;
use popmatch::{fixtures, gale_shapley};

fn main() {
    for (name, inst) in [
        ("fig1", fixtures::fig1()),
        ("fig3", fixtures::fig3()),
        ("fig4", fixtures::fig4()),
    ] {
        let stable = gale_shapley::men_optimal(&inst);
        let a = dominant_via_level_graph(&inst);
        let b = dominant_two_level(&inst);
        assert!(is_dominant(&inst, &a).holds && is_dominant(&inst, &b).holds);
        println!(
            "{name}: stable size {}, dominant size {}",
            stable.len(),
            a.len()
        );
        println!("  level graph: {}", a.display(&inst));
        println!("  two-level:   {}", b.display(&inst));
    }
}
