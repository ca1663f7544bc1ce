//! Head-to-head elections between matchings and the edge labels they induce.

use popmatch::elections::{compare, label_edges};
use popmatch::{fixtures, Matching};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig3();
    let m1 = Matching::from_ids(&inst, &[("a1", "b1"), ("a2", "b2")])?;
    let m2 = Matching::from_ids(&inst, &[("a1", "b2"), ("a2", "b1")])?;
    let m3 = Matching::from_ids(&inst, &[("a1", "b3"), ("a2", "b2"), ("a3", "b1")])?;

    for (x, y) in [(&m3, &m1), (&m1, &m2), (&m2, &m3)] {
        let r = compare(&inst, x, y);
        println!(
            "{} vs {}: {} to {}",
            x.display(&inst),
            y.display(&inst),
            r.for_first,
            r.for_second
        );
    }

    // labels relative to m1; a (+,+) edge is a blocking pair
    let g = label_edges(&inst, &m1);
    for &(e, l) in g.labels() {
        println!("  {} {l}", inst.edge_label(e));
    }
    Ok(())
}
