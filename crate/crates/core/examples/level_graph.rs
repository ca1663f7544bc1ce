//! The two-level graph: each man split into two copies plus a private dummy
//! woman. Stable matchings here project onto dominant matchings below.

use popmatch::instance::serialize_instance;
use popmatch::level_graph::{build_level_graph, inverse_map, map_T};
use popmatch::{fixtures, gale_shapley};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig1();
    let level = build_level_graph(&inst);
    print!("{}", serialize_instance(&level.graph));

    let mp = gale_shapley::men_optimal(&level.graph);
    let m = map_T(&level, &mp)?;
    println!("\nstable in G': {}", mp.display(&level.graph));
    println!("projected:    {}", m.display(&inst));
    let back = inverse_map(&level, &m)?;
    println!("lifted again: {}", back.display(&level.graph));
    Ok(())
}
