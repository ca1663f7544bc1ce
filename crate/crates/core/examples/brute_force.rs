//! The exhaustive oracles: every matching, sorted into stable, popular and
//! dominant, with the popular edges.

use popmatch::fixtures;
use popmatch::oracles::{
    dominant_set, enumerate_matchings, popular_edges, popular_set, stable_set,
};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig3();
    let all = enumerate_matchings(&inst)?;
    let popular = popular_set(&inst)?;
    let dominant = dominant_set(&inst)?;
    let stable = stable_set(&inst)?;
    println!("{} matchings", all.len());
    for m in &all {
        let tag = match (
            stable.contains(m),
            dominant.contains(m),
            popular.contains(m),
        ) {
            (true, _, _) => "stable",
            (_, true, _) => "dominant",
            (_, _, true) => "popular",
            _ => "",
        };
        println!("  {:<36}{tag}", m.display(&inst).to_string());
    }
    let edges: Vec<_> = popular_edges(&inst)?
        .into_iter()
        .map(|e| inst.edge_label(e))
        .collect();
    println!("popular edges: {}", edges.join(" "));
    Ok(())
}
