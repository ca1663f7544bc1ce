//! For every edge, a popular matching containing it or proof by omission
//! that none exists. Pass an instance file to use your own data.

use std::env;

use popmatch::fixtures;
use popmatch::instance::parse_instance;
use popmatch::popular_edge::{popular_edge, Branch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = match env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => fixtures::fig2(),
    };
    for e in inst.edges() {
        match popular_edge(&inst, e)? {
            Some((m, Branch::Stable)) => {
                println!("{:>8}  stable    {}", inst.edge_label(e), m.display(&inst))
            }
            Some((m, Branch::Dominant)) => {
                println!("{:>8}  dominant  {}", inst.edge_label(e), m.display(&inst))
            }
            None => println!("{:>8}  not popular", inst.edge_label(e)),
        }
    }
    Ok(())
}
