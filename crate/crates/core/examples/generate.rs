//! Reproducible random instances in the text format the CLI reads.
//!
//! ```text
//! cargo run --example generate -- 6 5 0.4 17
//! ```

use std::env;

use popmatch::instance::{generate_random, serialize_instance};

fn main() -> popmatch::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let men = arg(0, "4").parse().expect("men");
    let women = arg(1, "4").parse().expect("women");
    let density = arg(2, "0.6").parse().expect("density");
    let seed = arg(3, "1").parse().expect("seed");
    let inst = generate_random(men, women, density, seed)?;
    print!("{}", serialize_instance(&inst));
    eprintln!("{} edges", inst.num_edges());
    Ok(())
}
