//! Checking stability, popularity and dominance, with a replayable witness
//! whenever the answer is no.

use popmatch::gale_shapley::is_stable;
use popmatch::verify::{is_dominant, is_popular, partition};
use popmatch::{fixtures, Matching};

fn main() -> popmatch::Result<()> {
    let inst = fixtures::fig2();
    let cases = [
        Matching::from_ids(&inst, &[("a1", "b1"), ("a2", "b2")])?,
        Matching::from_ids(&inst, &[("a1", "b3"), ("a2", "b2"), ("a3", "b1")])?,
    ];
    for m in &cases {
        println!("{}", m.display(&inst));
        for (what, v) in [
            ("stable", is_stable(&inst, m)),
            ("popular", is_popular(&inst, m)),
            ("dominant", is_dominant(&inst, m)),
        ] {
            match &v.certificate {
                None => println!("  {what}: yes"),
                Some(c) => {
                    c.replay(&inst, m).expect("certificate replays");
                    println!("  {what}: no, {}", c.describe(&inst));
                }
            }
        }
        let p = partition(&inst, m, true);
        let ids = |v: Vec<_>| {
            v.into_iter()
                .map(|x| inst.man_id(x).to_string())
                .collect::<Vec<_>>()
        };
        println!("  A0 {:?} A1 {:?}", ids(p.men_a0()), ids(p.men_a1()));
    }
    Ok(())
}
