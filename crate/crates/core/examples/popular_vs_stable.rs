//! Does the instance have a popular matching that is not stable? Random
//! instances are scanned with both the per-edge and the pairwise search.

use popmatch::instance::generate_random;
use popmatch::unstable_popular::{exists_unstable_popular, exists_unstable_popular_cubic};

fn main() -> popmatch::Result<()> {
    let mut hits = 0;
    for seed in 0..40 {
        let inst = generate_random(5, 5, 0.5, seed)?;
        let fast = exists_unstable_popular(&inst);
        assert_eq!(
            fast.is_some(),
            exists_unstable_popular_cubic(&inst).is_some()
        );
        if let Some((m, e)) = fast {
            hits += 1;
            println!(
                "seed {seed:>2}: {} blocked by {}",
                m.display(&inst),
                inst.edge_label(e)
            );
        }
    }
    println!("{hits} of 40 instances have an unstable popular matching");
    Ok(())
}
