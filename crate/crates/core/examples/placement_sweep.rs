//! Every placement of b byzantine and r silent servers, for every built-in
//! byzantine strategy.

use std::time::Instant;

use robust_pir::adversary::{sweep_adversary_placements, ByzantineStrategy};
use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::storage::Database;
use robust_pir::{compute_params, Scheme};

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let params = compute_params(13, 2, 3, 2, 1)?;
    let scheme = Scheme::standard(f, params)?;
    let db = Database::random(f, 3, params.nu, params.k, &mut stream_rng(3, 100))?;

    for strategy in ByzantineStrategy::catalogue() {
        let start = Instant::now();
        let s = sweep_adversary_placements(&db, &scheme, 3, strategy, 11, false)?;
        println!(
            "{strategy:<10} {}/{} placements recovered ({:.2?})",
            s.correct,
            s.total,
            start.elapsed()
        );
    }
    Ok(())
}
