//! Symmetric retrieval: servers share a random codeword of C⋆D and add it to
//! their answers, so the user learns nothing beyond the requested file.

use std::collections::HashMap;

use robust_pir::adversary::{run_session, user_view_distribution, AdversaryConfig, ByzantineStrategy};
use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::storage::{layout_database, Database};
use robust_pir::{compute_params, Scheme};

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let params = compute_params(13, 2, 3, 2, 1)?;
    let scheme = Scheme::standard(f, params)?;
    let db = Database::random(f, 3, params.nu, params.k, &mut stream_rng(9, 100))?;
    let adv = AdversaryConfig {
        byzantine: vec![2, 7],
        strategy: ByzantineStrategy::FlipTo { scale: 2, shift: 3 },
        silent: vec![13],
        colluding: vec![],
        seed: 8,
    };
    let report = run_session(&db, &scheme, 1, &adv, true)?;
    println!("symmetric round under b=2, r=1: correct={}", report.correct);

    // Two databases agreeing on file 1 give the user identical view
    // distributions only when the mask is present.
    let f5 = PrimeField::new(5)?;
    let tiny = compute_params(2, 1, 1, 0, 0)?;
    let tiny_scheme = Scheme::standard(f5, tiny)?;
    let a = layout_database(f5, &[vec![f5.vec_from(&[2])], vec![f5.vec_from(&[0])]])?;
    let b = layout_database(f5, &[vec![f5.vec_from(&[2])], vec![f5.vec_from(&[4])]])?;
    for symmetric in [false, true] {
        let da = user_view_distribution(&tiny_scheme, &a, 1, symmetric)?;
        let db_ = user_view_distribution(&tiny_scheme, &b, 1, symmetric)?;
        println!(
            "mask={symmetric:<5} distinct views {:>4} vs {:>4}, distributions equal: {}",
            da.len(),
            db_.len(),
            same(&da, &db_)
        );
    }
    Ok(())
}

fn same(a: &HashMap<Vec<u64>, u64>, b: &HashMap<Vec<u64>, u64>) -> bool {
    a == b
}
