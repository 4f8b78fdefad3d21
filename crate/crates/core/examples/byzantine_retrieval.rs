//! Retrieval with two lying servers, one silent server and a coalition of
//! three curious ones. Prints the full session transcript.

use robust_pir::adversary::{run_session, AdversaryConfig, ByzantineStrategy};
use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::storage::Database;
use robust_pir::{compute_params, Scheme};

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let params = compute_params(13, 2, 3, 2, 1)?;
    let scheme = Scheme::standard(f, params)?;
    let db = Database::random(f, 3, params.nu, params.k, &mut stream_rng(5, 100))?;

    let adv = AdversaryConfig::from_toml(
        r#"
        byzantine = [4, 9]
        strategy = "offset:5"
        silent = [11]
        colluding = [1, 2, 3]
        seed = 2024
        "#,
    )?;
    let report = run_session(&db, &scheme, 2, &adv, false)?;
    print!("{report}");
    println!("\nwhat the coalition saw:");
    for (id, q) in report.collusion_view() {
        println!("  server {id}: {:?}", q.iter().map(|x| x.value()).collect::<Vec<_>>());
    }

    let too_many = AdversaryConfig {
        byzantine: vec![1, 5, 9],
        strategy: ByzantineStrategy::UniformRandom,
        ..adv
    };
    let report = run_session(&db, &scheme, 2, &too_many, false)?;
    println!(
        "\nthree byzantine plus one silent (over budget): recovered={} within_budget={}",
        report.correct, report.within_budget
    );
    Ok(())
}
