//! One retrieval round with every server honest.

use robust_pir::adversary::{run_session, AdversaryConfig};
use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::storage::Database;
use robust_pir::{compute_params, Scheme};

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let params = compute_params(13, 2, 3, 2, 1)?;
    let scheme = Scheme::standard(f, params)?;
    let db = Database::random(f, 4, params.nu, params.k, &mut stream_rng(1, 100))?;

    for i in 1..=db.m() {
        let report = run_session(&db, &scheme, i, &AdversaryConfig::honest(42), false)?;
        println!("file {i}: expected {:?}", rows(&report.expected));
        println!("        recovered {:?} correct={}", report.recovered.as_ref().map(|m| rows(m)), report.correct);
    }
    Ok(())
}

fn rows(m: &[Vec<robust_pir::Fp>]) -> Vec<Vec<u64>> {
    m.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect()
}
