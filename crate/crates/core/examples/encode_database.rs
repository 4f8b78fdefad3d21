//! Lay out a small database, encode it across the servers and rebuild it
//! from any k shares.

use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::storage::{distribute, reconstruct, shares_to_text, Database};
use robust_pir::GrsCode;

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let code = GrsCode::standard(f, 13, 2)?;
    let db = Database::random(f, 3, 2, 2, &mut stream_rng(7, 100))?;

    println!("database (m=3 files of 2x2, stacked):\n{db}");
    let shares = distribute(&db, &code)?;
    print!("server shares:\n{}", shares_to_text(f, &shares));

    let some: Vec<_> = [4usize, 11].iter().map(|&j| shares[j].clone()).collect();
    let rebuilt = reconstruct(&code, &some)?;
    println!("\nrebuilt from servers 5 and 12: {}", if &rebuilt == db.matrix() { "identical" } else { "MISMATCH" });
    Ok(())
}
