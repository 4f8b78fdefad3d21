//! Derive the scheme parameters for a few system sizes.

use robust_pir::compute_params;

fn main() -> robust_pir::Result<()> {
    println!("{:>3} {:>2} {:>2} {:>2} {:>2} | {:>3} {:>3} {:>9} {:>6}", "n", "k", "t", "b", "r", "nu", "n'", "[n',k*,d*]", "rate");
    for (n, k, t, b, r) in [(13, 2, 3, 2, 1), (12, 2, 3, 2, 0), (12, 2, 3, 0, 2), (14, 2, 3, 2, 1), (20, 4, 2, 1, 1)] {
        let p = compute_params(n, k, t, b, r)?;
        println!(
            "{n:>3} {k:>2} {t:>2} {b:>2} {r:>2} | {:>3} {:>3} {:>9} {:>6}",
            p.nu,
            p.n_prime,
            format!("[{},{},{}]", p.n_prime, p.star_dim, p.d_star),
            p.rate().to_string()
        );
    }

    match compute_params(6, 2, 3, 2, 1) {
        Err(e) => println!("\nn=6, k=2, t=3, b=2, r=1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
