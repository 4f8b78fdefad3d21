//! Exact rates of this scheme against the finite-file-count comparison curves.

use num_rational::BigRational;
use robust_pir::analysis::{crossover, emit_csv, figure1_curves, rate_table, to_decimal};

fn main() {
    let table = figure1_curves(10);
    print!("{}", emit_csv(&table));

    let full = figure1_curves(100);
    for (ours, theirs) in [("thm2_b2_r0", "zhangge_b2_r0"), ("thm2_b0_r2", "zhangge_b0_r2")] {
        let at = |m: u64| -> BigRational {
            full.iter()
                .find(|p| p.scheme == theirs && p.m == Some(m))
                .and_then(|p| p.rate.clone())
                .unwrap()
        };
        let constant = at_scheme(&full, ours);
        let last = crossover(at, &constant, 100);
        println!(
            "{theirs} exceeds {ours} = {} only up to m = {last:?}",
            to_decimal(&constant, 4)
        );
    }

    println!();
    print!("{}", emit_csv(&rate_table(20, 3, 2, &[(1, 1), (2, 0)], 1)));
}

fn at_scheme(table: &[robust_pir::analysis::RatePoint], scheme: &str) -> BigRational {
    table.iter().find(|p| p.scheme == scheme).and_then(|p| p.rate.clone()).unwrap()
}
