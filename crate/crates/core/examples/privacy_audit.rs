//! Audit t-privacy of the query construction three ways, then show the audit
//! catching a broken point set.

use robust_pir::adversary::{audit_scheme, privacy_audit, AuditMode};
use robust_pir::field::PrimeField;
use robust_pir::grs::GenMatrix;
use robust_pir::pir::build_e;
use robust_pir::{compute_params, Scheme};

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let scheme = Scheme::standard(f, compute_params(13, 2, 3, 2, 1)?)?;
    let rep = audit_scheme(&scheme, 3, AuditMode::Algebraic, 0)?;
    println!("algebraic: {} column subsets of G_D invertible", rep.submatrices_checked);
    let rep = audit_scheme(&scheme, 3, AuditMode::Sampled(20_000), 1)?;
    let (stat, crit) = rep.sampled_chi_square.unwrap();
    println!("sampled:   worst chi-square {stat:.2} (critical {crit:.2})");

    let f5 = PrimeField::new(5)?;
    let tiny = Scheme::standard(f5, compute_params(4, 1, 1, 0, 0)?)?;
    let rep = audit_scheme(&tiny, 2, AuditMode::Exhaustive, 0)?;
    println!(
        "exhaustive (q=5, n'=4): identical={:?} uniform={:?}",
        rep.exhaustive_identical, rep.exhaustive_uniform
    );

    let p = compute_params(4, 1, 2, 0, 0)?;
    let alpha = f5.vec_from(&[1, 2, 2, 3]);
    let gd = GenMatrix::new(vec![f5.ones(4), alpha.clone()]);
    let e = build_e(&p, &alpha, &f5.ones(4))?;
    match privacy_audit(f5, &gd, &e, 2, 2, AuditMode::Algebraic, 0) {
        Err(err) => println!("repeated point: {err}"),
        Ok(_) => println!("repeated point: unexpectedly passed"),
    }
    Ok(())
}
