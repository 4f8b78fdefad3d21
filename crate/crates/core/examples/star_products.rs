//! Star products of GRS codes, computed in closed form and as a span.

use robust_pir::field::PrimeField;
use robust_pir::grs::{star_product_generic, star_product_grs};
use robust_pir::GrsCode;

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(11)?;
    let alpha = f.counting(8);
    let c = GrsCode::new(f, alpha.clone(), f.vec_from(&[1, 2, 3, 4, 5, 6, 7, 8]), 3)?;
    let d = GrsCode::new(f, alpha, f.vec_from(&[3, 1, 4, 1, 5, 9, 2, 6]), 4)?;

    let closed = star_product_grs(&c, &d)?;
    let span = star_product_generic(&c.generator_matrix(), &d.generator_matrix());
    println!("C = [8,3], D = [8,4] over GF(11)");
    println!("C⋆D closed form: [{},{}] with {:?}", closed.n(), closed.k(), closed.multipliers().iter().map(|x| x.value()).collect::<Vec<_>>());
    println!("span of products has rank {}", span.rank());
    println!("same code: {}", span.same_row_space(&closed.generator_matrix()));

    let dual = c.dual()?;
    let sq = star_product_grs(&c, &dual)?;
    println!("C⋆C⊥ has dimension {} (full length {})", sq.k(), sq.n());
    Ok(())
}
