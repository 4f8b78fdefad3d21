//! Berlekamp–Welch decoding with errors and erasures, checked against the
//! brute-force nearest-codeword search.

use robust_pir::decoder::{brute_force_decode, decode_errors_erasures, ReceivedWord};
use robust_pir::field::PrimeField;
use robust_pir::pir::stream_rng;
use robust_pir::GrsCode;

fn main() -> robust_pir::Result<()> {
    let f = PrimeField::new(17)?;
    let code = GrsCode::standard(f, 13, 8)?;
    let msg = f.random_vec(8, &mut stream_rng(1, 100));
    let c = code.encode(&msg)?;

    let mut symbols: Vec<_> = c.iter().copied().map(Some).collect();
    symbols[3] = Some(c[3] + f.elem(5));
    symbols[8] = Some(c[8] + f.elem(1));
    symbols[11] = None;
    let rw = ReceivedWord::new(symbols);
    println!("received: {rw}");

    let d = decode_errors_erasures(&code, &rw)?;
    println!("decoded correctly: {}", d.codeword == c);
    println!("message polynomial: {:?}", d.message.coeffs().iter().map(|x| x.value()).collect::<Vec<_>>());

    let small = GrsCode::standard(f, 7, 2)?;
    let c = small.encode(&f.vec_from(&[3, 9]))?;
    let mut rw = ReceivedWord::from_codeword(&c);
    rw.erase(0);
    let mut s = rw.symbols.clone();
    s[2] = Some(c[2] + f.one());
    s[5] = Some(c[5] + f.one());
    let rw = ReceivedWord::new(s);
    println!(
        "[7,2] with 1 erasure, 2 errors: bw={:?} brute={:?}",
        decode_errors_erasures(&small, &rw).map(|d| d.codeword == c),
        brute_force_decode(&small, &rw).map(|w| w == c)
    );
    Ok(())
}
