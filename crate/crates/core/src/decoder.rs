//! Error-and-erasure decoding for GRS codes.
//!
//! Erased coordinates are dropped, the column multipliers are divided out and
//! the remaining Reed–Solomon word is decoded with Berlekamp–Welch. With `s`
//! erasures the decoder corrects up to `⌊(d - 1 - s) / 2⌋` errors.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, Poly};
use crate::grs::GrsCode;
use crate::linalg;

/// A received vector in which some coordinates may be erased (`None`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReceivedWord {
    pub symbols: Vec<Option<Fp>>,
}

impl ReceivedWord {
    pub fn new(symbols: Vec<Option<Fp>>) -> Self {
        ReceivedWord { symbols }
    }

    pub fn from_codeword(word: &[Fp]) -> Self {
        ReceivedWord {
            symbols: word.iter().copied().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Positions carrying a value.
    pub fn surviving(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.symbols[i].is_some()).collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_none()).count()
    }

    pub fn erase(&mut self, i: usize) {
        self.symbols[i] = None;
    }

    /// Number of non-erased coordinates that differ from `word`.
    pub fn disagreements(&self, word: &[Fp]) -> usize {
        self.symbols
            .iter()
            .zip(word)
            .filter(|(s, w)| s.is_some_and(|s| s != **w))
            .count()
    }
}

impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| s.map_or_else(|| "ERASED".to_string(), |x| x.to_string()))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Output of a successful decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Vec<Fp>,
    /// Message polynomial, degree below `k`.
    pub message: Poly,
}

/// Decodes `rw` in `code`, correcting `e` errors and `s` erasures whenever
/// `2e + s <= d - 1`. Never returns a non-codeword.
pub fn decode_errors_erasures(code: &GrsCode, rw: &ReceivedWord) -> Result<Decoded> {
    if rw.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: rw.len(),
        });
    }
    let field = code.field();
    let k = code.k();
    let alive = rw.surviving();
    let count = alive.len();
    if count < k {
        return Err(Error::DecodingFailure);
    }
    let budget = (count - k) / 2;

    let xs: Vec<Fp> = alive.iter().map(|&i| code.alpha()[i]).collect();
    let mut ys = Vec::with_capacity(count);
    for &i in &alive {
        let y = rw.symbols[i].expect("surviving position");
        ys.push(y * code.multipliers()[i].inv()?);
    }

    // Unknowns: E_0..E_{budget-1} (E monic of degree `budget`), then Q_0..Q_{budget+k-1}.
    // Each point gives  Q(x) - y E(x) = y x^budget.
    let ncols = budget + budget + k;
    let mut a = Vec::with_capacity(count);
    let mut rhs = Vec::with_capacity(count);
    for (&x, &y) in xs.iter().zip(&ys) {
        let powers: Vec<Fp> = (0..budget + k).map(|j| x.pow(j as u64)).collect();
        let mut row = Vec::with_capacity(ncols);
        row.extend(powers[..budget].iter().map(|&pw| -(y * pw)));
        row.extend(powers.iter().copied());
        a.push(row);
        rhs.push(y * x.pow(budget as u64));
    }
    let sol = linalg::solve_any(field, &a, &rhs, ncols).ok_or(Error::DecodingFailure)?;

    let mut e_coeffs = sol[..budget].to_vec();
    e_coeffs.push(field.one());
    let locator = Poly::new(field, e_coeffs);
    let q = Poly::new(field, sol[budget..].to_vec());
    let (message, rem) = q.div_rem(&locator).ok_or(Error::DecodingFailure)?;
    if !rem.is_zero() || message.degree().is_some_and(|d| d >= k) {
        return Err(Error::DecodingFailure);
    }

    let codeword = code.encode_poly(&message);
    if rw.disagreements(&codeword) > budget {
        return Err(Error::DecodingFailure);
    }
    Ok(Decoded { codeword, message })
}

/// Largest message space [`brute_force_decode`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Exhaustive nearest-codeword search over non-erased coordinates.
pub fn brute_force_decode(code: &GrsCode, rw: &ReceivedWord) -> Result<Vec<Fp>> {
    if rw.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: rw.len(),
        });
    }
    let field = code.field();
    let q = field.modulus();
    let k = code.k() as u32;
    let total = q
        .checked_pow(k)
        .filter(|&t| t <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| Error::GuardExceeded(format!("{q}^{k} codewords")))?;

    let mut best: Option<(usize, Vec<Fp>)> = None;
    let mut tied = false;
    let mut msg = field.zeros(k as usize);
    for idx in 0..total {
        let mut x = idx;
        for m in msg.iter_mut() {
            *m = field.elem(x % q);
            x /= q;
        }
        let cw = code.encode(&msg)?;
        let dist = rw.disagreements(&cw);
        match &best {
            Some((d, _)) if dist > *d => {}
            Some((d, _)) if dist == *d => tied = true,
            _ => {
                best = Some((dist, cw));
                tied = false;
            }
        }
    }
    match best {
        Some((_, cw)) if !tied => Ok(cw),
        _ => Err(Error::Ambiguous),
    }
}
