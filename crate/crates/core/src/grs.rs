//! Generalized Reed–Solomon codes and star (Schur) products.
//!
//! `GRS_k(α, v)` is the set of vectors `(v_i f(α_i))_i` for polynomials `f`
//! of degree below `k`. Messages are coefficient vectors of `f`, so the
//! canonical generator has row `j` equal to `(v_i α_i^j)_i`.

use crate::error::{Error, Result};
use crate::field::{hadamard, Fp, Poly, PrimeField};
use crate::linalg::{self, Matrix};

/// A generalized Reed–Solomon code `GRS_k(α, v)` over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsCode {
    field: PrimeField,
    alpha: Vec<Fp>,
    v: Vec<Fp>,
    k: usize,
}

/// A generator matrix. `row_degrees[j]` names the monomial whose evaluation
/// row `j` holds, when the rows come from a canonical GRS construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    pub rows: Matrix,
    pub row_degrees: Option<Vec<usize>>,
}

impl GenMatrix {
    pub fn new(rows: Matrix) -> Self {
        GenMatrix {
            rows,
            row_degrees: None,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows)
    }

    /// Row-space equality via reduced echelon forms.
    pub fn same_row_space(&self, other: &GenMatrix) -> bool {
        linalg::row_space_eq(&self.rows, &other.rows)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &GenMatrix) -> GenMatrix {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let row_degrees = match (&self.row_degrees, &other.row_degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        GenMatrix { rows, row_degrees }
    }

    /// `j`-th column.
    pub fn column(&self, j: usize) -> Vec<Fp> {
        self.rows.iter().map(|row| row[j]).collect()
    }
}

/// Validates parameters and builds `GRS_k(alpha, v)`.
pub fn make_grs(field: PrimeField, alpha: Vec<Fp>, v: Vec<Fp>, k: usize) -> Result<GrsCode> {
    let n = alpha.len();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidCode(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if n as u64 >= field.modulus() {
        return Err(Error::InvalidCode(format!(
            "length {n} requires a field larger than {}",
            field.modulus()
        )));
    }
    for x in alpha.iter().chain(&v) {
        if x.modulus() != field.modulus() {
            return Err(Error::FieldMismatch(field.modulus(), x.modulus()));
        }
    }
    for (i, a) in alpha.iter().enumerate() {
        if alpha[..i].contains(a) {
            return Err(Error::DuplicatePoints);
        }
    }
    if let Some(pos) = v.iter().position(|x| x.is_zero()) {
        return Err(Error::ZeroMultiplier(pos));
    }
    Ok(GrsCode { field, alpha, v, k })
}

impl GrsCode {
    pub fn new(field: PrimeField, alpha: Vec<Fp>, v: Vec<Fp>, k: usize) -> Result<Self> {
        make_grs(field, alpha, v, k)
    }

    /// `GRS_k((1, ..., n), 1)`.
    pub fn standard(field: PrimeField, n: usize, k: usize) -> Result<Self> {
        make_grs(field, field.counting(n), field.ones(n), k)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> &[Fp] {
        &self.alpha
    }

    pub fn multipliers(&self) -> &[Fp] {
        &self.v
    }

    /// Same evaluation points and multipliers, different dimension.
    pub fn with_dimension(&self, k: usize) -> Result<GrsCode> {
        make_grs(self.field, self.alpha.clone(), self.v.clone(), k)
    }

    /// Restriction to the given coordinates (0-indexed, in the given order).
    pub fn puncture(&self, keep: &[usize]) -> Result<GrsCode> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.n()) {
            return Err(Error::InvalidCode(format!("coordinate {bad} out of range")));
        }
        let alpha = keep.iter().map(|&i| self.alpha[i]).collect();
        let v = keep.iter().map(|&i| self.v[i]).collect();
        make_grs(self.field, alpha, v, self.k.min(keep.len()))
    }

    /// Canonical generator: row `j` is `(v_i α_i^j)_i` for `j < k`.
    pub fn generator_matrix(&self) -> GenMatrix {
        let rows = (0..self.k)
            .map(|j| {
                self.alpha
                    .iter()
                    .zip(&self.v)
                    .map(|(&a, &v)| v * a.pow(j as u64))
                    .collect()
            })
            .collect();
        GenMatrix {
            rows,
            row_degrees: Some((0..self.k).collect()),
        }
    }

    /// Encodes a coefficient vector of length `k`.
    pub fn encode(&self, message: &[Fp]) -> Result<Vec<Fp>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        Ok(self.encode_poly(&Poly::new(self.field, message.to_vec())))
    }

    /// `(v_i f(α_i))_i`; the caller is responsible for `deg f < k`.
    pub fn encode_poly(&self, f: &Poly) -> Vec<Fp> {
        self.alpha
            .iter()
            .zip(&self.v)
            .map(|(&a, &v)| v * f.eval(a))
            .collect()
    }

    /// Minimum distance `n - k + 1` and dual distance `k + 1`.
    pub fn distances(&self) -> (usize, usize) {
        code_distances(self)
    }

    /// The dual code `GRS_{n-k}(α, v')` with `v'_i = 1 / (v_i ∏_{j≠i} (α_i - α_j))`.
    pub fn dual(&self) -> Result<GrsCode> {
        let n = self.n();
        if self.k == n {
            return Err(Error::InvalidCode("dual of the full space is trivial".into()));
        }
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let mut prod = self.v[i];
            for j in 0..n {
                if j != i {
                    prod *= self.alpha[i] - self.alpha[j];
                }
            }
            w.push(prod.inv()?);
        }
        make_grs(self.field, self.alpha.clone(), w, n - self.k)
    }

    /// True when `word` is a codeword.
    pub fn contains(&self, word: &[Fp]) -> bool {
        word.len() == self.n() && linalg::in_row_space(&self.generator_matrix().rows, word)
    }
}

/// `(d, d_dual) = (n - k + 1, k + 1)` for an MDS code.
pub fn code_distances(code: &GrsCode) -> (usize, usize) {
    (code.n() - code.k() + 1, code.k() + 1)
}

/// `GRS_k(α, v) ⋆ GRS_l(α, w) = GRS_{min(k+l-1, n)}(α, v ⋆ w)`.
pub fn star_product_grs(c: &GrsCode, d: &GrsCode) -> Result<GrsCode> {
    if c.field != d.field {
        return Err(Error::FieldMismatch(c.field.modulus(), d.field.modulus()));
    }
    if c.alpha != d.alpha {
        return Err(Error::AlphaMismatch);
    }
    let k = (c.k + d.k - 1).min(c.n());
    make_grs(c.field, c.alpha.clone(), hadamard(&c.v, &d.v), k)
}

/// Row basis of `span{a ⋆ b}` over all rows `a` of `a_mat` and `b` of `b_mat`.
pub fn star_product_generic(a_mat: &GenMatrix, b_mat: &GenMatrix) -> GenMatrix {
    let products: Matrix = a_mat
        .rows
        .iter()
        .flat_map(|a| b_mat.rows.iter().map(move |b| hadamard(a, b)))
        .collect();
    GenMatrix::new(linalg::rref(&products).0)
}
