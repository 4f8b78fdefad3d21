//! The retrieval protocol over GRS-coded storage.
//!
//! Storage code `C = GRS_k(α, v)`, query code `D = GRS_t(α, w)` and the
//! deterministic rows `E_μ = (w_j α_j^{μk+t-1})_j` for `μ = 1..ν`. Honest
//! responses form a codeword of `C⋆D + C⋆E = GRS_{(ν+1)k+t-1}(α, v⋆w)`; the
//! requested file occupies the top `νk` coefficients of that codeword's
//! message polynomial.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decoder::{decode_errors_erasures, ReceivedWord};
use crate::error::{Error, Result};
use crate::field::{dot, hadamard, Fp, PrimeField};
use crate::grs::{star_product_generic, star_product_grs, GenMatrix, GrsCode};
use crate::linalg::{self, Matrix};

/// RNG stream for the query randomness `U`.
pub const STREAM_QUERIES: u64 = 0;
/// RNG stream for the servers' shared symmetric mask.
pub const STREAM_SHARED: u64 = 1;
/// Byzantine server `j` (1-indexed) draws from stream `STREAM_BYZANTINE_BASE + j`.
pub const STREAM_BYZANTINE_BASE: u64 = 2;

/// Seeded generator for one of the protocol's independent random streams.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// System parameters together with the derived scheme quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub b: usize,
    pub r: usize,
    /// Rows retrieved per round (maximal).
    pub nu: usize,
    /// Servers actually queried.
    pub n_prime: usize,
    /// Minimum distance of the response code.
    pub d_star: usize,
    /// Dimension `(ν+1)k + t - 1` of the response code.
    pub star_dim: usize,
}

impl SchemeParams {
    /// Download rate `νk / n'`.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new((self.nu * self.k) as u64, self.n_prime as u64)
    }

    /// `dim C⋆D = k + t - 1`.
    pub fn cd_dim(&self) -> usize {
        self.k + self.t - 1
    }

    /// Database rows per file when retrieving with these parameters.
    pub fn rows_per_file(&self) -> usize {
        self.nu
    }
}

/// Derives the maximal `ν` with `n >= (ν+1)k + t + 2b + r - 1`.
pub fn compute_params(n: usize, k: usize, t: usize, b: usize, r: usize) -> Result<SchemeParams> {
    if n == 0 || k == 0 || t == 0 {
        return Err(Error::Infeasible("n, k and t must be at least 1".into()));
    }
    let overhead = k + t + 2 * b + r - 1;
    let needed = overhead + k;
    if n < needed {
        return Err(Error::Infeasible(format!(
            "n = {n} but at least {needed} servers are needed for k={k}, t={t}, b={b}, r={r}"
        )));
    }
    let nu = (n - overhead) / k;
    let n_prime = overhead + nu * k;
    let star_dim = (nu + 1) * k + t - 1;
    let d_star = n_prime - star_dim + 1;
    debug_assert!(d_star > 2 * b + r);
    Ok(SchemeParams {
        n,
        k,
        t,
        b,
        r,
        nu,
        n_prime,
        d_star,
        star_dim,
    })
}

/// The `ν × n'` matrix of deterministic query rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMatrix {
    pub rows: Matrix,
    /// Monomial degree of each row.
    pub degrees: Vec<usize>,
}

impl EMatrix {
    pub fn as_gen_matrix(&self) -> GenMatrix {
        GenMatrix {
            rows: self.rows.clone(),
            row_degrees: Some(self.degrees.clone()),
        }
    }
}

/// Row `μ` (1-based) is `(w_j α_j^{μk+t-1})_j`.
pub fn build_e(params: &SchemeParams, alpha: &[Fp], w: &[Fp]) -> Result<EMatrix> {
    if alpha.len() != params.n_prime {
        return Err(Error::LengthMismatch {
            expected: params.n_prime,
            got: alpha.len(),
        });
    }
    if w.len() != alpha.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            got: w.len(),
        });
    }
    let degrees: Vec<usize> = (1..=params.nu).map(|mu| mu * params.k + params.t - 1).collect();
    let rows = degrees
        .iter()
        .map(|&deg| {
            alpha
                .iter()
                .zip(w)
                .map(|(&a, &wj)| wj * a.pow(deg as u64))
                .collect()
        })
        .collect();
    Ok(EMatrix { rows, degrees })
}

/// Builds the response code `C⋆D + C⋆E` and checks that the spans computed
/// from the actual generators satisfy trivial intersection, full rank of
/// `C⋆E`, equality with `GRS_{(ν+1)k+t-1}(α, v⋆w)` and `d⋆ - 1 >= 2b + r`.
pub fn star_code(
    params: &SchemeParams,
    c: &GrsCode,
    d: &GrsCode,
    e: &EMatrix,
) -> Result<GrsCode> {
    let cd = star_product_grs(c, d)?;
    let star = cd.with_dimension(params.star_dim)?;

    let gc = c.generator_matrix();
    let cd_span = star_product_generic(&gc, &d.generator_matrix());
    let ce_span = star_product_generic(&gc, &e.as_gen_matrix());
    let sum = star_product_generic(&gc, &d.generator_matrix().stack(&e.as_gen_matrix()));

    let nu_k = params.nu * params.k;
    if ce_span.rank() != nu_k {
        return Err(Error::ConditionViolated(format!(
            "C*E has rank {} instead of {nu_k}",
            ce_span.rank()
        )));
    }
    if sum.rank() != cd_span.rank() + nu_k {
        return Err(Error::ConditionViolated(
            "C*D and C*E intersect nontrivially".into(),
        ));
    }
    if !sum.same_row_space(&star.generator_matrix()) {
        return Err(Error::ConditionViolated(
            "C*D + C*E is not the expected GRS code".into(),
        ));
    }
    let (d_star, _) = star.distances();
    if d_star < 2 * params.b + params.r + 1 {
        return Err(Error::ConditionViolated(format!(
            "d* = {d_star} cannot absorb 2b + r = {}",
            2 * params.b + params.r
        )));
    }
    Ok(star)
}

/// Everything a user and the servers share about one deployment.
#[derive(Clone, Debug)]
pub struct Scheme {
    params: SchemeParams,
    field: PrimeField,
    /// Storage code over all `n` servers.
    storage: GrsCode,
    /// 0-indexed servers that receive queries, in query order.
    servers: Vec<usize>,
    /// Storage code restricted to the queried servers.
    code: GrsCode,
    query_code: GrsCode,
    e: EMatrix,
    star: GrsCode,
    star_cd: GrsCode,
}

impl Scheme {
    /// Default deployment: `α = (1..n)`, `v = w = 1`, the first `n'` servers queried.
    pub fn standard(field: PrimeField, params: SchemeParams) -> Result<Scheme> {
        let n = params.n;
        Scheme::new(
            field,
            params,
            field.counting(n),
            field.ones(n),
            field.ones(n),
            None,
        )
    }

    /// `alpha`, `v`, `w` are indexed by all `n` servers; `servers` (0-indexed)
    /// chooses the `n'` queried ones.
    pub fn new(
        field: PrimeField,
        params: SchemeParams,
        alpha: Vec<Fp>,
        v: Vec<Fp>,
        w: Vec<Fp>,
        servers: Option<Vec<usize>>,
    ) -> Result<Scheme> {
        if w.len() != params.n {
            return Err(Error::LengthMismatch {
                expected: params.n,
                got: w.len(),
            });
        }
        if alpha.len() != params.n {
            return Err(Error::LengthMismatch {
                expected: params.n,
                got: alpha.len(),
            });
        }
        let storage = GrsCode::new(field, alpha, v, params.k)?;
        let servers = servers.unwrap_or_else(|| (0..params.n_prime).collect());
        if servers.len() != params.n_prime {
            return Err(Error::LengthMismatch {
                expected: params.n_prime,
                got: servers.len(),
            });
        }
        for (i, &s) in servers.iter().enumerate() {
            if s >= params.n || servers[..i].contains(&s) {
                return Err(Error::InvalidCode(format!("bad server subset {servers:?}")));
            }
        }
        let code = storage.puncture(&servers)?;
        let w_used: Vec<Fp> = servers.iter().map(|&s| w[s]).collect();
        let query_code = GrsCode::new(field, code.alpha().to_vec(), w_used.clone(), params.t)?;
        let e = build_e(&params, code.alpha(), &w_used)?;
        let star = star_code(&params, &code, &query_code, &e)?;
        let star_cd = star_product_grs(&code, &query_code)?;
        Ok(Scheme {
            params,
            field,
            storage,
            servers,
            code,
            query_code,
            e,
            star,
            star_cd,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn storage_code(&self) -> &GrsCode {
        &self.storage
    }

    /// The storage code restricted to the queried servers.
    pub fn code(&self) -> &GrsCode {
        &self.code
    }

    pub fn query_code(&self) -> &GrsCode {
        &self.query_code
    }

    pub fn e_matrix(&self) -> &EMatrix {
        &self.e
    }

    /// `C⋆D + C⋆E`.
    pub fn star(&self) -> &GrsCode {
        &self.star
    }

    /// `C⋆D`, home of the symmetric mask.
    pub fn star_cd(&self) -> &GrsCode {
        &self.star_cd
    }

    /// 0-indexed queried servers.
    pub fn servers(&self) -> &[usize] {
        &self.servers
    }
}

/// Per-server queries for one retrieval round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySet {
    /// `queries[j]` goes to the `j`-th queried server; each has length `m·ν`.
    pub queries: Vec<Vec<Fp>>,
    /// Requested file, 1-indexed.
    pub target: usize,
    pub seed: u64,
}

/// Draws `U` uniformly from `F^{(m·ν)×t}` and forms `q_j = U·G_{D,j} + Δ_j`.
pub fn make_queries(scheme: &Scheme, m: usize, i: usize, seed: u64) -> Result<QuerySet> {
    let t = scheme.params.t;
    let rows = m * scheme.params.nu;
    let mut rng = stream_rng(seed, STREAM_QUERIES);
    let u: Matrix = (0..rows)
        .map(|_| scheme.field.random_vec(t, &mut rng))
        .collect();
    let mut qs = make_queries_with_u(scheme, m, i, &u)?;
    qs.seed = seed;
    Ok(qs)
}

/// Query construction with an explicit randomness matrix `U` (`(m·ν) × t`).
pub fn make_queries_with_u(scheme: &Scheme, m: usize, i: usize, u: &[Vec<Fp>]) -> Result<QuerySet> {
    if i == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, m });
    }
    let nu = scheme.params.nu;
    if u.len() != m * nu || u.iter().any(|row| row.len() != scheme.params.t) {
        return Err(Error::ShapeMismatch(format!(
            "U must be {}x{}",
            m * nu,
            scheme.params.t
        )));
    }
    let gd = scheme.query_code.generator_matrix();
    let mut queries = linalg::transpose(&linalg::mat_mul(scheme.field, u, &gd.rows));
    for (j, q) in queries.iter_mut().enumerate() {
        for mu in 0..nu {
            q[(i - 1) * nu + mu] += scheme.e.rows[mu][j];
        }
    }
    Ok(QuerySet {
        queries,
        target: i,
        seed: 0,
    })
}

/// `q_j · y_j`.
pub fn honest_response(q: &[Fp], y: &[Fp]) -> Result<Fp> {
    dot(q, y)
}

/// `q_j · y_j + s_j`.
pub fn symmetric_response(q: &[Fp], y: &[Fp], s: Fp) -> Result<Fp> {
    Ok(dot(q, y)? + s)
}

/// A uniform codeword of `C⋆D` from the shared-randomness stream of `seed`.
pub fn sample_shared_randomness(star_cd: &GrsCode, seed: u64) -> Vec<Fp> {
    let mut rng = stream_rng(seed, STREAM_SHARED);
    let msg = star_cd.field().random_vec(star_cd.k(), &mut rng);
    shared_randomness_from_message(star_cd, &msg).expect("message has length k")
}

/// The mask for an explicit message of length `dim C⋆D`.
pub fn shared_randomness_from_message(star_cd: &GrsCode, message: &[Fp]) -> Result<Vec<Fp>> {
    star_cd.encode(message)
}

/// Decodes the responses in the response code and reads file rows off the
/// top coefficients: entry `(μ, l)` is the coefficient of degree `μk + t - 1 + (l - 1)`.
pub fn recover(params: &SchemeParams, star: &GrsCode, responses: &ReceivedWord) -> Result<Matrix> {
    let decoded = decode_errors_erasures(star, responses).map_err(|e| match e {
        Error::DecodingFailure => Error::RetrievalFailed,
        other => other,
    })?;
    let f = &decoded.message;
    Ok((1..=params.nu)
        .map(|mu| {
            let base = mu * params.k + params.t - 1;
            (0..params.k).map(|l| f.coeff(base + l)).collect()
        })
        .collect())
}

/// The noiseless response vector `ρ` for a full honest round.
pub fn honest_responses(
    scheme: &Scheme,
    shares: &[crate::storage::ServerShare],
    queries: &QuerySet,
) -> Result<Vec<Fp>> {
    scheme
        .servers
        .iter()
        .zip(&queries.queries)
        .map(|(&s, q)| honest_response(q, &shares[s].y))
        .collect()
}

/// Coordinatewise sum, used to add a symmetric mask to a response vector.
pub fn add_vectors(a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// `v ⋆ w` restricted to the queried servers.
pub fn response_multipliers(scheme: &Scheme) -> Vec<Fp> {
    hadamard(scheme.code.multipliers(), scheme.query_code.multipliers())
}
