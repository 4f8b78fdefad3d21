//! In-process server cluster with byzantine, silent and colluding servers.
//!
//! A session runs one retrieval round end to end: queries go out, every
//! queried server answers from its share, byzantine servers replace their
//! answer according to a [`ByzantineStrategy`], silent servers are erased,
//! and the user decodes. Failures are reported, never raised.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::decoder::ReceivedWord;
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::grs::GenMatrix;
use crate::linalg::{self, Matrix};
use crate::pir::{
    honest_response, make_queries, make_queries_with_u, recover, sample_shared_randomness,
    shared_randomness_from_message, stream_rng, symmetric_response, EMatrix, QuerySet, Scheme,
    STREAM_BYZANTINE_BASE,
};
use crate::storage::{distribute, Database, ServerShare};

/// How a byzantine server forms its (oblivious) answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ByzantineStrategy {
    /// A uniform field element.
    UniformRandom,
    /// Always the same value, which may happen to be the honest one.
    Fixed(u64),
    /// Honest answer plus `delta`.
    AdditiveOffset(u64),
    /// Honest answer `h` mapped to `scale·h + shift`.
    FlipTo { scale: u64, shift: u64 },
}

impl ByzantineStrategy {
    /// A representative of every strategy family.
    pub fn catalogue() -> Vec<ByzantineStrategy> {
        vec![
            ByzantineStrategy::UniformRandom,
            ByzantineStrategy::Fixed(0),
            ByzantineStrategy::AdditiveOffset(1),
            ByzantineStrategy::FlipTo { scale: 2, shift: 3 },
        ]
    }

    pub fn corrupt<R: Rng + ?Sized>(&self, honest: Fp, rng: &mut R) -> Fp {
        let f = honest.field();
        match *self {
            ByzantineStrategy::UniformRandom => f.random(rng),
            ByzantineStrategy::Fixed(v) => f.elem(v),
            ByzantineStrategy::AdditiveOffset(d) => honest + f.elem(d),
            ByzantineStrategy::FlipTo { scale, shift } => honest * f.elem(scale) + f.elem(shift),
        }
    }
}

impl fmt::Display for ByzantineStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ByzantineStrategy::UniformRandom => write!(f, "uniform"),
            ByzantineStrategy::Fixed(v) => write!(f, "fixed:{v}"),
            ByzantineStrategy::AdditiveOffset(d) => write!(f, "offset:{d}"),
            ByzantineStrategy::FlipTo { scale, shift } => write!(f, "flip:{scale},{shift}"),
        }
    }
}

impl FromStr for ByzantineStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown byzantine strategy {s:?}"));
        let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        match name.trim() {
            "uniform" if arg.is_empty() => Ok(ByzantineStrategy::UniformRandom),
            "fixed" => Ok(ByzantineStrategy::Fixed(num(arg)?)),
            "offset" => Ok(ByzantineStrategy::AdditiveOffset(num(arg)?)),
            "flip" => {
                let (a, b) = arg.split_once(',').ok_or_else(bad)?;
                Ok(ByzantineStrategy::FlipTo {
                    scale: num(a)?,
                    shift: num(b)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for ByzantineStrategy {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ByzantineStrategy> for String {
    fn from(s: ByzantineStrategy) -> String {
        s.to_string()
    }
}

/// Adversary roles by 1-indexed server id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryConfig {
    #[serde(default)]
    pub byzantine: Vec<usize>,
    #[serde(default = "default_strategy")]
    pub strategy: ByzantineStrategy,
    #[serde(default)]
    pub silent: Vec<usize>,
    #[serde(default)]
    pub colluding: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_strategy() -> ByzantineStrategy {
    ByzantineStrategy::UniformRandom
}

impl AdversaryConfig {
    /// Everyone honest.
    pub fn honest(seed: u64) -> Self {
        AdversaryConfig {
            byzantine: Vec::new(),
            strategy: ByzantineStrategy::UniformRandom,
            silent: Vec::new(),
            colluding: Vec::new(),
            seed,
        }
    }

    /// Parses the TOML form, e.g.
    ///
    /// ```toml
    /// byzantine = [4, 9]
    /// strategy = "offset:5"
    /// silent = [11]
    /// colluding = [1, 2, 3]
    /// seed = 42
    /// ```
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self, n: usize) -> Result<()> {
        for &id in self.byzantine.iter().chain(&self.silent).chain(&self.colluding) {
            if id == 0 || id > n {
                return Err(Error::Parse(format!("server id {id} outside 1..={n}")));
            }
        }
        if let Some(id) = self.byzantine.iter().find(|id| self.silent.contains(id)) {
            return Err(Error::Parse(format!(
                "server {id} cannot be both byzantine and silent"
            )));
        }
        Ok(())
    }
}

/// Outcome and full transcript of one session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionReport {
    pub seed: u64,
    pub field: PrimeField,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub b: usize,
    pub r: usize,
    pub m: usize,
    pub target: usize,
    pub symmetric: bool,
    pub strategy: ByzantineStrategy,
    /// 1-indexed ids of the queried servers, in query order.
    pub servers: Vec<usize>,
    pub queries: Vec<Vec<Fp>>,
    /// `None` marks an erasure.
    pub responses: Vec<Option<Fp>>,
    pub byzantine: Vec<usize>,
    pub silent: Vec<usize>,
    pub colluding: Vec<usize>,
    /// Byzantine servers whose answer actually differed from the honest one.
    pub error_positions_used: Vec<usize>,
    /// Queried servers that stayed silent.
    pub erasure_positions_used: Vec<usize>,
    /// `None` when decoding failed.
    pub recovered: Option<Matrix>,
    pub expected: Matrix,
    pub correct: bool,
    pub within_budget: bool,
}

impl SessionReport {
    /// Queries seen by the colluding servers, keyed by server id.
    pub fn collusion_view(&self) -> Vec<(usize, Vec<Fp>)> {
        self.servers
            .iter()
            .zip(&self.queries)
            .filter(|(id, _)| self.colluding.contains(id))
            .map(|(&id, q)| (id, q.clone()))
            .collect()
    }
}

fn sorted_unique(ids: &[usize]) -> Vec<usize> {
    ids.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Runs one retrieval round of file `i` against `db` under `adv`.
pub fn run_session(
    db: &Database,
    scheme: &Scheme,
    i: usize,
    adv: &AdversaryConfig,
    symmetric: bool,
) -> Result<SessionReport> {
    let params = *scheme.params();
    adv.validate(params.n)?;
    let shares = distribute(db, scheme.storage_code())?;
    let expected = db.file(i)?;
    let queries = make_queries(scheme, db.m(), i, adv.seed)?;
    run_with_queries(db, scheme, &shares, &queries, expected, adv, symmetric)
}

fn run_with_queries(
    db: &Database,
    scheme: &Scheme,
    shares: &[ServerShare],
    queries: &QuerySet,
    expected: Matrix,
    adv: &AdversaryConfig,
    symmetric: bool,
) -> Result<SessionReport> {
    let params = *scheme.params();
    let mask = symmetric.then(|| sample_shared_randomness(scheme.star_cd(), adv.seed));
    let ids: Vec<usize> = scheme.servers().iter().map(|s| s + 1).collect();

    let answers: Vec<(Option<Fp>, bool)> = ids
        .iter()
        .enumerate()
        .map(|(j, &id)| {
            let q = &queries.queries[j];
            let y = &shares[id - 1].y;
            let honest = match &mask {
                Some(s) => symmetric_response(q, y, s[j]),
                None => honest_response(q, y),
            }?;
            if adv.silent.contains(&id) {
                return Ok((None, false));
            }
            if adv.byzantine.contains(&id) {
                let mut rng = stream_rng(adv.seed, STREAM_BYZANTINE_BASE + id as u64);
                let bad = adv.strategy.corrupt(honest, &mut rng);
                return Ok((Some(bad), bad != honest));
            }
            Ok((Some(honest), false))
        })
        .collect::<Result<_>>()?;

    let responses: Vec<Option<Fp>> = answers.iter().map(|a| a.0).collect();
    let error_positions_used = ids
        .iter()
        .zip(&answers)
        .filter(|(_, a)| a.1)
        .map(|(&id, _)| id)
        .collect();
    let erasure_positions_used: Vec<usize> = ids
        .iter()
        .filter(|id| adv.silent.contains(id))
        .copied()
        .collect();
    let byz_used = ids.iter().filter(|id| adv.byzantine.contains(id)).count();
    let within_budget = byz_used <= params.b && erasure_positions_used.len() <= params.r;

    let recovered = recover(&params, scheme.star(), &ReceivedWord::new(responses.clone())).ok();
    let correct = recovered.as_ref() == Some(&expected);

    Ok(SessionReport {
        seed: adv.seed,
        field: scheme.field(),
        n: params.n,
        k: params.k,
        t: params.t,
        b: params.b,
        r: params.r,
        m: db.m(),
        target: queries.target,
        symmetric,
        strategy: adv.strategy,
        servers: ids,
        queries: queries.queries.clone(),
        responses,
        byzantine: sorted_unique(&adv.byzantine),
        silent: sorted_unique(&adv.silent),
        colluding: sorted_unique(&adv.colluding),
        error_positions_used,
        erasure_positions_used,
        recovered,
        expected,
        correct,
        within_budget,
    })
}

/// Upper bound on the number of placements a sweep enumerates.
pub const SWEEP_LIMIT: u128 = 100_000;

/// Result of [`sweep_adversary_placements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub total: usize,
    pub correct: usize,
    /// `(byzantine ids, silent ids)` of every failed placement.
    pub failures: Vec<(Vec<usize>, Vec<usize>)>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `r`-subsets of `items`, in lexicographic order.
pub fn subsets<T: Clone>(items: &[T], r: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], r: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, r, 0, &mut Vec::new(), &mut out);
    out
}

/// Runs a session for every placement of exactly `b` byzantine and `r`
/// silent servers among the queried ones. Queries are fixed by `seed`.
pub fn sweep_adversary_placements(
    db: &Database,
    scheme: &Scheme,
    i: usize,
    strategy: ByzantineStrategy,
    seed: u64,
    symmetric: bool,
) -> Result<SweepSummary> {
    let params = *scheme.params();
    let np = params.n_prime;
    let count = binomial(np, params.b) * binomial(np - params.b, params.r);
    if count > SWEEP_LIMIT {
        return Err(Error::GuardExceeded(format!("{count} placements")));
    }
    let ids: Vec<usize> = scheme.servers().iter().map(|s| s + 1).collect();
    let mut placements = Vec::with_capacity(count as usize);
    for byz in subsets(&ids, params.b) {
        let rest: Vec<usize> = ids.iter().filter(|id| !byz.contains(id)).copied().collect();
        for silent in subsets(&rest, params.r) {
            placements.push((byz.clone(), silent));
        }
    }

    let shares = distribute(db, scheme.storage_code())?;
    let expected = db.file(i)?;
    let queries = make_queries(scheme, db.m(), i, seed)?;
    let outcomes: Vec<bool> = placements
        .par_iter()
        .map(|(byz, silent)| {
            let adv = AdversaryConfig {
                byzantine: byz.clone(),
                strategy,
                silent: silent.clone(),
                colluding: Vec::new(),
                seed,
            };
            run_with_queries(db, scheme, &shares, &queries, expected.clone(), &adv, symmetric)
                .map(|rep| rep.correct)
        })
        .collect::<Result<_>>()?;

    let failures: Vec<_> = placements
        .iter()
        .zip(&outcomes)
        .filter(|(_, ok)| !**ok)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(SweepSummary {
        total: placements.len(),
        correct: placements.len() - failures.len(),
        failures,
    })
}

/// How [`privacy_audit`] inspects the query distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    /// Algebraic check only.
    Algebraic,
    /// Enumerate every `U` (guarded by [`EXHAUSTIVE_LIMIT`]).
    Exhaustive,
    /// Draw this many `U` per file index and compare per-coordinate histograms.
    Sampled(usize),
}

/// Largest `q^{mνt}` the exhaustive audit will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    /// Number of `t`-column submatrices of `G_D` checked (all invertible).
    pub submatrices_checked: usize,
    /// Exhaustive mode: every `t`-subset view is `i`-invariant.
    pub exhaustive_identical: Option<bool>,
    /// Exhaustive mode: every `t`-subset view is uniform on `F^{mν×t}`.
    pub exhaustive_uniform: Option<bool>,
    /// Sampled mode: largest two-sample chi-square statistic and its critical value.
    pub sampled_chi_square: Option<(f64, f64)>,
}

/// Audits `t`-privacy of queries built from `query_gen` (`G_D`) and `e`.
pub fn privacy_audit(
    field: PrimeField,
    query_gen: &GenMatrix,
    e: &EMatrix,
    t: usize,
    m: usize,
    mode: AuditMode,
    seed: u64,
) -> Result<AuditReport> {
    let np = query_gen.len();
    let cols: Vec<usize> = (0..np).collect();
    let mut checked = 0;
    for subset in subsets(&cols, t) {
        let sub = linalg::select_columns(&query_gen.rows, &subset);
        if linalg::determinant(field, &sub)?.is_zero() {
            return Err(Error::AuditFailed(subset.iter().map(|c| c + 1).collect()));
        }
        checked += 1;
    }
    let mut report = AuditReport {
        submatrices_checked: checked,
        exhaustive_identical: None,
        exhaustive_uniform: None,
        sampled_chi_square: None,
    };
    let nu = e.rows.len();
    let rows = m * nu;
    let make = |i: usize, u: &[Vec<Fp>]| -> Matrix {
        let mut qs = linalg::transpose(&linalg::mat_mul(field, u, &query_gen.rows));
        for (j, q) in qs.iter_mut().enumerate() {
            for mu in 0..nu {
                q[(i - 1) * nu + mu] += e.rows[mu][j];
            }
        }
        qs
    };
    match mode {
        AuditMode::Algebraic => {}
        AuditMode::Exhaustive => {
            let q = field.modulus();
            let cells = (rows * t) as u32;
            let total = q
                .checked_pow(cells)
                .filter(|&x| x <= EXHAUSTIVE_LIMIT)
                .ok_or_else(|| Error::GuardExceeded(format!("{q}^{cells} randomness matrices")))?;
            let subsets_t = subsets(&cols, t);
            // views[i][subset] = multiset of restricted query tuples
            let mut views: Vec<Vec<HashMap<Vec<u64>, u64>>> =
                vec![vec![HashMap::new(); subsets_t.len()]; m];
            for idx in 0..total {
                let mut x = idx;
                let u: Matrix = (0..rows)
                    .map(|_| {
                        (0..t)
                            .map(|_| {
                                let v = field.elem(x % q);
                                x /= q;
                                v
                            })
                            .collect()
                    })
                    .collect();
                for (i, view) in views.iter_mut().enumerate() {
                    let qs = make(i + 1, &u);
                    for (s, subset) in subsets_t.iter().enumerate() {
                        let tuple: Vec<u64> = subset
                            .iter()
                            .flat_map(|&j| qs[j].iter().map(|v| v.value()))
                            .collect();
                        *view[s].entry(tuple).or_insert(0) += 1;
                    }
                }
            }
            for (s, subset) in subsets_t.iter().enumerate() {
                if views.iter().any(|v| v[s] != views[0][s]) {
                    return Err(Error::AuditFailed(subset.iter().map(|c| c + 1).collect()));
                }
            }
            let uniform = views[0]
                .iter()
                .all(|hist| hist.len() as u64 == total && hist.values().all(|&c| c == 1));
            report.exhaustive_identical = Some(true);
            report.exhaustive_uniform = Some(uniform);
        }
        AuditMode::Sampled(samples) => {
            let q = field.modulus() as usize;
            let mut rng = stream_rng(seed, 0);
            // hist[i][server][row][value]
            let mut hist = vec![vec![vec![vec![0u64; q]; rows]; np]; m];
            for (i, h) in hist.iter_mut().enumerate() {
                for _ in 0..samples {
                    let u: Matrix = (0..rows).map(|_| field.random_vec(t, &mut rng)).collect();
                    let qs = make(i + 1, &u);
                    for (j, qj) in qs.iter().enumerate() {
                        for (row, v) in qj.iter().enumerate() {
                            h[j][row][v.value() as usize] += 1;
                        }
                    }
                }
            }
            let dist = ChiSquared::new((q - 1) as f64).expect("positive degrees of freedom");
            let critical = dist.inverse_cdf(1.0 - 1e-9);
            let mut worst = 0.0f64;
            for other in &hist[1..] {
                for (j, (base_j, other_j)) in hist[0].iter().zip(other).enumerate() {
                    for (base_row, other_row) in base_j.iter().zip(other_j) {
                        let stat = two_sample_chi_square(base_row, other_row);
                        if stat > critical {
                            return Err(Error::AuditFailed(vec![j + 1]));
                        }
                        worst = worst.max(stat);
                    }
                }
            }
            report.sampled_chi_square = Some((worst, critical));
        }
    }
    Ok(report)
}

fn two_sample_chi_square(a: &[u64], b: &[u64]) -> f64 {
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    a.iter()
        .zip(b)
        .filter(|(x, y)| **x + **y > 0)
        .map(|(&x, &y)| {
            let d = ka * x as f64 - kb * y as f64;
            d * d / (x + y) as f64
        })
        .sum()
}

/// Convenience wrapper auditing a deployed scheme.
pub fn audit_scheme(scheme: &Scheme, m: usize, mode: AuditMode, seed: u64) -> Result<AuditReport> {
    privacy_audit(
        scheme.field(),
        &scheme.query_code().generator_matrix(),
        scheme.e_matrix(),
        scheme.params().t,
        m,
        mode,
        seed,
    )
}

/// Multiset of user views `(queries, responses)` over every randomness
/// matrix `U` and, when `symmetric`, every shared mask in `C⋆D`.
pub fn user_view_distribution(
    scheme: &Scheme,
    db: &Database,
    i: usize,
    symmetric: bool,
) -> Result<HashMap<Vec<u64>, u64>> {
    let field = scheme.field();
    let params = scheme.params();
    let q = field.modulus();
    let rows = db.m() * params.nu;
    let u_cells = (rows * params.t) as u32;
    let mask_cells = if symmetric { scheme.star_cd().k() as u32 } else { 0 };
    let total = q
        .checked_pow(u_cells + mask_cells)
        .filter(|&x| x <= EXHAUSTIVE_LIMIT)
        .ok_or_else(|| Error::GuardExceeded(format!("{q}^{} user views", u_cells + mask_cells)))?;
    let shares = distribute(db, scheme.storage_code())?;
    let mut dist = HashMap::new();
    for idx in 0..total {
        let mut x = idx;
        let mut digit = || {
            let v = field.elem(x % q);
            x /= q;
            v
        };
        let u: Matrix = (0..rows)
            .map(|_| (0..params.t).map(|_| digit()).collect())
            .collect();
        let msg: Vec<Fp> = (0..mask_cells).map(|_| digit()).collect();
        let qs = make_queries_with_u(scheme, db.m(), i, &u)?;
        let mask = if symmetric {
            shared_randomness_from_message(scheme.star_cd(), &msg)?
        } else {
            field.zeros(params.n_prime)
        };
        let mut view: Vec<u64> = qs.queries.iter().flatten().map(|v| v.value()).collect();
        for (j, &s) in scheme.servers().iter().enumerate() {
            view.push(symmetric_response(&qs.queries[j], &shares[s].y, mask[j])?.value());
        }
        *dist.entry(view).or_insert(0) += 1;
    }
    Ok(dist)
}
