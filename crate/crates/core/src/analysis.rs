//! Rate formulas and comparison tables.
//!
//! All arithmetic is exact (`BigRational`); decimals are produced only for
//! display.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pir::compute_params;

/// Binomial coefficient, exact.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// A rate that may fall outside the region where the scheme operates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlaggedRate {
    pub rate: BigRational,
    /// False when the formula gives a non-positive rate.
    pub feasible: bool,
}

impl FlaggedRate {
    fn new(rate: BigRational) -> Self {
        let feasible = rate.is_positive();
        FlaggedRate { rate, feasible }
    }
}

/// `νk / n'` for the explicit GRS scheme.
pub fn rate_theorem2(n: usize, k: usize, t: usize, b: usize, r: usize) -> Result<BigRational> {
    let p = compute_params(n, k, t, b, r)?;
    Ok(ratio((p.nu * p.k) as u64, p.n_prime as u64))
}

/// Asymptotic rate of the comparison scheme with `r` non-responsive servers and no byzantine ones:
/// `n/(n-r) · (C(n-r,k) + C(n-t,k) - C(n,k)) / C(n,k)`.
pub fn rate_zhangge_unresponsive(n: u64, k: u64, t: u64, r: u64) -> Result<FlaggedRate> {
    if r >= n || k > n - r || t > n || k > n - t || k == 0 {
        return Err(Error::Infeasible(format!(
            "binomials undefined for n={n}, k={k}, t={t}, r={r}"
        )));
    }
    let all = binomial(n, k);
    let numer = binomial(n - r, k) + binomial(n - t, k) - &all;
    let rate = ratio(n, n - r) * BigRational::new(numer, all);
    Ok(FlaggedRate::new(rate))
}

/// Asymptotic rate of the comparison scheme with `b` byzantine servers and no silent ones:
/// `(2(C(n-b,k) - C(n,k)) + C(n-t,k)) / C(n,k)`.
pub fn rate_zhangge_byzantine(n: u64, k: u64, t: u64, b: u64) -> Result<FlaggedRate> {
    if b > n || k > n - b || t > n || k > n - t || k == 0 {
        return Err(Error::Infeasible(format!(
            "binomials undefined for n={n}, k={k}, t={t}, b={b}"
        )));
    }
    let all = binomial(n, k);
    let numer = BigInt::from(2) * (binomial(n - b, k) - &all) + binomial(n - t, k);
    Ok(FlaggedRate::new(BigRational::new(numer, all)))
}

/// Finite-`m` comparison curve `c · (1 - ρ) / (1 - ρ^m)`, i.e. `c / (1 + ρ + … + ρ^{m-1})`.
pub fn finite_m_curve(c: &BigRational, rho: &BigRational, m: u64) -> BigRational {
    assert!(m >= 1);
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for _ in 0..m {
        sum += &term;
        term *= rho;
    }
    c / sum
}

/// One row of a rate table. `m = None` means the asymptotic value,
/// `rate = None` an infeasible configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePoint {
    pub scheme: String,
    pub m: Option<u64>,
    pub rate: Option<BigRational>,
}

pub const FIG1_N: usize = 12;
pub const FIG1_K: usize = 2;
pub const FIG1_T: usize = 3;

/// Scale and ratio of the two plotted comparison curves, keyed by `(b, r)`.
fn fig1_comparison(b: usize, r: usize) -> Option<(BigRational, BigRational)> {
    match (b, r) {
        (2, 0) => Some((ratio(4, 11), ratio(5, 4))),
        (0, 2) => Some((ratio(9, 11), ratio(2, 3))),
        _ => None,
    }
}

/// The four curves for `n = 12, k = 2, t = 3` and `m = 1..=m_max`.
pub fn figure1_curves(m_max: u64) -> Vec<RatePoint> {
    let mut out = Vec::with_capacity(4 * m_max as usize);
    for (b, r) in [(2, 0), (0, 2)] {
        let thm2 = rate_theorem2(FIG1_N, FIG1_K, FIG1_T, b, r).ok();
        let (c, rho) = fig1_comparison(b, r).expect("plotted configuration");
        for m in 1..=m_max {
            out.push(RatePoint {
                scheme: format!("thm2_b{b}_r{r}"),
                m: Some(m),
                rate: thm2.clone(),
            });
            out.push(RatePoint {
                scheme: format!("zhangge_b{b}_r{r}"),
                m: Some(m),
                rate: Some(finite_m_curve(&c, &rho, m)),
            });
        }
    }
    sort_table(&mut out);
    out
}

/// Rate table for arbitrary `(n, k, t)` and paired `(b, r)` lists. The
/// plotted configuration reproduces [`figure1_curves`]; anything else gets
/// constant rows for the GRS scheme plus the comparison scheme's asymptote.
pub fn rate_table(
    n: usize,
    k: usize,
    t: usize,
    pairs: &[(usize, usize)],
    m_max: u64,
) -> Vec<RatePoint> {
    if (n, k, t) == (FIG1_N, FIG1_K, FIG1_T) && pairs == [(2, 0), (0, 2)] {
        return figure1_curves(m_max);
    }
    let mut out = Vec::new();
    for &(b, r) in pairs {
        let thm2 = rate_theorem2(n, k, t, b, r).ok();
        for m in 1..=m_max {
            out.push(RatePoint {
                scheme: format!("thm2_b{b}_r{r}"),
                m: Some(m),
                rate: thm2.clone(),
            });
        }
        let (n, k, t) = (n as u64, k as u64, t as u64);
        let zg = match (b, r) {
            (b, 0) => rate_zhangge_byzantine(n, k, t, b as u64).ok(),
            (0, r) => rate_zhangge_unresponsive(n, k, t, r as u64).ok(),
            // the comparison scheme handles one fault type at a time
            _ => None,
        };
        out.push(RatePoint {
            scheme: format!("zhangge_b{b}_r{r}"),
            m: None,
            rate: zg.filter(|z| z.feasible).map(|z| z.rate),
        });
    }
    sort_table(&mut out);
    out
}

fn sort_table(table: &mut [RatePoint]) {
    table.sort_by(|a, b| {
        a.scheme.cmp(&b.scheme).then_with(|| match (a.m, b.m) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
    });
}

/// Fixed-point decimal with `places` digits, rounded half away from zero.
pub fn to_decimal(x: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10).pow(places as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places)
    }
}

fn m_label(m: Option<u64>) -> String {
    m.map_or_else(|| "inf".to_string(), |m| m.to_string())
}

/// CSV with header `scheme,m,rate_exact,rate_decimal`, sorted by `(scheme, m)`.
pub fn emit_csv(table: &[RatePoint]) -> String {
    let mut rows = table.to_vec();
    sort_table(&mut rows);
    let mut out = String::from("scheme,m,rate_exact,rate_decimal\n");
    for p in rows {
        let (exact, dec) = match &p.rate {
            Some(r) => (r.to_string(), to_decimal(r, 6)),
            None => ("infeasible".to_string(), "infeasible".to_string()),
        };
        out.push_str(&format!("{},{},{},{}\n", p.scheme, m_label(p.m), exact, dec));
    }
    out
}

/// Whitespace table for gnuplot: one block per scheme, blocks separated by
/// two blank lines so `index` selects a curve. Infeasible rows are comments.
pub fn emit_gnuplot(table: &[RatePoint]) -> String {
    let mut rows = table.to_vec();
    sort_table(&mut rows);
    let mut out = String::new();
    let mut current: Option<&str> = None;
    for p in &rows {
        if current != Some(p.scheme.as_str()) {
            if current.is_some() {
                out.push_str("\n\n");
            }
            out.push_str(&format!("# {}\n# m rate\n", p.scheme));
            current = Some(p.scheme.as_str());
        }
        match &p.rate {
            Some(r) => out.push_str(&format!("{} {}\n", m_label(p.m), to_decimal(r, 6))),
            None => out.push_str(&format!("# {} infeasible\n", m_label(p.m))),
        }
    }
    out
}

/// Largest `m ≤ m_max` at which `curve(m)` still strictly exceeds `constant`.
pub fn crossover(
    curve: impl Fn(u64) -> BigRational,
    constant: &BigRational,
    m_max: u64,
) -> Option<u64> {
    (1..=m_max).filter(|&m| curve(m) > *constant).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 2), BigInt::from(66));
        assert_eq!(binomial(10, 2), BigInt::from(45));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(64, 32), "1832624140942590534".parse::<BigInt>().unwrap());
    }

    #[test]
    fn theorem2_rates() {
        assert_eq!(rate_theorem2(13, 2, 3, 2, 1).unwrap(), ratio(4, 13));
        assert_eq!(rate_theorem2(12, 2, 3, 2, 0).unwrap(), ratio(1, 3));
        assert_eq!(rate_theorem2(12, 2, 3, 0, 2).unwrap(), ratio(1, 2));
        assert!(rate_theorem2(6, 2, 3, 2, 1).is_err());
    }

    #[test]
    fn unresponsive_comparison_rate() {
        // (12/10) * (45 + 36 - 66) / 66 = 18/66
        let z = rate_zhangge_unresponsive(12, 2, 3, 2).unwrap();
        assert_eq!(z.rate, ratio(3, 11));
        assert!(z.feasible);
        // C(3,2) + C(9,2) - C(12,2) = 3 + 36 - 66 < 0
        let z = rate_zhangge_unresponsive(12, 2, 3, 9).unwrap();
        assert!(!z.feasible);
        assert!(rate_zhangge_unresponsive(12, 2, 3, 11).is_err());
    }

    #[test]
    fn byzantine_comparison_rate() {
        let z = rate_zhangge_byzantine(12, 2, 3, 2).unwrap();
        assert_eq!(z.rate, ratio(-1, 11));
        assert!(!z.feasible);
        assert_eq!(rate_zhangge_byzantine(13, 2, 3, 0).unwrap().rate, ratio(45, 78));
        assert_eq!(rate_zhangge_byzantine(9, 3, 0, 0).unwrap().rate, ratio(1, 1));
    }

    #[test]
    fn finite_curve_values() {
        let c = ratio(9, 11);
        let rho = ratio(2, 3);
        assert_eq!(finite_m_curve(&c, &rho, 1), ratio(9, 11));
        // 9/11 / (1 + 2/3) = 27/55
        assert_eq!(finite_m_curve(&c, &rho, 2), ratio(27, 55));
        // the closed form and the geometric sum agree
        for m in 1..20u64 {
            let closed = &c * (BigRational::one() - &rho)
                / (BigRational::one() - num_traits::pow(rho.clone(), m as usize));
            assert_eq!(finite_m_curve(&c, &rho, m), closed);
        }
        let far = finite_m_curve(&c, &rho, 200);
        let limit = ratio(3, 11);
        assert!(far > limit);
        assert!(&far - &limit < ratio(1, 1_000_000_000_000i64));
    }

    #[test]
    fn figure1_shape() {
        let t = figure1_curves(100);
        assert_eq!(t.len(), 400);
        let t1 = figure1_curves(1);
        assert_eq!(t1.len(), 4);
        let zg_r2 = t1.iter().find(|p| p.scheme == "zhangge_b0_r2").unwrap();
        assert_eq!(zg_r2.rate, Some(ratio(9, 11)));
    }

    #[test]
    fn csv_formatting() {
        let one = vec![RatePoint {
            scheme: "thm2".into(),
            m: Some(1),
            rate: Some(ratio(1, 3)),
        }];
        assert_eq!(emit_csv(&one), "scheme,m,rate_exact,rate_decimal\nthm2,1,1/3,0.333333\n");
        assert_eq!(emit_csv(&[]), "scheme,m,rate_exact,rate_decimal\n");
        let csv = emit_csv(&figure1_curves(100));
        assert_eq!(csv.lines().count(), 401);
    }

    #[test]
    fn csv_sorting_and_infeasible() {
        let table = vec![
            RatePoint { scheme: "b".into(), m: None, rate: None },
            RatePoint { scheme: "b".into(), m: Some(10), rate: Some(ratio(1, 2)) },
            RatePoint { scheme: "b".into(), m: Some(2), rate: Some(ratio(2, 3)) },
            RatePoint { scheme: "a".into(), m: Some(1), rate: Some(ratio(-1, 11)) },
        ];
        assert_eq!(
            emit_csv(&table),
            "scheme,m,rate_exact,rate_decimal\n\
             a,1,-1/11,-0.090909\n\
             b,2,2/3,0.666667\n\
             b,10,1/2,0.500000\n\
             b,inf,infeasible,infeasible\n"
        );
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(to_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(to_decimal(&ratio(4, 13), 6), "0.307692");
        assert_eq!(to_decimal(&ratio(1, 1), 6), "1.000000");
        assert_eq!(to_decimal(&ratio(-1, 11), 3), "-0.091");
    }

    #[test]
    fn generalized_table() {
        let t = rate_table(13, 2, 3, &[(2, 1), (0, 1), (1, 0)], 3);
        let csv = emit_csv(&t);
        assert!(csv.contains("thm2_b2_r1,1,4/13,0.307692"));
        // both fault types at once: no comparison rate
        assert!(csv.contains("zhangge_b2_r1,inf,infeasible,infeasible"));
        assert!(csv.contains("zhangge_b0_r1,inf,"));
        let infeasible = rate_table(6, 2, 3, &[(2, 1)], 1);
        assert!(emit_csv(&infeasible).contains("thm2_b2_r1,1,infeasible,infeasible"));
        assert_eq!(rate_table(12, 2, 3, &[(2, 0), (0, 2)], 5), figure1_curves(5));
    }

    #[test]
    fn gnuplot_blocks() {
        let g = emit_gnuplot(&figure1_curves(2));
        assert_eq!(g.matches("\n\n\n").count(), 3);
        assert!(g.contains("# zhangge_b0_r2\n# m rate\n1 0.818182\n2 0.490909\n"));
    }

    #[test]
    fn crossovers() {
        let r2 = |m| finite_m_curve(&ratio(9, 11), &ratio(2, 3), m);
        assert_eq!(crossover(r2, &ratio(1, 2), 100), Some(1));
        let b2 = |m| finite_m_curve(&ratio(4, 11), &ratio(5, 4), m);
        assert_eq!(crossover(b2, &ratio(1, 3), 100), Some(1));
    }

    #[test]
    fn comparison_bounds_strict_for_k_at_least_two() {
        let mut checked = 0;
        for n in 1..=20u64 {
            for k in 2..=4u64 {
                for t in 1..=4u64 {
                    for x in 1..=3u64 {
                        let (nu, ku, tu, xu) = (n as usize, k as usize, t as usize, x as usize);
                        if let (Ok(z), Ok(_)) =
                            (rate_zhangge_unresponsive(n, k, t, x), rate_theorem2(nu, ku, tu, 0, xu))
                        {
                            if z.feasible {
                                assert!(z.rate < ratio(n - (k + t + x - 1), n));
                                checked += 1;
                            }
                        }
                        if let (Ok(z), Ok(_)) =
                            (rate_zhangge_byzantine(n, k, t, x), rate_theorem2(nu, ku, tu, xu, 0))
                        {
                            if z.feasible {
                                assert!(z.rate < ratio(n as i64 - (k + t + 2 * x - 1) as i64, n as i64));
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 400);
    }

    #[test]
    fn comparison_bounds_fail_for_k_one() {
        // With k = 1 every binomial is linear in n.
        for n in 4..=20u64 {
            for t in 1..=2u64 {
                let r = 1;
                let z = rate_zhangge_unresponsive(n, 1, t, r).unwrap();
                assert_eq!(z.rate, ratio(n - t - r, n - r));
                assert!(z.rate > ratio(n - t - r, n));
                let b = 1;
                let z = rate_zhangge_byzantine(n, 1, t, b).unwrap();
                assert_eq!(z.rate, ratio(n - t - 2 * b, n));
            }
        }
    }
}
