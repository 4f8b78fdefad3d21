//! Line-oriented text form of a [`SessionReport`].
//!
//! ```text
//! # robust-pir session transcript
//! seed 42
//! field 17
//! params n=13 k=2 t=3 b=2 r=1 nu=2 n_prime=13 d_star=6 rate=4/13
//! files m=3 target=2
//! symmetric false
//! strategy uniform
//! byzantine 4 9
//! silent 11
//! colluding 1 2 3
//! errors_used 4 9
//! erasures_used 11
//! query 1 5 0 16 3 9 12
//! response 1 7
//! response 11 ERASED
//! expected 3 4
//! recovered 3 4
//! correct true
//! within_budget true
//! ```
//!
//! `query` and `response` lines carry the 1-indexed server id first.
//! `recovered FAILURE` marks a decoding failure.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::adversary::{ByzantineStrategy, SessionReport};
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::pir::compute_params;

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn line(f: &mut fmt::Formatter<'_>, key: &str, rest: &str) -> fmt::Result {
    if rest.is_empty() {
        writeln!(f, "{key}")
    } else {
        writeln!(f, "{key} {rest}")
    }
}

impl fmt::Display for SessionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# robust-pir session transcript")?;
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "field {}", self.field.modulus())?;
        match compute_params(self.n, self.k, self.t, self.b, self.r) {
            Ok(p) => writeln!(
                f,
                "params n={} k={} t={} b={} r={} nu={} n_prime={} d_star={} rate={}",
                p.n,
                p.k,
                p.t,
                p.b,
                p.r,
                p.nu,
                p.n_prime,
                p.d_star,
                p.rate()
            )?,
            Err(_) => writeln!(
                f,
                "params n={} k={} t={} b={} r={}",
                self.n, self.k, self.t, self.b, self.r
            )?,
        }
        writeln!(f, "files m={} target={}", self.m, self.target)?;
        writeln!(f, "symmetric {}", self.symmetric)?;
        writeln!(f, "strategy {}", self.strategy)?;
        line(f, "byzantine", &join(&self.byzantine))?;
        line(f, "silent", &join(&self.silent))?;
        line(f, "colluding", &join(&self.colluding))?;
        line(f, "errors_used", &join(&self.error_positions_used))?;
        line(f, "erasures_used", &join(&self.erasure_positions_used))?;
        for (id, q) in self.servers.iter().zip(&self.queries) {
            writeln!(f, "query {id} {}", join(q))?;
        }
        for (id, r) in self.servers.iter().zip(&self.responses) {
            match r {
                Some(v) => writeln!(f, "response {id} {v}")?,
                None => writeln!(f, "response {id} ERASED")?,
            }
        }
        for row in &self.expected {
            writeln!(f, "expected {}", join(row))?;
        }
        match &self.recovered {
            Some(rows) => {
                for row in rows {
                    writeln!(f, "recovered {}", join(row))?;
                }
            }
            None => writeln!(f, "recovered FAILURE")?,
        }
        writeln!(f, "correct {}", self.correct)?;
        writeln!(f, "within_budget {}", self.within_budget)
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse(format!("bad flag {s:?}"))),
    }
}

fn key_values(tokens: &[&str]) -> Result<HashMap<String, String>> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {t:?}")))
        })
        .collect()
}

fn get<T: FromStr>(kv: &HashMap<String, String>, key: &str) -> Result<T> {
    parse_num(kv.get(key).ok_or_else(|| Error::Parse(format!("missing {key}")))?)
}

impl FromStr for SessionReport {
    type Err = Error;

    fn from_str(text: &str) -> Result<SessionReport> {
        let mut seed = None;
        let mut field: Option<PrimeField> = None;
        let mut params = None;
        let mut files = None;
        let mut symmetric = None;
        let mut strategy = None;
        let mut lists: HashMap<&str, Vec<usize>> = HashMap::new();
        let mut servers = Vec::new();
        let mut queries = Vec::new();
        let mut responses = Vec::new();
        let mut expected = Vec::new();
        let mut recovered: Option<Vec<Vec<Fp>>> = Some(Vec::new());
        let mut correct = None;
        let mut within_budget = None;

        let elem = |field: Option<PrimeField>, s: &str| -> Result<Fp> {
            let f = field.ok_or_else(|| Error::Parse("field must precede values".into()))?;
            let v: u64 = parse_num(s)?;
            if v >= f.modulus() {
                return Err(Error::Parse(format!("value {v} not reduced")));
            }
            Ok(f.elem(v))
        };

        for raw in text.lines() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let (key, rest) = (toks[0], &toks[1..]);
            match key {
                "seed" => seed = Some(parse_num::<u64>(rest.first().copied().unwrap_or(""))?),
                "field" => {
                    field = Some(PrimeField::new(parse_num(rest.first().copied().unwrap_or(""))?)?)
                }
                "params" => {
                    let kv = key_values(rest)?;
                    params = Some((
                        get::<usize>(&kv, "n")?,
                        get::<usize>(&kv, "k")?,
                        get::<usize>(&kv, "t")?,
                        get::<usize>(&kv, "b")?,
                        get::<usize>(&kv, "r")?,
                    ));
                }
                "files" => {
                    let kv = key_values(rest)?;
                    files = Some((get::<usize>(&kv, "m")?, get::<usize>(&kv, "target")?));
                }
                "symmetric" => symmetric = Some(parse_bool(rest.first().copied().unwrap_or(""))?),
                "strategy" => strategy = Some(rest.join(" ").parse::<ByzantineStrategy>()?),
                "byzantine" | "silent" | "colluding" | "errors_used" | "erasures_used" => {
                    let ids = rest.iter().map(|s| parse_num(s)).collect::<Result<_>>()?;
                    lists.insert(
                        match key {
                            "byzantine" => "byzantine",
                            "silent" => "silent",
                            "colluding" => "colluding",
                            "errors_used" => "errors_used",
                            _ => "erasures_used",
                        },
                        ids,
                    );
                }
                "query" => {
                    let (id, vals) = rest
                        .split_first()
                        .ok_or_else(|| Error::Parse("empty query line".into()))?;
                    servers.push(parse_num::<usize>(id)?);
                    queries.push(vals.iter().map(|s| elem(field, s)).collect::<Result<Vec<_>>>()?);
                }
                "response" => {
                    let [id, val] = rest else {
                        return Err(Error::Parse(format!("bad response line {content:?}")));
                    };
                    let id: usize = parse_num(id)?;
                    if servers.get(responses.len()) != Some(&id) {
                        return Err(Error::Parse(format!("response for unexpected server {id}")));
                    }
                    responses.push(if *val == "ERASED" { None } else { Some(elem(field, val)?) });
                }
                "expected" => {
                    expected.push(rest.iter().map(|s| elem(field, s)).collect::<Result<Vec<_>>>()?)
                }
                "recovered" => {
                    if rest == ["FAILURE"] {
                        recovered = None;
                    } else if let Some(rows) = recovered.as_mut() {
                        rows.push(rest.iter().map(|s| elem(field, s)).collect::<Result<Vec<_>>>()?);
                    } else {
                        return Err(Error::Parse("rows after FAILURE".into()));
                    }
                }
                "correct" => correct = Some(parse_bool(rest.first().copied().unwrap_or(""))?),
                "within_budget" => {
                    within_budget = Some(parse_bool(rest.first().copied().unwrap_or(""))?)
                }
                other => return Err(Error::Parse(format!("unknown transcript key {other:?}"))),
            }
        }

        let missing = |what: &str| Error::Parse(format!("transcript lacks {what}"));
        let (n, k, t, b, r) = params.ok_or_else(|| missing("params"))?;
        let (m, target) = files.ok_or_else(|| missing("files"))?;
        if responses.len() != servers.len() {
            return Err(Error::Parse("query/response count mismatch".into()));
        }
        let mut list = |key: &str| lists.remove(key).unwrap_or_default();
        Ok(SessionReport {
            seed: seed.ok_or_else(|| missing("seed"))?,
            field: field.ok_or_else(|| missing("field"))?,
            n,
            k,
            t,
            b,
            r,
            m,
            target,
            symmetric: symmetric.ok_or_else(|| missing("symmetric"))?,
            strategy: strategy.ok_or_else(|| missing("strategy"))?,
            servers,
            queries,
            responses,
            byzantine: list("byzantine"),
            silent: list("silent"),
            colluding: list("colluding"),
            error_positions_used: list("errors_used"),
            erasure_positions_used: list("erasures_used"),
            recovered,
            expected,
            correct: correct.ok_or_else(|| missing("correct"))?,
            within_budget: within_budget.ok_or_else(|| missing("within_budget"))?,
        })
    }
}
