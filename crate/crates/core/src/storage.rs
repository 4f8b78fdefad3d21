//! Database layout and distribution to storage servers.
//!
//! `m` files, each a `nu × k` matrix, are stacked into an `(m·nu) × k` matrix
//! `X`. Server `j` stores `y_j = X · G_{C,j}`, the `j`-th column of the
//! row-wise encoding of `X`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{dot, Fp, PrimeField};
use crate::grs::GrsCode;
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Database {
    field: PrimeField,
    m: usize,
    nu: usize,
    k: usize,
    x: Matrix,
}

/// What server `server_id` (1-indexed) stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServerShare {
    pub server_id: usize,
    pub y: Vec<Fp>,
}

/// Stacks `files` (each `nu × k`) into a database, preserving order.
pub fn layout_database(field: PrimeField, files: &[Matrix]) -> Result<Database> {
    let first = files
        .first()
        .ok_or_else(|| Error::ShapeMismatch("database needs at least one file".into()))?;
    let nu = first.len();
    let k = first.first().map_or(0, Vec::len);
    if nu == 0 || k == 0 {
        return Err(Error::ShapeMismatch("files must be non-empty".into()));
    }
    let mut x = Vec::with_capacity(files.len() * nu);
    for (idx, file) in files.iter().enumerate() {
        if file.len() != nu || file.iter().any(|row| row.len() != k) {
            return Err(Error::ShapeMismatch(format!(
                "file {} is not {nu}x{k}",
                idx + 1
            )));
        }
        for row in file {
            if let Some(bad) = row.iter().find(|e| e.modulus() != field.modulus()) {
                return Err(Error::FieldMismatch(field.modulus(), bad.modulus()));
            }
            x.push(row.clone());
        }
    }
    Ok(Database {
        field,
        m: files.len(),
        nu,
        k,
        x,
    })
}

impl Database {
    /// Uniformly random contents.
    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        m: usize,
        nu: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<Database> {
        let files: Vec<Matrix> = (0..m)
            .map(|_| (0..nu).map(|_| field.random_vec(k, rng)).collect())
            .collect();
        layout_database(field, &files)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The stacked `(m·nu) × k` matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    /// File `i` (1-indexed) as a `nu × k` matrix.
    pub fn file(&self, i: usize) -> Result<Matrix> {
        if i == 0 || i > self.m {
            return Err(Error::IndexOutOfRange { index: i, m: self.m });
        }
        Ok(self.x[(i - 1) * self.nu..i * self.nu].to_vec())
    }

    /// A copy with file `i` replaced.
    pub fn with_file(&self, i: usize, file: Matrix) -> Result<Database> {
        let mut files: Vec<Matrix> = (1..=self.m).map(|j| self.file(j)).collect::<Result<_>>()?;
        if i == 0 || i > self.m {
            return Err(Error::IndexOutOfRange { index: i, m: self.m });
        }
        files[i - 1] = file;
        layout_database(self.field, &files)
    }
}

/// Computes every server's share `y_j = X · G_{C,j}`.
pub fn distribute(db: &Database, code: &GrsCode) -> Result<Vec<ServerShare>> {
    if code.k() != db.k {
        return Err(Error::ShapeMismatch(format!(
            "code dimension {} does not match file width {}",
            code.k(),
            db.k
        )));
    }
    if code.field() != db.field {
        return Err(Error::FieldMismatch(db.field.modulus(), code.field().modulus()));
    }
    let g = code.generator_matrix();
    (0..code.n())
        .map(|j| {
            let col = g.column(j);
            let y = db.x.iter().map(|row| dot(row, &col)).collect::<Result<_>>()?;
            Ok(ServerShare { server_id: j + 1, y })
        })
        .collect()
}

/// Recovers `X` from exactly `k` shares whose generator columns are independent.
pub fn reconstruct(code: &GrsCode, shares: &[ServerShare]) -> Result<Matrix> {
    let k = code.k();
    if shares.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: shares.len(),
        });
    }
    let g = code.generator_matrix();
    let cols: Vec<usize> = shares.iter().map(|s| s.server_id - 1).collect();
    // X · G_S = Y_S  =>  X = Y_S · G_S^{-1}
    let g_sub = linalg::select_columns(&g.rows, &cols);
    let inv = linalg::inverse(code.field(), &g_sub)?;
    let y_cols: Matrix = shares.iter().map(|s| s.y.clone()).collect();
    let y = linalg::transpose(&y_cols);
    Ok(linalg::mat_mul(code.field(), &y, &inv))
}

impl fmt::Display for Database {
    /// Header `p m nu k`, then one line per row of `X`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# p m nu k")?;
        writeln!(f, "{} {} {} {}", self.field.modulus(), self.m, self.nu, self.k)?;
        for (r, row) in self.x.iter().enumerate() {
            if r % self.nu == 0 {
                writeln!(f, "# file {}", r / self.nu + 1)?;
            }
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", vals.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
}

impl FromStr for Database {
    type Err = Error;

    fn from_str(text: &str) -> Result<Database> {
        let mut toks = tokens(text).map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        });
        let mut next = |what: &str| {
            toks.next()
                .unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
        };
        let field = PrimeField::new(next("modulus")?)?;
        let m = next("file count")? as usize;
        let nu = next("rows per file")? as usize;
        let k = next("width")? as usize;
        let mut files = Vec::with_capacity(m);
        for _ in 0..m {
            let mut file = Vec::with_capacity(nu);
            for _ in 0..nu {
                let mut row = Vec::with_capacity(k);
                for _ in 0..k {
                    let v = next("entry")?;
                    if v >= field.modulus() {
                        return Err(Error::Parse(format!("entry {v} not reduced mod {}", field.modulus())));
                    }
                    row.push(field.elem(v));
                }
                file.push(row);
            }
            files.push(file);
        }
        if toks.next().is_some() {
            return Err(Error::Parse("trailing data after database".into()));
        }
        layout_database(field, &files)
    }
}

/// One line per server: `server_id y_1 ... y_{m·nu}`.
pub fn shares_to_text(field: PrimeField, shares: &[ServerShare]) -> String {
    let mut out = format!("# shares over GF({}): server_id then stored column\n", field.modulus());
    for s in shares {
        let vals: Vec<String> = s.y.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{} {}\n", s.server_id, vals.join(" ")));
    }
    out
}
