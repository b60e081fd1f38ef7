//! Instance files.
//!
//! ```json
//! {"kind":"mrf","domain":"pm1","n":2,"A":[[0.0,1.0],[1.0,0.0]]}
//! {"kind":"rbm","domain":"01","m":1,"p":1,"W":[[1.0]],"a":[0.0],"b":[0.0]}
//! ```
//!
//! Numbers are written with 17 significant digits, so reading a file and
//! writing it back reproduces it byte-for-byte.

use std::io;
use std::path::Path;

use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{Domain, MrfParams, RbmParams};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Mrf(MrfParams),
    Rbm(RbmParams),
}

#[derive(serde::Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Mrf {
        domain: Domain,
        n: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
    },
    Rbm {
        domain: Domain,
        m: usize,
        p: usize,
        #[serde(rename = "W")]
        w: Vec<Vec<f64>>,
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

/// Compact JSON with `{:.16e}` floats.
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_full_precision_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn matrix_from(rows: &[Vec<f64>], r: usize, c: usize, name: &str) -> Result<Matrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(format_err(format!("{name} must be {r}×{c}")));
    }
    Matrix::from_rows(rows)
}

impl Instance {
    pub fn to_json(&self) -> Result<String> {
        let record = match self {
            Instance::Mrf(p) => Record::Mrf {
                domain: p.domain(),
                n: p.n(),
                a: p.matrix().to_nested(),
            },
            Instance::Rbm(r) => Record::Rbm {
                domain: r.domain(),
                m: r.m(),
                p: r.p(),
                w: r.weights().to_nested(),
                a: r.visible_bias().to_vec(),
                b: r.hidden_bias().to_vec(),
            },
        };
        let mut s = to_full_precision_json(&record)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: Record = serde_json::from_str(text)?;
        match record {
            Record::Mrf { domain, n, a } => {
                let a = matrix_from(&a, n, n, "A")?;
                if !a.is_finite() {
                    return Err(format_err("A contains NaN or infinity"));
                }
                Ok(Instance::Mrf(MrfParams::new(a, domain)?))
            }
            Record::Rbm {
                domain,
                m,
                p,
                w,
                a,
                b,
            } => {
                let w = matrix_from(&w, m, p, "W")?;
                if a.len() != m || b.len() != p {
                    return Err(format_err(format!("a must have length {m} and b length {p}")));
                }
                if !w.is_finite() || !a.iter().chain(&b).all(|v| v.is_finite()) {
                    return Err(format_err("RBM parameters contain NaN or infinity"));
                }
                Ok(Instance::Rbm(RbmParams::new(w, a, b, domain)?))
            }
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Mrf(_) => "mrf",
            Instance::Rbm(_) => "rbm",
        }
    }
}
