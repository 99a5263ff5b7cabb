//! Flat `key = value` text documents, used for instances and configs.
//!
//! One entry per line, `#` starts a comment, lists are separated by spaces
//! or commas. Keys keep their insertion order when written back.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::{Instance, Scalar, Variant};

/// Significant digits used for reals in instance documents; enough for an
/// exact `f64` round trip.
pub const INSTANCE_DIGITS: usize = 17;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    entries: Vec<(String, String)>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = Document::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err("empty key".into()));
            }
            if doc.get(key).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
            doc.entries
                .push((key.to_string(), value.trim().to_string()));
        }
        Ok(doc)
    }

    /// Sets `key`, replacing an earlier value in place.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn set_list<I, V>(&mut self, key: &str, values: I)
    where
        I: IntoIterator<Item = V>,
        V: fmt::Display,
    {
        let joined = values
            .into_iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        self.set(key, joined);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing key `{key}`"),
        })
    }

    pub fn parsed<V: FromStr>(&self, key: &str) -> Result<Option<V>>
    where
        V::Err: fmt::Display,
    {
        self.get(key).map(|v| parse_value(key, v)).transpose()
    }

    pub fn required<V: FromStr>(&self, key: &str) -> Result<V>
    where
        V::Err: fmt::Display,
    {
        parse_value(key, self.require(key)?)
    }

    pub fn list<V: FromStr>(&self, key: &str) -> Result<Option<Vec<V>>>
    where
        V::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_value(key, s))
                    .collect()
            })
            .transpose()
    }

    pub fn required_list<V: FromStr>(&self, key: &str) -> Result<Vec<V>>
    where
        V::Err: fmt::Display,
    {
        self.list(key)?.ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing key `{key}`"),
        })
    }
}

fn parse_value<V: FromStr>(key: &str, raw: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    raw.trim().parse().map_err(|e| Error::Parse {
        line: 0,
        message: format!("bad value `{raw}` for `{key}`: {e}"),
    })
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Document {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Document::parse(s)
    }
}

/// Formats `x` like C's `%.{sig}g`: `sig` significant digits, fixed notation
/// for decimal exponents in `[-4, sig)`, trailing zeros removed.
pub fn format_real(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn instance_to_doc<T: Scalar>(inst: &Instance<T>) -> Document {
    let real = |x: T| format_real(x.as_f64(), INSTANCE_DIGITS);
    let mut doc = Document::new();
    doc.set("variant", inst.variant().as_str());
    doc.set("k", inst.k().to_string());
    doc.set_list("sizes", inst.sizes());
    doc.set("a", real(inst.a()));
    doc.set("d", real(inst.d()));
    match inst.uniform_cov() {
        Some(c) => doc.set("c", real(c)),
        None => doc.set_list("c", inst.cov().iter().map(|&c| real(c))),
    }
    doc.set("gamma", real(inst.gamma()));
    doc
}

/// Reads an instance; `c` may hold one shared value or one per group.
pub fn instance_from_doc<T: Scalar>(doc: &Document) -> Result<Instance<T>> {
    let variant: Variant = doc.required("variant")?;
    let sizes: Vec<usize> = doc.required_list("sizes")?;
    if let Some(k) = doc.parsed::<usize>("k")? {
        if k != sizes.len() {
            return Err(Error::LengthMismatch {
                expected: k,
                actual: sizes.len(),
            });
        }
    }
    let real = |key: &str| doc.required::<f64>(key).map(T::of);
    let mut cov: Vec<T> = doc
        .required_list::<f64>("c")?
        .into_iter()
        .map(T::of)
        .collect();
    if cov.len() == 1 {
        cov = vec![cov[0]; sizes.len()];
    }
    Instance::new(variant, sizes, real("a")?, real("d")?, cov, real("gamma")?)
}

pub fn write_instance<T: Scalar>(inst: &Instance<T>) -> String {
    instance_to_doc(inst).to_string()
}

pub fn read_instance<T: Scalar>(text: &str) -> Result<Instance<T>> {
    instance_from_doc(&Document::parse(text)?)
}
