use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// Parameter assignment attached to a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<i64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, String>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn q(mut self, q: u64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn t(mut self, t: i64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn s(mut self, s: i64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn i(mut self, i: i64) -> Self {
        self.i = Some(i);
        self
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let named = [
            ("q", self.q.map(|v| v as i64)),
            ("n", self.n),
            ("k", self.k),
            ("t", self.t),
            ("s", self.s),
            ("i", self.i),
        ];
        for (name, v) in named {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        for (k, v) in &self.extra {
            parts.push(format!("{k}={v}"));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Both sides of one inequality, evaluated exactly, and whether it holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub label: String,
    pub context: Context,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub rhs: BigRational,
    pub relation: Relation,
    pub verdict: bool,
}

impl BoundReport {
    pub fn new(
        label: impl Into<String>,
        context: Context,
        lhs: impl Into<BigRational>,
        relation: Relation,
        rhs: impl Into<BigRational>,
    ) -> Self {
        let lhs = lhs.into();
        let rhs = rhs.into();
        let verdict = relation.holds(&lhs, &rhs);
        BoundReport {
            label: label.into(),
            context,
            lhs,
            rhs,
            relation,
            verdict,
        }
    }

    /// Re-derive the verdict from the stored sides.
    pub fn is_consistent(&self) -> bool {
        self.verdict == self.relation.holds(&self.lhs, &self.rhs)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({}): {} {} {}",
            if self.verdict { "ok" } else { "FAIL" },
            self.label,
            self.context,
            format_rational(&self.lhs),
            self.relation.symbol(),
            format_rational(&self.rhs)
        )
    }
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

/// Write reports as CSV with the fixed column set
/// `label,q,n,k,t,s,i,lhs,rhs,relation,verdict`.
pub fn write_csv<W: Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "label", "q", "n", "k", "t", "s", "i", "lhs", "rhs", "relation", "verdict",
    ])?;
    let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in reports {
        let c = &r.context;
        w.write_record([
            r.label.clone(),
            opt(c.q.map(|v| v as i64)),
            opt(c.n),
            opt(c.k),
            opt(c.t),
            opt(c.s),
            opt(c.i),
            format_rational(&r.lhs),
            format_rational(&r.rhs),
            r.relation.symbol().to_string(),
            r.verdict.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{int, ratio};

    #[test]
    fn verdict_follows_relation() {
        let r = BoundReport::new("x", Context::new(), int(3), Relation::Lt, int(3));
        assert!(!r.verdict);
        let r = BoundReport::new("x", Context::new(), int(3), Relation::Le, int(3));
        assert!(r.verdict && r.is_consistent());
    }

    #[test]
    fn json_round_trip_keeps_exact_values() {
        let r = BoundReport::new(
            "demo",
            Context::new().q(2).n(7).with("note", "squared"),
            ratio(7, 8),
            Relation::Lt,
            int(1),
        );
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"lhs\":\"7/8\""));
        assert!(text.contains("\"relation\":\"<\""));
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let r = BoundReport::new("a", Context::new().q(3).k(2), int(1), Relation::Eq, int(1));
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "label,q,n,k,t,s,i,lhs,rhs,relation,verdict");
        assert_eq!(lines.next().unwrap(), "a,3,,2,,,,1,1,=,true");
    }
}
