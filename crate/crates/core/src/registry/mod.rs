//! The identity catalog.
//!
//! The built-in catalog is a JSON data file compiled into the crate. A
//! different file with the same schema can be loaded at run time with
//! [`load_catalog`] or [`load_catalog_file`].
//!
//! ```text
//! {"version": 1, "records": [
//!   {"id": "eq-italy", "source": "...",
//!    "lhs": {"z": "8/3", "a": 2, "weight": {"kind": "unit"}},
//!    "rhs": "pi^2/6 - log(3)^2/2",
//!    "validity": "", "tags": ["positive-special"]}
//! ]}
//! ```
//!
//! A bare array of records is accepted as well. `rhs` is an expression
//! (infix text or tree) or a family reference such as
//! `{"family": "THM1_FIB", "r": 3}`.

use std::fmt;
use std::path::Path;

use rug::Rational;
use serde_json::{json, Value};

use crate::closed_forms::{theorem_lhs_spec, theorem_rhs, validate, TheoremParams};
use crate::numerics::{make_context, ClosedFormExpr, PrecisionContext, Real};
use crate::series::{classify, ConvergenceClass, SeriesSpec};
use crate::{Error, Result};

const BUILTIN: &str = include_str!("../../data/catalog.v1.json");

/// Tag marking series that diverge at their argument.
pub const DIVERGENT_TAG: &str = "divergent-formal";

/// Right-hand side of a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    Expr(ClosedFormExpr),
    Family(TheoremParams),
}

impl Rhs {
    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Real> {
        match self {
            Rhs::Expr(e) => e.eval(ctx),
            Rhs::Family(p) => theorem_rhs(p, ctx),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Rhs::Expr(e) => Value::String(e.to_string()),
            Rhs::Family(p) => p.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if v.get("family").is_some() {
            Ok(Rhs::Family(TheoremParams::from_json(v)?))
        } else {
            Ok(Rhs::Expr(ClosedFormExpr::from_json(v)?))
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Expr(e) => write!(f, "{e}"),
            Rhs::Family(p) => write!(f, "{p}"),
        }
    }
}

/// One concrete identity `lhs = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    pub id: String,
    /// Where the identity comes from, as free text.
    pub source: String,
    pub lhs: SeriesSpec,
    pub rhs: Rhs,
    pub validity: String,
    pub convergence: ConvergenceClass,
    pub tags: Vec<String>,
}

impl IdentityRecord {
    /// Builds a record, computing its convergence class.
    pub fn new(
        id: impl Into<String>,
        lhs: SeriesSpec,
        rhs: Rhs,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let convergence = classify(&lhs, ctx)?;
        Ok(IdentityRecord {
            id: id.into(),
            source: String::new(),
            lhs,
            rhs,
            validity: String::new(),
            convergence,
            tags: Vec::new(),
        })
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn params(&self) -> Option<&TheoremParams> {
        match &self.rhs {
            Rhs::Family(p) => Some(p),
            Rhs::Expr(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "source": self.source,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "validity": self.validity,
            "tags": self.tags,
        })
    }

    pub fn from_json(v: &Value, ctx: &PrecisionContext) -> Result<Self> {
        let text = |key: &str| v.get(key).and_then(Value::as_str).map(str::to_owned);
        let id = text("id").ok_or_else(|| Error::Catalog(format!("record without id: {v}")))?;
        let ctx_err = |e: Error| Error::Catalog(format!("{id}: {e}"));
        let lhs = v
            .get("lhs")
            .ok_or_else(|| Error::Catalog(format!("{id}: missing lhs")))
            .and_then(SeriesSpec::from_json)
            .map_err(ctx_err)?
            .with_label(id.clone());
        let rhs = v
            .get("rhs")
            .ok_or_else(|| Error::Catalog(format!("{id}: missing rhs")))
            .and_then(Rhs::from_json)
            .map_err(ctx_err)?;
        let tags = match v.get("tags") {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|t| {
                    t.as_str()
                        .map(str::to_owned)
                        .ok_or_else(|| Error::Catalog(format!("{id}: non-string tag")))
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::Catalog(format!("{id}: tags must be an array"))),
        };
        let mut record = IdentityRecord::new(id.clone(), lhs, rhs, ctx).map_err(ctx_err)?;
        record.source = text("source").or_else(|| text("paper_ref")).unwrap_or_default();
        record.validity = text("validity").unwrap_or_default();
        record.tags = tags;
        let divergent = record.convergence == ConvergenceClass::DivergentFormal;
        if divergent != record.has_tag(DIVERGENT_TAG) {
            return Err(Error::Catalog(format!(
                "{id}: tagged {}{DIVERGENT_TAG} but classified {}",
                if divergent { "not " } else { "" },
                record.convergence.name()
            )));
        }
        Ok(record)
    }
}

/// An immutable list of records with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    records: Vec<IdentityRecord>,
}

impl Catalog {
    pub fn new(records: Vec<IdentityRecord>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Catalog(format!("duplicate id {}", r.id)));
            }
        }
        Ok(Catalog { records })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IdentityRecord> {
        self.records.iter()
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn with_tag<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a IdentityRecord> + 'a {
        self.records.iter().filter(move |r| r.has_tag(tag))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": 1,
            "records": self.records.iter().map(IdentityRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

impl<'a> IntoIterator for &'a Catalog {
    type Item = &'a IdentityRecord;
    type IntoIter = std::slice::Iter<'a, IdentityRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

fn load_context() -> PrecisionContext {
    make_context(30, 1_000_000).expect("30 digits is a valid target")
}

/// Parses catalog JSON and checks ids and convergence tags.
pub fn load_catalog(text: &str) -> Result<Catalog> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Catalog(format!("invalid JSON: {e}")))?;
    let items = match &doc {
        Value::Array(items) => items,
        Value::Object(_) => {
            match doc.get("version").and_then(Value::as_u64) {
                Some(1) | None => {}
                Some(v) => return Err(Error::Catalog(format!("unsupported catalog version {v}"))),
            }
            doc.get("records")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Catalog("missing \"records\" array".into()))?
        }
        _ => return Err(Error::Catalog("catalog must be an array or object".into())),
    };
    let ctx = load_context();
    let records = items
        .iter()
        .map(|v| IdentityRecord::from_json(v, &ctx))
        .collect::<Result<Vec<_>>>()?;
    Catalog::new(records)
}

pub fn load_catalog_file(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
    load_catalog(&text)
}

/// The catalog shipped with the crate.
pub fn builtin_catalog() -> Catalog {
    load_catalog(BUILTIN).expect("builtin catalog is valid")
}

/// Arguments `z = (81 - t^2)/12` for `t = 0..=t_max` with `z > 0`.
///
/// These are the positive `z` for which `81 - 12z` is a perfect square,
/// in decreasing order.
pub fn scan_perfect_square(t_max: u64) -> Vec<Rational> {
    (0..=t_max.min(8))
        .map(|t| Rational::from((81 - (t * t) as i64, 12)))
        .filter(|z| *z > 0)
        .collect()
}

/// A fresh record for one member of a theorem family.
pub fn instantiate(params: &TheoremParams) -> Result<IdentityRecord> {
    validate(params)?;
    let lhs = theorem_lhs_spec(params)?.with_label(params.id());
    let mut record = IdentityRecord::new(params.id(), lhs, Rhs::Family(params.clone()), &load_context())?;
    if record.convergence == ConvergenceClass::DivergentFormal {
        return Err(Error::InvalidParams(format!("{params} gives a divergent series")));
    }
    record.source = format!("family {}", params.family);
    record.tags = vec![params.family.slug()];
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::Family;
    use crate::closed_forms::Kind;
    use crate::numerics::{matched_digits, parse_expr};
    use crate::series::Weight;

    #[test]
    fn builtin_counts() {
        let c = builtin_catalog();
        assert_eq!(c.len(), 79);
        let count = |tag| c.with_tag(tag).count();
        assert_eq!(count("positive-special"), 9);
        assert_eq!(count("alternating-special"), 9);
        assert_eq!(count("xy-block"), 23);
        assert_eq!(count("trig"), 7);
        assert_eq!(count("thm1-example"), 6);
        assert_eq!(count("thm3-example"), 8);
        assert_eq!(count("thm4-example"), 5);
        assert_eq!(count("thm6-example"), 6);
        let divergent: Vec<_> = c.with_tag(DIVERGENT_TAG).map(|r| r.id.as_str()).collect();
        assert_eq!(
            divergent,
            ["xy-27-neg8-a2", "xy-27-neg8-a1", "xy-27-neg8-a0", "thm1-luc-r1"]
        );
    }

    #[test]
    fn italy_rhs() {
        let ctx = make_context(40, 1000).unwrap();
        let r = builtin_catalog().get("eq-italy").cloned().unwrap();
        let v = r.rhs.eval(&ctx).unwrap();
        let want = parse_expr("1.041459586441935447550526").unwrap().eval(&ctx).unwrap();
        assert!(matched_digits(&v, &want, 40) >= 24);
    }

    #[test]
    fn irrational_arguments_stay_symbolic() {
        let c = builtin_catalog();
        for id in ["xy-8-neg1-a2", "xy-8-inv8-a0", "xy-27-neg8-a1"] {
            assert!(c.get(id).unwrap().lhs.z.as_rational().is_none(), "{id}");
        }
        assert_eq!(c.get("xy-8-neginv8-a2").unwrap().lhs.z.as_rational().unwrap(), &Rational::from((-64, 147)));
    }

    #[test]
    fn scan() {
        let s: Vec<String> = scan_perfect_square(8).iter().map(|r| r.to_string()).collect();
        assert_eq!(s, ["27/4", "20/3", "77/12", "6", "65/12", "14/3", "15/4", "8/3", "17/12"]);
        assert_eq!(scan_perfect_square(0), [Rational::from((27, 4))]);
        assert_eq!(scan_perfect_square(9), scan_perfect_square(8));
        assert_eq!(scan_perfect_square(1000).len(), 9);
    }

    #[test]
    fn instantiation() {
        let err = instantiate(&TheoremParams::r(Family::Thm1(Kind::Luc), 1)).unwrap_err();
        assert!(err.to_string().contains("r != 1"), "{err}");
        let r = instantiate(&TheoremParams::pq(Family::Thm7(Kind::Fib), -2, 5)).unwrap();
        assert_eq!(r.lhs.z.as_rational().unwrap(), &Rational::from((54, 25)));
        assert_eq!(r.lhs.weight, Weight::Fib(1));
        assert_eq!(r.id, "thm7-fib-pneg2-q5");
        let err = instantiate(&TheoremParams::nm(4, 5, 2)).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn load_checks() {
        let rec = |id: &str, z: &str, tags: &str| {
            format!(r#"{{"id":"{id}","lhs":{{"z":"{z}","a":2}},"rhs":"1","tags":{tags}}}"#)
        };
        assert!(load_catalog("[]").unwrap().is_empty());
        let dup = format!("[{},{}]", rec("x", "1", "[]"), rec("x", "2", "[]"));
        assert!(matches!(load_catalog(&dup), Err(Error::Catalog(m)) if m.contains("duplicate")));
        let untagged = format!("[{}]", rec("d", "-8", "[]"));
        assert!(load_catalog(&untagged).is_err());
        let wrong = format!("[{}]", rec("g", "1", r#"["divergent-formal"]"#));
        assert!(load_catalog(&wrong).is_err());
        let legacy = r#"[{"id":"f","paper_ref":"here","lhs":{"z":"1","a":1},"rhs":{"family":"THM1_FIB","r":3}}]"#;
        let c = load_catalog(legacy).unwrap();
        assert_eq!(c.get("f").unwrap().source, "here");
        assert!(c.get("f").unwrap().params().is_some());
        assert!(load_catalog(r#"{"version":2,"records":[]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = builtin_catalog();
        let again = load_catalog(&c.to_json().to_string()).unwrap();
        assert_eq!(again, c);
    }
}
