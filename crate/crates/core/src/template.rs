//! Integer-indexed record templates.
//!
//! Catalog records may describe a whole series (`SO({k})` for `k >= 5`).
//! Names carry `{expr}` placeholders and numeric fields may be integer
//! expressions in the index variable, evaluated with `evalexpr`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use evalexpr::{ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use regex::Regex;
use serde::Deserialize;

/// Upper bound on index values tried when matching a name.
const MAX_INDEX: i64 = 100_000;

/// A literal integer or an expression in the index variable.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum IntExpr {
    Lit(i64),
    Expr(String),
}

impl Default for IntExpr {
    fn default() -> Self {
        IntExpr::Lit(0)
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Lit(v) => write!(f, "{v}"),
            IntExpr::Expr(e) => write!(f, "{e}"),
        }
    }
}

/// Value of the index variable for one instantiation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding(Option<(String, i64)>);

impl Binding {
    pub fn none() -> Self {
        Binding(None)
    }

    pub fn new(var: &str, value: i64) -> Self {
        Binding(Some((var.to_owned(), value)))
    }

    pub fn value(&self) -> Option<i64> {
        self.0.as_ref().map(|(_, v)| *v)
    }

    fn context(&self) -> Result<HashMapContext, String> {
        let mut ctx = HashMapContext::new();
        if let Some((var, value)) = &self.0 {
            ctx.set_value(var.clone(), Value::from_int(*value))
                .map_err(|e| e.to_string())?;
        }
        Ok(ctx)
    }
}

impl IntExpr {
    pub fn eval(&self, b: &Binding) -> Result<i64, String> {
        match self {
            IntExpr::Lit(v) => Ok(*v),
            IntExpr::Expr(e) => eval_int(e, b),
        }
    }
}

// Catalog lookups re-evaluate the same few expressions and patterns many
// times; parse each once.
static TREES: LazyLock<Mutex<HashMap<String, Node<DefaultNumericTypes>>>> = LazyLock::new(Default::default);
static PATTERNS: LazyLock<Mutex<HashMap<String, Regex>>> = LazyLock::new(Default::default);

fn tree(expr: &str) -> Result<Node<DefaultNumericTypes>, String> {
    let mut cache = TREES.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = cache.get(expr) {
        return Ok(t.clone());
    }
    let t = evalexpr::build_operator_tree(expr).map_err(|e| format!("cannot parse `{expr}`: {e}"))?;
    cache.insert(expr.to_owned(), t.clone());
    Ok(t)
}

pub fn eval_int(expr: &str, b: &Binding) -> Result<i64, String> {
    tree(expr)?
        .eval_int_with_context(&b.context()?)
        .map_err(|e| format!("cannot evaluate `{expr}`: {e}"))
}

pub fn eval_bool(expr: &str, b: &Binding) -> Result<bool, String> {
    tree(expr)?
        .eval_boolean_with_context(&b.context()?)
        .map_err(|e| format!("cannot evaluate `{expr}`: {e}"))
}

enum Segment<'a> {
    Lit(&'a str),
    Expr(&'a str),
}

fn segments(pattern: &str) -> Result<Vec<Segment<'_>>, String> {
    let mut out = Vec::new();
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        let close = rest[open..]
            .find('}')
            .map(|c| open + c)
            .ok_or_else(|| format!("unclosed `{{` in `{pattern}`"))?;
        if open > 0 {
            out.push(Segment::Lit(&rest[..open]));
        }
        out.push(Segment::Expr(&rest[open + 1..close]));
        rest = &rest[close + 1..];
    }
    if !rest.is_empty() {
        out.push(Segment::Lit(rest));
    }
    Ok(out)
}

/// Substitutes every `{expr}` placeholder.
pub fn render(pattern: &str, b: &Binding) -> Result<String, String> {
    let mut s = String::new();
    for seg in segments(pattern)? {
        match seg {
            Segment::Lit(l) => s.push_str(l),
            Segment::Expr(e) => s.push_str(&eval_int(e, b)?.to_string()),
        }
    }
    Ok(s)
}

/// Normalises ASCII spellings of the central dot (`Sp(2).Sp(1)`,
/// `Sp(2)*Sp(1)`) to `Sp(2)·Sp(1)`.
pub fn normalize_name(name: &str) -> String {
    name.trim().replace(").", ")·").replace(")*", ")·")
}

/// Which index values a template admits.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Indexing {
    pub var: String,
    #[serde(default)]
    pub min: i64,
    pub max: Option<i64>,
    pub when: Option<String>,
}

impl Indexing {
    pub fn admits(&self, v: i64) -> Result<bool, String> {
        if v < self.min || self.max.is_some_and(|m| v > m) {
            return Ok(false);
        }
        match &self.when {
            Some(w) => eval_bool(w, &Binding::new(&self.var, v)),
            None => Ok(true),
        }
    }

    /// The first `count` admissible index values.
    pub fn first_values(&self, count: usize) -> Result<Vec<i64>, String> {
        let mut out = Vec::new();
        let mut v = self.min;
        let hi = self.max.unwrap_or(self.min + 64);
        while out.len() < count && v <= hi {
            if self.admits(v)? {
                out.push(v);
            }
            v += 1;
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} >= {}", self.var, self.min);
        if let Some(m) = self.max {
            s.push_str(&format!(", {} <= {m}", self.var));
        }
        if let Some(w) = &self.when {
            s.push_str(&format!(", {w}"));
        }
        s
    }
}

/// Matches `name` against a (possibly indexed) pattern and returns the
/// binding that renders the pattern to exactly `name`.
pub fn match_name(pattern: &str, index: Option<&Indexing>, name: &str) -> Result<Option<Binding>, String> {
    let Some(ix) = index else {
        return Ok((pattern == name).then(Binding::none));
    };
    let segs = segments(pattern)?;
    let mut re = String::from("^");
    for seg in &segs {
        match seg {
            Segment::Lit(l) => re.push_str(&regex::escape(l)),
            Segment::Expr(_) => re.push_str(r"(-?\d+)"),
        }
    }
    re.push('$');
    let re = {
        let mut cache = PATTERNS.lock().unwrap_or_else(|e| e.into_inner());
        match cache.get(&re) {
            Some(r) => r.clone(),
            None => {
                let compiled = Regex::new(&re).map_err(|e| e.to_string())?;
                cache.insert(re, compiled.clone());
                compiled
            }
        }
    };
    let Some(caps) = re.captures(name) else {
        return Ok(None);
    };
    let captured: Vec<i64> = caps
        .iter()
        .skip(1)
        .flatten()
        .filter_map(|m| m.as_str().parse().ok())
        .collect();
    let exprs: Vec<&str> = segs
        .iter()
        .filter_map(|s| match s {
            Segment::Expr(e) => Some(e.trim()),
            Segment::Lit(_) => None,
        })
        .collect();

    // direct read-off when the bare variable appears as a placeholder
    let candidates: Vec<i64> = match exprs.iter().position(|e| *e == ix.var) {
        Some(p) => captured.get(p).copied().into_iter().collect(),
        None => {
            let hi = captured.iter().map(|c| c.abs()).max().unwrap_or(0).min(MAX_INDEX);
            (ix.min..=hi.max(ix.min)).collect()
        }
    };
    for v in candidates {
        if !ix.admits(v)? {
            continue;
        }
        let b = Binding::new(&ix.var, v);
        if render(pattern, &b)? == name {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(var: &str, min: i64) -> Indexing {
        Indexing {
            var: var.into(),
            min,
            max: None,
            when: None,
        }
    }

    #[test]
    fn renders_placeholders() {
        let b = Binding::new("n", 2);
        assert_eq!(render("S{4*n+3}:Sp({n+1})·Sp(1)", &b).unwrap(), "S11:Sp(3)·Sp(1)");
        assert_eq!(IntExpr::Expr("(n+1) % 2".into()).eval(&b).unwrap(), 1);
        assert_eq!(IntExpr::Expr("n*(n-1)/2".into()).eval(&Binding::new("n", 5)).unwrap(), 10);
    }

    #[test]
    fn matches_names() {
        let i = ix("n", 0);
        let b = match_name("S{4*n+3}:Sp({n+1})·Sp(1)", Some(&i), "S11:Sp(3)·Sp(1)").unwrap();
        assert_eq!(b.unwrap().value(), Some(2));
        assert!(match_name("S{4*n+3}:Sp({n+1})·Sp(1)", Some(&i), "S11:Sp(2)·Sp(1)").unwrap().is_none());
        assert!(match_name("S{4*n+3}:Sp({n+1})", Some(&i), "S11:Sp(3)·Sp(1)").unwrap().is_none());

        let k5 = ix("k", 5);
        assert_eq!(match_name("SO({k})", Some(&k5), "SO(7)").unwrap().unwrap().value(), Some(7));
        assert!(match_name("SO({k})", Some(&k5), "SO(4)").unwrap().is_none());
        assert!(match_name("G2", None, "G2").unwrap().is_some());
    }

    #[test]
    fn respects_when_and_max() {
        let even = Indexing {
            var: "k".into(),
            min: 6,
            max: Some(10),
            when: Some("k % 2 == 0".into()),
        };
        assert!(match_name("SO({k})", Some(&even), "SO(8)").unwrap().is_some());
        assert!(match_name("SO({k})", Some(&even), "SO(7)").unwrap().is_none());
        assert!(match_name("SO({k})", Some(&even), "SO(12)").unwrap().is_none());
        assert_eq!(even.first_values(9).unwrap(), vec![6, 8, 10]);
    }

    #[test]
    fn normalises_dots() {
        assert_eq!(normalize_name("S11:Sp(3).Sp(1)"), "S11:Sp(3)·Sp(1)");
        assert_eq!(normalize_name("Sp(3)*U(1)"), "Sp(3)·U(1)");
    }
}
