use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::analysis::{polarity, Polarity};
use super::formula::Formula;
use super::parse::parse;
use crate::error::{Error, Result};

/// Definition of a fixpoint connective `sharp name(p1, …, pn)` as the least
/// fixpoint in `x` of `body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpSignature {
    pub name: String,
    pub body: Formula,
    pub x: String,
    pub params: Vec<String>,
}

impl SharpSignature {
    /// Validates the connective: `x` positive in the body, `x` not a
    /// parameter, free variables covered, no nested connectives.
    pub fn new(
        name: impl Into<String>,
        x: impl Into<String>,
        params: Vec<String>,
        body: Formula,
    ) -> Result<Self> {
        let name = name.into();
        let x = x.into();
        let err = |msg: String| Error::Signature {
            name: name.clone(),
            msg,
        };
        if params.contains(&x) {
            return Err(err(format!(
                "`{x}` is both the fixpoint variable and a parameter"
            )));
        }
        let distinct: BTreeSet<_> = params.iter().collect();
        if distinct.len() != params.len() {
            return Err(err("repeated parameter".into()));
        }
        if body.contains_sharp() {
            return Err(err("body must be a plain modal formula".into()));
        }
        for v in body.free_vars() {
            if v != x && !params.contains(&v) {
                return Err(err(format!(
                    "free variable `{v}` is neither `{x}` nor a parameter"
                )));
            }
        }
        match polarity(&body, &x, &Signatures::default()) {
            Polarity::Positive | Polarity::Absent => {}
            _ => return Err(err(format!("`{x}` must occur only positively"))),
        }
        Ok(SharpSignature {
            name,
            body: body.canonicalize(),
            x,
            params,
        })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// `sharp name(p1, …, pn)` applied to its own parameters.
    pub fn applied(&self) -> Formula {
        Formula::Sharp(
            self.name.clone(),
            self.params
                .iter()
                .map(|p| Formula::var(p.clone()))
                .collect(),
        )
    }

    /// `γ(φ, ψ1, …, ψn)`: the body with `x` and the parameters replaced.
    pub fn instantiate(&self, x_by: &Formula, args: &[Formula]) -> Formula {
        let mut map: BTreeMap<String, Formula> = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        map.insert(self.x.clone(), x_by.clone());
        self.body.substitute(&map)
    }
}

impl fmt::Display for SharpSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}; {}) := {}",
            self.name,
            self.x,
            self.params.join(", "),
            self.body
        )
    }
}

/// Table of connectives in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signatures {
    sigs: Vec<SharpSignature>,
}

impl Signatures {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&SharpSignature> {
        self.sigs.iter().find(|s| s.name == name)
    }

    pub fn insert(&mut self, sig: SharpSignature) -> Result<()> {
        if self.get(&sig.name).is_some() {
            return Err(Error::Signature {
                name: sig.name,
                msg: "defined twice".into(),
            });
        }
        self.sigs.push(sig);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &SharpSignature> {
        self.sigs.iter()
    }

    pub fn len(&self) -> usize {
        self.sigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigs.is_empty()
    }

    /// Reads a signature file: one `name(x; p1, …, pn) := formula` per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn load(text: &str) -> Result<Self> {
        let mut table = Signatures::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let sig = parse_signature_line(line, &table).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos,
                    msg: format!("line {}: {msg}", lineno + 1),
                },
                other => other,
            })?;
            table.insert(sig)?;
        }
        Ok(table)
    }

    pub fn render(&self) -> String {
        self.sigs.iter().map(|s| format!("{s}\n")).collect()
    }
}

fn parse_signature_line(line: &str, table: &Signatures) -> Result<SharpSignature> {
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let def = line.find(":=").ok_or_else(|| syntax(0, "expected `:=`"))?;
    let (head, body_text) = (line[..def].trim(), &line[def + 2..]);
    let open = head.find('(').ok_or_else(|| syntax(0, "expected `(`"))?;
    if !head.ends_with(')') {
        return Err(syntax(head.len(), "expected `)`"));
    }
    let name = head[..open].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(syntax(0, "invalid connective name"));
    }
    let inner = &head[open + 1..head.len() - 1];
    let (x, params) = match inner.find(';') {
        Some(semi) => (inner[..semi].trim(), inner[semi + 1..].trim()),
        None => (inner.trim(), ""),
    };
    if x.is_empty() {
        return Err(syntax(open + 1, "missing fixpoint variable"));
    }
    let params: Vec<String> = if params.is_empty() {
        Vec::new()
    } else {
        params.split(',').map(|p| p.trim().to_string()).collect()
    };
    if params.iter().any(|p| p.is_empty()) {
        return Err(syntax(open + 1, "empty parameter name"));
    }
    let body = parse(body_text, table).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos: pos + def + 2,
            msg,
        },
        other => other,
    })?;
    SharpSignature::new(name, x, params, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_signature_file() {
        let sigs = Signatures::load(
            "# reachability\n\
             delta(x; p) := p | <a>x\n\
             \n\
             theta(x; p, q) := p | (q & <a>x)\n",
        )
        .unwrap();
        assert_eq!(sigs.len(), 2);
        let theta = sigs.get("theta").unwrap();
        assert_eq!(theta.params, vec!["p", "q"]);
        assert_eq!(theta.x, "x");
        assert_eq!(theta.to_string(), "theta(x; p, q) := p | (q & <a>x)");
    }

    #[test]
    fn rejects_negative_occurrence() {
        let err = Signatures::load("bad(x; p) := p | ~<a>x").unwrap_err();
        assert!(matches!(err, Error::Signature { .. }), "{err}");
    }

    #[test]
    fn rejects_stray_variable() {
        assert!(Signatures::load("bad(x; p) := q | <a>x").is_err());
        assert!(Signatures::load("bad(x; x) := <a>x").is_err());
    }

    #[test]
    fn rejects_nested_connective() {
        let err = Signatures::load("d(x; p) := p | <a>x\ne(x; p) := sharp d(x)").unwrap_err();
        assert!(matches!(err, Error::Signature { .. }));
    }

    #[test]
    fn parameterless_connective() {
        let sigs = Signatures::load("inf(x) := <a>x").unwrap();
        let s = sigs.get("inf").unwrap();
        assert!(s.params.is_empty());
        assert_eq!(s.applied().to_string(), "sharp inf()");
    }
}
