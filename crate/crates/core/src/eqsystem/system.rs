use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::semisimple::parse_semisimple;
use crate::syntax::{parse, Formula, Signatures};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    General,
    SemiSimple,
    Simple,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::General => "general",
            SystemKind::SemiSimple => "semi-simple",
            SystemKind::Simple => "simple",
        })
    }
}

/// System of equations `z = t_z`, optionally pointed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalSystem {
    pub vars: Vec<String>,
    pub terms: BTreeMap<String, Formula>,
    pub point: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    vars: Vec<String>,
    terms: BTreeMap<String, String>,
    point: Option<String>,
    kind: SystemKind,
}

impl ModalSystem {
    pub fn new(equations: Vec<(String, Formula)>, point: Option<String>) -> Result<Self> {
        let mut vars = Vec::new();
        let mut terms = BTreeMap::new();
        for (z, t) in equations {
            if terms.insert(z.clone(), t).is_some() {
                return Err(Error::System(format!("`{z}` has two equations")));
            }
            vars.push(z);
        }
        if let Some(p) = &point {
            if !terms.contains_key(p) {
                return Err(Error::System(format!("point `{p}` is not a variable")));
            }
        }
        Ok(ModalSystem { vars, terms, point })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.vars.iter().cloned().collect()
    }

    pub fn term(&self, z: &str) -> Option<&Formula> {
        self.terms.get(z)
    }

    pub fn index_of(&self, z: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == z)
    }

    /// Terms in variable order.
    pub fn term_list(&self) -> Vec<Formula> {
        self.vars.iter().map(|z| self.terms[z].clone()).collect()
    }

    /// Free variables of the terms that are not system variables.
    pub fn parameters(&self) -> BTreeSet<String> {
        let zs = self.var_set();
        self.terms
            .values()
            .flat_map(Formula::free_vars)
            .filter(|v| !zs.contains(v))
            .collect()
    }

    pub fn kind(&self) -> SystemKind {
        classify_system(self)
    }

    /// One `z = t` per line, the point marked with `*`.
    pub fn render_text(&self) -> String {
        self.vars
            .iter()
            .map(|z| {
                let star = if self.point.as_deref() == Some(z) {
                    "*"
                } else {
                    ""
                };
                format!("{star}{z} = {}\n", self.terms[z])
            })
            .collect()
    }

    pub fn parse_text(text: &str, sigs: &Signatures) -> Result<Self> {
        let mut eqs = Vec::new();
        let mut point = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| {
                Error::System(format!("line {}: expected `z = term`", lineno + 1))
            })?;
            let mut z = lhs.trim();
            if let Some(rest) = z.strip_prefix('*') {
                z = rest.trim();
                point = Some(z.to_string());
            }
            if z.is_empty() {
                return Err(Error::System(format!(
                    "line {}: missing variable",
                    lineno + 1
                )));
            }
            eqs.push((z.to_string(), parse(rhs, sigs)?));
        }
        ModalSystem::new(eqs, point)
    }

    pub fn to_json(&self) -> String {
        let doc = SystemDoc {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(z, t)| (z.clone(), t.to_string()))
                .collect(),
            point: self.point.clone(),
            kind: self.kind(),
        };
        serde_json::to_string_pretty(&doc).expect("system document serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("valid json")
    }

    pub fn from_json(text: &str, sigs: &Signatures) -> Result<Self> {
        let doc: SystemDoc =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let mut eqs = Vec::new();
        for z in &doc.vars {
            let t = doc
                .terms
                .get(z)
                .ok_or_else(|| Error::System(format!("no term for `{z}`")))?;
            eqs.push((z.clone(), parse(t, sigs)?));
        }
        if doc.terms.len() != doc.vars.len() {
            return Err(Error::System("term for an undeclared variable".into()));
        }
        ModalSystem::new(eqs, doc.point)
    }
}

impl fmt::Display for ModalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// Strongest of simple, semi-simple and general that applies.
pub fn classify_system(t: &ModalSystem) -> SystemKind {
    let zs = t.var_set();
    let mut kind = SystemKind::Simple;
    for term in t.terms.values() {
        match parse_semisimple(term, &zs) {
            Err(_) => return SystemKind::General,
            Ok(ss) => {
                let simple = ss
                    .iter()
                    .flat_map(|sc| sc.covers.values().flatten())
                    .all(|conj| conj.0.len() <= 1);
                if !simple {
                    kind = SystemKind::SemiSimple;
                }
            }
        }
    }
    kind
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> ModalSystem {
        ModalSystem::parse_text(text, &Signatures::new()).unwrap()
    }

    #[test]
    fn kinds() {
        let t = sys(
            "*z_g = (p & nab a {}) | (p & nab a {z_g}) | (~p & nab a {T, z_g & z_4})\n\
                     z_4 = nab a {T, z_g}",
        );
        assert_eq!(t.kind(), SystemKind::SemiSimple);
        assert_eq!(sys("z = <a>z").kind(), SystemKind::General);
        assert_eq!(sys("y = nab a {T, y} | p").kind(), SystemKind::Simple);
        assert_eq!(
            sys("z = y & nab a {z}\ny = nab a {}").kind(),
            SystemKind::General
        );
    }

    #[test]
    fn text_and_json_round_trip() {
        let t = sys("*z_g = nab a {T, z_g & z_4}\nz_4 = nab a {T, z_g}\n");
        assert_eq!(t.point.as_deref(), Some("z_g"));
        assert_eq!(
            t.render_text(),
            "*z_g = nab a {T, z_4 & z_g}\nz_4 = nab a {T, z_g}\n"
        );
        assert_eq!(
            ModalSystem::from_json(&t.to_json(), &Signatures::new()).unwrap(),
            t
        );
        assert_eq!(t.to_json_value()["kind"], "semi-simple");
    }

    #[test]
    fn duplicate_equation() {
        assert!(ModalSystem::parse_text("z = T\nz = F", &Signatures::new()).is_err());
    }
}
