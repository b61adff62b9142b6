//! The axiom systems `K_ff` (Kozen–Park prefix axiom and least rule) and
//! `K⁺_ff` (one axiom and one rule per variable of the simulated system).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eqsystem::{Representation, Simulation, SystemKind};
use crate::error::{Error, Result};
use crate::syntax::{parse, Formula, SharpSignature, Signatures};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", side(&self.lhs), side(&self.rhs))
    }
}

fn side(f: &Formula) -> String {
    match f {
        Formula::Or(_) | Formula::And(_) => format!("({f})"),
        _ => f.to_string(),
    }
}

/// Axiom `lhs -> rhs`, schematic in its free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Axiom {
    pub fn implication(&self) -> Implication {
        Implication {
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }
}

/// Rule `premises / conclusion`, read as a quasi-equation and closed under
/// uniform substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Implication>,
    pub conclusion: Implication,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemTag {
    Kff,
    Kffplus,
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemTag::Kff => "kff",
            SystemTag::Kffplus => "kffplus",
        })
    }
}

/// Axioms and rules generated for one connective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSet {
    pub system: SystemTag,
    pub connective: String,
    pub axioms: Vec<Axiom>,
    pub rules: Vec<Rule>,
    /// Simulated system the `K⁺_ff` part was read off from.
    pub provenance: Option<String>,
}

impl AxiomSet {
    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }
}

/// `χ_z` per system variable and the conjunctions `χ♯_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiMap {
    pub chi: BTreeMap<String, Formula>,
    pub sharp: Formula,
    pub x: String,
}

impl ChiMap {
    pub fn new(rep: &Representation, sig: &SharpSignature) -> Self {
        ChiMap {
            chi: rep.chi(),
            sharp: sig.applied(),
            x: sig.x.clone(),
        }
    }

    /// `⋀_{z ∈ S} χ_z[♯(p)/x]`.
    pub fn chi_sharp(&self, s: &BTreeSet<String>) -> Formula {
        Formula::and(
            s.iter()
                .map(|z| self.chi[z].substitute_one(&self.x, &self.sharp)),
        )
    }
}

fn fresh_var(base: &str, taken: &BTreeSet<String>) -> String {
    let mut v = base.to_string();
    while taken.contains(&v) {
        v.push('\'');
    }
    v
}

/// `sharp-prefix: γ(♯(p), p) -> ♯(p)` and
/// `sharp-least: γ(y, p) -> y / ♯(p) -> y`.
pub fn kozen_park(sig: &SharpSignature) -> AxiomSet {
    let applied = sig.applied();
    let params: Vec<Formula> = sig.params.iter().map(Formula::var).collect();
    let taken: BTreeSet<String> = sig.params.iter().cloned().collect();
    let y = Formula::var(fresh_var("y", &taken));
    AxiomSet {
        system: SystemTag::Kff,
        connective: sig.name.clone(),
        axioms: vec![Axiom {
            name: "sharp-prefix".into(),
            lhs: sig.instantiate(&applied, &params),
            rhs: applied.clone(),
        }],
        rules: vec![Rule {
            name: "sharp-least".into(),
            premises: vec![Implication {
                lhs: sig.instantiate(&y, &params),
                rhs: y.clone(),
            }],
            conclusion: Implication {
                lhs: applied,
                rhs: y,
            },
        }],
        provenance: None,
    }
}

/// `A_S: σ_S[χ♯/y] -> χ♯_S` and `R_S: {σ_Q -> y_Q | Q} / χ♯_S -> y_S` for
/// every variable `y_S` of the simulated system, after the Kozen–Park pair
/// unless `lean`.
pub fn plus_axioms(
    sig: &SharpSignature,
    tplus: &Simulation,
    chi: &ChiMap,
    lean: bool,
) -> Result<AxiomSet> {
    if tplus.system.kind() != SystemKind::Simple {
        return Err(Error::SystemKind("simple"));
    }
    let mut out = if lean {
        AxiomSet {
            system: SystemTag::Kffplus,
            connective: sig.name.clone(),
            axioms: Vec::new(),
            rules: Vec::new(),
            provenance: None,
        }
    } else {
        let mut kp = kozen_park(sig);
        kp.system = SystemTag::Kffplus;
        kp
    };
    let subst: BTreeMap<String, Formula> = tplus
        .subsets
        .iter()
        .map(|(y, s)| (y.clone(), chi.chi_sharp(s)))
        .collect();
    let premises: Vec<Implication> = tplus
        .system
        .vars
        .iter()
        .map(|y| Implication {
            lhs: tplus.system.terms[y].clone(),
            rhs: Formula::var(y),
        })
        .collect();
    for (y, s) in &tplus.subsets {
        let tag = y.trim_start_matches('y').trim_start_matches('_');
        out.axioms.push(Axiom {
            name: format!("A_{tag}"),
            lhs: tplus.system.terms[y].substitute(&subst),
            rhs: chi.chi_sharp(s),
        });
        out.rules.push(Rule {
            name: format!("R_{tag}"),
            premises: premises.clone(),
            conclusion: Implication {
                lhs: chi.chi_sharp(s),
                rhs: Formula::var(y),
            },
        });
    }
    out.provenance = Some(tplus.system.render_text());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocFormat {
    Text,
    Json,
}

impl std::str::FromStr for DocFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(DocFormat::Text),
            "json" | "machine" => Ok(DocFormat::Json),
            other => Err(Error::Document(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ImplDoc {
    lhs: String,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct AxiomDoc {
    name: String,
    lhs: String,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct RuleDoc {
    name: String,
    premises: Vec<ImplDoc>,
    conclusion: ImplDoc,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    system: SystemTag,
    connective: String,
    axioms: Vec<AxiomDoc>,
    rules: Vec<RuleDoc>,
}

#[derive(Serialize, Deserialize)]
struct AxiomsDoc {
    entries: Vec<EntryDoc>,
}

fn impl_doc(i: &Implication) -> ImplDoc {
    ImplDoc {
        lhs: i.lhs.to_string(),
        rhs: i.rhs.to_string(),
    }
}

pub fn render_axioms(sets: &[AxiomSet], sigs: &Signatures, format: DocFormat) -> String {
    match format {
        DocFormat::Json => {
            let doc = AxiomsDoc {
                entries: sets
                    .iter()
                    .map(|s| EntryDoc {
                        system: s.system,
                        connective: s.connective.clone(),
                        axioms: s
                            .axioms
                            .iter()
                            .map(|a| AxiomDoc {
                                name: a.name.clone(),
                                lhs: a.lhs.to_string(),
                                rhs: a.rhs.to_string(),
                            })
                            .collect(),
                        rules: s
                            .rules
                            .iter()
                            .map(|r| RuleDoc {
                                name: r.name.clone(),
                                premises: r.premises.iter().map(impl_doc).collect(),
                                conclusion: impl_doc(&r.conclusion),
                            })
                            .collect(),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("axiom document serializes") + "\n"
        }
        DocFormat::Text => {
            let mut out = String::new();
            out.push_str("# axioms are implications valid at every state;\n");
            out.push_str("# a rule holds on a model when every substitution instance that\n");
            out.push_str("# makes all premises valid also makes the conclusion valid\n");
            for s in sets {
                out.push_str(&format!("\n[{}] {}\n", s.system, s.connective));
                if let Some(sig) = sigs.get(&s.connective) {
                    out.push_str(&format!("# {sig}\n"));
                }
                for a in &s.axioms {
                    out.push_str(&format!("{}: {}\n", a.name, a.implication()));
                }
                for r in &s.rules {
                    out.push_str(&format!("{}:\n", r.name));
                    for p in &r.premises {
                        out.push_str(&format!("    {p}\n"));
                    }
                    out.push_str(&format!("  / {}\n", r.conclusion));
                }
            }
            out
        }
    }
}

/// Reads back the machine form of [`render_axioms`].
pub fn load_axioms(text: &str, sigs: &Signatures) -> Result<Vec<AxiomSet>> {
    let doc: AxiomsDoc = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let imp = |d: &ImplDoc| -> Result<Implication> {
        Ok(Implication {
            lhs: parse(&d.lhs, sigs)?,
            rhs: parse(&d.rhs, sigs)?,
        })
    };
    doc.entries
        .iter()
        .map(|e| {
            Ok(AxiomSet {
                system: e.system,
                connective: e.connective.clone(),
                axioms: e
                    .axioms
                    .iter()
                    .map(|a| {
                        Ok(Axiom {
                            name: a.name.clone(),
                            lhs: parse(&a.lhs, sigs)?,
                            rhs: parse(&a.rhs, sigs)?,
                        })
                    })
                    .collect::<Result<_>>()?,
                rules: e
                    .rules
                    .iter()
                    .map(|r| {
                        Ok(Rule {
                            name: r.name.clone(),
                            premises: r.premises.iter().map(imp).collect::<Result<_>>()?,
                            conclusion: imp(&r.conclusion)?,
                        })
                    })
                    .collect::<Result<_>>()?,
                provenance: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> Signatures {
        Signatures::load("delta(x; p) := p | <a>x").unwrap()
    }

    #[test]
    fn kozen_park_for_reachability() {
        let sigs = delta();
        let kp = kozen_park(sigs.get("delta").unwrap());
        assert_eq!(kp.axioms.len(), 1);
        assert_eq!(kp.rules.len(), 1);
        assert_eq!(
            kp.axioms[0].implication().to_string(),
            "(p | <a>sharp delta(p)) -> sharp delta(p)"
        );
        assert_eq!(kp.rules[0].premises[0].to_string(), "(p | <a>y) -> y");
        assert_eq!(kp.rules[0].conclusion.to_string(), "sharp delta(p) -> y");
        let text = render_axioms(&[kp], &sigs, DocFormat::Text);
        assert!(
            text.contains("sharp-prefix: (p | <a>sharp delta(p)) -> sharp delta(p)\n"),
            "{text}"
        );
    }

    #[test]
    fn rule_variable_avoids_parameters() {
        let sigs = Signatures::load("d(x; y) := y | <a>x").unwrap();
        let kp = kozen_park(sigs.get("d").unwrap());
        assert_eq!(kp.rules[0].conclusion.rhs, Formula::var("y'"));
    }

    #[test]
    fn machine_form_round_trips() {
        let sigs = delta();
        let sets = vec![kozen_park(sigs.get("delta").unwrap())];
        let json = render_axioms(&sets, &sigs, DocFormat::Json);
        let back = load_axioms(&json, &sigs).unwrap();
        assert_eq!(back, sets);
    }

    #[test]
    fn empty_document() {
        let out = render_axioms(&[], &Signatures::new(), DocFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["entries"], serde_json::json!([]));
        assert!(render_axioms(&[], &Signatures::new(), DocFormat::Text).starts_with("# "));
        assert!("xml".parse::<DocFormat>().is_err());
    }
}
