//! Syntactic classes on which the Kozen–Park axiomatization is already
//! complete: untied ∇-formulas and harmless box/diamond formulas.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normal::to_nabla;
use crate::syntax::{Action, Formula};

fn mentions(f: &Formula, x: &str) -> bool {
    f.free_vars().contains(x)
}

/// Recognizer for `φ ::= x | ⊤ | φ ∨ φ | ψ ∧ ⋀_{j ∈ J} ∇_j Φ_j` with `x`
/// absent from `ψ`, pairwise distinct `j` and untied members of every `Φ_j`.
pub fn is_untied(phi: &Formula, x: &str) -> Result<bool> {
    if !phi.is_nabla_fragment() {
        return Err(Error::Fragment("cover-modality fragment"));
    }
    let mut memo = BTreeMap::new();
    Ok(untied(phi, x, &mut memo))
}

fn untied(f: &Formula, x: &str, memo: &mut BTreeMap<Formula, bool>) -> bool {
    if let Some(v) = memo.get(f) {
        return *v;
    }
    let v = if !mentions(f, x) {
        true
    } else {
        match f {
            Formula::Var(_) => true,
            Formula::Or(fs) => fs.iter().all(|g| untied(g, x, memo)),
            Formula::Nabla(_, set) => set.iter().all(|g| untied(g, x, memo)),
            Formula::And(fs) => {
                let mut seen = BTreeSet::new();
                fs.iter().filter(|g| mentions(g, x)).all(|g| match g {
                    Formula::Nabla(a, set) => {
                        seen.insert(a.clone()) && set.iter().all(|h| untied(h, x, memo))
                    }
                    _ => false,
                })
            }
            _ => false,
        }
    };
    memo.insert(f.clone(), v);
    v
}

/// Recognizer for `φ ::= x | ⊤ | φ ∨ φ | ψ ∧ φ | ◇_i φ | □_i φ | ⋀_{j ∈ J} φ_j`
/// where each `φ_j` of the harmless conjunction is a single `□_j χ` or a
/// conjunction of `◇_j χ_ℓ`, one action per `j`.
pub fn is_harmless(phi: &Formula, x: &str) -> bool {
    harmless(phi, x)
}

fn harmless(f: &Formula, x: &str) -> bool {
    if !mentions(f, x) {
        return true;
    }
    match f {
        Formula::Var(_) => true,
        Formula::Or(fs) => fs.iter().all(|g| harmless(g, x)),
        Formula::Diamond(_, g) | Formula::Boxed(_, g) => harmless(g, x),
        Formula::And(fs) => {
            let tied: Vec<&Formula> = fs.iter().filter(|g| mentions(g, x)).collect();
            match tied.as_slice() {
                [single] => harmless(single, x),
                _ => harmless_conjunction(&tied)
                    .map(|groups| {
                        groups
                            .values()
                            .flat_map(|g| g.bodies())
                            .all(|b| harmless(b, x))
                    })
                    .unwrap_or(false),
            }
        }
        _ => false,
    }
}

enum Group<'a> {
    Boxed(&'a Formula),
    Diamonds(Vec<&'a Formula>),
}

impl<'a> Group<'a> {
    fn bodies(&self) -> Vec<&'a Formula> {
        match self {
            Group::Boxed(b) => vec![*b],
            Group::Diamonds(bs) => bs.clone(),
        }
    }
}

fn harmless_conjunction<'a>(conjuncts: &[&'a Formula]) -> Option<BTreeMap<Action, Group<'a>>> {
    let mut groups: BTreeMap<Action, Group<'a>> = BTreeMap::new();
    for c in conjuncts {
        match c {
            Formula::Boxed(a, body) => {
                if groups.insert(a.clone(), Group::Boxed(body)).is_some() {
                    return None;
                }
            }
            Formula::Diamond(a, body) => match groups
                .entry(a.clone())
                .or_insert(Group::Diamonds(Vec::new()))
            {
                Group::Diamonds(bs) => bs.push(body),
                Group::Boxed(_) => return None,
            },
            _ => return None,
        }
    }
    Some(groups)
}

#[derive(Clone)]
enum Alt {
    X,
    Conj(Formula, BTreeMap<Action, BTreeSet<Formula>>),
}

fn alt_formula(alt: &Alt, x: &str) -> Formula {
    match alt {
        Alt::X => Formula::var(x),
        Alt::Conj(psi, covers) => Formula::and(
            std::iter::once(psi.clone())
                .filter(|p| *p != Formula::Top)
                .chain(
                    covers
                        .iter()
                        .map(|(a, s)| Formula::nabla(a, s.iter().cloned())),
                ),
        ),
    }
}

fn alts_formula(alts: &[Alt], x: &str) -> Formula {
    Formula::or(alts.iter().map(|a| alt_formula(a, x)))
}

/// Untied ∇-formula equivalent to a harmless formula.
///
/// A conjunct `ψ ∧ x` has no untied equivalent, since the grammar only lets
/// `x` occur unguarded as a disjunct; such inputs are rejected.
pub fn harmless_to_untied(phi: &Formula, x: &str) -> Result<Formula> {
    if !is_harmless(phi, x) {
        return Err(Error::NotHarmless(x.to_string()));
    }
    let alts = translate(phi, x)?;
    Ok(alts_formula(&alts, x))
}

fn translate(f: &Formula, x: &str) -> Result<Vec<Alt>> {
    if !mentions(f, x) {
        return Ok(vec![Alt::Conj(to_nabla(f)?, BTreeMap::new())]);
    }
    Ok(match f {
        Formula::Var(_) => vec![Alt::X],
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(translate(g, x)?);
            }
            out
        }
        Formula::Diamond(a, g) => {
            let inner = alts_formula(&translate(g, x)?, x);
            vec![Alt::Conj(
                Formula::Top,
                [(a.clone(), [inner, Formula::Top].into())].into(),
            )]
        }
        Formula::Boxed(a, g) => {
            let inner = alts_formula(&translate(g, x)?, x);
            vec![
                Alt::Conj(Formula::Top, [(a.clone(), BTreeSet::new())].into()),
                Alt::Conj(Formula::Top, [(a.clone(), [inner].into())].into()),
            ]
        }
        Formula::And(fs) => {
            let psi = to_nabla(&Formula::and(
                fs.iter().filter(|g| !mentions(g, x)).cloned(),
            ))?;
            let tied: Vec<&Formula> = fs.iter().filter(|g| mentions(g, x)).collect();
            if let [single] = tied.as_slice() {
                return translate(single, x)?
                    .into_iter()
                    .map(|alt| match alt {
                        Alt::X => Err(Error::NoUntiedForm(format!(
                            "`{x}` conjoined with `{psi}` is not under a modality"
                        ))),
                        Alt::Conj(p, c) => Ok(Alt::Conj(
                            Formula::and(
                                [psi.clone(), p].into_iter().filter(|f| *f != Formula::Top),
                            ),
                            c,
                        )),
                    })
                    .collect();
            }
            let groups =
                harmless_conjunction(&tied).ok_or_else(|| Error::NotHarmless(x.to_string()))?;
            let mut combos: Vec<BTreeMap<Action, BTreeSet<Formula>>> = vec![BTreeMap::new()];
            for (a, group) in groups {
                let options: Vec<BTreeSet<Formula>> = match group {
                    Group::Boxed(body) => {
                        vec![
                            BTreeSet::new(),
                            [alts_formula(&translate(body, x)?, x)].into(),
                        ]
                    }
                    Group::Diamonds(bodies) => {
                        let mut set = BTreeSet::from([Formula::Top]);
                        for b in bodies {
                            set.insert(alts_formula(&translate(b, x)?, x));
                        }
                        vec![set]
                    }
                };
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        let a = &a;
                        options.iter().map(move |o| {
                            let mut c = c.clone();
                            c.insert(a.clone(), o.clone());
                            c
                        })
                    })
                    .collect();
            }
            combos
                .into_iter()
                .map(|c| Alt::Conj(psi.clone(), c))
                .collect()
        }
        _ => return Err(Error::NotHarmless(x.to_string())),
    })
}

/// Verdicts printed by the `classify` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub harmless: bool,
    /// Untied after rewriting into the cover-modality fragment.
    pub untied: bool,
    /// Untied equivalent of a harmless input, when one exists.
    pub untied_form: Option<String>,
}

pub fn classify(phi: &Formula, x: &str) -> Result<Classification> {
    let nabla = to_nabla(phi)?;
    let harmless = is_harmless(phi, x);
    let untied_form = if harmless {
        harmless_to_untied(phi, x).ok().map(|f| f.to_string())
    } else {
        None
    };
    Ok(Classification {
        harmless,
        untied: is_untied(&nabla, x)?,
        untied_form,
    })
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        write!(
            f,
            "harmless: {}, untied(∇-form): {}",
            yn(self.harmless),
            yn(self.untied)
        )?;
        if let Some(u) = &self.untied_form {
            write!(f, "\nuntied form: {u}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{all_models, equivalent_on, random_model};
    use crate::syntax::{parse, Signatures};

    fn f(s: &str) -> Formula {
        parse(s, &Signatures::new()).unwrap()
    }

    #[test]
    fn untied_examples() {
        let displayed = "(nab a {T, x, nab a {T, x}} & nab b {}) | (nab a {T, x, nab a {T, x}} & nab b {nab a {x, T}})";
        assert!(is_untied(&f(displayed), "x").unwrap());
        assert!(!is_untied(&f("nab a {nab b {x}} & nab a {x}"), "x").unwrap());
        assert!(is_untied(&f("nab a {nab b {p}} & nab a {x}"), "x").unwrap());
        assert!(is_untied(&f("nab a {nab b {x}} & nab b {x}"), "x").unwrap());
        assert!(is_untied(&f("x | T"), "x").unwrap());
        assert!(!is_untied(&f("x & p"), "x").unwrap());
        assert!(is_untied(&f("<a>x"), "x").is_err());
    }

    #[test]
    fn harmless_examples() {
        assert!(!is_harmless(&f("<a>(x & <b>x)"), "x"));
        assert!(!is_harmless(&f("<a>x & [a]<b>x"), "x"));
        assert!(is_harmless(&f("<a>x & <a><a>x & [b]<a>x"), "x"));
        assert!(is_harmless(&f("<a>x & <a><a>x & [a]<a>p"), "x"));
        assert!(is_harmless(&f("x"), "x"));
        assert!(!is_harmless(&f("~x"), "x"));
        assert!(!is_harmless(&f("[a]x & [a]<a>x"), "x"));
    }

    #[test]
    fn translations() {
        assert_eq!(harmless_to_untied(&f("x"), "x").unwrap(), f("x"));
        assert_eq!(
            harmless_to_untied(&f("<a>x"), "x").unwrap(),
            f("nab a {x, T}")
        );
        assert!(matches!(
            harmless_to_untied(&f("<a>(x & <b>x)"), "x"),
            Err(Error::NotHarmless(_))
        ));
        assert!(matches!(
            harmless_to_untied(&f("p & x"), "x"),
            Err(Error::NoUntiedForm(_))
        ));
    }

    #[test]
    fn two_action_conjunction_is_equivalent() {
        let sigs = Signatures::new();
        let phi = f("q & <a>x & <a><a>x & [b](x | p)");
        let u = harmless_to_untied(&phi, "x").unwrap();
        assert!(is_untied(&u, "x").unwrap());
        let acts = [Action::new("a"), Action::new("b")].into();
        for n in 1..=2 {
            for m in all_models(n, &acts, &BTreeSet::new()) {
                assert!(equivalent_on(&m, &phi, &u, &sigs, 20).unwrap(), "{u}");
            }
        }
        for seed in 0..300 {
            let m = random_model(seed, 3, &acts, &BTreeSet::new());
            assert!(equivalent_on(&m, &phi, &u, &sigs, 20).unwrap(), "{u}");
        }
    }

    #[test]
    fn classification_line() {
        let c = classify(&f("<a>(x & <b>x)"), "x").unwrap();
        assert_eq!(c.to_string(), "harmless: no, untied(∇-form): no");
    }
}
