use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::system::ModalSystem;
use crate::error::{Error, Result};
use crate::normal::cover::SpecialConjunction;
use crate::normal::pure::{PureDisjunction, PureNablaX};
use crate::normal::semisimple::{semisimple_to_formula, SemiSimple, VarConj};
use crate::syntax::Formula;

type Body = SpecialConjunction<PureNablaX>;

/// Special conjunctions of a pure ∇/x disjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantSubformulas {
    pub x: String,
    pub gamma: PureDisjunction,
    /// `SC_γ`, numbered from 1: the top-level disjuncts first, then the
    /// nested ones in breadth-first order.
    pub sc: Vec<Body>,
    /// Positions in `sc` (1-based) of the special conjunctions occurring
    /// under a cover.
    pub nested: BTreeSet<usize>,
}

impl RelevantSubformulas {
    pub fn formula(&self, i: usize) -> Formula {
        self.sc[i - 1].to_formula_with(|e| e.to_formula(&self.x))
    }

    pub fn gamma_formula(&self) -> Formula {
        Formula::or(self.gamma.iter().map(|t| t.to_formula(&self.x)))
    }

    /// `{γ} ∪ SC'_γ`, the formula `γ` first.
    pub fn rsf(&self) -> Vec<Formula> {
        std::iter::once(self.gamma_formula())
            .chain(self.nested.iter().map(|i| self.formula(*i)))
            .collect()
    }

    fn index(&self, body: &Body) -> usize {
        1 + self
            .sc
            .iter()
            .position(|b| b == body)
            .expect("numbered special conjunction")
    }
}

fn by_formula<'a>(terms: impl IntoIterator<Item = &'a PureNablaX>, x: &str) -> Vec<&'a PureNablaX> {
    let mut keyed: Vec<(Formula, &PureNablaX)> =
        terms.into_iter().map(|t| (t.to_formula(x), t)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, t)| t).collect()
}

pub fn relevant_subformulas(gamma: &PureDisjunction, x: &str) -> Result<RelevantSubformulas> {
    let mut sc: Vec<Body> = Vec::new();
    let mut queue = VecDeque::new();
    for t in by_formula(gamma, x) {
        if !t.is_guarded() {
            return Err(Error::Unguarded(x.to_string()));
        }
        if let Some(body) = t.body() {
            if !sc.contains(body) {
                sc.push(body.clone());
                queue.push_back(body.clone());
            }
        }
    }
    let mut nested = BTreeSet::new();
    while let Some(body) = queue.pop_front() {
        for elems in body.covers.values() {
            for e in by_formula(elems, x) {
                if let Some(inner) = e.body() {
                    let i = match sc.iter().position(|b| b == inner) {
                        Some(i) => i + 1,
                        None => {
                            sc.push(inner.clone());
                            queue.push_back(inner.clone());
                            sc.len()
                        }
                    };
                    nested.insert(i);
                }
            }
        }
    }
    Ok(RelevantSubformulas {
        x: x.to_string(),
        gamma: gamma.clone(),
        sc,
        nested,
    })
}

/// `T_γ` together with the formulas its variables stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub system: ModalSystem,
    pub rsf: RelevantSubformulas,
    /// `z ↦ ψ_z`; the point stands for `γ`.
    pub meaning: BTreeMap<String, Formula>,
    pub point: String,
}

impl Representation {
    /// `χ_z`: `x` for the point, `ψ_z` otherwise.
    pub fn chi(&self) -> BTreeMap<String, Formula> {
        self.meaning
            .iter()
            .map(|(z, f)| {
                let chi = if *z == self.point {
                    Formula::var(&self.rsf.x)
                } else {
                    f.clone()
                };
                (z.clone(), chi)
            })
            .collect()
    }
}

/// Picks `prefix` + suffix names avoiding `taken`, lengthening the prefix
/// with underscores on a clash.
pub(crate) fn fresh_prefix(base: &str, suffixes: &[String], taken: &BTreeSet<String>) -> String {
    let mut prefix = base.to_string();
    while suffixes
        .iter()
        .any(|s| taken.contains(&format!("{prefix}{s}")))
    {
        prefix.push('_');
    }
    prefix
}

/// System representation of a guarded pure ∇/x disjunction: one variable for
/// `γ` (`z_g`) and one for each nested special conjunction (`z_i`).
pub fn build_system(gamma: &PureDisjunction, x: &str) -> Result<Representation> {
    let rsf = relevant_subformulas(gamma, x)?;
    let mut taken: BTreeSet<String> = rsf.gamma_formula().free_vars();
    taken.insert(x.to_string());
    let suffixes: Vec<String> = std::iter::once("g".to_string())
        .chain(rsf.nested.iter().map(|i| i.to_string()))
        .collect();
    let prefix = fresh_prefix("z_", &suffixes, &taken);
    let point = format!("{prefix}g");
    let name = |i: usize| format!("{prefix}{i}");

    let hat_elem = |e: &PureNablaX| -> VarConj {
        match e {
            PureNablaX::Top => VarConj::default(),
            PureNablaX::X => VarConj([point.clone()].into()),
            PureNablaX::Conj { with_x, body } => {
                let mut vs = BTreeSet::from([name(rsf.index(body))]);
                if *with_x {
                    vs.insert(point.clone());
                }
                VarConj(vs)
            }
        }
    };
    let hat = |body: &Body| SpecialConjunction::<VarConj> {
        literals: body.literals.clone(),
        covers: body
            .covers
            .iter()
            .map(|(a, elems)| (a.clone(), elems.iter().map(hat_elem).collect()))
            .collect(),
    };

    let mut top: SemiSimple = BTreeSet::new();
    for t in &rsf.gamma {
        match t {
            PureNablaX::Top => {
                top.insert(SpecialConjunction::default());
            }
            PureNablaX::Conj {
                with_x: false,
                body,
            } => {
                top.insert(hat(body));
            }
            _ => return Err(Error::Unguarded(x.to_string())),
        }
    }
    let mut eqs = vec![(point.clone(), semisimple_to_formula(&top))];
    let mut meaning = BTreeMap::from([(point.clone(), rsf.gamma_formula())]);
    for &i in &rsf.nested {
        let body = &rsf.sc[i - 1];
        eqs.push((name(i), semisimple_to_formula(&[hat(body)].into())));
        meaning.insert(name(i), rsf.formula(i));
    }
    let system = ModalSystem::new(eqs, Some(point.clone()))?;
    Ok(Representation {
        system,
        rsf,
        meaning,
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqsystem::SystemKind;
    use crate::normal::preprocess;
    use crate::syntax::{parse, Action, Signatures};

    fn pure(text: &str) -> PureDisjunction {
        let acts: BTreeSet<Action> = [Action::new("a")].into();
        preprocess(&parse(text, &Signatures::new()).unwrap(), "x", &acts)
            .unwrap()
            .pure
    }

    #[test]
    fn second_example() {
        let g = pure("(p & [a]x) | (~p & <a>(x & <a>x))");
        let rsf = relevant_subformulas(&g, "x").unwrap();
        assert_eq!(rsf.sc.len(), 4);
        let sigs = Signatures::new();
        assert_eq!(rsf.formula(4), parse("nab a {T, x}", &sigs).unwrap());
        assert_eq!(rsf.formula(1), parse("p & nab a {}", &sigs).unwrap());
        assert_eq!(rsf.nested, [4].into());
        assert_eq!(rsf.rsf().len(), 2);
    }

    #[test]
    fn third_example() {
        let rep = build_system(&pure("(p & [a]x) | (~p & <a>(x & <a>x))"), "x").unwrap();
        assert_eq!(
            rep.system.render_text(),
            "*z_g = (p & nab a {}) | (p & nab a {z_g}) | (~p & nab a {T, z_4 & z_g})\n\
             z_4 = nab a {T, z_g}\n"
        );
        assert_eq!(rep.system.kind(), SystemKind::SemiSimple);
        assert_eq!(rep.chi()["z_g"], Formula::var("x"));
    }

    #[test]
    fn single_layer() {
        let rep = build_system(&pure("<a>x"), "x").unwrap();
        assert_eq!(rep.system.render_text(), "*z_g = nab a {T, z_g}\n");
        assert!(rep.rsf.nested.is_empty());
    }

    #[test]
    fn names_avoid_parameters() {
        let rep = build_system(&pure("z_g | <a>x"), "x").unwrap();
        assert_eq!(rep.point, "z__g");
    }
}
