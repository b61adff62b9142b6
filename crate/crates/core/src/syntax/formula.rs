use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Atomic action indexing a modality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Action(pub String);

impl Action {
    pub fn new(name: impl Into<String>) -> Self {
        Action(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A proposition letter or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            positive: true,
        }
    }

    pub fn neg(var: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            positive: false,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            var: self.var.clone(),
            positive: !self.positive,
        }
    }

    pub fn to_formula(&self) -> Formula {
        if self.positive {
            Formula::Var(self.var.clone())
        } else {
            Formula::Neg(Box::new(Formula::Var(self.var.clone())))
        }
    }

    /// Reads `p` or `~p` back as a literal.
    pub fn from_formula(f: &Formula) -> Option<Self> {
        match f {
            Formula::Var(v) => Some(Literal::pos(v.clone())),
            Formula::Neg(inner) => match inner.as_ref() {
                Formula::Var(v) => Some(Literal::neg(v.clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

/// Formula AST.
///
/// The derived `Ord` is the total order used for canonical forms: constructor
/// tag first (in declaration order), then action, then children
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Var(String),
    Neg(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Diamond(Action, Box<Formula>),
    Boxed(Action, Box<Formula>),
    Nabla(Action, FormulaSet),
    Sharp(String, Vec<Formula>),
}

/// Duplicate-free, canonically ordered set of formulas (the argument of a cover
/// modality).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaSet(BTreeSet<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(BTreeSet::new())
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        self.0.insert(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    pub fn into_inner(self) -> BTreeSet<Formula> {
        self.0
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FormulaSet {
    type Item = Formula;
    type IntoIter = std::collections::btree_set::IntoIter<Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn dia(a: &Action, f: Formula) -> Self {
        Formula::Diamond(a.clone(), Box::new(f))
    }

    pub fn boxed(a: &Action, f: Formula) -> Self {
        Formula::Boxed(a.clone(), Box::new(f))
    }

    pub fn nabla<I: IntoIterator<Item = Formula>>(a: &Action, elems: I) -> Self {
        Formula::Nabla(a.clone(), elems.into_iter().collect())
    }

    /// Canonical conjunction: flattened, sorted, duplicate-free; `T` when empty.
    pub fn and<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut set = BTreeSet::new();
        for f in items {
            match f {
                Formula::And(inner) => set.extend(inner),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Formula::Top,
            1 => set.into_iter().next().unwrap(),
            _ => Formula::And(set.into_iter().collect()),
        }
    }

    /// Canonical disjunction: flattened, sorted, duplicate-free; `F` when empty.
    pub fn or<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut set = BTreeSet::new();
        for f in items {
            match f {
                Formula::Or(inner) => set.extend(inner),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Formula::Bot,
            1 => set.into_iter().next().unwrap(),
            _ => Formula::Or(set.into_iter().collect()),
        }
    }

    /// Flattens nested `And`/`Or`, removes duplicates and sorts children.
    /// Idempotent. Performs no Boolean simplification beyond that.
    pub fn canonicalize(&self) -> Formula {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => self.clone(),
            Formula::Neg(f) => Formula::not(f.canonicalize()),
            Formula::And(fs) => Formula::and(fs.iter().map(Formula::canonicalize)),
            Formula::Or(fs) => Formula::or(fs.iter().map(Formula::canonicalize)),
            Formula::Diamond(a, f) => Formula::dia(a, f.canonicalize()),
            Formula::Boxed(a, f) => Formula::boxed(a, f.canonicalize()),
            Formula::Nabla(a, set) => Formula::nabla(a, set.iter().map(Formula::canonicalize)),
            Formula::Sharp(name, args) => Formula::Sharp(
                name.clone(),
                args.iter().map(Formula::canonicalize).collect(),
            ),
        }
    }

    /// Simultaneous substitution of free variables. The result is canonical
    /// whenever the input and the substituted terms are.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Neg(f) => Formula::not(f.substitute(map)),
            Formula::And(fs) => Formula::and(fs.iter().map(|f| f.substitute(map))),
            Formula::Or(fs) => Formula::or(fs.iter().map(|f| f.substitute(map))),
            Formula::Diamond(a, f) => Formula::dia(a, f.substitute(map)),
            Formula::Boxed(a, f) => Formula::boxed(a, f.substitute(map)),
            Formula::Nabla(a, set) => Formula::nabla(a, set.iter().map(|f| f.substitute(map))),
            Formula::Sharp(name, args) => Formula::Sharp(
                name.clone(),
                args.iter().map(|f| f.substitute(map)).collect(),
            ),
        }
    }

    pub fn substitute_one(&self, var: &str, by: &Formula) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), by.clone());
        self.substitute(&map)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Neg(f) | Formula::Diamond(_, f) | Formula::Boxed(_, f) => f.collect_vars(out),
            Formula::And(fs) | Formula::Or(fs) | Formula::Sharp(_, fs) => {
                fs.iter().for_each(|f| f.collect_vars(out))
            }
            Formula::Nabla(_, set) => set.iter().for_each(|f| f.collect_vars(out)),
        }
    }

    pub fn actions(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.collect_actions(&mut out);
        out
    }

    fn collect_actions(&self, out: &mut BTreeSet<Action>) {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => {}
            Formula::Neg(f) => f.collect_actions(out),
            Formula::Diamond(a, f) | Formula::Boxed(a, f) => {
                out.insert(a.clone());
                f.collect_actions(out)
            }
            Formula::Nabla(a, set) => {
                out.insert(a.clone());
                set.iter().for_each(|f| f.collect_actions(out))
            }
            Formula::And(fs) | Formula::Or(fs) | Formula::Sharp(_, fs) => {
                fs.iter().for_each(|f| f.collect_actions(out))
            }
        }
    }

    pub fn sharp_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Sharp(name, _) = f {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn contains_sharp(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Sharp(..)));
        found
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => {}
            Formula::Neg(g) | Formula::Diamond(_, g) | Formula::Boxed(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) | Formula::Sharp(_, gs) => {
                gs.iter().for_each(|g| g.visit(f))
            }
            Formula::Nabla(_, set) => set.iter().for_each(|g| g.visit(f)),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Membership in the cover-modality fragment: negation only on variables,
    /// no box/diamond and no fixpoint connectives.
    pub fn is_nabla_fragment(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => true,
            Formula::Neg(f) => matches!(f.as_ref(), Formula::Var(_)),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_nabla_fragment),
            Formula::Nabla(_, set) => set.iter().all(Formula::is_nabla_fragment),
            Formula::Diamond(..) | Formula::Boxed(..) | Formula::Sharp(..) => false,
        }
    }

    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(fs) => fs.iter().collect(),
            Formula::Top => Vec::new(),
            other => vec![other],
        }
    }

    pub fn disjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Or(fs) => fs.iter().collect(),
            Formula::Bot => Vec::new(),
            other => vec![other],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn canonical_and_is_idempotent() {
        let f = Formula::And(vec![p(), p()]);
        assert_eq!(f.canonicalize(), p());
    }

    #[test]
    fn canonical_or_sorts() {
        let f = Formula::Or(vec![q(), p()]);
        assert_eq!(f.canonicalize(), Formula::Or(vec![p(), q()]));
    }

    #[test]
    fn nabla_argument_is_a_set() {
        let a = Action::new("a");
        let mut raw = FormulaSet::new();
        raw.insert(Formula::var("x"));
        raw.insert(Formula::Top);
        raw.insert(Formula::var("x"));
        let f = Formula::Nabla(a.clone(), raw).canonicalize();
        let expected = Formula::nabla(&a, [Formula::Top, Formula::var("x")]);
        assert_eq!(f, expected);
        if let Formula::Nabla(_, set) = f {
            assert_eq!(set.len(), 2);
        }
    }

    #[test]
    fn nested_conjunctions_flatten() {
        let f = Formula::And(vec![p(), Formula::And(vec![q(), Formula::And(vec![p()])])]);
        assert_eq!(f.canonicalize(), Formula::And(vec![p(), q()]));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let a = Action::new("a");
        let x = Formula::var("x");
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), Formula::dia(&a, x.clone()));
        assert_eq!(x.substitute(&map), Formula::dia(&a, x.clone()));

        let swap: BTreeMap<_, _> = [("p".to_string(), q()), ("q".to_string(), p())].into();
        assert_eq!(
            Formula::and([p(), Formula::not(q())]).substitute(&swap),
            Formula::and([q(), Formula::not(p())])
        );
    }

    #[test]
    fn substitution_does_not_simplify() {
        let map: BTreeMap<_, _> = [
            ("p".to_string(), Formula::Top),
            ("q".to_string(), Formula::Bot),
        ]
        .into();
        assert_eq!(
            Formula::and([p(), q()]).substitute(&map),
            Formula::And(vec![Formula::Top, Formula::Bot])
        );
    }

    #[test]
    fn literal_round_trip() {
        let l = Literal::neg("p");
        assert_eq!(Literal::from_formula(&l.to_formula()), Some(l.clone()));
        assert_eq!(l.complement(), Literal::pos("p"));
        assert_eq!(Literal::from_formula(&Formula::Top), None);
    }
}
