use std::collections::BTreeSet;

use super::formula::Formula;
use super::signature::Signatures;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Absent,
    Positive,
    Negative,
    Both,
}

impl Polarity {
    pub fn join(self, other: Polarity) -> Polarity {
        use Polarity::*;
        match (self, other) {
            (Absent, p) | (p, Absent) => p,
            (Positive, Positive) => Positive,
            (Negative, Negative) => Negative,
            _ => Both,
        }
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            p => p,
        }
    }

    /// Polarity of `x` in `outer[inner/p]`, given the polarity of `p` in
    /// `outer` and of `x` in `inner`.
    fn compose(outer: Polarity, inner: Polarity) -> Polarity {
        match outer {
            Polarity::Absent => Polarity::Absent,
            Polarity::Positive => inner,
            Polarity::Negative => inner.flip(),
            Polarity::Both => match inner {
                Polarity::Absent => Polarity::Absent,
                _ => Polarity::Both,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub free_vars: BTreeSet<String>,
    pub polarity: Polarity,
    pub guarded: bool,
    pub modal_depth: usize,
}

pub fn analyze(f: &Formula, x: &str, sigs: &Signatures) -> Analysis {
    Analysis {
        free_vars: f.free_vars(),
        polarity: polarity(f, x, sigs),
        guarded: !occurs_unguarded(f, x, sigs),
        modal_depth: modal_depth(f, sigs),
    }
}

pub fn polarity(f: &Formula, x: &str, sigs: &Signatures) -> Polarity {
    match f {
        Formula::Var(v) if v == x => Polarity::Positive,
        Formula::Var(_) | Formula::Top | Formula::Bot => Polarity::Absent,
        Formula::Neg(g) => polarity(g, x, sigs).flip(),
        Formula::Diamond(_, g) | Formula::Boxed(_, g) => polarity(g, x, sigs),
        Formula::And(gs) | Formula::Or(gs) => gs
            .iter()
            .fold(Polarity::Absent, |acc, g| acc.join(polarity(g, x, sigs))),
        Formula::Nabla(_, set) => set
            .iter()
            .fold(Polarity::Absent, |acc, g| acc.join(polarity(g, x, sigs))),
        Formula::Sharp(name, args) => {
            let sig = sigs.get(name);
            args.iter()
                .enumerate()
                .fold(Polarity::Absent, |acc, (i, arg)| {
                    let inner = polarity(arg, x, sigs);
                    let outer = match sig.and_then(|s| s.params.get(i)) {
                        Some(p) => polarity(&sig.unwrap().body, p, sigs),
                        None => Polarity::Both,
                    };
                    acc.join(Polarity::compose(outer, inner))
                })
        }
    }
}

/// True when some occurrence of `x` is not under a modality.
pub fn occurs_unguarded(f: &Formula, x: &str, sigs: &Signatures) -> bool {
    match f {
        Formula::Var(v) => v == x,
        Formula::Top | Formula::Bot => false,
        Formula::Neg(g) => occurs_unguarded(g, x, sigs),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().any(|g| occurs_unguarded(g, x, sigs)),
        Formula::Diamond(..) | Formula::Boxed(..) | Formula::Nabla(..) => false,
        Formula::Sharp(name, args) => {
            let sig = sigs.get(name);
            args.iter().enumerate().any(|(i, arg)| {
                occurs_unguarded(arg, x, sigs)
                    && match sig.and_then(|s| s.params.get(i)) {
                        Some(p) => occurs_unguarded(&sig.unwrap().body, p, sigs),
                        None => true,
                    }
            })
        }
    }
}

/// Nesting depth of `<a>`, `[a]` and `nab`; a connective node counts the depth
/// of its body plus the deepest argument.
pub fn modal_depth(f: &Formula, sigs: &Signatures) -> usize {
    match f {
        Formula::Top | Formula::Bot | Formula::Var(_) => 0,
        Formula::Neg(g) => modal_depth(g, sigs),
        Formula::And(gs) | Formula::Or(gs) => {
            gs.iter().map(|g| modal_depth(g, sigs)).max().unwrap_or(0)
        }
        Formula::Diamond(_, g) | Formula::Boxed(_, g) => 1 + modal_depth(g, sigs),
        Formula::Nabla(_, set) => 1 + set.iter().map(|g| modal_depth(g, sigs)).max().unwrap_or(0),
        Formula::Sharp(name, args) => {
            let body = sigs.get(name).map_or(0, |s| modal_depth(&s.body, sigs));
            body + args.iter().map(|g| modal_depth(g, sigs)).max().unwrap_or(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn an(text: &str) -> Analysis {
        let sigs = Signatures::load("delta(x; p) := p | <a>x").unwrap();
        analyze(&parse(text, &sigs).unwrap(), "x", &sigs)
    }

    #[test]
    fn negation_flips() {
        assert_eq!(an("~x").polarity, Polarity::Negative);
        assert_eq!(an("~~x").polarity, Polarity::Positive);
        assert_eq!(an("x & ~x").polarity, Polarity::Both);
        assert_eq!(an("p").polarity, Polarity::Absent);
    }

    #[test]
    fn first_example_formula() {
        let a = an("(p & [a]x) | (~p & <a>(x & <a>x))");
        assert_eq!(a.polarity, Polarity::Positive);
        assert!(a.guarded);
        assert_eq!(a.modal_depth, 2);
        assert_eq!(
            a.free_vars,
            ["p", "x"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn bare_disjunct_is_unguarded() {
        assert!(!an("x | <a>x").guarded);
        assert!(an("p").guarded);
        assert_eq!(an("T").modal_depth, 0);
    }

    #[test]
    fn connective_arguments() {
        // p occurs unguarded and positively in delta's body
        let a = an("sharp delta(x)");
        assert_eq!(a.polarity, Polarity::Positive);
        assert!(!a.guarded);
        assert_eq!(a.modal_depth, 1);
        let b = an("sharp delta(<a>~x)");
        assert_eq!(b.polarity, Polarity::Negative);
        assert!(b.guarded);
        assert_eq!(b.modal_depth, 2);
    }
}
