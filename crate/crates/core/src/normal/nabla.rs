use crate::error::{Error, Result};
use crate::syntax::Formula;

/// Rewrites a plain modal formula into the cover-modality fragment using
/// `<a>φ = nab a {φ, T}` and `[a]φ = nab a {} | nab a {φ}`, with negations
/// pushed down to the variables.
pub fn to_nabla(f: &Formula) -> Result<Formula> {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Result<Formula> {
    Ok(match f {
        Formula::Top => {
            if positive {
                Formula::Top
            } else {
                Formula::Bot
            }
        }
        Formula::Bot => {
            if positive {
                Formula::Bot
            } else {
                Formula::Top
            }
        }
        Formula::Var(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Neg(g) => nnf(g, !positive)?,
        Formula::And(gs) => {
            let parts = gs
                .iter()
                .map(|g| nnf(g, positive))
                .collect::<Result<Vec<_>>>()?;
            if positive {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Or(gs) => {
            let parts = gs
                .iter()
                .map(|g| nnf(g, positive))
                .collect::<Result<Vec<_>>>()?;
            if positive {
                Formula::or(parts)
            } else {
                Formula::and(parts)
            }
        }
        Formula::Diamond(a, g) => {
            let inner = nnf(g, positive)?;
            if positive {
                Formula::nabla(a, [inner, Formula::Top])
            } else {
                box_of(a, inner)
            }
        }
        Formula::Boxed(a, g) => {
            let inner = nnf(g, positive)?;
            if positive {
                box_of(a, inner)
            } else {
                Formula::nabla(a, [inner, Formula::Top])
            }
        }
        Formula::Nabla(a, set) => {
            if positive {
                let elems = set
                    .iter()
                    .map(|g| nnf(g, true))
                    .collect::<Result<Vec<_>>>()?;
                Formula::nabla(a, elems)
            } else {
                // ~nab Φ = <a>(⋀ ~Φ) | ⋁_φ [a]~φ
                let negs = set
                    .iter()
                    .map(|g| nnf(g, false))
                    .collect::<Result<Vec<_>>>()?;
                let some_outside = Formula::nabla(a, [Formula::and(negs.clone()), Formula::Top]);
                Formula::or(
                    std::iter::once(some_outside).chain(negs.into_iter().map(|n| box_of(a, n))),
                )
            }
        }
        Formula::Sharp(..) => return Err(Error::SharpNode),
    })
}

fn box_of(a: &crate::syntax::Action, inner: Formula) -> Formula {
    Formula::or([Formula::nabla(a, []), Formula::nabla(a, [inner])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signatures};

    fn nb(text: &str) -> String {
        to_nabla(&parse(text, &Signatures::new()).unwrap())
            .unwrap()
            .to_string()
    }

    #[test]
    fn diamond_and_box() {
        assert_eq!(nb("<a>p"), "nab a {T, p}");
        assert_eq!(nb("[a]p"), "nab a {} | nab a {p}");
    }

    #[test]
    fn de_morgan() {
        assert_eq!(nb("~(p & q)"), "~p | ~q");
        assert_eq!(nb("~~p"), "p");
        assert_eq!(nb("~T"), "F");
    }

    #[test]
    fn negated_modalities_swap() {
        assert_eq!(nb("~<a>p"), "nab a {} | nab a {~p}");
        assert_eq!(nb("~[a]p"), "nab a {T, ~p}");
    }

    #[test]
    fn output_is_in_fragment() {
        let f = to_nabla(&parse("~nab a {p, <b>q} | [a]~(p | q)", &Signatures::new()).unwrap())
            .unwrap();
        assert!(f.is_nabla_fragment());
    }

    #[test]
    fn rejects_connectives() {
        let sigs = Signatures::load("d(x; p) := p | <a>x").unwrap();
        let f = parse("sharp d(q)", &sigs).unwrap();
        assert_eq!(to_nabla(&f), Err(Error::SharpNode));
    }
}
