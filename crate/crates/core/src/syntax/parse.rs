//! ASCII surface syntax.
//!
//! ```text
//! φ ::= T | F | ident | ~φ | φ & φ | φ | φ | <a>φ | [a]φ
//!     | nab a {φ, …} | sharp name(φ, …) | (φ)
//! ```
//!
//! `&` binds tighter than `|`; prefix operators bind tightest.

use std::fmt;

use super::formula::{Action, Formula, FormulaSet};
use super::signature::Signatures;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Lt,
    Gt,
    LBrack,
    RBrack,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            c if is_ident_char(c) => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    ident.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Ident(ident)));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    sigs: &'a Signatures,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.peek() == Some(&Tok::Bar) {
            self.at += 1;
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.at += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn list(&mut self, close: Tok, what: &str) -> Result<Vec<Formula>> {
        let mut items = Vec::new();
        if self.peek() == Some(&close) {
            self.at += 1;
            return Ok(items);
        }
        loop {
            items.push(self.disjunction()?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(t) if t == close => return Ok(items),
                _ => {
                    self.at -= 1;
                    return self.err(format!("expected `,` or {what}"));
                }
            }
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        let start = self.pos();
        match self.bump() {
            Some(Tok::Tilde) => Ok(Formula::not(self.unary()?)),
            Some(Tok::Lt) => {
                let a = Action::new(self.ident("action name")?);
                self.expect(Tok::Gt, "`>`")?;
                Ok(Formula::Diamond(a, Box::new(self.unary()?)))
            }
            Some(Tok::LBrack) => {
                let a = Action::new(self.ident("action name")?);
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Formula::Boxed(a, Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                let f = self.disjunction()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(word)) => match word.as_str() {
                "T" => Ok(Formula::Top),
                "F" => Ok(Formula::Bot),
                "nab" => {
                    let a = Action::new(self.ident("action name")?);
                    self.expect(Tok::LBrace, "`{`")?;
                    let items = self.list(Tok::RBrace, "`}`")?;
                    Ok(Formula::Nabla(a, items.into_iter().collect::<FormulaSet>()))
                }
                "sharp" => {
                    let name = self.ident("connective name")?;
                    let sig = self
                        .sigs
                        .get(&name)
                        .ok_or_else(|| Error::UnknownConnective(name.clone()))?;
                    let expected = sig.arity();
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.list(Tok::RParen, "`)`")?;
                    if args.len() != expected {
                        return Err(Error::Arity {
                            name,
                            expected,
                            got: args.len(),
                        });
                    }
                    Ok(Formula::Sharp(name, args))
                }
                _ => Ok(Formula::Var(word)),
            },
            Some(_) => Err(Error::Syntax {
                pos: start,
                msg: "expected a formula".into(),
            }),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses surface syntax into a canonical formula.
pub fn parse(text: &str, sigs: &Signatures) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        sigs,
    };
    let f = p.disjunction()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f.canonicalize())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or,
    And,
    Unary,
}

fn write_prec(f: &Formula, ctx: Prec, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match f {
        Formula::Or(fs) if fs.len() > 1 => Prec::Or,
        Formula::And(fs) if fs.len() > 1 => Prec::And,
        _ => Prec::Unary,
    };
    // conjunctions are bracketed inside disjunctions for readability
    let paren = own < ctx || (own == Prec::And && ctx == Prec::And);
    if paren {
        out.write_str("(")?;
    }
    match f {
        Formula::Top => out.write_str("T")?,
        Formula::Bot => out.write_str("F")?,
        Formula::Var(v) => out.write_str(v)?,
        Formula::Neg(g) => {
            out.write_str("~")?;
            write_prec(g, Prec::Unary, out)?;
        }
        Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
            out.write_str(if matches!(f, Formula::And(_)) {
                "T"
            } else {
                "F"
            })?
        }
        Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => write_prec(&fs[0], ctx, out)?,
        Formula::And(fs) => {
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.write_str(" & ")?;
                }
                write_prec(g, Prec::And, out)?;
            }
        }
        Formula::Or(fs) => {
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.write_str(" | ")?;
                }
                write_prec(g, Prec::And, out)?;
            }
        }
        Formula::Diamond(a, g) => {
            write!(out, "<{a}>")?;
            write_prec(g, Prec::Unary, out)?;
        }
        Formula::Boxed(a, g) => {
            write!(out, "[{a}]")?;
            write_prec(g, Prec::Unary, out)?;
        }
        Formula::Nabla(a, set) => {
            write!(out, "nab {a} {{")?;
            for (i, g) in set.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write_prec(g, Prec::Or, out)?;
            }
            out.write_str("}")?;
        }
        Formula::Sharp(name, args) => {
            write!(out, "sharp {name}(")?;
            for (i, g) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write_prec(g, Prec::Or, out)?;
            }
            out.write_str(")")?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, Prec::Or, f)
    }
}

/// Deterministic surface rendering; `parse(render(φ))` is `φ.canonicalize()`.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigs() -> Signatures {
        Signatures::load("delta(x; p) := p | <a>x").unwrap()
    }

    fn rt(text: &str) -> String {
        render(&parse(text, &sigs()).unwrap())
    }

    #[test]
    fn constants() {
        assert_eq!(parse("T", &sigs()).unwrap(), Formula::Top);
        assert_eq!(parse("F", &sigs()).unwrap(), Formula::Bot);
        assert_eq!(render(&Formula::Top), "T");
    }

    #[test]
    fn first_example_tree() {
        let f = parse("(p & [a]x) | (~p & <a>(x & <a>x))", &sigs()).unwrap();
        let a = Action::new("a");
        let p = Formula::var("p");
        let x = Formula::var("x");
        let expected = Formula::or([
            Formula::and([p.clone(), Formula::boxed(&a, x.clone())]),
            Formula::and([
                Formula::not(p),
                Formula::dia(&a, Formula::and([x.clone(), Formula::dia(&a, x)])),
            ]),
        ]);
        assert_eq!(f, expected);
        assert_eq!(render(&f), "(p & [a]x) | (~p & <a>(x & <a>x))");
    }

    #[test]
    fn nabla_constructor_and_order() {
        let f = parse("nab a {x, T}", &sigs()).unwrap();
        let a = Action::new("a");
        assert_eq!(f, Formula::nabla(&a, [Formula::var("x"), Formula::Top]));
        assert_eq!(render(&f), "nab a {T, x}");
        assert_eq!(rt("nab a {}"), "nab a {}");
        assert_eq!(rt("nab 1 {nab 2 {p}}"), "nab 1 {nab 2 {p}}");
    }

    #[test]
    fn precedence() {
        assert_eq!(rt("p | q & r"), "p | (q & r)");
        assert_eq!(rt("(p | q) & r"), "r & (p | q)");
        assert_eq!(rt("~(p & q)"), "~(p & q)");
        assert_eq!(rt("~<a>~p"), "~<a>~p");
        assert_eq!(rt("<a>(p | q)"), "<a>(p | q)");
        assert_eq!(rt("nab a {p | q, p & q}"), "nab a {p & q, p | q}");
    }

    #[test]
    fn connective_application() {
        assert_eq!(rt("sharp delta(p & q)"), "sharp delta(p & q)");
        assert_eq!(
            parse("sharp nope(p)", &sigs()).unwrap_err(),
            Error::UnknownConnective("nope".into())
        );
        assert_eq!(
            parse("sharp delta(p, q)", &sigs()).unwrap_err(),
            Error::Arity {
                name: "delta".into(),
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("p & ", &sigs()).unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 4),
            e => panic!("{e}"),
        }
        match parse("p $ q", &sigs()).unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 2),
            e => panic!("{e}"),
        }
        assert!(parse("(p", &sigs()).is_err());
        assert!(parse("p q", &sigs()).is_err());
        assert!(parse("<a p", &sigs()).is_err());
    }

    #[test]
    fn raw_trees_render_to_their_canonical_form() {
        let raw = Formula::And(vec![
            Formula::var("q"),
            Formula::And(vec![Formula::var("p")]),
        ]);
        assert_eq!(parse(&render(&raw), &sigs()).unwrap(), raw.canonicalize());
        assert_eq!(render(&Formula::And(vec![])), "T");
        assert_eq!(render(&Formula::Or(vec![])), "F");
    }
}
