use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flatfix::check::random_formula;
use flatfix::classify::{harmless_to_untied, is_harmless, is_untied};
use flatfix::normal::semisimple::{parse_semisimple, semisimple_to_formula};
use flatfix::normal::{merge_semisimple, nabla_simplify, to_nabla, Arith, SemiSimple};
use flatfix::semantics::{all_frames, equivalent_on, KripkeModel};
use flatfix::syntax::{parse, render, Action, Formula, Signatures};

fn acts() -> Vec<Action> {
    vec![Action::new("a"), Action::new("b")]
}

fn formula(depth: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_formula(&mut rng, depth, &["p", "q", "x"], &acts())
    })
}

fn small_frames() -> Vec<KripkeModel> {
    let acts: BTreeSet<Action> = acts().into_iter().collect();
    (1..=2).flat_map(|n| all_frames(n, &acts)).collect()
}

fn equivalent(f: &Formula, g: &Formula) -> bool {
    let sigs = Signatures::new();
    small_frames()
        .iter()
        .all(|m| equivalent_on(m, f, g, &sigs, 20).unwrap())
}

/// Untied formulas built from `x`, `T`, parameters and covers with distinct actions.
fn untied_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::var("x")),
        Just(Formula::Top),
        Just(Formula::var("p"))
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(Formula::or),
            (
                prop::collection::vec(inner.clone(), 0..3),
                prop::collection::vec(inner, 0..3),
                any::<bool>()
            )
                .prop_map(|(s, t, lit)| {
                    let psi = if lit {
                        Formula::var("q")
                    } else {
                        Formula::not(Formula::var("q"))
                    };
                    Formula::and([
                        psi,
                        Formula::nabla(&Action::new("a"), s),
                        Formula::nabla(&Action::new("b"), t),
                    ])
                }),
        ]
    })
}

/// Harmless formulas over boxes, diamonds and one-action-per-group conjunctions.
fn harmless_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::var("x")),
        Just(Formula::var("p")),
        Just(Formula::Top)
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::or([f, g])),
            inner
                .clone()
                .prop_map(|f| Formula::dia(&Action::new("a"), f)),
            inner
                .clone()
                .prop_map(|f| Formula::boxed(&Action::new("b"), f)),
            (inner.clone(), inner).prop_map(|(f, g)| Formula::and([
                Formula::var("q"),
                Formula::dia(&Action::new("a"), f),
                Formula::boxed(&Action::new("b"), g),
            ])),
        ]
    })
}

/// Semi-simple terms over system variables y1..y3 and parameter p.
fn semisimple() -> impl Strategy<Value = SemiSimple> {
    let elem = prop::sample::subsequence(vec!["y1", "y2", "y3"], 0..=2).prop_map(|vs| {
        if vs.is_empty() {
            "T".to_string()
        } else {
            vs.join(" & ")
        }
    });
    let sc = (
        prop::option::of(any::<bool>()),
        prop::collection::vec(elem, 0..3),
    )
        .prop_map(|(lit, elems)| {
            let cover = format!("nab a {{{}}}", elems.join(", "));
            match lit {
                Some(true) => format!("p & {cover}"),
                Some(false) => format!("~p & {cover}"),
                None => cover,
            }
        });
    prop::collection::vec(sc, 1..3).prop_map(|ds| {
        let vars: BTreeSet<String> = ["y1", "y2", "y3"].into_iter().map(String::from).collect();
        let f = parse(&ds.join(" | "), &Signatures::new()).unwrap();
        parse_semisimple(&f, &vars).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(f in formula(4)) {
        let c = f.canonicalize();
        prop_assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn render_then_parse_is_identity(f in formula(4)) {
        let back = parse(&render(&f), &Signatures::new()).unwrap();
        prop_assert_eq!(back, f.canonicalize());
    }

    #[test]
    fn identity_substitution_changes_nothing(f in formula(4)) {
        let map: BTreeMap<String, Formula> = f.free_vars().into_iter().map(|v| (v.clone(), Formula::var(v))).collect();
        prop_assert_eq!(f.substitute(&map), f);
    }

    #[test]
    fn nabla_simplify_is_idempotent_and_sound(f in formula(3)) {
        let n = to_nabla(&f).unwrap();
        let s = nabla_simplify(&n);
        prop_assert_eq!(nabla_simplify(&s), s.clone());
        prop_assert!(equivalent(&n, &s));
    }

    #[test]
    fn merge_is_associative(s in semisimple(), t in semisimple(), u in semisimple()) {
        let arith = Arith::default();
        let left = merge_semisimple(&[merge_semisimple(&[s.clone(), t.clone()], arith), u.clone()], arith);
        let right = merge_semisimple(&[s.clone(), merge_semisimple(&[t.clone(), u.clone()], arith)], arith);
        let flat = merge_semisimple(&[s.clone(), t.clone(), u.clone()], arith);
        let direct = Formula::and([semisimple_to_formula(&s), semisimple_to_formula(&t), semisimple_to_formula(&u)]);
        prop_assert!(equivalent(&semisimple_to_formula(&left), &semisimple_to_formula(&right)));
        prop_assert!(equivalent(&semisimple_to_formula(&flat), &direct));
    }

    #[test]
    fn untied_is_closed_under_its_constructors(f in untied_formula(), g in untied_formula()) {
        prop_assert!(is_untied(&f, "x").unwrap());
        prop_assert!(is_untied(&Formula::or([f.clone(), g.clone()]), "x").unwrap());
        let a = Action::new("a");
        prop_assert!(is_untied(&Formula::and([Formula::var("p"), Formula::nabla(&a, [f, g])]), "x").unwrap());
    }

    #[test]
    fn harmless_translation_is_untied_and_equivalent(f in harmless_formula()) {
        prop_assert!(is_harmless(&f, "x"));
        match harmless_to_untied(&f, "x") {
            Ok(u) => {
                prop_assert!(is_untied(&u, "x").unwrap());
                prop_assert!(equivalent(&f, &u), "{} vs {}", f, u);
            }
            Err(flatfix::Error::NoUntiedForm(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
