//! Invariant suite over a corpus of connectives and finite Kripke models.
//!
//! Every property is a necessary condition only: passing on finite models
//! does not establish validity over all frames, but any failure is a genuine
//! bug in the construction.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{AxiomSet, Rule};
use crate::classify::{is_harmless, is_untied};
use crate::eqsystem::{simulate, SimulateOptions};
use crate::error::{Error, Result};
use crate::normal::{nabla_simplify, to_disjunctive, to_nabla, to_pure_disjunction};
use crate::pipeline::{run_pipeline, Pipeline, PipelineOptions};
use crate::semantics::{
    all_frames, all_models, all_valuations, approximants, check_axiom, check_rule, check_rule_lfp,
    eval, iota, lfp_formula, lfp_system, system_approximants, Env, KripkeModel, StateSet, Verdict,
};
use crate::syntax::{analysis::modal_depth, Action, Formula, Signatures};

/// Connectives exercised by `check` when no signature file is given.
pub const CORPUS: &str = "\
delta(x; p) := p | <a>x
theta(x; p, q) := p | (q & <a>x)
eta(x; p, q) := p | (q & [a]x)
ex1(x; p) := (p & [a]x) | (~p & <a>(x & <a>x))
always(x; p) := p | [a]x
either(x; p) := p | <a>x | <b>x
stacked(x; p) := p | <a>(x & <b>x)
loose(x) := x | <a>x
tied(x; p, q) := (x & p) | (x & <a>x) | q
mixed(x; p) := p | (<a>x & [b]x)
cover(x; p) := ~p | nab a {x, p}
inf(x) := <a>x
";

pub fn corpus() -> Signatures {
    Signatures::load(CORPUS).expect("built-in corpus parses")
}

/// Rule check dispatch: exhaustive when the valuation space has at most this
/// many bits, least-solution based otherwise.
pub const EXHAUSTIVE_RULE_BITS: usize = 10;

pub fn check_rule_auto(
    m: &KripkeModel,
    rule: &Rule,
    sigs: &Signatures,
    budget: usize,
) -> Result<Verdict> {
    let vars: BTreeSet<String> = rule
        .premises
        .iter()
        .chain([&rule.conclusion])
        .flat_map(|i| i.lhs.free_vars().into_iter().chain(i.rhs.free_vars()))
        .collect();
    if m.size() * vars.len() <= EXHAUSTIVE_RULE_BITS.min(budget) {
        check_rule(m, rule, sigs, budget)
    } else {
        check_rule_lfp(m, rule, sigs, budget)
    }
}

/// Random formula of depth at most `depth` over `vars` and `actions`.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    depth: usize,
    vars: &[&str],
    actions: &[Action],
) -> Formula {
    let leaf = |rng: &mut R| match rng.gen_range(0..8) {
        0 => Formula::Top,
        1 => Formula::Bot,
        2 | 3 => Formula::not(Formula::var(vars[rng.gen_range(0..vars.len())])),
        _ => Formula::var(vars[rng.gen_range(0..vars.len())]),
    };
    if depth == 0 || actions.is_empty() && vars.is_empty() {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_formula(rng, depth - 1, vars, actions);
    let act = |rng: &mut R| actions[rng.gen_range(0..actions.len())].clone();
    match rng.gen_range(0..8) {
        0 => leaf(rng),
        1 => Formula::not(sub(rng)),
        2 => Formula::and([sub(rng), sub(rng)]),
        3 => Formula::or([sub(rng), sub(rng)]),
        4 => {
            let a = act(rng);
            Formula::dia(&a, sub(rng))
        }
        5 => {
            let a = act(rng);
            Formula::boxed(&a, sub(rng))
        }
        _ => {
            let a = act(rng);
            let n = rng.gen_range(0..=2);
            let elems: Vec<Formula> = (0..n).map(|_| sub(rng)).collect();
            Formula::nabla(&a, elems)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub models: usize,
    pub max_states: usize,
    pub seed: u64,
    pub exhaustive_two_state: bool,
    pub random_formulas: usize,
    pub budget: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            models: 100,
            max_states: 4,
            seed: 0,
            exhaustive_two_state: false,
            random_formulas: 200,
            budget: crate::semantics::DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub checked: u64,
    pub failures: u64,
    /// Budget refusals; these are not failures.
    pub skipped: u64,
    pub first_failure: Option<String>,
}

impl PropertyReport {
    fn merge(&mut self, other: &PropertyReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.skipped += other.skipped;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure.clone();
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectiveInfo {
    pub name: String,
    pub definition: String,
    pub z: usize,
    pub y: usize,
    pub harmless: bool,
    pub untied: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub connectives: Vec<ConnectiveInfo>,
    pub properties: Vec<PropertyReport>,
    pub note: &'static str,
}

const NOTE: &str =
    "finite-model checks are a necessary condition only; any failure is a genuine bug";

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failures == 0)
            && self.connectives.iter().all(|c| c.error.is_none())
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn render_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{} connectives, {} random models (at most {} states, seed {}), exhaustive 2-state frames: {}\n",
            self.connectives.len(),
            c.models,
            c.max_states,
            c.seed,
            if c.exhaustive_two_state { "yes" } else { "no" }
        );
        out.push_str(&format!("note: {}\n\n", self.note));
        out.push_str(&format!(
            "{:<12} {:>3} {:>4}  {:<8} {}\n",
            "connective", "|Z|", "|Y|", "harmless", "untied"
        ));
        for k in &self.connectives {
            let yn = |b: bool| if b { "yes" } else { "no" };
            out.push_str(&format!(
                "{:<12} {:>3} {:>4}  {:<8} {}\n",
                k.name,
                k.z,
                k.y,
                yn(k.harmless),
                yn(k.untied)
            ));
            if let Some(e) = &k.error {
                out.push_str(&format!("  error: {e}\n"));
            }
        }
        out.push_str(&format!(
            "\n{:<20} {:>10} {:>8} {:>8}\n",
            "property", "checked", "failed", "skipped"
        ));
        for p in &self.properties {
            out.push_str(&format!(
                "{:<20} {:>10} {:>8} {:>8}\n",
                p.name, p.checked, p.failures, p.skipped
            ));
            if let Some(f) = &p.first_failure {
                out.push_str(&format!("  first failure: {f}\n"));
            }
        }
        out.push_str(if self.passed() {
            "\nresult: PASS\n"
        } else {
            "\nresult: FAIL\n"
        });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub const PROPERTIES: [&str; 11] = [
    "normal-form",
    "guard-split",
    "lfp-system",
    "lfp-simulation",
    "diagram",
    "simulation-terms",
    "cofinality",
    "monotone-traces",
    "kff-soundness",
    "kffplus-soundness",
    "random-formulas",
];

#[derive(Default)]
struct Tally(BTreeMap<&'static str, PropertyReport>);

impl Tally {
    fn record(&mut self, name: &'static str, ok: bool, describe: impl FnOnce() -> String) {
        let p = self.0.entry(name).or_default();
        p.checked += 1;
        if !ok {
            p.failures += 1;
            if p.first_failure.is_none() {
                p.first_failure = Some(describe());
            }
        }
    }

    fn outcome(&mut self, name: &'static str, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(name, ok, describe),
            Err(Error::Budget { .. } | Error::TooLarge(_)) => {
                self.0.entry(name).or_default().skipped += 1
            }
            Err(e) => self.record(name, false, || format!("{}: {e}", describe())),
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (k, v) in &other.0 {
            self.0.entry(k).or_default().merge(v);
        }
    }
}

/// A frame with the valuations of the parameters to try on it.
struct Case {
    label: String,
    frame: KripkeModel,
    valuations: Vec<Env>,
}

fn cases_for(p: &Pipeline, cfg: &SuiteConfig) -> Vec<Case> {
    let params: BTreeSet<String> = p.sig.params.iter().cloned().collect();
    let mut cases = Vec::new();
    for i in 0..cfg.models {
        let seed = cfg.seed.wrapping_add(i as u64);
        let m = crate::semantics::random_model(seed, cfg.max_states, &p.actions, &params);
        cases.push(Case {
            label: format!("random model {i} (seed {seed})"),
            valuations: vec![m.valuation.clone()],
            frame: m,
        });
    }
    if cfg.exhaustive_two_state {
        for n in 1..=2 {
            for (i, frame) in all_frames(n, &p.actions).into_iter().enumerate() {
                cases.push(Case {
                    label: format!("{n}-state frame {i}"),
                    valuations: all_valuations(n, &params).collect(),
                    frame,
                });
            }
        }
    }
    cases
}

fn x_values(m: &KripkeModel, seed: u64) -> Vec<StateSet> {
    if m.size() <= 4 {
        (0..1u64 << m.size()).map(StateSet).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = m.all().0;
        (0..16).map(|_| StateSet(rng.gen::<u64>() & mask)).collect()
    }
}

fn show_env(m: &KripkeModel, env: &Env) -> String {
    let parts: Vec<String> = env
        .iter()
        .map(|(v, s)| format!("{v}={}", m.show(*s)))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn check_valuation(
    p: &Pipeline,
    passes: &[(&str, Result<Formula>)],
    sigs: &Signatures,
    m: &KripkeModel,
    env: &Env,
    label: &str,
    t: &mut Tally,
) {
    let name = &p.sig.name;
    let x = &p.sig.x;
    let at = |what: &str| format!("{name}, {label} {}: {what}", show_env(m, env));
    let gamma = &p.sig.body;

    let pure = p.pre.formula();
    for xv in x_values(m, label.len() as u64) {
        let mut e = env.clone();
        e.insert(x.clone(), xv);
        let base = eval(m, &e, gamma, sigs);
        for (pass, out) in passes {
            let r = match (out, &base) {
                (Ok(f), Ok(b)) => eval(m, &e, f, sigs).map(|v| v == *b),
                (Err(err), _) | (_, Err(err)) => Err(err.clone()),
            };
            t.outcome("normal-form", r, || {
                at(&format!("{pass} changes the truth set at x={}", m.show(xv)))
            });
        }
        let guarded = eval(m, &e, &p.pre.guarded, sigs);
        let r = guarded.and_then(|g| eval(m, &e, &pure, sigs).map(|v| v == g));
        t.outcome("normal-form", r, || {
            at(&format!("pure form differs at x={}", m.show(xv)))
        });
    }

    let (a, trace) = match lfp_formula(m, env, gamma, x, sigs) {
        Ok(v) => v,
        Err(e) => {
            t.record("monotone-traces", false, || at(&e.to_string()));
            return;
        }
    };
    t.record(
        "monotone-traces",
        trace.stages.windows(2).all(|w| w[0].is_subset(w[1])),
        || at("lfp trace decreases"),
    );
    let r = lfp_formula(m, env, &p.pre.guarded, x, sigs).map(|(g, _)| g == a);
    t.outcome("guard-split", r, || {
        at("guarded body has a different least fixpoint")
    });

    let sys = &p.rep.system;
    let (b, strace) = match lfp_system(m, env, sys, sigs) {
        Ok(v) => v,
        Err(e) => {
            t.record("monotone-traces", false, || at(&e.to_string()));
            return;
        }
    };
    t.record(
        "monotone-traces",
        strace
            .stages
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(c, n)| c.is_subset(*n))),
        || at("system trace decreases"),
    );
    let mut with_a = env.clone();
    with_a.insert(x.clone(), a);
    let mut ok = true;
    for (i, z) in sys.vars.iter().enumerate() {
        match eval(m, &with_a, &p.rep.meaning[z], sigs) {
            Ok(v) => ok &= v == b[i],
            Err(_) => ok = false,
        }
    }
    let point = sys.index_of(&p.rep.point).expect("point is a variable");
    t.record("lfp-system", ok && b[point] == a, || {
        at(&format!("least solution {:?} against lfp {}", b, m.show(a)))
    });

    let tplus = &p.sim.system;
    let subsets = p.sim.index_sets(sys);
    match lfp_system(m, env, tplus, sigs) {
        Ok((bp, _)) => t.record("lfp-simulation", bp == iota(&b, &subsets), || {
            at("least solution of the simulation is not the image of iota")
        }),
        Err(e) => t.record("lfp-simulation", false, || at(&e.to_string())),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(a.0 ^ (label.len() as u64) << 32);
    let mask = m.all().0;
    let t_terms = sys.term_list();
    let plus_terms = tplus.term_list();
    for _ in 0..4 {
        let w: Vec<StateSet> = sys
            .vars
            .iter()
            .map(|_| StateSet(rng.gen::<u64>() & mask))
            .collect();
        let lhs = crate::semantics::fixpoint::apply_equations(
            m,
            env,
            &tplus.vars,
            &plus_terms,
            &iota(&w, &subsets),
            sigs,
        );
        let rhs =
            crate::semantics::fixpoint::apply_equations(m, env, &sys.vars, &t_terms, &w, sigs);
        let r = match (lhs, rhs) {
            (Ok(l), Ok(r)) => Ok(l == iota(&r, &subsets)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        t.outcome("diagram", r, || {
            at("simulation step does not commute with iota")
        });

        let mut zenv = env.clone();
        for (z, s) in sys.vars.iter().zip(&w) {
            zenv.insert(z.clone(), *s);
        }
        for ((y, s), sigma) in p.sim.subsets.iter().zip(&plus_terms) {
            let unfolded = crate::eqsystem::unfold(&p.sim, sigma);
            let conj = Formula::and(s.iter().map(|z| sys.terms[z].clone()));
            let r = eval(m, &zenv, &unfolded, sigs)
                .and_then(|u| eval(m, &zenv, &conj, sigs).map(|c| u == c));
            t.outcome("simulation-terms", r, || {
                at(&format!(
                    "term of {y} with z for y differs from the conjunction"
                ))
            });
        }
    }

    let k = modal_depth(gamma, sigs).max(1);
    let rounds = (6 * k).max(7);
    let c = approximants(m, env, gamma, x, sigs, 7);
    let ts = system_approximants(m, env, &sys.vars, &t_terms, sigs, rounds);
    match (c, ts) {
        (Ok(c), Ok(ts)) => {
            let tz: Vec<StateSet> = ts.iter().map(|v| v[point]).collect();
            let ok = (0..=6).all(|n| tz[n + 1].is_subset(c[n + 1]) && c[n].is_subset(tz[k * n]));
            t.record("cofinality", ok, || {
                at(&format!("approximants c={c:?} t={tz:?} with k={k}"))
            });
        }
        (Err(e), _) | (_, Err(e)) => t.record("cofinality", false, || at(&e.to_string())),
    }
}

fn check_soundness(
    set: &AxiomSet,
    prop: &'static str,
    sigs: &Signatures,
    m: &KripkeModel,
    label: &str,
    budget: usize,
    t: &mut Tally,
) {
    let describe = |item: &str, v: &Verdict| match v {
        Verdict::Invalid { assignment, state } => format!(
            "{} {item}, {label}: fails at state {} under {}",
            set.connective,
            m.id(*state),
            show_env(m, assignment)
        ),
        Verdict::Valid => String::new(),
    };
    for ax in &set.axioms {
        match check_axiom(m, ax, sigs, budget) {
            Ok(v) => t.record(prop, v.is_valid(), || describe(&ax.name, &v)),
            Err(e) => t.outcome(prop, Err(e), || {
                format!("{} {}, {label}", set.connective, ax.name)
            }),
        }
    }
    for rule in &set.rules {
        match check_rule_auto(m, rule, sigs, budget) {
            Ok(v) => t.record(prop, v.is_valid(), || describe(&rule.name, &v)),
            Err(e) => t.outcome(prop, Err(e), || {
                format!("{} {}, {label}", set.connective, rule.name)
            }),
        }
    }
}

fn normal_form_passes(p: &Pipeline) -> Vec<(&'static str, Result<Formula>)> {
    let nabla = to_nabla(&p.sig.body);
    vec![
        (
            "to_disjunctive",
            nabla.clone().and_then(|f| to_disjunctive(&f)),
        ),
        (
            "to_pure_disjunction",
            nabla
                .clone()
                .and_then(|f| to_pure_disjunction(&f, &p.actions)),
        ),
        ("to_nabla", nabla),
    ]
}

fn check_case(
    p: &Pipeline,
    passes: &[(&str, Result<Formula>)],
    sigs: &Signatures,
    case: &Case,
    budget: usize,
) -> Tally {
    let mut t = Tally::default();
    for env in &case.valuations {
        let mut m = case.frame.clone();
        m.valuation = env.clone();
        check_valuation(p, passes, sigs, &m, env, &case.label, &mut t);
    }
    check_soundness(
        &p.kff,
        "kff-soundness",
        sigs,
        &case.frame,
        &case.label,
        budget,
        &mut t,
    );
    check_soundness(
        &p.kplus,
        "kffplus-soundness",
        sigs,
        &case.frame,
        &case.label,
        budget,
        &mut t,
    );
    t
}

/// Passes of the normal-form module checked on `count` random formulas,
/// exhaustively over every model with at most two states on each formula's
/// vocabulary.
fn check_random_formulas(count: usize, seed: u64) -> Tally {
    let acts = [Action::new("a"), Action::new("b")];
    let sigs = Signatures::new();
    let formulas: Vec<Formula> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| random_formula(&mut rng, 3, &["p", "q"], &acts))
            .collect()
    };
    let tallies: Vec<Tally> = formulas
        .par_iter()
        .map(|f| {
            let mut t = Tally::default();
            let actions = f.actions();
            let nabla = match to_nabla(f) {
                Ok(n) => n,
                Err(e) => {
                    t.record("random-formulas", false, || format!("{f}: {e}"));
                    return t;
                }
            };
            let mut outs: Vec<(&str, Formula)> = vec![
                ("to_nabla", nabla.clone()),
                ("nabla_simplify", nabla_simplify(&nabla)),
            ];
            for (pass, out) in [
                ("to_disjunctive", to_disjunctive(&nabla)),
                ("to_pure_disjunction", to_pure_disjunction(&nabla, &actions)),
            ] {
                match out {
                    Ok(g) => outs.push((pass, g)),
                    Err(Error::TooLarge(_)) => {
                        t.0.entry("random-formulas").or_default().skipped += 1
                    }
                    Err(e) => {
                        t.record("random-formulas", false, || format!("{pass} on `{f}`: {e}"))
                    }
                }
            }
            let mut ok = true;
            let mut witness = String::new();
            'models: for n in 1..=2 {
                for m in all_models(n, &actions, &f.free_vars()) {
                    let base = eval(&m, &Env::new(), f, &sigs).expect("closed over its vocabulary");
                    for (pass, g) in &outs {
                        if eval(&m, &Env::new(), g, &sigs).ok() != Some(base) {
                            ok = false;
                            witness = format!(
                                "{pass} changes `{f}` on {}",
                                m.to_json().replace(['\n', ' '], "")
                            );
                            break 'models;
                        }
                    }
                }
            }
            t.record("random-formulas", ok, || witness);
            t
        })
        .collect();
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    total
}

pub fn run_suite(sigs: &Signatures, cfg: &SuiteConfig) -> SuiteReport {
    let mut connectives = Vec::new();
    let mut pipelines = Vec::new();
    for sig in sigs.iter() {
        let mut info = ConnectiveInfo {
            name: sig.name.clone(),
            definition: sig.to_string(),
            z: 0,
            y: 0,
            harmless: is_harmless(&sig.body, &sig.x),
            untied: to_nabla(&sig.body)
                .and_then(|f| is_untied(&f, &sig.x))
                .unwrap_or(false),
            error: None,
        };
        match run_pipeline(sig, None, PipelineOptions::default()) {
            Ok(p) => {
                info.z = p.rep.system.len();
                info.y = p.sim.system.len();
                pipelines.push(p);
            }
            Err(e) => info.error = Some(e.to_string()),
        }
        connectives.push(info);
    }

    let jobs: Vec<(usize, Case)> = pipelines
        .iter()
        .enumerate()
        .flat_map(|(i, p)| cases_for(p, cfg).into_iter().map(move |c| (i, c)))
        .collect();
    let passes: Vec<_> = pipelines.iter().map(normal_form_passes).collect();
    let tallies: Vec<Tally> = jobs
        .par_iter()
        .map(|(i, case)| check_case(&pipelines[*i], &passes[*i], sigs, case, cfg.budget))
        .collect();
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    if cfg.random_formulas > 0 {
        total.merge(&check_random_formulas(cfg.random_formulas, cfg.seed));
    }

    let properties = PROPERTIES
        .iter()
        .map(|name| {
            let mut p = total.0.remove(name).unwrap_or_default();
            p.name = name.to_string();
            p
        })
        .collect();
    SuiteReport {
        config: cfg.clone(),
        connectives,
        properties,
        note: NOTE,
    }
}

/// `|Y| = 2^|Z| − 1` and the simulation is simple, for every connective.
pub fn simulation_shape(p: &Pipeline) -> bool {
    let full = simulate(&p.rep.system, SimulateOptions::default());
    full.map(|s| s.system.len() == (1 << p.rep.system.len()) - 1)
        .unwrap_or(false)
}
