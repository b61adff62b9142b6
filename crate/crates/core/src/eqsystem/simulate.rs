use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::represent::fresh_prefix;
use super::system::{ModalSystem, SystemKind};
use crate::error::{Error, Result};
use crate::normal::cover::Arith;
use crate::normal::semisimple::{
    argument_sets, merge_semisimple, parse_terms, to_simple, SemiSimple,
};
use crate::normal::simplify::nabla_simplify;
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimulateOptions {
    /// Plain full-relation conjunction law and no cover arithmetic.
    pub raw: bool,
    /// Keep only the subsets reachable from the point.
    pub reachable_only: bool,
}

/// `T⁺` with the subset each variable stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub system: ModalSystem,
    /// `(y_S, S)` in output order.
    pub subsets: Vec<(String, BTreeSet<String>)>,
}

impl Simulation {
    pub fn subset(&self, y: &str) -> Option<&BTreeSet<String>> {
        self.subsets.iter().find(|(n, _)| n == y).map(|(_, s)| s)
    }

    /// Subsets as index sets into the variables of the simulated system.
    pub fn index_sets(&self, t: &ModalSystem) -> Vec<BTreeSet<usize>> {
        self.subsets
            .iter()
            .map(|(_, s)| {
                s.iter()
                    .map(|z| t.index_of(z).expect("member of Z"))
                    .collect()
            })
            .collect()
    }
}

/// Short tag of a system variable: `z_g` ↦ `g`, `z4` ↦ `4`.
pub fn var_tag(z: &str) -> &str {
    let t = z.trim_start_matches('z').trim_start_matches('_');
    if t.is_empty() {
        z
    } else {
        t
    }
}

/// Tag of a subset: member tags in `Z` order, joined with `_` when some tag
/// is longer than one character.
pub fn subset_tag(s: &BTreeSet<String>, order: &[String]) -> String {
    let tags: Vec<&str> = order
        .iter()
        .filter(|z| s.contains(*z))
        .map(|z| var_tag(z))
        .collect();
    let sep = if tags.iter().any(|t| t.chars().count() > 1) {
        "_"
    } else {
        ""
    };
    tags.join(sep)
}

/// Non-empty subsets of `vars`, by size and then lexicographically by
/// position.
pub fn nonempty_subsets(vars: &[String]) -> Vec<BTreeSet<String>> {
    let n = vars.len();
    assert!(n < 20, "too many variables for the subset construction");
    let mut masks: Vec<u32> = (1u32..1 << n).collect();
    let positions = |m: u32| (0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>();
    masks.sort_by_key(|m| (m.count_ones(), positions(*m)));
    masks
        .into_iter()
        .map(|m| positions(m).into_iter().map(|i| vars[i].clone()).collect())
        .collect()
}

/// Subset construction: one variable `y_S` per non-empty `S ⊆ Z`, with the
/// simple term obtained from `⋀_{z ∈ S} t_z`.
pub fn simulate(t: &ModalSystem, opts: SimulateOptions) -> Result<Simulation> {
    let zs = t.var_set();
    let terms = parse_terms(&t.terms, &zs).map_err(|_| Error::SystemKind("semi-simple"))?;
    let arith = Arith {
        top_union: !opts.raw,
    };
    let merged_for = |s: &BTreeSet<String>| -> SemiSimple {
        let parts: Vec<SemiSimple> = t
            .vars
            .iter()
            .filter(|z| s.contains(*z))
            .map(|z| terms[z].clone())
            .collect();
        merge_semisimple(&parts, arith)
    };

    let subsets: Vec<BTreeSet<String>> = if opts.reachable_only {
        let start: BTreeSet<String> = match &t.point {
            Some(p) => [p.clone()].into(),
            None => {
                return Err(Error::System(
                    "reachable subsets need a pointed system".into(),
                ))
            }
        };
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for next in argument_sets(&merged_for(&s)) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        nonempty_subsets(&t.vars)
            .into_iter()
            .filter(|s| seen.contains(s))
            .collect()
    } else {
        nonempty_subsets(&t.vars)
    };

    let tags: Vec<String> = subsets.iter().map(|s| subset_tag(s, &t.vars)).collect();
    let mut taken = t.parameters();
    taken.extend(zs.iter().cloned());
    let prefix = fresh_prefix("y_", &tags, &taken);
    let name_of: BTreeMap<BTreeSet<String>, String> = subsets
        .iter()
        .map(|s| (s.clone(), format!("{prefix}{}", subset_tag(s, &t.vars))))
        .collect();
    let rename = |s: &BTreeSet<String>| {
        name_of
            .get(s)
            .cloned()
            .unwrap_or_else(|| format!("{prefix}{}", subset_tag(s, &t.vars)))
    };

    let mut eqs = Vec::new();
    for s in &subsets {
        let merged = merged_for(s);
        let mut term = to_simple(&merged, rename);
        if !opts.raw {
            term = nabla_simplify(&term);
        }
        eqs.push((name_of[s].clone(), term));
    }
    let point = t
        .point
        .as_ref()
        .map(|p| name_of[&BTreeSet::from([p.clone()])].clone());
    let system = ModalSystem::new(eqs, point)?;
    debug_assert!(opts.reachable_only || system.kind() == SystemKind::Simple);
    Ok(Simulation {
        system,
        subsets: subsets
            .into_iter()
            .map(|s| (name_of[&s].clone(), s))
            .collect(),
    })
}

/// `σ[z/y]`: each `y_S` replaced by `⋀S`.
pub fn unfold(sim: &Simulation, f: &Formula) -> Formula {
    let map: BTreeMap<String, Formula> = sim
        .subsets
        .iter()
        .map(|(y, s)| (y.clone(), Formula::and(s.iter().map(Formula::var))))
        .collect();
    f.substitute(&map)
}
