use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::Action;

/// Largest supported state space.
pub const MAX_STATES: usize = 64;

/// Set of states as a bitset over dense state indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        StateSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, o: StateSet) -> StateSet {
        StateSet(self.0 | o.0)
    }

    pub fn intersection(self, o: StateSet) -> StateSet {
        StateSet(self.0 & o.0)
    }

    pub fn complement(self, n: usize) -> StateSet {
        StateSet(!self.0 & StateSet::full(n).0)
    }

    pub fn is_subset(self, o: StateSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }

    /// First state in `self` but not in `o`.
    pub fn first_outside(self, o: StateSet) -> Option<usize> {
        let diff = self.0 & !o.0;
        (diff != 0).then(|| diff.trailing_zeros() as usize)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Finite Kripke model. States are dense indices `0..n`; the ids of the
/// model document are kept for output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    ids: Vec<i64>,
    succ: BTreeMap<Action, Vec<StateSet>>,
    pub valuation: BTreeMap<String, StateSet>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    states: Vec<i64>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<[i64; 2]>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<i64>>,
}

impl KripkeModel {
    /// Model on states `0..n` with no transitions and an empty valuation.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::Model(format!(
                "state count must be in 1..={MAX_STATES}"
            )));
        }
        Ok(KripkeModel {
            ids: (0..n as i64).collect(),
            succ: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.ids.len()
    }

    pub fn all(&self) -> StateSet {
        StateSet::full(self.size())
    }

    pub fn id(&self, i: usize) -> i64 {
        self.ids[i]
    }

    pub fn actions(&self) -> impl Iterator<Item = &Action> {
        self.succ.keys()
    }

    pub fn add_action(&mut self, a: &Action) {
        let n = self.size();
        self.succ
            .entry(a.clone())
            .or_insert_with(|| vec![StateSet::EMPTY; n]);
    }

    pub fn add_edge(&mut self, a: &Action, from: usize, to: usize) {
        self.add_action(a);
        self.succ.get_mut(a).unwrap()[from].insert(to);
    }

    pub fn successors(&self, a: &Action, s: usize) -> StateSet {
        self.succ.get(a).map_or(StateSet::EMPTY, |v| v[s])
    }

    pub fn set_prop(&mut self, p: impl Into<String>, states: StateSet) {
        self.valuation.insert(p.into(), states);
    }

    /// States with some `a`-successor in `x`.
    pub fn diamond(&self, a: &Action, x: StateSet) -> StateSet {
        let mut out = StateSet::EMPTY;
        if let Some(v) = self.succ.get(a) {
            for (s, succ) in v.iter().enumerate() {
                if succ.0 & x.0 != 0 {
                    out.insert(s);
                }
            }
        }
        out
    }

    /// States all of whose `a`-successors lie in `x`.
    pub fn boxed(&self, a: &Action, x: StateSet) -> StateSet {
        match self.succ.get(a) {
            None => self.all(),
            Some(v) => {
                let mut out = StateSet::EMPTY;
                for (s, succ) in v.iter().enumerate() {
                    if succ.is_subset(x) {
                        out.insert(s);
                    }
                }
                out
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        let mut m = KripkeModel::new(doc.states.len())?;
        let mut index = BTreeMap::new();
        for (i, id) in doc.states.iter().enumerate() {
            if index.insert(*id, i).is_some() {
                return Err(Error::Model(format!("duplicate state id {id}")));
            }
        }
        m.ids = doc.states.clone();
        let lookup = |id: i64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::Model(format!("unknown state id {id}")))
        };
        for (a, pairs) in &doc.relations {
            let act = Action::new(a.clone());
            m.add_action(&act);
            for [f, t] in pairs {
                m.add_edge(&act, lookup(*f)?, lookup(*t)?);
            }
        }
        for (p, ids) in &doc.valuation {
            let mut set = StateSet::EMPTY;
            for id in ids {
                set.insert(lookup(*id)?);
            }
            m.set_prop(p.clone(), set);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            states: self.ids.clone(),
            relations: self
                .succ
                .iter()
                .map(|(a, v)| {
                    let pairs = v
                        .iter()
                        .enumerate()
                        .flat_map(|(s, succ)| succ.iter().map(move |t| (s, t)))
                        .map(|(s, t)| [self.ids[s], self.ids[t]])
                        .collect();
                    (a.to_string(), pairs)
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, set)| (p.clone(), set.iter().map(|i| self.ids[i]).collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("model document serializes")
    }

    /// Renders a state set with the document ids.
    pub fn show(&self, set: StateSet) -> String {
        let items: Vec<String> = set.iter().map(|i| self.ids[i].to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

/// Seeded random model: the state count is uniform in `1..=max_states`,
/// every edge and every proposition membership has probability ½.
pub fn random_model(
    seed: u64,
    max_states: usize,
    actions: &BTreeSet<Action>,
    props: &BTreeSet<String>,
) -> KripkeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states.clamp(1, MAX_STATES));
    let mut m = KripkeModel::new(n).expect("state count in range");
    for a in actions {
        m.add_action(a);
        for s in 0..n {
            for t in 0..n {
                if rng.gen_bool(0.5) {
                    m.add_edge(a, s, t);
                }
            }
        }
    }
    for p in props {
        let mut set = StateSet::EMPTY;
        for s in 0..n {
            if rng.gen_bool(0.5) {
                set.insert(s);
            }
        }
        m.set_prop(p.clone(), set);
    }
    m
}

/// Every frame on `n` states over `actions`, with an empty valuation.
pub fn all_frames(n: usize, actions: &BTreeSet<Action>) -> Vec<KripkeModel> {
    let edges = n * n;
    let bits = edges * actions.len();
    assert!(bits < 24, "too many frames to enumerate");
    (0u64..1 << bits)
        .map(|code| {
            let mut m = KripkeModel::new(n).expect("state count in range");
            for (k, a) in actions.iter().enumerate() {
                m.add_action(a);
                for e in 0..edges {
                    if code & (1 << (k * edges + e)) != 0 {
                        m.add_edge(a, e / n, e % n);
                    }
                }
            }
            m
        })
        .collect()
}

/// Every valuation of `vars` over `n` states, in numeric bitset order with
/// the variables sorted.
pub fn all_valuations(
    n: usize,
    vars: &BTreeSet<String>,
) -> impl Iterator<Item = BTreeMap<String, StateSet>> + '_ {
    let total_bits = n * vars.len();
    let mask = StateSet::full(n).0;
    (0u64..1u64 << total_bits).map(move |code| {
        vars.iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), StateSet((code >> (k * n)) & mask)))
            .collect()
    })
}

/// Every model with `n` states over `actions` and `props`.
pub fn all_models(
    n: usize,
    actions: &BTreeSet<Action>,
    props: &BTreeSet<String>,
) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    for frame in all_frames(n, actions) {
        for val in all_valuations(n, props) {
            let mut m = frame.clone();
            m.valuation = val;
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acts(names: &[&str]) -> BTreeSet<Action> {
        names.iter().map(|n| Action::new(*n)).collect()
    }

    #[test]
    fn json_round_trip_keeps_ids() {
        let text = r#"{"states":[10,3,7],"relations":{"a":[[10,3],[3,7]]},"valuation":{"p":[7]}}"#;
        let m = KripkeModel::from_json(text).unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.show(m.valuation["p"]), "{7}");
        let again = KripkeModel::from_json(&m.to_json()).unwrap();
        assert_eq!(again, m);
        let doc: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(doc["states"], serde_json::json!([10, 3, 7]));
        assert_eq!(doc["relations"]["a"], serde_json::json!([[10, 3], [3, 7]]));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(KripkeModel::from_json(r#"{"states":[]}"#).is_err());
        assert!(KripkeModel::from_json(r#"{"states":[0],"relations":{"a":[[0,1]]}}"#).is_err());
        assert!(KripkeModel::from_json(r#"{"states":[0,0]}"#).is_err());
    }

    #[test]
    fn random_model_is_deterministic() {
        let a = acts(&["a"]);
        let p: BTreeSet<String> = ["p".to_string()].into();
        assert_eq!(random_model(7, 4, &a, &p), random_model(7, 4, &a, &p));
        assert_eq!(random_model(7, 1, &a, &p).size(), 1);
    }

    #[test]
    fn one_state_draws_cover_both_relations() {
        let a = acts(&["a"]);
        let empty = BTreeSet::new();
        let (mut loops, mut none) = (0, 0);
        for seed in 0..1000 {
            let m = random_model(seed, 1, &a, &empty);
            if m.successors(&Action::new("a"), 0).is_empty() {
                none += 1;
            } else {
                loops += 1;
            }
        }
        assert!(loops > 400 && none > 400, "{loops} / {none}");
    }

    #[test]
    fn frame_and_valuation_counts() {
        assert_eq!(all_frames(2, &acts(&["a"])).len(), 16);
        assert_eq!(all_frames(1, &acts(&["a", "b"])).len(), 4);
        let vars: BTreeSet<String> = ["p".into(), "q".into()].into();
        assert_eq!(all_valuations(2, &vars).count(), 16);
        assert_eq!(all_models(1, &acts(&["a"]), &vars).len(), 8);
    }

    #[test]
    fn modal_operators() {
        let a = Action::new("a");
        let mut m = KripkeModel::new(3).unwrap();
        m.add_edge(&a, 0, 1);
        m.add_edge(&a, 1, 2);
        assert_eq!(
            m.diamond(&a, StateSet::singleton(2)),
            StateSet::singleton(1)
        );
        assert_eq!(m.boxed(&a, StateSet::singleton(2)), StateSet(0b110));
    }
}
