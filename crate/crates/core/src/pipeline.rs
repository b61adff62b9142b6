//! The whole construction for one connective, from its body to both axiom
//! systems.

use std::collections::BTreeSet;

use crate::axioms::{kozen_park, plus_axioms, AxiomSet, ChiMap};
use crate::eqsystem::{build_system, simulate, Representation, SimulateOptions, Simulation};
use crate::error::Result;
use crate::normal::{actions_for, preprocess, Preprocessed};
use crate::syntax::{Action, SharpSignature};

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub sig: SharpSignature,
    pub actions: BTreeSet<Action>,
    pub pre: Preprocessed,
    pub rep: Representation,
    pub sim: Simulation,
    pub chi: ChiMap,
    pub kff: AxiomSet,
    pub kplus: AxiomSet,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub simulate: SimulateOptions,
    pub lean: bool,
}

pub fn run_pipeline(
    sig: &SharpSignature,
    declared: Option<&BTreeSet<Action>>,
    opts: PipelineOptions,
) -> Result<Pipeline> {
    let actions = actions_for(sig, declared);
    let pre = preprocess(&sig.body, &sig.x, &actions)?;
    let rep = build_system(&pre.pure, &sig.x)?;
    let sim = simulate(&rep.system, opts.simulate)?;
    let chi = ChiMap::new(&rep, sig);
    let kplus = plus_axioms(sig, &sim, &chi, opts.lean)?;
    Ok(Pipeline {
        sig: sig.clone(),
        actions,
        pre,
        rep,
        sim,
        chi,
        kff: kozen_park(sig),
        kplus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signatures;

    #[test]
    fn first_example_names() {
        let sigs = Signatures::load("g(x; p) := (p & [a]x) | (~p & <a>(x & <a>x))").unwrap();
        let p = run_pipeline(sigs.get("g").unwrap(), None, PipelineOptions::default()).unwrap();
        let names: Vec<&str> = p.kplus.axioms.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["sharp-prefix", "A_g", "A_4", "A_g4"]);
        let rules: Vec<&str> = p.kplus.rules.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(rules, ["sharp-least", "R_g", "R_4", "R_g4"]);
        let lean = run_pipeline(
            sigs.get("g").unwrap(),
            None,
            PipelineOptions {
                lean: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(lean.kplus.axioms.len(), 3);
    }
}
