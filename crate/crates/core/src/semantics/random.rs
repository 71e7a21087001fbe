//! Seeded model generation and the fixed occurs-check countermodel.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Signature, Sort, Variable};

use super::{FiniteModel, SemanticsError, Valuation, MAX_CARRIER};

/// A model with the given carrier sizes in which functional symbols denote
/// total functions and injective symbols injective ones. Other symbols get
/// random (possibly empty) sets.
pub fn random_injective_model_sized(
    sig: &Signature,
    sizes: &BTreeMap<Sort, usize>,
    seed: u64,
) -> Result<FiniteModel, SemanticsError> {
    let mut m = FiniteModel::with_sizes(sig, sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in sig.symbols() {
        let tuples = m.tuples(&d.arity);
        let n = m.size(&d.result);
        if sig.is_injective(&d.name) {
            if tuples.len() > n {
                return Err(SemanticsError::NoInjectiveInterpretation(format!(
                    "`{}` has {} argument tuples but {} has {n} elements",
                    d.name,
                    tuples.len(),
                    d.result
                )));
            }
            let mut targets: Vec<usize> = (0..n).collect();
            targets.shuffle(&mut rng);
            for (args, &t) in tuples.iter().zip(&targets) {
                m.set(&d.name, args, 1 << t)?;
            }
        } else if sig.is_functional(&d.name) {
            for args in &tuples {
                m.set(&d.name, args, 1 << rng.gen_range(0..n))?;
            }
        } else {
            for args in &tuples {
                let set = (0..n).filter(|_| rng.gen_bool(0.5)).fold(0u64, |acc, i| acc | 1 << i);
                m.set(&d.name, args, set)?;
            }
        }
    }
    Ok(m)
}

/// Like [`random_injective_model_sized`] with every carrier of size
/// `carrier_size`, enlarging result carriers of injective symbols as
/// needed (up to 64 elements).
pub fn random_injective_model(sig: &Signature, carrier_size: usize, seed: u64) -> Result<FiniteModel, SemanticsError> {
    let mut sizes: BTreeMap<Sort, usize> = sig.sorts().map(|s| (s.clone(), carrier_size.max(1))).collect();
    loop {
        let short = sig.symbols().filter(|d| sig.is_injective(&d.name)).find_map(|d| {
            let need: usize = d.arity.iter().map(|s| sizes[s]).product();
            (need > sizes[&d.result]).then(|| (d.name.clone(), d.result.clone(), need))
        });
        match short {
            None => break,
            Some((_, sort, need)) if need <= MAX_CARRIER => {
                sizes.insert(sort, need);
            }
            Some((name, _, need)) => {
                return Err(SemanticsError::NoInjectiveInterpretation(format!(
                    "`{name}` needs {need} distinct results, over the carrier limit"
                )))
            }
        }
    }
    random_injective_model_sized(sig, &sizes, seed)
}

/// One sort with one element `a` and `f(a) = {a}`: `x /\ f(x)` matches `a`
/// although `x` and `f(x)` have no syntactic unifier.
pub fn occurs_check_countermodel() -> FiniteModel {
    let sig = Signature::parse("sort S\nsymbol f : S -> S [functional, injective]\n").expect("fixed signature");
    let carriers = BTreeMap::from([(Sort::new("S"), vec!["a".to_string()])]);
    let mut m = FiniteModel::new(&sig, carriers).expect("fixed carriers");
    m.set("f", &[0], 1).expect("fixed table");
    m
}

/// A seeded valuation of `vars`.
pub fn random_valuation(m: &FiniteModel, vars: &BTreeSet<Variable>, seed: u64) -> Valuation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vars.iter().map(|v| (v.clone(), rng.gen_range(0..m.size(&v.sort).max(1)))).collect()
}
