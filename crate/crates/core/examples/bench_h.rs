use std::time::Instant;
use gitkit_core::groebner::GroebnerBudget;
use gitkit_core::nonreductive::{HTester, HTestOutcome};
use gitkit_core::sampling::{random_polynomial, rng_from_seed};
use gitkit_core::rational::rati;

fn main() {
    let budget = GroebnerBudget::default();
    let mut rng = rng_from_seed(42);
    let deltas = [rati(-1), rati(0), rati(1)];
    let t0 = Instant::now();
    let mut counts = std::collections::BTreeMap::new();
    for idx in 0..1 {
        let p = random_polynomial(&mut rng, 4, 450);
        let tp = Instant::now();
        let tester = HTester::new(&p, &budget).unwrap();
        for delta in &deltas {
            match tester.test(delta).unwrap() {
                HTestOutcome::Decided(v) => *counts.entry(v.status.to_string()).or_insert(0) += 1,
                HTestOutcome::Undecided(u) => { *counts.entry(format!("undecided:{}", u.budget_failures)).or_insert(0) += 1; }
            }
        }
        println!("poly {idx}: {:?} ({} terms)", tp.elapsed(), p.support().len());
    }
    println!("total: {:?}  counts: {:?}", t0.elapsed(), counts);
}
