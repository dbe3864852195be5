//! Buchberger's algorithm over ℚ with degrevlex order, used as a decision
//! kernel: a proper ideal in ℚ[x₁..xₙ] has a common zero over the algebraic
//! closure, and a Groebner basis over ℚ stays one after extending the field,
//! so `1 ∈ I` can be read off the completed basis.
//!
//! The computation carries an explicit budget and aborts loudly when it is
//! exceeded; it never degrades to a guess.

use std::collections::BTreeSet;

use num_traits::One;

use crate::error::CoreError;
use crate::multipoly::{MPoly, Mono};

/// Work bound for a single basis computation, counted in S-pair reductions.
#[derive(Debug, Clone, Copy)]
pub struct GroebnerBudget {
    pub max_pair_reductions: usize,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget { max_pair_reductions: 100_000 }
    }
}

impl GroebnerBudget {
    /// Reads `GITKIT_GROEBNER_BUDGET` when set, else the default.
    pub fn from_env() -> Self {
        match std::env::var("GITKIT_GROEBNER_BUDGET") {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => GroebnerBudget { max_pair_reductions: n },
                _ => GroebnerBudget::default(),
            },
            Err(_) => GroebnerBudget::default(),
        }
    }
}

/// A finitely generated ideal in a named polynomial ring over ℚ.
#[derive(Debug, Clone)]
pub struct PolynomialIdeal {
    pub variables: Vec<String>,
    pub generators: Vec<MPoly>,
}

impl PolynomialIdeal {
    pub fn new(variables: Vec<String>, generators: Vec<MPoly>) -> Result<Self, CoreError> {
        for g in &generators {
            if g.n_vars != variables.len() {
                return Err(CoreError::InvalidInput(format!(
                    "generator uses {} variables, ring declares {}",
                    g.n_vars,
                    variables.len()
                )));
            }
        }
        Ok(PolynomialIdeal { variables, generators })
    }
}

fn make_monic(p: &MPoly) -> MPoly {
    match p.leading() {
        Some((_, c)) => {
            let inv = Rat_recip(c);
            p.scale(&inv)
        }
        None => p.clone(),
    }
}

#[allow(non_snake_case)]
fn Rat_recip(c: &crate::rational::Rat) -> crate::rational::Rat {
    crate::rational::Rat::one() / c
}

/// Full normal form of `f` modulo `basis`.
fn normal_form(mut f: MPoly, basis: &[MPoly]) -> MPoly {
    let mut remainder = MPoly::zero(f.n_vars);
    'outer: while let Some((lm, lc)) = f.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            let (glm, glc) = match g.leading() {
                Some(x) => x,
                None => continue,
            };
            if let Some(q) = lm.checked_div(glm) {
                let factor = &lc / glc;
                f = f.sub(&g.mul_term(&q, &factor));
                continue 'outer;
            }
        }
        // Leading term irreducible: shift it to the remainder.
        remainder.add_term(lm.clone(), lc.clone());
        f.terms.remove(&lm);
    }
    remainder
}

fn s_poly(f: &MPoly, g: &MPoly) -> MPoly {
    let (fl, fc) = f.leading().expect("nonzero");
    let (gl, gc) = g.leading().expect("nonzero");
    let l = fl.lcm(gl);
    let qf = l.checked_div(fl).unwrap();
    let qg = l.checked_div(gl).unwrap();
    f.mul_term(&qf, &Rat_recip(fc)).sub(&g.mul_term(&qg, &Rat_recip(gc)))
}

/// Reduced Groebner basis of the generators (degrevlex). The empty basis is
/// returned for the zero ideal, `[1]` for the unit ideal.
pub fn groebner_basis(
    generators: &[MPoly],
    budget: &GroebnerBudget,
) -> Result<Vec<MPoly>, CoreError> {
    let mut basis: Vec<MPoly> = Vec::new();
    for g in generators {
        if !g.is_zero() {
            basis.push(make_monic(g));
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    if basis.iter().any(MPoly::is_nonzero_constant) {
        return Ok(vec![MPoly::one(generators[0].n_vars)]);
    }

    // Pending S-pairs keyed by (lcm degree, lcm, i, j) for a deterministic
    // normal selection strategy.
    let mut pending: BTreeSet<(u32, Mono, usize, usize)> = BTreeSet::new();
    let mut add_pairs = |pending: &mut BTreeSet<(u32, Mono, usize, usize)>,
                         basis: &[MPoly],
                         new_idx: usize| {
        let new_lm = basis[new_idx].leading().unwrap().0.clone();
        for i in 0..new_idx {
            let lm_i = basis[i].leading().unwrap().0;
            let l = lm_i.lcm(&new_lm);
            pending.insert((l.total_degree(), l, i, new_idx));
        }
    };
    for idx in 0..basis.len() {
        add_pairs(&mut pending, &basis, idx);
    }

    let mut reductions = 0usize;
    while let Some(entry) = pending.iter().next().cloned() {
        pending.remove(&entry);
        let (_, ref lcm, i, j) = entry;

        let lm_i = basis[i].leading().unwrap().0.clone();
        let lm_j = basis[j].leading().unwrap().0.clone();
        // Product criterion: coprime leading monomials reduce to zero.
        if lm_i.is_coprime_with(&lm_j) {
            continue;
        }
        // Chain criterion: some k divides the lcm and both mixed pairs are
        // already settled.
        let mut skip = false;
        for (k, gk) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let lm_k = gk.leading().unwrap().0;
            if lcm.checked_div(lm_k).is_some() {
                let pair_ik = pair_key(&basis, i, k);
                let pair_jk = pair_key(&basis, j, k);
                if !pending.contains(&pair_ik) && !pending.contains(&pair_jk) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }

        reductions += 1;
        if reductions > budget.max_pair_reductions {
            return Err(CoreError::GroebnerBudget { pairs_processed: reductions });
        }
        let r = normal_form(s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_nonzero_constant() {
            return Ok(vec![MPoly::one(r.n_vars)]);
        }
        basis.push(make_monic(&r));
        add_pairs(&mut pending, &basis, basis.len() - 1);
    }

    Ok(reduce_basis(basis))
}

fn pair_key(basis: &[MPoly], a: usize, b: usize) -> (u32, Mono, usize, usize) {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    let l = basis[i].leading().unwrap().0.lcm(basis[j].leading().unwrap().0);
    (l.total_degree(), l, i, j)
}

/// Minimizes and auto-reduces a Groebner basis.
fn reduce_basis(mut basis: Vec<MPoly>) -> Vec<MPoly> {
    // Drop elements whose leading monomial is divisible by another leading
    // monomial.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lm_i = basis[i].leading().unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lm_j = basis[j].leading().unwrap().0;
            if lm_i.checked_div(lm_j).is_some() && (lm_j != &lm_i || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let kept: Vec<MPoly> =
        basis.drain(..).zip(keep).filter_map(|(p, k)| if k { Some(p) } else { None }).collect();
    // Fully reduce each element modulo the others.
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<MPoly> =
            kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let r = normal_form(kept[i].clone(), &others);
        if !r.is_zero() {
            out.push(make_monic(&r));
        }
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Decides `1 ∉ I` by a complete basis computation. At most 8 variables
/// (desk-scale guard); unused variables are projected away first.
pub fn ideal_is_proper(ideal: &PolynomialIdeal, budget: &GroebnerBudget) -> Result<bool, CoreError> {
    if ideal.variables.len() > 8 {
        return Err(CoreError::InvalidInput(format!(
            "ideal in {} variables exceeds the 8-variable guard",
            ideal.variables.len()
        )));
    }
    let live: Vec<MPoly> = ideal.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if live.is_empty() {
        return Ok(true);
    }
    if live.iter().any(MPoly::is_nonzero_constant) {
        return Ok(false);
    }
    // Restrict to the variables that occur; properness is unaffected.
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for g in &live {
        used.extend(g.support_vars());
    }
    let vars: Vec<usize> = used.into_iter().collect();
    let projected: Vec<MPoly> = live.iter().map(|g| g.project_to_vars(&vars)).collect();
    let gb = groebner_basis(&projected, budget)?;
    Ok(!gb.iter().any(MPoly::is_nonzero_constant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::MPoly;
    use crate::rational::rati;

    fn ring3() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn proper_single_affine_generator() {
        // {a - 1} is proper.
        let g = MPoly::var(3, 0).sub(&MPoly::one(3));
        let ideal = PolynomialIdeal::new(ring3(), vec![g]).unwrap();
        assert!(ideal_is_proper(&ideal, &GroebnerBudget::default()).unwrap());
    }

    #[test]
    fn improper_when_one_is_reachable() {
        // {a, a - 1} contains 1.
        let a = MPoly::var(3, 0);
        let ideal =
            PolynomialIdeal::new(ring3(), vec![a.clone(), a.sub(&MPoly::one(3))]).unwrap();
        assert!(!ideal_is_proper(&ideal, &GroebnerBudget::default()).unwrap());
    }

    #[test]
    fn proper_without_rational_zero() {
        // {a^2 + 1} has no rational zero but is proper (zero over the closure).
        let g = MPoly::var(3, 0).pow(2).add(&MPoly::one(3));
        let ideal = PolynomialIdeal::new(ring3(), vec![g]).unwrap();
        assert!(ideal_is_proper(&ideal, &GroebnerBudget::default()).unwrap());
    }

    #[test]
    fn katsura_like_system_completes() {
        // (a+2b+2c-1, a^2+2b^2+2c^2-a, 2ab+2bc-b): a standard small system.
        let a = MPoly::var(3, 0);
        let b = MPoly::var(3, 1);
        let c = MPoly::var(3, 2);
        let one = MPoly::one(3);
        let g1 = a.add(&b.scale(&rati(2))).add(&c.scale(&rati(2))).sub(&one);
        let g2 = a.pow(2).add(&b.pow(2).scale(&rati(2))).add(&c.pow(2).scale(&rati(2))).sub(&a);
        let g3 = a.mul(&b).scale(&rati(2)).add(&b.mul(&c).scale(&rati(2))).sub(&b);
        let gb = groebner_basis(&[g1, g2, g3], &GroebnerBudget::default()).unwrap();
        assert!(!gb.is_empty());
        assert!(!gb.iter().any(MPoly::is_nonzero_constant));
        // Groebner property: every pairwise S-polynomial reduces to zero.
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                let r = normal_form(s_poly(&gb[i], &gb[j]), &gb);
                assert!(r.is_zero(), "S-poly ({i},{j}) did not reduce to zero");
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_loud() {
        // Leading monomials a^2 and ab share a factor, so at least one S-pair
        // must be reduced; a zero budget therefore always trips.
        let a = MPoly::var(3, 0);
        let b = MPoly::var(3, 1);
        let g1 = a.pow(2).sub(&b);
        let g2 = a.mul(&b).sub(&MPoly::one(3));
        let tiny = GroebnerBudget { max_pair_reductions: 0 };
        match groebner_basis(&[g1, g2], &tiny) {
            Err(CoreError::GroebnerBudget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn variable_guard() {
        let vars: Vec<String> = (0..9).map(|i| format!("v{i}")).collect();
        let ideal = PolynomialIdeal::new(vars, vec![MPoly::var(9, 0)]).unwrap();
        assert!(matches!(
            ideal_is_proper(&ideal, &GroebnerBudget::default()),
            Err(CoreError::InvalidInput(_))
        ));
    }
}
