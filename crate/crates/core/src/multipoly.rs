//! Sparse multivariate polynomials over ℚ with a degrevlex term order.
//!
//! Terms live in a `BTreeMap` keyed by [`Mono`], whose `Ord` *is* the
//! degrevlex order (ascending), so the last map entry is the leading term.
//! That makes iteration order, display and the Groebner engine fully
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::Rat;

/// Exponent vector of a monomial. Ordered by degrevlex: higher total degree
/// is greater; at equal degree the monomial whose exponent drops first when
/// scanning variables from the back is greater.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n_vars: usize) -> Self {
        Mono(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime_with(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..self.0.len()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => {}
                // Smaller trailing exponent wins under degrevlex.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub n_vars: usize,
    pub terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero(n_vars: usize) -> Self {
        MPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = MPoly::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(n_vars), c);
        }
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rat::one())
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut p = MPoly::zero(n_vars);
        p.terms.insert(Mono::var(n_vars, idx), Rat::one());
        p
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = MPoly::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant polynomial? (Groebner unit detection.)
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::total_degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.n_vars);
        }
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = MPoly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Multiplies by a single term.
    pub fn mul_term(&self, m: &Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.n_vars);
        }
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one(self.n_vars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Replaces variable `idx` by `replacement` (same variable count).
    pub fn substitute(&self, idx: usize, replacement: &MPoly) -> MPoly {
        debug_assert_eq!(self.n_vars, replacement.n_vars);
        let max_pow = self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_pow as usize + 1);
        powers.push(MPoly::one(self.n_vars));
        for e in 1..=max_pow {
            powers.push(powers[e as usize - 1].mul(replacement));
        }
        let mut out = MPoly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut rest = m.clone();
            rest.0[idx] = 0;
            out = out.add(&powers[e as usize].mul_term(&rest, c));
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.n_vars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Splits each term by the exponents on the `outer` variables and returns,
    /// for every outer monomial, the coefficient polynomial in the remaining
    /// variables (still indexed in the full variable space).
    pub fn collect_by(&self, outer: &[usize]) -> BTreeMap<Mono, MPoly> {
        let mut out: BTreeMap<Mono, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut outer_m = Mono::one(self.n_vars);
            let mut inner_m = m.clone();
            for &v in outer {
                outer_m.0[v] = m.0[v];
                inner_m.0[v] = 0;
            }
            out.entry(outer_m)
                .or_insert_with(|| MPoly::zero(self.n_vars))
                .add_term(inner_m, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.n_vars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    /// Extends the variable space to `n_new ≥ n_vars`, keeping exponents in
    /// place.
    pub fn pad_vars(&self, n_new: usize) -> MPoly {
        assert!(n_new >= self.n_vars);
        let mut out = MPoly::zero(n_new);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(n_new, 0);
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Repacks the polynomial onto the given subset of variables (which must
    /// contain every variable in the support).
    pub fn project_to_vars(&self, vars: &[usize]) -> MPoly {
        let mut pos = vec![usize::MAX; self.n_vars];
        for (new, &old) in vars.iter().enumerate() {
            pos[old] = new;
        }
        let mut out = MPoly::zero(vars.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    assert!(pos[i] != usize::MAX, "variable outside projection set");
                    e[pos[i]] = exp;
                }
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Display with the given variable names, highest term first.
    pub fn format_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(names[i].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n_vars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.format_with(&refs))
    }
}
