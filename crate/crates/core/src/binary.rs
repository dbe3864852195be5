//! Binary forms over ℚ and their rational projective roots.
//!
//! Roots in ℙ¹(ℚ) with multiplicities are found by exact synthetic division
//! against candidates from the rational root theorem; candidate divisors come
//! from trial division plus Pollard–Brent rho, which covers desk-scale
//! coefficients comfortably. The residual cofactor has no rational root.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::rational::Rat;

/// Homogeneous form of degree `n` in `(x, y)`; `coeffs[t]` multiplies
/// `x^(n-t) y^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub n: u32,
    pub coeffs: Vec<Rat>,
}

/// A point `[p : q]` of ℙ¹(ℚ) in lowest terms with `q > 0`, or `[1 : 0]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct P1Point {
    pub p: BigInt,
    pub q: BigInt,
}

impl P1Point {
    pub fn new(p: BigInt, q: BigInt) -> Self {
        assert!(!(p.is_zero() && q.is_zero()));
        if q.is_zero() {
            return P1Point { p: BigInt::one(), q: BigInt::zero() };
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        P1Point { p, q }
    }

    pub fn infinity() -> Self {
        P1Point { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn zero() -> Self {
        P1Point { p: BigInt::zero(), q: BigInt::one() }
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.p, self.q)
    }
}

impl BinaryForm {
    pub fn new(n: u32, coeffs: Vec<Rat>) -> Result<Self, CoreError> {
        if coeffs.len() != n as usize + 1 {
            return Err(CoreError::InvalidInput(format!(
                "degree-{n} form needs {} coefficients, got {}",
                n + 1,
                coeffs.len()
            )));
        }
        Ok(BinaryForm { n, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Value at `(x, y) = (p, q)`.
    pub fn eval(&self, p: &Rat, q: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..(self.n as usize - t) {
                term *= p;
            }
            for _ in 0..t {
                term *= q;
            }
            acc += term;
        }
        acc
    }
}

/// All rational projective roots with multiplicities, plus the cofactor with
/// no rational root; the product of `(q_r x − p_r y)^mult` over the roots
/// times the residual equals the input up to a nonzero scalar.
pub fn binary_form_rational_roots(b: &BinaryForm) -> (Vec<(P1Point, u32)>, BinaryForm) {
    assert!(!b.is_zero(), "zero form has no well-defined roots");
    let n = b.n as usize;
    // Multiplicity of [1:0] (factor y): leading zero coefficients.
    let t_min = b.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    // Multiplicity of [0:1] (factor x): trailing zero coefficients.
    let t_max = b.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    let mut roots: Vec<(P1Point, u32)> = Vec::new();
    if t_min > 0 {
        roots.push((P1Point::infinity(), t_min as u32));
    }
    if t_max < n {
        roots.push((P1Point::zero(), (n - t_max) as u32));
    }

    // Middle part: u = x/y polynomial with nonzero constant and leading
    // coefficients, f(u) = sum coeffs[t] u^(t_max - t) for t in t_min..=t_max.
    let mut f: Vec<Rat> = (t_min..=t_max).rev().map(|t| b.coeffs[t].clone()).collect();
    // f[e] multiplies u^e, f[0] != 0, f.last() != 0.
    if f.len() > 1 {
        // Clear denominators to integers.
        let mut lcm = BigInt::one();
        for c in &f {
            lcm = lcm.lcm(c.denom());
        }
        let fi: Vec<BigInt> = f.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let lead = fi.last().unwrap().clone();
        let constant = fi[0].clone();
        let p_cands = divisors(&constant.abs());
        let q_cands = divisors(&lead.abs());
        let mut seen: BTreeSet<P1Point> = BTreeSet::new();
        let mut candidates: Vec<Rat> = Vec::new();
        for p in &p_cands {
            for q in &q_cands {
                let pt = P1Point::new(p.clone(), q.clone());
                if seen.insert(pt.clone()) {
                    candidates.push(Rat::new(pt.p.clone(), pt.q.clone()));
                    candidates.push(Rat::new(-pt.p, pt.q));
                }
            }
        }
        candidates.sort();
        for r in candidates {
            let mut mult = 0u32;
            loop {
                let (quo, rem) = synthetic_divide(&f, &r);
                if rem.is_zero() && f.len() > 1 {
                    mult += 1;
                    f = quo;
                } else {
                    break;
                }
            }
            if mult > 0 {
                roots.push((P1Point::new(r.numer().clone(), r.denom().clone()), mult));
            }
        }
    }
    roots.sort();

    // Rehomogenize the residual to total degree n - (found multiplicities).
    let found: u32 = roots.iter().map(|(_, m)| m).sum();
    let res_deg = b.n - found;
    let mut coeffs = vec![Rat::zero(); res_deg as usize + 1];
    // Residual f has degree f.len()-1 in u = x/y; as a form of degree res_deg
    // the u^e coefficient sits at x^e y^(res_deg - e), i.e. index t = res_deg - e.
    for (e, c) in f.iter().enumerate() {
        coeffs[(res_deg as usize) - e] = c.clone();
    }
    (roots, BinaryForm { n: res_deg, coeffs })
}

/// Divides `f` (coefficients by ascending power) by `(u - r)`; returns
/// quotient and remainder.
fn synthetic_divide(f: &[Rat], r: &Rat) -> (Vec<Rat>, Rat) {
    let mut quo = vec![Rat::zero(); f.len() - 1];
    let mut carry = Rat::zero();
    for e in (0..f.len()).rev() {
        let v = &f[e] + &carry;
        if e == 0 {
            return (quo, v);
        }
        quo[e - 1] = v.clone();
        carry = v * r;
    }
    unreachable!()
}

/// All positive divisors, via factorization.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        // Divisor candidates of 0 are unconstrained; this happens only for
        // forms with zero constant term, which the caller strips first.
        return vec![BigInt::one()];
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(n.clone()) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Prime factorization by trial division then Pollard–Brent rho.
fn factorize(mut n: BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive());
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for small in 2u64..=65_536 {
        let sp = BigInt::from(small);
        if &sp * &sp > n {
            break;
        }
        while (&n % &sp).is_zero() {
            n /= &sp;
            push(sp.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with the fixed witness set (deterministic far beyond the
    // coefficient sizes this crate meets).
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = BigInt::one();
        let f = |v: &BigInt| (v * v + &c) % n;
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};

    fn form(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::new(coeffs.len() as u32 - 1, coeffs.iter().map(|&c| rati(c)).collect())
            .unwrap()
    }

    #[test]
    fn monomial_factorization() {
        // x^2 y: coefficient of x^2 y is at index t = 1.
        let b = form(&[0, 1, 0, 0]);
        let (roots, residual) = binary_form_rational_roots(&b);
        assert_eq!(
            roots,
            vec![(P1Point::zero(), 2), (P1Point::infinity(), 1)]
        );
        assert_eq!(residual.n, 0);
    }

    #[test]
    fn irreducible_quadratic() {
        // x^2 + y^2 has no rational roots.
        let b = form(&[1, 0, 1]);
        let (roots, residual) = binary_form_rational_roots(&b);
        assert!(roots.is_empty());
        assert_eq!(residual, b);
    }

    #[test]
    fn split_quadratic() {
        // x^2 - 3xy + 2y^2 = (x - y)(x - 2y).
        let b = form(&[1, -3, 2]);
        let (roots, residual) = binary_form_rational_roots(&b);
        assert_eq!(
            roots,
            vec![
                (P1Point::new(1.into(), 1.into()), 1),
                (P1Point::new(2.into(), 1.into()), 1)
            ]
        );
        assert_eq!(residual.n, 0);
        assert!(!residual.coeffs[0].is_zero());
    }

    #[test]
    fn fractional_root_and_multiplicity() {
        // (2x - y)^2 (x + 3y) = root [1:2] mult 2, root [-3:1] mult 1.
        // Expand: (4x^2 - 4xy + y^2)(x + 3y)
        //       = 4x^3 + 8x^2 y - 11x y^2 + 3y^3.
        let b = form(&[4, 8, -11, 3]);
        let (roots, residual) = binary_form_rational_roots(&b);
        assert_eq!(
            roots,
            vec![
                (P1Point::new((-3).into(), 1.into()), 1),
                (P1Point::new(1.into(), 2.into()), 2)
            ]
        );
        assert_eq!(residual.n, 0);
        // The factorization reproduces the form up to one global scalar.
        let factored = |px: &Rat, py: &Rat| -> Rat {
            let mut prod = residual.coeffs[0].clone();
            for (root, mult) in &roots {
                let lin = &Rat::from_integer(root.q.clone()) * px
                    - &Rat::from_integer(root.p.clone()) * py;
                for _ in 0..*mult {
                    prod *= &lin;
                }
            }
            prod
        };
        let base = (rati(1), rati(1));
        let scalar = b.eval(&base.0, &base.1) / factored(&base.0, &base.1);
        for (px, py) in [(rat(1, 3), rati(2)), (rati(-2), rat(5, 7)), (rati(4), rati(-1))] {
            assert_eq!(&scalar * factored(&px, &py), b.eval(&px, &py));
        }
    }

    #[test]
    fn divisor_enumeration() {
        let ds = divisors(&BigInt::from(12));
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert!(is_probable_prime(&BigInt::from(1_000_003)));
        assert!(!is_probable_prime(&BigInt::from(1_000_001)));
    }
}
