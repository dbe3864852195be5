//! Weighted-homogeneous polynomials in `x, y, z` with `deg x = deg y = 1`,
//! `deg z = 2`, the substitution actions of the unipotent group
//! `(α,β,γ) : z ↦ z + αx² + βxy + γy²` and of `GL(2)` on `(x, y)` with
//! `z ↦ (det g)⁻¹ z`, and the z-section multiplicity that controls the
//! worst-case unipotent degeneration.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::groebner::{ideal_is_proper, GroebnerBudget, PolynomialIdeal};
use crate::linalg::QMatrix;
use crate::multipoly::{MPoly, Mono};
use crate::rational::Rat;

/// Monomial `x^i y^j z^k`; inside a grade-`d` polynomial it satisfies
/// `i + j + 2k = d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedMonomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl WeightedMonomial {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        WeightedMonomial { i, j, k }
    }

    pub fn weighted_degree(&self) -> u32 {
        self.i + self.j + 2 * self.k
    }
}

/// Basis order: z-power ascending, then x-power descending, matching the
/// printed degree-4 basis `x⁴, x³y, x²y², xy³, y⁴, x²z, xyz, y²z, z²`.
impl Ord for WeightedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k.cmp(&other.k).then(other.i.cmp(&self.i)).then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for WeightedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeightedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.i), ("y", self.j), ("z", self.k)] {
            if e == 1 {
                parts.push(name.to_string());
            } else if e > 1 {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All `(i, j, k)` with `i + j + 2k = d` in basis order.
pub fn monomial_basis(d: u32) -> Vec<WeightedMonomial> {
    let mut out = Vec::new();
    for k in 0..=d / 2 {
        let rest = d - 2 * k;
        for j in 0..=rest {
            out.push(WeightedMonomial::new(rest - j, j, k));
        }
    }
    out
}

/// Element `(α, β, γ)` of `U = (ℂ⁺)³` acting by
/// `[x : y : z] ↦ [x : y : z + αx² + βxy + γy²]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentElement {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
}

impl UnipotentElement {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat) -> Self {
        UnipotentElement { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        UnipotentElement::new(Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn add(&self, other: &UnipotentElement) -> UnipotentElement {
        UnipotentElement::new(
            &self.alpha + &other.alpha,
            &self.beta + &other.beta,
            &self.gamma + &other.gamma,
        )
    }
}

/// Invertible rational 2x2 matrix with cached determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GL2Element {
    entries: [[Rat; 2]; 2],
    det: Rat,
}

impl GL2Element {
    pub fn new(entries: [[Rat; 2]; 2]) -> Result<Self, CoreError> {
        let det = &entries[0][0] * &entries[1][1] - &entries[0][1] * &entries[1][0];
        if det.is_zero() {
            return Err(CoreError::SingularMatrix);
        }
        Ok(GL2Element { entries, det })
    }

    pub fn identity() -> Self {
        GL2Element::new([[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]]).unwrap()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r][c]
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn mul(&self, other: &GL2Element) -> GL2Element {
        let mut e = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
        for (r, row) in e.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = &self.entries[r][0] * &other.entries[0][c]
                    + &self.entries[r][1] * &other.entries[1][c];
            }
        }
        GL2Element::new(e).expect("product of invertible matrices")
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_rows(vec![
            vec![self.entries[0][0].clone(), self.entries[0][1].clone()],
            vec![self.entries[1][0].clone(), self.entries[1][1].clone()],
        ])
        .unwrap()
    }
}

/// Sparse weighted-homogeneous polynomial of grade `d`.
///
/// The empty term map is the zero polynomial; it can be constructed
/// explicitly but is rejected by every stability operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPolynomial {
    d: u32,
    terms: BTreeMap<WeightedMonomial, Rat>,
}

impl WeightedPolynomial {
    pub fn zero(d: u32) -> Self {
        WeightedPolynomial { d, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        d: u32,
        terms: impl IntoIterator<Item = (WeightedMonomial, Rat)>,
    ) -> Result<Self, CoreError> {
        let mut p = WeightedPolynomial::zero(d);
        for (m, c) in terms {
            if m.weighted_degree() != d {
                return Err(CoreError::DegreeMismatch { expected: d, found: m.weighted_degree() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Convenience constructor from `(i, j, k, coefficient)` tuples.
    pub fn from_integer_terms(d: u32, terms: &[(u32, u32, u32, i64)]) -> Result<Self, CoreError> {
        Self::from_terms(
            d,
            terms
                .iter()
                .map(|&(i, j, k, c)| (WeightedMonomial::new(i, j, k), Rat::from_integer(c.into()))),
        )
    }

    fn add_term(&mut self, m: WeightedMonomial, c: Rat) {
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

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightedMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<WeightedMonomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, m: &WeightedMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> WeightedPolynomial {
        if c.is_zero() {
            return WeightedPolynomial::zero(self.d);
        }
        WeightedPolynomial { d: self.d, terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect() }
    }

    pub fn add(&self, other: &WeightedPolynomial) -> WeightedPolynomial {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// The coefficient binary forms per z-level: `k ↦ {(i, j) ↦ c}`.
    pub fn z_levels(&self) -> BTreeMap<u32, BTreeMap<(u32, u32), Rat>> {
        let mut out: BTreeMap<u32, BTreeMap<(u32, u32), Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.k).or_default().insert((m.i, m.j), c.clone());
        }
        out
    }

    /// Minimum and maximum z-exponent over the support.
    pub fn z_degree_range(&self) -> Result<(u32, u32), CoreError> {
        if self.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let ks: Vec<u32> = self.terms.keys().map(|m| m.k).collect();
        Ok((*ks.iter().min().unwrap(), *ks.iter().max().unwrap()))
    }

    /// `p(x, y, z + αx² + βxy + γy²)`, expanded and normalized.
    pub fn apply_unipotent(&self, u: &UnipotentElement) -> Result<WeightedPolynomial, CoreError> {
        if self.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        if u.is_identity() {
            return Ok(self.clone());
        }
        // Powers of q = αx² + βxy + γy² as binary forms (i, j) ↦ coeff.
        let (_, k_max) = self.z_degree_range()?;
        let q: BTreeMap<(u32, u32), Rat> = [
            ((2, 0), u.alpha.clone()),
            ((1, 1), u.beta.clone()),
            ((0, 2), u.gamma.clone()),
        ]
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .collect();
        let mut q_pows: Vec<BTreeMap<(u32, u32), Rat>> = vec![BTreeMap::new(); k_max as usize + 1];
        q_pows[0].insert((0, 0), Rat::one());
        for e in 1..=k_max as usize {
            let mut next: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
            for ((ia, ja), ca) in &q_pows[e - 1] {
                for ((ib, jb), cb) in &q {
                    let entry = next.entry((ia + ib, ja + jb)).or_insert_with(Rat::zero);
                    *entry += ca * cb;
                }
            }
            next.retain(|_, c| !c.is_zero());
            q_pows[e] = next;
        }

        let mut out = WeightedPolynomial::zero(self.d);
        for (m, c) in &self.terms {
            // (z + q)^k = sum over z_pow of C(k, z_pow) z^z_pow q^(k - z_pow)
            for z_pow in 0..=m.k {
                let binom = binomial_rat(m.k, z_pow);
                for ((qi, qj), qc) in &q_pows[(m.k - z_pow) as usize] {
                    out.add_term(
                        WeightedMonomial::new(m.i + qi, m.j + qj, z_pow),
                        c * &binom * qc,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Substitutes `(x, y) ↦ (x, y)·g` and `z ↦ (det g)⁻¹ z`.
    ///
    /// Direct substitution, so applying `g₁` then `g₂` equals applying
    /// `g₂g₁`; inverting a group element means inverting the matrix.
    pub fn apply_gl2(&self, g: &GL2Element) -> Result<WeightedPolynomial, CoreError> {
        if self.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let x_image: [(u32, u32, Rat); 2] =
            [(1, 0, g.entry(0, 0).clone()), (0, 1, g.entry(1, 0).clone())];
        let y_image: [(u32, u32, Rat); 2] =
            [(1, 0, g.entry(0, 1).clone()), (0, 1, g.entry(1, 1).clone())];
        let det_inv = Rat::one() / g.det().clone();

        let mut out = WeightedPolynomial::zero(self.d);
        for (m, c) in &self.terms {
            let mut form: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
            form.insert((0, 0), c.clone());
            for (img, power) in [(&x_image, m.i), (&y_image, m.j)] {
                for _ in 0..power {
                    let mut next: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
                    for ((ia, ja), ca) in &form {
                        for (bi, bj, bc) in img.iter() {
                            if bc.is_zero() {
                                continue;
                            }
                            let entry = next.entry((ia + bi, ja + bj)).or_insert_with(Rat::zero);
                            *entry += ca * bc;
                        }
                    }
                    next.retain(|_, v| !v.is_zero());
                    form = next;
                }
            }
            let mut z_factor = Rat::one();
            for _ in 0..m.k {
                z_factor *= &det_inv;
            }
            for ((fi, fj), fc) in form {
                out.add_term(WeightedMonomial::new(fi, fj, m.k), fc * &z_factor);
            }
        }
        Ok(out)
    }

    /// Maximum multiplicity of a factor `(z − q)`, `q = αx² + βxy + γy²`
    /// ranging over the algebraic closure.
    ///
    /// `(z − q)^m` divides `p` iff all z-derivatives of order `< m` vanish at
    /// `z = q`, so the test is properness of the ideal generated by the
    /// `(x, y)`-coefficients of those substituted derivatives — decided by a
    /// complete Groebner computation, never by numerical roots.
    pub fn section_multiplicity(&self, budget: &GroebnerBudget) -> Result<u32, CoreError> {
        if self.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let (_, k_max) = self.z_degree_range()?;
        let mut generators: Vec<MPoly> = Vec::new();
        let vars = vec!["alpha".to_string(), "beta".to_string(), "gamma".to_string()];
        for t in 0..=k_max {
            generators.extend(self.z_derivative_section_coeffs(t));
            let ideal = PolynomialIdeal::new(vars.clone(), generators.clone())?;
            if !ideal_is_proper(&ideal, budget)? {
                return Ok(t);
            }
        }
        // The order-k_max derivative substitutes to a nonzero constant form,
        // so the loop always exits by improperness at t = k_max at the latest.
        unreachable!("substituted derivative of order k_max is a nonzero binary form");
    }

    /// `(α,β,γ)`-coefficient polynomials of `∂ᵗp/∂zᵗ` at `z = αx²+βxy+γy²`,
    /// one per `(x, y)` monomial.
    fn z_derivative_section_coeffs(&self, t: u32) -> Vec<MPoly> {
        // Variables: 0..3 = (alpha, beta, gamma), 3..5 = (x, y).
        let n = 5;
        let q = MPoly::from_terms(
            n,
            [
                (Mono(vec![1, 0, 0, 2, 0]), Rat::one()),
                (Mono(vec![0, 1, 0, 1, 1]), Rat::one()),
                (Mono(vec![0, 0, 1, 0, 2]), Rat::one()),
            ],
        );
        let mut substituted = MPoly::zero(n);
        for (m, c) in &self.terms {
            if m.k < t {
                continue;
            }
            let falling: Rat = falling_factorial(m.k, t);
            let xy = MPoly::from_terms(n, [(Mono(vec![0, 0, 0, m.i, m.j]), c * &falling)]);
            substituted = substituted.add(&xy.mul(&q.pow(m.k - t)));
        }
        substituted
            .collect_by(&[3, 4])
            .into_values()
            .map(|p| p.project_to_vars(&[0, 1, 2]))
            .collect()
    }
}

fn binomial_rat(n: u32, k: u32) -> Rat {
    let mut out = Rat::one();
    for t in 0..k {
        out *= Rat::from_integer((n - t).into());
        out /= Rat::from_integer((t + 1).into());
    }
    out
}

fn falling_factorial(n: u32, t: u32) -> Rat {
    let mut out = Rat::one();
    for s in 0..t {
        out *= Rat::from_integer((n - s).into());
    }
    out
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_constant_monomial = m.i == 0 && m.j == 0 && m.k == 0;
            if !abs.is_one() || is_constant_monomial {
                write!(f, "{abs}")?;
                if !is_constant_monomial {
                    write!(f, "*")?;
                }
            }
            if !is_constant_monomial {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

/// Column `c` is the expansion of `basis[c](x, y, z + λx² + μxy + νy²)` in
/// the degree-`d` basis; entries are polynomials in `(λ, μ, ν)`.
pub fn u_action_matrix(d: u32) -> Vec<Vec<MPoly>> {
    // Variables: 0..3 = (λ, μ, ν), 3..6 = (x, y, z).
    let n = 6;
    let basis = monomial_basis(d);
    let index: BTreeMap<WeightedMonomial, usize> =
        basis.iter().enumerate().map(|(r, m)| (*m, r)).collect();
    let q = MPoly::from_terms(
        n,
        [
            (Mono(vec![1, 0, 0, 2, 0, 0]), Rat::one()),
            (Mono(vec![0, 1, 0, 1, 1, 0]), Rat::one()),
            (Mono(vec![0, 0, 1, 0, 2, 0]), Rat::one()),
        ],
    );
    let z_plus_q = MPoly::var(n, 5).add(&q);

    let mut matrix = vec![vec![MPoly::zero(3); basis.len()]; basis.len()];
    for (col, m) in basis.iter().enumerate() {
        let xy = MPoly::from_terms(n, [(Mono(vec![0, 0, 0, m.i, m.j, 0]), Rat::one())]);
        let image = xy.mul(&z_plus_q.pow(m.k));
        for (outer, coeff) in image.collect_by(&[3, 4, 5]) {
            let mono = WeightedMonomial::new(outer.0[3], outer.0[4], outer.0[5]);
            let row = index[&mono];
            matrix[row][col] = coeff.project_to_vars(&[0, 1, 2]);
        }
    }
    matrix
}

/// Homogeneous polynomial in `X, Y, W, z` of degree `d/2`, the target of the
/// square-root embedding below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly4 {
    pub degree: u32,
    pub terms: BTreeMap<[u32; 4], Rat>,
}

impl Poly4 {
    /// Substitutes `X = x², Y = y², W = xy` back, recovering a weighted
    /// polynomial of grade `2 · degree`.
    pub fn pull_back(&self) -> WeightedPolynomial {
        let mut p = WeightedPolynomial::zero(2 * self.degree);
        for ([a, b, w, k], c) in &self.terms {
            p.add_term(WeightedMonomial::new(2 * a + w, 2 * b + w, *k), c.clone());
        }
        p
    }
}

/// Termwise square-root embedding for even grade: `x^i y^j z^k` maps to
/// `X^{(i−m)/2} Y^{(j−m)/2} W^m z^k` with `m = min(i, j)`, so that
/// `p̂(x², y², xy, z) = p(x, y, z)` exactly.
pub fn embed_hat(p: &WeightedPolynomial) -> Result<Poly4, CoreError> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    let d = p.degree();
    if d % 2 != 0 {
        return Err(CoreError::OddDegree(d));
    }
    let mut terms = BTreeMap::new();
    for (m, c) in p.terms() {
        let w = m.i.min(m.j);
        let key = [(m.i - w) / 2, (m.j - w) / 2, w, m.k];
        terms.insert(key, c.clone());
    }
    Ok(Poly4 { degree: d / 2, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};

    fn wm(i: u32, j: u32, k: u32) -> WeightedMonomial {
        WeightedMonomial::new(i, j, k)
    }

    #[test]
    fn basis_matches_printed_order_for_d4() {
        let names: Vec<String> = monomial_basis(4).iter().map(|m| m.to_string()).collect();
        assert_eq!(
            names,
            ["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4", "x^2*z", "x*y*z", "y^2*z", "z^2"]
        );
    }

    #[test]
    fn basis_degenerate_and_derived_cases() {
        assert_eq!(monomial_basis(0), vec![wm(0, 0, 0)]);
        // Independent enumeration oracle for d = 2.
        let mut brute: Vec<WeightedMonomial> = Vec::new();
        for i in 0..=2u32 {
            for j in 0..=2u32 {
                for k in 0..=1u32 {
                    if i + j + 2 * k == 2 {
                        brute.push(wm(i, j, k));
                    }
                }
            }
        }
        brute.sort();
        assert_eq!(monomial_basis(2), brute);
        assert_eq!(monomial_basis(2), vec![wm(2, 0, 0), wm(1, 1, 0), wm(0, 2, 0), wm(0, 0, 1)]);
    }

    #[test]
    fn unipotent_action_on_x2z() {
        let p = WeightedPolynomial::from_integer_terms(4, &[(2, 0, 1, 1)]).unwrap();
        let u = UnipotentElement::new(rati(1), rati(0), rati(0));
        let moved = p.apply_unipotent(&u).unwrap();
        let expected =
            WeightedPolynomial::from_integer_terms(4, &[(2, 0, 1, 1), (4, 0, 0, 1)]).unwrap();
        assert_eq!(moved, expected);
        assert_eq!(p.apply_unipotent(&UnipotentElement::identity()).unwrap(), p);
        assert!(WeightedPolynomial::zero(4)
            .apply_unipotent(&UnipotentElement::identity())
            .is_err());
    }

    #[test]
    fn unipotent_action_on_z2_full() {
        // (z + λx² + μxy + νy²)² with (λ, μ, ν) = (1, 2, 3).
        let p = WeightedPolynomial::from_integer_terms(4, &[(0, 0, 2, 1)]).unwrap();
        let u = UnipotentElement::new(rati(1), rati(2), rati(3));
        let moved = p.apply_unipotent(&u).unwrap();
        let expected = WeightedPolynomial::from_integer_terms(
            4,
            &[
                (0, 0, 2, 1),
                (2, 0, 1, 2),  // 2λ
                (1, 1, 1, 4),  // 2μ
                (0, 2, 1, 6),  // 2ν
                (4, 0, 0, 1),  // λ²
                (3, 1, 0, 4),  // 2λμ
                (2, 2, 0, 10), // 2λν + μ²
                (1, 3, 0, 12), // 2μν
                (0, 4, 0, 9),  // ν²
            ],
        )
        .unwrap();
        assert_eq!(moved, expected);
    }

    #[test]
    fn gl2_scaling_and_swap() {
        let p = WeightedPolynomial::from_integer_terms(4, &[(2, 0, 1, 1)]).unwrap();
        // diag(t, t) scales x^i y^j z^k by t^(i+j-2k); for x^2 z that is 1.
        let g = GL2Element::new([[rati(3), rati(0)], [rati(0), rati(3)]]).unwrap();
        assert_eq!(p.apply_gl2(&g).unwrap(), p);
        // The swap has det -1 and sends z to -z: x^2 z ↦ -y^2 z.
        let s = GL2Element::new([[rati(0), rati(1)], [rati(1), rati(0)]]).unwrap();
        let expected = WeightedPolynomial::from_integer_terms(4, &[(0, 2, 1, -1)]).unwrap();
        assert_eq!(p.apply_gl2(&s).unwrap(), expected);
        assert_eq!(p.apply_gl2(&GL2Element::identity()).unwrap(), p);
        assert!(GL2Element::new([[rati(1), rati(2)], [rati(2), rati(4)]]).is_err());
    }

    #[test]
    fn gl2_composition_order() {
        // Applying g1 then g2 equals applying g2·g1 under direct substitution.
        let p = WeightedPolynomial::from_integer_terms(
            4,
            &[(4, 0, 0, 1), (1, 1, 1, -2), (0, 0, 2, 3)],
        )
        .unwrap();
        let g1 = GL2Element::new([[rati(1), rati(2)], [rati(-1), rati(1)]]).unwrap();
        let g2 = GL2Element::new([[rat(1, 2), rati(0)], [rati(3), rati(1)]]).unwrap();
        let lhs = p.apply_gl2(&g1).unwrap().apply_gl2(&g2).unwrap();
        let rhs = p.apply_gl2(&g2.mul(&g1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn z_range_examples() {
        let z2 = WeightedPolynomial::from_integer_terms(4, &[(0, 0, 2, 1)]).unwrap();
        assert_eq!(z2.z_degree_range().unwrap(), (2, 2));
        let mixed =
            WeightedPolynomial::from_integer_terms(4, &[(4, 0, 0, 1), (0, 0, 2, 1)]).unwrap();
        assert_eq!(mixed.z_degree_range().unwrap(), (0, 2));
        let level1 =
            WeightedPolynomial::from_integer_terms(4, &[(2, 0, 1, 1), (1, 1, 1, 1)]).unwrap();
        assert_eq!(level1.z_degree_range().unwrap(), (1, 1));
        assert!(WeightedPolynomial::zero(4).z_degree_range().is_err());
    }

    #[test]
    fn section_multiplicity_examples() {
        let budget = GroebnerBudget::default();
        // (z - x^2)^2 = z^2 - 2x^2 z + x^4.
        let square = WeightedPolynomial::from_integer_terms(
            4,
            &[(0, 0, 2, 1), (2, 0, 1, -2), (4, 0, 0, 1)],
        )
        .unwrap();
        assert_eq!(square.section_multiplicity(&budget).unwrap(), 2);
        // z^2 - x^2 y^2 = (z - xy)(z + xy).
        let split =
            WeightedPolynomial::from_integer_terms(4, &[(0, 0, 2, 1), (2, 2, 0, -1)]).unwrap();
        assert_eq!(split.section_multiplicity(&budget).unwrap(), 1);
        // z^2 + x^4 factors only over the closure; still multiplicity 1.
        let gauss =
            WeightedPolynomial::from_integer_terms(4, &[(0, 0, 2, 1), (4, 0, 0, 1)]).unwrap();
        assert_eq!(gauss.section_multiplicity(&budget).unwrap(), 1);
        // No z at all: multiplicity 0.
        let pure = WeightedPolynomial::from_integer_terms(4, &[(4, 0, 0, 1)]).unwrap();
        assert_eq!(pure.section_multiplicity(&budget).unwrap(), 0);
    }

    #[test]
    fn embed_hat_examples() {
        let x4 = WeightedPolynomial::from_integer_terms(4, &[(4, 0, 0, 1)]).unwrap();
        let hat = embed_hat(&x4).unwrap();
        assert_eq!(hat.terms.len(), 1);
        assert!(hat.terms.contains_key(&[2, 0, 0, 0]));
        let x2y2 = WeightedPolynomial::from_integer_terms(4, &[(2, 2, 0, 1)]).unwrap();
        assert!(embed_hat(&x2y2).unwrap().terms.contains_key(&[0, 0, 2, 0]));
        let z2 = WeightedPolynomial::from_integer_terms(4, &[(0, 0, 2, 1)]).unwrap();
        assert!(embed_hat(&z2).unwrap().terms.contains_key(&[0, 0, 0, 2]));
        // Defining identity on a mixed polynomial.
        let p = WeightedPolynomial::from_integer_terms(
            6,
            &[(6, 0, 0, 2), (3, 1, 1, -5), (1, 1, 2, 7), (2, 4, 0, 1)],
        )
        .unwrap();
        assert_eq!(embed_hat(&p).unwrap().pull_back(), p);
        let odd = WeightedPolynomial::from_integer_terms(3, &[(3, 0, 0, 1)]).unwrap();
        assert!(matches!(embed_hat(&odd), Err(CoreError::OddDegree(3))));
    }

    #[test]
    fn display_grammar() {
        let p = WeightedPolynomial::from_terms(
            4,
            [(wm(0, 0, 2), rati(1)), (wm(2, 2, 0), rati(-1)), (wm(3, 1, 0), rat(3, 2))],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3/2*x^3*y - x^2*y^2 + z^2");
    }
}
