//! Stability for the non-reductive groups `Ĥ = U ⋊ ℂ*` and
//! `H = U ⋊ GL(2)` acting on grade-`d` forms, with the fractional diagonal
//! twist `δ`.
//!
//! The `∀u` quantifier of the `Ĥ`-test is eliminated exactly: the top
//! z-degree `k_max` is invariant under `z ↦ z + q`, and the minimal
//! z-degree over the orbit closure equals the maximal multiplicity `M` of a
//! section factor `(z − q)`, so the central weights `d − 4k + 2δ` pin the
//! verdict to the window `4M ≤ d + 2δ ≤ 4k_max`.
//!
//! The `∀h` quantifier of the `H`-test is reduced to finitely many
//! candidate separating normals: all weight images lie in a fixed lattice
//! box, so a hull that misses the origin admits a separating line whose
//! primitive normal is a rotated lattice difference with entries at most
//! `2d`. For each normal, existence of a destabilizing `h` over the closure
//! is a polynomial system in the five parameters `(α, β, γ, s, t)` of
//! `u · n₊(s) · w · n₋(t)` (diagonal factors never change supports), decided
//! by ideal properness. Sampling oracles stay in the test suite as a
//! permanent guard on both reductions.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::binary::{binary_form_rational_roots, BinaryForm, P1Point};
use crate::convex::{zero_position, WeightPointSet, ZeroPosition};
use crate::error::CoreError;
use crate::groebner::{ideal_is_proper, GroebnerBudget, PolynomialIdeal};
use crate::multipoly::{MPoly, Mono};
use crate::rational::Rat;
use crate::sampling::{random_gl2, random_rat, random_unipotent, rng_from_seed};
use crate::verdict::{
    CandidateKind, Certificate, DestabilizationCandidate, HWitness, SectionWitness,
    StabilityVerdict, Status,
};
use crate::weighted::{
    monomial_basis, GL2Element, UnipotentElement, WeightedMonomial, WeightedPolynomial,
};

/// Fractional linearisation data for the non-reductive tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HLinearisation {
    pub d: u32,
    pub delta: Rat,
}

impl HLinearisation {
    pub fn new(d: u32, delta: Rat) -> Result<Self, CoreError> {
        if d == 0 || d % 2 != 0 {
            return Err(CoreError::OddDegree(d));
        }
        Ok(HLinearisation { d, delta })
    }

    fn central_value(&self) -> Rat {
        Rat::from_integer(self.d.into()) + Rat::from_integer(2.into()) * &self.delta
    }

    fn endpoint(&self) -> Rat {
        Rat::new(self.d.into(), 2.into())
    }

    fn is_endpoint(&self) -> bool {
        self.delta == self.endpoint() || self.delta == -self.endpoint()
    }

    fn outside_open_range(&self) -> bool {
        self.delta >= self.endpoint() || self.delta <= -self.endpoint()
    }
}

/// Verdict of the central one-parameter subgroup on a fixed support:
/// weights `d − 4k + 2δ` over the occurring z-degrees.
fn central_status(k_min: u32, k_max: u32, central: &Rat) -> Status {
    let four = |k: u32| Rat::from_integer((4 * k).into());
    let lo = four(k_min);
    let hi = four(k_max);
    if &lo < central && central < &hi {
        Status::Stable
    } else if &lo <= central && central <= &hi {
        Status::StrictlySemistable
    } else {
        Status::Unstable
    }
}

/// `uhat_test` plus the invariants it is computed from.
#[derive(Debug, Clone)]
pub struct UhatDetails {
    pub verdict: StabilityVerdict,
    pub section_mult: u32,
    pub k_min: u32,
    pub k_max: u32,
}

/// Exact `Ĥ = U ⋊ ℂ*` test: stable iff `4M < d + 2δ < 4·k_max`, strictly
/// semistable at the closed window boundary, unstable otherwise. Twist
/// values `δ = ±d/2` carry the endpoint caveat: the Hilbert–Mumford
/// prediction is not guaranteed there.
pub fn uhat_test_detailed(
    p: &WeightedPolynomial,
    lin: &HLinearisation,
    budget: &GroebnerBudget,
) -> Result<UhatDetails, CoreError> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    if p.degree() != lin.d {
        return Err(CoreError::DegreeMismatch { expected: lin.d, found: p.degree() });
    }
    let (k_min, k_max) = p.z_degree_range()?;
    let section_mult = p.section_multiplicity(budget)?;
    let central = lin.central_value();
    let status = central_status(section_mult, k_max, &central);
    let caveat = lin.is_endpoint();
    let verdict = match status {
        Status::Stable => StabilityVerdict::stable().with_caveat(caveat),
        Status::StrictlySemistable => StabilityVerdict::strictly_semistable().with_caveat(caveat),
        Status::Unstable => {
            let four_kmax = Rat::from_integer((4 * k_max).into());
            let candidate = if central > four_kmax {
                // Every orbit support keeps top weight d - 4k_max + 2δ < 0
                // reversed: all central weights strictly positive at u = 0.
                DestabilizationCandidate {
                    kind: CandidateKind::CentralOnly,
                    section: None,
                    point: None,
                    normal: [BigInt::one(), BigInt::one()],
                    witness: Some(HWitness {
                        u: UnipotentElement::identity(),
                        g: GL2Element::identity(),
                    }),
                }
            } else {
                // d + 2δ < 4M: a section of multiplicity M pushes the whole
                // support to z-degrees ≥ M, all central weights negative.
                let needed = first_multiplicity_above(&central);
                let section = rational_section_witness(p, needed, k_min);
                let witness = section.as_ref().and_then(|s| match s {
                    SectionWitness::Rational { alpha, beta, gamma } => Some(HWitness {
                        u: UnipotentElement::new(alpha.clone(), beta.clone(), gamma.clone()),
                        g: GL2Element::identity(),
                    }),
                    SectionWitness::IdealCertified => None,
                });
                DestabilizationCandidate {
                    kind: CandidateKind::CentralOnly,
                    section,
                    point: None,
                    normal: [-BigInt::one(), -BigInt::one()],
                    witness,
                }
            };
            StabilityVerdict::unstable(Certificate::Candidate(Box::new(candidate)))
                .with_caveat(caveat)
        }
    };
    Ok(UhatDetails { verdict, section_mult, k_min, k_max })
}

pub fn uhat_test(
    p: &WeightedPolynomial,
    lin: &HLinearisation,
    budget: &GroebnerBudget,
) -> Result<StabilityVerdict, CoreError> {
    uhat_test_detailed(p, lin, budget).map(|d| d.verdict)
}

/// Smallest integer `m` with `4m > central`.
fn first_multiplicity_above(central: &Rat) -> u32 {
    let mut m = 0u32;
    while &Rat::from_integer((4 * m).into()) <= central {
        m += 1;
    }
    m
}

/// Tries to exhibit a rational section `q` with `(z − q)`-multiplicity at
/// least `needed`; `q = 0` covers the common case `k_min ≥ needed`.
fn rational_section_witness(
    p: &WeightedPolynomial,
    needed: u32,
    k_min: u32,
) -> Option<SectionWitness> {
    if k_min >= needed {
        return Some(SectionWitness::Rational {
            alpha: Rat::zero(),
            beta: Rat::zero(),
            gamma: Rat::zero(),
        });
    }
    let values: Vec<Rat> = [0i64, 1, -1, 2, -2]
        .iter()
        .map(|&n| Rat::from_integer(n.into()))
        .chain([Rat::new(1.into(), 2.into()), Rat::new((-1).into(), 2.into())])
        .collect();
    for a in &values {
        for b in &values {
            for c in &values {
                let u = UnipotentElement::new(-a.clone(), -b.clone(), -c.clone());
                if let Ok(moved) = p.apply_unipotent(&u) {
                    if let Ok((lo, _)) = moved.z_degree_range() {
                        if lo >= needed {
                            return Some(SectionWitness::Rational {
                                alpha: a.clone(),
                                beta: b.clone(),
                                gamma: c.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Some(SectionWitness::IdealCertified)
}

/// Sampling grid for the `Ĥ` oracle: a structured cube plus seeded random
/// rationals.
#[derive(Debug, Clone)]
pub struct OracleGrid {
    pub base: Vec<Rat>,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for OracleGrid {
    fn default() -> Self {
        let base = [0i64, 1, -1, 2, -2]
            .iter()
            .map(|&n| Rat::from_integer(n.into()))
            .chain([Rat::new(1.into(), 2.into()), Rat::new((-1).into(), 2.into())])
            .collect();
        OracleGrid { base, random_samples: 50, seed: 0 }
    }
}

impl OracleGrid {
    /// Only the identity element: the oracle degenerates to the plain
    /// central test.
    pub fn identity_only() -> Self {
        OracleGrid { base: vec![Rat::zero()], random_samples: 0, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub worst: Status,
    pub witness: Option<UnipotentElement>,
    pub samples: usize,
}

/// Brute-force upper bound for the `Ĥ`-verdict: applies every sampled `u`
/// and takes the worst central verdict. Sound as a necessary condition
/// only — a sampled failure proves instability, universal success proves
/// nothing.
pub fn uhat_oracle(
    p: &WeightedPolynomial,
    lin: &HLinearisation,
    grid: &OracleGrid,
) -> Result<OracleOutcome, CoreError> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    if p.degree() != lin.d {
        return Err(CoreError::DegreeMismatch { expected: lin.d, found: p.degree() });
    }
    let central = lin.central_value();
    let mut worst = Status::Stable;
    let mut witness = None;
    let mut samples = 0usize;
    let mut consider = |u: UnipotentElement,
                        worst: &mut Status,
                        witness: &mut Option<UnipotentElement>,
                        samples: &mut usize|
     -> Result<bool, CoreError> {
        let moved = p.apply_unipotent(&u)?;
        let (k_min, k_max) = moved.z_degree_range()?;
        let status = central_status(k_min, k_max, &central);
        *samples += 1;
        if status.severity() > worst.severity() {
            *worst = status;
            *witness = Some(u);
        }
        Ok(*worst == Status::Unstable)
    };
    'outer: for a in &grid.base {
        for b in &grid.base {
            for c in &grid.base {
                let u = UnipotentElement::new(a.clone(), b.clone(), c.clone());
                if consider(u, &mut worst, &mut witness, &mut samples)? {
                    break 'outer;
                }
            }
        }
    }
    if worst != Status::Unstable {
        let mut rng = rng_from_seed(grid.seed);
        for _ in 0..grid.random_samples {
            let u = random_unipotent(&mut rng, 6, 4);
            if consider(u, &mut worst, &mut witness, &mut samples)? {
                break;
            }
        }
    }
    Ok(OracleOutcome { worst, witness, samples })
}

/// Twist values where verdicts can jump: the central weight `d − 4m + 2δ`
/// vanishes at `δ = 2m − d/2`, and the boundary of the weight triangle
/// passes through the origin exactly at the endpoints `±d/2`, which the
/// jump set already contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallTable {
    pub walls: Vec<Rat>,
    pub endpoint_lo: Rat,
    pub endpoint_hi: Rat,
}

pub fn h_walls(d: u32) -> Result<WallTable, CoreError> {
    if d == 0 || d % 2 != 0 {
        return Err(CoreError::OddDegree(d));
    }
    let walls: Vec<Rat> = (0..=d / 2)
        .map(|m| Rat::from_integer((2 * m).into()) - Rat::new(d.into(), 2.into()))
        .collect();
    let endpoint_lo = walls.first().unwrap().clone();
    let endpoint_hi = walls.last().unwrap().clone();
    debug_assert_eq!(endpoint_lo, -Rat::new(d.into(), 2.into()));
    debug_assert_eq!(endpoint_hi, Rat::new(d.into(), 2.into()));
    Ok(WallTable { walls, endpoint_lo, endpoint_hi })
}

/// `h_test` result: a verdict, or an explicit refusal when the Groebner
/// budget ran out before every candidate system was settled.
#[derive(Debug, Clone)]
pub enum HTestOutcome {
    Decided(StabilityVerdict),
    Undecided(HUndecided),
}

impl HTestOutcome {
    pub fn decided(&self) -> Option<&StabilityVerdict> {
        match self {
            HTestOutcome::Decided(v) => Some(v),
            HTestOutcome::Undecided(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HUndecided {
    pub reason: String,
    /// Candidates settled before the budget ran out.
    pub partial: Vec<DestabilizationCandidate>,
    pub budget_failures: usize,
}

/// The two Bruhat cells used to parametrize `GL(2)` supports:
/// `n₊(s)·n₋(t)` and `n₊(s)·w·n₋(t)`; diagonal factors never change
/// supports, so these two families reach every support in the orbit.
const W_CASES: [usize; 2] = [0, 1];

/// Symbolic orbit data for one polynomial: for each Bruhat cell, the
/// coefficient of every basis monomial in
/// `p(M(x,y), z + αx² + βxy + γy²)` as a polynomial in `(α, β, γ, s, t)`.
pub struct HTester {
    p: WeightedPolynomial,
    d: u32,
    budget: GroebnerBudget,
    coeffs: [BTreeMap<WeightedMonomial, MPoly>; 2],
    /// Per z-level `t`: the u-only generators whose vanishing says the
    /// whole level of the moved polynomial vanishes (3 variables).
    level_gens: Vec<Vec<MPoly>>,
    basis: Vec<WeightedMonomial>,
    memo: RefCell<BTreeMap<(usize, Vec<WeightedMonomial>), Result<bool, CoreError>>>,
}

impl HTester {
    pub fn new(p: &WeightedPolynomial, budget: &GroebnerBudget) -> Result<Self, CoreError> {
        if p.is_zero() {
            return Err(CoreError::ZeroPolynomial);
        }
        let d = p.degree();
        if d == 0 || d % 2 != 0 {
            return Err(CoreError::OddDegree(d));
        }
        let coeffs = [orbit_coefficients(p, 0), orbit_coefficients(p, 1)];
        let (_, k_max) = p.z_degree_range()?;
        let mut level_gens = Vec::new();
        for t in 0..=k_max {
            level_gens.push(section_level_generators(p, t));
        }
        Ok(HTester {
            p: p.clone(),
            d,
            budget: *budget,
            coeffs,
            level_gens,
            basis: monomial_basis(d),
            memo: RefCell::new(BTreeMap::new()),
        })
    }

    /// Full `H = U ⋊ GL(2)` test at the given diagonal twist.
    pub fn test(&self, delta: &Rat) -> Result<HTestOutcome, CoreError> {
        let lin = HLinearisation::new(self.d, delta.clone())?;
        // Outside the open twist range the semistable set is empty; the
        // endpoint values carry the caveat because the hull prediction is
        // not authoritative there.
        if lin.outside_open_range() {
            let sign_positive = lin.delta > Rat::zero();
            let normal = if sign_positive {
                [BigInt::one(), BigInt::one()]
            } else {
                [-BigInt::one(), -BigInt::one()]
            };
            let witness = if lin.is_endpoint() {
                None
            } else {
                Some(HWitness { u: UnipotentElement::identity(), g: GL2Element::identity() })
            };
            let candidate = DestabilizationCandidate {
                kind: CandidateKind::CentralOnly,
                section: None,
                point: None,
                normal,
                witness,
            };
            return Ok(HTestOutcome::Decided(
                StabilityVerdict::unstable(Certificate::Candidate(Box::new(candidate)))
                    .with_caveat(lin.is_endpoint()),
            ));
        }

        // Necessary condition through the central subgroup.
        let stage1 = uhat_test_detailed(&self.p, &lin, &self.budget)?;
        if stage1.verdict.status == Status::Unstable {
            return Ok(HTestOutcome::Decided(stage1.verdict.with_caveat(false)));
        }

        let normals = candidate_normals(self.d);
        let weight = |m: &WeightedMonomial| -> [Rat; 2] {
            [
                Rat::from_integer(m.i.into()) - Rat::from_integer(m.k.into()) + delta,
                Rat::from_integer(m.j.into()) - Rat::from_integer(m.k.into()) + delta,
            ]
        };
        let pairing = |normal: &[i64; 2], m: &WeightedMonomial| -> Rat {
            let w = weight(m);
            Rat::from_integer(normal[0].into()) * &w[0] + Rat::from_integer(normal[1].into()) * &w[1]
        };

        // Group normals by the monomial set forced to vanish.
        let mut strict_sets: BTreeMap<Vec<WeightedMonomial>, [i64; 2]> = BTreeMap::new();
        let mut closed_sets: BTreeMap<Vec<WeightedMonomial>, [i64; 2]> = BTreeMap::new();
        for n in &normals {
            let strict: Vec<WeightedMonomial> = self
                .basis
                .iter()
                .filter(|m| pairing(n, m) <= Rat::zero())
                .cloned()
                .collect();
            strict_sets.entry(strict).or_insert(*n);
            let closed: Vec<WeightedMonomial> = self
                .basis
                .iter()
                .filter(|m| pairing(n, m) < Rat::zero())
                .cloned()
                .collect();
            closed_sets.entry(closed).or_insert(*n);
        }

        let mut budget_failures = 0usize;
        let mut partial: Vec<DestabilizationCandidate> = Vec::new();

        // Smallest vanish sets first: weakest systems, most likely solvable.
        let mut strict_order: Vec<(&Vec<WeightedMonomial>, &[i64; 2])> = strict_sets.iter().collect();
        strict_order.sort_by_key(|(v, _)| v.len());
        for (vanish, normal) in strict_order {
            for &w_case in &W_CASES {
                match self.system_solvable(w_case, vanish) {
                    Ok(true) => {
                        let candidate =
                            self.build_certificate(w_case, vanish, normal, delta, true);
                        return Ok(HTestOutcome::Decided(StabilityVerdict::unstable(
                            Certificate::Candidate(Box::new(candidate)),
                        )));
                    }
                    Ok(false) => {}
                    Err(CoreError::GroebnerBudget { .. }) => budget_failures += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        if budget_failures > 0 {
            return Ok(HTestOutcome::Undecided(HUndecided {
                reason: "Groebner budget exhausted before all strict systems were settled".into(),
                partial,
                budget_failures,
            }));
        }

        let mut closed_order: Vec<(&Vec<WeightedMonomial>, &[i64; 2])> = closed_sets.iter().collect();
        closed_order.sort_by_key(|(v, _)| v.len());
        for (vanish, normal) in closed_order {
            for &w_case in &W_CASES {
                match self.system_solvable(w_case, vanish) {
                    Ok(true) => {
                        partial.push(self.build_certificate(w_case, vanish, normal, delta, false));
                        return Ok(HTestOutcome::Decided(StabilityVerdict::strictly_semistable()));
                    }
                    Ok(false) => {}
                    Err(CoreError::GroebnerBudget { .. }) => budget_failures += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        if budget_failures > 0 {
            return Ok(HTestOutcome::Undecided(HUndecided {
                reason: "Groebner budget exhausted before all closed systems were settled".into(),
                partial,
                budget_failures,
            }));
        }
        Ok(HTestOutcome::Decided(StabilityVerdict::stable()))
    }

    /// Is there a group element making every coefficient in `vanish` zero?
    /// Fully vanished z-levels are replaced by their u-only generators (the
    /// linear part is invertible, so a level vanishes after the move iff it
    /// vanishes before it).
    fn system_solvable(
        &self,
        w_case: usize,
        vanish: &[WeightedMonomial],
    ) -> Result<bool, CoreError> {
        let key = (w_case, vanish.to_vec());
        if let Some(res) = self.memo.borrow().get(&key) {
            return res.clone();
        }
        let trace = std::env::var("GITKIT_TRACE").is_ok();
        let start = std::time::Instant::now();
        let res = self.system_solvable_uncached(w_case, vanish);
        if trace {
            eprintln!(
                "system w={w_case} |V|={} {:?} -> {:?}",
                vanish.len(),
                start.elapsed(),
                res.as_ref().map(|b| *b).map_err(|e| e.to_string())
            );
        }
        self.memo.borrow_mut().insert(key, res.clone());
        res
    }

    fn system_solvable_uncached(
        &self,
        w_case: usize,
        vanish: &[WeightedMonomial],
    ) -> Result<bool, CoreError> {
        let vanish_set: BTreeSet<WeightedMonomial> = vanish.iter().cloned().collect();
        let mut by_level: BTreeMap<u32, Vec<WeightedMonomial>> = BTreeMap::new();
        for m in vanish {
            by_level.entry(m.k).or_default().push(*m);
        }
        let level_size: BTreeMap<u32, usize> = {
            let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
            for m in &self.basis {
                *counts.entry(m.k).or_insert(0) += 1;
            }
            counts
        };
        let mut gens: Vec<MPoly> = Vec::new();
        for (k, monos) in &by_level {
            if monos.len() == level_size[k] {
                // Entire level must vanish: u-only conditions.
                if (*k as usize) < self.level_gens.len() {
                    for g in &self.level_gens[*k as usize] {
                        gens.push(g.pad_vars(5));
                    }
                } else {
                    // Level above k_max of p: already identically zero.
                }
            } else {
                for m in monos {
                    if let Some(c) = self.coeffs[w_case].get(m) {
                        gens.push(c.clone());
                    }
                }
            }
        }
        let _ = vanish_set;
        let vars =
            vec!["alpha".into(), "beta".into(), "gamma".into(), "s".into(), "t".into()];
        let ideal = PolynomialIdeal::new(vars, gens)?;
        ideal_is_proper(&ideal, &self.budget)
    }

    /// Builds the destabilization certificate for a solvable system, with a
    /// concrete verified rational witness when one is found.
    fn build_certificate(
        &self,
        w_case: usize,
        vanish: &[WeightedMonomial],
        normal: &[i64; 2],
        delta: &Rat,
        strict: bool,
    ) -> DestabilizationCandidate {
        let primitive = primitive_normal(normal);
        let kind = if normal[0] == normal[1] {
            CandidateKind::CentralOnly
        } else {
            CandidateKind::SectionAndPoint
        };
        let witness = self.search_witness(w_case, vanish, normal, delta, strict);
        let (section, point, hw) = match witness {
            Some((u, g, pt)) => (
                Some(SectionWitness::Rational {
                    alpha: u.alpha.clone(),
                    beta: u.beta.clone(),
                    gamma: u.gamma.clone(),
                }),
                Some(pt),
                Some(HWitness { u, g }),
            ),
            None => (Some(SectionWitness::IdealCertified), None, None),
        };
        DestabilizationCandidate { kind, section, point, normal: primitive, witness: hw }
    }

    /// Looks for a rational `(α, β, γ, s, t)` solving the vanish conditions
    /// and strictly separating the moved support; verified independently
    /// through the concrete substitution action before being reported.
    fn search_witness(
        &self,
        w_case: usize,
        vanish: &[WeightedMonomial],
        normal: &[i64; 2],
        delta: &Rat,
        strict: bool,
    ) -> Option<(UnipotentElement, GL2Element, P1Point)> {
        // Values to try: small structured set plus rational roots of the
        // z-level forms of p (the moves that kill coefficients align roots
        // with the coordinate axes).
        let mut values: Vec<Rat> = [0i64, 1, -1, 2, -2, 3, -3]
            .iter()
            .map(|&n| Rat::from_integer(n.into()))
            .chain([
                Rat::new(1.into(), 2.into()),
                Rat::new((-1).into(), 2.into()),
                Rat::new(1.into(), 3.into()),
                Rat::new((-1).into(), 3.into()),
            ])
            .collect();
        for (_, level) in self.p.z_levels() {
            let n = level.keys().map(|(i, j)| i + j).max().unwrap_or(0);
            let mut coeffs = vec![Rat::zero(); n as usize + 1];
            for ((i, _), c) in &level {
                coeffs[(n - i) as usize] = c.clone();
            }
            if coeffs.iter().all(Rat::is_zero) {
                continue;
            }
            let form = BinaryForm::new(n, coeffs).ok()?;
            if form.is_zero() {
                continue;
            }
            let (roots, _) = binary_form_rational_roots(&form);
            for (root, _) in roots {
                if !root.q.is_zero() {
                    let v = Rat::new(root.p.clone(), root.q.clone());
                    for cand in [v.clone(), -v.clone()] {
                        if !values.contains(&cand) {
                            values.push(cand);
                        }
                    }
                }
            }
        }

        // Restrict the search to the variables that actually occur.
        let mut active: BTreeSet<usize> = BTreeSet::new();
        for m in vanish {
            if let Some(c) = self.coeffs[w_case].get(m) {
                active.extend(c.support_vars());
            }
        }
        let active: Vec<usize> = active.into_iter().collect();
        let zero5 = vec![Rat::zero(); 5];

        let mut candidates: Vec<Vec<Rat>> = vec![zero5.clone()];
        let cap = 60_000usize;
        if active.len() <= 3 {
            let mut stack: Vec<Vec<Rat>> = vec![zero5.clone()];
            for &var in &active {
                let mut next = Vec::new();
                for point in &stack {
                    for v in &values {
                        let mut q = point.clone();
                        q[var] = v.clone();
                        next.push(q);
                    }
                }
                stack = next;
                if stack.len() > cap {
                    break;
                }
            }
            candidates.extend(stack);
        } else {
            let mut rng = rng_from_seed(0xC0DE);
            for _ in 0..2000 {
                let mut q = zero5.clone();
                for &var in &active {
                    q[var] = random_rat(&mut rng, 3, 2);
                }
                candidates.push(q);
            }
            // Structured axes sweeps.
            for &var in &active {
                for v in &values {
                    let mut q = zero5.clone();
                    q[var] = v.clone();
                    candidates.push(q);
                }
            }
        }

        for point in candidates {
            if let Some(found) = self.verify_witness_point(w_case, &point, normal, delta, strict) {
                return Some(found);
            }
        }
        None
    }

    /// Full independent verification of a candidate parameter point: build
    /// the concrete group element, act through the public substitution
    /// operations, and re-check the hull condition from scratch.
    fn verify_witness_point(
        &self,
        w_case: usize,
        point: &[Rat],
        normal: &[i64; 2],
        delta: &Rat,
        strict: bool,
    ) -> Option<(UnipotentElement, GL2Element, P1Point)> {
        let (s, t) = (&point[3], &point[4]);
        // M = n₊(s)·w·n₋(t).
        let m = if w_case == 0 {
            [
                [Rat::one() + s * t, s.clone()],
                [t.clone(), Rat::one()],
            ]
        } else {
            [[s + t, Rat::one()], [Rat::one(), Rat::zero()]]
        };
        // q' = q ∘ M⁻¹ so that p(M(x,y), z + q(x,y)) equals the moved
        // polynomial computed through apply_unipotent then apply_gl2(Mᵀ).
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        let inv = [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ];
        let (a, b, c) = (&point[0], &point[1], &point[2]);
        // q(x, y) = a x² + b xy + c y², pull back through M⁻¹.
        let (p11, p12, p21, p22) = (&inv[0][0], &inv[0][1], &inv[1][0], &inv[1][1]);
        let alpha = a * p11 * p11 + b * p11 * p21 + c * p21 * p21;
        let beta = Rat::from_integer(2.into()) * a * p11 * p12
            + b * (p11 * p22 + p12 * p21)
            + Rat::from_integer(2.into()) * c * p21 * p22;
        let gamma = a * p12 * p12 + b * p12 * p22 + c * p22 * p22;
        let u = UnipotentElement::new(alpha, beta, gamma);
        let g = GL2Element::new([
            [m[0][0].clone(), m[1][0].clone()],
            [m[0][1].clone(), m[1][1].clone()],
        ])
        .ok()?;
        let moved = self.p.apply_unipotent(&u).ok()?.apply_gl2(&g).ok()?;
        // Hull check: every support weight strictly (or weakly) on the
        // positive side of the normal.
        let mut all_positive = true;
        let mut points = Vec::new();
        for mono in moved.support() {
            let w0 = Rat::from_integer(mono.i.into()) - Rat::from_integer(mono.k.into()) + delta;
            let w1 = Rat::from_integer(mono.j.into()) - Rat::from_integer(mono.k.into()) + delta;
            let pairing = Rat::from_integer(normal[0].into()) * &w0
                + Rat::from_integer(normal[1].into()) * &w1;
            if strict {
                if pairing <= Rat::zero() {
                    all_positive = false;
                    break;
                }
            } else if pairing < Rat::zero() {
                all_positive = false;
                break;
            }
            points.push(vec![w0, w1]);
        }
        if !all_positive {
            return None;
        }
        if strict {
            // Independent confirmation through the exact hull engine.
            let set = WeightPointSet::new(2, points).ok()?;
            if zero_position(&set).ok()? != ZeroPosition::Outside {
                return None;
            }
        }
        // The ℙ¹ direction moved onto the distinguished coordinate.
        let dir = primitive_p1(&inv[0][1], &inv[1][1]);
        Some((u, g, dir))
    }
}

fn primitive_normal(normal: &[i64; 2]) -> [BigInt; 2] {
    let g = normal[0].abs().gcd(&normal[1].abs()).max(1);
    [BigInt::from(normal[0] / g), BigInt::from(normal[1] / g)]
}

fn primitive_p1(a: &Rat, b: &Rat) -> P1Point {
    if a.is_zero() && b.is_zero() {
        return P1Point::new(BigInt::zero(), BigInt::one());
    }
    let v = crate::rational::primitive_integer_vector(&[a.clone(), b.clone()]);
    P1Point::new(v[0].clone(), v[1].clone())
}

/// All primitive integer normals with entries bounded by `2d`: rotated
/// lattice differences of weight points have entries at most `3d/2`, and a
/// hull missing (or touching) the origin is always separated by one of
/// those or by one of the eight unit-ish directions, so this superset is
/// complete for both the strict and the closed test.
fn candidate_normals(d: u32) -> Vec<[i64; 2]> {
    let bound = 2 * d as i64;
    let mut out = Vec::new();
    for r1 in -bound..=bound {
        for r2 in -bound..=bound {
            if r1 == 0 && r2 == 0 {
                continue;
            }
            if r1.abs().gcd(&r2.abs()) == 1 {
                out.push([r1, r2]);
            }
        }
    }
    out
}

/// Coefficients of `p(M(x, y), z + αx² + βxy + γy²)` per basis monomial, as
/// polynomials in `(α, β, γ, s, t)`; `w_case` picks the Bruhat cell.
fn orbit_coefficients(
    p: &WeightedPolynomial,
    w_case: usize,
) -> BTreeMap<WeightedMonomial, MPoly> {
    // Variables: 0..5 = (α, β, γ, s, t), 5..8 = (x, y, z).
    let n = 8;
    let var = |i: usize| MPoly::var(n, i);
    let (s, t) = (var(3), var(4));
    let (x, y, z) = (var(5), var(6), var(7));
    let one = MPoly::one(n);
    let (m11, m12, m21, m22) = if w_case == 0 {
        (one.add(&s.mul(&t)), s.clone(), t.clone(), one.clone())
    } else {
        (s.add(&t), one.clone(), one.clone(), MPoly::zero(n))
    };
    let x_img = m11.mul(&x).add(&m12.mul(&y));
    let y_img = m21.mul(&x).add(&m22.mul(&y));
    let q = var(0).mul(&x.pow(2)).add(&var(1).mul(&x).mul(&y)).add(&var(2).mul(&y.pow(2)));
    let z_img = z.add(&q);

    let mut image = MPoly::zero(n);
    for (m, c) in p.terms() {
        let term = x_img
            .pow(m.i)
            .mul(&y_img.pow(m.j))
            .mul(&z_img.pow(m.k))
            .scale(c);
        image = image.add(&term);
    }
    let mut out = BTreeMap::new();
    for (outer, coeff) in image.collect_by(&[5, 6, 7]) {
        let mono = WeightedMonomial::new(outer.0[5], outer.0[6], outer.0[7]);
        out.insert(mono, coeff.project_to_vars(&[0, 1, 2, 3, 4]));
    }
    out
}

/// Generators (in `α, β, γ`) whose common vanishing says the entire z-level
/// `t` of `p(x, y, z + q)` is zero; these are the `(x, y)`-coefficients of
/// the substituted t-th z-derivative, shared with the section-multiplicity
/// machinery.
fn section_level_generators(p: &WeightedPolynomial, t: u32) -> Vec<MPoly> {
    // Variables: 0..3 = (α, β, γ), 3..5 = (x, y).
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
    for (m, c) in p.terms() {
        if m.k < t {
            continue;
        }
        // Binomial weight C(k, t) from collecting z^t in (z + q)^k.
        let mut binom = Rat::one();
        for step in 0..t {
            binom *= Rat::from_integer((m.k - step).into());
            binom /= Rat::from_integer((step + 1).into());
        }
        let xy = MPoly::from_terms(n, [(Mono(vec![0, 0, 0, m.i, m.j]), c * &binom)]);
        substituted = substituted.add(&xy.mul(&q.pow(m.k - t)));
    }
    substituted
        .collect_by(&[3, 4])
        .into_values()
        .map(|g| g.project_to_vars(&[0, 1, 2]))
        .collect()
}

/// Convenience wrapper building a fresh tester per call.
pub fn h_test(
    p: &WeightedPolynomial,
    lin: &HLinearisation,
    budget: &GroebnerBudget,
) -> Result<HTestOutcome, CoreError> {
    if p.degree() != lin.d {
        return Err(CoreError::DegreeMismatch { expected: lin.d, found: p.degree() });
    }
    HTester::new(p, budget)?.test(&lin.delta)
}

#[derive(Debug, Clone)]
pub struct HOracleOutcome {
    pub worst: Status,
    pub witness: Option<HWitness>,
    pub samples: usize,
}

/// Randomized upper bound for the `H`-verdict: the worst diagonal-torus
/// verdict over sampled `h = u·g` (the identity is always sample one).
/// Necessary-condition semantics as for the `Ĥ` oracle.
pub fn h_oracle(
    p: &WeightedPolynomial,
    lin: &HLinearisation,
    samples: usize,
    seed: u64,
) -> Result<HOracleOutcome, CoreError> {
    if p.is_zero() {
        return Err(CoreError::ZeroPolynomial);
    }
    if p.degree() != lin.d {
        return Err(CoreError::DegreeMismatch { expected: lin.d, found: p.degree() });
    }
    let mut rng = rng_from_seed(seed);
    let mut worst = Status::Stable;
    let mut witness = None;
    let mut taken = 0usize;
    for idx in 0..samples.max(1) {
        let (u, g) = if idx == 0 {
            (UnipotentElement::identity(), GL2Element::identity())
        } else {
            (random_unipotent(&mut rng, 4, 3), random_gl2(&mut rng, 4, 3))
        };
        let moved = p.apply_unipotent(&u)?.apply_gl2(&g)?;
        let status = tc_status(&moved, &lin.delta)?;
        taken += 1;
        if status.severity() > worst.severity() {
            worst = status;
            witness = Some(HWitness { u, g });
            if worst == Status::Unstable {
                break;
            }
        }
    }
    Ok(HOracleOutcome { worst, witness, samples: taken })
}

/// Diagonal-torus verdict of a single polynomial's support at twist `δ`.
pub fn tc_status(p: &WeightedPolynomial, delta: &Rat) -> Result<Status, CoreError> {
    let points: Vec<Vec<Rat>> = p
        .support()
        .iter()
        .map(|m| {
            vec![
                Rat::from_integer(m.i.into()) - Rat::from_integer(m.k.into()) + delta,
                Rat::from_integer(m.j.into()) - Rat::from_integer(m.k.into()) + delta,
            ]
        })
        .collect();
    let set = WeightPointSet::new(2, points)?;
    Ok(match zero_position(&set)? {
        ZeroPosition::Interior => Status::Stable,
        ZeroPosition::Boundary => Status::StrictlySemistable,
        ZeroPosition::Outside => Status::Unstable,
    })
}

/// One classification cell.
#[derive(Debug, Clone)]
pub struct ClassifyCell {
    pub uhat: Result<StabilityVerdict, CoreError>,
    pub h: Result<HTestOutcome, CoreError>,
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub d: u32,
    pub deltas: Vec<Rat>,
    /// `cells[poly_index][delta_index]`.
    pub cells: Vec<Vec<ClassifyCell>>,
    pub walls: WallTable,
    /// Per delta: counts of the h-verdict statuses (plus "Undecided").
    pub counts: Vec<BTreeMap<String, usize>>,
}

/// Computes one cell, reusing a prepared tester.
pub fn classify_cell(
    tester: &HTester,
    p: &WeightedPolynomial,
    d: u32,
    delta: &Rat,
    budget: &GroebnerBudget,
) -> ClassifyCell {
    let lin = match HLinearisation::new(d, delta.clone()) {
        Ok(l) => l,
        Err(e) => return ClassifyCell { uhat: Err(e.clone()), h: Err(e) },
    };
    ClassifyCell { uhat: uhat_test(p, &lin, budget), h: tester.test(delta) }
}

/// Full verdict matrix over a shared-grade corpus; per-cell failures are
/// recorded, never aborting the run.
pub fn classify_corpus(
    polys: &[WeightedPolynomial],
    deltas: &[Rat],
    budget: &GroebnerBudget,
) -> Result<ClassifyReport, CoreError> {
    let d = match polys.first() {
        Some(p) => p.degree(),
        None => {
            return Ok(ClassifyReport {
                d: 0,
                deltas: deltas.to_vec(),
                cells: Vec::new(),
                walls: WallTable {
                    walls: Vec::new(),
                    endpoint_lo: Rat::zero(),
                    endpoint_hi: Rat::zero(),
                },
                counts: vec![BTreeMap::new(); deltas.len()],
            })
        }
    };
    if let Some(bad) = polys.iter().find(|p| p.degree() != d) {
        return Err(CoreError::DegreeMismatch { expected: d, found: bad.degree() });
    }
    let walls = h_walls(d)?;
    let mut cells = Vec::with_capacity(polys.len());
    for p in polys {
        let tester = HTester::new(p, budget)?;
        let row: Vec<ClassifyCell> =
            deltas.iter().map(|delta| classify_cell(&tester, p, d, delta, budget)).collect();
        cells.push(row);
    }
    let counts = count_statuses(&cells, deltas.len());
    Ok(ClassifyReport { d, deltas: deltas.to_vec(), cells, walls, counts })
}

pub fn count_statuses(
    cells: &[Vec<ClassifyCell>],
    n_deltas: usize,
) -> Vec<BTreeMap<String, usize>> {
    let mut counts = vec![BTreeMap::new(); n_deltas];
    for row in cells {
        for (j, cell) in row.iter().enumerate() {
            let label = match &cell.h {
                Ok(HTestOutcome::Decided(v)) => v.status.to_string(),
                Ok(HTestOutcome::Undecided(_)) => "Undecided".to_string(),
                Err(_) => "Error".to_string(),
            };
            *counts[j].entry(label).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};

    fn poly(d: u32, terms: &[(u32, u32, u32, i64)]) -> WeightedPolynomial {
        WeightedPolynomial::from_integer_terms(d, terms).unwrap()
    }

    fn lin(d: u32, num: i64, den: i64) -> HLinearisation {
        HLinearisation::new(d, rat(num, den)).unwrap()
    }

    fn budget() -> GroebnerBudget {
        GroebnerBudget::default()
    }

    fn full_support_d4() -> WeightedPolynomial {
        let terms: Vec<(u32, u32, u32, i64)> =
            monomial_basis(4).iter().map(|m| (m.i, m.j, m.k, 1)).collect();
        poly(4, &terms)
    }

    #[test]
    fn uhat_z2_at_endpoint() {
        let z2 = poly(4, &[(0, 0, 2, 1)]);
        let details = uhat_test_detailed(&z2, &lin(4, 2, 1), &budget()).unwrap();
        assert_eq!(details.verdict.status, Status::StrictlySemistable);
        assert!(details.verdict.endpoint_caveat);
        assert_eq!((details.section_mult, details.k_max), (2, 2));
    }

    #[test]
    fn uhat_examples_at_zero_twist() {
        let b = budget();
        let l = lin(4, 0, 1);
        let full = full_support_d4();
        let det = uhat_test_detailed(&full, &l, &b).unwrap();
        assert_eq!(det.verdict.status, Status::Stable);
        assert_eq!((det.section_mult, det.k_max), (0, 2));

        let x4 = poly(4, &[(4, 0, 0, 1)]);
        let v = uhat_test(&x4, &l, &b).unwrap();
        assert_eq!(v.status, Status::Unstable);
        assert!(v.certificate.is_some());

        let x2z = poly(4, &[(2, 0, 1, 1)]);
        assert_eq!(uhat_test(&x2z, &l, &b).unwrap().status, Status::StrictlySemistable);

        let z2 = poly(4, &[(0, 0, 2, 1)]);
        assert_eq!(uhat_test(&z2, &l, &b).unwrap().status, Status::Unstable);
    }

    #[test]
    fn uhat_oracle_examples() {
        let z2 = poly(4, &[(0, 0, 2, 1)]);
        let out = uhat_oracle(&z2, &lin(4, 0, 1), &OracleGrid::identity_only()).unwrap();
        assert_eq!(out.worst, Status::Unstable);
        assert!(out.witness.unwrap().is_identity());

        // y^4 + z^2 at delta = 1 stays semistable on every sample.
        let p = poly(4, &[(0, 4, 0, 1), (0, 0, 2, 1)]);
        let out = uhat_oracle(&p, &lin(4, 1, 1), &OracleGrid::default()).unwrap();
        assert_eq!(out.worst, Status::Stable);

        // Identity-only grid equals the plain central test.
        let full = full_support_d4();
        let out = uhat_oracle(&full, &lin(4, 0, 1), &OracleGrid::identity_only()).unwrap();
        assert_eq!(out.samples, 1);
        assert_eq!(out.worst, Status::Stable);
    }

    #[test]
    fn oracle_never_beats_exact_test() {
        let b = budget();
        let mut rng = rng_from_seed(11);
        for _ in 0..25 {
            let p = crate::sampling::random_polynomial(&mut rng, 4, 400);
            for delta in [rati(-1), rati(0), rati(1)] {
                let l = HLinearisation::new(4, delta).unwrap();
                let exact = uhat_test(&p, &l, &b).unwrap();
                let oracle = uhat_oracle(&p, &l, &OracleGrid::default()).unwrap();
                if oracle.worst == Status::Unstable {
                    assert_eq!(
                        exact.status,
                        Status::Unstable,
                        "oracle over-rejected {p} at twist {:?}",
                        l.delta
                    );
                }
            }
        }
    }

    #[test]
    fn walls_for_small_degrees() {
        let w4 = h_walls(4).unwrap();
        assert_eq!(w4.walls, vec![rati(-2), rati(0), rati(2)]);
        assert_eq!((w4.endpoint_lo, w4.endpoint_hi), (rati(-2), rati(2)));
        let w2 = h_walls(2).unwrap();
        assert_eq!(w2.walls, vec![rati(-1), rati(1)]);
        assert!(h_walls(3).is_err());
    }

    #[test]
    fn h_test_out_of_range_and_endpoints() {
        let b = budget();
        let full = full_support_d4();
        for (num, den, caveat) in [(3i64, 1i64, false), (-5, 2, false), (2, 1, true), (-2, 1, true)]
        {
            let outcome = h_test(&full, &lin(4, num, den), &b).unwrap();
            let v = outcome.decided().expect("range rule decides");
            assert_eq!(v.status, Status::Unstable, "twist {num}/{den}");
            assert_eq!(v.endpoint_caveat, caveat);
            assert!(v.certificate.is_some());
        }
    }

    #[test]
    fn h_test_full_support_stable_at_zero() {
        let outcome = h_test(&full_support_d4(), &lin(4, 0, 1), &budget()).unwrap();
        assert_eq!(outcome.decided().unwrap().status, Status::Stable);
    }

    #[test]
    fn h_test_z2_unstable_via_stage_one() {
        let z2 = poly(4, &[(0, 0, 2, 1)]);
        let outcome = h_test(&z2, &lin(4, 0, 1), &budget()).unwrap();
        let v = outcome.decided().unwrap();
        assert_eq!(v.status, Status::Unstable);
    }

    #[test]
    fn h_test_x3y_unstable_with_witness() {
        // x^3 y is already unstable at h = identity.
        let p = poly(4, &[(3, 1, 0, 1)]);
        let outcome = h_test(&p, &lin(4, 0, 1), &budget()).unwrap();
        let v = outcome.decided().unwrap();
        assert_eq!(v.status, Status::Unstable);
        match v.certificate.as_ref().unwrap() {
            Certificate::Candidate(c) => {
                let w = c.witness.as_ref().expect("identity-level witness");
                let moved = p.apply_unipotent(&w.u).unwrap().apply_gl2(&w.g).unwrap();
                assert_eq!(tc_status(&moved, &rati(0)).unwrap(), Status::Unstable);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn h_oracle_matches_examples() {
        let xyz = poly(4, &[(1, 1, 1, 1)]);
        let l = lin(4, 0, 1);
        let out = h_oracle(&xyz, &l, 200, 3).unwrap();
        assert_ne!(out.worst, Status::Unstable);
        let x3y = poly(4, &[(3, 1, 0, 1)]);
        let out = h_oracle(&x3y, &l, 200, 3).unwrap();
        assert_eq!(out.worst, Status::Unstable);
        // Sample 1 is the identity: plain torus verdict.
        let out = h_oracle(&x3y, &l, 1, 3).unwrap();
        assert_eq!(out.worst, Status::Unstable);
    }

    #[test]
    fn uhat_verdict_is_u_invariant() {
        let b = budget();
        let mut rng = rng_from_seed(5);
        for _ in 0..10 {
            let p = crate::sampling::random_polynomial(&mut rng, 4, 500);
            let u = random_unipotent(&mut rng, 3, 2);
            let moved = p.apply_unipotent(&u).unwrap();
            for delta in [rati(-1), rati(0), rati(1)] {
                let l = HLinearisation::new(4, delta).unwrap();
                assert_eq!(
                    uhat_test(&p, &l, &b).unwrap().status,
                    uhat_test(&moved, &l, &b).unwrap().status,
                    "U-invariance failed for {p}"
                );
            }
        }
    }

    #[test]
    fn classify_small_corpus() {
        let b = budget();
        let polys = vec![
            poly(4, &[(0, 0, 2, 1)]),
            poly(4, &[(4, 0, 0, 1)]),
            full_support_d4(),
        ];
        let deltas = vec![rati(-3), rati(0), rati(2)];
        let report = classify_corpus(&polys, &deltas, &b).unwrap();
        assert_eq!(report.cells.len(), 3);
        // At delta outside/at the right endpoint everything is unstable.
        for row in &report.cells {
            for cell in [&row[0], &row[2]] {
                match cell.h.as_ref().unwrap() {
                    HTestOutcome::Decided(v) => assert_eq!(v.status, Status::Unstable),
                    other => panic!("unexpected {other:?}"),
                }
            }
        }
        // Full support is stable at 0, z^2 and x^4 are not semistable there.
        let mid: Vec<Status> = report
            .cells
            .iter()
            .map(|row| row[1].h.as_ref().unwrap().decided().unwrap().status)
            .collect();
        assert_eq!(mid, vec![Status::Unstable, Status::Unstable, Status::Stable]);
        assert_eq!(report.counts[1]["Stable"], 1);
        assert_eq!(report.counts[1]["Unstable"], 2);
        // Empty corpus: empty report.
        let empty = classify_corpus(&[], &deltas, &b).unwrap();
        assert!(empty.cells.is_empty());
    }
}
