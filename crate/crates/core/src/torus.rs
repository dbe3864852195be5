//! Stability for linearised torus actions: the convex-hull test on support
//! weights, character twists, wall/chamber decompositions of the twist line,
//! and the rank-3 product test on `ℙ¹² × Y_d`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::convex::{zero_position_with_certificate, WeightPointSet, ZeroPosition};
use crate::error::CoreError;
use crate::linalg::QMatrix;
use crate::rational::{primitive_integer_vector, Rat};
use crate::verdict::{Certificate, StabilityVerdict};
use crate::weighted::{monomial_basis, WeightedMonomial};

pub use crate::weighted::embed_hat;

/// A diagonal torus linearisation: one weight vector per homogeneous
/// coordinate plus a rational character twist shifting every weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLinearisation {
    pub rank: usize,
    pub weights: Vec<Vec<Rat>>,
    pub twist: Vec<Rat>,
}

impl TorusLinearisation {
    pub fn new(rank: usize, weights: Vec<Vec<Rat>>, twist: Vec<Rat>) -> Result<Self, CoreError> {
        if rank == 0 {
            return Err(CoreError::InvalidInput("torus rank must be at least 1".into()));
        }
        if weights.is_empty() {
            return Err(CoreError::InvalidInput("no coordinate weights".into()));
        }
        if weights.iter().any(|w| w.len() != rank) || twist.len() != rank {
            return Err(CoreError::InvalidInput("weight/twist length differs from rank".into()));
        }
        Ok(TorusLinearisation { rank, weights, twist })
    }

    /// Rank-1 convenience constructor.
    pub fn rank1(weights: Vec<Rat>, twist: Rat) -> Self {
        TorusLinearisation {
            rank: 1,
            weights: weights.into_iter().map(|w| vec![w]).collect(),
            twist: vec![twist],
        }
    }

    /// Twisted weight of coordinate `idx`.
    pub fn shifted_weight(&self, idx: usize) -> Vec<Rat> {
        self.weights[idx].iter().zip(&self.twist).map(|(w, t)| w + t).collect()
    }
}

/// Verdict from the position of the origin in the hull of an
/// already-shifted weight point set.
pub fn torus_test_points(points: &WeightPointSet) -> Result<StabilityVerdict, CoreError> {
    let (pos, cert) = zero_position_with_certificate(points)?;
    Ok(match pos {
        ZeroPosition::Interior => StabilityVerdict::stable(),
        ZeroPosition::Boundary => StabilityVerdict::strictly_semistable(),
        ZeroPosition::Outside => {
            StabilityVerdict::unstable(Certificate::Covector(cert.expect("outside certificate")))
        }
    })
}

/// Hilbert–Mumford test for the coordinates listed in `support` (the
/// coordinates with nonzero entry), each weight shifted by the twist.
pub fn torus_test(
    lin: &TorusLinearisation,
    support: &[usize],
) -> Result<StabilityVerdict, CoreError> {
    if support.is_empty() {
        return Err(CoreError::InvalidInput("empty support".into()));
    }
    if let Some(&bad) = support.iter().find(|&&i| i >= lin.weights.len()) {
        return Err(CoreError::InvalidInput(format!(
            "support index {bad} out of range ({} coordinates)",
            lin.weights.len()
        )));
    }
    let points: Vec<Vec<Rat>> = support.iter().map(|&i| lin.shifted_weight(i)).collect();
    torus_test_points(&WeightPointSet::new(lin.rank.min(3), points)?)
}

/// Weight map of the diagonal torus of `GL(2)` on grade-`d` forms with a
/// diagonal twist `δ`: the monomial `x^i y^j z^k` goes to
/// `(i − k + δ, j − k + δ)`. Requires even `d`.
pub fn tc_weight_map(d: u32, delta: &Rat) -> Result<BTreeMap<WeightedMonomial, [Rat; 2]>, CoreError> {
    if d % 2 != 0 {
        return Err(CoreError::OddDegree(d));
    }
    let mut out = BTreeMap::new();
    for m in monomial_basis(d) {
        let a = Rat::from_integer(m.i.into()) - Rat::from_integer(m.k.into()) + delta;
        let b = Rat::from_integer(m.j.into()) - Rat::from_integer(m.k.into()) + delta;
        out.insert(m, [a, b]);
    }
    Ok(out)
}

/// One open chamber of the rank-1 twist line, with the coordinate index
/// sets that pair positively / negatively against any twist inside it. A
/// support is semistable (equivalently stable) in the chamber iff it meets
/// both sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub lo: Rat,
    pub hi: Rat,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

/// A wall of the rank-1 twist line together with the coordinates whose
/// shifted weight vanishes there; those singletons are strictly semistable
/// on the wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub delta: Rat,
    pub vanishing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub walls: Vec<Wall>,
    pub chambers: Vec<Chamber>,
}

impl ChamberDecomposition {
    /// Semistability of a support at a twist value, from the tables alone.
    pub fn support_semistable(&self, weights: &[Rat], support: &[usize], delta: &Rat) -> bool {
        let has_ge = support.iter().any(|&i| &weights[i] + delta >= Rat::zero());
        let has_le = support.iter().any(|&i| &weights[i] + delta <= Rat::zero());
        has_ge && has_le
    }
}

/// Walls and chambers of a rank-1 linearisation as the twist varies: walls
/// sit at the negatives of the distinct weights, and between consecutive
/// walls the semistable supports are constant.
pub fn vgit_chambers(lin: &TorusLinearisation) -> Result<ChamberDecomposition, CoreError> {
    if lin.rank != 1 {
        return Err(CoreError::InvalidInput("chamber tables are rank-1 only".into()));
    }
    let weights: Vec<Rat> = lin.weights.iter().map(|w| w[0].clone()).collect();
    let mut wall_values: Vec<Rat> = weights.iter().map(|w| -w).collect();
    wall_values.sort();
    wall_values.dedup();
    let walls: Vec<Wall> = wall_values
        .iter()
        .map(|delta| Wall {
            delta: delta.clone(),
            vanishing: weights
                .iter()
                .enumerate()
                .filter(|(_, w)| &-(*w).clone() == delta)
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    let mut chambers = Vec::new();
    for pair in wall_values.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        // Any interior twist classifies the coordinates for the whole chamber.
        let mid = (lo + hi) / Rat::from_integer(2.into());
        let positive =
            weights.iter().enumerate().filter(|(_, w)| *w + &mid > Rat::zero()).map(|(i, _)| i);
        let negative =
            weights.iter().enumerate().filter(|(_, w)| *w + &mid < Rat::zero()).map(|(i, _)| i);
        chambers.push(Chamber {
            lo: lo.clone(),
            hi: hi.clone(),
            positive: positive.collect(),
            negative: negative.collect(),
        });
    }
    Ok(ChamberDecomposition { walls, chambers })
}

/// A rank-2 wall: the line `normal · δ = offset` in twist space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallLine {
    pub normal: [BigInt; 2],
    pub offset: Rat,
}

/// Rank-2 wall hyperplane enumerator (no chamber tables): one line per
/// affine span of a pair of distinct weights, expressed as a locus in twist
/// space via `0 ∈ conv(S + δ) ⇔ −δ ∈ conv(S)`.
pub fn vgit_wall_lines(lin: &TorusLinearisation) -> Result<Vec<WallLine>, CoreError> {
    if lin.rank != 2 {
        return Err(CoreError::InvalidInput("wall-line enumeration is rank-2 only".into()));
    }
    let mut dedup: Vec<WallLine> = Vec::new();
    for (a, wa) in lin.weights.iter().enumerate() {
        for wb in lin.weights.iter().skip(a + 1) {
            if wa == wb {
                continue;
            }
            let dir = [&wb[0] - &wa[0], &wb[1] - &wa[1]];
            let normal_rat = vec![-dir[1].clone(), dir[0].clone()];
            let mut normal = primitive_integer_vector(&normal_rat);
            // -δ on the line through wa with this normal: normal·(-δ) = normal·wa.
            let mut offset = -(Rat::from_integer(normal[0].clone()) * &wa[0]
                + Rat::from_integer(normal[1].clone()) * &wa[1]);
            // Canonical sign: first nonzero normal entry positive.
            let flip = if normal[0].is_zero() {
                normal[1] < BigInt::zero()
            } else {
                normal[0] < BigInt::zero()
            };
            if flip {
                normal = normal.into_iter().map(|x| -x).collect();
                offset = -offset;
            }
            let line = WallLine { normal: [normal[0].clone(), normal[1].clone()], offset };
            if !dedup.contains(&line) {
                dedup.push(line);
            }
        }
    }
    Ok(dedup)
}

/// A rational point of `ℙ¹² = ℙ(ℂ ⊕ Hom(ℂ³, ℂ⁴))`: the distinguished
/// coordinate `a₀` and the 3×4 block `(a_ij)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P12Point {
    pub a0: Rat,
    pub a: QMatrix,
}

impl P12Point {
    pub fn new(a0: Rat, a: QMatrix) -> Result<Self, CoreError> {
        if (a.rows, a.cols) != (3, 4) {
            return Err(CoreError::InvalidInput("matrix block must be 3x4".into()));
        }
        if a0.is_zero() && a.is_zero() {
            return Err(CoreError::InvalidInput("all 13 coordinates are zero".into()));
        }
        Ok(P12Point { a0, a })
    }

    pub fn basepoint() -> Self {
        P12Point { a0: Rat::one(), a: QMatrix::zeros(3, 4) }
    }

    /// Is column `j` of the 3x4 block nonzero?
    pub fn column_nonzero(&self, j: usize) -> bool {
        (0..3).any(|i| !self.a[(i, j)].is_zero())
    }
}

/// Rank of the 3×4 block over ℚ.
pub fn rank_stratum(a: &P12Point) -> u32 {
    a.a.rank() as u32
}

/// A shift `N ≥ N*` makes the product verdict independent of `N`: any
/// integer covector separating a proper vertex subset of the weight simplex
/// pairs at least 1 with each shifted vertex and needs entries of absolute
/// value at most 3, while the unshifted offsets lie in `[-d/2, d/2]` per
/// coordinate, so `|λ·w| ≤ 5d/2`.
pub fn product_shift_bound(d: u32) -> u64 {
    (5 * d as u64) / 2 + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTestResult {
    pub verdict: StabilityVerdict,
    pub n_star: u64,
    pub n_is_sufficient: bool,
}

/// Rank-3 hull test on `ℙ¹² × Y_{d}` with the product linearisation that
/// weights the first factor by `N`.
///
/// Weight coordinates live in the `χ₁, χ₂, χ₃` basis with
/// `χ₄ = −χ₁−χ₂−χ₃`; the support contributes the `Y`-monomial weights when
/// `a₀ ≠ 0` and one `N`-shifted copy per nonzero column of `(a_ij)`, and the
/// diagonal twist adds `δ·(1,1,1)`. A point with `a₀ = 0` is unstable for
/// any sufficiently large `N` (the first factor is already unstable), with
/// the certificate covector read off after a column-reducing move.
pub fn product_torus_test(
    a: &P12Point,
    ysupport: &[(u32, u32, u32, u32)],
    n_shift: u64,
    delta: &Rat,
) -> Result<ProductTestResult, CoreError> {
    if ysupport.is_empty() {
        return Err(CoreError::InvalidInput("empty Y-support".into()));
    }
    let half_d = {
        let (i, j, k, l) = ysupport[0];
        i + j + k + l
    };
    if ysupport.iter().any(|&(i, j, k, l)| i + j + k + l != half_d) {
        return Err(CoreError::InvalidInput("Y-support degrees differ".into()));
    }
    if n_shift == 0 {
        return Err(CoreError::InvalidInput("shift N must be positive".into()));
    }
    let n_star = product_shift_bound(2 * half_d);
    let n_is_sufficient = n_shift >= n_star;

    if a.a0.is_zero() {
        // Column-reduce the rank-≤3 block into the first three coordinates;
        // (1,1,1) then pairs positively with every N-shifted weight.
        let covector = vec![BigInt::one(), BigInt::one(), BigInt::one()];
        return Ok(ProductTestResult {
            verdict: StabilityVerdict::unstable(Certificate::Covector(covector)),
            n_star,
            n_is_sufficient,
        });
    }

    let chi: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
    let y_weight = |&(i, j, k, l): &(u32, u32, u32, u32)| -> Vec<Rat> {
        let coeffs = [i as i64, j as i64, k as i64, l as i64];
        (0..3)
            .map(|axis| {
                let mut v = 0i64;
                for (c, chi_row) in coeffs.iter().zip(&chi) {
                    v += c * chi_row[axis];
                }
                Rat::from_integer(v.into()) + delta
            })
            .collect()
    };

    let mut points: Vec<Vec<Rat>> = Vec::new();
    for w in ysupport {
        points.push(y_weight(w));
    }
    let shift = Rat::from_integer(n_shift.into());
    for (j, chi_row) in chi.iter().enumerate() {
        if !a.column_nonzero(j) {
            continue;
        }
        for w in ysupport {
            let base = y_weight(w);
            let shifted: Vec<Rat> = base
                .iter()
                .zip(chi_row)
                .map(|(v, &c)| v + &shift * Rat::from_integer(c.into()))
                .collect();
            points.push(shifted);
        }
    }
    let verdict = torus_test_points(&WeightPointSet::new(3, points)?)?;
    Ok(ProductTestResult { verdict, n_star, n_is_sufficient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};
    use crate::verdict::Status;

    fn rank1(weights: &[i64], twist: i64) -> TorusLinearisation {
        TorusLinearisation::rank1(weights.iter().map(|&w| rati(w)).collect(), rati(twist))
    }

    #[test]
    fn block_weights_three_linearisations() {
        // Weights (3, 3, 1, -1, -1) on P^4.
        let w = [3i64, 3, 1, -1, -1];
        // Twist 0: positive block {0,1,2} and negative block {3,4}.
        let lin0 = rank1(&w, 0);
        assert_eq!(torus_test(&lin0, &[0, 4]).unwrap().status, Status::Stable);
        let unstable = torus_test(&lin0, &[0, 1, 2]).unwrap();
        assert_eq!(unstable.status, Status::Unstable);
        match unstable.certificate.unwrap() {
            Certificate::Covector(c) => assert_eq!(c, vec![BigInt::from(1)]),
            other => panic!("unexpected certificate {other:?}"),
        }
        // Twist -1: the weight-1 coordinate alone is strictly semistable.
        let lin1 = rank1(&w, -1);
        assert_eq!(torus_test(&lin1, &[2]).unwrap().status, Status::StrictlySemistable);
        // Twist -2: split moves to {0,1} vs {2,3,4}.
        let lin2 = rank1(&w, -2);
        assert_eq!(torus_test(&lin2, &[0, 2]).unwrap().status, Status::Stable);
        assert_eq!(torus_test(&lin2, &[2, 3]).unwrap().status, Status::Unstable);
    }

    #[test]
    fn tc_weight_map_examples() {
        let map = tc_weight_map(4, &rati(0)).unwrap();
        let hull_pts: Vec<(Rat, Rat)> =
            map.values().map(|[a, b]| (a.clone(), b.clone())).collect();
        let hull = crate::convex::hull_vertices_2d(&hull_pts);
        assert_eq!(hull.len(), 3);
        for v in [(rati(4), rati(0)), (rati(0), rati(4)), (rati(-2), rati(-2))] {
            assert!(hull.contains(&v));
        }
        let d2 = tc_weight_map(2, &rati(0)).unwrap();
        let ws: Vec<[Rat; 2]> = d2.values().cloned().collect();
        assert!(ws.contains(&[rati(2), rati(0)]));
        assert!(ws.contains(&[rati(1), rati(1)]));
        assert!(ws.contains(&[rati(0), rati(2)]));
        assert!(ws.contains(&[rati(-1), rati(-1)]));
        // Pure z-power lands on the diagonal vertex.
        let d6 = tc_weight_map(6, &rat(5, 2)).unwrap();
        assert_eq!(
            d6[&WeightedMonomial::new(0, 0, 3)],
            [rat(5, 2) - rati(3), rat(5, 2) - rati(3)]
        );
        assert!(tc_weight_map(3, &rati(0)).is_err());
    }

    #[test]
    fn chambers_rank1() {
        let lin = rank1(&[3, 1, -1], 0);
        let dec = vgit_chambers(&lin).unwrap();
        let walls: Vec<Rat> = dec.walls.iter().map(|w| w.delta.clone()).collect();
        assert_eq!(walls, vec![rati(-3), rati(-1), rati(1)]);
        assert_eq!(dec.chambers.len(), 2);
        // In (-1, 1) a support is semistable iff it has both signs.
        let pm = rank1(&[1, -1], 0);
        let dec2 = vgit_chambers(&pm).unwrap();
        assert_eq!(
            dec2.walls.iter().map(|w| w.delta.clone()).collect::<Vec<_>>(),
            vec![rati(-1), rati(1)]
        );
        let chamber = &dec2.chambers[0];
        assert_eq!((chamber.positive.clone(), chamber.negative.clone()), (vec![0], vec![1]));
        // Singleton weight: one wall, no chamber.
        let single = vgit_chambers(&rank1(&[2], 0)).unwrap();
        assert_eq!(single.walls.len(), 1);
        assert_eq!(single.walls[0].delta, rati(-2));
        assert!(single.chambers.is_empty());
    }

    #[test]
    fn wall_lines_rank2() {
        let lin = TorusLinearisation::new(
            2,
            vec![
                vec![rati(1), rati(0)],
                vec![rati(0), rati(1)],
                vec![rati(-1), rati(-1)],
            ],
            vec![rati(0), rati(0)],
        )
        .unwrap();
        let lines = vgit_wall_lines(&lin).unwrap();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            // Each line passes through the negatives of two of the weights.
            let on_line = lin
                .weights
                .iter()
                .filter(|w| {
                    Rat::from_integer(line.normal[0].clone()) * -&w[0]
                        + Rat::from_integer(line.normal[1].clone()) * -&w[1]
                        == line.offset
                })
                .count();
            assert!(on_line >= 2);
        }
    }

    #[test]
    fn product_test_reduces_to_y_only_at_basepoint() {
        let base = P12Point::basepoint();
        let mut ysupport = Vec::new();
        for i in 0..=2u32 {
            for j in 0..=2 - i {
                for k in 0..=2 - i - j {
                    ysupport.push((i, j, k, 2 - i - j - k));
                }
            }
        }
        let res = product_torus_test(&base, &ysupport, 100, &rati(0)).unwrap();
        assert_eq!(res.verdict.status, Status::Stable);
        assert!(res.n_is_sufficient);
        // Against the plain rank-3 test on Y-weights only.
        let pts: Vec<Vec<Rat>> = ysupport
            .iter()
            .map(|&(i, j, k, l)| {
                vec![
                    rati(i as i64 - l as i64),
                    rati(j as i64 - l as i64),
                    rati(k as i64 - l as i64),
                ]
            })
            .collect();
        let direct = torus_test_points(&WeightPointSet::new(3, pts).unwrap()).unwrap();
        assert_eq!(direct.status, res.verdict.status);
    }

    #[test]
    fn product_test_zero_a0_is_unstable() {
        let mut block = QMatrix::zeros(3, 4);
        block[(0, 0)] = rati(1);
        block[(1, 1)] = rati(1);
        block[(2, 2)] = rati(1);
        block[(0, 3)] = rati(2);
        let a = P12Point::new(rati(0), block).unwrap();
        let res = product_torus_test(&a, &[(2, 0, 0, 0), (0, 0, 0, 2)], 100, &rati(0)).unwrap();
        assert_eq!(res.verdict.status, Status::Unstable);
        assert!(res.verdict.certificate.is_some());
    }

    #[test]
    fn product_test_standard_inclusion_pure_z_power() {
        let mut block = QMatrix::zeros(3, 4);
        block[(0, 0)] = rati(1);
        block[(1, 1)] = rati(1);
        block[(2, 2)] = rati(1);
        let a = P12Point::new(rati(1), block).unwrap();
        assert_eq!(rank_stratum(&a), 3);
        // Pure z-power support: weights (-2,-2,-2) plus three N-shifted
        // copies; by hand the barycentric solution (1/50, 1/50, 1/50, 47/50)
        // puts the origin strictly inside for N = 100.
        let res = product_torus_test(&a, &[(0, 0, 0, 2)], 100, &rati(0)).unwrap();
        assert_eq!(res.verdict.status, Status::Stable);
    }

    #[test]
    fn rank_strata() {
        assert_eq!(rank_stratum(&P12Point::basepoint()), 0);
        let mut one = QMatrix::zeros(3, 4);
        one[(0, 0)] = rati(1);
        assert_eq!(rank_stratum(&P12Point::new(rati(1), one).unwrap()), 1);
    }

    #[test]
    fn shift_bound_grows_linearly() {
        assert_eq!(product_shift_bound(4), 11);
        assert_eq!(product_shift_bound(2), 6);
    }
}
