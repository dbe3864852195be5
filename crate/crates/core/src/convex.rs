//! Exact convex-position tests over ℚ.
//!
//! The origin's position relative to the convex hull of a finite rational
//! point set is decided with a phase-1 simplex (Bland's rule, rational
//! tableau, no floating point). Infeasibility certificates from the dual
//! give strict separating covectors. A small exact 2D hull is included for
//! vertex enumeration and boundary-distance queries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::linalg::QMatrix;
use crate::rational::{primitive_integer_vector, Rat};

/// Position of the origin relative to a convex hull. `Interior` is interior
/// relative to the ambient space of the declared dimension: a hull of lower
/// affine dimension is never `Interior`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPosition {
    Outside,
    Boundary,
    Interior,
}

/// Finite set of rational weight vectors; multiplicity is irrelevant and
/// duplicates are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPointSet {
    pub dim: usize,
    pub points: Vec<Vec<Rat>>,
}

impl WeightPointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rat>>) -> Result<Self, CoreError> {
        if !(1..=3).contains(&dim) {
            return Err(CoreError::InvalidInput(format!("dimension {dim} outside 1..=3")));
        }
        if points.is_empty() {
            return Err(CoreError::InvalidInput("empty weight point set".into()));
        }
        let mut unique: Vec<Vec<Rat>> = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(CoreError::InvalidInput(format!(
                    "point of length {} in dimension {dim}",
                    p.len()
                )));
            }
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Ok(WeightPointSet { dim, points: unique })
    }
}

/// Result of a phase-1 simplex run on `Ax = b, x ≥ 0`.
struct Phase1 {
    feasible: bool,
    /// Row multipliers `y` with `yᵀA ≤ 0` and `yᵀb > 0` when infeasible.
    farkas: Option<Vec<Rat>>,
}

/// Minimizes the sum of artificial variables for `Ax = b, x ≥ 0` with a
/// dense rational tableau and Bland's rule (no cycling).
fn phase1_simplex(a: &[Vec<Rat>], b: &[Rat]) -> Phase1 {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    // Normalize to b >= 0.
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut row_sign: Vec<Rat> = Vec::with_capacity(m);
    for i in 0..m {
        if b[i] < Rat::zero() {
            t.push(a[i].iter().map(|v| -v).collect());
            rhs.push(-&b[i]);
            row_sign.push(-Rat::one());
        } else {
            t.push(a[i].clone());
            rhs.push(b[i].clone());
            row_sign.push(Rat::one());
        }
    }
    // Append artificial identity columns.
    for (i, row) in t.iter_mut().enumerate() {
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
    }
    let total = n + m;
    let mut basis: Vec<usize> = (n..total).collect();

    let cost = |j: usize| -> Rat {
        if j >= n {
            Rat::one()
        } else {
            Rat::zero()
        }
    };

    loop {
        // Reduced costs r_j = c_j - sum_i c_basis[i] * T[i][j].
        let mut entering: Option<usize> = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost(j);
            for i in 0..m {
                if basis[i] >= n {
                    r -= &t[i][j];
                }
            }
            if r < Rat::zero() {
                entering = Some(j);
                break; // Bland: smallest index.
            }
        }
        let Some(e) = entering else {
            break;
        };
        // Ratio test, Bland tie-break on basis index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][e] > Rat::zero() {
                let ratio = &rhs[i] / &t[i][e];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur || (ratio == *cur && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0),
            // but guard anyway.
            break;
        };
        // Pivot on (l, e).
        let piv = t[l][e].clone();
        for j in 0..total {
            t[l][j] = &t[l][j] / &piv;
        }
        rhs[l] = &rhs[l] / &piv;
        for i in 0..m {
            if i != l && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..total {
                    let v = &t[i][j] - &f * &t[l][j];
                    t[i][j] = v;
                }
                let v = &rhs[i] - &f * &rhs[l];
                rhs[i] = v;
            }
        }
        basis[l] = e;
    }

    let mut objective = Rat::zero();
    for i in 0..m {
        if basis[i] >= n {
            objective += &rhs[i];
        }
    }
    if objective.is_zero() {
        Phase1 { feasible: true, farkas: None }
    } else {
        // y_i = 1 - r(artificial_i), corrected for row sign flips.
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let col = n + i;
            let mut r = Rat::one();
            for row in 0..m {
                if basis[row] >= n {
                    r -= &t[row][col];
                }
            }
            y.push((Rat::one() - r) * &row_sign[i]);
        }
        Phase1 { feasible: false, farkas: Some(y) }
    }
}

/// Is the origin a convex combination of the points? On failure returns the
/// strict separating covector (`λ·s > 0` for every point).
fn origin_in_hull(points: &[Vec<Rat>], dim: usize) -> (bool, Option<Vec<Rat>>) {
    let n = points.len();
    let mut a = vec![vec![Rat::zero(); n]; dim + 1];
    for (j, p) in points.iter().enumerate() {
        for (i, v) in p.iter().enumerate() {
            a[i][j] = v.clone();
        }
        a[dim][j] = Rat::one();
    }
    let mut b = vec![Rat::zero(); dim + 1];
    b[dim] = Rat::one();
    let res = phase1_simplex(&a, &b);
    if res.feasible {
        (true, None)
    } else {
        let y = res.farkas.expect("infeasible run carries a certificate");
        // yᵀ(s_j, 1) ≤ 0 with y_last > 0, so λ = -y[..dim] strictly separates.
        let lambda: Vec<Rat> = y[..dim].iter().map(|v| -v).collect();
        (false, Some(lambda))
    }
}

/// Does a nonzero covector exist with `λ·s ≥ 0` for all points? Assumes the
/// points span the ambient space (checked by the caller), which makes the
/// normalization `Σ_s λ·s = 1` complete.
fn has_supporting_covector(points: &[Vec<Rat>], dim: usize) -> bool {
    let n = points.len();
    // Variables: u (dim), v (dim) with λ = u - v, slacks w (n).
    let cols = 2 * dim + n;
    let mut a = vec![vec![Rat::zero(); cols]; n + 1];
    for (s, p) in points.iter().enumerate() {
        for d in 0..dim {
            a[s][d] = p[d].clone();
            a[s][dim + d] = -&p[d];
        }
        a[s][2 * dim + s] = -Rat::one();
        for d in 0..dim {
            let v = &a[n][d] + &p[d];
            a[n][d] = v;
            let w = &a[n][dim + d] - &p[d];
            a[n][dim + d] = w;
        }
    }
    let mut b = vec![Rat::zero(); n + 1];
    b[n] = Rat::one();
    phase1_simplex(&a, &b).feasible
}

/// Exact position of the origin relative to `conv(S)`, with a primitive
/// integer separating covector when the verdict is `Outside`.
pub fn zero_position_with_certificate(
    s: &WeightPointSet,
) -> Result<(ZeroPosition, Option<Vec<BigInt>>), CoreError> {
    let (inside, separator) = origin_in_hull(&s.points, s.dim);
    if !inside {
        let lambda = separator.expect("outside verdict carries a separator");
        debug_assert!(s
            .points
            .iter()
            .all(|p| p.iter().zip(&lambda).map(|(a, b)| a * b).sum::<Rat>() > Rat::zero()));
        return Ok((ZeroPosition::Outside, Some(primitive_integer_vector(&lambda))));
    }
    // Lower-dimensional hulls are never interior relative to the ambient
    // space: the declared dimension is authoritative.
    let rank = QMatrix::from_rows(s.points.clone())?.rank();
    if rank < s.dim {
        return Ok((ZeroPosition::Boundary, None));
    }
    if has_supporting_covector(&s.points, s.dim) {
        Ok((ZeroPosition::Boundary, None))
    } else {
        Ok((ZeroPosition::Interior, None))
    }
}

/// Position only.
pub fn zero_position(s: &WeightPointSet) -> Result<ZeroPosition, CoreError> {
    zero_position_with_certificate(s).map(|(p, _)| p)
}

fn cross(o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex hull vertices of a 2D rational point set, counter-clockwise,
/// collinear points dropped. A single point or segment returns its
/// endpoints.
pub fn hull_vertices_2d(points: &[(Rat, Rat)]) -> Vec<(Rat, Rat)> {
    let mut pts: Vec<(Rat, Rat)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(Rat, Rat)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rat::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(Rat, Rat)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rat::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // Degenerate all-collinear input collapses to the two extremes.
    if lower.len() < 2 {
        return vec![pts.first().unwrap().clone(), pts.last().unwrap().clone()];
    }
    lower
}

/// Squared distance from the origin to the segment `[p, q]`.
pub fn origin_segment_distance_sq(p: &(Rat, Rat), q: &(Rat, Rat)) -> Rat {
    let dir = (&q.0 - &p.0, &q.1 - &p.1);
    let len_sq = &dir.0 * &dir.0 + &dir.1 * &dir.1;
    let norm_sq = |v: &(Rat, Rat)| &v.0 * &v.0 + &v.1 * &v.1;
    if len_sq.is_zero() {
        return norm_sq(p);
    }
    let t = -(&p.0 * &dir.0 + &p.1 * &dir.1) / &len_sq;
    let t = t.max(Rat::zero()).min(Rat::one());
    let closest = (&p.0 + &t * &dir.0, &p.1 + &t * &dir.1);
    norm_sq(&closest)
}

/// Squared distance from the origin to the boundary of the 2D hull of the
/// points (for a point or segment hull, the distance to the hull itself).
pub fn origin_hull_boundary_distance_sq(points: &[(Rat, Rat)]) -> Rat {
    let hull = hull_vertices_2d(points);
    if hull.len() == 1 {
        let p = &hull[0];
        return &p.0 * &p.0 + &p.1 * &p.1;
    }
    let mut best: Option<Rat> = None;
    for idx in 0..hull.len() {
        let a = &hull[idx];
        let b = &hull[(idx + 1) % hull.len()];
        if hull.len() == 2 && idx == 1 {
            break;
        }
        let d = origin_segment_distance_sq(a, b);
        best = Some(match best {
            None => d,
            Some(cur) => cur.min(d),
        });
    }
    best.expect("hull has at least one edge")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};

    fn set(dim: usize, pts: &[&[i64]]) -> WeightPointSet {
        WeightPointSet::new(
            dim,
            pts.iter().map(|p| p.iter().map(|&v| rati(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn interval_contains_origin_strictly() {
        let s = set(1, &[&[3], &[-1]]);
        assert_eq!(zero_position(&s).unwrap(), ZeroPosition::Interior);
    }

    #[test]
    fn single_origin_point_is_boundary() {
        let s = set(2, &[&[0, 0]]);
        assert_eq!(zero_position(&s).unwrap(), ZeroPosition::Boundary);
    }

    #[test]
    fn segment_missing_origin_is_outside_with_certificate() {
        let s = set(2, &[&[1, 0], &[0, 1]]);
        let (pos, cert) = zero_position_with_certificate(&s).unwrap();
        assert_eq!(pos, ZeroPosition::Outside);
        let lambda = cert.unwrap();
        for p in &s.points {
            let pairing: Rat = p
                .iter()
                .zip(&lambda)
                .map(|(a, b)| a * Rat::from_integer(b.clone()))
                .sum();
            assert!(pairing > Rat::zero());
        }
    }

    #[test]
    fn planar_positions() {
        // Triangle strictly around the origin.
        let tri = set(2, &[&[2, 0], &[-1, 2], &[-1, -2]]);
        assert_eq!(zero_position(&tri).unwrap(), ZeroPosition::Interior);
        // Origin as a vertex.
        let corner = set(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(zero_position(&corner).unwrap(), ZeroPosition::Boundary);
        // Origin on an edge.
        let edge = set(2, &[&[-1, -1], &[1, 1], &[0, 5]]);
        assert_eq!(zero_position(&edge).unwrap(), ZeroPosition::Boundary);
        // Segment through the origin spans only a line: boundary, not interior.
        let seg = set(2, &[&[-1, -1], &[2, 2]]);
        assert_eq!(zero_position(&seg).unwrap(), ZeroPosition::Boundary);
    }

    #[test]
    fn three_dimensional_positions() {
        let simplex = set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]);
        assert_eq!(zero_position(&simplex).unwrap(), ZeroPosition::Interior);
        let face = set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(zero_position(&face).unwrap(), ZeroPosition::Outside);
        let plane = set(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0]]);
        assert_eq!(zero_position(&plane).unwrap(), ZeroPosition::Boundary);
    }

    #[test]
    fn hull_vertices_triangle() {
        let pts: Vec<(Rat, Rat)> = vec![
            (rati(0), rati(0)),
            (rati(4), rati(0)),
            (rati(0), rati(4)),
            (rati(1), rati(1)),
            (rati(2), rati(0)),
            (rati(2), rati(2)),
        ];
        let hull = hull_vertices_2d(&pts);
        assert_eq!(hull.len(), 3);
        assert!(hull.contains(&(rati(0), rati(0))));
        assert!(hull.contains(&(rati(4), rati(0))));
        assert!(hull.contains(&(rati(0), rati(4))));
    }

    #[test]
    fn boundary_distance() {
        let square: Vec<(Rat, Rat)> = vec![
            (rati(1), rati(1)),
            (rati(-1), rati(1)),
            (rati(-1), rati(-1)),
            (rati(1), rati(-1)),
        ];
        assert_eq!(origin_hull_boundary_distance_sq(&square), rati(1));
        let far_point = vec![(rati(3), rati(4))];
        assert_eq!(origin_hull_boundary_distance_sq(&far_point), rati(25));
        let seg = vec![(rati(-5), rati(2)), (rati(5), rati(2))];
        assert_eq!(origin_hull_boundary_distance_sq(&seg), rati(4));
        let off_end = vec![(rati(2), rati(0)), (rati(3), rati(0))];
        assert_eq!(origin_hull_boundary_distance_sq(&off_end), rati(4));
    }

    #[test]
    fn fractional_coordinates() {
        let s = WeightPointSet::new(
            2,
            vec![
                vec![rat(1, 2), rat(1, 3)],
                vec![rat(-1, 2), rat(1, 3)],
                vec![rati(0), rat(-2, 3)],
            ],
        )
        .unwrap();
        assert_eq!(zero_position(&s).unwrap(), ZeroPosition::Interior);
    }
}
