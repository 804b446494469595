use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::frt::{generate_cloud, same_point_set, FrtParams};
use crate::geom::{Mat3, Scalar, Sqrt23, Vec3, Q23};

/// One directed sup-min distance, using a sort on x to prune candidates.
fn directed(a: &[Vec3<f64>], sorted_b: &[Vec3<f64>]) -> f64 {
    a.par_iter()
        .map(|p| {
            let x = p.0[0];
            let start = sorted_b.partition_point(|q| q.0[0] < x);
            let mut best = f64::INFINITY;
            for q in &sorted_b[start..] {
                if q.0[0] - x > best {
                    break;
                }
                best = best.min(p.distance(q));
            }
            for q in sorted_b[..start].iter().rev() {
                if x - q.0[0] > best {
                    break;
                }
                best = best.min(p.distance(q));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vec3<f64>], b: &[Vec3<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return invalid("Hausdorff distance needs two nonempty sets");
    }
    let sort = |s: &[Vec3<f64>]| {
        let mut v = s.to_vec();
        v.sort_by(|p, q| p.0[0].total_cmp(&q.0[0]));
        v
    };
    Ok(directed(a, &sort(b)).max(directed(b, &sort(a))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryVerdict {
    /// `Q·cloudₙ = cloudₙ` as exact point sets.
    ExactEquality,
    /// `d_H(Q·cloudₙ, cloudₙ)` is at most twice the cell diameter.
    Consistent,
    /// `d_H(Q·cloudₙ, cloudₙ)` exceeds twice the cell diameter, so `Q` is not a symmetry.
    Refuted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub depth: u32,
    pub verdict: SymmetryVerdict,
    pub hausdorff: f64,
    pub threshold: f64,
}

/// Tests whether `Q` maps the depth-`n` cloud onto itself.
///
/// In the exact modes the sets are compared exactly first. Otherwise the
/// Hausdorff distance is compared with `2·cell_diameter`: each cloud is within
/// one cell diameter of `A`, so a larger distance refutes `QA = A`.
pub fn symmetry_check<S: Scalar>(params: &FrtParams<S>, q: &Mat3<S>, depth: u32) -> Result<SymmetryReport> {
    if !crate::geom::is_special_orthogonal(q, if S::EXACT { 0.0 } else { params.tol() }) {
        return invalid("Q must be a rotation");
    }
    let cloud = generate_cloud(params, depth)?;
    let threshold = 2.0 * cloud.cell_diameter;
    let moved: Vec<Vec3<S>> = cloud.points.par_iter().map(|p| q.apply(p)).collect();
    if S::EXACT && same_point_set(&moved, &cloud.points, 0.0) {
        return Ok(SymmetryReport { depth, verdict: SymmetryVerdict::ExactEquality, hausdorff: 0.0, threshold });
    }
    let a: Vec<Vec3<f64>> = moved.iter().map(Vec3::to_f64).collect();
    let hausdorff = hausdorff_distance(&a, &cloud.to_f64_points())?;
    let verdict = if hausdorff > threshold { SymmetryVerdict::Refuted } else { SymmetryVerdict::Consistent };
    Ok(SymmetryReport { depth, verdict, hausdorff, threshold })
}

/// `−log 4 / log c`, an upper bound for the Hausdorff dimension.
pub fn similarity_dimension(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return invalid("c must lie in (0, 1)");
    }
    Ok(-(4f64.ln()) / c.ln())
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// The four piece balls are pairwise disjoint (or touching).
    pub disjoint: bool,
    pub margin: f64,
    /// The margin in `ℚ(√2, √3)` when `c` lies there.
    pub margin_exact: Option<String>,
}

/// `2√2 − 2c√3/(1−c)`: the gap between the balls `B(vᵢ, c√3/(1−c))`.
pub fn separation_margin<S: Sqrt23>(c: &S) -> S {
    let two = S::from_int(2);
    two.clone() * S::sqrt2() - two * c.clone() * S::sqrt3() / (S::one() - c.clone())
}

/// Nonnegative margin, i.e. `c ≤ √6 − 2`, makes all pieces pairwise disjoint.
pub fn separation_check<S: Scalar>(c: &S) -> Result<SeparationReport> {
    let cf = c.to_f64();
    if !(cf > 0.0 && cf < 1.0) {
        return invalid("c must lie in (0, 1)");
    }
    Ok(match c.to_q23() {
        Some(q) => {
            let m = separation_margin(&q);
            SeparationReport {
                disjoint: m.signum_exact() != Ordering::Less,
                margin: Scalar::to_f64(&m),
                margin_exact: Some(m.to_string()),
            }
        }
        None => {
            let m = separation_margin(&cf);
            SeparationReport { disjoint: m >= 0.0, margin: m, margin_exact: None }
        }
    })
}

/// `√6 − 2 = √2/(√2 + √3)`, the largest `c` passing the separation test.
pub fn separation_threshold() -> Q23 {
    Q23::sqrt6() - Q23::from_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rational;
    use crate::rotgroup::{hexahedral_coset, tetrahedral_group, ExactRotation};

    #[test]
    fn hausdorff_examples() {
        let a = vec![Vec3([0.0, 0.0, 0.0])];
        let b = vec![Vec3([3.0, 4.0, 0.0])];
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 5.0);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert!(hausdorff_distance(&a, &[]).is_err());
    }

    #[test]
    fn hausdorff_of_a_translate() {
        let p = FrtParams::from_rotation(0.5, &ExactRotation::named("z90").unwrap()).unwrap();
        let cloud = generate_cloud(&p, 4).unwrap().to_f64_points();
        let t = 0.37;
        let moved: Vec<_> = cloud.iter().map(|x| Vec3([x.0[0] + t, x.0[1], x.0[2]])).collect();
        assert!((hausdorff_distance(&cloud, &moved).unwrap() - t).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_matches_brute_force() {
        let a: Vec<Vec3<f64>> = (0..60).map(|k| Vec3([(k as f64 * 0.7).sin(), (k as f64).cos(), k as f64 * 0.01])).collect();
        let b: Vec<Vec3<f64>> = (0..45).map(|k| Vec3([(k as f64 * 1.3).cos(), (k as f64 * 0.4).sin(), 0.2])).collect();
        let brute = |x: &[Vec3<f64>], y: &[Vec3<f64>]| {
            x.iter().map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        let expected = brute(&a, &b).max(brute(&b, &a));
        assert!((hausdorff_distance(&a, &b).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn tetrahedral_symmetries_are_exact() {
        let half = Rational::from_ratio(1, 2);
        let p = FrtParams::from_rotation(half, &ExactRotation::named("z90").unwrap()).unwrap();
        for q in tetrahedral_group() {
            let r = symmetry_check(&p, &q.to_mat(), 4).unwrap();
            assert_eq!(r.verdict, SymmetryVerdict::ExactEquality);
        }
    }

    #[test]
    fn coset_elements_are_refuted() {
        let half = Rational::from_ratio(1, 2);
        let p = FrtParams::from_rotation(half, &ExactRotation::IDENTITY).unwrap();
        for q in hexahedral_coset() {
            let r = symmetry_check(&p, &q.to_mat(), 4).unwrap();
            assert_eq!(r.verdict, SymmetryVerdict::Refuted, "{q}");
        }
    }

    #[test]
    fn identity_is_a_symmetry() {
        let p = FrtParams::new(0.7, crate::geom::rotation_from_axis_angle(&Vec3([1.0, 2.0, 3.0]), 0.4).unwrap()).unwrap();
        let r = symmetry_check(&p, &Mat3::identity(), 3).unwrap();
        assert_eq!(r.hausdorff, 0.0);
        assert_eq!(r.verdict, SymmetryVerdict::Consistent);
    }

    #[test]
    fn dimension_values() {
        assert!((similarity_dimension(0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!((similarity_dimension(0.25).unwrap() - 1.0).abs() < 1e-15);
        assert!((similarity_dimension(0.4).unwrap() - 1.5129).abs() < 1e-4);
        assert!(similarity_dimension(1.0).is_err());
    }

    #[test]
    fn separation_boundary_is_exact() {
        let t = separation_threshold();
        let m = separation_margin(&t);
        assert_eq!(m, <Q23 as Scalar>::zero());
        assert!(separation_check(&t).unwrap().disjoint);
        assert!(separation_check(&Rational::from_ratio(3, 10)).unwrap().disjoint);
        assert!(!separation_check(&Rational::from_ratio(1, 2)).unwrap().disjoint);
        let tf = Scalar::to_f64(&t);
        assert!(separation_check(&(tf - 1e-3)).unwrap().disjoint);
        assert!(!separation_check(&(tf + 1e-3)).unwrap().disjoint);
        assert!(separation_margin(&tf).abs() < 1e-12);
    }
}
