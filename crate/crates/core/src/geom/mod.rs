//! Scalars, vectors, matrices and the basic predicates built on them.

mod linalg;
mod qfield;
mod scalar;

use std::cmp::Ordering;

pub use linalg::{orient3d, Mat3, Vec3};
pub use qfield::Q23;
pub use scalar::{parse_rational, ArithMode, Rational, Scalar, Sqrt23, DEFAULT_TOL};

use crate::error::{invalid, Result};

/// The tetrahedron vertices `v₁..v₄` as integer triples.
pub const TETRA_VERTICES: [[i64; 3]; 4] = [[1, -1, 1], [-1, 1, 1], [-1, -1, -1], [1, 1, -1]];

/// The complementary cube vertices `v′₁..v′₄`.
pub const DUAL_VERTICES: [[i64; 3]; 4] = [[1, 1, 1], [-1, -1, 1], [1, -1, -1], [-1, 1, -1]];

pub fn tetra_vertices<S: Scalar>() -> [Vec3<S>; 4] {
    TETRA_VERTICES.map(Vec3::from_ints)
}

pub fn dual_vertices<S: Scalar>() -> [Vec3<S>; 4] {
    DUAL_VERTICES.map(Vec3::from_ints)
}

/// Rodrigues rotation about `axis` by `angle` radians (right-handed).
pub fn rotation_from_axis_angle(axis: &Vec3<f64>, angle: f64) -> Result<Mat3<f64>> {
    let norm = axis.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return invalid("rotation axis must be a nonzero finite vector");
    }
    if !angle.is_finite() {
        return invalid("rotation angle must be finite");
    }
    let k = axis.scale(&(1.0 / norm));
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let [x, y, z] = k.0;
    Ok(Mat3([
        [c + t * x * x, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, c + t * y * y, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, c + t * z * z],
    ]))
}

/// `MᵀM = I` within `tol` (entrywise) and `det M > 0`.
pub fn is_special_orthogonal<S: Scalar>(m: &Mat3<S>, tol: f64) -> bool {
    let gram = m.transpose().mul_mat(m) - Mat3::identity();
    let orthogonal = gram.0.iter().flatten().all(|e| e.is_zero_tol(tol));
    orthogonal && m.determinant().sign(tol) == Ordering::Greater
}

/// Tries to express a floating rotation exactly with small rational entries.
///
/// Every entry is rounded to the nearest fraction with denominator at most
/// `max_den`; the result is returned only if it is exactly special
/// orthogonal and within `tol` of the input.
pub fn snap_rational_rotation(m: &Mat3<f64>, max_den: i64, tol: f64) -> Option<Mat3<Rational>> {
    let snap = |x: f64| -> Option<Rational> {
        (1..=max_den).find_map(|den| {
            let num = (x * den as f64).round();
            ((x - num / den as f64).abs() <= tol).then(|| Rational::from_ratio(num as i64, den))
        })
    };
    let mut rows: [[Rational; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            rows[i][j] = snap(m.0[i][j])?;
        }
    }
    let exact = Mat3(rows);
    is_special_orthogonal(&exact, 0.0).then_some(exact)
}

/// Position of a point relative to an oriented plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Positive,
    Negative,
    On,
}

/// A plane through `anchor` with (not necessarily unit) normal `normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<S> {
    pub anchor: Vec3<S>,
    pub normal: Vec3<S>,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(anchor: Vec3<S>, normal: Vec3<S>) -> Result<Self> {
        if normal.is_zero_tol(0.0) {
            return invalid("halfspace normal must be nonzero");
        }
        Ok(Halfspace { anchor, normal })
    }
}

/// Sign of `(u, p − x₀)`.
pub fn side_of_face<S: Scalar>(p: &Vec3<S>, h: &Halfspace<S>, tol: f64) -> Side {
    match h.normal.dot(&(p.clone() - h.anchor.clone())).sign(tol) {
        Ordering::Greater => Side::Positive,
        Ordering::Less => Side::Negative,
        Ordering::Equal => Side::On,
    }
}

/// The orthogonal frame change that puts `v₁` on the positive z-axis,
/// `H(v₁) = (0, 0, √3)`.
pub fn h_matrix<S: Sqrt23>() -> Mat3<S> {
    let r2 = S::sqrt2();
    let r3 = S::sqrt3();
    let r6 = r2.clone() * r3.clone();
    let half = S::from_ratio(1, 2);
    let third = S::from_ratio(1, 3);
    let sixth = S::from_ratio(1, 6);
    Mat3([
        [-(r6.clone() * sixth.clone()), r6.clone() * sixth, r6 * third.clone()],
        [-(r2.clone() * half.clone()), -(r2 * half), S::zero()],
        [r3.clone() * third.clone(), -(r3.clone() * third.clone()), r3 * third],
    ])
}

pub fn to_h_coordinates<S: Sqrt23>(p: &Vec3<S>) -> Vec3<S> {
    h_matrix::<S>().apply(p)
}

/// Inverse frame change, obtained by exact inversion of `H`.
pub fn from_h_coordinates<S: Sqrt23>(p: &Vec3<S>) -> Vec3<S> {
    h_matrix::<S>()
        .inverse(0.0)
        .expect("frame change is invertible")
        .apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: &Vec3<f64>, b: &Vec3<f64>, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn zero_angle_is_identity() {
        let r = rotation_from_axis_angle(&Vec3::new(0.3, -2.0, 1.0), 0.0).unwrap();
        assert!(r.max_abs_diff(&Mat3::identity()) < 1e-15);
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rotation_from_axis_angle(&Vec3::new(0.0, 0.0, 1.0), PI / 2.0).unwrap();
        let image = r.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert!(close(&image, &Vec3::new(0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn zero_axis_is_rejected() {
        assert!(rotation_from_axis_angle(&Vec3::zero(), 1.0).is_err());
    }

    #[test]
    fn conjugated_sixth_turn_fixes_h_of_v1() {
        let p = rotation_from_axis_angle(&Vec3::new(1.0, -1.0, 1.0), PI / 3.0).unwrap();
        let h = h_matrix::<f64>();
        let q = h.mul_mat(&p).mul_mat(&h.inverse(1e-12).unwrap());
        let target = Vec3::new(0.0, 0.0, 3f64.sqrt());
        assert!(close(&q.apply(&target), &target, 1e-12));
        let rtr = p.transpose().mul_mat(&p);
        assert!(rtr.max_abs_diff(&Mat3::identity()) <= 1e-12);
    }

    #[test]
    fn special_orthogonal_checks() {
        assert!(is_special_orthogonal(&Mat3::<Rational>::identity(), 0.0));
        let reflection: Mat3<Rational> = Mat3::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, -1]]);
        assert!(!is_special_orthogonal(&reflection, 0.0));
        let r = rotation_from_axis_angle(&Vec3::new(0.0, 0.0, 1.0), 0.7).unwrap();
        assert!(is_special_orthogonal(&r, 1e-12));
        let skew: Mat3<f64> = Mat3::from_ints([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(!is_special_orthogonal(&skew, 1e-9));
    }

    #[test]
    fn sixth_turn_about_v1_snaps_to_thirds() {
        let p = rotation_from_axis_angle(&Vec3::new(1.0, -1.0, 1.0), PI / 3.0).unwrap();
        let exact = snap_rational_rotation(&p, 12, 1e-9).unwrap();
        let expected = Mat3([
            [Rational::from_ratio(2, 3), Rational::from_ratio(-2, 3), Rational::from_ratio(-1, 3)],
            [Rational::from_ratio(1, 3), Rational::from_ratio(2, 3), Rational::from_ratio(-2, 3)],
            [Rational::from_ratio(2, 3), Rational::from_ratio(1, 3), Rational::from_ratio(2, 3)],
        ]);
        assert_eq!(exact, expected);
        let eighth = rotation_from_axis_angle(&Vec3::new(0.0, 0.0, 1.0), PI / 4.0).unwrap();
        assert!(snap_rational_rotation(&eighth, 24, 1e-9).is_none());
    }

    #[test]
    fn side_of_face_examples() {
        let h = Halfspace::new(Vec3::<Rational>::zero(), Vec3::from_ints([0, 0, 1])).unwrap();
        assert_eq!(side_of_face(&h.anchor.clone(), &h, 0.0), Side::On);
        assert_eq!(side_of_face(&Vec3::from_ints([0, 0, 5]), &h, 0.0), Side::Positive);
        assert_eq!(side_of_face(&Vec3::from_ints([3, -4, -2]), &h, 0.0), Side::Negative);
        assert!(Halfspace::new(Vec3::<Rational>::zero(), Vec3::zero()).is_err());
    }

    #[test]
    fn h_images_of_tetra_vertices_are_exact() {
        let [v1, v2, v3, v4] = tetra_vertices::<Q23>();
        let r2 = Q23::sqrt2();
        let r3 = Q23::sqrt3();
        let r6 = Q23::sqrt6();
        let z = Q23::zero();
        let third = Q23::from_ratio(1, 3);
        // 2√2/√3 = 2√6/3, √2/√3 = √6/3, 1/√3 = √3/3
        let low = -(r3.clone() * third.clone());
        assert_eq!(to_h_coordinates(&v1), Vec3::new(z.clone(), z.clone(), r3.clone()));
        assert_eq!(
            to_h_coordinates(&v2),
            Vec3::new(Q23::from_int(2) * r6.clone() * third.clone(), z, low.clone())
        );
        assert_eq!(
            to_h_coordinates(&v3),
            Vec3::new(-(r6.clone() * third.clone()), r2.clone(), low.clone())
        );
        assert_eq!(to_h_coordinates(&v4), Vec3::new(-(r6 * third), -r2, low));
        assert_eq!(to_h_coordinates(&Vec3::<Q23>::zero()), Vec3::zero());
    }

    #[test]
    fn h_images_form_regular_tetrahedron_of_edge_two_root_two() {
        let hs = tetra_vertices::<Q23>().map(|v| to_h_coordinates(&v));
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = hs[i].clone() - hs[j].clone();
                assert_eq!(d.norm_squared(), Q23::from_int(8));
            }
        }
    }

    proptest! {
        #[test]
        fn h_inverse_round_trips(x in -10.0f64..10.0, y in -10.0f64..10.0, z in -10.0f64..10.0) {
            let p = Vec3::new(x, y, z);
            let back = from_h_coordinates(&to_h_coordinates(&p));
            prop_assert!(close(&back, &p, 1e-12));
        }

        #[test]
        fn side_of_face_is_anchor_independent(
            p in proptest::array::uniform3(-5i64..5),
            n in proptest::array::uniform3(-3i64..3),
            t in proptest::array::uniform2(-4i64..4),
        ) {
            let normal = Vec3::<Rational>::from_ints(n);
            prop_assume!(!normal.is_zero_tol(0.0));
            // Two independent in-plane directions give a second anchor on the same plane.
            let helper = if n[0] != 0 || n[1] != 0 { Vec3::from_ints([0, 0, 1]) } else { Vec3::from_ints([1, 0, 0]) };
            let e1 = normal.cross(&helper);
            let e2 = normal.cross(&e1);
            let anchor_a = Vec3::from_ints([1, 2, 3]);
            let anchor_b = anchor_a.clone() + e1.scale(&Rational::from_int(t[0])) + e2.scale(&Rational::from_int(t[1]));
            let ha = Halfspace::new(anchor_a, normal.clone()).unwrap();
            let hb = Halfspace::new(anchor_b, normal).unwrap();
            let point = Vec3::from_ints(p);
            prop_assert_eq!(side_of_face(&point, &ha, 0.0), side_of_face(&point, &hb, 0.0));
        }
    }
}
