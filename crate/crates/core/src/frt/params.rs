use std::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::geom::{is_special_orthogonal, tetra_vertices, ArithMode, Mat3, Scalar, Vec3, DEFAULT_TOL};
use crate::rotgroup::{classify_unchecked, ExactRotation, RotationClass};

/// The pair `(c, P)` defining the system `fᵢ(x) = cPx + vᵢ`.
///
/// `vertices` are the translation parts, normally the tetrahedron vertices;
/// [`FrtParams::in_frame`] produces the same system in another orthogonal
/// frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrtParams<S> {
    c: S,
    p: Mat3<S>,
    vertices: [Vec3<S>; 4],
    tol: f64,
}

impl<S: Scalar> FrtParams<S> {
    pub fn new(c: S, p: Mat3<S>) -> Result<Self> {
        Self::with_tol(c, p, DEFAULT_TOL)
    }

    pub fn with_tol(c: S, p: Mat3<S>, tol: f64) -> Result<Self> {
        if c.sign(0.0) != Ordering::Greater || (S::one() - c.clone()).sign(0.0) != Ordering::Greater {
            return invalid("c must lie in the open interval (0, 1)");
        }
        let so3_tol = if S::EXACT { 0.0 } else { tol };
        if !is_special_orthogonal(&p, so3_tol) {
            return invalid("P must be a rotation (orthogonal with determinant +1)");
        }
        Ok(FrtParams { c, p, vertices: tetra_vertices(), tol })
    }

    pub fn from_rotation(c: S, q: &ExactRotation) -> Result<Self> {
        Self::new(c, q.to_mat())
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn p(&self) -> &Mat3<S> {
        &self.p
    }

    pub fn vertices(&self) -> &[Vec3<S>; 4] {
        &self.vertices
    }

    pub fn vertex(&self, letter: u8) -> &Vec3<S> {
        &self.vertices[(letter - 1) as usize]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn mode(&self) -> ArithMode {
        S::MODE
    }

    pub fn c_f64(&self) -> f64 {
        self.c.to_f64()
    }

    /// The linear part `cP`.
    pub fn linear(&self) -> Mat3<S> {
        self.p.scale(&self.c)
    }

    pub fn classify(&self) -> RotationClass {
        classify_unchecked(&self.p, self.tol)
    }

    /// The exact group element `P` equals (or is within `tol` of).
    pub fn exact_rotation(&self) -> Option<ExactRotation> {
        let (q, dist) = ExactRotation::nearest(&self.p);
        let hit = if S::EXACT { self.p == q.to_mat::<S>() } else { dist <= self.tol };
        hit.then_some(q)
    }

    /// Whether `P` fixes the z-axis (a rotation about the line through 0 and `e_z`).
    pub fn is_about_z_axis(&self) -> bool {
        let ez = Vec3::from_ints([0, 0, 1]);
        (self.p.apply(&ez) - ez).is_zero_tol(self.tol)
    }

    /// The conjugate system `H ∘ f ∘ H⁻¹` for an orthogonal frame change `H`.
    pub fn in_frame(&self, h: &Mat3<S>) -> Result<Self> {
        let Some(h_inv) = h.inverse(if S::EXACT { 0.0 } else { self.tol }) else {
            return invalid("frame change must be invertible");
        };
        Ok(FrtParams {
            c: self.c.clone(),
            p: h.mul_mat(&self.p).mul_mat(&h_inv),
            vertices: self.vertices.clone().map(|v| h.apply(&v)),
            tol: self.tol,
        })
    }

    /// The same parameters evaluated in floating point.
    pub fn to_f64(&self) -> FrtParams<f64> {
        FrtParams {
            c: self.c.to_f64(),
            p: self.p.to_f64(),
            vertices: self.vertices.clone().map(|v| v.to_f64()),
            tol: self.tol,
        }
    }

    /// Embeds into another scalar type through the rationals.
    pub fn convert<T: Scalar>(&self) -> Option<FrtParams<T>> {
        let conv = |s: &S| s.to_rational().map(|q| T::from_rational(&q));
        let c = conv(&self.c)?;
        let mut rows: Vec<[T; 3]> = Vec::with_capacity(3);
        for i in 0..3 {
            rows.push([conv(&self.p.0[i][0])?, conv(&self.p.0[i][1])?, conv(&self.p.0[i][2])?]);
        }
        let p = Mat3([rows[0].clone(), rows[1].clone(), rows[2].clone()]);
        let mut verts: Vec<Vec3<T>> = Vec::with_capacity(4);
        for v in &self.vertices {
            verts.push(Vec3([conv(&v.0[0])?, conv(&v.0[1])?, conv(&v.0[2])?]));
        }
        Some(FrtParams {
            c,
            p,
            vertices: [verts[0].clone(), verts[1].clone(), verts[2].clone(), verts[3].clone()],
            tol: self.tol,
        })
    }

    /// `fᵢ(x) = cPx + vᵢ` for a 1-based letter.
    pub fn apply_map(&self, letter: u8, x: &Vec3<S>) -> Vec3<S> {
        self.p.apply(x).scale(&self.c) + self.vertex(letter).clone()
    }
}

pub(crate) fn check_letters(word: &[u8]) -> Result<()> {
    match word.iter().find(|l| !(1..=4).contains(*l)) {
        Some(bad) => invalid(format!("address letter {bad} is outside 1..4")),
        None => Ok(()),
    }
}

/// `f_{ω₁} ∘ … ∘ f_{ωₙ}(x)`.
pub fn apply_word<S: Scalar>(params: &FrtParams<S>, word: &[u8], x: &Vec3<S>) -> Result<Vec3<S>> {
    check_letters(word)?;
    Ok(word.iter().rev().fold(x.clone(), |acc, &l| params.apply_map(l, &acc)))
}
