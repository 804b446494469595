//! The rotation groups of the regular tetrahedron (`P₄`, 12 elements) and
//! the cube (`P₆`, 24 elements), represented exactly as signed permutation
//! matrices.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{invalid, Result};
use crate::geom::{
    is_special_orthogonal, rotation_from_axis_angle, Mat3, Scalar, Vec3, DUAL_VERTICES, TETRA_VERTICES,
};

/// A signed permutation matrix with determinant `+1`.
///
/// Row `i` has its single nonzero entry `signs[i]` in column `perm[i]`, so
/// `(Mx)ᵢ = signs[i] · x[perm[i]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRotation {
    perm: [u8; 3],
    signs: [i8; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Tetrahedral,
    Hexahedral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RotationClass {
    InTetrahedral,
    InHexahedralNotTetrahedral,
    Outside,
}

impl RotationClass {
    pub fn in_hexahedral(self) -> bool {
        self != RotationClass::Outside
    }
}

impl fmt::Display for RotationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationClass::InTetrahedral => "InTetrahedral",
            RotationClass::InHexahedralNotTetrahedral => "InHexahedralNotTetrahedral",
            RotationClass::Outside => "Outside",
        })
    }
}

fn perm_parity(p: [u8; 3]) -> i8 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl ExactRotation {
    pub const IDENTITY: ExactRotation = ExactRotation { perm: [0, 1, 2], signs: [1, 1, 1] };

    /// Builds a signed permutation; `None` unless it is a proper rotation.
    pub fn new(perm: [u8; 3], signs: [i8; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p as usize] {
                return None;
            }
            seen[p as usize] = true;
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return None;
        }
        let det = perm_parity(perm) * signs.iter().product::<i8>();
        (det == 1).then_some(ExactRotation { perm, signs })
    }

    pub fn apply_int(&self, x: [i64; 3]) -> [i64; 3] {
        [0, 1, 2].map(|i| self.signs[i] as i64 * x[self.perm[i] as usize])
    }

    pub fn to_mat<S: Scalar>(&self) -> Mat3<S> {
        Mat3::from_fn(|i, j| {
            if self.perm[i] as usize == j {
                S::from_int(self.signs[i] as i64)
            } else {
                S::zero()
            }
        })
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &ExactRotation) -> ExactRotation {
        let mut perm = [0u8; 3];
        let mut signs = [0i8; 3];
        for i in 0..3 {
            let k = self.perm[i] as usize;
            perm[i] = other.perm[k];
            signs[i] = self.signs[i] * other.signs[k];
        }
        ExactRotation { perm, signs }
    }

    pub fn inverse(&self) -> ExactRotation {
        let mut perm = [0u8; 3];
        let mut signs = [0i8; 3];
        for i in 0..3 {
            let k = self.perm[i] as usize;
            perm[k] = i as u8;
            signs[k] = self.signs[i];
        }
        ExactRotation { perm, signs }
    }

    pub fn is_tetrahedral(&self) -> bool {
        TETRA_VERTICES.iter().all(|v| TETRA_VERTICES.contains(&self.apply_int(*v)))
    }

    /// The nearest group element in the entrywise max norm.
    pub fn nearest<S: Scalar>(m: &Mat3<S>) -> (ExactRotation, f64) {
        let mf = m.to_f64();
        hexahedral_group()
            .iter()
            .map(|q| (*q, mf.max_abs_diff(&q.to_mat::<f64>())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("group is nonempty")
    }

    /// Named elements: `E`, `x90`/`y90`/`z90` (and 180, 270), `diag120:vK`
    /// and `diag240:vK` (turns about the line through `vK`).
    pub fn named(name: &str) -> Option<ExactRotation> {
        let name = name.trim();
        if name == "E" || name == "I" || name == "identity" {
            return Some(Self::IDENTITY);
        }
        if let Some((kind, vertex)) = name.split_once(":v") {
            let idx: usize = vertex.parse().ok()?;
            if !(1..=4).contains(&idx) {
                return None;
            }
            let turns = match kind {
                "diag120" => 1,
                "diag240" => 2,
                _ => return None,
            };
            let [x, y, z] = TETRA_VERTICES[idx - 1].map(|c| c as f64);
            let angle = turns as f64 * 2.0 * std::f64::consts::PI / 3.0;
            let m = rotation_from_axis_angle(&Vec3::new(x, y, z), angle).ok()?;
            let (q, dist) = ExactRotation::nearest(&m);
            return (dist < 1e-9).then_some(q);
        }
        let (axis, angle) = name.split_at(1);
        let base = match axis {
            "x" => ExactRotation { perm: [0, 2, 1], signs: [1, -1, 1] },
            "y" => ExactRotation { perm: [2, 1, 0], signs: [1, 1, -1] },
            "z" => ExactRotation { perm: [1, 0, 2], signs: [-1, 1, 1] },
            _ => return None,
        };
        let reps = match angle {
            "90" => 1,
            "180" => 2,
            "270" => 3,
            _ => return None,
        };
        Some((0..reps).fold(Self::IDENTITY, |acc, _| acc.compose(&base)))
    }
}

impl fmt::Display for ExactRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = ['x', 'y', 'z'];
        let parts: Vec<String> = (0..3)
            .map(|i| {
                let sign = if self.signs[i] < 0 { "-" } else { "" };
                format!("{sign}{}", axis[self.perm[i] as usize])
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

static HEXAHEDRAL: OnceLock<Vec<ExactRotation>> = OnceLock::new();
static TETRAHEDRAL: OnceLock<Vec<ExactRotation>> = OnceLock::new();

/// All 24 rotations of the cube, in a fixed order starting with the identity.
pub fn hexahedral_group() -> &'static [ExactRotation] {
    HEXAHEDRAL.get_or_init(|| {
        let mut out = Vec::with_capacity(24);
        for perm in PERMS {
            for bits in 0..8u8 {
                let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1 } else { 1 });
                if let Some(q) = ExactRotation::new(perm, signs) {
                    out.push(q);
                }
            }
        }
        out
    })
}

/// The 12 rotations mapping `{v₁..v₄}` onto itself.
pub fn tetrahedral_group() -> &'static [ExactRotation] {
    TETRAHEDRAL.get_or_init(|| hexahedral_group().iter().copied().filter(ExactRotation::is_tetrahedral).collect())
}

pub fn enumerate_group(kind: GroupKind) -> Vec<ExactRotation> {
    match kind {
        GroupKind::Hexahedral => hexahedral_group().to_vec(),
        GroupKind::Tetrahedral => tetrahedral_group().to_vec(),
    }
}

/// Elements of `P₆ ∖ P₄`.
pub fn hexahedral_coset() -> Vec<ExactRotation> {
    hexahedral_group().iter().copied().filter(|q| !q.is_tetrahedral()).collect()
}

/// Classifies a rotation by entrywise distance to the exact group elements.
pub fn classify_rotation<S: Scalar>(m: &Mat3<S>, tol: f64) -> Result<RotationClass> {
    if !(0.0..0.5).contains(&tol) {
        return invalid("classification tolerance must lie in [0, 0.5)");
    }
    if !is_special_orthogonal(m, tol.max(if S::EXACT { 0.0 } else { 1e-12 })) {
        return invalid("matrix is not a rotation");
    }
    Ok(classify_unchecked(m, tol))
}

pub(crate) fn classify_unchecked<S: Scalar>(m: &Mat3<S>, tol: f64) -> RotationClass {
    let (q, dist) = ExactRotation::nearest(m);
    let hit = if S::EXACT { m == &q.to_mat::<S>() } else { dist <= tol };
    match (hit, q.is_tetrahedral()) {
        (false, _) => RotationClass::Outside,
        (true, true) => RotationClass::InTetrahedral,
        (true, false) => RotationClass::InHexahedralNotTetrahedral,
    }
}

/// A permutation σ of `{1,2,3,4}`, stored zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPermutation(pub [u8; 4]);

impl VertexPermutation {
    pub const IDENTITY: VertexPermutation = VertexPermutation([0, 1, 2, 3]);

    /// σ(i) for 1-based `i`.
    pub fn image(&self, i: u8) -> u8 {
        self.0[(i - 1) as usize] + 1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &VertexPermutation) -> VertexPermutation {
        VertexPermutation(other.0.map(|k| self.0[k as usize]))
    }

    pub fn is_even(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    /// Disjoint cycles of length ≥ 2, 1-based, each starting at its minimum.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start as usize] = true;
            let mut k = self.0[start as usize];
            while k != start {
                seen[k as usize] = true;
                cycle.push(k + 1);
                k = self.0[k as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for VertexPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u8::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// The permutation σ with `Q vᵢ = v_σ(i)`.
pub fn vertex_permutation(q: &ExactRotation) -> Result<VertexPermutation> {
    let mut sigma = [0u8; 4];
    for (i, v) in TETRA_VERTICES.iter().enumerate() {
        let image = q.apply_int(*v);
        match TETRA_VERTICES.iter().position(|w| *w == image) {
            Some(j) => sigma[i] = j as u8,
            None => return invalid(format!("{q} does not preserve the tetrahedron")),
        }
    }
    Ok(VertexPermutation(sigma))
}

/// Whether `q` maps the complementary vertex set `{v′ⱼ}` onto itself.
pub fn preserves_dual(q: &ExactRotation) -> bool {
    DUAL_VERTICES.iter().all(|v| DUAL_VERTICES.contains(&q.apply_int(*v)))
}

/// Whether `q` swaps `{vⱼ}` and `{v′ⱼ}`.
pub fn swaps_tetrahedra(q: &ExactRotation) -> bool {
    TETRA_VERTICES.iter().all(|v| DUAL_VERTICES.contains(&q.apply_int(*v)))
        && DUAL_VERTICES.iter().all(|v| TETRA_VERTICES.contains(&q.apply_int(*v)))
}
