use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{
    certificate_search, quarter_turn, symmetry_letter_map, transfer_certificate, CertificateReport, DisjointEvidence,
    PairVerdict, SearchLimits,
};
use super::metric::separation_check;
use crate::error::Result;
use crate::frt::FrtParams;
use crate::geom::Scalar;

pub const PAIRS: [(u8, u8); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Connectedness {
    Connected,
    Disconnected,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FastPath {
    /// The piece balls are separated, so every pair is disjoint.
    Separation,
    /// `P` fixes the z-axis: pair (1,3) decides (1,4), (2,4), (2,3).
    AxisQuarterTurn,
    /// `c ≥ 1/2` with `P` a cube rotation is always connected.
    CubeRotationLargeRatio,
}

/// The intersection graph of the four pieces with a connectedness verdict.
#[derive(Clone, Debug, Serialize)]
pub struct HataGraph {
    pub pairs: Vec<CertificateReport>,
    pub verdict: Connectedness,
    pub fast_paths: Vec<FastPath>,
}

impl HataGraph {
    pub fn pair(&self, i: u8, j: u8) -> &CertificateReport {
        let key = if i < j { (i, j) } else { (j, i) };
        self.pairs.iter().find(|r| r.pair == key).expect("all six pairs are present")
    }
}

fn connects_all(edges: impl Iterator<Item = (u8, u8)>) -> bool {
    let mut parent = [0usize, 1, 2, 3];
    fn root(p: &mut [usize; 4], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (a, b) in edges {
        let (ra, rb) = (root(&mut parent, a as usize - 1), root(&mut parent, b as usize - 1));
        parent[ra] = rb;
    }
    let r0 = root(&mut parent, 0);
    (1..4).all(|k| root(&mut parent, k) == r0)
}

fn graph_verdict(pairs: &[CertificateReport]) -> Connectedness {
    if connects_all(pairs.iter().filter(|r| r.verdict.is_intersect()).map(|r| r.pair)) {
        Connectedness::Connected
    } else if !connects_all(pairs.iter().filter(|r| !r.verdict.is_disjoint()).map(|r| r.pair)) {
        Connectedness::Disconnected
    } else {
        Connectedness::Unknown
    }
}

/// Decides all six piece pairs and derives connectedness of `A(c, P)`.
pub fn hata_graph<S: Scalar>(params: &FrtParams<S>, limits: &SearchLimits) -> Result<HataGraph> {
    let separation = separation_check(params.c())?;
    if separation.disjoint {
        let pairs = PAIRS
            .iter()
            .map(|&pair| CertificateReport {
                pair,
                verdict: PairVerdict::CertifiedDisjoint {
                    evidence: DisjointEvidence::Separation { margin: separation.margin },
                },
                nodes: 0,
            })
            .collect();
        return Ok(HataGraph { pairs, verdict: Connectedness::Disconnected, fast_paths: vec![FastPath::Separation] });
    }

    let mut fast_paths = Vec::new();
    let q = quarter_turn().to_mat::<S>();
    let axis_path = params.is_about_z_axis() && symmetry_letter_map(params, &q).is_some();
    let searched: Vec<(u8, u8)> = if axis_path {
        fast_paths.push(FastPath::AxisQuarterTurn);
        vec![(1, 2), (1, 3), (3, 4)]
    } else {
        PAIRS.to_vec()
    };
    let mut pairs: Vec<CertificateReport> =
        searched.par_iter().map(|&pair| certificate_search(params, pair, limits)).collect::<Result<_>>()?;

    if axis_path {
        let base = pairs.iter().find(|r| r.pair == (1, 3)).expect("pair (1,3) was searched").clone();
        let mut current = base.verdict.clone();
        for _ in 0..3 {
            current = match &current {
                PairVerdict::CertifiedIntersect { certificate } => PairVerdict::CertifiedIntersect {
                    certificate: transfer_certificate(params, certificate, &q)?,
                },
                other => other.clone(),
            };
            let pair = match &current {
                PairVerdict::CertifiedIntersect { certificate } => certificate.pair,
                _ => match pairs.len() {
                    3 => (1, 4),
                    4 => (2, 4),
                    _ => (2, 3),
                },
            };
            let verdict = match current.clone() {
                PairVerdict::CertifiedDisjoint { evidence } => PairVerdict::CertifiedDisjoint {
                    evidence: DisjointEvidence::Transferred {
                        from: (1, 3),
                        depth: match evidence {
                            DisjointEvidence::SearchExhausted { depth } => Some(depth),
                            _ => None,
                        },
                    },
                },
                v => v,
            };
            pairs.push(CertificateReport { pair, verdict, nodes: 0 });
        }
    }
    pairs.sort_by(|a, b| a.pair.cmp(&b.pair));

    let mut verdict = graph_verdict(&pairs);
    let half = S::from_ratio(1, 2);
    let large = (params.c().clone() - half).sign(0.0) != Ordering::Less;
    if large && params.exact_rotation().is_some() && (S::EXACT || params.classify().in_hexahedral()) {
        fast_paths.push(FastPath::CubeRotationLargeRatio);
        verdict = Connectedness::Connected;
    }
    Ok(HataGraph { pairs, verdict, fast_paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Mat3, Rational};
    use crate::rotgroup::ExactRotation;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn example_is_disconnected() {
        let p = FrtParams::new(
            rat(1, 2),
            Mat3([
                [rat(2, 3), rat(-2, 3), rat(-1, 3)],
                [rat(1, 3), rat(2, 3), rat(-2, 3)],
                [rat(2, 3), rat(1, 3), rat(2, 3)],
            ]),
        )
        .unwrap();
        let g = hata_graph(&p, &SearchLimits::default()).unwrap();
        assert_eq!(g.verdict, Connectedness::Disconnected);
        for (i, j) in [(2, 3), (2, 4), (3, 4)] {
            assert!(g.pair(i, j).verdict.is_intersect());
        }
        for (i, j) in [(1, 2), (1, 3), (1, 4)] {
            assert!(g.pair(i, j).verdict.is_disjoint());
        }
    }

    #[test]
    fn sierpinski_is_connected_by_six_edges() {
        let p = FrtParams::from_rotation(rat(1, 2), &ExactRotation::IDENTITY).unwrap();
        let g = hata_graph(&p, &SearchLimits::default()).unwrap();
        assert_eq!(g.verdict, Connectedness::Connected);
        assert!(g.pairs.iter().all(|r| r.verdict.is_intersect()));
        assert!(g.fast_paths.contains(&FastPath::AxisQuarterTurn));
    }

    #[test]
    fn small_ratio_is_totally_disconnected() {
        let p = FrtParams::from_rotation(rat(3, 10), &ExactRotation::IDENTITY).unwrap();
        let g = hata_graph(&p, &SearchLimits::default()).unwrap();
        assert_eq!(g.verdict, Connectedness::Disconnected);
        assert_eq!(g.fast_paths, vec![FastPath::Separation]);
        assert!(g.pairs.iter().all(|r| r.verdict.is_disjoint()));
    }

    #[test]
    fn union_find_verdicts() {
        assert!(connects_all([(1, 2), (2, 3), (3, 4)].into_iter()));
        assert!(!connects_all([(1, 2), (3, 4)].into_iter()));
    }
}
