//! Hulls, distances, symmetry, separation, intersection certificates and
//! connectedness.

mod certificate;
mod hata;
mod hull;
mod metric;

pub use certificate::{
    certificate_search, invariant_interval_certificate, quarter_turn, symmetry_letter_map, transfer_certificate,
    verify_certificate, CertificateReport, DifferenceAlphabet, DisjointEvidence, IntersectionCertificate, PairVerdict,
    SearchLimits, VerifyReport, WitnessKind,
};
pub use hata::{hata_graph, Connectedness, FastPath, HataGraph, PAIRS};
pub use hull::{a_points, analytic_hull, convex_hull3, interior_witness, v_points, v_prime_points, HullKind, Polytope};
pub use metric::{
    hausdorff_distance, separation_check, separation_margin, separation_threshold, similarity_dimension,
    symmetry_check, SeparationReport, SymmetryReport, SymmetryVerdict,
};
