use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::frt::{eval_address, Address, FrtParams};
use crate::geom::{Mat3, Scalar, Vec3};
use crate::rotgroup::ExactRotation;

/// `Δ = {vₐ − v_b}`: index 0 is the zero difference, then the ordered pairs
/// `(a, b)`, `a ≠ b`, lexicographically.
#[derive(Clone, Debug)]
pub struct DifferenceAlphabet<S> {
    pub letters: Vec<(u8, u8)>,
    pub values: Vec<Vec3<S>>,
}

impl<S: Scalar> DifferenceAlphabet<S> {
    pub fn new(vertices: &[Vec3<S>; 4]) -> Self {
        let mut letters = vec![(1, 1)];
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                if a != b {
                    letters.push((a, b));
                }
            }
        }
        let values = letters
            .iter()
            .map(|&(a, b)| vertices[(a - 1) as usize].clone() - vertices[(b - 1) as usize].clone())
            .collect();
        DifferenceAlphabet { letters, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_norm_squared(&self) -> S {
        self.values
            .iter()
            .map(Vec3::norm_squared)
            .max_by(|a, b| a.total_cmp(b))
            .unwrap_or_else(S::zero)
    }

    pub fn index_of(&self, d: &Vec3<S>, tol: f64) -> Option<usize> {
        self.values.iter().position(|v| (v.clone() - d.clone()).is_zero_tol(tol))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    /// Deepest level of the iterative-deepening search.
    pub max_depth: u32,
    /// Longest period accepted for a periodic certificate.
    pub max_period: u32,
    /// Node budget across all deepening rounds.
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_depth: 24, max_period: 24, max_nodes: 200_000 }
    }
}

/// Node budget for the periodic search once an invariant-interval witness
/// has already decided the pair.
pub const WITNESSED_SEARCH_NODES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// Eventually periodic addresses whose closed-form values coincide.
    Periodic,
    /// Addresses built by the greedy scalar expansion along `vᵢ − vⱼ`,
    /// valid for `c ≥ 1/2` and `P` a cube rotation; reported truncated.
    InvariantInterval,
    /// Image of another certificate under a symmetry commuting with `P`.
    Transferred,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionCertificate {
    pub pair: (u8, u8),
    pub first: Address,
    pub second: Address,
    /// Distance between the two evaluated addresses; 0 for exact periodic ones.
    pub residual: f64,
    pub witness: WitnessKind,
    pub point: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum DisjointEvidence {
    /// Every branch of the search tree was pruned by this depth.
    SearchExhausted { depth: u32 },
    /// The piece balls are separated.
    Separation { margin: f64 },
    /// Image of a disjointness proof for another pair.
    Transferred { from: (u8, u8), depth: Option<u32> },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum PairVerdict {
    CertifiedIntersect { certificate: IntersectionCertificate },
    CertifiedDisjoint { evidence: DisjointEvidence },
    Unknown { reason: String },
}

impl PairVerdict {
    pub fn is_intersect(&self) -> bool {
        matches!(self, PairVerdict::CertifiedIntersect { .. })
    }

    pub fn is_disjoint(&self) -> bool {
        matches!(self, PairVerdict::CertifiedDisjoint { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            PairVerdict::CertifiedIntersect { .. } => "CertifiedIntersect",
            PairVerdict::CertifiedDisjoint { .. } => "CertifiedDisjoint",
            PairVerdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn certificate(&self) -> Option<&IntersectionCertificate> {
        match self {
            PairVerdict::CertifiedIntersect { certificate } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub pair: (u8, u8),
    pub verdict: PairVerdict,
    pub nodes: usize,
}

enum Outcome {
    Cycle { word: Vec<usize>, start: usize },
    Truncated,
    Done,
}

struct BudgetExceeded;

type Key<S> = [<S as Scalar>::Key; 3];

struct Search<'a, S: Scalar> {
    step: Mat3<S>,
    alphabet: &'a DifferenceAlphabet<S>,
    radius_sq: S,
    tol: f64,
    max_period: usize,
    max_nodes: usize,
    nodes: usize,
    memo: HashMap<Key<S>, (u32, bool)>,
    on_stack: HashMap<Key<S>, usize>,
    word: Vec<usize>,
}

impl<S: Scalar> Search<'_, S> {
    fn outside(&self, r: &Vec3<S>) -> bool {
        // float mode widens the ball so pruning stays conservative
        let slack = if S::EXACT { 0.0 } else { self.tol };
        (r.norm_squared() - self.radius_sq.clone()).sign(slack) == Ordering::Greater
    }

    fn dfs(&mut self, r: &Vec3<S>, budget: u32) -> std::result::Result<Outcome, BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(BudgetExceeded);
        }
        if budget == 0 {
            return Ok(Outcome::Truncated);
        }
        let key = r.key();
        self.on_stack.insert(key.clone(), self.word.len());
        let mut truncated = false;
        let base = self.step.apply(r);
        for li in 0..self.alphabet.len() {
            let s = base.clone() + self.alphabet.values[li].clone();
            if self.outside(&s) {
                continue;
            }
            let sk = s.key();
            if let Some(&start) = self.on_stack.get(&sk) {
                let period = self.word.len() + 1 - start;
                if S::EXACT && period <= self.max_period {
                    let mut word = self.word.clone();
                    word.push(li);
                    return Ok(Outcome::Cycle { word, start });
                }
                truncated = true;
                continue;
            }
            if let Some(&(explored, trunc)) = self.memo.get(&sk) {
                if !trunc {
                    continue;
                }
                if budget - 1 <= explored {
                    truncated = true;
                    continue;
                }
            }
            self.word.push(li);
            let out = self.dfs(&s, budget - 1)?;
            self.word.pop();
            match out {
                Outcome::Cycle { .. } => return Ok(out),
                Outcome::Truncated => truncated = true,
                Outcome::Done => {}
            }
        }
        self.on_stack.remove(&key);
        self.memo.insert(key, (budget, truncated));
        Ok(if truncated { Outcome::Truncated } else { Outcome::Done })
    }
}

fn check_pair(pair: (u8, u8)) -> Result<()> {
    let (i, j) = pair;
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
        return invalid(format!("pair ({i},{j}) must be two distinct letters in 1..4"));
    }
    Ok(())
}

fn addresses_from_differences<S: Scalar>(
    alphabet: &DifferenceAlphabet<S>,
    pair: (u8, u8),
    word: &[usize],
    start: Option<usize>,
) -> (Address, Address) {
    let (a, b): (Vec<u8>, Vec<u8>) = word.iter().map(|&li| alphabet.letters[li]).unzip();
    let split = start.unwrap_or(word.len());
    let build = |first: u8, letters: &[u8]| {
        let mut prefix = vec![first];
        prefix.extend_from_slice(&letters[..split]);
        Address { prefix, period: letters[split..].to_vec() }.normalized()
    };
    (build(pair.0, &a), build(pair.1, &b))
}

fn finish<S: Scalar>(
    params: &FrtParams<S>,
    pair: (u8, u8),
    first: Address,
    second: Address,
    witness: WitnessKind,
) -> Result<IntersectionCertificate> {
    let (p, _) = eval_address(params, &first)?;
    let (q, _) = eval_address(params, &second)?;
    let residual = (p.clone() - q).norm_f64();
    Ok(IntersectionCertificate { pair, first, second, residual, witness, point: p.to_f64().0 })
}

/// The order of `P` as a group element, when finite and at most 12.
fn rotation_order<S: Scalar>(p: &Mat3<S>, tol: f64) -> Option<u32> {
    let id = Mat3::identity();
    let mut acc = p.clone();
    for k in 1..=12 {
        if (acc.clone() - id.clone()).0.iter().flatten().all(|x| x.is_zero_tol(tol)) {
            return Some(k);
        }
        acc = acc.mul_mat(p);
    }
    None
}

/// For `c ≥ 1/2` and `P` a cube rotation, `Δ` is `P`-invariant and the digits
/// `d_k = e_k·P⁻ᵏ(vᵢ − vⱼ)`, `e_k ∈ {−1, 0, 1}`, reduce the series to the
/// scalar equation `1 + Σ e_k cᵏ = 0`. The greedy choice keeps
/// `t_K = c⁻ᴷ(1 + Σ_{k≤K} e_k cᵏ)` inside `[−c/(1−c), c/(1−c)]` forever, so the
/// series converges to 0. The expansion is returned as a periodic
/// certificate when `(t_K, K mod ord P)` repeats, otherwise truncated at
/// `max_depth`.
pub fn invariant_interval_certificate<S: Scalar>(
    params: &FrtParams<S>,
    pair: (u8, u8),
    max_depth: u32,
) -> Result<Option<IntersectionCertificate>> {
    check_pair(pair)?;
    if !S::EXACT {
        return Ok(None);
    }
    let c = params.c().clone();
    if (c.clone() - S::from_ratio(1, 2)).sign(0.0) == Ordering::Less {
        return Ok(None);
    }
    let Some(q) = params.exact_rotation() else { return Ok(None) };
    if params.p() != &q.to_mat::<S>() {
        return Ok(None);
    }
    let Some(order) = rotation_order(params.p(), 0.0) else { return Ok(None) };
    let alphabet = DifferenceAlphabet::new(params.vertices());
    let u = params.vertex(pair.0).clone() - params.vertex(pair.1).clone();
    let p_inv = params.p().transpose();
    let half = S::from_ratio(1, 2);
    let mut t = S::one();
    let mut dir = u.clone();
    let mut seen: HashMap<(S::Key, u32), usize> = HashMap::new();
    let mut word = Vec::new();
    for k in 0..max_depth as usize {
        if let Some(&start) = seen.get(&(t.key(), k as u32 % order)) {
            let (a, b) = addresses_from_differences(&alphabet, pair, &word, Some(start));
            return finish(params, pair, a, b, WitnessKind::Periodic).map(Some);
        }
        seen.insert((t.key(), k as u32 % order), k);
        dir = p_inv.apply(&dir);
        let scaled = t.clone() / c.clone();
        let e = if (scaled.abs() - half.clone()).sign(0.0) != Ordering::Greater {
            0
        } else if scaled.sign(0.0) == Ordering::Greater {
            -1
        } else {
            1
        };
        t = scaled + S::from_int(e);
        let d = dir.scale(&S::from_int(e));
        let Some(li) = alphabet.index_of(&d, 0.0) else { return Ok(None) };
        word.push(li);
    }
    let (a, b) = addresses_from_differences(&alphabet, pair, &word, None);
    finish(params, pair, a, b, WitnessKind::InvariantInterval).map(Some)
}

/// Decides whether the pieces `A_i` and `A_j` meet.
///
/// Searches difference words `d₁d₂… ∈ Δ*` for
/// `vᵢ − vⱼ + Σ (cP)ᵏ d_k = 0` using the normalised state
/// `r_K = (cP)⁻ᴷ S_K`, which must stay within `max|Δ|·c/(1−c)` of the origin.
/// A revisited state closes a periodic certificate (exact modes only); a
/// depth at which every branch is pruned proves disjointness.
pub fn certificate_search<S: Scalar>(params: &FrtParams<S>, pair: (u8, u8), limits: &SearchLimits) -> Result<CertificateReport> {
    check_pair(pair)?;
    if limits.max_depth == 0 || limits.max_period == 0 || limits.max_nodes == 0 {
        return invalid("search limits must be positive");
    }
    let witness = invariant_interval_certificate(params, pair, limits.max_depth.max(limits.max_period))?;
    if let Some(cert) = &witness {
        if cert.witness == WitnessKind::Periodic {
            return Ok(CertificateReport {
                pair,
                verdict: PairVerdict::CertifiedIntersect { certificate: cert.clone() },
                nodes: 0,
            });
        }
    }

    let alphabet = DifferenceAlphabet::new(params.vertices());
    let c = params.c().clone();
    let one_minus = S::one() - c.clone();
    let radius_sq = alphabet.max_norm_squared() * c.clone() * c.clone() / (one_minus.clone() * one_minus);
    let tol = if S::EXACT { 0.0 } else { params.tol() };
    let step = params.p().transpose().scale(&(S::one() / c));
    let mut search = Search {
        step,
        alphabet: &alphabet,
        radius_sq,
        tol,
        max_period: limits.max_period as usize,
        max_nodes: if witness.is_some() { limits.max_nodes.min(WITNESSED_SEARCH_NODES) } else { limits.max_nodes },
        nodes: 0,
        memo: HashMap::new(),
        on_stack: HashMap::new(),
        word: Vec::new(),
    };
    let r0 = params.vertex(pair.0).clone() - params.vertex(pair.1).clone();
    let mut verdict = None;
    if search.outside(&r0) {
        verdict = Some(PairVerdict::CertifiedDisjoint { evidence: DisjointEvidence::SearchExhausted { depth: 0 } });
    }
    let mut depth = 1;
    while verdict.is_none() && depth <= limits.max_depth {
        search.memo.clear();
        search.on_stack.clear();
        search.word.clear();
        match search.dfs(&r0, depth) {
            Ok(Outcome::Cycle { word, start }) => {
                let (a, b) = addresses_from_differences(&alphabet, pair, &word, Some(start));
                let certificate = finish(params, pair, a, b, WitnessKind::Periodic)?;
                verdict = Some(PairVerdict::CertifiedIntersect { certificate });
            }
            Ok(Outcome::Done) => {
                verdict = Some(PairVerdict::CertifiedDisjoint { evidence: DisjointEvidence::SearchExhausted { depth } });
            }
            Ok(Outcome::Truncated) => depth += 1,
            Err(BudgetExceeded) => break,
        }
    }
    let verdict = match (verdict, witness) {
        (Some(v), _) => v,
        (None, Some(cert)) => PairVerdict::CertifiedIntersect { certificate: cert },
        (None, None) => PairVerdict::Unknown {
            reason: if search.nodes > search.max_nodes {
                format!("node budget {} exhausted", search.max_nodes)
            } else {
                format!("undecided at depth {}", limits.max_depth)
            },
        },
    };
    Ok(CertificateReport { pair, verdict, nodes: search.nodes.min(search.max_nodes) })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub pair: (u8, u8),
    /// Both addresses are periodic and evaluate to the same point exactly.
    pub exact_match: bool,
    pub distance: f64,
    /// Distance allowed by truncation and rounding.
    pub allowed: f64,
    pub valid: bool,
    pub first_point: [f64; 3],
    pub second_point: [f64; 3],
}

/// Re-evaluates an address pair; the pair of pieces is read from the leading letters.
pub fn verify_certificate<S: Scalar>(params: &FrtParams<S>, first: &Address, second: &Address) -> Result<VerifyReport> {
    let lead = |a: &Address| a.letter(0).ok_or_else(|| crate::FrtError::InvalidArgument("empty address".into()));
    let pair = (lead(first)?, lead(second)?);
    let (p, ep) = eval_address(params, first)?;
    let (q, eq) = eval_address(params, second)?;
    let exact_match = S::EXACT && first.is_periodic() && second.is_periodic() && p == q;
    let distance = (p.clone() - q.clone()).norm_f64();
    let allowed = if first.is_periodic() && second.is_periodic() {
        ep + eq + if S::EXACT { 0.0 } else { params.tol() }
    } else {
        ep + eq
    };
    Ok(VerifyReport {
        pair,
        exact_match,
        distance,
        allowed,
        valid: exact_match || distance <= allowed,
        first_point: p.to_f64().0,
        second_point: q.to_f64().0,
    })
}

/// The rotation by `−π/2` about the z-axis, `(x, y, z) ↦ (y, −x, z)`.
pub fn quarter_turn() -> ExactRotation {
    ExactRotation::named("z270").expect("z270 is a named rotation")
}

/// Letter map of a symmetry `Q` with `QP = PQ` and `Q·V = ±V`.
///
/// Returns `(σ, negated)` with `Q·v_a = ±v_{σ(a)}`.
pub fn symmetry_letter_map<S: Scalar>(params: &FrtParams<S>, q: &Mat3<S>) -> Option<([u8; 4], bool)> {
    let tol = if S::EXACT { 0.0 } else { params.tol() };
    let commutes = (q.mul_mat(params.p()) - params.p().mul_mat(q)).0.iter().flatten().all(|x| x.is_zero_tol(tol));
    if !commutes {
        return None;
    }
    let verts = params.vertices();
    for negated in [false, true] {
        let mut map = [0u8; 4];
        let ok = (0..4).all(|a| {
            let img = q.apply(&verts[a]);
            let img = if negated { -img } else { img };
            match verts.iter().position(|v| (v.clone() - img.clone()).is_zero_tol(tol)) {
                Some(b) => {
                    map[a] = b as u8 + 1;
                    true
                }
                None => false,
            }
        });
        if ok {
            return Some((map, negated));
        }
    }
    None
}

fn map_address(a: &Address, sigma: &[u8; 4]) -> Address {
    let f = |w: &[u8]| w.iter().map(|&l| sigma[(l - 1) as usize]).collect::<Vec<u8>>();
    Address { prefix: f(&a.prefix), period: f(&a.period) }
}

/// Applies a symmetry to a certificate: with `Q·f_a = ±f_{σ(a)}∘Q` the point
/// `p(ω)` maps to `±p(σω)`, so `(σω, ση)` certifies the pair `(σi, σj)`.
pub fn transfer_certificate<S: Scalar>(
    params: &FrtParams<S>,
    cert: &IntersectionCertificate,
    q: &Mat3<S>,
) -> Result<IntersectionCertificate> {
    let Some((sigma, _)) = symmetry_letter_map(params, q) else {
        return invalid("Q must commute with P and map the vertex set to ±itself");
    };
    let a = map_address(&cert.first, &sigma);
    let b = map_address(&cert.second, &sigma);
    let pair = (sigma[(cert.pair.0 - 1) as usize], sigma[(cert.pair.1 - 1) as usize]);
    let (pair, a, b) = if pair.0 < pair.1 { (pair, a, b) } else { ((pair.1, pair.0), b, a) };
    let mut out = finish(params, pair, a, b, WitnessKind::Transferred)?;
    if cert.witness == WitnessKind::InvariantInterval {
        out.witness = WitnessKind::InvariantInterval;
    }
    Ok(out)
}
