//! Exact local-monodromy spectra in genus two, the primitive decomposition of
//! `S_k`, and Verlinde labelings of the two trivalent graphs with two vertices.
//!
//! A phase `μ ∈ ℚ/ℤ` stands for the eigenvalue `exp(−2πiμ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::connection::{ConnectionForm, LambdaPreset};
use crate::error::{Error, Result};
use crate::heisenberg::{pair_to_point, u_x, FourthRoot};
use crate::linalg::{ExactMatrix, RowReducer};
use crate::par;
use crate::polyop::{sym_power, MonomialBasis, Poly};
use crate::scalar::ExactScalar;

fn reduce(q: Rational64) -> Rational64 {
    let f = q - q.floor();
    if f < Rational64::zero() {
        f + Rational64::one()
    } else {
        f
    }
}

/// A multiset of phases in `[0, 1)`, sorted and merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PhaseMultiset {
    items: Vec<(Rational64, u64)>,
}

impl PhaseMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(phase, multiplicity)` pairs; phases are taken mod 1
    /// and zero multiplicities dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational64, u64)>) -> Self {
        let mut acc: BTreeMap<Rational64, u64> = BTreeMap::new();
        for (q, m) in pairs {
            if m > 0 {
                *acc.entry(reduce(q)).or_default() += m;
            }
        }
        Self {
            items: acc.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, phase: Rational64, mult: u64) {
        let mut pairs = std::mem::take(&mut self.items);
        pairs.push((phase, mult));
        *self = Self::from_pairs(pairs);
    }

    pub fn items(&self) -> &[(Rational64, u64)] {
        &self.items
    }

    pub fn multiplicity(&self, phase: Rational64) -> u64 {
        let p = reduce(phase);
        self.items.iter().find(|(q, _)| *q == p).map_or(0, |(_, m)| *m)
    }

    pub fn total(&self) -> u64 {
        self.items.iter().map(|(_, m)| m).sum()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn shifted(&self, s: Rational64) -> Self {
        Self::from_pairs(self.items.iter().map(|&(q, m)| (q + s, m)))
    }
}

impl fmt::Display for PhaseMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (q, m)) in self.items.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q} x{m}")?;
        }
        write!(f, "}}")
    }
}

/// The shift `s` with `a = b + s` as multisets mod 1, if one exists.
pub fn compare_projective(a: &PhaseMultiset, b: &PhaseMultiset) -> Option<Rational64> {
    if a.total() != b.total() || a.len() != b.len() {
        return None;
    }
    let &(b0, _) = b.items.first()?;
    a.items
        .iter()
        .map(|&(q, _)| reduce(q - b0))
        .find(|&s| b.shifted(s) == *a)
}

/// Closed form: phase `c(c+1)/(k+2)` with multiplicity `(k−2c+1)(2c+1)`, `c ∈ ½ℤ`.
pub fn nonseparating_closed_form(k: u32) -> PhaseMultiset {
    PhaseMultiset::from_pairs((0..=k as i64).map(|a| {
        let c = Rational64::new(a, 2);
        (c * (c + 1) / (k as i64 + 2), ((k as i64 - a + 1) * (a + 1)) as u64)
    }))
}

/// Constructive route on `S_k`: per monomial, half the residue eigenvalue of
/// `λ⁻¹M₁₂` plus the phase of the half-twist lift `U_x − iI`, `x = x₁₂`.
pub fn nonseparating_constructive(k: u32) -> Result<PhaseMultiset> {
    let form = ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin)?;
    let residue = form.m(1, 2).scale(&form.lambda().inv().expect("nonzero λ"));
    if !residue.is_diagonal() {
        return Err(Error::Invalid("M12 is not diagonal on monomials".into()));
    }
    let x = pair_to_point(2, 1, 2)?;
    let lift = &u_x(&x) - &ExactMatrix::scalar(4, &ExactScalar::i());
    let lifted = sym_power(&lift, k)?;
    let base = lifted.get(0, 0).inv().expect("invertible lift");
    let mut pairs = Vec::new();
    for (n, r) in residue.diagonal().iter().enumerate() {
        let root = FourthRoot::from_scalar(&(lifted.get(n, n) * &base))
            .ok_or_else(|| Error::Invalid("lift eigenvalue ratio is not a fourth root".into()))?;
        pairs.push((half_phase(r)? - Rational64::new(root.exponent() as i64, 4), 1));
    }
    Ok(PhaseMultiset::from_pairs(pairs))
}

fn to_rational64(s: &ExactScalar) -> Result<Rational64> {
    use num_traits::ToPrimitive;
    if !s.is_real() {
        return Err(Error::Invalid(format!("expected a real eigenvalue, got {s}")));
    }
    let q = s.re();
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::Invalid("eigenvalue does not fit in 64 bits".into())),
    }
}

fn half_phase(r: &ExactScalar) -> Result<Rational64> {
    Ok(to_rational64(r)? / 2)
}

/// The non-separating spectrum, built both ways and required to agree up to shift.
pub fn nonseparating_spectrum(k: u32) -> Result<PhaseMultiset> {
    let closed = nonseparating_closed_form(k);
    let built = nonseparating_constructive(k)?;
    compare_projective(&built, &closed)
        .map(|_| closed)
        .ok_or_else(|| Error::Invalid(format!("constructive spectrum {built} disagrees with {}", nonseparating_closed_form(k))))
}

/// `Q = X₀X₂ − X₁X₃`, the pairing `(X₀₀, X₀₁, X₁₀, X₁₁) ↔ (X₀, X₁, X₂, X₃)`.
pub fn quadric() -> Poly {
    Poly::var(4, 0)
        .mul(&Poly::var(4, 2))
        .sub(&Poly::var(4, 1).mul(&Poly::var(4, 3)))
}

/// `X_Q = ∂₀∂₂ − ∂₁∂₃`.
pub fn apply_x_q(p: &Poly) -> Poly {
    p.derivative(0).derivative(2).sub(&p.derivative(1).derivative(3))
}

/// Matrix of `X_Q: S_m → S_{m−2}`.
pub fn x_q_matrix(m: u32) -> ExactMatrix {
    let src = MonomialBasis::get(4, m);
    let dst_len = if m >= 2 { MonomialBasis::get(4, m - 2).len() } else { 0 };
    let cols: Vec<Vec<ExactScalar>> = src
        .monomials()
        .iter()
        .map(|mono| {
            if m < 2 {
                return Vec::new();
            }
            let img = apply_x_q(&Poly::monomial(4, mono.clone(), ExactScalar::one()));
            img.coords(&MonomialBasis::get(4, m - 2)).expect("degree m-2")
        })
        .collect();
    ExactMatrix::from_fn(dst_len, src.len(), |r, c| cols[c][r].clone())
}

/// Matrix of `QX_Q` on `S_k`.
pub fn qxq_matrix(k: u32) -> ExactMatrix {
    let basis = MonomialBasis::get(4, k);
    let q = quadric();
    let cols: Vec<Vec<ExactScalar>> = basis
        .monomials()
        .iter()
        .map(|mono| {
            let img = q.mul(&apply_x_q(&Poly::monomial(4, mono.clone(), ExactScalar::one())));
            if img.is_zero() {
                vec![ExactScalar::zero(); basis.len()]
            } else {
                img.coords(&basis).expect("degree k")
            }
        })
        .collect();
    ExactMatrix::from_fn(basis.len(), basis.len(), |r, c| cols[c][r].clone())
}

/// One summand `Q^l·V_{k−2l}` of `S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSummand {
    pub l: u32,
    pub basis: Vec<Poly>,
    /// Eigenvalue of `QX_Q` on the summand.
    pub qxq_eigenvalue: ExactScalar,
}

/// `S_k = ⊕_l Q^l·V_{k−2l}` with `V_m = ker X_Q`; completeness checked by rank.
pub fn primitive_decomposition(k: u32) -> Result<Vec<PrimitiveSummand>> {
    let q = quadric();
    let summands = par::map_range(k as usize / 2 + 1, |l| -> Result<PrimitiveSummand> {
        let l = l as u32;
        let m = k - 2 * l;
        let kernel = if m < 2 {
            (0..MonomialBasis::get(4, m).len())
                .map(|i| {
                    let mut v = vec![ExactScalar::zero(); MonomialBasis::get(4, m).len()];
                    v[i] = ExactScalar::one();
                    v
                })
                .collect()
        } else {
            crate::linalg::solve_homogeneous(&x_q_matrix(m))
        };
        let ql = q.pow(l);
        let basis: Vec<Poly> = kernel
            .iter()
            .map(|v| Poly::from_coords(&MonomialBasis::get(4, m), v).map(|p| ql.mul(&p)))
            .collect::<Result<_>>()?;
        let first = &basis[0];
        let image = q.mul(&apply_x_q(first));
        let (mono, c) = first.terms().next().expect("nonzero basis vector");
        let eig = &image.coefficient(mono) / c;
        for p in &basis {
            let img = q.mul(&apply_x_q(p));
            if img != p.scale(&eig) {
                return Err(Error::Invalid(format!("QX_Q is not scalar on summand l = {l}")));
            }
        }
        Ok(PrimitiveSummand {
            l,
            basis,
            qxq_eigenvalue: eig,
        })
    });
    let summands: Vec<PrimitiveSummand> = summands.into_iter().collect::<Result<_>>()?;
    let full = MonomialBasis::get(4, k);
    let mut rr = RowReducer::new(full.len());
    for s in &summands {
        for p in &s.basis {
            rr.push_dense(&p.coords(&full)?);
        }
    }
    if rr.rank() != full.len() {
        return Err(Error::Invalid(format!("summands span rank {} of {}", rr.rank(), full.len())));
    }
    Ok(summands)
}

/// Closed form: phase `l(l+1)/(k+2)` with multiplicity `(k−2l+1)²`, `l ∈ ℤ`.
pub fn separating_closed_form(k: u32) -> PhaseMultiset {
    let k = k as i64;
    PhaseMultiset::from_pairs((0..=k / 2).map(|l| (Rational64::new(l * (l + 1), k + 2), ((k - 2 * l + 1) * (k - 2 * l + 1)) as u64)))
}

/// The separating spectrum from the primitive decomposition: the residue of
/// `16QX_Q` divided by `λ = −16(k+2)` on each summand.
pub fn separating_spectrum(k: u32) -> Result<PhaseMultiset> {
    let parts = primitive_decomposition(k)?;
    let mut pairs = Vec::new();
    for s in parts {
        let e = to_rational64(&s.qxq_eigenvalue)?;
        pairs.push((-e / (k as i64 + 2), s.basis.len() as u64));
    }
    Ok(PhaseMultiset::from_pairs(pairs))
}

/// Outcome of `R₁₂₃ = 16QX_Q + λ_k I` on `S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R123Report {
    pub k: u32,
    pub lambda_k: ExactScalar,
    pub residual: num_rational::BigRational,
}

impl R123Report {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `R₁₂₃ = 2(M₁₂ + M₁₃ + M₂₃)` on `S_k`.
pub fn r123_matrix(form: &ConnectionForm) -> ExactMatrix {
    let sum = &(form.m(1, 2) + form.m(1, 3)) + form.m(2, 3);
    sum.scale(&ExactScalar::from_int(2))
}

pub fn verify_r123(k: u32) -> Result<R123Report> {
    let form = ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin)?;
    let r = r123_matrix(&form);
    let diff = &r - &qxq_matrix(k).scale(&ExactScalar::from_int(16));
    let lambda_k = diff.get(0, 0).clone();
    let residual = (&diff - &ExactMatrix::scalar(diff.rows(), &lambda_k)).max_norm();
    Ok(R123Report { k, lambda_k, residual })
}

/// The theta graph (three parallel edges) or the dumbbell (two loops and a bridge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrivalentGraph {
    Theta,
    Dumbbell,
}

impl TrivalentGraph {
    pub fn name(self) -> &'static str {
        match self {
            TrivalentGraph::Theta => "theta",
            TrivalentGraph::Dumbbell => "dumbbell",
        }
    }

    pub fn edge_count(self) -> usize {
        3
    }

    /// Edge labels around each vertex; a loop appears twice.
    pub fn vertex_triples(self) -> [[usize; 3]; 2] {
        match self {
            TrivalentGraph::Theta => [[0, 1, 2], [0, 1, 2]],
            TrivalentGraph::Dumbbell => [[0, 0, 2], [1, 1, 2]],
        }
    }
}

impl FromStr for TrivalentGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(TrivalentGraph::Theta),
            "dumbbell" => Ok(TrivalentGraph::Dumbbell),
            other => Err(Error::Invalid(format!("unknown graph `{other}`"))),
        }
    }
}

/// An admissible labeling, stored as doubled values `a = 2f(e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VerlindeLabeling {
    pub k: u32,
    pub doubled: [u32; 3],
}

impl VerlindeLabeling {
    pub fn value(&self, edge: usize) -> Rational64 {
        Rational64::new(self.doubled[edge] as i64, 2)
    }
}

/// Quantum Clebsch-Gordan condition on doubled labels.
pub fn admissible_triple(k: u32, a: u32, b: u32, c: u32) -> bool {
    a + b + c <= 2 * k && a.abs_diff(b) <= c && c <= a + b && (a + b + c).is_multiple_of(2)
}

pub fn verlinde_enumerate(graph: TrivalentGraph, k: u32) -> Vec<VerlindeLabeling> {
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k {
            for c in 0..=k {
                let d = [a, b, c];
                if graph
                    .vertex_triples()
                    .iter()
                    .all(|t| admissible_triple(k, d[t[0]], d[t[1]], d[t[2]]))
                {
                    out.push(VerlindeLabeling { k, doubled: d });
                }
            }
        }
    }
    out
}

/// Theta labelings with `f₁ + f₂ + f₃ = l`.
pub fn theta_level_set(k: u32, l: u32) -> Vec<VerlindeLabeling> {
    verlinde_enumerate(TrivalentGraph::Theta, k)
        .into_iter()
        .filter(|f| f.doubled.iter().sum::<u32>() == 2 * l)
        .collect()
}

/// `{f(e)(f(e)+1)/(k+2)}` over admissible labelings.
pub fn dehn_twist_phases(graph: TrivalentGraph, edge: usize, k: u32) -> Result<PhaseMultiset> {
    if edge >= graph.edge_count() {
        return Err(Error::IndexOutOfRange {
            index: edge,
            max: graph.edge_count() - 1,
        });
    }
    Ok(PhaseMultiset::from_pairs(verlinde_enumerate(graph, k).into_iter().map(|f| {
        let v = f.value(edge);
        (v * (v + 1) / (k as i64 + 2), 1)
    })))
}

/// `dim S_k = C(k+3, 3)` in genus two.
pub fn verlinde_dimension(k: u32) -> u64 {
    binomial(k as u64 + 3, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn multiset_basics() {
        let a = PhaseMultiset::from_pairs([(r(5, 4), 1), (r(1, 4), 2), (r(-1, 2), 1)]);
        assert_eq!(a.items(), &[(r(1, 4), 3), (r(1, 2), 1)]);
        assert_eq!(compare_projective(&a, &a), Some(r(0, 1)));
        let x = PhaseMultiset::from_pairs([(r(0, 1), 1), (r(1, 3), 1)]);
        let y = PhaseMultiset::from_pairs([(r(0, 1), 1), (r(1, 2), 1)]);
        assert_eq!(compare_projective(&x, &y), None);
    }

    #[test]
    fn nonseparating_examples() {
        let k1 = nonseparating_spectrum(1).unwrap();
        assert_eq!(k1.items(), &[(r(0, 1), 2), (r(1, 4), 2)]);
        let k2 = nonseparating_closed_form(2);
        assert_eq!(k2.multiplicity(r(0, 1)), 3);
        assert_eq!(k2.multiplicity(r(3, 16)), 4);
        assert_eq!(k2.multiplicity(r(1, 2)), 3);
        for k in 1..=6 {
            let built = nonseparating_constructive(k).unwrap();
            assert!(compare_projective(&built, &nonseparating_closed_form(k)).is_some(), "k={k}");
        }
    }

    #[test]
    fn opposite_lift_is_a_relabeling() {
        // i^b in place of (−i)^b amounts to b ↔ k−b, so the multiset only shifts
        for k in 1..=6i64 {
            let with = |sign: i64| {
                PhaseMultiset::from_pairs((0..=k).map(|b| {
                    let res = Rational64::new((k - 2 * b).pow(2) - k, 8 * (k + 2));
                    (res / 2 + Rational64::new(sign * b, 4), ((b + 1) * (k - b + 1)) as u64)
                }))
            };
            assert_eq!(with(1), nonseparating_constructive(k as u32).unwrap());
            assert_eq!(compare_projective(&with(-1), &with(1)), Some(reduce(Rational64::new(-k, 4))));
        }
    }

    #[test]
    fn separating_examples() {
        let k2 = separating_spectrum(2).unwrap();
        assert_eq!(k2.items(), &[(r(0, 1), 9), (r(1, 2), 1)]);
        assert_eq!(k2, separating_closed_form(2));
        assert_eq!(separating_spectrum(1).unwrap().items(), &[(r(0, 1), 4)]);
        for k in 1..=8 {
            assert_eq!(separating_closed_form(k).total(), verlinde_dimension(k));
        }
    }

    #[test]
    fn primitive_dims_and_eigenvalues() {
        for k in 0..=6u32 {
            let parts = primitive_decomposition(k).unwrap();
            for p in &parts {
                let m = (k - 2 * p.l + 1) as usize;
                assert_eq!(p.basis.len(), m * m);
                assert_eq!(p.qxq_eigenvalue, ExactScalar::from_int((p.l * (k - p.l + 1)) as i64));
            }
        }
        let d: Vec<usize> = primitive_decomposition(2).unwrap().iter().map(|p| p.basis.len()).collect();
        assert_eq!(d, vec![9, 1]);
    }

    #[test]
    fn r123_holds() {
        let r1 = verify_r123(1).unwrap();
        assert!(r1.passed());
        assert!(r1.lambda_k.is_zero());
        let form = ConnectionForm::with_preset(2, 1, LambdaPreset::Hitchin).unwrap();
        assert!(r123_matrix(&form).is_zero());
        for k in 2..=4 {
            let rep = verify_r123(k).unwrap();
            assert!(rep.passed(), "k={k}");
            let form = ConnectionForm::with_preset(2, k, LambdaPreset::Hitchin).unwrap();
            let lhs = r123_matrix(&form).trace();
            let q = qxq_matrix(k).trace();
            let dim = ExactScalar::from_int(verlinde_dimension(k) as i64);
            assert_eq!(lhs, &(&q * &ExactScalar::from_int(16)) + &(&rep.lambda_k * &dim));
        }
        assert_eq!(verify_r123(2).unwrap().lambda_k, ExactScalar::from_int(-8));
        assert_eq!(verify_r123(3).unwrap().lambda_k, ExactScalar::from_int(-24));
    }

    #[test]
    fn verlinde_counts() {
        assert_eq!(verlinde_enumerate(TrivalentGraph::Theta, 0).len(), 1);
        for k in 0..=12u32 {
            assert_eq!(verlinde_enumerate(TrivalentGraph::Theta, k).len() as u64, verlinde_dimension(k));
            assert_eq!(verlinde_enumerate(TrivalentGraph::Dumbbell, k).len() as u64, verlinde_dimension(k));
        }
        for l in 0..=6u32 {
            assert_eq!(theta_level_set(6, l).len() as u64, binomial(l as u64 + 2, 2));
        }
    }

    #[test]
    fn dehn_twists_match_closed_forms() {
        for k in 1..=8 {
            for e in 0..3 {
                let t = dehn_twist_phases(TrivalentGraph::Theta, e, k).unwrap();
                assert_eq!(compare_projective(&nonseparating_closed_form(k), &t), Some(r(0, 1)));
            }
            let bridge = dehn_twist_phases(TrivalentGraph::Dumbbell, 2, k).unwrap();
            assert_eq!(bridge, separating_closed_form(k));
            assert!(verlinde_enumerate(TrivalentGraph::Dumbbell, k).iter().all(|f| f.doubled[2] % 2 == 0));
        }
        assert!(dehn_twist_phases(TrivalentGraph::Theta, 3, 2).is_err());
    }

    #[test]
    fn graph_degrees() {
        for g in [TrivalentGraph::Theta, TrivalentGraph::Dumbbell] {
            let mut deg = [0usize; 3];
            for t in g.vertex_triples() {
                assert_eq!(t.len(), 3);
                for e in t {
                    deg[e] += 1;
                }
            }
            assert_eq!(deg.iter().sum::<usize>(), 6);
            assert_eq!(g.name().parse::<TrivalentGraph>().unwrap(), g);
        }
    }

    proptest! {
        #[test]
        fn shift_is_recovered(num in 0i64..24, k in 1u32..7) {
            let s = r(num, 24);
            let a = nonseparating_closed_form(k);
            let b = a.shifted(s);
            let found = compare_projective(&b, &a).unwrap();
            prop_assert_eq!(a.shifted(found), b);
        }

        #[test]
        fn admissible_is_symmetric(k in 0u32..8, a in 0u32..9, b in 0u32..9, c in 0u32..9) {
            let x = admissible_triple(k, a, b, c);
            prop_assert_eq!(x, admissible_triple(k, b, c, a));
            prop_assert_eq!(x, admissible_triple(k, c, a, b));
        }
    }
}
