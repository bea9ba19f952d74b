//! The operators `M_ij = σ(L_{ρ(F_ij)}²)` on `S_k`, the connection one-form
//! `ω_λ = λ⁻¹ Σ_{i≠j} M_ij dz_i/(z_i − z_j)` and its exact structural checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::heisenberg::{self, u_x, PhasePoint};
use crate::linalg::{self, ExactMatrix};
use crate::par;
use crate::polyop::{lift_linear, symbol_of_square, sym_power};
use crate::scalar::ExactScalar;
use crate::spin::{Half, SpinRep};

/// `M_ij` realized on `S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSymbol {
    pub g: usize,
    pub k: u32,
    pub pair: (usize, usize),
    pub matrix: ExactMatrix,
}

/// `σ(L_A²)` on `S_k` for `A = ρ_s(F_ij)`.
pub fn omega_symbol(rep: &SpinRep, k: u32, i: usize, j: usize) -> Result<OmegaSymbol> {
    let a = rep.get(i, j)?;
    let matrix = symbol_of_square(&a)?.to_matrix(k);
    Ok(OmegaSymbol {
        g: rep.g(),
        k,
        pair: (i.min(j), i.max(j)),
        matrix,
    })
}

/// Named choices of the normalization `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LambdaPreset {
    /// `λ = −16`, the value under which the Kummer quartic is horizontal.
    KummerFlat,
    /// `λ = −16(k+2)`.
    Hitchin,
}

impl LambdaPreset {
    pub fn value(self, k: u32) -> ExactScalar {
        match self {
            LambdaPreset::KummerFlat => ExactScalar::from_int(-16),
            LambdaPreset::Hitchin => ExactScalar::from_int(-16 * (k as i64 + 2)),
        }
    }
}

/// All `M_ij` on `S_k` together with `λ`.
#[derive(Clone, Debug)]
pub struct ConnectionForm {
    g: usize,
    k: u32,
    lambda: ExactScalar,
    ops: BTreeMap<(usize, usize), ExactMatrix>,
}

impl ConnectionForm {
    pub fn new(rep: &SpinRep, k: u32, lambda: ExactScalar) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::Invalid("λ must be nonzero".into()));
        }
        let pairs: Vec<(usize, usize)> = rep.pairs().collect();
        let built = par::map(&pairs, |&(i, j)| omega_symbol(rep, k, i, j));
        let mut ops = BTreeMap::new();
        for (p, m) in pairs.into_iter().zip(built) {
            ops.insert(p, m?.matrix);
        }
        Ok(Self {
            g: rep.g(),
            k,
            lambda,
            ops,
        })
    }

    pub fn with_preset(g: usize, k: u32, preset: LambdaPreset) -> Result<Self> {
        let rep = SpinRep::new(g, Half::Plus)?;
        Self::new(&rep, k, preset.value(k))
    }

    /// A form with explicitly supplied operators (used for negative controls).
    pub fn from_ops(g: usize, k: u32, lambda: ExactScalar, ops: BTreeMap<(usize, usize), ExactMatrix>) -> Self {
        Self { g, k, lambda, ops }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        2 * self.g + 2
    }

    pub fn lambda(&self) -> &ExactScalar {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.ops.values().next().map_or(0, ExactMatrix::rows)
    }

    pub fn ops(&self) -> &BTreeMap<(usize, usize), ExactMatrix> {
        &self.ops
    }

    /// `M_ij`, symmetric in the pair.
    pub fn m(&self, i: usize, j: usize) -> &ExactMatrix {
        &self.ops[&(i.min(j), i.max(j))]
    }

    /// Copy with `delta` added to entry `(row, col)` of `M_ij`.
    pub fn perturbed(&self, i: usize, j: usize, row: usize, col: usize, delta: &ExactScalar) -> Self {
        let mut out = self.clone();
        let m = out.ops.get_mut(&(i.min(j), i.max(j))).expect("pair present");
        *m.entry_mut(row, col) += delta;
        out
    }
}

/// A failing infinitesimal braid relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BraidFailure {
    /// `[M_ij, M_kl] ≠ 0` for disjoint pairs.
    Disjoint(usize, usize, usize, usize),
    /// `[M_ik, M_ij + M_jk] ≠ 0`.
    Triple(usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidReport {
    pub checked: usize,
    pub failures: Vec<BraidFailure>,
}

impl BraidReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact check of all infinitesimal pure braid relations.
pub fn verify_braid_relations(form: &ConnectionForm) -> BraidReport {
    let n = form.n();
    let pairs: Vec<(usize, usize)> = form.ops.keys().copied().collect();
    let mut tasks = Vec::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            if i != k && i != l && j != k && j != l {
                tasks.push(BraidFailure::Disjoint(i, j, k, l));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && j != k && i != k {
                    tasks.push(BraidFailure::Triple(i, j, k));
                }
            }
        }
    }
    let results = par::map(&tasks, |t| {
        let c = match *t {
            BraidFailure::Disjoint(i, j, k, l) => form.m(i, j).commutator(form.m(k, l)),
            BraidFailure::Triple(i, j, k) => form.m(i, k).commutator(&(form.m(i, j) + form.m(j, k))),
        }
        .expect("square operators");
        (!c.is_zero()).then(|| t.clone())
    });
    BraidReport {
        checked: tasks.len(),
        failures: results.into_iter().flatten().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub checked: usize,
    /// `(y index, i, j)` with `S^k(U_y) M_ij S^k(U_y)⁻¹ ≠ M_ij`.
    pub failures: Vec<(u32, usize, usize)>,
    /// `(y index, i, j, ±1)` with `S^k(U_y) L_ij S^k(U_y)⁻¹ = ±L_ij`; `0` if neither.
    pub linear_signs: Vec<(u32, usize, usize, i8)>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.linear_signs.iter().all(|s| s.3 != 0)
    }
}

/// Conjugation of every `M_ij` by `S^k(U_y)` for every `y ∈ F₂^{2g}`.
pub fn verify_heisenberg_invariance(rep: &SpinRep, form: &ConnectionForm) -> Result<InvarianceReport> {
    let g = form.g;
    let k = form.k;
    let points: Vec<PhasePoint> = PhasePoint::all(g).collect();
    let lifts: BTreeMap<(usize, usize), ExactMatrix> = form
        .ops
        .keys()
        .map(|&(i, j)| Ok(((i, j), lift_linear(rep.pair(i, j), k)?)))
        .collect::<Result<_>>()?;
    let per_point = par::map(&points, |y| -> Result<_> {
        let s = sym_power(&u_x(y), k)?;
        // U_y² = I, so S^k(U_y) is its own inverse
        let mut fails = Vec::new();
        let mut signs = Vec::new();
        for (&(i, j), m) in &form.ops {
            if &(&(&s * m) * &s) != m {
                fails.push((y.index(), i, j));
            }
            let l = &lifts[&(i, j)];
            let conj = &(&s * l) * &s;
            let sign = match linalg::proportional(&conj, l) {
                Some(c) if c.is_one() => 1,
                Some(c) if c == -ExactScalar::one() => -1,
                _ => 0,
            };
            signs.push((y.index(), i, j, sign));
        }
        Ok((fails, signs))
    });
    let mut report = InvarianceReport {
        checked: points.len() * form.ops.len(),
        failures: Vec::new(),
        linear_signs: Vec::new(),
    };
    for r in per_point {
        let (f, s) = r?;
        report.failures.extend(f);
        report.linear_signs.extend(s);
    }
    Ok(report)
}

fn check_distinct(z: &[ExactScalar]) -> Result<()> {
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            if z[a] == z[b] {
                return Err(Error::CoincidentPoints(a + 1, b + 1));
            }
        }
    }
    Ok(())
}

/// `A_i(z) = λ⁻¹ Σ_{j≠i} M_ij/(z_i − z_j)`; `i` is 1-based.
pub fn evaluate_form(form: &ConnectionForm, z: &[ExactScalar], i: usize) -> Result<ExactMatrix> {
    let n = form.n();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            op: "evaluate_form",
            left: (n, 1),
            right: (z.len(), 1),
        });
    }
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    check_distinct(z)?;
    let d = form.dim();
    let linv = form.lambda.inv().expect("nonzero λ");
    let mut acc = ExactMatrix::zeros(d, d);
    for j in (1..=n).filter(|&j| j != i) {
        let w = &linv / &(&z[i - 1] - &z[j - 1]);
        acc = &acc + &form.m(i, j).scale(&w);
    }
    Ok(acc)
}

/// Polynomial in `t` with matrix coefficients, lowest degree first.
type MatrixPoly = Vec<ExactMatrix>;

fn mpoly_eval(p: &MatrixPoly, t: &ExactScalar) -> ExactMatrix {
    let d = p[0].rows();
    p.iter().rev().fold(ExactMatrix::zeros(d, d), |acc, c| &acc.scale(t) + c)
}

/// Scalar polynomial product of linear factors `Π (t + c_m)`, lowest degree first.
fn linear_product(roots: &[ExactScalar]) -> Vec<ExactScalar> {
    roots.iter().fold(vec![ExactScalar::one()], |acc, c| {
        let mut out = vec![ExactScalar::zero(); acc.len() + 1];
        for (e, a) in acc.iter().enumerate() {
            out[e] += a * c;
            out[e + 1] += a.clone();
        }
        out
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    /// Degree in `t` of the cleared numerator.
    pub degree: usize,
    /// Number of exact sample values of `t` where the cleared form was compared.
    pub samples: usize,
    pub samples_agree: bool,
    /// Whether the numerator at `t = 0` equals `λ⁻¹ M_12 D(0)`.
    pub residue_agrees: bool,
}

impl ResidueReport {
    pub fn passed(&self) -> bool {
        self.samples_agree && self.residue_agrees
    }
}

/// Along `z(t) = (z_2 + t, z_2, …, z_n)`, clears the poles of `(z_1 − z_2) A_1(z(t))`
/// by `D(t) = Π_{j≥3} (z_2 + t − z_j)` and checks the resulting matrix
/// polynomial against `evaluate_form` and its value at `t = 0` against the
/// residue `λ⁻¹ M_12`.
pub fn verify_residue_family(form: &ConnectionForm, rest: &[ExactScalar]) -> Result<ResidueReport> {
    let n = form.n();
    if rest.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            op: "verify_residue_family",
            left: (n - 1, 1),
            right: (rest.len(), 1),
        });
    }
    check_distinct(rest)?;
    let z2 = &rest[0];
    let d = form.dim();
    let linv = form.lambda.inv().expect("nonzero λ");
    let shifts: Vec<ExactScalar> = rest[1..].iter().map(|zj| z2 - zj).collect();
    let dpoly = linear_product(&shifts);
    // N(t) = λ⁻¹ [ M_12 D(t) + t Σ_j M_1j D(t)/(z_2 + t − z_j) ]
    let mut num: MatrixPoly = vec![ExactMatrix::zeros(d, d); dpoly.len()];
    for (e, c) in dpoly.iter().enumerate() {
        num[e] = &num[e] + &form.m(1, 2).scale(c);
    }
    for (idx, j) in (3..=n).enumerate() {
        let others: Vec<ExactScalar> = shifts
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != idx)
            .map(|(_, c)| c.clone())
            .collect();
        for (e, c) in linear_product(&others).iter().enumerate() {
            num[e + 1] = &num[e + 1] + &form.m(1, j).scale(c);
        }
    }
    let num: MatrixPoly = num.iter().map(|m| m.scale(&linv)).collect();
    let degree = num.iter().rposition(|m| !m.is_zero()).unwrap_or(0);

    let samples: Vec<ExactScalar> = [(1, 3), (-2, 7), (5, 11), (7, 2), (-9, 5)]
        .iter()
        .map(|&(a, b)| ExactScalar::from_ratio(a, b))
        .collect();
    let mut checked = 0;
    let mut agree = true;
    for t in &samples {
        let mut z = vec![z2 + t];
        z.extend(rest.iter().cloned());
        if check_distinct(&z).is_err() {
            continue;
        }
        let dt: ExactScalar = shifts.iter().map(|c| c + t).product();
        let lhs = evaluate_form(form, &z, 1)?.scale(&(t * &dt));
        agree &= lhs == mpoly_eval(&num, t);
        checked += 1;
    }
    let residue = form.m(1, 2).scale(&(&linv * &dpoly[0]));
    Ok(ResidueReport {
        degree,
        samples: checked,
        samples_agree: agree && checked > 0,
        residue_agrees: num[0] == residue,
    })
}

/// One common eigenline of the Heisenberg action on `S_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenline {
    /// Eigenvalues `±1` of `S²(U_y)` for `y = e_1, …, e_{2g}` (index bits from high to low).
    pub character: Vec<i8>,
    pub vector: Vec<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K2Report {
    pub lines: Vec<Eigenline>,
    /// `table[p][l]`: scalar of the `p`-th `M_ij` (lexicographic pairs) on line `l`.
    pub table: Vec<Vec<BigInt>>,
    pub pairs: Vec<(usize, usize)>,
    /// Every `M_ij` preserved every line with an integer scalar.
    pub integral: bool,
}

/// Joint eigenspaces of `S²(U_y)` on `S_2` and the scalars of every `M_ij` on them.
pub fn k2_eigenspace_decomposition(rep: &SpinRep) -> Result<K2Report> {
    let g = rep.g();
    let form = ConnectionForm::new(rep, 2, ExactScalar::one())?;
    let d = form.dim();
    let gens: Vec<ExactMatrix> = (0..2 * g)
        .map(|b| sym_power(&u_x(&PhasePoint::from_index(g, 1 << (2 * g - 1 - b))), 2))
        .collect::<Result<_>>()?;
    let mut lines = Vec::new();
    for chi in 0u32..1 << (2 * g) {
        let character: Vec<i8> = (0..2 * g).map(|b| if chi >> (2 * g - 1 - b) & 1 == 1 { -1 } else { 1 }).collect();
        let mut rr = linalg::RowReducer::new(d);
        for (gm, &c) in gens.iter().zip(&character) {
            let shifted = gm - &ExactMatrix::scalar(d, &ExactScalar::from_int(c as i64));
            for r in 0..d {
                rr.push_dense(shifted.row(r));
            }
        }
        for v in rr.kernel_basis() {
            lines.push(Eigenline {
                character: character.clone(),
                vector: v,
            });
        }
    }
    let pairs: Vec<(usize, usize)> = form.ops.keys().copied().collect();
    let mut integral = true;
    let mut table = Vec::new();
    for &(i, j) in &pairs {
        let m = form.m(i, j);
        let mut row = Vec::new();
        for line in &lines {
            let image = m.mul_vec(&line.vector)?;
            let lead = line.vector.iter().position(|x| !x.is_zero()).expect("nonzero line");
            let c = &image[lead] / &line.vector[lead];
            let exact = image.iter().zip(&line.vector).all(|(a, b)| *a == &c * b);
            match c.to_integer() {
                Some(v) if exact => row.push(v),
                _ => {
                    integral = false;
                    row.push(BigInt::zero());
                }
            }
        }
        table.push(row);
    }
    Ok(K2Report {
        lines,
        table,
        pairs,
        integral,
    })
}

/// Sign `(−1)^{E(y, x_ij)}` predicted for the conjugated linear lift.
pub fn predicted_linear_sign(g: usize, y: &PhasePoint, i: usize, j: usize) -> Result<i8> {
    let x = heisenberg::pair_to_point(g, i, j)?;
    Ok(if heisenberg::symplectic(y, &x)? == 1 { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyop::{Monomial, MonomialBasis};

    fn rep2() -> SpinRep {
        SpinRep::new(2, Half::Plus).unwrap()
    }

    #[test]
    fn k1_is_zero() {
        let form = ConnectionForm::with_preset(2, 1, LambdaPreset::Hitchin).unwrap();
        assert!(form.ops().values().all(ExactMatrix::is_zero));
        let z: Vec<ExactScalar> = (0..6).map(ExactScalar::from_int).collect();
        for i in 1..=6 {
            assert!(evaluate_form(&form, &z, i).unwrap().is_zero());
        }
    }

    #[test]
    fn m12_diagonal_oracle() {
        let rep = rep2();
        for k in 1..=4u32 {
            let m = omega_symbol(&rep, k, 1, 2).unwrap().matrix;
            let basis = MonomialBasis::get(4, k);
            for (r, mono) in basis.monomials().iter().enumerate() {
                let b = (mono.0[2] + mono.0[3]) as i64;
                let k = k as i64;
                let expect = ExactScalar::from_int(2 * (k - (k - 2 * b).pow(2)));
                for c in 0..basis.len() {
                    let want = if r == c { expect.clone() } else { ExactScalar::zero() };
                    assert_eq!(m.get(r, c), &want);
                }
            }
        }
    }

    #[test]
    fn m12_matches_displayed_operator() {
        // −2(Σ X_σ²∂_σ² + 2X00X01∂00∂01 − 2X10X11∂10∂11) with the factor-2 symbol convention
        let rep = rep2();
        let basis = MonomialBasis::get(4, 2);
        let m = omega_symbol(&rep, 2, 1, 2).unwrap().matrix;
        let mono = |e: [u32; 4]| basis.index_of(&Monomial(e.to_vec())).unwrap();
        assert_eq!(m.get(mono([2, 0, 0, 0]), mono([2, 0, 0, 0])), &ExactScalar::from_int(-4));
        assert_eq!(m.get(mono([1, 0, 1, 0]), mono([1, 0, 1, 0])), &ExactScalar::from_int(4));
    }

    #[test]
    fn symmetric_and_square_identity() {
        let rep = rep2();
        for k in 1..=3u32 {
            for (i, j) in rep.pairs().collect::<Vec<_>>() {
                let a = omega_symbol(&rep, k, i, j).unwrap();
                let b = omega_symbol(&rep, k, j, i).unwrap();
                assert_eq!(a, b);
                let l = lift_linear(rep.pair(i, j), k).unwrap();
                let d = l.rows();
                let expect = (&(&l * &l) + &ExactMatrix::scalar(d, &ExactScalar::from_int(k as i64))).scale(&ExactScalar::from_int(2));
                assert_eq!(a.matrix, expect);
            }
        }
    }

    #[test]
    fn braid_relations_and_negative_control() {
        let form = ConnectionForm::with_preset(2, 2, LambdaPreset::Hitchin).unwrap();
        let rep = verify_braid_relations(&form);
        assert!(rep.passed(), "{:?}", rep.failures);
        let bad = form.perturbed(1, 2, 0, 1, &ExactScalar::one());
        assert!(!verify_braid_relations(&bad).passed());
    }

    #[test]
    fn invariance_k2() {
        let rep = rep2();
        let form = ConnectionForm::new(&rep, 2, ExactScalar::one()).unwrap();
        let r = verify_heisenberg_invariance(&rep, &form).unwrap();
        assert!(r.passed());
        for &(y, i, j, s) in &r.linear_signs {
            assert_eq!(s, predicted_linear_sign(2, &PhasePoint::from_index(2, y), i, j).unwrap());
        }
    }

    #[test]
    fn coincident_points_rejected() {
        let form = ConnectionForm::with_preset(2, 2, LambdaPreset::Hitchin).unwrap();
        let z: Vec<ExactScalar> = [0, 1, 2, 3, 4, 1].iter().map(|&x| ExactScalar::from_int(x)).collect();
        assert_eq!(evaluate_form(&form, &z, 1), Err(Error::CoincidentPoints(2, 6)));
    }

    #[test]
    fn residue_family() {
        let form = ConnectionForm::with_preset(2, 2, LambdaPreset::Hitchin).unwrap();
        let rest: Vec<ExactScalar> = [1, -2, 3, 5, -7].iter().map(|&x| ExactScalar::from_int(x)).collect();
        let r = verify_residue_family(&form, &rest).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.samples, 5);
    }

    #[test]
    fn k2_decomposition() {
        let r = k2_eigenspace_decomposition(&rep2()).unwrap();
        assert_eq!(r.lines.len(), 10);
        assert!(r.integral);
        assert_eq!(r.table.len(), 15);
        let two = BigInt::from(2);
        assert!(r.table.iter().flatten().all(|v| (v % &two).is_zero()));
        let form = ConnectionForm::with_preset(2, 2, LambdaPreset::KummerFlat).unwrap();
        let tr = form.m(1, 2).trace().to_integer().unwrap();
        assert_eq!(tr, r.table[0].iter().sum::<BigInt>());
    }
}
