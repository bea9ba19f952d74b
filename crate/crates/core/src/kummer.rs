//! The wedge representation `Λ^{g+1}ℂ^{2g+2}`, its two invariant halves, the
//! equivariant map `Φ` onto `S²V` (genus two), the Kummer quartic
//! `P_z = Σ_S z_S Φ(e_S)²` and the exact flat-section equations.
//!
//! The flat-section residual for direction `i` is
//!
//! ```text
//! T_i = s/16 · Σ_{j≠i} σ(M_ij)·P_z / (z_i − z_j) + ½ · (∂_{z_i}P_z) ⊗ E
//! ```
//!
//! with `E = Σ_σ X_σ ⊗ ∂_σ` the Euler field of `V` and `s = ±1`. The factor
//! `½` transports the Euler field of the wedge space: `Φ` is quadratic, so
//! the wedge Euler field pulls back to half the Euler field of `V`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, RowReducer};
use crate::par;
use crate::polyop::{
    contract_symbol, euler_product, lift_linear, symbol_of_square, MixedTensor, MonomialBasis, Poly,
    SecondOrderSymbol,
};
use crate::scalar::ExactScalar;
use crate::spin::SpinRep;

/// Sign of a permutation given as a sequence of distinct values.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|a| (a + 1..p.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| p[a] > p[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The basis `{e_S : |S| = g+1}` of `Λ^{g+1}ℂ^{2g+2}`, subsets in lexicographic order.
#[derive(Clone, Debug)]
pub struct WedgeSpace {
    g: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl WedgeSpace {
    pub fn new(g: usize) -> Self {
        let n = 2 * g + 2;
        let mut subsets = Vec::new();
        fn rec(start: usize, n: usize, need: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if need == 0 {
                out.push(cur.clone());
                return;
            }
            for x in start..=n {
                cur.push(x);
                rec(x + 1, n, need - 1, cur, out);
                cur.pop();
            }
        }
        rec(1, n, g + 1, &mut Vec::new(), &mut subsets);
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { g, subsets, index }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn complement(&self, s: &[usize]) -> Vec<usize> {
        (1..=2 * self.g + 2).filter(|x| !s.contains(x)).collect()
    }
}

/// Sign of `σ_S`: the permutation listing `S` and then its complement.
pub fn sigma_sign(g: usize, s: &[usize]) -> i64 {
    let mut p = s.to_vec();
    p.extend((1..=2 * g + 2).filter(|x| !s.contains(x)));
    permutation_sign(&p)
}

/// Derivation action of `F_ij = 2(E_ij − E_ji)` on the `e_S` basis.
pub fn wedge_generator_action(g: usize, i: usize, j: usize) -> Result<ExactMatrix> {
    let n = 2 * g + 2;
    if i == j {
        return Err(Error::RepeatedIndex(i));
    }
    for x in [i, j] {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange { index: x, max: n });
        }
    }
    let space = WedgeSpace::new(g);
    let d = space.dim();
    let mut m = ExactMatrix::zeros(d, d);
    for (col, s) in space.subsets().iter().enumerate() {
        for pos in 0..s.len() {
            // F e_j = 2 e_i and F e_i = −2 e_j
            let (target, coef) = if s[pos] == j {
                (i, 2)
            } else if s[pos] == i {
                (j, -2)
            } else {
                continue;
            };
            if s.contains(&target) {
                continue;
            }
            let mut new = s.clone();
            new[pos] = target;
            let sign = permutation_sign(&new);
            new.sort_unstable();
            let row = space.index_of(&new).expect("subset of the right size");
            *m.entry_mut(row, col) += ExactScalar::from_int(coef * sign);
        }
    }
    Ok(m)
}

/// `A(e_S) = sgn(σ_S) e_{S'}`.
pub fn a_operator(g: usize) -> ExactMatrix {
    let space = WedgeSpace::new(g);
    let d = space.dim();
    let mut m = ExactMatrix::zeros(d, d);
    for (col, s) in space.subsets().iter().enumerate() {
        let row = space.index_of(&space.complement(s)).expect("complement");
        m.set(row, col, ExactScalar::from_int(sigma_sign(g, s)));
    }
    m
}

/// The vectors `e_S + sign·sgn(σ_S)·i^{g+1}·e_{S'}` for `1 ∈ S`.
pub fn half_space_basis(g: usize, sign: i8) -> Vec<Vec<ExactScalar>> {
    let space = WedgeSpace::new(g);
    let unit = ExactScalar::i_pow(g as i64 + 1);
    space
        .subsets()
        .iter()
        .filter(|s| s[0] == 1)
        .map(|s| {
            let mut v = vec![ExactScalar::zero(); space.dim()];
            v[space.index_of(s).expect("basis")] = ExactScalar::one();
            let c = space.index_of(&space.complement(s)).expect("complement");
            v[c] = unit.scale_int(sign as i64 * sigma_sign(g, s));
            v
        })
        .collect()
}

trait ScaleInt {
    fn scale_int(&self, n: i64) -> ExactScalar;
}

impl ScaleInt for ExactScalar {
    fn scale_int(&self, n: i64) -> ExactScalar {
        self * &ExactScalar::from_int(n)
    }
}

/// An equivariant map from the wedge space onto `S²V`, vanishing on one half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    /// `+1` when `Φ` factors through the `+` half (and kills the `−` half).
    pub sign: i8,
    /// `dim S²V × dim Λ` matrix.
    pub phi: ExactMatrix,
}

/// Solves `Φ ρ_Λ(F_ij) = S²ρ(F_ij) Φ` for all pairs, with `Φ = 0` on the half of
/// opposite sign. Returns `None` when only `Φ = 0` solves. Genus two only.
pub fn solve_intertwiner(rep: &SpinRep, sign: i8) -> Result<Option<Intertwiner>> {
    let g = rep.g();
    if g != 2 {
        return Err(Error::Invalid(format!("intertwiner is built for g = 2, got {g}")));
    }
    let wedge = WedgeSpace::new(g);
    let (rows, cols) = (MonomialBasis::get(rep.dim(), 2).len(), wedge.dim());
    let var = |r: usize, c: usize| r * cols + c;
    let pairs: Vec<(usize, usize)> = rep.pairs().collect();
    let blocks = par::map(&pairs, |&(i, j)| -> Result<_> {
        Ok((wedge_generator_action(g, i, j)?, lift_linear(rep.pair(i, j), 2)?))
    });
    let mut rr = RowReducer::new(rows * cols);
    for b in blocks {
        let (w, s) = b?;
        for r in 0..rows {
            for c in 0..cols {
                // (ΦW − SΦ)[r][c] = Σ_m Φ[r][m] W[m][c] − Σ_m S[r][m] Φ[m][c]
                let mut entries = Vec::new();
                for m in 0..cols {
                    if !w.get(m, c).is_zero() {
                        entries.push((var(r, m), w.get(m, c).clone()));
                    }
                }
                for m in 0..rows {
                    if !s.get(r, m).is_zero() {
                        entries.push((var(m, c), -s.get(r, m)));
                    }
                }
                rr.push_entries(entries);
            }
        }
    }
    for h in half_space_basis(g, -sign) {
        for r in 0..rows {
            rr.push_entries(
                h.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(m, x)| (var(r, m), x.clone())),
            );
        }
    }
    let kernel = rr.kernel_basis();
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let v = &kernel[0];
            let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero kernel vector");
            let inv = lead.inv().expect("nonzero");
            let data = v.iter().map(|x| x * &inv).collect();
            Ok(Some(Intertwiner {
                sign,
                phi: ExactMatrix::new(rows, cols, data)?,
            }))
        }
        d => Err(Error::IntertwinerNotUnique(d)),
    }
}

/// Tries both halves and returns the unique nonzero intertwiner.
pub fn find_intertwiner(rep: &SpinRep) -> Result<Intertwiner> {
    let mut found = Vec::new();
    for sign in [1, -1] {
        if let Some(phi) = solve_intertwiner(rep, sign)? {
            found.push(phi);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one element")),
        d => Err(Error::IntertwinerNotUnique(d)),
    }
}

impl Intertwiner {
    /// `Φ(e_S)` as a quadratic polynomial in `nvars ≥ 4` variables.
    pub fn image(&self, column: usize, nvars: usize) -> Poly {
        let basis = MonomialBasis::get(4, 2);
        Poly::from_coords(&basis, &self.phi.column(column))
            .expect("column length")
            .embed(nvars)
    }

    pub fn scaled(&self, c: &ExactScalar) -> Intertwiner {
        Intertwiner {
            sign: self.sign,
            phi: self.phi.scale(c),
        }
    }
}

/// `P_z = Σ_S z_S Φ(e_S)²` where the `z_i` may themselves be polynomials
/// (sharing variables beyond the first four).
pub fn kummer_quartic_poly(phi: &Intertwiner, z: &[Poly]) -> Poly {
    let wedge = WedgeSpace::new(2);
    let nv = z[0].nvars();
    let mut p = Poly::zero(nv);
    for (c, s) in wedge.subsets().iter().enumerate() {
        let zs = s.iter().fold(Poly::constant(nv, ExactScalar::one()), |acc, &i| acc.mul(&z[i - 1]));
        if zs.is_zero() {
            continue;
        }
        let f = phi.image(c, nv);
        p.add_assign(&zs.mul(&f.mul(&f)));
    }
    p
}

/// `∂_{z_i} P_z = Σ_{S∋i} z_{S∖{i}} Φ(e_S)²`.
pub fn kummer_quartic_derivative(phi: &Intertwiner, z: &[Poly], i: usize) -> Poly {
    let wedge = WedgeSpace::new(2);
    let nv = z[0].nvars();
    let mut p = Poly::zero(nv);
    for (c, s) in wedge.subsets().iter().enumerate() {
        if !s.contains(&i) {
            continue;
        }
        let zs = s
            .iter()
            .filter(|&&m| m != i)
            .fold(Poly::constant(nv, ExactScalar::one()), |acc, &m| acc.mul(&z[m - 1]));
        let f = phi.image(c, nv);
        p.add_assign(&zs.mul(&f.mul(&f)));
    }
    p
}

fn constants(z: &[ExactScalar], nvars: usize) -> Vec<Poly> {
    z.iter().map(|c| Poly::constant(nvars, c.clone())).collect()
}

/// The quartic at an exact configuration, in the four variables of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerQuartic {
    pub z: Vec<ExactScalar>,
    pub poly: Poly,
}

impl KummerQuartic {
    /// Coordinates in the 35-dimensional monomial basis of `S⁴V`.
    pub fn coefficients(&self) -> Vec<ExactScalar> {
        self.poly.coords(&MonomialBasis::get(4, 4)).expect("quartic")
    }
}

pub fn kummer_quartic(phi: &Intertwiner, z: &[ExactScalar]) -> Result<KummerQuartic> {
    if z.len() != 6 {
        return Err(Error::DimensionMismatch {
            op: "kummer_quartic",
            left: (6, 1),
            right: (z.len(), 1),
        });
    }
    Ok(KummerQuartic {
        z: z.to_vec(),
        poly: kummer_quartic_poly(phi, &constants(z, 4)),
    })
}

/// Pieces of the flat-section equation for one direction, with the poles
/// cleared by `D_i = Π_{j≠i}(z_i − z_j)`.
struct ClearedTerms {
    /// `D_i · Σ_{j≠i} σ(M_ij)·P / (z_i − z_j)`.
    symbol: MixedTensor,
    /// `D_i · (∂_{z_i}P) ⊗ E`.
    euler: MixedTensor,
    /// `D_i` itself.
    denom: Poly,
}

fn cleared_terms(
    symbols: &[((usize, usize), SecondOrderSymbol)],
    phi: &Intertwiner,
    z: &[Poly],
    p: &Poly,
    i: usize,
) -> ClearedTerms {
    let nv = p.nvars();
    let one = Poly::constant(nv, ExactScalar::one());
    let diff = |j: usize| z[i - 1].sub(&z[j - 1]);
    let mut symbol = MixedTensor::zero(4, nv);
    for ((a, b), sym) in symbols {
        let j = match (*a == i, *b == i) {
            (true, _) => *b,
            (_, true) => *a,
            _ => continue,
        };
        let others = (1..=6)
            .filter(|&m| m != i && m != j)
            .fold(one.clone(), |acc, m| acc.mul(&diff(m)));
        let c = contract_symbol(sym, p);
        symbol.add_assign(&MixedTensor {
            comps: c.comps.iter().map(|q| q.mul(&others)).collect(),
        });
    }
    let denom = (1..=6).filter(|&m| m != i).fold(one, |acc, m| acc.mul(&diff(m)));
    let dp = kummer_quartic_derivative(phi, z, i);
    let euler = euler_product(&dp.mul(&denom), 4);
    ClearedTerms { symbol, euler, denom }
}

fn spin_symbols(rep: &SpinRep, nvars: usize) -> Result<Vec<((usize, usize), SecondOrderSymbol)>> {
    rep.pairs()
        .map(|(a, b)| Ok(((a, b), symbol_of_square(rep.pair(a, b))?.embed(nvars))))
        .collect()
}

/// Outcome of the flat-section check at one configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSectionReport {
    pub z: Vec<ExactScalar>,
    /// Max-norm of `T_i`, `i = 1..6`, with the symbol term taken as `+1/16`.
    pub residuals_plus: Vec<BigRational>,
    /// Same with `−1/16`.
    pub residuals_minus: Vec<BigRational>,
    /// `+1` or `−1` if that global sign makes all six residuals vanish.
    pub winning_sign: Option<i8>,
    /// The unique `c` with `c·Σ σ(M_ij)·P/(z_i − z_j) + (∂_{z_i}P)⊗E = 0` for
    /// all `i`, if one exists.
    pub fitted_coefficient: Option<ExactScalar>,
}

impl FlatSectionReport {
    pub fn passed(&self) -> bool {
        self.winning_sign.is_some()
    }
}

/// Which coefficient of `P_z` to disturb, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    /// Column index of `e_S` in the wedge basis; `P` gains `Φ(e_S)²`.
    pub subset: usize,
}

pub fn verify_flat_section(rep: &SpinRep, phi: &Intertwiner, z: &[ExactScalar]) -> Result<FlatSectionReport> {
    verify_flat_section_with(rep, phi, z, None)
}

pub fn verify_flat_section_with(
    rep: &SpinRep,
    phi: &Intertwiner,
    z: &[ExactScalar],
    perturb: Option<Perturbation>,
) -> Result<FlatSectionReport> {
    if z.len() != 6 {
        return Err(Error::DimensionMismatch {
            op: "verify_flat_section",
            left: (6, 1),
            right: (z.len(), 1),
        });
    }
    for a in 0..6 {
        for b in a + 1..6 {
            if z[a] == z[b] {
                return Err(Error::CoincidentPoints(a + 1, b + 1));
            }
        }
    }
    let symbols = spin_symbols(rep, 4)?;
    let zp = constants(z, 4);
    let mut p = kummer_quartic_poly(phi, &zp);
    if let Some(Perturbation { subset }) = perturb {
        let f = phi.image(subset, 4);
        p.add_assign(&f.mul(&f));
    }
    let terms = par::map_range(6, |k| cleared_terms(&symbols, phi, &zp, &p, k + 1));
    let sixteenth = ExactScalar::from_ratio(1, 16);
    let half = ExactScalar::from_ratio(1, 2);
    let residual = |t: &ClearedTerms, s: i64| -> BigRational {
        let d = t.denom.coefficient(&crate::polyop::Monomial::one(4));
        let lhs = t
            .symbol
            .scale(&(&sixteenth * &ExactScalar::from_int(s)))
            .add(&t.euler.scale(&half));
        lhs.scale(&d.inv().expect("distinct points")).max_norm()
    };
    let residuals_plus: Vec<BigRational> = terms.iter().map(|t| residual(t, 1)).collect();
    let residuals_minus: Vec<BigRational> = terms.iter().map(|t| residual(t, -1)).collect();
    let winning_sign = if residuals_plus.iter().all(Zero::is_zero) {
        Some(1)
    } else if residuals_minus.iter().all(Zero::is_zero) {
        Some(-1)
    } else {
        None
    };
    Ok(FlatSectionReport {
        z: z.to_vec(),
        residuals_plus,
        residuals_minus,
        winning_sign,
        fitted_coefficient: fit_coefficient(&terms),
    })
}

fn fit_coefficient(terms: &[ClearedTerms]) -> Option<ExactScalar> {
    let mut fitted: Option<ExactScalar> = None;
    for t in terms {
        // find c with c·symbol + euler = 0
        let (q, m) = t
            .symbol
            .comps
            .iter()
            .enumerate()
            .find_map(|(a, q)| q.terms().next().map(|(m, _)| (a, m.clone())))?;
        let c = -(&t.euler.comps[q].coefficient(&m) / &t.symbol.comps[q].coefficient(&m));
        if !t.symbol.scale(&c).add(&t.euler).is_zero() {
            return None;
        }
        match &fitted {
            Some(f) if *f != c => return None,
            _ => fitted = Some(c),
        }
    }
    fitted
}

/// Result of the single-variable symbolic family `z = (z_2 + t, z_2, z_3, …, z_6)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicFamilyReport {
    pub base: Vec<ExactScalar>,
    /// Whether each cleared `T_i` vanishes identically as a polynomial in `X` and `t`.
    pub vanishes: Vec<bool>,
}

impl SymbolicFamilyReport {
    pub fn passed(&self) -> bool {
        self.vanishes.iter().all(|&v| v)
    }
}

/// Checks all six cleared residuals identically in `t` (sign `+`).
pub fn verify_symbolic_family(rep: &SpinRep, phi: &Intertwiner, rest: &[ExactScalar]) -> Result<SymbolicFamilyReport> {
    if rest.len() != 5 {
        return Err(Error::DimensionMismatch {
            op: "verify_symbolic_family",
            left: (5, 1),
            right: (rest.len(), 1),
        });
    }
    let nv = 5;
    let t = Poly::var(nv, 4);
    let mut z = vec![Poly::constant(nv, rest[0].clone()).add(&t)];
    z.extend(rest.iter().map(|c| Poly::constant(nv, c.clone())));
    let symbols = spin_symbols(rep, nv)?;
    let p = kummer_quartic_poly(phi, &z);
    let sixteenth = ExactScalar::from_ratio(1, 16);
    let half = ExactScalar::from_ratio(1, 2);
    let vanishes = par::map_range(6, |k| {
        let c = cleared_terms(&symbols, phi, &z, &p, k + 1);
        c.symbol.scale(&sixteenth).add(&c.euler.scale(&half)).is_zero()
    });
    Ok(SymbolicFamilyReport {
        base: rest.to_vec(),
        vanishes,
    })
}

/// `count` configurations of six distinct integers in `[−64, 64]`, fixed by `seed`.
pub fn seeded_configurations(seed: u64, count: usize) -> Vec<Vec<ExactScalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<i64> = (-64..=64).collect();
    (0..count)
        .map(|_| {
            pool.choose_multiple(&mut rng, 6)
                .map(|&x| ExactScalar::from_int(x))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::solve_homogeneous;
    use crate::spin::Half;
    use std::sync::OnceLock;

    fn rep2() -> &'static SpinRep {
        static R: OnceLock<SpinRep> = OnceLock::new();
        R.get_or_init(|| SpinRep::new(2, Half::Plus).unwrap())
    }

    fn phi() -> &'static Intertwiner {
        static P: OnceLock<Intertwiner> = OnceLock::new();
        P.get_or_init(|| find_intertwiner(rep2()).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| ExactScalar::from_int(x)).collect()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_sign(2, &[1, 2, 3]), 1);
        assert_eq!(sigma_sign(2, &[1, 2, 4]), -1);
    }

    #[test]
    fn generator_action_facts() {
        let space = WedgeSpace::new(2);
        let four = ExactScalar::from_int(-4);
        for (i, j) in [(1, 2), (2, 5), (3, 6)] {
            let f = wedge_generator_action(2, i, j).unwrap();
            let f2 = &f * &f;
            for (c, s) in space.subsets().iter().enumerate() {
                let hits = s.iter().filter(|&&x| x == i || x == j).count();
                let col = f.column(c);
                if hits != 1 {
                    assert!(col.iter().all(Zero::is_zero));
                } else {
                    assert_eq!(f2.column(c), (0..20).map(|r| if r == c { four.clone() } else { ExactScalar::zero() }).collect::<Vec<_>>());
                    // t_{S,ij} = −t_{S+ij,ij}
                    let r = col.iter().position(|x| !x.is_zero()).unwrap();
                    assert_eq!(f.get(c, r), &-f.get(r, c));
                }
            }
        }
    }

    #[test]
    fn wedge_is_a_representation() {
        let n = 6;
        for (i, j, k, l) in [(1, 2, 2, 3), (1, 3, 4, 5), (2, 4, 4, 6), (1, 5, 1, 6)] {
            let a = wedge_generator_action(2, i, j).unwrap();
            let b = wedge_generator_action(2, k, l).unwrap();
            let lhs = a.commutator(&b).unwrap();
            let rhs = crate::spin::bracket(i, j, k, l).iter().fold(ExactMatrix::zeros(20, 20), |acc, &(c, x, y)| {
                &acc + &wedge_generator_action(2, x, y).unwrap().scale(&ExactScalar::from_int(c))
            });
            assert_eq!(lhs, rhs);
            assert!(i <= n);
        }
    }

    #[test]
    fn halves_are_invariant_eigenspaces() {
        let a = a_operator(2);
        let eig = [ExactScalar::i_pow(3), -ExactScalar::i_pow(3)];
        let mut all = RowReducer::new(20);
        for sign in [1i8, -1] {
            let basis = half_space_basis(2, sign);
            assert_eq!(basis.len(), 10);
            for v in &basis {
                let av = a.mul_vec(v).unwrap();
                assert!(eig.iter().any(|mu| av.iter().zip(v).all(|(x, y)| *x == mu * y)));
                all.push_dense(v);
            }
            let h = ExactMatrix::from_columns(20, &basis).unwrap();
            for (i, j) in rep2().pairs() {
                let w = wedge_generator_action(2, i, j).unwrap();
                let stacked = ExactMatrix::from_fn(20, 20, |r, c| {
                    if c < 10 { h.get(r, c).clone() } else { (&w * &h).get(r, c - 10).clone() }
                });
                assert_eq!(stacked.rank(), 10);
            }
        }
        assert_eq!(all.rank(), 20);
    }

    #[test]
    fn intertwiner_unique() {
        let plus = solve_intertwiner(rep2(), 1).unwrap();
        let minus = solve_intertwiner(rep2(), -1).unwrap();
        assert_eq!(plus.is_some() as u8 + minus.is_some() as u8, 1);
        let phi = phi();
        assert_eq!(phi.phi.rank(), 10);
        for (i, j) in rep2().pairs() {
            let w = wedge_generator_action(2, i, j).unwrap();
            let s = lift_linear(rep2().pair(i, j), 2).unwrap();
            assert_eq!(&phi.phi * &w, &s * &phi.phi);
        }
        // kernel of Φ is the opposite half
        let ker = solve_homogeneous(&phi.phi);
        let other = half_space_basis(2, -phi.sign);
        let mut rr = RowReducer::new(20);
        for v in other.iter().chain(&ker) {
            rr.push_dense(v);
        }
        assert_eq!(rr.rank(), 10);
    }

    #[test]
    fn quartic_facts() {
        let z = ints(&[2, 3, 5, 7, 11, 13]);
        let p = kummer_quartic(phi(), &z).unwrap();
        assert_eq!(p.coefficients().len(), 35);
        let tz: Vec<ExactScalar> = z.iter().map(|x| x * &ExactScalar::from_int(3)).collect();
        assert_eq!(kummer_quartic(phi(), &tz).unwrap().poly, p.poly.scale(&ExactScalar::from_int(27)));
        // z_1 = 0 drops every subset containing 1
        let z0 = ints(&[0, 3, 5, 7, 11, 13]);
        let direct: Poly = WedgeSpace::new(2)
            .subsets()
            .iter()
            .enumerate()
            .filter(|(_, s)| s[0] != 1)
            .fold(Poly::zero(4), |acc, (c, s)| {
                let zs: ExactScalar = s.iter().map(|&i| z0[i - 1].clone()).product();
                let f = phi().image(c, 4);
                acc.add(&f.mul(&f).scale(&zs))
            });
        assert_eq!(kummer_quartic(phi(), &z0).unwrap().poly, direct);
    }

    #[test]
    fn derivative_is_exact_difference() {
        let z = ints(&[4, -1, 6, 9, 2, -8]);
        let nv = 5;
        let t = Poly::var(nv, 4);
        let zp: Vec<Poly> = z.iter().map(|c| Poly::constant(nv, c.clone())).collect();
        let mut shifted = zp.clone();
        shifted[0] = shifted[0].add(&t);
        let diff = kummer_quartic_poly(phi(), &shifted).sub(&kummer_quartic_poly(phi(), &zp));
        assert_eq!(diff, t.mul(&kummer_quartic_derivative(phi(), &zp, 1)));
    }

    #[test]
    fn flat_section_at_fixed_points() {
        for z in [ints(&[0, 1, 2, 3, 4, 5]), ints(&[1, 2, 4, 8, 16, 32])] {
            let r = verify_flat_section(rep2(), phi(), &z).unwrap();
            assert_eq!(r.winning_sign, Some(1), "{r:?}");
            assert_eq!(r.fitted_coefficient, Some(ExactScalar::from_ratio(1, 8)));
            assert!(r.residuals_minus.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn flat_section_negative_control_and_scaling() {
        let z = ints(&[0, 1, 2, 3, 4, 5]);
        let bad = verify_flat_section_with(rep2(), phi(), &z, Some(Perturbation { subset: 7 })).unwrap();
        assert!(!bad.passed());
        let scaled = phi().scaled(&ExactScalar::from_int(3));
        assert!(verify_flat_section(rep2(), &scaled, &z).unwrap().passed());
        let dup = ints(&[0, 1, 2, 3, 4, 0]);
        assert_eq!(verify_flat_section(rep2(), phi(), &dup), Err(Error::CoincidentPoints(1, 6)));
    }

    #[test]
    fn symbolic_family_vanishes() {
        let r = verify_symbolic_family(rep2(), phi(), &ints(&[1, 3, -2, 5, 7])).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn seeded_configurations_are_distinct_and_stable() {
        let a = seeded_configurations(7, 5);
        assert_eq!(a, seeded_configurations(7, 5));
        for z in &a {
            for i in 0..6 {
                for j in i + 1..6 {
                    assert_ne!(z[i], z[j]);
                }
            }
        }
    }
}
