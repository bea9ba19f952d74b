//! Polynomial operator calculus on `S = ℂ[X_0, …, X_{n−1}]`.
//!
//! `S_k` carries the monomial basis in descending lexicographic order of
//! exponent vectors, so `X_0^k` comes first and `X_{n−1}^k` last. Matrices of
//! operators on `S_k` are written in that basis.
//!
//! Second-order symbols use the symmetric-tensor convention
//! `∂_a∂_b := ∂_a⊗∂_b + ∂_b⊗∂_a`. Concretely a symbol is stored as a symmetric
//! array of coefficients `c_{jl} ∈ S_2`; as an operator it is
//! `Σ_{j,l} c_{jl} ∂_j∂_l` and as a tensor `Σ_{j,l} c_{jl} ⊗ ∂_j⊗∂_l`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::ExactScalar;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `∂_i` of the monomial: `(exponent, X^{m − e_i})`, or `None` if it vanishes.
    pub fn derive(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.0[i];
        (e > 0).then(|| {
            let mut m = self.0.clone();
            m[i] -= 1;
            (e, Monomial(m))
        })
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{:?}", self.0)
    }
}

/// All monomials of degree `k` in `n` variables, first variable heaviest first.
#[derive(Debug)]
pub struct MonomialBasis {
    n: usize,
    k: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

type BasisCache = RwLock<HashMap<(usize, u32), Arc<MonomialBasis>>>;

impl MonomialBasis {
    fn build(n: usize, k: u32) -> Self {
        let mut monomials = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(pos: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if n == 0 {
                if rem == 0 {
                    out.push(Monomial(Vec::new()));
                }
                return;
            }
            if pos == n - 1 {
                cur[pos] = rem;
                out.push(Monomial(cur.clone()));
                return;
            }
            for a in (0..=rem).rev() {
                cur[pos] = a;
                rec(pos + 1, rem - a, cur, out);
            }
        }
        rec(0, k, &mut cur, &mut monomials);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self {
            n,
            k,
            monomials,
            index,
        }
    }

    /// Shared basis for `(n, k)`, built once per process.
    pub fn get(n: usize, k: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<BasisCache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.read().expect("basis cache").get(&(n, k)) {
            return b.clone();
        }
        let built = Arc::new(Self::build(n, k));
        cache
            .write()
            .expect("basis cache")
            .entry((n, k))
            .or_insert(built)
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `C(n + k − 1, k)`, the dimension of `S_k` in `n` variables.
pub fn sym_dim(n: usize, k: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k as u128 {
        num *= n as u128 + i;
        den *= i + 1;
    }
    (num / den) as usize
}

/// A sparse polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: ExactScalar) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::var(n, i), ExactScalar::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: ExactScalar) -> Self {
        assert_eq!(m.nvars(), n, "monomial arity");
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    /// Polynomial with coordinates `v` in the basis of `S_k`.
    pub fn from_coords(basis: &MonomialBasis, v: &[ExactScalar]) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                op: "from_coords",
                left: (basis.len(), 1),
                right: (v.len(), 1),
            });
        }
        let mut p = Self::zero(basis.nvars());
        for (m, c) in basis.monomials().iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }

    /// Coordinates in the basis of `S_k`; fails when `self` is not in `S_k`.
    pub fn coords(&self, basis: &MonomialBasis) -> Result<Vec<ExactScalar>> {
        let mut v = vec![ExactScalar::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis
                .index_of(m)
                .ok_or_else(|| Error::Invalid(format!("monomial {m:?} not of degree {}", basis.degree())))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial; `None` when zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        assert_eq!(self.n, other.n, "polynomial arity");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-ExactScalar::one()))
    }

    pub fn scale(&self, s: &ExactScalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.n, other.n, "polynomial arity");
        let mut out = Poly::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(self.n, ExactScalar::one()), |acc, _| acc.mul(self))
    }

    /// `∂P/∂X_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((e, d)) = m.derive(i) {
                out.add_term(d, c * &ExactScalar::from_int(e as i64));
            }
        }
        out
    }

    /// Substitutes the variable `i` by the scalar `v`.
    pub fn substitute(&self, i: usize, v: &ExactScalar) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let p = std::mem::take(&mut e[i]);
            out.add_term(Monomial(e), c * &v.pow(p));
        }
        out
    }

    /// Exact sup-norm of the coefficients.
    pub fn max_norm(&self) -> BigRational {
        self.terms
            .values()
            .map(ExactScalar::max_abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// The same polynomial viewed in `nvars ≥ self.nvars()` variables.
    pub fn embed(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.n, "cannot drop variables");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(nvars, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Poly { n: nvars, terms }
    }

    /// Linear form `Σ_i v_i X_i`.
    pub fn linear(v: &[ExactScalar]) -> Poly {
        let n = v.len();
        let mut p = Poly::zero(n);
        for (i, c) in v.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}){m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Matrix of `L_A = Σ a_ij X_i ∂_j` on `S_k`.
pub fn lift_linear(a: &ExactMatrix, k: u32) -> Result<ExactMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let basis = MonomialBasis::get(n, k);
    let d = basis.len();
    let mut out = ExactMatrix::zeros(d, d);
    for (col, m) in basis.monomials().iter().enumerate() {
        for j in 0..n {
            let Some((e, dm)) = m.derive(j) else { continue };
            let e = ExactScalar::from_int(e as i64);
            for i in 0..n {
                let aij = a.get(i, j);
                if aij.is_zero() {
                    continue;
                }
                let target = dm.mul(&Monomial::var(n, i));
                let row = basis.index_of(&target).expect("degree preserved");
                *out.entry_mut(row, col) += aij * &e;
            }
        }
    }
    Ok(out)
}

/// `L_A(P)` for a polynomial of any degree.
pub fn apply_linear(a: &ExactMatrix, p: &Poly) -> Poly {
    let n = a.rows();
    let mut out = Poly::zero(p.nvars());
    for j in 0..n {
        let dj = p.derivative(j);
        if dj.is_zero() {
            continue;
        }
        out.add_assign(&dj.mul(&column_form(a, j, p.nvars())));
    }
    out
}

/// `f_j = Σ_i a_ij X_i`, embedded in `nvars ≥ rows(a)` variables.
pub fn column_form(a: &ExactMatrix, j: usize, nvars: usize) -> Poly {
    let mut f = Poly::zero(nvars);
    for i in 0..a.rows() {
        f.add_term(Monomial::var(nvars, i), a.get(i, j).clone());
    }
    f
}

/// Matrix of `S^k(U)`: `X_j ↦ Σ_i U_ij X_i` extended multiplicatively.
pub fn sym_power(u: &ExactMatrix, k: u32) -> Result<ExactMatrix> {
    if !u.is_square() {
        return Err(Error::NotSquare(u.rows(), u.cols()));
    }
    let n = u.rows();
    let basis = MonomialBasis::get(n, k);
    let images: Vec<Poly> = (0..n).map(|j| column_form(u, j, n)).collect();
    let cols: Vec<Vec<ExactScalar>> = basis
        .monomials()
        .iter()
        .map(|m| {
            let img = m
                .exponents()
                .iter()
                .enumerate()
                .fold(Poly::constant(n, ExactScalar::one()), |acc, (j, &e)| {
                    acc.mul(&images[j].pow(e))
                });
            img.coords(&basis).expect("degree preserved")
        })
        .collect();
    ExactMatrix::from_columns(basis.len(), &cols)
}

/// Second-order symbol `Σ_{j,l} c_{jl} ∂_j∂_l`, `c` symmetric with entries in `S_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrderSymbol {
    n: usize,
    coef: Vec<Vec<Poly>>,
}

impl SecondOrderSymbol {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coef: vec![vec![Poly::zero(n); n]; n],
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, j: usize, l: usize) -> &Poly {
        &self.coef[j][l]
    }

    /// `2 D ⊗ D` for `D = Σ_a f_a ∂_a`, the symbol of `D²`.
    pub fn of_square_field(f: &[Poly]) -> Self {
        let n = f.len();
        let two = ExactScalar::from_int(2);
        let coef = (0..n)
            .map(|j| (0..n).map(|l| f[j].mul(&f[l]).scale(&two)).collect())
            .collect();
        Self { n, coef }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            coef: self
                .coef
                .iter()
                .zip(&other.coef)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.add(b)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self {
            n: self.n,
            coef: self
                .coef
                .iter()
                .map(|r| r.iter().map(|a| a.scale(s)).collect())
                .collect(),
        }
    }

    /// Coefficients embedded in `nvars` variables; derivative indices unchanged.
    pub fn embed(&self, nvars: usize) -> Self {
        Self {
            n: self.n,
            coef: self
                .coef
                .iter()
                .map(|r| r.iter().map(|a| a.embed(nvars)).collect())
                .collect(),
        }
    }

    /// The operator `Σ c_{jl} ∂_j∂_l` applied to a polynomial.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(p.nvars());
        for j in 0..self.n {
            let dj = p.derivative(j);
            if dj.is_zero() {
                continue;
            }
            for l in 0..self.n {
                if self.coef[j][l].is_zero() {
                    continue;
                }
                out.add_assign(&self.coef[j][l].mul(&dj.derivative(l)));
            }
        }
        out
    }

    /// Matrix of the operator on `S_k`.
    pub fn to_matrix(&self, k: u32) -> ExactMatrix {
        let basis = MonomialBasis::get(self.n, k);
        let cols: Vec<Vec<ExactScalar>> = basis
            .monomials()
            .iter()
            .map(|m| {
                let p = Poly::monomial(self.n, m.clone(), ExactScalar::one());
                self.apply(&p).coords(&basis).expect("degree preserved")
            })
            .collect();
        ExactMatrix::from_columns(basis.len(), &cols).expect("square")
    }

    /// Contraction of one lower index against `P`: component `a` is `Σ_l c_{al} ∂_l P`.
    pub fn contract(&self, p: &Poly) -> MixedTensor {
        let dp: Vec<Poly> = (0..self.n).map(|l| p.derivative(l)).collect();
        let comps = (0..self.n)
            .map(|a| {
                let mut acc = Poly::zero(p.nvars());
                for (l, d) in dp.iter().enumerate() {
                    if !d.is_zero() && !self.coef[a][l].is_zero() {
                        acc.add_assign(&self.coef[a][l].mul(d));
                    }
                }
                acc
            })
            .collect();
        MixedTensor { comps }
    }
}

/// `σ(L_A²) = 2 Σ a_ij a_kl X_i X_k ∂_j∂_l`.
pub fn symbol_of_square(a: &ExactMatrix) -> Result<SecondOrderSymbol> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let f: Vec<Poly> = (0..n).map(|j| column_form(a, j, n)).collect();
    Ok(SecondOrderSymbol::of_square_field(&f))
}

/// Contraction of a symbol against a polynomial, landing in `S^{k+1}W ⊗ W*`.
pub fn contract_symbol(x: &SecondOrderSymbol, p: &Poly) -> MixedTensor {
    x.contract(p)
}

/// Element `Σ_a q_a ⊗ ∂_a` of `S^m W ⊗ W*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTensor {
    pub comps: Vec<Poly>,
}

impl MixedTensor {
    pub fn zero(dual_dim: usize, nvars: usize) -> Self {
        Self {
            comps: vec![Poly::zero(nvars); dual_dim],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_assign(b);
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self {
            comps: self.comps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn max_norm(&self) -> BigRational {
        self.comps
            .iter()
            .map(Poly::max_norm)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Common degree of all nonzero components.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.comps.iter().filter(|c| !c.is_zero()).map(Poly::homogeneous_degree);
        let d = degs.next()??;
        degs.all(|e| e == Some(d)).then_some(d)
    }

    /// Pairs the dual index with a polynomial: `Σ_a q_a ∂_a r`.
    pub fn apply_to(&self, r: &Poly) -> Poly {
        let mut out = Poly::zero(r.nvars());
        for (a, q) in self.comps.iter().enumerate() {
            let d = r.derivative(a);
            if !d.is_zero() {
                out.add_assign(&q.mul(&d));
            }
        }
        out
    }
}

/// `Σ_σ (q·X_σ) ⊗ ∂_σ` over the first `dual_dim` variables.
pub fn euler_product(q: &Poly, dual_dim: usize) -> MixedTensor {
    MixedTensor {
        comps: (0..dual_dim).map(|s| q.mul(&Poly::var(q.nvars(), s))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn matrix4() -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec((-2i64..3, -1i64..2), 16).prop_map(|v| {
            ExactMatrix::new(4, 4, v.into_iter().map(|(a, b)| ExactScalar::from_gaussian(a, b)).collect()).unwrap()
        })
    }

    fn poly4(k: u32) -> impl Strategy<Value = Poly> {
        let d = sym_dim(4, k);
        proptest::collection::vec(-3i64..4, d).prop_map(move |v| {
            let basis = MonomialBasis::get(4, k);
            Poly::from_coords(&basis, &v.into_iter().map(s).collect::<Vec<_>>()).unwrap()
        })
    }

    #[test]
    fn basis_sizes_and_order() {
        for n in 1..=5 {
            for k in 0..=5 {
                assert_eq!(MonomialBasis::get(n, k).len(), sym_dim(n, k));
            }
        }
        let b = MonomialBasis::get(4, 2);
        assert_eq!(b.monomials()[0], Monomial(vec![2, 0, 0, 0]));
        assert_eq!(b.monomials()[9], Monomial(vec![0, 0, 0, 2]));
        assert!(b.monomials().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn euler_lift_is_degree() {
        for k in 0..=4 {
            let l = lift_linear(&ExactMatrix::identity(4), k).unwrap();
            assert_eq!(l, ExactMatrix::scalar(sym_dim(4, k), &s(k as i64)));
        }
    }

    #[test]
    fn lift_by_leibniz() {
        let a = ExactMatrix::diag(&[s(1), s(1), s(-1), s(-1)]);
        let l = lift_linear(&a, 2).unwrap();
        let b = MonomialBasis::get(4, 2);
        let m = b.index_of(&Monomial(vec![1, 0, 1, 0])).unwrap();
        assert!(l.get(m, m).is_zero());
        // k = 1 reproduces A
        assert_eq!(lift_linear(&a, 1).unwrap(), a);
    }

    #[test]
    fn symbol_vanishes_on_linear() {
        let a = ExactMatrix::from_fn(4, 4, |r, c| ExactScalar::from_gaussian((r + 2 * c) as i64 % 3, 1));
        assert!(symbol_of_square(&a).unwrap().to_matrix(1).is_zero());
    }

    #[test]
    fn contraction_hand_example() {
        // L = X_0 ∂_1, P = X_1²: σ(L²)·P = 2 L(P) L = 4 X_0² X_1 ⊗ ∂_1
        let mut a = ExactMatrix::zeros(2, 2);
        a.set(0, 1, s(1));
        let p = Poly::var(2, 1).pow(2);
        let t = contract_symbol(&symbol_of_square(&a).unwrap(), &p);
        let expect = Poly::monomial(2, Monomial(vec![2, 1]), s(4));
        assert!(t.comps[0].is_zero());
        assert_eq!(t.comps[1], expect);
        assert!(contract_symbol(&symbol_of_square(&a).unwrap(), &Poly::constant(2, s(5))).is_zero());
    }

    #[test]
    fn euler_tensor_examples() {
        let e = euler_product(&Poly::constant(4, s(1)), 4);
        for (i, c) in e.comps.iter().enumerate() {
            assert_eq!(c, &Poly::var(4, i));
        }
    }

    #[test]
    fn sym_power_is_multiplicative() {
        let u = crate::heisenberg::u_x(&crate::heisenberg::PhasePoint::from_index(2, 11));
        let v = crate::heisenberg::u_x(&crate::heisenberg::PhasePoint::from_index(2, 6));
        for k in 0..=3 {
            let lhs = &sym_power(&u, k).unwrap() * &sym_power(&v, k).unwrap();
            assert_eq!(lhs, sym_power(&(&u * &v), k).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symbol_matrix_identity(a in matrix4(), k in 0u32..=4) {
            let l = lift_linear(&a, k).unwrap();
            let l2 = lift_linear(&(&a * &a), k).unwrap();
            let expect = (&(&l * &l) - &l2).scale(&s(2));
            prop_assert_eq!(symbol_of_square(&a).unwrap().to_matrix(k), expect);
        }

        #[test]
        fn contraction_is_twice_d_of_p_times_d(a in matrix4(), p in poly4(4)) {
            let t = contract_symbol(&symbol_of_square(&a).unwrap(), &p);
            let dp = apply_linear(&a, &p).scale(&s(2));
            for j in 0..4 {
                prop_assert_eq!(&t.comps[j], &dp.mul(&column_form(&a, j, 4)));
            }
            prop_assert!(t.is_zero() || t.degree() == Some(5));
        }

        #[test]
        fn contraction_is_bilinear(a in matrix4(), b in matrix4(), p in poly4(3), q in poly4(3)) {
            let x = symbol_of_square(&a).unwrap();
            let y = symbol_of_square(&b).unwrap();
            let three = s(3);
            prop_assert_eq!(contract_symbol(&x.add(&y), &p), contract_symbol(&x, &p).add(&contract_symbol(&y, &p)));
            prop_assert_eq!(contract_symbol(&x, &p.add(&q.scale(&three))),
                contract_symbol(&x, &p).add(&contract_symbol(&x, &q).scale(&three)));
        }

        #[test]
        fn euler_contracts_back(q in poly4(2), r in poly4(1)) {
            let e = euler_product(&q, 4);
            prop_assert_eq!(e.apply_to(&r), q.mul(&r));
            prop_assert!(q.is_zero() || e.degree() == Some(3));
        }

        #[test]
        fn lift_matches_apply(a in matrix4(), p in poly4(3)) {
            let basis = MonomialBasis::get(4, 3);
            let v = lift_linear(&a, 3).unwrap().mul_vec(&p.coords(&basis).unwrap()).unwrap();
            prop_assert_eq!(Poly::from_coords(&basis, &v).unwrap(), apply_linear(&a, &p));
        }
    }
}
