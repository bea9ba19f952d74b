//! Clifford generators as involutions of the sharp Heisenberg group and the
//! half-spin representation `ρ_s` of `so(2g+2)` on `V = ℂ^{2^g}`.
//!
//! The sharp space `V♯` has genus `g+1`. Its delta basis `Y_{σ'}` is split by
//! the parity of `σ'`; the even half `V♯₊` is identified with `V` through
//! `Y_{σ, σ_{g+1}} ↦ X_σ`. In mask form the sharp index of `Y_{σ, s}` is
//! `(σ << 1) | s`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::heisenberg::{self, subset_to_point, u_x, PhasePoint, SubsetLabel};
use crate::linalg::{self, ExactMatrix};
use crate::par;
use crate::scalar::ExactScalar;

/// Which parity eigenspace of `V♯` is used as `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Plus,
    Minus,
}

/// Index bookkeeping for `V♯` and its two halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpSpace {
    pub g: usize,
    pub dim: usize,
    pub plus_basis: Vec<usize>,
    pub minus_basis: Vec<usize>,
}

impl SharpSpace {
    pub fn new(g: usize) -> Self {
        let n = 1usize << g;
        let build = |odd: u32| {
            (0..n as u32)
                .map(|s| ((s << 1) | ((s.count_ones() & 1) ^ odd)) as usize)
                .collect()
        };
        Self {
            g,
            dim: 2 * n,
            plus_basis: build(0),
            minus_basis: build(1),
        }
    }

    pub fn basis(&self, half: Half) -> &[usize] {
        match half {
            Half::Plus => &self.plus_basis,
            Half::Minus => &self.minus_basis,
        }
    }

    /// `p' = x_{{2g+3, 2g+4}} = (0, (1,…,1))` in the sharp group.
    pub fn p_prime(&self) -> PhasePoint {
        PhasePoint::new(self.g + 1, 0, (1 << (self.g + 1)) - 1).expect("valid genus")
    }

    /// Quotient `(p')^⊥ → F₂^{2g}`, `((a, a'), (b, b')) ↦ (a, b + b'·(1,…,1))`.
    pub fn quotient(&self, x: &PhasePoint) -> Result<PhasePoint> {
        if x.g() != self.g + 1 {
            return Err(Error::GenusMismatch(x.g(), self.g + 1));
        }
        if heisenberg::symplectic(x, &self.p_prime())? != 0 {
            return Err(Error::Invalid(format!("{x} is not orthogonal to p'")));
        }
        let mask = (1u32 << self.g) - 1;
        let b = x.xi_prime() >> 1;
        let bbar = if x.xi_prime() & 1 == 1 { b ^ mask } else { b };
        PhasePoint::new(self.g, x.xi() >> 1, bbar)
    }
}

fn check_index(g: usize, k: usize) -> Result<()> {
    let max = 2 * g + 2;
    if k == 0 || k > max {
        Err(Error::IndexOutOfRange { index: k, max })
    } else {
        Ok(())
    }
}

/// `γ(e_k) = U♯_{x_{k, 2g+4}}`, an involution of `V♯`.
pub fn clifford_generator(g: usize, k: usize) -> Result<ExactMatrix> {
    check_index(g, k)?;
    let s = SubsetLabel::new(g + 1, &[k, 2 * g + 4])?;
    Ok(u_x(&subset_to_point(&s)))
}

/// Restriction of an operator on `V♯` to one half, transported to `V`.
pub fn restrict(m: &ExactMatrix, g: usize, half: Half) -> Result<ExactMatrix> {
    let sharp = SharpSpace::new(g);
    if m.shape() != (sharp.dim, sharp.dim) {
        return Err(Error::DimensionMismatch {
            op: "restrict",
            left: m.shape(),
            right: (sharp.dim, sharp.dim),
        });
    }
    let basis = sharp.basis(half);
    let mut inside = vec![false; sharp.dim];
    for &b in basis {
        inside[b] = true;
    }
    for (col, &c) in basis.iter().enumerate() {
        if (0..sharp.dim).any(|r| !inside[r] && !m.get(r, c).is_zero()) {
            return Err(Error::NotInvariant { column: col });
        }
    }
    Ok(ExactMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        m.get(basis[r], basis[c]).clone()
    }))
}

pub fn restrict_plus(m: &ExactMatrix, g: usize) -> Result<ExactMatrix> {
    restrict(m, g, Half::Plus)
}

/// `ρ(F_jk)` on the chosen half: restriction of `γ(e_j)γ(e_k)`.
pub fn spin_generator_half(g: usize, j: usize, k: usize, half: Half) -> Result<ExactMatrix> {
    if j == k {
        return Err(Error::RepeatedIndex(j));
    }
    let prod = &clifford_generator(g, j)? * &clifford_generator(g, k)?;
    restrict(&prod, g, half)
}

/// `ρ_s(F_jk)` on `V♯₊ ≅ V`.
pub fn spin_generator(g: usize, j: usize, k: usize) -> Result<ExactMatrix> {
    spin_generator_half(g, j, k, Half::Plus)
}

/// A term `coef · F_{a b}` of a bracket in `so(n)`.
pub type BracketTerm = (i64, usize, usize);

/// Structure constants: `[F_ij, F_kl] = 2(δ_jk F_il − δ_ik F_jl − δ_jl F_ik + δ_il F_jk)`.
/// Terms with `a = b` vanish and are dropped; `F_ba` is rewritten as `−F_ab`.
pub fn bracket(i: usize, j: usize, k: usize, l: usize) -> Vec<BracketTerm> {
    let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut push = |c: i64, a: usize, b: usize| {
        if a == b {
            return;
        }
        let (key, s) = if a < b { ((a, b), c) } else { ((b, a), -c) };
        *acc.entry(key).or_default() += 2 * s;
    };
    if j == k {
        push(1, i, l);
    }
    if i == k {
        push(-1, j, l);
    }
    if j == l {
        push(-1, i, k);
    }
    if i == l {
        push(1, j, k);
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((a, b), c)| (c, a, b))
        .collect()
}

/// All `ρ(F_jk)`, `j < k`, for one genus and half, built once.
#[derive(Clone, Debug)]
pub struct SpinRep {
    g: usize,
    half: Half,
    mats: BTreeMap<(usize, usize), ExactMatrix>,
}

impl SpinRep {
    pub fn new(g: usize, half: Half) -> Result<Self> {
        let n = 2 * g + 2;
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|j| (j + 1..=n).map(move |k| (j, k)))
            .collect();
        let built = par::map(&pairs, |&(j, k)| spin_generator_half(g, j, k, half));
        let mut mats = BTreeMap::new();
        for (p, m) in pairs.into_iter().zip(built) {
            mats.insert(p, m?);
        }
        Ok(Self { g, half, mats })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn half(&self) -> Half {
        self.half
    }

    pub fn dim(&self) -> usize {
        1 << self.g
    }

    pub fn n(&self) -> usize {
        2 * self.g + 2
    }

    /// Unordered pairs `(j, k)`, `j < k`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mats.keys().copied()
    }

    /// `ρ(F_jk)`, negated when `j > k`.
    pub fn get(&self, j: usize, k: usize) -> Result<ExactMatrix> {
        check_index(self.g, j)?;
        check_index(self.g, k)?;
        if j == k {
            return Err(Error::RepeatedIndex(j));
        }
        if j < k {
            Ok(self.mats[&(j, k)].clone())
        } else {
            Ok(-&self.mats[&(k, j)])
        }
    }

    /// Reference to `ρ(F_jk)` for `j < k`.
    pub fn pair(&self, j: usize, k: usize) -> &ExactMatrix {
        &self.mats[&(j.min(k), j.max(k))]
    }

    /// The constant `c_jk` with `ρ(F_jk) = c_jk·U_{x_jk}`.
    pub fn coefficient(&self, j: usize, k: usize) -> Result<ExactScalar> {
        let m = self.get(j, k)?;
        let x = heisenberg::pair_to_point(self.g, j, k)?;
        linalg::proportional(&m, &u_x(&x))
            .ok_or_else(|| Error::Invalid(format!("ρ(F_{j}{k}) is not a multiple of U_x")))
    }

    /// Evaluates a bracket expansion through the representation.
    pub fn apply_terms(&self, terms: &[BracketTerm]) -> ExactMatrix {
        let d = self.dim();
        terms.iter().fold(ExactMatrix::zeros(d, d), |acc, &(c, a, b)| {
            &acc + &self.pair(a, b).scale(&ExactScalar::from_int(c))
        })
    }

    /// Ordered quadruples violating the homomorphism property.
    pub fn bracket_failures(&self) -> Vec<(usize, usize, usize, usize)> {
        let n = self.n();
        let quads: Vec<(usize, usize, usize, usize)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .flat_map(|(i, j)| {
                (1..=n)
                    .flat_map(move |k| (1..=n).map(move |l| (i, j, k, l)))
                    .filter(|q| q.2 != q.3)
            })
            .collect();
        par::map(&quads, |&(i, j, k, l)| {
            let a = self.get(i, j).expect("valid pair");
            let b = self.get(k, l).expect("valid pair");
            let lhs = a.commutator(&b).expect("square");
            (lhs != self.apply_terms(&bracket(i, j, k, l))).then_some((i, j, k, l))
        })
        .into_iter()
        .flatten()
        .collect()
    }
}
