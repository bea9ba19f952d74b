//! The finite Heisenberg group `G_g`, its Schrödinger representation on
//! `V = ℂ^{2^g}`, subset coordinates on `F₂^{2g}` and theta transvections.
//!
//! Bit vectors in `F₂^g` are stored as `u32` masks with the first coordinate
//! in the most significant of the `g` bits, so that the numeric value of a
//! mask is its position in the lexicographic order of `F₂^g`. The delta basis
//! `X_σ` of `V` uses the same convention.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::ExactScalar;

/// Largest supported genus; masks are `u32` and matrices are `2^g` square.
pub const MAX_GENUS: usize = 12;

fn parity(mask: u32) -> u32 {
    mask.count_ones() & 1
}

/// Standard basis vector `e_i` (1-based) of `F₂^g`.
pub fn unit(g: usize, i: usize) -> u32 {
    debug_assert!((1..=g).contains(&i));
    1 << (g - i)
}

/// A point `x = (ξ, ξ')` of `F₂^g × F₂^g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    g: usize,
    xi: u32,
    xi_prime: u32,
}

impl PhasePoint {
    pub fn new(g: usize, xi: u32, xi_prime: u32) -> Result<Self> {
        if g == 0 || g > MAX_GENUS {
            return Err(Error::Invalid(format!("genus {g} outside 1..={MAX_GENUS}")));
        }
        let mask = (1u32 << g) - 1;
        if xi & !mask != 0 || xi_prime & !mask != 0 {
            return Err(Error::Invalid(format!("bit vector wider than g = {g}")));
        }
        Ok(Self { g, xi, xi_prime })
    }

    /// Builds a point from explicit bit lists, first coordinate first.
    pub fn from_bits(xi: &[u8], xi_prime: &[u8]) -> Result<Self> {
        if xi.len() != xi_prime.len() {
            return Err(Error::GenusMismatch(xi.len(), xi_prime.len()));
        }
        let pack = |b: &[u8]| b.iter().fold(0u32, |acc, &x| (acc << 1) | (x & 1) as u32);
        Self::new(xi.len(), pack(xi), pack(xi_prime))
    }

    pub fn zero(g: usize) -> Self {
        Self { g, xi: 0, xi_prime: 0 }
    }

    /// Point number `idx` in `0..4^g`, with `ξ` in the high bits.
    pub fn from_index(g: usize, idx: u32) -> Self {
        let mask = (1u32 << g) - 1;
        Self {
            g,
            xi: (idx >> g) & mask,
            xi_prime: idx & mask,
        }
    }

    pub fn index(&self) -> u32 {
        (self.xi << self.g) | self.xi_prime
    }

    /// All `4^g` points in index order.
    pub fn all(g: usize) -> impl Iterator<Item = PhasePoint> {
        (0..1u32 << (2 * g)).map(move |i| PhasePoint::from_index(g, i))
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn xi(&self) -> u32 {
        self.xi
    }

    pub fn xi_prime(&self) -> u32 {
        self.xi_prime
    }

    pub fn is_zero(&self) -> bool {
        self.xi == 0 && self.xi_prime == 0
    }

    pub fn bits(&self) -> (Vec<u8>, Vec<u8>) {
        let unpack = |m: u32| (1..=self.g).map(|i| ((m >> (self.g - i)) & 1) as u8).collect();
        (unpack(self.xi), unpack(self.xi_prime))
    }

    pub fn add(&self, other: &PhasePoint) -> Result<PhasePoint> {
        check_genus(self.g, other.g)?;
        Ok(Self {
            g: self.g,
            xi: self.xi ^ other.xi,
            xi_prime: self.xi_prime ^ other.xi_prime,
        })
    }

    /// `ξ·ξ' mod 2`.
    pub fn self_pairing(&self) -> u32 {
        parity(self.xi & self.xi_prime)
    }
}

impl fmt::Debug for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.bits();
        let join = |v: Vec<u8>| v.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
        write!(f, "(({}),({}))", join(a), join(b))
    }
}

fn check_genus(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GenusMismatch(a, b))
    }
}

/// A fourth root of unity `i^k`, stored by its exponent mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn new(exponent: u32) -> Self {
        Self((exponent % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> FourthRoot {
        FourthRoot((4 - self.0) % 4)
    }

    /// `(-1)^bit` as a fourth root.
    pub fn sign(bit: u32) -> FourthRoot {
        FourthRoot(((bit & 1) * 2) as u8)
    }

    pub fn to_scalar(self) -> ExactScalar {
        ExactScalar::i_pow(self.0 as i64)
    }

    pub fn from_scalar(s: &ExactScalar) -> Option<Self> {
        s.fourth_root_exponent().map(FourthRoot)
    }
}

impl Mul for FourthRoot {
    type Output = FourthRoot;

    fn mul(self, other: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + other.0) % 4)
    }
}

/// An element `(t, x)` of `G_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub t: FourthRoot,
    pub point: PhasePoint,
}

impl GroupElement {
    pub fn new(t: FourthRoot, point: PhasePoint) -> Self {
        Self { t, point }
    }

    pub fn identity(g: usize) -> Self {
        Self::new(FourthRoot::ONE, PhasePoint::zero(g))
    }

    /// `(-1)^{ξξ'} t⁻¹` paired with the same point.
    pub fn inverse(&self) -> Self {
        Self::new(
            self.t.inv() * FourthRoot::sign(self.point.self_pairing()),
            self.point,
        )
    }

    pub fn t_scalar(&self) -> ExactScalar {
        self.t.to_scalar()
    }
}

/// Group law `(t,x)(s,y) = (ts(−1)^{ξη'}, x+y)`.
pub fn multiply(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    let point = a.point.add(&b.point)?;
    let sign = FourthRoot::sign(parity(a.point.xi & b.point.xi_prime));
    Ok(GroupElement::new(a.t * b.t * sign, point))
}

/// Symplectic form `E(x,y) = ξη' + ηξ' mod 2`.
pub fn symplectic(x: &PhasePoint, y: &PhasePoint) -> Result<u32> {
    check_genus(x.g, y.g)?;
    Ok(parity(x.xi & y.xi_prime) ^ parity(y.xi & x.xi_prime))
}

/// An even-cardinality subset of `B = {1, …, 2g+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetLabel {
    g: usize,
    members: Vec<usize>,
}

impl SubsetLabel {
    pub fn new(g: usize, members: &[usize]) -> Result<Self> {
        let n = 2 * g + 2;
        let mut m = members.to_vec();
        m.sort_unstable();
        for w in m.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedIndex(w[0]));
            }
        }
        if let Some(&bad) = m.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::IndexOutOfRange { index: bad, max: n });
        }
        if m.len() % 2 == 1 {
            return Err(Error::OddSubset(m));
        }
        Ok(Self { g, members: m })
    }

    pub fn from_mask(g: usize, mask: u32) -> Result<Self> {
        let members: Vec<usize> = (1..=2 * g + 2).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        Self::new(g, &members)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Bit `i-1` set iff `i` is a member.
    pub fn mask(&self) -> u32 {
        self.members.iter().fold(0, |acc, i| acc | 1 << (i - 1))
    }

    pub fn complement(&self) -> SubsetLabel {
        let full = (1u32 << (2 * self.g + 2)) - 1;
        SubsetLabel::from_mask(self.g, full & !self.mask()).expect("complement of an even subset is even")
    }

    pub fn symmetric_difference(&self, other: &SubsetLabel) -> Result<SubsetLabel> {
        check_genus(self.g, other.g)?;
        SubsetLabel::from_mask(self.g, self.mask() ^ other.mask())
    }

    pub fn intersection_size(&self, other: &SubsetLabel) -> usize {
        (self.mask() & other.mask()).count_ones() as usize
    }
}

/// Image of the consecutive pair `{j, j+1}`, `1 ≤ j ≤ 2g+1`.
fn pair_point(g: usize, j: usize) -> PhasePoint {
    let mut p = PhasePoint::zero(g);
    if j % 2 == 1 {
        let i = j.div_ceil(2);
        p.xi_prime = if i <= g { unit(g, i) } else { (1 << g) - 1 };
    } else {
        let i = j / 2;
        p.xi = unit(g, i);
        if i < g {
            p.xi |= unit(g, i + 1);
        }
    }
    p
}

/// The fixed isomorphism from even subsets of `B` (modulo complement) to `F₂^{2g}`.
///
/// Generators: `{2i−1, 2i} ↦ (0, e_i)` and `{2i, …, 2g+1} ↦ (e_i, 0)`. A subset
/// `{a₁ < b₁ < a₂ < b₂ < …}` is the sum of the intervals `{a, a+1, …, b}`, and
/// each interval is a sum of consecutive pairs.
pub fn subset_to_point(s: &SubsetLabel) -> PhasePoint {
    let g = s.g;
    let mut p = PhasePoint::zero(g);
    for pair in s.members.chunks(2) {
        for j in pair[0]..pair[1] {
            let q = pair_point(g, j);
            p.xi ^= q.xi;
            p.xi_prime ^= q.xi_prime;
        }
    }
    p
}

/// Convenience: `x_{ij}` for a two-element subset.
pub fn pair_to_point(g: usize, i: usize, j: usize) -> Result<PhasePoint> {
    if i == j {
        return Err(Error::RepeatedIndex(i));
    }
    Ok(subset_to_point(&SubsetLabel::new(g, &[i, j])?))
}

/// Deterministic order-two lift: `1` when `ξξ' = 0`, `i` otherwise.
pub fn involutive_lift(x: &PhasePoint) -> FourthRoot {
    if x.self_pairing() == 0 {
        FourthRoot::ONE
    } else {
        FourthRoot::I
    }
}

/// Matrix of `U(t, x)` on the delta basis: `X_σ ↦ t(−1)^{(σ+ξ)ξ'} X_{σ+ξ}`.
pub fn schrodinger_matrix(e: &GroupElement) -> ExactMatrix {
    let g = e.point.g;
    let n = 1usize << g;
    let mut m = ExactMatrix::zeros(n, n);
    for sigma in 0..n as u32 {
        let target = sigma ^ e.point.xi;
        let coef = e.t * FourthRoot::sign(parity(target & e.point.xi_prime));
        m.set(target as usize, sigma as usize, coef.to_scalar());
    }
    m
}

/// `U_x := U(t_x, x)` with the involutive lift.
pub fn u_x(x: &PhasePoint) -> ExactMatrix {
    schrodinger_matrix(&GroupElement::new(involutive_lift(x), *x))
}

/// `T̃_x = U_x + iI`.
pub fn transvection_matrix(x: &PhasePoint) -> Result<ExactMatrix> {
    if x.is_zero() {
        return Err(Error::ZeroTransvection);
    }
    let n = 1usize << x.g;
    Ok(&u_x(x) + &ExactMatrix::scalar(n, &ExactScalar::i()))
}

/// `T_x(y) = y + E(y,x)·x`.
pub fn symplectic_transvection(x: &PhasePoint, y: &PhasePoint) -> Result<PhasePoint> {
    if x.is_zero() {
        return Err(Error::ZeroTransvection);
    }
    if symplectic(y, x)? == 1 {
        y.add(x)
    } else {
        Ok(*y)
    }
}

/// Recovers `(c, x)` with `m = c·U_x`, if `m` is a scalar multiple of some `U_x`.
pub fn identify_in_image(m: &ExactMatrix) -> Option<(ExactScalar, PhasePoint)> {
    let n = m.rows();
    if !m.is_square() || !n.is_power_of_two() || n < 2 {
        return None;
    }
    let g = n.trailing_zeros() as usize;
    // U_x moves X_0 to a multiple of X_ξ, which pins ξ; ξ' then follows from
    // the sign pattern. Try all candidates with that ξ.
    let xi = (0..n).find(|&r| !m.get(r, 0).is_zero())? as u32;
    (0..1u32 << g).find_map(|xp| {
        let x = PhasePoint::new(g, xi, xp).ok()?;
        crate::linalg::proportional(m, &u_x(&x)).map(|c| (c, x))
    })
}

/// Whether the scalar is a fourth root of unity.
pub fn is_fourth_root(s: &ExactScalar) -> bool {
    !s.is_zero() && (s.pow(4)).is_one()
}
