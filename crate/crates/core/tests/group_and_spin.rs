use hitchin::heisenberg::{
    multiply, schrodinger_matrix, subset_to_point, symplectic, FourthRoot, GroupElement, PhasePoint, SubsetLabel,
};
use hitchin::linalg::ExactMatrix;
use hitchin::spin::{bracket, clifford_generator, Half, SpinRep};
use hitchin::ExactScalar;
use proptest::prelude::*;

fn element(g: usize) -> impl Strategy<Value = GroupElement> {
    (0u32..4, 0u32..(1 << (2 * g))).prop_map(move |(t, idx)| GroupElement::new(FourthRoot::new(t), PhasePoint::from_index(g, idx)))
}

proptest! {
    #[test]
    fn schrodinger_is_a_homomorphism(a in element(2), b in element(2)) {
        let ab = multiply(&a, &b).unwrap();
        prop_assert_eq!(schrodinger_matrix(&ab), &schrodinger_matrix(&a) * &schrodinger_matrix(&b));
    }

    #[test]
    fn commutator_is_the_symplectic_sign(a in element(3), b in element(3)) {
        // U_a U_b = (−1)^{⟨a,b⟩} U_b U_a
        let ua = schrodinger_matrix(&a);
        let ub = schrodinger_matrix(&b);
        let s = symplectic(&a.point, &b.point).unwrap();
        let sign = ExactScalar::from_int(if s == 0 { 1 } else { -1 });
        prop_assert_eq!(&ua * &ub, (&ub * &ua).scale(&sign));
    }

    #[test]
    fn subset_map_is_additive(a in 0u32..64, b in 0u32..64) {
        let even = |m: u32| if m.count_ones().is_multiple_of(2) { m } else { m ^ 1 };
        let (sa, sb) = (SubsetLabel::from_mask(2, even(a)).unwrap(), SubsetLabel::from_mask(2, even(b)).unwrap());
        let lhs = subset_to_point(&sa.symmetric_difference(&sb).unwrap());
        let rhs = subset_to_point(&sa).add(&subset_to_point(&sb)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn clifford_relations_up_to_genus_three() {
    for g in 1..=3 {
        let n = 2 * g + 2;
        let gens: Vec<ExactMatrix> = (1..=n).map(|k| clifford_generator(g, k).unwrap()).collect();
        let id = ExactMatrix::identity(gens[0].rows());
        for a in 0..n {
            assert_eq!(&gens[a] * &gens[a], id, "g={g} γ{}²", a + 1);
            for b in a + 1..n {
                assert!((&(&gens[a] * &gens[b]) + &(&gens[b] * &gens[a])).is_zero());
            }
        }
    }
}

#[test]
fn spin_generators_square_to_minus_one() {
    for g in [2, 3] {
        let rep = SpinRep::new(g, Half::Plus).unwrap();
        let minus = ExactMatrix::scalar(rep.dim(), &ExactScalar::from_int(-1));
        for (j, k) in rep.pairs() {
            assert_eq!(rep.pair(j, k) * rep.pair(j, k), minus);
        }
        assert!(rep.bracket_failures().is_empty());
    }
}

#[test]
fn bracket_oracle_on_antisymmetric_matrices() {
    // F_ij = 2(E_ij − E_ji) in the defining representation
    let n = 6;
    let f = |i: usize, j: usize| {
        ExactMatrix::from_fn(n, n, |r, c| {
            if (r, c) == (i - 1, j - 1) {
                ExactScalar::from_int(2)
            } else if (r, c) == (j - 1, i - 1) {
                ExactScalar::from_int(-2)
            } else {
                ExactScalar::from_int(0)
            }
        })
    };
    for (i, j, k, l) in [(1, 2, 2, 3), (1, 2, 3, 4), (2, 5, 5, 1), (3, 6, 6, 4), (1, 4, 1, 4)] {
        let rhs = bracket(i, j, k, l).into_iter().fold(ExactMatrix::zeros(n, n), |acc, (c, a, b)| {
            &acc + &f(a, b).scale(&ExactScalar::from_int(c))
        });
        assert_eq!(f(i, j).commutator(&f(k, l)).unwrap(), rhs);
    }
}
