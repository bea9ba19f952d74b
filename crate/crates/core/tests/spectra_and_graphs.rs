use hitchin::spectra::{
    compare_projective, dehn_twist_phases, nonseparating_spectrum, primitive_decomposition, separating_spectrum,
    verlinde_dimension, verlinde_enumerate, PhaseMultiset, TrivalentGraph,
};
use num_rational::Rational64;
use num_traits::Signed;
use proptest::prelude::*;

/// `C(k+3, 3)` by the hockey-stick sum `Σ_{l≤k} C(l+2, 2)`.
fn hockey_stick(k: u64) -> u64 {
    (0..=k).map(|l| (l + 2) * (l + 1) / 2).sum()
}

#[test]
fn totals_are_dim_s_k() {
    for k in 1..=5u32 {
        assert_eq!(nonseparating_spectrum(k).unwrap().total(), hockey_stick(k as u64));
        assert_eq!(separating_spectrum(k).unwrap().total(), hockey_stick(k as u64));
        assert_eq!(verlinde_dimension(k), hockey_stick(k as u64));
    }
}

#[test]
fn primitive_decomposition_dims() {
    for k in 1..=5u32 {
        let dims: Vec<usize> = primitive_decomposition(k).unwrap().iter().map(|p| p.basis.len()).collect();
        let want: Vec<usize> = (0..=k / 2).map(|l| ((k - 2 * l + 1) * (k - 2 * l + 1)) as usize).collect();
        assert_eq!(dims, want);
    }
}

#[test]
fn theta_labels_by_brute_force() {
    // independent count over half-integer labels as rationals
    for k in 0..=6i64 {
        let half = |a: i64| Rational64::new(a, 2);
        let ok = |a: Rational64, b: Rational64, c: Rational64| {
            a + b + c <= Rational64::from(k) && (a - b).abs() <= c && c <= a + b && (a + b + c).is_integer()
        };
        let mut count = 0;
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    if ok(half(a), half(b), half(c)) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(verlinde_enumerate(TrivalentGraph::Theta, k as u32).len(), count);
    }
}

#[test]
fn graph_spectra_versus_monodromy() {
    for k in 1..=5 {
        let theta = dehn_twist_phases(TrivalentGraph::Theta, 1, k).unwrap();
        assert!(compare_projective(&nonseparating_spectrum(k).unwrap(), &theta).is_some());
        let bridge = dehn_twist_phases(TrivalentGraph::Dumbbell, 2, k).unwrap();
        assert_eq!(separating_spectrum(k).unwrap(), bridge);
    }
}

proptest! {
    #[test]
    fn projective_comparison_is_symmetric(
        items in proptest::collection::vec((0i64..12, 1u64..4), 1..6),
        s in 0i64..12,
    ) {
        let a = PhaseMultiset::from_pairs(items.iter().map(|&(n, m)| (Rational64::new(n, 12), m)));
        let b = a.shifted(Rational64::new(s, 12));
        let fwd = compare_projective(&b, &a).unwrap();
        let back = compare_projective(&a, &b).unwrap();
        prop_assert_eq!(b.shifted(-fwd), a.clone());
        prop_assert_eq!(b.shifted(back), a);
    }
}
