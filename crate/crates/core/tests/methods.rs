use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use plr_core::chromatic::{distribution_via_blocks, f_m_polynomial};
use plr_core::classes::{isot_count, mc_count};
use plr_core::oracle::{all_plrs, class_sizes, count_all};
use plr_core::perm::factorial;
use plr_core::sade::sade_count;
use plr_core::{apply_paratopism, Isotopism, Paratopism, Plr, Shape, WeightDistribution};

fn shape() -> impl Strategy<Value = Shape> {
    (1usize..=4, 1usize..=4, 1usize..=4).prop_map(|(r, s, n)| Shape::new(r, s, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_counting_methods_agree(shape in shape()) {
        let brute = count_all(shape);
        prop_assert_eq!(&sade_count(shape).unwrap(), &brute);
        prop_assert_eq!(&distribution_via_blocks(shape).unwrap(), &brute);
    }

    #[test]
    fn polynomial_matches_counts(m in 0usize..=6, r in 1usize..=3, s in 1usize..=3, n in 1usize..=4) {
        let shape = Shape::new(r, s, n).unwrap();
        let count = count_all(shape).get(m);
        let value = f_m_polynomial(m).eval_i64(r as i64, s as i64, n as i64);
        prop_assert_eq!(value, BigInt::from(count * factorial(m)));
    }
}

/// Orbits of the given group on every rectangle of `shape`, by weight,
/// with one representative each.
fn orbits(shape: Shape, group: &[Paratopism]) -> (WeightDistribution, Vec<Plr>) {
    let mut seen = BTreeSet::new();
    let mut dist = WeightDistribution::zeros(shape);
    let mut reps = Vec::new();
    for l in all_plrs(shape) {
        if seen.contains(l.cells()) {
            continue;
        }
        for g in group {
            seen.insert(apply_paratopism(g, &l).unwrap().cells().to_vec());
        }
        dist.add_at(l.weight(), &1u32.into());
        reps.push(l);
    }
    (dist, reps)
}

#[test]
fn burnside_counts_match_explicit_orbits() {
    for dims in [[1, 2, 3], [2, 2, 2], [2, 2, 3], [2, 3, 3], [3, 3, 2], [3, 3, 3]] {
        let shape = Shape::from_dims(dims).unwrap();
        let isotopisms: Vec<Paratopism> = Isotopism::all(shape).into_iter().map(Paratopism::isotopism).collect();
        let (isot, reps) = orbits(shape, &isotopisms);
        assert_eq!(isot_count(shape).unwrap(), isot, "{shape}");
        let (main, _) = orbits(shape, &Paratopism::all(shape));
        assert_eq!(mc_count(shape).unwrap(), main, "{shape}");

        let covered: BigUint = reps.iter().map(|l| class_sizes(l).unwrap().isotopism_class).sum();
        assert_eq!(covered, count_all(shape).total(), "{shape}");
    }
}
