use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;

use reidemeister_core::intlat::det;
use reidemeister_core::reid::TwistedClasses;
use reidemeister_core::reps::{
    character_table, intertwiner, l2_twisted_character, rep_matrix, twisted_character,
    ComparisonMethod, RepError, Representation, RootSum, StandardReps, TorusAction, TorusPoint,
};
use reidemeister_core::{Elem, Group};

fn elem(v: i64, n: i64) -> impl Strategy<Value = Elem> {
    (-v..=v, -v..=v, -n..=n).prop_map(|(m, k, n)| Elem::new(m, k, n))
}

fn standard() -> (Group, StandardReps) {
    let g = Group::standard();
    let reps = StandardReps::new(&g, &g.phi().unwrap()).unwrap();
    (g, reps)
}

/// A denominator-3 orbit, to exercise non-real phases. No such orbit is
/// μ-invariant, so it carries no intertwiner.
fn third_orbit() -> Representation {
    let g = Group::standard();
    let action = TorusAction::new(&g, &g.phi().unwrap()).unwrap();
    Representation::new(action.alpha_orbit(TorusPoint::from_grid(1, 0, 3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn multiplicativity(a in elem(10, 8), b in elem(10, 8)) {
        let (g, reps) = standard();
        for rep in [&reps.trivial, &reps.three_dim, &third_orbit()] {
            let ab = rep_matrix(rep, &g.mul(&a, &b));
            prop_assert_eq!(ab, &rep_matrix(rep, &a) * &rep_matrix(rep, &b));
        }
    }

    #[test]
    fn intertwining(h in elem(10, 8)) {
        let (g, reps) = standard();
        let phi = g.phi().unwrap();
        for rep in [&reps.trivial, &reps.three_dim] {
            let s = intertwiner(rep).unwrap();
            let lhs = &rep_matrix(rep, &phi.apply(&h)) * &s;
            prop_assert_eq!(&lhs, &(&s * &rep_matrix(rep, &h)));
            let conj = &(&s * &rep_matrix(rep, &h)) * &s.inverse();
            prop_assert_eq!(rep_matrix(rep, &phi.apply(&h)), conj);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn characters_are_class_functions(c in elem(8, 6), h in elem(8, 6)) {
        let (g, reps) = standard();
        let phi = g.phi().unwrap();
        let moved = g.twisted_conj(&c, &h, &phi);
        prop_assert_eq!(reps.characters(&moved), reps.characters(&h));
    }
}

#[test]
fn rho2_is_three_periodic() {
    let (_, reps) = standard();
    for n in -6i64..=5 {
        for m in -4..=4 {
            for k in -4..=4 {
                let parity = match n.rem_euclid(3) {
                    0 => m + k,
                    1 => m,
                    _ => k,
                };
                let expected = if parity % 2 == 0 { 1 } else { -1 };
                let h = Elem::new(m, k, n);
                assert_eq!(reps.integer_characters(&h)[2], expected, "{h}");
                assert_eq!(
                    reps.characters(&h),
                    reps.characters(&Elem::new(m, k, n + 6))
                );
            }
        }
    }
}

#[test]
fn twisted_lattice_determinant_is_two() {
    let g = Group::standard();
    let phi = g.phi().unwrap();
    for n in -12..=12 {
        assert_eq!(det(&(&*g.power(n) - phi.matrix())), 2.into(), "n = {n}");
    }
}

#[test]
fn l2_character_matches_half_sum_on_the_box() {
    let (g, reps) = standard();
    let phi = g.phi().unwrap();
    let classes = TwistedClasses::new(&g, &phi).unwrap();
    let ids = classes.classes();
    for n in -6..=6 {
        for m in -8..=8 {
            for k in -8..=8 {
                let h = Elem::new(m, k, n);
                let l2 = l2_twisted_character(&g, &phi, &h).unwrap() as i64;
                let [rho1, _, rho2, _] = reps.integer_characters(&h);
                assert_eq!(2 * l2, rho1 + rho2, "{h}");
                // indicator of B₁ ∪ B₃
                let class = classes.index_of(&classes.class_id(&h)).unwrap();
                assert_eq!(l2 == 1, class == 0 || class == 2, "{h} in {}", ids[class]);
            }
        }
    }
}

#[test]
fn table_is_independent_of_representatives() {
    let (g, reps) = standard();
    let phi = g.phi().unwrap();
    let table = character_table(&g, &phi).unwrap();
    let classes = TwistedClasses::new(&g, &phi).unwrap();
    for (col, rep) in table.representatives.iter().enumerate() {
        for c in [
            Elem::new(3, -2, 1),
            Elem::new(-5, 7, -2),
            Elem::new(0, 1, 3),
        ] {
            let other = g.twisted_conj(&c, rep, &phi);
            assert_eq!(classes.class_id(&other), table.classes[col]);
            let values = reps.integer_characters(&other);
            for (value, row) in values.iter().zip(&table.entries) {
                assert_eq!(*value, row[col]);
            }
        }
    }
}

#[test]
fn invariant_orbits_at_denominator_three() {
    let g = Group::standard();
    let phi = g.phi().unwrap();
    let action = TorusAction::new(&g, &phi).unwrap();
    let grid: Vec<TorusPoint> = (0..3)
        .flat_map(|i| (0..3).map(move |j| TorusPoint::from_grid(i, j, 3)))
        .collect();

    // brute force: close each grid point under A, keep the sets closed under M
    let a = g.matrix();
    let m = phi.matrix();
    let mut expected: BTreeSet<Vec<TorusPoint>> = BTreeSet::new();
    for &p in &grid {
        let mut orbit = BTreeSet::from([p]);
        let mut q = p.transform(a);
        while q != p {
            orbit.insert(q);
            q = q.transform(a);
        }
        if orbit.iter().all(|x| orbit.contains(&x.transform(m))) {
            expected.insert(orbit.into_iter().collect());
        }
    }
    let found: BTreeSet<Vec<TorusPoint>> = action
        .find_invariant_orbits(3)
        .into_iter()
        .map(|o| o.points)
        .collect();
    assert_eq!(found, expected);
    assert_eq!(found.len(), 1, "only the origin survives at denominator 3");

    // an A-orbit at denominator 3 that μ does not preserve, if one exists
    for &p in &grid {
        let orbit = action.alpha_orbit(p);
        if !found.contains(&orbit.points) {
            let rep = Representation::new(orbit);
            assert_eq!(intertwiner(&rep), Err(RepError::NotInvariant));
            assert!(twisted_character(&rep, &Elem::identity()).is_err());
        }
    }
}

#[test]
fn alpha_orbit_of_a_third() {
    let g = Group::standard();
    let action = TorusAction::new(&g, &g.phi().unwrap()).unwrap();
    let p = TorusPoint::new(Ratio::new(1, 3), Ratio::new(0, 1));
    let orbit = action.alpha_orbit(p);
    let mut q = p.transform(g.matrix());
    let mut size = 1;
    while q != p {
        q = q.transform(g.matrix());
        size += 1;
    }
    assert_eq!(orbit.len(), size);
    assert!(orbit.index_of(&p).is_some());
}

#[test]
fn root_sums_compare_exactly_or_numerically() {
    let half = RootSum::root(Ratio::new(1, 2));
    assert_eq!(
        half.value_eq(&RootSum::integer(-1)),
        (true, ComparisonMethod::Exact)
    );
    // 1 + ω + ω² = 0 for a primitive cube root ω
    let sum = &(&RootSum::integer(1) + &RootSum::root(Ratio::new(1, 3)))
        + &RootSum::root(Ratio::new(2, 3));
    assert_eq!(
        sum.value_eq(&RootSum::zero()),
        (true, ComparisonMethod::Float)
    );
}
