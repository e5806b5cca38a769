use baire_density::cantorsets::{BitWord, CantorPoint, CylTree};
use baire_density::density::real::gap_window;
use baire_density::density::{check_dispersion_cantor, check_dispersion_r, replay_cantor, replay_real, Certificate, Horizons};
use baire_density::oracle::limsup_truncated;
use baire_density::phi::{block_avoidance_set, pi03_presentation, RealPresentation};
use baire_density::realsets::{cell_window, closed_avoidance_set, normalize, Cell, IntervalUnion, OpenInterval, Tri};
use baire_density::sequence::SequenceDescriptor;
use baire_density::{Bound, Rational};
use proptest::prelude::*;

const DEN: i64 = 16;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn finite_union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((-2 * DEN..2 * DEN, 1i64..DEN), 0..4).prop_map(|ivs| {
        normalize(ivs.into_iter().map(|(a, w)| OpenInterval::finite(r(a, DEN), r(a + w, DEN))).collect()).unwrap()
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-64i64..64, 1i64..33).prop_map(|(p, q)| r(p, q))
}

fn word(max: usize) -> impl Strategy<Value = BitWord> {
    prop::collection::vec(0u8..2, 0..=max).prop_map(BitWord::from_bits)
}

fn cantor_point() -> impl Strategy<Value = CantorPoint> {
    (word(3), prop::collection::vec(0u8..2, 1..=3))
        .prop_map(|(pre, period)| CantorPoint::new(pre, BitWord::from_bits(period)).unwrap())
}

fn clopen() -> impl Strategy<Value = CylTree> {
    (0u64..256).prop_map(|mask| {
        let chosen: Vec<BitWord> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| BitWord::from_index(i, 3)).collect();
        CylTree::from_antichain(&chosen).unwrap()
    })
}

fn small() -> Horizons {
    Horizons { n_max: 2, k_max: 6, l_max: 40, ..Horizons::default() }
}

/// `(U − x) ∩ (a, b) = ∅`, straight from the endpoints.
fn avoids(u: &IntervalUnion, x: &Rational, a: &Rational, b: &Rational) -> bool {
    u.intervals().iter().all(|iv| {
        let lo = iv.lo.finite().map(|v| v - x);
        let hi = iv.hi.finite().map(|v| v - x);
        lo.is_some_and(|lo| lo >= *b) || hi.is_some_and(|hi| hi <= *a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn translation_is_invertible(u in finite_union(), x in rational()) {
        prop_assert_eq!(u.translate(&x).translate(&-&x), u);
    }

    #[test]
    fn translation_moves_points(u in finite_union(), x in rational(), t in rational()) {
        prop_assert_eq!(u.translate(&x).contains(&t), u.contains(&(&t + &x)));
    }

    #[test]
    fn complement_kernel_is_an_involution_on_regular_sets(u in finite_union()) {
        let k = u.complement_kernel().unwrap();
        prop_assert_eq!(k.complement_kernel().unwrap().complement_kernel().unwrap(), k.clone());
        prop_assert_eq!(k.complement_kernel().unwrap(), u.regular_open_kernel());
    }

    #[test]
    fn occupancy_matches_window_queries(u in finite_union(), l in 1u64..12, m in 1u64..9) {
        let grid = u.grid_occupancy(l, m);
        for c in -(m as i64)..m as i64 {
            let meets = u.intersects(&cell_window(l, m, c)) == Tri::Yes;
            prop_assert_eq!(grid.cell(c) == Cell::Occupied, meets, "cell {}", c);
        }
    }

    #[test]
    fn avoidance_set_matches_brute_force(u in finite_union(), a in -DEN..DEN, w in 1i64..DEN, xs in prop::collection::vec(-96i64..96, 8)) {
        let (lo, hi) = (r(a, DEN), r(a + w, DEN));
        let e = closed_avoidance_set(&u, &OpenInterval::finite(lo.clone(), hi.clone())).unwrap();
        let mut probes: Vec<Rational> = xs.into_iter().map(|p| r(p, 32)).collect();
        for iv in u.intervals() {
            for end in [&iv.lo, &iv.hi].into_iter().filter_map(Bound::finite) {
                probes.push(end - &lo);
                probes.push(end - &hi);
            }
        }
        for x in probes {
            prop_assert_eq!(e.contains(&x), avoids(&u, &x, &lo, &hi), "x = {}", x);
        }
    }

    #[test]
    fn block_set_is_the_union_over_cells(u in finite_union(), n in 1u32..3, k in 1u32..5, dl in 1u32..6, i in -2i64..2) {
        let l = k + dl;
        let block = block_avoidance_set(&u, n, k, l, i).unwrap();
        let mut union = closed_avoidance_set(&u, &gap_window(n, k, l, i, 1)).unwrap();
        for j in 2..=k {
            union = union.union(&closed_avoidance_set(&u, &gap_window(n, k, l, i, j)).unwrap());
        }
        prop_assert_eq!(block, union);
    }

    #[test]
    fn layers_grow_when_k_doubles(u in finite_union()) {
        let h = Horizons { n_max: 2, k_max: 8, l_max: 24, ..Horizons::default() };
        let p = pi03_presentation(&RealPresentation::new(u), &h).unwrap();
        for n in 1..=2 {
            for k in 1..=4 {
                let (a, b) = (p.layer(n, k).unwrap(), p.layer(n, 2 * k).unwrap());
                prop_assert!(a.is_subset(b), "C({},{}) not inside C({},{})", n, k, n, 2 * k);
            }
        }
    }

    #[test]
    fn real_certificates_replay(u in finite_union(), x in rational()) {
        let v = check_dispersion_r(&u, &x, &small()).unwrap();
        let cert = Certificate::new("r", x.to_string(), &small(), &v);
        if !cert.verdict.starts_with("inconclusive") {
            prop_assert!(replay_real(&cert, &u).is_ok(), "{:?}", replay_real(&cert, &u));
        }
        let back: baire_density::density::certificate::RealCertificate =
            serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn limsup_tails_shrink(u in finite_union(), k in 2u32..12) {
        let approx = limsup_truncated(&u, &SequenceDescriptor::Identity, k, k).unwrap();
        for pair in approx.tails.windows(2) {
            prop_assert!(pair[1].is_subset(&pair[0]).unwrap());
        }
        prop_assert!(approx.intersection.is_subset(approx.tails.last().unwrap()).unwrap());
    }

    #[test]
    fn antichains_round_trip(t in clopen()) {
        let words = t.covered_antichain().unwrap();
        prop_assert_eq!(CylTree::from_antichain(&words).unwrap(), t);
    }

    #[test]
    fn cantor_translation_is_an_involution(t in clopen(), x in cantor_point(), y in cantor_point()) {
        let moved = t.translate(&x);
        prop_assert_eq!(moved.translate(&x), t.clone());
        prop_assert_eq!(moved.contains(&y), t.contains(&y.xor(&x)));
    }

    #[test]
    fn exterior_is_idempotent_up_to_kernel(t in clopen()) {
        prop_assert_eq!(t.exterior().exterior(), t.regular_open_kernel());
        prop_assert_eq!(t.exterior().exterior().exterior(), t.exterior());
    }

    #[test]
    fn cantor_certificates_replay(t in clopen(), x in cantor_point()) {
        let h = small();
        let v = check_dispersion_cantor(&t, &x, &h).unwrap();
        prop_assert!(v.is_exact());
        prop_assert_eq!(v.is_verified(), !t.closure_contains(&x));
        let cert = Certificate::new("cantor", x.to_string(), &h, &v);
        prop_assert!(replay_cantor(&cert, &t).is_ok());
    }
}
