use blocksearch::accuracy::{
    basic_closed_big_delta, basic_closed_delta, closed_form_range, feasible_positions, locate_position, step_accuracy,
    step_update, trace_basic, PositionChoice,
};
use blocksearch::sequences::{check_identity, f_closed_form, f_seq, g_closed_form, g_seq, Identity};
use blocksearch::{run_search, Error, PolicySpec, QuadNum, Rational, SearchState, Stop};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn forced_position_is_the_only_feasible_one(i in 1u64..7, num in 500_001i64..1_000_000) {
        let big = Rational::one();
        let delta = rat(num, 1_000_000);
        match locate_position(&delta, &big, i) {
            Ok(ell) => prop_assert_eq!(feasible_positions(&delta, &big, i), vec![ell]),
            Err(Error::Boundary { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn step_update_rebuilds_the_partition(i in 1u64..7, num in 500_001i64..1_000_000, scale in 1i64..50) {
        let big = rat(scale, 7);
        let delta = rat(num, 1_000_000) * &big;
        let Ok(ell) = locate_position(&delta, &big, i) else { return Ok(()) };
        let upd = match step_update(&delta, &big, ell, i) {
            Ok(u) => u,
            Err(Error::Boundary { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let beta = &upd.big_delta - &upd.alpha;
        prop_assert!(beta > Rational::zero());
        // i+1 short gaps and i long gaps fill the old interval
        prop_assert_eq!(&upd.alpha * rat(i as i64 + 1, 1) + &beta * rat(i as i64, 1), big.clone());
        // the retained point sits at the dividing point `ell`, at distance delta from the far end
        let x = &upd.alpha * rat(ell.div_ceil(2) as i64, 1) + &beta * rat((ell / 2) as i64, 1);
        let far = if x.clone() * rat(2, 1) > big { x } else { &big - &x };
        prop_assert_eq!(far, delta);
        // the next accuracy is the farther end of the new interval seen from the retained point
        let other = &upd.big_delta - &upd.alpha;
        prop_assert_eq!(upd.delta, if upd.alpha > other { upd.alpha.clone() } else { other });
    }

    #[test]
    fn closed_forms_follow_the_chained_trace(i in 2u64..4, t in 1i64..100_000) {
        let s = f_seq(i, 4).unwrap();
        let g = g_seq(i, 3).unwrap();
        let lo = Rational::new(s.at(1).clone(), s.at(3).clone());
        let hi = Rational::new(g.at(0).clone(), g.at(2).clone());
        let a = QuadNum::rational(&lo + (&hi - &lo) * rat(t, 100_000));
        let range = match closed_form_range(&a, i, 8) {
            Ok(r) => r,
            Err(Error::Boundary { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assume!(range.valid_through >= 1);
        let tr = match trace_basic(&a, i, range.valid_through, &PositionChoice::Adversarial) {
            Ok(tr) => tr,
            Err(Error::Boundary { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for m in 1..=range.valid_through {
            prop_assert_eq!(tr.delta(m), &basic_closed_delta(&a, i, m).unwrap());
            prop_assert_eq!(tr.big_delta(m), &basic_closed_big_delta(&a, i, m).unwrap());
        }
    }

    #[test]
    fn sequences_match_closed_forms(i in 1u64..12, n in 0i64..30) {
        let f = f_seq(i, 31).unwrap();
        let g = g_seq(i, 30).unwrap();
        prop_assert_eq!(f_closed_form(i, n).unwrap(), QuadNum::from_bigint(f.at(n + 1).clone()));
        prop_assert_eq!(g_closed_form(i, n).unwrap(), QuadNum::from_bigint(g.at(n).clone()));
    }

    #[test]
    fn identities_hold_at_random_points(i in 1u64..12, n in 2i64..30, m in 1i64..30) {
        prop_assume!(m <= n);
        for id in Identity::ALL {
            let rep = check_identity(id, i, n..=n, m..=m).unwrap();
            prop_assert!(rep.all_hold, "{:?} at i={} n={} m={}", id, i, n, m);
        }
    }
}

fn policies() -> Vec<(PolicySpec, usize)> {
    vec![
        (PolicySpec::Golden, 10),
        (PolicySpec::Fibonacci { horizon: 9 }, 9),
        (PolicySpec::OddBlockW { i: 2 }, 6),
        (PolicySpec::OddBlockH { i: 2 }, 6),
        (PolicySpec::OddBlockG { i: 2, horizon: 5 }, 5),
        (PolicySpec::EvenBlock { i: 2 }, 6),
        (PolicySpec::TwoTestSpecial, 8),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn maximizer_stays_inside_and_within_the_bound(peak in 0.0005f64..0.9995, which in 0usize..7) {
        let (policy, n) = policies().swap_remove(which);
        let out = run_search(|x| -(x - peak).abs(), &policy, 0.0, 1.0, Stop::Steps(n)).unwrap();
        let (a, b) = out.interval;
        prop_assert!(a - 1e-12 <= peak && peak <= b + 1e-12, "{} lost the peak {} in [{}, {}]", policy, peak, a, b);
        prop_assert!((out.estimate - peak).abs() <= out.bound + 1e-12);
        let exact = step_accuracy(&policy, n).unwrap().to_f64();
        prop_assert!(out.bound <= exact + 1e-12, "{} bound {} above {}", policy, out.bound, exact);
    }
}

proptest! {
    #[test]
    fn what_if_leaves_the_state_alone(peak in 0.01f64..0.99, steps in 0usize..4) {
        let mut s = SearchState::new(PolicySpec::OddBlockH { i: 2 }, 0.0, 1.0).unwrap();
        for _ in 0..steps {
            let vals: Vec<f64> = s.next_tests().iter().map(|x| -(x - peak).abs()).collect();
            s = s.eliminate(&vals).unwrap();
        }
        let before = s.clone();
        let cells = s.step_points().len();
        let (a, b) = (*s.interval().0, *s.interval().1);
        let mut covered = Vec::new();
        for k in 0..cells {
            let o = s.what_if(k).unwrap();
            prop_assert!(o.a >= a && o.b <= b && o.a < o.b);
            covered.push((o.a, o.b));
        }
        prop_assert_eq!(&s, &before);
        prop_assert!(s.what_if(cells).is_err());
        covered.sort_by(|x, y| x.0.total_cmp(&y.0));
        prop_assert_eq!(covered[0].0, a);
        prop_assert_eq!(covered[cells - 1].1, b);
        for w in covered.windows(2) {
            prop_assert!(w[1].0 <= w[0].1);
        }
    }
}
