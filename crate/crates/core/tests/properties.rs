mod common;

use common::{random_class, random_quiver, random_ratfunc, random_sd_slope, random_slope, rng};
use osdt::arith::{int, rat, RatFunc};
use osdt::oracle::{BruteForce, Calibration};
use osdt::quiver::Forms;
use osdt::wallcross::{check_composition, coeff_s, coeff_s_sd, wallcross_epsilon, EpsilonTable};
use osdt::{DimVector, Engine, InvariantTable, SelfDualQuiver, SlopeFunction};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn quiver(seed: u64) -> SelfDualQuiver {
    let q = random_quiver(&mut rng(seed), &format!("random-{seed}"));
    q.ensure_calibrated().expect("random quivers calibrate");
    q
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ratfunc_field_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_ratfunc(&mut r), random_ratfunc(&mut r), random_ratfunc(&mut r));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn ratfunc_evaluation_is_a_homomorphism(seed in any::<u64>(), x in 2i64..7) {
        let mut r = rng(seed);
        let (a, b) = (random_ratfunc(&mut r), random_ratfunc(&mut r));
        let x = rat(x, 3);
        if let (Ok(va), Ok(vb)) = (a.eval_at(&x), b.eval_at(&x)) {
            prop_assert_eq!((&a + &b).eval_at(&x).unwrap(), &va + &vb);
            prop_assert_eq!((&a * &b).eval_at(&x).unwrap(), va * vb);
        }
    }

    #[test]
    fn ratfunc_json_round_trip(seed in any::<u64>()) {
        let a = random_ratfunc(&mut rng(seed));
        let s = serde_json::to_string(&a).unwrap();
        let b: RatFunc = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serde_json::to_string(&b).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn form_symmetries(seed in any::<u64>()) {
        let q = quiver(seed);
        let f = q.forms().unwrap();
        let mut r = rng(seed ^ 1);
        let n = q.num_vertices();
        for _ in 0..10 {
            let (a, b) = (random_class(&mut r, n, 3), random_class(&mut r, n, 3));
            prop_assert_eq!(f.a(&a, &b), -f.a(&b, &a));
            prop_assert_eq!(f.a(&q.dual_vector(&b), &q.dual_vector(&a)), f.a(&a, &b));
            for t in q.sd_classes(3) {
                prop_assert_eq!(f.b_doubled(&a, t.as_dim()) % 2, 0);
            }
        }
    }

    #[test]
    fn trivial_slope_gives_component_integrals(seed in any::<u64>()) {
        let q = quiver(seed);
        let e = Engine::new(&q, SlopeFunction::trivial(&q), 3).unwrap();
        prop_assert_eq!(e.semistable_integrals(), e.component_integrals());
        prop_assert_eq!(e.sd_semistable_integrals(), e.sd_component_integrals());
    }

    #[test]
    fn engine_matches_brute_force(seed in any::<u64>()) {
        let q = quiver(seed);
        let slope = random_sd_slope(&mut rng(seed ^ 2), &q);
        let e = Engine::new(&q, slope.clone(), 3).unwrap();
        let bf = BruteForce::new(q.forms().unwrap(), slope);
        for a in DimVector::all_up_to(q.num_vertices(), 3) {
            prop_assert_eq!(&bf.semistable(&a), e.semistable_integral(&a).unwrap());
            prop_assert_eq!(&bf.epsilon(&a), e.epsilon_integral(&a).unwrap());
        }
        for t in q.sd_classes(3) {
            prop_assert_eq!(&bf.sd_semistable(&t), e.sd_semistable_integral(&t).unwrap());
            prop_assert_eq!(&bf.sd_epsilon(&t), e.sd_epsilon_integral(&t).unwrap());
        }
    }

    #[test]
    fn linear_pipeline_without_self_dual_slope(seed in any::<u64>()) {
        let q = quiver(seed);
        let slope = random_slope(&mut rng(seed ^ 3), &q);
        let e = Engine::new(&q, slope.clone(), 3).unwrap();
        let bf = BruteForce::new(q.forms().unwrap(), slope.clone());
        for a in DimVector::all_up_to(q.num_vertices(), 3) {
            prop_assert_eq!(&bf.epsilon(&a), e.epsilon_integral(&a).unwrap());
        }
        prop_assert!(e.no_pole_report().ok());
        if !slope.is_self_dual() {
            prop_assert!(e.sd_epsilons().is_empty());
        }
    }

    #[test]
    fn numeric_wall_crossing(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut r = rng(seed ^ 4);
        let (plus, minus) = (random_sd_slope(&mut r, &q), random_sd_slope(&mut r, &q));
        let ep = Engine::new(&q, plus.clone(), 4).unwrap();
        let em = Engine::new(&q, minus.clone(), 4).unwrap();
        let crossed = wallcross_epsilon(&q.forms().unwrap(), &EpsilonTable::from_engine(&ep), &plus, &minus).unwrap();
        let l = RatFunc::q_minus_q_inv();
        for (a, eps) in &crossed.linear {
            let dt = (eps * &l).at_minus_one().unwrap();
            prop_assert_eq!(dt, em.dt_num(a).unwrap());
        }
        for (t, eps) in &crossed.self_dual {
            prop_assert_eq!(eps.at_minus_one().unwrap(), em.sd_dt_num(t).unwrap());
        }
    }

    #[test]
    fn table_json_is_exact(seed in any::<u64>()) {
        let q = quiver(seed);
        let e = Engine::new(&q, random_sd_slope(&mut rng(seed ^ 5), &q), 3).unwrap();
        let t = e.table().unwrap();
        let s = t.to_json();
        let back = InvariantTable::from_json(&s).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_json(), s);
    }

    #[test]
    fn serial_and_repeated_runs_agree(seed in any::<u64>()) {
        let q = quiver(seed);
        let slope = random_sd_slope(&mut rng(seed ^ 6), &q);
        let a = Engine::new(&q, slope.clone(), 4).unwrap().table().unwrap().to_json();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| Engine::new(&q, slope, 4).unwrap().table().unwrap().to_json());
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn s_composition(mu in proptest::collection::vec(-3i64..=3, 12), d in proptest::collection::vec(1i64..=2, 12), n in 0usize..=4) {
        let parts: Vec<DimVector> = (0..n).map(|i| DimVector::unit(n, i)).collect();
        let slope = |k: usize| {
            SlopeFunction::from_values((0..n).map(|i| rat(mu[3 * k + i % 3] + i as i64, d[3 * k + i % 3])).collect()).unwrap()
        };
        let (t1, t2, t3) = (slope(0), slope(1), slope(2));
        prop_assert!(check_composition(&parts, &t1, &t2, &t3));
        prop_assert!((-1..=1).contains(&coeff_s(&parts, &t1, &t2)));
        prop_assert!((-1..=1).contains(&coeff_s_sd(&parts, &t1, &t2)));
    }
}

#[test]
fn corrupted_twist_creates_a_pole() {
    let q = SelfDualQuiver::point(1);
    let cal = Calibration::new(-1, vec![2]);
    let e = Engine::with_forms(Forms::new(&q, &cal), SlopeFunction::trivial(&q), 2);
    let report = e.no_pole_report();
    assert!(!report.ok());
    let bad: Vec<_> = report.failures().collect();
    assert!(bad.iter().all(|p| p.self_dual && p.class == DimVector::new(vec![2])));
    assert!(e.sd_dt_num(&q.sd_class(&[2]).unwrap()).is_err());
}

#[test]
fn point_sd_motivic_value() {
    let q = SelfDualQuiver::point(1);
    q.ensure_calibrated().unwrap();
    let e = Engine::new(&q, SlopeFunction::trivial(&q), 2).unwrap();
    // q/(2(q² + 1))
    let want = RatFunc::q_pow(1) / (RatFunc::q_pow(2) + RatFunc::one()).scale_by(&int(2));
    assert_eq!(e.sd_dt_mot(&q.sd_class(&[2]).unwrap()).unwrap(), want);
    assert!(e.sd_dt_mot(&q.sd_class(&[1]).unwrap()).unwrap().is_one());
    assert!(e.dt_mot(&DimVector::new(vec![1])).unwrap().is_one());
}

#[test]
fn kronecker_semistable_example() {
    // J_(1,1) for slope (1,−1) is I_(1,1) minus the one product I_(1,0)·I_(0,1)
    // that passes the strict partial-sum condition.
    let q = SelfDualQuiver::a1_tilde(1, 1, 1);
    q.ensure_calibrated().unwrap();
    let slope = SlopeFunction::from_ints(&q, &[1, -1]).unwrap();
    let e = Engine::new(&q, slope, 2).unwrap();
    let f = q.forms().unwrap();
    let (i10, i01) = (DimVector::new(vec![1, 0]), DimVector::new(vec![0, 1]));
    let want = e.component_integral(&DimVector::new(vec![1, 1])).unwrap()
        - (e.component_integral(&i10).unwrap() * e.component_integral(&i01).unwrap()).mul_q_pow(f.a(&i10, &i01));
    assert_eq!(e.semistable_integral(&DimVector::new(vec![1, 1])).unwrap(), &want);
}
