use coexist::experiments::SweepRow;
use coexist::format::sig;
use coexist::linalg::{self, HermitianMatrix};
use coexist::metrics;
use coexist::scenario::{DbSpec, Design, InterferenceModel, Scenario, SolverTag};
use coexist::solvers::{self, baseline_disjoint, baseline_orthogonal, solve_joint, solve_papr_naif};
use coexist::Error;
use proptest::prelude::*;

fn scenario() -> impl Strategy<Value = DbSpec> {
    (2usize..=12, 0.0f64..=1.0, -15.0f64..15.0, 10.0f64..30.0, -5.0f64..15.0, 0.0f64..20.0, any::<bool>()).prop_map(
        |(n, beta, inr, scr, rho, snr, incoherent)| {
            let mut spec = DbSpec::reference(n, beta);
            spec.inr_db = inr;
            spec.scr_db = scr;
            spec.rho_min_db = rho;
            spec.snr_comm_db = snr;
            spec.model = if incoherent { InterferenceModel::Incoherent } else { InterferenceModel::Coherent };
            spec
        },
    )
}

fn solved(spec: &DbSpec) -> Option<(Scenario, coexist::DesignOutcome)> {
    let sc = Scenario::from_db(spec).unwrap();
    match solve_joint(&sc) {
        Ok(o) => Some((sc, o)),
        Err(Error::Infeasible { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn db_round_trip(spec in scenario()) {
        let back = Scenario::from_db(&spec).unwrap().to_db();
        prop_assert!((back.inr_db - spec.inr_db).abs() < 1e-12);
        prop_assert!((back.scr_db - spec.scr_db).abs() < 1e-12);
        prop_assert!((back.rho_min_db - spec.rho_min_db).abs() < 1e-12);
        prop_assert!((back.snr_comm_db - spec.snr_comm_db).abs() < 1e-12);
        prop_assert!((back.cum_radar_snr_db - spec.cum_radar_snr_db).abs() < 1e-12);
        prop_assert_eq!(back.n, spec.n);
    }

    #[test]
    fn joint_design_is_feasible_and_beats_baselines(spec in scenario()) {
        let sc = Scenario::from_db(&spec).unwrap();
        let feas = solvers::feasibility_joint(&sc).unwrap();
        match solve_joint(&sc) {
            Err(Error::Infeasible { rho_max, .. }) => {
                prop_assert!(!feas.feasible);
                prop_assert!((rho_max - feas.rho_max).abs() <= 1e-12 * rho_max.max(1.0));
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
            Ok(o) => {
                prop_assert!(feas.feasible);
                prop_assert!(o.feasible);
                prop_assert!(o.sinr >= sc.rho_min * (1.0 - 1e-9));
                prop_assert!(o.epsilon_star <= sc.radar_energy() * (1.0 + 1e-9));
                prop_assert!(o.design.rx.trace() <= sc.comm_energy() * (1.0 + 1e-9));
                prop_assert!(o.r1 <= o.r0 + 1e-12);
                // Interference never helps; nothing beats the white codebook on R0.
                prop_assert!(o.r0 <= metrics::rate0(&sc, &HermitianMatrix::scaled_identity(sc.n, sc.p_c)).unwrap() + 1e-12);
                for b in [baseline_disjoint(&sc), baseline_orthogonal(&sc)].into_iter().flatten() {
                    if b.feasible {
                        prop_assert!(o.cr >= b.cr - 1e-9, "{:?} {} vs {}", b.solver, b.cr, o.cr);
                    }
                }
            }
        }
    }

    #[test]
    fn interference_models_agree_at_the_optimum(spec in scenario()) {
        let mut coh = spec.clone();
        coh.model = InterferenceModel::Coherent;
        let mut inc = spec;
        inc.model = InterferenceModel::Incoherent;
        if let (Some((_, a)), Some((_, b))) = (solved(&coh), solved(&inc)) {
            prop_assert!((a.cr - b.cr).abs() <= 1e-9 * a.cr.max(1.0));
        }
    }

    #[test]
    fn cr_falls_as_constraints_tighten(spec in scenario(), step in 0.1f64..3.0) {
        let mut tighter = spec.clone();
        tighter.rho_min_db += step;
        if let (Some((_, a)), Some((_, b))) = (solved(&spec), solved(&tighter)) {
            prop_assert!(b.cr <= a.cr + 1e-9);
        }
        let mut heavier = spec.clone();
        heavier.beta = (spec.beta + 0.1).min(1.0);
        heavier.alpha = heavier.beta;
        if let (Some((_, a)), Some((_, b))) = (solved(&spec), solved(&heavier)) {
            prop_assert!(b.cr <= a.cr + 1e-9);
        }
    }

    #[test]
    fn rescaling_leaves_rates_unchanged(spec in scenario(), k in 0.05f64..20.0) {
        let Some((sc, o)) = solved(&spec) else { return Ok(()) };
        let mut big = sc.clone();
        big.var_v *= k;
        big.p_c *= k;
        big.var_f *= k;
        big.var_g /= k;
        let o2 = solve_joint(&big).unwrap();
        prop_assert!((o.cr - o2.cr).abs() <= 1e-9, "{} vs {}", o.cr, o2.cr);
        prop_assert!((o.sinr - o2.sinr).abs() <= 1e-9 * o.sinr);
    }

    #[test]
    fn naif_papr_design_respects_its_cap(spec in scenario(), frac in 0.0f64..=1.0) {
        let mut spec = spec;
        spec.model = InterferenceModel::Incoherent;
        let sc = Scenario::from_db(&spec).unwrap();
        let delta = 1.0 + frac * (sc.n as f64 - 1.0);
        let sc = sc.with_papr(delta);
        match (solve_papr_naif(&sc), solve_joint(&sc)) {
            (Ok(p), Ok(j)) => {
                prop_assert!(metrics::papr(&p.design.s).unwrap() <= delta * (1.0 + 1e-9));
                prop_assert!(p.cr <= j.cr + 1e-9);
                prop_assert!(p.sinr >= sc.rho_min * (1.0 - 1e-9));
            }
            (Err(Error::Infeasible { .. }), _) | (_, Err(Error::Infeasible { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn kl_pair_is_nonnegative_and_increasing(a in 0.0f64..1e3, b in 0.0f64..1e3) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (k10, k01) = metrics::kl_divergences(lo).unwrap();
        let (h10, h01) = metrics::kl_divergences(hi).unwrap();
        prop_assert!(k10 >= 0.0 && k01 >= 0.0);
        prop_assert!(h10 >= k10 - 1e-12 && h01 >= k01 - 1e-12);
    }

    #[test]
    fn sweep_rows_round_trip_through_text(spec in scenario(), axis in -50.0f64..50.0) {
        let Some((_, o)) = solved(&spec) else { return Ok(()) };
        let row = SweepRow { axis, solver: SolverTag::Joint, outcome: Some(o.clone()) };
        let fields = row.record();
        prop_assert_eq!(fields.len(), 9);
        let nums: Vec<f64> = fields.iter().skip(3).map(|f| f.parse().unwrap()).collect();
        for (x, back) in [o.r0, o.r1, o.cr_alpha, o.sinr, o.gamma_n_star, o.epsilon_star].iter().zip(&nums) {
            prop_assert!((x - back).abs() <= 5e-12 * x.abs().max(1e-300));
        }
        for f in fields.iter().skip(3) {
            let x: f64 = f.parse().unwrap();
            prop_assert_eq!(&sig(x), f);
        }
    }
}

#[test]
fn evaluation_is_invariant_to_a_common_unitary() {
    // Rotating R_x and s together preserves SINR and both rates.
    let sc = Scenario::from_db(&DbSpec::reference(4, 0.5)).unwrap();
    let o = solve_joint(&sc).unwrap();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    let u = coexist::random::unitary(&mut rng, 4);
    let rx = o.design.rx.congruence(&u);
    let s = u.mul_vec(&o.design.s);
    let d = Design::new(rx, s);
    assert!((metrics::sinr(&sc, &d).unwrap() - o.sinr).abs() < 1e-9);
    assert!((metrics::rate0(&sc, &d.rx).unwrap() - o.r0).abs() < 1e-12);
    assert!((metrics::rate1_coherent(&sc, &d).unwrap() - o.r1).abs() < 1e-12);
    assert!((linalg::norm_sqr(&d.s) - o.epsilon_star).abs() < 1e-9);
}
