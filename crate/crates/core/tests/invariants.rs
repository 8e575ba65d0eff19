use symprop_core::fano::{verify_lemma_with, LemmaOptions};
use symprop_core::packing::{choose_delta, mi_upper_bound};
use symprop_core::pml::pml_plugin_estimator;
use symprop_core::risk::{
    adaptive_risk, assumption1_distribution, exact_a0_exit_probability, exact_loss, exact_risk, mc_risk, Empirical,
    IdentityOracle,
};
use symprop_core::{
    fano_bound, sorted_l1, Budgets, DiscreteDistribution, Estimator, FanoInputs, FiniteExperiment, PackingInstance,
    PmlSolver, SymmetricProperty,
};

fn properties() -> Vec<SymmetricProperty> {
    vec![
        SymmetricProperty::entropy(),
        SymmetricProperty::power_sum(2.0).unwrap(),
        SymmetricProperty::support_size(),
        SymmetricProperty::distance_to_uniformity(3).unwrap(),
    ]
}

#[test]
fn exact_and_monte_carlo_risk_agree() {
    let p = DiscreteDistribution::new(vec![0.15, 0.25, 0.6]).unwrap();
    let pml = pml_plugin_estimator(PmlSolver::Exact { resolution: 60 });
    let estimators: [&dyn Estimator; 2] = [&Empirical, &pml];
    for (e, est) in estimators.iter().enumerate() {
        for (j, f) in properties().iter().enumerate() {
            for n in [3u64, 7] {
                let exact = exact_risk(*est, f, &p, n).unwrap();
                let mc = mc_risk(*est, f, &p, n, 4000, 31 + (e * 10 + j) as u64).unwrap();
                assert!(
                    (exact.value - mc.value).abs() <= 4.0 * mc.stderr + 1e-12,
                    "{} n={n}: exact {} vs mc {} ± {}",
                    f.name(),
                    exact.value,
                    mc.value,
                    mc.stderr
                );
            }
        }
    }
}

#[test]
fn risk_is_nonnegative_and_zero_for_the_oracle() {
    let p = DiscreteDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    for f in properties() {
        assert_eq!(exact_risk(&IdentityOracle, &f, &p, 5).unwrap().value, 0.0);
        assert!(exact_risk(&Empirical, &f, &p, 5).unwrap().value >= 0.0);
    }
}

#[test]
fn empirical_risk_decreases_with_n() {
    let p = DiscreteDistribution::new(vec![0.05, 0.15, 0.3, 0.5]).unwrap();
    let f = SymmetricProperty::entropy();
    let risks: Vec<_> = [50u64, 200, 800, 3200].iter().map(|&n| mc_risk(&Empirical, &f, &p, n, 2000, n).unwrap()).collect();
    for w in risks.windows(2) {
        let slack = 4.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        assert!(w[1].value <= w[0].value + slack, "{} then {}", w[0].value, w[1].value);
    }
}

// Only estimators that see the data alone; the identity oracle has p_min = 1
// and zero risk, so the chain cannot hold for it.
#[test]
fn adaptive_risk_dominates_the_fano_bound() {
    for (n, k) in [(1_000u64, 4usize), (10_000, 8)] {
        let delta = choose_delta(n, k, 0.1).unwrap().delta;
        let packing = PackingInstance::new(k, delta).unwrap();
        let m = packing.m();
        let exp = FiniteExperiment::from_packing(&packing, m, n).unwrap();
        let opts = LemmaOptions { mc_reps: 1000, ..LemmaOptions::default() };
        let lemma = verify_lemma_with(&exp, &Empirical, 5, &opts).unwrap();
        assert!(lemma.mi_is_bound);
        assert!(lemma.p_min >= 0.5, "measured p_min {}", lemma.p_min);

        let delta_sep = k as f64 * delta / 5.0;
        let mi = mi_upper_bound(n, k, delta);
        let bound = fano_bound(&FanoInputs::new(delta_sep, lemma.p_min, m, mi).unwrap()).unwrap();
        let risk = adaptive_risk(&Empirical, &packing, n, 1000, 5).unwrap();
        assert!(risk.worst.value >= bound - 3.0 * risk.worst.stderr, "{} < {bound}", risk.worst.value);
        assert!(risk.worst.value >= risk.average - 1e-15);
    }
}

#[test]
fn a0_exit_probability_obeys_the_assumption_bound() {
    let budgets = Budgets::default();
    for (k, n) in [(4usize, 4u64), (4, 6), (6, 4)] {
        let packing = PackingInstance::new(k, 0.5 / (4.0 * k as f64 * (k as f64 - 1.0))).unwrap();
        let scale = (k as f64 / n as f64).sqrt();
        let mut a = 0.0f64;
        for i in 0..=packing.m() {
            let p = assumption1_distribution(&packing, i).unwrap();
            let r = exact_loss(&Empirical, &p, n, &budgets, |q| sorted_l1(q, &p)).unwrap();
            a = a.max(r.value / scale);
        }
        let bound = 40.0 * a * ((k as f64).powi(3) / n as f64).sqrt();
        for i in 0..=packing.m() {
            let exit = exact_a0_exit_probability(&Empirical, &packing, i, n, &budgets).unwrap();
            assert!((-1e-12..=1.0 + 1e-12).contains(&exit), "{exit}");
            assert!(exit <= bound, "k={k} n={n} i={i}: {exit} > {bound}");
        }
    }
}

#[test]
fn packing_information_chain_is_ordered() {
    for k in [4usize, 6, 8] {
        let delta = 0.8 / (4.0 * k as f64 * (k as f64 - 1.0));
        let packing = PackingInstance::new(k, delta).unwrap();
        let (kl, chi2, cap) = packing.information_chain(100).unwrap();
        assert!(kl <= chi2 + 1e-15 && chi2 <= cap + 1e-15, "{kl} {chi2} {cap}");
    }
}
