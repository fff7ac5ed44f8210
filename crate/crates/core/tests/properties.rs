use proptest::prelude::*;
use seqgroves::oracle::{first_inconsistency, ConsistencyConstraint};
use seqgroves::{argsmax, kth_highest, Mechanism, StrategyProfile, Value};

fn value() -> impl Strategy<Value = Value> {
    (0i128..40, 1i128..5).prop_map(|(p, q)| Value::new(p, q).unwrap())
}

fn bids(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Value>> {
    n.prop_flat_map(|n| proptest::collection::vec(value(), n))
}

proptest! {
    #[test]
    fn bc_aggregate_tax_identity(b in bids(3..=6)) {
        let n = b.len();
        let m = Mechanism::bailey_cavallo(n).unwrap();
        let total: Value = m.taxes(&b).unwrap().iter().sum();
        let nv = Value::integer(n as i128);
        let gap = kth_highest(&b, 2).unwrap() - kth_highest(&b, 3).unwrap();
        prop_assert_eq!(total, -(Value::from(2) / nv) * gap);
    }

    #[test]
    fn vickrey_utilities_sum_to_welfare(b in bids(2..=6)) {
        let m = Mechanism::vickrey(b.len()).unwrap();
        let out = m.run(&b, &b).unwrap();
        let sum: Value = out.utilities.iter().sum();
        prop_assert_eq!(sum, out.social_welfare);
        prop_assert_eq!(out.winner, argsmax(&b).unwrap());
    }

    #[test]
    fn redistribution_ignores_own_bid(b in bids(3..=5), other in value(), pick in 0usize..5) {
        let i = pick % b.len() + 1;
        let m = Mechanism::bailey_cavallo(b.len()).unwrap();
        let mut alt = b.clone();
        alt[i - 1] = other;
        prop_assert_eq!(m.redistribution(&b, i).unwrap(), m.redistribution(&alt, i).unwrap());
    }

    #[test]
    fn optimal_profiles_are_consistent(theta in bids(3..=6)) {
        let n = theta.len();
        for p in [StrategyProfile::truth(n), StrategyProfile::vickrey_opt(n), StrategyProfile::bc_opt(n)] {
            let a = p.unwrap().continue_from(&theta, Vec::new()).unwrap();
            prop_assert_eq!(first_inconsistency(&theta, &a), None);
            prop_assert_eq!(argsmax(&a).unwrap(), argsmax(&theta).unwrap());
        }
    }

    #[test]
    fn vickrey_opt_never_lowers_welfare(theta in bids(2..=6)) {
        let n = theta.len();
        let m = Mechanism::vickrey(n).unwrap();
        let a = StrategyProfile::vickrey_opt(n).unwrap().continue_from(&theta, Vec::new()).unwrap();
        prop_assert!(m.run(&a, &theta).unwrap().social_welfare >= m.run(&theta, &theta).unwrap().social_welfare);
    }

    #[test]
    fn bc_opt_never_lowers_welfare(theta in bids(3..=6)) {
        let n = theta.len();
        let m = Mechanism::bailey_cavallo(n).unwrap();
        let a = StrategyProfile::bc_opt(n).unwrap().continue_from(&theta, Vec::new()).unwrap();
        prop_assert!(m.run(&a, &theta).unwrap().social_welfare >= m.run(&theta, &theta).unwrap().social_welfare);
    }

    #[test]
    fn constraint_always_allows_truth(prefix in proptest::collection::vec(value(), 0..4), own in value(), extra in 0usize..3) {
        let n = prefix.len() + 1 + extra;
        prop_assume!(n >= 2);
        prop_assert!(ConsistencyConstraint::new(&prefix, own, n).allows(own));
    }
}
