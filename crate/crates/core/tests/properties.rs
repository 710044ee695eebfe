mod common;

use common::*;
use fennec::money::one;
use proptest::prelude::*;

const EQUITY: Shape = Shape {
    max_n: 5,
    max_out: 2,
    negative_externals: true,
};

const CORE: Shape = Shape {
    max_n: 6,
    max_out: 3,
    negative_externals: false,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn equity_profiles_are_all_nash(net in network(EQUITY)) {
        equity_all_nash(&net).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn equity_profiles_resist_coalitions(net in network(EQUITY)) {
        equity_all_strong(&net).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn equity_welfare_with_full_inflow_recovery(net in network(EQUITY)) {
        let net = without_negative_externals(&with_costs(&net, net.costs.alpha.clone(), one()));
        beta_one_welfare(&net).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn clearing_core_properties((net, p) in network_and_profile(CORE)) {
        clearing_core(&net, &p).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn clearing_core_properties_without_costs((net, p) in network_and_profile(Shape { negative_externals: true, ..CORE })) {
        let net = with_costs(&net, one(), one());
        clearing_core(&net, &p).map_err(TestCaseError::fail)?;
    }
}
