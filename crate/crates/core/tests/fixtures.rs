use fennec::clearing::cds_clear;
use fennec::fixtures::{default_fixture, make_fixture, parse_params, profile, verify_fixture, Check, NAMES};
use fennec::game::{social_welfare, UtilityMode};
use fennec::model::{validate_network, RawNetwork};
use fennec::money::{int, one, ratio, Money};
use fennec::verify::{verify_clearing, verify_payments};
use fennec::Error;
use std::collections::BTreeMap;

fn with(pairs: &[&str]) -> BTreeMap<String, Money> {
    parse_params(pairs.iter().copied()).unwrap()
}

fn assert_all_pass(name: &str, params: &[&str]) {
    let fx = make_fixture(name, &with(params)).unwrap();
    let outcomes = verify_fixture(&fx).unwrap();
    assert!(!outcomes.is_empty());
    for o in outcomes {
        assert!(o.pass, "{name} {params:?}: {} -> {}", o.what, o.detail);
    }
}

#[test]
fn every_fixture_passes_at_defaults() {
    for name in NAMES {
        assert_all_pass(name, &[]);
    }
}

#[test]
fn parameterized_fixtures_pass_at_other_values() {
    let cases: &[(&str, &[&str])] = &[
        ("thm4-no-ne", &["M=100"]),
        ("thm4-no-ne", &["M=2000"]),
        ("thm5-prop", &["M=100"]),
        ("thm5-prop", &["M=3/2"]),
        ("thm5-path", &["n=4", "M=100"]),
        ("thm5-path", &["n=7", "M=5/2"]),
        ("thm6-zero-costs", &["alpha=1/3", "M=10"]),
        ("thm7-beta", &["beta=1/2", "M=100"]),
        ("thm7-beta", &["beta=1/3", "M=100"]),
        ("thm7-alpha", &["alpha=1/2", "M=100"]),
        ("thm7-alpha", &["alpha=1", "M=10"]),
        ("thm8-negative", &["M=100"]),
        ("thm9-poa", &["M=100"]),
        ("thm10-beta", &["beta=1/3", "alpha=1/5"]),
        ("thm10-beta", &["beta=9/10"]),
        ("thm10-alpha-or-beta1", &["beta=0", "alpha=1"]),
        ("thm10-alpha-or-beta1", &["beta=0", "alpha=1/3", "M=10"]),
        ("thm10-alpha-or-beta1", &["beta=1", "alpha=1/7", "M=7"]),
        ("thm17-superstrong", &["eps=1/3"]),
        ("footnote-cycle", &["l=5/2"]),
    ];
    for (name, params) in cases {
        assert_all_pass(name, params);
    }
}

#[test]
fn fixture_networks_survive_validation() {
    for name in NAMES {
        let fx = default_fixture(name).unwrap();
        let raw = RawNetwork::from_json(&fx.network.to_raw().to_json()).unwrap();
        assert_eq!(validate_network(&raw).unwrap(), fx.network, "{name}");
    }
}

#[test]
fn listed_payments_pass_independent_verification() {
    for name in NAMES {
        let fx = default_fixture(name).unwrap();
        for e in &fx.expectations {
            if let Check::Payments { profile, rows } = &e.check {
                let res = cds_clear(&fx.network, profile).unwrap();
                assert_eq!(&res.payments, rows);
                let report = verify_clearing(&fx.network, profile, &res);
                assert!(report.ok(), "{name}: {}: {:?}", e.what, report.violations);
            }
        }
    }
}

#[test]
fn unknown_names_and_bad_params_are_rejected() {
    assert!(matches!(default_fixture("thm99"), Err(Error::UnknownFixture(_))));
    let bad: &[(&str, &[&str])] = &[
        ("thm7-beta", &["beta=1"]),
        ("thm7-beta", &["beta=0"]),
        ("thm10-beta", &["beta=3/2"]),
        ("thm4-no-ne", &["M=78"]),
        ("thm5-path", &["n=3"]),
        ("thm5-path", &["n=9/2"]),
        ("thm17-superstrong", &["eps=1/2"]),
        ("thm10-alpha-or-beta1", &["beta=1/2"]),
        ("thm10-alpha-or-beta1", &["beta=1", "alpha=1"]),
        ("thm10-alpha-or-beta1", &["alpha=0"]),
        ("footnote-cycle", &["l=0"]),
        ("example1", &["M=3"]),
    ];
    for (name, params) in bad {
        let r = make_fixture(name, &with(params));
        assert!(matches!(r, Err(Error::ParamOutOfRange { .. })), "{name} {params:?}");
    }
}

#[test]
fn no_equilibrium_epsilon_is_derived_from_m() {
    let fx = make_fixture("thm4-no-ne", &with(&["M=600"])).unwrap();
    assert_eq!(fx.param("eps"), &ratio(1, 101));
    let cells = fx
        .expectations
        .iter()
        .filter(|e| matches!(e.check, Check::Utilities { .. }))
        .count();
    assert_eq!(cells, 27);
}

/// Swapping v2↔v3, v4↔v5 and v6↔v7 maps the instance onto itself, so the
/// table must be invariant under the induced map on profiles and utilities.
#[test]
fn no_equilibrium_table_is_mirror_symmetric() {
    let fx = default_fixture("thm4-no-ne").unwrap();
    let net = &fx.network;
    let swap = |i: usize| match i {
        1 => 2,
        2 => 1,
        3 => 4,
        4 => 3,
        5 => 6,
        6 => 5,
        other => other,
    };
    let mut cells = BTreeMap::new();
    for e in &fx.expectations {
        if let Check::Utilities { profile, values, .. } = &e.check {
            let u: Vec<Money> = values.iter().map(|(_, v)| v.clone()).collect();
            cells.insert(profile.clone(), u);
        }
    }
    assert_eq!(cells.len(), 27);
    for (p, u) in &cells {
        let mut strategies = vec![p.strategies[0].clone(), p.strategies[2].clone(), p.strategies[1].clone()];
        for s in strategies.iter_mut() {
            *s = fennec::Strategy::new(s.classes().iter().map(|c| c.iter().map(|&j| swap(j)).collect()).collect());
        }
        let mut image = p.clone();
        image.strategies[0] = strategies[0].clone();
        image.strategies[1] = strategies[1].clone();
        image.strategies[2] = strategies[2].clone();
        let mirrored = &cells[&image];
        assert_eq!(mirrored, &vec![u[0].clone(), u[2].clone(), u[1].clone()], "{}", p.label(net));
    }
}

/// v1 gains by leaving (v6,v7) at s2 = (v1|v4), s3 = (v1,v5) exactly when
/// 4 + 6ε < 9/2 − ε, i.e. ε < 1/14, i.e. M > 78.
#[test]
fn equilibria_appear_at_the_range_boundary() {
    let fx = make_fixture("thm4-no-ne", &with(&["M=79"])).unwrap();
    assert!(verify_fixture(&fx).unwrap().iter().all(|o| o.pass));
    let eps = ratio(6, 84);
    assert_eq!(eps, ratio(1, 14));
    let stay = (int(4) + int(6) * &eps) / (one() - &eps);
    let leave = (ratio(9, 2) - &eps) / (one() - &eps);
    assert_eq!(stay, leave);
}

/// Closed form for the proportional profile: v1 keeps `u = 1 + 2β³/(M+2β−2β³)`
/// and pays `βu`, all of which stays inside the network, and the v3-v4 cycle
/// clears in full.
#[test]
fn inflow_cost_optimum_is_the_proportional_profile() {
    for (b, m) in [(ratio(1, 2), int(600)), (ratio(1, 3), int(100))] {
        let params: BTreeMap<String, Money> = [("beta".to_string(), b.clone()), ("M".to_string(), m.clone())].into();
        let fx = make_fixture("thm7-beta", &params).unwrap();
        let b3 = &b * &b * &b;
        let u = one() + int(2) * &b3 / (&m + int(2) * &b - int(2) * &b3);
        let oracle = (one() + &b) * u + int(2) * &m + one();
        let got = social_welfare(&fx.network, &profile(&fx.network, "v1:v2,v3"), UtilityMode::TotalAssets).unwrap();
        assert_eq!(got, oracle);
        assert!(oracle > int(2) * &m + int(2) + &b);
    }
}

/// The payments printed for s2 = (v4|v3) satisfy the clearing condition but
/// are dominated by the vector in which v3 stays exactly solvent.
#[test]
fn equity_zero_welfare_listed_vector_is_a_smaller_fixed_point() {
    let b = ratio(1, 2);
    let fx = default_fixture("thm10-beta").unwrap();
    let net = &fx.network;
    let prof = profile(net, "v2:v4|v3");
    let d = &b * &b + &b + one();
    let printed = fennec::fixtures::matrix(
        net,
        &[
            ("v1", "v2", int(3)),
            ("v2", "v4", (one() + &b) / (&b * &d)),
            ("v3", "v2", &b * (one() + &b) / &d),
            ("v4", "v3", (one() + &b) / &d),
        ],
    );
    let rec = |p: &Vec<Vec<Money>>| -> Vec<Money> {
        let owed = [int(3), int(8), one(), int(4)];
        (0..4)
            .map(|i| {
                let paid: Money = p[i].iter().sum();
                if paid < owed[i] { paid / &owed[i] } else { one() }
            })
            .collect()
    };
    assert!(verify_payments(net, &prof, &printed, &rec(&printed), true).ok());
    let res = cds_clear(net, &prof).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!(res.payments[i][j] >= printed[i][j]);
        }
    }
    assert_ne!(res.payments, printed);
    assert_eq!(res.equities(net).iter().sum::<Money>(), Money::from_integer(0.into()));
}

#[test]
fn expectations_sidecar_lists_every_check() {
    for name in NAMES {
        let fx = default_fixture(name).unwrap();
        let v = fx.expectations_json();
        assert_eq!(v["fixture"], *name);
        assert_eq!(v["expectations"].as_array().unwrap().len(), fx.expectations.len());
        for e in v["expectations"].as_array().unwrap() {
            assert!(e["kind"].is_string() && e["what"].is_string());
        }
    }
}
