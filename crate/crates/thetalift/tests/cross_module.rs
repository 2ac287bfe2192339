use std::collections::BTreeMap;
use thetalift::hctheta::{enumerate_x, theta_character_relation, theta_lift, FourthRoot, SGroupElement};
use thetalift::padicsym::{coefficient_chain, FiniteCharacterModel};
use thetalift::rootcomb::{CaseSpec, EpsPsi, QuatSign};

/// Packet character values at s = (−1), keyed by |μ|.
fn values(spec: &CaseSpec) -> BTreeMap<String, FourthRoot> {
    let s = SGroupElement::new(vec![-1]);
    let mut out = BTreeMap::new();
    for param in enumerate_x(spec, 4).unwrap() {
        if theta_lift(&param).unwrap().is_none() {
            continue;
        }
        let pair = theta_character_relation(&param, &s).unwrap().unwrap();
        assert!(pair.is_conjugate());
        let key = param.mu[0].to_string().trim_start_matches('-').to_string();
        assert!(out.insert(key, pair.w_value).is_none());
    }
    out
}

// With m = n = 1 the two packet members sit on the two forms of the same
// quaternionic space; their character ratio is the coefficient ratio.
#[test]
fn rank_one_members_differ_by_the_coefficient_ratio() {
    for (n, eta) in [(5, 1), (8, 1), (12, 5)] {
        let model = FiniteCharacterModel::oriented(n, eta, &[]).unwrap();
        let (c_plus, c_minus) = coefficient_chain(&model, 1).unwrap();
        assert_eq!(c_plus * c_minus, -1);
    }
    for e_h in [QuatSign::Split, QuatSign::Hamilton] {
        for eps in [EpsPsi::PlusI, EpsPsi::MinusI] {
            let a = values(&CaseSpec::new(e_h, 1, 1, 0, 1, eps).unwrap());
            let b = values(&CaseSpec::new(e_h, 1, 1, 1, 0, eps).unwrap());
            let shared: Vec<_> = a.keys().filter(|k| b.contains_key(*k)).collect();
            assert!(shared.len() >= 4);
            for k in shared {
                assert_eq!(a[k].mul(b[k].conj()), FourthRoot::MINUS_ONE, "{e_h:?} {eps:?} |mu| = {k}");
            }
        }
    }
}
