mod common;

use common::{partitions, Harmonics};
use thetalift::hctheta::{kv_dual, kv_lift, KvSign};

#[test]
fn oracle_rank_one() {
    let h = Harmonics::new(1, 1);
    assert_eq!(h.minimal_types(&[0], 1, 4), Some((0, vec![vec![0]])));
    assert_eq!(h.minimal_types(&[3], 1, 4), Some((3, vec![vec![3]])));
    // The determinant of O(2) needs two columns.
    assert_eq!(h.minimal_types(&[0], -1, 4), None);
    let h2 = Harmonics::new(1, 2);
    assert_eq!(h2.minimal_types(&[0], -1, 4), Some((2, vec![vec![1, 1]])));
}

#[test]
fn oracle_sees_no_weight_beyond_the_columns() {
    // so(4)-weight (1, 1) needs two independent columns.
    assert_eq!(Harmonics::new(2, 1).minimal_types(&[1, 1], 1, 4), None);
    assert_eq!(Harmonics::new(2, 2).minimal_types(&[1, 1], 1, 4), Some((2, vec![vec![1, 1]])));
}

#[test]
fn small_sweep_matches_formula() {
    for (n, m) in [(1, 1), (1, 2), (2, 1)] {
        let h = Harmonics::new(n, m);
        for nu in partitions(n, 2) {
            let nu_u: Vec<i64> = nu.clone();
            let lift = kv_lift(&nu_u, KvSign::Plus, m).unwrap();
            let found = h.minimal_types(&nu, 1, 4);
            match lift {
                Some(l) => {
                    let (_, types) = found.expect("present");
                    let dual = kv_dual(&nu, KvSign::Plus, m).unwrap().unwrap();
                    assert_eq!(types, vec![dual.iter().map(|x| x - n as i64).collect::<Vec<_>>()]);
                    assert_eq!(l, dual.iter().rev().map(|x| -x).collect::<Vec<_>>());
                }
                None => assert!(found.is_none(), "n={n} m={m} nu={nu:?}"),
            }
        }
    }
}
