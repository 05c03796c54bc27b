//! Replays the committed round-by-round trace of the bridged-triangles
//! instance.

use std::collections::BTreeMap;

use serde_json::Value;
use tricomm::lsf::Lsf;
use tricomm::{eval, LsfConfig};

use super::bridged_triangles;
use super::oracle::Dense;

const FIXTURE: &str = include_str!("../fixtures/bridged_trace.json");
const TOLERANCE: f64 = 1e-12;

/// Panics on the first divergence from the fixture.
pub fn replay() {
    let fixture: Value = serde_json::from_str(FIXTURE).unwrap();
    let g = bridged_triangles();
    let config = LsfConfig::default();
    assert_eq!(config.alpha, fixture["alpha"].as_f64().unwrap());
    let mut lsf = Lsf::new(&g, config).unwrap();

    let rounds = fixture["rounds"].as_array().unwrap();
    for expected in rounds {
        assert!(lsf.should_continue());
        let trace = lsf.step();
        let r = expected["round"].as_u64().unwrap() as usize;
        assert_eq!(trace.round, r);
        assert_eq!(
            trace.changed_count as u64,
            expected["changed_count"].as_u64().unwrap(),
            "round {r}"
        );
        let q = trace.modularity.unwrap();
        assert!(
            (q - expected["modularity"].as_f64().unwrap()).abs() < TOLERANCE,
            "round {r}"
        );
        assert!(
            (trace.objective - expected["objective"].as_f64().unwrap()).abs() < TOLERANCE,
            "round {r}"
        );

        let state = lsf.state();
        let primary: Vec<u64> = state.primary.iter().map(|&k| k as u64).collect();
        let want: Vec<u64> = expected["primary"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect();
        assert_eq!(primary, want, "round {r}");

        for (v, ledger) in state.ledger.iter().enumerate() {
            let want: BTreeMap<u32, f64> = expected["ledger"][v]
                .as_object()
                .unwrap()
                .iter()
                .map(|(k, x)| (k.parse().unwrap(), x.as_f64().unwrap()))
                .collect();
            assert_eq!(
                ledger.keys().collect::<Vec<_>>(),
                want.keys().collect::<Vec<_>>(),
                "round {r} node {v}"
            );
            for (k, x) in ledger {
                assert!(
                    (x - want[k]).abs() < TOLERANCE,
                    "round {r} node {v} label {k}: {x} vs {}",
                    want[k]
                );
            }
        }
    }
    assert!(!lsf.should_continue());

    let communities = lsf.output();
    let want: Vec<Vec<u32>> = serde_json::from_value(fixture["communities"].clone()).unwrap();
    assert_eq!(communities.clone().into_inner(), want);

    let q = eval::modularity(&g, &communities).unwrap();
    let brute = Dense::new(&g).modularity(&communities);
    assert!((q - brute).abs() < 1e-12);
    assert!((q - 5.0 / 14.0).abs() < 1e-12);
}
