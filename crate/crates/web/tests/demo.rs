use rankcat_web::demo::*;
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

const WLP: DetectorSpec = DetectorSpec {
    algo: "wlp",
    weight: "linear",
    mode: "async",
    sticky_ties: true,
};

#[test]
fn curve_rows_and_crossing() {
    let v = parse(expectation_curve(20, 12));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0]["intra"], 7.0);
    assert_eq!(rows[0]["inter"], 20.0);
    assert_eq!(v["crossing"], 9);
    assert!(expectation_curve(5, 6).is_err());
}

#[test]
fn planted_cliques_are_recovered() {
    for algo in ["wlp", "lp", "cnm"] {
        let spec = DetectorSpec { algo, ..WLP };
        let v = parse(sbm_detection(4, 6, 1.0, 0.0, &spec, 3));
        assert_eq!(v["nmi"], 1.0, "{algo}");
        assert_eq!(v["communities"], 4);
        assert_eq!(v["edges"].as_array().unwrap().len(), 4 * 15);
        assert_eq!(v["found"].as_array().unwrap().len(), 24);
    }
}

#[test]
fn separated_rankings_are_recovered() {
    let v = parse(ranking_detection(2, 20, 0, 200, None, &WLP, 1));
    assert_eq!(v["nmi"], 1.0);
    assert_eq!(v["alpha"], 1.0);
    assert_eq!(v["beta"], 0.0);
    assert!((v["epsilon"].as_f64().unwrap() - (1.0 - 41.0 / 120.0)).abs() < 1e-12);
}

#[test]
fn bad_inputs_are_reported() {
    let bad = DetectorSpec {
        algo: "louvain",
        ..WLP
    };
    assert!(sbm_detection(2, 3, 0.5, 0.1, &bad, 0)
        .unwrap_err()
        .contains("louvain"));
    let bad = DetectorSpec {
        weight: "cubic",
        ..WLP
    };
    assert!(sbm_detection(2, 3, 0.5, 0.1, &bad, 0).is_err());
    assert!(ranking_detection(2, 5, 9, 10, None, &WLP, 0).is_err());
    assert!(ranking_detection(2, 5, 0, 10, Some(1.5), &WLP, 0).is_err());
    assert!(sbm_detection(100, 100, 0.5, 0.1, &WLP, 0).is_err());
}

#[test]
fn same_seed_same_output() {
    let a = sbm_detection(5, 5, 0.7, 0.05, &WLP, 9).unwrap();
    assert_eq!(a, sbm_detection(5, 5, 0.7, 0.05, &WLP, 9).unwrap());
}
