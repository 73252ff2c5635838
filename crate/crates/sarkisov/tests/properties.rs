use proptest::prelude::*;

use sarkisov::schema::{parse_family, serialize_family};

fn toy(weights: &[i64], degree: i64, drop: &[u32]) -> String {
    let names = ["x", "y", "z", "t", "s"];
    let vars: Vec<String> = names[..weights.len()].iter().map(|v| format!("\"{v}\"")).collect();
    let mut absent = String::new();
    for (i, &e) in drop.iter().enumerate().take(weights.len()) {
        if e > 0 {
            absent.push_str(&format!("{{\"{}\": {e}}},", names[i]));
        }
    }
    let absent = absent.trim_end_matches(',');
    format!(
        r#"{{"id": "toy", "ambient_weights": {weights:?}, "variables": [{}], "degrees": [{degree}],
            "equations": [{{"name": "f", "complete": true, "absent_patterns": [{absent}]}}],
            "point": {{"variable": "x", "r": 1, "a": 1}}}}"#,
        vars.join(",")
    )
}

proptest! {
    #[test]
    fn family_files_round_trip(
        mut ws in prop::collection::vec(1i64..=4, 3..=5),
        d in 2i64..=8,
        drop in prop::collection::vec(0u32..=2, 5),
    ) {
        ws.sort_unstable();
        let text = toy(&ws, d, &drop);
        let spec = parse_family(&text).unwrap();
        let again = parse_family(&serialize_family(&spec)).unwrap();
        prop_assert_eq!(&again, &spec);
        let eqs = spec.equations().unwrap();
        let grading: Vec<_> = ws.iter().map(|&w| sarkisov_core::cones::Weight::new(w, 0)).collect();
        if !eqs[0].is_zero() {
            prop_assert_eq!(eqs[0].bidegree(&grading).unwrap().a, d);
        }
    }
}
