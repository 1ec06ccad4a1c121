use cat0_core::complex_core::validate_cat0;
use cat0_core::io::{bundle_json, canonical, canonical_exact, generate, parse_bundle, parse_json, parse_point, Point, Space};
use serde_json::json;

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in ["t5", "fig3", "fig4", "book3", "exponential:0", "exponential:8", "incoming-cycle"] {
        let b = generate(name).unwrap();
        let text = canonical_exact(&bundle_json(&b));
        let back = parse_bundle(&parse_json(&text).unwrap()).unwrap();
        assert_eq!(canonical_exact(&bundle_json(&back)), text, "{name}");
        let (r0, r1) = match (&b.space, &back.space) {
            (Space::Cone(a), Space::Cone(b)) => (a.validate(), b.validate()),
            (Space::Complex(a), Space::Complex(b)) => (validate_cat0(a), validate_cat0(b)),
            _ => panic!("kind changed"),
        };
        assert_eq!(r0, r1, "{name}");
        assert!(r0.ok, "{name}");
        assert_eq!(b.points, back.points);
        assert_eq!(b.source, back.source);
        // The 12-digit form is stable after one pass.
        let short = canonical(&bundle_json(&back));
        let again = parse_bundle(&parse_json(&short).unwrap()).unwrap();
        assert_eq!(canonical(&bundle_json(&again)), short, "{name}");
    }
}

#[test]
fn schema_errors_are_malformed_input() {
    for bad in [
        json!({"kind": "hexagonal"}),
        json!({"kind": "triangulated", "vertices": ["a"], "edges": [], "faces": [], "extra": 1}),
        json!({"kind": "single_vertex", "rays": ["r"], "cones": [{"id": "c", "rays": ["r"], "angle": 1.0}]}),
        json!({"complex": {"kind": "single_vertex", "rays": [], "cones": []}, "junk": []}),
    ] {
        let e = parse_bundle(&bad).unwrap_err();
        assert_eq!(e.kind(), "MalformedInput", "{bad}: {e}");
    }
}

#[test]
fn point_schemas() {
    let b = generate("fig4").unwrap();
    for p in [json!({"origin": true}), json!({"ray": "v", "radius": 2.0}), json!({"cone": "S5", "angle_from_first": 0.3, "radius": 1.0}), json!({"cone": "S5", "x": 1.0, "y": 0.5})] {
        assert!(matches!(parse_point(&b.space, &p).unwrap(), Point::Cone(_)), "{p}");
    }
    for p in [json!({"ray": "zz", "radius": 1.0}), json!({"ray": "v", "radius": -1.0}), json!({"cone": "S5", "angle_from_first": 3.0, "radius": 1.0}), json!({"vertex": "v"}), json!(3)] {
        assert!(parse_point(&b.space, &p).is_err(), "{p}");
    }
    let t5 = generate("t5").unwrap();
    let tree = json!({"splits": [{"split": "12|345", "length": 1.0}, {"split": "34|125", "length": 0.5}]});
    assert!(matches!(parse_point(&t5.space, &tree).unwrap(), Point::Cone(cat0_core::single_vertex::ConePoint::InQuadrant { .. })));
    let clash = json!({"splits": [{"split": "12|345", "length": 1.0}, {"split": "13|245", "length": 0.5}]});
    assert_eq!(parse_point(&t5.space, &clash).unwrap_err().kind(), "IncompatibleSplits");
    let c = generate("incoming-cycle").unwrap();
    assert!(parse_point(&c.space, &json!({"vertex": "s"})).is_ok());
    assert_eq!(parse_point(&c.space, &json!({"vertex": "nope"})).unwrap_err().kind(), "UnknownVertex");
    assert!(parse_point(&c.space, &json!({"edge": "A0-A1", "t": 99.0})).is_err());
}

#[test]
#[allow(clippy::approx_constant)]
fn hand_written_right_angles_are_exact() {
    let doc = json!({"kind": "single_vertex", "rays": ["a", "b"], "cones": [{"id": "q", "rays": ["a", "b"], "angle": 1.5707963}]});
    let Space::Cone(c) = parse_bundle(&doc).unwrap().space else { panic!() };
    assert!(c.is_cube());
}
