use proptest::prelude::*;

use tridesign::datasets::{dataset_names, load_dataset};
use tridesign::designs::{Design, Gdd, TriangleSystem};
use tridesign::format::{load, read_design, save, to_string, DesignFile};
use tridesign::linalg::{Spread, TriangleV};

#[test]
fn every_dataset_round_trips_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in dataset_names() {
        let sys = load_dataset(name).unwrap().expand().unwrap();
        let f = DesignFile::new(sys, Some(name));
        let first = to_string(&f);
        let parsed = read_design(first.as_bytes()).unwrap();
        assert_eq!(parsed, f, "{name}");
        assert_eq!(to_string(&parsed), first, "{name}");

        let gz = dir.path().join(format!("{name}.design.gz"));
        save(&gz, &f).unwrap();
        assert_eq!(to_string(&load(&gz).unwrap()), first, "{name} via gzip");
    }
}

#[test]
fn header_and_body_shape() {
    let sys = load_dataset("frob7").unwrap().expand().unwrap();
    let s = to_string(&DesignFile::new(sys, None));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(
        &lines[..6],
        &[
            "tridesign-design 1",
            "kind design",
            "n 7",
            "m 1",
            "poly 0x83",
            "count 889"
        ]
    );
    assert_eq!(lines.len(), 6 + 889);
    for l in &lines[6..] {
        let v: Vec<u32> = l
            .split(' ')
            .map(|t| u32::from_str_radix(t, 16).unwrap())
            .collect();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|&x| x > 0 && x < 128));
    }
}

fn arb_triangle(n: u32) -> impl Strategy<Value = TriangleV> {
    let top = 1u32 << n;
    (1..top, 1..top, 1..top).prop_map(|(a, b, c)| TriangleV::from_corners(a, b, c))
}

proptest! {
    #[test]
    fn arbitrary_designs_round_trip(
        n in 3u32..10,
        seed_tris in prop::collection::vec(arb_triangle(3), 0..40),
        prov in prop::option::of("[a-z0-9 .-]{1,20}"),
    ) {
        // Triangles need not be valid; the format is independent of verification.
        let d = Design { n, poly: 0, triangles: seed_tris };
        let f = DesignFile { system: TriangleSystem::Design(d), provenance: prov };
        let s = to_string(&f);
        let back = read_design(s.as_bytes()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(to_string(&back), s);
    }

    #[test]
    fn point_spread_gdds_round_trip(
        tris in prop::collection::vec(arb_triangle(4), 0..20),
    ) {
        let g = Gdd { n: 4, poly: 0x13, groups: Spread::points(4), triangles: tris };
        let f = DesignFile::new(TriangleSystem::Gdd(g), Some("points"));
        let s = to_string(&f);
        let back = read_design(s.as_bytes()).unwrap();
        prop_assert_eq!(to_string(&back), s);
        prop_assert_eq!(back, f);
    }
}
