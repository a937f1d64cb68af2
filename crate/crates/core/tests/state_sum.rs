use csbf_core::fusion::{total_dim, Level};
use csbf_core::modular::{s_matrix, twist};
use csbf_core::turaev::{
    doubled_check, load_triangulation, state_sum, EdgeColoring, Triangulation,
};
use csbf_core::Error;
use num_complex::Complex64;

fn lv(k: u32) -> Level {
    Level::new(k).unwrap()
}

#[test]
fn census_cell_counts() {
    let checks = [
        ("S3", 2, 6, 4, 4),
        ("S2xS1", 2, 3, 4, 1),
        ("L31", 2, 3, 4, 1),
        ("RP3", 3, 4, 6, 1),
        ("S3S3", 4, 9, 8, 5),
    ];
    for (name, t, e, f, v) in checks {
        let tri = Triangulation::builtin(name).unwrap();
        assert_eq!(tri.tet_count(), t, "{name} tets");
        assert_eq!(tri.edge_count(), e, "{name} edges");
        assert_eq!(tri.face_count(), f, "{name} faces");
        assert_eq!(tri.vertex_count(), v, "{name} vertices");
        assert!(tri.is_closed());
        assert_eq!(tri.euler_characteristic(), 0, "{name}");
    }
}

#[test]
fn sphere_state_sum_is_inverse_total_dim_squared() {
    let tri = Triangulation::builtin("S3").unwrap();
    for k in 1..=5 {
        let level = lv(k);
        let r = state_sum(&tri, &level).unwrap();
        let want = total_dim(&level).powi(-2);
        assert!((r.value - want).abs() < 1e-12, "k={k}: {} vs {want}", r.value);
        assert_eq!(r.coloring_count, (u64::from(k) + 1).pow(6));
    }
    // frozen admissible-coloring counts; the k=1 count is the hand
    // enumeration: the empty set, the three 4-cycles, and the four vertex
    // stars of the tetrahedron's edge graph
    let counts = [8, 36, 120, 329, 784];
    for (k, &want) in (1..=5u32).zip(counts.iter()) {
        let r = state_sum(&tri, &lv(k)).unwrap();
        assert_eq!(r.admissible_count, want, "k={k}");
    }
}

#[test]
fn sphere_values_at_small_levels() {
    let tri = Triangulation::builtin("S3").unwrap();
    assert!((state_sum(&tri, &lv(1)).unwrap().value - 0.5).abs() < 1e-12);
    assert!((state_sum(&tri, &lv(2)).unwrap().value - 0.25).abs() < 1e-12);
    assert!((state_sum(&tri, &lv(3)).unwrap().value - 0.1381966011250105).abs() < 1e-12);
}

#[test]
fn four_simplex_boundary_sphere() {
    // five tetrahedra with all five vertices distinct; this triangulation is
    // sensitive to the per-coloring sign in the weight, which cancels on the
    // small census examples
    let text = "tets 5\n\
                g 0 0 1 0 0\n\
                g 0 1 2 0 0\n\
                g 0 2 3 0 0\n\
                g 0 3 4 0 0\n\
                g 1 1 2 1 0\n\
                g 1 2 3 1 0\n\
                g 1 3 4 1 0\n\
                g 2 2 3 2 0\n\
                g 2 3 4 2 0\n\
                g 3 3 4 3 0\n";
    let tri = load_triangulation(text).unwrap();
    assert_eq!(
        (tri.tet_count(), tri.edge_count(), tri.face_count(), tri.vertex_count()),
        (5, 10, 10, 5)
    );
    for k in 1..=4 {
        let level = lv(k);
        let got = state_sum(&tri, &level).unwrap().value;
        let want = total_dim(&level).powi(-2);
        assert!((got - want).abs() < 1e-12, "k={k}: {got} vs {want}");
    }
}

#[test]
fn s2xs1_state_sum_is_one() {
    let tri = Triangulation::builtin("S2xS1").unwrap();
    for k in 1..=4 {
        let r = state_sum(&tri, &lv(k)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "k={k}: {}", r.value);
    }
    let counts = [2, 4, 8, 13];
    for (k, &want) in (1..=4u32).zip(counts.iter()) {
        assert_eq!(state_sum(&tri, &lv(k)).unwrap().admissible_count, want, "k={k}");
    }
}

/// |Σ_j S_0j θ_j^p S_j0|²: squared chiral surgery value of the lens space
/// L(p,1), computed purely from modular data.
fn lens_doubled(p: i32, k: u32) -> f64 {
    let level = lv(k);
    let s = s_matrix(&level);
    let mut z = Complex64::new(0.0, 0.0);
    for j in 0..=k {
        let th = twist(j, &level).unwrap().powi(p);
        z += s[(0, j as usize)] * th * s[(j as usize, 0)];
    }
    z.norm_sqr()
}

#[test]
fn lens_spaces_match_squared_chiral_values() {
    let rp3 = Triangulation::builtin("RP3").unwrap();
    let l31 = Triangulation::builtin("L31").unwrap();
    for k in 1..=5 {
        let v2 = state_sum(&rp3, &lv(k)).unwrap().value;
        assert!((v2 - lens_doubled(2, k)).abs() < 1e-10, "RP3 k={k}");
        let v3 = state_sum(&l31, &lv(k)).unwrap().value;
        assert!((v3 - lens_doubled(3, k)).abs() < 1e-10, "L31 k={k}");
    }
}

#[test]
fn lens_frozen_values() {
    let rp3 = Triangulation::builtin("RP3").unwrap();
    assert!(state_sum(&rp3, &lv(1)).unwrap().value.abs() < 1e-12);
    assert!((state_sum(&rp3, &lv(2)).unwrap().value - 0.14644660940672638).abs() < 1e-12);
    assert!(state_sum(&rp3, &lv(3)).unwrap().value.abs() < 1e-12);
    assert!((state_sum(&rp3, &lv(4)).unwrap().value - 0.044658198738520415).abs() < 1e-12);

    let l31 = Triangulation::builtin("L31").unwrap();
    let vals = [0.5, 0.25, 0.36180339887498958, 0.25, 0.17464584770804495];
    for (k, &want) in (1..=5u32).zip(vals.iter()) {
        let got = state_sum(&l31, &lv(k)).unwrap().value;
        assert!((got - want).abs() < 1e-12, "k={k}: {got}");
    }
    assert_eq!(state_sum(&l31, &lv(3)).unwrap().admissible_count, 5);
    assert_eq!(state_sum(&rp3, &lv(4)).unwrap().admissible_count, 16);
}

#[test]
fn connected_sum_multiplicativity() {
    let sum = Triangulation::builtin("S3S3").unwrap();
    let s3 = Triangulation::builtin("S3").unwrap();
    for k in 1..=2 {
        let level = lv(k);
        let v = state_sum(&sum, &level).unwrap().value;
        let vs = state_sum(&s3, &level).unwrap().value;
        let d2 = total_dim(&level).powi(2);
        assert!((v - vs * vs * d2).abs() < 1e-9, "k={k}");
    }
}

#[test]
fn doubled_check_builtins() {
    for k in 1..=3 {
        let (tv, chiral) = doubled_check("S3", &lv(k)).unwrap();
        assert!((tv - chiral).abs() < 1e-9, "S3 k={k}");
        let (tv, chiral) = doubled_check("S2xS1", &lv(k)).unwrap();
        assert!((tv - chiral).abs() < 1e-9, "S2xS1 k={k}");
    }
    let (tv, chiral) = doubled_check("S3", &lv(2)).unwrap();
    assert!((tv - 0.25).abs() < 1e-12 && (chiral - 0.25).abs() < 1e-12);
    let (tv, chiral) = doubled_check("S3", &lv(1)).unwrap();
    assert!((tv - 0.5).abs() < 1e-12 && (chiral - 0.5).abs() < 1e-12);
    assert!(doubled_check("L31", &lv(2)).is_err());
    assert!(doubled_check("nonsense", &lv(2)).is_err());
}

#[test]
fn pachner_expansion_preserves_state_sum() {
    let s3 = Triangulation::builtin("S3").unwrap();
    let once = s3.pachner_23(0, 0).unwrap();
    assert_eq!(once.tet_count(), 3);
    assert_eq!(once.euler_characteristic(), 0);
    let twice = once
        .pachner_23(once.interior_faces()[0].0, once.interior_faces()[0].1)
        .unwrap();
    assert_eq!(twice.tet_count(), 4);
    for k in 1..=3 {
        let level = lv(k);
        let v0 = state_sum(&s3, &level).unwrap().value;
        let v1 = state_sum(&once, &level).unwrap().value;
        let v2 = state_sum(&twice, &level).unwrap().value;
        assert!((v1 - v0).abs() < 1e-9, "k={k} once");
        assert!((v2 - v0).abs() < 1e-9, "k={k} twice");
    }
}

#[test]
fn pachner_invariance_sweep() {
    for name in ["S3", "S2xS1", "L31", "RP3"] {
        let tri = Triangulation::builtin(name).unwrap();
        let level = lv(2);
        let v0 = state_sum(&tri, &level).unwrap().value;
        for (t, f) in tri.interior_faces() {
            let moved = tri.pachner_23(t, f).unwrap();
            let v = state_sum(&moved, &level).unwrap().value;
            assert!((v - v0).abs() < 1e-9, "{name} 2->3 at ({t},{f})");
            for (tt, ee) in moved.degree_three_edges() {
                let back = moved.pachner_32(tt, ee).unwrap();
                let vb = state_sum(&back, &level).unwrap().value;
                assert!((vb - v0).abs() < 1e-9, "{name} 3->2 at ({tt},{ee})");
            }
        }
    }
}

#[test]
fn pachner_collapse_returns_to_two_tetrahedra() {
    let s3 = Triangulation::builtin("S3").unwrap();
    let expanded = s3.pachner_23(0, 1).unwrap();
    let edges = expanded.degree_three_edges();
    assert!(!edges.is_empty());
    let (t, e) = edges[0];
    let back = expanded.pachner_32(t, e).unwrap();
    assert_eq!(back.tet_count(), 2);
    let level = lv(3);
    let v = state_sum(&back, &level).unwrap().value;
    let v0 = state_sum(&s3, &level).unwrap().value;
    assert!((v - v0).abs() < 1e-12);
}

#[test]
fn pachner_errors() {
    let s3 = Triangulation::builtin("S3").unwrap();
    assert!(s3.pachner_23(5, 0).is_err());
    // S2xS1 has a face gluing tetrahedron 0 to itself
    let tri = Triangulation::builtin("S2xS1").unwrap();
    assert!(tri.pachner_23(0, 0).is_err());
    // S3's edges all have degree 2 or degree > 3? degree is the class size
    let deg3 = s3.degree_three_edges();
    assert!(deg3.is_empty());
    assert!(s3.pachner_32(0, 0).is_err());
}

#[test]
fn relabeling_is_bit_for_bit() {
    // swap the two tetrahedra of L31 and renumber accordingly
    let orig = Triangulation::builtin("L31").unwrap();
    let swapped = Triangulation::from_gluings(
        2,
        &[(1, 0, 1, 1, 0), (1, 2, 0, 0, 3), (1, 3, 0, 1, 3), (0, 2, 0, 3, 3)],
    )
    .unwrap();
    for k in 1..=4 {
        let level = lv(k);
        let a = state_sum(&orig, &level).unwrap();
        let b = state_sum(&swapped, &level).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits(), "k={k}");
        assert_eq!(a.admissible_count, b.admissible_count);
    }

    // reordering the gluing lines alone must also be bit-for-bit
    let reordered = Triangulation::from_gluings(
        2,
        &[(1, 2, 1, 3, 3), (0, 3, 1, 1, 3), (0, 0, 0, 1, 0), (0, 2, 1, 0, 3)],
    )
    .unwrap();
    let a = state_sum(&orig, &lv(3)).unwrap();
    let b = state_sum(&reordered, &lv(3)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
}

#[test]
fn parser_accepts_comments_and_roundtrips() {
    let text = "# a sphere\ntets 2\n g 0 0 1 0 0 # first\ng 0 1 1 1 0\ng 0 2 1 2 0\ng 0 3 1 3 0\n";
    let tri = load_triangulation(text).unwrap();
    assert_eq!(tri.tet_count(), 2);
    let round = load_triangulation(&tri.to_text()).unwrap();
    assert_eq!(round.to_text(), tri.to_text());
    let level = lv(2);
    assert_eq!(
        state_sum(&round, &level).unwrap().value.to_bits(),
        state_sum(&tri, &level).unwrap().value.to_bits()
    );
}

#[test]
fn parser_errors() {
    let open = "tets 2\ng 0 0 1 0 0\n";
    match load_triangulation(open) {
        Err(Error::Domain(d)) => assert!(d.contains("open face"), "{d}"),
        other => panic!("expected open-face error, got {other:?}"),
    }
    // permissive parse keeps the boundary but state_sum refuses it
    let tri = Triangulation::parse(open).unwrap();
    assert!(!tri.is_closed());
    assert!(state_sum(&tri, &lv(1)).is_err());

    let noninv = "tets 2\ng 0 0 1 0 0\ng 1 0 0 1 0\n";
    match Triangulation::parse(noninv) {
        Err(Error::Parse { line, detail }) => {
            assert_eq!(line, 3);
            assert!(detail.contains("not involutive"), "{detail}");
        }
        other => panic!("expected involution error, got {other:?}"),
    }

    assert!(Triangulation::parse("tets 1\ng 0 0 0 0 0\n").is_err());
    assert!(Triangulation::parse("g 0 0 1 0 0\n").is_err());
    assert!(Triangulation::parse("tets 2\ng 0 0 5 0 0\n").is_err());
    assert!(Triangulation::parse("tets 2\ng 0 0 1 0 9\n").is_err());
    assert!(Triangulation::parse("tets 2\nh 0 0 1 0 0\n").is_err());
    assert!(Triangulation::parse("tets x\n").is_err());
    match Triangulation::parse("tets 2\ng 0 0 1 0\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn coloring_admissibility() {
    let tri = Triangulation::builtin("S3").unwrap();
    let level = lv(1);
    // all edges colored 0 is admissible; a single colored edge is not
    assert!(tri
        .coloring_admissible(&EdgeColoring { assignment: vec![0; 6] }, &level)
        .unwrap());
    let mut one = vec![0; 6];
    one[0] = 1;
    assert!(!tri
        .coloring_admissible(&EdgeColoring { assignment: one }, &level)
        .unwrap());
    assert!(tri
        .coloring_admissible(&EdgeColoring { assignment: vec![0; 3] }, &level)
        .is_err());
}

#[test]
fn unknown_builtin() {
    assert!(Triangulation::builtin("T3").is_err());
}
