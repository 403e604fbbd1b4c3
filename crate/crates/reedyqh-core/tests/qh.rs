//! Reedy algebra verification, the algebra/category round trip, and
//! quasi-hereditary plus exact-Borel checks with frozen values.

use rand::Rng;
use reedyqh_core::exactla::{FieldSpec, Matrix};
use reedyqh_core::lincat::{verify_reedy, LinearCategory, ReedyStructure};
use reedyqh_core::presentation::{build_linear_category, parse_presentation};
use reedyqh_core::qh::*;
use reedyqh_core::sample;
use std::path::PathBuf;

fn build_fixture(name: &str) -> (LinearCategory, ReedyStructure) {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("reading {p:?}: {e}"));
    let built = build_linear_category(&parse_presentation(&text).expect("fixture parses"))
        .expect("fixture builds");
    (built.category, built.reedy.expect("reedy present"))
}

/// Assemble an algebra from a sparse product table over named basis
/// elements; absent pairs multiply to zero.
fn algebra_from_table(
    f: FieldSpec,
    names: &[&str],
    products: &[(&str, &str, &str)],
    idem: &[&str],
    degree: Vec<u32>,
    plus: &[&str],
    minus: &[&str],
) -> AlgebraWithIdempotents {
    let d = names.len();
    let idx = |n: &str| names.iter().position(|m| *m == n).unwrap();
    let unit_col = |n: &str| {
        let mut v = Matrix::zeros(f, d, 1);
        v.set(idx(n), 0, f.one());
        v
    };
    let mut mult = Matrix::zeros(f, d, d * d);
    for (x, y, z) in products {
        mult.set(idx(z), idx(x) * d + idx(y), f.one());
    }
    let span = |list: &[&str]| {
        let cols: Vec<Matrix> = list.iter().map(|n| unit_col(n)).collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        Matrix::hstack(&refs)
    };
    AlgebraWithIdempotents::new(
        f,
        names.iter().map(|n| n.to_string()).collect(),
        mult,
        idem.iter().map(|n| unit_col(n)).collect(),
        degree,
        span(plus),
        span(minus),
    )
}

/// The five dimensional algebra of two objects joined by a raising arrow a
/// and a lowering arrow b with b*a = 0 and ab nilpotent.
fn two_vertex_algebra(f: FieldSpec, minus: &[&str]) -> AlgebraWithIdempotents {
    algebra_from_table(
        f,
        &["e0", "e1", "a", "b", "ab"],
        &[
            ("e0", "e0", "e0"),
            ("e1", "e1", "e1"),
            ("a", "e0", "a"),
            ("e1", "a", "a"),
            ("b", "e1", "b"),
            ("e0", "b", "b"),
            ("a", "b", "ab"),
            ("e1", "ab", "ab"),
            ("ab", "e1", "ab"),
        ],
        &["e0", "e1"],
        vec![0, 1],
        &["e0", "e1", "a"],
        minus,
    )
}

#[test]
fn two_vertex_reedy_algebra_passes_verification() {
    let a = two_vertex_algebra(FieldSpec::Rationals, &["e0", "e1", "b"]);
    assert_eq!(a.dim(), 5);
    let report = verify_reedy_algebra(&a);
    assert!(report.passed, "{:?}", report.violations);
    // End(e1) is two dimensional and decomposes through both objects.
    assert_eq!(a.corner(1, 1).cols(), 2);
    assert_eq!(peirce_factor_dims(&a, 1, 1), vec![1, 1]);
}

#[test]
fn simplex_total_algebra_passes_with_corner_decomposition() {
    let (cat, rs) = build_fixture("ksimplex.reedy");
    let a = algebra_from_category(&cat, &rs);
    assert_eq!(a.dim(), 7);
    let report = verify_reedy_algebra(&a);
    assert!(report.passed, "{:?}", report.violations);
    // End(e1) is three dimensional: two dimensions factor through the
    // bottom object, one is the scalar part.
    assert_eq!(a.corner(1, 1).cols(), 3);
    assert_eq!(peirce_factor_dims(&a, 1, 1), vec![2, 1]);
}

#[test]
fn moving_the_raising_arrow_into_the_lowering_subalgebra_fails() {
    let a = two_vertex_algebra(FieldSpec::Rationals, &["e0", "e1", "a"]);
    let report = verify_reedy_algebra(&a);
    assert!(!report.passed);
    assert!(
        report
            .violations
            .iter()
            .any(|v| v.contains("lowering corner") && v.contains("degree")),
        "{:?}",
        report.violations
    );
}

#[test]
fn category_to_algebra_to_category_preserves_structure_constants() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let a = algebra_from_category(&cat, &rs);
        let report = verify_reedy_algebra(&a);
        assert!(report.passed, "{name}: {:?}", report.violations);
        let (cat2, rs2) = category_from_algebra(&a);
        assert!(verify_reedy(&cat2, &rs2).passed, "{name}");
        let n = cat.n_objects();
        assert_eq!(cat2.n_objects(), n);
        for c in 0..n {
            assert_eq!(cat2.identities[c], cat.identities[c], "{name} id {c}");
            for d in 0..n {
                assert_eq!(cat2.hom_dim(c, d), cat.hom_dim(c, d), "{name} ({c},{d})");
                assert!(rs2.plus[c][d].subspace_eq(&rs.plus[c][d]), "{name} plus");
                assert!(rs2.minus[c][d].subspace_eq(&rs.minus[c][d]), "{name} minus");
                for e in 0..n {
                    assert_eq!(
                        cat2.comp_matrix(c, d, e),
                        cat.comp_matrix(c, d, e),
                        "{name} comp ({c},{d},{e})"
                    );
                }
            }
        }
        assert_eq!(rs2.degree, rs.degree);
    }
}

#[test]
fn hand_built_algebra_round_trips_up_to_base_change() {
    // The hand-built basis order differs from the corner block order, so
    // the round trip comes back with permuted coordinates.
    let a = two_vertex_algebra(FieldSpec::Rationals, &["e0", "e1", "b"]);
    let (cat2, rs2) = category_from_algebra(&a);
    let a2 = algebra_from_category(&cat2, &rs2);
    assert_eq!(a2.dim(), a.dim());
    let corners: Vec<Matrix> = (0..2)
        .flat_map(|c| (0..2).map(move |d| (c, d)))
        .map(|(c, d)| a.corner(c, d))
        .collect();
    let refs: Vec<&Matrix> = corners.iter().collect();
    let t = Matrix::hstack(&refs);
    assert!(base_change_intertwines(&t, &a2, &a));
    // A mangled base change must be rejected.
    let bad = Matrix::identity(FieldSpec::Rationals, 5);
    assert!(!base_change_intertwines(&bad, &a2, &a));
}

#[test]
fn one_object_field_algebra_round_trips() {
    let f = FieldSpec::Rationals;
    let a = algebra_from_table(f, &["1"], &[("1", "1", "1")], &["1"], vec![0], &["1"], &["1"]);
    assert!(verify_reedy_algebra(&a).passed);
    let (cat, rs) = category_from_algebra(&a);
    assert_eq!(cat.n_objects(), 1);
    assert_eq!(cat.hom_dim(0, 0), 1);
    assert!(verify_reedy(&cat, &rs).passed);
    let a2 = algebra_from_category(&cat, &rs);
    assert_eq!(a2.dim(), 1);
    let t = Matrix::identity(f, 1);
    assert!(base_change_intertwines(&t, &a2, &a));
}

#[test]
fn two_vertex_category_is_quasi_hereditary() {
    let (cat, rs) = build_fixture("qh.reedy");
    let report = verify_quasi_hereditary(&cat, &rs).unwrap();
    assert!(report.passed, "{:?}", report.violations);
    assert_eq!(report.degree, rs.degree);
    // The bottom standard is the full representable with one factor of
    // each simple; the top standard is already simple.
    assert_eq!(report.std_multiplicities, vec![vec![1, 1], vec![0, 1]]);
    // Kernel at the bottom object is zero; at the top it is one copy of
    // the degree-zero standard.
    assert!(report.kernel_reports[0]
        .layers
        .iter()
        .all(|l| l.multiplicities.iter().all(|&m| m == 0)));
    assert_eq!(report.kernel_reports[1].layers[0].multiplicities, vec![1, 0]);
    assert!(report.kernel_reports[1].layers[1]
        .multiplicities
        .iter()
        .all(|&m| m == 0));
}

#[test]
fn simplex_category_is_quasi_hereditary() {
    let (cat, rs) = build_fixture("ksimplex.reedy");
    let report = verify_quasi_hereditary(&cat, &rs).unwrap();
    assert!(report.passed, "{:?}", report.violations);
    assert_eq!(report.std_multiplicities, vec![vec![1, 1], vec![0, 1]]);
    assert_eq!(report.kernel_reports[1].layers[0].multiplicities, vec![1, 0]);
}

#[test]
fn exact_borel_conditions_hold_for_both_fixtures() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let report = verify_exact_borel(&cat, &rs, 25, 11).unwrap();
        assert!(report.passed, "{name}: {:?}", report.violations);
        assert_eq!(report.standards_simple, vec![true, true], "{name}");
        assert_eq!(report.kernel_factors_descend, vec![true, true], "{name}");
        assert_eq!(report.samples, 25);
        assert_eq!(report.exact_samples, 25, "{name}");
        assert_eq!(report.induced_standards, vec![true, true], "{name}");
    }
}

#[test]
fn borel_fails_when_the_lowering_subcategory_is_everything() {
    let (cat, rs) = build_fixture("qh.reedy");
    let f = cat.field();
    let n = cat.n_objects();
    let full: Vec<Vec<Matrix>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| Matrix::identity(f, cat.hom_dim(c, d)).image_basis())
                .collect()
        })
        .collect();
    let rs_full = ReedyStructure {
        degree: rs.degree.clone(),
        plus: rs.plus.clone(),
        minus: full,
    };
    let report = verify_exact_borel(&cat, &rs_full, 5, 3).unwrap();
    assert!(!report.passed);
    // The degree-zero standard over the whole category has dims (1,1), so
    // it cannot be simple.
    assert!(!report.standards_simple[0]);
    assert!(
        report.violations.iter().any(|v| v.contains("not simple")),
        "{:?}",
        report.violations
    );
}

#[test]
fn constant_degree_single_arrow_fails_reedy_before_qh() {
    let text = "[field]\nkind = Q\n\n[quiver]\nvertices = v0 v1\narrow a : v0 -> v1\n\n[limits]\nmaxlen = 3\n\n[reedy]\ndegree v0 = 0\ndegree v1 = 0\nplus = a\n";
    let built = build_linear_category(&parse_presentation(text).unwrap()).unwrap();
    let rs = built.reedy.unwrap();
    // The quasi-hereditary check is gated on this verdict.
    assert!(!verify_reedy(&built.category, &rs).passed);
}

/// Random quivers with all arrows pointing up in degree (or all down) give
/// one-sided categories; the whole chain of checks must pass on each.
#[test]
fn random_one_sided_quivers_satisfy_the_chain() {
    let mut rng = sample::seeded_rng(23);
    for round in 0..12 {
        let raising = round % 2 == 0;
        let n = 2 + (round / 2) % 2;
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if arrows.is_empty() || rng.random_range(0..2) == 1 {
                    let (src, dst) = if raising { (i, j) } else { (j, i) };
                    arrows.push(format!("arrow a{} : v{src} -> v{dst}", arrows.len()));
                }
            }
        }
        let names: Vec<String> = (0..arrows.len()).map(|k| format!("a{k}")).collect();
        let side = if raising { "plus" } else { "minus" };
        let text = format!(
            "[field]\nkind = Q\n\n[quiver]\nvertices = {}\n{}\n\n[limits]\nmaxlen = 4\n\n[reedy]\n{}\n{side} = {}\n",
            (0..n).map(|i| format!("v{i}")).collect::<Vec<_>>().join(" "),
            arrows.join("\n"),
            (0..n)
                .map(|i| format!("degree v{i} = {i}"))
                .collect::<Vec<_>>()
                .join("\n"),
            names.join(" "),
        );
        let built = build_linear_category(&parse_presentation(&text).unwrap()).unwrap();
        let (cat, rs) = (built.category, built.reedy.unwrap());
        assert!(verify_reedy(&cat, &rs).passed, "round {round}: {text}");
        let alg = algebra_from_category(&cat, &rs);
        assert!(verify_reedy_algebra(&alg).passed, "round {round}");
        let qh = verify_quasi_hereditary(&cat, &rs).unwrap();
        assert!(qh.passed, "round {round}: {:?}", qh.violations);
        let borel = verify_exact_borel(&cat, &rs, 5, 40 + round as u64).unwrap();
        assert!(borel.passed, "round {round}: {:?}", borel.violations);
    }
}
