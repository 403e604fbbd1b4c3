//! Structure verification tests: Reedy axioms on the shipped fixtures,
//! degree ideals, quotient categories, opposites and subcategories.

use reedyqh_core::lincat::*;
use reedyqh_core::presentation::{build_linear_category, parse_presentation, BuiltCategory};
use std::path::PathBuf;

fn build_fixture(name: &str) -> BuiltCategory {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("reading {p:?}: {e}"));
    build_linear_category(&parse_presentation(&text).expect("fixture parses"))
        .expect("fixture builds")
}

#[test]
fn two_vertex_fixture_satisfies_reedy_axioms() {
    let built = build_fixture("qh.reedy");
    let rs = built.reedy.expect("reedy present");
    let report = verify_reedy(&built.category, &rs);
    assert!(report.passed, "violations: {:?}", report.violations);
}

#[test]
fn truncated_simplex_fixture_satisfies_reedy_axioms() {
    let built = build_fixture("ksimplex.reedy");
    let rs = built.reedy.expect("reedy present");
    let report = verify_reedy(&built.category, &rs);
    assert!(report.passed, "violations: {:?}", report.violations);

    // The factorization at (v1,v1) has exactly 1 + 2*1 = 3 columns: the
    // identity through v1 plus d0 o s and d1 o s through v0.
    let m = factorization_matrix(&built.category, &rs, 1, 1, None);
    assert_eq!(m.cols(), 3);
    assert_eq!(m.rank(), 3);
}

#[test]
fn swapped_degrees_fail_strict_raising() {
    let built = build_fixture("qh-degswap.reedy");
    let rs = built.reedy.expect("reedy present");
    let report = verify_reedy(&built.category, &rs);
    assert!(!report.passed);
    assert!(
        report
            .violations
            .iter()
            .any(|v| v.contains("raising") || v.contains("lowering")),
        "expected a degree violation, got {:?}",
        report.violations
    );
}

#[test]
fn perturbed_composition_fails_associativity() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let f = cat.field();
    // Corrupt one structure constant of End(v1) composition.
    let n = cat.n_objects();
    let mut comp: Vec<Vec<Vec<reedyqh_core::exactla::Matrix>>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| (0..n).map(|e| cat.comp_matrix(c, d, e).clone()).collect())
                .collect()
        })
        .collect();
    let last = comp[1][1][1].cols() - 1;
    let old = comp[1][1][1].get(1, last).clone();
    let bumped = f.add(&old, &f.one());
    comp[1][1][1].set(1, last, bumped);
    let perturbed = LinearCategory::new(
        f,
        cat.objects.clone(),
        cat.hom_labels.clone(),
        cat.identities.clone(),
        comp,
    );
    let report = verify_category(&perturbed);
    assert!(!report.passed);
}

#[test]
fn degree_ideals_of_two_vertex_fixture() {
    let built = build_fixture("qh.reedy");
    let cat = &built.category;
    let rs = built.reedy.unwrap();
    // Below degree 0 nothing factors; below 1 everything through v0 does.
    let i0 = degree_ideal(cat, &rs, 0);
    for c in 0..2 {
        for d in 0..2 {
            assert_eq!(i0.spans[c][d].cols(), 0);
        }
    }
    let i1 = degree_ideal(cat, &rs, 1);
    assert_eq!(i1.spans[0][0].cols(), 1);
    assert_eq!(i1.spans[0][1].cols(), 1);
    assert_eq!(i1.spans[1][0].cols(), 1);
    assert_eq!(i1.spans[1][1].cols(), 1);
    // I_{<1}(v1,v1) is spanned by a o b, the second basis vector.
    assert!(i1.spans[1][1].col_space_contains(&cat.basis_vector(1, 1, 1)));
    assert!(!i1.spans[1][1].col_space_contains(&cat.basis_vector(1, 1, 0)));
    // Beyond the top degree the ideal is everything.
    let i2 = degree_ideal(cat, &rs, 2);
    for c in 0..2 {
        for d in 0..2 {
            assert_eq!(i2.spans[c][d].cols(), cat.hom_dim(c, d));
        }
    }
}

#[test]
fn degree_ideals_of_simplex_fixture_and_monotonicity() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let rs = built.reedy.unwrap();
    let i1 = degree_ideal(cat, &rs, 1);
    assert_eq!(i1.spans[1][1].cols(), 2);
    assert_eq!(i1.spans[0][0].cols(), 1);
    assert_eq!(i1.spans[0][1].cols(), 2);
    assert_eq!(i1.spans[1][0].cols(), 1);
    // Monotone in alpha, with the top ideal full.
    let i2 = degree_ideal(cat, &rs, 2);
    for c in 0..2 {
        for d in 0..2 {
            assert!(i2.spans[c][d].col_space_contains(&i1.spans[c][d]));
            assert_eq!(i2.spans[c][d].cols(), cat.hom_dim(c, d));
        }
    }
}

#[test]
fn quotient_by_bottom_degree_keeps_the_category() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let rs = built.reedy.unwrap();
    let (q, qrs) = quotient_category(cat, &rs, 0);
    assert_eq!(q.n_objects(), 2);
    for c in 0..2 {
        for d in 0..2 {
            assert_eq!(q.hom_dim(c, d), cat.hom_dim(c, d));
            for e in 0..2 {
                assert_eq!(q.comp_matrix(c, d, e), cat.comp_matrix(c, d, e));
            }
        }
    }
    assert_eq!(qrs.degree, rs.degree);
    assert!(verify_reedy(&q, &qrs).passed);
}

#[test]
fn quotient_by_top_degree_is_one_object_with_scalar_endos() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let built = build_fixture(name);
        let cat = &built.category;
        let rs = built.reedy.unwrap();
        let (q, qrs) = quotient_category(cat, &rs, 1);
        assert_eq!(q.n_objects(), 1, "{name}");
        assert_eq!(q.hom_dim(0, 0), 1, "{name}");
        assert_eq!(qrs.degree, vec![0], "{name}");
        assert!(!q.identities[0].is_zero(), "{name}");
        assert!(verify_reedy(&q, &qrs).passed, "{name}");
    }
}

#[test]
fn opposite_is_an_involution_and_preserves_reedy() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let built = build_fixture(name);
        let cat = &built.category;
        let rs = built.reedy.unwrap();
        let op = opposite(cat);
        assert!(verify_category(&op).passed, "{name}");
        let oprs = opposite_reedy(&rs);
        assert!(verify_reedy(&op, &oprs).passed, "{name}");
        let opop = opposite(&op);
        for c in 0..cat.n_objects() {
            assert_eq!(opop.identities[c], cat.identities[c]);
            for d in 0..cat.n_objects() {
                assert_eq!(op.hom_dim(c, d), cat.hom_dim(d, c));
                for e in 0..cat.n_objects() {
                    assert_eq!(opop.comp_matrix(c, d, e), cat.comp_matrix(c, d, e), "{name}");
                }
            }
        }
    }
}

#[test]
fn lowering_subcategory_is_an_inverse_category() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let rs = built.reedy.unwrap();
    let (sub, incl) = subcategory(cat, &rs.minus);
    assert!(verify_category(&sub).passed);
    assert_eq!(sub.hom_dim(1, 0), 1);
    assert_eq!(sub.hom_dim(0, 1), 0);
    assert_eq!(sub.hom_dim(1, 1), 1);
    // Inclusions land where they should: the (v1,v0) generator is s.
    assert_eq!(incl[1][0].cols(), 1);
    let irs = inverse_reedy(&sub, rs.degree.clone());
    assert!(verify_reedy(&sub, &irs).passed);
}

#[test]
fn raising_subcategory_is_a_direct_category() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let rs = built.reedy.unwrap();
    let (sub, _) = subcategory(cat, &rs.plus);
    assert!(verify_category(&sub).passed);
    assert_eq!(sub.hom_dim(0, 1), 2);
    assert_eq!(sub.hom_dim(1, 0), 0);
    assert_eq!(sub.hom_dim(0, 0), 1);
    assert_eq!(sub.hom_dim(1, 1), 1);
    // Direct category structure: everything raises.
    let drs = ReedyStructure {
        degree: rs.degree.clone(),
        plus: (0..2)
            .map(|c| {
                (0..2)
                    .map(|d| {
                        reedyqh_core::exactla::Matrix::identity(sub.field(), sub.hom_dim(c, d))
                            .image_basis()
                    })
                    .collect()
            })
            .collect(),
        minus: (0..2)
            .map(|c| {
                (0..2)
                    .map(|d| {
                        if c == d {
                            sub.identities[c].image_basis()
                        } else {
                            reedyqh_core::exactla::Matrix::zeros(sub.field(), sub.hom_dim(c, d), 0)
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    assert!(verify_reedy(&sub, &drs).passed);
}

#[test]
fn full_subcategory_on_top_object_keeps_local_endos() {
    let built = build_fixture("ksimplex.reedy");
    let cat = &built.category;
    let sub = full_subcategory(cat, &[1]);
    assert_eq!(sub.n_objects(), 1);
    assert_eq!(sub.hom_dim(0, 0), 3);
    assert!(verify_category(&sub).passed);
    let rs = built.reedy.unwrap();
    let rrs = restrict_reedy(&rs, &[1]);
    assert_eq!(rrs.degree, vec![1]);
    assert_eq!(rrs.minus[0][0].cols(), 1);
}
