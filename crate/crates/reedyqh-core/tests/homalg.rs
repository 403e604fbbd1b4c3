//! Resolution, tensor/hom, Ext/Tor, and lifting tests with frozen values
//! for both bundled presentations.

use reedyqh_core::exactla::Matrix;
use reedyqh_core::homalg::*;
use reedyqh_core::lincat::{opposite, LinearCategory, ReedyStructure};
use reedyqh_core::presentation::{build_linear_category, parse_presentation};
use reedyqh_core::repmod::{
    costandard_module, direct_sum, hom_space, hom_space_dim, quotient_module, representable,
    simple_modules, standard_module, submodule, trace_submodule, zero_module, CatModule,
    ModuleMap,
};
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

fn sum_part_dims(cat: &LinearCategory, parts: &[usize], c: usize) -> usize {
    parts.iter().map(|p| cat.hom_dim(*p, c)).sum()
}

#[test]
fn resolutions_of_representables_are_finite_and_exact() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        for c in 0..cat.n_objects() {
            let r = representable(&cat, c);
            let res = projective_resolution(&cat, &rs, &r, None);
            assert!(!res.truncated, "{name} object {c}");
            assert!(res.certified_exact(), "{name} object {c}");
            // Every term really is the recorded sum of representables.
            for (i, m) in res.modules.iter().enumerate() {
                for d in 0..cat.n_objects() {
                    assert_eq!(m.dim(d), sum_part_dims(&cat, &res.parts[i], d));
                }
            }
        }
    }
}

#[test]
fn resolution_of_zero_module_is_empty() {
    let (cat, rs) = build_fixture("qh.reedy");
    let res = projective_resolution(&cat, &rs, &zero_module(&cat), None);
    assert!(res.modules.is_empty());
    assert!(!res.truncated);
    assert_eq!(ext_from_resolution(&cat, &res, &representable(&cat, 0), 0), Ok(0));
}

#[test]
fn frozen_resolutions_of_top_standards() {
    // The kernel of C(1,-) -> Delta_1 is the degree ideal, which is the
    // representable at the bottom object; one further cover closes it.
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let d1 = standard_module(&cat, &rs, 1);
        let res = projective_resolution(&cat, &rs, &d1, None);
        assert_eq!(res.parts, vec![vec![1], vec![0]], "{name}");
        assert!(res.certified_exact(), "{name}");
    }
}

#[test]
fn standards_and_simples_resolve_within_total_dimension() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let simples = simple_modules(&cat, &rs).unwrap();
        for c in 0..cat.n_objects() {
            for x in [&standard_module(&cat, &rs, c), &simples[c]] {
                let res = projective_resolution(&cat, &rs, x, None);
                assert!(!res.truncated, "{name} object {c}");
                assert!(res.certified_exact(), "{name} object {c}");
            }
        }
    }
}

#[test]
fn tensor_with_opposite_representable_evaluates() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let op = opposite(&cat);
        for c in 0..cat.n_objects() {
            let w = representable(&op, c);
            for x in [
                representable(&cat, 0),
                representable(&cat, 1),
                standard_module(&cat, &rs, 0),
                standard_module(&cat, &rs, 1),
            ] {
                assert_eq!(tensor_over_c(&cat, &w, &x).dim, x.dim(c), "{name} at {c}");
            }
        }
    }
}

#[test]
fn tensor_of_costandard_with_standard_is_scalar_on_the_diagonal() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        for c in 0..2 {
            for d in 0..2 {
                let w = costandard_module(&cat, &rs, c);
                let x = standard_module(&cat, &rs, d);
                let expected = if c == d { 1 } else { 0 };
                assert_eq!(tensor_over_c(&cat, &w, &x).dim, expected, "{name} ({c},{d})");
            }
        }
    }
}

#[test]
fn hom_over_the_category_matches_evaluation_and_hom_space() {
    let (cat, rs) = build_fixture("qh.reedy");
    let d0 = standard_module(&cat, &rs, 0);
    let d1 = standard_module(&cat, &rs, 1);
    for c in 0..2 {
        assert_eq!(hom_over_c(&cat, &representable(&cat, c), &d0).0, d0.dim(c));
    }
    assert_eq!(hom_over_c(&cat, &zero_module(&cat), &d0).0, 0);
    assert_eq!(hom_over_c(&cat, &d1, &d0).0, 1);
}

#[test]
fn ext_at_zero_is_the_hom_dimension() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let mut family = vec![representable(&cat, 0), representable(&cat, 1)];
        family.push(standard_module(&cat, &rs, 0));
        family.push(standard_module(&cat, &rs, 1));
        for x in &family {
            for y in &family {
                assert_eq!(
                    ext(&cat, &rs, x, y, 0),
                    Ok(hom_space_dim(&cat, x, y)),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn frozen_ext_table_two_vertex() {
    let (cat, rs) = build_fixture("qh.reedy");
    let table = ext_std_table(&cat, &rs, 4).unwrap();
    assert_eq!(table.entries[0][0], vec![1, 0, 0, 0, 0]);
    assert_eq!(table.entries[0][1], vec![0, 0, 0, 0, 0]);
    assert_eq!(table.entries[1][0], vec![1, 1, 0, 0, 0]);
    assert_eq!(table.entries[1][1], vec![1, 0, 0, 0, 0]);
}

#[test]
fn frozen_ext_table_simplex() {
    let (cat, rs) = build_fixture("ksimplex.reedy");
    let table = ext_std_table(&cat, &rs, 4).unwrap();
    assert_eq!(table.entries[0][0], vec![1, 0, 0, 0, 0]);
    assert_eq!(table.entries[0][1], vec![0, 0, 0, 0, 0]);
    assert_eq!(table.entries[1][0], vec![1, 0, 0, 0, 0]);
    assert_eq!(table.entries[1][1], vec![1, 0, 0, 0, 0]);
}

#[test]
fn ext_above_degree_zero_points_strictly_down_in_degree() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let table = ext_std_table(&cat, &rs, 4).unwrap();
        for c in 0..2 {
            for d in 0..2 {
                for n in 1..=4 {
                    if table.entries[c][d][n] != 0 {
                        assert!(
                            rs.degree[d] < rs.degree[c],
                            "{name}: ext^{n}({c},{d}) nonzero against the degree order"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn tor_table_is_scalar_at_degree_zero_diagonal() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let table = tor_std_table(&cat, &rs, 4).unwrap();
        for c in 0..2 {
            for d in 0..2 {
                for n in 0..=4 {
                    let expected = usize::from(n == 0 && c == d);
                    assert_eq!(table.entries[c][d][n], expected, "{name} ({c},{d},{n})");
                }
            }
        }
    }
}

#[test]
fn tor_convenience_matches_table() {
    let (cat, rs) = build_fixture("qh.reedy");
    let w = costandard_module(&cat, &rs, 1);
    let x = standard_module(&cat, &rs, 1);
    assert_eq!(tor(&cat, &rs, &w, &x, 0, None), Ok(1));
    assert_eq!(tor(&cat, &rs, &w, &x, 1, None), Ok(0));
}

#[test]
fn truncation_is_a_reported_error() {
    let (cat, rs) = build_fixture("qh.reedy");
    let d1 = standard_module(&cat, &rs, 1);
    let res = projective_resolution(&cat, &rs, &d1, Some(0));
    assert!(res.truncated);
    let err = ext_from_resolution(&cat, &res, &d1, 0).unwrap_err();
    assert!(err.to_string().starts_with("resolution-truncated"), "{err}");
    let w = costandard_module(&cat, &rs, 1);
    let terr = tor(&cat, &rs, &w, &d1, 0, Some(0)).unwrap_err();
    assert!(terr.to_string().starts_with("resolution-truncated"), "{terr}");
}

fn euler(cat: &LinearCategory, rs: &ReedyStructure, x: &CatModule, y: &CatModule) -> i64 {
    let res = projective_resolution(cat, rs, x, None);
    (0..=4)
        .map(|n| {
            let e = ext_from_resolution(cat, &res, y, n).unwrap() as i64;
            if n % 2 == 0 {
                e
            } else {
                -e
            }
        })
        .sum()
}

#[test]
fn euler_characteristic_is_additive_over_filtration_layers() {
    use reedyqh_core::repmod::verify_standard_filtration;
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let stds: Vec<CatModule> = (0..2).map(|c| standard_module(&cat, &rs, c)).collect();
        for c in 0..2 {
            let r = representable(&cat, c);
            let report = verify_standard_filtration(&cat, &rs, &r);
            assert!(report.passed);
            for y in &stds {
                let direct = euler(&cat, &rs, &r, y);
                let by_layers: i64 = report
                    .layers
                    .iter()
                    .flat_map(|layer| {
                        layer
                            .multiplicities
                            .iter()
                            .enumerate()
                            .map(|(d, m)| (*m as i64) * euler(&cat, &rs, &stds[d], y))
                            .collect::<Vec<i64>>()
                    })
                    .sum();
                assert_eq!(direct, by_layers, "{name} object {c}");
            }
        }
    }
}

/// Precomposition with a mono into a projective is surjective on maps
/// into y exactly when ext^1 of the cokernel vanishes.
fn restriction_surjective(
    cat: &LinearCategory,
    sub: &CatModule,
    incl: &ModuleMap,
    ambient: &CatModule,
    y: &CatModule,
) -> bool {
    let from_ambient = hom_space(cat, ambient, y);
    let on_sub = hom_space(cat, sub, y);
    if on_sub.is_empty() {
        return true;
    }
    let f = cat.field();
    let total: usize = (0..cat.n_objects()).map(|c| y.dim(c) * sub.dim(c)).sum();
    let mut m = Matrix::zeros(f, total, from_ambient.len());
    for (col, h) in from_ambient.iter().enumerate() {
        let restricted = h.compose(incl);
        let mut row = 0;
        for c in 0..cat.n_objects() {
            let comp = &restricted.comps[c];
            for i in 0..comp.rows() {
                for j in 0..comp.cols() {
                    m.set(row + i * comp.cols() + j, col, comp.get(i, j).clone());
                }
            }
            row += comp.rows() * comp.cols();
        }
    }
    m.rank() == on_sub.len()
}

#[test]
fn ext_vanishing_matches_restriction_surjectivity() {
    for name in ["qh.reedy", "ksimplex.reedy"] {
        let (cat, rs) = build_fixture(name);
        let r1 = representable(&cat, 1);
        let spans = trace_submodule(&cat, &rs, &r1, 1);
        let (sub, incl) = submodule(&cat, &r1, &spans);
        let (quot, _) = quotient_module(&cat, &r1, &spans);
        for y in [standard_module(&cat, &rs, 0), standard_module(&cat, &rs, 1)] {
            let surj = restriction_surjective(&cat, &sub, &incl, &r1, &y);
            let e1 = ext(&cat, &rs, &quot, &y, 1).unwrap();
            assert_eq!(surj, e1 == 0, "{name}: ext^1 = {e1}");
        }
    }
    // The two-vertex case has the nonzero class: maps from the trace
    // submodule into the bottom standard do not extend.
    let (cat, rs) = build_fixture("qh.reedy");
    let r1 = representable(&cat, 1);
    let spans = trace_submodule(&cat, &rs, &r1, 1);
    let (sub, incl) = submodule(&cat, &r1, &spans);
    let d0 = standard_module(&cat, &rs, 0);
    assert!(!restriction_surjective(&cat, &sub, &incl, &r1, &d0));
}

#[test]
fn lifting_against_epis_holds_for_projectives_and_split_monos() {
    let (cat, rs) = build_fixture("qh.reedy");
    let f = cat.field();
    let z = zero_module(&cat);
    let p = direct_sum(&cat, &[&representable(&cat, 0), &representable(&cat, 1)]);
    let l0 = ModuleMap::zero(&cat, &z, &p);
    let r1 = representable(&cat, 1);
    let spans = trace_submodule(&cat, &rs, &r1, 1);
    let (quot, proj) = quotient_module(&cat, &r1, &spans);
    assert!(has_left_lifting(&cat, (&z, &p, &l0), (&r1, &quot, &proj)));

    // A split mono lifts against any epi once its complement is projective:
    // the square restricts to the complement, where the epi can be lifted.
    let d0 = standard_module(&cat, &rs, 0);
    let d1 = standard_module(&cat, &rs, 1);
    let split_into = |extra: &CatModule| {
        let sum = direct_sum(&cat, &[&d0, extra]);
        let comps = (0..cat.n_objects())
            .map(|c| {
                let id = Matrix::identity(f, d0.dim(c));
                let zero = Matrix::zeros(f, extra.dim(c), d0.dim(c));
                Matrix::vstack(&[&id, &zero])
            })
            .collect();
        let map = ModuleMap::new(&cat, &d0, &sum, comps);
        (sum, map)
    };
    let (with_proj, into_proj) = split_into(&representable(&cat, 0));
    assert!(has_left_lifting(
        &cat,
        (&d0, &with_proj, &into_proj),
        (&r1, &quot, &proj)
    ));

    // Against a split epi every split mono lifts, whatever the complement.
    let (both, split_in) = split_into(&d1);
    let onto_d1 = ModuleMap::new(
        &cat,
        &both,
        &d1,
        (0..cat.n_objects())
            .map(|c| {
                let zero = Matrix::zeros(f, d1.dim(c), d0.dim(c));
                let id = Matrix::identity(f, d1.dim(c));
                Matrix::hstack(&[&zero, &id])
            })
            .collect(),
    );
    assert!(has_left_lifting(&cat, (&d0, &both, &split_in), (&both, &d1, &onto_d1)));

    // With the non-projective complement the same mono fails against the
    // non-split quotient epi: a lift would hand the epi a section.
    assert!(!has_left_lifting(&cat, (&d0, &both, &split_in), (&r1, &quot, &proj)));
}

#[test]
fn lifting_detects_the_nonsplit_extension() {
    // Retractions of the trace inclusion exist exactly when the sequence
    // 0 -> Tr_1 -> C(1,-) -> Delta_1 -> 0 splits; compare with ext^1.
    for (name, expect_split) in [("qh.reedy", false), ("ksimplex.reedy", true)] {
        let (cat, rs) = build_fixture(name);
        let r1 = representable(&cat, 1);
        let spans = trace_submodule(&cat, &rs, &r1, 1);
        let (sub, incl) = submodule(&cat, &r1, &spans);
        let (quot, _) = quotient_module(&cat, &r1, &spans);
        let z = zero_module(&cat);
        let to_zero = ModuleMap::zero(&cat, &sub, &z);
        let lifted = has_left_lifting(&cat, (&sub, &r1, &incl), (&sub, &z, &to_zero));
        assert_eq!(lifted, expect_split, "{name}");
        let d0 = standard_module(&cat, &rs, 0);
        let e1 = ext(&cat, &rs, &quot, &d0, 1).unwrap();
        assert_eq!(lifted, e1 == 0, "{name}");
    }
}

#[test]
fn sampled_modules_resolve_and_agree_with_hom_at_zero() {
    let (cat, rs) = build_fixture("qh.reedy");
    let mut rng = sample::seeded_rng(19);
    for _ in 0..4 {
        let x = sample::random_module(&cat, &mut rng, 2);
        let y = sample::random_module(&cat, &mut rng, 2);
        let res = projective_resolution(&cat, &rs, &x, None);
        assert!(!res.truncated);
        assert!(res.certified_exact());
        assert_eq!(
            ext_from_resolution(&cat, &res, &y, 0),
            Ok(hom_space_dim(&cat, &x, &y))
        );
    }
}
