//! Finite k-linear categories with Reedy structure.
//!
//! A category is stored as hom dimensions, identity coordinates and one
//! composition matrix per object triple mapping Hom(d,e) (x) Hom(c,d) into
//! Hom(c,e) (Kronecker column order: g-index major). A Reedy structure is a
//! degree per object plus column spans for the raising and lowering
//! subcategories inside each hom space.

use crate::exactla::{swap_tensor, FieldSpec, Matrix};
use crate::exec;

/// A finite k-linear category on finitely many objects.
#[derive(Clone)]
pub struct LinearCategory {
    field: FieldSpec,
    pub objects: Vec<String>,
    hom_dims: Vec<Vec<usize>>,
    pub hom_labels: Vec<Vec<Vec<String>>>,
    /// Coordinates of id_c in the Hom(c,c) basis, one column each.
    pub identities: Vec<Matrix>,
    /// comp[c][d][e]: Hom(d,e) (x) Hom(c,d) -> Hom(c,e).
    comp: Vec<Vec<Vec<Matrix>>>,
}

/// Degree function plus raising/lowering subcategory spans.
#[derive(Clone)]
pub struct ReedyStructure {
    pub degree: Vec<u32>,
    /// plus[c][d]: columns spanning the raising morphisms inside Hom(c,d).
    pub plus: Vec<Vec<Matrix>>,
    pub minus: Vec<Vec<Matrix>>,
}

/// Per-pair spans of a two-sided degree ideal I_{<alpha}.
#[derive(Clone)]
pub struct DegreeIdeal {
    pub alpha: u32,
    /// spans[c][d]: canonical column basis of I_{<alpha}(c,d) in Hom(c,d).
    pub spans: Vec<Vec<Matrix>>,
}

/// Report of a structural verification: verdict plus human-readable
/// violations (empty iff passed).
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub passed: bool,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn from_violations(violations: Vec<String>) -> CheckReport {
        CheckReport {
            passed: violations.is_empty(),
            violations,
        }
    }
}

impl LinearCategory {
    pub fn new(
        field: FieldSpec,
        objects: Vec<String>,
        hom_labels: Vec<Vec<Vec<String>>>,
        identities: Vec<Matrix>,
        comp: Vec<Vec<Vec<Matrix>>>,
    ) -> LinearCategory {
        let n = objects.len();
        assert!(hom_labels.len() == n && identities.len() == n && comp.len() == n);
        let hom_dims: Vec<Vec<usize>> = hom_labels
            .iter()
            .map(|row| row.iter().map(|l| l.len()).collect())
            .collect();
        for c in 0..n {
            assert!(identities[c].rows() == hom_dims[c][c] && identities[c].cols() == 1);
            for d in 0..n {
                for e in 0..n {
                    let m = &comp[c][d][e];
                    assert!(
                        m.rows() == hom_dims[c][e] && m.cols() == hom_dims[d][e] * hom_dims[c][d],
                        "composition matrix shape mismatch at ({c},{d},{e})"
                    );
                }
            }
        }
        LinearCategory {
            field,
            objects,
            hom_dims,
            hom_labels,
            identities,
            comp,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn hom_dim(&self, c: usize, d: usize) -> usize {
        self.hom_dims[c][d]
    }

    pub fn total_dim(&self) -> usize {
        let n = self.n_objects();
        (0..n).map(|c| (0..n).map(|d| self.hom_dims[c][d]).sum::<usize>()).sum()
    }

    pub fn comp_matrix(&self, c: usize, d: usize, e: usize) -> &Matrix {
        &self.comp[c][d][e]
    }

    /// Compose columns: g over Hom(d,e) (m columns), f over Hom(c,d)
    /// (n columns); result has m*n columns, g-index major, holding every
    /// pairwise composite g_j o f_i.
    pub fn compose_cols(&self, c: usize, d: usize, e: usize, g: &Matrix, f: &Matrix) -> Matrix {
        assert!(g.rows() == self.hom_dims[d][e] && f.rows() == self.hom_dims[c][d]);
        self.comp[c][d][e].mul(&g.kron(f))
    }

    /// Single composite g o f of coordinate columns.
    pub fn compose(&self, c: usize, d: usize, e: usize, g: &Matrix, f: &Matrix) -> Matrix {
        assert!(g.cols() == 1 && f.cols() == 1);
        self.compose_cols(c, d, e, g, f)
    }

    /// Standard basis column vector in Hom(c,d).
    pub fn basis_vector(&self, c: usize, d: usize, i: usize) -> Matrix {
        let mut v = Matrix::zeros(self.field, self.hom_dims[c][d], 1);
        v.set(i, 0, self.field.one());
        v
    }

    /// Render a coordinate column as a combination of basis labels.
    pub fn render_hom_vector(&self, c: usize, d: usize, v: &Matrix) -> String {
        render_vector(&self.hom_labels[c][d], v)
    }
}

/// Render a coordinate column over labelled basis elements.
pub fn render_vector(labels: &[String], v: &Matrix) -> String {
    assert!(v.cols() == 1 && v.rows() == labels.len());
    let f = v.field();
    let mut parts = Vec::new();
    for i in 0..v.rows() {
        let s = v.get(i, 0);
        if f.is_zero(s) {
            continue;
        }
        if s == &f.one() {
            parts.push(labels[i].clone());
        } else {
            parts.push(format!("{}*{}", s.render(), labels[i]));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Associativity on every basis triple plus left/right unit laws.
/// Report-valued: lists each violating triple.
pub fn verify_category(cat: &LinearCategory) -> CheckReport {
    let n = cat.n_objects();
    let mut quads = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    quads.push((a, b, c, d));
                }
            }
        }
    }
    let violations_nested = exec::map_vec(quads, |(a, b, c, d)| {
        let mut out = Vec::new();
        // h o (g o f) = (h o g) o f as one matrix identity over
        // Hom(c,d) (x) Hom(b,c) (x) Hom(a,b).
        let lhs = cat
            .comp_matrix(a, c, d)
            .mul(&Matrix::identity(cat.field, cat.hom_dim(c, d)).kron(cat.comp_matrix(a, b, c)));
        let rhs = cat
            .comp_matrix(a, b, d)
            .mul(&cat.comp_matrix(b, c, d).kron(&Matrix::identity(cat.field, cat.hom_dim(a, b))));
        if lhs != rhs {
            let dims = (cat.hom_dim(c, d), cat.hom_dim(b, c), cat.hom_dim(a, b));
            for h in 0..dims.0 {
                for g in 0..dims.1 {
                    for f in 0..dims.2 {
                        let col = (h * dims.1 + g) * dims.2 + f;
                        if lhs.col(col) != rhs.col(col) {
                            out.push(format!(
                                "associativity fails at objects ({},{},{},{}) on basis triple (h={}, g={}, f={})",
                                cat.objects[a], cat.objects[b], cat.objects[c], cat.objects[d],
                                cat.hom_labels[c][d][h], cat.hom_labels[b][c][g], cat.hom_labels[a][b][f],
                            ));
                        }
                    }
                }
            }
        }
        out
    });
    let mut violations: Vec<String> = violations_nested.into_iter().flatten().collect();
    for c in 0..n {
        for d in 0..n {
            for i in 0..cat.hom_dim(c, d) {
                let g = cat.basis_vector(c, d, i);
                let right = cat.compose(c, c, d, &g, &cat.identities[c]);
                if right != g {
                    violations.push(format!(
                        "right unit law fails at {} for {}",
                        cat.objects[c], cat.hom_labels[c][d][i]
                    ));
                }
                let left = cat.compose(c, d, d, &cat.identities[d], &g);
                if left != g {
                    violations.push(format!(
                        "left unit law fails at {} for {}",
                        cat.objects[d], cat.hom_labels[c][d][i]
                    ));
                }
            }
        }
    }
    CheckReport::from_violations(violations)
}

impl ReedyStructure {
    /// Close generating spans into genuine subcategories: add identities,
    /// then saturate under composition. Spans come echelonized.
    pub fn from_generators(
        cat: &LinearCategory,
        degree: Vec<u32>,
        plus_gens: Vec<Vec<Matrix>>,
        minus_gens: Vec<Vec<Matrix>>,
    ) -> ReedyStructure {
        assert!(degree.len() == cat.n_objects());
        let plus = close_under_composition(cat, plus_gens);
        let minus = close_under_composition(cat, minus_gens);
        ReedyStructure { degree, plus, minus }
    }

    pub fn max_degree(&self) -> u32 {
        self.degree.iter().copied().max().unwrap_or(0)
    }
}

/// Smallest spans containing the generators, the identities, and closed
/// under composition.
pub fn close_under_composition(cat: &LinearCategory, gens: Vec<Vec<Matrix>>) -> Vec<Vec<Matrix>> {
    let n = cat.n_objects();
    let f = cat.field();
    assert!(gens.len() == n && gens.iter().all(|r| r.len() == n));
    let mut spans: Vec<Vec<Matrix>> = gens;
    for c in 0..n {
        spans[c][c] = Matrix::sum_spans(
            f,
            cat.hom_dim(c, c),
            &[&spans[c][c], &cat.identities[c]],
        );
    }
    loop {
        let mut changed = false;
        for c in 0..n {
            for d in 0..n {
                for e in 0..n {
                    if spans[c][d].cols() == 0 || spans[d][e].cols() == 0 {
                        continue;
                    }
                    let prod = cat.compose_cols(c, d, e, &spans[d][e], &spans[c][d]);
                    if !spans[c][e].col_space_contains(&prod) {
                        spans[c][e] =
                            Matrix::sum_spans(f, cat.hom_dim(c, e), &[&spans[c][e], &prod]);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for c in 0..n {
        for d in 0..n {
            spans[c][d] = spans[c][d].image_basis();
        }
    }
    spans
}

/// Verify the Reedy axioms on top of a verified category:
/// (a) the raising/lowering spans contain identities and are closed under
///     composition, (b) their endomorphism spaces are exactly k*id,
/// (c) nonzero non-endomorphisms strictly raise resp. lower the degree,
/// (d) composition induces a bijection (+)_e C+(e,d) (x) C-(c,e) = C(c,d).
pub fn verify_reedy(cat: &LinearCategory, rs: &ReedyStructure) -> CheckReport {
    let mut violations = Vec::new();
    let base = verify_category(cat);
    violations.extend(base.violations.iter().map(|v| format!("category: {v}")));

    let n = cat.n_objects();
    for (name, spans) in [("plus", &rs.plus), ("minus", &rs.minus)] {
        for c in 0..n {
            if !spans[c][c].col_space_contains(&cat.identities[c]) {
                violations.push(format!(
                    "{name} subcategory misses the identity at {}",
                    cat.objects[c]
                ));
            }
            if spans[c][c].rank() != 1 {
                violations.push(format!(
                    "End restricted to {name} at {} has dimension {}, expected 1",
                    cat.objects[c],
                    spans[c][c].rank()
                ));
            }
        }
        for c in 0..n {
            for d in 0..n {
                for e in 0..n {
                    if spans[c][d].cols() == 0 || spans[d][e].cols() == 0 {
                        continue;
                    }
                    let prod = cat.compose_cols(c, d, e, &spans[d][e], &spans[c][d]);
                    if !spans[c][e].col_space_contains(&prod) {
                        violations.push(format!(
                            "{name} subcategory not closed under composition at ({},{},{})",
                            cat.objects[c], cat.objects[d], cat.objects[e]
                        ));
                    }
                }
                if c != d && spans[c][d].rank() > 0 {
                    let (dc, dd) = (rs.degree[c], rs.degree[d]);
                    let ok = if name == "plus" { dc < dd } else { dc > dd };
                    if !ok {
                        violations.push(format!(
                            "{name} morphisms {} -> {} violate strict degree {} (deg {} vs {})",
                            cat.objects[c],
                            cat.objects[d],
                            if name == "plus" { "raising" } else { "lowering" },
                            dc,
                            dd
                        ));
                    }
                }
            }
        }
    }

    // (d) bijectivity of the factorization map, pair by pair.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|c| (0..n).map(move |d| (c, d))).collect();
    let fact_violations = exec::map_vec(pairs, |(c, d)| {
        let m = factorization_matrix(cat, rs, c, d, None);
        let dim = cat.hom_dim(c, d);
        if m.cols() != dim || m.rank() != dim {
            Some(format!(
                "factorization map at ({},{}) is not bijective: domain dim {}, rank {}, hom dim {}",
                cat.objects[c],
                cat.objects[d],
                m.cols(),
                m.rank(),
                dim
            ))
        } else {
            None
        }
    });
    violations.extend(fact_violations.into_iter().flatten());
    CheckReport::from_violations(violations)
}

/// Matrix of the composition map (+)_e C+(e,d) (x) C-(c,e) -> C(c,d),
/// restricted to middle objects of degree < alpha when given.
/// Columns are ordered by middle object, then plus basis major / minus minor.
pub fn factorization_matrix(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    c: usize,
    d: usize,
    below: Option<u32>,
) -> Matrix {
    let n = cat.n_objects();
    let mut blocks = Vec::new();
    for e in 0..n {
        if let Some(alpha) = below {
            if rs.degree[e] >= alpha {
                continue;
            }
        }
        let p = &rs.plus[e][d];
        let m = &rs.minus[c][e];
        if p.cols() == 0 || m.cols() == 0 {
            continue;
        }
        blocks.push(cat.compose_cols(c, e, d, p, m));
    }
    if blocks.is_empty() {
        return Matrix::zeros(cat.field(), cat.hom_dim(c, d), 0);
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::hstack(&refs)
}

/// The two-sided ideal of morphisms factoring through objects of degree
/// < alpha. Two-sidedness is asserted on every basis pair.
pub fn degree_ideal(cat: &LinearCategory, rs: &ReedyStructure, alpha: u32) -> DegreeIdeal {
    let n = cat.n_objects();
    let f = cat.field();
    let mut spans = vec![vec![Matrix::zeros(f, 0, 0); n]; n];
    for c in 0..n {
        for d in 0..n {
            spans[c][d] = factorization_matrix(cat, rs, c, d, Some(alpha)).image_basis();
        }
    }
    // Two-sidedness certificate: composing any hom basis element on either
    // side stays inside the ideal spans.
    for c in 0..n {
        for d in 0..n {
            if spans[c][d].cols() == 0 {
                continue;
            }
            for e in 0..n {
                if cat.hom_dim(d, e) > 0 {
                    let post = cat.compose_cols(
                        c,
                        d,
                        e,
                        &Matrix::identity(f, cat.hom_dim(d, e)),
                        &spans[c][d],
                    );
                    assert!(
                        spans[c][e].col_space_contains(&post),
                        "degree ideal is not right-stable at ({c},{d},{e})"
                    );
                }
                if cat.hom_dim(e, c) > 0 {
                    let pre = cat.compose_cols(
                        e,
                        c,
                        d,
                        &spans[c][d],
                        &Matrix::identity(f, cat.hom_dim(e, c)),
                    );
                    assert!(
                        spans[e][d].col_space_contains(&pre),
                        "degree ideal is not left-stable at ({e},{c},{d})"
                    );
                }
            }
        }
    }
    DegreeIdeal { alpha, spans }
}

/// Quotient by the degree ideal: keep objects of degree >= alpha, divide
/// each hom space by I_{<alpha}, re-base degrees at zero. Returns the empty
/// category when no object survives.
pub fn quotient_category(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    alpha: u32,
) -> (LinearCategory, ReedyStructure) {
    let ideal = degree_ideal(cat, rs, alpha);
    let n = cat.n_objects();
    let f = cat.field();
    let kept: Vec<usize> = (0..n).filter(|&c| rs.degree[c] >= alpha).collect();
    let k = kept.len();

    // Quotient maps per kept pair.
    let mut proj = vec![vec![Matrix::zeros(f, 0, 0); k]; k];
    let mut sect = vec![vec![Matrix::zeros(f, 0, 0); k]; k];
    let mut labels = vec![vec![Vec::new(); k]; k];
    for (ci, &c) in kept.iter().enumerate() {
        for (di, &d) in kept.iter().enumerate() {
            let span = &ideal.spans[c][d];
            let padded = if span.cols() == 0 {
                Matrix::zeros(f, cat.hom_dim(c, d), 0)
            } else {
                span.clone()
            };
            let (q, s, dim) = padded.cokernel_parts();
            // Section columns are standard basis vectors at surviving
            // coordinates, so quotient labels inherit from those coordinates.
            let mut lab = Vec::new();
            for j in 0..dim {
                let idx = (0..s.rows())
                    .find(|&i| !f.is_zero(s.get(i, j)))
                    .expect("section column is a standard basis vector");
                lab.push(cat.hom_labels[c][d][idx].clone());
            }
            proj[ci][di] = q;
            sect[ci][di] = s;
            labels[ci][di] = lab;
        }
    }

    let mut identities = Vec::new();
    for (ci, &c) in kept.iter().enumerate() {
        identities.push(proj[ci][ci].mul(&cat.identities[c]));
    }
    let mut comp = vec![vec![vec![Matrix::zeros(f, 0, 0); k]; k]; k];
    for (ci, &c) in kept.iter().enumerate() {
        for (di, &d) in kept.iter().enumerate() {
            for (ei, &e) in kept.iter().enumerate() {
                comp[ci][di][ei] = proj[ci][ei]
                    .mul(cat.comp_matrix(c, d, e))
                    .mul(&sect[di][ei].kron(&sect[ci][di]));
            }
        }
    }
    let qcat = LinearCategory::new(
        f,
        kept.iter().map(|&c| cat.objects[c].clone()).collect(),
        labels,
        identities,
        comp,
    );
    let mut plus = vec![vec![Matrix::zeros(f, 0, 0); k]; k];
    let mut minus = vec![vec![Matrix::zeros(f, 0, 0); k]; k];
    for (ci, &c) in kept.iter().enumerate() {
        for (di, &d) in kept.iter().enumerate() {
            plus[ci][di] = proj[ci][di].mul(&rs.plus[c][d]).image_basis();
            minus[ci][di] = proj[ci][di].mul(&rs.minus[c][d]).image_basis();
        }
    }
    let degree = kept.iter().map(|&c| rs.degree[c] - alpha).collect();
    (qcat, ReedyStructure { degree, plus, minus })
}

/// Opposite category: homs transposed, composition reversed.
pub fn opposite(cat: &LinearCategory) -> LinearCategory {
    let n = cat.n_objects();
    let f = cat.field();
    let mut labels = vec![vec![Vec::new(); n]; n];
    let mut comp = vec![vec![vec![Matrix::zeros(f, 0, 0); n]; n]; n];
    for c in 0..n {
        for d in 0..n {
            labels[c][d] = cat.hom_labels[d][c].clone();
        }
    }
    for c in 0..n {
        for d in 0..n {
            for e in 0..n {
                // g' o_op f' = f' o g' for g' in Hom(e,d), f' in Hom(d,c).
                let m = cat.hom_dim(e, d);
                let nn = cat.hom_dim(d, c);
                comp[c][d][e] = cat.comp_matrix(e, d, c).mul(&swap_tensor(f, m, nn));
            }
        }
    }
    LinearCategory::new(
        f,
        cat.objects.clone(),
        labels,
        cat.identities.clone(),
        comp,
    )
}

/// Opposite Reedy structure: raising and lowering swap.
pub fn opposite_reedy(rs: &ReedyStructure) -> ReedyStructure {
    let n = rs.degree.len();
    let mut plus = vec![Vec::with_capacity(n); n];
    let mut minus = vec![Vec::with_capacity(n); n];
    for c in 0..n {
        for d in 0..n {
            plus[c].push(rs.minus[d][c].clone());
            minus[c].push(rs.plus[d][c].clone());
        }
    }
    ReedyStructure {
        degree: rs.degree.clone(),
        plus,
        minus,
    }
}

/// A wide subcategory cut out by composition-closed spans. Returns the
/// subcategory together with per-pair inclusion matrices (columns = chosen
/// basis of the span inside the ambient hom space).
pub fn subcategory(
    cat: &LinearCategory,
    spans: &[Vec<Matrix>],
) -> (LinearCategory, Vec<Vec<Matrix>>) {
    let n = cat.n_objects();
    let f = cat.field();
    let mut incl = vec![vec![Matrix::zeros(f, 0, 0); n]; n];
    let mut labels = vec![vec![Vec::new(); n]; n];
    for c in 0..n {
        for d in 0..n {
            let b = spans[c][d].image_basis();
            labels[c][d] = (0..b.cols())
                .map(|j| render_vector(&cat.hom_labels[c][d], &b.col(j)))
                .collect();
            incl[c][d] = b;
        }
    }
    let mut identities = Vec::new();
    for c in 0..n {
        let id = incl[c][c]
            .solve(&cat.identities[c])
            .expect("identity must lie in the subcategory span");
        identities.push(id);
    }
    let mut comp = vec![vec![vec![Matrix::zeros(f, 0, 0); n]; n]; n];
    for c in 0..n {
        for d in 0..n {
            for e in 0..n {
                let prod = cat.compose_cols(c, d, e, &incl[d][e], &incl[c][d]);
                comp[c][d][e] = incl[c][e]
                    .solve(&prod)
                    .expect("span is not closed under composition");
            }
        }
    }
    (
        LinearCategory::new(f, cat.objects.clone(), labels, identities, comp),
        incl,
    )
}

/// Full subcategory on an object subset (indices into cat.objects).
pub fn full_subcategory(cat: &LinearCategory, objs: &[usize]) -> LinearCategory {
    let f = cat.field();
    let k = objs.len();
    let mut labels = vec![vec![Vec::new(); k]; k];
    let mut comp = vec![vec![vec![Matrix::zeros(f, 0, 0); k]; k]; k];
    for (ci, &c) in objs.iter().enumerate() {
        for (di, &d) in objs.iter().enumerate() {
            labels[ci][di] = cat.hom_labels[c][d].clone();
            for (ei, &e) in objs.iter().enumerate() {
                comp[ci][di][ei] = cat.comp_matrix(c, d, e).clone();
            }
        }
    }
    LinearCategory::new(
        f,
        objs.iter().map(|&c| cat.objects[c].clone()).collect(),
        labels,
        objs.iter().map(|&c| cat.identities[c].clone()).collect(),
        comp,
    )
}

/// Restriction of a Reedy structure to a full subcategory on `objs`.
pub fn restrict_reedy(rs: &ReedyStructure, objs: &[usize]) -> ReedyStructure {
    ReedyStructure {
        degree: objs.iter().map(|&c| rs.degree[c]).collect(),
        plus: objs
            .iter()
            .map(|&c| objs.iter().map(|&d| rs.plus[c][d].clone()).collect())
            .collect(),
        minus: objs
            .iter()
            .map(|&c| objs.iter().map(|&d| rs.minus[c][d].clone()).collect())
            .collect(),
    }
}

/// Inverse-category Reedy structure on a lowering subcategory seen as a
/// category in its own right: raising part shrinks to the identities,
/// lowering part is everything.
pub fn inverse_reedy(cat: &LinearCategory, degree: Vec<u32>) -> ReedyStructure {
    let n = cat.n_objects();
    let f = cat.field();
    let mut plus = vec![vec![Matrix::zeros(f, 0, 0); n]; n];
    let mut minus = vec![vec![Matrix::zeros(f, 0, 0); n]; n];
    for c in 0..n {
        for d in 0..n {
            plus[c][d] = if c == d {
                cat.identities[c].image_basis()
            } else {
                Matrix::zeros(f, cat.hom_dim(c, d), 0)
            };
            minus[c][d] = Matrix::identity(f, cat.hom_dim(c, d)).image_basis();
        }
    }
    ReedyStructure {
        degree,
        plus,
        minus,
    }
}
