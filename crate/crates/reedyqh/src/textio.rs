//! Text renderers inverse to the file parsers.
//!
//! `roundtrip` re-emits a parsed presentation or diagram in the documented
//! syntax, reparses the result, and compares the rebuilt structures entry
//! by entry. The renderers here only use documented syntax, so a mismatch
//! means either parser or renderer dropped information.

use reedyqh_core::diagrams::{base_slice, value_at, DiagramContext};
use reedyqh_core::exactla::{FieldSpec, Matrix};
use reedyqh_core::lincat::LinearCategory;
use reedyqh_core::presentation::{BuiltCategory, PresentationFile, Quiver, RelationExpr};
use reedyqh_core::repmod::CatModule;

pub fn field_name(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rationals => "Q".to_string(),
        FieldSpec::PrimeField(p) => format!("GF({p})"),
    }
}

pub fn render_presentation(pf: &PresentationFile) -> String {
    let q = &pf.quiver;
    let mut out = String::from("[field]\n");
    match pf.field {
        FieldSpec::Rationals => out.push_str("kind = Q\n"),
        FieldSpec::PrimeField(p) => out.push_str(&format!("kind = GF\np = {p}\n")),
    }
    out.push_str("\n[quiver]\n");
    out.push_str(&format!("vertices = {}\n", q.vertices.join(" ")));
    for a in &q.arrows {
        out.push_str(&format!(
            "arrow {} : {} -> {}\n",
            a.name, q.vertices[a.source], q.vertices[a.target]
        ));
    }
    if !pf.relations.is_empty() {
        out.push_str("\n[relations]\n");
        for rel in &pf.relations {
            out.push_str(&render_relation(rel, q));
            out.push('\n');
        }
    }
    out.push_str(&format!("\n[limits]\nmaxlen = {}\n", pf.maxlen));
    if let Some(rs) = &pf.reedy {
        out.push_str("\n[reedy]\n");
        for (v, name) in q.vertices.iter().enumerate() {
            out.push_str(&format!("degree {name} = {}\n", rs.degree[v]));
        }
        let names = |idx: &[usize]| {
            idx.iter()
                .map(|&i| q.arrows[i].name.clone())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("plus = {}\n", names(&rs.plus)));
        out.push_str(&format!("minus = {}\n", names(&rs.minus)));
    }
    out
}

/// Signs are normalized: each term renders with an explicit coefficient,
/// negative rationals move into a leading or infix minus.
fn render_relation(rel: &RelationExpr, q: &Quiver) -> String {
    let mut out = String::new();
    for (i, (coef, path)) in rel.terms.iter().enumerate() {
        let rendered = coef.render();
        let (negative, mag) = match rendered.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, rendered),
        };
        if i == 0 {
            if negative {
                out.push_str("- ");
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&format!("{mag}*{}", path.render(q)));
    }
    out
}

pub fn matrix_text(m: &Matrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return ".".to_string();
    }
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).render())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

/// Re-emit a diagram as a `[diagram]` section. Statements whose blocks are
/// all zero-dimensional are omitted, matching what the parser tolerates.
pub fn render_diagram(
    ctx: &DiagramContext,
    base_q: &Quiver,
    base_built: &BuiltCategory,
    coeff_q: &Quiver,
    coeff_built: &BuiltCategory,
    x: &CatModule,
) -> String {
    let f = ctx.gamma.field();
    let nv = ctx.nv();
    let mut out = String::from("[diagram]\n");
    for (c, name) in base_q.vertices.iter().enumerate() {
        let dims: Vec<String> = (0..nv).map(|v| x.dim(ctx.obj(c, v)).to_string()).collect();
        out.push_str(&format!("dim {name} = {}\n", dims.join(" ")));
    }
    for (c, name) in base_q.vertices.iter().enumerate() {
        let value = value_at(ctx, x, c);
        for (ai, arrow) in coeff_q.arrows.iter().enumerate() {
            let (u, w) = (arrow.source, arrow.target);
            if value.dim(u) == 0 || value.dim(w) == 0 {
                continue;
            }
            let class = &coeff_built.arrow_classes[ai];
            let m = value
                .action(u, w)
                .mul(&class.kron(&Matrix::identity(f, value.dim(u))));
            out.push_str(&format!("act {name} {} = {}\n", arrow.name, matrix_text(&m)));
        }
    }
    for (gi, arrow) in base_q.arrows.iter().enumerate() {
        let (a, b) = (arrow.source, arrow.target);
        let class = &base_built.arrow_classes[gi];
        let mut blocks = Vec::with_capacity(nv);
        let mut any = false;
        for v in 0..nv {
            let slice = base_slice(ctx, x, v);
            if slice.dim(a) == 0 || slice.dim(b) == 0 {
                blocks.push(".".to_string());
                continue;
            }
            any = true;
            let m = slice
                .action(a, b)
                .mul(&class.kron(&Matrix::identity(f, slice.dim(a))));
            blocks.push(matrix_text(&m));
        }
        if any {
            out.push_str(&format!("map {} = {}\n", arrow.name, blocks.join(" | ")));
        }
    }
    out
}

pub fn categories_equal(a: &LinearCategory, b: &LinearCategory) -> bool {
    let n = a.n_objects();
    if n != b.n_objects() || a.field() != b.field() || a.objects != b.objects {
        return false;
    }
    for c in 0..n {
        if a.identities[c] != b.identities[c] {
            return false;
        }
        for d in 0..n {
            if a.hom_dim(c, d) != b.hom_dim(c, d) {
                return false;
            }
            for e in 0..n {
                if a.comp_matrix(c, d, e) != b.comp_matrix(c, d, e) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn built_equal(a: &BuiltCategory, b: &BuiltCategory) -> bool {
    if !categories_equal(&a.category, &b.category) {
        return false;
    }
    match (&a.reedy, &b.reedy) {
        (None, None) => true,
        (Some(x), Some(y)) => {
            x.degree == y.degree
                && x.plus == y.plus
                && x.minus == y.minus
        }
        _ => false,
    }
}

pub fn modules_equal(cat: &LinearCategory, a: &CatModule, b: &CatModule) -> bool {
    let n = cat.n_objects();
    if a.dims() != b.dims() {
        return false;
    }
    for c in 0..n {
        for d in 0..n {
            if a.action(c, d) != b.action(c, d) {
                return false;
            }
        }
    }
    true
}
