//! Projective resolutions by representable covers, tensor and hom over
//! the category, Ext and Tor dimensions, and the lifting-property test
//! used by the cotorsion machinery.

use crate::exactla::{FieldSpec, Matrix};
use crate::exec;
use crate::lincat::{opposite, opposite_reedy, LinearCategory, ReedyStructure};
use crate::repmod::{
    costandard_module, direct_sum, hom_space, jacobson_radical, kernel_module,
    quotient_with_sections, radical_submodule_spans, representable, simple_modules,
    standard_module, yoneda_map, CatModule, ModuleMap,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomalgError {
    /// A derived functor was requested past the point where the resolution
    /// was cut off with a nonzero kernel.
    #[error("resolution-truncated: degree {needed} needs terms past index {top}")]
    ResolutionTruncated { needed: usize, top: usize },
}

/// A complex of sums of representables augmented over a module,
/// built left to right: ... -> P_1 -> P_0 -> X -> 0.
pub struct Resolution {
    pub modules: Vec<CatModule>,
    /// diffs[i] maps modules[i + 1] into modules[i].
    pub diffs: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
    /// parts[i] lists the object of each representable summand of modules[i].
    pub parts: Vec<Vec<usize>>,
    /// Per-position rank certificate that homology vanishes there.
    pub exact_at: Vec<bool>,
    pub truncated: bool,
}

impl Resolution {
    pub fn top_index(&self) -> Option<usize> {
        self.modules.len().checked_sub(1)
    }

    pub fn certified_exact(&self) -> bool {
        !self.truncated && self.exact_at.iter().all(|b| *b)
    }
}

pub fn category_total_dim(cat: &LinearCategory) -> usize {
    let n = cat.n_objects();
    (0..n)
        .map(|c| (0..n).map(|d| cat.hom_dim(c, d)).sum::<usize>())
        .sum()
}

/// Sum of representables at the seed objects, mapping onto the target by
/// the Yoneda maps of the seed elements. Panics if the seeds do not cover.
fn representable_cover(
    cat: &LinearCategory,
    seeds: &[(usize, Matrix)],
    target: &CatModule,
) -> (CatModule, Vec<usize>, ModuleMap) {
    let n = cat.n_objects();
    let f = cat.field();
    let parts: Vec<usize> = seeds.iter().map(|(c, _)| *c).collect();
    let reps: Vec<CatModule> = parts.iter().map(|c| representable(cat, *c)).collect();
    let refs: Vec<&CatModule> = reps.iter().collect();
    let p = direct_sum(cat, &refs);
    let maps: Vec<ModuleMap> = seeds
        .iter()
        .map(|(c, v)| yoneda_map(cat, *c, target, v))
        .collect();
    let comps: Vec<Matrix> = (0..n)
        .map(|d| {
            let cols: Vec<&Matrix> = maps.iter().map(|m| &m.comps[d]).collect();
            if cols.is_empty() {
                Matrix::zeros(f, target.dim(d), 0)
            } else {
                Matrix::hstack(&cols)
            }
        })
        .collect();
    let cover = ModuleMap::new(cat, &p, target, comps);
    for d in 0..n {
        assert!(
            cover.comps[d].rank() == target.dim(d),
            "cover misses object {d}"
        );
    }
    (p, parts, cover)
}

/// The full basis of x as Yoneda seeds, one representable per basis vector.
fn full_seeds(cat: &LinearCategory, x: &CatModule) -> Vec<(usize, Matrix)> {
    let f = cat.field();
    let mut seeds = Vec::new();
    for c in 0..cat.n_objects() {
        for i in 0..x.dim(c) {
            let mut v = Matrix::zeros(f, x.dim(c), 1);
            v.set(i, 0, f.one());
            seeds.push((c, v));
        }
    }
    seeds
}

/// Seeds for a cover of x: one representable at c per copy of the simple
/// L_c inside x modulo its radical, lifted through a linear section.
/// Covering a copy of L_c by C(c,-) leaves only summands of strictly
/// lower degree in the kernel, so once the kernels turn projective the
/// tail of the resolution closes after finitely many steps. Seeding by
/// object-local bases instead would re-cover a simple once per object in
/// its support and the kernels would grow forever.
fn minimal_seeds(
    cat: &LinearCategory,
    j: &[Vec<Matrix>],
    simples: &[CatModule],
    x: &CatModule,
) -> Vec<(usize, Matrix)> {
    let jx = radical_submodule_spans(cat, j, x);
    let top = quotient_with_sections(cat, x, &jx);
    let mut seeds = Vec::new();
    for (c, l_c) in simples.iter().enumerate() {
        assert!(l_c.dim(c) == 1, "a simple is scalar at its own object");
        for psi in hom_space(cat, l_c, &top.module) {
            seeds.push((c, top.sections[c].mul(&psi.comps[c].col(0))));
        }
    }
    seeds
}

/// Resolve x by sums of representables. The first term is the full
/// evaluation cover ⊕_c C(c,-)⊗X(c); every later kernel is covered on the
/// simple copies of its top so that the tail of the resolution stays
/// small and stops. `cap` bounds the top index and defaults to the total
/// dimension of the category.
pub fn projective_resolution(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    x: &CatModule,
    cap: Option<usize>,
) -> Resolution {
    let f = cat.field();
    let n = cat.n_objects();
    let cap = cap.unwrap_or_else(|| category_total_dim(cat));
    if x.is_zero() {
        return Resolution {
            modules: Vec::new(),
            diffs: Vec::new(),
            augmentation: ModuleMap {
                comps: (0..n).map(|c| Matrix::zeros(f, x.dim(c), 0)).collect(),
            },
            parts: Vec::new(),
            exact_at: Vec::new(),
            truncated: false,
        };
    }
    // A small field can block the radical or the simples; covers then
    // stay full and the cap is the only termination guarantee.
    let radical = jacobson_radical(cat).ok();
    let simples = simple_modules(cat, rs).ok();

    let seeds0 = full_seeds(cat, x);
    let (p0, parts0, augmentation) = representable_cover(cat, &seeds0, x);
    let mut modules = vec![p0];
    let mut parts = vec![parts0];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let mut truncated = false;
    loop {
        let src = modules.last().unwrap();
        let out_map = diffs.last().unwrap_or(&augmentation);
        let (k, incl) = kernel_module(cat, src, out_map);
        if k.is_zero() {
            break;
        }
        if modules.len() > cap {
            truncated = true;
            break;
        }
        let seeds = match (&radical, &simples) {
            (Some(j), Some(s)) => minimal_seeds(cat, j, s, &k),
            _ => full_seeds(cat, &k),
        };
        let (p, parts_n, cover) = representable_cover(cat, &seeds, &k);
        let d = incl.compose(&cover);
        diffs.push(d);
        modules.push(p);
        parts.push(parts_n);
    }

    // Certificates: d compose d vanishes and homology is zero by ranks.
    let mut exact_at = vec![true; modules.len()];
    for i in 0..modules.len() {
        let out_map = if i == 0 { &augmentation } else { &diffs[i - 1] };
        if i + 1 < modules.len() {
            for c in 0..n {
                assert!(
                    out_map.comps[c].mul(&diffs[i].comps[c]).is_zero(),
                    "differentials do not square to zero"
                );
            }
        }
        for c in 0..n {
            let ker = modules[i].dim(c) - out_map.comps[c].rank();
            let im = if i + 1 < modules.len() {
                diffs[i].comps[c].rank()
            } else {
                0
            };
            if ker != im {
                exact_at[i] = false;
            }
        }
    }
    if truncated {
        // Only the final position may carry homology.
        for (i, e) in exact_at.iter().enumerate().take(modules.len() - 1) {
            assert!(*e, "truncated resolution inexact at interior step {i}");
        }
    }
    Resolution {
        modules,
        diffs,
        augmentation,
        parts,
        exact_at,
        truncated,
    }
}

/// The tensor product of a right module (a module over the opposite
/// category) with a left module: the sum of W(c)⊗X(c) modulo the span of
/// W(r)(w)⊗x - w⊗X(r)(x) over basis morphisms and basis vectors.
#[derive(Clone)]
pub struct TensorData {
    pub dim: usize,
    /// Projection from the graded sum onto the tensor product.
    pub q: Matrix,
    /// Section of the projection.
    pub s: Matrix,
    /// Block offsets per object; within a block the W index is major.
    pub offsets: Vec<usize>,
}

pub fn tensor_over_c(cat: &LinearCategory, w: &CatModule, x: &CatModule) -> TensorData {
    let n = cat.n_objects();
    let f = cat.field();
    let mut offsets = vec![0usize; n + 1];
    for c in 0..n {
        offsets[c + 1] = offsets[c] + w.dim(c) * x.dim(c);
    }
    let total = offsets[n];
    let mut cols: Vec<Matrix> = Vec::new();
    for c in 0..n {
        for d in 0..n {
            let h = cat.hom_dim(c, d);
            if w.dim(d) == 0 || x.dim(c) == 0 {
                continue;
            }
            // Right action by morphisms of Hom(c,d) moves W(d) to W(c).
            let wr = w.action(d, c);
            let xr = x.action(c, d);
            for i in 0..h {
                for j in 0..w.dim(d) {
                    for l in 0..x.dim(c) {
                        let mut v = Matrix::zeros(f, total, 1);
                        for a in 0..w.dim(c) {
                            let row = offsets[c] + a * x.dim(c) + l;
                            let coeff = wr.get(a, i * w.dim(d) + j).clone();
                            let cur = f.add(v.get(row, 0), &coeff);
                            v.set(row, 0, cur);
                        }
                        for b in 0..x.dim(d) {
                            let row = offsets[d] + j * x.dim(d) + b;
                            let coeff = f.neg(xr.get(b, i * x.dim(c) + l));
                            let cur = f.add(v.get(row, 0), &coeff);
                            v.set(row, 0, cur);
                        }
                        cols.push(v);
                    }
                }
            }
        }
    }
    let rel = if cols.is_empty() {
        Matrix::zeros(f, total, 0)
    } else {
        let refs: Vec<&Matrix> = cols.iter().collect();
        Matrix::hstack(&refs)
    };
    let (q, s, dim) = rel.cokernel_parts();
    TensorData { dim, q, s, offsets }
}

/// Matrix induced on tensor products by a map of left modules.
pub fn tensor_map_left(
    cat: &LinearCategory,
    w: &CatModule,
    src: &TensorData,
    dst: &TensorData,
    phi: &ModuleMap,
) -> Matrix {
    let f = cat.field();
    let blocks: Vec<Matrix> = (0..cat.n_objects())
        .map(|c| Matrix::identity(f, w.dim(c)).kron(&phi.comps[c]))
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    dst.q.mul(&Matrix::block_diag(f, &refs)).mul(&src.s)
}

/// Matrix induced on tensor products by a map of right modules.
pub fn tensor_map_right(
    cat: &LinearCategory,
    x: &CatModule,
    src: &TensorData,
    dst: &TensorData,
    phi: &ModuleMap,
) -> Matrix {
    let f = cat.field();
    let blocks: Vec<Matrix> = (0..cat.n_objects())
        .map(|c| phi.comps[c].kron(&Matrix::identity(f, x.dim(c))))
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    dst.q.mul(&Matrix::block_diag(f, &refs)).mul(&src.s)
}

/// Natural transformations from u to x: the end of Hom(u(c), x(c)).
pub fn hom_over_c(cat: &LinearCategory, u: &CatModule, x: &CatModule) -> (usize, Vec<ModuleMap>) {
    let basis = hom_space(cat, u, x);
    (basis.len(), basis)
}

pub(crate) fn vec_of_map(f: FieldSpec, comps: &[Matrix]) -> Matrix {
    let total: usize = comps.iter().map(|m| m.rows() * m.cols()).sum();
    let mut v = Matrix::zeros(f, total, 1);
    let mut off = 0;
    for m in comps {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                v.set(off + i * m.cols() + j, 0, m.get(i, j).clone());
            }
        }
        off += m.rows() * m.cols();
    }
    v
}

/// Coordinates of a natural map in a hom-space basis.
pub(crate) fn coords_in_basis(f: FieldSpec, basis: &[ModuleMap], m: &ModuleMap) -> Matrix {
    let cols: Vec<Matrix> = basis.iter().map(|b| vec_of_map(f, &b.comps)).collect();
    let refs: Vec<&Matrix> = cols.iter().collect();
    let target = vec_of_map(f, &m.comps);
    if basis.is_empty() {
        assert!(target.is_zero(), "map outside the trivial hom space");
        return Matrix::zeros(f, 0, 1);
    }
    Matrix::hstack(&refs)
        .solve(&target)
        .expect("composite lies in the hom space")
}

/// dim Ext^n(X, Y) from a resolution of X.
pub fn ext_from_resolution(
    cat: &LinearCategory,
    res: &Resolution,
    y: &CatModule,
    n: usize,
) -> Result<usize, HomalgError> {
    let f = cat.field();
    let top = match res.top_index() {
        None => return Ok(0),
        Some(t) => t,
    };
    if res.truncated && n >= top {
        return Err(HomalgError::ResolutionTruncated { needed: n, top });
    }
    if n > top {
        return Ok(0);
    }
    let basis_at = |i: usize| hom_space(cat, &res.modules[i], y);
    // delta(i): Hom(P_i, Y) -> Hom(P_{i+1}, Y) by precomposition with d_{i+1}.
    let delta = |src: &[ModuleMap], dst: &[ModuleMap], i: usize| -> Matrix {
        let mut m = Matrix::zeros(f, dst.len(), src.len());
        for (col, psi) in src.iter().enumerate() {
            let composed = psi.compose(&res.diffs[i]);
            let coords = coords_in_basis(f, dst, &composed);
            for row in 0..dst.len() {
                m.set(row, col, coords.get(row, 0).clone());
            }
        }
        m
    };
    let cur = basis_at(n);
    let ker = if n == top {
        cur.len()
    } else {
        let next = basis_at(n + 1);
        let d_out = delta(&cur, &next, n);
        d_out.kernel_basis().cols()
    };
    let im = if n == 0 {
        0
    } else {
        let prev = basis_at(n - 1);
        let d_in = delta(&prev, &cur, n - 1);
        if n < top {
            let next = basis_at(n + 1);
            let d_out = delta(&cur, &next, n);
            assert!(d_out.mul(&d_in).is_zero(), "hom complex differential squares");
        }
        d_in.rank()
    };
    Ok(ker - im)
}

/// dim Ext^n(X, Y) with a fresh resolution of X, capped at the default.
pub fn ext(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    x: &CatModule,
    y: &CatModule,
    n: usize,
) -> Result<usize, HomalgError> {
    let res = projective_resolution(cat, rs, x, None);
    ext_from_resolution(cat, &res, y, n)
}

/// dim Tor_n(W, X) from a resolution of the right module W over the
/// opposite category, tensored with X.
pub fn tor_from_resolution(
    cat: &LinearCategory,
    res: &Resolution,
    x: &CatModule,
    n: usize,
) -> Result<usize, HomalgError> {
    let top = match res.top_index() {
        None => return Ok(0),
        Some(t) => t,
    };
    if res.truncated && n >= top {
        return Err(HomalgError::ResolutionTruncated { needed: n, top });
    }
    if n > top {
        return Ok(0);
    }
    let tens: Vec<TensorData> = (0..=top.min(n + 1))
        .map(|i| tensor_over_c(cat, &res.modules[i], x))
        .collect();
    let bar = |i: usize| tensor_map_right(cat, x, &tens[i + 1], &tens[i], &res.diffs[i]);
    let ker = if n == 0 {
        tens[0].dim
    } else {
        bar(n - 1).kernel_basis().cols()
    };
    let im = if n == top {
        0
    } else {
        let d_in = bar(n);
        if n > 0 {
            assert!(bar(n - 1).mul(&d_in).is_zero(), "tensor complex differential squares");
        }
        d_in.rank()
    };
    Ok(ker - im)
}

/// dim Tor_n(W, X) for a right module W, resolving W over the opposite.
pub fn tor(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    w: &CatModule,
    x: &CatModule,
    n: usize,
    cap: Option<usize>,
) -> Result<usize, HomalgError> {
    let op = opposite(cat);
    let op_rs = opposite_reedy(rs);
    let res = projective_resolution(&op, &op_rs, w, cap);
    tor_from_resolution(cat, &res, x, n)
}

/// Table of derived-functor dimensions indexed by (c, d, n).
pub struct ExtTorTable {
    pub max_n: usize,
    pub entries: Vec<Vec<Vec<usize>>>,
}

/// ext^n(Delta_c, Delta_d) for all pairs and 0 <= n <= max_n.
pub fn ext_std_table(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    max_n: usize,
) -> Result<ExtTorTable, HomalgError> {
    let n_obj = cat.n_objects();
    let stds: Vec<CatModule> = (0..n_obj).map(|c| standard_module(cat, rs, c)).collect();
    let rows = exec::map_slice(&stds, |x| {
        let res = projective_resolution(cat, rs, x, None);
        stds.iter()
            .map(|y| {
                (0..=max_n)
                    .map(|n| ext_from_resolution(cat, &res, y, n))
                    .collect::<Result<Vec<usize>, HomalgError>>()
            })
            .collect::<Result<Vec<Vec<usize>>, HomalgError>>()
    });
    let entries = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ExtTorTable { max_n, entries })
}

/// tor_n(costandard at c, Delta_d) for all pairs and 0 <= n <= max_n.
pub fn tor_std_table(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    max_n: usize,
) -> Result<ExtTorTable, HomalgError> {
    let n_obj = cat.n_objects();
    let op = opposite(cat);
    let op_rs = opposite_reedy(rs);
    let stds: Vec<CatModule> = (0..n_obj).map(|c| standard_module(cat, rs, c)).collect();
    let costds: Vec<CatModule> = (0..n_obj).map(|c| costandard_module(cat, rs, c)).collect();
    let rows = exec::map_slice(&costds, |w| {
        let res = projective_resolution(&op, &op_rs, w, None);
        stds.iter()
            .map(|x| {
                (0..=max_n)
                    .map(|n| tor_from_resolution(cat, &res, x, n))
                    .collect::<Result<Vec<usize>, HomalgError>>()
            })
            .collect::<Result<Vec<Vec<usize>>, HomalgError>>()
    });
    let entries = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ExtTorTable { max_n, entries })
}

/// Whether l has the left lifting property against r: every commutative
/// square from l to r admits a diagonal. Decided by comparing the rank of
/// h -> (h∘l, r∘h) with the dimension of the space of squares.
pub fn has_left_lifting(
    cat: &LinearCategory,
    l: (&CatModule, &CatModule, &ModuleMap),
    r: (&CatModule, &CatModule, &ModuleMap),
) -> bool {
    let f = cat.field();
    let n = cat.n_objects();
    let (a, b, lm) = l;
    let (c, d, rm) = r;
    let hac = hom_space(cat, a, c);
    let hbd = hom_space(cat, b, d);
    let hbc = hom_space(cat, b, c);
    // Squares (u: A->C, v: B->D) with v∘l = r∘u, in hom-basis coordinates.
    let vec_dim: usize = (0..n).map(|o| d.dim(o) * a.dim(o)).sum();
    let mut sys = Matrix::zeros(f, vec_dim, hac.len() + hbd.len());
    for (col, u) in hac.iter().enumerate() {
        let v = vec_of_map(f, &rm.compose(u).comps);
        for row in 0..vec_dim {
            sys.set(row, col, f.neg(v.get(row, 0)));
        }
    }
    for (col, v) in hbd.iter().enumerate() {
        let w = vec_of_map(f, &v.compose(lm).comps);
        for row in 0..vec_dim {
            sys.set(row, hac.len() + col, w.get(row, 0).clone());
        }
    }
    let squares = sys.kernel_basis();
    // The image of h -> (h∘l, r∘h) always lands in the square space.
    let mut phi = Matrix::zeros(f, hac.len() + hbd.len(), hbc.len());
    for (col, h) in hbc.iter().enumerate() {
        let ul = coords_in_basis(f, &hac, &h.compose(lm));
        let rv = coords_in_basis(f, &hbd, &rm.compose(h));
        for row in 0..hac.len() {
            phi.set(row, col, ul.get(row, 0).clone());
        }
        for row in 0..hbd.len() {
            phi.set(hac.len() + row, col, rv.get(row, 0).clone());
        }
    }
    phi.rank() == squares.cols()
}
