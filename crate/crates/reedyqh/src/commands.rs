//! Subcommand implementations.
//!
//! Each command returns a verdict, a JSON payload, and warnings. The split
//! between the two failure channels: a mathematical verdict (a verification
//! that ran and said no) is `Verdict::Fail` with exit code 1, while an
//! operational problem (unreadable file, unparseable input, a computation
//! the exact arithmetic cannot certify) is an `OpError` with exit code 2.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use reedyqh_core::diagrams::{
    cofinality_crosscheck, cosk_alpha, ext1_orthogonality, latching, matching, parse_diagram,
    phi_membership, psi_membership, sk_alpha, special_precover, value_at, ClassSpec,
    CotorsionPairSpec, DiagramContext, DiagramError,
};
use reedyqh_core::exactla::Matrix;
use reedyqh_core::homalg::{
    ext_from_resolution, ext_std_table, projective_resolution, tor_std_table, ExtTorTable,
};
use reedyqh_core::lincat::{
    inverse_reedy, subcategory, verify_category, verify_reedy, LinearCategory, ReedyStructure,
};
use reedyqh_core::presentation::{
    build_linear_category, parse_presentation, BuiltCategory, PresentationError, PresentationFile,
};
use reedyqh_core::qh::{verify_exact_borel, verify_quasi_hereditary};
use reedyqh_core::repmod::{
    costandard_module, direct_sum, representable, simple_modules, standard_module,
    verify_standard_filtration, CatModule, FiltrationReport, ModuleMap,
};
use reedyqh_core::sample::{random_module, seeded_rng};

use crate::report::Verdict;
use crate::textio::{built_equal, field_name, modules_equal, render_diagram, render_presentation};

/// Fixed default so unseeded runs are reproducible.
pub const DEFAULT_SEED: u64 = 11;

/// Operational failure: message for stderr, exit code 2.
pub struct OpError(pub String);

pub type CmdOutput = (Verdict, Value, Vec<String>);
pub type CmdResult = Result<CmdOutput, OpError>;

/// Unwrap a loader that may short-circuit into a fail verdict.
macro_rules! get {
    ($e:expr) => {
        match $e? {
            Ok(x) => x,
            Err(out) => return Ok(out),
        }
    };
}

fn read_file(path: &Path) -> Result<String, OpError> {
    fs::read_to_string(path).map_err(|e| OpError(format!("{}: {e}", path.display())))
}

enum Loaded {
    Built(PresentationFile, BuiltCategory),
    /// Finiteness certification failed at the declared bound; this is a
    /// mathematical verdict on the input, not an operational error.
    Unfinished(Value),
}

fn load(path: &Path) -> Result<Loaded, OpError> {
    let text = read_file(path)?;
    let pres =
        parse_presentation(&text).map_err(|e| OpError(format!("{}: {e}", path.display())))?;
    match build_linear_category(&pres) {
        Ok(built) => Ok(Loaded::Built(pres, built)),
        Err(e @ PresentationError::BoundInsufficient { .. }) => Ok(Loaded::Unfinished(json!({
            "file": path.display().to_string(),
            "build_error": e.to_string(),
        }))),
        Err(e) => Err(OpError(format!("{}: {e}", path.display()))),
    }
}

#[allow(clippy::type_complexity)]
fn built_or_fail(
    path: &Path,
) -> Result<Result<(PresentationFile, BuiltCategory), CmdOutput>, OpError> {
    Ok(match load(path)? {
        Loaded::Built(p, b) => Ok((p, b)),
        Loaded::Unfinished(payload) => Err((Verdict::Fail, payload, Vec::new())),
    })
}

fn reedy_or_fail(
    built: &BuiltCategory,
    path: &Path,
) -> Result<Result<ReedyStructure, CmdOutput>, OpError> {
    let rs = built.reedy.clone().ok_or_else(|| {
        OpError(format!(
            "{}: the presentation has no [reedy] section",
            path.display()
        ))
    })?;
    let rep = verify_reedy(&built.category, &rs);
    if rep.passed {
        Ok(Ok(rs))
    } else {
        Ok(Err((
            Verdict::Fail,
            json!({
                "file": path.display().to_string(),
                "reedy": { "passed": false, "violations": rep.violations },
            }),
            Vec::new(),
        )))
    }
}

pub fn cmd_check(path: &Path, perturb: Option<u64>) -> CmdResult {
    let (pres, built) = get!(built_or_fail(path));
    let cat = match perturb {
        Some(seed) => perturbed_category(&built.category, seed),
        None => built.category.clone(),
    };
    let cat_report = verify_category(&cat);
    let reedy_report = built.reedy.as_ref().map(|rs| verify_reedy(&cat, rs));
    let n = cat.n_objects();
    let hom_dims: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..n).map(|d| cat.hom_dim(c, d)).collect())
        .collect();
    let passed = cat_report.passed && reedy_report.as_ref().map_or(true, |r| r.passed);
    let payload = json!({
        "field": field_name(cat.field()),
        "objects": cat.objects,
        "degrees": pres.reedy.as_ref().map(|r| r.degree.clone()),
        "hom_dims": hom_dims,
        "total_dim": cat.total_dim(),
        "perturbed": perturb.is_some(),
        "category": { "passed": cat_report.passed, "violations": cat_report.violations },
        "reedy": reedy_report.map(|r| json!({ "passed": r.passed, "violations": r.violations })),
    });
    Ok((Verdict::from_passed(passed), payload, Vec::new()))
}

/// Verifier self test: clone the category with one structure constant
/// bumped by one, so verify_category must report a violation. The choice
/// of constant is a plain modular function of the seed.
fn perturbed_category(cat: &LinearCategory, seed: u64) -> LinearCategory {
    let f = cat.field();
    let n = cat.n_objects();
    let mut triples = Vec::new();
    for c in 0..n {
        for d in 0..n {
            for e in 0..n {
                let m = cat.comp_matrix(c, d, e);
                if m.rows() > 0 && m.cols() > 0 {
                    triples.push((c, d, e));
                }
            }
        }
    }
    let seed = seed as usize;
    let (c, d, e) = triples[seed % triples.len()];
    let mut comp: Vec<Vec<Vec<Matrix>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|z| cat.comp_matrix(a, b, z).clone()).collect())
                .collect()
        })
        .collect();
    let m = &mut comp[c][d][e];
    let i = (seed / triples.len()) % m.rows();
    let j = (seed / (triples.len() * m.rows())) % m.cols();
    let bumped = f.add(m.get(i, j), &f.one());
    m.set(i, j, bumped);
    LinearCategory::new(
        f,
        cat.objects.clone(),
        cat.hom_labels.clone(),
        cat.identities.clone(),
        comp,
    )
}

pub fn cmd_standards(path: &Path) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let rows: Vec<Value> = (0..cat.n_objects())
        .map(|c| {
            json!({
                "object": cat.objects[c],
                "degree": rs.degree[c],
                "standard_dims": standard_module(cat, &rs, c).dims(),
                "costandard_dims": costandard_module(cat, &rs, c).dims(),
            })
        })
        .collect();
    let payload = json!({ "objects": cat.objects, "rows": rows });
    Ok((Verdict::Pass, payload, Vec::new()))
}

pub fn cmd_simples(path: &Path) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let simples = simple_modules(cat, &rs).map_err(|e| OpError(e.to_string()))?;
    let rows: Vec<Value> = simples
        .iter()
        .enumerate()
        .map(|(c, s)| {
            json!({
                "object": cat.objects[c],
                "dims": s.dims(),
                "total_dim": s.total_dim(),
            })
        })
        .collect();
    let payload = json!({ "count": simples.len(), "rows": rows });
    Ok((Verdict::Pass, payload, Vec::new()))
}

fn filtration_value(name: &str, rep: &FiltrationReport) -> Value {
    let layers: Vec<Value> = rep
        .layers
        .iter()
        .map(|l| json!({ "alpha": l.alpha, "multiplicities": l.multiplicities }))
        .collect();
    json!({
        "object": name,
        "passed": rep.passed,
        "layers": layers,
        "violations": rep.violations,
    })
}

pub fn cmd_filtration(path: &Path, samples: usize, seed: u64) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let mut all = true;
    let mut rep_rows = Vec::with_capacity(cat.n_objects());
    for c in 0..cat.n_objects() {
        let x = representable(cat, c);
        let rep = verify_standard_filtration(cat, &rs, &x);
        all &= rep.passed;
        rep_rows.push(filtration_value(&cat.objects[c], &rep));
    }
    // Filtered modules stay filtered under direct sums; spot check X (+) X.
    let double = {
        let x = representable(cat, 0);
        let s = direct_sum(cat, &[&x, &x]);
        let rep = verify_standard_filtration(cat, &rs, &s);
        all &= rep.passed;
        json!({ "object": cat.objects[0], "passed": rep.passed })
    };
    // Over the lowering subcategory alone, every module is filtered by the
    // simples (which are the standards there).
    let (sub, _) = subcategory(cat, &rs.minus);
    let inv = inverse_reedy(&sub, rs.degree.clone());
    let mut rng = seeded_rng(seed);
    let mut filtered = 0usize;
    for _ in 0..samples {
        let m = random_module(&sub, &mut rng, 2);
        if verify_standard_filtration(&sub, &inv, &m).passed {
            filtered += 1;
        }
    }
    all &= filtered == samples;
    let payload = json!({
        "representables": rep_rows,
        "double_of_first": double,
        "lowering_samples": { "seed": seed, "samples": samples, "filtered": filtered },
    });
    Ok((Verdict::from_passed(all), payload, Vec::new()))
}

fn table_payload(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    t: &ExtTorTable,
    violations: &[String],
) -> Value {
    let n = cat.n_objects();
    let by_n: Vec<Value> = (0..=t.max_n)
        .map(|k| {
            let grid: Vec<Vec<usize>> = (0..n)
                .map(|c| (0..n).map(|d| t.entries[c][d][k]).collect())
                .collect();
            json!({ "n": k, "dims": grid })
        })
        .collect();
    json!({
        "objects": cat.objects,
        "degrees": rs.degree,
        "max_n": t.max_n,
        "tables": by_n,
        "pattern": { "holds": violations.is_empty(), "violations": violations },
    })
}

/// Exceptional-collection pattern between standard modules: scalar
/// endomorphisms, degree-zero maps only toward strictly smaller degree,
/// and no higher extensions without a degree drop.
fn ext_pattern_violations(
    cat: &LinearCategory,
    rs: &ReedyStructure,
    t: &ExtTorTable,
) -> Vec<String> {
    let n = cat.n_objects();
    let mut v = Vec::new();
    for c in 0..n {
        for d in 0..n {
            let e0 = t.entries[c][d][0];
            if c == d && e0 != 1 {
                v.push(format!(
                    "endomorphisms of the standard at {} have dimension {e0}",
                    cat.objects[c]
                ));
            }
            if c != d && e0 != 0 && rs.degree[d] >= rs.degree[c] {
                v.push(format!(
                    "maps from the standard at {} to the one at {} do not drop degree",
                    cat.objects[c], cat.objects[d]
                ));
            }
            for k in 1..=t.max_n {
                if rs.degree[d] >= rs.degree[c] && t.entries[c][d][k] != 0 {
                    v.push(format!(
                        "ext^{k} from the standard at {} to the one at {} is nonzero without a degree drop",
                        cat.objects[c], cat.objects[d]
                    ));
                }
            }
        }
    }
    v
}

/// Tor between costandard and standard modules collapses to the Kronecker
/// pattern: one in degree zero on the diagonal, zero everywhere else.
fn tor_pattern_violations(cat: &LinearCategory, t: &ExtTorTable) -> Vec<String> {
    let n = cat.n_objects();
    let mut v = Vec::new();
    for c in 0..n {
        for d in 0..n {
            for k in 0..=t.max_n {
                let want = usize::from(k == 0 && c == d);
                let got = t.entries[c][d][k];
                if got != want {
                    v.push(format!(
                        "tor_{k} at ({}, {}) is {got}, expected {want}",
                        cat.objects[c], cat.objects[d]
                    ));
                }
            }
        }
    }
    v
}

pub fn cmd_ext_table(path: &Path, max_n: usize) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let table = ext_std_table(cat, &rs, max_n).map_err(|e| OpError(e.to_string()))?;
    let violations = ext_pattern_violations(cat, &rs, &table);
    let payload = table_payload(cat, &rs, &table, &violations);
    Ok((Verdict::from_passed(violations.is_empty()), payload, Vec::new()))
}

pub fn cmd_tor_table(path: &Path, max_n: usize) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let table = tor_std_table(cat, &rs, max_n).map_err(|e| OpError(e.to_string()))?;
    let violations = tor_pattern_violations(cat, &table);
    let payload = table_payload(cat, &rs, &table, &violations);
    Ok((Verdict::from_passed(violations.is_empty()), payload, Vec::new()))
}

pub fn cmd_qh(path: &Path) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let report = verify_quasi_hereditary(cat, &rs).map_err(|e| OpError(e.to_string()))?;
    let kernels: Vec<Value> = report
        .kernel_reports
        .iter()
        .enumerate()
        .map(|(c, r)| filtration_value(&cat.objects[c], r))
        .collect();
    let payload = json!({
        "passed": report.passed,
        "objects": cat.objects,
        "degrees": report.degree,
        "standard_multiplicities": report.std_multiplicities,
        "kernel_filtrations": kernels,
        "violations": report.violations,
    });
    Ok((Verdict::from_passed(report.passed), payload, Vec::new()))
}

pub fn cmd_borel(path: &Path, samples: usize, seed: u64) -> CmdResult {
    let (_pres, built) = get!(built_or_fail(path));
    let rs = get!(reedy_or_fail(&built, path));
    let cat = &built.category;
    let report = verify_exact_borel(cat, &rs, samples, seed).map_err(|e| OpError(e.to_string()))?;
    let payload = json!({
        "passed": report.passed,
        "objects": cat.objects,
        "standards_simple": report.standards_simple,
        "kernel_factors_descend": report.kernel_factors_descend,
        "induced_standards": report.induced_standards,
        "samples": report.samples,
        "exact_samples": report.exact_samples,
        "seed": seed,
        "violations": report.violations,
    });
    Ok((Verdict::from_passed(report.passed), payload, Vec::new()))
}

pub struct DiagramSetup {
    pub ctx: DiagramContext,
    pub base_pres: PresentationFile,
    pub base_built: BuiltCategory,
    pub coeff_pres: PresentationFile,
    pub coeff_built: BuiltCategory,
}

fn diagram_setup(path: &Path, coeff: &Path) -> Result<Result<DiagramSetup, CmdOutput>, OpError> {
    let (base_pres, base_built) = match built_or_fail(path)? {
        Ok(x) => x,
        Err(o) => return Ok(Err(o)),
    };
    let rs = match reedy_or_fail(&base_built, path)? {
        Ok(x) => x,
        Err(o) => return Ok(Err(o)),
    };
    let (coeff_pres, coeff_built) = match built_or_fail(coeff)? {
        Ok(x) => x,
        Err(o) => return Ok(Err(o)),
    };
    if base_built.category.field() != coeff_built.category.field() {
        return Err(OpError(format!(
            "field mismatch: {} is over {}, {} is over {}",
            path.display(),
            field_name(base_built.category.field()),
            coeff.display(),
            field_name(coeff_built.category.field()),
        )));
    }
    let ctx = DiagramContext::new(&base_built.category, &rs, &coeff_built.category);
    Ok(Ok(DiagramSetup {
        ctx,
        base_pres,
        base_built,
        coeff_pres,
        coeff_built,
    }))
}

fn diagram_or_fail(
    setup: &DiagramSetup,
    path: &Path,
) -> Result<Result<CatModule, CmdOutput>, OpError> {
    let text = read_file(path)?;
    match parse_diagram(
        &setup.ctx,
        &setup.base_pres.quiver,
        &setup.base_built,
        &setup.coeff_pres.quiver,
        &setup.coeff_built,
        &text,
    ) {
        Ok(m) => Ok(Ok(m)),
        Err(DiagramError::Verify(msg)) => Ok(Err((
            Verdict::Fail,
            json!({
                "file": path.display().to_string(),
                "diagram": { "passed": false, "violations": [msg] },
            }),
            Vec::new(),
        ))),
        Err(e) => Err(OpError(format!("{}: {e}", path.display()))),
    }
}

pub fn cmd_latching(path: &Path, coeff: &Path, diagram: &Path) -> CmdResult {
    let setup = get!(diagram_setup(path, coeff));
    let x = get!(diagram_or_fail(&setup, diagram));
    let ctx = &setup.ctx;
    let mut all = true;
    let mut rows = Vec::with_capacity(ctx.base.n_objects());
    for c in 0..ctx.base.n_objects() {
        let l = latching(ctx, &x, c);
        let m = matching(ctx, &x, c);
        let cross = cofinality_crosscheck(ctx, &x, c);
        all &= cross;
        rows.push(json!({
            "object": ctx.base.objects[c],
            "degree": ctx.rs.degree[c],
            "value_dims": value_at(ctx, &x, c).dims(),
            "latching_dims": l.object.dims(),
            "latching_mono": l.map.is_mono(),
            "matching_dims": m.object.dims(),
            "matching_epi": m.map.is_epi(),
            "crosscheck": cross,
        }));
    }
    Ok((Verdict::from_passed(all), json!({ "rows": rows }), Vec::new()))
}

fn map_rank(m: &ModuleMap) -> usize {
    m.comps.iter().map(Matrix::rank).sum()
}

pub fn cmd_sk(path: &Path, coeff: &Path, diagram: &Path, max_n: Option<u32>) -> CmdResult {
    let setup = get!(diagram_setup(path, coeff));
    let x = get!(diagram_or_fail(&setup, diagram));
    let ctx = &setup.ctx;
    let top = ctx.max_degree() + 1;
    let top = max_n.map_or(top, |m| m.min(top));
    let mut cuts = Vec::with_capacity(top as usize + 1);
    for alpha in 0..=top {
        let sk = sk_alpha(ctx, &x, alpha);
        let ck = cosk_alpha(ctx, &x, alpha);
        cuts.push(json!({
            "alpha": alpha,
            "sk_dims": sk.diagram.dims(),
            "counit_rank": map_rank(&sk.counit),
            "cosk_dims": ck.diagram.dims(),
            "unit_rank": map_rank(&ck.unit),
        }));
    }
    let payload = json!({
        "objects": ctx.gamma.objects,
        "diagram_dims": x.dims(),
        "cuts": cuts,
    });
    Ok((Verdict::Pass, payload, Vec::new()))
}

pub fn cmd_phi_psi(path: &Path, coeff: &Path, diagram: &Path) -> CmdResult {
    let setup = get!(diagram_setup(path, coeff));
    let x = get!(diagram_or_fail(&setup, diagram));
    let ctx = &setup.ctx;
    let classes = [
        ("projectives", ClassSpec::Projectives),
        ("injectives", ClassSpec::Injectives),
        ("all", ClassSpec::All),
        ("zero", ClassSpec::Zero),
    ];
    let rows: Vec<Value> = classes
        .iter()
        .map(|&(name, class)| {
            json!({
                "class": name,
                "phi": phi_membership(ctx, &x, class),
                "psi": psi_membership(ctx, &x, class),
            })
        })
        .collect();
    let payload = json!({ "diagram_dims": x.dims(), "rows": rows });
    Ok((Verdict::Pass, payload, Vec::new()))
}

fn pair_name(pair: CotorsionPairSpec) -> &'static str {
    match pair {
        CotorsionPairSpec::ProjectivesAll => "proj-all",
        CotorsionPairSpec::AllInjectives => "all-inj",
    }
}

pub fn cmd_approx(
    path: &Path,
    coeff: &Path,
    diagram: &Path,
    pair: CotorsionPairSpec,
) -> CmdResult {
    let setup = get!(diagram_setup(path, coeff));
    let x = get!(diagram_or_fail(&setup, diagram));
    let ctx = &setup.ctx;
    let pre = special_precover(ctx, pair, &x);
    let (a, b) = pair.classes();
    let y_in = phi_membership(ctx, &pre.y, a);
    let z_in = psi_membership(ctx, &pre.z, b);
    let e1 = ext1_orthogonality(ctx, &pre.y, &pre.z).map_err(|e| OpError(e.to_string()))?;
    let ok = y_in && z_in && e1 == 0;
    let payload = json!({
        "pair": pair_name(pair),
        "x_dims": x.dims(),
        "y_dims": pre.y.dims(),
        "z_dims": pre.z.dims(),
        "exact": true,
        "y_in_latching_class": y_in,
        "z_in_matching_class": z_in,
        "ext1_y_z": e1,
    });
    Ok((Verdict::from_passed(ok), payload, Vec::new()))
}

pub fn cmd_lift_test(
    path: &Path,
    coeff: &Path,
    pair: CotorsionPairSpec,
    samples: usize,
    seed: u64,
) -> CmdResult {
    let setup = get!(diagram_setup(path, coeff));
    let ctx = &setup.ctx;
    let (a, b) = pair.classes();
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    let mut zs = Vec::with_capacity(samples);
    let mut all = true;
    for _ in 0..samples {
        let x = random_module(&ctx.gamma, &mut rng, 2);
        let pre = special_precover(ctx, pair, &x);
        let y_in = phi_membership(ctx, &pre.y, a);
        let z_in = psi_membership(ctx, &pre.z, b);
        all &= y_in && z_in;
        rows.push(json!({
            "x_dims": x.dims(),
            "y_dims": pre.y.dims(),
            "z_dims": pre.z.dims(),
            "y_in_latching_class": y_in,
            "z_in_matching_class": z_in,
        }));
        ys.push(pre.y);
        zs.push(pre.z);
    }
    // Pairwise orthogonality, one resolution per left side.
    let mut ext = vec![vec![0usize; zs.len()]; ys.len()];
    for (i, y) in ys.iter().enumerate() {
        let res = projective_resolution(&ctx.gamma, &ctx.gamma_rs, y, None);
        for (j, z) in zs.iter().enumerate() {
            ext[i][j] =
                ext_from_resolution(&ctx.gamma, &res, z, 1).map_err(|e| OpError(e.to_string()))?;
            all &= ext[i][j] == 0;
        }
    }
    let payload = json!({
        "pair": pair_name(pair),
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "ext1": ext,
    });
    Ok((Verdict::from_passed(all), payload, Vec::new()))
}

fn roundtrip_presentation(
    path: &Path,
    pres: &PresentationFile,
    built: &BuiltCategory,
) -> Result<(bool, Value), OpError> {
    let text = render_presentation(pres);
    let pres2 = parse_presentation(&text).map_err(|e| {
        OpError(format!(
            "{}: re-parsing the rendered presentation failed: {e}",
            path.display()
        ))
    })?;
    let built2 = build_linear_category(&pres2).map_err(|e| {
        OpError(format!(
            "{}: rebuilding the rendered presentation failed: {e}",
            path.display()
        ))
    })?;
    let eq = built_equal(built, &built2);
    Ok((
        eq,
        json!({
            "file": path.display().to_string(),
            "equal": eq,
            "total_dim": built.category.total_dim(),
        }),
    ))
}

pub fn cmd_roundtrip(path: &Path, coeff: Option<&Path>, diagram: Option<&Path>) -> CmdResult {
    let (pres, built) = get!(built_or_fail(path));
    let (ok_pres, pres_part) = roundtrip_presentation(path, &pres, &built)?;
    let mut all = ok_pres;
    let mut coeff_part = Value::Null;
    let mut diagram_part = Value::Null;
    if let Some(cp) = coeff {
        let (cpres, cbuilt) = get!(built_or_fail(cp));
        let (ok_coeff, part) = roundtrip_presentation(cp, &cpres, &cbuilt)?;
        all &= ok_coeff;
        coeff_part = part;
        if let Some(dp) = diagram {
            let setup = get!(diagram_setup(path, cp));
            let x = get!(diagram_or_fail(&setup, dp));
            let text2 = render_diagram(
                &setup.ctx,
                &setup.base_pres.quiver,
                &setup.base_built,
                &setup.coeff_pres.quiver,
                &setup.coeff_built,
                &x,
            );
            let x2 = parse_diagram(
                &setup.ctx,
                &setup.base_pres.quiver,
                &setup.base_built,
                &setup.coeff_pres.quiver,
                &setup.coeff_built,
                &text2,
            )
            .map_err(|e| OpError(format!("re-parsing the rendered diagram failed: {e}")))?;
            let eq = modules_equal(&setup.ctx.gamma, &x, &x2);
            all &= eq;
            diagram_part = json!({
                "file": dp.display().to_string(),
                "equal": eq,
                "total_dim": x.total_dim(),
            });
        }
    } else if diagram.is_some() {
        return Err(OpError("--diagram requires --coeff".to_string()));
    }
    let payload = json!({
        "presentation": pres_part,
        "coefficient": coeff_part,
        "diagram": diagram_part,
    });
    Ok((Verdict::from_passed(all), payload, Vec::new()))
}
