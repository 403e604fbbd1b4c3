//! Seeded random constructions for verification sampling and property
//! tests: modules arise as quotients of sums of representables, short
//! exact sequences from random submodules. Everything is deterministic in
//! the seed.

use crate::exactla::{FieldSpec, Matrix, Scalar};
use crate::lincat::LinearCategory;
use crate::repmod::{
    direct_sum, generated_spans, quotient_module, representable, submodule, CatModule, ModuleMap,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random scalar: uniform in GF(p), small integer over the rationals.
pub fn random_scalar(f: FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match f {
        FieldSpec::PrimeField(p) => f.from_i64(rng.random_range(0..p) as i64),
        FieldSpec::Rationals => f.from_i64(rng.random_range(-3i64..=3)),
    }
}

pub fn random_vector(f: FieldSpec, rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let mut v = Matrix::zeros(f, dim, 1);
    for i in 0..dim {
        v.set(i, 0, random_scalar(f, rng));
    }
    v
}

/// A random sum of representables with multiplicities up to max_copies,
/// never empty.
pub fn random_projective(
    cat: &LinearCategory,
    rng: &mut ChaCha8Rng,
    max_copies: usize,
) -> CatModule {
    let n = cat.n_objects();
    let reps: Vec<CatModule> = (0..n).map(|c| representable(cat, c)).collect();
    let mut parts: Vec<&CatModule> = Vec::new();
    for rep in reps.iter() {
        for _ in 0..rng.random_range(0..=max_copies) {
            parts.push(rep);
        }
    }
    if parts.is_empty() {
        parts.push(&reps[rng.random_range(0..n)]);
    }
    direct_sum(cat, &parts)
}

/// Random submodule spans: the closure of a few random elements.
pub fn random_submodule_spans(
    cat: &LinearCategory,
    x: &CatModule,
    rng: &mut ChaCha8Rng,
    seeds: usize,
) -> Vec<Matrix> {
    let n = cat.n_objects();
    let f = cat.field();
    let mut picked = Vec::new();
    for _ in 0..seeds {
        let c = rng.random_range(0..n);
        if x.dim(c) == 0 {
            continue;
        }
        picked.push((c, random_vector(f, rng, x.dim(c))));
    }
    generated_spans(cat, x, &picked)
}

/// A random module: quotient of a random sum of representables by the
/// closure of a few random elements.
pub fn random_module(cat: &LinearCategory, rng: &mut ChaCha8Rng, max_copies: usize) -> CatModule {
    let p = random_projective(cat, rng, max_copies);
    let seeds = rng.random_range(0..=2usize);
    let spans = random_submodule_spans(cat, &p, rng, seeds);
    quotient_module(cat, &p, &spans).0
}

/// A random short exact sequence 0 -> A -> B -> C -> 0: B is a random
/// module, A the closure of random elements inside it.
pub struct SampledSes {
    pub sub: CatModule,
    pub mid: CatModule,
    pub quot: CatModule,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

pub fn random_ses(cat: &LinearCategory, rng: &mut ChaCha8Rng, max_copies: usize) -> SampledSes {
    let mid = random_module(cat, rng, max_copies);
    let seeds = rng.random_range(1..=2usize);
    let spans = random_submodule_spans(cat, &mid, rng, seeds);
    let (sub, incl) = submodule(cat, &mid, &spans);
    let (quot, proj) = quotient_module(cat, &mid, &spans);
    SampledSes {
        sub,
        mid,
        quot,
        incl,
        proj,
    }
}
