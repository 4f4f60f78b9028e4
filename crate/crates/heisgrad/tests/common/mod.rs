#![allow(dead_code)]

use heisgrad::abelian::{mat_mul, unimodular_inverse};
use heisgrad::fine::{auto_conductor, fine_twisted, verify_block_i, verify_block_ii, Role, TwistedParams};
use heisgrad::gradings::{form_eval, verify_grading, FormKind, PairedBasis, PairedDecomposition};
use heisgrad::linalg::{rank, zero_vec, Subspace, Vect};
use heisgrad::scalars::{Cyclo, CycloCtx, ScalarExpr};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Spectrum from scalar strings, in the smallest convenient field.
pub fn lambda(parts: &[&str]) -> Vec<Cyclo> {
    let exprs: Vec<ScalarExpr> = parts.iter().map(|s| ScalarExpr::parse(s).unwrap()).collect();
    let ctx = CycloCtx::new(auto_conductor(&exprs, 1)).unwrap();
    exprs.iter().map(|e| e.eval(&ctx).unwrap()).collect()
}

pub fn ctx(n: u64) -> CycloCtx {
    CycloCtx::new(n).unwrap()
}

pub fn random_scalar<R: Rng>(ctx: &CycloCtx, rng: &mut R) -> Cyclo {
    let num = loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            break v;
        }
    };
    let r = ctx.from_frac(num, rng.gen_range(1..=2));
    let u = ctx.unit_order() as i64;
    r.mul(&ctx.unit_root(rng.gen_range(0..u)))
}

pub fn is_diagonal_chain(d: &[Vec<BigInt>]) -> bool {
    let mut prev: Option<BigInt> = None;
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return false;
            }
        }
        if i < row.len() {
            let x = &row[i];
            if x.is_negative() {
                return false;
            }
            if let Some(p) = &prev {
                if p.is_zero() && !x.is_zero() {
                    return false;
                }
                if !p.is_zero() && !(x % p).is_zero() {
                    return false;
                }
            }
            prev = Some(x.clone());
        }
    }
    true
}

pub fn det_is_unit(m: &[Vec<BigInt>]) -> bool {
    let inv = match unimodular_inverse(&m.to_vec()) {
        Some(i) => i,
        None => return false,
    };
    let p = mat_mul(&m.to_vec(), &inv);
    p.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
}

/// Random paired decomposition in block-standard coordinates, then each piece given by a random basis.
pub fn scrambled_instance(seed: u64, kind: FormKind) -> PairedDecomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = ctx(8);
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut entries: Vec<(usize, usize, Cyclo)> = Vec::new();
    let mut n = 0;
    let nblocks = rng.gen_range(1..=3);
    for _ in 0..nblocks {
        let d = rng.gen_range(1..=2);
        if rng.gen_bool(0.5) {
            let e: Vec<usize> = (n..n + d).collect();
            let f: Vec<usize> = (n + d..n + 2 * d).collect();
            for a in 0..d {
                let c = random_scalar(&ctx, &mut rng);
                entries.push((e[a], f[a], c.clone()));
                let back = if kind == FormKind::Symplectic { c.neg() } else { c };
                entries.push((f[a], e[a], back));
            }
            n += 2 * d;
            pieces.push(e);
            pieces.push(f);
        } else if kind == FormKind::Symplectic {
            let v: Vec<usize> = (n..n + 2 * d).collect();
            for a in 0..d {
                let c = random_scalar(&ctx, &mut rng);
                entries.push((v[2 * a], v[2 * a + 1], c.clone()));
                entries.push((v[2 * a + 1], v[2 * a], c.neg()));
            }
            n += 2 * d;
            pieces.push(v);
        } else {
            let v: Vec<usize> = (n..n + d).collect();
            for &i in &v {
                entries.push((i, i, random_scalar(&ctx, &mut rng)));
            }
            if d == 2 && rng.gen_bool(0.5) {
                // make it hyperbolic so the diagonal is isotropic
                entries.retain(|(i, j, _)| !(v.contains(i) && v.contains(j)));
                entries.push((v[0], v[1], ctx.one()));
                entries.push((v[1], v[0], ctx.one()));
            }
            n += d;
            pieces.push(v);
        }
    }
    let mut form = vec![zero_vec(&ctx, n); n];
    for (i, j, c) in entries {
        form[i][j] = c;
    }
    let mut subspaces: Vec<Vec<Vect>> = pieces
        .iter()
        .map(|idx| loop {
            let vs: Vec<Vect> = idx
                .iter()
                .map(|_| {
                    let mut v = zero_vec(&ctx, n);
                    for &t in idx {
                        v[t] = ctx.from_int(rng.gen_range(-2..=2));
                    }
                    v
                })
                .collect();
            if rank(&vs) == idx.len() {
                break vs;
            }
        })
        .collect();
    for i in (1..subspaces.len()).rev() {
        let j = rng.gen_range(0..=i);
        subspaces.swap(i, j);
    }
    PairedDecomposition { subspaces, form, kind }
}

pub fn check_lemma(pd: &PairedDecomposition, b: &PairedBasis) {
    let n = pd.form.len();
    let ctx = pd.form[0][0].ctx().clone();
    assert_eq!(b.len(), n);
    let spans: Vec<Subspace> = pd.subspaces.iter().map(|s| Subspace::span(n, s)).collect();
    let mut all: Vec<(Vect, Option<usize>)> = Vec::new();
    for (idx, (i, u, j, v)) in b.pairs.iter().enumerate() {
        assert!(spans[*i].contains(u) && spans[*j].contains(v));
        assert_eq!(form_eval(&pd.form, u, v), ctx.one());
        all.push((u.clone(), Some(2 * idx + 1)));
        all.push((v.clone(), Some(2 * idx)));
    }
    for (i, w) in &b.singles {
        assert!(spans[*i].contains(w));
        assert!(!form_eval(&pd.form, w, w).is_zero());
        all.push((w.clone(), None));
    }
    let vecs: Vec<Vect> = all.iter().map(|(v, _)| v.clone()).collect();
    assert_eq!(rank(&vecs), n);
    for a in 0..all.len() {
        for c in 0..all.len() {
            if a == c || all[a].1 == Some(c) {
                continue;
            }
            assert!(form_eval(&pd.form, &all[a].0, &all[c].0).is_zero(), "stray pairing between basis vectors {a} and {c}");
        }
    }
}

/// λ whose fine grading consists of one block of the given type.
pub fn single_block(l: usize, type_ii: bool, alpha: &Cyclo) -> (Vec<Cyclo>, TwistedParams) {
    let ctx = alpha.ctx();
    let xi = ctx.root_of_unity(l as u64, 1).unwrap();
    let count = if type_ii { l / 2 } else { l };
    let lam: Vec<Cyclo> = (1..=count).map(|t| xi.pow(t as i64).unwrap().mul(alpha)).collect();
    let p = if type_ii {
        TwistedParams { l, s: 0, r: 1, betas: vec![], alphas: vec![alpha.clone()] }
    } else {
        TwistedParams { l, s: 1, r: 0, betas: vec![alpha.clone()], alphas: vec![] }
    };
    (lam, p)
}

/// Block verifiers on one-block algebras for every type and l <= 4; returns the number of cases.
pub fn check_block_relations(seed: u64) -> usize {
    let ctx = ctx(48);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for l in 1..=4usize {
        for type_ii in [false, true] {
            if type_ii && l % 2 == 1 {
                continue;
            }
            for _ in 0..4 {
                let alpha = random_scalar(&ctx, &mut rng);
                let (lam, p) = single_block(l, type_ii, &alpha);
                let fg = fine_twisted(&lam, &p).unwrap();
                let alg = fg.algebra();
                let vec_of = |r: Role| fg.basis[fg.role_index(&r).unwrap()].clone();
                let (u, z) = (vec_of(Role::U), vec_of(Role::Z));
                let wrong = alpha.mul(&ctx.from_int(2));
                if type_ii {
                    let xs: Vec<Vect> = (1..=l).map(|i| vec_of(Role::A(0, i))).collect();
                    verify_block_ii(alg, &u, &z, &xs, &alpha).unwrap();
                    assert!(verify_block_ii(alg, &u, &z, &xs, &wrong).is_err());
                } else {
                    let xs: Vec<Vect> = (1..=l).map(|i| vec_of(Role::X(0, i))).collect();
                    let ys: Vec<Vect> = (1..=l).map(|i| vec_of(Role::Y(0, i))).collect();
                    verify_block_i(alg, &u, &z, &xs, &ys, &alpha).unwrap();
                    assert!(verify_block_i(alg, &u, &z, &xs, &ys, &wrong).is_err());
                }
                verify_grading(&fg.grading).unwrap();
                checked += 1;
            }
        }
    }
    checked
}
