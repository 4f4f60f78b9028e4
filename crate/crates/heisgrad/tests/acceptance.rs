//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary (harness = false).
mod common;

use heisgrad::abelian::{int_matrix, mat_mul, smith_normal_form, AbGroup};
use heisgrad::fine::{
    enumerate_fine_super, enumerate_fine_twisted, equivalent_fine, fine_twisted, gamma1, gamma2, gamma_hn, gamma_super, FineGrading,
    FineKind, TwistedParams,
};
use heisgrad::gradings::{
    darboux_homogeneous_basis, homogeneous_orthogonal_basis, homogeneous_symplectic_basis, universal_group, verify_grading, FormKind,
};
use heisgrad::liealg::{heisenberg, heisenberg_super, random_automorphism, twisted, LinMap};
use heisgrad::linalg::{is_zero_vec, vscale};
use heisgrad::scalars::{Cyclo, CycloCtx};
use heisgrad::weyl::{find_equivalence, missing, perm_compose, perm_identity, weyl_bruteforce, weyl_group, Perm, PermGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Criteria whose exact statement is not reproduced; each must still pass its own evidence checks.
const KNOWN_DIVERGENT: &[u32] = &[1];

const LIMIT_1: Duration = Duration::from_secs(10);
const LIMIT_2: Duration = Duration::from_secs(5);
const LIMIT_3: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(30);
const LIMIT_6: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(120);

struct Outcome {
    pass: bool,
    detail: String,
    /// for known divergences: the evidence behind the FAIL was confirmed
    evidence_ok: bool,
}

impl Outcome {
    fn pass(detail: String) -> Self {
        Outcome { pass: true, detail, evidence_ok: true }
    }
    fn fail(detail: String) -> Self {
        Outcome { pass: false, detail, evidence_ok: false }
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn perm_order(p: &Perm) -> usize {
    let id = perm_identity(p.len());
    let mut q = p.clone();
    let mut k = 1;
    while q != id {
        q = perm_compose(p, &q);
        k += 1;
    }
    k
}

fn is_abelian(g: &PermGroup) -> bool {
    g.generators.iter().all(|a| g.generators.iter().all(|b| perm_compose(a, b) == perm_compose(b, a)))
}

fn same_group(a: &PermGroup, b: &PermGroup) -> bool {
    missing(a, b).is_empty() && missing(b, a).is_empty()
}

/// Invariant factors of Z_l x Z_2^t, computed by hand.
fn expected_torsion(l: usize, t: usize) -> Vec<u64> {
    let l = l as u64;
    if t == 0 {
        return if l > 1 { vec![l] } else { vec![] };
    }
    if l == 1 {
        return vec![2; t];
    }
    if l.is_multiple_of(2) {
        let mut v = vec![2; t];
        v.push(l);
        v
    } else {
        let mut v = vec![2; t - 1];
        v.push(2 * l);
        v
    }
}

fn group_matches(g: &AbGroup, l: usize, s: usize, r: usize) -> bool {
    g.rank() == s + 1 && g.torsion() == expected_torsion(l, r.saturating_sub(1)).as_slice()
}

fn universal_ok(fg: &FineGrading) -> Result<bool, String> {
    let FineKind::Twisted { params, .. } = &fg.kind else { return Err("not twisted".into()) };
    let u = universal_group(&fg.grading).map_err(|e| e.to_string())?;
    Ok(group_matches(&u.group, params.l, params.s, params.r))
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let lam = common::lambda(&["1", "1", "i", "i"]);
    let ctx = lam[0].ctx().clone();
    let en = enumerate_fine_twisted(&lam).unwrap();
    let l8_rejected = en.shapes.iter().any(|s| s.l == 8 && s.candidates == 0);
    let mut cand_groups: Vec<String> = en
        .candidates
        .iter()
        .map(|p| universal_group(&fine_twisted(&lam, p).unwrap().grading).unwrap().group.to_string())
        .collect();
    cand_groups.sort();
    let mut listed: Vec<String> = [(0, &[][..]), (1, &[2, 2, 2, 2][..]), (2, &[2, 2][..]), (2, &[2, 2][..]), (3, &[2][..]), (1, &[2, 4][..]), (2, &[4][..])]
        .iter()
        .map(|(r, t)| AbGroup::from_invariants(*r, t).to_string())
        .collect();
    listed[0] = AbGroup::free(5).to_string();
    listed.sort();
    let groups_match = cand_groups == listed;
    let elapsed = t.elapsed();

    // the two (2,1,2) candidates
    let a = TwistedParams::parse("2,1,2;1;i,i", &ctx).unwrap();
    let b = TwistedParams::parse("2,1,2;i;1,1", &ctx).unwrap();
    let fa = fine_twisted(&lam, &a).unwrap();
    let fb = fine_twisted(&lam, &b).unwrap();
    let witness = find_equivalence(&fa, &fb, 12).unwrap();
    let witness_ok = match witness.as_ref().and_then(|w| w.map.as_ref()) {
        Some(f) => fa.algebra().is_automorphism(f) && fa.basis.iter().all(|v| fb.grading.degree_of(&f.apply(v)).is_some()),
        None => false,
    };
    let classes = en.classes.len();
    let detail = format!(
        "{} candidates with universal groups {} the listed ones, l=8 rejected: {}, {} classes up to equivalence, {:.2?}",
        en.candidates.len(),
        if groups_match { "equal to" } else { "DIFFERENT from" },
        l8_rejected,
        classes,
        elapsed
    );
    if classes == 7 && groups_match && l8_rejected && elapsed < LIMIT_1 {
        return Outcome::pass(detail);
    }
    let evidence_ok = classes == 6
        && en.candidates.len() == 7
        && groups_match
        && l8_rejected
        && elapsed < LIMIT_1
        && witness_ok
        && equivalent_fine(&a, &b).is_some();
    Outcome {
        pass: false,
        detail: format!(
            "{detail}; ({a}) and ({b}) are equivalent (explicit automorphism {}), so the two Z^2 x Z_2^2 entries coincide",
            if witness_ok { "checked" } else { "NOT found" }
        ),
        evidence_ok,
    }
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for parts in [&["1", "2"][..], &["1", "3", "9"][..]] {
        let lam = common::lambda(parts);
        let k = lam.len() as u64;
        let en = enumerate_fine_twisted(&lam).unwrap();
        let g1 = gamma1(&lam).unwrap();
        let g2 = gamma2(&lam).unwrap();
        let p = |fg: &FineGrading| match &fg.kind {
            FineKind::Twisted { params, .. } => params.clone(),
            _ => unreachable!(),
        };
        let (p1, p2) = (p(&g1), p(&g2));
        let hits1 = en.classes.iter().filter(|c| equivalent_fine(c, &p1).is_some()).count();
        let hits2 = en.classes.iter().filter(|c| equivalent_fine(c, &p2).is_some()).count();
        let w1 = weyl_group(&g1).unwrap().group.order() as u64;
        let w2 = weyl_group(&g2).unwrap().group.order() as u64;
        let good = en.classes.len() == 2 && hits1 == 1 && hits2 == 1 && w1 == 1 << k && w2 == 2;
        ok &= good;
        notes.push(format!("({}): {} classes, W(G1)={} W(G2)={}", parts.join(","), en.classes.len(), w1, w2));
    }
    let elapsed = t.elapsed();
    let detail = format!("{}, {:.2?}", notes.join("; "), elapsed);
    if ok && elapsed < LIMIT_2 {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let ctx = common::ctx(8);
    let mut ok = true;
    let mut notes = Vec::new();
    for k in 1..=4usize {
        let fg = gamma_hn(k, &ctx).unwrap();
        let order = weyl_group(&fg).unwrap().group.order() as u64;
        let expected = (1u64 << k) * factorial(k as u64);
        let other = gamma_super(k, 0, 0, &ctx).unwrap();
        let same_ctor = find_equivalence(&fg, &other, 12).unwrap().is_some();
        let mut transports = 0;
        for seed in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 * k as u64 + seed);
            let f = random_automorphism(fg.algebra(), &mut rng, 3);
            let gr = fg.grading.transport(&f);
            if verify_grading(&gr).is_err() {
                continue;
            }
            let Ok(d) = darboux_homogeneous_basis(&gr) else { continue };
            let alg = fg.algebra();
            let n = alg.dim();
            // standard basis z, e_i, eh_i goes to the Darboux basis
            let mut images = vec![d.z.clone()];
            images.extend(d.pairs.iter().map(|(u, _)| u.clone()));
            images.extend(d.pairs.iter().map(|(_, v)| v.clone()));
            if images.len() != n {
                continue;
            }
            let g = LinMap { images };
            let homogeneous = g.images.iter().all(|v| gr.degree_of(v).is_some());
            let cartan_on_darboux = fg.basis.iter().all(|v| gr.degree_of(&g.apply(v)).is_some());
            let brackets = d.pairs.iter().enumerate().all(|(i, (u, _))| {
                d.pairs.iter().enumerate().all(|(j, (u2, v2))| {
                    let b = alg.bracket(u, v2);
                    let want = if i == j { d.z.clone() } else { vscale(&ctx.zero(), &d.z) };
                    b == want && is_zero_vec(&alg.bracket(u, u2))
                })
            });
            if alg.is_automorphism(&g) && homogeneous && cartan_on_darboux && brackets {
                transports += 1;
            }
        }
        let good = order == expected && same_ctor && transports == 3;
        ok &= good;
        notes.push(format!("k={k}: |W|={order} (2^k k! = {expected}), transports {transports}/3"));
    }
    let elapsed = t.elapsed();
    let detail = format!("{}, {:.2?}", notes.join("; "), elapsed);
    if ok && elapsed < LIMIT_3 {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let ctx = common::ctx(8);
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, m) in [(1usize, 2usize), (1, 3), (2, 4)] {
        let all = enumerate_fine_super(k, m, &ctx).unwrap();
        ok &= all.len() == m / 2 + 1;
        let mut orders = Vec::new();
        for fg in &all {
            let FineKind::Super { r, .. } = fg.kind else { unreachable!() };
            let o = weyl_group(fg).unwrap().group.order() as u64;
            let want = (1u64 << (r + k)) * factorial(k as u64) * factorial(r as u64) * factorial((m - 2 * r) as u64);
            ok &= o == want;
            orders.push(format!("r={r}:{o}/{want}"));
        }
        notes.push(format!("({k},{m}): {} gradings [{}]", all.len(), orders.join(" ")));
    }
    let elapsed = t.elapsed();
    let detail = format!("{}, {:.2?}", notes.join("; "), elapsed);
    if ok && elapsed < LIMIT_4 {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    for parts in [&["1", "1", "i", "i"][..], &["1", "2"][..], &["1", "3", "9"][..]] {
        let lam = common::lambda(parts);
        let en = enumerate_fine_twisted(&lam).unwrap();
        for p in en.candidates.iter().chain(&en.classes) {
            total += 1;
            match universal_ok(&fine_twisted(&lam, p).unwrap()) {
                Ok(true) => {}
                Ok(false) => bad.push(p.to_string()),
                Err(e) => bad.push(format!("{p}: {e}")),
            }
        }
    }
    let detail = format!("{total} gradings checked against hand-computed invariant factors, {} mismatches {:?}", bad.len(), bad);
    if bad.is_empty() {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let lam = common::lambda(&["1", "1", "i", "i"]);
    let ctx = lam[0].ctx().clone();
    let g2 = weyl_group(&gamma2(&lam).unwrap()).unwrap().group.order();
    let g1 = weyl_group(&gamma1(&lam).unwrap()).unwrap().group.order();
    let d = weyl_group(&fine_twisted(&lam, &TwistedParams::parse("4,1,0;1;", &ctx).unwrap()).unwrap()).unwrap();
    let n = d.group.order();
    let dihedral = n == 8 && !is_abelian(&d.group) && d.group.elements.iter().any(|p| perm_order(p) == n / 2);
    let en = enumerate_fine_twisted(&lam).unwrap();
    let mut rows = Vec::new();
    let mut consistent = true;
    for p in &en.classes {
        let rep = weyl_group(&fine_twisted(&lam, p).unwrap()).unwrap();
        let bf = weyl_bruteforce(&rep.grading, 12).unwrap();
        let same = same_group(&rep.group, &bf);
        consistent &= same;
        rows.push(format!("({p}) closure {} formula {} brute {}", rep.group.order(), rep.formula, bf.order()));
    }
    let elapsed = t.elapsed();
    let ok = g2 == 16 && g1 == 128 && dihedral && consistent && elapsed < LIMIT_6;
    let detail = format!("G2 {g2}, G1 {g1}, (4,1,0;1) order {n} dihedral {dihedral}; {}; {:.2?}", rows.join("; "), elapsed);
    if ok {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let ctx = common::ctx(8);
    let lam = common::lambda(&["1", "2"]);
    let cases: Vec<(&str, FineGrading)> =
        vec![("H3", gamma_hn(1, &ctx).unwrap()), ("H5", gamma_hn(2, &ctx).unwrap()), ("G2(1,2)", gamma2(&lam).unwrap()), ("G1(1,2)", gamma1(&lam).unwrap())];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, fg) in &cases {
        let rep = weyl_group(fg).unwrap();
        let bf = weyl_bruteforce(&rep.grading, 12).unwrap();
        let same = same_group(&rep.group, &bf);
        ok &= same;
        notes.push(format!("{name}: {}={}", rep.group.order(), bf.order()));
    }
    let elapsed = t.elapsed();
    let detail = format!("{}, {:.2?}", notes.join(" "), elapsed);
    if ok && elapsed < LIMIT_7 {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut axioms = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = common::ctx(24);
        let alg = match seed % 3 {
            0 => heisenberg(rng.gen_range(1..=4), &ctx),
            1 => heisenberg_super(rng.gen_range(1..=3), rng.gen_range(1..=4), &ctx),
            _ => {
                let k = rng.gen_range(1..=3);
                let lam: Vec<Cyclo> = (0..k).map(|_| common::random_scalar(&ctx, &mut rng)).collect();
                twisted(&lam, &ctx)
            }
        };
        if alg.verify_axioms().is_ok() && alg.is_automorphism(&random_automorphism(&alg, &mut rng, 2)) {
            axioms += 1;
        }
    }
    ok &= axioms == 100;
    notes.push(format!("axioms {axioms}/100"));

    let mut roots = 0;
    for l in 1..=30u64 {
        let ctx = CycloCtx::new(4 * l).unwrap();
        if let Ok(r) = ctx.sqrt_int(l) {
            if r.mul(&r) == ctx.from_int(l as i64) {
                roots += 1;
            }
        }
    }
    ok &= roots == 30;
    notes.push(format!("sqrt_int {roots}/30"));

    let mut snf = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-30..=30) }).collect()).collect();
        let a = int_matrix(&a);
        let s = smith_normal_form(&a, c);
        if mat_mul(&mat_mul(&s.u, &a), &s.v) == s.d && common::is_diagonal_chain(&s.d) && common::det_is_unit(&s.u) && common::det_is_unit(&s.v) {
            snf += 1;
        }
    }
    ok &= snf == 500;
    notes.push(format!("SNF {snf}/500"));

    let lemma = |kind: FormKind, offset: u64| -> usize {
        (0..100u64)
            .filter(|s| {
                let pd = common::scrambled_instance(offset + s, kind);
                let b = match kind {
                    FormKind::Symplectic => homogeneous_symplectic_basis(&pd),
                    FormKind::Orthogonal => homogeneous_orthogonal_basis(&pd),
                };
                match b {
                    Ok(b) => std::panic::catch_unwind(|| common::check_lemma(&pd, &b)).is_ok(),
                    Err(_) => false,
                }
            })
            .count()
    };
    let sym = lemma(FormKind::Symplectic, 5000);
    let orth = lemma(FormKind::Orthogonal, 6000);
    ok &= sym == 100 && orth == 100;
    notes.push(format!("symplectic basis {sym}/100, orthogonal basis {orth}/100"));

    let blocks = std::panic::catch_unwind(|| common::check_block_relations(9)).unwrap_or(0);
    ok &= blocks == 24;
    notes.push(format!("block relations {blocks}/24"));

    let detail = notes.join(", ");
    if ok {
        Outcome::pass(detail)
    } else {
        Outcome::fail(detail)
    }
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "enumeration on (1,1,i,i)", criterion_1),
        (2, "generic twisted spectra", criterion_2),
        (3, "Heisenberg uniqueness and Weyl order", criterion_3),
        (4, "superalgebra counts and Weyl orders", criterion_4),
        (5, "universal groups", criterion_5),
        (6, "Weyl cross-check on (1,1,i,i)", criterion_6),
        (7, "brute force equals closure", criterion_7),
        (8, "property suites", criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let o = f();
        println!("{} criterion {id} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let known = KNOWN_DIVERGENT.contains(&id);
        if !o.pass && !(known && o.evidence_ok) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria pass except the documented divergences {KNOWN_DIVERGENT:?}");
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
}
