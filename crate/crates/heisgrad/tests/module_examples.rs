//! Small worked examples for each module, checked against hand computations.
mod common;

use heisgrad::abelian::{canonicalize, int_matrix, smith_normal_form, AbGroup};
use heisgrad::fine::{
    decompose_twisted_grading, enumerate_fine_super, enumerate_fine_twisted, equivalent_fine, fine_twisted, gamma1, gamma2, gamma_hn,
    gamma_super, homogenize_u, spectrum_check, FineKind, Role, TwistedParams,
};
use heisgrad::gradings::{
    coarsen, coarsen_hom, darboux_homogeneous_basis, form_eval, homogeneous_orthogonal_basis, homogeneous_symplectic_basis, is_toral_fine,
    universal_group, verify_grading, FormKind, Grading, PairedDecomposition,
};
use heisgrad::liealg::{heisenberg, twisted, LinMap};
use heisgrad::linalg::{unit_vec, vadd, vscale, vsub, Subspace};
use heisgrad::scalars::Cyclo;
use heisgrad::weyl::{
    closure, compute_pq, find_equivalence, induced_permutation, twisted_formula, weyl_bruteforce, weyl_group, weyl_order_formula,
};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::Arc;

fn diag(s: &heisgrad::abelian::Snf) -> Vec<i64> {
    s.diagonal().iter().map(|x| i64::try_from(x.clone()).unwrap()).collect()
}

#[test]
fn scalar_examples() {
    let c12 = common::ctx(12);
    assert_eq!(c12.zeta_pow(3).root_of_unity_order(), Some(4));
    assert_eq!(c12.from_int(2).root_of_unity_order(), None);
    let w3 = c12.root_of_unity(3, 1).unwrap();
    assert_eq!(w3.neg().root_of_unity_order(), Some(6));
    let c8 = common::ctx(8);
    assert_eq!(c8.zeta().inv().unwrap(), c8.zeta_pow(7));
    assert_eq!(common::ctx(4).sqrt_int(9).unwrap(), common::ctx(4).from_int(3));
}

#[test]
fn snf_and_group_examples() {
    assert_eq!(diag(&smith_normal_form(&int_matrix(&[vec![2, 0], vec![0, 3]]), 2)), vec![1, 6]);
    assert_eq!(diag(&smith_normal_form(&int_matrix(&[vec![2, 4], vec![6, 8]]), 2)), vec![2, 4]);
    let z = smith_normal_form(&int_matrix(&[vec![0, 0], vec![0, 0]]), 2);
    assert!(z.d.iter().flatten().all(|x| *x == BigInt::from(0)));
    assert_eq!(z.u, int_matrix(&[vec![1, 0], vec![0, 1]]));
    assert_eq!(z.v, int_matrix(&[vec![1, 0], vec![0, 1]]));

    assert!(canonicalize(2, &[]).unwrap().is_isomorphic(&AbGroup::free(2)));
    // generators u, z, e1 with 2u = 0 and 2e1 = z + u
    let g = canonicalize(3, &[vec![2, 0, 0], vec![-1, -1, 2]]).unwrap();
    assert_eq!((g.rank(), g.torsion().to_vec()), (1, vec![2]));

    let zz2 = AbGroup::from_invariants(1, &[2]);
    assert_eq!(zz2.elt(&[0, 1]).unwrap().order(), Some(2));
    assert!(AbGroup::free(3).is_torsion_free());
    assert!(!AbGroup::from_invariants(1, &[2, 2]).is_torsion_free());
}

#[test]
fn algebra_examples() {
    let ctx = common::ctx(8);
    let lam1 = vec![ctx.one()];
    let t = twisted(&lam1, &ctx);
    let v = |s: &str| t.vec_of(s).unwrap();
    assert_eq!(t.bracket(&v("e1"), &v("eh1")), v("z"));
    assert_eq!(t.bracket(&v("u"), &v("e1")), v("eh1"));
    assert_eq!(t.bracket(&v("u"), &v("eh1")), v("e1"));

    let lam = common::lambda(&["1", "2"]);
    let t = twisted(&lam, lam[0].ctx());
    let d = t.derived();
    assert_eq!(d.dim(), t.dim() - 1);
    assert!(!d.contains(&t.vec_of("u").unwrap()));

    let lam = common::lambda(&["1", "i"]);
    let t = twisted(&lam, lam[0].ctx());
    let c = t.center();
    assert_eq!(c.dim(), 1);
    assert!(c.contains(&t.vec_of("z").unwrap()));

    let mut h5 = heisenberg(2, &ctx);
    let (e1, eh1) = (h5.index("e1").unwrap(), h5.index("eh1").unwrap());
    let bad = vadd(&h5.vec_of("z").unwrap(), &h5.vec_of("e2").unwrap());
    h5.set_bracket(e1, eh1, &bad);
    h5.set_bracket(eh1, e1, &vscale(&ctx.from_int(-1), &bad));
    assert!(h5.verify_axioms().is_err());

    let h3 = heisenberg(1, &ctx);
    let id = LinMap::identity(&ctx, 3);
    assert!(h3.similitude_factor(&id).unwrap().is_one());
    let n = h3.dim();
    let (e1, eh1) = (h3.index("e1").unwrap(), h3.index("eh1").unwrap());
    let mut images: Vec<_> = (0..n).map(|i| unit_vec(&ctx, n, i)).collect();
    images.swap(e1, eh1);
    assert!(!h3.is_automorphism(&LinMap { images }));
}

#[test]
fn grading_examples() {
    let ctx = common::ctx(8);
    let h3 = gamma_hn(1, &ctx).unwrap();
    let gr = &h3.grading;
    let degs: Vec<Vec<i64>> = gr.support().iter().map(|g| g.coords().to_vec()).collect();
    let mut want = vec![vec![0, 2], vec![1, 1], vec![-1, 1]];
    want.sort();
    let mut got = degs.clone();
    got.sort();
    assert_eq!(got, want);

    // merging the e1 and z components into one degree is a coarsening, moving eh1 there is not a grading
    let e1 = h3.alg_vec("e1");
    let eh1 = h3.alg_vec("eh1");
    let z = h3.alg_vec("z");
    let g2 = AbGroup::from_invariants(0, &[2]);
    let mk = |items: Vec<(i64, Vec<Cyclo>)>| Grading::from_homogeneous(h3.algebra().clone(), g2.clone(), items.into_iter().map(|(d, v)| (g2.elt(&[d]).unwrap(), v)).collect());
    assert!(verify_grading(&mk(vec![(0, z.clone()), (1, e1.clone()), (1, eh1.clone())])).is_ok());
    assert!(verify_grading(&mk(vec![(0, z.clone()), (1, e1.clone()), (0, eh1.clone())])).is_err());

    let lam = common::lambda(&["1", "2"]);
    let u1 = universal_group(&gamma1(&lam).unwrap().grading).unwrap().group;
    assert_eq!((u1.rank(), u1.torsion().to_vec()), (1, vec![2, 2]));
    assert!(!is_toral_fine(&gamma1(&lam).unwrap().grading).unwrap());
    assert!(is_toral_fine(gr).unwrap());
    assert!(is_toral_fine(&gamma_super(1, 4, 2, &ctx).unwrap().grading).unwrap());
    assert!(!is_toral_fine(&gamma_super(1, 4, 1, &ctx).unwrap().grading).unwrap());

    let trivial = AbGroup::free(0);
    let t = coarsen_hom(gr, &trivial, &[trivial.zero(), trivial.zero()]).unwrap();
    assert_eq!(t.support().len(), 1);
    assert_eq!(universal_group(&t).unwrap().group.to_string(), AbGroup::free(0).to_string());

    let same = coarsen_hom(gr, &gr.group, &gr.group.generators()).unwrap();
    assert_eq!(same.support(), gr.support());

    // (a, b) -> a + b gives three components in degrees -1+1, 0+2, 1+1
    let zg = AbGroup::free(1);
    let one = zg.elt(&[1]).unwrap();
    let c = coarsen_hom(gr, &zg, &[one.clone(), one]).unwrap();
    let mut d: Vec<i64> = c.support().iter().map(|g| g.coords()[0]).collect();
    d.sort();
    assert_eq!(d, vec![0, 2, 2].into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect::<Vec<_>>());
    let _ = coarsen(gr, &gr.group, &gr.support().into_iter().map(|g| (g.clone(), g)).collect::<BTreeMap<_, _>>()).unwrap();
}

#[test]
fn basis_lemma_examples() {
    let ctx = common::ctx(8);
    let e = |i| unit_vec(&ctx, 2, i);
    let form_sym = vec![vec![ctx.zero(), ctx.one()], vec![ctx.from_int(-1), ctx.zero()]];
    let pd = PairedDecomposition { subspaces: vec![vec![e(0), e(1)]], form: form_sym.clone(), kind: FormKind::Symplectic };
    let b = homogeneous_symplectic_basis(&pd).unwrap();
    assert_eq!(b.pairs.len(), 1);
    let (_, u, _, v) = &b.pairs[0];
    assert!(form_eval(&form_sym, u, v).is_one());

    let pd = PairedDecomposition { subspaces: vec![vec![e(0)], vec![e(1)]], form: form_sym.clone(), kind: FormKind::Symplectic };
    let b = homogeneous_symplectic_basis(&pd).unwrap();
    assert_eq!((b.pairs.len(), b.pairs[0].0, b.pairs[0].2), (1, 0, 1));

    let ident = vec![vec![ctx.one(), ctx.zero()], vec![ctx.zero(), ctx.one()]];
    let pd = PairedDecomposition { subspaces: vec![vec![e(0), vadd(&e(0), &e(1))]], form: ident.clone(), kind: FormKind::Orthogonal };
    let b = homogeneous_orthogonal_basis(&pd).unwrap();
    assert_eq!(b.singles.len(), 2);
    assert!(form_eval(&ident, &b.singles[0].1, &b.singles[1].1).is_zero());

    let hyper = vec![vec![ctx.zero(), ctx.one()], vec![ctx.one(), ctx.zero()]];
    let pd = PairedDecomposition { subspaces: vec![vec![e(0)], vec![e(1)]], form: hyper, kind: FormKind::Orthogonal };
    let b = homogeneous_orthogonal_basis(&pd).unwrap();
    assert_eq!((b.pairs.len(), b.singles.len()), (1, 0));

    // Z_2-coarsening of the Cartan grading on H_5: e1, eh1 odd, the rest even
    let h5 = gamma_hn(2, &ctx).unwrap();
    let g2 = AbGroup::from_invariants(0, &[2]);
    let gens = h5.grading.group.generators();
    let imgs: Vec<_> = (0..gens.len()).map(|i| g2.elt(&[if i == 0 { 1 } else { 0 }]).unwrap()).collect();
    let c = coarsen_hom(&h5.grading, &g2, &imgs).unwrap();
    let d = darboux_homogeneous_basis(&c).unwrap();
    assert_eq!(d.pairs.len(), 2);
    for (u, v) in &d.pairs {
        assert_eq!(h5.algebra().bracket(u, v), d.z);
        assert!(c.degree_of(u).is_some() && c.degree_of(v).is_some());
    }
}

trait AlgVec {
    fn alg_vec(&self, s: &str) -> Vec<Cyclo>;
}

impl AlgVec for heisgrad::fine::FineGrading {
    fn alg_vec(&self, s: &str) -> Vec<Cyclo> {
        self.algebra().vec_of(s).unwrap()
    }
}

#[test]
fn fine_constructor_examples() {
    let ctx = common::ctx(8);
    // raw degrees (2; 0) and (1; 1) in Z x Z_2; the odd vector generates, so the universal group is Z
    let s = gamma_super(0, 1, 0, &ctx).unwrap();
    let u = universal_group(&s.grading).unwrap().group;
    assert_eq!((u.rank(), u.torsion().to_vec()), (1, vec![]));
    assert_eq!(s.grading.support().len(), 2);

    let s = gamma_super(1, 2, 1, &ctx).unwrap();
    let z = s.basis[s.role_index(&Role::Z).unwrap()].clone();
    let b = |r: Role| s.basis[s.role_index(&r).unwrap()].clone();
    assert_eq!(s.algebra().bracket(&b(Role::E(0)), &b(Role::EH(0))), z);
    assert_eq!(s.algebra().bracket(&b(Role::OddU(0)), &b(Role::OddV(0))), z);

    let groups: Vec<String> = enumerate_fine_super(1, 4, &ctx).unwrap().iter().map(|f| universal_group(&f.grading).unwrap().group.to_string()).collect();
    assert_eq!(groups.len(), 3);
    assert!(groups[0] != groups[1] && groups[1] != groups[2] && groups[0] != groups[2]);

    for k in 1..=3 {
        let a = gamma_super(k, 0, 0, &ctx).unwrap();
        let h = gamma_hn(k, &ctx).unwrap();
        assert!(find_equivalence(&a, &h, 12).unwrap().is_some());
    }

    // Γ2 relations on λ = (1, 2)
    let lam = common::lambda(&["1", "2"]);
    let g2 = gamma2(&lam).unwrap();
    let alg = g2.algebra();
    let uu = alg.vec_of("u").unwrap();
    let zz = alg.vec_of("z").unwrap();
    for (i, l) in lam.iter().enumerate() {
        let e = alg.vec_of(&format!("e{}", i + 1)).unwrap();
        let eh = alg.vec_of(&format!("eh{}", i + 1)).unwrap();
        let (ui, vi) = (vadd(&e, &eh), vsub(&e, &eh));
        assert_eq!(alg.bracket(&uu, &ui), vscale(l, &ui));
        assert_eq!(alg.bracket(&ui, &vi), vscale(&l.mul(&l.ctx().from_int(-2)), &zz));
        assert!(g2.grading.degree_of(&ui).is_some() && g2.grading.degree_of(&vi).is_some());
    }
}

#[test]
fn spectrum_and_equivalence_examples() {
    let lam = common::lambda(&["1", "1", "i", "i"]);
    let ctx = lam[0].ctx().clone();
    assert!(spectrum_check(&lam, &TwistedParams::parse("4,0,2;;1,1", &ctx).unwrap()).unwrap());
    let lam12 = common::lambda(&["1", "2"]);
    let c12 = lam12[0].ctx().clone();
    assert!(spectrum_check(&lam12, &TwistedParams::parse("2,0,2;;1,2", &c12).unwrap()).unwrap());
    assert!(!spectrum_check(&lam12, &TwistedParams::parse("4,0,1;;1", &c12).unwrap()).unwrap());

    let g = fine_twisted(&lam, &TwistedParams::parse("1,4,0;1,1,i,i;", &ctx).unwrap()).unwrap();
    assert_eq!(universal_group(&g.grading).unwrap().group.to_string(), AbGroup::free(5).to_string());
    let g = fine_twisted(&lam, &TwistedParams::parse("4,1,0;1;", &ctx).unwrap()).unwrap();
    assert_eq!(universal_group(&g.grading).unwrap().group.to_string(), AbGroup::from_invariants(2, &[4]).to_string());

    let p = TwistedParams::parse("1,2,0;1,2;", &c12).unwrap();
    let q = TwistedParams::parse("1,2,0;2,4;", &c12).unwrap();
    let eps = equivalent_fine(&p, &q).unwrap();
    assert!(eps == c12.from_frac(1, 2) || eps == c12.from_frac(-1, 2));
    assert!(equivalent_fine(&p, &p).is_some());
    // listed as two gradings, but ε = i carries one onto the other
    let a = TwistedParams::parse("2,1,2;i;1,1", &ctx).unwrap();
    let b = TwistedParams::parse("2,1,2;1;i,i", &ctx).unwrap();
    assert!(equivalent_fine(&a, &b).is_some());
}

#[test]
fn decomposition_examples() {
    let lam = common::lambda(&["1", "2"]);
    let ctx = lam[0].ctx().clone();
    let g2 = gamma2(&lam).unwrap();
    let (u, _) = homogenize_u(&g2.grading).unwrap();
    assert_eq!(u, g2.algebra().vec_of("u").unwrap());

    // transport by exp(ad x) with x = e1 + eh1: u goes to u - [x, u] + ... and is no longer homogeneous in the old basis
    let alg = g2.algebra();
    let x = vadd(&alg.vec_of("e1").unwrap(), &alg.vec_of("eh1").unwrap());
    let f = heisgrad::liealg::exp_ad(alg, &x).unwrap();
    let moved = g2.grading.transport(&f);
    let (u2, deg) = homogenize_u(&moved).unwrap();
    assert_eq!(moved.degree_of(&u2), Some(deg.clone()));
    assert!(deg.order().is_none() || deg.order().unwrap() > 0);
    let d = decompose_twisted_grading(&moved).unwrap();
    assert_eq!(d.params.shape(), (1, 2, 0));
    let d1 = decompose_twisted_grading(&gamma1(&lam).unwrap().grading).unwrap();
    assert_eq!(d1.params.shape(), (2, 0, 2));

    let lam = common::lambda(&["1", "1", "i", "i"]);
    let en = enumerate_fine_twisted(&lam).unwrap();
    for p in &en.candidates {
        let d = decompose_twisted_grading(&fine_twisted(&lam, p).unwrap().grading).unwrap();
        assert!(equivalent_fine(&d.params, p).is_some(), "{p} -> {}", d.params);
    }
    let _ = ctx;
}

#[test]
fn weyl_examples() {
    let ctx = common::ctx(8);
    let h3 = gamma_hn(1, &ctx).unwrap();
    let rep = weyl_group(&h3).unwrap();
    let mu = rep.generators.iter().find(|g| g.name.starts_with("mu")).unwrap();
    let moved: Vec<usize> = (0..mu.perm.len()).filter(|&i| mu.perm[i] != i).collect();
    assert_eq!(moved.len(), 2);
    assert_eq!(closure(2, &[vec![1, 0]]).order(), 2);

    let s = gamma_super(1, 3, 1, &ctx).unwrap();
    assert_eq!(weyl_group(&s).unwrap().group.order(), 4);
    assert_eq!(weyl_order_formula(&s), 4);

    let lam = common::lambda(&["1", "1", "i", "i"]);
    let c = lam[0].ctx().clone();
    for (f, pq, formula) in [(gamma2(&lam).unwrap(), (4, 2), 16), (gamma1(&lam).unwrap(), (4, 2), 128)] {
        let FineKind::Twisted { params, .. } = &f.kind else { unreachable!() };
        let s = compute_pq(params);
        assert_eq!((s.p, s.q), pq);
        assert_eq!(twisted_formula(params), formula);
    }
    let d4 = TwistedParams::parse("4,1,0;1;", &c).unwrap();
    assert_eq!(twisted_formula(&d4), 8);
    let fg = fine_twisted(&lam, &d4).unwrap();
    assert_eq!(weyl_bruteforce(&fg, 12).unwrap().order(), 8);

    let lam12 = common::lambda(&["1", "2"]);
    let FineKind::Twisted { params, .. } = &gamma2(&lam12).unwrap().kind else { unreachable!() };
    let s = compute_pq(params);
    assert_eq!((s.p, s.q), (1, 1));

    // a torus element of H_3 fixes both non-central components
    let n = h3.algebra().dim();
    let mut images: Vec<_> = (0..n).map(|i| unit_vec(&ctx, n, i)).collect();
    images[1][1] = ctx.from_int(5);
    images[2][2] = ctx.from_frac(1, 5);
    let ga = induced_permutation(&LinMap { images }, &h3.grading).unwrap();
    assert!(ga.perm.iter().enumerate().all(|(i, &j)| i == j));
    let _ = Subspace::span(1, &[]);
    let _ = Arc::clone(h3.algebra());
}
