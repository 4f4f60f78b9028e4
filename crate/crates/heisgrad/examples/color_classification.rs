//! Heisenberg color algebras: build one from a type, scramble its basis, classify it back.
use heisgrad::abelian::AbGroup;
use heisgrad::color::{classify_color, color_algebra, is_super_realizable, verify_color_axioms, Bicharacter, ColorType};
use heisgrad::linalg::{unit_vec, vadd};
use heisgrad::scalars::CycloCtx;
use std::collections::BTreeMap;

fn main() {
    let ctx = CycloCtx::new(8).unwrap();
    let g = AbGroup::from_invariants(0, &[4]);
    let eps = Bicharacter::new(&g, &ctx, vec![vec![ctx.from_int(-1)]]).unwrap();
    let g0 = g.elt(&[2]).unwrap();
    let dims: BTreeMap<_, _> = [(g.elt(&[2]).unwrap(), 1), (g.elt(&[1]).unwrap(), 2), (g.elt(&[3]).unwrap(), 2)].into_iter().collect();
    let t = ColorType::new(&g, g0, eps, dims).unwrap();
    let (alg, roles) = color_algebra(&t).unwrap();
    println!("dimension {}, axioms hold: {}", alg.dim(), verify_color_axioms(&alg).pass());
    println!("roles: {}", roles.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "));

    // a homogeneous change of basis inside each component
    let n = alg.dim();
    let mut basis: Vec<_> = (0..n).map(|i| unit_vec(&ctx, n, i)).collect();
    for i in 1..n {
        if alg.degrees[i] == alg.degrees[i - 1] {
            basis[i] = vadd(&basis[i], &basis[i - 1]);
        }
    }
    let labels = (0..n).map(|i| format!("b{i}")).collect();
    let scrambled = alg.change_basis(&basis, labels).unwrap();

    let c = classify_color(&scrambled).unwrap();
    println!("recovered g0 = {}, support subgroup {}", c.color_type.g0, c.support_subgroup.group);
    for (role, v) in c.roles.iter().zip(&c.basis) {
        println!("  {role} = {}", heisgrad::color::fmt_color_vec(&scrambled, v));
    }
    match is_super_realizable(&t) {
        Some(sp) => println!("realizable as a superalgebra: {} even, {} odd degrees", sp.even.len(), sp.odd.len()),
        None => println!("not realizable as a superalgebra"),
    }
}
