//! Hide a fine grading behind a random automorphism and recover its block parameters.
use heisgrad::fine::{auto_conductor, decompose_twisted_grading, equivalent_fine, fine_twisted, TwistedParams};
use heisgrad::gradings::verify_grading;
use heisgrad::linalg::vsub;
use heisgrad::liealg::random_automorphism;
use heisgrad::scalars::{CycloCtx, ScalarExpr};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let exprs: Vec<ScalarExpr> = ["1", "1", "i", "i"].iter().map(|s| ScalarExpr::parse(s).unwrap()).collect();
    let ctx = CycloCtx::new(auto_conductor(&exprs, 1)).unwrap();
    let lambda: Vec<_> = exprs.iter().map(|e| e.eval(&ctx).unwrap()).collect();
    let p = TwistedParams::parse("2,1,2;1;i,i", &ctx).unwrap();
    let fg = fine_twisted(&lambda, &p).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_automorphism(fg.algebra(), &mut rng, 3);
    let hidden = fg.grading.transport(&f);
    verify_grading(&hidden).unwrap();

    let d = decompose_twisted_grading(&hidden).unwrap();
    println!("input parameters:     {p}");
    println!("recovered parameters: {}", d.params);
    println!("equivalent: {}", equivalent_fine(&p, &d.params).is_some());
    let alg = fg.algebra();
    let u = alg.vec_of("u").unwrap();
    println!("u' - u has {} nonzero coordinates", vsub(&d.u_prime, &u).iter().filter(|c| !c.is_zero()).count());
    for b in &d.blocks {
        println!("  block type {} with parameter {}", if b.type_ii { "II" } else { "I" }, b.param);
    }
}
