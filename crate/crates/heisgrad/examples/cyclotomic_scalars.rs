//! Exact arithmetic in Q(zeta_N): roots of unity, square roots of integers, parsing.
use heisgrad::scalars::{CycloCtx, ScalarExpr};

fn main() {
    let ctx = CycloCtx::new(24).unwrap();
    let i = ctx.i().unwrap();
    println!("field Q(zeta_{}) of degree {}", ctx.conductor(), ctx.degree());
    println!("i^2 = {}", i.mul(&i));

    for l in [2u64, 3, 6] {
        let r = ctx.sqrt_int(l).unwrap();
        println!("sqrt({l}) = {r}   squared: {}", r.mul(&r));
    }

    let w = ctx.root_of_unity(3, 1).unwrap();
    println!("zeta(3) = {w}, order {:?}", w.root_of_unity_order());

    let src = "3/2*zeta(8)^3 - sqrt(2)";
    let e = ScalarExpr::parse(src).unwrap();
    println!("{src} needs conductor {}", e.required_conductor());
    let v = e.eval(&ctx).unwrap();
    println!("evaluated: {v}, inverse: {}", v.inv().unwrap());
}
