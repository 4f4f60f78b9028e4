//! Weyl groups of every fine grading on H^(1,1,i,i): generators' closure, closed formula, brute force.
use heisgrad::fine::{auto_conductor, enumerate_fine_twisted, fine_twisted};
use heisgrad::scalars::{CycloCtx, ScalarExpr};
use heisgrad::weyl::{missing, weyl_bruteforce, weyl_group};

fn main() {
    let exprs: Vec<ScalarExpr> = ["1", "1", "i", "i"].iter().map(|s| ScalarExpr::parse(s).unwrap()).collect();
    let ctx = CycloCtx::new(auto_conductor(&exprs, 1)).unwrap();
    let lambda: Vec<_> = exprs.iter().map(|e| e.eval(&ctx).unwrap()).collect();
    let en = enumerate_fine_twisted(&lambda).unwrap();
    println!("{:<24} {:>7} {:>7} {:>9} {:>7}  structure", "params", "closure", "formula", "corrected", "brute");
    for p in &en.classes {
        let fg = fine_twisted(&lambda, p).unwrap();
        let rep = weyl_group(&fg).unwrap();
        let bf = weyl_bruteforce(&rep.grading, 12).unwrap();
        assert!(missing(&rep.group, &bf).is_empty());
        println!(
            "{:<24} {:>7} {:>7} {:>9} {:>7}  {}",
            p.to_string(),
            rep.group.order(),
            rep.formula,
            rep.formula_corrected,
            bf.order(),
            rep.group.info().describe()
        );
    }
}
