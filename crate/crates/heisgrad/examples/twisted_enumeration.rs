//! Fine gradings on the twisted Heisenberg algebra with spectrum (1, 1, i, i).
use heisgrad::fine::{auto_conductor, enumerate_fine_twisted, fine_twisted, theorem_universal_group};
use heisgrad::gradings::universal_group;
use heisgrad::scalars::{CycloCtx, ScalarExpr};

fn main() {
    let exprs: Vec<ScalarExpr> = ["1", "1", "i", "i"].iter().map(|s| ScalarExpr::parse(s).unwrap()).collect();
    let ctx = CycloCtx::new(auto_conductor(&exprs, 1)).unwrap();
    let lambda: Vec<_> = exprs.iter().map(|e| e.eval(&ctx).unwrap()).collect();

    let en = enumerate_fine_twisted(&lambda).unwrap();
    for sh in &en.shapes {
        println!("l={} s={} r={}: {} candidate(s) {}", sh.l, sh.s, sh.r, sh.candidates, sh.note);
    }
    println!("{} candidates, {} classes", en.candidates.len(), en.classes.len());
    for (i, p) in en.classes.iter().enumerate() {
        let fg = fine_twisted(&lambda, p).unwrap();
        let u = universal_group(&fg.grading).unwrap();
        let members: Vec<String> = en
            .candidates
            .iter()
            .zip(&en.class_of)
            .filter(|(_, c)| **c == i)
            .map(|(q, _)| q.to_string())
            .collect();
        println!(
            "  [{}] {p}  {}  (theorem: {})  members: {}",
            i + 1,
            u.group,
            theorem_universal_group(p.l, p.s, p.r),
            members.join(" | ")
        );
    }
}
