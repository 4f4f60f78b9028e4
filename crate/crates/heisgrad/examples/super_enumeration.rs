//! Fine gradings on Heisenberg superalgebras H_{2k+1,m}: one per r = 0..m/2.
use heisgrad::fine::{enumerate_fine_super, super_universal_prediction, FineKind};
use heisgrad::gradings::universal_group;
use heisgrad::scalars::CycloCtx;
use heisgrad::weyl::weyl_group;

fn main() {
    let ctx = CycloCtx::new(8).unwrap();
    for (k, m) in [(1, 2), (1, 3), (2, 4)] {
        let all = enumerate_fine_super(k, m, &ctx).unwrap();
        println!("H_({},{}): {} fine gradings", 2 * k + 1, m, all.len());
        for fg in &all {
            let FineKind::Super { r, .. } = fg.kind else { unreachable!() };
            let u = universal_group(&fg.grading).unwrap();
            let w = weyl_group(fg).unwrap();
            println!(
                "  r={r}: universal {} (expected {}), Weyl order {} (formula {})",
                u.group,
                super_universal_prediction(k, m, r),
                w.group.order(),
                w.formula
            );
        }
    }
}
