//! Cartan grading on H_{2k+1}: Weyl group generators, closure and the brute-force check.
use heisgrad::fine::gamma_hn;
use heisgrad::scalars::CycloCtx;
use heisgrad::weyl::{cycle_notation, weyl_bruteforce, weyl_group};

fn main() {
    let ctx = CycloCtx::new(8).unwrap();
    for k in 1..=3 {
        let fg = gamma_hn(k, &ctx).unwrap();
        let rep = weyl_group(&fg).unwrap();
        println!("H_{}: closure order {}, formula {}", 2 * k + 1, rep.group.order(), rep.formula);
        for g in &rep.generators {
            println!("  {:<12} {}", g.name, cycle_notation(&g.perm, &rep.component_names));
        }
        println!("  {}", rep.group.info().describe());
        if k <= 2 {
            let bf = weyl_bruteforce(&fg, 12).unwrap();
            println!("  brute force: {}", bf.order());
        }
    }
}
