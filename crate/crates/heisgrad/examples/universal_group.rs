//! Smith normal form, canonical abelian groups and the universal group of a grading.
use heisgrad::abelian::{canonicalize, int_matrix, mat_mul, smith_normal_form};
use heisgrad::fine::gamma_hn;
use heisgrad::gradings::{universal_group, verify_grading};
use heisgrad::scalars::CycloCtx;

fn main() {
    let a = int_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&a, 3);
    println!("diagonal of SNF: {:?}", snf.diagonal());
    assert_eq!(mat_mul(&mat_mul(&snf.u, &a), &snf.v), snf.d);

    // <a,b | 2a = 0, 4b + 2a = 0>
    let g = canonicalize(2, &[vec![2, 0], vec![2, 4]]).unwrap();
    println!("presented group: {g}");

    let ctx = CycloCtx::new(8).unwrap();
    let fg = gamma_hn(2, &ctx).unwrap();
    verify_grading(&fg.grading).unwrap();
    let u = universal_group(&fg.grading).unwrap();
    println!("Cartan grading on H_5: universal group {}", u.group);
    for (g, h, k) in &u.relations {
        println!("  {g} + {h} = {k}");
    }
}
