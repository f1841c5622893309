//! Small kernel vectors, positive solutions and minimal solution families.
use sumsetlab::bounded_solve::{bounded_kernel_basis, minimal_positive_solutions, positive_solution, small_kernel_vector, IntegerMatrix};
use sumsetlab::LatticePoint;

fn main() -> sumsetlab::Result<()> {
    let m = IntegerMatrix::new(vec![vec![3, -2, 1, 4], vec![1, 1, -1, 2]])?;
    println!("kernel vector {}", small_kernel_vector(&m)?);
    let kb = bounded_kernel_basis(&m)?;
    println!("kernel basis {:?}, product {} (bound^2 {})", kb.basis, kb.norm_product, kb.bound_squared);

    let witness = LatticePoint::new(vec![40, 55, 90, 7]);
    let b = LatticePoint::new(m.apply(&witness.to_big()).iter().map(|v| i64::try_from(v).unwrap()).collect());
    let s = positive_solution(&m, &b, &witness)?;
    println!("positive solution {} (bound {}, within {})", s.solution, s.bound, s.within_bound);

    let row = IntegerMatrix::new(vec![vec![1, 1, -1]])?;
    let fam = minimal_positive_solutions(&row, &LatticePoint::new(vec![3]), 2, 1000)?;
    for (x, y) in &fam.solutions {
        println!("minimal x = {x} with y = {y}");
    }
    println!("searched [1, {}]^2, certified {}", fam.searched, fam.certified);
    Ok(())
}
