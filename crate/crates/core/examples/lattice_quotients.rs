//! Hermite bases, difference lattices and finite quotients.
use sumsetlab::lattice::quotient_group;
use sumsetlab::{IntegerLattice, LatticePoint, PointSet};

fn main() -> sumsetlab::Result<()> {
    let gens = [LatticePoint::new(vec![2, 0]), LatticePoint::new(vec![0, 3])];
    let sub = IntegerLattice::span(2, &gens)?;
    let g = quotient_group(&IntegerLattice::full(2), &sub)?;
    println!("Z^2 / <(2,0),(0,3)> has invariant factors {:?}", g.invariant_factors());
    let v = LatticePoint::new(vec![1, 1]);
    println!("(1,1) projects to {:?} of order {}", g.project(&v)?, g.element_order(&g.project(&v)?));

    let a = PointSet::from_coords(&[&[0, 0], &[2, 1], &[1, 2]])?;
    let lattice_a = a.lattice()?;
    let diff = a.difference_lattice()?;
    println!("Λ_A basis {:?}, det {:?}", lattice_a.basis(), lattice_a.full_rank_determinant());
    println!("Λ_(A-A) contains (1,-1): {}", diff.contains(&LatticePoint::new(vec![1, -1])));
    Ok(())
}
