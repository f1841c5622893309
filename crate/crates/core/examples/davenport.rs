//! Davenport constants and the restricted variant k(G,H).
use sumsetlab::minimal::{davenport_constant, davenport_upper_bound, k_constant};
use sumsetlab::FiniteAbelianGroup;

fn main() -> sumsetlab::Result<()> {
    for moduli in [vec![6], vec![2, 2], vec![2, 4], vec![3, 3]] {
        let g = FiniteAbelianGroup::product_of_cyclic(&moduli)?;
        println!("{:?}: D = {}, upper bound {:.2}", g.invariant_factors(), davenport_constant(&g)?, davenport_upper_bound(&g));
    }
    let g = FiniteAbelianGroup::product_of_cyclic(&[5])?;
    println!("k(Z/5, {{1}}) = {}", k_constant(&g, &[vec![1]])?);
    println!("k(Z/5, {{1,2}}) = {}", k_constant(&g, &[vec![1], vec![2]])?);
    Ok(())
}
