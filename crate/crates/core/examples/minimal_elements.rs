//! B-minimal elements of a simplex instance and the sumset they rebuild.
use sumsetlab::minimal::{b_minimal_decomposition, b_minimal_elements};
use sumsetlab::sumset::sumset;
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let a = PointSet::from_coords(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]])?;
    let b = PointSet::from_coords(&[&[3, 0], &[0, 3]])?;
    let fam = b_minimal_elements(&a, &b, 0)?;
    for (u, n) in &fam.elements {
        println!("{u} needs {n} summands");
    }
    println!("K(A,B) = {}", fam.k_value()?);
    for n in 1..=4 {
        println!("N = {n}: decomposition matches NA: {}", b_minimal_decomposition(&fam, n)? == sumset(&a, n)?);
    }
    Ok(())
}
