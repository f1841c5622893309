//! Iterated sumsets of a small planar set and their sizes.
use sumsetlab::sumset::{growth_table, sumset};
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let a = PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])?;
    println!("A = {a}");
    println!("2A = {}", sumset(&a, 2)?);
    let table = growth_table(&a, 10)?;
    for (n, size) in table.sizes.iter().enumerate() {
        println!("|{}A| = {size}", n + 1);
    }
    Ok(())
}
