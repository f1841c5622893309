//! Facets, volume and a simplex cover of a lattice polygon.
use sumsetlab::polytope::{caratheodory_cover, convex_hull, normalized_volume};
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let a = PointSet::from_coords(&[&[0, 0], &[3, 0], &[0, 2], &[2, 2], &[1, 1]])?;
    let hull = convex_hull(&a)?;
    println!("vertices {}", hull.vertices);
    for f in &hull.facets {
        println!("  <{}, x> >= {}", f.normal, f.offset);
    }
    println!("normalized volume {}", normalized_volume(&a)?);
    for s in caratheodory_cover(&a)? {
        println!("simplex {s}");
    }
    Ok(())
}
