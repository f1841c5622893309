//! NA against the extremal-union description, with failures shown.
use sumsetlab::structure::{interior_margin, structure_report};
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    for a in [PointSet::from_ints(&[0, 2, 5]), PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])?] {
        let rep = structure_report(&a, 8)?;
        println!("A = {a}");
        for v in &rep.verdicts {
            println!("  N = {}: |NA| = {}, rhs = {}, equal {}", v.n, v.sumset_size, v.rhs_size, v.equal);
        }
        println!("  onset {:?} within N <= {}", rep.empirical_onset.onset, rep.empirical_onset.horizon);
        let mu = interior_margin(&a, 4)?;
        println!("  {} exceptional points, margin {}", mu.exceptional_points, mu.margin);
    }
    Ok(())
}
