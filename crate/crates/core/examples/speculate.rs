//! Observed N_Str, N_Kh and d! vol(H(A)) side by side.
use sumsetlab::khovanskii::fit_instance;
use sumsetlab::polytope::normalized_volume;
use sumsetlab::structure::empirical_structure_onset;
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let sets = [
        PointSet::from_ints(&[0, 3, 7]),
        PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])?,
        PointSet::from_coords(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]])?,
    ];
    for a in &sets {
        let kh = fit_instance(a, 14)?.onset;
        let st = empirical_structure_onset(a, 8)?.onset;
        println!("{a}: N_Str {st:?}, N_Kh {kh}, d! vol {}", normalized_volume(a)?);
    }
    Ok(())
}
