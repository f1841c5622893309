//! Closed-form onset thresholds next to the observed onsets.
use sumsetlab::khovanskii::{fit_instance, khovanskii_thresholds};
use sumsetlab::structure::empirical_structure_onset;
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let a = PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])?;
    let report = khovanskii_thresholds(&a)?;
    for t in report.entries.iter().filter(|t| t.applicable) {
        let value = match &t.value {
            None => "(too large)".to_string(),
            Some(v) if v.to_string().len() > 30 => format!("{} digits", v.to_string().len()),
            Some(v) => v.to_string(),
        };
        println!("{:<16} {:<10} {:?} {value}", t.name, t.target, t.kind);
    }
    println!("observed N_Kh = {}", fit_instance(&a, 12)?.onset);
    println!("observed N_Str = {:?}", empirical_structure_onset(&a, 8)?.onset);
    Ok(())
}
