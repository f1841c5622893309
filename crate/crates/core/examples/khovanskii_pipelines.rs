//! The three routes to the growth polynomial: interpolation, coset formula
//! for simplices, and minimally useless vectors.
use sumsetlab::khovanskii::{fit_instance, khovanskii_poly_general, khovanskii_poly_simplex};
use sumsetlab::minimal::minimal_useless_auto;
use sumsetlab::PointSet;

fn main() -> sumsetlab::Result<()> {
    let a = PointSet::from_ints(&[0, 2, 5]);
    let fit = fit_instance(&a, 12)?;
    println!("interpolated: {} from N = {} (checked to {})", fit.polynomial, fit.onset, fit.horizon);

    let fam = minimal_useless_auto(&a, 2, 16)?;
    println!("minimally useless vectors {:?} (certified {})", fam.minimal_useless, fam.certified);
    let general = khovanskii_poly_general(&fam)?;
    println!("useless-vector count: {} from N = {}", general.polynomial, general.onset);

    let tri = PointSet::from_coords(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]])?;
    let sp = khovanskii_poly_simplex(&tri)?;
    println!("simplex {tri}: group {:?}, {} from N = {}", sp.invariant_factors, sp.polynomial, sp.onset);
    println!("interpolated: {}", fit_instance(&tri, 10)?.polynomial);
    Ok(())
}
