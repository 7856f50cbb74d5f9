//! Width statistics of growing windows in ℤ² and 𝔹_fin, next to the widths
//! of the prime posets restricted to the same windows.

use lattice_repr::lazylf::{BFin, ZGrid, DEFAULT_WINDOW_LIMIT};
use lattice_repr::repr::conjecture_probe;

fn main() -> lattice_repr::Result<()> {
    let radii = [1, 2, 3, 4];
    let z = conjecture_probe(&ZGrid::new(2), &radii, DEFAULT_WINDOW_LIMIT)?;
    let b = conjecture_probe(&BFin, &radii, DEFAULT_WINDOW_LIMIT)?;
    for r in [&z, &b] {
        println!("{}", r.lattice);
        for w in &r.windows {
            println!(
                "  radius {}: {} elements, lattice width {}, prime width {:?}",
                w.radius, w.elements, w.lattice_width, w.prime_width
            );
        }
    }
    Ok(())
}
