//! Fuzzify one normalized sample with triangular and Gaussian grids.

use rfnn::{FuzzificationGrid, MembershipFamily};

fn main() -> rfnn::Result<()> {
    let ranges = [(-1.5, 2.0), (0.0, 1.0)];
    let sample = [0.3, 0.9];
    for family in [MembershipFamily::Triangular, MembershipFamily::Gaussian] {
        let grid = FuzzificationGrid::from_ranges(&ranges, 3, family)?;
        let mu = grid.fuzzify(&sample)?;
        println!("{family}:");
        for (j, row) in mu.row_iter().enumerate() {
            let values: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
            println!("  feature {j}: [{}]  sum {:.3}", values.join(", "), row.sum());
        }
    }
    Ok(())
}
