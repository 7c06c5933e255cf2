//! Classify the irreducible representations of every catalog group and
//! print the audit against the regular representation.

use mackey::catalog;
use mackey::mackey::classify;

fn main() -> mackey::Result<()> {
    for (name, g) in catalog::standard() {
        let report = classify(&g, 0)?;
        let dims: Vec<usize> = report.entries.iter().map(|e| e.dim()).collect();
        println!(
            "{name}: |G| = {}, dims {:?}, sum of squares {}, audit {}",
            g.order(),
            dims,
            report.sum_dim_sq(),
            if report.audit.passed() { "pass" } else { "FAIL" }
        );
    }

    let g = catalog::affine(7)?;
    let report = classify(&g, 1)?;
    for e in &report.entries {
        println!(
            "  orbit {} (size {}), stabilizer order {}, stabilizer irrep {} -> dim {}",
            e.representative,
            e.orbit.len(),
            e.stabilizer.order(),
            e.stabilizer_irrep,
            e.dim()
        );
    }
    Ok(())
}
