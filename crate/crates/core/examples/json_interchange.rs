//! Read a group definition, write it back in table form and serialize a
//! representation and its spectral measure.

use mackey::io::{parse_group, GroupDefinition, PvmFile, RepFile};
use mackey::repr::decompose_regular;
use mackey::spectral::spectral_measure;

const HEISENBERG_2: &str = r#"{
  "abelian": { "orders": [2, 2] },
  "h": { "cyclic": 2 },
  "action": { "per_element": [[[1, 0], [0, 1]], [[1, 0], [1, 1]]] }
}"#;

fn main() -> mackey::Result<()> {
    let g = parse_group(HEISENBERG_2, 10_000)?;
    println!("parsed group of order {}", g.order());
    let table = GroupDefinition::from_group(&g).to_json();
    println!(
        "table form: {} lines, reparses to the same group: {}",
        table.lines().count(),
        parse_group(&table, 10_000)?.group() == g.group()
    );

    let pi = decompose_regular(g.group(), 0)?.pop().expect("irreps");
    let restricted = pi.restrict(&mackey::groups::Subgroup::from_elements(
        g.group(),
        &(0..g.a().order()).map(|a| g.embed_a(a)).collect::<Vec<_>>(),
    )?);
    let p = spectral_measure(g.a(), &restricted)?;
    let rep_json = RepFile::from_rep(&pi).to_json();
    let pvm_json = PvmFile::from_pvm(&p).to_json();
    println!(
        "rep file: {} bytes, measure file: {} bytes",
        rep_json.len(),
        pvm_json.len()
    );

    let again = RepFile::from_json(&rep_json)?.to_rep()?;
    println!("round trip exact: {}", again == pi);
    Ok(())
}
