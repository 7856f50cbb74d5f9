//! Drive a lattice through the JSON-lines plugin protocol. With an argument
//! it spawns that command (for example `latrep serve ngrid2`); otherwise it
//! writes a static oracle table for a strip of ℤ² and reads it back.

use lattice_repr::lazylf::plugin::{write_oracle_table, OpaqueElem, PluginLattice};
use lattice_repr::lazylf::{interval, Covering, ZGrid, DEFAULT_WINDOW_LIMIT};
use lattice_repr::transpose::classify_prime;
use serde_json::json;

fn main() -> lattice_repr::Result<()> {
    let e = |v| OpaqueElem::new(v);
    let (lattice, _dir) = match std::env::args().nth(1) {
        Some(cmd) => (PluginLattice::open(&cmd)?, None),
        None => {
            let dir = std::env::temp_dir().join(format!("latrep-example-{}", std::process::id()));
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("corner.jsonl");
            let elems: Vec<Vec<i64>> = (0..4).flat_map(|i| (-4..4).map(move |j| vec![i, j])).collect();
            write_oracle_table(&ZGrid::new(2), &elems, std::fs::File::create(&path)?)?;
            println!("wrote {}", path.display());
            (PluginLattice::from_table(&path)?, Some(dir))
        }
    };
    let w = interval(&lattice, &e(json!([0, 0])), &e(json!([2, 2])), DEFAULT_WINDOW_LIMIT)?;
    println!("window [(0,0), (2,2)]: {} elements, {} covers", w.len(), w.lattice().poset().covers().len());

    let c = Covering { lower: e(json!([1, 1])), upper: e(json!([2, 1])) };
    let v = classify_prime(&lattice, &c, 2)?;
    println!("{}", serde_json::to_string_pretty(&v.to_json())?);
    if let Some(dir) = _dir {
        std::fs::remove_dir_all(dir)?;
    }
    Ok(())
}
