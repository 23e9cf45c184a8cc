// Line posets, line components and a maximal line connected tree.

use std::sync::Arc;

use posetcalc::io::write_poset_text;
use posetcalc::{line_components, line_connected_maximal_tree, LineMap, Poset, Result};

pub fn run_example() -> Result<()> {
    let diamond = Arc::new(Poset::from_covers(
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )?);
    let l = LineMap::new(&diamond);
    print!("{}", write_poset_text(&l.line));
    println!("line components of the diamond: {}", line_components(&diamond).components.len());

    // two covers in and two out of 1, plus a square on top: line connected but not a tree
    let p = Arc::new(Poset::from_covers(
        &["0", "3", "1", "2", "4", "5"],
        &[("0", "1"), ("3", "1"), ("1", "2"), ("1", "4"), ("2", "5"), ("4", "5")],
    )?);
    let lc = line_components(&p);
    println!("components: {}, isolated objects: {}", lc.components.len(), lc.isolated.len());
    match line_connected_maximal_tree(&p) {
        Ok(t) => println!("maximal tree: {}", t.edge_labels().join(" ")),
        Err(e) => println!("no maximal tree: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
