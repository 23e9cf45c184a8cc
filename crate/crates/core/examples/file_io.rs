// Reading and writing posets, modules and verdicts.

use serde_json::json;

use posetcalc::grothendieck::{iso_check, IsoOptions};
use posetcalc::io::{module_from_json, module_to_json, parse_poset_text, verdict_to_json, write_poset_text};
use posetcalc::{PosetModule, Result, Q};

const FIXTURE: &str = "\
# a vee
objects: a b top
cover: a top
cover: b top
";

pub fn run_example() -> Result<()> {
    let p = parse_poset_text(FIXTURE)?;
    print!("{}", write_poset_text(&p));
    let doc = json!({
        "poset": { "objects": ["a", "b", "top"], "covers": [["a", "top"], ["b", "top"]] },
        "dims": { "a": 1, "b": 1, "top": 2 },
        "maps": { "a,top": [["1"], ["0"]], "b,top": [["1/2"], [3]] }
    });
    let m: PosetModule<Q> = module_from_json(&doc, None)?;
    println!("{}", module_to_json(&m));
    let v = iso_check(&m, &m, &IsoOptions::default())?;
    println!("{}", verdict_to_json(m.poset(), &v));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
