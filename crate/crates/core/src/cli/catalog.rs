//! Built-in link catalog.

use serde::Serialize;

use crate::braidrep::{component_count, BraidWord};

#[derive(Clone, Debug, Serialize)]
pub struct LinkEntry {
    pub name: String,
    pub braid: BraidWord,
    pub expected_components: usize,
    pub notes: String,
}

fn entry(name: &str, strands: usize, letters: &[i32], components: usize, notes: &str) -> Result<LinkEntry, String> {
    let braid = BraidWord::new(strands, letters.to_vec()).map_err(|e| format!("{name}: {e}"))?;
    let got = component_count(&braid);
    if got != components {
        return Err(format!("{name}: {braid} closes to {got} components, expected {components}"));
    }
    Ok(LinkEntry { name: name.to_string(), braid, expected_components: components, notes: notes.to_string() })
}

/// All entries, each validated by its component count.
pub fn load_catalog() -> Result<Vec<LinkEntry>, String> {
    let mut out = vec![
        entry("unknot", 1, &[], 1, "")?,
        entry("unlink-2", 2, &[], 2, "two-component unlink")?,
        entry("hopf", 2, &[1, 1], 2, "")?,
        entry("trefoil", 2, &[1, 1, 1], 1, "")?,
    ];
    for q in 1..=6usize {
        let comps = if q % 2 == 0 { 2 } else { 1 };
        out.push(entry(&format!("torus-2-{q}"), 2, &vec![1; q], comps, "(2,q) torus link")?);
    }
    out.push(entry("figure-eight", 3, &[1, -2, 1, -2], 1, "")?);
    out.push(entry("trefoil#trefoil", 3, &[1, 1, 1, 2, 2, 2], 1, "granny knot")?);
    out.push(entry("chain-3", 3, &[1, 1, 2, 2], 3, "linear chain of three unknots")?);
    out.push(entry("trefoil#hopf", 3, &[1, 1, 1, 2, 2], 2, "")?);
    Ok(out)
}

pub fn find(catalog: &[LinkEntry], name: &str) -> Option<LinkEntry> {
    catalog.iter().find(|e| e.name == name).cloned()
}
