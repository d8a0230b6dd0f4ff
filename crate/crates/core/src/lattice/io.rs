use std::io::{BufRead, Write};
use std::sync::Arc;

use super::FamilyCatalogue;
use crate::bitset::BitSet;
use crate::ground::GroundSet;
use crate::statement::sta_size;
use crate::{CiError, Result};

pub fn summary_csv_header() -> &'static str {
    "family,models,types,irreducibles,irreducible_types,coatoms,coatom_types"
}

/// `ground:` header, then one model per line as space-separated hex
/// statement indices (`-` for the empty model). Incomplete catalogues get a
/// trailing `# partial` line.
pub fn write_catalogue<W: Write>(ground: &GroundSet, models: &[BitSet], complete: bool, mut w: W) -> Result<()> {
    writeln!(w, "ground: {ground}")?;
    for m in models {
        if m.count() == 0 {
            writeln!(w, "-")?;
            continue;
        }
        let line: Vec<String> = m.iter().map(|t| format!("{t:x}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    if !complete {
        writeln!(w, "# partial")?;
    }
    Ok(())
}

pub fn read_catalogue<R: BufRead>(r: R) -> Result<FamilyCatalogue> {
    let mut ground: Option<Arc<GroundSet>> = None;
    let mut models = Vec::new();
    let mut complete = true;
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line == "# partial" {
            complete = false;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(g) = &ground else {
            let rest = line
                .strip_prefix("ground:")
                .ok_or_else(|| CiError::parse(no + 1, "expected `ground:` header"))?;
            ground = Some(Arc::new(
                GroundSet::new(rest.split_whitespace()).map_err(|e| CiError::parse(no + 1, e.to_string()))?,
            ));
            continue;
        };
        let u = sta_size(g.len());
        let mut b = BitSet::new(u);
        if line != "-" {
            for tok in line.split_whitespace() {
                let t = usize::from_str_radix(tok, 16)
                    .map_err(|_| CiError::parse(no + 1, format!("bad hex index `{tok}`")))?;
                if t >= u {
                    return Err(CiError::parse(no + 1, format!("statement index {t} out of range")));
                }
                b.insert(t);
            }
        }
        models.push(b);
    }
    let g = ground.ok_or_else(|| CiError::parse(0, "missing `ground:` header"))?;
    let mut cat = FamilyCatalogue::new(g, models);
    cat.complete = complete;
    Ok(cat)
}
