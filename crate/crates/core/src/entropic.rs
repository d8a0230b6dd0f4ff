//! Ingesting coatom candidates (models or supermodular functions) and
//! screening them for self-adhesivity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::closure::{is_member, with_oracle};
use crate::frames::FrameSpec;
use crate::ground::{GroundSet, VarSet};
use crate::lattice::{canonical_form, orbit_of};
use crate::model::CIModel;
use crate::selfadhesion::{sa_verdict_bits, LPolicy, SaVerdict, SelfAdhesionConfig};
use crate::supermodular::SetFunction;
use crate::{CiError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordSource {
    ModelFile,
    SupermodularFile,
}

#[derive(Clone, Debug)]
pub struct CoatomRecord {
    pub id: String,
    pub source: RecordSource,
    pub model: CIModel,
    pub orbit_rep: CIModel,
    /// Number of input records merged into this one.
    pub multiplicity: usize,
}

impl CoatomRecord {
    pub fn new(id: String, source: RecordSource, model: CIModel) -> CoatomRecord {
        let rep = canonical_form(model.bits(), model.n());
        let orbit_rep = CIModel::from_bits(model.ground().clone(), rep).expect("same universe");
        CoatomRecord { id, source, model, orbit_rep, multiplicity: 1 }
    }

    pub fn orbit_size(&self) -> usize {
        orbit_of(self.model.bits(), self.model.n()).len()
    }
}

struct Block<'a> {
    id: Option<String>,
    header_line: usize,
    ground: &'a str,
    body: Vec<(usize, &'a str)>,
}

fn split_blocks(text: &str) -> Result<Vec<Block<'_>>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut pending_id: Option<String> = None;
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix("id:") {
            if pending_id.is_some() {
                return Err(CiError::parse(no, "`id:` without a following `ground:`"));
            }
            pending_id = Some(id.trim().to_string());
        } else if let Some(g) = line.strip_prefix("ground:") {
            blocks.push(Block { id: pending_id.take(), header_line: no, ground: g, body: Vec::new() });
        } else {
            match blocks.last_mut() {
                Some(b) if pending_id.is_none() => b.body.push((no, line)),
                _ => return Err(CiError::parse(no, "expected `ground:` header")),
            }
        }
    }
    if pending_id.is_some() {
        return Err(CiError::parse(0, "trailing `id:` without a record"));
    }
    Ok(blocks)
}

/// Parses one or more records. Each record is an optional `id:` line, a
/// `ground:` header, and either statement lines or `set` lines. Records of
/// the same permutational type are merged with multiplicity.
pub fn parse_records(text: &str) -> Result<Vec<CoatomRecord>> {
    let mut out: Vec<CoatomRecord> = Vec::new();
    let mut by_orbit: HashMap<crate::BitSet, usize> = HashMap::new();
    let mut common: Option<Arc<GroundSet>> = None;
    for (k, b) in split_blocks(text)?.into_iter().enumerate() {
        let g = GroundSet::new(b.ground.split_whitespace()).map_err(|e| CiError::parse(b.header_line, e.to_string()))?;
        let g = match &common {
            Some(c) if **c == g => c.clone(),
            Some(_) => return Err(CiError::parse(b.header_line, "records must share one ground set")),
            None => {
                let c = Arc::new(g);
                common = Some(c.clone());
                c
            }
        };
        let is_fn = b.body.first().is_some_and(|(_, l)| l.starts_with("set "));
        let (source, model) = if is_fn {
            let f = SetFunction::parse_lines(g.clone(), b.body.iter().copied())?;
            let m = f.induced_model()?;
            if m.is_full() {
                return Err(CiError::NotSupermodular(format!(
                    "record {} is modular and induces the top model",
                    k + 1
                )));
            }
            (RecordSource::SupermodularFile, m)
        } else {
            let mut m = CIModel::empty(g.clone());
            for &(no, line) in &b.body {
                let s = g.parse_statement(line).map_err(|e| CiError::parse(no, e.to_string()))?;
                if m.contains(&s) {
                    return Err(CiError::parse(no, format!("duplicate statement `{line}`")));
                }
                m.insert(s)?;
            }
            (RecordSource::ModelFile, m)
        };
        let id = b.id.unwrap_or_else(|| format!("r{}", k + 1));
        let rec = CoatomRecord::new(id, source, model);
        match by_orbit.get(rec.orbit_rep.bits()) {
            Some(&i) => out[i].multiplicity += 1,
            None => {
                by_orbit.insert(rec.orbit_rep.bits().clone(), out.len());
                out.push(rec);
            }
        }
    }
    Ok(out)
}

pub fn ingest_rays(path: &Path) -> Result<Vec<CoatomRecord>> {
    parse_records(&std::fs::read_to_string(path)?)
}

/// Records from in-memory models, merged by type; ids are `c1, c2, ...`.
pub fn records_from_models(models: &[CIModel]) -> Vec<CoatomRecord> {
    let mut out: Vec<CoatomRecord> = Vec::new();
    let mut by_orbit: HashMap<crate::BitSet, usize> = HashMap::new();
    for (k, m) in models.iter().enumerate() {
        let rec = CoatomRecord::new(format!("c{}", k + 1), RecordSource::ModelFile, m.clone());
        match by_orbit.get(rec.orbit_rep.bits()) {
            Some(&i) => out[i].multiplicity += 1,
            None => {
                by_orbit.insert(rec.orbit_rep.bits().clone(), out.len());
                out.push(rec);
            }
        }
    }
    out
}

/// A member of the family whose closure with any one extra statement is
/// the top model.
pub fn verify_coatom(frame: FrameSpec, m: &CIModel) -> Result<bool> {
    if m.is_full() || !is_member(frame, m)? {
        return Ok(false);
    }
    with_oracle(frame, m.n(), |o| {
        for t in m.bits().complement().iter() {
            let mut b = m.bits().clone();
            b.insert(t);
            if o.closure_bits(&b)?.count() != b.len() {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

#[derive(Clone, Debug)]
pub struct ScreenRow {
    pub id: String,
    pub orbit_size: usize,
    pub multiplicity: usize,
    pub verdict: SaVerdict,
    pub millis: u128,
}

/// Self-adhesivity verdicts under the reduced policy, in input order.
/// Smaller models are scheduled first.
pub fn screen(records: &[CoatomRecord], frame: FrameSpec) -> Result<Vec<ScreenRow>> {
    screen_with(records, &SelfAdhesionConfig::new(frame).with_policy(LPolicy::Reduced))
}

pub fn screen_with(records: &[CoatomRecord], config: &SelfAdhesionConfig) -> Result<Vec<ScreenRow>> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by_key(|&i| records[i].model.len());
    let mut rows = order
        .par_iter()
        .map(|&i| {
            let r = &records[i];
            if !is_member(config.frame, &r.model)? {
                return Err(CiError::NotMember(format!("{} (record {})", config.frame, r.id)));
            }
            let start = Instant::now();
            let verdict = sa_verdict_bits(config, r.model.n(), r.model.bits())?;
            Ok((
                i,
                ScreenRow {
                    id: r.id.clone(),
                    orbit_size: r.orbit_size(),
                    multiplicity: r.multiplicity,
                    verdict,
                    millis: start.elapsed().as_millis(),
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|x| x.0);
    Ok(rows.into_iter().map(|x| x.1).collect())
}

fn witness_text(ground: &GroundSet, l: VarSet) -> String {
    ground.format_set(l)
}

/// `id,orbit_size,verdict,witness_L,millis` rows with a header.
pub fn report_csv(rows: &[ScreenRow], ground: &GroundSet) -> String {
    let mut s = String::from("id,orbit_size,verdict,witness_L,millis\n");
    for r in rows {
        let (v, w) = match r.verdict {
            SaVerdict::SelfAdhesive => ("self-adhesive", String::new()),
            SaVerdict::Fails(l) => ("excluded", witness_text(ground, l)),
        };
        writeln!(s, "{},{},{},{},{}", r.id, r.orbit_size, v, w, r.millis).unwrap();
    }
    s
}

/// `<k> self-adhesive / <total> (<a> of <b> types)`, counting merged
/// records with multiplicity.
pub fn summary_line(rows: &[ScreenRow]) -> String {
    let total: usize = rows.iter().map(|r| r.multiplicity).sum();
    let good: usize = rows
        .iter()
        .filter(|r| r.verdict.is_self_adhesive())
        .map(|r| r.multiplicity)
        .sum();
    let good_types = rows.iter().filter(|r| r.verdict.is_self_adhesive()).count();
    format!("{good} self-adhesive / {total} ({good_types} of {} types)", rows.len())
}
