//! Families of models as lattices: enumeration, orbits under variable
//! permutations, meet-irreducibles, coatoms and canonical bases.

mod basis;
mod io;
mod orbits;

use std::collections::HashSet;
use std::sync::Arc;

use ci_sat::{for_each_model, EnumConfig};
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::closure::with_oracle;
use crate::frames::{ClauseSet, FrameSpec};
use crate::ground::GroundSet;
use crate::model::CIModel;
use crate::selfadhesion::{sa_verdict_bits, SelfAdhesionConfig};
use crate::statement::sta_size;
use crate::{CiError, Result};

pub use basis::{
    canonical_basis, canonical_basis_literal, count_generated, implication_closure, implication_types,
    is_implicatively_perfect, to_implications, BasisImplication, FamilyOracle, FrameOracle, MooreOracle,
};
pub use io::{read_catalogue, summary_csv_header, write_catalogue};
pub use orbits::{canonical_form, orbit_classes, orbit_of, Orbit};

/// A family of models over one ground set, sorted by `(size, bits)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCatalogue {
    ground: Arc<GroundSet>,
    models: Vec<BitSet>,
    /// False when enumeration stopped at the model cap.
    pub complete: bool,
}

fn sort_key(b: &BitSet) -> (usize, &BitSet) {
    (b.count(), b)
}

impl FamilyCatalogue {
    pub fn new(ground: Arc<GroundSet>, mut models: Vec<BitSet>) -> FamilyCatalogue {
        models.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
        models.dedup();
        FamilyCatalogue { ground, models, complete: true }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn models(&self) -> &[BitSet] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, b: &BitSet) -> bool {
        self.models.binary_search_by(|m| sort_key(m).cmp(&sort_key(b))).is_ok()
    }

    pub fn to_models(&self) -> Vec<CIModel> {
        self.models
            .iter()
            .map(|b| CIModel::from_bits(self.ground.clone(), b.clone()).expect("catalogue bits fit the ground"))
            .collect()
    }

    pub fn intersection(&self, other: &FamilyCatalogue) -> FamilyCatalogue {
        let keep = self.models.iter().filter(|m| other.contains(m)).cloned().collect();
        FamilyCatalogue::new(self.ground.clone(), keep)
    }

    /// The family of dual models.
    pub fn dual(&self) -> FamilyCatalogue {
        let models = self
            .to_models()
            .into_iter()
            .map(|m| m.dualize().into_bits())
            .collect();
        FamilyCatalogue::new(self.ground.clone(), models)
    }

    /// Contains the top model and every pairwise intersection (all pairs up
    /// to 3000 models, a strided sample above that).
    pub fn is_moore_family(&self) -> bool {
        let full = BitSet::full(sta_size(self.n()));
        if !self.contains(&full) {
            return false;
        }
        let k = self.models.len();
        let stride = if k <= 3000 { 1 } else { k / 300 };
        (0..k).step_by(stride).all(|i| {
            (0..k)
                .step_by(stride)
                .all(|j| self.contains(&self.models[i].intersection(&self.models[j])))
        })
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        orbit_classes(&self.models, self.n())
    }
}

/// Satisfying assignments of a clause set as a catalogue.
pub fn enumerate_clauses(cs: &ClauseSet, cap: u64) -> Result<FamilyCatalogue> {
    let cfg = EnumConfig { cap, ..EnumConfig::default() };
    let mut models = Vec::new();
    let complete = for_each_model(cs.cnf(), &cfg, |a| {
        models.push(BitSet::from_indices(a.len(), a.iter().enumerate().filter(|x| *x.1).map(|x| x.0)));
    })?;
    let mut cat = FamilyCatalogue::new(cs.ground().clone(), models);
    cat.complete = complete;
    Ok(cat)
}

/// Largest statement universe for exhaustive filtering by a closure oracle.
const FILTER_MAX_UNIVERSE: usize = 20;

/// `F(N)` over the standard ground of size `n`: clause enumeration, or a
/// membership filter over all subsets when the frame has no clause set.
pub fn enumerate_family(frame: FrameSpec, n: usize, cap: u64) -> Result<FamilyCatalogue> {
    let frame = frame.for_size(n);
    let ground = Arc::new(GroundSet::standard(n));
    if !frame.uses_lp() {
        let cs = frame.cached_clauses(n)?;
        let mut cat = enumerate_clauses(&cs, cap)?;
        cat.ground = ground;
        return Ok(cat);
    }
    let u = sta_size(n);
    if u > FILTER_MAX_UNIVERSE {
        return Err(CiError::Unsupported(format!(
            "no clause set for {frame} over {n} variables; exhaustive filtering stops at {FILTER_MAX_UNIVERSE} statements"
        )));
    }
    let models = (0u64..1 << u)
        .into_par_iter()
        .map(|mask| {
            let b = BitSet::from_words(u, vec![mask]);
            let cand = b.complement();
            with_oracle(frame, n, |o| o.forces_any(&b, &cand)).map(|f| (!f).then_some(b))
        })
        .collect::<Result<Vec<_>>>()?;
    let models: Vec<BitSet> = models.into_iter().flatten().collect();
    if models.len() as u64 > cap {
        let mut cat = FamilyCatalogue::new(ground, models.into_iter().take(cap as usize).collect());
        cat.complete = false;
        return Ok(cat);
    }
    Ok(FamilyCatalogue::new(ground, models))
}

/// The members of a permutation-closed `base` that are self-adhesive;
/// orbit representatives are tested and surviving orbits expanded.
pub fn self_adhesive_family(base: &FamilyCatalogue, config: &SelfAdhesionConfig) -> Result<FamilyCatalogue> {
    let n = base.n();
    let reps = base.orbits();
    let keep = reps
        .par_iter()
        .map(|o| sa_verdict_bits(config, n, &o.rep).map(|v| v.is_self_adhesive().then_some(o)))
        .collect::<Result<Vec<_>>>()?;
    let models: Vec<BitSet> = keep.into_iter().flatten().flat_map(|o| orbit_of(&o.rep, n)).collect();
    Ok(FamilyCatalogue::new(base.ground.clone(), models))
}

/// Models whose strict supersets in the family have an intersection other
/// than themselves; the top model is never included.
pub fn meet_irreducibles(cat: &FamilyCatalogue) -> Vec<BitSet> {
    let ms = &cat.models;
    ms.par_iter()
        .filter(|m| {
            let start = ms.partition_point(|s| s.count() <= m.count());
            let mut acc: Option<BitSet> = None;
            for s in &ms[start..] {
                if m.is_subset(s) {
                    match &mut acc {
                        Some(a) => a.intersect_with(s),
                        None => acc = Some(s.clone()),
                    }
                }
            }
            acc.is_some_and(|a| a != **m)
        })
        .cloned()
        .collect()
}

/// Models whose only strict superset in the family is the top.
pub fn coatoms(cat: &FamilyCatalogue) -> Vec<BitSet> {
    let ms = &cat.models;
    let Some(top) = ms.last() else {
        return Vec::new();
    };
    ms.par_iter()
        .filter(|m| {
            if *m == top {
                return false;
            }
            let start = ms.partition_point(|s| s.count() <= m.count());
            ms[start..].iter().all(|s| s == top || !m.is_subset(s))
        })
        .cloned()
        .collect()
}

/// One row of the summary table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub family: String,
    pub models: usize,
    pub types: usize,
    pub irreducibles: usize,
    pub irreducible_types: usize,
    pub coatoms: usize,
    pub coatom_types: usize,
}

impl Summary {
    /// The six counts, comma-separated.
    pub fn counts(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.models, self.types, self.irreducibles, self.irreducible_types, self.coatoms, self.coatom_types
        )
    }

    pub fn csv_row(&self) -> String {
        format!("{},{}", self.family, self.counts())
    }
}

fn type_count(models: &[BitSet], n: usize) -> usize {
    models
        .par_iter()
        .map(|m| canonical_form(m, n))
        .collect::<HashSet<_>>()
        .len()
}

pub fn summarize(family: &str, cat: &FamilyCatalogue) -> Summary {
    let n = cat.n();
    let irr = meet_irreducibles(cat);
    let co = coatoms(cat);
    Summary {
        family: family.to_string(),
        models: cat.len(),
        types: type_count(&cat.models, n),
        irreducibles: irr.len(),
        irreducible_types: type_count(&irr, n),
        coatoms: co.len(),
        coatom_types: type_count(&co, n),
    }
}
