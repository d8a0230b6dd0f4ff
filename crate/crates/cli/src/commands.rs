use std::fs;
use std::path::Path;
use std::sync::Arc;

use ci_core::closure::{frame_closure, ClosureOracle};
use ci_core::entropic::{ingest_rays, records_from_models, report_csv, screen_with, summary_line};
use ci_core::frames::{implications_to_text, parse_implications, FrameKind, FrameSpec, StructuralBackend};
use ci_core::graph::UndirectedGraph;
use ci_core::lattice::*;
use ci_core::selfadhesion::*;
use ci_core::{expand_global, sta_size, CIModel, GroundSet};

use crate::error::{Failure, Outcome};
use crate::{Backend, Cli, Command, Common, FamilyArgs};

pub fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Closure { input, transcript } => closure(c, input, *transcript),
        Command::SaClosure { input, at, policy } => {
            let m = read_model(input)?;
            let frame = resolve_frame(c, m.n())?;
            let out = match at {
                Some(at) => sa_closure_at(&m, m.ground().parse_set(at)?, frame)?,
                None => {
                    let cfg = SelfAdhesionConfig::new(frame).with_policy((*policy).into());
                    let base = frame_closure(frame, &m)?;
                    if let SaVerdict::Fails(l) = sa_verdict_bits(&cfg, m.n(), base.bits())? {
                        eprintln!("witness L = {}", m.ground().format_set(l));
                    }
                    sa_closure(&m, &cfg)?
                }
            };
            emit(c, &out.to_text())
        }
        Command::Sa2Closure { input } => {
            let m = read_model(input)?;
            let frame = resolve_frame(c, m.n())?;
            emit(c, &sa2_closure(&m, frame)?.to_text())
        }
        Command::Kfold { input, at, k } => {
            let m = read_model(input)?;
            let frame = resolve_frame(c, m.n())?;
            let l = m.ground().parse_set(at)?;
            emit(c, &k_fold_sa_closure_at(&m, l, *k, frame)?.to_text())
        }
        Command::Member { input } => {
            let m = read_model(input)?;
            let frame = resolve_frame(c, m.n())?;
            let yes = ClosureOracle::new(frame, m.n())?.is_member(&m)?;
            emit(c, &format!("{yes}\n"))
        }
        Command::Implication { input } => {
            let (g, imps) = parse_implications(&read_text(input)?)?;
            let frame = resolve_frame(c, g.len())?;
            let mut oracle = ClosureOracle::new(frame, g.len())?;
            let mut out = String::new();
            for imp in &imps {
                let valid = oracle.check_implication(&imp.antecedents, &imp.consequents)?;
                out.push_str(&format!("{} : {}\n", imp.to_text(), if valid { "valid" } else { "invalid" }));
            }
            emit(c, &out)
        }
        Command::Catalogue { family } => catalogue(c, family),
        Command::Basis { family } => basis(c, family),
        Command::Screen { input, n, policy } => screen(c, input.as_deref(), *n, (*policy).into()),
        Command::Expand { ground, statement } => {
            let g = parse_ground(ground)?;
            let (sides, k) = statement
                .split_once('|')
                .ok_or_else(|| Failure::Input(format!("expected `I,J|K`, got `{statement}`")))?;
            let (i, j) = sides
                .split_once(',')
                .ok_or_else(|| Failure::Input(format!("expected `I,J|K`, got `{statement}`")))?;
            let m = expand_global(&g, g.parse_set(i)?, g.parse_set(j)?, g.parse_set(k)?)?;
            emit(c, &m.to_text())
        }
        Command::Dual { input } => emit(c, &read_model(input)?.dualize().to_text()),
        Command::Lift { input, ground } => {
            let m = read_model(input)?;
            emit(c, &m.lift(&parse_ground(ground)?)?.to_text())
        }
        Command::Replicate { input, var, new } => {
            let m = read_model(input)?;
            emit(c, &m.tight_replicate(var, new)?.to_text())
        }
        Command::GraphModel { ground, edges } => {
            let g = parse_ground(ground)?;
            let mut pairs = Vec::new();
            for e in edges.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                let (a, b) = e
                    .split_once('-')
                    .ok_or_else(|| Failure::Input(format!("edge `{e}` is not of the form `a-b`")))?;
                pairs.push((a.trim().to_string(), b.trim().to_string()));
            }
            emit(c, &UndirectedGraph::from_edges(g, &pairs)?.separation_model().to_text())
        }
    }
}

/// The frame to run over `n` variables. The structural axioms exist only
/// for four variables; elsewhere the cone backend must be asked for.
fn resolve_frame(c: &Common, n: usize) -> Outcome<FrameSpec> {
    let frame = FrameSpec::new(c.frame);
    match (c.frame, c.backend) {
        (FrameKind::Structural, Some(Backend::Lp)) => Ok(frame.with_backend(StructuralBackend::LpCone)),
        (FrameKind::Structural, _) if n != 4 => Err(Failure::Resource(format!(
            "structural frame over {n} variables needs the cone backend (--backend lp)"
        ))),
        (_, Some(Backend::Lp)) if c.frame != FrameKind::Structural => {
            Err(Failure::Input("--backend lp applies to the structural frame only".into()))
        }
        _ => Ok(frame),
    }
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_model(path: &Path) -> Outcome<CIModel> {
    Ok(CIModel::parse(&read_text(path)?)?)
}

fn parse_ground(text: &str) -> Outcome<Arc<GroundSet>> {
    let labels = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
    Ok(Arc::new(GroundSet::new(labels)?))
}

fn emit(c: &Common, text: &str) -> Outcome {
    match &c.out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Resource(format!("cannot write {}: {e}", path.display())))
}

fn closure(c: &Common, input: &Path, transcript: bool) -> Outcome {
    let m = read_model(input)?;
    let frame = resolve_frame(c, m.n())?;
    let mut oracle = ClosureOracle::new(frame, m.n())?;
    let cl = if transcript {
        let (cl, lines) = oracle.closure_transcript(&m)?;
        for (s, inside) in lines {
            eprintln!("{} : {}", s.display(m.ground()), if inside { "IN" } else { "OUT" });
        }
        cl
    } else {
        oracle.closure(&m)?
    };
    emit(c, &cl.to_text())
}

fn family_name(c: &Common, args: &FamilyArgs) -> String {
    if args.selfadhesive {
        format!("{}^sa", c.frame)
    } else {
        c.frame.to_string()
    }
}

/// Enumerates the family; an incomplete enumeration is returned as is and
/// flagged by `complete`.
fn build_family(c: &Common, args: &FamilyArgs) -> Outcome<FamilyCatalogue> {
    let frame = resolve_frame(c, args.n)?;
    eprintln!("enumerating {} over {} variables", c.frame, args.n);
    let base = enumerate_family(frame, args.n, args.cap)?;
    if !args.selfadhesive || !base.complete {
        return Ok(base);
    }
    eprintln!("screening {} models for self-adhesion", base.len());
    let cfg = SelfAdhesionConfig::new(frame).with_policy(args.policy.into());
    Ok(self_adhesive_family(&base, &cfg)?)
}

fn write_models(dir: &Path, name: &str, cat: &FamilyCatalogue, models: &[ci_core::BitSet], complete: bool) -> Outcome {
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(|e| Failure::Resource(format!("cannot write {}: {e}", path.display())))?;
    Ok(write_catalogue(cat.ground(), models, complete, std::io::BufWriter::new(file))?)
}

fn catalogue(c: &Common, args: &FamilyArgs) -> Outcome {
    let cat = build_family(c, args)?;
    if let Some(dir) = &c.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Resource(format!("cannot create {}: {e}", dir.display())))?;
        write_models(dir, "models.cat", &cat, cat.models(), cat.complete)?;
    }
    if !cat.complete {
        return Err(Failure::Cap(format!("stopped after {} models; listings are partial", cat.len())));
    }
    let summary = summarize(&family_name(c, args), &cat);
    if let Some(dir) = &c.out {
        write_models(dir, "irreducibles.cat", &cat, &meet_irreducibles(&cat), true)?;
        write_models(dir, "coatoms.cat", &cat, &coatoms(&cat), true)?;
        let (text, _) = basis_text(&cat)?;
        write_file(&dir.join("basis.txt"), &text)?;
    }
    println!("{}", summary_csv_header());
    println!("{}", summary.csv_row());
    Ok(())
}

/// Implication file of the canonical basis, and the number of types.
fn basis_text(cat: &FamilyCatalogue) -> Outcome<(String, usize)> {
    let oracle = FamilyOracle::new(sta_size(cat.n()), cat.models().to_vec());
    let basis = canonical_basis(&oracle)?;
    let types = implication_types(&basis, cat.n()).len();
    let imps = to_implications(&basis, cat.ground())?;
    Ok((implications_to_text(cat.ground(), &imps), types))
}

fn basis(c: &Common, args: &FamilyArgs) -> Outcome {
    let cat = build_family(c, args)?;
    if !cat.complete {
        return Err(Failure::Cap(format!("stopped after {} models; no basis computed", cat.len())));
    }
    let (text, types) = basis_text(&cat)?;
    let count = text.lines().count() - 1;
    eprintln!("{} implications in {types} types", count);
    emit(c, &text)
}

fn screen(c: &Common, input: Option<&Path>, n: Option<usize>, policy: LPolicy) -> Outcome {
    let recs = match (input, n) {
        (Some(p), _) => ingest_rays(p)?,
        (None, Some(n)) => {
            let frame = resolve_frame(c, n)?;
            let cat = enumerate_family(frame, n, u64::MAX)?;
            let models: Vec<CIModel> = coatoms(&cat)
                .into_iter()
                .map(|b| CIModel::from_bits(cat.ground().clone(), b))
                .collect::<Result<_, _>>()?;
            records_from_models(&models)
        }
        (None, None) => return Err(Failure::Input("screen needs --in or --n".into())),
    };
    let first = recs.first().ok_or_else(|| Failure::Input("no records to screen".into()))?;
    let ground = first.model.ground().clone();
    let frame = resolve_frame(c, ground.len())?;
    let cfg = SelfAdhesionConfig::new(frame).with_policy(policy);
    eprintln!("screening {} types", recs.len());
    let rows = screen_with(&recs, &cfg)?;
    let csv = report_csv(&rows, &ground);
    match &c.out {
        Some(p) => write_file(p, &csv)?,
        None => print!("{csv}"),
    }
    println!("{}", summary_line(&rows));
    Ok(())
}
