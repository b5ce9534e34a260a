//! Input documents: TOML group descriptions and subgroup witness parsing.

use std::path::Path;
use std::sync::Arc;

use burnside::fusion::FusionSystem;
use burnside::group::{GroupTable, Subgroup};
use burnside::lattice::SubgroupLattice;
use burnside::perm::Perm;
use serde::Deserialize;

use crate::Failure;

/// A group described by permutation generators on a fixed domain.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    /// Optional fusion partition: each entry fuses the listed S-conjugacy
    /// classes (named by witness subgroups) into one class.
    pub partition: Option<PartitionDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    /// classes[i] is a list of witness subgroups, each a list of generator
    /// permutations; the S-classes of the witnesses are fused.
    pub classes: Vec<Vec<Vec<String>>>,
}

pub fn load_group_doc(path: &Path) -> Result<GroupDoc, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))
}

pub fn build_group(doc: &GroupDoc, max_order: usize) -> Result<Arc<GroupTable>, Failure> {
    let mut perms = Vec::with_capacity(doc.generators.len());
    for s in &doc.generators {
        let p = Perm::parse(s, doc.degree).map_err(|e| {
            Failure::usage(format!("bad generator {s:?} for group {}: {e}", doc.name))
        })?;
        perms.push(p);
    }
    GroupTable::from_generators_capped(&doc.name, doc.degree, perms, max_order)
        .map_err(Failure::from)
}

/// Parse a subgroup witness such as `<(1 2 3 4)(5 6),(1 3)(5 6)>` (angle
/// brackets optional, `<>` or `()` for the trivial subgroup) into a subgroup
/// of `g`.
pub fn parse_subgroup(g: &Arc<GroupTable>, spec: &str) -> Result<Subgroup, Failure> {
    let inner = spec.trim();
    let inner = inner
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .unwrap_or(inner);
    let mut seed = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() || part == "()" {
            continue;
        }
        let p = Perm::parse(part, g.degree())
            .map_err(|e| Failure::usage(format!("bad permutation {part:?}: {e}")))?;
        let idx = g.index_of(&p).ok_or_else(|| {
            Failure::usage(format!("permutation {part} is not an element of {}", g.name()))
        })?;
        seed.push(idx);
    }
    Ok(g.subgroup_closure(&seed))
}

/// How fusion is imposed on the subgroup lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// conjugation inside an ambient overgroup (requires --ambient)
    Ambient,
    /// an explicit class partition from the group document
    Partition,
}

pub struct ResolvedSystem {
    pub fusion: Arc<FusionSystem>,
}

pub struct SystemSpec<'a> {
    pub group: &'a Path,
    pub ambient: Option<&'a Path>,
    pub prime: Option<u64>,
    pub mode: Option<Mode>,
    pub max_order: usize,
    pub allow_non_sylow: bool,
}

/// Build the subgroup lattice of the group document alone (no fusion).
pub fn resolve_lattice(group: &Path, max_order: usize) -> Result<Arc<SubgroupLattice>, Failure> {
    let doc = load_group_doc(group)?;
    let g = build_group(&doc, max_order)?;
    Ok(Arc::new(SubgroupLattice::enumerate(g)?))
}

/// Build the full fusion system a command operates on.
pub fn resolve_system(spec: &SystemSpec) -> Result<ResolvedSystem, Failure> {
    let mode = match (spec.mode, spec.ambient) {
        (Some(Mode::Ambient), None) => {
            return Err(Failure::usage("--mode ambient requires --ambient FILE"));
        }
        (Some(Mode::Partition), Some(_)) => {
            return Err(Failure::usage("--ambient conflicts with --mode partition"));
        }
        (Some(m), _) => m,
        (None, Some(_)) => Mode::Ambient,
        (None, None) => Mode::Partition,
    };
    let prime = spec
        .prime
        .ok_or_else(|| Failure::usage("this command requires --prime P"))?;
    let doc = load_group_doc(spec.group)?;
    let s = build_group(&doc, spec.max_order)?;
    let fusion = match mode {
        Mode::Ambient => {
            let ambient_path = spec.ambient.expect("checked above");
            let ambient_doc = load_group_doc(ambient_path)?;
            if ambient_doc.degree != doc.degree {
                return Err(Failure::usage(format!(
                    "group and ambient act on different domains ({} vs {} points)",
                    doc.degree, ambient_doc.degree
                )));
            }
            let g = build_group(&ambient_doc, spec.max_order)?;
            FusionSystem::from_ambient(&s, &g, prime, spec.allow_non_sylow)?
        }
        Mode::Partition => {
            let lattice = Arc::new(SubgroupLattice::enumerate(Arc::clone(&s))?);
            let mut blocks = Vec::new();
            if let Some(partition) = &doc.partition {
                for class in &partition.classes {
                    let mut block = Vec::new();
                    for witness in class {
                        let spec_str = witness.join(",");
                        let sub = parse_subgroup(&s, &spec_str)?;
                        let idx = lattice.index_of(&sub).expect("closure is in the lattice");
                        block.push(lattice.class_of(idx));
                    }
                    blocks.push(block);
                }
            }
            FusionSystem::from_partition(lattice, prime, &blocks)?
        }
    };
    for w in fusion.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(ResolvedSystem {
        fusion: Arc::new(fusion),
    })
}
