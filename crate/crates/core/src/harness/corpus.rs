//! Corpus entries: groups, modules (surveyed as `V ⋊ H`) and crown-based
//! powers, one JSON object per line.

use crate::crowns::{build_crown_power_abelian, build_crown_power_general, unique_minimal_normal};
use crate::error::{Error, Result};
use crate::group::{load_group, load_group_with_caps, Caps, Group, GroupDescriptor};
use crate::modlin::{ModuleAction, ModuleDescriptor};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrownPowerSpec {
    pub module: ModuleDescriptor,
    pub u: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrownPowerGeneralSpec {
    pub group: GroupDescriptor,
    #[serde(default = "auto")]
    pub socle: String,
    pub k: usize,
}

fn auto() -> String {
    "auto".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusEntry {
    CrownPower { crownpower: CrownPowerSpec },
    CrownPowerGeneral { crownpower_general: CrownPowerGeneralSpec },
    Module(ModuleDescriptor),
    Group(GroupDescriptor),
}

/// A corpus entry turned into a concrete group.
pub struct Loaded {
    pub name: String,
    pub family: String,
    pub group: Arc<Group>,
    /// The module behind a semidirect product, for cohomology diagnostics.
    pub module: Option<ModuleAction>,
}

fn family_tag(d: &GroupDescriptor) -> String {
    match d {
        GroupDescriptor::Explicit { .. } => "explicit".into(),
        GroupDescriptor::Family { family, .. } => {
            serde_json::to_value(family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        }
    }
}

fn module_name(m: &ModuleDescriptor) -> String {
    format!("{}^{}", m.p, m.dim)
}

impl CorpusEntry {
    pub fn name(&self) -> String {
        match self {
            CorpusEntry::Group(d) => d.display_name(),
            CorpusEntry::Module(m) => format!("{}:{}", module_name(m), m.group.display_name()),
            CorpusEntry::CrownPower { crownpower: c } => format!(
                "({})^{}:{}",
                module_name(&c.module),
                c.u,
                c.module.group.display_name()
            ),
            CorpusEntry::CrownPowerGeneral { crownpower_general: c } => {
                format!("{}_{}", c.group.display_name(), c.k)
            }
        }
    }

    pub fn load(&self) -> Result<Loaded> {
        let name = self.name();
        Ok(match self {
            CorpusEntry::Group(d) => Loaded {
                name,
                family: family_tag(d),
                group: Arc::new(load_group(d)?),
                module: None,
            },
            CorpusEntry::Module(m) => {
                let act = ModuleAction::from_descriptor(m)?;
                let cp = build_crown_power_abelian(&act, 1)?;
                Loaded {
                    name,
                    family: "module".into(),
                    group: Arc::new(cp.group),
                    module: Some(act),
                }
            }
            CorpusEntry::CrownPower { crownpower: c } => {
                let act = ModuleAction::from_descriptor(&c.module)?;
                let cp = build_crown_power_abelian(&act, c.u)?;
                Loaded {
                    name,
                    family: "crownpower".into(),
                    group: Arc::new(cp.group),
                    module: Some(act),
                }
            }
            CorpusEntry::CrownPowerGeneral { crownpower_general: c } => {
                if c.socle != "auto" {
                    return Err(Error::Descriptor(format!(
                        "socle must be \"auto\", got {:?}",
                        c.socle
                    )));
                }
                let l = load_group_with_caps(&c.group, Caps::default())?;
                let a = unique_minimal_normal(&l)?.ok_or_else(|| {
                    Error::Precondition("group has no unique minimal normal subgroup".into())
                })?;
                Loaded {
                    name,
                    family: "crownpower_general".into(),
                    group: Arc::new(build_crown_power_general(&l, &a, c.k)?),
                    module: None,
                }
            }
        })
    }
}

/// Parses a JSONL corpus; blank lines and lines starting with `#` are
/// skipped. Errors name the offending line.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| Error::Descriptor(format!("corpus line {}: {e}", i + 1)))
        })
        .collect()
}

/// The corpus shipped with the crate.
pub const SHIPPED_CORPUS: &str = include_str!("../../data/corpus.jsonl");

pub fn shipped_corpus() -> Vec<CorpusEntry> {
    parse_corpus(SHIPPED_CORPUS).expect("shipped corpus parses")
}
