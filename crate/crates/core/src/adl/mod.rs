//! Architecture configurations: components and connectors bound to LOTOS
//! processes, composed with the parallel operators and hiding.
//!
//! A configuration is checked with [`validate_config`] and turned into an
//! ordinary [`Specification`] with [`flatten`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::syntax::adl::{parse_adl, AdlFile};
use crate::syntax::{
    parse_spec, validate_spec, BehaviorExpr, Diagnostic, Functionality, Loc, ProcessDef, SortDecl,
    Specification, SyncSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Component,
    Connector,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Component => "component",
            ElementKind::Connector => "connector",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArchElement {
    pub kind: ElementKind,
    pub name: String,
    pub process: String,
    pub gates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConfigExpr {
    Element(String),
    Par(Box<ConfigExpr>, SyncSet, Box<ConfigExpr>),
    Hide(Vec<String>, Box<ConfigExpr>),
}

impl Serialize for SyncSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SyncSet::None => s.serialize_str("|||"),
            SyncSet::Full => s.serialize_str("||"),
            SyncSet::Gates(g) => s.serialize_str(&format!("|[{}]|", g.join(", "))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchConfig {
    pub name: String,
    pub elements: Vec<ArchElement>,
    pub composition: ConfigExpr,
    pub sorts: Vec<SortDecl>,
    pub process_defs: Vec<ProcessDef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigCode {
    DuplicateName,
    TooFewComponents,
    NoConnector,
    DirectComponentCoupling,
    UnresolvedElement,
    GateMismatch,
}

impl ConfigCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConfigCode::DuplicateName => "duplicate-name",
            ConfigCode::TooFewComponents => "too-few-components",
            ConfigCode::NoConnector => "no-connector",
            ConfigCode::DirectComponentCoupling => "direct-component-coupling",
            ConfigCode::UnresolvedElement => "unresolved-element",
            ConfigCode::GateMismatch => "gate-mismatch",
        }
    }
}

impl fmt::Display for ConfigCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ConfigCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigDiagnostic {
    pub code: ConfigCode,
    pub detail: String,
}

impl fmt::Display for ConfigDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.detail)
    }
}

fn diag(code: ConfigCode, detail: String) -> ConfigDiagnostic {
    ConfigDiagnostic { code, detail }
}

impl ArchConfig {
    pub fn element(&self, name: &str) -> Option<&ArchElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// Builds a configuration from a parsed file and the specification it
    /// `use`s (if any). Sorts of the used specification come first.
    pub fn from_parts(file: AdlFile, used: Option<&Specification>) -> ArchConfig {
        let mut sorts: Vec<SortDecl> = used.map(|s| s.sorts.clone()).unwrap_or_default();
        sorts.extend(file.sorts);
        ArchConfig {
            name: file.name,
            elements: file
                .elements
                .into_iter()
                .map(|e| ArchElement {
                    kind: e.kind,
                    name: e.name,
                    process: e.process,
                    gates: e.gates,
                })
                .collect(),
            composition: file.composition,
            sorts,
            process_defs: used.map(|s| s.processes.clone()).unwrap_or_default(),
        }
    }
}

/// Gates used by the elements of a subtree and not hidden within it, with
/// the kinds of the elements using each.
fn users(cfg: &ArchConfig, e: &ConfigExpr) -> BTreeMap<String, BTreeSet<(ElementKind, String)>> {
    match e {
        ConfigExpr::Element(name) => {
            let mut out: BTreeMap<String, BTreeSet<(ElementKind, String)>> = BTreeMap::new();
            if let Some(el) = cfg.element(name) {
                for g in &el.gates {
                    out.entry(g.clone()).or_default().insert((el.kind, el.name.clone()));
                }
            }
            out
        }
        ConfigExpr::Par(l, _, r) => {
            let mut out = users(cfg, l);
            for (g, us) in users(cfg, r) {
                out.entry(g).or_default().extend(us);
            }
            out
        }
        ConfigExpr::Hide(gates, body) => {
            let mut out = users(cfg, body);
            out.retain(|g, _| !gates.contains(g));
            out
        }
    }
}

fn coupling(cfg: &ArchConfig, e: &ConfigExpr, out: &mut Vec<ConfigDiagnostic>) {
    match e {
        ConfigExpr::Element(_) => {}
        ConfigExpr::Hide(_, body) => coupling(cfg, body, out),
        ConfigExpr::Par(l, sync, r) => {
            coupling(cfg, l, out);
            coupling(cfg, r, out);
            let (lu, ru) = (users(cfg, l), users(cfg, r));
            for (g, left) in &lu {
                let Some(right) = ru.get(g) else { continue };
                let synced = match sync {
                    SyncSet::None => false,
                    SyncSet::Full => true,
                    SyncSet::Gates(gs) => gs.contains(g),
                };
                let only_components = left.iter().chain(right).all(|(k, _)| *k == ElementKind::Component);
                if synced && only_components {
                    let names = |s: &BTreeSet<(ElementKind, String)>| {
                        s.iter().map(|(_, n)| n.as_str()).collect::<Vec<_>>().join(", ")
                    };
                    out.push(diag(
                        ConfigCode::DirectComponentCoupling,
                        format!(
                            "components {} and {} synchronize on `{g}` with no connector between them",
                            names(left),
                            names(right)
                        ),
                    ));
                }
            }
        }
    }
}

fn referenced<'e>(e: &'e ConfigExpr, out: &mut Vec<&'e str>) {
    match e {
        ConfigExpr::Element(n) => out.push(n),
        ConfigExpr::Par(l, _, r) => {
            referenced(l, out);
            referenced(r, out);
        }
        ConfigExpr::Hide(_, b) => referenced(b, out),
    }
}

/// Checks the configuration constraints; empty iff all hold.
pub fn validate_config(cfg: &ArchConfig) -> Vec<ConfigDiagnostic> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<&str, ElementKind> = BTreeMap::new();
    for e in &cfg.elements {
        if let Some(k) = seen.insert(&e.name, e.kind) {
            out.push(diag(
                ConfigCode::DuplicateName,
                format!("`{}` is declared as a {k} and again as a {}", e.name, e.kind),
            ));
        }
    }
    let count = |k| cfg.elements.iter().filter(|e| e.kind == k).count();
    let components = count(ElementKind::Component);
    if components < 2 {
        out.push(diag(
            ConfigCode::TooFewComponents,
            format!("a configuration needs at least 2 components, found {components}"),
        ));
    }
    if count(ElementKind::Connector) == 0 {
        out.push(diag(ConfigCode::NoConnector, "a configuration needs at least 1 connector".into()));
    }
    for e in &cfg.elements {
        match cfg.process_defs.iter().find(|p| p.name == e.process) {
            None => out.push(diag(
                ConfigCode::UnresolvedElement,
                format!("{} `{}` is bound to unknown process `{}`", e.kind, e.name, e.process),
            )),
            Some(p) if p.formal_gates.len() != e.gates.len() => out.push(diag(
                ConfigCode::GateMismatch,
                format!(
                    "{} `{}`: process `{}` has {} gate(s), {} given",
                    e.kind,
                    e.name,
                    p.name,
                    p.formal_gates.len(),
                    e.gates.len()
                ),
            )),
            Some(_) => {}
        }
    }
    let mut names = Vec::new();
    referenced(&cfg.composition, &mut names);
    let mut reported = BTreeSet::new();
    for n in names {
        if cfg.element(n).is_none() && reported.insert(n) {
            out.push(diag(
                ConfigCode::UnresolvedElement,
                format!("composition refers to undeclared element `{n}`"),
            ));
        }
    }
    coupling(cfg, &cfg.composition, &mut out);
    out
}

fn behavior(cfg: &ArchConfig, e: &ConfigExpr) -> Result<BehaviorExpr, ConfigDiagnostic> {
    Ok(match e {
        ConfigExpr::Element(n) => {
            let el = cfg
                .element(n)
                .ok_or_else(|| diag(ConfigCode::UnresolvedElement, format!("undeclared element `{n}`")))?;
            BehaviorExpr::Inst {
                process: el.process.clone(),
                gates: el.gates.clone(),
                loc: Loc::default(),
            }
        }
        ConfigExpr::Par(l, s, r) => BehaviorExpr::Par {
            left: Box::new(behavior(cfg, l)?),
            sync: s.clone(),
            right: Box::new(behavior(cfg, r)?),
            loc: Loc::default(),
        },
        ConfigExpr::Hide(g, b) => BehaviorExpr::Hide {
            gates: g.clone(),
            body: Box::new(behavior(cfg, b)?),
            loc: Loc::default(),
        },
    })
}

/// Unhidden gates in order of first appearance, left to right.
fn visible_gates(cfg: &ArchConfig, e: &ConfigExpr, hidden: &mut Vec<String>, out: &mut Vec<String>) {
    match e {
        ConfigExpr::Element(n) => {
            if let Some(el) = cfg.element(n) {
                for g in &el.gates {
                    if !hidden.contains(g) && !out.contains(g) {
                        out.push(g.clone());
                    }
                }
            }
        }
        ConfigExpr::Par(l, _, r) => {
            visible_gates(cfg, l, hidden, out);
            visible_gates(cfg, r, hidden, out);
        }
        ConfigExpr::Hide(gs, b) => {
            let before = hidden.len();
            hidden.extend(gs.iter().cloned());
            visible_gates(cfg, b, hidden, out);
            hidden.truncate(before);
        }
    }
}

/// The configuration as a single specification: element names become
/// process instantiations and the top gates are the unhidden gates of the
/// composition.
pub fn flatten(cfg: &ArchConfig) -> Result<Specification, Vec<ConfigDiagnostic>> {
    let top_behavior = behavior(cfg, &cfg.composition).map_err(|d| vec![d])?;
    let mut top_gates = Vec::new();
    visible_gates(cfg, &cfg.composition, &mut Vec::new(), &mut top_gates);
    let spec = Specification {
        name: cfg.name.clone(),
        top_gates,
        functionality: Functionality::NoExit,
        sorts: cfg.sorts.clone(),
        processes: cfg.process_defs.clone(),
        top_behavior,
        loc: Loc::default(),
    };
    let errors: Vec<ConfigDiagnostic> = validate_spec(&spec)
        .into_iter()
        .filter(Diagnostic::is_error)
        .map(|d| {
            let code = match d.code {
                crate::syntax::Code::UnknownProcess => ConfigCode::UnresolvedElement,
                _ => ConfigCode::GateMismatch,
            };
            diag(code, format!("flattened specification: [{}] {}", d.code, d.message))
        })
        .collect();
    if errors.is_empty() {
        Ok(spec)
    } else {
        Err(errors)
    }
}

#[derive(Debug, Error)]
pub enum AdlError {
    #[error("cannot read `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("`{}` has {} error(s)", path.display(), diagnostics.len())]
    Syntax {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },
}

fn read(path: &Path) -> Result<String, AdlError> {
    std::fs::read_to_string(path).map_err(|source| AdlError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads an `.adl` file and the specification it uses (resolved relative to
/// the `.adl` file).
pub fn load_config(path: &Path) -> Result<ArchConfig, AdlError> {
    let file = parse_adl(&read(path)?).map_err(|diagnostics| AdlError::Syntax {
        path: path.to_path_buf(),
        diagnostics,
    })?;
    let used = match &file.uses {
        None => None,
        Some(u) => {
            let p = path.parent().unwrap_or(Path::new("")).join(u);
            Some(parse_spec(&read(&p)?).map_err(|diagnostics| AdlError::Syntax { path: p, diagnostics })?)
        }
    };
    Ok(ArchConfig::from_parts(file, used.as_ref()))
}
