use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use iwacoh_core::compact::{LocalDatum, Place};
use iwacoh_core::complex::Complex;
use iwacoh_core::{FiniteGroup, GModule, Matrix, ModuleMap, RingSpec};
use serde::Deserialize;
use thiserror::Error;

use crate::suites::SUITES;

pub const WORKSPACE_SCHEMA: &str = "iwacoh-workspace/1";

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error at {field}: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> WorkspaceError {
    WorkspaceError::Validation { field: field.into(), message: message.to_string() }
}

/// Inclusive degree range written "a..b".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: i64,
    pub hi: i64,
}

impl DegreeRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        DegreeRange { lo, hi }
    }

    pub fn degrees(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got '{s}'"))?;
        let lo = a.trim().parse::<i64>().map_err(|e| format!("bad lower degree '{a}': {e}"))?;
        let hi = b.trim().parse::<i64>().map_err(|e| format!("bad upper degree '{b}': {e}"))?;
        if hi < lo {
            return Err(format!("empty degree range {lo}..{hi}"));
        }
        Ok(DegreeRange { lo, hi })
    }
}

impl std::fmt::Display for DegreeRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    schema: String,
    ring: RawRing,
    #[serde(default)]
    groups: BTreeMap<String, RawGroup>,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    complexes: BTreeMap<String, RawComplex>,
    #[serde(default)]
    towers: BTreeMap<String, RawTower>,
    #[serde(default)]
    local_data: BTreeMap<String, RawLocal>,
    #[serde(default)]
    tasks: Vec<RawTask>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    p: u64,
    e: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGroup {
    Builtin(String),
    Table { table: Vec<Vec<usize>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    group: String,
    exps: Vec<u32>,
    /// One row-major matrix per group element, in element order; omitted
    /// for the trivial action.
    #[serde(default)]
    action: Option<Vec<Vec<Vec<u64>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    lo: i64,
    terms: Vec<String>,
    diffs: Vec<Vec<Vec<u64>>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawTower {
    CyclicPTower { levels: usize, window: usize },
    ZModPk { group: String, levels: usize, window: usize },
    Explicit { modules: Vec<String>, maps: Vec<Vec<Vec<u64>>>, window: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocal {
    group: String,
    places: Vec<RawPlace>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlace {
    #[serde(default)]
    subgroup: Option<Vec<usize>>,
    #[serde(default)]
    group: Option<String>,
    #[serde(default)]
    phi: Option<Vec<usize>>,
    #[serde(default)]
    tate: bool,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawTask {
    Cohomology {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        module: Option<String>,
        #[serde(default)]
        complex: Option<String>,
        #[serde(default)]
        degrees: Option<String>,
    },
    Tate {
        #[serde(default)]
        name: Option<String>,
        module: String,
        #[serde(default)]
        degrees: Option<String>,
    },
    Shapiro {
        #[serde(default)]
        name: Option<String>,
        module: String,
        subgroup: Vec<usize>,
        #[serde(default)]
        degrees: Option<String>,
    },
    Duality {
        #[serde(default)]
        name: Option<String>,
        module: String,
        #[serde(default)]
        degrees: Option<String>,
    },
    Tower {
        #[serde(default)]
        name: Option<String>,
        tower: String,
        degree: usize,
    },
    Compact {
        #[serde(default)]
        name: Option<String>,
        module: String,
        local: String,
        #[serde(default)]
        degrees: Option<String>,
    },
    Verify {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        suites: Option<Vec<String>>,
    },
}

/// A tower declaration after validation.
#[derive(Clone, Debug)]
pub enum Tower {
    /// Z/p^K with the subgroups p^k Z/p^K; colimit cohomology of trivial Z/p.
    CyclicP { levels: usize, window: usize },
    /// Z/p^k with trivial action of a fixed group; limit cohomology.
    ZModPk { group: Arc<FiniteGroup>, levels: usize, window: usize },
    /// Explicit surjective system M_1 ← M_2 ← ⋯; limit cohomology.
    Explicit { modules: Vec<GModule>, maps: Vec<ModuleMap>, window: usize },
}

#[derive(Clone, Debug)]
pub enum Target {
    Module(String),
    Complex(String),
}

#[derive(Clone, Debug)]
pub enum TaskKind {
    Cohomology { target: Target, degrees: DegreeRange },
    Tate { module: String, degrees: DegreeRange },
    Shapiro { module: String, subgroup: Vec<usize>, degrees: DegreeRange },
    Duality { module: String, degrees: DegreeRange },
    Tower { tower: String, degree: usize },
    Compact { module: String, local: String, degrees: DegreeRange },
    Verify { suites: Vec<String> },
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::Cohomology { .. } => "cohomology",
            TaskKind::Tate { .. } => "tate",
            TaskKind::Shapiro { .. } => "shapiro",
            TaskKind::Duality { .. } => "duality",
            TaskKind::Tower { .. } => "tower",
            TaskKind::Compact { .. } => "compact",
            TaskKind::Verify { .. } => "verify",
        }
    }

    /// Replaces the degree range of tasks that have one.
    pub fn with_degrees(mut self, r: DegreeRange) -> Self {
        match &mut self {
            TaskKind::Cohomology { degrees, .. }
            | TaskKind::Tate { degrees, .. }
            | TaskKind::Shapiro { degrees, .. }
            | TaskKind::Duality { degrees, .. }
            | TaskKind::Compact { degrees, .. } => *degrees = r,
            TaskKind::Tower { .. } | TaskKind::Verify { .. } => {}
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    pub kind: TaskKind,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub ring: RingSpec,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub modules: BTreeMap<String, GModule>,
    pub complexes: BTreeMap<String, Complex>,
    pub towers: BTreeMap<String, Tower>,
    pub local_data: BTreeMap<String, LocalDatum>,
    pub tasks: Vec<Task>,
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self, WorkspaceError> {
        let text = std::fs::read_to_string(path).map_err(|e| WorkspaceError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, WorkspaceError> {
        let raw: RawWorkspace =
            serde_json::from_str(text).map_err(|e| WorkspaceError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        raw.validate()
    }

    pub fn module(&self, name: &str) -> Option<&GModule> {
        self.modules.get(name)
    }
}

fn matrix(rows: &[Vec<u64>], cols: usize, field: &str) -> Result<Matrix, WorkspaceError> {
    if let Some(k) = rows.iter().position(|r| r.len() != cols) {
        return Err(invalid(format!("{field}[{k}]"), format!("row has {} entries, expected {cols}", rows[k].len())));
    }
    Ok(Matrix::from_rows(cols, rows))
}

fn range(s: &Option<String>, default: DegreeRange, field: &str) -> Result<DegreeRange, WorkspaceError> {
    match s {
        None => Ok(default),
        Some(s) => s.parse().map_err(|e| invalid(field, e)),
    }
}

impl RawWorkspace {
    fn validate(self) -> Result<Workspace, WorkspaceError> {
        if self.schema != WORKSPACE_SCHEMA {
            return Err(invalid("schema", format!("unsupported schema '{}', expected '{WORKSPACE_SCHEMA}'", self.schema)));
        }
        let ring = RingSpec::new(self.ring.p, self.ring.e).map_err(|e| invalid("ring", e))?;

        let mut groups = BTreeMap::new();
        for (name, g) in &self.groups {
            let field = format!("groups.{name}");
            let group = match g {
                RawGroup::Builtin(b) => FiniteGroup::builtin(b),
                RawGroup::Table { table } => FiniteGroup::from_table(table.clone(), Some(name.clone())),
            }
            .map_err(|e| invalid(&field, e))?;
            groups.insert(name.clone(), Arc::new(group));
        }
        let group = |name: &str, field: &str| groups.get(name).cloned().ok_or_else(|| invalid(field, format!("unknown group '{name}'")));

        let mut modules = BTreeMap::new();
        for (name, m) in &self.modules {
            let field = format!("modules.{name}");
            let g = group(&m.group, &format!("{field}.group"))?;
            let r = m.exps.len();
            let module = match &m.action {
                None => {
                    if let Some(&a) = m.exps.iter().find(|&&a| a == 0 || a > ring.e()) {
                        return Err(invalid(format!("{field}.exps"), format!("exponent {a} outside 1..={}", ring.e())));
                    }
                    GModule::trivial(ring, g, m.exps.clone())
                }
                Some(mats) => {
                    let action = mats
                        .iter()
                        .enumerate()
                        .map(|(k, a)| matrix(a, r, &format!("{field}.action[{k}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    GModule::new(ring, g, m.exps.clone(), action).map_err(|e| invalid(format!("{field}.action"), e))?
                }
            };
            modules.insert(name.clone(), module);
        }
        let module = |name: &str, field: &str| modules.get(name).cloned().ok_or_else(|| invalid(field, format!("unknown module '{name}'")));

        let mut complexes = BTreeMap::new();
        for (name, c) in &self.complexes {
            let field = format!("complexes.{name}");
            let terms = c.terms.iter().enumerate().map(|(k, t)| module(t, &format!("{field}.terms[{k}]"))).collect::<Result<Vec<_>, _>>()?;
            let Some(first) = terms.first() else {
                return Err(invalid(&field, "a complex needs at least one term"));
            };
            if c.diffs.len() + 1 != terms.len() {
                return Err(invalid(format!("{field}.diffs"), format!("{} differentials for {} terms", c.diffs.len(), terms.len())));
            }
            let diffs = c
                .diffs
                .iter()
                .enumerate()
                .map(|(k, d)| matrix(d, terms[k + 1].rank(), &format!("{field}.diffs[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let g = first.group().clone();
            let cx = Complex::new(c.lo, terms, diffs, ring, g).map_err(|e| invalid(&field, e))?;
            complexes.insert(name.clone(), cx);
        }

        let mut towers = BTreeMap::new();
        for (name, t) in &self.towers {
            let field = format!("towers.{name}");
            let tower = match t {
                RawTower::CyclicPTower { levels, window } => Tower::CyclicP { levels: *levels, window: *window },
                RawTower::ZModPk { group: g, levels, window } => Tower::ZModPk { group: group(g, &format!("{field}.group"))?, levels: *levels, window: *window },
                RawTower::Explicit { modules: names, maps, window } => {
                    let mods = names.iter().enumerate().map(|(k, n)| module(n, &format!("{field}.modules[{k}]"))).collect::<Result<Vec<_>, _>>()?;
                    if maps.len() + 1 != mods.len() {
                        return Err(invalid(format!("{field}.maps"), format!("{} maps for {} levels", maps.len(), mods.len())));
                    }
                    let maps = maps
                        .iter()
                        .enumerate()
                        .map(|(k, a)| {
                            let f = format!("{field}.maps[{k}]");
                            let m = matrix(a, mods[k].rank(), &f)?;
                            ModuleMap::new(mods[k + 1].clone(), mods[k].clone(), m).map_err(|e| invalid(&f, e))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Tower::Explicit { modules: mods, maps, window: *window }
                }
            };
            towers.insert(name.clone(), tower);
        }

        let mut local_data = BTreeMap::new();
        for (name, l) in &self.local_data {
            let field = format!("local_data.{name}");
            let g = group(&l.group, &format!("{field}.group"))?;
            let mut places = Vec::new();
            for (k, p) in l.places.iter().enumerate() {
                let pf = format!("{field}.places[{k}]");
                let place = match (&p.subgroup, &p.group, &p.phi) {
                    (Some(s), None, None) => Place::subgroup(&g, s, p.tate).map_err(|e| invalid(format!("{pf}.subgroup"), e))?,
                    (None, Some(h), Some(phi)) => Place::new(group(h, &format!("{pf}.group"))?, phi.clone(), p.tate),
                    (None, None, None) => Place::identity(g.clone(), p.tate),
                    _ => return Err(invalid(&pf, "give either 'subgroup', or both 'group' and 'phi'")),
                };
                places.push(place);
            }
            local_data.insert(name.clone(), LocalDatum::new(g, places).map_err(|e| invalid(&field, e))?);
        }

        let mut tasks = Vec::new();
        for (k, t) in self.tasks.iter().enumerate() {
            let field = format!("tasks[{k}]");
            let need_module = |m: &str| module(m, &format!("{field}.module")).map(|_| m.to_string());
            let degrees = |d: &Option<String>, default: DegreeRange| range(d, default, &format!("{field}.degrees"));
            let (name, kind) = match t {
                RawTask::Cohomology { name, module: m, complex, degrees: d } => {
                    let target = match (m, complex) {
                        (Some(m), None) => Target::Module(need_module(m)?),
                        (None, Some(c)) => {
                            if !complexes.contains_key(c) {
                                return Err(invalid(format!("{field}.complex"), format!("unknown complex '{c}'")));
                            }
                            Target::Complex(c.clone())
                        }
                        _ => return Err(invalid(&field, "give exactly one of 'module' and 'complex'")),
                    };
                    (name, TaskKind::Cohomology { target, degrees: degrees(d, DegreeRange::new(0, 2))? })
                }
                RawTask::Tate { name, module: m, degrees: d } => (name, TaskKind::Tate { module: need_module(m)?, degrees: degrees(d, DegreeRange::new(-2, 2))? }),
                RawTask::Shapiro { name, module: m, subgroup, degrees: d } => {
                    (name, TaskKind::Shapiro { module: need_module(m)?, subgroup: subgroup.clone(), degrees: degrees(d, DegreeRange::new(0, 2))? })
                }
                RawTask::Duality { name, module: m, degrees: d } => (name, TaskKind::Duality { module: need_module(m)?, degrees: degrees(d, DegreeRange::new(-2, 2))? }),
                RawTask::Tower { name, tower, degree } => {
                    if !towers.contains_key(tower) {
                        return Err(invalid(format!("{field}.tower"), format!("unknown tower '{tower}'")));
                    }
                    (name, TaskKind::Tower { tower: tower.clone(), degree: *degree })
                }
                RawTask::Compact { name, module: m, local, degrees: d } => {
                    if !local_data.contains_key(local) {
                        return Err(invalid(format!("{field}.local"), format!("unknown local datum '{local}'")));
                    }
                    (name, TaskKind::Compact { module: need_module(m)?, local: local.clone(), degrees: degrees(d, DegreeRange::new(0, 2))? })
                }
                RawTask::Verify { name, suites } => {
                    let suites = suites.clone().unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect());
                    if let Some(s) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
                        return Err(invalid(format!("{field}.suites"), format!("unknown suite '{s}'")));
                    }
                    (name, TaskKind::Verify { suites })
                }
            };
            let name = name.clone().unwrap_or_else(|| format!("{}#{}", kind.name(), k + 1));
            tasks.push(Task { name, kind });
        }

        Ok(Workspace { ring, groups, modules, complexes, towers, local_data, tasks })
    }
}
