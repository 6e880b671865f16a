//! Executes workspace tasks and assembles reports.

use iwacoh_core::cochain::tate::{cyclic_tate_pairing, tate_cohomology, tate_complex};
use iwacoh_core::cochain::{cochain_cohomology, cochain_complex, hyper_cochain_complex, SubgroupOf};
use iwacoh_core::compact::{compact_complex, compact_les};
use iwacoh_core::complex::dd_zero;
use iwacoh_core::iwasawa::{colim_cohomology, induced_module, lim_cohomology, shapiro_map, z_mod_pk_tower, Stabilization, TowerCohomology, TowerSpec};
use iwacoh_core::{GModule, RingSpec};

use crate::report::{Check, Report, TaskReport};
use crate::suites::run_suite;
use crate::workspace::{DegreeRange, Target, Task, TaskKind, Tower, Workspace};

/// Runs every task, in parallel if asked; reports keep the task order.
pub fn run_tasks(ws: &Workspace, tasks: &[Task], seed: u64, parallel: bool) -> Report {
    let reports = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = tasks.iter().map(|t| s.spawn(move || run_task(ws, t, seed))).collect();
            handles.into_iter().map(|h| h.join().expect("task thread panicked")).collect()
        })
    } else {
        tasks.iter().map(|t| run_task(ws, t, seed)).collect()
    };
    Report::new(seed, reports)
}

pub fn run_task(ws: &Workspace, task: &Task, seed: u64) -> TaskReport {
    let kind = task.kind.name();
    let base = TaskReport::new(&task.name, kind);
    let out = match &task.kind {
        TaskKind::Cohomology { target, degrees } => cohomology(ws, base, target, *degrees),
        TaskKind::Tate { module, degrees } => tate(ws, base, module, *degrees),
        TaskKind::Shapiro { module, subgroup, degrees } => shapiro(ws, base, module, subgroup, *degrees),
        TaskKind::Duality { module, degrees } => duality(ws, base, module, *degrees),
        TaskKind::Tower { tower, degree } => tower_task(ws, base, tower, *degree),
        TaskKind::Compact { module, local, degrees } => compact(ws, base, module, local, *degrees),
        TaskKind::Verify { suites } => Ok(verify(base, suites, seed)),
    };
    match out {
        Ok(r) => r.finish(),
        Err((r, e)) => r.failed(e),
    }
}

type Outcome = Result<TaskReport, (TaskReport, String)>;

/// Attaches the partial report to an error.
trait OrReport<T> {
    fn or_report(self, r: &mut Option<TaskReport>) -> Result<T, (TaskReport, String)>;
}

impl<T, E: ToString> OrReport<T> for Result<T, E> {
    fn or_report(self, r: &mut Option<TaskReport>) -> Result<T, (TaskReport, String)> {
        self.map_err(|e| (r.take().expect("report present"), e.to_string()))
    }
}

fn module<'a>(ws: &'a Workspace, name: &str) -> &'a GModule {
    ws.module(name).expect("validated module name")
}

fn describe(m: &GModule) -> String {
    format!("{} over {}", m.finab(), m.group().label())
}

fn nonneg(d: i64) -> Result<usize, String> {
    usize::try_from(d).map_err(|_| format!("ordinary cohomology needs degrees ≥ 0, got {d}"))
}

fn cohomology(ws: &Workspace, base: TaskReport, target: &Target, degrees: DegreeRange) -> Outcome {
    let mut slot = Some(base.input("degrees", degrees));
    let cx = match target {
        Target::Module(name) => {
            let m = module(ws, name);
            slot = slot.map(|r| r.input("module", name).input("module_structure", describe(m)));
            let top = nonneg(degrees.hi).or_report(&mut slot)? + 1;
            nonneg(degrees.lo).or_report(&mut slot)?;
            cochain_complex(m, top).or_report(&mut slot)?
        }
        Target::Complex(name) => {
            let x = &ws.complexes[name];
            slot = slot.map(|r| r.input("complex", name));
            let top = (degrees.hi - x.lo() + 1).max(0) as usize;
            hyper_cochain_complex(x, top).or_report(&mut slot)?.0
        }
    };
    let mut r = slot.take().expect("report present");
    let mut dd = Check::new("d∘d = 0");
    dd.record(dd_zero(&cx), || "cochain differentials do not compose to zero".into());
    r.check(dd);
    for i in degrees.degrees() {
        r.result(format!("H^{i}"), cx.cohomology(i));
    }
    Ok(r)
}

fn tate(ws: &Workspace, base: TaskReport, name: &str, degrees: DegreeRange) -> Outcome {
    let m = module(ws, name);
    let mut slot = Some(base.input("degrees", degrees).input("module", name).input("module_structure", describe(m)));
    let cx = tate_complex(m, degrees.lo, degrees.hi).or_report(&mut slot)?;
    let mut r = slot.take().expect("report present");
    let mut dd = Check::new("d∘d = 0 across the splice");
    dd.record(dd_zero(&cx), || format!("Tate complex in degrees {degrees}"));
    r.check(dd);
    for i in degrees.degrees() {
        r.result(format!("Ĥ^{i}"), cx.cohomology(i));
    }
    Ok(r)
}

fn shapiro(ws: &Workspace, base: TaskReport, name: &str, subgroup: &[usize], degrees: DegreeRange) -> Outcome {
    let m = module(ws, name);
    let mut slot = Some(base.input("degrees", degrees).input("module", name).input("subgroup", format!("{subgroup:?}")));
    let top = nonneg(degrees.hi).or_report(&mut slot)? + 1;
    nonneg(degrees.lo).or_report(&mut slot)?;
    let sub = SubgroupOf::new(m.group(), subgroup).or_report(&mut slot)?;
    let ind = induced_module(m, &sub);
    let m_u = m.restrict(sub.group.clone(), &sub.elems).or_report(&mut slot)?;
    let sh = shapiro_map(m, &sub, top).or_report(&mut slot)?;
    let mut iso = Check::new("H^j(G, Ind_U M) ≅ H^j(U, M) via the Shapiro map");
    let mut rows = Vec::new();
    for j in degrees.degrees() {
        let ju = j as usize;
        let lhs = cochain_cohomology(&ind, ju).or_report(&mut slot)?;
        let rhs = cochain_cohomology(&m_u, ju).or_report(&mut slot)?;
        let bij = sh.induced(j).is_bijective();
        iso.record(lhs == rhs && bij, || format!("degree {j}: H(G, Ind M) = {lhs}, H(U, M) = {rhs}, map bijective: {bij}"));
        rows.push((format!("H^{j}(G, Ind M)"), lhs));
        rows.push((format!("H^{j}(U, M)"), rhs));
    }
    let mut r = slot.take().expect("report present");
    for (k, v) in rows {
        r.result(k, v);
    }
    r.check(iso);
    Ok(r)
}

fn duality(ws: &Workspace, base: TaskReport, name: &str, degrees: DegreeRange) -> Outcome {
    let m = module(ws, name);
    let mut slot = Some(base.input("degrees", degrees).input("module", name).input("module_structure", describe(m)));
    let dual = m.dual();
    let mut orders = Check::new("|Ĥ^n(G, M)| = |Ĥ^(-n-1)(G, M^∨)|");
    let mut perfect = Check::new("Tate pairing is perfect");
    let cyclic = m.group().cyclic_generator().is_some();
    let mut rows = Vec::new();
    for n in degrees.degrees() {
        let lhs = tate_cohomology(m, n).or_report(&mut slot)?;
        let rhs = tate_cohomology(&dual, -n - 1).or_report(&mut slot)?;
        orders.record(lhs.order_log() == rhs.order_log(), || format!("n = {n}: Ĥ^n(M) = {lhs}, Ĥ^(-n-1)(M^∨) = {rhs}"));
        if cyclic {
            let p = cyclic_tate_pairing(m, n).or_report(&mut slot)?;
            perfect.record(p.perfect, || format!("n = {n}: pairing matrix {:?}", p.values));
        }
        rows.push((format!("Ĥ^{n}(G, M)"), lhs));
        rows.push((format!("Ĥ^{}(G, M^∨)", -n - 1), rhs));
    }
    let mut r = slot.take().expect("report present");
    for (k, v) in rows {
        r.result(k, v);
    }
    r.check(orders);
    if cyclic {
        r.check(perfect);
    }
    Ok(r)
}

fn tower_task(ws: &Workspace, base: TaskReport, name: &str, degree: usize) -> Outcome {
    let tower = &ws.towers[name];
    let mut slot = Some(base.input("tower", name).input("degree", degree));
    let p = ws.ring.p();
    let h: TowerCohomology = match tower {
        Tower::CyclicP { levels, window } => {
            let t = TowerSpec::cyclic_p_tower(p, *levels, *window).or_report(&mut slot)?;
            let m = GModule::trivial(RingSpec::new(p, 1).or_report(&mut slot)?, t.group().clone(), vec![1]);
            colim_cohomology(&t, &m, degree).or_report(&mut slot)?
        }
        Tower::ZModPk { group, levels, window } => {
            let (mods, maps) = z_mod_pk_tower(group.clone(), p, *levels).or_report(&mut slot)?;
            lim_cohomology(&mods, &maps, degree, *window).or_report(&mut slot)?
        }
        Tower::Explicit { modules, maps, window } => lim_cohomology(modules, maps, degree, *window).or_report(&mut slot)?,
    };
    let mut r = slot.take().expect("report present");
    for (k, v) in h.levels.iter().enumerate() {
        r.result(format!("level {} H^{degree}", k + 1), v);
    }
    let mut stable = Check::new(format!("H^{degree} stabilizes within window {}", h.window));
    match &h.stabilization {
        Stabilization::Stable { level, value } => {
            r.result(format!("stable H^{degree}"), value);
            r.result("stable from level", level);
            stable.record(true, String::new);
        }
        Stabilization::Inconclusive { levels, window } => {
            stable.inconclusive(format!("no {window} consecutive stable transitions among {levels} levels"));
        }
    }
    if h.cofinality_assumed {
        r.witness("cofinality", "assumed, not verified");
    }
    r.check(stable);
    Ok(r)
}

fn compact(ws: &Workspace, base: TaskReport, name: &str, local: &str, degrees: DegreeRange) -> Outcome {
    let m = module(ws, name);
    let d = &ws.local_data[local];
    let mut slot = Some(base.input("degrees", degrees).input("module", name).input("local", local));
    let top = (degrees.hi + 1).max(1) as usize;
    let cc = compact_complex(d, m, top).or_report(&mut slot)?;
    let les = compact_les(d, m, top).or_report(&mut slot)?;
    let (lo, hi) = cc.window;
    let mut r = slot.take().expect("report present");
    let mut dd = Check::new("d∘d = 0");
    dd.record(dd_zero(&cc.complex), || "compactly supported differentials do not compose to zero".into());
    r.check(dd);
    let mut exact = Check::new("H_c → H → H_S long exact sequence");
    for (k, ok) in les.exact.iter().enumerate() {
        exact.record(*ok, || format!("not exact at term {k} of the sequence"));
    }
    r.check(exact);
    for i in degrees.degrees() {
        if i < lo || i > hi {
            r.witness(format!("H^{i}_c"), format!("outside the computed window {lo}..{hi}"));
            let mut c = Check::new(format!("H^{i}_c computed"));
            c.inconclusive(format!("degree {i} outside {lo}..{hi}"));
            r.check(c);
        } else {
            r.result(format!("H^{i}_c"), cc.cohomology(i));
        }
    }
    Ok(r)
}

fn verify(mut r: TaskReport, suites: &[String], seed: u64) -> TaskReport {
    r = r.input("suites", suites.join(","));
    for s in suites {
        for mut c in run_suite(s, seed) {
            c.identity = format!("{s}: {}", c.identity);
            r.check(c);
        }
    }
    r
}

