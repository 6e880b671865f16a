//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod oracle;

use std::process::{Command, ExitCode};

use iwacoh_cli::report::Check;
use iwacoh_cli::suites::*;
use iwacoh_core::cochain::cochain_cohomology;
use iwacoh_core::cochain::tate::tate_cohomology;
use iwacoh_core::random::random_module;
use iwacoh_core::{FinAb, GModule, RingSpec};
use oracle::{brute_cohomology, brute_invariants, norm_oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ring(p: u64, e: u32) -> RingSpec {
    RingSpec::new(p, e).unwrap()
}

/// Merges checks into one, keeping the first witness.
fn all(name: &str, checks: Vec<Check>) -> Check {
    let mut out = Check::new(name);
    for c in checks {
        out.cases += c.cases.saturating_sub(1);
        out.record(c.passed(), || format!("{}: {}", c.identity, c.witness.clone().unwrap_or_default()));
    }
    out
}

fn needs(c: Check, min: usize) -> Check {
    let mut c = c;
    if c.cases < min {
        let n = c.cases;
        c.record(false, || format!("only {n} cases, need {min}"));
    }
    c
}

/// H^i(Z/2, Z/2) = Z/2 for i ≤ 2, H^2(Z/3, Z/3) = Z/3 and H^0 = M^G, each
/// compared with enumeration.
fn known_values() -> Check {
    let mut c = Check::new("known cohomology by enumeration");
    let z2 = GModule::trivial(ring(2, 1), group("cyclic:2"), vec![1]);
    for i in 0..=2 {
        let (h, b) = (cochain_cohomology(&z2, i).unwrap(), brute_cohomology(&z2, i));
        c.record(h == FinAb::cyclic(2, 1) && b == h, || format!("H^{i}(Z/2, Z/2): computed {h}, enumerated {b}"));
    }
    let z3 = GModule::trivial(ring(3, 1), group("cyclic:3"), vec![1]);
    let (h, b) = (cochain_cohomology(&z3, 2).unwrap(), brute_cohomology(&z3, 2));
    c.record(h == FinAb::cyclic(3, 1) && b == h, || format!("H^2(Z/3, Z/3): computed {h}, enumerated {b}"));
    let mut r = rng(4);
    for name in SMALL_GROUPS {
        for p in [2, 3] {
            let m = random_module(&mut r, ring(p, 2), group(name), 3);
            let (h, b) = (cochain_cohomology(&m, 0).unwrap(), brute_invariants(&m));
            c.record(h == b, || format!("H^0({name}, M) = {h} but M^G = {b}"));
        }
    }
    all("known cohomology", vec![c, known_cohomology_check(&mut rng(4))])
}

/// Ĥ^0 and Ĥ^{−1} of Z/n with Z/m against the norm oracle and gcd(n, m).
fn tate_values() -> Check {
    let mut c = Check::new("Tate cohomology against the norm oracle");
    for n in [2, 3, 4, 8, 9] {
        for mm in [2u64, 3, 4, 8, 9] {
            let p = if mm % 2 == 0 { 2 } else { 3 };
            let e = mm.ilog(p);
            let m = GModule::trivial(ring(p, e), group(&format!("cyclic:{n}")), vec![e]);
            let (h0, hm1) = norm_oracle(&m);
            let (t0, tm1) = (tate_cohomology(&m, 0).unwrap(), tate_cohomology(&m, -1).unwrap());
            c.record(h0 == t0 && hm1 == tm1, || format!("Z/{n} with Z/{mm}: computed ({t0}, {tm1}), oracle ({h0}, {hm1})"));
        }
    }
    all("Tate cohomology", vec![c, tate_gcd_check(), tate_vanishing_check()])
}

/// `verify --seed 42` twice gives byte-identical JSON.
fn deterministic_reports() -> Check {
    let mut c = Check::new("verify --seed 42 is deterministic");
    let dir = std::env::temp_dir().join(format!("iwacoh-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |k: usize| {
        let path = dir.join(format!("report{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_iwacoh")).args(["verify", "--seed", "42", "--report"]).arg(&path).output().unwrap().status;
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (a, b) = (run(1), run(2));
    c.record(a.0 == Some(0) && b.0 == Some(0), || format!("exit codes {:?} and {:?}", a.0, b.0));
    c.record(!a.1.is_empty() && a.1 == b.1, || format!("reports differ ({} and {} bytes)", a.1.len(), b.1.len()));
    let _ = std::fs::remove_dir_all(&dir);
    c
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("d∘d = 0 on 500 random instances of every construct", Box::new(|| needs(dd_zero_check(&mut rng(1), 500), 500))),
        ("∪_1 − ∪_0 = ds + sd on 100 pairings", Box::new(|| needs(cone_cup_check(&mut rng(2), 100), 100))),
        ("cup Leibniz rule on 200 cochains", Box::new(|| needs(leibniz_check(&mut rng(3), 200), 200))),
        ("known cohomology groups", Box::new(known_values)),
        ("Tate cohomology of cyclic groups", Box::new(tate_values)),
        ("finite duality", Box::new(|| all("finite duality", vec![finite_duality_check(&mut rng(6)), cyclic_pairing_check(&mut rng(6))]))),
        ("Shapiro's lemma", Box::new(|| shapiro_check(&mut rng(7)))),
        ("duality of induced modules on 50 cases", Box::new(|| needs(dfm_check(&mut rng(8), 50), 50))),
        ("compact long exact sequence on 50 cases", Box::new(|| needs(compact_les_check(&mut rng(9), 50), 50))),
        ("tower stabilization", Box::new(tower_check)),
        ("two-of-three on 20 triangle pairs", Box::new(|| needs(two_of_three_check(&mut rng(11), 24), 20))),
        ("deterministic verify reports", Box::new(deterministic_reports)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let c = run();
        println!("criterion {}: {} - {name} ({} cases)", k + 1, c.verdict.as_str(), c.cases);
        if let Some(w) = &c.witness {
            println!("    witness: {w}");
        }
        if !c.passed() {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
