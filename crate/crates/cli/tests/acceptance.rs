//! Runs every acceptance criterion and prints one PASS/FAIL line per
//! criterion. Exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use topo_core::decomposition::{open_decomposition, theta_decomposition, weak_homeo_witness};
use topo_core::diagram::verify_diagram;
use topo_core::enumerate::{
    homeomorphism_class_count_pairwise, homeomorphism_class_masks, homeomorphism_classes_by_canonical_dedup,
    labeled_masks, labeled_masks_via_open_families, labeled_spaces,
};
use topo_core::map::{check_composition_laws, check_composition_laws_random, for_each_assignment, MapFile, Tier};
use topo_core::oracle::{certify_hedgehog_profile, embed_hedgehog, verify_embedding, Hedgehog, HedgehogSum, OraclePoint};
use topo_core::regularity::{classify_report, is_regular, is_theta_open_by_definition};
use topo_core::{FinMap, FinSpace, Property};

type Outcome = Result<String, String>;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> FinSpace {
    FinSpace::from_json(&std::fs::read_to_string(fixtures().join(name)).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

fn sierpinski_report() -> Outcome {
    let t = Instant::now();
    let s = load("sierpinski.json");
    let r = classify_report(&s, 3).map_err(|e| e.to_string())?;
    let expect = [
        (Property::Scattered, true),
        (Property::WThetaRegular, false),
        (Property::ThetaWeaklyRegular, false),
        (Property::Regular, false),
        (Property::QuasiRegular, false),
        (Property::WeaklyRegular, true),
    ];
    for (p, v) in expect {
        ensure(r.holds(p) == v, format!("{p} reported {}", r.holds(p)))?;
    }
    let e = within(t, Duration::from_secs(1))?;
    Ok(format!("scattered, weakly regular; not wθ-, θ-weakly, quasi- or regular ({e:.2?})"))
}

fn doubleton_map() -> Outcome {
    let text = std::fs::read_to_string(fixtures().join("d_to_discrete.json")).unwrap();
    let file: MapFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let map = file
        .into_map(|p| FinSpace::from_json(&std::fs::read_to_string(fixtures().join(p)).unwrap()))
        .map_err(|e| e.to_string())?;
    let c = map.classify();
    ensure(c.tier() == Tier::WeaklyDiscontinuous, format!("tier {}", c.tier()))?;
    let weak = map.is_weak_homeomorphism(false).map_err(|e| e.to_string())?;
    let theta = map.is_weak_homeomorphism(true).map_err(|e| e.to_string())?;
    ensure(weak && !theta, format!("weak homeomorphism {weak}, θ-weak {theta}"))?;
    Ok("weakly discontinuous, not θ-weakly; weak but not θ-weak homeomorphism".into())
}

fn diagram() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t = Instant::now();
    let report = pool.install(|| verify_diagram(4, 3)).map_err(|e| e.to_string())?;
    let e = within(t, Duration::from_secs(60))?;
    ensure(report.spaces_per_size == [1, 4, 29, 355], format!("{:?}", report.spaces_per_size))?;
    ensure(report.violations() == 0, format!("{} violations", report.violations()))?;
    for needle in ["w_theta_regular => hereditarily_quasi_regular", "scattered && t1", "transfer: w_theta", "transfer: sw"] {
        let c = report.checks.iter().find(|c| c.name.contains(needle));
        ensure(c.is_some_and(|c| c.instances > 0), format!("check `{needle}` missing or vacuous"))?;
    }
    Ok(format!("{} checks over {} spaces, 0 violations, single worker ({e:.2?})", report.checks.len(), report.spaces()))
}

fn lemma() -> Outcome {
    let (mut instances, mut violations) = (0u64, 0u64);
    for n in 1..=4 {
        for s in labeled_spaces(n) {
            let full = s.full();
            for u in full.subsets().filter(|&u| is_theta_open_by_definition(&s, full, u)) {
                for v in u.subsets().filter(|&v| is_theta_open_by_definition(&s, u, v)) {
                    instances += 1;
                    if !is_theta_open_by_definition(&s, full, v) || !s.is_theta_open(v) {
                        violations += 1;
                    }
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{instances} triples (X, U, V), 0 violations"))
}

fn composition() -> Outcome {
    let ex = check_composition_laws(2, 2, 2).map_err(|e| e.to_string())?;
    let rnd = check_composition_laws_random(10_000, 3..=4, 0x5eed).map_err(|e| e.to_string())?;
    ensure(ex.proved_violations() == 0, format!("exhaustive: {} violations", ex.proved_violations()))?;
    ensure(rnd.proved_violations() == 0, format!("random: {} violations", rnd.proved_violations()))?;
    ensure(rnd.triples == 10_000, "random sample size")?;
    Ok(format!("{} exhaustive triples and {} random triples, 0 violations", ex.triples, rnd.triples))
}

fn regular_side_theorems() -> Outcome {
    let spaces: Vec<FinSpace> = (1..=3).flat_map(labeled_spaces).collect();
    let (mut dom, mut cod, mut bad) = (0u64, 0u64, 0u64);
    for x in &spaces {
        for y in &spaces {
            let (rx, ry) = (is_regular(x), is_regular(y));
            if !rx && !ry {
                continue;
            }
            for_each_assignment(x.len(), y.len(), |f| {
                let c = FinMap::new(x.clone(), y.clone(), f.to_vec()).unwrap().classify();
                if rx {
                    dom += 1;
                    bad += u64::from(c.reaches(Tier::WeaklyDiscontinuous) != c.reaches(Tier::ThetaWeaklyDiscontinuous));
                }
                if ry {
                    cod += 1;
                    bad += u64::from(c.reaches(Tier::ScatteredlyContinuous) != c.reaches(Tier::WeaklyDiscontinuous));
                }
                true
            });
        }
    }
    ensure(bad == 0, format!("{bad} violations"))?;
    Ok(format!("{dom} maps from regular domains, {cod} into regular codomains, 0 violations"))
}

fn counts() -> Outcome {
    let mut labeled = Vec::new();
    let mut classes = Vec::new();
    for n in 1..=4 {
        let mut direct = labeled_masks(n);
        direct.sort();
        let families = labeled_masks_via_open_families(n);
        ensure(direct == families, format!("labeled enumerators differ at n = {n}"))?;
        let ext = homeomorphism_class_masks(n).len();
        let dedup = homeomorphism_classes_by_canonical_dedup(&direct).len();
        let pairwise = homeomorphism_class_count_pairwise(&direct);
        ensure(ext == dedup && dedup == pairwise, format!("class counts differ at n = {n}: {ext}/{dedup}/{pairwise}"))?;
        labeled.push(direct.len());
        classes.push(dedup);
    }
    ensure(labeled == [1, 4, 29, 355], format!("labeled {labeled:?}"))?;
    ensure(classes == [1, 3, 9, 33], format!("classes {classes:?}"))?;
    Ok(format!("labeled {labeled:?}, up to homeomorphism {classes:?}"))
}

fn decompositions() -> Outcome {
    let mut witnesses = 0;
    let mut total = 0;
    for n in 1..=4 {
        for s in labeled_spaces(n) {
            total += 1;
            for (theta, complete, prop) in [
                (true, theta_decomposition(&s).is_complete(), Property::ThetaWeaklyRegular),
                (false, open_decomposition(&s).is_complete(), Property::WeaklyRegular),
            ] {
                ensure(complete == prop.holds(&s), format!("{prop} disagrees with its decomposition on {s}"))?;
                if let Ok((y, map)) = weak_homeo_witness(&s, theta) {
                    witnesses += 1;
                    let ok = is_regular(&y) && map.is_weak_homeomorphism(theta).unwrap_or(false);
                    ensure(ok, format!("witness for {s} fails"))?;
                }
            }
        }
    }
    Ok(format!("{total} spaces, {witnesses} witnesses verified"))
}

fn hedgehog() -> Outcome {
    let t = Instant::now();
    let p = certify_hedgehog_profile(50);
    ensure(
        p.first_countable == Some(true)
            && p.scattered == Some(true)
            && p.locally_regular == Some(true)
            && p.regular == Some(false),
        format!("profile {p:?}"),
    )?;
    let want: Vec<(u64, OraclePoint)> = (1..=50).map(|k| (k, OraclePoint::Stalk(k))).collect();
    ensure(p.root_witnesses == want, "root witnesses")?;
    let e = embed_hedgehog(&Hedgehog, &OraclePoint::Root, 1, 20).map_err(|e| e.to_string())?;
    verify_embedding(&Hedgehog, &e, 20).map_err(|e| e.to_string())?;
    let sum = HedgehogSum::new(FinSpace::discrete(3));
    let e = embed_hedgehog(&sum, &OraclePoint::Root, 1, 20).map_err(|e| e.to_string())?;
    verify_embedding(&sum, &e, 20).map_err(|e| e.to_string())?;
    let elapsed = within(t, Duration::from_secs(5))?;
    Ok(format!("profile to depth 50, two embeddings verified to depth 20 ({elapsed:.2?})"))
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["classify", "sierpinski.json"],
        &["classify", "x3_chain_iso.json", "--json"],
        &["fn", "classify", "d_to_discrete.json"],
        &["fn", "classify", "d_to_discrete.json", "--json"],
        &["decompose", "x3_chain_iso.json"],
        &["decompose", "--open", "sierpinski.json", "--json"],
        &["enumerate", "-n", "4", "--labeled"],
        &["enumerate", "-n", "5", "--homeo", "--json"],
        &["search", "--where", "weakly_regular && !regular", "--max-n", "4", "--limit", "50", "--sw-bound", "3"],
        &["verify-diagram", "--max-n", "4"],
        &["verify-diagram", "--max-n", "3", "--json"],
        &["hedgehog", "profile", "--depth", "20"],
        &["hedgehog", "embed", "--depth", "10", "--space", "sum:discrete3"],
        &["hedgehog", "embed", "--depth", "10", "--space", "permuted", "--json"],
    ];
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_topo"))
            .args(args)
            .current_dir(fixtures())
            .output()
            .expect("binary runs")
    };
    for args in commands {
        let base = run(args);
        ensure(base.status.success(), format!("{args:?} failed"))?;
        for extra in [&[][..], &["--workers", "1"], &["--workers", "3"], &["--workers", "8"]] {
            let mut with = args.to_vec();
            with.extend_from_slice(extra);
            ensure(run(&with).stdout == base.stdout, format!("{with:?} differs"))?;
        }
    }
    Ok(format!("{} commands byte-identical across runs and worker counts", commands.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Sierpiński classification", sierpinski_report),
        ("connected doubleton to discrete doubleton", doubleton_map),
        ("implication diagram at n = 4", diagram),
        ("θ-open inside θ-open", lemma),
        ("composition laws", composition),
        ("regular domain / regular codomain theorems", regular_side_theorems),
        ("dual enumerator counts", counts),
        ("decomposition coherence", decompositions),
        ("hedgehog profile and embeddings", hedgehog),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
