//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;
use vlab::finlat::{FinLattice, FinPoset, DEFAULT_DOWNSET_LIMIT};
use vlab::gen::Gen;
use vlab::ideals::{relative_disjoint_complement, tplus, BandStatus, IdealSpec, MemberVerdict, Sublattice, DEFAULT_CUTOFF};
use vlab::props;
use vlab::rational::{int, parse_rational, rat, zero};
use vlab::report::Report;
use vlab::seq::IncreasingSeqRule;
use vlab::urysohn;
use vlab::{PLFun, PlOp, Rational, Region, Space};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const LIMIT: Duration = Duration::from_secs(60);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sound(rep: &Report, what: &str) -> Result<(), String> {
    ensure(rep.passed(), || format!("{what}: verdict {:?}", rep.verdict.status))?;
    let re = rep.recheck();
    ensure(re.ok(), || format!("{what}: recheck {:?}", re.mismatches))
}

fn oracle(f: &PLFun, x: &Rational) -> Rational {
    let ci = f.space().locate(x).expect("point of the space");
    let pts = f.breakpoints(ci);
    if pts.len() == 1 {
        return pts[0].1.clone();
    }
    let w = pts
        .windows(2)
        .find(|w| &w[0].0 <= x && x <= &w[1].0)
        .expect("x is covered");
    let ((x0, v0), (x1, v1)) = (&w[0], &w[1]);
    v0 + (v1 - v0) * (x - x0) / (x1 - x0)
}

fn pl_oracle() -> Outcome {
    let ops = [PlOp::Add, PlOp::Sub, PlOp::Scale, PlOp::Join, PlOp::Meet, PlOp::Abs, PlOp::PosPart, PlOp::NegPart];
    let mut g = Gen::new(1);
    let mut checks = 0usize;
    for pair in 0..1000 {
        let space = g.space();
        let f = g.pl(&space, 4, 3);
        let h = g.pl(&space, 4, 3);
        let c = g.value(2);
        let outs: Vec<PLFun> = ops
            .iter()
            .map(|op| {
                let args: Vec<&PLFun> = if op.arity() == 2 { vec![&f, &h] } else { vec![&f] };
                op.apply(&args, Some(&c)).expect("same space")
            })
            .collect();
        for _ in 0..100 {
            let x = g.point(&space);
            let (a, b) = (oracle(&f, &x), oracle(&h, &x));
            let want = [
                &a + &b,
                &a - &b,
                &c * &a,
                a.clone().max(b.clone()),
                a.clone().min(b.clone()),
                a.clone().max(-a.clone()),
                a.clone().max(zero()),
                (-a.clone()).max(zero()),
            ];
            for (k, out) in outs.iter().enumerate() {
                let got = out.eval(&x).map_err(|e| e.to_string())?;
                ensure(got == want[k] && oracle(out, &x) == want[k], || {
                    format!("pair {pair}, {:?} at {x}: {got} vs {}", ops[k], want[k])
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} pointwise checks over 1000 pairs"))
}

fn bands() -> Outcome {
    let s = Space::interval(int(-1), int(1)).map_err(|e| e.to_string())?;
    let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).map_err(|e| e.to_string())?;
    let cases = [
        ("t⁺", IdealSpec::principal(tplus(&s)).unwrap(), BandStatus::BandOnly),
        ("t", IdealSpec::principal(PLFun::identity(&s)).unwrap(), BandStatus::NotBand),
        ("component", IdealSpec::region(Region::components(&two, &[1])), BandStatus::ProjectionBand),
        (
            "component indicator",
            IdealSpec::principal(PLFun::constant(&two, int(1)).mask(&Region::components(&two, &[0])).unwrap()).unwrap(),
            BandStatus::ProjectionBand,
        ),
    ];
    for (name, h, want) in &cases {
        let rep = h.band_status_report(DEFAULT_CUTOFF);
        sound(&rep, name)?;
        ensure(rep.verdict.result == serde_json::json!(want), || format!("{name}: {}", rep.verdict.result))?;
    }
    Ok("t⁺ BandOnly, t NotBand, clopen component ProjectionBand".into())
}

fn urysohn_instances() -> Outcome {
    let mut g = Gen::new(3);
    let (mut cv, mut sc, mut ic, mut od) = (0, 0, 0, 0);
    while cv < 100 || sc < 100 || ic < 100 || od < 100 {
        let space = g.space();
        let u = g.open_region(&space, 3);
        let v = g.open_region(&space, 3);
        let f = g.nonneg_pl(&space, 4, 3);
        if cv < 100 {
            let k = PLFun::bump_for(&u, None).unwrap().superlevel(&rat(1, 2));
            let e = urysohn::coincide_vanish(&f, &k, &u).map_err(|e| e.to_string())?;
            let ev = urysohn::coincide_vanish_evidence(&f, &k, &u, &e).unwrap();
            ensure(ev.iter().all(|e| e.holds()), || format!("coincide_vanish {ev:?}"))?;
            cv += 1;
        }
        if sc < 100 {
            let cover = PLFun::bump_for(&u.union(&v).unwrap(), None).unwrap();
            let f2 = f.meet(&cover).unwrap();
            let (a, b) = urysohn::split_cover(&f2, &u, &v).map_err(|e| e.to_string())?;
            let ev = urysohn::split_cover_evidence(&f2, &u, &v, &a, &b).unwrap();
            ensure(ev.iter().all(|e| e.holds()), || format!("split_cover {ev:?}"))?;
            sc += 1;
        }
        if ic < 100 {
            let h = IdealSpec::region(u.clone());
            let k = PLFun::bump_for(&u, None).unwrap().superlevel(&rat(1, 3));
            let out = urysohn::ideal_coincide(&h, &k, &f).map_err(|e| e.to_string())?;
            let cert = urysohn::ideal_coincide_certificate(&h, &k, &f, &out, DEFAULT_CUTOFF).unwrap();
            ensure(cert.passed, || format!("ideal_coincide {cert:?}"))?;
            ic += 1;
        }
        if od < 100 && !f.support().intersect(&u).unwrap().is_empty() {
            let (w, e) = urysohn::order_dense_urysohn(&f, &u).map_err(|e| e.to_string())?;
            let ev = urysohn::order_dense_evidence(&f, &u, &w, &e).unwrap();
            ensure(!w.is_empty() && ev.iter().all(|e| e.holds()), || format!("order_dense {ev:?}"))?;
            od += 1;
        }
    }
    Ok("coincide_vanish, split_cover, ideal_coincide, order_dense_urysohn: 100 each".into())
}

fn abvg_catalog() -> Outcome {
    let catalog: [(&str, &str, &str, &str); 10] = [
        ("0:1", "one", "exhaust:(0,1]", "one"),
        ("-1:1", "one", "exhaust:[-1,0)u(0,1]", "one"),
        ("-1:1", "abs", "exhaust:(-1/2,1/2)", "one"),
        ("0:1", "t", "exhaust:(0,1)", "one"),
        ("-1:1", "tplus", "multiples:tplus", "one"),
        ("-1:0,1:2", "one", "exhaust:(-1,0]u[1,2)", "one"),
        ("0:1", "const:3", "exhaust:(1/3,1]", "one"),
        ("-1:1", "one", "multiples:abs", "const:1/2"),
        ("0:2", "tent", "exhaust:(0,2)", "one"),
        ("-1:1", "abs", "exhaust:(0,1]", "one"),
    ];
    for (sp, f, seq, unit) in catalog {
        let space = parse_space(sp);
        let f = if f == "tent" {
            PLFun::from_nodes(&space, &[(int(0), int(0)), (int(1), int(2)), (int(2), int(0))]).unwrap()
        } else {
            catalog_fn(&space, f)
        };
        let seq = if let Some(r) = seq.strip_prefix("exhaust:") {
            IncreasingSeqRule::exhaustion(&Region::parse(&space, r).unwrap()).unwrap()
        } else {
            IncreasingSeqRule::multiples(catalog_fn(&space, seq.strip_prefix("multiples:").unwrap())).unwrap()
        };
        let unit = catalog_fn(&space, unit);
        let out = urysohn::abvg(&f, &seq, &unit, 20).map_err(|e| e.to_string())?;
        sound(&out.report, &format!("abvg on {sp}"))?;
        let names: Vec<&str> = out.report.certificates.iter().map(|c| c.name.as_str()).collect();
        for want in ["separated_disjoint", "remainder_disjoint", "remainder_bound", "beyond_last"] {
            ensure(names.contains(&want), || format!("missing {want}"))?;
        }
        ensure(out.parts.len() == 20, || "N terms".into())?;
    }
    Ok("10 instances, N=20, bullets (a)-(c) and the finite shadow of (d)".into())
}

fn parse_space(text: &str) -> Arc<Space> {
    let comps = text
        .split(',')
        .map(|c| {
            let (a, b) = c.split_once(':').unwrap();
            (parse_rational(a).unwrap(), parse_rational(b).unwrap())
        })
        .collect();
    Space::new(comps).unwrap()
}

fn catalog_fn(space: &Arc<Space>, name: &str) -> PLFun {
    let t = PLFun::identity(space);
    match name {
        "one" => PLFun::constant(space, int(1)),
        "t" => t,
        "tplus" => t.pos_part(),
        "abs" => t.abs(),
        other => PLFun::constant(space, parse_rational(other.strip_prefix("const:").unwrap()).unwrap()),
    }
}

fn njo() -> Outcome {
    let rep = props::njo_counterexample().map_err(|e| e.to_string())?;
    sound(&rep, "njo")?;
    let r = &rep.verdict.result;
    ensure(r["full"] == "In" && r["even_near_zero"] == "Out", || format!("{r}"))?;
    let forced = rep
        .certificates
        .iter()
        .find(|c| c.name == "forced_split")
        .ok_or("no forced-split certificate")?;
    ensure(forced.passed, || "forced split".into())?;
    Ok("|t| decomposes in Full; Sum membership Out in EvenNearZero with the forced split".into())
}

fn infd() -> Outcome {
    let s = Space::interval(int(-1), int(1)).unwrap();
    let h = IdealSpec::region(Region::parse(&s, "(0,1]").unwrap());
    let rep = props::infd_witness(&h, 0, 0).map_err(|e| e.to_string())?;
    sound(&rep, "infd witness")?;
    let r = &rep.verdict.result;
    ensure(r["kind"] == "witness", || format!("{r}"))?;
    ensure(r["f"] == serde_json::json!(PLFun::constant(&s, int(1))), || "f is not 𝟙".into())?;
    let stages = rep.certificates.iter().filter(|c| c.name.starts_with("stage_")).count();
    ensure(stages == 64, || format!("{stages} stages"))?;
    let mut g = Gen::new(6);
    let mut done = 0;
    while done < 20 {
        let space = g.space();
        let c = g.clopen_region(&space);
        let rep = props::infd_witness(&IdealSpec::region(c), 100, g.seed()).map_err(|e| e.to_string())?;
        sound(&rep, "finite families")?;
        ensure(rep.verdict.result["kind"] == "confirmed_distributive", || "kind".into())?;
        done += 1;
    }
    Ok("64 splits pass, limit fails; 20 clopen H × 100 families distribute".into())
}

fn main_theorem() -> Outcome {
    let s = Space::interval(int(-1), int(1)).unwrap();
    let two = Space::new(vec![(int(-1), int(0)), (int(1), int(2))]).unwrap();
    let three = Space::new(vec![(int(-2), int(-1)), (int(0), int(1)), (int(2), int(3))]).unwrap();
    let ideals = [
        (IdealSpec::region(Region::parse(&s, "(0,1]").unwrap()), BandStatus::BandOnly),
        (IdealSpec::region(Region::parse(&s, "[-1,-1/2)u(0,1]").unwrap()), BandStatus::BandOnly),
        (IdealSpec::region(Region::parse(&s, "(1/4,3/4)").unwrap()), BandStatus::BandOnly),
        (IdealSpec::region(Region::parse(&two, "[-1,0]u(3/2,2]").unwrap()), BandStatus::BandOnly),
        (IdealSpec::full(&s), BandStatus::ProjectionBand),
        (IdealSpec::region(Region::components(&two, &[1])), BandStatus::ProjectionBand),
        (IdealSpec::region(Region::components(&three, &[0, 2])), BandStatus::ProjectionBand),
    ];
    let grid = props::default_grid();
    let mut unbounded = 0;
    for (h, want) in &ideals {
        ensure(h.band_status(DEFAULT_CUTOFF) == *want, || format!("{h}: status"))?;
        let rep = props::theorem_main_check(h, &grid).map_err(|e| e.to_string())?;
        sound(&rep, &h.to_string())?;
        ensure(rep.verdict.result["verdict"] == "consistent", || format!("{h}"))?;
        let cases = rep.verdict.result["cases"].as_array().cloned().unwrap_or_default();
        for case in cases.iter().filter(|c| c["verdict"] == "unbounded") {
            unbounded += 1;
            let search = &case["search"];
            ensure(search["dominators"] == 0 && !search["obstruction"].is_null(), || format!("{search}"))?;
        }
    }
    ensure(unbounded > 0, || "no unbounded case exercised".into())?;
    Ok(format!("7 ideals consistent; {unbounded} unbounded cases, bounded search found no dominator"))
}

fn glivenko() -> Outcome {
    let mut lattices = vec![FinLattice::divisors(12).unwrap()];
    for k in 0..=4 {
        lattices.push(FinLattice::boolean(k).unwrap());
    }
    for n in 0..=5 {
        for p in FinPoset::all_up_to_iso(n) {
            lattices.push(FinLattice::downsets_of(&p, DEFAULT_DOWNSET_LIMIT).unwrap());
        }
    }
    for l in &lattices {
        sound(&l.glivenko_check().map_err(|e| e.to_string())?, "glivenko")?;
        sound(&l.ideal_lattice_check().map_err(|e| e.to_string())?, "ideal lattice")?;
    }
    for l in [FinLattice::n5(), FinLattice::m3()] {
        let rep = l.glivenko_check().map_err(|e| e.to_string())?;
        ensure(!rep.passed() && rep.recheck().ok(), || "non-distributive lattice accepted".into())?;
        ensure(rep.verdict.result["witness"].as_array().map(Vec::len) == Some(3), || "no witness".into())?;
    }
    Ok(format!("{} distributive lattices pass; N5 and M3 rejected with witnesses", lattices.len()))
}

fn complements() -> Outcome {
    let mut g = Gen::new(9);
    for i in 0..200 {
        let space = g.space();
        let h = IdealSpec::region(g.open_region(&space, 3));
        let d1 = h.disjoint_complement();
        let d2 = d1.disjoint_complement();
        let d3 = d2.disjoint_complement();
        ensure(d3.support() == d1.support(), || format!("instance {i}: dc³ ≠ dc¹"))?;
        let band = h.band_generated();
        ensure(band.support().interior() == d2.support(), || format!("instance {i}: band ≠ dc²"))?;
        for _ in 0..3 {
            let f = g.pl(&space, 3, 2);
            let a = band.member(Sublattice::Full, &f, DEFAULT_CUTOFF).unwrap().verdict;
            let b = d2.member(Sublattice::Full, &f, DEFAULT_CUTOFF).unwrap().verdict;
            ensure(a == b && a != MemberVerdict::Unsupported, || format!("instance {i}: {a:?} vs {b:?}"))?;
        }
        let j = IdealSpec::region(g.open_region(&space, 3));
        let lhs = relative_disjoint_complement(&h, &j);
        let rhs = IdealSpec::intersection(h.clone(), j.disjoint_complement());
        ensure(lhs.support() == rhs.support(), || format!("instance {i}: relative complement"))?;
    }
    Ok("200 ideals: dc³ = dc¹, band = dc², relative complements agree".into())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(args)
        .output()
        .expect("run vlab");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn cli_determinism() -> Outcome {
    let commands: [(&[&str], i32); 9] = [
        (&["check", "infd", "--ideal", "E((0,1])", "--seed", "7"], 0),
        (&["check", "infd", "--space=-1:0,1:2", "--ideal", "E([-1,0])", "--families", "10", "--seed", "7"], 0),
        (&["check", "selfmaj", "--fn", "tplus", "--samples", "10", "--seed", "3"], 0),
        (&["check", "main", "--ideal", "E((0,1])"], 0),
        (&["check", "njo"], 0),
        (&["check", "glivenko", "--divisors", "12"], 0),
        (&["urysohn", "split", "--fn", "one", "--u", "[-1,1/2)", "--v", "(0,1]"], 0),
        (&["abvg", "--space", "0:1", "--fn", "one", "--seq", "exhaust:(0,1]"], 0),
        (&["lattice", "distributive", "--lattice", "m3"], 1),
    ];
    let dir = std::env::temp_dir().join(format!("vlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (args, code) in commands {
        let mut with = args.to_vec();
        with.push("--json");
        let (c1, o1, _) = run_cli(&with);
        let (c2, o2, _) = run_cli(&with);
        ensure(c1 == code && c2 == code, || format!("{args:?}: exit {c1}/{c2}"))?;
        ensure(o1 == o2, || format!("{args:?}: reports differ"))?;
        let path = dir.join("report.json");
        let path_s = path.to_string_lossy().into_owned();
        let mut rec = args.to_vec();
        rec.extend(["--recheck", "--out", &path_s]);
        let (c3, _, err) = run_cli(&rec);
        ensure(c3 == code && err.contains("recheck: confirmed"), || format!("{args:?}: {err}"))?;
        let saved = std::fs::read(&path).map_err(|e| e.to_string())?;
        ensure(saved.trim_ascii_end() == o1.trim_ascii_end(), || format!("{args:?}: --out differs"))?;
        let (c4, _, err) = run_cli(&["recheck", &path_s]);
        ensure(c4 == code && err.contains("recheck: confirmed"), || format!("{args:?}: saved {err}"))?;
        let parsed: Value = serde_json::from_slice(&o1).map_err(|e| e.to_string())?;
        ensure(parsed["timings"].is_null(), || "timings present".into())?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    let (code, out, _) = run_cli(&["ideal", "band-status", "--principal", "tplus.json"]);
    ensure(code == 0 && out == b"BandOnly\n", || "band-status example".into())?;
    let (code, out, _) = run_cli(&["lattice", "pseudo", "--divisors", "12", "--element", "2"]);
    ensure(code == 0 && out == b"3\n", || "pseudo example".into())?;
    let (code, _, _) = run_cli(&["frobnicate"]);
    ensure(code == 2, || "unknown subcommand accepted".into())?;
    Ok("9 commands byte-identical across runs; --recheck and saved-report recheck confirm".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("PL arithmetic matches the pointwise oracle", pl_oracle),
        ("band status of the catalog ideals", bands),
        ("Urysohn-type constructions meet their postconditions", urysohn_instances),
        ("disjoint telescoping approximation", abvg_catalog),
        ("even-near-zero sum counterexample", njo),
        ("infinite meet distributivity", infd),
        ("projection bands versus bounded disjoint families", main_theorem),
        ("Glivenko suite on finite lattices", glivenko),
        ("disjoint complements of region ideals", complements),
        ("CLI determinism and recheck", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > LIMIT => Err(format!("{detail}, but took longer than {}s", LIMIT.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} ({:.2}s)", i + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({:.2}s)", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
