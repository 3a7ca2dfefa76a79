//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. Set
//! `KLEINIAN_BLESS=1` to (re)write the golden CLI outputs.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use kleinian::fiber::{self, build_fiber_ring};
use kleinian::molien::{self, GroupType};
use kleinian::params::{self, ParamVector};
use kleinian::preproj;
use kleinian::rational::{frac, Q};
use kleinian::roots::{self, WeightClass};
use kleinian::weyl;
use kleinian::zalgebra;
use kleinian::{build_from_label, Quiver};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn uniform_chi(n: usize) -> Vec<i64> {
    let mut chi = vec![1; n];
    chi[0] = -(n as i64 - 1);
    chi
}

fn odometer(n: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    let mut v = vec![lo; n];
    loop {
        f(&v);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            if v[k] < hi {
                v[k] += 1;
                break;
            }
            v[k] = lo;
            k += 1;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for label in ["A1", "A2", "A3", "A4", "D4", "D5", "E6"] {
        let q = build_from_label(label).unwrap();
        let delta = q.delta().map_err(|e| e.to_string())?;
        let n = q.vertex_count();
        let hi = *delta.iter().max().unwrap();
        let size: i64 = delta.iter().sum();
        // Brute force: delta is a positive null vector of q, and no positive
        // nonzero null vector in the box has smaller total.
        if q.tits_form(&delta) != 0 || delta.iter().any(|&x| x <= 0) {
            return Err(format!("{label}: delta {:?} is not a positive null vector", delta.0));
        }
        let mut smaller = None;
        odometer(n, 0, hi, |v| {
            let s: i64 = v.iter().sum();
            if s > 0 && s < size && smaller.is_none() && q.tits_form(v) == 0 {
                smaller = Some(v.to_vec());
            }
        });
        if let Some(v) = smaller {
            return Err(format!("{label}: smaller null vector {v:?}"));
        }
        let by_box: BTreeSet<_> = roots::positive_dynkin_roots_by_box(&q).unwrap().into_iter().collect();
        let by_closure: BTreeSet<_> = roots::positive_dynkin_roots(&q).unwrap().into_iter().collect();
        if by_box != by_closure {
            return Err(format!("{label}: box gives {} positive Dynkin roots, closure gives {}", by_box.len(), by_closure.len()));
        }
        checked += 1;
    }
    Ok(format!("{checked} types, delta minimal and root counts agree"))
}

/// `r_i(l)_j = l_j - C_ji l_i` with `C = 2I - adjacency`, written out directly.
fn oracle_word(q: &Quiver, perm: &[usize], refl: &[usize], lambda: &[Q]) -> Vec<Q> {
    let adj = q.adjacency();
    let mut v = vec![Q::zero(); lambda.len()];
    for (j, x) in lambda.iter().enumerate() {
        v[perm[j]] = x.clone();
    }
    for &i in refl.iter().rev() {
        let vi = v[i].clone();
        for j in 0..v.len() {
            let c = if i == j { 2 - adj[j][i] } else { -adj[j][i] };
            v[j] -= Q::from_integer(c.into()) * &vi;
        }
    }
    v
}

fn random_lambda<R: Rng>(rng: &mut R, delta: &[i64]) -> Vec<Q> {
    let mut v: Vec<Q> = (0..delta.len()).map(|_| frac(rng.gen_range(-30..=30), rng.gen_range(1..=13))).collect();
    let rest: Q = v.iter().zip(delta).skip(1).map(|(x, &d)| x * Q::from_integer(d.into())).sum();
    v[0] = Q::one() - rest;
    v
}

fn criterion_2() -> Outcome {
    let types = ["A1", "A2", "A3", "D4"];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut lengths = 0usize;
    for trial in 0..100 {
        let q = build_from_label(types[trial % types.len()]).unwrap();
        let delta = q.delta().unwrap();
        let xi = loop {
            let mut xi: Vec<i64> = (0..delta.len()).map(|_| rng.gen_range(-10..=10)).collect();
            xi[0] = -xi.iter().zip(delta.iter()).skip(1).map(|(a, b)| a * b).sum::<i64>();
            if xi[0].abs() <= 10 {
                break xi;
            }
        };
        let word = weyl::decompose_translation(&q, &xi, trial as u64)
            .map_err(|e| format!("trial {trial} {} xi={xi:?}: {e}", q.ty()))?;
        for _ in 0..5 {
            let lambda = random_lambda(&mut rng, &delta);
            let got = oracle_word(&q, &word.automorphism, &word.reflections, &lambda);
            let want: Vec<Q> = lambda.iter().zip(&xi).map(|(x, &k)| x + Q::from_integer(k.into())).collect();
            if got != want {
                return Err(format!("trial {trial} {} xi={xi:?}: word {word:?} is not the translation", q.ty()));
            }
        }
        lengths += word.reflections.len();
    }
    Ok(format!("100 instances verified on 5 points each (total word length {lengths})"))
}

fn criterion_3() -> Outcome {
    let types = ["A1", "A2", "A3"];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut accepted = 0;
    let mut nonempty = 0;
    let mut attempts = 0;
    while accepted < 50 {
        attempts += 1;
        let q = build_from_label(types[attempts % types.len()]).unwrap();
        let delta = q.delta().unwrap();
        let n = q.vertex_count();
        let mut re: Vec<Q> = (0..n).map(|_| frac(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        re[0] = Q::one() - re.iter().skip(1).cloned().sum::<Q>();
        let mut im = vec![Q::zero(); n];
        if accepted % 5 == 4 {
            im[1] = frac(rng.gen_range(1..=3), 2);
            im[0] = -im[1].clone();
        }
        let lambda = ParamVector::new(re, im).unwrap();
        if !params::is_regular(&q, &lambda).unwrap() {
            continue;
        }
        accepted += 1;
        if !roots::roots_annihilated_by(&q, &lambda).unwrap().is_empty() {
            nonempty += 1;
        }
        for d in 1..=3u64 {
            let xi = params::choose_xi(&q, &lambda, d).map_err(|e| format!("{} {lambda:?} d={d}: {e}", q.ty()))?;
            let class = roots::classify_weight(&q, &xi).unwrap();
            if !class.in_lambda_plus() {
                return Err(format!("{} d={d}: xi={:?} is {class:?}", q.ty(), xi.0));
            }
            let shifted = lambda.add_lattice(&xi);
            let dims = params::simple_module_dims(&q, &shifted).unwrap();
            if dims.range(1..=d).next().is_some() {
                return Err(format!("{} d={d}: shifted parameter still has dims {dims:?}", q.ty()));
            }
            // Independent scan: positive roots of extending coordinate 1..=d lie
            // in the box of radius (d + 1) max(delta).
            let bound = (d as i64 + 1) * delta.iter().max().unwrap();
            for r in roots::enumerate_roots(&q, bound) {
                let e = r.extending_coord();
                if r.is_positive && e >= 1 && e <= d as i64 && shifted.pairs_to_zero(&r.coords) {
                    return Err(format!("{} d={d}: root {:?} annihilated after shift", q.ty(), r.coords.0));
                }
            }
        }
    }
    debug_assert!(WeightClass::LambdaPlusPlus.in_lambda_plus());
    Ok(format!("50 regular parameters x d in 1..=3 ({nonempty} with annihilated roots)"))
}

fn criterion_4() -> Outcome {
    let a1 = build_from_label("A1").unwrap();
    let half = vec![frac(1, 2), frac(1, 2)];
    let stab = preproj::buffer_stabilization(&a1, &half, 8, &[0, 1, 2]).map_err(|e| e.to_string())?;
    let want = vec![1, 1, 4, 4, 9, 9, 16, 16, 25];
    if !stab.stable || stab.spherical.iter().any(|s| *s != want) {
        return Err(format!("A1 spherical dims {:?}", stab.spherical));
    }
    let a2 = build_from_label("A2").unwrap();
    let generic = vec![frac(1, 3), frac(1, 5), frac(7, 15)];
    let sph = preproj::spherical_dims(&a2, &generic, 6, 0).map_err(|e| e.to_string())?;
    let mol = molien::cumulative(&molien::molien_for(GroupType::Cyclic(3), 6).unwrap());
    if sph.iter().map(|&x| x as u64).collect::<Vec<_>>() != mol {
        return Err(format!("A2 spherical {sph:?} vs Z3 Molien cumulative {mol:?}"));
    }
    Ok(format!("A1 stable over b in {{0,1,2}}; A2 {sph:?} = Z3 cumulative"))
}

fn minimal_n(n: usize) -> Result<i64, String> {
    let ring = build_fiber_ring(n).unwrap();
    let rep = fiber::minimal_surjective_power(&ring, &uniform_chi(n), 3, 8).unwrap();
    rep.minimal_n.ok_or_else(|| {
        let bad: Vec<_> = rep.reports.iter().filter(|r| !r.surjective).map(|r| (r.left, r.right, r.first_failure)).collect();
        format!("n={n}: no passing N <= 3, failures {bad:?}")
    })
}

fn criterion_5() -> Outcome {
    let mut found = Vec::new();
    for n in [2, 3, 4] {
        found.push(format!("n={n}: N={}", minimal_n(n)?));
    }
    Ok(format!("minimal passing {}", found.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        let power = minimal_n(n)?;
        let ring = build_fiber_ring(n).unwrap();
        let rep = fiber::check_power_stabilization(&ring, &uniform_chi(n), power, 4, 8).unwrap();
        if !rep.holds {
            return Err(format!("n={n} N={power}: {:?}", rep.failures));
        }
        out.push(format!("n={n} N={power}"));
    }
    Ok(format!("S_jN = (S_N)^j for j <= 4: {}", out.join(", ")))
}

fn criterion_7() -> Outcome {
    for n in [2, 3, 4] {
        let ring = build_fiber_ring(n).unwrap();
        let rep = fiber::verify_kleinian_presentation(&ring, 8);
        if !rep.passed {
            return Err(format!("n={n}: {rep:?}"));
        }
        let hilbert: Vec<u64> = fiber::invariant_hilbert(&ring, 12).into_iter().map(|x| x as u64).collect();
        let mol = molien::molien_for(GroupType::Cyclic(n), 12).unwrap();
        if hilbert != mol {
            return Err(format!("n={n}: invariant Hilbert {hilbert:?} vs Molien {mol:?}"));
        }
    }
    Ok("AB = x^n, spanning and Hilbert = Molien for n in {2,3,4}".into())
}

fn criterion_8() -> Outcome {
    let mut triples = 0;
    for n in [3, 4] {
        let ring = build_fiber_ring(n).unwrap();
        let s = zalgebra::semi_invariant_ring(&ring, &uniform_chi(n), 4, 8).unwrap();
        let z = zalgebra::hat(&s).unwrap();
        let assoc = zalgebra::check_associativity(&z);
        if !(assoc.associative && assoc.graded && assoc.unital) {
            return Err(format!("n={n}: {assoc:?}"));
        }
        triples += assoc.triples_checked;
        let morita = zalgebra::morita_condition_ii(&z, 1, 8).unwrap();
        if !morita.surjective || morita.vacuous {
            return Err(format!("n={n}: Morita (ii) {:?}", morita.witnesses));
        }

        let mut scaled = z.clone();
        let (key, a, b) = zalgebra::factored_entry(&z).ok_or("no entry to scale")?;
        scaled.scale_product(key, a, b, frac(2, 1));
        let rep = zalgebra::check_associativity(&scaled);
        if rep.associative || rep.witness.is_none() {
            return Err(format!("n={n}: scaled product not detected"));
        }
        let mut deleted = z.clone();
        let (key, a, b) = zalgebra::sole_preimage_entry(&z).ok_or("no entry to delete")?;
        deleted.delete_product(key, a, b);
        let rep = zalgebra::morita_condition_ii(&deleted, 1, 8).unwrap();
        if rep.surjective || rep.witnesses.is_empty() {
            return Err(format!("n={n}: deleted product not detected"));
        }
    }
    for n in 1..=10u64 {
        for m in n..=200 {
            let parts = zalgebra::decompose_sum(m, n).map_err(|e| e.to_string())?;
            if parts.iter().sum::<u64>() != m || parts.iter().any(|&k| k < n || k > 2 * n - 1) {
                return Err(format!("decompose_sum({m}, {n}) = {parts:?}"));
            }
        }
    }
    Ok(format!("{triples} triples associative, Morita (ii) surjective, both negative controls located"))
}

pub const GOLDEN: [(&str, &[&str]); 10] = [
    ("quiver_d4", &["quiver", "--type", "D4"]),
    ("roots_a1", &["roots", "--type", "A1", "--bound", "3"]),
    ("analyze_a3", &["analyze", "--type", "A3", "--lambda", "1/2,1/6,1/6,1/6"]),
    ("choose_xi_a1", &["choose-xi", "--type", "A1", "--lambda", "2,-1", "--d", "1"]),
    ("weyl_d4", &["weyl-decompose", "--type", "D4", "--xi", "-3,1,0,0,1", "--seed", "7"]),
    ("semiinv_n3", &["semiinv", "--n", "3", "--chi", "-2,1,1", "--m", "2", "--dmax", "8", "--format", "csv"]),
    ("kleinian_n4", &["kleinian-check", "--n", "4", "--dmax", "10"]),
    ("molien_z3", &["molien", "--group", "Z3", "--dmax", "12"]),
    ("preproj_a2", &["preproj-dims", "--type", "A2", "--lambda", "1/3,1/3,1/3", "--L", "6", "--buffer", "1"]),
    ("zalg_n2", &["zalg-check", "--model", "typeA", "--n", "2", "--chi", "-1,1", "--N", "1", "--M", "4", "--cap", "8"]),
];

fn criterion_9() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("KLEINIAN_BLESS").is_some();
    for (name, args) in GOLDEN {
        let run = || Command::new(env!("CARGO_BIN_EXE_kleinian")).args(args).output().expect("binary runs");
        let (first, second) = (run(), run());
        if !first.status.success() {
            return Err(format!("{name}: exit {:?}: {}", first.status.code(), String::from_utf8_lossy(&first.stderr)));
        }
        if first.stdout != second.stdout {
            return Err(format!("{name}: output differs between runs"));
        }
        let path = dir.join(format!("{name}.out"));
        if bless {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &first.stdout).unwrap();
        }
        let golden = std::fs::read(&path).map_err(|e| format!("{name}: {e}"))?;
        if golden != first.stdout {
            return Err(format!("{name}: output differs from {}", path.display()));
        }
    }
    Ok("10 invocations byte-identical across runs and to golden files".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("root system", criterion_1, Duration::from_secs(60)),
        ("weyl decomposition", criterion_2, Duration::from_secs(120)),
        ("shift construction", criterion_3, Duration::from_secs(600)),
        ("molien cross-oracle", criterion_4, Duration::from_secs(300)),
        ("multiplication surjective", criterion_5, Duration::from_secs(600)),
        ("power stabilization", criterion_6, Duration::from_secs(600)),
        ("kleinian relation", criterion_7, Duration::from_secs(600)),
        ("z-algebra suite", criterion_8, Duration::from_secs(600)),
        ("cli determinism", criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({elapsed:.1?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.1?}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
