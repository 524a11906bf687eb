//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::{Duration, Instant};

use paritysum_core::pilz::{self, ScanConfig};
use paritysum_core::poly::{Gf2Poly, Kernel};
use paritysum_core::setops::{self, GridSet, IntSet};
use paritysum_core::theorem::{self, tiling, Instance};
use paritysum_core::{oracle, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: true, detail: detail.into() })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: false, detail: detail.into() })
}

fn sweep() -> Result<Outcome> {
    let mut checked = 0u64;
    for n in 1..=10u64 {
        for k in 1..=3u32 {
            for idx in 0..8u64.pow(k) {
                let a: Vec<u64> = (0..k).map(|j| idx / 8u64.pow(j) % 8 + 1).collect();
                let inst = Instance::new(n, a.clone())?;
                let p = theorem::build_p(&inst)?;
                let sets: Vec<IntSet> =
                    a.iter().map(|&ai| IntSet::arithmetic(ai, n)).collect::<Result<_>>()?;
                let brute = oracle::oplus_all(&sets)?;
                // p is built from {0, a, …, (n-1)a}; the oracle sets start at a.
                let shift: u64 = a.iter().sum();
                let shifted: IntSet = p.iter().map(|e| e + shift).collect();
                if shifted != brute {
                    return fail(format!("n={n} a={a:?}: polynomial and oracle disagree"));
                }
                if (p.support_size() as u64) < n {
                    return fail(format!("n={n} a={a:?}: size {} < n", p.support_size()));
                }
                checked += 1;
            }
        }
    }
    pass(format!("{checked} instances"))
}

fn examples() -> Result<Outcome> {
    let r = setops::oplus(&IntSet::interval(1, 5), &IntSet::new([0, 1]))?;
    if r != IntSet::new([1, 6]) {
        return fail(format!("[5] oplus {{0,1}} = {r}"));
    }
    let s4 = pilz::build_sn(4)?;
    let want = GridSet::new(2, [vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]])?;
    if s4 != want {
        return fail(format!("S_4 = {s4}"));
    }
    for n in 1..=30u64 {
        for c in 1..=30u64 {
            let size = pilz::pilz_size(&IntSet::new([c]), n)?;
            if size as u64 != n {
                return fail(format!("pilz_size({{{c}}}, {n}) = {size}"));
            }
        }
        let size = pilz::pilz_size(&IntSet::interval(1, n), n)?;
        if size as u64 != n {
            return fail(format!("pilz_size([{n}], {n}) = {size}"));
        }
    }
    pass("oplus, S_4, singletons and [n] for n <= 30")
}

fn certificates() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for trial in 0..200 {
        let n = rng.random_range(1..=64u64);
        let k = rng.random_range(1..=5usize);
        let a: Vec<u64> = (0..k).map(|_| rng.random_range(1..=50)).collect();
        let inst = if trial % 2 == 1 {
            let size = 2 * rng.random_range(0..=2usize) + 1;
            let mut v = std::collections::BTreeSet::new();
            while v.len() < size {
                v.insert(rng.random_range(0..100u64));
            }
            Instance::with_v(n, a.clone(), IntSet::new(v))?
        } else {
            Instance::new(n, a.clone())?
        };
        let cert = theorem::make_certificate(&inst)?;
        if let Err(e) = theorem::verify_certificate(&inst, &cert) {
            return fail(format!("n={n} a={a:?} V={}: {e}", inst.v()));
        }
        let need = 1usize << cert.alpha;
        if cert.residues.iter().any(|c| c.exponents.len() < need) || cert.total < n {
            return fail(format!("n={n} a={a:?}: short certificate"));
        }
        let back = theorem::Certificate::from_json(&cert.to_json())?;
        if back != cert {
            return fail(format!("n={n} a={a:?}: JSON round-trip changed the certificate"));
        }
    }
    pass("200 instances")
}

fn lemmas() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut done = 0;
    while done < 100 {
        let n = rng.random_range(1..=200u64);
        let k = rng.random_range(1..=4usize);
        let a: Vec<u64> = (0..k).map(|_| rng.random_range(1..=100)).collect();
        if theorem::gcd_all(&a) != 1 {
            continue;
        }
        let (_, t) = theorem::split_n(n)?;
        let counts = theorem::residue_counts(&Instance::new(n, a.clone())?)?;
        let want = (t as u128).pow(k as u32 - 1);
        if counts.iter().any(|&c| c != want) {
            return fail(format!("F not constant for n={n} a={a:?}"));
        }
        done += 1;
    }

    for _ in 0..1000 {
        let alpha = rng.random_range(0..=40u32);
        let k = rng.random_range(1..=6usize);
        let a: Vec<u64> = (0..k).map(|_| rng.random_range(1..=1u64 << 40)).collect();
        let j = theorem::exponent_j(alpha, &a)?;
        if (j.len() as u32) < alpha {
            return fail(format!("|J| = {} < alpha = {alpha} for a={a:?}", j.len()));
        }
    }

    let bound = 1u64 << 12;
    let mut masks = 0;
    for mask in 0u32..1 << 12 {
        if mask.count_ones() > 6 {
            continue;
        }
        let j: Vec<u32> = (0..12).filter(|b| mask >> b & 1 == 1).collect();
        let s = tiling::subset_sums(&j)?;
        let r = tiling::tiling_complement(&j, bound);
        let mut hits = vec![0u8; bound as usize];
        for sv in s.iter() {
            for rv in r.iter() {
                if sv + rv < bound {
                    hits[(sv + rv) as usize] += 1;
                }
            }
        }
        if let Some(m) = hits.iter().position(|&h| h != 1) {
            return fail(format!("J={j:?}: m={m} has {} representations", hits[m]));
        }
        // Every translate m + S meets each colour class exactly once.
        let mut seen = vec![u64::MAX; 1 << 12];
        for m in 0..bound {
            let fresh = s.iter().all(|sv| {
                let c = tiling::color_of(m + sv, &j) as usize;
                std::mem::replace(&mut seen[c], m) != m
            });
            if !fresh {
                return fail(format!("J={j:?}: translate {m} + S repeats a colour"));
            }
        }
        masks += 1;
    }
    pass(format!("100 residue tables, 1000 J draws, {masks} tilings"))
}

fn scan() -> Result<Outcome> {
    for n in 1..=8u64 {
        let out = pilz::scan(&ScanConfig::new(n, 10, 10))?;
        let sum = &out.summary;
        if sum.min_size != Some(n as usize) {
            return fail(format!("n={n}: min {:?}", sum.min_size));
        }
        if !sum.violations.is_empty() {
            return fail(format!("n={n}: {} violations", sum.violations.len()));
        }
        let has_singletons = (1..=10).all(|c| sum.argmin.contains(&IntSet::new([c])));
        if !has_singletons || !sum.argmin.contains(&IntSet::interval(1, n)) {
            return fail(format!("n={n}: argmin misses a singleton or [n]"));
        }
    }
    pass("n = 1..8 over subsets of [1,10]")
}

fn cubes() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for r in 1..=3usize {
        for _ in 0..1000 {
            let size = rng.random_range(1..=8usize);
            let pts: Vec<Vec<i64>> =
                (0..size).map(|_| (0..r).map(|_| rng.random_range(0..8)).collect()).collect();
            let a = GridSet::new(r, pts)?;
            let rep = pilz::cube_check(r, &a, 3)?;
            if !rep.pass {
                return fail(format!("r={r} A={a}: size {}", rep.size));
            }
        }
    }
    pass("3000 random sets")
}

fn random_poly(rng: &mut ChaCha8Rng, degree: u64) -> Gf2Poly {
    let words = (degree / 64 + 1) as usize;
    let mut w: Vec<u64> = (0..words).map(|_| rng.random()).collect();
    let top = degree % 64;
    let last = w.last_mut().unwrap();
    *last &= if top == 63 { u64::MAX } else { (1u64 << (top + 1)) - 1 };
    *last |= 1 << top;
    Gf2Poly::from_le_words(w)
}

fn performance() -> Result<Outcome> {
    let budget = Duration::from_secs(2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let degree = 1u64 << 20;
    let a = random_poly(&mut rng, degree);
    let b = random_poly(&mut rng, degree);
    let start = Instant::now();
    let c = a.mul_with(&b, Kernel::Dense)?;
    let elapsed = start.elapsed();
    if c.degree() != Some(2 * degree) {
        return fail(format!("product degree {:?}", c.degree()));
    }
    for d in [63u64, 200, 1000, 2047] {
        let x = random_poly(&mut rng, d);
        let y = random_poly(&mut rng, d);
        if x.mul_with(&y, Kernel::Dense)? != x.mul_with(&y, Kernel::Sparse)? {
            return fail(format!("dense and sparse disagree at degree {d}"));
        }
    }
    let detail = format!("{:.3}s for degree 2^20 (budget {}s)", elapsed.as_secs_f64(), budget.as_secs());
    if elapsed < budget {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("exhaustive sumset sweep", sweep),
        ("worked examples", examples),
        ("certificate round-trip", certificates),
        ("lemma suites", lemmas),
        ("subset scan", scan),
        ("2-cube", cubes),
        ("dense multiply budget", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
