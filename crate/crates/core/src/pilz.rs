//! Symmetric differences of dilations `A Δ 2A Δ … Δ nA`, the exponent-vector
//! embedding of `{1, …, n}` into `Z^{π(n)}`, and exhaustive scans over small
//! sets `A`.
//!
//! The conjectured bound `|A Δ 2A Δ … Δ nA| >= n` is open in general; a scan
//! reports any set that falls below it instead of assuming none exists.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle;
use crate::setops::{dilate, nabla, oplus_grid, require_positive, symdiff, GridSet, IntSet};

/// Default cap on the number of subsets a scan may enumerate.
pub const DEFAULT_SCAN_BUDGET: u64 = 1 << 24;

/// Exponent used in the `n / (ln n)^λ` comparison value.
pub const LAMBDA: f64 = 0.2223;

/// Primes `<= n`, ascending.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Valuations of `k` at each prime of a fixed list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    /// `∏ p_i^{α_i}`, `None` on overflow.
    pub fn value(&self, primes: &[u64]) -> Option<u64> {
        self.0.iter().zip(primes).try_fold(1u64, |acc, (&e, &p)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn to_point(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }
}

/// Factors `k` over `primes`; fails if a prime factor is missing from the list.
pub fn exponent_vector(k: u64, primes: &[u64]) -> Result<ExponentVector> {
    if k == 0 {
        return Err(Error::InvalidArgument("0 has no exponent vector".into()));
    }
    let mut rest = k;
    let coords = primes
        .iter()
        .map(|&p| {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            e
        })
        .collect();
    if rest != 1 {
        return Err(Error::InvalidArgument(format!(
            "{k} has prime factor {rest} outside the given primes"
        )));
    }
    Ok(ExponentVector(coords))
}

/// `S_n = {v_1, …, v_n} ⊆ Z^{π(n)}`. For `n = 1` the dimension is 0 and the
/// set holds the single empty tuple.
pub fn build_sn(n: u64) -> Result<GridSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let primes = primes_upto(n);
    let points = (1..=n)
        .map(|k| exponent_vector(k, &primes).map(|v| v.to_point()))
        .collect::<Result<Vec<_>>>()?;
    GridSet::new(primes.len(), points)
}

/// `|A Δ 2A Δ … Δ nA|`.
pub fn pilz_size(a: &IntSet, n: u64) -> Result<usize> {
    check_pilz_input(a, n)?;
    let dilations = (1..=n).map(|i| dilate(a, i)).collect::<Result<Vec<_>>>()?;
    Ok(symdiff(&dilations).len())
}

/// `|A ∇ [n]|` through the productset operator.
pub fn pilz_size_nabla(a: &IntSet, n: u64) -> Result<usize> {
    check_pilz_input(a, n)?;
    Ok(nabla(a, &IntSet::interval(1, n))?.len())
}

/// `|S_n ⊕ {v_a : a ∈ A}|` in `Z^{π(n)}`. Defined only when every prime
/// factor of every `a` is at most `n`.
pub fn pilz_size_grid(a: &IntSet, n: u64) -> Result<usize> {
    check_pilz_input(a, n)?;
    let primes = primes_upto(n);
    let points = a
        .iter()
        .map(|x| exponent_vector(x, &primes).map(|v| v.to_point()))
        .collect::<Result<Vec<_>>>()?;
    let av = GridSet::new(primes.len(), points)?;
    Ok(oplus_grid(&build_sn(n)?, &av)?.len())
}

fn check_pilz_input(a: &IntSet, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("A must be nonempty".into()));
    }
    require_positive(a)
}

/// `n / (ln n)^0.2223`, a comparison value only.
pub fn lower_bound_display(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("comparison value needs n >= 2".into()));
    }
    let n = n as f64;
    Ok(n / n.ln().powf(LAMBDA))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubeReport {
    pub size: usize,
    pub pass: bool,
}

/// Checks `|{0,1}^r ⊕ A| >= 2^r`.
pub fn cube_check(r: usize, a: &GridSet, max_dim: usize) -> Result<CubeReport> {
    if r == 0 || r > max_dim {
        return Err(Error::InvalidArgument(format!("cube dimension must be in 1..={max_dim}, got {r}")));
    }
    if a.dim() != r {
        return Err(Error::DimensionMismatch { expected: r, found: a.dim() });
    }
    let size = oplus_grid(&GridSet::cube(r), a)?.len();
    Ok(CubeReport { size, pass: size >= 1 << r })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub n: u64,
    pub set: IntSet,
    pub delta_size: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub n: u64,
    pub universe_max: u64,
    pub max_size: usize,
    pub scanned: u64,
    pub min_size: Option<usize>,
    /// Sets attaining `min_size`, in enumeration order.
    pub argmin: Vec<IntSet>,
    pub violations: Vec<IntSet>,
    /// Set to resume from if the scan stopped at `limit`.
    pub next: Option<IntSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// Parameters for [`scan`].
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub n: u64,
    pub universe_max: u64,
    pub max_size: usize,
    /// Refuse to start when the full range holds more subsets than this.
    pub budget: u64,
    /// Start at this set (inclusive) instead of `{1}`.
    pub resume_from: Option<IntSet>,
    /// Stop after this many subsets; `next` in the summary then points past
    /// the last one processed.
    pub limit: Option<u64>,
}

impl ScanConfig {
    pub fn new(n: u64, universe_max: u64, max_size: usize) -> Self {
        ScanConfig { n, universe_max, max_size, budget: DEFAULT_SCAN_BUDGET, resume_from: None, limit: None }
    }
}

/// Number of nonempty subsets of `[1, u]` with at most `s` elements, `None`
/// if it exceeds `u64`.
pub fn count_subsets(u: u64, s: usize) -> Option<u64> {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 1..=(s as u64).min(u) {
        binom = binom * (u - j + 1) as u128 / j as u128;
        total = total.checked_add(binom)?;
        if total > u64::MAX as u128 {
            return None;
        }
    }
    Some(total as u64)
}

/// Nonempty subsets of `[1, u]` with at most `s` elements, in lexicographic
/// order of their ascending element lists: `{1}, {1,2}, {1,2,3}, …, {1,3}, …`.
#[derive(Debug, Clone)]
pub struct SubsetCursor {
    universe_max: u64,
    max_size: usize,
    current: Option<Vec<u64>>,
}

impl SubsetCursor {
    pub fn new(universe_max: u64, max_size: usize) -> Self {
        let current = (universe_max >= 1 && max_size >= 1).then(|| vec![1]);
        SubsetCursor { universe_max, max_size, current }
    }

    /// Positions the cursor so the next item is `start`.
    pub fn starting_at(universe_max: u64, max_size: usize, start: &IntSet) -> Result<Self> {
        let s = start.as_slice();
        if s.is_empty() || s.len() > max_size || s[0] == 0 || *s.last().unwrap() > universe_max {
            return Err(Error::InvalidArgument(format!(
                "resume set {{{start}}} is outside the scan range"
            )));
        }
        Ok(SubsetCursor { universe_max, max_size, current: Some(s.to_vec()) })
    }
}

impl Iterator for SubsetCursor {
    type Item = IntSet;

    fn next(&mut self) -> Option<IntSet> {
        let cur = self.current.take()?;
        let out = IntSet::from_sorted(cur.clone());
        let mut next = cur;
        let last = *next.last().unwrap();
        if next.len() < self.max_size && last < self.universe_max {
            next.push(last + 1);
            self.current = Some(next);
        } else {
            // drop the tail until some element can be incremented
            while let Some(x) = next.pop() {
                if x < self.universe_max {
                    next.push(x + 1);
                    self.current = Some(next);
                    break;
                }
            }
        }
        Some(out)
    }
}

/// Evaluates `|A Δ 2A Δ … Δ nA|` for every set of the configured range.
///
/// Records come back in enumeration order regardless of how the work was
/// split across threads.
pub fn scan(cfg: &ScanConfig) -> Result<ScanResult> {
    if cfg.n == 0 || cfg.universe_max == 0 || cfg.max_size == 0 {
        return Err(Error::InvalidArgument("scan bounds must be positive".into()));
    }
    let total = count_subsets(cfg.universe_max, cfg.max_size);
    match total {
        Some(t) if t <= cfg.budget => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{} subsets of [1,{}] with at most {} elements exceed the budget of {}",
                total.map_or("over 2^64".to_string(), |t| t.to_string()),
                cfg.universe_max,
                cfg.max_size,
                cfg.budget
            )));
        }
    }
    let mut cursor = match &cfg.resume_from {
        Some(s) => SubsetCursor::starting_at(cfg.universe_max, cfg.max_size, s)?,
        None => SubsetCursor::new(cfg.universe_max, cfg.max_size),
    };

    const CHUNK: usize = 4096;
    let limit = cfg.limit.unwrap_or(u64::MAX);
    let mut records = Vec::new();
    let mut scanned = 0u64;
    loop {
        let take = (limit - scanned).min(CHUNK as u64) as usize;
        let chunk: Vec<IntSet> = cursor.by_ref().take(take).collect();
        if chunk.is_empty() {
            break;
        }
        scanned += chunk.len() as u64;
        let evaluated = chunk
            .into_par_iter()
            .map(|set| {
                let delta_size = pilz_size(&set, cfg.n)?;
                Ok(ScanRecord { n: cfg.n, set, delta_size, pass: delta_size as u64 >= cfg.n })
            })
            .collect::<Result<Vec<_>>>()?;
        records.extend(evaluated);
        if scanned >= limit {
            break;
        }
    }

    let min_size = records.iter().map(|r| r.delta_size).min();
    let argmin = records
        .iter()
        .filter(|r| Some(r.delta_size) == min_size)
        .map(|r| r.set.clone())
        .collect();
    let violations = records.iter().filter(|r| !r.pass).map(|r| r.set.clone()).collect();
    let summary = ScanSummary {
        n: cfg.n,
        universe_max: cfg.universe_max,
        max_size: cfg.max_size,
        scanned,
        min_size,
        argmin,
        violations,
        next: cursor.next(),
    };
    Ok(ScanResult { records, summary })
}

/// Writes records as CSV with header `n,set,delta_size,pass`.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "set", "delta_size", "pass"]).map_err(io)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.set.to_string(),
            r.delta_size.to_string(),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("writing CSV: {e}")))?;
    Ok(())
}

/// Cross-checks [`pilz_size`] against the counting oracle; used by the CLI
/// `--oracle` flag.
pub fn pilz_size_oracle(a: &IntSet, n: u64) -> Result<usize> {
    check_pilz_input(a, n)?;
    Ok(oracle::nabla(a, &IntSet::interval(1, n))?.len())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn s(v: &[u64]) -> IntSet {
        IntSet::new(v.iter().copied())
    }

    #[test]
    fn primes_examples() {
        assert!(primes_upto(1).is_empty());
        assert_eq!(primes_upto(4), vec![2, 3]);
        assert_eq!(primes_upto(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_upto(100).len(), 25);
    }

    #[test]
    fn exponent_vector_examples() {
        assert_eq!(exponent_vector(1, &[2, 3, 5]).unwrap(), ExponentVector(vec![0, 0, 0]));
        assert_eq!(exponent_vector(4, &[2, 3]).unwrap(), ExponentVector(vec![2, 0]));
        assert_eq!(exponent_vector(12, &[2, 3, 5, 7, 11]).unwrap(), ExponentVector(vec![2, 1, 0, 0, 0]));
        assert!(exponent_vector(14, &[2, 3, 5]).is_err());
        let primes = primes_upto(30);
        for k in 1..=30 {
            assert_eq!(exponent_vector(k, &primes).unwrap().value(&primes), Some(k));
        }
    }

    #[test]
    fn sn_examples() {
        let l_shape: GridSet = "(0,0),(1,0),(0,1),(2,0)".parse().unwrap();
        assert_eq!(build_sn(4).unwrap(), l_shape);
        let s1 = build_sn(1).unwrap();
        assert_eq!((s1.dim(), s1.len()), (0, 1));
        let s6: GridSet = "(0,0,0),(1,0,0),(0,1,0),(2,0,0),(0,0,1),(1,1,0)".parse().unwrap();
        assert_eq!(build_sn(6).unwrap(), s6);
    }

    #[test]
    fn pilz_size_examples() {
        for c in [1, 2, 7, 100] {
            assert_eq!(pilz_size(&s(&[c]), 9).unwrap(), 9);
        }
        assert_eq!(pilz_size(&s(&[1, 2, 3]), 3).unwrap(), 3);
        assert_eq!(pilz_size(&s(&[1, 2]), 2).unwrap(), 2);
        assert!(pilz_size(&IntSet::empty(), 2).is_err());
        assert!(pilz_size(&s(&[0, 1]), 2).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert!((lower_bound_display(2).unwrap() - 2.169774).abs() < 1e-6);
        assert!((lower_bound_display(100).unwrap() - 71.213197).abs() < 1e-5);
        assert!(lower_bound_display(100).unwrap() < 100.0);
        assert!(lower_bound_display(1).is_err());
    }

    #[test]
    fn cube_examples() {
        let r = cube_check(1, &"(0)".parse().unwrap(), 3).unwrap();
        assert_eq!((r.size, r.pass), (2, true));
        let r = cube_check(1, &"(0),(1)".parse().unwrap(), 3).unwrap();
        assert_eq!((r.size, r.pass), (2, true));
        assert!(matches!(
            cube_check(2, &"(0)".parse().unwrap(), 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(cube_check(4, &GridSet::cube(4), 3).is_err());
    }

    #[test]
    fn cursor_order_and_resume() {
        let all: Vec<String> = SubsetCursor::new(3, 3).map(|s| s.to_string()).collect();
        assert_eq!(all, ["1", "1,2", "1,2,3", "1,3", "2", "2,3", "3"]);
        let capped: Vec<String> = SubsetCursor::new(3, 1).map(|s| s.to_string()).collect();
        assert_eq!(capped, ["1", "2", "3"]);
        let resumed: Vec<String> =
            SubsetCursor::starting_at(3, 3, &s(&[1, 3])).unwrap().map(|s| s.to_string()).collect();
        assert_eq!(resumed, ["1,3", "2", "2,3", "3"]);
        for (u, m) in [(6, 6), (7, 3), (5, 1)] {
            assert_eq!(SubsetCursor::new(u, m).count() as u64, count_subsets(u, m).unwrap());
        }
    }

    #[test]
    fn scan_examples() {
        let res = scan(&ScanConfig::new(2, 3, 3)).unwrap();
        assert_eq!(res.records.len(), 7);
        assert_eq!(res.summary.min_size, Some(2));
        assert!(res.summary.violations.is_empty());
        assert_eq!(res.summary.argmin, vec![s(&[1]), s(&[1, 2]), s(&[2]), s(&[3])]);

        let res = scan(&ScanConfig::new(1, 5, 2)).unwrap();
        assert_eq!(res.summary.min_size, Some(1));

        let res = scan(&ScanConfig::new(8, 8, 8)).unwrap();
        assert_eq!(res.summary.min_size, Some(8));
        let argmin: Vec<String> = res.summary.argmin.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            argmin,
            ["1", "1,2", "1,2,3,4,5,6,7,8", "2", "2,4", "3", "3,6", "4", "4,8", "5", "6", "7", "8"]
        );
    }

    #[test]
    fn scan_budget_and_limit() {
        let mut cfg = ScanConfig::new(3, 20, 20);
        cfg.budget = 1000;
        assert!(matches!(scan(&cfg), Err(Error::BudgetExceeded(_))));

        let full = scan(&ScanConfig::new(4, 6, 4)).unwrap();
        let mut first = ScanConfig::new(4, 6, 4);
        first.limit = Some(10);
        let head = scan(&first).unwrap();
        let mut second = ScanConfig::new(4, 6, 4);
        second.resume_from = head.summary.next.clone();
        let tail = scan(&second).unwrap();
        let joined: Vec<_> = head.records.into_iter().chain(tail.records).collect();
        assert_eq!(joined, full.records);
        assert_eq!(tail.summary.next, None);
    }

    #[test]
    fn csv_layout() {
        let res = scan(&ScanConfig::new(2, 2, 2)).unwrap();
        let mut buf = Vec::new();
        write_csv(&res.records, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,set,delta_size,pass\n2,1,2,true\n2,\"1,2\",2,true\n2,2,2,true\n"
        );
    }

    #[test]
    fn singletons_and_intervals_are_extremal() {
        for n in 1..=50 {
            for c in [1, 2, 3, 10, 97] {
                assert_eq!(pilz_size(&s(&[c]), n).unwrap(), n as usize);
            }
        }
        for n in 1..=30 {
            assert_eq!(pilz_size(&IntSet::interval(1, n), n).unwrap(), n as usize);
        }
    }

    proptest! {
        #[test]
        fn three_routes_agree(a in prop::collection::btree_set(1u64..40, 1..6), n in 1u64..=12) {
            let a: IntSet = a.into_iter().collect();
            let direct = pilz_size(&a, n).unwrap();
            prop_assert_eq!(direct, pilz_size_nabla(&a, n).unwrap());
            prop_assert_eq!(direct, pilz_size_oracle(&a, n).unwrap());
        }

        #[test]
        fn grid_embedding_agrees(a in prop::collection::btree_set(1u64..=10, 1..5), n in 1u64..=10) {
            let a: IntSet = a.into_iter().filter(|&x| x <= n).collect();
            prop_assume!(!a.is_empty());
            prop_assert_eq!(pilz_size_grid(&a, n).unwrap(), pilz_size(&a, n).unwrap());
        }
    }
}
