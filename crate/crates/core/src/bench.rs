//! Comparison harness: population-materializing sampling versus the
//! streaming samplers, at desk scale, with wall-time and allocation
//! measurements written as CSV plus one SVG figure per scenario.
//!
//! Four scenarios (unweighted/weighted x with/without replacement) each
//! run up to four strategies over one shared integer generator:
//!
//! * `population` — collect the stream into memory, then sample it the
//!   conventional way.
//! * `reservoir` — the scenario's default reservoir method, single pass,
//!   no prior knowledge of the total.
//! * `sequential_one_pass` — the scenario's sequential method with the
//!   total known up front.
//! * `sequential_two_pass` — a first traversal to compute the total,
//!   then the same sequential sampling pass.
//!
//! Weighted sampling without replacement has no sequential method, so
//! that scenario benches only the first two strategies.
//!
//! Memory is the instrumented allocator's peak during the strategy run,
//! not process RSS; binaries must install [`alloc::CountingAllocator`] as
//! the global allocator or the suite refuses to run. Timings are medians
//! over the configured repetitions and exclude generator setup.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::method::{ReservoirMethod, SequentialMethod};
use crate::reservoir::ReservoirSampler;
use crate::rng::StreamRng;
use crate::sequential::{SequentialSampler, WeightedSequentialSampler};

/// Allocation counting for the bench harness.
pub mod alloc {
    use std::alloc::{GlobalAlloc, Layout, System};
    use std::sync::atomic::{AtomicUsize, Ordering};

    static CURRENT: AtomicUsize = AtomicUsize::new(0);
    static PEAK: AtomicUsize = AtomicUsize::new(0);

    /// System allocator wrapper that tracks live and peak bytes.
    ///
    /// Install with `#[global_allocator]` in the binary that runs the
    /// bench suite.
    pub struct CountingAllocator;

    fn add(size: usize) {
        let now = CURRENT.fetch_add(size, Ordering::Relaxed) + size;
        PEAK.fetch_max(now, Ordering::Relaxed);
    }

    fn sub(size: usize) {
        CURRENT.fetch_sub(size, Ordering::Relaxed);
    }

    unsafe impl GlobalAlloc for CountingAllocator {
        unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
            let ptr = unsafe { System.alloc(layout) };
            if !ptr.is_null() {
                add(layout.size());
            }
            ptr
        }

        unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
            let ptr = unsafe { System.alloc_zeroed(layout) };
            if !ptr.is_null() {
                add(layout.size());
            }
            ptr
        }

        unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
            unsafe { System.dealloc(ptr, layout) };
            sub(layout.size());
        }

        unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
            let new_ptr = unsafe { System.realloc(ptr, layout, new_size) };
            if !new_ptr.is_null() {
                sub(layout.size());
                add(new_size);
            }
            new_ptr
        }
    }

    pub fn current_bytes() -> u64 {
        CURRENT.load(Ordering::Relaxed) as u64
    }

    pub fn peak_bytes() -> u64 {
        PEAK.load(Ordering::Relaxed) as u64
    }

    /// Forget the historical peak; it restarts from the live count.
    pub fn reset_peak() {
        PEAK.store(CURRENT.load(Ordering::Relaxed), Ordering::Relaxed);
    }

    /// Whether the counting allocator is actually installed.
    pub fn counting_active() -> bool {
        let before = current_bytes();
        let probe = std::hint::black_box(vec![0u8; 4096]);
        let during = current_bytes();
        drop(probe);
        during >= before + 4096
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("allocation counting is inactive; install bench::alloc::CountingAllocator as the global allocator")]
    CountersInactive,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    UnweightedWithout,
    UnweightedWith,
    WeightedWithout,
    WeightedWith,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::UnweightedWithout,
        Scenario::UnweightedWith,
        Scenario::WeightedWithout,
        Scenario::WeightedWith,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::UnweightedWithout => "unweighted_without",
            Scenario::UnweightedWith => "unweighted_with",
            Scenario::WeightedWithout => "weighted_without",
            Scenario::WeightedWith => "weighted_with",
        }
    }

    fn has_sequential(self) -> bool {
        self != Scenario::WeightedWithout
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Population,
    Reservoir,
    SequentialOnePass,
    SequentialTwoPass,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Population,
        Strategy::Reservoir,
        Strategy::SequentialOnePass,
        Strategy::SequentialTwoPass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Population => "population",
            Strategy::Reservoir => "reservoir",
            Strategy::SequentialOnePass => "sequential_one_pass",
            Strategy::SequentialTwoPass => "sequential_two_pass",
        }
    }
}

/// One measured (scenario, strategy, K) cell.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub scenario: Scenario,
    pub strategy: Strategy,
    pub n: u64,
    pub k: u64,
    pub reps: u32,
    pub median_ms: f64,
    pub peak_mem_bytes: u64,
}

/// Sample sizes 0.01% to 10% of the stream.
pub fn default_k_grid(n: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = [n / 10_000, n / 1_000, n / 100, n / 10]
        .into_iter()
        .map(|k| k.max(1))
        .collect();
    grid.dedup();
    grid
}

// All strategies consume this generator. Elements pass through a cheap
// integer mixer under black_box, so traversals cost honest per-element
// work: length shortcuts, vectorization and loop elision would otherwise
// make a counting pass nearly free and the pass-count comparison
// meaningless.
fn generator(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).map(|i| std::hint::black_box(i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11))
}

fn item_weight(i: u64) -> f64 {
    ((i.wrapping_mul(0xD129_0D3A_83E7_9297) >> 33) % 1_000 + 1) as f64
}

fn weighted_generator(n: u64) -> impl Iterator<Item = (u64, f64)> {
    generator(n).map(|i| (i, item_weight(i)))
}

fn checksum(acc: u64, item: u64) -> u64 {
    acc.wrapping_mul(31).wrapping_add(item)
}

// Population strategies: materialize, then sample conventionally.

fn population_unweighted_without(n: u64, k: u64, seed: u64) -> u64 {
    let mut data: Vec<u64> = generator(n).collect();
    let mut rng = StreamRng::new(seed);
    let mut acc = 0u64;
    for i in 0..k as usize {
        let j = i + rng.index(data.len() - i);
        data.swap(i, j);
        acc = checksum(acc, data[i]);
    }
    acc
}

fn population_unweighted_with(n: u64, k: u64, seed: u64) -> u64 {
    let data: Vec<u64> = generator(n).collect();
    let mut rng = StreamRng::new(seed);
    (0..k).fold(0u64, |acc, _| checksum(acc, data[rng.index(data.len())]))
}

fn population_weighted_without(n: u64, k: u64, seed: u64) -> u64 {
    // Priority keys over the materialized population, then select the
    // K largest.
    let mut rng = StreamRng::new(seed);
    let mut keyed: Vec<(f64, u64)> = weighted_generator(n)
        .map(|(item, w)| ((rng.uniform01().ln() / w), item))
        .collect();
    let kth = keyed.len() - k as usize;
    keyed.select_nth_unstable_by(kth, |a, b| a.0.partial_cmp(&b.0).unwrap());
    keyed[kth..].iter().fold(0u64, |acc, &(_, item)| checksum(acc, item))
}

fn population_weighted_with(n: u64, k: u64, seed: u64) -> u64 {
    let data: Vec<u64> = generator(n).collect();
    let mut cumulative: Vec<f64> = Vec::with_capacity(data.len());
    let mut total = 0.0;
    for &item in &data {
        total += item_weight(item);
        cumulative.push(total);
    }
    let mut rng = StreamRng::new(seed);
    (0..k).fold(0u64, |acc, _| {
        let target = rng.uniform01() * total;
        let idx = cumulative.partition_point(|&c| c < target);
        checksum(acc, data[idx.min(data.len() - 1)])
    })
}

// Reservoir strategies.

fn reservoir_unweighted(method: ReservoirMethod, n: u64, k: u64, seed: u64) -> u64 {
    let mut sampler = ReservoirSampler::new(method, k as usize, StreamRng::new(seed)).unwrap();
    for item in generator(n) {
        sampler.fit(item).unwrap();
    }
    sampler.value().items.into_iter().fold(0, checksum)
}

fn reservoir_weighted(method: ReservoirMethod, n: u64, k: u64, seed: u64) -> u64 {
    let mut sampler = ReservoirSampler::new(method, k as usize, StreamRng::new(seed)).unwrap();
    for (item, w) in weighted_generator(n) {
        sampler.fit_weighted(item, w).unwrap();
    }
    sampler.value().items.into_iter().fold(0, checksum)
}

// Sequential strategies; the sample is folded straight into a checksum,
// never collected.

fn sequential_unweighted(method: SequentialMethod, n: u64, k: u64, seed: u64) -> u64 {
    let sampler =
        SequentialSampler::new(method, k, n, generator(n), StreamRng::new(seed)).unwrap();
    sampler.fold(0u64, |acc, e| {
        let e = e.unwrap();
        checksum(acc.wrapping_add(e.multiplicity), e.item)
    })
}

fn sequential_weighted(total_weight: f64, n: u64, k: u64, seed: u64) -> u64 {
    let sampler = WeightedSequentialSampler::new(
        k,
        total_weight,
        weighted_generator(n),
        StreamRng::new(seed),
    )
    .unwrap();
    sampler.fold(0u64, |acc, e| {
        let e = e.unwrap();
        checksum(acc.wrapping_add(e.multiplicity), e.item)
    })
}

fn run_strategy(
    scenario: Scenario,
    strategy: Strategy,
    n: u64,
    k: u64,
    known_total_weight: f64,
    seed: u64,
) -> u64 {
    use Scenario::*;
    use Strategy::*;
    match (scenario, strategy) {
        (UnweightedWithout, Population) => population_unweighted_without(n, k, seed),
        (UnweightedWith, Population) => population_unweighted_with(n, k, seed),
        (WeightedWithout, Population) => population_weighted_without(n, k, seed),
        (WeightedWith, Population) => population_weighted_with(n, k, seed),
        (UnweightedWithout, Reservoir) => {
            reservoir_unweighted(ReservoirMethod::AlgL, n, k, seed)
        }
        (UnweightedWith, Reservoir) => {
            reservoir_unweighted(ReservoirMethod::AlgRswrSkip, n, k, seed)
        }
        (WeightedWithout, Reservoir) => {
            reservoir_weighted(ReservoirMethod::AlgAExpJ, n, k, seed)
        }
        (WeightedWith, Reservoir) => {
            reservoir_weighted(ReservoirMethod::AlgWrswrSkip, n, k, seed)
        }
        (UnweightedWithout, SequentialOnePass) => {
            sequential_unweighted(SequentialMethod::AlgD, n, k, seed)
        }
        (UnweightedWith, SequentialOnePass) => {
            sequential_unweighted(SequentialMethod::AlgOrdSwr, n, k, seed)
        }
        (WeightedWith, SequentialOnePass) => sequential_weighted(known_total_weight, n, k, seed),
        (UnweightedWithout, SequentialTwoPass) => {
            let counted = generator(n).count() as u64;
            sequential_unweighted(SequentialMethod::AlgD, counted, k, seed)
        }
        (UnweightedWith, SequentialTwoPass) => {
            let counted = generator(n).count() as u64;
            sequential_unweighted(SequentialMethod::AlgOrdSwr, counted, k, seed)
        }
        (WeightedWith, SequentialTwoPass) => {
            let total: f64 = weighted_generator(n).map(|(_, w)| w).sum();
            sequential_weighted(total, n, k, seed)
        }
        (WeightedWithout, SequentialOnePass | SequentialTwoPass) => {
            unreachable!("no sequential method for weighted sampling without replacement")
        }
    }
}

/// Run the full suite and write `results.csv` plus one
/// `fig_iter_<scenario>.svg` per scenario into `out_dir`.
pub fn run_suite(
    n: u64,
    k_grid: &[u64],
    reps: u32,
    out_dir: &Path,
) -> Result<Vec<BenchRecord>, BenchError> {
    if !alloc::counting_active() {
        return Err(BenchError::CountersInactive);
    }
    assert!(reps >= 1, "need at least one repetition");
    assert!(
        k_grid.iter().all(|&k| k >= 1 && k.saturating_mul(10) <= n),
        "sample sizes must satisfy 10*K <= N"
    );

    // Setup excluded from timing: the weighted one-pass strategy's
    // premise is a total known in advance.
    let known_total_weight: f64 = weighted_generator(n).map(|(_, w)| w).sum();

    let mut records = Vec::new();
    let mut sink = 0u64;
    for scenario in Scenario::ALL {
        for strategy in Strategy::ALL {
            if matches!(strategy, Strategy::SequentialOnePass | Strategy::SequentialTwoPass)
                && !scenario.has_sequential()
            {
                continue;
            }
            for &k in k_grid {
                let mut times_ms = Vec::with_capacity(reps as usize);
                let mut peak = 0u64;
                for rep in 0..reps {
                    let seed = ((k << 8) ^ (rep as u64 + 1)).wrapping_mul(0x5851_F42D_4C95_7F2D);
                    let base = alloc::current_bytes();
                    alloc::reset_peak();
                    let started = Instant::now();
                    sink = sink.wrapping_add(run_strategy(
                        scenario,
                        strategy,
                        n,
                        k,
                        known_total_weight,
                        seed,
                    ));
                    times_ms.push(started.elapsed().as_secs_f64() * 1e3);
                    peak = peak.max(alloc::peak_bytes().saturating_sub(base));
                }
                times_ms.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let median_ms = times_ms[times_ms.len() / 2];
                records.push(BenchRecord {
                    scenario,
                    strategy,
                    n,
                    k,
                    reps,
                    median_ms,
                    peak_mem_bytes: peak,
                });
            }
        }
    }
    std::hint::black_box(sink);

    std::fs::create_dir_all(out_dir)?;
    write_csv(&records, &out_dir.join("results.csv"))?;
    for scenario in Scenario::ALL {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.scenario == scenario).collect();
        write_svg(
            &rows,
            scenario,
            &out_dir.join(format!("fig_iter_{}.svg", scenario.name())),
        )?;
    }
    Ok(records)
}

fn write_csv(records: &[BenchRecord], path: &Path) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "scenario,strategy,n,k,reps,median_ms,peak_mem_bytes")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{:.3},{}",
            r.scenario.name(),
            r.strategy.name(),
            r.n,
            r.k,
            r.reps,
            r.median_ms,
            r.peak_mem_bytes
        )?;
    }
    Ok(())
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 52.0;

const STRATEGY_COLORS: [(&str, Strategy); 4] = [
    ("#d62728", Strategy::Population),
    ("#1f77b4", Strategy::Reservoir),
    ("#2ca02c", Strategy::SequentialOnePass),
    ("#9467bd", Strategy::SequentialTwoPass),
];

/// Two log-log panels per scenario: median time and peak allocation
/// against K. Series that never allocate are left off the memory panel.
fn write_svg(rows: &[&BenchRecord], scenario: Scenario, path: &Path) -> std::io::Result<()> {
    let width = 2.0 * (PANEL_W + MARGIN) + MARGIN;
    let height = PANEL_H + 2.0 * MARGIN + 30.0;
    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = write!(
        svg,
        r#"<text x="{}" y="18" font-size="14" text-anchor="middle">{}</text>"#,
        width / 2.0,
        scenario.name().replace('_', " ")
    );

    for (panel, title) in [(0usize, "median time (ms)"), (1, "peak allocation (bytes)")] {
        let x0 = MARGIN + panel as f64 * (PANEL_W + MARGIN);
        let y0 = MARGIN;
        let value = |r: &BenchRecord| -> Option<f64> {
            match panel {
                0 => Some(r.median_ms.max(1e-6)),
                _ => (r.peak_mem_bytes > 0).then_some(r.peak_mem_bytes as f64),
            }
        };
        let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
        let vals: Vec<f64> = rows.iter().filter_map(|r| value(r)).collect();
        if ks.is_empty() || vals.is_empty() {
            continue;
        }
        let (kmin, kmax) = (
            ks.iter().cloned().fold(f64::MAX, f64::min).log10(),
            ks.iter().cloned().fold(f64::MIN, f64::max).log10(),
        );
        let (vmin, vmax) = (
            vals.iter().cloned().fold(f64::MAX, f64::min).log10() - 0.1,
            vals.iter().cloned().fold(f64::MIN, f64::max).log10() + 0.1,
        );
        let map_x = |k: f64| x0 + (k.log10() - kmin) / (kmax - kmin).max(1e-9) * PANEL_W;
        let map_y = |v: f64| y0 + PANEL_H - (v.log10() - vmin) / (vmax - vmin).max(1e-9) * PANEL_H;

        let _ = write!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#333"/>"##
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            x0 + PANEL_W / 2.0,
            y0 - 8.0,
            title
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">sample size K</text>"#,
            x0 + PANEL_W / 2.0,
            y0 + PANEL_H + 32.0
        );
        // x ticks at the K grid, y ticks at whole powers of ten.
        let mut seen = std::collections::BTreeSet::new();
        for r in rows.iter() {
            if seen.insert(r.k) {
                let x = map_x(r.k as f64);
                let _ = write!(
                    svg,
                    r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#999"/><text x="{x}" y="{}" text-anchor="middle">{}</text>"##,
                    y0 + PANEL_H,
                    y0 + PANEL_H + 4.0,
                    y0 + PANEL_H + 16.0,
                    r.k
                );
            }
        }
        let mut p = vmin.ceil() as i64;
        while (p as f64) < vmax {
            let y = map_y(10f64.powi(p as i32));
            let _ = write!(
                svg,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">1e{p}</text>"##,
                x0,
                x0 + PANEL_W,
                x0 - 4.0,
                y + 4.0
            );
            p += 1;
        }

        for (color, strategy) in STRATEGY_COLORS {
            let series: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.strategy == strategy)
                .filter_map(|r| value(r).map(|v| (map_x(r.k as f64), map_y(v))))
                .collect();
            if series.is_empty() {
                continue;
            }
            let points: Vec<String> = series.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
            let _ = write!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                points.join(" ")
            );
            for (x, y) in &series {
                let _ = write!(svg, r#"<circle cx="{x:.1}" cy="{y:.1}" r="2.5" fill="{color}"/>"#);
            }
        }
    }

    // Legend along the bottom.
    let mut lx = MARGIN;
    let ly = height - 10.0;
    for (color, strategy) in STRATEGY_COLORS {
        if rows.iter().any(|r| r.strategy == strategy) {
            let _ = write!(
                svg,
                r#"<rect x="{lx}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{ly}">{}</text>"#,
                ly - 9.0,
                lx + 14.0,
                strategy.name()
            );
            lx += 150.0;
        }
    }
    let _ = write!(svg, "</svg>");
    std::fs::write(path, svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_grid_spans_four_decades() {
        assert_eq!(
            default_k_grid(10_000_000),
            vec![1_000, 10_000, 100_000, 1_000_000]
        );
        assert_eq!(default_k_grid(10_000), vec![1, 10, 100, 1_000]);
    }

    #[test]
    fn suite_writes_deterministic_report_structure() {
        let dir = tempfile::tempdir().unwrap();
        let records = run_suite(200_000, &[20, 200], 2, dir.path()).unwrap();
        // 4 scenarios x (4 strategies, minus 2 for weighted_without) x 2 Ks.
        assert_eq!(records.len(), (4 * 4 - 2) * 2);

        let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario,strategy,n,k,reps,median_ms,peak_mem_bytes"
        );
        assert_eq!(lines.count(), records.len());
        for scenario in Scenario::ALL {
            let fig = dir.path().join(format!("fig_iter_{}.svg", scenario.name()));
            let svg = std::fs::read_to_string(fig).unwrap();
            assert!(svg.starts_with("<svg"));
            assert!(svg.contains("median time"));
        }

        // The structural memory claim at small scale: materializing
        // dominates the reservoir's K-slot footprint.
        for scenario in Scenario::ALL {
            let peak_of = |strategy: Strategy| {
                records
                    .iter()
                    .find(|r| r.scenario == scenario && r.strategy == strategy && r.k == 20)
                    .map(|r| r.peak_mem_bytes)
                    .unwrap()
            };
            assert!(
                peak_of(Strategy::Population) >= 5 * peak_of(Strategy::Reservoir).max(1),
                "{}: population {} vs reservoir {}",
                scenario.name(),
                peak_of(Strategy::Population),
                peak_of(Strategy::Reservoir)
            );
        }
    }
}
