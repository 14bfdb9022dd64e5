//! Whole-group scans checking that spectral sets and tiles coincide.
//!
//! Subsets are checked in fixed batches by independent workers. Partial
//! reports merge by addition and the violation list is sorted at the end,
//! so the rendered report does not depend on the number of threads.

pub mod lemmas;
pub mod orbits;
pub mod sampling;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{gcd, Group, GroupSpec, SubsetMask};
use crate::spectral::{find_spectrum, SpectralCertificate};
use crate::tiling::{find_complement, TilingCertificate};
use crate::Outcome;

pub use lemmas::{lemma_suite, lemma_suite_with, LemmaCheck, LemmaReport};
pub use orbits::{Symmetry, DEFAULT_SYMMETRY_CAP};

/// Largest order scanned subset by subset.
pub const DEFAULT_DIRECT_CAP: usize = 20;
/// Largest order scanned by orbit representatives.
pub const DEFAULT_ORBIT_CAP: usize = 28;

const EXHAUSTIVE_BATCH_BITS: u32 = 12;

/// `gcd(|G|, |S|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SizeClass(pub u64);

impl SizeClass {
    /// Name of the class in terms of `p` and `q`.
    pub fn label(&self, spec: &GroupSpec) -> &'static str {
        let (p, q) = (spec.p() as u64, spec.q() as u64);
        match self.0 {
            1 => "1",
            m if m == p => "p",
            m if m == q => "q",
            m if m == p * p => "p^2",
            m if m == p * q => "pq",
            _ => "p^2q",
        }
    }
}

pub fn size_class(card: usize, spec: &GroupSpec) -> SizeClass {
    debug_assert!((1..=spec.order()).contains(&card));
    SizeClass(gcd(spec.order() as u64, card as u64))
}

/// Subset counts by which of the two properties hold.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub spectral_and_tile: u64,
    pub spectral_only: u64,
    pub tile_only: u64,
    pub neither: u64,
}

impl Tally {
    fn record(&mut self, spectral: bool, tile: bool, weight: u64) {
        let slot = match (spectral, tile) {
            (true, true) => &mut self.spectral_and_tile,
            (true, false) => &mut self.spectral_only,
            (false, true) => &mut self.tile_only,
            (false, false) => &mut self.neither,
        };
        *slot += weight;
    }

    fn merge(&mut self, other: &Tally) {
        self.spectral_and_tile += other.spectral_and_tile;
        self.spectral_only += other.spectral_only;
        self.tile_only += other.tile_only;
        self.neither += other.neither;
    }

    pub fn total(&self) -> u64 {
        self.spectral_and_tile + self.spectral_only + self.tile_only + self.neither
    }

    pub fn violations(&self) -> u64 {
        self.spectral_only + self.tile_only
    }
}

/// A subset that is spectral but not a tile, or the reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subset: SubsetMask,
    pub spectrum: Outcome<SpectralCertificate>,
    pub complement: Outcome<TilingCertificate>,
    /// Number of subsets this one stands for.
    pub weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// Whether exhaustive scans use orbit representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitPolicy {
    /// Direct up to the direct cap, then orbits up to the orbit cap.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub size: Option<usize>,
    pub orbits: OrbitPolicy,
    pub direct_cap: usize,
    pub orbit_cap: usize,
    pub symmetry_cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl VerifyOptions {
    pub fn exhaustive() -> Self {
        VerifyOptions {
            mode: Mode::Exhaustive,
            size: None,
            orbits: OrbitPolicy::Auto,
            direct_cap: DEFAULT_DIRECT_CAP,
            orbit_cap: DEFAULT_ORBIT_CAP,
            symmetry_cap: DEFAULT_SYMMETRY_CAP,
            threads: None,
        }
    }

    pub fn sampled(seed: u64, trials: u64) -> Self {
        VerifyOptions {
            mode: Mode::Sampled { seed, trials },
            ..Self::exhaustive()
        }
    }

    pub fn with_size(mut self, size: Option<usize>) -> Self {
        self.size = size;
        self
    }

    pub fn with_orbits(mut self, orbits: OrbitPolicy) -> Self {
        self.orbits = orbits;
        self
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub group: GroupSpec,
    pub mode: Mode,
    pub size: Option<usize>,
    pub orbit_reduced: bool,
    pub classes: BTreeMap<SizeClass, Tally>,
    /// The empty set is neither spectral nor a tile and has no size class.
    pub empty_subsets: u64,
    /// Subsets accounted for, counting each orbit representative with its
    /// orbit size.
    pub subsets_examined: u64,
    /// Subjects on which the two searches actually ran.
    pub orbits_scanned: u64,
    pub spectrum_nodes: u64,
    pub complement_nodes: u64,
    pub violations: Vec<Violation>,
}

impl ConjectureReport {
    fn new(group: GroupSpec, options: &VerifyOptions, orbit_reduced: bool) -> Self {
        ConjectureReport {
            group,
            mode: options.mode,
            size: options.size,
            orbit_reduced,
            classes: BTreeMap::new(),
            empty_subsets: 0,
            subsets_examined: 0,
            orbits_scanned: 0,
            spectrum_nodes: 0,
            complement_nodes: 0,
            violations: Vec::new(),
        }
    }

    fn merge(mut self, other: ConjectureReport) -> Self {
        for (class, tally) in &other.classes {
            self.classes.entry(*class).or_default().merge(tally);
        }
        self.empty_subsets += other.empty_subsets;
        self.subsets_examined += other.subsets_examined;
        self.orbits_scanned += other.orbits_scanned;
        self.spectrum_nodes += other.spectrum_nodes;
        self.complement_nodes += other.complement_nodes;
        self.violations.extend(other.violations);
        self
    }

    /// Counts a nonempty subset `weight` times.
    fn record(
        &mut self,
        s: &SubsetMask,
        spectrum: Outcome<SpectralCertificate>,
        complement: Outcome<TilingCertificate>,
        weight: u64,
    ) {
        let (spectral, tile) = (spectrum.is_found(), complement.is_found());
        self.classes
            .entry(size_class(s.len(), &self.group))
            .or_default()
            .record(spectral, tile, weight);
        self.subsets_examined += weight;
        self.orbits_scanned += 1;
        self.spectrum_nodes += spectrum.explored();
        self.complement_nodes += complement.explored();
        if spectral != tile {
            self.violations.push(Violation {
                subset: *s,
                spectrum,
                complement,
                weight,
            });
        }
    }

    pub fn totals(&self) -> Tally {
        let mut t = Tally::default();
        for tally in self.classes.values() {
            t.merge(tally);
        }
        t
    }

    /// Subsets (weighted) where the two properties disagree.
    pub fn violation_count(&self) -> u64 {
        self.totals().violations()
    }

    pub fn render(&self) -> String {
        let spec = &self.group;
        let mut out = String::new();
        let _ = writeln!(out, "group: {spec}");
        let mode = match self.mode {
            Mode::Exhaustive if self.orbit_reduced => {
                "exhaustive (affine orbit representatives)".to_string()
            }
            Mode::Exhaustive => "exhaustive (every subset)".to_string(),
            Mode::Sampled { seed, trials } => format!("sampled (seed {seed}, {trials} trials)"),
        };
        let _ = writeln!(out, "mode: {mode}");
        match self.size {
            Some(k) => {
                let _ = writeln!(out, "size filter: {k}");
            }
            None => {
                let _ = writeln!(out, "size filter: none");
            }
        }
        let _ = writeln!(
            out,
            "subsets examined: {} ({} searched)",
            self.subsets_examined + self.empty_subsets,
            self.orbits_scanned
        );
        if self.empty_subsets > 0 {
            let _ = writeln!(out, "empty set: {} (neither)", self.empty_subsets);
        }
        let _ = writeln!(
            out,
            "{:<8} {:>4} {:>14} {:>14} {:>10} {:>10}",
            "class", "m", "spectral+tile", "spectral only", "tile only", "neither"
        );
        for (class, t) in &self.classes {
            let _ = writeln!(
                out,
                "{:<8} {:>4} {:>14} {:>14} {:>10} {:>10}",
                class.label(spec),
                class.0,
                t.spectral_and_tile,
                t.spectral_only,
                t.tile_only,
                t.neither
            );
        }
        let _ = writeln!(
            out,
            "search nodes: spectrum {}, complement {}",
            self.spectrum_nodes, self.complement_nodes
        );
        let _ = writeln!(out, "violations: {}", self.violation_count());
        for v in &self.violations {
            let indices: Vec<String> = v
                .subset
                .iter()
                .map(|i| spec.element(i).to_string())
                .collect();
            let _ = writeln!(
                out,
                "  {{{}}} spectral: {} ({} nodes), tile: {} ({} nodes), weight {}",
                indices.join(", "),
                yes_no(v.spectrum.is_found()),
                v.spectrum.explored(),
                yes_no(v.complement.is_found()),
                v.complement.explored(),
                v.weight
            );
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Spectrum and complement searches for one subset.
pub fn classify(
    group: &Group,
    s: &SubsetMask,
) -> (Outcome<SpectralCertificate>, Outcome<TilingCertificate>) {
    (find_spectrum(group, s), find_complement(group, s))
}

/// Per-subset callback invoked on every searched subject.
pub type Visitor<'a> =
    dyn Fn(&SubsetMask, &Outcome<SpectralCertificate>, &Outcome<TilingCertificate>) + Sync + 'a;

pub fn verify_conjecture(group: &Group, options: &VerifyOptions) -> Result<ConjectureReport> {
    verify_conjecture_with(group, options, &|_, _, _| {})
}

/// [`verify_conjecture`] with a callback on every subject searched.
pub fn verify_conjecture_with(
    group: &Group,
    options: &VerifyOptions,
    visit: &Visitor<'_>,
) -> Result<ConjectureReport> {
    let n = group.order();
    if let Some(k) = options.size {
        if k > n {
            return Err(Error::BadSize { size: k, order: n });
        }
    }
    let run = || match options.mode {
        Mode::Exhaustive => {
            let use_orbits = match options.orbits {
                OrbitPolicy::Never => false,
                OrbitPolicy::Always => true,
                OrbitPolicy::Auto => n > options.direct_cap,
            };
            let cap = if use_orbits {
                options.orbit_cap
            } else {
                options.direct_cap
            };
            if n > cap || n > 63 {
                return Err(Error::GroupTooLargeForExhaustive { order: n, cap });
            }
            if use_orbits {
                let sym = Symmetry::new(group, options.symmetry_cap)?;
                Ok(scan_orbits(group, &sym, options, visit))
            } else {
                Ok(scan_direct(group, options, visit))
            }
        }
        Mode::Sampled { seed, trials } => Ok(scan_sampled(group, options, seed, trials, visit)),
    };
    let mut report = match options.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(run)?,
        None => run()?,
    };
    report.violations.sort_by_key(|v| v.subset);
    Ok(report)
}

fn size_ok(options: &VerifyOptions, s: &SubsetMask) -> bool {
    options.size.is_none_or(|k| s.len() == k)
}

fn scan_direct(group: &Group, options: &VerifyOptions, visit: &Visitor<'_>) -> ConjectureReport {
    let n = group.order();
    let spec = *group.spec();
    let total: u64 = 1 << n;
    let batch = 1u64 << EXHAUSTIVE_BATCH_BITS.min(n as u32);
    (0..total / batch)
        .into_par_iter()
        .map(|b| {
            let mut part = ConjectureReport::new(spec, options, false);
            for bits in b * batch..(b + 1) * batch {
                let s = SubsetMask::from_bits(n, bits);
                if !size_ok(options, &s) {
                    continue;
                }
                if s.is_empty() {
                    part.empty_subsets += 1;
                    continue;
                }
                let (spectrum, complement) = classify(group, &s);
                visit(&s, &spectrum, &complement);
                part.record(&s, spectrum, complement, 1);
            }
            part
        })
        .reduce(
            || ConjectureReport::new(spec, options, false),
            ConjectureReport::merge,
        )
}

fn scan_orbits(
    group: &Group,
    sym: &Symmetry,
    options: &VerifyOptions,
    visit: &Visitor<'_>,
) -> ConjectureReport {
    let n = group.order();
    let spec = *group.spec();
    // canonical nonempty sets contain 0: bit 0 is fixed
    let total: u64 = 1 << (n - 1);
    let batch = 1u64 << EXHAUSTIVE_BATCH_BITS.min(n as u32 - 1);
    let mut report = (0..total / batch)
        .into_par_iter()
        .map(|b| {
            let mut part = ConjectureReport::new(spec, options, true);
            for rest in b * batch..(b + 1) * batch {
                let s = SubsetMask::from_bits(n, rest << 1 | 1);
                if !size_ok(options, &s) || !sym.is_canonical(group, &s) {
                    continue;
                }
                let (spectrum, complement) = classify(group, &s);
                visit(&s, &spectrum, &complement);
                part.record(&s, spectrum, complement, sym.orbit_size(group, &s));
            }
            part
        })
        .reduce(
            || ConjectureReport::new(spec, options, true),
            ConjectureReport::merge,
        );
    if options.size.is_none_or(|k| k == 0) {
        report.empty_subsets += 1;
    }
    report
}

fn scan_sampled(
    group: &Group,
    options: &VerifyOptions,
    seed: u64,
    trials: u64,
    visit: &Visitor<'_>,
) -> ConjectureReport {
    let n = group.order();
    let spec = *group.spec();
    let pool = match options.size {
        Some(k) => vec![k],
        None => sampling::size_pool(n, seed),
    };
    let batches = trials.div_ceil(sampling::BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut part = ConjectureReport::new(spec, options, false);
            for s in sampling::batch_subsets(n, seed, b, trials, &pool) {
                if s.is_empty() {
                    part.empty_subsets += 1;
                    continue;
                }
                let (spectrum, complement) = classify(group, &s);
                visit(&s, &spectrum, &complement);
                part.record(&s, spectrum, complement, 1);
            }
            part
        })
        .reduce(
            || ConjectureReport::new(spec, options, false),
            ConjectureReport::merge,
        )
}

/// Every direction of `Z_p^2` occurs in `S - S`: for each nonzero `a` some
/// nonzero multiple of `(a, 0)` is a difference of two members.
pub fn direction_coverage(group: &Group, s: &SubsetMask) -> bool {
    let diffs = group.difference_set(s);
    let p = group.p() as u32;
    (1..p * p).all(|a| {
        let dir = crate::Element::new(a / p, a % p, 0);
        (1..p).any(|c| diffs.contains(group.index(group.scale(c, dir))))
    })
}
