//! Occurrence counting, frequency spectra, empirical distributions, the
//! multiplicity curve, and logarithmic binning.
//!
//! Conventions: `k` labels occurrence levels, `N(k)` is the number of
//! distinct codes occurring exactly `k` times, `N = Σ_k N(k)` the number of
//! distinct codes, `M = Σ_k k·N(k)` the total occurrences, and `k_max` the
//! largest occurrence. The empirical distribution is `P(k) = N(k)/N`; its
//! cumulant form is `C(k) = Σ_{k'≥k} P(k')`. The multiplicity curve
//! `f̄(k)` is the mean number of distinct source meanings over codes with
//! occurrence `k`; a code seen once has exactly one meaning, so `f̄(1) = 1`.

use std::collections::{BTreeMap, HashMap};

use crate::coder::CodedCorpus;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("bins_per_decade must be >= 1")]
    ZeroBins,
}

/// Per-code occurrence and meaning counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeStats {
    pub code: String,
    /// k_i: occurrences of this code.
    pub occurrences: u64,
    /// n_{i,j}: occurrences per distinct meaning, sorted descending then by
    /// meaning key; sums to `occurrences`. Its length is m_i.
    pub meaning_counts: Vec<u64>,
}

impl CodeStats {
    /// m_i: number of distinct meanings.
    pub fn meanings(&self) -> u64 {
        self.meaning_counts.len() as u64
    }
}

/// All per-code counts of a coded corpus, sorted by code.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccurrenceTable {
    entries: Vec<CodeStats>,
    total: u64,
}

impl OccurrenceTable {
    /// Canonical construction: sorts entries by code and each entry's
    /// meaning counts descending.
    pub fn from_entries(mut entries: Vec<CodeStats>) -> Self {
        for e in &mut entries {
            e.meaning_counts.sort_unstable_by(|a, b| b.cmp(a));
        }
        entries.sort_unstable_by(|a, b| a.code.cmp(&b.code));
        let total = entries.iter().map(|e| e.occurrences).sum();
        OccurrenceTable { entries, total }
    }

    pub fn entries(&self) -> &[CodeStats] {
        &self.entries
    }

    /// Σ_i k_i — equals the coded corpus M.
    pub fn total_occurrences(&self) -> u64 {
        self.total
    }

    /// Number of distinct codes N.
    pub fn distinct_codes(&self) -> u64 {
        self.entries.len() as u64
    }
}

/// Count occurrences and meanings in one pass. A meaning is the pair
/// (source word, chunk index); for identity-style schemes the chunk index is
/// always 0 and the meaning reduces to the source word.
pub fn count(coded: &CodedCorpus) -> OccurrenceTable {
    // Intern meaning keys per code: code -> (meaning -> count).
    let mut by_code: HashMap<&str, HashMap<(&str, u16), u64>> = HashMap::new();
    for (code, word, chunk) in coded.occurrences() {
        *by_code.entry(code).or_default().entry((word, chunk)).or_insert(0) += 1;
    }
    let entries = by_code
        .into_iter()
        .map(|(code, meanings)| {
            let occurrences = meanings.values().sum();
            let mut meaning_counts: Vec<(u64, (&str, u16))> =
                meanings.into_iter().map(|(m, c)| (c, m)).collect();
            // descending count, then meaning key for a canonical order
            meaning_counts.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            CodeStats {
                code: code.to_string(),
                occurrences,
                meaning_counts: meaning_counts.into_iter().map(|(c, _)| c).collect(),
            }
        })
        .collect();
    OccurrenceTable::from_entries(entries)
}

/// The frequency spectrum N(k) with its summary triple (M, N, k_max).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencySpectrum {
    counts: BTreeMap<u64, u64>,
    total: u64,
    distinct: u64,
}

impl FrequencySpectrum {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        debug_assert!(counts.iter().all(|(&k, &n)| k >= 1 && n >= 1));
        let total = counts.iter().map(|(&k, &n)| k * n).sum();
        let distinct = counts.values().sum();
        FrequencySpectrum { counts, total, distinct }
    }

    /// N(k); zero for absent k.
    pub fn count_at(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Ascending (k, N(k)) pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &n)| (k, n))
    }

    /// M: total code occurrences.
    pub fn total_occurrences(&self) -> u64 {
        self.total
    }

    /// N: distinct codes.
    pub fn distinct_codes(&self) -> u64 {
        self.distinct
    }

    /// Largest occurrence level; 0 for an empty spectrum.
    pub fn k_max(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Build the spectrum N(k) from an occurrence table.
pub fn spectrum(table: &OccurrenceTable) -> FrequencySpectrum {
    let mut counts = BTreeMap::new();
    for e in table.entries() {
        *counts.entry(e.occurrences).or_insert(0) += 1;
    }
    FrequencySpectrum::from_counts(counts)
}

/// The measured multiplicity curve f̄(k), defined on the spectrum support.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultiplicityCurve {
    points: BTreeMap<u64, f64>,
}

impl MultiplicityCurve {
    pub fn from_points(points: BTreeMap<u64, f64>) -> Self {
        debug_assert!(points.iter().all(|(&k, &f)| k >= 1 && f >= 1.0));
        MultiplicityCurve { points }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.points.iter().map(|(&k, &f)| (k, f))
    }

    pub fn value_at(&self, k: u64) -> Option<f64> {
        self.points.get(&k).copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// f̄(k) = (Σ_{i: k_i=k} m_i) / N(k) over the spectrum support.
pub fn multiplicity_curve(table: &OccurrenceTable) -> MultiplicityCurve {
    let mut agg: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for e in table.entries() {
        let slot = agg.entry(e.occurrences).or_insert((0, 0));
        slot.0 += e.meanings();
        slot.1 += 1;
    }
    MultiplicityCurve::from_points(
        agg.into_iter()
            .map(|(k, (m_sum, n))| (k, m_sum as f64 / n as f64))
            .collect(),
    )
}

/// Whether a series holds P(k) values or cumulant C(k) values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Pdf,
    Ccdf,
}

/// A (k, value) series over an ascending integer support.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSeries {
    points: Vec<(u64, f64)>,
    kind: SeriesKind,
}

impl DistributionSeries {
    pub fn new(points: Vec<(u64, f64)>, kind: SeriesKind) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
        DistributionSeries { points, kind }
    }

    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Evaluate a cumulant series at any k >= 1: the value at the smallest
    /// support point >= k (1 below the support, 0 above it). Only meaningful
    /// for `SeriesKind::Ccdf`.
    pub fn ccdf_at(&self, k: u64) -> f64 {
        debug_assert_eq!(self.kind, SeriesKind::Ccdf);
        let i = self.points.partition_point(|&(kk, _)| kk < k);
        match self.points.get(i) {
            Some(&(_, v)) => v,
            None => 0.0,
        }
    }

    /// Convert a pdf series to its cumulant form over the same support.
    pub fn to_ccdf(&self) -> DistributionSeries {
        debug_assert_eq!(self.kind, SeriesKind::Pdf);
        let mut points = self.points.clone();
        let mut acc = 0.0;
        for p in points.iter_mut().rev() {
            acc += p.1;
            p.1 = acc;
        }
        DistributionSeries { points, kind: SeriesKind::Ccdf }
    }
}

/// P(k) = N(k)/N over the spectrum support.
pub fn empirical_pdf(spec: &FrequencySpectrum) -> Result<DistributionSeries, StatsError> {
    if spec.is_empty() {
        return Err(StatsError::EmptySpectrum);
    }
    let n = spec.distinct_codes() as f64;
    Ok(DistributionSeries::new(
        spec.iter().map(|(k, nk)| (k, nk as f64 / n)).collect(),
        SeriesKind::Pdf,
    ))
}

/// C(k) = Σ_{k'≥k} P(k') over the spectrum support; exactly 1 at the
/// smallest occurring k (computed from integer suffix sums).
pub fn empirical_ccdf(spec: &FrequencySpectrum) -> Result<DistributionSeries, StatsError> {
    if spec.is_empty() {
        return Err(StatsError::EmptySpectrum);
    }
    let n = spec.distinct_codes();
    let ks: Vec<(u64, u64)> = spec.iter().collect();
    let mut points = Vec::with_capacity(ks.len());
    let mut suffix = 0u64;
    for &(k, nk) in ks.iter().rev() {
        suffix += nk;
        points.push((k, suffix as f64 / n as f64));
    }
    points.reverse();
    Ok(DistributionSeries::new(points, SeriesKind::Ccdf))
}

/// One geometric bin of a log-binned density series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    /// Geometric bin edges (reals).
    pub k_lo: f64,
    pub k_hi: f64,
    /// Abscissa: geometric mean of the edges.
    pub center: f64,
    /// Integer occurrence levels covered: ceil(k_lo) ..= ceil(k_hi)-1.
    pub first_k: u64,
    pub last_k: u64,
    /// Bin mass divided by (N × integer bin width).
    pub density: f64,
}

/// A log-binned density series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinnedSeries {
    pub bins: Vec<Bin>,
}

/// Geometric bin edges at ratio 10^(1/bins_per_decade) starting at k=1.
/// Yields (bin_index, lo, hi, first_k, last_k) for bins containing at least
/// one integer, up to and including `k_max`.
fn geometric_bins(bins_per_decade: u32, k_max: u64) -> impl Iterator<Item = (u32, f64, f64, u64, u64)> {
    let b = bins_per_decade as f64;
    (0u32..).map_while(move |j| {
        let lo = 10f64.powf(j as f64 / b);
        if lo > k_max as f64 {
            return None;
        }
        let hi = 10f64.powf((j + 1) as f64 / b);
        let first_k = lo.ceil() as u64;
        // integers strictly below hi; hi itself belongs to the next bin
        let mut last_k = hi.ceil() as u64 - 1;
        if (hi - hi.round()).abs() == 0.0 {
            last_k = hi as u64 - 1;
        }
        Some((j, lo, hi, first_k, last_k.min(k_max)))
    })
}

/// Log-bin a spectrum: per bin, density = (Σ N(k) in bin)/(N × width) where
/// width is the number of integer k in the bin. Bins without mass are
/// omitted.
pub fn log_bin(spec: &FrequencySpectrum, bins_per_decade: u32) -> Result<BinnedSeries, StatsError> {
    if bins_per_decade == 0 {
        return Err(StatsError::ZeroBins);
    }
    let n = spec.distinct_codes() as f64;
    let mut bins = Vec::new();
    for (_, lo, hi, first_k, last_k) in geometric_bins(bins_per_decade, spec.k_max()) {
        if last_k < first_k {
            continue;
        }
        let width = (last_k - first_k + 1) as f64;
        let mass: u64 = spec
            .iter()
            .skip_while(|&(k, _)| k < first_k)
            .take_while(|&(k, _)| k <= last_k)
            .map(|(_, nk)| nk)
            .sum();
        if mass == 0 {
            continue;
        }
        bins.push(Bin {
            k_lo: lo,
            k_hi: hi,
            center: (lo * hi).sqrt(),
            first_k,
            last_k,
            density: mass as f64 / (n * width),
        });
    }
    Ok(BinnedSeries { bins })
}

/// Log-bin a pdf series with the same edges: density = (Σ P(k) in bin)/width.
pub fn log_bin_pdf(pdf: &DistributionSeries, bins_per_decade: u32) -> Result<BinnedSeries, StatsError> {
    if bins_per_decade == 0 {
        return Err(StatsError::ZeroBins);
    }
    debug_assert_eq!(pdf.kind(), SeriesKind::Pdf);
    let k_max = match pdf.points().last() {
        Some(&(k, _)) => k,
        None => return Err(StatsError::EmptySpectrum),
    };
    let pts = pdf.points();
    let mut bins = Vec::new();
    let mut idx = 0;
    for (_, lo, hi, first_k, last_k) in geometric_bins(bins_per_decade, k_max) {
        if last_k < first_k {
            continue;
        }
        while idx < pts.len() && pts[idx].0 < first_k {
            idx += 1;
        }
        let mut mass = 0.0;
        let mut j = idx;
        while j < pts.len() && pts[j].0 <= last_k {
            mass += pts[j].1;
            j += 1;
        }
        if mass <= 0.0 {
            continue;
        }
        let width = (last_k - first_k + 1) as f64;
        bins.push(Bin {
            k_lo: lo,
            k_hi: hi,
            center: (lo * hi).sqrt(),
            first_k,
            last_k,
            density: mass / width,
        });
    }
    Ok(BinnedSeries { bins })
}

/// Log-bin a multiplicity curve for fitting/plotting: per geometric bin, the
/// code-count-weighted mean of f̄(k) at the code-count-weighted geometric
/// mean abscissa. `spec` supplies the weights N(k).
pub fn log_bin_curve(
    curve: &MultiplicityCurve,
    spec: &FrequencySpectrum,
    bins_per_decade: u32,
) -> Result<MultiplicityCurve, StatsError> {
    if bins_per_decade == 0 {
        return Err(StatsError::ZeroBins);
    }
    let k_max = spec.k_max();
    let mut points = BTreeMap::new();
    for (_, _, _, first_k, last_k) in geometric_bins(bins_per_decade, k_max) {
        if last_k < first_k {
            continue;
        }
        let mut w_sum = 0.0;
        let mut f_sum = 0.0;
        let mut logk_sum = 0.0;
        for (k, f) in curve.iter() {
            if k < first_k || k > last_k {
                continue;
            }
            let w = spec.count_at(k) as f64;
            w_sum += w;
            f_sum += w * f;
            logk_sum += w * (k as f64).ln();
        }
        if w_sum == 0.0 {
            continue;
        }
        let k_center = (logk_sum / w_sum).exp().round().max(1.0) as u64;
        points.insert(k_center, f_sum / w_sum);
    }
    Ok(MultiplicityCurve::from_points(points))
}
