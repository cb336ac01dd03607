//! Decay curves, sudden-death thresholds, representation classes and
//! robustness rankings.

use std::collections::BTreeMap;

use crate::clusterstate::{representation_density, ClusterSpec, DensityMatrix, RepresentationMask};
use crate::dephasing::{apply_dephasing_fast, DephasingStrength};
use crate::error::{Error, Result};
use crate::negativity::{Measure, NegativityValue, QubitSubset};

/// Number of points in the canonical grid `p = k / 200`.
pub const CANONICAL_GRID_POINTS: usize = 201;

/// Strength at which a curve that is still nonzero is declared free of
/// sudden death. Thresholds in `(NO_ESD_PROBE, 1)` cannot be told apart
/// from asymptotic decay.
pub const NO_ESD_PROBE: f64 = 1.0 - 1e-3;

pub const DEFAULT_ESD_TOL: f64 = 1e-6;
pub const MIN_ESD_TOL: f64 = 1e-8;

/// Tolerance for matching signatures and flagging ranking ties.
pub const MATCH_TOL: f64 = 1e-9;

pub fn canonical_grid() -> Vec<f64> {
    let last = (CANONICAL_GRID_POINTS - 1) as f64;
    (0..CANONICAL_GRID_POINTS).map(|k| k as f64 / last).collect()
}

/// `steps` evenly spaced points from `start` to `stop`, both included.
pub fn linear_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 steps, got {steps}")));
    }
    if !(start < stop) {
        return Err(Error::InvalidGrid(format!("start {start} must be below stop {stop}")));
    }
    let last = (steps - 1) as f64;
    let grid: Vec<f64> = (0..steps)
        .map(|k| {
            if k + 1 == steps {
                stop
            } else {
                start + (stop - start) * (k as f64 / last)
            }
        })
        .collect();
    validate_grid(&grid)?;
    Ok(grid)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if let Some(&p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidGrid(format!("{p} is outside [0, 1]")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid("points must be strictly ascending".into()));
    }
    Ok(())
}

/// An undephased representation state, ready to be dephased and measured
/// at any strength.
#[derive(Debug, Clone)]
pub struct Representation {
    spec: ClusterSpec,
    mask: RepresentationMask,
    rho: DensityMatrix,
}

impl Representation {
    pub fn new(spec: &ClusterSpec, mask: &RepresentationMask) -> Result<Self> {
        Ok(Self {
            spec: spec.clone(),
            mask: mask.clone(),
            rho: representation_density(spec, mask)?,
        })
    }

    pub fn spec(&self) -> &ClusterSpec {
        &self.spec
    }

    pub fn mask(&self) -> &RepresentationMask {
        &self.mask
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dephased(&self, p: f64) -> Result<DensityMatrix> {
        apply_dephasing_fast(&self.rho, DephasingStrength::new(p)?)
    }

    pub fn evaluate(&self, measure: &Measure, p: f64) -> Result<NegativityValue> {
        measure.evaluate(&self.dephased(p)?)
    }

    /// All measures at one strength, sharing a single dephased matrix.
    pub fn evaluate_all(&self, measures: &[Measure], p: f64) -> Result<Vec<f64>> {
        let rho = self.dephased(p)?;
        measures
            .iter()
            .map(|m| m.evaluate(&rho).map(NegativityValue::value))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub measure: Measure,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub spec: ClusterSpec,
    pub mask: RepresentationMask,
    pub grid: Vec<f64>,
    pub series: Vec<Series>,
}

impl DecayCurve {
    pub fn values(&self, measure: &Measure) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|s| &s.measure == measure)
            .map(|s| s.values.as_slice())
    }

    pub fn measures(&self) -> impl Iterator<Item = &Measure> {
        self.series.iter().map(|s| &s.measure)
    }
}

/// Dephases the representation at every grid point and evaluates each
/// measure.
pub fn decay_curve(
    spec: &ClusterSpec,
    mask: &RepresentationMask,
    measures: &[Measure],
    grid: &[f64],
) -> Result<DecayCurve> {
    validate_grid(grid)?;
    for m in measures {
        m.check(spec.n())?;
    }
    let rep = Representation::new(spec, mask)?;
    let mut columns = vec![Vec::with_capacity(grid.len()); measures.len()];
    for &p in grid {
        for (col, v) in columns.iter_mut().zip(rep.evaluate_all(measures, p)?) {
            col.push(v);
        }
    }
    Ok(DecayCurve {
        spec: spec.clone(),
        mask: mask.clone(),
        grid: grid.to_vec(),
        series: measures
            .iter()
            .cloned()
            .zip(columns)
            .map(|(measure, values)| Series { measure, values })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdVerdict {
    /// Sudden death at `threshold`, located to within `tolerance`.
    Esd { threshold: f64, tolerance: f64 },
    NoEsd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsdResult {
    pub spec: ClusterSpec,
    pub mask: RepresentationMask,
    pub measure: Measure,
    pub verdict: EsdVerdict,
    /// Set when the coarse scan saw the measure revive after first hitting
    /// zero; the threshold then refers to the last zero crossing.
    pub non_monotone: bool,
}

impl EsdResult {
    pub fn threshold(&self) -> Option<f64> {
        match self.verdict {
            EsdVerdict::Esd { threshold, .. } => Some(threshold),
            EsdVerdict::NoEsd => None,
        }
    }

    pub fn is_esd(&self) -> bool {
        matches!(self.verdict, EsdVerdict::Esd { .. })
    }
}

/// Locates the strength at which `measure` first becomes (and stays) zero.
///
/// A measure still nonzero at [`NO_ESD_PROBE`] has no sudden death. Otherwise
/// the canonical grid brackets the last zero crossing and bisection shrinks
/// the bracket below `tol`.
pub fn esd_threshold(
    spec: &ClusterSpec,
    mask: &RepresentationMask,
    measure: &Measure,
    tol: f64,
) -> Result<EsdResult> {
    if !(tol >= MIN_ESD_TOL) {
        return Err(Error::ToleranceTooSmall(tol));
    }
    measure.check(spec.n())?;
    let rep = Representation::new(spec, mask)?;
    let alive = |p: f64| rep.evaluate(measure, p).map(|v| !v.is_zero());
    let result = |verdict, non_monotone| EsdResult {
        spec: spec.clone(),
        mask: mask.clone(),
        measure: measure.clone(),
        verdict,
        non_monotone,
    };

    if alive(NO_ESD_PROBE)? {
        return Ok(result(EsdVerdict::NoEsd, false));
    }

    let grid: Vec<f64> = canonical_grid().into_iter().filter(|&p| p < NO_ESD_PROBE).collect();
    let scan = grid.iter().map(|&p| alive(p)).collect::<Result<Vec<bool>>>()?;
    if !scan[0] {
        return Err(Error::NoInitialEntanglement(measure.to_string()));
    }
    let first_dead = scan.iter().position(|a| !a);
    let last_alive = scan.iter().rposition(|&a| a).expect("scan[0] is alive");
    let non_monotone = first_dead.is_some_and(|d| d < last_alive);

    let mut lo = grid[last_alive];
    let mut hi = grid.get(last_alive + 1).copied().unwrap_or(NO_ESD_PROBE);
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if alive(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(result(
        EsdVerdict::Esd {
            threshold: 0.5 * (lo + hi),
            tolerance: tol,
        },
        non_monotone,
    ))
}

/// Masks whose decay signatures coincide up to a relabeling of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct RepClass {
    /// Members in lexicographic order; the first is the representative.
    pub masks: Vec<RepresentationMask>,
    /// For each member, the relabeling `q -> perm[q - 1]` that carries the
    /// representative's measures onto the member's.
    pub relabelings: Vec<Vec<usize>>,
    /// Decay curve of the representative over the inequivalent cuts.
    pub signature: DecayCurve,
}

impl RepClass {
    pub fn representative(&self) -> &RepresentationMask {
        &self.masks[0]
    }

    pub fn contains(&self, mask: &RepresentationMask) -> bool {
        self.masks.contains(mask)
    }
}

/// Groups all `2^n` Hadamard masks by decay signature.
///
/// Two masks share a class when there is a qubit relabeling under which
/// every inequivalent cut measure of one agrees with the other at every
/// grid point within `tol`. Cuts and their complements have identical
/// spectra, so each cut is compared through its representative. Classes
/// are ordered by descending first-measure value of the representative at
/// the grid point nearest `p = 0.5`, then by representative mask.
pub fn classify_representations(spec: &ClusterSpec, grid: &[f64], tol: f64) -> Result<Vec<RepClass>> {
    let n = spec.n();
    if grid.is_empty() {
        return Err(Error::InvalidGrid("classification needs a nonempty grid".into()));
    }
    let measures = Measure::inequivalent_cuts(n);
    let index: BTreeMap<QubitSubset, usize> = measures
        .iter()
        .enumerate()
        .map(|(i, m)| match m {
            Measure::Cut(s) => (s.clone(), i),
            Measure::TriPartite => unreachable!("only cuts are compared"),
        })
        .collect();
    let perms = permutations(n);
    // For each relabeling, where measure i of a member lands in the
    // representative's measure list.
    let perm_maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            measures
                .iter()
                .map(|m| match m {
                    Measure::Cut(s) => {
                        let inverse = invert(perm);
                        index[&s.relabeled(&inverse).cut_representative(n)]
                    }
                    Measure::TriPartite => unreachable!(),
                })
                .collect()
        })
        .collect();

    struct Candidate {
        curve: DecayCurve,
        fingerprint: Vec<Vec<f64>>,
    }
    let mut classes: Vec<(Vec<RepresentationMask>, Vec<Vec<usize>>, Candidate)> = Vec::new();
    for mask in RepresentationMask::all(n) {
        let curve = decay_curve(spec, &mask, &measures, grid)?;
        let fingerprint = fingerprint(&curve, &measures);
        let mut placed = false;
        for (members, relabelings, rep) in classes.iter_mut() {
            if !fingerprints_match(&rep.fingerprint, &fingerprint, tol) {
                continue;
            }
            let hit = perm_maps.iter().position(|map| {
                map.iter().enumerate().all(|(i, &j)| {
                    curves_match(&curve.series[i].values, &rep.curve.series[j].values, tol)
                })
            });
            if let Some(k) = hit {
                members.push(mask.clone());
                relabelings.push(perms[k].clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((
                vec![mask],
                vec![(1..=n).collect()],
                Candidate { curve, fingerprint },
            ));
        }
    }

    let mid = nearest_index(grid, 0.5);
    let mut out: Vec<RepClass> = classes
        .into_iter()
        .map(|(masks, relabelings, rep)| RepClass {
            masks,
            relabelings,
            signature: rep.curve,
        })
        .collect();
    out.sort_by_key(|c| {
        let v = c.signature.series[0].values[mid];
        (std::cmp::Reverse(quantize(v, tol)), c.representative().clone())
    });
    Ok(out)
}

/// Per grid point, the values of each cut size sorted ascending. Any
/// relabeling only permutes values within a cut size, so matching
/// fingerprints are necessary for matching signatures.
fn fingerprint(curve: &DecayCurve, measures: &[Measure]) -> Vec<Vec<f64>> {
    (0..curve.grid.len())
        .map(|k| {
            let mut keyed: Vec<(usize, f64)> = measures
                .iter()
                .zip(&curve.series)
                .map(|(m, s)| (m.cut_size().unwrap_or(0), s.values[k]))
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            keyed.into_iter().map(|(_, v)| v).collect()
        })
        .collect()
}

fn fingerprints_match(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| curves_match(x, y, tol))
}

fn curves_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn quantize(v: f64, tol: f64) -> i64 {
    (v / tol.max(f64::EPSILON)).round() as i64
}

fn nearest_index(grid: &[f64], p: f64) -> usize {
    grid.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - p).abs().total_cmp(&(b.1 - p).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &q) in perm.iter().enumerate() {
        inv[q - 1] = i + 1;
    }
    inv
}

/// All permutations of `1..=n`, identity first, then lexicographic.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for q in 0..used.len() {
            if !used[q] {
                used[q] = true;
                cur.push(q + 1);
                rec(cur, used, out);
                cur.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub mask: RepresentationMask,
    pub value: f64,
    /// Within [`MATCH_TOL`] of the entry ranked just above.
    pub tied_with_previous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRanking {
    pub measure: Measure,
    pub entries: Vec<RankEntry>,
}

impl MeasureRanking {
    pub fn position(&self, mask: &RepresentationMask) -> Option<usize> {
        self.entries.iter().position(|e| &e.mask == mask)
    }

    pub fn leader(&self) -> &RepresentationMask {
        &self.entries[0].mask
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskSummary {
    pub mask: RepresentationMask,
    /// Measures on which this mask ranks first with a nonzero value.
    pub first_places: usize,
}

/// Closed grid intervals `[from, to]` on which `mask` leads `measure`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    pub measure: Measure,
    pub mask: RepresentationMask,
    pub intervals: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub p: f64,
    pub rankings: Vec<MeasureRanking>,
    pub summary: Vec<MaskSummary>,
    pub dominance: Vec<Dominance>,
}

impl RankingReport {
    pub fn ranking(&self, measure: &Measure) -> Option<&MeasureRanking> {
        self.rankings.iter().find(|r| &r.measure == measure)
    }
}

/// Orders `masks` by descending value for every measure in
/// [`Measure::report_set`] at strength `p`. Values within [`MATCH_TOL`]
/// count as tied and fall back to mask order. The dominance intervals are
/// computed on the canonical grid, skipping points where every mask is
/// already at zero.
pub fn robustness_ranking(
    spec: &ClusterSpec,
    masks: &[RepresentationMask],
    p: f64,
) -> Result<RankingReport> {
    DephasingStrength::new(p)?;
    let mut masks = masks.to_vec();
    masks.sort();
    masks.dedup();
    let measures = Measure::report_set(spec.n());
    let reps = masks
        .iter()
        .map(|m| Representation::new(spec, m))
        .collect::<Result<Vec<_>>>()?;

    // values[mask][measure]
    let at_p = reps
        .iter()
        .map(|r| r.evaluate_all(&measures, p))
        .collect::<Result<Vec<_>>>()?;

    let rankings: Vec<MeasureRanking> = measures
        .iter()
        .enumerate()
        .map(|(mi, measure)| {
            let order = rank_order(&at_p.iter().map(|v| v[mi]).collect::<Vec<_>>());
            let mut entries: Vec<RankEntry> = Vec::with_capacity(order.len());
            for &k in &order {
                let value = at_p[k][mi];
                let tied = entries.last().is_some_and(|e| (e.value - value).abs() <= MATCH_TOL);
                entries.push(RankEntry {
                    mask: masks[k].clone(),
                    value,
                    tied_with_previous: tied,
                });
            }
            MeasureRanking {
                measure: measure.clone(),
                entries,
            }
        })
        .collect();

    let summary = masks
        .iter()
        .map(|mask| MaskSummary {
            mask: mask.clone(),
            first_places: rankings
                .iter()
                .filter(|r| r.entries.first().is_some_and(|e| &e.mask == mask && e.value > 0.0))
                .count(),
        })
        .collect();

    let grid = canonical_grid();
    let grid_values = grid
        .iter()
        .map(|&q| {
            reps.iter()
                .map(|r| r.evaluate_all(&measures, q))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut dominance = Vec::new();
    for (mi, measure) in measures.iter().enumerate() {
        let leaders: Vec<Option<usize>> = grid_values
            .iter()
            .map(|row| {
                let column: Vec<f64> = row.iter().map(|v| v[mi]).collect();
                let best = rank_order(&column).first().copied()?;
                (column[best] > 0.0).then_some(best)
            })
            .collect();
        for (k, mask) in masks.iter().enumerate() {
            let mut intervals = Vec::new();
            let mut start: Option<usize> = None;
            for (g, leader) in leaders.iter().enumerate() {
                match (start, *leader == Some(k)) {
                    (None, true) => start = Some(g),
                    (Some(s), false) => {
                        intervals.push((grid[s], grid[g - 1]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(s) = start {
                intervals.push((grid[s], grid[grid.len() - 1]));
            }
            dominance.push(Dominance {
                measure: measure.clone(),
                mask: mask.clone(),
                intervals,
            });
        }
    }

    Ok(RankingReport {
        p,
        rankings,
        summary,
        dominance,
    })
}

/// Indices by descending value. Inputs are assumed sorted by mask, and
/// among values within [`MATCH_TOL`] of the current best the lowest index
/// is taken first.
fn rank_order(values: &[f64]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..values.len()).collect();
    let mut order = Vec::with_capacity(values.len());
    while !remaining.is_empty() {
        let best = remaining
            .iter()
            .map(|&i| values[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let pos = remaining
            .iter()
            .position(|&i| values[i] >= best - MATCH_TOL)
            .expect("best is attained");
        order.push(remaining.remove(pos));
    }
    order
}
