//! Accessibility certificates for parameters `λ` that are roots of a
//! rational-type series `f`.
//!
//! Around the self-similarity center
//!
//! ```text
//! ζ = −λ^{−(ℓ+1)} f_ℓ(λ)
//! ```
//!
//! a chain of open disks `B_n` is built outside the attractor. `B_n` is
//! centered at the reflection `ω_n = 2ζ − ζ_n` of the node `ζ_n = ν_{b|n}`
//! (itinerary `b_j = c_{ℓ+1+j}`) and is tangent to that node's nodal disk:
//!
//! ```text
//! ω_n = −λ^{−(ℓ+1)} (f_{ℓ+1+n}(λ) + f_ℓ(λ))
//! r_n = 2|f_{ℓ+1+n}(λ)| / |λ|^{ℓ+1} − |λ|^{n+1}/(1 − |λ|)
//! ```
//!
//! The algebraic conditions (i)–(iii) say that the first `p` disks exist,
//! consecutive disks overlap, and each disk misses the rest of the instar at
//! its level. [`verify_chain`] checks the same three facts directly from the
//! disk geometry, against nodes enumerated independently.
//!
//! Every inequality is reported with its signed margin. A strict inequality
//! whose margin is within `1e-12·(|lhs| + |rhs|)` of zero cannot be told apart
//! from equality in double precision, and such a certificate is reported as
//! inconclusive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{escape_radius, instar_disks, nodal_radius, node, Alphabet, Letter, Word};
use crate::numerics::{Complex, Disk};
use crate::paramspace::{membership, MembershipResult, ParamSet};
use crate::series::RationalTypeSeries;

/// `|f(λ)|` below this counts as a root.
pub const ROOT_TOLERANCE: f64 = 1e-8;
/// Relative margin below which a strict inequality is not trusted.
pub const ROBUST_MARGIN: f64 = 1e-12;
/// Largest `n` accepted by the polynomial enumeration in condition (iii).
pub const MAX_ENUMERATION_INDEX: usize = 12;
/// Periods of the chain checked geometrically by [`certify`].
pub const DEFAULT_PERIODS: usize = 2;
/// Membership depth used for parameter-space probes recorded by [`certify`].
pub const PROBE_DEPTH: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionKind {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iii'")]
    IIIPrime,
    #[serde(rename = "w-i")]
    WeakI,
    #[serde(rename = "w-ii")]
    WeakII,
    #[serde(rename = "w-iii")]
    WeakIII,
    /// `2|f_n(λ)| > |λ|^{n+1}/(1 − |λ|)`, the existence form used for period three.
    #[serde(rename = "exists")]
    Exists,
    #[serde(rename = "sector-a")]
    SectorA,
    #[serde(rename = "sector-b")]
    SectorB,
    #[serde(rename = "sector-c")]
    SectorC,
    #[serde(rename = "sector-d")]
    SectorD,
    #[serde(rename = "sector-e")]
    SectorE,
}

/// One strict inequality with its two sides and signed margin.
///
/// `margin > 0` exactly when the inequality holds in the stated direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub which: ConditionKind,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    /// Coefficients of the polynomial `P` for the (iii)-type conditions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<i32>>,
}

impl ConditionRecord {
    /// Record for `lhs > rhs`.
    pub fn greater(which: ConditionKind, n: usize, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        ConditionRecord { which, n, lhs, rhs, margin, pass: margin > 0.0, poly: None }
    }

    /// Record for `lhs < rhs`.
    pub fn less(which: ConditionKind, n: usize, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        ConditionRecord { which, n, lhs, rhs, margin, pass: margin > 0.0, poly: None }
    }

    fn with_poly(mut self, poly: Vec<i32>) -> Self {
        self.poly = Some(poly);
        self
    }

    /// Passes with a margin that double precision can resolve.
    pub fn is_robust(&self) -> bool {
        self.margin > ROBUST_MARGIN * (self.lhs.abs() + self.rhs.abs())
    }
}

/// Disk `B_n`; a nonpositive radius means the disk does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainDisk {
    pub n: usize,
    #[serde(with = "crate::complex_serde")]
    pub center: Complex,
    pub radius: f64,
}

impl ChainDisk {
    pub fn exists(&self) -> bool {
        self.radius > 0.0
    }

    pub fn as_disk(&self) -> Disk {
        Disk::new(self.center, self.radius.max(0.0))
    }

    /// Positive when the two open disks share points.
    pub fn overlap_margin(&self, other: &ChainDisk) -> f64 {
        self.radius + other.radius - (self.center - other.center).norm()
    }

    /// Positive when `inner` lies strictly inside `self`.
    pub fn containment_margin(&self, inner: &ChainDisk) -> f64 {
        self.radius - (self.center - inner.center).norm() - inner.radius
    }
}

fn check_root(f: &RationalTypeSeries, lambda: Complex) -> Result<()> {
    let value = f.rational_eval(lambda)?.norm();
    if value < ROOT_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NotARoot(value))
    }
}

/// Hypotheses under which the certificate theorems apply: λ not real and
/// `|λ| ≤ 2^{-1/2}`. Violations are reported, not enforced.
pub fn hypothesis_warnings(lambda: Complex) -> Vec<String> {
    let mut out = Vec::new();
    if lambda.im == 0.0 {
        out.push("λ is real".to_string());
    }
    if lambda.norm() > std::f64::consts::FRAC_1_SQRT_2 {
        out.push(format!("|λ| = {} exceeds 2^(-1/2)", lambda.norm()));
    }
    out
}

fn inv_lead(f: &RationalTypeSeries, lambda: Complex) -> Complex {
    lambda.powi(-(f.preperiod() as i32 + 1))
}

fn zeta_raw(f: &RationalTypeSeries, lambda: Complex) -> Complex {
    -inv_lead(f, lambda) * f.taylor_eval(lambda, f.preperiod())
}

/// Self-similarity center `ζ = −λ^{−(ℓ+1)} f_ℓ(λ)`.
pub fn zeta(f: &RationalTypeSeries, lambda: Complex) -> Result<Complex> {
    check_root(f, lambda)?;
    Ok(zeta_raw(f, lambda))
}

/// `ζ_n = λ^{−(ℓ+1)} (f_{ℓ+1+n}(λ) − f_ℓ(λ))`, the node of `b|n`.
pub fn zeta_node(f: &RationalTypeSeries, lambda: Complex, n: usize) -> Complex {
    let l = f.preperiod();
    inv_lead(f, lambda) * (f.taylor_eval(lambda, l + 1 + n) - f.taylor_eval(lambda, l))
}

/// The itinerary `b|n` of `ζ`, with `b_j = c_{ℓ+1+j}`.
pub fn zeta_itinerary(f: &RationalTypeSeries, n: usize, alphabet: Alphabet) -> Result<Word> {
    let l = f.preperiod();
    let letters: Vec<Letter> = (0..=n).map(|j| f.coeff_at(l + 1 + j).into()).collect();
    Word::new(&letters, alphabet)
}

fn chain_disk_raw(f: &RationalTypeSeries, lambda: Complex, n: usize) -> ChainDisk {
    let l = f.preperiod();
    let fl = f.taylor_eval(lambda, l);
    let fn_ = f.taylor_eval(lambda, l + 1 + n);
    let center = -inv_lead(f, lambda) * (fn_ + fl);
    let radius = 2.0 * fn_.norm() / lambda.norm().powi(l as i32 + 1) - nodal_radius(lambda, n);
    ChainDisk { n, center, radius }
}

/// `B_n` from the Taylor-polynomial formulas.
pub fn chain_disk(f: &RationalTypeSeries, lambda: Complex, n: usize) -> Result<ChainDisk> {
    check_root(f, lambda)?;
    Ok(chain_disk_raw(f, lambda, n))
}

fn tail_bound(lambda: Complex, exponent: usize) -> f64 {
    lambda.norm().powi(exponent as i32) * escape_radius(lambda)
}

/// (i): `|f_{ℓ+1+n}(λ)| > ½ |λ|^{ℓ+n+2}/(1 − |λ|)`, i.e. `B_n` exists.
pub fn condition_i(f: &RationalTypeSeries, lambda: Complex, n: usize) -> ConditionRecord {
    let l = f.preperiod();
    let lhs = f.taylor_eval(lambda, l + 1 + n).norm();
    ConditionRecord::greater(ConditionKind::I, n, lhs, 0.5 * tail_bound(lambda, l + n + 2))
}

/// (ii): `|f_{ℓ+1+n}(λ)| + |f_{ℓ+2+n}(λ)| > |λ|^{ℓ+n+2}/(1 − |λ|)`, i.e. `B_n`
/// meets `B_{n+1}`.
pub fn condition_ii(f: &RationalTypeSeries, lambda: Complex, n: usize) -> ConditionRecord {
    let l = f.preperiod();
    let lhs = f.taylor_eval(lambda, l + 1 + n).norm() + f.taylor_eval(lambda, l + 2 + n).norm();
    ConditionRecord::greater(ConditionKind::II, n, lhs, tail_bound(lambda, l + n + 2))
}

/// Which form of condition (iii) to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `2|f_{ℓ+1+n}| < |2f_ℓ + λ^{ℓ+1}P|`, `P` with coefficients in `{−2,…,2}`.
    Doubled,
    /// `|f_{ℓ+1+n}| < |f_ℓ + λ^{ℓ+1}P|`, `P` with coefficients in `{−1,0,1}`.
    Single,
}

impl Variant {
    fn digits(self) -> &'static [i32] {
        match self {
            Variant::Doubled => &[-2, -1, 0, 1, 2],
            Variant::Single => &[-1, 0, 1],
        }
    }

    fn factor(self) -> i32 {
        match self {
            Variant::Doubled => 2,
            Variant::Single => 1,
        }
    }
}

/// Visits every polynomial `P` of degree ≤ n over `variant`'s digits except
/// `P = Q`, lexicographically by coefficient vector, with one record each.
fn for_each_poly_record(
    f: &RationalTypeSeries,
    lambda: Complex,
    n: usize,
    variant: Variant,
    kind: ConditionKind,
    mut visit: impl FnMut(ConditionRecord),
) -> Result<()> {
    if n > MAX_ENUMERATION_INDEX {
        return Err(Error::EnumerationTooLarge(n));
    }
    let l = f.preperiod();
    let factor = variant.factor();
    let digits = variant.digits();
    // Q has coefficients factor·c_{ℓ+1+j}; exact integer comparison
    let q: Vec<i32> = (0..=n).map(|j| factor * f.coeff_value(l + 1 + j)).collect();
    let scaled_head = f.taylor_eval(lambda, l) * f64::from(factor);
    let lhs = f64::from(factor) * f.taylor_eval(lambda, l + 1 + n).norm();
    let lead = lambda.powu(l as u32 + 1);
    let powers: Vec<Complex> = (0..=n).map(|j| lambda.powu(j as u32)).collect();

    let mut idx = vec![0usize; n + 1];
    loop {
        let poly: Vec<i32> = idx.iter().map(|&i| digits[i]).collect();
        if poly != q {
            let p_val = poly
                .iter()
                .zip(&powers)
                .fold(Complex::new(0.0, 0.0), |acc, (&c, &pw)| acc + pw * f64::from(c));
            let rhs = (scaled_head + lead * p_val).norm();
            visit(ConditionRecord::less(kind, n, lhs, rhs).with_poly(poly));
        }
        // odometer, last coefficient fastest
        let mut pos = n + 1;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < digits.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn iii_kind(variant: Variant) -> ConditionKind {
    match variant {
        Variant::Doubled => ConditionKind::III,
        Variant::Single => ConditionKind::IIIPrime,
    }
}

/// (iii) / (iii′): one record per polynomial `P ≠ Q`.
///
/// There are `5^{n+1} − 1` (doubled) or `3^{n+1} − 1` (single) records;
/// [`condition_iii_worst`] streams the same enumeration without storing it.
pub fn condition_iii(f: &RationalTypeSeries, lambda: Complex, n: usize, variant: Variant) -> Result<Vec<ConditionRecord>> {
    let mut out = Vec::new();
    for_each_poly_record(f, lambda, n, variant, iii_kind(variant), |r| out.push(r))?;
    Ok(out)
}

/// The record with the smallest margin; it passes iff every `P` passes.
pub fn condition_iii_worst(f: &RationalTypeSeries, lambda: Complex, n: usize, variant: Variant) -> Result<ConditionRecord> {
    worst_poly_record(f, lambda, n, variant, iii_kind(variant))
}

fn worst_poly_record(
    f: &RationalTypeSeries,
    lambda: Complex,
    n: usize,
    variant: Variant,
    kind: ConditionKind,
) -> Result<ConditionRecord> {
    let mut worst: Option<ConditionRecord> = None;
    for_each_poly_record(f, lambda, n, variant, kind, |r| {
        if worst.as_ref().is_none_or(|w| r.margin < w.margin) {
            worst = Some(r);
        }
    })?;
    Ok(worst.expect("at least one polynomial differs from Q"))
}

/// Relaxed conditions over chain indices `k₁ < … < k_m` that tolerate
/// intersections between non-consecutive disks.
///
/// The pair condition for `j = m` uses `k_{m+1} = k₁ + p`, the first chosen
/// disk of the next (rescaled) period. The third condition is enumerated in
/// the single form with coefficients in `{−1, 0, 1}`.
pub fn condition_weakened(f: &RationalTypeSeries, lambda: Complex, indices: &[usize]) -> Result<Vec<ConditionRecord>> {
    let p = f.period();
    let m = indices.len();
    if m < 2 || m > p {
        return Err(Error::BadIndices(format!("need 2 <= m <= p = {p}, got m = {m}")));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadIndices(format!("indices {indices:?} must be strictly increasing")));
    }
    if indices[m - 1] > p - 1 {
        return Err(Error::BadIndices(format!("indices {indices:?} must be at most p - 1 = {}", p - 1)));
    }
    let l = f.preperiod();
    let mut out = Vec::with_capacity(3 * m);
    for j in 0..m {
        let k = indices[j];
        let next = if j + 1 < m { indices[j + 1] } else { indices[0] + p };
        let fk = f.taylor_eval(lambda, l + 1 + k);
        let fnext = f.taylor_eval(lambda, l + 1 + next);

        out.push(ConditionRecord::greater(
            ConditionKind::WeakI,
            k,
            fk.norm(),
            0.5 * tail_bound(lambda, l + k + 2),
        ));
        let lhs = fk.norm() + fnext.norm() - 0.5 * (fk - fnext).norm();
        let rhs = 0.5 * (tail_bound(lambda, l + 2 + k) + tail_bound(lambda, l + 2 + next));
        out.push(ConditionRecord::greater(ConditionKind::WeakII, k, lhs, rhs));
        out.push(worst_poly_record(f, lambda, k, Variant::Single, ConditionKind::WeakIII)?);
    }
    Ok(out)
}

/// Geometric facts about `B_n` at one level of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: usize,
    pub radius: f64,
    pub exists: bool,
    /// `|ω_n − ν_{b|n}| − (r_n + nodal radius)`, zero for a tangent disk.
    pub tangency_residual: f64,
    /// `r_n + r_{n+1} − |ω_n − ω_{n+1}|`.
    pub overlap_with_next: f64,
    pub intersects_next: bool,
    /// Smallest gap between `B_n` and a non-tangent nodal disk at level `n`.
    pub clearance: f64,
    /// Word of the nodal disk achieving `clearance`.
    pub nearest: String,
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricReport {
    pub alphabet: Alphabet,
    pub levels: Vec<LevelCheck>,
    pub exists: bool,
    pub connected: bool,
    pub disjoint: bool,
}

impl GeometricReport {
    pub fn all_pass(&self) -> bool {
        self.exists && self.connected && self.disjoint
    }

    pub fn level(&self, n: usize) -> Option<&LevelCheck> {
        self.levels.iter().find(|c| c.n == n)
    }
}

/// Direct geometric check of `B_0 … B_{N−1}`, `N = periods·p`, against the
/// ternary instar (target `M`) or the binary one (target `M0`).
pub fn verify_chain(f: &RationalTypeSeries, lambda: Complex, periods: usize, target: ParamSet) -> Result<GeometricReport> {
    check_root(f, lambda)?;
    let alphabet = match target {
        ParamSet::M => Alphabet::Ternary,
        ParamSet::M0 => Alphabet::Binary,
    };
    let count = periods.max(1) * f.period();
    if count > alphabet.max_level() {
        return Err(Error::LevelTooDeep { level: count, limit: alphabet.max_level() });
    }

    let disks: Vec<ChainDisk> = (0..=count).map(|n| chain_disk_raw(f, lambda, n)).collect();
    let mut levels = Vec::with_capacity(count);
    for n in 0..count {
        let b = &disks[n];
        let tangent = zeta_itinerary(f, n, Alphabet::Ternary)?;
        let nodal = nodal_radius(lambda, n);
        let tangency_residual = (b.center - node(&tangent, lambda)).norm() - (b.radius + nodal);

        let mut clearance = f64::INFINITY;
        let mut nearest = String::new();
        for d in instar_disks(n, lambda, alphabet)? {
            if d.word.letters().eq(tangent.letters()) {
                continue;
            }
            let gap = (b.center - d.node).norm() - b.radius - d.disk.radius;
            if gap < clearance {
                clearance = gap;
                nearest = d.word.to_string();
            }
        }
        let overlap_with_next = b.overlap_margin(&disks[n + 1]);
        levels.push(LevelCheck {
            n,
            radius: b.radius,
            exists: b.exists(),
            tangency_residual,
            overlap_with_next,
            intersects_next: overlap_with_next > 0.0,
            clearance,
            nearest,
            disjoint: clearance > 0.0,
        });
    }
    Ok(GeometricReport {
        alphabet,
        exists: levels.iter().all(|c| c.exists),
        connected: levels.iter().all(|c| c.intersects_next),
        disjoint: levels.iter().all(|c| c.disjoint),
        levels,
    })
}

/// `|λ^p(ω_n − ζ) − (ω_{n+p} − ζ)|`; zero up to rounding at a root.
pub fn periodicity_residual(f: &RationalTypeSeries, lambda: Complex, n: usize) -> f64 {
    let z = zeta_raw(f, lambda);
    let p = f.period();
    let w = chain_disk_raw(f, lambda, n).center;
    let w_next = chain_disk_raw(f, lambda, n + p).center;
    (lambda.powu(p as u32) * (w - z) - (w_next - z)).norm()
}

/// `λ + λ^{pn}·(λ^{ℓ+1}/f′(λ))·(b − ζ)`: the parameter that a point `b` near
/// `ζ` in the dynamical plane corresponds to at scale `n`.
pub fn parameter_probe(f: &RationalTypeSeries, lambda: Complex, b: Complex, n: usize) -> Result<Complex> {
    let d = f.derivative_eval(lambda)?;
    if d.norm() < 1e-300 {
        return Err(Error::DerivativeVanished { re: lambda.re, im: lambda.im });
    }
    let scale = lambda.powu((f.period() * n) as u32) * lambda.powu(f.preperiod() as u32 + 1) / d;
    Ok(lambda + scale * (b - zeta_raw(f, lambda)))
}

/// A probe parameter and what the depth-limited search says about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeEvidence {
    /// Index of the chain disk whose center was used as `b`.
    pub disk: usize,
    pub scale: usize,
    #[serde(with = "crate::complex_serde")]
    pub parameter: Complex,
    pub membership: Option<MembershipResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason")]
pub enum Verdict {
    #[serde(rename = "accessible_M")]
    AccessibleM,
    #[serde(rename = "accessible_M0")]
    AccessibleM0,
    #[serde(rename = "inconclusive")]
    Inconclusive(String),
    #[serde(rename = "failed")]
    Failed(String),
}

impl Verdict {
    pub fn is_accessible(&self) -> bool {
        matches!(self, Verdict::AccessibleM | Verdict::AccessibleM0)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::AccessibleM => "accessible_M",
            Verdict::AccessibleM0 => "accessible_M0",
            Verdict::Inconclusive(_) => "inconclusive",
            Verdict::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    #[serde(with = "crate::complex_serde")]
    pub lambda: Complex,
    pub series: RationalTypeSeries,
    pub target: ParamSet,
    #[serde(with = "crate::complex_serde")]
    pub zeta: Complex,
    pub warnings: Vec<String>,
    pub conditions: Vec<ConditionRecord>,
    pub chain: Vec<ChainDisk>,
    pub geometric: Option<GeometricReport>,
    pub periodicity_residuals: Vec<f64>,
    pub probes: Vec<ProbeEvidence>,
    pub verdict: Verdict,
    /// Set when an `M` certificate holds and `f` has no zero coefficients, so
    /// λ is also on the boundary of `M0`.
    pub corollary: bool,
}

impl CertificateReport {
    pub fn min_margin(&self) -> f64 {
        self.conditions.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)
    }
}

/// Runs the full certificate for `target` at the root `λ` of `f`, checking
/// the chain geometrically over [`DEFAULT_PERIODS`] periods.
pub fn certify(f: &RationalTypeSeries, lambda: Complex, target: ParamSet) -> Result<CertificateReport> {
    certify_with_periods(f, lambda, target, DEFAULT_PERIODS)
}

/// [`certify`] with the geometric check run over `periods` periods; fewer are
/// used when `periods·p` exceeds the instar level limit.
pub fn certify_with_periods(f: &RationalTypeSeries, lambda: Complex, target: ParamSet, periods: usize) -> Result<CertificateReport> {
    let z = zeta(f, lambda)?;
    let p = f.period();
    let warnings = hypothesis_warnings(lambda);

    let variant = match target {
        ParamSet::M => Variant::Doubled,
        ParamSet::M0 => Variant::Single,
    };
    let mut conditions = Vec::with_capacity(3 * p);
    for n in 0..p {
        conditions.push(condition_i(f, lambda, n));
        conditions.push(condition_ii(f, lambda, n));
        conditions.push(condition_iii_worst(f, lambda, n, variant)?);
    }

    let periods = periods.max(1);
    let chain: Vec<ChainDisk> = (0..=periods * p).map(|n| chain_disk_raw(f, lambda, n)).collect();
    let limit = match target {
        ParamSet::M => Alphabet::Ternary.max_level(),
        ParamSet::M0 => Alphabet::Binary.max_level(),
    };
    let checked = (1..=periods).rev().find(|k| k * p <= limit);
    let geometric = checked.map(|k| verify_chain(f, lambda, k, target)).transpose()?;
    let periodicity_residuals: Vec<f64> = (0..periods * p).map(|n| periodicity_residual(f, lambda, n)).collect();

    let probes = (1..=3)
        .map(|scale| {
            let parameter = parameter_probe(f, lambda, chain[0].center, scale)?;
            Ok(ProbeEvidence { disk: 0, scale, parameter, membership: membership(parameter, target, PROBE_DEPTH).ok() })
        })
        .collect::<Result<Vec<_>>>()?;

    let verdict = decide(f, target, z, &warnings, &conditions, geometric.as_ref(), &periodicity_residuals);
    let corollary = target == ParamSet::M && verdict == Verdict::AccessibleM && f.zero_count() == Some(0);
    Ok(CertificateReport {
        lambda,
        series: f.clone(),
        target,
        zeta: z,
        warnings,
        conditions,
        chain,
        geometric,
        periodicity_residuals,
        probes,
        verdict,
        corollary,
    })
}

fn decide(
    f: &RationalTypeSeries,
    target: ParamSet,
    z: Complex,
    warnings: &[String],
    conditions: &[ConditionRecord],
    geometric: Option<&GeometricReport>,
    residuals: &[f64],
) -> Verdict {
    if f.has_zeros_in_period() {
        return Verdict::Failed("series has zero coefficients in its periodic block".into());
    }
    if target == ParamSet::M0 && !f.zero_positions().is_empty() {
        return Verdict::Failed("an M0 certificate needs a series without zero coefficients".into());
    }
    let failing: Vec<String> = conditions
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}[n={}] margin {:e}", c.which.label(), c.n, c.margin))
        .collect();
    if !failing.is_empty() {
        return Verdict::Failed(format!("conditions fail: {}", failing.join(", ")));
    }
    if let Some(c) = conditions.iter().find(|c| !c.is_robust()) {
        return Verdict::Inconclusive(format!(
            "{}[n={}] margin {:e} is below double-precision resolution",
            c.which.label(),
            c.n,
            c.margin
        ));
    }
    if !warnings.is_empty() {
        return Verdict::Inconclusive(format!("hypotheses not met: {}", warnings.join("; ")));
    }
    if let Some(g) = geometric {
        if let Some(c) = g.levels.iter().find(|c| !(c.exists && c.intersects_next && c.disjoint)) {
            return Verdict::Inconclusive(format!("conditions hold but the geometric chain check fails at level {}", c.n));
        }
    }
    let tol = 1e-10 * (1.0 + z.norm());
    if let Some((n, r)) = residuals.iter().enumerate().find(|(_, r)| **r > tol) {
        return Verdict::Inconclusive(format!("periodicity residual {r:e} at n={n} exceeds {tol:e}"));
    }
    match target {
        ParamSet::M => Verdict::AccessibleM,
        ParamSet::M0 => Verdict::AccessibleM0,
    }
}

impl ConditionKind {
    pub fn label(self) -> &'static str {
        match self {
            ConditionKind::I => "i",
            ConditionKind::II => "ii",
            ConditionKind::III => "iii",
            ConditionKind::IIIPrime => "iii'",
            ConditionKind::WeakI => "w-i",
            ConditionKind::WeakII => "w-ii",
            ConditionKind::WeakIII => "w-iii",
            ConditionKind::Exists => "exists",
            ConditionKind::SectorA => "sector-a",
            ConditionKind::SectorB => "sector-b",
            ConditionKind::SectorC => "sector-c",
            ConditionKind::SectorD => "sector-d",
            ConditionKind::SectorE => "sector-e",
        }
    }
}
