//! Depth-limited membership tests for the connectedness locus `M` and the
//! set `M0 = {λ : 0 ∈ A_λ}`.
//!
//! λ lies in `M` iff it is a root of some `f = Σ c_j z^j` with `c₀ = 1`,
//! `c_j ∈ {−1, 0, 1}` (`c_j ∈ {−1, 1}` for `M0`). A prefix `f_k` can only
//! extend to such a root while `|f_k(λ)| ≤ |λ|^{k+1}/(1 − |λ|)`, so the search
//! walks coefficient prefixes depth first and prunes as soon as the tail bound
//! is exceeded.
//!
//! "Survived" at depth `d` is one-sided evidence: it over-approximates the
//! set. "Escaped" is definitive.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::escape_radius;
use crate::numerics::Complex;

/// Slack added to the tail bound, in units of `R`.
pub const PRUNE_GUARD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamSet {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "M0")]
    M0,
}

impl ParamSet {
    pub fn coefficients(self) -> &'static [i32] {
        match self {
            ParamSet::M => &[-1, 0, 1],
            ParamSet::M0 => &[-1, 1],
        }
    }
}

impl FromStr for ParamSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" | "M" => Ok(ParamSet::M),
            "m0" | "M0" => Ok(ParamSet::M0),
            other => Err(Error::Parse(format!("unknown set {other:?} (expected m or m0)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "depth")]
pub enum Membership {
    /// Every prefix was pruned; the value is the deepest index at which a
    /// prefix died (at least 1).
    Escaped(usize),
    /// Some prefix survived to the requested depth.
    Survived(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipResult {
    pub outcome: Membership,
    pub set: ParamSet,
}

impl MembershipResult {
    pub fn survived(&self) -> bool {
        matches!(self.outcome, Membership::Survived(_))
    }

    /// 0 for survivors, otherwise the escape depth.
    pub fn escape_value(&self) -> u32 {
        match self.outcome {
            Membership::Survived(_) => 0,
            Membership::Escaped(e) => e as u32,
        }
    }
}

fn validate_lambda(lambda: Complex) -> Result<()> {
    let r = lambda.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidLambda(r));
    }
    Ok(())
}

/// Powers `λ^k` and pruning bounds for `k = 0..=depth`.
struct PrefixBounds {
    powers: Vec<Complex>,
    bounds: Vec<f64>,
}

impl PrefixBounds {
    fn new(lambda: Complex, depth: usize) -> Self {
        let r = escape_radius(lambda);
        let modulus = lambda.norm();
        let mut powers = Vec::with_capacity(depth + 1);
        let mut p = Complex::new(1.0, 0.0);
        for _ in 0..=depth {
            powers.push(p);
            p *= lambda;
        }
        let bounds = (0..=depth)
            .map(|k| modulus.powi(k as i32 + 1) * r + PRUNE_GUARD * r)
            .collect();
        PrefixBounds { powers, bounds }
    }

    fn alive(&self, k: usize, value: Complex) -> bool {
        value.norm() <= self.bounds[k]
    }
}

/// Depth-first search over coefficient prefixes `c₀ … c_depth` with `c₀ = 1`.
pub fn membership(lambda: Complex, set: ParamSet, depth: usize) -> Result<MembershipResult> {
    validate_lambda(lambda)?;
    if depth == 0 {
        return Err(Error::Parse("search depth must be at least 1".into()));
    }
    let pb = PrefixBounds::new(lambda, depth);
    let coeffs = set.coefficients();
    let mut deepest_death = 0usize;
    let mut stack: Vec<(usize, Complex)> = vec![(0, Complex::new(1.0, 0.0))];
    let mut children: Vec<(f64, Complex)> = Vec::with_capacity(3);

    while let Some((k, value)) = stack.pop() {
        if !pb.alive(k, value) {
            deepest_death = deepest_death.max(k);
            continue;
        }
        if k == depth {
            return Ok(MembershipResult { outcome: Membership::Survived(depth), set });
        }
        // most promising child (smallest modulus) is explored first
        children.clear();
        children.extend(coeffs.iter().map(|&c| {
            let v = value + pb.powers[k + 1] * f64::from(c);
            (v.norm_sqr(), v)
        }));
        children.sort_by(|a, b| b.0.total_cmp(&a.0));
        stack.extend(children.iter().map(|&(_, v)| (k + 1, v)));
    }
    Ok(MembershipResult { outcome: Membership::Escaped(deepest_death.max(1)), set })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorList {
    /// Coefficient prefixes `c₀ … c_depth`, lexicographic.
    pub prefixes: Vec<Vec<i8>>,
    /// True when more survivors existed than `cap`.
    pub overflow: bool,
}

/// All surviving prefixes at `depth`, in lexicographic order, at most `cap`.
pub fn survivors(lambda: Complex, set: ParamSet, depth: usize, cap: usize) -> Result<SurvivorList> {
    validate_lambda(lambda)?;
    let pb = PrefixBounds::new(lambda, depth);
    let mut out = SurvivorList { prefixes: Vec::new(), overflow: false };
    let mut path = vec![1i8];
    collect_survivors(&pb, set.coefficients(), depth, Complex::new(1.0, 0.0), &mut path, cap, &mut out);
    Ok(out)
}

fn collect_survivors(
    pb: &PrefixBounds,
    coeffs: &[i32],
    depth: usize,
    value: Complex,
    path: &mut Vec<i8>,
    cap: usize,
    out: &mut SurvivorList,
) {
    if out.overflow {
        return;
    }
    let k = path.len() - 1;
    if !pb.alive(k, value) {
        return;
    }
    if k == depth {
        if out.prefixes.len() == cap {
            out.overflow = true;
        } else {
            out.prefixes.push(path.clone());
        }
        return;
    }
    for &c in coeffs {
        path.push(c as i8);
        collect_survivors(pb, coeffs, depth, value + pb.powers[k + 1] * f64::from(c), path, cap, out);
        path.pop();
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` of parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let w = Window { x0, y0, x1, y1 };
        if !(x0 < x1 && y0 < y1) || ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Parse(format!("degenerate window {x0},{y0},{x1},{y1}")));
        }
        Ok(w)
    }

    /// Center of pixel `(col, row)`; row 0 is the top (largest imaginary part).
    ///
    /// Offsets are measured from the window midpoint so that a window symmetric
    /// about the origin yields exactly negated pixel centers.
    pub fn pixel_center(&self, col: usize, row: usize, width: usize, height: usize) -> Complex {
        let mx = 0.5 * (self.x0 + self.x1);
        let my = 0.5 * (self.y0 + self.y1);
        let tx = (2.0 * col as f64 + 1.0 - width as f64) / (2.0 * width as f64);
        let ty = (2.0 * row as f64 + 1.0 - height as f64) / (2.0 * height as f64);
        Complex::new(mx + (self.x1 - self.x0) * tx, my - (self.y1 - self.y0) * ty)
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad window value {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match vals[..] {
            [x0, y0, x1, y1] => Window::new(x0, y0, x1, y1),
            _ => Err(Error::Parse(format!("window needs four values, got {}", vals.len()))),
        }
    }
}

/// Row-major escape depths, top row first; 0 means survived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeGrid {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub set: ParamSet,
    pub values: Vec<u32>,
}

impl EscapeGrid {
    pub fn get(&self, col: usize, row: usize) -> u32 {
        self.values[row * self.width + col]
    }
}

/// Escape value for a single pixel center.
///
/// `λ = 0` is assigned depth 1. Points with `|λ| ≥ 1` have an infinite tail
/// bound, nothing is ever pruned there, and they are reported as survivors.
pub fn pixel_value(lambda: Complex, set: ParamSet, depth: usize) -> u32 {
    if lambda == Complex::new(0.0, 0.0) {
        return 1;
    }
    match membership(lambda, set, depth) {
        Ok(m) => m.escape_value(),
        Err(_) => 0,
    }
}

/// Per-pixel membership over `window`, evaluated on the current rayon pool.
pub fn escape_grid(window: Window, width: usize, height: usize, set: ParamSet, depth: usize) -> EscapeGrid {
    assert!(width >= 1 && height >= 1 && depth >= 1, "grid needs at least one pixel and depth 1");
    let values: Vec<u32> = (0..height)
        .into_par_iter()
        .flat_map_iter(|row| (0..width).map(move |col| pixel_value(window.pixel_center(col, row, width, height), set, depth)))
        .collect();
    EscapeGrid { window, width, height, depth, set, values }
}
