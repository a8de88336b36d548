//! The six landmark parameters λ₁…λ₆, each the root of a single rational-type
//! vanishing series, with the checks that reduce their certificates to a few
//! elementary inequalities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certificate::{ConditionKind, ConditionRecord, ROOT_TOLERANCE};
use crate::error::{Error, Result};
use crate::numerics::{newton_root, Complex};
use crate::series::RationalTypeSeries;

pub const LANDMARK_IDS: std::ops::RangeInclusive<u8> = 1..=6;

/// What is known about a landmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub in_sector_s: bool,
    /// `None` where the question is open.
    pub accessible_m: Option<bool>,
    pub corollary_m0: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    pub id: u8,
    pub series: RationalTypeSeries,
    /// Published decimal approximation; good enough to seed Newton.
    #[serde(with = "crate::complex_serde")]
    pub seed: Complex,
    pub expected: Expectation,
}

impl Landmark {
    /// The root of the numerator polynomial near `seed`.
    pub fn root(&self) -> Result<Complex> {
        newton_root(&self.series.numerator_polynomial(), self.seed)
    }
}

/// Landmark `id` in `1..=6`.
///
/// λ₅ keeps the orientation `−0.366 + 0.520i`; other sources use `z ↦ −z`.
pub fn landmark(id: u8) -> Result<Landmark> {
    let (series, re, im, expected) = match id {
        1 => ("1,-1,-1;1", 0.5957439, 0.2544259, (true, Some(true), true)),
        2 => ("1,-1,-1,0;1", 0.6219644, 0.1877304, (true, Some(true), false)),
        3 => ("1,-1,-1,0,0;1", 0.643703, 0.140749, (true, Some(true), false)),
        4 => ("1,-1,-1,-1;1", 0.63601, 0.106924, (true, Some(true), true)),
        5 => ("1;1,1,-1", -0.366, 0.520, (false, Some(true), true)),
        6 => ("1,-1,0;1", 0.57395, 0.368989, (false, None, false)),
        _ => return Err(Error::UnknownLandmark(id)),
    };
    let (in_sector_s, accessible_m, corollary_m0) = expected;
    Ok(Landmark {
        id,
        series: series.parse()?,
        seed: Complex::new(re, im),
        expected: Expectation { in_sector_s, accessible_m, corollary_m0 },
    })
}

pub fn all_landmarks() -> Vec<Landmark> {
    LANDMARK_IDS.map(|id| landmark(id).expect("fixture ids are valid")).collect()
}

/// `(√5 − 1)/2 < |z| < 2/3` and `0 < arg z < 5π/32`.
pub fn sector_s_contains(z: Complex) -> bool {
    let r = z.norm();
    let arg = z.arg();
    r > (5f64.sqrt() - 1.0) / 2.0 && r < 2.0 / 3.0 && arg > 0.0 && arg < 5.0 * PI / 32.0
}

/// Five elementary inequalities that hold throughout the sector S and reduce
/// the certificate for `(ℓ, 1)` series with `|λ| > (√5−1)/2` to checking signs:
///
/// (a) `1 − |λ| > ½|1 − λ|`, (b) `1 − |λ|² > |1 − λ|`, (c) `|λ| < |2 − λ|`,
/// (d) `2|λ| < |3 − λ|`, (e) `2|λ| < |1 + λ|`.
pub fn sector_inequalities(lambda: Complex) -> [ConditionRecord; 5] {
    let r = lambda.norm();
    let one = Complex::new(1.0, 0.0);
    [
        ConditionRecord::greater(ConditionKind::SectorA, 0, 1.0 - r, 0.5 * (one - lambda).norm()),
        ConditionRecord::greater(ConditionKind::SectorB, 0, 1.0 - r * r, (one - lambda).norm()),
        ConditionRecord::less(ConditionKind::SectorC, 0, r, (2.0 - lambda).norm()),
        ConditionRecord::less(ConditionKind::SectorD, 0, 2.0 * r, (3.0 - lambda).norm()),
        ConditionRecord::less(ConditionKind::SectorE, 0, 2.0 * r, (one + lambda).norm()),
    ]
}

/// `2|f_n(λ)| > |λ|^{n+1}/(1 − |λ|)` for `n = 0, 1, 2`, where `f` is the
/// period-three series `1;1,1,−1`: the chain disks `B_0, B_1, B_2` exist.
///
/// On the root `f_2(λ) = 2λ³`, so the `n = 2` record is `4|λ|³` against the
/// tail bound.
pub fn period_three_chain_exists(lambda: Complex) -> Result<[ConditionRecord; 3]> {
    let f = landmark(5)?.series;
    let value = f.rational_eval(lambda)?.norm();
    if value >= ROOT_TOLERANCE {
        return Err(Error::NotARoot(value));
    }
    let r = lambda.norm();
    Ok([0, 1, 2].map(|n| {
        let lhs = 2.0 * f.taylor_eval(lambda, n).norm();
        ConditionRecord::greater(ConditionKind::Exists, n, lhs, r.powi(n as i32 + 1) / (1.0 - r))
    }))
}
