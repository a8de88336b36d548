//! Normalized `{-1, 0, +1}` power series of rational type `(ℓ, p)`.
//!
//! A series `f(z) = Σ c_j z^j` with `c₀ = 1` is of rational type when its
//! coefficient sequence is pre-periodic:
//!
//! ```text
//! f(z) = Σ_{j≤ℓ} c_j z^j + (c_{ℓ+1} z^{ℓ+1} + … + c_{ℓ+p} z^{ℓ+p}) / (1 − z^p)
//! ```
//!
//! The textual form used on the command line is `c₀,…,c_ℓ;c_{ℓ+1},…,c_{ℓ+p}`,
//! for example `1;1,1,-1` or `1,-1,-1;1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Complex;

const POLE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Minus,
    Zero,
    Plus,
}

impl Coefficient {
    pub fn value(self) -> i32 {
        match self {
            Coefficient::Minus => -1,
            Coefficient::Zero => 0,
            Coefficient::Plus => 1,
        }
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            -1 => Ok(Coefficient::Minus),
            0 => Ok(Coefficient::Zero),
            1 => Ok(Coefficient::Plus),
            other => Err(Error::Parse(format!("coefficient {other} not in {{-1,0,1}}"))),
        }
    }
}

/// A pre-periodic series, stored with minimal `(ℓ, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct RationalTypeSeries {
    /// `c₀ … c_ℓ`
    head: Vec<Coefficient>,
    /// `c_{ℓ+1} … c_{ℓ+p}`
    period: Vec<Coefficient>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    preperiod: Vec<i32>,
    period: Vec<i32>,
}

impl TryFrom<SeriesRepr> for RationalTypeSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        RationalTypeSeries::from_values(&repr.preperiod, &repr.period)
    }
}

impl From<RationalTypeSeries> for SeriesRepr {
    fn from(s: RationalTypeSeries) -> Self {
        SeriesRepr {
            preperiod: s.head.iter().map(|c| c.value()).collect(),
            period: s.period.iter().map(|c| c.value()).collect(),
        }
    }
}

/// The overlap points `Σ_{c_j=0} a_j λ^j` over all sign choices `a_j = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapDescription {
    pub zero_positions: Vec<usize>,
    pub points: Vec<Complex>,
}

impl RationalTypeSeries {
    /// Builds a series from `c₀…c_ℓ` and the repeating block, reducing `(ℓ, p)`
    /// to the minimal pair.
    pub fn new(head: Vec<Coefficient>, period: Vec<Coefficient>) -> Result<Self> {
        if head.first() != Some(&Coefficient::Plus) {
            return Err(Error::Parse("leading coefficient c0 must be 1".into()));
        }
        if period.is_empty() {
            return Err(Error::Parse("periodic block must be nonempty".into()));
        }
        let mut head = head;
        let mut period = primitive_block(period);
        // roll c_ℓ into the period while c_ℓ = c_{ℓ+p}
        while head.len() > 1 && head.last() == period.last() {
            let c = head.pop().expect("nonempty head");
            period.pop();
            period.insert(0, c);
        }
        Ok(RationalTypeSeries { head, period })
    }

    pub fn from_values(head: &[i32], period: &[i32]) -> Result<Self> {
        let conv = |vs: &[i32]| vs.iter().map(|&v| Coefficient::from_value(v)).collect::<Result<Vec<_>>>();
        RationalTypeSeries::new(conv(head)?, conv(period)?)
    }

    /// ℓ
    pub fn preperiod(&self) -> usize {
        self.head.len() - 1
    }

    /// p
    pub fn period(&self) -> usize {
        self.period.len()
    }

    pub fn head(&self) -> &[Coefficient] {
        &self.head
    }

    pub fn period_block(&self) -> &[Coefficient] {
        &self.period
    }

    pub fn coeff_at(&self, j: usize) -> Coefficient {
        if j < self.head.len() {
            self.head[j]
        } else {
            self.period[(j - self.head.len()) % self.period.len()]
        }
    }

    pub fn coeff_value(&self, j: usize) -> i32 {
        self.coeff_at(j).value()
    }

    /// Indices `j` with `c_j = 0` inside `c₀ … c_ℓ`.
    pub fn zero_positions(&self) -> Vec<usize> {
        self.head
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Coefficient::Zero)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn has_zeros_in_period(&self) -> bool {
        self.period.contains(&Coefficient::Zero)
    }

    /// Total number of zero coefficients; `None` when there are infinitely many.
    pub fn zero_count(&self) -> Option<usize> {
        if self.has_zeros_in_period() {
            None
        } else {
            Some(self.zero_positions().len())
        }
    }

    /// Taylor polynomial `f_k(λ) = Σ_{j≤k} c_j λ^j`, summed in increasing order.
    pub fn taylor_eval(&self, lambda: Complex, k: usize) -> Complex {
        let mut power = Complex::new(1.0, 0.0);
        let mut sum = Complex::new(0.0, 0.0);
        for j in 0..=k {
            sum += power * f64::from(self.coeff_value(j));
            power *= lambda;
        }
        sum
    }

    fn split_parts(&self, lambda: Complex) -> SplitParts {
        let l = self.preperiod();
        let p = self.period();
        let mut head = Complex::new(0.0, 0.0);
        let mut head_d = Complex::new(0.0, 0.0);
        let mut tail = Complex::new(0.0, 0.0);
        let mut tail_d = Complex::new(0.0, 0.0);
        for j in 0..=l + p {
            let c = f64::from(self.coeff_value(j));
            if c == 0.0 {
                continue;
            }
            let term = lambda.powu(j as u32) * c;
            let term_d = if j == 0 { Complex::new(0.0, 0.0) } else { lambda.powu(j as u32 - 1) * (c * j as f64) };
            if j <= l {
                head += term;
                head_d += term_d;
            } else {
                tail += term;
                tail_d += term_d;
            }
        }
        let lp = lambda.powu(p as u32);
        let lp_d = if p == 0 { Complex::new(0.0, 0.0) } else { lambda.powu(p as u32 - 1) * p as f64 };
        SplitParts { head, head_d, tail, tail_d, denom: Complex::new(1.0, 0.0) - lp, denom_d: -lp_d }
    }

    /// `f(λ)` from the closed form.
    pub fn rational_eval(&self, lambda: Complex) -> Result<Complex> {
        let parts = self.split_parts(lambda);
        parts.check_pole()?;
        Ok(parts.head + parts.tail / parts.denom)
    }

    /// `f′(λ)` by differentiating the closed form.
    pub fn derivative_eval(&self, lambda: Complex) -> Result<Complex> {
        let s = self.split_parts(lambda);
        s.check_pole()?;
        Ok(s.head_d + (s.tail_d * s.denom - s.tail * s.denom_d) / (s.denom * s.denom))
    }

    /// Integer coefficients of `(1 − z^p)·f(z)`, trailing zeros trimmed.
    pub fn numerator_polynomial(&self) -> Vec<i32> {
        let l = self.preperiod();
        let p = self.period();
        let mut out: Vec<i32> = (0..=l + p).map(|j| self.coeff_value(j)).collect();
        for j in 0..=l {
            out[j + p] -= self.coeff_value(j);
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// All `2^m` overlap points for the `m` zero coefficients, sign choices in
    /// lexicographic order with `-` before `+`.
    pub fn overlap_set(&self, lambda: Complex) -> Result<OverlapDescription> {
        if self.has_zeros_in_period() {
            return Err(Error::ZerosInPeriod);
        }
        let zero_positions = self.zero_positions();
        let m = zero_positions.len();
        let powers: Vec<Complex> = zero_positions.iter().map(|&j| lambda.powu(j as u32)).collect();
        let points = (0..1usize << m)
            .map(|mask| {
                powers.iter().enumerate().fold(Complex::new(0.0, 0.0), |acc, (i, &pw)| {
                    // most significant bit ↔ first zero position
                    let plus = mask >> (m - 1 - i) & 1 == 1;
                    if plus {
                        acc + pw
                    } else {
                        acc - pw
                    }
                })
            })
            .collect();
        Ok(OverlapDescription { zero_positions, points })
    }
}

struct SplitParts {
    head: Complex,
    head_d: Complex,
    tail: Complex,
    tail_d: Complex,
    denom: Complex,
    denom_d: Complex,
}

impl SplitParts {
    fn check_pole(&self) -> Result<()> {
        let d = self.denom.norm();
        if d < POLE_TOLERANCE {
            Err(Error::PoleAtUnity(d))
        } else {
            Ok(())
        }
    }
}

/// Shortest block whose repetition reproduces `block`.
fn primitive_block(block: Vec<Coefficient>) -> Vec<Coefficient> {
    let n = block.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| block[i] == block[i - d]) {
            return block[..d].to_vec();
        }
    }
    block
}

impl fmt::Display for RationalTypeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |cs: &[Coefficient]| cs.iter().map(|c| c.value().to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.head), join(&self.period))
    }
}

impl FromStr for RationalTypeSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, period) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("series {s:?} needs a ';' between preperiod and period")))?;
        let parse_block = |block: &str| -> Result<Vec<i32>> {
            block
                .split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    tok.parse::<i32>().map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))
                })
                .collect()
        };
        RationalTypeSeries::from_values(&parse_block(head)?, &parse_block(period)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn series(s: &str) -> RationalTypeSeries {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s = series("1;1,1,-1");
        assert_eq!(s.preperiod(), 0);
        assert_eq!(s.period(), 3);
        assert_eq!(s.to_string(), "1;1,1,-1");
        assert_eq!(series(" 1, -1 ,-1 ; 1").to_string(), "1,-1,-1;1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("1,-1".parse::<RationalTypeSeries>(), Err(Error::Parse(_))));
        assert!(matches!("0;1".parse::<RationalTypeSeries>(), Err(Error::Parse(_))));
        assert!(matches!("1;2".parse::<RationalTypeSeries>(), Err(Error::Parse(_))));
        assert!(matches!("1;".parse::<RationalTypeSeries>(), Err(Error::Parse(_))));
        // unicode minus is not accepted
        assert!(matches!("1;\u{2212}1".parse::<RationalTypeSeries>(), Err(Error::Parse(_))));
    }

    #[test]
    fn minimality_is_enforced() {
        // period (1,1) reduces to (1)
        assert_eq!(series("1,-1,-1;1,1").to_string(), "1,-1,-1;1");
        // trailing preperiod coefficient equal to its period partner rolls back
        assert_eq!(series("1,-1,-1,1;1").to_string(), "1,-1,-1;1");
        assert_eq!(series("1,1,-1;1,-1").to_string(), "1;1,-1");
        assert_eq!(series("1,-1,0,1,-1,1;1,-1,1").to_string(), "1,-1,0;1,-1,1");
    }

    #[test]
    fn coeff_at_examples() {
        let l5 = series("1;1,1,-1");
        assert_eq!(l5.coeff_at(0), Coefficient::Plus);
        assert_eq!(l5.coeff_at(6), Coefficient::Minus);
        let l1 = series("1,-1,-1;1");
        assert_eq!(l1.coeff_at(17), Coefficient::Plus);
    }

    #[test]
    fn numerator_examples() {
        assert_eq!(series("1,-1,-1;1").numerator_polynomial(), vec![1, -2, 0, 2]);
        assert_eq!(series("1,-1,-1,-1;1").numerator_polynomial(), vec![1, -2, 0, 0, 2]);
        assert_eq!(series("1;1,1,-1").numerator_polynomial(), vec![1, 1, 1, -2]);
        assert_eq!(series("1,-1,-1,0;1").numerator_polynomial(), vec![1, -2, 0, 1, 1]);
        assert_eq!(series("1;1").numerator_polynomial(), vec![1]);
    }

    #[test]
    fn evaluation_at_zero() {
        let s = series("1,-1,-1;1");
        assert_eq!(s.rational_eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(s.taylor_eval(c(0.7, 0.1), 0), c(1.0, 0.0));
        assert_eq!(s.derivative_eval(c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(series("1;1,1,-1").derivative_eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let s = series("1;1");
        let h = 1e-6;
        let fd = (s.rational_eval(c(h, 0.0)).unwrap() - s.rational_eval(c(-h, 0.0)).unwrap()) / (2.0 * h);
        let d = s.derivative_eval(c(0.0, 0.0)).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-12);
        assert!((fd - d).norm() < 1e-6);
    }

    #[test]
    fn pole_at_unity() {
        let s = series("1;1");
        assert!(matches!(s.rational_eval(c(1.0, 0.0)), Err(Error::PoleAtUnity(_))));
        assert!(matches!(s.derivative_eval(c(1.0, 0.0)), Err(Error::PoleAtUnity(_))));
    }

    #[test]
    fn overlap_cardinalities() {
        let lam = c(0.62, 0.19);
        let o = series("1,-1,-1;1").overlap_set(lam).unwrap();
        assert_eq!(o.points, vec![c(0.0, 0.0)]);

        let o = series("1,-1,-1,0;1").overlap_set(lam).unwrap();
        assert_eq!(o.zero_positions, vec![3]);
        let l3 = lam.powu(3);
        assert_eq!(o.points, vec![-l3, l3]);

        let o = series("1,-1,-1,0,0;1").overlap_set(lam).unwrap();
        assert_eq!(o.points.len(), 4);
        for p in &o.points {
            assert!(o.points.contains(&-p), "overlap set not symmetric");
        }
    }

    #[test]
    fn overlap_rejects_zeros_in_period() {
        let s = series("1;0,1");
        assert_eq!(s.overlap_set(c(0.5, 0.5)), Err(Error::ZerosInPeriod));
        assert_eq!(s.zero_count(), None);
    }

    #[test]
    fn serde_shape() {
        let s = series("1,-1,0;1");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"preperiod":[1,-1,0],"period":[1]}"#);
        let back: RationalTypeSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
