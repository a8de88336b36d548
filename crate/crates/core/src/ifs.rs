//! Words over `{-, O, +}`, the maps `s_a(z) = a + λz`, nodes, nodal disks,
//! instars and attractor samples.
//!
//! Levels are indexed from 0: the instar at level `n` is the union of the
//! `2^{n+1}` (or `3^{n+1}`) nodal disks `s_w(D_R)` for words `w` of length
//! `n + 1`, with `R = 1/(1 − |λ|)`. The disk `D_R` itself sits at level −1.
//!
//! Enumeration is lexicographic with `- < O < +` and the first letter most
//! significant. Large levels are expanded on the current rayon pool; the
//! output order does not depend on the number of threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{Complex, Disk, PointSet};
use crate::series::{Coefficient, RationalTypeSeries};

pub const MAX_TERNARY_LEVEL: usize = 14;
pub const MAX_BINARY_LEVEL: usize = 22;
const WORD_CAPACITY: usize = 32;
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Minus,
    Center,
    Plus,
}

impl Letter {
    pub const BINARY: [Letter; 2] = [Letter::Minus, Letter::Plus];
    pub const TERNARY: [Letter; 3] = [Letter::Minus, Letter::Center, Letter::Plus];

    pub fn sign(self) -> i32 {
        match self {
            Letter::Minus => -1,
            Letter::Center => 0,
            Letter::Plus => 1,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Letter> {
        match sign {
            -1 => Some(Letter::Minus),
            0 => Some(Letter::Center),
            1 => Some(Letter::Plus),
            _ => None,
        }
    }

    fn code(self) -> u64 {
        self as u64
    }

    fn from_code(code: u64) -> Letter {
        match code {
            0 => Letter::Minus,
            1 => Letter::Center,
            _ => Letter::Plus,
        }
    }

    pub fn negate(self) -> Letter {
        match self {
            Letter::Minus => Letter::Plus,
            Letter::Center => Letter::Center,
            Letter::Plus => Letter::Minus,
        }
    }

    /// `a + λz`
    fn shift(self, z: Complex) -> Complex {
        match self {
            Letter::Minus => z - 1.0,
            Letter::Center => z,
            Letter::Plus => z + 1.0,
        }
    }

    /// `ν + a·power`, written so that `w ↔ −w` gives exactly negated nodes.
    fn add_scaled(self, node: Complex, power: Complex) -> Complex {
        match self {
            Letter::Minus => node - power,
            Letter::Center => node,
            Letter::Plus => node + power,
        }
    }
}

impl From<Coefficient> for Letter {
    fn from(c: Coefficient) -> Letter {
        match c {
            Coefficient::Minus => Letter::Minus,
            Coefficient::Zero => Letter::Center,
            Coefficient::Plus => Letter::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Binary,
    Ternary,
}

impl Alphabet {
    pub fn letters(self) -> &'static [Letter] {
        match self {
            Alphabet::Binary => &Letter::BINARY,
            Alphabet::Ternary => &Letter::TERNARY,
        }
    }

    pub fn max_level(self) -> usize {
        match self {
            Alphabet::Binary => MAX_BINARY_LEVEL,
            Alphabet::Ternary => MAX_TERNARY_LEVEL,
        }
    }

    fn check_level(self, level: usize) -> Result<()> {
        let limit = self.max_level();
        if level > limit {
            Err(Error::LevelTooDeep { level, limit })
        } else {
            Ok(())
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" | "2" => Ok(Alphabet::Binary),
            "ternary" | "3" => Ok(Alphabet::Ternary),
            other => Err(Error::Parse(format!("unknown alphabet {other:?}"))),
        }
    }
}

/// A finite word, packed two bits per letter (at most 32 letters).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    len: u8,
    binary: bool,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Word {
        Word { bits: 0, len: 0, binary: alphabet == Alphabet::Binary }
    }

    pub fn new(letters: &[Letter], alphabet: Alphabet) -> Result<Word> {
        let mut w = Word::empty(alphabet);
        for &a in letters {
            w = w.push(a)?;
        }
        Ok(w)
    }

    pub fn push(self, letter: Letter) -> Result<Word> {
        if self.len as usize >= WORD_CAPACITY {
            return Err(Error::WordTooLong(self.len as usize + 1));
        }
        if self.binary && letter == Letter::Center {
            return Err(Error::Parse("binary words cannot contain 'O'".into()));
        }
        let shift = 2 * self.len as u32;
        Ok(Word { bits: self.bits | letter.code() << shift, len: self.len + 1, binary: self.binary })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    pub fn letter(&self, i: usize) -> Letter {
        assert!(i < self.len(), "letter index {i} out of range for word of length {}", self.len);
        Letter::from_code(self.bits >> (2 * i) & 0b11)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// The prefix `w|k = a₀ … a_k` (length `k + 1`).
    pub fn truncate(&self, k: usize) -> Word {
        let len = (k + 1).min(self.len());
        let mask = if len == WORD_CAPACITY { u64::MAX } else { (1u64 << (2 * len)) - 1 };
        Word { bits: self.bits & mask, len: len as u8, binary: self.binary }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.letters() {
            let ch = match a {
                Letter::Minus => '-',
                Letter::Center => 'O',
                Letter::Plus => '+',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                '-' => Ok(Letter::Minus),
                'O' | '0' => Ok(Letter::Center),
                '+' => Ok(Letter::Plus),
                other => Err(Error::Parse(format!("bad letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let alphabet = if letters.contains(&Letter::Center) { Alphabet::Ternary } else { Alphabet::Binary };
        Word::new(&letters, alphabet)
    }
}

/// A nodal disk `s_w(D_R)`: centered at the node `ν_w`, radius `|λ|^{|w|}·R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalDisk {
    pub word: Word,
    pub node: Complex,
    pub disk: Disk,
}

/// `R = 1/(1 − |λ|)`, the radius of a disk containing both attractors.
pub fn escape_radius(lambda: Complex) -> f64 {
    1.0 / (1.0 - lambda.norm())
}

/// Radius of every nodal disk at `level` (words of length `level + 1`).
pub fn nodal_radius(lambda: Complex, level: usize) -> f64 {
    lambda.norm().powi(level as i32 + 1) * escape_radius(lambda)
}

pub fn apply_map(letter: Letter, lambda: Complex, z: Complex) -> Complex {
    letter.shift(lambda * z)
}

/// The node `ν_w = Σ a_j λ^j = s_w(0)`.
pub fn node(word: &Word, lambda: Complex) -> Complex {
    let mut power = Complex::new(1.0, 0.0);
    let mut sum = Complex::new(0.0, 0.0);
    for a in word.letters() {
        sum = a.add_scaled(sum, power);
        power *= lambda;
    }
    sum
}

/// Nodes of all words of length `level + 1`, lexicographic.
fn expand_nodes(lambda: Complex, level: usize, alphabet: Alphabet) -> Vec<(Word, Complex)> {
    let letters = alphabet.letters();
    let mut current = vec![(Word::empty(alphabet), Complex::new(0.0, 0.0))];
    let mut power = Complex::new(1.0, 0.0);
    for _ in 0..=level {
        let step = |&(w, nu): &(Word, Complex)| {
            letters
                .iter()
                .map(move |&a| (w.push(a).expect("level guard keeps words short"), a.add_scaled(nu, power)))
        };
        current = if current.len() >= PARALLEL_THRESHOLD {
            current.par_iter().flat_map_iter(step).collect()
        } else {
            current.iter().flat_map(step).collect()
        };
        power *= lambda;
    }
    current
}

/// All nodal disks of the instar at `level`.
pub fn instar_disks(level: usize, lambda: Complex, alphabet: Alphabet) -> Result<Vec<NodalDisk>> {
    alphabet.check_level(level)?;
    let radius = nodal_radius(lambda, level);
    Ok(expand_nodes(lambda, level, alphabet)
        .into_iter()
        .map(|(word, node)| NodalDisk { word, node, disk: Disk::new(node, radius) })
        .collect())
}

/// Nodes of all words of length `depth + 1`; each lies within
/// `|λ|^{depth+1}·R` of an attractor point.
pub fn attractor_sample(lambda: Complex, depth: usize, alphabet: Alphabet) -> Result<PointSet> {
    alphabet.check_level(depth)?;
    let letters = alphabet.letters();
    let mut nodes = vec![Complex::new(0.0, 0.0)];
    let mut power = Complex::new(1.0, 0.0);
    for _ in 0..=depth {
        let step = |&nu: &Complex| letters.iter().map(move |&a| a.add_scaled(nu, power));
        nodes = if nodes.len() >= PARALLEL_THRESHOLD {
            nodes.par_iter().flat_map_iter(step).collect()
        } else {
            nodes.iter().flat_map(step).collect()
        };
        power *= lambda;
    }
    Ok(PointSet::new(nodes))
}

/// Builds the itinerary `a` of an overlap point: `a_j = c_j` where `c_j ≠ 0`,
/// and the given signs (in order) at the zero positions.
pub fn overlap_itinerary(series: &RationalTypeSeries, zero_signs: &[Letter], len: usize) -> Result<Word> {
    if series.has_zeros_in_period() {
        return Err(Error::ZerosInPeriod);
    }
    let zeros = series.zero_positions();
    if zero_signs.len() != zeros.len() {
        return Err(Error::InconsistentWord(format!(
            "{} signs supplied for {} zero coefficients",
            zero_signs.len(),
            zeros.len()
        )));
    }
    let mut signs = zero_signs.iter();
    let mut w = Word::empty(Alphabet::Binary);
    for j in 0..len {
        let letter = match series.coeff_at(j) {
            Coefficient::Zero => {
                let s = *signs.next().expect("counted above");
                if s == Letter::Center {
                    return Err(Error::InconsistentWord("zero positions need a sign".into()));
                }
                s
            }
            c => c.into(),
        };
        w = w.push(letter)?;
    }
    Ok(w)
}

/// `ξ = Σ_{c_j=0} a_j λ^j` for an itinerary built by [`overlap_itinerary`].
pub fn overlap_point(series: &RationalTypeSeries, word: &Word, lambda: Complex) -> Complex {
    series
        .zero_positions()
        .into_iter()
        .filter(|&j| j < word.len())
        .fold(Complex::new(0.0, 0.0), |acc, j| word.letter(j).add_scaled(acc, lambda.powu(j as u32)))
}

/// Residuals of the similarity about an overlap point `ξ` between the nodal
/// disks of `a|ℓ+n+kp`, `ā|ℓ+n+kp` and those of `a|ℓ+n`, `ā|ℓ+n`, with
/// scaling factor `λ^{-kp}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarityResidual {
    pub node: f64,
    pub mirror_node: f64,
    pub radius: f64,
}

impl SelfSimilarityResidual {
    pub fn max(&self) -> f64 {
        self.node.max(self.mirror_node).max(self.radius)
    }
}

pub fn overlap_self_similarity(
    series: &RationalTypeSeries,
    lambda: Complex,
    xi: Complex,
    a_word: &Word,
    n: usize,
    k: usize,
) -> Result<SelfSimilarityResidual> {
    let l = series.preperiod();
    let p = series.period();
    let long = l + n + k * p;
    if a_word.len() <= long {
        return Err(Error::InconsistentWord(format!(
            "itinerary has {} letters, need at least {}",
            a_word.len(),
            long + 1
        )));
    }
    let mut mirror = Word::empty(Alphabet::Binary);
    for (j, a) in a_word.letters().enumerate() {
        let c = series.coeff_at(j);
        if c != Coefficient::Zero && Letter::from(c) != a {
            return Err(Error::InconsistentWord(format!("letter {j} disagrees with c_{j}")));
        }
        mirror = mirror.push(if c == Coefficient::Zero { a } else { a.negate() })?;
    }

    let scale = lambda.powi(-((k * p) as i32));
    let residual = |w: &Word| {
        let far = node(&w.truncate(long), lambda) - xi;
        let near = node(&w.truncate(l + n), lambda) - xi;
        (scale * far - near).norm()
    };
    let far_radius = nodal_radius(lambda, long);
    let near_radius = nodal_radius(lambda, l + n);
    Ok(SelfSimilarityResidual {
        node: residual(a_word),
        mirror_node: residual(&mirror),
        radius: (scale.norm() * far_radius - near_radius).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn maps() {
        assert_eq!(apply_map(Letter::Plus, c(0.5, 0.0), c(0.0, 0.0)), c(1.0, 0.0));
        let lam = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let z = apply_map(Letter::Minus, lam, c(1.0, 0.0));
        assert!((z - c(-1.0, std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(apply_map(Letter::Center, c(0.3, 0.4), c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn nodes() {
        let w: Word = "+".parse().unwrap();
        assert_eq!(node(&w, c(0.3, 0.2)), c(1.0, 0.0));
        let w: Word = "+-".parse().unwrap();
        assert_eq!(node(&w, c(0.5, 0.0)), c(0.5, 0.0));
        let lam = c(-0.3668759642641294, 0.5202594388652009);
        let w: Word = "++-".parse().unwrap();
        let direct = 1.0 + lam - lam * lam;
        assert!((node(&w, lam) - direct).norm() < 1e-15);
    }

    #[test]
    fn word_packing() {
        let w: Word = "+O-+".parse().unwrap();
        assert_eq!(w.len(), 4);
        assert!(!w.is_binary());
        assert_eq!(w.to_string(), "+O-+");
        assert_eq!(w.truncate(1).to_string(), "+O");
        assert!(Word::new(&[Letter::Center], Alphabet::Binary).is_err());
        let long = Word::new(&[Letter::Plus; 32], Alphabet::Binary).unwrap();
        assert_eq!(long.truncate(31), long);
        assert!(matches!(long.push(Letter::Plus), Err(Error::WordTooLong(33))));
    }

    #[test]
    fn instar_level_zero_binary() {
        let disks = instar_disks(0, c(0.5, 0.0), Alphabet::Binary).unwrap();
        assert_eq!(disks.len(), 2);
        assert_eq!(disks[0].node, c(-1.0, 0.0));
        assert_eq!(disks[1].node, c(1.0, 0.0));
        assert!(disks.iter().all(|d| (d.disk.radius - 1.0).abs() < 1e-15));
    }

    #[test]
    fn instar_counts_and_order() {
        let disks = instar_disks(1, c(0.3, 0.4), Alphabet::Ternary).unwrap();
        assert_eq!(disks.len(), 9);
        let words: Vec<String> = disks.iter().map(|d| d.word.to_string()).collect();
        assert_eq!(words, ["--", "-O", "-+", "O-", "OO", "O+", "+-", "+O", "++"]);
    }

    #[test]
    fn instar_rectangle_at_i_over_sqrt2() {
        let lam = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let disks = instar_disks(2, lam, Alphabet::Binary).unwrap();
        assert_eq!(disks.len(), 8);
        let s2 = std::f64::consts::SQRT_2;
        for d in &disks {
            assert!(d.node.re.abs() <= 2.0 + d.disk.radius);
            assert!(d.node.im.abs() <= s2 + d.disk.radius);
        }
    }

    #[test]
    fn level_guards() {
        let lam = c(0.5, 0.1);
        assert_eq!(
            instar_disks(15, lam, Alphabet::Ternary).unwrap_err(),
            Error::LevelTooDeep { level: 15, limit: 14 }
        );
        assert!(matches!(attractor_sample(lam, 23, Alphabet::Binary), Err(Error::LevelTooDeep { .. })));
    }

    #[test]
    fn attractor_small_depths() {
        let s = attractor_sample(c(0.3, 0.2), 0, Alphabet::Binary).unwrap();
        assert_eq!(s.points, vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        let s = attractor_sample(c(0.5, 0.0), 10, Alphabet::Binary).unwrap();
        assert_eq!(s.len(), 2048);
        assert!(s.points.iter().all(|z| z.im == 0.0 && z.re.abs() <= 2.0));
    }

    #[test]
    fn attractor_matches_instar_nodes() {
        let lam = c(0.41, 0.37);
        let s = attractor_sample(lam, 4, Alphabet::Ternary).unwrap();
        let d = instar_disks(4, lam, Alphabet::Ternary).unwrap();
        assert!(s.points.iter().zip(&d).all(|(a, b)| *a == b.node));
    }

    #[test]
    fn self_similarity_identity_scaling() {
        let f: RationalTypeSeries = "1,-1,-1,0;1".parse().unwrap();
        let lam = c(0.6219644269518568, 0.18773037045694507);
        let a = overlap_itinerary(&f, &[Letter::Plus], 10).unwrap();
        let xi = overlap_point(&f, &a, lam);
        let r = overlap_self_similarity(&f, lam, xi, &a, 0, 0).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn self_similarity_rejects_bad_itinerary() {
        let f: RationalTypeSeries = "1;1,1,-1".parse().unwrap();
        let w: Word = "+--+++++".parse().unwrap();
        assert!(matches!(
            overlap_self_similarity(&f, c(-0.37, 0.52), c(0.0, 0.0), &w, 0, 1),
            Err(Error::InconsistentWord(_))
        ));
    }
}
