//! Kac-table bookkeeping: admissible parameters, momenta `α_{r,s;n}`,
//! conformal weights, the `Δ^±` weights, simple labels and blocks, and the
//! fusion-constraint polynomials.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::integer::gcd;
use serde::{Serialize, Serializer};

use crate::scalars::{FieldElem, Rat, Ring};
use crate::{Error, Result};

/// An admissible pair `(p₊, p₋)`: coprime, `p₋ > p₊ ≥ 2`, and with
/// `D = 2 p₊ p₋` not a perfect square so that `Q(√D)` is a field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Params {
    p_plus: i64,
    p_minus: i64,
}

impl Params {
    pub fn new(p_plus: i64, p_minus: i64) -> Result<Params> {
        let reject = |reason: &str| Error::InadmissibleParams {
            p_plus,
            p_minus,
            reason: reason.to_string(),
        };
        if p_plus < 2 {
            return Err(reject("p+ must be at least 2"));
        }
        if p_minus <= p_plus {
            return Err(reject("p- must exceed p+"));
        }
        if gcd(p_plus, p_minus) != 1 {
            return Err(reject("p+ and p- must be coprime"));
        }
        let d = 2 * p_plus * p_minus;
        let root = (d as f64).sqrt().round() as i64;
        if (root - 1..=root + 1).any(|k| k >= 0 && k * k == d) {
            return Err(reject("2 p+ p- is a perfect square"));
        }
        Ok(Params { p_plus, p_minus })
    }

    pub fn p_plus(&self) -> i64 {
        self.p_plus
    }

    pub fn p_minus(&self) -> i64 {
        self.p_minus
    }

    /// `D = 2 p₊ p₋`.
    pub fn disc(&self) -> i64 {
        2 * self.p_plus * self.p_minus
    }

    pub fn sqrt_disc(&self) -> FieldElem {
        FieldElem::sqrt_disc(self.disc())
    }

    /// `α₊ = √D / p₊`.
    pub fn alpha_plus(&self) -> FieldElem {
        FieldElem::new(Rat::zero(), Rat::new(1, self.p_plus), self.disc())
    }

    /// `α₋ = −√D / p₋`.
    pub fn alpha_minus(&self) -> FieldElem {
        FieldElem::new(Rat::zero(), Rat::new(-1, self.p_minus), self.disc())
    }

    /// Background charge `α₀ = α₊ + α₋`.
    pub fn alpha0(&self) -> FieldElem {
        self.alpha_plus() + self.alpha_minus()
    }

    /// `α_ε` for the given screening sign.
    pub fn alpha(&self, sign: Sign) -> FieldElem {
        match sign {
            Sign::Plus => self.alpha_plus(),
            Sign::Minus => self.alpha_minus(),
        }
    }

    pub fn central_charge(&self) -> Rat {
        let d = self.p_minus - self.p_plus;
        Rat::one() - Rat::new(6 * d * d, self.p_plus * self.p_minus)
    }

    /// `p₊` or `p₋` for the given sign.
    pub fn p(&self, sign: Sign) -> i64 {
        match sign {
            Sign::Plus => self.p_plus,
            Sign::Minus => self.p_minus,
        }
    }

    /// Conformal weight of the Fock vacuum with momentum `β`: `β(β − α₀)/2`.
    pub fn weight_of(&self, beta: &FieldElem) -> Result<Rat> {
        let h = beta
            .checked_mul(&beta.checked_sub(&self.alpha0())?)?
            .scale(&Rat::new(1, 2));
        h.to_rat()
            .ok_or_else(|| Error::Invariant(format!("weight of momentum {beta} is irrational")))
    }

    /// `h_{r,s;n}` in closed form.
    pub fn h(&self, r: i64, s: i64, n: i64) -> Rat {
        let (pp, pm) = (self.p_plus, self.p_minus);
        let s = s + n * pm;
        let x = r * pm - s * pp;
        let y = pm - pp;
        Rat::new(x * x - y * y, 4 * pp * pm)
    }

    /// `Δ^±_{r,s;n}` for `1 ≤ r ≤ p₊`, `1 ≤ s ≤ p₋`, `n ≥ 0`.
    pub fn delta_weight(&self, sign: Sign, r: i64, s: i64, n: i64) -> Result<Rat> {
        let (pp, pm) = (self.p_plus, self.p_minus);
        if !(1..=pp).contains(&r) || !(1..=pm).contains(&s) || n < 0 {
            return Err(Error::OutOfRange(format!(
                "delta weight label ({r},{s};{n}) outside 1..={pp} x 1..={pm}, n >= 0"
            )));
        }
        let shift = match sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        let label = match (r == pp, s == pm) {
            (false, false) => (pp - r, s, -2 * n - 1 - shift),
            (true, false) => (pp, s, -2 * n - shift),
            (false, true) => (r, pm, 2 * n + shift),
            (true, true) => (pp, pm, -2 * n - shift),
        };
        Ok(self.h(label.0, label.1, label.2))
    }

    /// Canonical representative of the interior class of `(r, s)` under
    /// `(r, s) ~ (p₊ − r, p₋ − s)`: the lexicographically smaller one.
    pub fn interior_class(&self, r: i64, s: i64) -> (i64, i64) {
        (r, s).min((self.p_plus - r, self.p_minus - s))
    }

    /// The interior Kac table `K_{p₊,p₋}` as canonical representatives.
    pub fn interior_classes(&self) -> Vec<(i64, i64)> {
        let mut out = BTreeSet::new();
        for r in 1..self.p_plus {
            for s in 1..self.p_minus {
                out.insert(self.interior_class(r, s));
            }
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p_plus, self.p_minus)
    }
}

/// Central charge `1 − 6 (p₊ − p₋)² / (p₊ p₋)` of an admissible pair.
pub fn central_charge(p_plus: i64, p_minus: i64) -> Result<Rat> {
    Ok(Params::new(p_plus, p_minus)?.central_charge())
}

/// Screening / weight sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

// ---------------------------------------------------------------------------
// Kac labels

/// The lattice point `α_{r,s;n}` for a fixed parameter pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct KacLabel {
    pub r: i64,
    pub s: i64,
    pub n: i64,
    pub params: Params,
}

impl KacLabel {
    pub fn new(params: Params, r: i64, s: i64, n: i64) -> KacLabel {
        KacLabel { r, s, n, params }
    }

    /// `α_{r,s;n} = ((1−r)/2) α₊ + ((1−s)/2) α₋ + (n/2) √D`.
    pub fn momentum(&self) -> FieldElem {
        let p = &self.params;
        let a = Rat::new(1 - self.r, 2);
        let b = Rat::new(1 - self.s, 2);
        let c = Rat::new(self.n, 2);
        p.alpha_plus().scale(&a) + p.alpha_minus().scale(&b) + p.sqrt_disc().scale(&c)
    }

    /// `h_{r,s;n}`, computed from the momentum.
    pub fn weight(&self) -> Rat {
        self.params
            .weight_of(&self.momentum())
            .expect("lattice weights are rational")
    }

    pub fn momentum_and_weight(&self) -> (FieldElem, Rat) {
        (self.momentum(), self.weight())
    }

    /// The unique label of the same momentum with `1 ≤ r ≤ p₊`, `1 ≤ s ≤ p₋`,
    /// using `α_{r+p₊,s;n+1} = α_{r,s;n} = α_{r,s+p₋;n−1}`.
    pub fn normalized(&self) -> KacLabel {
        let (pp, pm) = (self.params.p_plus, self.params.p_minus);
        let kr = (self.r - 1).div_euclid(pp);
        let ks = (self.s - 1).div_euclid(pm);
        KacLabel {
            r: self.r - kr * pp,
            s: self.s - ks * pm,
            n: self.n - kr + ks,
            params: self.params,
        }
    }

    /// Locates a lattice momentum, returning its normalized label.
    pub fn from_momentum(params: Params, alpha: &FieldElem) -> Result<KacLabel> {
        // α / α₊ · 2p₋ = (1−r)p₋ − (1−s)p₊ + n p₊ p₋ must be an integer.
        if !alpha.rat_part().is_zero() {
            return Err(Error::OutOfRange(format!(
                "{alpha} is not a lattice momentum"
            )));
        }
        let v = alpha.surd_part() * Rat::from(2 * params.p_plus * params.p_minus);
        let v = v
            .to_i64()
            .ok_or_else(|| Error::OutOfRange(format!("{alpha} is not a lattice momentum")))?;
        let (pp, pm) = (params.p_plus, params.p_minus);
        // v = pm - pp - r pm + s pp + n pp pm
        let w = v - pm + pp;
        for r in 1..=pp {
            for s in 1..=pm {
                let rest = w + r * pm - s * pp;
                if rest % (pp * pm) == 0 {
                    return Ok(KacLabel::new(params, r, s, rest / (pp * pm)));
                }
            }
        }
        Err(Error::OutOfRange(format!(
            "{alpha} is not a lattice momentum"
        )))
    }

    /// `r^∨ = p₊ − r`.
    pub fn r_dual(&self) -> i64 {
        self.params.p_plus - self.r
    }

    /// `s^∨ = p₋ − s`.
    pub fn s_dual(&self) -> i64 {
        self.params.p_minus - self.s
    }

    /// Fock-module type by its socle length.
    pub fn fock_type(&self) -> FockType {
        let l = self.normalized();
        let (pp, pm) = (self.params.p_plus, self.params.p_minus);
        match (l.r == pp, l.s == pm) {
            (false, false) => FockType::Braided,
            (true, true) => FockType::Semisimple,
            _ => FockType::Chain,
        }
    }
}

impl fmt::Display for KacLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.r, self.s, self.n)
    }
}

impl Serialize for KacLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Socle type of a Fock module as a Virasoro module.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FockType {
    /// Socle length three (`1 ≤ r < p₊`, `1 ≤ s < p₋`).
    Braided,
    /// Socle length two (exactly one boundary index).
    Chain,
    /// `r = p₊`, `s = p₋`.
    Semisimple,
}

/// Momentum and conformal weight of a Kac label.
pub fn momentum_and_weight(label: &KacLabel) -> (FieldElem, Rat) {
    label.momentum_and_weight()
}

// ---------------------------------------------------------------------------
// Simple labels and blocks

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum SimpleKind {
    XPlus,
    XMinus,
    Minimal,
}

/// A simple module of the triplet algebra: `X^±_{r,s}` or a minimal-model
/// module `L(h_{r,s})` keyed by its interior class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SimpleLabel {
    pub kind: SimpleKind,
    pub r: i64,
    pub s: i64,
}

impl SimpleLabel {
    pub fn x(sign: Sign, r: i64, s: i64) -> SimpleLabel {
        let kind = match sign {
            Sign::Plus => SimpleKind::XPlus,
            Sign::Minus => SimpleKind::XMinus,
        };
        SimpleLabel { kind, r, s }
    }

    pub fn x_plus(r: i64, s: i64) -> SimpleLabel {
        SimpleLabel::x(Sign::Plus, r, s)
    }

    pub fn x_minus(r: i64, s: i64) -> SimpleLabel {
        SimpleLabel::x(Sign::Minus, r, s)
    }

    /// `L(h_{r,s})`, stored under the canonical interior representative.
    pub fn minimal(params: &Params, r: i64, s: i64) -> SimpleLabel {
        let (r, s) = params.interior_class(r, s);
        SimpleLabel {
            kind: SimpleKind::Minimal,
            r,
            s,
        }
    }

    /// Checks index ranges against the parameters.
    pub fn validate(&self, params: &Params) -> Result<()> {
        let (pp, pm) = (params.p_plus, params.p_minus);
        let ok = match self.kind {
            SimpleKind::Minimal => {
                (1..pp).contains(&self.r)
                    && (1..pm).contains(&self.s)
                    && params.interior_class(self.r, self.s) == (self.r, self.s)
            }
            _ => (1..=pp).contains(&self.r) && (1..=pm).contains(&self.s),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "simple label {self} for {params}"
            )))
        }
    }

    /// Lowest conformal weight of the module.
    pub fn lowest_weight(&self, params: &Params) -> Rat {
        match self.kind {
            SimpleKind::XPlus => params.delta_weight(Sign::Plus, self.r, self.s, 0),
            SimpleKind::XMinus => params.delta_weight(Sign::Minus, self.r, self.s, 0),
            SimpleKind::Minimal => Ok(params.h(self.r, self.s, 0)),
        }
        .expect("validated label")
    }
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            SimpleKind::XPlus => "X+",
            SimpleKind::XMinus => "X-",
            SimpleKind::Minimal => "L",
        };
        write!(f, "{tag}[{},{}]", self.r, self.s)
    }
}

impl FromStr for SimpleLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<SimpleLabel> {
        let bad = || Error::UnknownName(format!("simple label {s:?}"));
        let (tag, rest) = if let Some(rest) = s.strip_prefix("X+") {
            (SimpleKind::XPlus, rest)
        } else if let Some(rest) = s.strip_prefix("X-") {
            (SimpleKind::XMinus, rest)
        } else if let Some(rest) = s.strip_prefix('L') {
            (SimpleKind::Minimal, rest)
        } else {
            return Err(bad());
        };
        let inner = rest
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (r, t) = inner.split_once(',').ok_or_else(bad)?;
        Ok(SimpleLabel {
            kind: tag,
            r: r.trim().parse().map_err(|_| bad())?,
            s: t.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for SimpleLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A block (linkage class) of the category of triplet-algebra modules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum BlockId {
    /// Five simples around the interior class `(r, s)` (canonical rep).
    Thick { r: i64, s: i64 },
    /// `X⁺_{r,p₋}` and `X⁻_{r^∨,p₋}`.
    ThinRow(i64),
    /// `X⁺_{p₊,s}` and `X⁻_{p₊,s^∨}`.
    ThinCol(i64),
    /// `X⁺_{p₊,p₋}` alone.
    SsPlus,
    /// `X⁻_{p₊,p₋}` alone.
    SsMinus,
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockId::Thick { r, s } => write!(f, "thick[{r},{s}]"),
            BlockId::ThinRow(r) => write!(f, "thin-row[{r}]"),
            BlockId::ThinCol(s) => write!(f, "thin-col[{s}]"),
            BlockId::SsPlus => write!(f, "semisimple+"),
            BlockId::SsMinus => write!(f, "semisimple-"),
        }
    }
}

impl Serialize for BlockId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The block containing a simple module.
pub fn classify(params: &Params, label: &SimpleLabel) -> BlockId {
    let (pp, pm) = (params.p_plus, params.p_minus);
    let (r, s) = (label.r, label.s);
    match label.kind {
        SimpleKind::Minimal => {
            let (r, s) = params.interior_class(r, s);
            BlockId::Thick { r, s }
        }
        SimpleKind::XPlus => match (r == pp, s == pm) {
            (false, false) => {
                let (r, s) = params.interior_class(r, s);
                BlockId::Thick { r, s }
            }
            (false, true) => BlockId::ThinRow(r),
            (true, false) => BlockId::ThinCol(s),
            (true, true) => BlockId::SsPlus,
        },
        SimpleKind::XMinus => match (r == pp, s == pm) {
            (false, false) => {
                let (r, s) = params.interior_class(pp - r, s);
                BlockId::Thick { r, s }
            }
            (false, true) => BlockId::ThinRow(pp - r),
            (true, false) => BlockId::ThinCol(pm - s),
            (true, true) => BlockId::SsMinus,
        },
    }
}

/// All blocks in a fixed order: thick, thin rows, thin columns, semisimple.
pub fn blocks(params: &Params) -> Vec<BlockId> {
    let mut out: Vec<BlockId> = params
        .interior_classes()
        .into_iter()
        .map(|(r, s)| BlockId::Thick { r, s })
        .collect();
    out.extend((1..params.p_plus).map(BlockId::ThinRow));
    out.extend((1..params.p_minus).map(BlockId::ThinCol));
    out.push(BlockId::SsPlus);
    out.push(BlockId::SsMinus);
    out
}

/// Simple modules of a block, in the order of the block's definition.
pub fn block_members(params: &Params, block: &BlockId) -> Vec<SimpleLabel> {
    let (pp, pm) = (params.p_plus, params.p_minus);
    match *block {
        BlockId::Thick { r, s } => vec![
            SimpleLabel::x_plus(r, s),
            SimpleLabel::x_plus(pp - r, pm - s),
            SimpleLabel::x_minus(pp - r, s),
            SimpleLabel::x_minus(r, pm - s),
            SimpleLabel::minimal(params, r, s),
        ],
        BlockId::ThinRow(r) => vec![SimpleLabel::x_plus(r, pm), SimpleLabel::x_minus(pp - r, pm)],
        BlockId::ThinCol(s) => vec![SimpleLabel::x_plus(pp, s), SimpleLabel::x_minus(pp, pm - s)],
        BlockId::SsPlus => vec![SimpleLabel::x_plus(pp, pm)],
        BlockId::SsMinus => vec![SimpleLabel::x_minus(pp, pm)],
    }
}

/// All simple modules: minimal labels first, then `X⁺`, then `X⁻`.
pub fn simple_labels(params: &Params) -> Vec<SimpleLabel> {
    let mut out: Vec<SimpleLabel> = params
        .interior_classes()
        .into_iter()
        .map(|(r, s)| SimpleLabel::minimal(params, r, s))
        .collect();
    for sign in [Sign::Plus, Sign::Minus] {
        for r in 1..=params.p_plus {
            for s in 1..=params.p_minus {
                out.push(SimpleLabel::x(sign, r, s));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Fusion constraints

fn check_fusion_index(params: &Params, r: i64, s: i64, n: i64) -> Result<()> {
    if (1..params.p_plus).contains(&r) && (1..params.p_minus).contains(&s) && n >= 0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "fusion index ({r},{s};{n}) needs 1 <= r < p+, 1 <= s < p-, n >= 0"
        )))
    }
}

/// Root sets of the four product equations constraining the weight `h` of
/// a Virasoro intertwining operator of type `L(h) ← L(h₁) ⊗ L(h₂)` with
/// `hᵢ = h_{rᵢ,sᵢ;nᵢ}`.
pub fn fusion_root_sets(
    params: &Params,
    first: (i64, i64, i64),
    second: (i64, i64, i64),
) -> Result<[BTreeSet<Rat>; 4]> {
    let (r1, s1, n1) = first;
    let (r2, s2, n2) = second;
    check_fusion_index(params, r1, s1, n1)?;
    check_fusion_index(params, r2, s2, n2)?;
    let (pp, pm) = (params.p_plus, params.p_minus);
    let direct = |ri: i64, si: i64, ni: i64| -> BTreeSet<Rat> {
        let mut set = BTreeSet::new();
        for i in 1..=ri {
            for j in 1..=si + ni * pm {
                set.insert(params.h(r1 + r2 - 2 * i + 1, s1 + s2 - 2 * j + 1, n1 + n2));
            }
        }
        set
    };
    let dual = |ri: i64, si: i64, ni: i64| -> BTreeSet<Rat> {
        let mut set = BTreeSet::new();
        for i in 1..=(ni + 1) * pp - ri {
            for j in 1..=pm - si {
                set.insert(params.h(
                    2 * pp - r1 - r2 - 2 * i + 1,
                    2 * pm - s1 - s2 - 2 * j + 1,
                    -n1 - n2,
                ));
            }
        }
        set
    };
    Ok([
        direct(r1, s1, n1),
        dual(r1, s1, n1),
        direct(r2, s2, n2),
        dual(r2, s2, n2),
    ])
}

/// Common solutions of the four fusion-constraint equations (roots without
/// multiplicity).
pub fn fusion_constraints(
    params: &Params,
    first: (i64, i64, i64),
    second: (i64, i64, i64),
) -> Result<BTreeSet<Rat>> {
    let sets = fusion_root_sets(params, first, second)?;
    let mut acc = sets[0].clone();
    for set in &sets[1..] {
        acc = acc.intersection(set).cloned().collect();
    }
    Ok(acc)
}

/// The factor `∏_{i≤r₂, j≤s₂} (h₁ − h_{r₂+r₃−2i+1, s₂+s₃−2j+1})` relating
/// matrix elements of an intertwining operator with and without the
/// singular-vector insertion.
pub fn fusion_factor(params: &Params, h1: &Rat, second: (i64, i64), third: (i64, i64)) -> Rat {
    let (r2, s2) = second;
    let (r3, s3) = third;
    let mut acc = Rat::one();
    for i in 1..=r2 {
        for j in 1..=s2 {
            acc = acc * (h1 - params.h(r2 + r3 - 2 * i + 1, s2 + s3 - 2 * j + 1, 0));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(Params::new(2, 4).is_err());
        assert!(Params::new(3, 2).is_err());
        assert!(Params::new(1, 3).is_err());
        // 2·2·9 = 36 is a perfect square.
        assert!(Params::new(2, 9).is_err());
        assert!(Params::new(3, 5).is_ok());
    }

    #[test]
    fn normalization_preserves_momentum() {
        let p = p23();
        for r in -5..=5 {
            for s in -5..=5 {
                for n in -3..=3 {
                    let l = KacLabel::new(p, r, s, n);
                    let m = l.normalized();
                    assert!((1..=2).contains(&m.r) && (1..=3).contains(&m.s));
                    assert_eq!(l.momentum(), m.momentum());
                    assert_eq!(KacLabel::from_momentum(p, &l.momentum()).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn label_parse_roundtrip() {
        for s in ["X+[1,2]", "X-[2,3]", "L[1,1]"] {
            assert_eq!(s.parse::<SimpleLabel>().unwrap().to_string(), s);
        }
        assert!("Y[1,1]".parse::<SimpleLabel>().is_err());
    }

    #[test]
    fn thin_minus_label_sits_in_dual_row() {
        let p = p23();
        assert_eq!(
            classify(&p, &SimpleLabel::x_minus(1, 3)),
            BlockId::ThinRow(1)
        );
        assert_eq!(
            classify(&p, &SimpleLabel::x_minus(2, 1)),
            BlockId::ThinCol(2)
        );
    }
}
