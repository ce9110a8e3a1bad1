//! Logarithmic deformations: the derivation `Λ_Q(A)` attached to a
//! screening `Q`, Virasoro modules glued from Fock modules through it, their
//! `L₀` Jordan structure, and the limit vector obtained by differentiating a
//! singular vector in the momentum.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::fock::{partition_count, FockModule, GradedVector, ModuleTag};
use crate::lattice::{FockType, KacLabel, Params, Sign};
use crate::linalg::Matrix;
use crate::scalars::{Dual, FieldElem, Rat, Ring};
use crate::verma::Verma;
use crate::vertex::{screening, GradedMap, ScreeningSpec};
use crate::{Error, Result};

type DualElem = Dual<FieldElem>;

/// Matrix of the word `L_{n₁} ⋯ L_{n_j}` (rightmost factor first) from level
/// `k`. A word that passes below level zero gives the zero map.
pub fn word_matrix<T: Ring>(f: &FockModule<T>, word: &[i64], k: usize) -> Result<Matrix<T>> {
    let total: i64 = word.iter().sum();
    let target = k as i64 - total;
    let rows = if target < 0 {
        0
    } else {
        partition_count(target as usize)
    };
    let mut level = k as i64;
    let mut m = Matrix::identity(partition_count(k));
    for &n in word.iter().rev() {
        if level - n < 0 {
            return Ok(Matrix::zeros(rows, partition_count(k)));
        }
        m = f.virasoro_matrix(n, level as usize)?.mul(&m);
        level -= n;
    }
    Ok(m)
}

fn zero_rows(target: i64, k: usize) -> Matrix<FieldElem> {
    let rows = if target < 0 {
        0
    } else {
        partition_count(target as usize)
    };
    Matrix::zeros(rows, partition_count(k))
}

/// `Λ_Q(L_n) = Q a_n − a_n Q` on source level `k`, landing at level
/// `k − n − shift` of the target.
pub fn lambda_block(q: &GradedMap, n: i64, k: usize) -> Result<Matrix<FieldElem>> {
    let d = q.shift;
    let k_i = k as i64;
    let t = k_i - n - d;
    let mut out = zero_rows(t, k);
    if t < 0 {
        return Ok(out);
    }
    if k_i - n >= 0 {
        let a = q.source.heisenberg_matrix(n, k)?;
        out = out.add(&q.block((k_i - n) as usize)?.mul(&a));
    }
    if k_i - d >= 0 {
        let a = q.target.heisenberg_matrix(n, (k_i - d) as usize)?;
        out = out.sub(&a.mul(q.block(k)?));
    }
    Ok(out)
}

/// Source levels on which `Λ_Q(L_n)` is computable from the blocks of `q`.
fn lambda_top(q: &GradedMap, shift: i64) -> Result<usize> {
    let top = q.trunc() as i64 + shift.min(0);
    if top < 0 {
        return Err(Error::BeyondTruncation {
            level: -shift,
            trunc: q.trunc(),
        });
    }
    Ok(top as usize)
}

/// `Λ_Q(L_n) = [Q, a_n]` as a graded map of shift `shift(Q) + n`.
pub fn lambda_generator(q: &GradedMap, n: i64) -> Result<GradedMap> {
    let top = lambda_top(q, n)?;
    let blocks = (0..=top)
        .map(|k| Ok((k, lambda_block(q, n, k)?)))
        .collect::<Result<_>>()?;
    Ok(GradedMap {
        source: q.source.with_trunc(top),
        target: q.target.clone(),
        source_label: q.source_label,
        target_label: q.target_label,
        shift: q.shift + n,
        blocks,
    })
}

/// The two Fock modules of `q` with momenta shifted by a nilpotent `ε`.
fn deformed_pair(q: &GradedMap) -> (FockModule<DualElem>, FockModule<DualElem>) {
    let lift = |f: &FockModule<FieldElem>| {
        FockModule::new(
            Dual::new(f.momentum().clone(), FieldElem::one()),
            Dual::real(f.alpha0().clone()),
            f.trunc(),
        )
    };
    (lift(&q.source), lift(&q.target))
}

fn lift(m: &Matrix<FieldElem>) -> Matrix<DualElem> {
    m.map(|x| Dual::real(x.clone()))
}

/// `[Q, e^{−εp̂} A e^{εp̂}]` for a word `A`: its `ε⁰` part must vanish (`Q`
/// commutes with `A`) and its `ε¹` part is `Λ_Q(A)`.
pub fn lambda_word_by_deformation(
    q: &GradedMap,
    word: &[i64],
    k: usize,
) -> Result<Matrix<FieldElem>> {
    let (fs, ft) = deformed_pair(q);
    let total: i64 = word.iter().sum();
    let k_i = k as i64;
    let t = k_i - total - q.shift;
    if t < 0 {
        return Ok(zero_rows(t, k));
    }
    let rows = partition_count(t as usize);
    let mut c = Matrix::<DualElem>::zeros(rows, partition_count(k));
    if k_i - total >= 0 {
        let w = word_matrix(&fs, word, k)?;
        c = c.add(&lift(q.block((k_i - total) as usize)?).mul(&w));
    }
    if k_i - q.shift >= 0 {
        let w = word_matrix(&ft, word, (k_i - q.shift) as usize)?;
        c = c.sub(&w.mul(&lift(q.block(k)?)));
    }
    if c.entries().any(|x| !x.re.is_zero()) {
        return Err(Error::Invariant(format!(
            "screening does not commute with the word {word:?} at level {k}"
        )));
    }
    Ok(c.map(|x| x.eps.clone()))
}

/// `Λ_Q(A)` for a word `A = L_{n₁} ⋯ L_{n_j}` assembled by the derivation
/// rule `Λ(AB) = Λ(A) B + A Λ(B)` from the generator values `[Q, a_n]`.
pub fn lambda_word(q: &GradedMap, word: &[i64], k: usize) -> Result<Matrix<FieldElem>> {
    let total: i64 = word.iter().sum();
    let k_i = k as i64;
    let mut out = zero_rows(k_i - total - q.shift, k);
    if k_i - total - q.shift < 0 {
        return Ok(out);
    }
    for i in 0..word.len() {
        let right = &word[i + 1..];
        let left = &word[..i];
        let mid = k_i - right.iter().sum::<i64>();
        if mid < 0 {
            continue;
        }
        let after = mid - word[i] - q.shift;
        if after < 0 {
            continue;
        }
        let r = word_matrix(&q.source, right, k)?;
        let l = lambda_block(q, word[i], mid as usize)?;
        let w = word_matrix(&q.target, left, after as usize)?;
        out = out.add(&w.mul(&l.mul(&r)));
    }
    Ok(out)
}

/// Classes of glue triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripleClass {
    /// Chain-type first module with equal first two weights.
    T0,
    /// Braided-type first module at momentum `α_{r,s}` (`n = 0`).
    TMin,
    /// Other braided-type triples.
    TBr,
    /// Other chain-type triples.
    TCh,
}

impl TripleClass {
    pub fn is_braided(self) -> bool {
        matches!(self, TripleClass::TMin | TripleClass::TBr)
    }
}

/// Three consecutive Fock modules `F_{α₁} → F_{α₂} → F_{α₃}` of one Felder
/// complex with `h₁ ≤ h₂ < h₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GlueTriple {
    #[serde(skip)]
    pub params: Params,
    pub sign: Sign,
    pub labels: [KacLabel; 3],
    pub class: TripleClass,
}

impl GlueTriple {
    /// Validates adjacency along `Q_sign` and the weight ordering.
    pub fn new(params: Params, sign: Sign, labels: [KacLabel; 3]) -> Result<GlueTriple> {
        let labels = labels.map(|l| l.normalized());
        let invalid = |why: String| {
            Error::InvalidTriple(format!(
                "{sign} ({}; {}; {}): {why}",
                labels[0], labels[1], labels[2]
            ))
        };
        for i in 0..2 {
            let spec = ScreeningSpec::new(sign, &labels[i]).map_err(|e| invalid(e.to_string()))?;
            if spec.target != labels[i + 1] {
                return Err(invalid(format!(
                    "{} is not the screening image of {}",
                    labels[i + 1],
                    labels[i]
                )));
            }
        }
        let h = labels.map(|l| l.weight());
        if !(h[0] <= h[1] && h[1] < h[2]) {
            return Err(invalid(format!(
                "weights {}, {}, {} out of order",
                h[0], h[1], h[2]
            )));
        }
        let class = match labels[0].fock_type() {
            FockType::Chain if h[0] == h[1] => TripleClass::T0,
            FockType::Chain => TripleClass::TCh,
            FockType::Braided if labels[0].n == 0 => TripleClass::TMin,
            FockType::Braided => TripleClass::TBr,
            FockType::Semisimple => return Err(invalid("semisimple first module".into())),
        };
        Ok(GlueTriple {
            params,
            sign,
            labels,
            class,
        })
    }

    /// `(α_{r∨,p₋;−1}, α_{r,p₋;0}, α_{r∨,p₋;1})` along `Q₊`.
    pub fn t0_row(params: Params, r: i64) -> Result<GlueTriple> {
        let (pp, pm) = (params.p_plus(), params.p_minus());
        let l = |r, n| KacLabel::new(params, r, pm, n);
        GlueTriple::new(params, Sign::Plus, [l(pp - r, -1), l(r, 0), l(pp - r, 1)])
    }

    /// `(α_{p₊,s∨;1}, α_{p₊,s;0}, α_{p₊,s∨;−1})` along `Q₋`.
    pub fn t0_col(params: Params, s: i64) -> Result<GlueTriple> {
        let (pp, pm) = (params.p_plus(), params.p_minus());
        let l = |s, n| KacLabel::new(params, pp, s, n);
        GlueTriple::new(params, Sign::Minus, [l(pm - s, 1), l(s, 0), l(pm - s, -1)])
    }

    /// `(α_{r,s}, α_{r∨,s;1}, α_{r,s;2})` along `Q₊`.
    pub fn tmin_plus(params: Params, r: i64, s: i64) -> Result<GlueTriple> {
        let l = |r, n| KacLabel::new(params, r, s, n);
        GlueTriple::new(
            params,
            Sign::Plus,
            [l(r, 0), l(params.p_plus() - r, 1), l(r, 2)],
        )
    }

    /// `(α_{r,s}, α_{r,s∨;−1}, α_{r,s;−2})` along `Q₋`.
    pub fn tmin_minus(params: Params, r: i64, s: i64) -> Result<GlueTriple> {
        let l = |s, n| KacLabel::new(params, r, s, n);
        GlueTriple::new(
            params,
            Sign::Minus,
            [l(s, 0), l(params.p_minus() - s, -1), l(s, -2)],
        )
    }

    pub fn weights(&self) -> [Rat; 3] {
        self.labels.map(|l| l.weight())
    }

    /// Parses `t0-row:R`, `t0-col:S`, `tmin+:R,S`, `tmin-:R,S`, or an
    /// explicit `+:r,s,n/r,s,n/r,s,n` (or `-:` …).
    pub fn parse(params: Params, text: &str) -> Result<GlueTriple> {
        let bad = || Error::UnknownName(format!("glue triple {text:?}"));
        let (head, rest) = text.split_once(':').ok_or_else(bad)?;
        let ints = |s: &str| -> Result<Vec<i64>> {
            s.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        match head {
            "t0-row" => GlueTriple::t0_row(params, rest.trim().parse().map_err(|_| bad())?),
            "t0-col" => GlueTriple::t0_col(params, rest.trim().parse().map_err(|_| bad())?),
            "tmin+" | "tmin-" => {
                let v = ints(rest)?;
                if v.len() != 2 {
                    return Err(bad());
                }
                if head == "tmin+" {
                    GlueTriple::tmin_plus(params, v[0], v[1])
                } else {
                    GlueTriple::tmin_minus(params, v[0], v[1])
                }
            }
            "+" | "-" => {
                let sign = if head == "+" { Sign::Plus } else { Sign::Minus };
                let parts: Vec<&str> = rest.split('/').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                let mut labels = Vec::new();
                for p in parts {
                    let v = ints(p)?;
                    if v.len() != 3 {
                        return Err(bad());
                    }
                    labels.push(KacLabel::new(params, v[0], v[1], v[2]));
                }
                GlueTriple::new(params, sign, [labels[0], labels[1], labels[2]])
            }
            _ => Err(bad()),
        }
    }
}

/// Which deformation to build from a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `F_{α₁} ⊕ F_{α₂}` glued by `Q_τ`.
    Single,
    /// `F_{α₁} ⊕ F_{α₁+rα₊} ⊕ F_{α₁+sα₋}` glued by `Q^{[r]}_+ + Q^{[s]}_−`.
    Tilde,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "single" => Ok(Variant::Single),
            "tilde" => Ok(Variant::Tilde),
            _ => Err(Error::UnknownName(format!("variant {s:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Single => "single",
            Variant::Tilde => "tilde",
        })
    }
}

/// A direct sum of Fock modules whose first summand acts by
/// `L_n + Σ_j [Q_j, a_n]`, the maps `Q_j` landing in the other summands.
///
/// The module is graded by absolute weight: global level `ℓ` is weight
/// `base_weight + ℓ`, and summand `i` contributes its level `ℓ − offsets[i]`.
#[derive(Clone, Debug)]
pub struct DeformedModule {
    pub params: Params,
    pub labels: Vec<KacLabel>,
    pub summands: Vec<FockModule<FieldElem>>,
    pub offsets: Vec<usize>,
    pub base_weight: Rat,
    /// `(target summand, Q)` with `Q` leaving summand 0.
    pub glue: Vec<(usize, GradedMap)>,
    /// Highest global level carried.
    pub trunc: usize,
}

/// Builds `(F(τ), J_τ)` or its tilde variant on global levels `0..=trunc`.
pub fn build_deformed(tau: &GlueTriple, variant: Variant, trunc: usize) -> Result<DeformedModule> {
    let params = tau.params;
    let first = tau.labels[0];
    let specs = match variant {
        Variant::Single => vec![ScreeningSpec::new(tau.sign, &first)?],
        Variant::Tilde => {
            if !tau.class.is_braided() {
                return Err(Error::InvalidTriple(format!(
                    "tilde deformation needs a braided first module, got {:?}",
                    tau.class
                )));
            }
            vec![
                ScreeningSpec::new(Sign::Plus, &first)?,
                ScreeningSpec::new(Sign::Minus, &first)?,
            ]
        }
    };
    let mut labels = vec![first];
    labels.extend(specs.iter().map(|s| s.target));
    let weights: Vec<Rat> = labels.iter().map(KacLabel::weight).collect();
    let base = weights.iter().min().cloned().expect("nonempty");
    let offsets: Vec<usize> = weights
        .iter()
        .map(|h| {
            (h.clone() - base.clone())
                .to_i64()
                .expect("integral offset") as usize
        })
        .collect();
    let summands = labels
        .iter()
        .zip(&offsets)
        .map(|(l, &o)| FockModule::from_label(l, trunc.saturating_sub(o)))
        .collect();
    let src_trunc = trunc.saturating_sub(offsets[0]);
    let glue = specs
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((i + 1, screening(s.sign, &first, src_trunc)?)))
        .collect::<Result<_>>()?;
    Ok(DeformedModule {
        params,
        labels,
        summands,
        offsets,
        base_weight: base,
        glue,
        trunc,
    })
}

impl DeformedModule {
    fn local_level(&self, i: usize, level: i64) -> Option<usize> {
        let l = level - self.offsets[i] as i64;
        (l >= 0 && level <= self.trunc as i64).then_some(l as usize)
    }

    /// Dimension of global level `level`.
    pub fn dim(&self, level: i64) -> usize {
        (0..self.summands.len())
            .filter_map(|i| self.local_level(i, level))
            .map(partition_count)
            .sum()
    }

    /// Start of summand `i` inside the coordinate vector of `level`.
    fn start(&self, i: usize, level: i64) -> usize {
        (0..i)
            .filter_map(|j| self.local_level(j, level))
            .map(partition_count)
            .sum()
    }

    /// `J(L_n)` from global level `level` to `level − n`.
    pub fn mode_matrix(&self, n: i64, level: usize) -> Result<Matrix<FieldElem>> {
        let l = level as i64;
        let target = l - n;
        if l > self.trunc as i64 || target > self.trunc as i64 {
            return Err(Error::BeyondTruncation {
                level: l.max(target),
                trunc: self.trunc,
            });
        }
        let mut m = Matrix::zeros(self.dim(target), self.dim(l));
        let place = |m: &mut Matrix<FieldElem>, block: &Matrix<FieldElem>, r0: usize, c0: usize| {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    m[(r0 + i, c0 + j)] = block[(i, j)].clone();
                }
            }
        };
        for (i, f) in self.summands.iter().enumerate() {
            let (Some(k), Some(_)) = (self.local_level(i, l), self.local_level(i, target)) else {
                continue;
            };
            let block = f.virasoro_matrix(n, k)?;
            place(&mut m, &block, self.start(i, target), self.start(i, l));
        }
        if let Some(k) = self.local_level(0, l) {
            for (j, q) in &self.glue {
                if self.local_level(*j, target).is_none() {
                    continue;
                }
                let block = lambda_block(q, n, k)?;
                place(&mut m, &block, self.start(*j, target), self.start(0, l));
            }
        }
        Ok(m)
    }

    /// First `(m, n, level)` where `[J(L_m), J(L_n)] ≠ (m−n) J(L_{m+n}) +
    /// c/12 (m³−m) δ`, for `|m|, |n| ≤ max_mode` and levels `≤ max_level`
    /// (every intermediate level must lie within the truncation).
    pub fn bracket_defect(
        &self,
        max_mode: i64,
        max_level: usize,
    ) -> Result<Option<(i64, i64, usize)>> {
        let c = self.params.central_charge();
        let top = self.trunc as i64;
        for m in -max_mode..=max_mode {
            for n in -max_mode..=max_mode {
                for level in 0..=max_level {
                    let l = level as i64;
                    if [l - m, l - n, l - m - n].iter().any(|&x| x > top) {
                        continue;
                    }
                    let prod = |a: i64, b: i64| -> Result<Matrix<FieldElem>> {
                        let rows = self.dim(l - a - b);
                        if l - b < 0 {
                            return Ok(Matrix::zeros(rows, self.dim(l)));
                        }
                        let first = self.mode_matrix(b, level)?;
                        let second = self.mode_matrix(a, (l - b) as usize)?;
                        Ok(second.mul(&first))
                    };
                    let lhs = prod(m, n)?.sub(&prod(n, m)?);
                    let mut rhs = self
                        .mode_matrix(m + n, level)?
                        .scale(&FieldElem::from(m - n));
                    if m + n == 0 {
                        let central = c.clone() * Rat::new(m * m * m - m, 12);
                        rhs = rhs
                            .add(&Matrix::identity(self.dim(l)).scale(&FieldElem::from(central)));
                    }
                    if lhs != rhs {
                        return Ok(Some((m, n, level)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Jordan data of `J(L₀)` on one weight space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanLevel {
    pub level: usize,
    pub eigenvalue: Rat,
    pub dim: usize,
    /// Entry `i` counts Jordan blocks of size `i + 1`.
    pub block_counts: Vec<usize>,
}

impl JordanLevel {
    pub fn max_block(&self) -> usize {
        self.block_counts.len()
    }
}

/// Jordan structure of `J(L₀)` on global levels `0..=levels`, from the
/// ranks of powers of its nilpotent part.
pub fn jordan_profile(m: &DeformedModule, levels: usize) -> Result<Vec<JordanLevel>> {
    (0..=levels)
        .map(|level| {
            let dim = m.dim(level as i64);
            let eigenvalue = m.base_weight.clone() + Rat::from(level as i64);
            let shift = FieldElem::from(eigenvalue.clone());
            let l0 = m.mode_matrix(0, level)?;
            let nil = l0.sub(&Matrix::identity(dim).scale(&shift));
            let mut ranks = vec![dim];
            let mut power = Matrix::identity(dim);
            while *ranks.last().expect("nonempty") > 0 {
                power = power.mul(&nil);
                let r = power.rank();
                if r == *ranks.last().expect("nonempty") {
                    return Err(Error::Invariant(format!(
                        "J(L0) is not {eigenvalue} plus nilpotent at level {level}"
                    )));
                }
                ranks.push(r);
            }
            // Blocks of size ≥ j: ranks[j−1] − ranks[j].
            let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
            let block_counts = (0..at_least.len())
                .map(|j| at_least[j] - at_least.get(j + 1).copied().unwrap_or(0))
                .collect();
            Ok(JordanLevel {
                level,
                eigenvalue,
                dim,
                block_counts,
            })
        })
        .collect()
}

/// The momentum derivative of a singular vector and its screening images.
#[derive(Clone, Debug, Serialize)]
pub struct LimitVector {
    /// The Fock module `F_{a,b;0}` carrying the vector.
    pub label: KacLabel,
    pub level: usize,
    pub vector: GradedVector,
    /// `Q^{[a]}_+ u` as the coefficient of the target vacuum (when `a < p₊`).
    pub plus_image: Option<FieldElem>,
    /// `Q^{[b]}_− u` as the coefficient of the target vacuum (when `b < p₋`).
    pub minus_image: Option<FieldElem>,
}

/// `u = d/dx (e^{−x p̂} S_{a,b} e^{x p̂}|α_{a,b}⟩)|_{x=0}` in `F_{a,b;0}`,
/// evaluated with a dual-number momentum. The `x⁰` part must vanish
/// ([`Error::DivisibilityFailure`] otherwise), `u` must be nonzero, and each
/// defined screening must send `u` to a nonzero multiple of the target
/// vacuum.
pub fn limit_singular_vector(params: Params, a: i64, b: i64) -> Result<LimitVector> {
    if !(1..=params.p_plus()).contains(&a) || !(1..=params.p_minus()).contains(&b) {
        return Err(Error::OutOfRange(format!(
            "({a},{b}) outside the Kac table"
        )));
    }
    let label = KacLabel::new(params, a, b, 0);
    let level = (a * b) as usize;
    let sing = Verma::new(params, level).shapovalov_element(a, b)?;
    let fock = FockModule::new(
        Dual::new(label.momentum(), FieldElem::one()),
        Dual::real(params.alpha0()),
        level,
    );
    let mut acc = vec![DualElem::zero(); partition_count(level)];
    for (word, coeff) in &sing.coeffs {
        let modes: Vec<i64> = word.parts().iter().map(|&k| -(k as i64)).collect();
        let col = word_matrix(&fock, &modes, 0)?.column(0);
        let c = DualElem::real(FieldElem::from(coeff.clone()));
        for (x, y) in acc.iter_mut().zip(col) {
            *x += &(c.clone() * y);
        }
    }
    if acc.iter().any(|x| !x.re.is_zero()) {
        return Err(Error::DivisibilityFailure(format!(
            "S_{{{a},{b}}} does not annihilate the vacuum of F[{label}]"
        )));
    }
    let u: Vec<FieldElem> = acc.into_iter().map(|x| x.eps).collect();
    if u.iter().all(FieldElem::is_zero) {
        return Err(Error::Invariant(format!(
            "limit vector of F[{label}] vanishes"
        )));
    }
    let image = |sign: Sign| -> Result<FieldElem> {
        let q = screening(sign, &label, level)?;
        let v = q.block(level)?.mul_vec(&u);
        if v.len() != 1 || v[0].is_zero() {
            return Err(Error::Invariant(format!(
                "Q{sign} of the limit vector of F[{label}] is not a nonzero vacuum multiple"
            )));
        }
        Ok(v[0].clone())
    };
    let plus_image = (a < params.p_plus())
        .then(|| image(Sign::Plus))
        .transpose()?;
    let minus_image = (b < params.p_minus())
        .then(|| image(Sign::Minus))
        .transpose()?;
    Ok(LimitVector {
        label,
        level,
        vector: GradedVector::from_dense(ModuleTag::Fock(label.momentum()), level, &u),
        plus_image,
        minus_image,
    })
}
