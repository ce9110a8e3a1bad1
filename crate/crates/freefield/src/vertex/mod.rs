//! Vertex-operator modes between Fock modules, screening operators realised
//! as Virasoro intertwiners, rank profiles and Felder-complex homology.

mod felder;
mod solver;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::fock::{level_basis, partition_count, FockModule, Partition};
use crate::lattice::{KacLabel, Sign};
use crate::linalg::Matrix;
use crate::scalars::{Field, FieldElem, Rat, Ring};
use crate::{Error, Result};

pub use felder::{check_composition, felder_homology, FelderComplex};
pub use solver::{
    commutation_defect, compare_with_solved, solve_intertwiner, solve_intertwiner_with,
    ConstraintSet, SolvedComparison,
};

/// Binomial coefficient as a rational.
fn binomial(n: usize, k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * Rat::new((n - i) as i64, (i + 1) as i64);
    }
    acc
}

fn factorial(n: usize) -> Rat {
    (1..=n).fold(Rat::one(), |acc, i| acc * Rat::from(i as i64))
}

/// All sub-multisets of a partition, each with its removal coefficient
/// `∏_k (−α)^{j_k} C(M_k, j_k)`.
fn removals(p: &Partition, alpha: &FieldElem) -> Vec<(Partition, usize, FieldElem)> {
    let mults = p.multiplicities();
    let mut out = vec![(p.clone(), 0usize, FieldElem::one())];
    let neg = -alpha.clone();
    for (part, m) in mults {
        let mut next = Vec::new();
        for (rest, removed, coeff) in &out {
            let mut cur = rest.clone();
            let mut power = FieldElem::one();
            for j in 0..=m {
                if j > 0 {
                    cur = cur.without_part(part).expect("part present");
                    power = power * &neg;
                }
                let c = coeff.clone() * &power * &FieldElem::from(binomial(m, j));
                next.push((cur.clone(), removed + j * part as usize, c));
            }
        }
        out = next;
    }
    out
}

/// Coefficient of `a_{−ν}` in `exp(α Σ a_{−n} zⁿ / n)`:
/// `∏_n (α/n)^{m_n} / m_n!`.
fn creation_coeff(nu: &Partition, alpha: &FieldElem) -> FieldElem {
    let mut c = FieldElem::one();
    for (part, m) in nu.multiplicities() {
        let base = alpha.scale(&Rat::new(1, part as i64));
        for _ in 0..m {
            c = c * &base;
        }
        c = c.scale(&factorial(m).recip().expect("factorial is nonzero"));
    }
    c
}

/// The `z^{αβ + k_out − k_in}` coefficient of the vertex operator `V_α(z)`
/// restricted to `F_β[k_in] → F_{β+α}[k_out]`, in the partition bases.
///
/// `V_α(z) = e^{α q̂} z^{α a₀} exp(α Σ a_{−n} zⁿ/n) exp(−α Σ a_n z^{−n}/n)`;
/// the leading coefficient (vacuum to vacuum) is 1. Fails with
/// [`Error::NonIntegral`] unless `αβ` is an integer.
pub fn vertex_mode(
    alpha: &FieldElem,
    source_momentum: &FieldElem,
    k_in: usize,
    k_out: usize,
) -> Result<Matrix<FieldElem>> {
    integral_exponent(alpha, source_momentum)?;
    let src = level_basis(k_in);
    let tgt = level_basis(k_out);
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, lambda) in src.parts.iter().enumerate() {
        for (rest, removed, coeff) in removals(lambda, alpha) {
            let add = k_out as i64 - k_in as i64 + removed as i64;
            if add < 0 {
                continue;
            }
            for nu in &level_basis(add as usize).parts {
                let mut parts = rest.parts().to_vec();
                parts.extend_from_slice(nu.parts());
                let i = tgt
                    .index_of(&Partition::new(parts))
                    .expect("result partition at target level");
                let c = coeff.clone() * &creation_coeff(nu, alpha);
                m[(i, j)] += &c;
            }
        }
    }
    Ok(m)
}

/// `αβ` as an integer, or [`Error::NonIntegral`].
fn integral_exponent(alpha: &FieldElem, beta: &FieldElem) -> Result<i64> {
    let e = alpha.checked_mul(beta)?;
    e.to_rat()
        .filter(Rat::is_integer)
        .and_then(|r| r.to_i64())
        .ok_or_else(|| Error::NonIntegral(format!("{alpha} · {beta} = {e}")))
}

/// A degree-homogeneous linear map between truncated Fock modules, stored
/// as one matrix per source level. Source level `k` maps to target level
/// `k − shift`; blocks with a negative target level have zero rows.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: FockModule<FieldElem>,
    pub target: FockModule<FieldElem>,
    pub source_label: Option<KacLabel>,
    pub target_label: Option<KacLabel>,
    pub shift: i64,
    pub blocks: BTreeMap<usize, Matrix<FieldElem>>,
}

impl GradedMap {
    /// Highest source level carried.
    pub fn trunc(&self) -> usize {
        self.source.trunc()
    }

    pub fn target_level(&self, k: usize) -> i64 {
        k as i64 - self.shift
    }

    pub fn block(&self, k: usize) -> Result<&Matrix<FieldElem>> {
        self.blocks.get(&k).ok_or(Error::BeyondTruncation {
            level: k as i64,
            trunc: self.trunc(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// First nonzero entry in (level, row, column) order.
    pub fn leading_entry(&self) -> Option<FieldElem> {
        self.blocks
            .values()
            .flat_map(|b| b.entries())
            .find(|x| !x.is_zero())
            .cloned()
    }

    pub fn scale(&self, c: &FieldElem) -> GradedMap {
        let mut out = self.clone();
        for b in out.blocks.values_mut() {
            *b = b.scale(c);
        }
        out
    }

    /// Rescales so the leading entry is 1 (a zero map is left alone).
    pub fn normalized(&self) -> GradedMap {
        match self.leading_entry() {
            Some(c) => self.scale(&c.inv().expect("leading entry is nonzero")),
            None => self.clone(),
        }
    }

    /// The same map on source levels `0..=levels` only.
    pub fn restricted(&self, levels: usize) -> GradedMap {
        if levels >= self.trunc() {
            return self.clone();
        }
        let target_top = (levels as i64 - self.shift).max(0) as usize;
        GradedMap {
            source: self.source.truncated(levels),
            target: self.target.truncated(target_top.min(self.target.trunc())),
            source_label: self.source_label,
            target_label: self.target_label,
            shift: self.shift,
            blocks: self
                .blocks
                .range(..=levels)
                .map(|(k, b)| (*k, b.clone()))
                .collect(),
        }
    }

    /// Rank of each source-level block.
    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.values().map(Matrix::rank).collect()
    }

    /// The scalar `λ` with `self = λ · other`, if one exists.
    pub fn proportionality(&self, other: &GradedMap) -> Option<FieldElem> {
        if self.shift != other.shift {
            return None;
        }
        let mut ratio: Option<FieldElem> = None;
        for (k, a) in &self.blocks {
            let b = other.blocks.get(k)?;
            if a.shape() != b.shape() {
                return None;
            }
            for (x, y) in a.entries().zip(b.entries()) {
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => {}
                    (false, false) => {
                        let q = x.checked_div(y).ok()?;
                        match &ratio {
                            Some(r) if *r != q => return None,
                            Some(_) => {}
                            None => ratio = Some(q),
                        }
                    }
                    _ => return None,
                }
            }
        }
        ratio
    }
}

/// The residue `∮ V_{α±}(z) dz` on `F_{source}` up to source level `trunc`.
///
/// The residue picks the `z^{−1}` coefficient, so source level `k` maps to
/// target level `k − 1 − α±·β`.
pub fn simple_screening(sign: Sign, source: &KacLabel, trunc: usize) -> Result<GradedMap> {
    let params = source.params;
    let alpha = params.alpha(sign);
    let beta = source.momentum();
    let ab = integral_exponent(&alpha, &beta)?;
    let shift = 1 + ab;
    let target_momentum = beta.clone() + &alpha;
    let target_label = KacLabel::from_momentum(params, &target_momentum)?;
    let target_trunc = (trunc as i64 - shift).max(0) as usize;
    let mut blocks = BTreeMap::new();
    for k in 0..=trunc {
        let t = k as i64 - shift;
        let block = if t < 0 {
            Matrix::zeros(0, partition_count(k))
        } else {
            vertex_mode(&alpha, &beta, k, t as usize)?
        };
        blocks.insert(k, block);
    }
    Ok(GradedMap {
        source: FockModule::new(beta, params.alpha0(), trunc),
        target: FockModule::new(target_momentum, params.alpha0(), target_trunc),
        source_label: Some(source.normalized()),
        target_label: Some(target_label),
        shift,
        blocks,
    })
}

/// Source, target and level shift of the screening `Q^{[a]}_±`.
///
/// `Q^{[a]}_+ : F_{a,s;n} → F_{p₊−a,s;n+1}` needs `r = a` in the normalized
/// source label; `Q^{[b]}_− : F_{r,b;n} → F_{r,p₋−b;n−1}` needs `s = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScreeningSpec {
    pub sign: Sign,
    pub index: i64,
    pub source: KacLabel,
    pub target: KacLabel,
    pub shift: i64,
}

impl ScreeningSpec {
    pub fn new(sign: Sign, source: &KacLabel) -> Result<ScreeningSpec> {
        let src = source.normalized();
        let p = src.params;
        let (index, target) = match sign {
            Sign::Plus => (
                src.r,
                KacLabel::new(p, p.p_plus() - src.r, src.s, src.n + 1),
            ),
            Sign::Minus => (
                src.s,
                KacLabel::new(p, src.r, p.p_minus() - src.s, src.n - 1),
            ),
        };
        if index >= p.p(sign) {
            return Err(Error::OutOfRange(format!(
                "no screening Q{sign} on F[{src}]: index must be below {}",
                p.p(sign)
            )));
        }
        let diff = target.weight() - src.weight();
        let shift = diff
            .to_i64()
            .filter(|_| diff.is_integer())
            .ok_or_else(|| Error::Invariant(format!("non-integral screening shift {diff}")))?;
        Ok(ScreeningSpec {
            sign,
            index,
            source: src,
            target: target.normalized(),
            shift,
        })
    }
}

fn zero_map(spec: &ScreeningSpec, trunc: usize) -> GradedMap {
    let alpha0 = spec.source.params.alpha0();
    GradedMap {
        source: FockModule::new(spec.source.momentum(), alpha0.clone(), trunc),
        target: FockModule::new(spec.target.momentum(), alpha0, 0),
        source_label: Some(spec.source),
        target_label: Some(spec.target),
        shift: spec.shift,
        blocks: (0..=trunc)
            .map(|k| (k, Matrix::zeros(0, partition_count(k))))
            .collect(),
    }
}

/// `Q^{[a]}_±` on the Fock module `source` up to source level `trunc`:
/// the explicit residue for `a = 1`, the unique solved intertwiner (with
/// leading entry 1) otherwise. When the level shift exceeds `trunc` the
/// map is zero on every carried level.
pub fn screening(sign: Sign, source: &KacLabel, trunc: usize) -> Result<GradedMap> {
    let spec = ScreeningSpec::new(sign, source)?;
    if spec.index == 1 {
        return simple_screening(sign, &spec.source, trunc);
    }
    if spec.shift > trunc as i64 {
        // Every source level maps below the target's vacuum.
        return Ok(zero_map(&spec, trunc));
    }
    let mut sols = solve_intertwiner(&spec.source, &spec.target, trunc)?;
    if sols.len() != 1 {
        return Err(Error::SolutionDimension {
            dim: sols.len(),
            context: format!(
                "Q{sign}^[{}] on F[{}] to level {trunc}",
                spec.index, spec.source
            ),
        });
    }
    Ok(sols.remove(0))
}

/// Kernel dimensions per source level and image dimensions per target
/// level of a graded map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub shift: i64,
    /// `dim ker` at source levels `0..=trunc`.
    pub ker_dims: Vec<usize>,
    /// `dim im` at target levels `0..=trunc − shift`.
    pub im_dims: Vec<usize>,
}

pub fn map_rank_profile(map: &GradedMap) -> RankProfile {
    let ranks = map.ranks();
    let ker_dims = ranks
        .iter()
        .enumerate()
        .map(|(k, r)| partition_count(k) - r)
        .collect();
    let top = map.trunc() as i64 - map.shift;
    let im_dims = (0..=top.max(-1))
        .map(|t| {
            let k = t + map.shift;
            if k < 0 {
                0
            } else {
                ranks[k as usize]
            }
        })
        .collect();
    RankProfile {
        shift: map.shift,
        ker_dims,
        im_dims,
    }
}

/// Level shift `h_target − h_source` for a pair of lattice labels, if integral.
pub fn grading_shift(source: &KacLabel, target: &KacLabel) -> Option<i64> {
    let d = target.weight() - source.weight();
    d.is_integer().then(|| d.to_i64()).flatten()
}
