//! Felder complexes of screening operators and their graded homology.

use serde::Serialize;

use crate::fock::partition_count;
use crate::lattice::{KacLabel, Params, Sign};
use crate::{Error, Result};

use super::{screening, GradedMap, ScreeningSpec};

/// The two-periodic complex of screenings through `F_{r,s;0}`.
///
/// For `+`, position `n` holds `F_{r,s;n}` (even `n`) or `F_{p₊−r,s;n}`
/// (odd `n`), and `Q₊` maps position `n` to `n + 1`. For `−`, position `n`
/// holds `F_{r,s;n}` or `F_{r,p₋−s;n}`, and `Q₋` maps `n` to `n − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FelderComplex {
    #[serde(skip)]
    pub params: Params,
    pub sign: Sign,
    pub r: i64,
    pub s: i64,
}

impl FelderComplex {
    pub fn new(params: Params, sign: Sign, r: i64, s: i64) -> Result<FelderComplex> {
        let (pp, pm) = (params.p_plus(), params.p_minus());
        let ok = match sign {
            Sign::Plus => (1..pp).contains(&r) && (1..=pm).contains(&s),
            Sign::Minus => (1..=pp).contains(&r) && (1..pm).contains(&s),
        };
        if !ok {
            return Err(Error::OutOfRange(format!(
                "no {sign} Felder complex through ({r},{s}) at {params}"
            )));
        }
        Ok(FelderComplex { params, sign, r, s })
    }

    pub fn module_at(&self, pos: i64) -> KacLabel {
        let p = &self.params;
        let even = pos.rem_euclid(2) == 0;
        match (self.sign, even) {
            (_, true) => KacLabel::new(*p, self.r, self.s, pos),
            (Sign::Plus, false) => KacLabel::new(*p, p.p_plus() - self.r, self.s, pos),
            (Sign::Minus, false) => KacLabel::new(*p, self.r, p.p_minus() - self.s, pos),
        }
    }

    fn step(&self) -> i64 {
        match self.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Screening data for the map leaving position `pos`.
    pub fn spec_at(&self, pos: i64) -> Result<ScreeningSpec> {
        let spec = ScreeningSpec::new(self.sign, &self.module_at(pos))?;
        if spec.target != self.module_at(pos + self.step()).normalized() {
            return Err(Error::Invariant(format!(
                "screening from position {pos} leaves the complex"
            )));
        }
        Ok(spec)
    }

    /// The map leaving position `pos`, on source levels `0..=trunc`.
    pub fn map_at(&self, pos: i64, trunc: usize) -> Result<GradedMap> {
        self.spec_at(pos)?;
        screening(self.sign, &self.module_at(pos), trunc)
    }

    /// Homology dimensions at `pos` for levels `0..=levels`; also checks
    /// that the incoming and outgoing maps compose to zero.
    pub fn homology(&self, pos: i64, levels: usize) -> Result<Vec<usize>> {
        let out = self.map_at(pos, levels)?;
        let prev = pos - self.step();
        let d_in = self.spec_at(prev)?.shift;
        let in_top = levels as i64 + d_in;
        let incoming = if in_top >= 0 {
            Some(self.map_at(prev, in_top as usize)?)
        } else {
            None
        };
        if let Some(inc) = &incoming {
            check_composition(inc, &out)?;
        }
        let out_ranks = out.ranks();
        let in_ranks = incoming.as_ref().map(GradedMap::ranks).unwrap_or_default();
        (0..=levels)
            .map(|k| {
                let src = k as i64 + d_in;
                let rin = if src >= 0 && (src as usize) < in_ranks.len() {
                    in_ranks[src as usize]
                } else {
                    0
                };
                partition_count(k)
                    .checked_sub(out_ranks[k] + rin)
                    .ok_or_else(|| Error::Invariant(format!("negative homology at level {k}")))
            })
            .collect()
    }
}

/// Fails with [`Error::NonzeroComposition`] unless `second ∘ first = 0` on
/// every level both maps carry.
pub fn check_composition(first: &GradedMap, second: &GradedMap) -> Result<()> {
    for (&k, a) in &first.blocks {
        let mid = k as i64 - first.shift;
        if mid < 0 || mid as usize > second.trunc() {
            continue;
        }
        if mid - second.shift < 0 {
            continue;
        }
        let b = second.block(mid as usize)?;
        if !b.mul(a).is_zero() {
            return Err(Error::NonzeroComposition { level: k });
        }
    }
    Ok(())
}

/// Homology of the `sign` Felder complex through `F_{r,s;0}` at position
/// `pos`, levels `0..=levels`.
pub fn felder_homology(
    params: Params,
    sign: Sign,
    r: i64,
    s: i64,
    pos: i64,
    levels: usize,
) -> Result<Vec<usize>> {
    FelderComplex::new(params, sign, r, s)?.homology(pos, levels)
}
