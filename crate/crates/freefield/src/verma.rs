//! Verma modules `M(h, c)` at the fixed central charge of a parameter pair,
//! with the highest weight `h` kept symbolic: PBW reordering, Gram
//! (Shapovalov-form) matrices, singular-vector elements, irreducible graded
//! dimensions and the linearization of the singular-vector norm.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::fock::{level_basis, GradedVector, ModuleTag, Partition};
use crate::lattice::Params;
use crate::linalg::Matrix;
use crate::scalars::{FieldElem, HPoly, Rat, Ring};
use crate::{Error, Result};

/// A PBW monomial `L_{−k₁} L_{−k₂} ⋯ |h⟩` with `k₁ ≥ k₂ ≥ ⋯`, stored as the
/// partition `(k₁, k₂, …)`.
pub type PbwWord = Partition;

/// Linear combination of PBW words with coefficients polynomial in `h`.
pub type PbwCombination = BTreeMap<PbwWord, HPoly>;

/// Gram matrix of one level, entries polynomial in `h`, rows and columns in
/// basis order.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub level: usize,
    pub entries: Matrix<HPoly>,
}

impl GramMatrix {
    /// The rational matrix at a fixed weight.
    pub fn eval(&self, h: &Rat) -> Matrix<Rat> {
        self.entries.map(|p| p.eval(h))
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }
}

/// The singular-vector element `S_{r,s}` solved at `h = h_{r,s}`,
/// normalized so that the coefficient of `L_{−1}^{rs}` is one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapovalovElement {
    pub r: i64,
    pub s: i64,
    pub coeffs: BTreeMap<PbwWord, Rat>,
}

impl ShapovalovElement {
    pub fn level(&self) -> usize {
        (self.r * self.s) as usize
    }

    /// Coordinates in basis order.
    pub fn dense(&self) -> Vec<Rat> {
        level_basis(self.level())
            .parts
            .iter()
            .map(|p| self.coeffs.get(p).cloned().unwrap_or_else(Rat::zero))
            .collect()
    }

    pub fn coeff(&self, word: &[u32]) -> Rat {
        self.coeffs
            .get(&Partition::new(word.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// The singular vector as a state of `M(h)`.
    pub fn to_graded_vector(&self, h: &Rat) -> GradedVector {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(w, c)| (w.clone(), FieldElem::from(c.clone())))
            .collect();
        GradedVector {
            tag: ModuleTag::Verma(h.clone()),
            level: self.level(),
            coeffs,
        }
    }
}

/// Result of pairing `S_{r,s}` with itself at generic `h`.
#[derive(Clone, Debug, Serialize)]
pub struct Linearization {
    /// `P(h) = ⟨h| σ(S) S |h⟩`.
    pub norm: HPoly,
    /// `P(h_{r,s})`, zero for a genuine singular vector.
    pub value_at_root: Rat,
    /// `P′(h_{r,s})` from the Gram matrix.
    pub r_bruteforce: Rat,
    /// The closed product formula.
    pub r_formula: Rat,
}

type ApplyMemo = HashMap<(i64, PbwWord), Arc<PbwCombination>>;

/// Verma modules at the central charge of `params`, truncated at `trunc`,
/// with all reordering results memoized.
pub struct Verma {
    params: Params,
    c: Rat,
    trunc: usize,
    memo: Mutex<ApplyMemo>,
    grams: Mutex<HashMap<usize, Arc<GramMatrix>>>,
    dims: Mutex<HashMap<Rat, Vec<usize>>>,
}

fn add_term(acc: &mut PbwCombination, w: PbwWord, c: HPoly) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                acc.remove(&w);
            }
        }
        None => {
            acc.insert(w, c);
        }
    }
}

impl Verma {
    pub fn new(params: Params, trunc: usize) -> Verma {
        Verma {
            params,
            c: params.central_charge(),
            trunc,
            memo: Mutex::new(HashMap::new()),
            grams: Mutex::new(HashMap::new()),
            dims: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn central_charge(&self) -> &Rat {
        &self.c
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k > self.trunc {
            Err(Error::BeyondTruncation {
                level: k as i64,
                trunc: self.trunc,
            })
        } else {
            Ok(())
        }
    }

    /// `L_n` applied to a PBW word, reordered into the PBW basis.
    pub fn apply(&self, n: i64, word: &PbwWord) -> Arc<PbwCombination> {
        let key = (n, word.clone());
        if let Some(hit) = self.memo.lock().expect("memo").get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.apply_uncached(n, word));
        self.memo.lock().expect("memo").insert(key, result.clone());
        result
    }

    fn apply_uncached(&self, n: i64, word: &PbwWord) -> PbwCombination {
        let mut out = PbwCombination::new();
        let level = word.size() as i64;
        if n == 0 {
            let coeff = HPoly::var() + HPoly::constant(Rat::from(level));
            add_term(&mut out, word.clone(), coeff);
            return out;
        }
        let Some(&first) = word.parts().first() else {
            if n < 0 {
                add_term(&mut out, Partition::new(vec![(-n) as u32]), HPoly::one());
            }
            return out;
        };
        let k = first as i64;
        if n < 0 && -n >= k {
            add_term(&mut out, word.with_part((-n) as u32), HPoly::one());
            return out;
        }
        // L_n L_{−k} W = L_{−k} L_n W + (n+k) L_{n−k} W + (c/12)(n³−n) δ_{n,k} W
        let rest = word.without_part(first).expect("leading part");
        for (u, cu) in self.apply(n, &rest).iter() {
            for (v, cv) in self.apply(-k, u).iter() {
                add_term(&mut out, v.clone(), cu.clone() * cv);
            }
        }
        if n + k != 0 {
            let f = Rat::from(n + k);
            for (u, cu) in self.apply(n - k, &rest).iter() {
                add_term(&mut out, u.clone(), cu.scale(&f));
            }
        }
        if n == k {
            let central = &self.c * Rat::new(n * n * n - n, 12);
            add_term(&mut out, rest, HPoly::constant(central));
        }
        out
    }

    /// Matrix of `L_n` from level `k` to level `k − n`, entries in `h`.
    pub fn virasoro_matrix(&self, n: i64, k: usize) -> Result<Matrix<HPoly>> {
        self.check_level(k)?;
        let target = k as i64 - n;
        if target < 0 {
            return Ok(Matrix::zeros(0, level_basis(k).len()));
        }
        self.check_level(target as usize)?;
        let src = level_basis(k);
        let tgt = level_basis(target as usize);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (j, w) in src.parts.iter().enumerate() {
            for (u, c) in self.apply(n, w).iter() {
                let i = tgt.index_of(u).expect("reordered word at target level");
                m[(i, j)] = c.clone();
            }
        }
        Ok(m)
    }

    /// Gram matrix `⟨h| σ(w_λ) w_μ |h⟩` of level `k`, with `σ(L_n) = L_{−n}`
    /// and `⟨h|h⟩ = 1`.
    pub fn gram_matrix(&self, k: usize) -> Result<Arc<GramMatrix>> {
        self.check_level(k)?;
        if let Some(g) = self.grams.lock().expect("gram cache").get(&k) {
            return Ok(g.clone());
        }
        let basis = level_basis(k);
        let mut entries = Matrix::zeros(basis.len(), basis.len());
        if k == 0 {
            entries[(0, 0)] = HPoly::one();
        } else {
            for (i, lam) in basis.parts.iter().enumerate() {
                let first = lam.parts()[0];
                let lam_rest = lam.without_part(first).expect("leading part");
                let lower = self.gram_matrix(k - first as usize)?;
                let lower_basis = level_basis(k - first as usize);
                let row = lower_basis.index_of(&lam_rest).expect("shorter partition");
                for (j, mu) in basis.parts.iter().enumerate() {
                    let mut acc = HPoly::zero();
                    for (nu, c) in self.apply(first as i64, mu).iter() {
                        let col = lower_basis.index_of(nu).expect("lower word");
                        acc += &(c.clone() * &lower.entries[(row, col)]);
                    }
                    entries[(i, j)] = acc;
                }
            }
        }
        let g = Arc::new(GramMatrix { level: k, entries });
        self.grams.lock().expect("gram cache").insert(k, g.clone());
        Ok(g)
    }

    /// `S_{r,s}`: the unique (up to scale) level-`rs` vector of `M(h_{r,s})`
    /// annihilated by `L₁` and `L₂`.
    pub fn shapovalov_element(&self, r: i64, s: i64) -> Result<ShapovalovElement> {
        if r < 1 || s < 1 {
            return Err(Error::OutOfRange(format!(
                "singular vector label ({r},{s})"
            )));
        }
        let level = (r * s) as usize;
        self.check_level(level)?;
        let h = self.params.h(r, s, 0);
        let l1 = self.virasoro_matrix(1, level)?.map(|p| p.eval(&h));
        let l2 = self.virasoro_matrix(2, level)?.map(|p| p.eval(&h));
        let ns = l1.vstack(&l2).nullspace();
        if ns.len() != 1 {
            return Err(Error::SolutionDimension {
                dim: ns.len(),
                context: format!("singular vector ({r},{s}) at h = {h}"),
            });
        }
        let v = &ns[0];
        let lead = v.last().expect("nonempty level").clone();
        if lead.is_zero() {
            return Err(Error::Invariant(format!(
                "singular vector ({r},{s}) has no L_-1^{level} term"
            )));
        }
        let inv = lead.recip()?;
        let basis = level_basis(level);
        let coeffs = basis
            .parts
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c * &inv))
            .collect();
        Ok(ShapovalovElement { r, s, coeffs })
    }

    /// `P(h) = vᵀ G(h) v` for `v = S_{r,s}`, its derivative at `h_{r,s}`, and
    /// the closed product formula for that derivative.
    pub fn shapovalov_linearization(&self, r: i64, s: i64) -> Result<Linearization> {
        let sv = self.shapovalov_element(r, s)?;
        let v = sv.dense();
        let g = self.gram_matrix(sv.level())?;
        let mut norm = HPoly::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                norm += &g.entries[(i, j)].scale(&(vi * vj));
            }
        }
        let h = self.params.h(r, s, 0);
        let (value_at_root, r_bruteforce) = crate::scalars::poly_eval_derive(&norm, &h);
        Ok(Linearization {
            norm,
            value_at_root,
            r_bruteforce,
            r_formula: linearization_formula(&self.params, r, s),
        })
    }

    /// `dim L(h)[k]` for `k = 0..=n`, as ranks of the Gram matrices at `h`.
    pub fn irreducible_dims(&self, h: &Rat, n: usize) -> Result<Vec<usize>> {
        self.check_level(n)?;
        if let Some(d) = self.dims.lock().expect("dims cache").get(h) {
            if d.len() > n {
                return Ok(d[..=n].to_vec());
            }
        }
        let dims = (0..=n)
            .map(|k| Ok(self.gram_matrix(k)?.eval(h).rank()))
            .collect::<Result<Vec<usize>>>()?;
        self.dims
            .lock()
            .expect("dims cache")
            .insert(h.clone(), dims.clone());
        Ok(dims)
    }
}

/// `R_{r,s} = 2 t^{−(2rs−1)} ∏_{k=1−r}^{r} ∏_{l=1−s}^{s} (k + l t)` with
/// `t = p₊/p₋`, the pairs `(0,0)` and `(r,s)` omitted.
pub fn linearization_formula(params: &Params, r: i64, s: i64) -> Rat {
    let t = Rat::new(params.p_plus(), params.p_minus());
    let mut acc = Rat::from(2);
    for k in 1 - r..=r {
        for l in 1 - s..=s {
            if (k, l) == (0, 0) || (k, l) == (r, s) {
                continue;
            }
            acc = acc * (Rat::from(k) + Rat::from(l) * &t);
        }
    }
    let exponent = (2 * r * s - 1) as i32;
    acc * t.pow(-exponent).expect("t is nonzero")
}
