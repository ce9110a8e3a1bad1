//! Bosonic Fock modules `F_α` with partition bases, the Heisenberg action
//! and the background-charge Virasoro action
//! `L_n = ½ Σ_m :a_m a_{n−m}: − ½ α₀ (n+1) a_n`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::lattice::KacLabel;
use crate::linalg::Matrix;
use crate::scalars::{FieldElem, Rat, Ring};
use crate::{Error, Result};

/// Default truncation level.
pub const DEFAULT_TRUNC: usize = 8;

// ---------------------------------------------------------------------------
// Partitions

/// A partition, stored as weakly decreasing positive parts.
///
/// The ordering is reverse-lexicographic: `[4] < [3,1] < [2,2] < [2,1,1]`,
/// which is the basis order of every level.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts into canonical order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// The partition with one more part `k`.
    pub fn with_part(&self, k: u32) -> Partition {
        let pos = self.0.iter().position(|&p| p < k).unwrap_or(self.0.len());
        let mut parts = self.0.clone();
        parts.insert(pos, k);
        Partition(parts)
    }

    /// The partition with one part `k` removed, if present.
    pub fn without_part(&self, k: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Partitions of one level in basis order, with an index lookup.
#[derive(Debug)]
pub struct LevelBasis {
    pub parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl LevelBasis {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }
}

fn partitions_into(k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if k == 0 {
        out.push(Partition(prefix.clone()));
        return;
    }
    for first in (1..=k.min(max)).rev() {
        prefix.push(first);
        partitions_into(k - first, first, prefix, out);
        prefix.pop();
    }
}

/// Shared, cached basis of partitions of `k`.
pub fn level_basis(k: usize) -> Arc<LevelBasis> {
    static CACHE: OnceLock<Mutex<Vec<Arc<LevelBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("basis cache poisoned");
    while guard.len() <= k {
        let level = guard.len() as u32;
        let mut parts = Vec::new();
        partitions_into(level, level, &mut Vec::new(), &mut parts);
        let index = parts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        guard.push(Arc::new(LevelBasis { parts, index }));
    }
    guard[k].clone()
}

/// The partition count `p(k)`.
pub fn partition_count(k: usize) -> usize {
    level_basis(k).len()
}

// ---------------------------------------------------------------------------
// Graded vectors

/// Which kind of module a [`GradedVector`] lives in.
#[derive(Clone, PartialEq, Debug)]
pub enum ModuleTag {
    /// Fock module of the given momentum.
    Fock(FieldElem),
    /// Verma module of the given highest weight.
    Verma(Rat),
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTag::Fock(a) => write!(f, "F[{a}]"),
            ModuleTag::Verma(h) => write!(f, "M[{h}]"),
        }
    }
}

impl Serialize for ModuleTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A vector inside one weight space, as a sparse map from basis partitions
/// to coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct GradedVector {
    pub tag: ModuleTag,
    pub level: usize,
    pub coeffs: BTreeMap<Partition, FieldElem>,
}

impl GradedVector {
    pub fn zero(tag: ModuleTag, level: usize) -> GradedVector {
        GradedVector {
            tag,
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector of a partition.
    pub fn basis(tag: ModuleTag, p: Partition) -> GradedVector {
        let level = p.size();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(p, FieldElem::one());
        GradedVector { tag, level, coeffs }
    }

    /// Builds from a dense coordinate vector in basis order.
    pub fn from_dense(tag: ModuleTag, level: usize, v: &[FieldElem]) -> GradedVector {
        let basis = level_basis(level);
        assert_eq!(v.len(), basis.len(), "dense vector length");
        let coeffs = basis
            .parts
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p.clone(), c.clone()))
            .collect();
        GradedVector { tag, level, coeffs }
    }

    /// Dense coordinates in basis order.
    pub fn to_dense(&self) -> Vec<FieldElem> {
        let basis = level_basis(self.level);
        let mut v = vec![FieldElem::zero(); basis.len()];
        for (p, c) in &self.coeffs {
            let i = basis.index_of(p).expect("partition of the stored level");
            v[i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, p: &Partition) -> FieldElem {
        self.coeffs.get(p).cloned().unwrap_or_else(FieldElem::zero)
    }
}

// ---------------------------------------------------------------------------
// Fock modules

/// Sparse vector used while building operator matrices.
type Sparse<T> = HashMap<Partition, T>;

fn sparse_add<T: Ring>(acc: &mut Sparse<T>, p: Partition, c: T) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&p) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                acc.remove(&p);
            }
        }
        None => {
            acc.insert(p, c);
        }
    }
}

/// Level-block matrices of `L_n`, keyed by `(n, source level)`.
type ModeCache<T> = Arc<Mutex<HashMap<(i64, usize), Arc<Matrix<T>>>>>;

/// The Fock module `F_α` over a coefficient ring, truncated at level
/// `trunc`. Operator matrices are cached per `(mode, source level)`.
#[derive(Clone)]
pub struct FockModule<T: Ring> {
    momentum: T,
    alpha0: T,
    trunc: usize,
    virasoro_cache: ModeCache<T>,
}

impl<T: Ring> fmt::Debug for FockModule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockModule")
            .field("momentum", &self.momentum)
            .field("trunc", &self.trunc)
            .finish()
    }
}

impl<T: Ring> FockModule<T> {
    pub fn new(momentum: T, alpha0: T, trunc: usize) -> Self {
        FockModule {
            momentum,
            alpha0,
            trunc,
            virasoro_cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn momentum(&self) -> &T {
        &self.momentum
    }

    pub fn alpha0(&self) -> &T {
        &self.alpha0
    }

    /// The same module cut at a different level; the mode cache is shared.
    pub fn truncated(&self, trunc: usize) -> Self {
        FockModule {
            momentum: self.momentum.clone(),
            alpha0: self.alpha0.clone(),
            trunc,
            virasoro_cache: self.virasoro_cache.clone(),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// `h_α = α(α − α₀)/2`.
    pub fn weight(&self) -> T {
        let m = self.momentum.clone();
        (m.clone() * (m - &self.alpha0)).scale(&Rat::new(1, 2))
    }

    /// Same momentum, different truncation (fresh cache).
    pub fn with_trunc(&self, trunc: usize) -> Self {
        FockModule::new(self.momentum.clone(), self.alpha0.clone(), trunc)
    }

    fn check_level(&self, k: i64) -> Result<()> {
        if k > self.trunc as i64 {
            Err(Error::BeyondTruncation {
                level: k,
                trunc: self.trunc,
            })
        } else {
            Ok(())
        }
    }

    /// `p(k)`, the dimension of level `k`.
    pub fn basis_dim(&self, k: usize) -> Result<usize> {
        self.check_level(k as i64)?;
        Ok(partition_count(k))
    }

    /// `a_m` on a sparse vector (levels are implicit in the partitions).
    fn heis_sparse(&self, m: i64, v: &Sparse<T>) -> Sparse<T> {
        let mut out = Sparse::new();
        for (p, c) in v {
            match m.cmp(&0) {
                Ordering::Less => sparse_add(&mut out, p.with_part((-m) as u32), c.clone()),
                Ordering::Equal => sparse_add(&mut out, p.clone(), c.clone() * &self.momentum),
                Ordering::Greater => {
                    let k = m as u32;
                    let mult = p.multiplicity(k);
                    if mult > 0 {
                        let q = p.without_part(k).expect("part present");
                        sparse_add(&mut out, q, c.scale(&Rat::from(m * mult as i64)));
                    }
                }
            }
        }
        out
    }

    /// `L_n` applied to one basis vector at level `k`.
    fn virasoro_on_basis(&self, n: i64, p: &Partition, k: usize) -> Sparse<T> {
        let mut start = Sparse::new();
        start.insert(p.clone(), T::one());
        let mut out = Sparse::new();
        let top = (k as i64).max(0);
        // Pairs x < y with x + y = n; the rightmost factor a_y acts first.
        let mut y = n.div_euclid(2) + 1;
        while y <= top {
            let x = n - y;
            if x < y {
                let inner = self.heis_sparse(y, &start);
                if !inner.is_empty() {
                    for (q, c) in self.heis_sparse(x, &inner) {
                        sparse_add(&mut out, q, c);
                    }
                }
            }
            y += 1;
        }
        if n % 2 == 0 {
            let h = n / 2;
            let sq = self.heis_sparse(h, &self.heis_sparse(h, &start));
            for (q, c) in sq {
                sparse_add(&mut out, q, c.scale(&Rat::new(1, 2)));
            }
        }
        let anomaly = self.alpha0.scale(&Rat::new(-(n + 1), 2));
        if !anomaly.is_zero() {
            for (q, c) in self.heis_sparse(n, &start) {
                sparse_add(&mut out, q, c * &anomaly);
            }
        }
        out
    }

    fn to_matrix(&self, images: Vec<Sparse<T>>, target_level: i64) -> Matrix<T> {
        if target_level < 0 {
            return Matrix::zeros(0, images.len());
        }
        let tb = level_basis(target_level as usize);
        let mut m = Matrix::zeros(tb.len(), images.len());
        for (j, img) in images.into_iter().enumerate() {
            for (q, c) in img {
                let i = tb.index_of(&q).expect("image partition at target level");
                m[(i, j)] = c;
            }
        }
        m
    }

    /// Matrix of `a_m` from level `k` to level `k − m`.
    pub fn heisenberg_matrix(&self, m: i64, k: usize) -> Result<Matrix<T>> {
        self.check_level(k as i64)?;
        let target = k as i64 - m;
        self.check_level(target)?;
        let basis = level_basis(k);
        if target < 0 {
            return Ok(Matrix::zeros(0, basis.len()));
        }
        let images = basis
            .parts
            .iter()
            .map(|p| {
                let mut v = Sparse::new();
                v.insert(p.clone(), T::one());
                self.heis_sparse(m, &v)
            })
            .collect();
        Ok(self.to_matrix(images, target))
    }

    /// Matrix of `L_n` from level `k` to level `k − n` (cached).
    pub fn virasoro_matrix(&self, n: i64, k: usize) -> Result<Arc<Matrix<T>>> {
        self.check_level(k as i64)?;
        let target = k as i64 - n;
        self.check_level(target)?;
        if let Some(m) = self.virasoro_cache.lock().expect("cache").get(&(n, k)) {
            return Ok(m.clone());
        }
        let basis = level_basis(k);
        let m = if target < 0 {
            Matrix::zeros(0, basis.len())
        } else {
            let images = basis
                .parts
                .iter()
                .map(|p| self.virasoro_on_basis(n, p, k))
                .collect();
            self.to_matrix(images, target)
        };
        let m = Arc::new(m);
        self.virasoro_cache
            .lock()
            .expect("cache")
            .insert((n, k), m.clone());
        Ok(m)
    }
}

impl FockModule<FieldElem> {
    /// `F_{r,s;n}` at the given truncation.
    pub fn from_label(label: &KacLabel, trunc: usize) -> Self {
        FockModule::new(label.momentum(), label.params.alpha0(), trunc)
    }

    pub fn tag(&self) -> ModuleTag {
        ModuleTag::Fock(self.momentum.clone())
    }

    /// The highest-weight vector `|α⟩`.
    pub fn vacuum(&self) -> GradedVector {
        GradedVector::basis(self.tag(), Partition::empty())
    }

    /// The rational conformal weight `h_α`.
    pub fn rational_weight(&self) -> Result<Rat> {
        self.weight()
            .to_rat()
            .ok_or_else(|| Error::Invariant(format!("irrational weight for {}", self.momentum)))
    }

    fn check_tag(&self, v: &GradedVector) -> Result<()> {
        if v.tag == self.tag() {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "vector of {} acted on by {}",
                v.tag,
                self.tag()
            )))
        }
    }

    fn apply_matrix(&self, m: &Matrix<FieldElem>, v: &GradedVector, target: i64) -> GradedVector {
        if target < 0 {
            return GradedVector::zero(self.tag(), 0);
        }
        let w = m.mul_vec(&v.to_dense());
        GradedVector::from_dense(self.tag(), target as usize, &w)
    }

    /// `a_m v`. Results below level zero are the zero vector.
    pub fn act_heisenberg(&self, m: i64, v: &GradedVector) -> Result<GradedVector> {
        self.check_tag(v)?;
        let target = v.level as i64 - m;
        if target < 0 {
            return Ok(GradedVector::zero(self.tag(), 0));
        }
        let mat = self.heisenberg_matrix(m, v.level)?;
        Ok(self.apply_matrix(&mat, v, target))
    }

    /// `L_n v`; the target level must lie within the truncation.
    pub fn act_virasoro(&self, n: i64, v: &GradedVector) -> Result<GradedVector> {
        self.check_tag(v)?;
        let target = v.level as i64 - n;
        if target < 0 {
            return Ok(GradedVector::zero(self.tag(), 0));
        }
        let mat = self.virasoro_matrix(n, v.level)?;
        Ok(self.apply_matrix(&mat, v, target))
    }
}

/// `p(k)` for a Fock module.
pub fn basis_dim<T: Ring>(f: &FockModule<T>, k: usize) -> Result<usize> {
    f.basis_dim(k)
}
