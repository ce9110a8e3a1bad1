//! Level-by-level solver for Virasoro intertwiners between Fock modules.
//!
//! A map `B` commuting with the Virasoro action is built one source level
//! at a time. At level `k` the image of the negative modes,
//! `X = span{L_{−m} e_j}`, is already forced by the lower blocks
//! (`B L_{−m} e_j = L_{−m} B e_j`); only a complement of `X` is free. The
//! positive modes then constrain both the free block and the coefficients
//! of the previously found solutions, and everything is solved as one
//! linear system.

use crate::fock::{partition_count, FockModule};
use crate::lattice::KacLabel;
use crate::linalg::Matrix;
use crate::scalars::{FieldElem, Ring};
use serde::Serialize;

use crate::{Error, Result};

use super::{grading_shift, GradedMap};

/// Which Virasoro modes are imposed as constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintSet {
    /// Every mode `L_{±m}` that fits in the truncation.
    AllModes,
    /// Only the generators `L_{±1}`, `L_{±2}`.
    Generators,
}

impl ConstraintSet {
    fn modes(self, top: usize) -> Vec<i64> {
        let top = match self {
            ConstraintSet::AllModes => top,
            ConstraintSet::Generators => top.min(2),
        };
        (1..=top as i64).collect()
    }
}

type Blocks = Vec<Matrix<FieldElem>>;

fn hcat(rows: usize, parts: &[Matrix<FieldElem>]) -> Matrix<FieldElem> {
    parts
        .iter()
        .fold(Matrix::zeros(rows, 0), |acc, m| acc.hstack(m))
}

fn vcat(cols: usize, parts: &[Matrix<FieldElem>]) -> Matrix<FieldElem> {
    parts
        .iter()
        .fold(Matrix::zeros(0, cols), |acc, m| acc.vstack(m))
}

fn zero_block(level: usize, shift: i64) -> Matrix<FieldElem> {
    let t = level as i64 - shift;
    let rows = if t < 0 {
        0
    } else {
        partition_count(t as usize)
    };
    Matrix::zeros(rows, partition_count(level))
}

fn combine(mats: &[&Matrix<FieldElem>], coeffs: &[FieldElem]) -> Matrix<FieldElem> {
    let (r, c) = mats[0].shape();
    let mut acc = Matrix::zeros(r, c);
    for (m, x) in mats.iter().zip(coeffs) {
        if !x.is_zero() {
            acc = acc.add(&m.scale(x));
        }
    }
    acc
}

/// Pushes the row `[m[(i, ·)] for each solution]` for every entry position.
fn push_entry_rows(rows: &mut Vec<Vec<FieldElem>>, per_solution: &[Matrix<FieldElem>]) {
    let Some(first) = per_solution.first() else {
        return;
    };
    let (r, c) = first.shape();
    for i in 0..r {
        for j in 0..c {
            let row: Vec<FieldElem> = per_solution.iter().map(|m| m[(i, j)].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
}

/// Extends a basis of intertwiners defined on levels `< k` to level `k`.
fn extend_level(
    fs: &FockModule<FieldElem>,
    ft: &FockModule<FieldElem>,
    basis: &[Blocks],
    k: usize,
    shift: i64,
    cs: ConstraintSet,
) -> Result<Vec<Blocks>> {
    let t = (k as i64 - shift) as usize;
    let nb = basis.len();
    let pk = partition_count(k);
    let qt = partition_count(t);

    // Negative modes: generators X of the forced subspace and their
    // required images Y_b under each old solution.
    let mut x_parts = Vec::new();
    let mut y_parts: Vec<Vec<Matrix<FieldElem>>> = vec![Vec::new(); nb];
    for m in cs.modes(k) {
        let lower = k - m as usize;
        x_parts.push((*fs.virasoro_matrix(-m, lower)?).clone());
        for (b, sol) in basis.iter().enumerate() {
            let y = if t >= m as usize {
                ft.virasoro_matrix(-m, t - m as usize)?.mul(&sol[lower])
            } else {
                Matrix::zeros(qt, partition_count(lower))
            };
            y_parts[b].push(y);
        }
    }
    let x = hcat(pk, &x_parts);
    let ys: Vec<Matrix<FieldElem>> = y_parts.iter().map(|p| hcat(qt, p)).collect();
    let (xr, piv) = x.rref();
    let rx = piv.len();

    let mut constraints: Vec<Vec<FieldElem>> = Vec::new();

    // Consistency on dependent generators: B X_j = Y_j where X_j = X_P w_j.
    if nb > 0 {
        let mut is_piv = vec![false; x.cols()];
        for &p in &piv {
            is_piv[p] = true;
        }
        for j in (0..x.cols()).filter(|&j| !is_piv[j]) {
            let residuals: Vec<Matrix<FieldElem>> = ys
                .iter()
                .map(|y| {
                    let mut v = Matrix::zeros(qt, 1);
                    for i in 0..qt {
                        let mut acc = -y[(i, j)].clone();
                        for (idx, &p) in piv.iter().enumerate() {
                            let w = &xr[(idx, j)];
                            if !w.is_zero() {
                                acc += &(y[(i, p)].clone() * w);
                            }
                        }
                        v[(i, 0)] = acc;
                    }
                    v
                })
                .collect();
            push_entry_rows(&mut constraints, &residuals);
        }
    }

    // T = [X_P | e_C] is invertible; B_k T = [Y_P | F].
    let xp = x.select_cols(&piv);
    let ident = Matrix::identity(pk);
    let (_, piv2) = xp.hstack(&ident).rref();
    let comp: Vec<usize> = piv2.iter().filter(|&&c| c >= rx).map(|&c| c - rx).collect();
    let tinv = xp.hstack(&ident.select_cols(&comp)).inverse()?;

    // Positive modes: L_m B_k = B_{k−m} L_m, stacked over m.
    let pos = cs.modes(t);
    let mut m_parts = Vec::new();
    let mut h_parts: Vec<Vec<Matrix<FieldElem>>> = vec![Vec::new(); nb];
    for &m in &pos {
        let lt = ft.virasoro_matrix(m, t)?;
        for (b, sol) in basis.iter().enumerate() {
            let h = if k >= m as usize {
                sol[k - m as usize].mul(&*fs.virasoro_matrix(m, k)?)
            } else {
                Matrix::zeros(lt.rows(), pk)
            };
            h_parts[b].push(h);
        }
        m_parts.push((*lt).clone());
    }
    let mstack = vcat(qt, &m_parts);
    let hs: Vec<Matrix<FieldElem>> = h_parts.iter().map(|p| vcat(pk, p)).collect();
    let rows = mstack.rows();

    // Columns of X_P: L_m Y_P(c) = B_{k−m}(c) L_m X_P.
    let yps: Vec<Matrix<FieldElem>> = ys.iter().map(|y| y.select_cols(&piv)).collect();
    if nb > 0 && rx > 0 && rows > 0 {
        let res: Vec<Matrix<FieldElem>> = (0..nb)
            .map(|b| mstack.mul(&yps[b]).sub(&hs[b].mul(&xp)))
            .collect();
        push_entry_rows(&mut constraints, &res);
    }

    // Complement columns: M f_q = G_q c, solved through rref([M | −G_q]).
    let mut reduced = Vec::with_capacity(comp.len());
    let mut free_f: Vec<usize> = Vec::new();
    for (q, &cq) in comp.iter().enumerate() {
        let mut g = Matrix::zeros(rows, nb);
        for (b, h) in hs.iter().enumerate() {
            for i in 0..rows {
                g[(i, b)] = -h[(i, cq)].clone();
            }
        }
        let (rr, pv) = mstack.hstack(&g).rref();
        let mut f_rows = Vec::new();
        for (i, &p) in pv.iter().enumerate() {
            if p < qt {
                f_rows.push((i, p));
            } else {
                constraints.push((0..nb).map(|b| rr[(i, qt + b)].clone()).collect());
            }
        }
        if q == 0 {
            let mut is_piv = vec![false; qt];
            for &(_, p) in &f_rows {
                is_piv[p] = true;
            }
            free_f = (0..qt).filter(|&j| !is_piv[j]).collect();
        }
        reduced.push((rr, f_rows));
    }

    let coeff_space = if nb == 0 {
        Vec::new()
    } else if constraints.is_empty() {
        (0..nb)
            .map(|b| {
                let mut v = vec![FieldElem::zero(); nb];
                v[b] = FieldElem::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(constraints).nullspace()
    };

    let mut out = Vec::new();
    for c in &coeff_space {
        let mut blocks: Blocks = (0..k)
            .map(|j| {
                let mats: Vec<&Matrix<FieldElem>> = basis.iter().map(|s| &s[j]).collect();
                combine(&mats, c)
            })
            .collect();
        let yp = combine(&yps.iter().collect::<Vec<_>>(), c);
        let mut f = Matrix::zeros(qt, comp.len());
        for (q, (rr, f_rows)) in reduced.iter().enumerate() {
            for &(i, p) in f_rows {
                let mut acc = FieldElem::zero();
                for (b, cb) in c.iter().enumerate() {
                    acc -= &(rr[(i, qt + b)].clone() * cb);
                }
                f[(p, q)] = acc;
            }
        }
        blocks.push(yp.hstack(&f).mul(&tinv));
        out.push(blocks);
    }
    for (q, (rr, f_rows)) in reduced.iter().enumerate() {
        for &j in &free_f {
            let mut blocks: Blocks = (0..k).map(|l| zero_block(l, shift)).collect();
            let mut f = Matrix::zeros(qt, comp.len());
            f[(j, q)] = FieldElem::one();
            for &(i, p) in f_rows {
                f[(p, q)] = -rr[(i, j)].clone();
            }
            blocks.push(Matrix::zeros(qt, rx).hstack(&f).mul(&tinv));
            out.push(blocks);
        }
    }
    Ok(out)
}

/// Basis of the Virasoro intertwiners `F_source → F_target` on source
/// levels `0..=trunc`, using the given constraint set. Each basis map is
/// normalized to leading entry 1. A non-integral weight difference gives an
/// empty basis.
pub fn solve_intertwiner_with(
    source: &KacLabel,
    target: &KacLabel,
    trunc: usize,
    cs: ConstraintSet,
) -> Result<Vec<GradedMap>> {
    if source.params != target.params {
        return Err(Error::OutOfRange(
            "labels from different parameter pairs".into(),
        ));
    }
    let Some(shift) = grading_shift(source, target) else {
        return Ok(Vec::new());
    };
    let target_top = trunc as i64 - shift;
    if target_top < 0 {
        return Ok(Vec::new());
    }
    let fs = FockModule::from_label(source, trunc);
    let ft = FockModule::from_label(target, target_top as usize);
    let mut basis: Vec<Blocks> = Vec::new();
    for k in 0..=trunc {
        if (k as i64) < shift {
            for sol in basis.iter_mut() {
                sol.push(zero_block(k, shift));
            }
            continue;
        }
        basis = extend_level(&fs, &ft, &basis, k, shift, cs)?;
    }
    Ok(basis
        .into_iter()
        .map(|blocks| {
            GradedMap {
                source: fs.clone(),
                target: ft.clone(),
                source_label: Some(source.normalized()),
                target_label: Some(target.normalized()),
                shift,
                blocks: blocks.into_iter().enumerate().collect(),
            }
            .normalized()
        })
        .collect())
}

/// Solves with all modes and with generators only, requires the two to
/// agree, and checks commutation with `L_m` for `|m| ≤ 4` on the result.
pub fn solve_intertwiner(
    source: &KacLabel,
    target: &KacLabel,
    trunc: usize,
) -> Result<Vec<GradedMap>> {
    let full = solve_intertwiner_with(source, target, trunc, ConstraintSet::AllModes)?;
    let gens = solve_intertwiner_with(source, target, trunc, ConstraintSet::Generators)?;
    if full.len() != gens.len() {
        return Err(Error::Invariant(format!(
            "constraint sets disagree on {source} → {target}: {} vs {} solutions",
            full.len(),
            gens.len()
        )));
    }
    if full.len() == 1 && full[0].proportionality(&gens[0]).is_none() {
        return Err(Error::Invariant(format!(
            "constraint sets give different maps on {source} → {target}"
        )));
    }
    for map in &full {
        if let Some((m, k)) = commutation_defect(map, 4)? {
            return Err(Error::Invariant(format!(
                "solved map {source} → {target} fails to commute with L_{m} at level {k}"
            )));
        }
    }
    Ok(full)
}

/// How a known intertwiner sits inside a solved basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolvedComparison {
    /// Dimension of the solved space.
    pub solution_dim: usize,
    /// The map is a linear combination of the solved basis.
    pub in_span: bool,
    /// Highest source level `k` such that the solutions restricted to
    /// levels `0..=k` span one dimension (`None` if none do).
    pub determined_through: Option<usize>,
    /// On levels `0..=determined_through` the map is a scalar multiple of
    /// the unique restricted solution.
    pub proportional: bool,
}

fn flatten(map: &GradedMap) -> Vec<FieldElem> {
    map.blocks
        .values()
        .flat_map(|b| b.entries().cloned())
        .collect()
}

fn span_rank(maps: &[GradedMap]) -> usize {
    if maps.is_empty() {
        return 0;
    }
    Matrix::from_rows(maps.iter().map(flatten).collect()).rank()
}

/// Compares `map` with a solved basis on the same levels. Extra solutions
/// can be genuine (maps factoring through a simple quotient of the source
/// that also sits in the target), so agreement is checked on the levels
/// where the solution is unique, plus membership in the full span.
pub fn compare_with_solved(map: &GradedMap, solved: &[GradedMap]) -> SolvedComparison {
    let rank = span_rank(solved);
    let mut with = solved.to_vec();
    with.push(map.clone());
    let in_span = span_rank(&with) == rank;
    let mut determined_through = None;
    let mut proportional = false;
    for k in 0..=map.trunc() {
        let restricted: Vec<GradedMap> = solved.iter().map(|s| s.restricted(k)).collect();
        if span_rank(&restricted) != 1 {
            if determined_through.is_some() {
                break;
            }
            continue;
        }
        let basis = restricted.iter().find(|s| !s.is_zero()).expect("rank one");
        determined_through = Some(k);
        proportional = map.restricted(k).proportionality(basis).is_some();
    }
    SolvedComparison {
        solution_dim: rank,
        in_span,
        determined_through,
        proportional,
    }
}

/// The first `(m, source level)` with `L_m B ≠ B L_m`, for `|m| ≤ max_mode`.
pub fn commutation_defect(map: &GradedMap, max_mode: i64) -> Result<Option<(i64, usize)>> {
    let trunc = map.trunc() as i64;
    for m in -max_mode..=max_mode {
        for k in 0..=trunc {
            let k2 = k - m;
            if k2 < 0 && k - map.shift - m < 0 {
                continue;
            }
            if k2 > trunc {
                continue;
            }
            let t = k - map.shift;
            let t2 = t - m;
            let rows = if t2 < 0 {
                0
            } else {
                partition_count(t2 as usize)
            };
            let pk = partition_count(k as usize);
            let lhs = if t >= 0 && t2 >= 0 {
                map.target
                    .virasoro_matrix(m, t as usize)?
                    .mul(map.block(k as usize)?)
            } else {
                Matrix::zeros(rows, pk)
            };
            let rhs = if k2 >= 0 {
                map.block(k2 as usize)?
                    .mul(&*map.source.virasoro_matrix(m, k as usize)?)
            } else {
                Matrix::zeros(rows, pk)
            };
            if lhs != rhs {
                return Ok(Some((m, k as usize)));
            }
        }
    }
    Ok(None)
}
