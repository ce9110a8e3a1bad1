//! The acceptance suite: eight criteria, each reported on one line as
//! `[PASS]` or `[FAIL]`. The test fails if any criterion fails.

use std::process::Command;
use std::time::Instant;

use freefield::atlas::Atlas;
use freefield::fock::{partition_count, FockModule};
use freefield::lattice::{KacLabel, Params, Sign};
use freefield::linalg::Matrix;
use freefield::logdef::{
    build_deformed, jordan_profile, limit_singular_vector, GlueTriple, Variant,
};
use freefield::scalars::{FieldElem, Rat, Ring};
use freefield::verma::Verma;
use freefield::vertex::{
    commutation_defect, compare_with_solved, felder_homology, screening, simple_screening,
    solve_intertwiner, ScreeningSpec,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const N: usize = 8;
const PAIRS: [(i64, i64); 3] = [(2, 3), (2, 5), (3, 4)];

fn params(a: i64, b: i64) -> Params {
    Params::new(a, b).expect("admissible")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `[L_m, L_n] − (m−n) L_{m+n} − c/12 (m³−m) δ_{m+n,0}` vanishes on level `k`.
fn bracket_holds(
    f: &FockModule<FieldElem>,
    c: &Rat,
    m: i64,
    n: i64,
    k: usize,
) -> Result<bool, String> {
    let ki = k as i64;
    let prod = |a: i64, b: i64| -> Result<Matrix<FieldElem>, String> {
        let first = f.virasoro_matrix(b, k).map_err(err)?;
        if ki - b < 0 {
            let rows = if ki - a - b < 0 {
                0
            } else {
                partition_count((ki - a - b) as usize)
            };
            return Ok(Matrix::zeros(rows, partition_count(k)));
        }
        let second = f.virasoro_matrix(a, (ki - b) as usize).map_err(err)?;
        Ok(second.mul(&first))
    };
    let lhs = prod(m, n)?.sub(&prod(n, m)?);
    let mut rhs = f
        .virasoro_matrix(m + n, k)
        .map_err(err)?
        .scale(&FieldElem::from(m - n));
    if m + n == 0 {
        let central = c.clone() * Rat::new(m * m * m - m, 12);
        rhs = rhs.add(&Matrix::identity(partition_count(k)).scale(&FieldElem::from(central)));
    }
    Ok(lhs == rhs)
}

fn criterion_1() -> Outcome {
    let mut count = 0;
    for (a, b) in PAIRS {
        let p = params(a, b);
        let c = p.central_charge();
        // Braided, both chain types, and the corner.
        for (r, s, n) in [
            (1, 1, 0),
            (1, 1, -1),
            (1, b, 1),
            (a, 1, 0),
            (a, b, 0),
            (a, b, -2),
        ] {
            let f = FockModule::from_label(&KacLabel::new(p, r, s, n), N);
            for m in -4..=4i64 {
                for nn in -4..=4i64 {
                    for k in 0..=N {
                        let ki = k as i64;
                        if [ki - m, ki - nn, ki - m - nn].iter().any(|&l| l > N as i64) {
                            continue;
                        }
                        if !bracket_holds(&f, &c, m, nn, k)? {
                            return Err(format!(
                                "F[{r},{s},{n}] at ({a},{b}): [L_{m}, L_{nn}] on level {k}"
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} level blocks"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for (a, b) in PAIRS {
        let verma = Verma::new(params(a, b), 6);
        for r in 1..=6i64 {
            for s in 1..=6 / r {
                let lin = verma.shapovalov_linearization(r, s).map_err(err)?;
                if !lin.value_at_root.is_zero() || lin.r_bruteforce != lin.r_formula {
                    return Err(format!(
                        "({r},{s}) at ({a},{b}): P = {}, P' = {}, formula {}",
                        lin.value_at_root, lin.r_bruteforce, lin.r_formula
                    ));
                }
                count += 1;
            }
        }
    }
    let verma = Verma::new(params(2, 3), 2);
    let r11 = verma
        .shapovalov_linearization(1, 1)
        .map_err(err)?
        .r_bruteforce;
    let r21 = verma
        .shapovalov_linearization(2, 1)
        .map_err(err)?
        .r_bruteforce;
    if r11 != Rat::from(2) || r21 != Rat::from(5) {
        return Err(format!("R11 = {r11}, R21 = {r21} at (2,3)"));
    }
    Ok(format!("{count} labels, R11 = 2, R21 = 5"))
}

fn criterion_3() -> Outcome {
    let (mut count, mut residues) = (0, 0);
    let mut extra = Vec::new();
    for (a, b) in PAIRS {
        let p = params(a, b);
        for r in 1..=a {
            for s in 1..=b {
                for n in -1..=1 {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let src = KacLabel::new(p, r, s, n);
                        let Ok(spec) = ScreeningSpec::new(sign, &src) else {
                            continue;
                        };
                        let q = screening(sign, &src, N).map_err(err)?;
                        if let Some((m, k)) = commutation_defect(&q, 4).map_err(err)? {
                            return Err(format!(
                                "Q{sign} on F[{src}] at ({a},{b}): L_{m} on level {k}"
                            ));
                        }
                        count += 1;
                        if spec.index == 1 && spec.shift <= N as i64 {
                            let explicit = simple_screening(sign, &src, N).map_err(err)?;
                            let solved =
                                solve_intertwiner(&spec.source, &spec.target, N).map_err(err)?;
                            let cmp = compare_with_solved(&explicit, &solved);
                            if !cmp.in_span || !cmp.proportional {
                                return Err(format!(
                                    "Q{sign} on F[{src}] at ({a},{b}): residue vs solved {cmp:?}"
                                ));
                            }
                            if cmp.solution_dim > 1 {
                                extra.push(format!(
                                    "F[{src}]→F[{}] at ({a},{b}) unique through level {}",
                                    spec.target,
                                    cmp.determined_through.unwrap_or(0)
                                ));
                            }
                            residues += 1;
                        }
                    }
                }
            }
        }
    }
    let mut msg = format!("{count} screenings commute, {residues} match the residue");
    if !extra.is_empty() {
        msg.push_str(&format!(
            "; extra intertwiners through a simple factor: {}",
            extra.join(", ")
        ));
    }
    Ok(msg)
}

fn criterion_4() -> Outcome {
    let p = params(2, 3);
    let h0 = felder_homology(p, Sign::Plus, 1, 1, 0, N).map_err(err)?;
    let mut want = vec![0; N + 1];
    want[0] = 1;
    if h0 != want {
        return Err(format!("position 0: {h0:?}"));
    }
    for pos in [-2, -1, 1, 2] {
        let h = felder_homology(p, Sign::Plus, 1, 1, pos, N).map_err(err)?;
        if h.iter().any(|&d| d != 0) {
            return Err(format!("position {pos}: {h:?}"));
        }
    }
    for pos in -2..=2 {
        let h = felder_homology(p, Sign::Plus, 1, 3, pos, N).map_err(err)?;
        if h.iter().any(|&d| d != 0) {
            return Err(format!("boundary (1,3) position {pos}: {h:?}"));
        }
    }
    Ok("homology (1,0,…,0) at 0, exact at ±1, ±2 and on the boundary".into())
}

fn criterion_5() -> Outcome {
    let p = params(2, 3);
    let triples = [
        GlueTriple::t0_row(p, 1).map_err(err)?,
        GlueTriple::tmin_plus(p, 1, 1).map_err(err)?,
    ];
    for tau in triples {
        let m = build_deformed(&tau, Variant::Single, N).map_err(err)?;
        let prof = jordan_profile(&m, N).map_err(err)?;
        let max = prof.iter().map(|l| l.max_block()).max().unwrap_or(0);
        if max != 2 {
            return Err(format!("{:?}: largest Jordan block {max}", tau.class));
        }
        if let Some((a, b, l)) = m.bracket_defect(4, N).map_err(err)? {
            return Err(format!(
                "{:?}: [L_{a}, L_{b}] fails on level {l}",
                tau.class
            ));
        }
    }
    Ok("T0 and TMin: largest block 2, brackets hold".into())
}

fn criterion_6() -> Outcome {
    let p = params(2, 3);
    for (a, b) in [(1, 1), (1, 2), (2, 1)] {
        let u = limit_singular_vector(p, a, b).map_err(err)?;
        if u.vector.is_zero() {
            return Err(format!("({a},{b}): zero vector"));
        }
        let images: Vec<&FieldElem> = u.plus_image.iter().chain(u.minus_image.iter()).collect();
        if images.is_empty() || images.iter().any(|x| x.is_zero()) {
            return Err(format!(
                "({a},{b}): images {:?} {:?}",
                u.plus_image, u.minus_image
            ));
        }
    }
    Ok("nonzero, images on the target vacuum".into())
}

fn criterion_7() -> Outcome {
    let atlas = Atlas::new(params(2, 3), N);
    let report = atlas.check_consistency();
    if let Some(c) = report.failures().next() {
        return Err(format!(
            "(2,3) {}: {}",
            c.name,
            c.detail.clone().unwrap_or_default()
        ));
    }
    let simples = atlas.simple_list().len();
    let blocks = atlas.block_partition().len();
    let zhu = atlas.zhu_center().degree();
    if (simples, blocks, zhu) != (13, 6, 20) {
        return Err(format!(
            "census {simples}, blocks {blocks}, zhu degree {zhu}"
        ));
    }
    let atlas25 = Atlas::new(params(2, 5), N);
    let report25 = atlas25.check_consistency();
    if let Some(c) = report25.failures().next() {
        return Err(format!(
            "(2,5) {}: {}",
            c.name,
            c.detail.clone().unwrap_or_default()
        ));
    }
    if atlas25.simple_list().len() != 22 {
        return Err(format!("census {} at (2,5)", atlas25.simple_list().len()));
    }
    Ok(format!(
        "{} + {} checks, census 13/22, 6 blocks, zhu degree 20",
        report.checks.len(),
        report25.checks.len()
    ))
}

fn criterion_8() -> Outcome {
    let commands: [&[&str]; 10] = [
        &["weights"],
        &["singular", "--r", "2", "--s", "1"],
        &["screening", "--from", "1,1,0", "--to", "1,1,1"],
        &["screening", "--from", "1,2,0", "--to", "1,1,-1"],
        &["felder", "--r", "1", "--s", "1", "--pos", "0"],
        &["felder", "--r", "1", "--s", "3", "--pos", "-1"],
        &["logdef", "--tau", "t0-row:1"],
        &["logdef", "--tau", "tmin+:1,1"],
        &["atlas", "--check"],
        &["atlas", "--diagram", "P+[1,1]"],
    ];
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_freefield"))
            .args(["--p", "2", "3", "--trunc", "8"])
            .args(args)
            .output()
            .map_err(err)?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}", out.status));
        }
        Ok(out.stdout)
    };
    for args in commands {
        let first = run(args)?;
        serde_json::from_slice::<serde_json::Value>(&first)
            .map_err(|e| format!("{args:?}: {e}"))?;
        if run(args)? != first {
            return Err(format!("{args:?}: output differs between runs"));
        }
    }
    Ok(format!("{} commands byte-identical", commands.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 virasoro relations on Fock modules", criterion_1),
        ("2 singular-vector norm linearization", criterion_2),
        ("3 screening intertwiners", criterion_3),
        ("4 felder homology", criterion_4),
        ("5 logarithmic rank two", criterion_5),
        ("6 limit singular vector", criterion_6),
        ("7 atlas consistency harness", criterion_7),
        ("8 deterministic CLI output", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => println!("[PASS] criterion {name} ({secs:.1}s): {msg}"),
            Err(msg) => {
                println!("[FAIL] criterion {name} ({secs:.1}s): {msg}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
