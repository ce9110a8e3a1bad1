//! Structural data for the triplet algebra at `(p₊, p₋)`: simple modules,
//! blocks, `Ext¹` dimensions, socle series, characters and the Zhu-centre
//! polynomial, together with a harness that checks the data against what the
//! computational modules can produce (Fock characters, irreducible Virasoro
//! characters, Felder homology).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fock::partition_count;
use crate::lattice::{
    block_members, blocks, classify, simple_labels, BlockId, Params, Sign, SimpleKind, SimpleLabel,
};
use crate::scalars::{HPoly, Rat};
use crate::verma::Verma;
use crate::vertex::felder_homology;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Composition factors and computable modules

/// A composition factor of a diagram: a simple triplet module, or an
/// irreducible Virasoro module `L(h_{r,s;n})` (used for Fock modules).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Factor {
    Simple(SimpleLabel),
    Vir { r: i64, s: i64, n: i64 },
}

impl Factor {
    pub fn weight(&self, params: &Params) -> Rat {
        match self {
            Factor::Simple(l) => l.lowest_weight(params),
            Factor::Vir { r, s, n } => params.h(*r, *s, *n),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Simple(l) => write!(f, "{l}"),
            Factor::Vir { r, s, n } => write!(f, "h[{r},{s};{n}]"),
        }
    }
}

fn parse_triple(inner: &str) -> Option<(i64, i64, i64)> {
    let (rs, n) = inner.split_once(';')?;
    let (r, s) = rs.split_once(',')?;
    Some((
        r.trim().parse().ok()?,
        s.trim().parse().ok()?,
        n.trim().parse().ok()?,
    ))
}

fn parse_pair(inner: &str) -> Option<(i64, i64)> {
    let (r, s) = inner.split_once(',')?;
    Some((r.trim().parse().ok()?, s.trim().parse().ok()?))
}

fn bracketed<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    text.strip_prefix(prefix)?
        .strip_prefix('[')?
        .strip_suffix(']')
}

impl FromStr for Factor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Factor> {
        if let Some(inner) = bracketed(s, "h") {
            let (r, s2, n) =
                parse_triple(inner).ok_or_else(|| Error::UnknownName(format!("factor {s:?}")))?;
            return Ok(Factor::Vir { r, s: s2, n });
        }
        Ok(Factor::Simple(s.parse()?))
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Factor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Factor, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A module whose character the kernel can compute directly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Term {
    /// The Fock module `F_{r,s;n}`.
    Fock { r: i64, s: i64, n: i64 },
    /// The lattice module `V^±_{r,s} = ⊕_n F_{r,s;2n}` (resp. `2n+1`).
    Lattice { sign: Sign, r: i64, s: i64 },
    /// A composition factor.
    Factor(Factor),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Fock { r, s, n } => write!(f, "F[{r},{s};{n}]"),
            Term::Lattice { sign, r, s } => write!(f, "V{}[{r},{s}]", sign.symbol()),
            Term::Factor(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Term {
    type Err = Error;
    fn from_str(s: &str) -> Result<Term> {
        let bad = || Error::UnknownName(format!("module {s:?}"));
        if let Some(inner) = bracketed(s, "F") {
            let (r, s2, n) = parse_triple(inner).ok_or_else(bad)?;
            return Ok(Term::Fock { r, s: s2, n });
        }
        for (prefix, sign) in [("V+", Sign::Plus), ("V-", Sign::Minus)] {
            if let Some(inner) = bracketed(s, prefix) {
                let (r, s2) = parse_pair(inner).ok_or_else(bad)?;
                return Ok(Term::Lattice { sign, r, s: s2 });
            }
        }
        Ok(Term::Factor(s.parse().map_err(|_| bad())?))
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Characters

/// Graded dimensions `dims[k] = dim M[base_weight + k]` for `k = 0..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSeries {
    pub base_weight: Rat,
    pub dims: Vec<usize>,
}

impl CharacterSeries {
    pub fn zero(base_weight: Rat, levels: usize) -> CharacterSeries {
        CharacterSeries {
            base_weight,
            dims: vec![0; levels + 1],
        }
    }

    pub fn levels(&self) -> usize {
        self.dims.len() - 1
    }

    fn top_weight(&self) -> Rat {
        self.base_weight.clone() + Rat::from(self.levels() as i64)
    }

    /// Offset of `weight` from the base, if it is an integer within range.
    fn slot(&self, weight: &Rat) -> Result<Option<usize>> {
        let d = weight.clone() - self.base_weight.clone();
        let k = d.to_i64().ok_or_else(|| {
            Error::IncompatibleGrading(format!("weight {weight} is off the integer grid"))
        })?;
        if k < 0 {
            return Err(Error::Invariant(format!(
                "weight {weight} lies below the window starting at {}",
                self.base_weight
            )));
        }
        Ok(((k as usize) <= self.levels()).then_some(k as usize))
    }

    /// Adds `mult` copies of a module of lowest weight `weight` with
    /// graded dimensions `dims` (measured from `weight`).
    fn add_shifted(&mut self, weight: &Rat, dims: &[usize], mult: usize) -> Result<()> {
        if let Some(k0) = self.slot(weight)? {
            for (k, d) in dims.iter().enumerate() {
                if k0 + k > self.levels() {
                    break;
                }
                self.dims[k0 + k] += mult * d;
            }
        }
        Ok(())
    }

    /// Levelwise sum on the common range of the two windows.
    pub fn add(&self, other: &CharacterSeries) -> Result<CharacterSeries> {
        let base = self.base_weight.clone().min(other.base_weight.clone());
        let top = self.top_weight().min(other.top_weight());
        let levels = (top - base.clone())
            .to_i64()
            .ok_or_else(|| Error::IncompatibleGrading("windows on different grids".into()))?;
        let mut out = CharacterSeries::zero(base, levels.max(0) as usize);
        for c in [self, other] {
            out.add_shifted(&c.base_weight, &c.dims, 1)?;
        }
        Ok(out)
    }

    /// First level (from `base_weight`) where the two series differ, after
    /// aligning them on their common range.
    pub fn first_difference(&self, other: &CharacterSeries) -> Result<Option<usize>> {
        let base = self.base_weight.clone().min(other.base_weight.clone());
        let top = self.top_weight().min(other.top_weight());
        let levels = (top - base.clone())
            .to_i64()
            .ok_or_else(|| Error::IncompatibleGrading("windows on different grids".into()))?;
        if levels < 0 {
            return Ok(None);
        }
        let mut a = CharacterSeries::zero(base.clone(), levels as usize);
        let mut b = CharacterSeries::zero(base, levels as usize);
        a.add_shifted(&self.base_weight, &self.dims, 1)?;
        b.add_shifted(&other.base_weight, &other.dims, 1)?;
        Ok(a.dims.iter().zip(&b.dims).position(|(x, y)| x != y))
    }
}

// ---------------------------------------------------------------------------
// Loewy diagrams

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub p_plus: i64,
    pub p_minus: i64,
}

/// A socle series. `layers[0]` is the socle and the last layer the head;
/// each layer lists its factors with repetition, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoewyDiagram {
    pub name: String,
    pub family: String,
    pub params: ParamsRecord,
    pub layers: Vec<Vec<Factor>>,
    /// Composition factors as stated independently of the layer structure.
    pub composition: Vec<Factor>,
    /// Modules whose direct sum has the same character, when known.
    pub ambient: Vec<Term>,
    pub cite: String,
}

impl LoewyDiagram {
    fn new(
        params: &Params,
        name: String,
        family: &str,
        layers: Vec<Vec<Factor>>,
        cite: &str,
    ) -> LoewyDiagram {
        let layers: Vec<Vec<Factor>> = layers
            .into_iter()
            .map(|mut l| {
                l.sort_by_key(|f| f.to_string());
                l
            })
            .collect();
        let mut composition: Vec<Factor> = layers.iter().flatten().copied().collect();
        composition.sort_by_key(|f| f.to_string());
        LoewyDiagram {
            name,
            family: family.to_string(),
            params: ParamsRecord {
                p_plus: params.p_plus(),
                p_minus: params.p_minus(),
            },
            layers,
            composition,
            ambient: Vec::new(),
            cite: cite.to_string(),
        }
    }

    fn with_composition(mut self, mut composition: Vec<Factor>) -> LoewyDiagram {
        composition.sort_by_key(|f| f.to_string());
        self.composition = composition;
        self
    }

    fn with_ambient(mut self, ambient: Vec<Term>) -> LoewyDiagram {
        self.ambient = ambient;
        self
    }

    pub fn params(&self) -> Result<Params> {
        Params::new(self.params.p_plus, self.params.p_minus)
    }

    /// Multiplicities of all factors over all layers.
    pub fn multiset(&self) -> BTreeMap<Factor, usize> {
        count(self.layers.iter().flatten())
    }

    pub fn length(&self) -> usize {
        self.layers.len()
    }
}

fn count<'a>(it: impl IntoIterator<Item = &'a Factor>) -> BTreeMap<Factor, usize> {
    let mut m = BTreeMap::new();
    for f in it {
        *m.entry(*f).or_insert(0) += 1;
    }
    m
}

fn rep(n: usize, f: Factor) -> Vec<Factor> {
    vec![f; n]
}

// ---------------------------------------------------------------------------
// Extension groups

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtEntry {
    pub from: SimpleLabel,
    pub to: SimpleLabel,
    pub dim: usize,
}

/// Nonzero `dim Ext¹(from, to)` between simple modules; all other pairs
/// vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub entries: Vec<ExtEntry>,
}

impl ExtTable {
    pub fn get(&self, a: &SimpleLabel, b: &SimpleLabel) -> usize {
        self.entries
            .iter()
            .find(|e| e.from == *a && e.to == *b)
            .map_or(0, |e| e.dim)
    }
}

// ---------------------------------------------------------------------------
// Zhu centre

/// The polynomial `f(x)` with `Z(A(W)) ≅ C[x]/f(x)`, with its factor list.
#[derive(Clone, Debug, Serialize)]
pub struct ZhuCenter {
    /// Roots with multiplicities, in the order of the product groups.
    pub factors: Vec<(Rat, usize)>,
    pub poly: HPoly,
    /// The index set used for the cubic factors.
    pub cubic_index: &'static str,
}

impl ZhuCenter {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn factor_count(&self) -> usize {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    /// Order of vanishing of the polynomial at `x`.
    pub fn multiplicity(&self, x: &Rat) -> usize {
        let mut p = self.poly.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval(x).is_zero() {
            p = p.derivative();
            k += 1;
        }
        k
    }
}

// ---------------------------------------------------------------------------
// Consistency report

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: true,
            detail: None,
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: false,
            detail: Some(detail.into()),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<Option<String>>) -> Check {
        match r {
            Ok(None) => Check::pass(name),
            Ok(Some(d)) => Check::fail(name, d),
            Err(e) => Check::fail(name, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub levels: usize,
    pub checks: Vec<Check>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

// ---------------------------------------------------------------------------
// The atlas

/// Structural data at fixed `(p₊, p₋)`; characters are computed on levels
/// `0..=levels` above each module's lowest weight.
pub struct Atlas {
    params: Params,
    levels: usize,
    verma: Verma,
}

impl Atlas {
    pub fn new(params: Params, levels: usize) -> Atlas {
        Atlas {
            params,
            levels,
            verma: Verma::new(params, levels),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    fn pp(&self) -> i64 {
        self.params.p_plus()
    }

    fn pm(&self) -> i64 {
        self.params.p_minus()
    }

    /// All simple modules.
    pub fn simple_list(&self) -> Vec<SimpleLabel> {
        simple_labels(&self.params)
    }

    /// Blocks with their simple modules.
    pub fn block_partition(&self) -> BTreeMap<BlockId, Vec<SimpleLabel>> {
        blocks(&self.params)
            .into_iter()
            .map(|b| {
                let m = block_members(&self.params, &b);
                (b, m)
            })
            .collect()
    }

    /// `dim Ext¹(a, b)`.
    pub fn ext_dim(&self, a: &SimpleLabel, b: &SimpleLabel) -> Result<usize> {
        a.validate(&self.params)?;
        b.validate(&self.params)?;
        let block = classify(&self.params, a);
        if classify(&self.params, b) != block {
            return Ok(0);
        }
        let kinds = (a.kind, b.kind);
        let dim = match block {
            BlockId::Thick { .. } => match kinds {
                (SimpleKind::XPlus, SimpleKind::XMinus)
                | (SimpleKind::XMinus, SimpleKind::XPlus) => 2,
                (SimpleKind::Minimal, SimpleKind::XPlus)
                | (SimpleKind::XPlus, SimpleKind::Minimal) => 1,
                _ => 0,
            },
            BlockId::ThinRow(_) | BlockId::ThinCol(_) => match kinds {
                (SimpleKind::XPlus, SimpleKind::XMinus)
                | (SimpleKind::XMinus, SimpleKind::XPlus) => 2,
                _ => 0,
            },
            BlockId::SsPlus | BlockId::SsMinus => 0,
        };
        Ok(dim)
    }

    /// Every nonzero `Ext¹` between simple modules.
    pub fn ext_table(&self) -> ExtTable {
        let simples = self.simple_list();
        let mut entries = Vec::new();
        for a in &simples {
            for b in &simples {
                let dim = self.ext_dim(a, b).expect("listed simples are valid");
                if dim > 0 {
                    entries.push(ExtEntry {
                        from: *a,
                        to: *b,
                        dim,
                    });
                }
            }
        }
        ExtTable { entries }
    }

    // -- socle series ------------------------------------------------------

    fn x(&self, sign: Sign, r: i64, s: i64) -> Factor {
        Factor::Simple(SimpleLabel::x(sign, r, s))
    }

    fn min_l(&self, r: i64, s: i64) -> Factor {
        Factor::Simple(SimpleLabel::minimal(&self.params, r, s))
    }

    fn interior(&self, r: i64, s: i64) -> bool {
        (1..self.pp()).contains(&r) && (1..self.pm()).contains(&s)
    }

    fn in_table(&self, r: i64, s: i64) -> bool {
        (1..=self.pp()).contains(&r) && (1..=self.pm()).contains(&s)
    }

    /// Names of every encoded diagram family instance, in a fixed order.
    pub fn diagram_names(&self) -> Vec<String> {
        let (pp, pm) = (self.pp(), self.pm());
        let mut out = Vec::new();
        for r in 1..=pp {
            for s in 1..=pm {
                for n in -2..=2 {
                    out.push(format!("F[{r},{s};{n}]"));
                }
            }
        }
        for sign in ['+', '-'] {
            for r in 1..=pp {
                for s in 1..=pm {
                    out.push(format!("V{sign}[{r},{s}]"));
                }
            }
        }
        for r in 1..pp {
            for s in 1..pm {
                let (rv, sv) = (pp - r, pm - s);
                out.push(format!("Q(X+[{r},{s}])[{rv},{s}]"));
                out.push(format!("Q(X+[{r},{s}])[{r},{sv}]"));
                out.push(format!("Q(X-[{r},{s}])[{rv},{s}]"));
                out.push(format!("Q(X-[{r},{s}])[{r},{sv}]"));
                out.push(format!("P+[{r},{s}]"));
                out.push(format!("P-[{r},{s}]"));
                out.push(format!("K[{r},{s}]"));
                out.push(format!("N[{r},{s}]"));
                out.push(format!("R[{r},{s}]"));
            }
        }
        for r in 1..pp {
            out.push(format!("Q(X+[{r},{pm}])[{},{pm}]", pp - r));
            out.push(format!("Q(X-[{r},{pm}])[{},{pm}]", pp - r));
        }
        for s in 1..pm {
            out.push(format!("Q(X+[{pp},{s}])[{pp},{}]", pm - s));
            out.push(format!("Q(X-[{pp},{s}])[{pp},{}]", pm - s));
        }
        for (r, s) in self.params.interior_classes() {
            out.push(format!("Q(h[{r},{s}])"));
            out.push(format!("P(h[{r},{s}])"));
        }
        out
    }

    /// The socle series of a named module. Fock diagrams keep the factors
    /// whose weight lies within `levels` of the Fock vacuum.
    pub fn socle_series(&self, name: &str) -> Result<LoewyDiagram> {
        let bad = || Error::UnknownName(format!("diagram {name:?}"));
        let name = name.trim();
        if let Some(inner) = bracketed(name, "F") {
            let (r, s, n) = parse_triple(inner).ok_or_else(bad)?;
            return self.fock_diagram(r, s, n);
        }
        for (prefix, sign) in [("V+", Sign::Plus), ("V-", Sign::Minus)] {
            if let Some(inner) = bracketed(name, prefix) {
                let (r, s) = parse_pair(inner).ok_or_else(bad)?;
                return self.lattice_diagram(sign, r, s);
            }
        }
        for (prefix, sign) in [("P+", Sign::Plus), ("P-", Sign::Minus)] {
            if let Some(inner) = bracketed(name, prefix) {
                let (a, b) = parse_pair(inner).ok_or_else(bad)?;
                return self.projective_x(sign, a, b);
            }
        }
        for (prefix, sign) in [("Q(X+", Sign::Plus), ("Q(X-", Sign::Minus)] {
            if let Some(rest) = name.strip_prefix(prefix) {
                let (head, tail) = rest.split_once("])").ok_or_else(bad)?;
                let (a, b) = parse_pair(head.strip_prefix('[').ok_or_else(bad)?).ok_or_else(bad)?;
                let (c, d) = parse_pair(
                    tail.strip_prefix('[')
                        .and_then(|t| t.strip_suffix(']'))
                        .ok_or_else(bad)?,
                )
                .ok_or_else(bad)?;
                return self.q_diagram(sign, (a, b), (c, d));
            }
        }
        for (prefix, kind) in [("Q(h", 'Q'), ("P(h", 'P')] {
            if let Some(rest) = name.strip_prefix(prefix) {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix("])"))
                    .ok_or_else(bad)?;
                let (r, s) = parse_pair(inner).ok_or_else(bad)?;
                return self.minimal_cover(kind, r, s);
            }
        }
        for kind in ['K', 'N', 'R'] {
            if let Some(inner) = bracketed(name, &kind.to_string()) {
                let (a, b) = parse_pair(inner).ok_or_else(bad)?;
                return self.thick_piece(kind, a, b);
            }
        }
        if let Ok(l) = name.parse::<SimpleLabel>() {
            l.validate(&self.params)?;
            return Ok(LoewyDiagram::new(
                &self.params,
                name.to_string(),
                "simple",
                vec![vec![Factor::Simple(l)]],
                "simple",
            ));
        }
        Err(bad())
    }

    fn fock_diagram(&self, r: i64, s: i64, n: i64) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        if !self.in_table(r, s) {
            return Err(Error::OutOfRange(format!("Fock label ({r},{s};{n})")));
        }
        let top = self.params.h(r, s, n) + Rat::from(self.levels as i64);
        let m = n.abs();
        let series = |rr: i64, ss: i64, start: i64, step0: i64| -> Vec<Factor> {
            (start..=start + self.levels as i64 + 4)
                .map(|k| Factor::Vir {
                    r: rr,
                    s: ss,
                    n: m + 2 * k + step0,
                })
                .filter(|f| f.weight(&self.params) <= top)
                .collect()
        };
        let (rv, sv) = (pp - r, pm - s);
        let (family, layers) = match (r == pp, s == pm) {
            (false, false) => {
                let a = if n >= 0 { 0 } else { 1 };
                let mut middle = series(r, s, a, 0);
                middle.extend(series(rv, sv, 1 - a, 0));
                (
                    "fock-braided",
                    vec![series(r, sv, 0, 1), middle, series(rv, s, 0, 1)],
                )
            }
            (true, false) => {
                let a = if n >= 1 { 0 } else { 1 };
                (
                    "fock-chain-col",
                    vec![series(pp, sv, 0, 1), series(pp, s, a, 0)],
                )
            }
            (false, true) => {
                let a = if n >= 0 { 1 } else { 0 };
                (
                    "fock-chain-row",
                    vec![series(r, pm, 0, 0), series(rv, pm, a, -1)],
                )
            }
            (true, true) => ("fock-semisimple", vec![series(pp, pm, 0, 0)]),
        };
        let layers: Vec<Vec<Factor>> = layers.into_iter().filter(|l| !l.is_empty()).collect();
        Ok(LoewyDiagram::new(
            &self.params,
            format!("F[{r},{s};{n}]"),
            "fock",
            layers,
            family,
        )
        .with_ambient(vec![Term::Fock { r, s, n }]))
    }

    fn lattice_diagram(&self, sign: Sign, r: i64, s: i64) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        if !self.in_table(r, s) {
            return Err(Error::OutOfRange(format!("lattice label ({r},{s})")));
        }
        let (rv, sv) = (pp - r, pm - s);
        let other = match sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        let layers = match (r == pp, s == pm) {
            (false, false) => {
                let mut middle = vec![self.x(other, rv, s), self.x(other, r, sv)];
                if sign == Sign::Plus {
                    middle.push(self.min_l(r, s));
                }
                vec![vec![self.x(sign, r, s)], middle, vec![self.x(sign, rv, sv)]]
            }
            (false, true) => vec![vec![self.x(sign, r, pm)], vec![self.x(other, rv, pm)]],
            (true, false) => vec![vec![self.x(sign, pp, s)], vec![self.x(other, pp, sv)]],
            (true, true) => vec![vec![self.x(sign, pp, pm)]],
        };
        Ok(LoewyDiagram::new(
            &self.params,
            format!("V{}[{r},{s}]", sign.symbol()),
            "lattice",
            layers,
            "lattice-socle",
        )
        .with_ambient(vec![Term::Lattice { sign, r, s }]))
    }

    fn lattice_layers(&self, sign: Sign, r: i64, s: i64) -> Vec<Factor> {
        self.lattice_diagram(sign, r, s)
            .expect("in table")
            .layers
            .into_iter()
            .flatten()
            .collect()
    }

    fn q_diagram(
        &self,
        sign: Sign,
        (a, b): (i64, i64),
        (c, d): (i64, i64),
    ) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        let name = format!("Q(X{}[{a},{b}])[{c},{d}]", sign.symbol());
        let invalid = || Error::OutOfRange(format!("no diagram {name}"));
        let other = match sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        let end = self.x(sign, a, b);
        let side = self.x(other, c, d);
        if self.interior(a, b) {
            if (c, d) != (pp - a, b) && (c, d) != (a, pm - b) {
                return Err(invalid());
            }
            let middle = match sign {
                Sign::Plus => vec![side, self.min_l(a, b), side],
                Sign::Minus => vec![side, side],
            };
            // The composition series is stated independently of the socle
            // series: top and bottom `X^ε_{a,b}`, with the rest in between.
            let composition = [vec![end, end], middle.clone()].concat();
            return Ok(LoewyDiagram::new(
                &self.params,
                name,
                "q-thick",
                vec![vec![end], middle, vec![end]],
                "q-thick",
            )
            .with_composition(composition));
        }
        let thin_ok = (b == pm && a < pp && (c, d) == (pp - a, pm))
            || (a == pp && b < pm && (c, d) == (pp, pm - b));
        if !thin_ok {
            return Err(invalid());
        }
        // Thin blocks: the module is `V^ε_{a,b} ⊕ V^{-ε}_{c,d}` as a vector space.
        let mut composition = self.lattice_layers(sign, a, b);
        composition.extend(self.lattice_layers(other, c, d));
        Ok(LoewyDiagram::new(
            &self.params,
            name,
            "q-thin",
            vec![vec![end], vec![side, side], vec![end]],
            "q-thin",
        )
        .with_composition(composition)
        .with_ambient(vec![
            Term::Lattice { sign, r: a, s: b },
            Term::Lattice {
                sign: other,
                r: c,
                s: d,
            },
        ]))
    }

    /// `P^+_{a,b}` or `P^-_{a,c}` in a thick block.
    fn projective_x(&self, sign: Sign, a: i64, c: i64) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        if !self.interior(a, c) {
            return Err(Error::OutOfRange(format!(
                "P{}[{a},{c}] needs an interior label",
                sign.symbol()
            )));
        }
        let name = format!("P{}[{a},{c}]", sign.symbol());
        let (r, s) = self.params.interior_class(a, c);
        let (layers, family) = match sign {
            Sign::Plus => {
                let (b, av, bv) = (c, pp - a, pm - c);
                let xp = self.x(Sign::Plus, a, b);
                let xpv = self.x(Sign::Plus, av, bv);
                let m1 = self.x(Sign::Minus, a, bv);
                let m2 = self.x(Sign::Minus, av, b);
                let l = self.min_l(r, s);
                (
                    vec![
                        vec![xp],
                        [rep(2, m1), vec![l], rep(2, m2)].concat(),
                        [rep(2, xp), rep(4, xpv)].concat(),
                        [rep(2, m2), vec![l], rep(2, m1)].concat(),
                        vec![xp],
                    ],
                    "p-plus",
                )
            }
            Sign::Minus => {
                // The module is `P^-_{a,b∨}` with `b = p₋ − c`.
                let b = pm - c;
                let (av, bv) = (pp - a, c);
                let xm = self.x(Sign::Minus, a, bv);
                let xmv = self.x(Sign::Minus, av, b);
                let p1 = self.x(Sign::Plus, a, b);
                let p2 = self.x(Sign::Plus, av, pm - b);
                let l = self.min_l(r, s);
                (
                    vec![
                        vec![xm],
                        [rep(2, p1), rep(2, p2)].concat(),
                        [rep(2, xm), rep(4, xmv), rep(2, l)].concat(),
                        [rep(2, p2), rep(2, p1)].concat(),
                        vec![xm],
                    ],
                    "p-minus",
                )
            }
        };
        // As a vector space each `P^±` in the thick block of `(r, s)` is
        // `V⁺_{r,s} ⊕ V⁺_{r∨,s∨} ⊕ V⁻_{r,s∨} ⊕ V⁻_{r∨,s}`.
        let (rv, sv) = (pp - r, pm - s);
        let ambient = vec![
            Term::Lattice {
                sign: Sign::Plus,
                r,
                s,
            },
            Term::Lattice {
                sign: Sign::Plus,
                r: rv,
                s: sv,
            },
            Term::Lattice {
                sign: Sign::Minus,
                r,
                s: sv,
            },
            Term::Lattice {
                sign: Sign::Minus,
                r: rv,
                s,
            },
        ];
        let composition = ambient
            .iter()
            .flat_map(|t| match *t {
                Term::Lattice { sign, r, s } => self.lattice_layers(sign, r, s),
                _ => unreachable!(),
            })
            .collect();
        Ok(
            LoewyDiagram::new(&self.params, name, family, layers, family)
                .with_composition(composition)
                .with_ambient(ambient),
        )
    }

    fn thick_piece(&self, kind: char, a: i64, b: i64) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        if !self.interior(a, b) {
            return Err(Error::OutOfRange(format!(
                "{kind}[{a},{b}] needs an interior label"
            )));
        }
        let (r, s) = (a, b);
        let (av, bv) = (pp - a, pm - b);
        let xp = self.x(Sign::Plus, a, b);
        let xpv = self.x(Sign::Plus, av, bv);
        let m1 = self.x(Sign::Minus, av, b);
        let m2 = self.x(Sign::Minus, a, bv);
        let l = self.min_l(r, s);
        let (layers, family) = match kind {
            'K' => (vec![vec![xp], vec![l]], "k-extension"),
            'N' => (
                vec![
                    vec![xp],
                    [rep(2, m1), vec![l], rep(2, m2)].concat(),
                    vec![xp, xpv],
                    vec![l],
                ],
                "n-submodule",
            ),
            'R' => (
                vec![vec![xp], [rep(2, m1), rep(2, m2)].concat(), vec![xp]],
                "r-quotient",
            ),
            _ => unreachable!(),
        };
        Ok(LoewyDiagram::new(
            &self.params,
            format!("{kind}[{a},{b}]"),
            family,
            layers,
            family,
        ))
    }

    fn minimal_cover(&self, kind: char, r: i64, s: i64) -> Result<LoewyDiagram> {
        let (pp, pm) = (self.pp(), self.pm());
        if !self.interior(r, s) {
            return Err(Error::OutOfRange(format!(
                "{kind}(h[{r},{s}]) needs an interior label"
            )));
        }
        let (rv, sv) = (pp - r, pm - s);
        let l = self.min_l(r, s);
        let pair = vec![self.x(Sign::Plus, r, s), self.x(Sign::Plus, rv, sv)];
        let (layers, family) = match kind {
            'Q' => (vec![vec![l], pair.clone(), vec![l]], "q-minimal"),
            'P' => (
                vec![
                    vec![l],
                    pair.clone(),
                    [
                        rep(2, self.x(Sign::Minus, rv, s)),
                        vec![l],
                        rep(2, self.x(Sign::Minus, r, sv)),
                    ]
                    .concat(),
                    pair,
                    vec![l],
                ],
                "p-minimal",
            ),
            _ => unreachable!(),
        };
        Ok(LoewyDiagram::new(
            &self.params,
            format!("{kind}(h[{r},{s}])"),
            family,
            layers,
            family,
        ))
    }

    // -- characters ---------------------------------------------------------

    /// Irreducible Virasoro graded dimensions at weight `h`.
    fn irreducible(&self, h: &Rat) -> Result<Vec<usize>> {
        self.verma.irreducible_dims(h, self.levels)
    }

    /// Adds the character of a factor into a window.
    fn add_factor(&self, acc: &mut CharacterSeries, f: &Factor, mult: usize) -> Result<()> {
        match f {
            Factor::Vir { r, s, n } => {
                let h = self.params.h(*r, *s, *n);
                if acc.slot(&h)?.is_some() {
                    acc.add_shifted(&h, &self.irreducible(&h)?, mult)?;
                }
            }
            Factor::Simple(l) => {
                l.validate(&self.params)?;
                match l.kind {
                    SimpleKind::Minimal => {
                        let h = self.params.h(l.r, l.s, 0);
                        acc.add_shifted(&h, &self.irreducible(&h)?, mult)?;
                    }
                    SimpleKind::XPlus | SimpleKind::XMinus => {
                        let (sign, extra) = if l.kind == SimpleKind::XPlus {
                            (Sign::Plus, 1)
                        } else {
                            (Sign::Minus, 2)
                        };
                        for n in 0..=acc.levels() as i64 + 4 {
                            let h = self.params.delta_weight(sign, l.r, l.s, n)?;
                            if acc.slot(&h)?.is_some() {
                                let m = (2 * n + extra) as usize;
                                acc.add_shifted(&h, &self.irreducible(&h)?, mult * m)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn add_term(&self, acc: &mut CharacterSeries, t: &Term) -> Result<()> {
        let fock: Vec<usize> = (0..=self.levels).map(partition_count).collect();
        match *t {
            Term::Fock { r, s, n } => acc.add_shifted(&self.params.h(r, s, n), &fock, 1),
            Term::Lattice { sign, r, s } => {
                let parity = if sign == Sign::Plus { 0 } else { 1 };
                let k = acc.levels() as i64 + 6;
                for n in (-2 * k - 1..=2 * k + 1).filter(|n| n.rem_euclid(2) == parity) {
                    let h = self.params.h(r, s, n);
                    if acc.slot(&h)?.is_some() {
                        acc.add_shifted(&h, &fock, 1)?;
                    }
                }
                Ok(())
            }
            Term::Factor(f) => self.add_factor(acc, &f, 1),
        }
    }

    fn term_lowest_weight(&self, t: &Term) -> Rat {
        match *t {
            Term::Fock { r, s, n } => self.params.h(r, s, n),
            Term::Lattice { sign, r, s } => {
                let parity = if sign == Sign::Plus { 0 } else { 1 };
                (-11..=11)
                    .filter(|n: &i64| n.rem_euclid(2) == parity)
                    .map(|n| self.params.h(r, s, n))
                    .min()
                    .expect("nonempty")
            }
            Term::Factor(f) => f.weight(&self.params),
        }
    }

    /// Character of a direct sum of computable modules on `levels` levels
    /// above `base`.
    pub fn sum_character(&self, terms: &[Term], base: &Rat) -> Result<CharacterSeries> {
        let mut acc = CharacterSeries::zero(base.clone(), self.levels);
        for t in terms {
            self.add_term(&mut acc, t)?;
        }
        Ok(acc)
    }

    /// Character of a diagram as the sum of its layers.
    pub fn diagram_character(&self, d: &LoewyDiagram, base: &Rat) -> Result<CharacterSeries> {
        let mut acc = CharacterSeries::zero(base.clone(), self.levels);
        for (f, m) in d.multiset() {
            self.add_factor(&mut acc, &f, m)?;
        }
        Ok(acc)
    }

    /// Lowest weight over the layers of a diagram.
    pub fn diagram_lowest_weight(&self, d: &LoewyDiagram) -> Rat {
        d.layers
            .iter()
            .flatten()
            .map(|f| f.weight(&self.params))
            .min()
            .unwrap_or_else(Rat::zero)
    }

    /// Character of a named module: a computable module (`F[..]`,
    /// `V±[..]`, a simple or `h[..]` factor) or any encoded diagram.
    pub fn character(&self, name: &str) -> Result<CharacterSeries> {
        if let Ok(t) = name.parse::<Term>() {
            if !matches!(t, Term::Factor(Factor::Simple(_))) || name.parse::<SimpleLabel>().is_ok()
            {
                let base = self.term_lowest_weight(&t);
                return self.sum_character(&[t], &base);
            }
        }
        let d = self.socle_series(name)?;
        let base = self.diagram_lowest_weight(&d);
        self.diagram_character(&d, &base)
    }

    // -- Zhu centre ----------------------------------------------------------

    pub fn zhu_center(&self) -> ZhuCenter {
        let p = &self.params;
        let (pp, pm) = (self.pp(), self.pm());
        let d = |sign, r, s| p.delta_weight(sign, r, s, 0).expect("in table");
        let mut factors = Vec::new();
        for (r, s) in p.interior_classes() {
            factors.push((p.h(r, s, 0), 3));
        }
        for i in 1..pp {
            for j in 1..pm {
                factors.push((d(Sign::Plus, i, j), 2));
            }
        }
        for i in 1..pp {
            for j in 1..pm {
                factors.push((d(Sign::Minus, i, j), 1));
            }
        }
        for i in 1..pp {
            factors.push((d(Sign::Plus, i, pm), 2));
        }
        for i in 1..pp {
            factors.push((d(Sign::Minus, i, pm), 1));
        }
        for j in 1..pm {
            factors.push((d(Sign::Plus, pp, j), 2));
        }
        for j in 1..pm {
            factors.push((d(Sign::Minus, pp, j), 1));
        }
        factors.push((d(Sign::Plus, pp, pm), 1));
        factors.push((d(Sign::Minus, pp, pm), 1));
        let roots: Vec<Rat> = factors
            .iter()
            .flat_map(|(x, m)| std::iter::repeat_n(x.clone(), *m))
            .collect();
        ZhuCenter {
            poly: HPoly::from_roots(&roots),
            factors,
            cubic_index: "interior-kac-table",
        }
    }

    // -- consistency harness ---------------------------------------------

    /// Layer union against the recorded composition, then the layer
    /// character against the ambient character when one is recorded.
    pub fn check_diagram(&self, d: &LoewyDiagram) -> Check {
        let name = format!("diagram {}", d.name);
        if d.layers.is_empty() || d.layers.iter().any(Vec::is_empty) {
            return Check::fail(name, "empty layer");
        }
        if d.multiset() != count(&d.composition) {
            return Check::fail(name, "layer union differs from the composition factors");
        }
        if d.ambient.is_empty() {
            return Check::pass(name);
        }
        let base = d
            .ambient
            .iter()
            .map(|t| self.term_lowest_weight(t))
            .chain(std::iter::once(self.diagram_lowest_weight(d)))
            .min()
            .expect("nonempty");
        let r = (|| {
            let lhs = self.diagram_character(d, &base)?;
            let rhs = self.sum_character(&d.ambient, &base)?;
            Ok(lhs.first_difference(&rhs)?.map(|k| {
                format!(
                    "character differs from {} at level {k} above {base}",
                    d.ambient
                        .iter()
                        .map(Term::to_string)
                        .collect::<Vec<_>>()
                        .join(" + ")
                )
            }))
        })();
        Check::from_result(name, r)
    }

    /// Runs every check. Felder homology is compared at position zero for
    /// each interior label and both screening signs.
    pub fn check_consistency(&self) -> ConsistencyReport {
        let mut checks = Vec::new();
        let p = &self.params;
        let (pp, pm) = (self.pp(), self.pm());

        // Census.
        let simples = self.simple_list();
        let expected = ((pp - 1) * (pm - 1) / 2 + 2 * pp * pm) as usize;
        checks.push(if simples.len() == expected {
            Check::pass("simple census")
        } else {
            Check::fail(
                "simple census",
                format!("{} simples, expected {expected}", simples.len()),
            )
        });
        let partition = self.block_partition();
        let mut seen: BTreeMap<SimpleLabel, usize> = BTreeMap::new();
        let mut bad_sizes = Vec::new();
        for (b, members) in &partition {
            let want = match b {
                BlockId::Thick { .. } => 5,
                BlockId::ThinRow(_) | BlockId::ThinCol(_) => 2,
                _ => 1,
            };
            if members.len() != want {
                bad_sizes.push(b.to_string());
            }
            for m in members {
                *seen.entry(*m).or_insert(0) += 1;
                if classify(p, m) != *b {
                    bad_sizes.push(format!("{m} in {b}"));
                }
            }
        }
        let once = simples.iter().all(|s| seen.get(s) == Some(&1)) && seen.len() == simples.len();
        let want_blocks = (pp - 1) * (pm - 1) / 2 + (pp - 1) + (pm - 1) + 2;
        checks.push(
            if once && bad_sizes.is_empty() && partition.len() as i64 == want_blocks {
                Check::pass("block partition")
            } else {
                Check::fail(
                    "block partition",
                    format!("blocks {}, issues {bad_sizes:?}", partition.len()),
                )
            },
        );

        // Ext tables.
        let mut ext_issue = None;
        for a in &simples {
            for b in &simples {
                let (x, y) = (
                    self.ext_dim(a, b).unwrap_or(usize::MAX),
                    self.ext_dim(b, a).unwrap_or(usize::MAX),
                );
                if x != y {
                    ext_issue = Some(format!("asymmetric at ({a}, {b})"));
                } else if a == b && x != 0 {
                    ext_issue = Some(format!("self-extension of {a}"));
                } else if classify(p, a) != classify(p, b) && x != 0 {
                    ext_issue = Some(format!("cross-block extension ({a}, {b})"));
                }
            }
        }
        checks.push(match ext_issue {
            None => Check::pass("ext symmetry and block locality"),
            Some(d) => Check::fail("ext symmetry and block locality", d),
        });

        // Diagrams.
        for name in self.diagram_names() {
            match self.socle_series(&name) {
                Ok(d) => checks.push(self.check_diagram(&d)),
                Err(e) => checks.push(Check::fail(format!("diagram {name}"), e.to_string())),
            }
        }

        // Semisimple lattice modules are simple.
        for sign in [Sign::Plus, Sign::Minus] {
            let name = format!("semisimple V{}[{pp},{pm}]", sign.symbol());
            let t = Term::Lattice { sign, r: pp, s: pm };
            let base = self.term_lowest_weight(&t);
            let r = (|| {
                let lhs = self.sum_character(&[t], &base)?;
                let rhs = self.sum_character(&[Term::Factor(self.x(sign, pp, pm))], &base)?;
                Ok(lhs
                    .first_difference(&rhs)?
                    .map(|k| format!("differs at level {k}")))
            })();
            checks.push(Check::from_result(name, r));
        }

        // Felder homology against irreducible characters.
        for (r, s) in p.interior_classes() {
            for sign in [Sign::Plus, Sign::Minus] {
                let name = format!("felder {}({r},{s})", sign.symbol());
                let r2 = (|| {
                    let h = felder_homology(*p, sign, r, s, 0, self.levels)?;
                    let want = self.irreducible(&p.h(r, s, 0))?;
                    Ok(h.iter()
                        .zip(&want)
                        .position(|(a, b)| a != b)
                        .map(|k| format!("homology {} != {} at level {k}", h[k], want[k])))
                })();
                checks.push(Check::from_result(name, r2));
            }
        }

        // Zhu centre.
        let z = self.zhu_center();
        let mut zhu_issue = None;
        if z.degree() != z.factor_count() {
            zhu_issue = Some(format!(
                "degree {} vs {} factors",
                z.degree(),
                z.factor_count()
            ));
        }
        for (r, s) in p.interior_classes() {
            let m = z.multiplicity(&p.h(r, s, 0));
            if m != 3 {
                zhu_issue = Some(format!("multiplicity {m} at h[{r},{s}]"));
            }
        }
        checks.push(match zhu_issue {
            None => Check::pass("zhu centre"),
            Some(d) => Check::fail("zhu centre", d),
        });

        ConsistencyReport {
            levels: self.levels,
            checks,
        }
    }
}

// ---------------------------------------------------------------------------
// Export

/// Output formats for [`export_diagram`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

/// Renders a diagram. JSON is pretty-printed with a trailing newline. DOT
/// ranks nodes by layer (socle at the bottom) and draws an edge from each
/// factor to each factor of the layer below with a nonzero `Ext¹`.
pub fn export_diagram(d: &LoewyDiagram, fmt: ExportFormat) -> Result<String> {
    match fmt {
        ExportFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(d).map_err(|e| Error::Invariant(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ExportFormat::Dot => {
            let params = d.params()?;
            let atlas_ext = |a: &Factor, b: &Factor| -> usize {
                match (a, b) {
                    (Factor::Simple(x), Factor::Simple(y)) => {
                        Atlas::ext_dim_static(&params, x, y).unwrap_or(0)
                    }
                    _ => 0,
                }
            };
            let id = |i: usize, j: usize| format!("n{i}_{j}");
            let mut out = String::new();
            out.push_str(&format!("digraph \"{}\" {{\n", d.name));
            out.push_str("  rankdir=BT;\n  node [shape=box];\n");
            for (i, layer) in d.layers.iter().enumerate() {
                out.push_str(&format!("  {{ rank=same; // layer {}\n", i + 1));
                for (j, f) in layer.iter().enumerate() {
                    out.push_str(&format!("    {} [label=\"{f}\"];\n", id(i, j)));
                }
                out.push_str("  }\n");
            }
            for i in 1..d.layers.len() {
                for (j, upper) in d.layers[i].iter().enumerate() {
                    for (k, lower) in d.layers[i - 1].iter().enumerate() {
                        if atlas_ext(upper, lower) > 0 {
                            out.push_str(&format!("  {} -> {};\n", id(i, j), id(i - 1, k)));
                        }
                    }
                }
            }
            out.push_str("}\n");
            Ok(out)
        }
    }
}

/// Parses a diagram from its JSON export.
pub fn parse_diagram(json: &str) -> Result<LoewyDiagram> {
    serde_json::from_str(json).map_err(|e| Error::UnknownName(format!("diagram JSON: {e}")))
}

impl Atlas {
    /// `dim Ext¹(a, b)` without building an atlas.
    pub fn ext_dim_static(params: &Params, a: &SimpleLabel, b: &SimpleLabel) -> Result<usize> {
        Atlas::new(*params, 0).ext_dim(a, b)
    }
}
