//! Shuffle and stuffle products, the double shuffle conditions and exact
//! bases of `ds_n`, plus the derivation `D_f` and the Poisson bracket.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{bracket, bracket_letter, is_lie, lyndon_basis, LyndonBasis};
use crate::linalg::{self, dot_int, integer_vector, ExactEchelon};
use crate::par::{self, Strategy};
use crate::poly::Poly;
use crate::rational::{q, sign, Q};
use crate::word::{Letter, Word};

type IntPoly = BTreeMap<Word, i64>;

fn to_poly(p: &IntPoly) -> Poly {
    Poly::from_terms(p.iter().map(|(w, c)| (*w, q(*c))))
}

fn shuffle_int(u: Word, v: Word, out: &mut IntPoly, prefix: Word, mult: i64) {
    if u.is_empty() || v.is_empty() {
        *out.entry(prefix.concat(u.concat(v))).or_default() += mult;
        return;
    }
    let (a, u1) = u.split_first().unwrap();
    let (b, v1) = v.split_first().unwrap();
    shuffle_int(u1, v, out, prefix.push_back(a), mult);
    shuffle_int(u, v1, out, prefix.push_back(b), mult);
}

/// `sh(u, v)`.
pub fn shuffle(u: Word, v: Word) -> Poly {
    let mut out = IntPoly::new();
    shuffle_int(u, v, &mut out, Word::EMPTY, 1);
    to_poly(&out)
}

/// Composition `(i_1, ..., i_k)` of a word `y_{i_1} ... y_{i_k}`, `y_i = x^{i-1} y`.
pub fn composition(w: Word) -> Result<Vec<usize>> {
    if w.is_empty() {
        return Ok(Vec::new());
    }
    if w.last() != Some(Letter::Y) {
        return Err(Error::NotYEnding(w));
    }
    let e = w.exponents();
    Ok(e[..e.len() - 1].iter().map(|a| a + 1).collect())
}

pub fn from_composition(c: &[usize]) -> Word {
    let mut w = Word::EMPTY;
    for &i in c {
        w = w.concat(Word::power(Letter::X, i - 1)).push_back(Letter::Y);
    }
    w
}

fn stuffle_rec(a: &[usize], b: &[usize], memo: &mut HashMap<(Vec<usize>, Vec<usize>), IntPoly>) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        let w = from_composition(if a.is_empty() { b } else { a });
        return BTreeMap::from([(w, 1)]);
    }
    let key = (a.to_vec(), b.to_vec());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut out = IntPoly::new();
    let mut add = |head: usize, tail: IntPoly| {
        let h = from_composition(&[head]);
        for (w, c) in tail {
            *out.entry(h.concat(w)).or_default() += c;
        }
    };
    add(a[0], stuffle_rec(&a[1..], b, memo));
    add(b[0], stuffle_rec(a, &b[1..], memo));
    add(a[0] + b[0], stuffle_rec(&a[1..], &b[1..], memo));
    out.retain(|_, c| *c != 0);
    memo.insert(key, out.clone());
    out
}

fn stuffle_int(u: Word, v: Word) -> Result<IntPoly> {
    let a = composition(u)?;
    let b = composition(v)?;
    Ok(stuffle_rec(&a, &b, &mut HashMap::new()))
}

/// `st(u, v)` for words ending in `y` (or empty).
pub fn stuffle(u: Word, v: Word) -> Result<Poly> {
    Ok(to_poly(&stuffle_int(u, v)?))
}

/// Nonempty words of length `k` ending in `y`.
pub fn y_ending_words(k: usize) -> impl Iterator<Item = Word> {
    Word::all_of_length(k).filter(|w| w.last() == Some(Letter::Y))
}

/// Unordered pairs `{u, v}` of nonempty `y`-ending words of total degree `n`,
/// listed with `u <= v`. With `exclude_y_powers` the pairs where both are
/// powers of `y` are left out.
pub fn stuffle_pairs(n: usize, exclude_y_powers: bool) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for k in 1..=n / 2 {
        for u in y_ending_words(k) {
            for v in y_ending_words(n - k) {
                if k == n - k && v < u {
                    continue;
                }
                if exclude_y_powers && u.is_power_of_y() && v.is_power_of_y() {
                    continue;
                }
                out.push((u, v));
            }
        }
    }
    out
}

/// `f_* = π_y(f) + ((-1)^{n-1}/n) (f | x^{n-1} y) y^n` for homogeneous `f` of degree `n`.
pub fn f_star(f: &Poly) -> Result<Poly> {
    let Some(n) = f.homogeneous_degree()? else {
        return Ok(Poly::zero());
    };
    let mut out = f.pi_y();
    let c = f.get(x_pow_y(n - 1)) * sign(n - 1) / q(n as i64);
    out.add_term(Word::power(Letter::Y, n), c);
    Ok(out)
}

pub fn x_pow_y(k: usize) -> Word {
    Word::power(Letter::X, k).push_back(Letter::Y)
}

/// A stuffle pair whose pairing with the polynomial is nonzero.
#[derive(Clone, Debug, Serialize)]
pub struct FailedPair {
    pub u: String,
    pub v: String,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DsReport {
    pub degree: usize,
    pub lie: bool,
    pub failed_pairs: Vec<FailedPair>,
}

impl DsReport {
    pub fn ok(&self) -> bool {
        self.lie && self.failed_pairs.is_empty()
    }
}

fn check_ds_degree(f: &Poly) -> Result<usize> {
    match f.homogeneous_degree()? {
        Some(n) if n >= 3 => Ok(n),
        Some(n) => Err(Error::DegreeOutOfRange { degree: n, min: 3, max: usize::MAX }),
        // zero: degree unknown; treat as trivially in ds
        None => Ok(0),
    }
}

/// Double shuffle membership (exclusion form) with failed pairs listed.
pub fn ds_report(f: &Poly) -> Result<DsReport> {
    let n = check_ds_degree(f)?;
    if n == 0 {
        return Ok(DsReport { degree: 0, lie: true, failed_pairs: Vec::new() });
    }
    let lie = is_lie(f)?;
    let failed_pairs = failures(f, &stuffle_pairs(n, true))?;
    Ok(DsReport { degree: n, lie, failed_pairs })
}

/// Double shuffle membership in the `f_*` form: Lie, and `f_*` orthogonal to
/// the stuffles of all pairs of `y`-ending words.
pub fn ds_report_fstar(f: &Poly) -> Result<DsReport> {
    let n = check_ds_degree(f)?;
    if n == 0 {
        return Ok(DsReport { degree: 0, lie: true, failed_pairs: Vec::new() });
    }
    let lie = is_lie(f)?;
    let failed_pairs = failures(&f_star(f)?, &stuffle_pairs(n, false))?;
    Ok(DsReport { degree: n, lie, failed_pairs })
}

fn failures(f: &Poly, pairs: &[(Word, Word)]) -> Result<Vec<FailedPair>> {
    let mut out = Vec::new();
    for (u, v) in pairs {
        let r = f.pair(&stuffle(*u, *v)?)?;
        if !r.is_zero() {
            out.push(FailedPair { u: u.to_string(), v: v.to_string(), residual: crate::rational::format_q(&r) });
        }
    }
    Ok(out)
}

pub fn is_ds(f: &Poly) -> Result<bool> {
    Ok(ds_report(f)?.ok())
}

/// Which formulation of the stuffle condition a constraint system encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StuffleForm {
    /// Pairs not both powers of `y`, paired with `f`.
    Exclusion,
    /// All pairs, paired with `f_*` (rows scaled by `n`).
    FStar,
}

/// Integer constraint system over Lyndon coordinates of `Lie_n`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub weight: usize,
    pub form: StuffleForm,
    pub pairs: Vec<(Word, Word)>,
    pub rows: Vec<Vec<i128>>,
    pub ncols: usize,
}

/// Maps each word of degree `n` (by bits) to its `(column, coefficient)`
/// occurrences in the Lyndon expansions.
fn word_columns(basis: &LyndonBasis) -> Vec<Vec<(u32, i64)>> {
    let mut table = vec![Vec::new(); 1usize << basis.degree];
    for (j, e) in basis.elements.iter().enumerate() {
        for &(bits, c) in &e.int_terms {
            table[bits as usize].push((j as u32, c));
        }
    }
    table
}

pub fn constraint_system(n: usize, form: StuffleForm, strategy: Strategy) -> Result<ConstraintSystem> {
    let basis = lyndon_basis(n);
    let table = word_columns(&basis);
    let ncols = basis.len();
    let pairs = stuffle_pairs(n, form == StuffleForm::Exclusion);
    let xy = x_pow_y(n - 1).bits() as usize;
    let yn = Word::power(Letter::Y, n);
    let built: Vec<Result<Vec<i128>>> = par::map(strategy, &pairs, |(u, v)| {
        let st = stuffle_int(*u, *v)?;
        let mut row = vec![0i128; ncols];
        let scale: i128 = if form == StuffleForm::FStar { n as i128 } else { 1 };
        for (w, c) in &st {
            for &(j, p) in &table[w.bits() as usize] {
                row[j as usize] += scale * (*c as i128) * (p as i128);
            }
            if form == StuffleForm::FStar && *w == yn {
                let s: i128 = if n % 2 == 1 { 1 } else { -1 };
                for &(j, p) in &table[xy] {
                    row[j as usize] += s * (*c as i128) * (p as i128);
                }
            }
        }
        Ok(row)
    });
    let rows = built.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ConstraintSystem { weight: n, form, pairs, rows, ncols })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintStats {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Rows picked by the modular filter and eliminated exactly.
    pub pivot_rows: usize,
    /// Whether the modular shortcut failed verification and a full exact
    /// elimination was run.
    pub full_elimination: bool,
}

/// Canonical nullspace of a constraint system; every vector verified
/// exactly against all rows.
pub fn solve_system(sys: &ConstraintSystem, strategy: Strategy) -> (Vec<Vec<Q>>, ConstraintStats) {
    let chosen = linalg::independent_rows_mod_p(&sys.rows, sys.ncols);
    let to_big = |r: &Vec<i128>| r.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>();
    let mut ech = ExactEchelon::new(sys.ncols);
    for &i in &chosen {
        ech.insert(to_big(&sys.rows[i]));
    }
    let mut null = ech.nullspace();
    let verified = |null: &[Vec<Q>]| {
        null.iter().all(|v| {
            let iv = integer_vector(v);
            par::find_first_failure(strategy, &sys.rows, |r| dot_int(r, &iv).is_zero()).is_none()
        })
    };
    let mut full = false;
    let mut rank = ech.rank();
    if !verified(&null) {
        full = true;
        let mut ech = ExactEchelon::new(sys.ncols);
        for r in &sys.rows {
            ech.insert(to_big(r));
        }
        rank = ech.rank();
        null = ech.nullspace();
        assert!(verified(&null), "exact nullspace fails verification");
    }
    let stats = ConstraintStats { rows: sys.rows.len(), cols: sys.ncols, rank, pivot_rows: chosen.len(), full_elimination: full };
    (null, stats)
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub lie: bool,
    pub stuffle: bool,
    /// `f_*` form, only evaluated in strict mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fstar: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisResult {
    pub weight: usize,
    pub dimension: usize,
    pub basis: Vec<Poly>,
    /// Lyndon words indexing the coordinate vectors.
    pub lyndon_words: Vec<String>,
    pub coordinates: Vec<Vec<String>>,
    pub constraint_stats: ConstraintStats,
    pub certificates: Vec<Certificate>,
    /// Reduced echelon form in Lyndon coordinates; this fixes
    /// `(f | x^{n-1} y) = 1` whenever that coefficient can be nonzero.
    pub normalization: &'static str,
}

impl BasisResult {
    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.lie && c.stuffle && c.fstar.unwrap_or(true))
    }

    pub fn coords_q(&self) -> Vec<Vec<Q>> {
        self.coordinates
            .iter()
            .map(|v| v.iter().map(|s| crate::rational::parse_q(s).unwrap()).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DsConfig {
    pub max_weight: usize,
    pub strategy: Strategy,
    /// Also certify with the `f_*` form and cross-check the two nullspaces.
    pub strict: bool,
}

impl Default for DsConfig {
    fn default() -> Self {
        DsConfig { max_weight: 10, strategy: Strategy::default(), strict: false }
    }
}

pub fn ds_basis(n: usize) -> Result<BasisResult> {
    ds_basis_with(n, &DsConfig::default())
}

pub fn ds_basis_with(n: usize, cfg: &DsConfig) -> Result<BasisResult> {
    if n < 3 || n > cfg.max_weight {
        return Err(Error::DegreeOutOfRange { degree: n, min: 3, max: cfg.max_weight });
    }
    let sys = constraint_system(n, StuffleForm::Exclusion, cfg.strategy)?;
    let (null, stats) = solve_system(&sys, cfg.strategy);
    if cfg.strict {
        let sys2 = constraint_system(n, StuffleForm::FStar, cfg.strategy)?;
        let (null2, _) = solve_system(&sys2, cfg.strategy);
        if null != null2 {
            return Err(Error::CheckFailed(format!("weight {n}: exclusion and f_* forms give different nullspaces")));
        }
    }
    let basis_l = lyndon_basis(n);
    let basis: Vec<Poly> = null.iter().map(|v| basis_l.from_coords(v)).collect();
    let certs: Vec<Result<Certificate>> = par::map(cfg.strategy, &basis, |f| {
        let r = ds_report(f)?;
        let fstar = if cfg.strict { Some(ds_report_fstar(f)?.ok()) } else { None };
        Ok(Certificate { lie: r.lie, stuffle: r.failed_pairs.is_empty(), fstar })
    });
    let certificates = certs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(BasisResult {
        weight: n,
        dimension: basis.len(),
        lyndon_words: basis_l.elements.iter().map(|e| e.word.to_string()).collect(),
        coordinates: null.iter().map(|v| v.iter().map(crate::rational::format_q).collect()).collect(),
        basis,
        constraint_stats: stats,
        certificates,
        normalization: "reduced echelon in Lyndon coordinates (artifact convention)",
    })
}

static DS_CACHE: OnceLock<RwLock<HashMap<usize, Arc<BasisResult>>>> = OnceLock::new();

/// [`ds_basis`] memoized per weight, with the maximum weight lifted to 12.
pub fn ds_basis_cached(n: usize) -> Result<Arc<BasisResult>> {
    let cache = DS_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().unwrap().get(&n) {
        return Ok(r.clone());
    }
    let cfg = DsConfig { max_weight: 12, ..DsConfig::default() };
    let r = Arc::new(ds_basis_with(n, &cfg)?);
    Ok(cache.write().unwrap().entry(n).or_insert(r).clone())
}

/// Derivation of `Q<x,y>` with `x -> 0`, `y -> [y, f]`, applied to `g`.
pub fn d_f(f: &Poly, g: &Poly) -> Poly {
    let yf = bracket_letter(Letter::Y, f);
    apply_letter_derivation(&Poly::zero(), &yf, g)
}

/// Applies the derivation determined by `x -> dx`, `y -> dy` (Leibniz rule).
pub fn apply_letter_derivation(dx: &Poly, dy: &Poly, g: &Poly) -> Poly {
    let mut out: BTreeMap<Word, Q> = BTreeMap::new();
    for (w, c) in g.terms() {
        for i in 0..w.len() {
            let img = if w.at(i) == Letter::X { dx } else { dy };
            if img.is_zero() {
                continue;
            }
            let pre = w.slice(0, i);
            let post = w.slice(i + 1, w.len());
            for (v, d) in img.terms() {
                let key = pre.concat(v).concat(post);
                let e = out.entry(key).or_insert_with(Q::zero);
                *e += c * d;
            }
        }
    }
    Poly::from_terms(out.into_iter().filter(|(_, c)| !c.is_zero()))
}

/// `{f, g} = [f, g] + D_f(g) - D_g(f)`.
pub fn poisson(f: &Poly, g: &Poly) -> Poly {
    &(&bracket(f, g) + &d_f(f, g)) - &d_f(g, f)
}

/// Normalized generator of `ds_3`: `[x,[x,y]] + [[x,y],y]`.
pub fn f3() -> Poly {
    let b = lyndon_basis(3);
    &b.elements[0].expansion + &b.elements[1].expansion
}
