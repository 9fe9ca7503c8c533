//! Truncated series, the ⊙-exponential of ds elements, the group-like
//! shuffle and stuffle tests, and exponentials of tangential derivations.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dshuffle::{d_f, is_ds, shuffle, stuffle, x_pow_y, y_ending_words};
use crate::error::{Error, Result};
use crate::kv::{beta, beta_inv, thm11_map, TangentialDerivation};
use crate::lie::is_lie;
use crate::par::{self, Strategy};
use crate::poly::Poly;
use crate::rational::{format_q, q, sign, Q};
use crate::word::{Letter, Word};

/// Series in `x, y` known up to degree `n` inclusive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    n: usize,
    poly: Poly,
}

impl TruncSeries {
    pub fn new(poly: Poly, n: usize) -> TruncSeries {
        TruncSeries { n, poly: poly.truncate(n) }
    }

    pub fn one(n: usize) -> TruncSeries {
        TruncSeries::new(Poly::one(), n)
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn constant(&self) -> Q {
        self.poly.constant_term()
    }

    pub fn component(&self, d: usize) -> Poly {
        self.poly.homogeneous_part(d)
    }

    /// `(Φ|w)`.
    pub fn coeff(&self, w: Word) -> Q {
        self.poly.get(w)
    }

    /// Degrees carrying a nonzero component.
    pub fn support_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.poly.words().map(Word::len).collect();
        d.dedup();
        d
    }

    pub fn restrict(&self, m: usize) -> TruncSeries {
        TruncSeries::new(self.poly.clone(), m.min(self.n))
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.n.min(other.n);
        TruncSeries { n, poly: self.poly.mul_truncated(&other.poly, n) }
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<TruncSeries> {
        if !self.constant().is_one() {
            return Err(Error::Precondition("inverse needs constant term 1".into()));
        }
        let h = TruncSeries { n: self.n, poly: &self.poly - &Poly::one() };
        let mut term = TruncSeries::one(self.n);
        let mut out = TruncSeries::one(self.n);
        for k in 1..=self.n {
            term = term.mul(&h);
            if term.poly.is_zero() {
                break;
            }
            out.poly += &term.poly.scale(&sign(k));
        }
        Ok(out)
    }

    /// Constant term 1 and nothing in degrees 1 and 2.
    pub fn has_ds_shape(&self) -> bool {
        self.constant().is_one() && self.component(1).is_zero() && self.component(2).is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: serde_json::Map<String, serde_json::Value> = self
            .support_degrees()
            .into_iter()
            .map(|d| (d.to_string(), self.component(d).to_json()))
            .collect();
        serde_json::json!({"truncation": self.n, "components": comps})
    }
}

/// `f ⊙ g = f g + D_f(g)`, truncated.
pub fn odot(f: &Poly, g: &TruncSeries) -> Result<TruncSeries> {
    let n = lie_degree(f)?;
    let n_max = g.n;
    let head = g.poly.truncate(n_max.saturating_sub(n));
    let mut poly = f.mul_truncated(&head, n_max);
    if n <= n_max {
        poly += &d_f(f, &head);
    }
    Ok(TruncSeries::new(poly, n_max))
}

fn lie_degree(f: &Poly) -> Result<usize> {
    let n = f.homogeneous_degree()?.ok_or_else(|| Error::Precondition("zero element".into()))?;
    if n < 3 {
        return Err(Error::DegreeOutOfRange { degree: n, min: 3, max: usize::MAX });
    }
    if !is_lie(f)? {
        return Err(Error::Precondition(format!("not a Lie element: {f}")));
    }
    Ok(n)
}

/// `exp^⊙(f) = Σ f^{⊙k} / k!` to degree `n_max`.
pub fn exp_odot(f: &Poly, n_max: usize) -> Result<TruncSeries> {
    let n = lie_degree(f)?;
    if n_max < n {
        return Err(Error::Precondition(format!("truncation {n_max} below degree {n}")));
    }
    let mut power = TruncSeries::one(n_max);
    let mut out = TruncSeries::one(n_max);
    let mut fact = Q::one();
    for k in 1..=n_max / n {
        power = odot(f, &power)?;
        fact *= q(k as i64);
        out.poly += &power.poly.scale(&fact.recip());
    }
    Ok(out)
}

/// [`exp_odot`] after certifying `f ∈ ds`.
pub fn exp_odot_strict(f: &Poly, n_max: usize) -> Result<TruncSeries> {
    if !is_ds(f)? {
        return Err(Error::Precondition(format!("not in ds: {f}")));
    }
    exp_odot(f, n_max)
}

fn pairing(phi: &TruncSeries, p: &Poly) -> Q {
    p.terms().fold(Q::zero(), |acc, (w, c)| acc + c * phi.coeff(w))
}

/// A word pair on which a group-like identity fails.
#[derive(Clone, Debug, Serialize)]
pub struct PairFailure {
    pub u: String,
    pub v: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupCheck {
    pub truncation: usize,
    pub pairs: usize,
    pub failure: Option<PairFailure>,
}

impl GroupCheck {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Unordered pairs `u <= v` of nonempty words from `words` with `|u| + |v| <= n`.
fn pairs_up_to(n: usize, words: impl Fn(usize) -> Vec<Word>) -> Vec<(Word, Word)> {
    let mut all = Vec::new();
    for k in 1..n {
        all.extend(words(k));
    }
    let mut out = Vec::new();
    for (i, &u) in all.iter().enumerate() {
        for &v in &all[i..] {
            if u.len() + v.len() <= n {
                out.push((u, v));
            }
        }
    }
    out
}

fn run_pairs(
    phi: &TruncSeries,
    pairs: Vec<(Word, Word)>,
    strategy: Strategy,
    check: impl Fn(Word, Word) -> (Q, Q) + Sync + Send,
) -> GroupCheck {
    let failure = par::find_first_failure(strategy, &pairs, |&(u, v)| {
        let (l, r) = check(u, v);
        l == r
    })
    .map(|i| {
        let (u, v) = pairs[i];
        let (l, r) = check(u, v);
        PairFailure { u: u.to_string(), v: v.to_string(), lhs: format_q(&l), rhs: format_q(&r) }
    });
    GroupCheck { truncation: phi.n, pairs: pairs.len(), failure }
}

/// `(Φ|sh(u,v)) = Φ(u) Φ(v)` for all nonempty pairs within the truncation.
pub fn group_shuffle_check(phi: &TruncSeries) -> GroupCheck {
    group_shuffle_check_with(phi, Strategy::default())
}

pub fn group_shuffle_check_with(phi: &TruncSeries, strategy: Strategy) -> GroupCheck {
    let pairs = pairs_up_to(phi.n, |k| Word::all_of_length(k).collect());
    run_pairs(phi, pairs, strategy, |u, v| (pairing(phi, &shuffle(u, v)), phi.coeff(u) * phi.coeff(v)))
}

/// `Φ_* = exp(Σ_{n>=1} (-1)^{n-1}/n (Φ|x^{n-1}y) y^n) π_y(Φ)`.
pub fn phi_star(phi: &TruncSeries) -> TruncSeries {
    let n = phi.n;
    let mut gen = Poly::zero();
    for k in 1..=n {
        let c = phi.coeff(x_pow_y(k - 1));
        gen.add_term(Word::power(Letter::Y, k), c * sign(k - 1) / q(k as i64));
    }
    let g = TruncSeries::new(gen, n);
    let mut e = TruncSeries::one(n);
    let mut term = TruncSeries::one(n);
    for k in 1..=n {
        term = term.mul(&g);
        if term.poly.is_zero() {
            break;
        }
        term.poly = term.poly.scale(&q(k as i64).recip());
        e.poly += &term.poly;
    }
    e.mul(&TruncSeries::new(phi.poly.pi_y(), n))
}

/// `(Φ_*|st(u,v)) = Φ_*(u) Φ_*(v)` for all nonempty `y`-ending pairs.
pub fn group_stuffle_check(phi: &TruncSeries) -> GroupCheck {
    group_stuffle_check_with(phi, Strategy::default())
}

pub fn group_stuffle_check_with(phi: &TruncSeries, strategy: Strategy) -> GroupCheck {
    let star = phi_star(phi);
    let pairs = pairs_up_to(phi.n, |k| y_ending_words(k).collect());
    run_pairs(&star, pairs, strategy, |u, v| {
        let st = stuffle(u, v).expect("y-ending words");
        (pairing(&star, &st), star.coeff(u) * star.coeff(v))
    })
}

/// Automorphism of the truncated free algebra given by the images of `x`, `y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncAut {
    pub n: usize,
    pub x: Poly,
    pub y: Poly,
}

impl TruncAut {
    pub fn identity(n: usize) -> TruncAut {
        TruncAut { n, x: Poly::x(), y: Poly::y() }
    }

    /// Image of a series: substitute and truncate, by recursion on the last letter.
    pub fn apply(&self, p: &Poly) -> Poly {
        let p = p.truncate(self.n);
        if p.is_zero() {
            return p;
        }
        let mut out = Poly::zero();
        out.add_term(Word::EMPTY, p.constant_term());
        let (px, py) = (p.right_x(), p.right_y());
        if !px.is_zero() {
            out += &self.apply(&px).mul_truncated(&self.x, self.n);
        }
        if !py.is_zero() {
            out += &self.apply(&py).mul_truncated(&self.y, self.n);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TruncAut) -> TruncAut {
        let n = self.n.min(other.n);
        TruncAut { n, x: self.apply(&other.x).truncate(n), y: self.apply(&other.y).truncate(n) }
    }

    pub fn is_identity(&self) -> bool {
        *self == TruncAut::identity(self.n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"truncation": self.n, "x": self.x.to_json(), "y": self.y.to_json()})
    }
}

/// `exp(D) = Σ D^k / k!` on the generators, to degree `n`.
pub fn exp_tangential(d: &TangentialDerivation, n: usize) -> Result<TruncAut> {
    if d.degree == 0 && !(d.f.is_zero() && d.g.is_zero()) {
        return Err(Error::Precondition("derivation of degree 0".into()));
    }
    let exp_on = |gen: Poly| {
        let mut out = gen.clone();
        let mut term = gen;
        for k in 1..=n {
            term = d.apply(&term.truncate(n.saturating_sub(d.degree))).scale(&q(k as i64).recip());
            if term.is_zero() {
                break;
            }
            out += &term;
        }
        out.truncate(n)
    };
    Ok(TruncAut { n, x: exp_on(Poly::x()), y: exp_on(Poly::y()) })
}

/// `a_Φ`: `x -> x`, `y -> Φ^{-1} y Φ`.
pub fn ihara_aut(phi: &TruncSeries) -> Result<TruncAut> {
    let inv = phi.inverse()?;
    let y = inv.mul(&TruncSeries::new(Poly::y(), phi.n)).mul(phi);
    Ok(TruncAut { n: phi.n, x: Poly::x(), y: y.poly })
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm42Report {
    pub degree: usize,
    pub truncation: usize,
    pub ds_shape: bool,
    pub shuffle: GroupCheck,
    pub stuffle: GroupCheck,
    /// `exp(D)(x + y) = x + y`.
    pub fixes_x_plus_y: bool,
    /// `exp(ρ(f̃)) = β ∘ a_{exp^⊙(f̃)} ∘ β^{-1}` on generators.
    pub commutes: bool,
}

impl Thm42Report {
    pub fn ok(&self) -> bool {
        self.ds_shape && self.shuffle.ok() && self.stuffle.ok() && self.fixes_x_plus_y && self.commutes
    }
}

/// Compares both routes from `f̃ ∈ ds` to an automorphism: through
/// `exp^⊙` and the Ihara action, and through the derivation `ρ(f̃)`.
pub fn thm42_check(ft: &Poly, n: usize) -> Result<Thm42Report> {
    let degree = lie_degree(ft)?;
    let phi = exp_odot_strict(ft, n)?;
    let d = thm11_map(ft)?;
    let via_d = exp_tangential(&d, n)?;
    let a = ihara_aut(&phi)?;
    let b = beta();
    let bi = beta_inv();
    let conj = |gen: Poly| b.apply(&a.apply(&bi.apply(&gen))).truncate(n);
    let via_phi = TruncAut { n, x: conj(Poly::x()), y: conj(Poly::y()) };
    let xy = Poly::x() + Poly::y();
    Ok(Thm42Report {
        degree,
        truncation: n,
        ds_shape: phi.has_ds_shape(),
        shuffle: group_shuffle_check(&phi),
        stuffle: group_stuffle_check(&phi),
        fixes_x_plus_y: via_d.apply(&xy) == xy,
        commutes: via_d == via_phi,
    })
}
