//! Noncommutative polynomials in `x`, `y` with exact rational coefficients,
//! and the elementary word operators acting on them.

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{factorial, format_q, parse_q, sign, Q};
use crate::word::{Letter, PushOrbit, Word};

/// Element of `Q<x, y>`. Terms are kept in degree-then-lex order; no zero
/// coefficients are stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Word, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::monomial(Q::one(), Word::EMPTY)
    }

    pub fn x() -> Poly {
        Poly::from_word(Word::x())
    }

    pub fn y() -> Poly {
        Poly::from_word(Word::y())
    }

    pub fn from_word(w: Word) -> Poly {
        Poly::monomial(Q::one(), w)
    }

    pub fn monomial(c: Q, w: Word) -> Poly {
        let mut p = Poly::zero();
        p.add_term(w, c);
        p
    }

    /// `a x + b y`
    pub fn linear(a: Q, b: Q) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Word::x(), a);
        p.add_term(Word::y(), b);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Q)>) -> Poly {
        let mut p = Poly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Parses a sum such as `"xxy - 2 xyx + 1/2 yxx"`.
    pub fn parse(s: &str) -> Result<Poly> {
        let mut p = Poly::zero();
        let cleaned = s.replace('-', " - ").replace('+', " + ");
        let mut sign_neg = false;
        let mut coeff: Option<Q> = None;
        for tok in cleaned.split_whitespace() {
            match tok {
                "+" | "-" => {
                    if let Some(c) = coeff.take() {
                        p.add_term(Word::EMPTY, if sign_neg { -c } else { c });
                        sign_neg = false;
                    }
                    if tok == "-" {
                        sign_neg = !sign_neg;
                    } else {
                        sign_neg = false;
                    }
                }
                t if t.starts_with(['x', 'y']) => {
                    let w: Word = t.parse()?;
                    let c = coeff.take().unwrap_or_else(Q::one);
                    p.add_term(w, if sign_neg { -c } else { c });
                    sign_neg = false;
                }
                t => {
                    if coeff.is_some() {
                        return Err(Error::Parse(format!("two coefficients in a row in {s:?}")));
                    }
                    coeff = Some(parse_q(t)?);
                }
            }
        }
        if let Some(c) = coeff {
            p.add_term(Word::EMPTY, if sign_neg { -c } else { c });
        }
        Ok(p)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Poly, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (w, c) in other.terms() {
            self.add_term(w, c * factor);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Word, &Q)> + ExactSizeIterator {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(f | w)`. The empty word is rejected.
    pub fn coeff(&self, w: Word) -> Result<Q> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(self.get(w))
    }

    /// Coefficient of `w`, including the constant term for the empty word.
    pub fn get(&self, w: Word) -> Q {
        self.terms.get(&w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn get_ref(&self, w: Word) -> Option<&Q> {
        self.terms.get(&w)
    }

    pub fn constant_term(&self) -> Q {
        self.get(Word::EMPTY)
    }

    /// `(f | g)` extended bilinearly to a polynomial `g` without constant term.
    pub fn pair(&self, g: &Poly) -> Result<Q> {
        if !g.constant_term().is_zero() {
            return Err(Error::ConstantTerm);
        }
        let (small, large) = if self.len() <= g.len() { (self, g) } else { (g, self) };
        Ok(small
            .terms()
            .filter_map(|(w, c)| large.get_ref(w).map(|d| c * d))
            .fold(Q::zero(), |acc, v| acc + v))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(w, v)| (*w, v * c)).collect() }
    }

    pub fn map_words(&self, mut f: impl FnMut(Word) -> Word) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in self.terms() {
            out.add_term(f(w), c.clone());
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(Word) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(w, _)| keep(**w)).map(|(w, c)| (*w, c.clone())).collect() }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    /// Common degree of all terms; `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        match (self.min_degree(), self.max_degree()) {
            (None, _) => Ok(None),
            (Some(a), Some(b)) if a == b => Ok(Some(a)),
            _ => Err(Error::NotHomogeneous),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    pub fn homogeneous_part(&self, n: usize) -> Poly {
        self.filter(|w| w.len() == n)
    }

    /// The part of depth `r` (words with exactly `r` letters `y`).
    pub fn depth_part(&self, r: usize) -> Poly {
        self.filter(|w| w.depth() == r)
    }

    pub fn max_depth(&self) -> usize {
        self.words().map(|w| w.depth()).max().unwrap_or(0)
    }

    /// Drops all terms of degree `> n`.
    pub fn truncate(&self, n: usize) -> Poly {
        self.filter(|w| w.len() <= n)
    }

    /// `π_y`: keeps the words ending in `y` and the constant term.
    pub fn pi_y(&self) -> Poly {
        self.filter(|w| w.last() != Some(Letter::X))
    }

    pub fn mul_letter_left(&self, l: Letter) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (w.push_front(l), c.clone())).collect() }
    }

    pub fn mul_letter_right(&self, l: Letter) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (w.push_back(l), c.clone())).collect() }
    }

    /// Concatenation product truncated to degree `<= max_degree`.
    pub fn mul_truncated(&self, other: &Poly, max_degree: usize) -> Poly {
        let mut out = Poly::zero();
        for (u, a) in self.terms() {
            if u.len() > max_degree {
                break;
            }
            for (v, b) in other.terms() {
                if u.len() + v.len() > max_degree {
                    break;
                }
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// The derivation `∂_x` with `∂_x(x) = 1`, `∂_x(y) = 0`.
    pub fn partial_x(&self) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in self.terms() {
            for i in 0..w.len() {
                if w.at(i) == Letter::X {
                    out.add_term(w.delete(i), c.clone());
                }
            }
        }
        out
    }

    pub fn anti(&self) -> Poly {
        self.map_words(Word::anti)
    }

    pub fn push(&self) -> Poly {
        self.map_words(Word::push)
    }

    pub fn swap_letters(&self) -> Poly {
        self.map_words(Word::swap_letters)
    }

    /// Applies the algebra endomorphism `x -> img_x`, `y -> img_y`, where both
    /// images are homogeneous linear forms `a x + b y`.
    pub fn subst_linear(&self, img_x: &Poly, img_y: &Poly) -> Result<Poly> {
        let s = LinearSubst::from_images(img_x, img_y)?;
        Ok(s.apply(self))
    }

    /// `f = f_x x + f_y y` (plus the constant term, which is dropped).
    pub fn decompose_right(&self) -> Result<(Poly, Poly)> {
        self.decompose(|w| w.split_last().map(|(rest, l)| (l, rest)))
    }

    /// `f = x f^x + y f^y`.
    pub fn decompose_left(&self) -> Result<(Poly, Poly)> {
        self.decompose(Word::split_first)
    }

    fn decompose(&self, split: impl Fn(Word) -> Option<(Letter, Word)>) -> Result<(Poly, Poly)> {
        let mut fx = BTreeMap::new();
        let mut fy = BTreeMap::new();
        for (w, c) in self.terms() {
            match split(w) {
                Some((Letter::X, rest)) => fx.insert(rest, c.clone()),
                Some((Letter::Y, rest)) => fy.insert(rest, c.clone()),
                None => return Err(Error::ConstantTerm),
            };
        }
        Ok((Poly { terms: fx }, Poly { terms: fy }))
    }

    /// Right `x`-component `f_x`.
    pub fn right_x(&self) -> Poly {
        self.decompose_right_lossy().0
    }

    /// Right `y`-component `f_y`.
    pub fn right_y(&self) -> Poly {
        self.decompose_right_lossy().1
    }

    /// Left `x`-component `f^x`.
    pub fn left_x(&self) -> Poly {
        self.filter(|w| !w.is_empty()).decompose_left().unwrap().0
    }

    /// Left `y`-component `f^y`.
    pub fn left_y(&self) -> Poly {
        self.filter(|w| !w.is_empty()).decompose_left().unwrap().1
    }

    fn decompose_right_lossy(&self) -> (Poly, Poly) {
        self.filter(|w| !w.is_empty()).decompose_right().unwrap()
    }

    /// `s(h) = Σ_i (-1)^i / i! ∂_x^i(h) y x^i`.
    pub fn s_map(&self) -> Poly {
        self.racinet_sum(|d, i| {
            let xi = Poly::from_word(Word::power(Letter::X, i));
            &d.mul_letter_right(Letter::Y) * &xi
        })
    }

    /// `s'(h) = Σ_i (-1)^i / i! x^i y ∂_x^i(h)`.
    pub fn s_prime_map(&self) -> Poly {
        self.racinet_sum(|d, i| {
            let xi = Poly::from_word(Word::power(Letter::X, i));
            &xi * &d.mul_letter_left(Letter::Y)
        })
    }

    fn racinet_sum(&self, term: impl Fn(&Poly, usize) -> Poly) -> Poly {
        let mut out = Poly::zero();
        let mut d = self.clone();
        let mut i = 0;
        while !d.is_zero() {
            let c = sign(i) / Q::from_integer(factorial(i));
            out.add_scaled(&term(&d, i), &c);
            d = d.partial_x();
            i += 1;
        }
        out
    }

    /// `f = (-1)^{m-1} anti(f)` where `m` is the degree of `f`.
    pub fn is_palindromic(&self) -> Result<bool> {
        self.anti_symmetry(1)
    }

    /// `f = (-1)^m anti(f)` where `m` is the degree of `f`.
    pub fn is_antipalindromic(&self) -> Result<bool> {
        self.anti_symmetry(0)
    }

    fn anti_symmetry(&self, shift: usize) -> Result<bool> {
        let Some(m) = self.homogeneous_degree()? else {
            return Ok(true);
        };
        let flip = (m + shift) % 2 == 1;
        Ok(self.terms().all(|(w, c)| {
            let d = self.get(w.anti());
            if flip {
                d == -c
            } else {
                d == *c
            }
        }))
    }

    pub fn is_push_invariant(&self) -> bool {
        self.terms().all(|(w, c)| self.get(w.push()) == *c)
    }

    /// Returns `Some(A)` if `f` is push-constant for the constant `A`, i.e.
    /// `(f | y^m) = 0` and every list `Push(w)`, `w != y^m`, has coefficient
    /// sum `A`. The zero polynomial is push-constant for `0`.
    pub fn push_constant(&self) -> Result<Option<Q>> {
        let Some(m) = self.homogeneous_degree()? else {
            return Ok(Some(Q::zero()));
        };
        if m == 0 {
            return Err(Error::Precondition("push-constant needs positive degree".into()));
        }
        if !self.get(Word::power(Letter::Y, m)).is_zero() {
            return Ok(None);
        }
        let ym = Word::power(Letter::Y, m);
        let mut constant: Option<Q> = None;
        for orbit in push_classes(m) {
            if orbit.words()[0] == ym {
                continue;
            }
            let s = self.orbit_sum(&orbit);
            match &constant {
                None => constant = Some(s),
                Some(a) if *a != s => return Ok(None),
                _ => {}
            }
        }
        Ok(constant)
    }

    /// `Σ_{v in Push(w)} (f | v)` over the list (with repeats).
    pub fn orbit_sum(&self, orbit: &PushOrbit) -> Q {
        orbit.words().iter().fold(Q::zero(), |acc, v| acc + self.get(*v))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("poly serialization")
    }

    /// Human-readable rendering in exponent notation, e.g. `x^2 y - 2 x y x`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = exponent_notation(w);
            if mag.is_one() && !w.is_empty() {
                out.push_str(&word);
            } else if w.is_empty() {
                out.push_str(&format_q(&mag));
            } else {
                out.push_str(&format_q(&mag));
                out.push(' ');
                out.push_str(&word);
            }
        }
        out
    }
}

/// Word rendered as runs, e.g. `xxyxy -> x^2 y x y`.
pub fn exponent_notation(w: Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut run: Option<(Letter, usize)> = None;
    let flush = |run: Option<(Letter, usize)>, parts: &mut Vec<String>| {
        if let Some((l, k)) = run {
            parts.push(if k == 1 { l.as_char().to_string() } else { format!("{}^{}", l.as_char(), k) });
        }
    };
    for l in w.letters() {
        run = match run {
            Some((cur, k)) if cur == l => Some((cur, k + 1)),
            other => {
                flush(other, &mut parts);
                Some((l, 1))
            }
        };
    }
    flush(run, &mut parts);
    parts.join(" ")
}

/// Lists `Push(w)` for one representative `w` of every push class of degree `m`.
pub fn push_classes(m: usize) -> Vec<PushOrbit> {
    Word::all_of_length(m)
        .filter_map(|w| {
            let orbit = PushOrbit::new(w);
            (orbit.representative() == w).then_some(orbit)
        })
        .collect()
}

/// Linear substitution `x -> a x + b y`, `y -> c x + d y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubst {
    pub x_to_x: Q,
    pub x_to_y: Q,
    pub y_to_x: Q,
    pub y_to_y: Q,
}

/// Dense transform is used up to this degree; sparse expansion beyond.
const DENSE_SUBST_MAX_DEGREE: usize = 16;

impl LinearSubst {
    pub fn new(x_to_x: Q, x_to_y: Q, y_to_x: Q, y_to_y: Q) -> LinearSubst {
        LinearSubst { x_to_x, x_to_y, y_to_x, y_to_y }
    }

    /// `x -> z = -x - y`, `y -> y`.
    pub fn z_substitution() -> LinearSubst {
        let one = Q::one();
        LinearSubst::new(-one.clone(), -one.clone(), Q::zero(), one)
    }

    /// `x -> x`, `y -> -y`.
    pub fn negate_y() -> LinearSubst {
        let one = Q::one();
        LinearSubst::new(one.clone(), Q::zero(), Q::zero(), -one)
    }

    pub fn from_images(img_x: &Poly, img_y: &Poly) -> Result<LinearSubst> {
        let read = |p: &Poly| -> Result<(Q, Q)> {
            if p.words().any(|w| w.len() != 1) {
                return Err(Error::NotLinear(p.to_text()));
            }
            Ok((p.get(Word::x()), p.get(Word::y())))
        };
        let (a, b) = read(img_x)?;
        let (c, d) = read(img_y)?;
        Ok(LinearSubst::new(a, b, c, d))
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn then(&self, after: &LinearSubst) -> LinearSubst {
        // images of x under self, then each letter mapped by `after`
        let img = |a: &Q, b: &Q| {
            (
                a * &after.x_to_x + b * &after.y_to_x,
                a * &after.x_to_y + b * &after.y_to_y,
            )
        };
        let (a, b) = img(&self.x_to_x, &self.x_to_y);
        let (c, d) = img(&self.y_to_x, &self.y_to_y);
        LinearSubst::new(a, b, c, d)
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut by_degree: BTreeMap<usize, Vec<(Word, &Q)>> = BTreeMap::new();
        for (w, c) in f.terms() {
            by_degree.entry(w.len()).or_default().push((w, c));
        }
        let mut out = Poly::zero();
        for (n, terms) in by_degree {
            if n == 0 {
                for (w, c) in terms {
                    out.add_term(w, c.clone());
                }
            } else if n <= DENSE_SUBST_MAX_DEGREE {
                self.apply_dense(n, &terms, &mut out);
            } else {
                self.apply_sparse(&terms, &mut out);
            }
        }
        out
    }

    fn apply_dense(&self, n: usize, terms: &[(Word, &Q)], out: &mut Poly) {
        let size = 1usize << n;
        let mut v: Vec<Q> = vec![Q::zero(); size];
        for (w, c) in terms {
            v[w.bits() as usize] = (*c).clone();
        }
        for bit in 0..n {
            let step = 1usize << bit;
            for i in 0..size {
                if i & step != 0 {
                    continue;
                }
                let lo = &v[i];
                let hi = &v[i | step];
                if lo.is_zero() && hi.is_zero() {
                    continue;
                }
                let new_lo = lo * &self.x_to_x + hi * &self.y_to_x;
                let new_hi = lo * &self.x_to_y + hi * &self.y_to_y;
                v[i] = new_lo;
                v[i | step] = new_hi;
            }
        }
        for (i, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Word::from_bits(i as u64, n), c);
            }
        }
    }

    fn apply_sparse(&self, terms: &[(Word, &Q)], out: &mut Poly) {
        let ix = Poly::linear(self.x_to_x.clone(), self.x_to_y.clone());
        let iy = Poly::linear(self.y_to_x.clone(), self.y_to_y.clone());
        for (w, c) in terms {
            let mut acc = Poly::monomial((*c).clone(), Word::EMPTY);
            for l in w.letters() {
                acc = &acc * if l == Letter::X { &ix } else { &iy };
            }
            *out += &acc;
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (w, c) in rhs.terms() {
            self.add_term(w, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (w, c) in rhs.terms() {
            self.add_term(w, -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl<'a> IntoIterator for &'a Poly {
    type Item = (&'a Word, &'a Q);
    type IntoIter = btree_map::Iter<'a, Word, Q>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    terms: Vec<TermRepr>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            degree: self.homogeneous_degree().ok().flatten(),
            terms: self
                .terms()
                .map(|(w, c)| TermRepr {
                    word: if w.is_empty() { String::new() } else { w.to_string() },
                    coeff: format_q(c),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Poly, D::Error> {
        use serde::de::Error as _;
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut p = Poly::zero();
        for t in repr.terms {
            let w: Word = t.word.parse().map_err(D::Error::custom)?;
            let c = parse_q(&t.coeff).map_err(D::Error::custom)?;
            p.add_term(w, c);
        }
        if let (Some(d), Ok(Some(actual))) = (repr.degree, p.homogeneous_degree()) {
            if d != actual {
                return Err(D::Error::custom(format!("declared degree {d} but terms have degree {actual}")));
            }
        }
        Ok(p)
    }
}

/// Integer coefficient vector of a homogeneous polynomial of degree `n`,
/// indexed by word bits. Panics on non-integral coefficients.
pub fn dense_integer_vector(f: &Poly, n: usize) -> Vec<i64> {
    let mut v = vec![0i64; 1usize << n];
    for (w, c) in f.terms() {
        assert_eq!(w.len(), n);
        assert!(c.denom().is_one(), "non-integral coefficient");
        let c: BigInt = c.numer().clone();
        v[w.bits() as usize] = i64::try_from(c).expect("coefficient exceeds i64");
    }
    v
}
