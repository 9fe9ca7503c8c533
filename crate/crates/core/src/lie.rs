//! Free Lie algebra on `x`, `y`: brackets, the Lyndon basis, the Dynkin map
//! and Lie-ness tests.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{q, Q};
use crate::word::{Letter, Word};

pub fn bracket(f: &Poly, g: &Poly) -> Poly {
    &(f * g) - &(g * f)
}

/// `[l, g]` for a single letter, without a general product.
pub fn bracket_letter(l: Letter, g: &Poly) -> Poly {
    &g.mul_letter_left(l) - &g.mul_letter_right(l)
}

/// `ad(x)^k (y)`.
pub fn ad_x_pow_y(k: usize) -> Poly {
    let mut p = Poly::y();
    for _ in 0..k {
        p = bracket_letter(Letter::X, &p);
    }
    p
}

/// Dynkin map: `x_1 x_2 ... x_m -> [x_1, [x_2, ... [x_{m-1}, x_m]]]`, extended linearly.
pub fn dynkin_phi(f: &Poly) -> Result<Poly> {
    if !f.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    Ok(phi_rec(f))
}

fn phi_rec(f: &Poly) -> Poly {
    if f.is_zero() {
        return Poly::zero();
    }
    let linear = f.filter(|w| w.len() == 1);
    let rest = f.filter(|w| w.len() >= 2);
    if rest.is_zero() {
        return linear;
    }
    let (fx, fy) = rest.decompose_left().expect("no constant term");
    let mut out = linear;
    out += &bracket_letter(Letter::X, &phi_rec(&fx));
    out += &bracket_letter(Letter::Y, &phi_rec(&fy));
    out
}

/// `θ(u)(v)` where `θ` sends a word `x_1 ... x_m` to `ad(x_1) ∘ ... ∘ ad(x_m)`.
pub fn theta_apply(u: &Poly, v: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in u.terms() {
        let mut acc = v.clone();
        for l in w.letters().rev() {
            acc = bracket_letter(l, &acc);
        }
        out += &acc.scale(c);
    }
    out
}

/// Dynkin criterion: `Φ(f) = n f`.
pub fn is_lie(f: &Poly) -> Result<bool> {
    let Some(n) = f.homogeneous_degree()? else {
        return Ok(true);
    };
    if n == 0 {
        return Err(Error::ConstantTerm);
    }
    Ok(dynkin_phi(f)? == f.scale(&q(n as i64)))
}

/// Shuffle criterion: `(f | sh(u, v)) = 0` for all nonempty `u`, `v`.
/// Quadratic in the number of words; used as a cross-check.
pub fn is_lie_shuffle(f: &Poly) -> Result<bool> {
    let Some(n) = f.homogeneous_degree()? else {
        return Ok(true);
    };
    if n == 0 {
        return Err(Error::ConstantTerm);
    }
    for k in 1..=n / 2 {
        for u in Word::all_of_length(k) {
            for v in Word::all_of_length(n - k) {
                if k == n - k && v < u {
                    continue;
                }
                if !f.pair(&crate::dshuffle::shuffle(u, v))?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Lie test that also runs the shuffle criterion and panics if they disagree.
pub fn is_lie_strict(f: &Poly) -> Result<bool> {
    let a = is_lie(f)?;
    let b = is_lie_shuffle(f)?;
    assert_eq!(a, b, "Dynkin and shuffle criteria disagree on {f}");
    Ok(a)
}

/// Number of Lyndon words of length `n` over two letters.
pub fn witt_number(n: usize) -> usize {
    assert!(n >= 1);
    let mut total: i64 = 0;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) * (1i64 << (n / d));
        }
    }
    (total / n as i64) as usize
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Lyndon words of length exactly `n`, in increasing order (Duval).
pub fn lyndon_words(n: usize) -> Vec<Word> {
    assert!((1..64).contains(&n));
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            let bits = w.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            out.push(Word::from_bits(bits, n));
        }
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() % m];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

pub fn is_lyndon(w: Word) -> bool {
    let n = w.len();
    n >= 1 && (1..n).all(|k| w.rotate_left(k) > w)
}

/// Right standard factorization `w = u v`, `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: Word) -> Option<(Word, Word)> {
    let n = w.len();
    if n < 2 {
        return None;
    }
    (1..n).map(|k| (w.slice(0, k), w.slice(k, n))).find(|(_, v)| is_lyndon(*v))
}

/// Standard bracketing rendered as text, e.g. `[x,[x,y]]`.
pub fn bracketing_text(w: Word) -> String {
    match standard_factorization(w) {
        None => w.to_string(),
        Some((u, v)) => format!("[{},{}]", bracketing_text(u), bracketing_text(v)),
    }
}

type IntPoly = BTreeMap<Word, i64>;

fn expand_lyndon(w: Word, memo: &mut HashMap<Word, IntPoly>) -> IntPoly {
    if let Some(p) = memo.get(&w) {
        return p.clone();
    }
    let result = match standard_factorization(w) {
        None => BTreeMap::from([(w, 1)]),
        Some((u, v)) => {
            let pu = expand_lyndon(u, memo);
            let pv = expand_lyndon(v, memo);
            let mut out: IntPoly = BTreeMap::new();
            for (a, ca) in &pu {
                for (b, cb) in &pv {
                    *out.entry(a.concat(*b)).or_default() += ca * cb;
                    *out.entry(b.concat(*a)).or_default() -= ca * cb;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        }
    };
    memo.insert(w, result.clone());
    result
}

/// One basis element: Lyndon word, its bracketing and expansion.
#[derive(Clone, Debug)]
pub struct LyndonElement {
    pub word: Word,
    pub bracketing: String,
    pub expansion: Poly,
    /// Integer expansion as `(word bits, coefficient)` pairs.
    pub int_terms: Vec<(u64, i64)>,
}

#[derive(Clone, Debug)]
pub struct LyndonBasis {
    pub degree: usize,
    pub elements: Vec<LyndonElement>,
}

impl LyndonBasis {
    fn build(n: usize) -> LyndonBasis {
        let mut memo = HashMap::new();
        let elements = lyndon_words(n)
            .into_iter()
            .map(|w| {
                let ip = expand_lyndon(w, &mut memo);
                let expansion = Poly::from_terms(ip.iter().map(|(w, c)| (*w, q(*c))));
                LyndonElement {
                    word: w,
                    bracketing: bracketing_text(w),
                    expansion,
                    int_terms: ip.iter().map(|(w, c)| (w.bits(), *c)).collect(),
                }
            })
            .collect();
        LyndonBasis { degree: n, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn expansions(&self) -> impl Iterator<Item = &Poly> {
        self.elements.iter().map(|e| &e.expansion)
    }

    /// Coordinates of a Lie element. Each expansion is its Lyndon word plus
    /// strictly larger words, so the system is solved greedily.
    pub fn to_coords(&self, f: &Poly) -> Result<Vec<Q>> {
        let mut residual = f.clone();
        let mut coords = Vec::with_capacity(self.len());
        for e in &self.elements {
            let c = residual.get(e.word);
            if !c.is_zero() {
                residual -= &e.expansion.scale(&c);
            }
            coords.push(c);
        }
        if !residual.is_zero() {
            return Err(Error::NotLie { residual: residual.to_text() });
        }
        Ok(coords)
    }

    pub fn from_coords(&self, coords: &[Q]) -> Poly {
        assert_eq!(coords.len(), self.len(), "coordinate vector length");
        let mut out = Poly::zero();
        for (e, c) in self.elements.iter().zip(coords) {
            if !c.is_zero() {
                out += &e.expansion.scale(c);
            }
        }
        out
    }
}

static BASES: OnceLock<RwLock<HashMap<usize, Arc<LyndonBasis>>>> = OnceLock::new();

/// Lyndon basis of `Lie_n`, built once per degree and shared.
pub fn lyndon_basis(n: usize) -> Arc<LyndonBasis> {
    assert!(n >= 1, "Lyndon basis needs degree >= 1");
    let cache = BASES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().unwrap().get(&n) {
        return b.clone();
    }
    let built = Arc::new(LyndonBasis::build(n));
    cache.write().unwrap().entry(n).or_insert(built).clone()
}

pub fn to_coords(f: &Poly, basis: &LyndonBasis) -> Result<Vec<Q>> {
    basis.to_coords(f)
}

pub fn from_coords(coords: &[Q], basis: &LyndonBasis) -> Poly {
    basis.from_coords(coords)
}

/// Deterministic random Lie element of degree `n` with small integer
/// Lyndon coordinates in `-3..=3`, not all zero.
pub fn random_lie(n: usize, seed: u64) -> Poly {
    let basis = lyndon_basis(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 48));
    let mut coords: Vec<Q> = (0..basis.len()).map(|_| q(rng.gen_range(-3..=3))).collect();
    if coords.iter().all(Zero::is_zero) {
        let i = rng.gen_range(0..coords.len());
        coords[i] = Q::one();
    }
    basis.from_coords(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn brackets() {
        assert_eq!(bracket(&Poly::x(), &Poly::y()), p("xy - yx"));
        assert_eq!(ad_x_pow_y(2), p("xxy - 2 xyx + yxx"));
    }

    #[test]
    fn witt_counts() {
        let counts: Vec<usize> = (1..=8).map(witt_number).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9, 18, 30]);
        for n in 1..=12 {
            assert_eq!(lyndon_words(n).len(), witt_number(n));
        }
    }

    #[test]
    fn lyndon_words_are_sorted_and_lyndon() {
        let w3: Vec<String> = lyndon_words(3).iter().map(|w| w.to_string()).collect();
        assert_eq!(w3, vec!["xxy", "xyy"]);
        for n in 1..=10 {
            let ws = lyndon_words(n);
            assert!(ws.windows(2).all(|p| p[0] < p[1]));
            assert!(ws.iter().all(|w| is_lyndon(*w)));
            let brute = Word::all_of_length(n).filter(|w| is_lyndon(*w)).count();
            assert_eq!(brute, ws.len());
        }
    }

    #[test]
    fn expansions_lead_with_their_word() {
        for n in 2..=8 {
            let b = lyndon_basis(n);
            for e in &b.elements {
                let (w, c) = e.expansion.terms().next().unwrap();
                assert_eq!((w, c.clone()), (e.word, Q::one()));
            }
        }
        assert_eq!(lyndon_basis(3).elements[0].bracketing, "[x,[x,y]]");
        assert_eq!(lyndon_basis(3).elements[1].bracketing, "[[x,y],y]");
    }

    #[test]
    fn dynkin_examples() {
        assert_eq!(dynkin_phi(&p("xy")).unwrap(), p("xy - yx"));
        assert_eq!(dynkin_phi(&p("xy - yx")).unwrap(), p("2 xy - 2 yx"));
        assert!(dynkin_phi(&p("1 + x")).is_err());
        assert!(is_lie(&p("xy - yx")).unwrap());
        assert!(!is_lie(&p("xy")).unwrap());
        assert!(is_lie(&p("x + y")).unwrap());
    }

    #[test]
    fn theta_examples() {
        let br = p("xy - yx");
        assert_eq!(theta_apply(&br, &Poly::x()), bracket(&br, &Poly::x()));
        let u = p("xxy - 3 yx");
        let v = p("2 yxy");
        let w = Poly::y();
        assert_eq!(theta_apply(&(&u * &v), &w), theta_apply(&u, &theta_apply(&v, &w)));
    }

    #[test]
    fn coordinates_round_trip() {
        for n in 1..=8 {
            let b = lyndon_basis(n);
            for seed in 0..5 {
                let f = random_lie(n, seed);
                let c = b.to_coords(&f).unwrap();
                assert_eq!(b.from_coords(&c), f);
            }
        }
        assert!(matches!(lyndon_basis(2).to_coords(&p("xy")), Err(Error::NotLie { .. })));
    }

    #[test]
    fn criteria_agree_on_spanning_sets() {
        for n in 2..=6 {
            for w in Word::all_of_length(n) {
                let f = Poly::from_word(w);
                assert_eq!(is_lie(&f).unwrap(), is_lie_shuffle(&f).unwrap());
            }
            for e in lyndon_basis(n).elements.iter() {
                assert!(is_lie_strict(&e.expansion).unwrap());
            }
        }
    }

    #[test]
    fn random_lie_is_deterministic() {
        assert_eq!(random_lie(5, 9), random_lie(5, 9));
        assert!(is_lie(&random_lie(3, 1)).unwrap());
    }
}
