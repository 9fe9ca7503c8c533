//! Brute-force oracles shared by the integration tests. Nothing here goes
//! through Lyndon coordinates or the library's elimination code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dskv_core::{Poly, Word, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Letters: 0 = x, 1 = y.
pub type W = Vec<u8>;
pub type Lin = BTreeMap<W, i64>;

pub fn all_words(n: usize) -> Vec<W> {
    (0..1u64 << n).map(|b| (0..n).map(|i| ((b >> (n - 1 - i)) & 1) as u8).collect()).collect()
}

pub fn index(w: &[u8]) -> usize {
    w.iter().fold(0, |a, &l| 2 * a + l as usize)
}

pub fn to_string(w: &[u8]) -> String {
    w.iter().map(|&l| if l == 0 { 'x' } else { 'y' }).collect()
}

pub fn to_word(w: &[u8]) -> Word {
    to_string(w).parse().unwrap()
}

fn add(out: &mut Lin, w: W, c: i64) {
    *out.entry(w).or_insert(0) += c;
}

/// `sh(au, bv) = a sh(u, bv) + b sh(au, v)`.
pub fn shuffle(u: &[u8], v: &[u8]) -> Lin {
    let mut out = Lin::new();
    if u.is_empty() {
        out.insert(v.to_vec(), 1);
        return out;
    }
    if v.is_empty() {
        out.insert(u.to_vec(), 1);
        return out;
    }
    for (w, c) in shuffle(&u[1..], v) {
        let mut x = vec![u[0]];
        x.extend(w);
        add(&mut out, x, c);
    }
    for (w, c) in shuffle(u, &v[1..]) {
        let mut x = vec![v[0]];
        x.extend(w);
        add(&mut out, x, c);
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `y`-ending word as a composition `y_{i1} ... y_{ik}`, `y_i = x^{i-1} y`.
pub fn composition(w: &[u8]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut run = 0;
    for &l in w {
        run += 1;
        if l == 1 {
            out.push(run);
            run = 0;
        }
    }
    assert_eq!(run, 0, "word must end in y");
    out
}

pub fn from_composition(c: &[usize]) -> W {
    let mut w = Vec::new();
    for &i in c {
        w.extend(std::iter::repeat(0).take(i - 1));
        w.push(1);
    }
    w
}

fn stuffle_comp(a: &[usize], b: &[usize]) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        out.insert(if a.is_empty() { b.to_vec() } else { a.to_vec() }, 1);
        return out;
    }
    let mut put = |head: usize, tail: BTreeMap<Vec<usize>, i64>| {
        for (t, c) in tail {
            let mut x = vec![head];
            x.extend(t);
            *out.entry(x).or_insert(0) += c;
        }
    };
    put(a[0], stuffle_comp(&a[1..], b));
    put(b[0], stuffle_comp(a, &b[1..]));
    put(a[0] + b[0], stuffle_comp(&a[1..], &b[1..]));
    out
}

pub fn stuffle(u: &[u8], v: &[u8]) -> Lin {
    stuffle_comp(&composition(u), &composition(v)).into_iter().map(|(c, k)| (from_composition(&c), k)).collect()
}

fn y_ending(k: usize) -> Vec<W> {
    all_words(k).into_iter().filter(|w| w.last() == Some(&1)).collect()
}

fn is_y_power(w: &[u8]) -> bool {
    w.iter().all(|&l| l == 1)
}

/// `(f|sh(u,v)) = 0` over all nonempty pairs of total degree `n`; the
/// solutions are the Lie polynomials of degree `n`.
pub fn shuffle_rows(n: usize) -> Vec<Vec<(usize, i64)>> {
    let mut rows = Vec::new();
    for k in 1..=n / 2 {
        for u in all_words(k) {
            for v in all_words(n - k) {
                if k == n - k && index(&v) < index(&u) {
                    continue;
                }
                rows.push(shuffle(&u, &v).into_iter().map(|(w, c)| (index(&w), c)).collect());
            }
        }
    }
    rows
}

/// Integer rows over the `2^n` monomial unknowns. With `fstar` the stuffle
/// rows pair against `f_*` (scaled by `n`) over all `y`-ending pairs;
/// otherwise against `f` itself, leaving out pairs of `y`-powers.
pub fn ds_rows(n: usize, fstar: bool) -> Vec<Vec<(usize, i64)>> {
    let mut rows = shuffle_rows(n);
    let xy = {
        let mut w = vec![0u8; n - 1];
        w.push(1);
        index(&w)
    };
    for k in 1..=n / 2 {
        for u in y_ending(k) {
            for v in y_ending(n - k) {
                if k == n - k && index(&v) < index(&u) {
                    continue;
                }
                let st = stuffle(&u, &v);
                if fstar {
                    let mut row: BTreeMap<usize, i64> = st.iter().map(|(w, c)| (index(w), c * n as i64)).collect();
                    if let Some(c) = st.get(&vec![1u8; n]) {
                        let s = if n % 2 == 1 { 1 } else { -1 };
                        *row.entry(xy).or_insert(0) += s * c;
                    }
                    rows.push(row.into_iter().filter(|(_, c)| *c != 0).collect());
                } else if !(is_y_power(&u) && is_y_power(&v)) {
                    rows.push(st.into_iter().map(|(w, c)| (index(&w), c)).collect());
                }
            }
        }
    }
    rows
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, descending.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn to_mod(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

/// Echelon form mod `p`: returns (independent row indices, pivot columns,
/// canonical nullspace basis indexed by free column).
fn nullspace_mod(rows: &[Vec<(usize, i64)>], ncols: usize, p: u64) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut pivot_of = vec![usize::MAX; ncols];
    let mut used = Vec::new();
    for (ri, row) in rows.iter().enumerate() {
        if basis.len() == ncols {
            break;
        }
        let mut v = vec![0u64; ncols];
        for &(j, c) in row {
            v[j] = (v[j] + to_mod(c, p)) % p;
        }
        for j in 0..ncols {
            if v[j] == 0 || pivot_of[j] == usize::MAX {
                continue;
            }
            let b = &basis[pivot_of[j]].1;
            let f = v[j];
            for k in j..ncols {
                if b[k] != 0 {
                    v[k] = (v[k] + p - mul_mod(f, b[k], p)) % p;
                }
            }
        }
        if let Some(j) = (0..ncols).find(|&j| v[j] != 0) {
            let inv = pow_mod(v[j], p - 2, p);
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            for (_, b) in basis.iter_mut() {
                if b[j] != 0 {
                    let f = b[j];
                    for k in 0..ncols {
                        b[k] = (b[k] + p - mul_mod(f, v[k], p)) % p;
                    }
                }
            }
            pivot_of[j] = basis.len();
            basis.push((j, v));
            used.push(ri);
        }
    }
    let pivots: Vec<usize> = basis.iter().map(|(j, _)| *j).collect();
    let mut null = Vec::new();
    for free in (0..ncols).filter(|&j| pivot_of[j] == usize::MAX) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (j, b) in &basis {
            v[*j] = (p - b[free]) % p;
        }
        null.push(v);
    }
    (used, pivots, null)
}

fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Exact nullspace of an integer system: mod-p elimination, CRT over
/// several primes, rational reconstruction and exact verification.
pub fn exact_nullspace(rows: &[Vec<(usize, i64)>], ncols: usize) -> Vec<Vec<Q>> {
    let ps = primes(12);
    let (used, pivots, first) = nullspace_mod(rows, ncols, ps[0]);
    if first.is_empty() {
        return Vec::new();
    }
    let sub: Vec<Vec<(usize, i64)>> = used.iter().map(|&i| rows[i].clone()).collect();
    let mut residues: Vec<Vec<BigInt>> = first.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut modulus = BigInt::from(ps[0]);
    for &p in &ps[1..] {
        let candidate: Option<Vec<Vec<Q>>> = residues
            .iter()
            .map(|v| v.iter().map(|a| rational_reconstruct(a, &modulus)).collect::<Option<Vec<Q>>>())
            .collect();
        if let Some(c) = candidate {
            if c.iter().all(|v| satisfies(rows, v)) {
                return c;
            }
        }
        let (_, piv, null) = nullspace_mod(&sub, ncols, p);
        assert_eq!(piv, pivots, "unlucky prime changed the pivot pattern");
        let pm = BigInt::from(p);
        let inv = modulus.modpow(&(&pm - 2u32), &pm);
        for (res, v) in residues.iter_mut().zip(&null) {
            for (a, &b) in res.iter_mut().zip(v) {
                let t = ((BigInt::from(b) - &*a).mod_floor(&pm) * &inv).mod_floor(&pm);
                *a = &*a + &modulus * t;
            }
        }
        modulus *= pm;
    }
    panic!("rational reconstruction did not stabilize");
}

pub fn satisfies(rows: &[Vec<(usize, i64)>], v: &[Q]) -> bool {
    rows.iter().all(|row| row.iter().fold(Q::zero(), |acc, &(j, c)| acc + &v[j] * BigInt::from(c)).is_zero())
}

/// The oracle's ds space in weight `n`, as polynomials.
pub fn oracle_ds(n: usize, fstar: bool) -> Vec<Poly> {
    let rows = ds_rows(n, fstar);
    let words = all_words(n);
    exact_nullspace(&rows, 1 << n)
        .into_iter()
        .map(|v| Poly::from_terms(words.iter().zip(v).map(|(w, c)| (to_word(w), c))))
        .collect()
}

/// Monomial coefficient vector of a homogeneous polynomial.
pub fn dense(f: &Poly, n: usize) -> Vec<Q> {
    all_words(n).iter().map(|w| f.get(to_word(w))).collect()
}

/// Rank over Q of a few dense rational vectors (tiny sizes only).
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let mut r = 0;
    let ncols = m.first().map_or(0, Vec::len);
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        let prow: Vec<Q> = m[r].iter().map(|x| x / &piv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        m[r] = prow;
        r += 1;
    }
    r
}

/// Same span, tested by rank.
pub fn same_span(a: &[Poly], b: &[Poly], n: usize) -> bool {
    let va: Vec<Vec<Q>> = a.iter().map(|f| dense(f, n)).collect();
    let vb: Vec<Vec<Q>> = b.iter().map(|f| dense(f, n)).collect();
    let ra = rank(&va);
    let both: Vec<Vec<Q>> = va.into_iter().chain(vb.iter().cloned()).collect();
    ra == rank(&vb) && rank(&both) == ra
}

/// Exponent tuple `(a_0, ..., a_r)` of `x^{a_0} y ... y x^{a_r}`.
pub fn exponents(w: &[u8]) -> Vec<usize> {
    let mut out = vec![0];
    for &l in w {
        if l == 0 {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(0);
        }
    }
    out
}

pub fn from_exponents(e: &[usize]) -> W {
    let mut w = Vec::new();
    for (i, &a) in e.iter().enumerate() {
        if i > 0 {
            w.push(1);
        }
        w.extend(std::iter::repeat(0).take(a));
    }
    w
}

pub fn coeff(f: &Poly, w: &[u8]) -> Q {
    f.get(to_word(w))
}

pub fn small(c: &Q) -> i64 {
    assert!(c.is_integer());
    c.to_integer().to_i64().unwrap()
}

/// `ma^r` evaluated numerically from the word expansion:
/// `Σ c_w z_0^{a_0} ... z_r^{a_r}` at `z_0 = 0`, `z_i = u_1 + ... + u_i`.
pub fn ma_eval(f: &Poly, r: usize, u: &[Q]) -> Q {
    let mut z = vec![Q::zero()];
    for x in u {
        let next = z.last().unwrap() + x;
        z.push(next);
    }
    vimo_eval(f, r, &z)
}

/// `vimo^r` evaluated numerically at `z_0, ..., z_r`.
pub fn vimo_eval(f: &Poly, r: usize, z: &[Q]) -> Q {
    assert_eq!(z.len(), r + 1);
    let mut acc = Q::zero();
    for (w, c) in f.terms() {
        let letters: Vec<u8> = w.to_string().bytes().map(|b| u8::from(b == b'y')).collect();
        let e = exponents(&letters);
        if e.len() != r + 1 {
            continue;
        }
        let mut t = c.clone();
        for (zi, &k) in z.iter().zip(&e) {
            for _ in 0..k {
                t *= zi;
            }
        }
        acc += t;
    }
    acc
}

pub type MouldFn<'a> = Box<dyn Fn(usize, &[Q]) -> Q + 'a>;

pub fn ma_fn(f: &Poly) -> MouldFn<'_> {
    Box::new(move |r, u| if r == 0 { Q::zero() } else { ma_eval(f, r, u) })
}

pub fn mantar_fn(m: MouldFn<'_>) -> MouldFn<'_> {
    Box::new(move |r, u| {
        let rev: Vec<Q> = u.iter().rev().cloned().collect();
        let s = if r % 2 == 1 { Q::one() } else { -Q::one() };
        s * m(r, &rev)
    })
}

pub fn push_fn(m: MouldFn<'_>) -> MouldFn<'_> {
    Box::new(move |r, u| {
        let total: Q = u.iter().fold(Q::zero(), |a, b| a + b);
        let mut args = vec![-total];
        args.extend(u[..r - 1].iter().cloned());
        m(r, &args)
    })
}

pub fn teru_fn(m: MouldFn<'_>) -> MouldFn<'_> {
    Box::new(move |r, u| {
        let mut v = m(r, u);
        if r >= 2 {
            let mut merged: Vec<Q> = u[..r - 2].to_vec();
            merged.push(&u[r - 2] + &u[r - 1]);
            v += (m(r - 1, &merged) - m(r - 1, &u[..r - 1])) / &u[r - 1];
        }
        v
    })
}
