//! Polynomial moulds: the `vimo` and `ma` encodings of noncommutative
//! polynomials, Ecalle's operators swap, mantar, push and teru, and the
//! appendix identities checked depth by depth.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dshuffle::is_ds;
use crate::error::{Error, Result};
use crate::lie::{ad_x_pow_y, is_lie};
use crate::poly::Poly;
use crate::rational::{format_q, q, sign, Q};
use crate::word::{Letter, Word};

/// Commutative polynomial in `arity` variables, sparse by exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl CPoly {
    pub fn zero(arity: usize) -> CPoly {
        CPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Q) -> CPoly {
        let mut p = CPoly::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn var(arity: usize, i: usize) -> CPoly {
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = CPoly::zero(arity);
        p.add_term(e, Q::one());
        p
    }

    /// `Σ c_i t_i`.
    pub fn linear(arity: usize, coeffs: &[(usize, i64)]) -> CPoly {
        let mut p = CPoly::zero(arity);
        for &(i, c) in coeffs {
            p = &p + &CPoly::var(arity, i).scale(&q(c));
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        assert_eq!(e.len(), self.arity, "exponent arity");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Q) -> CPoly {
        let mut out = CPoly::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn total_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().map(|e| e.iter().sum())
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.total_degrees().all(|t| t == d)
    }

    pub fn pow(&self, k: u32) -> CPoly {
        let mut out = CPoly::constant(self.arity, Q::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Replaces variable `i` by `images[i]`; all images share one arity.
    pub fn substitute(&self, images: &[CPoly]) -> CPoly {
        assert_eq!(images.len(), self.arity, "one image per variable");
        let arity = images.first().map_or(0, |p| p.arity);
        let mut powers: Vec<Vec<CPoly>> = images.iter().map(|p| vec![CPoly::constant(arity, Q::one()), p.clone()]).collect();
        let mut out = CPoly::zero(arity);
        for (e, c) in &self.terms {
            let mut m = CPoly::constant(arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    m = &m * &powers[i][k as usize];
                }
            }
            out = &out + &m;
        }
        out
    }

    /// Exact quotient by a nonzero linear form; errors with the remainder otherwise.
    pub fn div_linear(&self, l: &CPoly) -> Result<CPoly> {
        let pivot = (0..l.arity)
            .rev()
            .find(|&i| {
                let mut e = vec![0; l.arity];
                e[i] = 1;
                l.terms.contains_key(&e)
            })
            .ok_or_else(|| Error::InexactDivision("division by a non-linear or zero form".into()))?;
        if l.total_degrees().any(|d| d != 1) {
            return Err(Error::InexactDivision("divisor is not a linear form".into()));
        }
        let mut unit = vec![0; l.arity];
        unit[pivot] = 1;
        let lead = l.terms[&unit].clone();
        let key = |e: &Vec<u32>| {
            let mut k = vec![e[pivot]];
            k.extend(e.iter().enumerate().filter(|(i, _)| *i != pivot).map(|(_, v)| *v));
            k
        };
        let mut rest = self.clone();
        let mut quot = CPoly::zero(self.arity);
        while let Some((e, c)) = rest.terms.iter().max_by(|a, b| key(a.0).cmp(&key(b.0))).map(|(e, c)| (e.clone(), c.clone())) {
            if e[pivot] == 0 {
                return Err(Error::InexactDivision(format!("remainder {rest}")));
            }
            let mut qe = e.clone();
            qe[pivot] -= 1;
            let mut t = CPoly::zero(self.arity);
            t.add_term(qe, &c / &lead);
            rest = &rest - &(&t * l);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!({"exps": e, "coeff": format_q(c)}))
                .collect(),
        )
    }

    fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let coeff = format_q(c);
            parts.push(match (mono.is_empty(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => mono.join(" "),
                (false, "-1") => format!("-{}", mono.join(" ")),
                _ => format!("{} {}", coeff, mono.join(" ")),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl std::ops::Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        self + &rhs.scale(&q(-1))
    }
}

impl std::ops::Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = CPoly::zero(self.arity);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, c * d);
            }
        }
        out
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("t{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly[{}]({})", self.arity, self)
    }
}

/// Variable family of a mould component of depth `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vars {
    /// `z_0, ..., z_r` (vimo).
    Z,
    /// `u_1, ..., u_r` (ma).
    U,
    /// `v_1, ..., v_r` (after swap).
    V,
}

/// Depth-indexed family of commutative polynomials; absent depths are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mould {
    pub vars: Vars,
    pub degree: Option<usize>,
    components: BTreeMap<usize, CPoly>,
}

impl Mould {
    pub fn new(vars: Vars, degree: Option<usize>) -> Mould {
        Mould { vars, degree, components: BTreeMap::new() }
    }

    fn arity(&self, r: usize) -> usize {
        if self.vars == Vars::Z {
            r + 1
        } else {
            r
        }
    }

    pub fn get(&self, r: usize) -> CPoly {
        self.components.get(&r).cloned().unwrap_or_else(|| CPoly::zero(self.arity(r)))
    }

    pub fn set(&mut self, r: usize, p: CPoly) {
        assert_eq!(p.arity(), self.arity(r));
        if p.is_zero() {
            self.components.remove(&r);
        } else {
            self.components.insert(r, p);
        }
    }

    pub fn depths(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn max_depth(&self) -> usize {
        self.components.keys().next_back().copied().unwrap_or(0)
    }

    fn map_components(&self, vars: Vars, f: impl Fn(usize, &CPoly) -> Result<CPoly>) -> Result<Mould> {
        let mut out = Mould::new(vars, self.degree);
        for (&r, p) in &self.components {
            out.set(r, f(r, p)?);
        }
        Ok(out)
    }

    /// Each component of depth `r` homogeneous of total degree `n - r`.
    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.components.iter().all(|(&r, p)| p.is_homogeneous_of((n - r) as u32))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: serde_json::Map<String, serde_json::Value> =
            self.components.iter().map(|(r, p)| (r.to_string(), p.to_json())).collect();
        serde_json::json!({"degree": self.degree, "vars": self.vars, "components": comps})
    }

    pub fn render(&self, r: usize) -> String {
        let names: Vec<String> = match self.vars {
            Vars::Z => (0..=r).map(|i| format!("z{i}")).collect(),
            Vars::U => (1..=r).map(|i| format!("u{i}")).collect(),
            Vars::V => (1..=r).map(|i| format!("v{i}")).collect(),
        };
        self.get(r).render(&names)
    }
}

/// `vimo_f^r(z_0, ..., z_r) = Σ a_e z_0^{e_0} ... z_r^{e_r}` over the depth-`r`
/// words of `f` (depth 0 included).
pub fn vimo_from_poly(f: &Poly) -> Mould {
    let mut comps: BTreeMap<usize, CPoly> = BTreeMap::new();
    for (w, c) in f.terms() {
        let e: Vec<u32> = w.exponents().into_iter().map(|a| a as u32).collect();
        let r = e.len() - 1;
        comps.entry(r).or_insert_with(|| CPoly::zero(r + 1)).add_term(e, c.clone());
    }
    let mut m = Mould::new(Vars::Z, f.homogeneous_degree().ok().flatten());
    for (r, p) in comps {
        m.set(r, p);
    }
    m
}

/// `ma^r(u) = vimo^r(0, u_1, u_1 + u_2, ..., u_1 + ... + u_r)`, `r >= 1`.
pub fn ma_from_vimo(v: &Mould) -> Mould {
    assert_eq!(v.vars, Vars::Z);
    let mut m = Mould::new(Vars::U, v.degree);
    for r in v.depths().filter(|&r| r >= 1) {
        let mut args = vec![CPoly::zero(r)];
        for i in 1..=r {
            let idx: Vec<(usize, i64)> = (0..i).map(|j| (j, 1)).collect();
            args.push(CPoly::linear(r, &idx));
        }
        m.set(r, v.get(r).substitute(&args));
    }
    m
}

pub fn ma_from_poly(f: &Poly) -> Mould {
    ma_from_vimo(&vimo_from_poly(f))
}

/// Arguments `v_r, v_{r-1} - v_r, ..., v_1 - v_2` of the swap, over `r` variables.
fn swap_args(r: usize) -> Vec<CPoly> {
    (1..=r)
        .map(|k| {
            let hi = r - k; // index of v_{r-k+1}
            if k == 1 {
                CPoly::var(r, hi)
            } else {
                CPoly::linear(r, &[(hi, 1), (hi + 1, -1)])
            }
        })
        .collect()
}

/// `swap(ma)^r(v_1, ..., v_r) = ma^r(v_r, v_{r-1} - v_r, ..., v_1 - v_2)`.
pub fn swap(m: &Mould) -> Result<Mould> {
    require_vars(m, Vars::U)?;
    m.map_components(Vars::V, |r, p| Ok(p.substitute(&swap_args(r))))
}

/// Inverse of [`swap`]: `B(v) -> B(u_1 + ... + u_r, ..., u_1 + u_2, u_1)`.
pub fn unswap(m: &Mould) -> Result<Mould> {
    require_vars(m, Vars::V)?;
    m.map_components(Vars::U, |r, p| {
        let args: Vec<CPoly> = (1..=r)
            .map(|j| {
                let idx: Vec<(usize, i64)> = (0..=r - j).map(|i| (i, 1)).collect();
                CPoly::linear(r, &idx)
            })
            .collect();
        Ok(p.substitute(&args))
    })
}

/// `mantar(ma)^r(u) = (-1)^{r-1} ma^r(u_r, ..., u_1)`.
pub fn mantar(m: &Mould) -> Result<Mould> {
    require_vars(m, Vars::U)?;
    m.map_components(Vars::U, |r, p| {
        let args: Vec<CPoly> = (0..r).map(|i| CPoly::var(r, r - 1 - i)).collect();
        Ok(p.substitute(&args).scale(&sign(r - 1)))
    })
}

/// `push(ma)^r(u) = ma^r(-u_1 - ... - u_r, u_1, ..., u_{r-1})`.
pub fn push_mould(m: &Mould) -> Result<Mould> {
    require_vars(m, Vars::U)?;
    m.map_components(Vars::U, |r, p| {
        let mut args = vec![CPoly::linear(r, &(0..r).map(|i| (i, -1)).collect::<Vec<_>>())];
        args.extend((0..r - 1).map(|i| CPoly::var(r, i)));
        Ok(p.substitute(&args))
    })
}

/// `teru(ma)^r = ma^r + (ma^{r-1}(u_1, ..., u_{r-1} + u_r) - ma^{r-1}(u_1, ..., u_{r-1})) / u_r`.
pub fn teru(m: &Mould) -> Result<Mould> {
    require_vars(m, Vars::U)?;
    let mut out = Mould::new(Vars::U, m.degree);
    let top = m.max_depth() + 1;
    for r in 1..=top {
        let mut val = m.get(r);
        if r >= 2 {
            let prev = m.get(r - 1);
            let mut shifted: Vec<CPoly> = (0..r - 1).map(|i| CPoly::var(r, i)).collect();
            let plain = shifted.clone();
            shifted[r - 2] = CPoly::linear(r, &[(r - 2, 1), (r - 1, 1)]);
            let diff = &prev.substitute(&shifted) - &prev.substitute(&plain);
            val = &val + &diff.div_linear(&CPoly::var(r, r - 1))?;
        }
        out.set(r, val);
    }
    Ok(out)
}

fn require_vars(m: &Mould, v: Vars) -> Result<()> {
    if m.vars != v {
        return Err(Error::Precondition(format!("mould in {:?} variables, expected {:?}", m.vars, v)));
    }
    Ok(())
}

fn require_homogeneous(f: &Poly) -> Result<usize> {
    f.homogeneous_degree()?.ok_or_else(|| Error::Precondition("zero polynomial".into()))
}

/// `mantar(ma_f) = ma_f` for Lie `f`.
pub fn lemma_a2_check(f: &Poly) -> Result<bool> {
    require_homogeneous(f)?;
    if !is_lie(f)? {
        return Err(Error::Precondition(format!("not a Lie element: {f}")));
    }
    let m = ma_from_poly(f);
    Ok(mantar(&m)? == m)
}

/// Translation invariance: `vimo^r(z_0, ..., z_r) = vimo^r(0, z_1 - z_0, ..., z_r - z_0)` for Lie `f`.
pub fn vimo_shift_check(f: &Poly) -> Result<bool> {
    if !is_lie(f)? {
        return Err(Error::Precondition(format!("not a Lie element: {f}")));
    }
    let v = vimo_from_poly(f);
    let ok = v.depths().all(|r| {
        let a = r + 1;
        let mut args = vec![CPoly::zero(a)];
        args.extend((1..=r).map(|i| CPoly::linear(a, &[(i, 1), (0, -1)])));
        v.get(r).substitute(&args) == v.get(r)
    });
    Ok(ok)
}

/// Parity: `vimo^r(z) = (-1)^{n-r} vimo^r(-z)` for homogeneous `f` of degree `n`.
pub fn vimo_negation_check(f: &Poly) -> Result<bool> {
    let n = require_homogeneous(f)?;
    let v = vimo_from_poly(f);
    let ok = v.depths().all(|r| {
        let a = r + 1;
        let args: Vec<CPoly> = (0..a).map(|i| CPoly::linear(a, &[(i, -1)])).collect();
        v.get(r).substitute(&args).scale(&sign(n - r)) == v.get(r)
    });
    Ok(ok)
}

/// Evaluates `vimo^r` at the given arguments (zero if the depth is absent).
fn vimo_at(v: &Mould, r: usize, args: Vec<CPoly>, arity: usize) -> CPoly {
    let p = v.get(r);
    if p.is_zero() {
        return CPoly::zero(arity);
    }
    p.substitute(&args)
}

/// Per-depth outcome of the Ecalle identity and its translated forms.
#[derive(Clone, Debug, Serialize)]
pub struct A8Depth {
    pub r: usize,
    /// `teru(ma)^r = push∘mantar∘teru∘mantar(ma)^r`.
    pub identity: bool,
    /// `swap(teru(ma))^r` equals its closed form in `vimo`.
    pub swap_teru_agrees: bool,
    /// Closed form against the reflected form with `-1/v_1` inside.
    pub minus_form_agrees: bool,
    /// Closed form against the reflected form with `+1/v_1` inside.
    pub plus_form_agrees: bool,
    pub closed: String,
    pub minus_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct A8Report {
    pub degree: usize,
    pub depths: Vec<A8Depth>,
}

impl A8Report {
    /// The identity at every depth, with the translation consistent.
    pub fn holds(&self) -> bool {
        self.depths.iter().all(|d| d.identity && d.swap_teru_agrees && d.plus_form_agrees)
    }

    pub fn minus_form_holds(&self) -> bool {
        self.depths.iter().all(|d| d.minus_form_agrees)
    }
}

/// `swap(teru(ma))^r` written through `vimo`, in `v_1..v_r` (indices `0..r`).
fn swap_teru_closed(v: &Mould, r: usize) -> Result<CPoly> {
    let var = |i: usize| CPoly::var(r, i - 1);
    let mut args = vec![CPoly::zero(r)];
    args.extend((1..=r).rev().map(var));
    let main = vimo_at(v, r, args, r);
    if r < 2 {
        return Ok(main);
    }
    let head: Vec<CPoly> = std::iter::once(CPoly::zero(r)).chain((3..=r).rev().map(var)).collect();
    let mut a1 = head.clone();
    a1.push(var(1));
    let mut a2 = head;
    a2.push(var(2));
    let diff = &vimo_at(v, r - 1, a1, r) - &vimo_at(v, r - 1, a2, r);
    Ok(&main + &diff.div_linear(&CPoly::linear(r, &[(0, 1), (1, -1)]))?)
}

/// The same after push and mantar, in `v_1..v_r`; `inner_sign` is the sign in front of the `1/v_1` term.
fn closed_form(v: &Mould, r: usize, n: usize, inner_sign: i64) -> Result<CPoly> {
    let var = |i: usize| CPoly::var(r, i - 1);
    let mut args: Vec<CPoly> = (2..=r).map(var).collect();
    args.push(CPoly::zero(r));
    args.push(var(1));
    let main = vimo_at(v, r, args, r);
    let mut out = main;
    if r >= 2 {
        let head: Vec<CPoly> = (2..=r).map(var).collect();
        let mut a1 = head.clone();
        a1.push(var(1));
        let mut a2 = head;
        a2.push(CPoly::zero(r));
        let diff = &vimo_at(v, r - 1, a1, r) - &vimo_at(v, r - 1, a2, r);
        out = &out + &diff.div_linear(&var(1))?.scale(&q(inner_sign));
    }
    Ok(out.scale(&sign(n - 1)))
}

/// Ecalle's identity on the mould of `f̃`, without the ds precondition.
pub fn ecalle_a8_report(ft: &Poly) -> Result<A8Report> {
    let n = require_homogeneous(ft)?;
    let v = vimo_from_poly(ft);
    let ma = ma_from_vimo(&v);
    let lhs = teru(&ma)?;
    let rhs = push_mould(&mantar(&teru(&mantar(&ma)?)?)?)?;
    let st = swap(&lhs)?;
    let mut depths = Vec::new();
    for r in 1..=n {
        let e10 = swap_teru_closed(&v, r)?;
        let minus = closed_form(&v, r, n, -1)?;
        let corrected = closed_form(&v, r, n, 1)?;
        let names: Vec<String> = (1..=r).map(|i| format!("v{i}")).collect();
        depths.push(A8Depth {
            r,
            identity: lhs.get(r) == rhs.get(r),
            swap_teru_agrees: st.get(r) == e10,
            minus_form_agrees: e10 == minus,
            plus_form_agrees: e10 == corrected,
            closed: e10.render(&names),
            minus_form: minus.render(&names),
        });
    }
    Ok(A8Report { degree: n, depths })
}

/// `teru = push∘mantar∘teru∘mantar` on `ma` of `f̃ ∈ ds`.
pub fn ecalle_a8_check(ft: &Poly) -> Result<bool> {
    if !is_ds(ft)? {
        return Err(Error::Precondition(format!("not in ds: {ft}")));
    }
    Ok(ecalle_a8_report(ft)?.holds())
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeReport {
    /// Both `vimo` sides agree at every depth `0 <= r <= n-1`.
    pub mould_verdict: bool,
    /// `f̃_x + f̃_y` antipalindromic, computed on polynomials.
    pub poly_verdict: bool,
    /// The left side equals `vimo` of `(f̃_x + f̃_y)^r` at every depth.
    pub lhs_matches_direct: bool,
}

impl BridgeReport {
    pub fn agree(&self) -> bool {
        self.mould_verdict == self.poly_verdict && self.lhs_matches_direct
    }
}

/// The two sides of the antipalindromy statement in `vimo` form.
pub fn prop_a3_bridge(ft: &Poly) -> Result<BridgeReport> {
    let n = require_homogeneous(ft)?;
    if !is_lie(ft)? {
        return Err(Error::Precondition(format!("not a Lie element: {ft}")));
    }
    let v = vimo_from_poly(ft);
    let g = &ft.right_x() + &ft.right_y();
    let direct = vimo_from_poly(&g);
    let mut mould_verdict = true;
    let mut lhs_matches_direct = true;
    for r in 0..n {
        let a = r + 1;
        let z = |i: usize| CPoly::var(a, i);
        let zero = CPoly::zero(a);
        // vimo of (f_x + f_y)
        let mut up: Vec<CPoly> = (0..=r).map(z).collect();
        up.push(zero.clone());
        let mut cut: Vec<CPoly> = (0..r).map(z).collect();
        cut.push(zero.clone());
        let lhs = &vimo_at(&v, r + 1, up, a)
            + &(&vimo_at(&v, r, (0..=r).map(z).collect(), a) - &vimo_at(&v, r, cut, a)).div_linear(&z(r))?;
        // its reversal, signed
        let mut up: Vec<CPoly> = (0..=r).rev().map(z).collect();
        up.push(zero.clone());
        let mut cut: Vec<CPoly> = (1..=r).rev().map(z).collect();
        cut.push(zero);
        let rhs = (&vimo_at(&v, r + 1, up, a)
            + &(&vimo_at(&v, r, (0..=r).rev().map(z).collect(), a) - &vimo_at(&v, r, cut, a)).div_linear(&z(0))?)
            .scale(&sign(n - 1));
        mould_verdict &= lhs == rhs;
        lhs_matches_direct &= lhs == direct.get(r);
    }
    let poly_verdict = g.is_antipalindromic()?;
    Ok(BridgeReport { mould_verdict, poly_verdict, lhs_matches_direct })
}

/// Coefficients `b_c` of `f^r = Σ b_c ad(x)^{c_1}(y) ... ad(x)^{c_r}(y)` for
/// the depth-`r` part of a Lie `f` of degree `n`.
pub fn ad_basis_expansion(f: &Poly, r: usize) -> Result<BTreeMap<Vec<usize>, Q>> {
    let n = require_homogeneous(f)?;
    let mut residual = f.depth_part(r);
    let mut out = BTreeMap::new();
    if r == 0 || n < r {
        return if residual.is_zero() { Ok(out) } else { Err(Error::NotLie { residual: residual.to_text() }) };
    }
    let mut gens: Vec<Poly> = Vec::new();
    let mut gen = |k: usize| -> Poly {
        while gens.len() <= k {
            gens.push(ad_x_pow_y(gens.len()));
        }
        gens[k].clone()
    };
    for w in Word::all_of_length(n).filter(|w| w.depth() == r && w.last() == Some(Letter::Y)) {
        let c = residual.get(w);
        if c.is_zero() {
            continue;
        }
        let e = w.exponents();
        let comp: Vec<usize> = e[..r].to_vec();
        let mut prod = Poly::one();
        for &k in &comp {
            prod = &prod * &gen(k);
        }
        residual -= &prod.scale(&c);
        out.insert(comp, c);
    }
    if !residual.is_zero() {
        return Err(Error::NotLie { residual: residual.to_text() });
    }
    Ok(out)
}

/// `ma^r` rebuilt from the ad-basis coefficients: `Σ b_c (-u_1)^{c_1} ... (-u_r)^{c_r}`.
pub fn ma_from_ad_basis(b: &BTreeMap<Vec<usize>, Q>, r: usize) -> CPoly {
    let mut out = CPoly::zero(r);
    for (c, coeff) in b {
        let total: usize = c.iter().sum();
        let e: Vec<u32> = c.iter().map(|&k| k as u32).collect();
        out.add_term(e, coeff * sign(total));
    }
    out
}

/// Rebuilds the depth-`r` part from ad-basis coefficients.
pub fn poly_from_ad_basis(b: &BTreeMap<Vec<usize>, Q>) -> Poly {
    let mut out = Poly::zero();
    for (c, coeff) in b {
        let mut prod = Poly::one();
        for &k in c {
            prod = &prod * &ad_x_pow_y(k);
        }
        out += &prod.scale(coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dshuffle::f3;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn cp(a: usize, terms: &[(&[u32], i64)]) -> CPoly {
        let mut out = CPoly::zero(a);
        for (e, c) in terms {
            out.add_term(e.to_vec(), q(*c));
        }
        out
    }

    #[test]
    fn vimo_and_ma_examples() {
        let f = p("xxy - 2 xyx + yxx");
        let v = vimo_from_poly(&f);
        assert_eq!(v.get(1), cp(2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)]));
        assert_eq!(ma_from_poly(&f).get(1), cp(1, &[(&[2], 1)]));
        let g = p("xyy - 2 yxy + yyx");
        assert_eq!(vimo_from_poly(&g).get(2), cp(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], -2), (&[0, 0, 1], 1)]));
        assert_eq!(ma_from_poly(&g).get(2), cp(2, &[(&[0, 1], 1), (&[1, 0], -1)]));
    }

    #[test]
    fn operators_at_depth_one() {
        let m = ma_from_poly(&p("3 xxxy - yxy + xyxy"));
        assert_eq!(teru(&m).unwrap().get(1), m.get(1));
        let pushed = push_mould(&m).unwrap().get(1);
        assert_eq!(pushed, m.get(1).substitute(&[CPoly::linear(1, &[(0, -1)])]));
    }

    #[test]
    fn mantar_fixes_bracket() {
        let m = ma_from_poly(&p("xyy - 2 yxy + yyx"));
        assert_eq!(mantar(&m).unwrap(), m);
        assert!(lemma_a2_check(&p("xxy - 2 xyx + yxx")).unwrap());
        assert!(lemma_a2_check(&p("xy")).is_err());
    }

    #[test]
    fn swap_inverse() {
        let m = ma_from_poly(&p("xxyxy - 2 xyxyx + yyxxy + xyyyx"));
        let s = swap(&m).unwrap();
        assert_eq!(unswap(&s).unwrap(), m);
        assert_eq!(swap(&unswap(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn division() {
        let l = CPoly::linear(2, &[(0, 1), (1, -1)]);
        let a = cp(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        assert_eq!(a.div_linear(&l).unwrap(), cp(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        assert!(matches!(cp(2, &[(&[1, 1], 1), (&[0, 0], 1)]).div_linear(&l), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn identities_on_small_elements() {
        let g = p("xyy - 2 yxy + yyx");
        assert!(vimo_shift_check(&g).unwrap());
        assert!(vimo_negation_check(&g).unwrap());
        assert!(vimo_shift_check(&ad_x_pow_y(4)).unwrap());
    }

    #[test]
    fn ecalle_on_f3() {
        let rep = ecalle_a8_report(&f3()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(!rep.minus_form_holds());
        assert_eq!(rep.depths[1].closed, "2 v1 - v2");
        assert_eq!(rep.depths[1].minus_form, "3 v2");
    }

    #[test]
    fn bridge_on_small() {
        let r = prop_a3_bridge(&f3()).unwrap();
        assert!(r.mould_verdict && r.poly_verdict && r.lhs_matches_direct);
        let r = prop_a3_bridge(&p("xxy - 2 xyx + yxx")).unwrap();
        assert!(!r.mould_verdict && !r.poly_verdict && r.agree());
    }

    #[test]
    fn ad_basis_signs() {
        let g = p("xyy - 2 yxy + yyx");
        let b = ad_basis_expansion(&g, 2).unwrap();
        assert_eq!(b.get(&vec![1, 0]), Some(&q(1)));
        assert_eq!(b.get(&vec![0, 1]), Some(&q(-1)));
        assert_eq!(ma_from_ad_basis(&b, 2), ma_from_poly(&g).get(2));
        assert_eq!(poly_from_ad_basis(&b), g);
    }
}
