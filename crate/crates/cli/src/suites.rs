//! Named verification suites. Each returns one verdict per weight.

use std::str::FromStr;

use dskv_core::dshuffle::{ds_basis_with, BasisResult, DsConfig};
use dskv_core::group::{exp_odot, exp_odot_strict, group_shuffle_check, group_stuffle_check, thm42_check};
use dskv_core::kv::{self, neg_y};
use dskv_core::lie::{is_lie_strict, lyndon_basis, random_lie};
use dskv_core::mould;
use dskv_core::{Poly, Result};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm11,
    Thm12,
    Thm21,
    Thm33,
    Thm34,
    Lemma35,
    LemmaA2,
    EcalleA8,
    PropA3,
    Group49,
    Group410,
    Thm42,
}

pub const ALL: [(&str, Suite); 12] = [
    ("thm11", Suite::Thm11),
    ("thm12", Suite::Thm12),
    ("thm21", Suite::Thm21),
    ("thm33", Suite::Thm33),
    ("thm34", Suite::Thm34),
    ("lemma35", Suite::Lemma35),
    ("lemmaA2", Suite::LemmaA2),
    ("ecalleA8", Suite::EcalleA8),
    ("propA3", Suite::PropA3),
    ("group49", Suite::Group49),
    ("group410", Suite::Group410),
    ("thm42", Suite::Thm42),
];

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Suite, String> {
        ALL.iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(s))
            .map(|(_, v)| *v)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of {}", names().join(", ")))
    }
}

pub fn names() -> Vec<&'static str> {
    ALL.iter().map(|(n, _)| *n).collect()
}

impl Suite {
    pub fn name(self) -> &'static str {
        ALL.iter().find(|(_, v)| *v == self).unwrap().0
    }
}

/// Outcome of one check at one weight. A failing verdict carries a witness.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub weight: usize,
    pub cases: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

pub struct Ctx {
    pub seed: u64,
    pub samples: u64,
    pub truncate: usize,
    pub strict: bool,
}

impl Ctx {
    pub fn basis(&self, n: usize) -> Result<BasisResult> {
        ds_basis_with(n, &DsConfig { max_weight: 12, strict: self.strict, ..DsConfig::default() })
    }

    fn randoms(&self, n: usize) -> Vec<Poly> {
        (0..self.samples).map(|k| random_lie(n, self.seed.wrapping_mul(1_000_003).wrapping_add(k))).collect()
    }
}

/// Runs `check` over `inputs`, stopping at the first failure.
fn over<T>(
    check: &str,
    n: usize,
    inputs: &[T],
    show: impl Fn(&T) -> Value,
    mut test: impl FnMut(&T) -> Result<std::result::Result<(), Value>>,
) -> Result<Verdict> {
    for t in inputs {
        if let Err(detail) = test(t)? {
            return Ok(Verdict {
                check: check.into(),
                weight: n,
                cases: inputs.len(),
                pass: false,
                witness: Some(json!({"input": show(t), "detail": detail})),
            });
        }
    }
    Ok(Verdict { check: check.into(), weight: n, cases: inputs.len(), pass: true, witness: None })
}

fn poly_json(f: &Poly) -> Value {
    f.to_json()
}

fn bool_check(ok: bool, detail: impl FnOnce() -> Value) -> std::result::Result<(), Value> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

pub fn run(suite: Suite, n: usize, ctx: &Ctx) -> Result<Verdict> {
    let name = suite.name();
    match suite {
        Suite::Thm11 => {
            let b = ctx.basis(n)?;
            over(name, n, &b.basis, poly_json, |f| match kv::thm11_image(f) {
                Ok(img) => Ok(bool_check(img.derivation.is_special(), || json!("image not special"))),
                Err(dskv_core::Error::CheckFailed(why)) => Ok(Err(json!(why))),
                Err(e) => Err(e),
            })
        }
        Suite::Thm12 => {
            let spaces = kv::kv_spaces(n);
            over(name, n, &spaces.special, poly_json, |f| {
                let (vkv, krv) = kv::vkv_vs_krv(f)?;
                Ok(bool_check(vkv == krv, || json!({"vkv": vkv, "krv": krv})))
            })
        }
        Suite::Thm21 => {
            let mut inputs = ctx.randoms(n);
            inputs.extend(ctx.basis(n)?.basis.iter().map(neg_y));
            over(name, n, &inputs, poly_json, |f| {
                let r = kv::thm21_suite(f)?;
                Ok(bool_check(r.all_agree(), || serde_json::to_value(&r).unwrap()))
            })
        }
        Suite::Thm33 => {
            let b = ctx.basis(n)?;
            over(name, n, &b.basis, poly_json, |f| Ok(bool_check(kv::thm33_check(f)?, || json!("f_x + f_y not antipalindromic"))))
        }
        Suite::Thm34 => {
            let b = ctx.basis(n)?;
            over(name, n, &b.basis, poly_json, |f| Ok(bool_check(kv::thm34_check(f)?, || json!("signed push sums fail"))))
        }
        Suite::Lemma35 => {
            let b = ctx.basis(n)?;
            let twisted: Vec<Poly> = b.basis.iter().map(neg_y).collect();
            over(name, n, &twisted, poly_json, |f| Ok(bool_check(kv::lemma35_check(f)?, || json!("push constant mismatch"))))
        }
        Suite::LemmaA2 => {
            let elems: Vec<Poly> = lyndon_basis(n).expansions().cloned().collect();
            over(name, n, &elems, poly_json, |f| {
                if ctx.strict && !is_lie_strict(f)? {
                    return Ok(Err(json!("Lie criteria disagree")));
                }
                Ok(bool_check(mould::lemma_a2_check(f)?, || mould::ma_from_poly(f).to_json()))
            })
        }
        Suite::EcalleA8 => {
            let b = ctx.basis(n)?;
            over(name, n, &b.basis, poly_json, |f| {
                let rep = mould::ecalle_a8_report(f)?;
                Ok(bool_check(rep.holds(), || serde_json::to_value(&rep).unwrap()))
            })
        }
        Suite::PropA3 => {
            let mut inputs = ctx.randoms(n);
            let ds = ctx.basis(n)?.basis;
            inputs.extend(ds.iter().cloned());
            let first_ds = inputs.len() - ds.len();
            let indexed: Vec<(usize, Poly)> = inputs.into_iter().enumerate().collect();
            over(name, n, &indexed, |(_, f)| poly_json(f), |(i, f)| {
                let r = mould::prop_a3_bridge(f)?;
                let ok = r.agree() && (*i < first_ds || (r.mould_verdict && r.poly_verdict));
                Ok(bool_check(ok, || serde_json::to_value(&r).unwrap()))
            })
        }
        Suite::Group49 | Suite::Group410 => {
            let b = ctx.basis(n)?;
            let t = ctx.truncate.max(n);
            over(name, n, &b.basis, poly_json, |f| {
                let phi = if ctx.strict { exp_odot_strict(f, t)? } else { exp_odot(f, t)? };
                let c = if suite == Suite::Group49 { group_shuffle_check(&phi) } else { group_stuffle_check(&phi) };
                Ok(bool_check(phi.has_ds_shape() && c.ok(), || serde_json::to_value(&c).unwrap()))
            })
        }
        Suite::Thm42 => {
            let b = ctx.basis(n)?;
            let t = ctx.truncate.max(n);
            over(name, n, &b.basis, poly_json, |f| {
                let r = thm42_check(f, t)?;
                Ok(bool_check(r.ok(), || serde_json::to_value(&r).unwrap()))
            })
        }
    }
}
