use dskv_core::poly::{push_classes, LinearSubst};
use dskv_core::{Poly, Word, Q};
use proptest::prelude::*;

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n)).prop_map(|bits| {
        let s: String = bits.iter().map(|&b| if b { 'y' } else { 'x' }).collect();
        s.parse().unwrap()
    })
}

fn poly_of_degree(n: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((proptest::collection::vec(any::<bool>(), n), -4i64..=4), 1..8).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(bits, c)| {
            let s: String = bits.iter().map(|&b| if b { 'y' } else { 'x' }).collect();
            (s.parse().unwrap(), Q::from_integer(c.into()))
        }))
    })
}

proptest! {
    #[test]
    fn anti_is_involution(w in word_strategy(12)) {
        prop_assert_eq!(w.anti().anti(), w);
    }

    #[test]
    fn push_has_order_depth_plus_one(w in word_strategy(12)) {
        let mut v = w;
        for _ in 0..=w.depth() {
            v = v.push();
        }
        prop_assert_eq!(v, w);
        prop_assert_eq!(w.push().len(), w.len());
        prop_assert_eq!(w.push().depth(), w.depth());
    }

    #[test]
    fn decompositions_rebuild(f in poly_of_degree(6)) {
        let (fx, fy) = f.decompose_right().unwrap();
        prop_assert_eq!(&(&fx * &Poly::x()) + &(&fy * &Poly::y()), f.clone());
        let (lx, ly) = f.decompose_left().unwrap();
        prop_assert_eq!(&(&Poly::x() * &lx) + &(&Poly::y() * &ly), f);
    }

    #[test]
    fn linear_substitution_is_multiplicative(f in poly_of_degree(3), g in poly_of_degree(4)) {
        let s = LinearSubst::new(Q::from_integer(2.into()), Q::from_integer((-1).into()), Q::from_integer(3.into()), Q::from_integer(1.into()));
        prop_assert_eq!(s.apply(&(&f * &g)), &s.apply(&f) * &s.apply(&g));
    }

    #[test]
    fn json_round_trip(f in poly_of_degree(5)) {
        let j = serde_json::to_string(&f).unwrap();
        let back: Poly = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn palindromy_is_parity_of_anti(f in poly_of_degree(5)) {
        let sym = &f + &f.anti().scale(&Q::from_integer((-1).into()));
        // degree 5: antipalindromic means f = -anti(f)
        prop_assert!(sym.is_antipalindromic().unwrap());
    }
}

#[test]
fn push_classes_partition_words() {
    for m in 1..=8 {
        let total: usize = push_classes(m)
            .iter()
            .map(|o| {
                let mut w = o.words().to_vec();
                w.sort();
                w.dedup();
                w.len()
            })
            .sum();
        assert_eq!(total, 1 << m);
    }
}

#[test]
fn parse_forms() {
    let f = Poly::parse("2 xxy - 1/3 yx + 1").unwrap();
    assert_eq!(f.get("xxy".parse().unwrap()), Q::from_integer(2.into()));
    assert_eq!(f.get("yx".parse().unwrap()), Q::new((-1).into(), 3.into()));
    assert_eq!(f.constant_term(), Q::from_integer(1.into()));
    assert!(Poly::parse("2 xz").is_err());
}

#[test]
fn z_substitution_matches_hand_expansion() {
    // x -> -x - y on xy: (-x - y) y = -xy - yy
    let f = Poly::parse("xy").unwrap();
    assert_eq!(LinearSubst::z_substitution().apply(&f), Poly::parse("-xy - yy").unwrap());
}
