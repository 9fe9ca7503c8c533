//! The oracle itself, checked against known counts and the library products.

mod common;

use common::*;
use dskv_core::dshuffle;
use dskv_core::lie::witt_number;
use dskv_core::{Poly, Q};

fn lin_to_poly(l: &Lin) -> Poly {
    Poly::from_terms(l.iter().map(|(w, c)| (to_word(w), Q::from_integer((*c).into()))))
}

#[test]
fn lie_dimensions_are_witt_numbers() {
    // necklace counts 2, 1, 2, 3, 6, 9, 18, 30 for n = 1..8
    let witt = [2usize, 1, 2, 3, 6, 9, 18, 30];
    for n in 2..=8 {
        let dim = exact_nullspace(&shuffle_rows(n), 1 << n).len();
        assert_eq!(dim, witt[n - 1], "n={n}");
        assert_eq!(dim, witt_number(n));
    }
}

#[test]
fn products_match_library() {
    for a in 1..=4 {
        for b in 1..=4 {
            for u in all_words(a) {
                for v in all_words(b) {
                    assert_eq!(lin_to_poly(&shuffle(&u, &v)), dshuffle::shuffle(to_word(&u), to_word(&v)));
                    if u.last() == Some(&1) && v.last() == Some(&1) {
                        assert_eq!(lin_to_poly(&stuffle(&u, &v)), dshuffle::stuffle(to_word(&u), to_word(&v)).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn stuffle_small_cases() {
    // y * y = 2 yy + xy
    let st = stuffle(&[1], &[1]);
    assert_eq!(st.get(&vec![1, 1]), Some(&2));
    assert_eq!(st.get(&vec![0, 1]), Some(&1));
}

#[test]
fn reconstruction_finds_nontrivial_rationals() {
    // x0 + 3 x1 = 0, 2 x1 - 7 x2 = 0  ->  (-21/2, 7/2, 1)
    let rows = vec![vec![(0, 1), (1, 3)], vec![(1, 2), (2, -7)]];
    let ns = exact_nullspace(&rows, 3);
    assert_eq!(ns.len(), 1);
    let v = &ns[0];
    assert_eq!(v[2], Q::from_integer(1.into()));
    assert_eq!(v[1], Q::new(7.into(), 2.into()));
    assert_eq!(v[0], Q::new((-21).into(), 2.into()));
}
