//! Exact linear algebra: a modular rank filter and fraction-free elimination
//! over the integers, with canonical nullspace bases over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// The Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64) -> u64 {
    assert!(a % PRIME != 0, "inverse of zero");
    pow_mod(a, PRIME - 2)
}

pub fn reduce_i128(x: i128) -> u64 {
    x.rem_euclid(PRIME as i128) as u64
}

pub fn reduce_bigint(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    u64::try_from(r).unwrap()
}

/// Row echelon form mod `PRIME`, kept fully reduced with unit pivots.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    ncols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(ncols: usize) -> ModEchelon {
        ModEchelon { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Inserts a row; returns whether it was independent of those before.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        for (pc, prow) in &self.rows {
            let c = row[*pc];
            if c != 0 {
                for (r, p) in row.iter_mut().zip(prow) {
                    if *p != 0 {
                        *r = sub_mod(*r, mul_mod(c, *p));
                    }
                }
            }
        }
        let Some(pivot) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = inv_mod(row[pivot]);
        for v in row.iter_mut() {
            *v = mul_mod(*v, inv);
        }
        for (_, prow) in self.rows.iter_mut() {
            let c = prow[pivot];
            if c != 0 {
                for (r, p) in prow.iter_mut().zip(&row) {
                    if *p != 0 {
                        *r = sub_mod(*r, mul_mod(c, *p));
                    }
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    /// Nullspace dimension of the inserted rows.
    pub fn nullity(&self) -> usize {
        self.ncols - self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        p.sort_unstable();
        p
    }

    /// Nullspace basis mod p: one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.ncols];
                v[f] = 1;
                for (pc, prow) in &self.rows {
                    v[*pc] = sub_mod(0, prow[f]);
                }
                v
            })
            .collect()
    }
}

/// Indices of a maximal set of rows independent mod `PRIME`, in input order.
/// Such rows are independent over `Q` as well.
pub fn independent_rows_mod_p(rows: &[Vec<i128>], ncols: usize) -> Vec<usize> {
    let mut ech = ModEchelon::new(ncols);
    let mut chosen = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if ech.is_full() {
            break;
        }
        if ech.insert(r.iter().map(|&v| reduce_i128(v)).collect()) {
            chosen.push(i);
        }
    }
    chosen
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, v| if v.is_zero() { g } else { g.gcd(v) })
}

fn make_primitive(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v /= &g;
            }
        }
    }
}

/// Fraction-free echelon form over `Z`: every row primitive with positive
/// pivot, and each pivot column zero outside its own row.
#[derive(Clone, Debug)]
pub struct ExactEchelon {
    ncols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl ExactEchelon {
    pub fn new(ncols: usize) -> ExactEchelon {
        ExactEchelon { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.ncols);
        for (pc, prow) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let a = &prow[*pc];
            let b = row[*pc].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (a / &g, &b / &g);
            for (r, p) in row.iter_mut().zip(prow) {
                *r = &*r * &ma - p * &mb;
            }
            make_primitive(&mut row);
        }
        let Some(pivot) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        if row[pivot].is_negative() {
            for v in row.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        make_primitive(&mut row);
        for (_, prow) in self.rows.iter_mut() {
            if prow[pivot].is_zero() {
                continue;
            }
            let a = &row[pivot];
            let b = prow[pivot].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (a / &g, &b / &g);
            for (r, p) in prow.iter_mut().zip(&row) {
                *r = &*r * &ma - p * &mb;
            }
            make_primitive(prow);
        }
        self.rows.push((pivot, row));
        true
    }

    /// Canonical nullspace basis (reduced row echelon over `Q`).
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<Q>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.ncols];
                v[f] = Q::one();
                for (pc, prow) in &self.rows {
                    if !prow[f].is_zero() {
                        v[*pc] = -Q::new(prow[f].clone(), prow[*pc].clone());
                    }
                }
                v
            })
            .collect();
        rref(raw)
    }
}

/// Reduced row echelon form over `Q`; zero rows dropped.
pub fn rref(mut rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Q::one() / &rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for (r, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *r -= &c * p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows.to_vec()).len()
}

/// Primitive integer multiple of a rational vector.
pub fn integer_vector(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    make_primitive(&mut out);
    out
}

/// Primitive integer multiple of each row.
pub fn integer_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| integer_vector(r)).collect()
}

/// Canonical nullspace basis of the integer system `rows · v = 0`.
pub fn nullspace_int(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<Q>> {
    let mut ech = ExactEchelon::new(ncols);
    for r in rows {
        if ech.rank() == ncols {
            break;
        }
        ech.insert(r.clone());
    }
    ech.nullspace()
}

pub fn nullspace_q(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    nullspace_int(&integer_rows(rows), ncols)
}

/// One solution of `A v = b` for a matrix given by columns, or `None`.
pub fn solve_columns(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let ncols = columns.len();
    let nrows = rhs.len();
    // augmented system [A | -b] v' = 0 with last coordinate 1
    let rows: Vec<Vec<Q>> = (0..nrows)
        .map(|i| {
            let mut r: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(-rhs[i].clone());
            r
        })
        .collect();
    let null = nullspace_q(&rows, ncols + 1);
    let v = null.iter().find(|v| !v[ncols].is_zero())?;
    let scale = Q::one() / &v[ncols];
    Some(v[..ncols].iter().map(|c| c * &scale).collect())
}

pub fn dot_int(row: &[i128], v: &[BigInt]) -> BigInt {
    row.iter()
        .zip(v)
        .filter(|(r, _)| **r != 0)
        .fold(BigInt::zero(), |acc, (r, x)| acc + BigInt::from(*r) * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn modular_inverse() {
        for a in [1u64, 2, 3, 12345, PRIME - 1] {
            assert_eq!(mul_mod(a, inv_mod(a)), 1);
        }
        assert_eq!(reduce_i128(-1), PRIME - 1);
        assert_eq!(reduce_bigint(&BigInt::from(-2)), PRIME - 2);
    }

    #[test]
    fn nullspace_small() {
        let rows = vec![bi(&[1, 2, 3]), bi(&[2, 4, 6]), bi(&[0, 1, 1])];
        let ns = nullspace_int(&rows, 3);
        assert_eq!(ns, vec![vec![q(1), q(1), q(-1)]]);
        let ns = nullspace_int(&[bi(&[0, 0])], 2);
        assert_eq!(ns, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn modular_and_exact_ranks_agree() {
        let rows: Vec<Vec<i128>> = vec![vec![3, 1, 4, 1], vec![5, 9, 2, 6], vec![8, 10, 6, 7], vec![0, 0, 1, 0]];
        let chosen = independent_rows_mod_p(&rows, 4);
        assert_eq!(chosen, vec![0, 1, 3]);
        let exact: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mut e = ExactEchelon::new(4);
        for r in exact {
            e.insert(r);
        }
        assert_eq!(e.rank(), 3);
        for v in e.nullspace() {
            let iv = integer_vector(&v);
            for r in &rows {
                assert!(dot_int(r, &iv).is_zero());
            }
        }
    }

    #[test]
    fn rref_is_canonical() {
        let a = rref(vec![vec![q(2), q(4)], vec![q(1), q(3)]]);
        assert_eq!(a, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let b = rref(vec![vec![qr(1, 2), q(1)], vec![q(1), q(2)]]);
        assert_eq!(b, vec![vec![q(1), q(2)]]);
    }

    #[test]
    fn linear_solve() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        assert_eq!(solve_columns(&cols, &[q(2), q(3), q(5)]), Some(vec![q(2), q(3)]));
        assert_eq!(solve_columns(&cols, &[q(2), q(3), q(4)]), None);
    }
}
