//! Extreme rays of a pointed polyhedral cone `{x : A x >= 0}` by the double
//! description method with the combinatorial adjacency test.

use num_bigint::BigInt;

use crate::number::{ck, make_primitive, ExactInt, Overflow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeError {
    /// The rows do not span the space, so the cone contains a line.
    NotPointed,
}

impl std::fmt::Display for ConeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("cone contains a line")
    }
}

impl std::error::Error for ConeError {}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| b & !a == 0)
    }
}

fn dot<I: ExactInt>(a: &[I], b: &[I]) -> Result<I, Overflow> {
    let mut acc = I::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero_int() && !y.is_zero_int() {
            acc = ck(acc.checked_add(&ck(x.checked_mul(y))?))?;
        }
    }
    Ok(acc)
}

/// Bareiss determinant with row pivoting.
fn det<I: ExactInt>(mut m: Vec<Vec<I>>) -> Result<I, Overflow> {
    let n = m.len();
    if n == 0 {
        return Ok(I::one());
    }
    let mut neg = false;
    let mut prev = I::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero_int()) else {
            return Ok(I::zero());
        };
        if p != k {
            m.swap(p, k);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = ck(m[i][j].checked_mul(&m[k][k]))?;
                let b = ck(m[i][k].checked_mul(&m[k][j]))?;
                m[i][j] = ck(a.checked_sub(&b))?.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if neg {
        ck(d.checked_neg())
    } else {
        Ok(d)
    }
}

/// Generalized cross product: a vector orthogonal to `rows` (`d - 1`
/// independent rows of length `d`).
fn cross<I: ExactInt>(rows: &[&Vec<I>], d: usize) -> Result<Vec<I>, Overflow> {
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let minor: Vec<Vec<I>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let v = det(minor)?;
        out.push(if j % 2 == 1 { ck(v.checked_neg())? } else { v });
    }
    Ok(out)
}

/// Indices of a maximal independent subset of `rows`, chosen greedily in
/// order.
fn independent<I: ExactInt>(rows: &[Vec<I>], d: usize) -> Result<Vec<usize>, Overflow> {
    let mut basis: Vec<(usize, Vec<I>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if basis.len() == d {
            break;
        }
        let mut v = row.clone();
        for (col, b) in &basis {
            if v[*col].is_zero_int() {
                continue;
            }
            let (bc, vc) = (b[*col].clone(), v[*col].clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x = ck(ck(bc.checked_mul(x))?.checked_sub(&ck(vc.checked_mul(y))?))?;
            }
            make_primitive(&mut v);
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero_int()) {
            basis.push((col, v));
            chosen.push(i);
        }
    }
    Ok(chosen)
}

pub(crate) fn dd<I: ExactInt>(rows: &[Vec<I>], d: usize) -> Result<Result<Vec<Vec<I>>, ConeError>, Overflow> {
    let m = rows.len();
    let sel = independent(rows, d)?;
    if sel.len() < d {
        return Ok(Err(ConeError::NotPointed));
    }
    let mut is_sel = vec![false; m];
    sel.iter().for_each(|&i| is_sel[i] = true);

    let mut rays: Vec<(Vec<I>, Bits)> = Vec::with_capacity(d);
    for (k, &j) in sel.iter().enumerate() {
        let others: Vec<&Vec<I>> = sel.iter().filter(|&&i| i != j).map(|&i| &rows[i]).collect();
        let mut r = cross(&others, d)?;
        if dot(&rows[j], &r)?.is_neg() {
            for x in r.iter_mut() {
                *x = ck(x.checked_neg())?;
            }
        }
        make_primitive(&mut r);
        let mut z = Bits::new(m);
        sel.iter().enumerate().filter(|&(kk, _)| kk != k).for_each(|(_, &i)| z.set(i));
        rays.push((r, z));
    }

    for (i, row) in rows.iter().enumerate() {
        if is_sel[i] || rays.is_empty() {
            continue;
        }
        let vals: Vec<I> = rays.iter().map(|(r, _)| dot(row, r)).collect::<Result<_, _>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_pos()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_neg()).collect();
        if neg.is_empty() {
            for (k, v) in vals.iter().enumerate() {
                if v.is_zero_int() {
                    rays[k].1.set(i);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let z = rays[p].1.and(&rays[q].1);
                if (z.count() as usize) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|k| k == p || k == q || !rays[k].1.contains(&z));
                if !adjacent {
                    continue;
                }
                let minus_vq = ck(vals[q].checked_neg())?;
                let mut r = Vec::with_capacity(d);
                for (a, b) in rays[q].0.iter().zip(&rays[p].0) {
                    r.push(ck(ck(vals[p].checked_mul(a))?.checked_add(&ck(minus_vq.checked_mul(b))?))?);
                }
                make_primitive(&mut r);
                let mut z = z;
                z.set(i);
                fresh.push((r, z));
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (k, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[k].is_neg() {
                continue;
            }
            if vals[k].is_zero_int() {
                z.set(i);
            }
            next.push((r, z));
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<Vec<I>> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    Ok(Ok(out))
}

/// Primitive integer generators of the extreme rays, sorted. An empty
/// result means the cone is `{0}`.
pub fn extreme_rays(rows: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<BigInt>>, ConeError> {
    let small: Option<Vec<Vec<i128>>> = rows.iter().map(|r| r.iter().map(i128::from_bigint).collect()).collect();
    if let Some(small) = small {
        if let Ok(res) = dd(&small, d) {
            return res.map(|rays| {
                let mut v: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
                v.sort();
                v
            });
        }
    }
    dd(rows, d).expect("BigInt never overflows")
}

/// Machine-integer variant; `None` on overflow.
pub(crate) fn extreme_rays_i128(rows: &[Vec<i128>], d: usize) -> Option<Result<Vec<Vec<i128>>, ConeError>> {
    dd(rows, d).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn orthant_is_unit_vectors() {
        let rows = big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(extreme_rays(&rows, 3).unwrap(), big(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // t >= |x|, t >= |y| in (x, y, t).
        let rows = big(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays, big(&[&[-1, -1, 1], &[-1, 1, 1], &[1, -1, 1], &[1, 1, 1]]));
    }

    #[test]
    fn redundant_rows_and_collapse() {
        let rows = big(&[&[1, 0], &[0, 1], &[1, 1], &[2, 2]]);
        assert_eq!(extreme_rays(&rows, 2).unwrap(), big(&[&[0, 1], &[1, 0]]));
        let rows = big(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert!(extreme_rays(&rows, 2).unwrap().is_empty());
        let rows = big(&[&[1, 0]]);
        assert_eq!(extreme_rays(&rows, 2), Err(ConeError::NotPointed));
    }

    #[test]
    fn determinant_and_cross() {
        let m = vec![vec![2i128, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        assert_eq!(det(m).unwrap(), 0);
        let m = vec![vec![0i128, 0, 1], vec![1, 3, 2], vec![1, 1, 2]];
        assert_eq!(det(m).unwrap(), -2);
        let a = vec![1i128, 0, 0];
        let b = vec![0i128, 1, 0];
        assert_eq!(cross(&[&a, &b], 3).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge: BigInt = BigInt::from(i128::MAX) * BigInt::from(4);
        let rows = vec![vec![huge.clone(), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        assert_eq!(extreme_rays(&rows, 2).unwrap().len(), 2);
    }
}
