//! Integer-preserving primal simplex (Bland's rule, two phases).
//!
//! Every row of the tableau is stored as integers over one shared positive
//! denominator, the determinant of the current basis. A pivot on `(r, c)`
//! with pivot entry `p` and old denominator `d` maps every other row to
//! `(p * row - row[c] * pivot_row) / d`, where the division is exact.

use num_bigint::BigInt;

use super::Relation;
use crate::number::{ck, ExactInt, Overflow, Rational};

/// One constraint of the integer standard form. Variables are nonnegative.
pub(crate) struct IntRow<I> {
    pub coeffs: Vec<I>,
    pub rel: Relation,
    pub rhs: I,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum RawOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Dual multiplier per input row (in the row's original orientation).
        duals: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

struct Tableau<I> {
    nstruct: usize,
    ncols: usize,
    first_art: usize,
    rows: Vec<Vec<I>>,
    /// Input row index for each tableau row (redundant rows are dropped).
    origin: Vec<usize>,
    basis: Vec<usize>,
    z1: Vec<I>,
    z2: Vec<I>,
    denom: I,
    /// Per input row: slack column and its sign, artificial column, and
    /// whether the row was negated to make its right-hand side nonnegative.
    slack: Vec<Option<(usize, bool)>>,
    art: Vec<Option<usize>>,
    flipped: Vec<bool>,
}

fn frac<I: ExactInt>(num: &I, den: &I) -> Rational {
    Rational::new(num.to_bigint(), den.to_bigint())
}

impl<I: ExactInt> Tableau<I> {
    fn build(nstruct: usize, input: &[IntRow<I>], objective: &[I]) -> Result<Self, Overflow> {
        let m = input.len();
        let mut flipped = vec![false; m];
        let mut rels = Vec::with_capacity(m);
        for (i, row) in input.iter().enumerate() {
            flipped[i] = row.rhs.is_neg();
            rels.push(match (row.rel, flipped[i]) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let nslack = rels.iter().filter(|r| **r != Relation::Eq).count();
        let nart = rels.iter().filter(|r| **r != Relation::Le).count();
        let first_art = nstruct + nslack;
        let ncols = first_art + nart;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = vec![None; m];
        let mut art = vec![None; m];
        let (mut next_slack, mut next_art) = (nstruct, first_art);
        for (i, row) in input.iter().enumerate() {
            let mut t = vec![I::zero(); ncols + 1];
            for (j, a) in row.coeffs.iter().enumerate() {
                t[j] = if flipped[i] { ck(a.checked_neg())? } else { a.clone() };
            }
            t[ncols] = if flipped[i] { ck(row.rhs.checked_neg())? } else { row.rhs.clone() };
            match rels[i] {
                Relation::Le => {
                    t[next_slack] = I::one();
                    slack[i] = Some((next_slack, true));
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    t[next_slack] = ck(I::one().checked_neg())?;
                    slack[i] = Some((next_slack, false));
                    next_slack += 1;
                    t[next_art] = I::one();
                    art[i] = Some(next_art);
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    t[next_art] = I::one();
                    art[i] = Some(next_art);
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(t);
        }
        let mut z2 = vec![I::zero(); ncols + 1];
        z2[..nstruct].clone_from_slice(objective);
        let mut z1 = vec![I::zero(); ncols + 1];
        for (i, t) in rows.iter().enumerate() {
            if art[i].is_some() {
                for j in 0..first_art {
                    z1[j] = ck(z1[j].checked_add(&t[j]))?;
                }
                z1[ncols] = ck(z1[ncols].checked_add(&t[ncols]))?;
            }
        }
        Ok(Self {
            nstruct,
            ncols,
            first_art,
            rows,
            origin: (0..m).collect(),
            basis,
            z1,
            z2,
            denom: I::one(),
            slack,
            art,
            flipped,
        })
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Overflow> {
        let p = self.rows[r][c].clone();
        let d = self.denom.clone();
        let prow = self.rows[r].clone();
        let update = |row: &mut Vec<I>| -> Result<(), Overflow> {
            let f = row[c].clone();
            for (x, pr) in row.iter_mut().zip(&prow) {
                let a = ck(p.checked_mul(x))?;
                let v = if f.is_zero_int() {
                    a
                } else {
                    ck(a.checked_sub(&ck(f.checked_mul(pr))?))?
                };
                *x = v.exact_div(&d);
            }
            Ok(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row)?;
            }
        }
        update(&mut self.z1)?;
        update(&mut self.z2)?;
        self.basis[r] = c;
        if p.is_neg() {
            for row in self.rows.iter_mut().chain([&mut self.z1, &mut self.z2]) {
                for x in row.iter_mut() {
                    *x = ck(x.checked_neg())?;
                }
            }
            self.denom = ck(p.checked_neg())?;
        } else {
            self.denom = p;
        }
        Ok(())
    }

    /// Bland's rule: smallest improving column, then smallest basic index
    /// among the minimum-ratio rows.
    fn run(&mut self, phase: Phase) -> Result<bool, Overflow> {
        let rhs = self.ncols;
        loop {
            let z = if phase == Phase::One { &self.z1 } else { &self.z2 };
            let limit = if phase == Phase::One { self.ncols } else { self.first_art };
            let Some(c) = (0..limit).find(|&j| z[j].is_pos()) else {
                return Ok(true);
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_pos() {
                    continue;
                }
                leave = Some(match leave {
                    None => i,
                    Some(l) => {
                        let lhs = ck(self.rows[i][rhs].checked_mul(&self.rows[l][c]))?;
                        let rhs_v = ck(self.rows[l][rhs].checked_mul(a))?;
                        if lhs < rhs_v || (lhs == rhs_v && self.basis[i] < self.basis[l]) {
                            i
                        } else {
                            l
                        }
                    }
                });
            }
            match leave {
                Some(r) => self.pivot(r, c)?,
                None => return Ok(false),
            }
        }
    }

    /// Pivots zero-level artificials out of the basis; drops rows that are
    /// linear combinations of the others.
    fn expel_artificials(&mut self) -> Result<(), Overflow> {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_art {
                r += 1;
                continue;
            }
            match (0..self.first_art).find(|&j| !self.rows[r][j].is_zero_int()) {
                Some(c) => {
                    self.pivot(r, c)?;
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                    self.origin.remove(r);
                }
            }
        }
        Ok(())
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::from_integer(BigInt::from(0)); self.nstruct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.nstruct {
                x[b] = frac(&self.rows[i][self.ncols], &self.denom);
            }
        }
        x
    }

    /// Dual multipliers from the phase-two reduced costs of the slack and
    /// artificial columns, mapped back to each input row's orientation.
    fn duals(&self) -> Vec<Rational> {
        (0..self.slack.len())
            .map(|i| {
                let y = match (self.slack[i], self.art[i]) {
                    (Some((col, true)), _) => -frac(&self.z2[col], &self.denom),
                    (Some((col, false)), _) => frac(&self.z2[col], &self.denom),
                    (None, Some(col)) => -frac(&self.z2[col], &self.denom),
                    (None, None) => unreachable!("every row has a slack or an artificial"),
                };
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}

/// Maximizes `objective . x` subject to `rows`, `x >= 0`. With
/// `phase_one_only`, stops after establishing feasibility and reports a
/// zero objective.
pub(crate) fn solve<I: ExactInt>(
    nstruct: usize,
    rows: &[IntRow<I>],
    objective: &[I],
    phase_one_only: bool,
) -> Result<RawOutcome, Overflow> {
    let mut t = Tableau::build(nstruct, rows, objective)?;
    if t.art.iter().any(Option::is_some) {
        t.run(Phase::One)?;
        if !t.z1[t.ncols].is_zero_int() {
            return Ok(RawOutcome::Infeasible);
        }
        t.expel_artificials()?;
    }
    if phase_one_only {
        return Ok(RawOutcome::Optimal {
            x: t.primal(),
            value: Rational::from_integer(BigInt::from(0)),
            duals: vec![Rational::from_integer(BigInt::from(0)); rows.len()],
        });
    }
    if !t.run(Phase::Two)? {
        return Ok(RawOutcome::Unbounded);
    }
    let value = -frac(&t.z2[t.ncols], &t.denom);
    Ok(RawOutcome::Optimal { x: t.primal(), value, duals: t.duals() })
}

/// Runs on `i128` and repeats on `BigInt` if any intermediate overflows.
pub(crate) fn solve_big(
    nstruct: usize,
    rows: &[IntRow<BigInt>],
    objective: &[BigInt],
    phase_one_only: bool,
) -> RawOutcome {
    let small = || -> Option<(Vec<IntRow<i128>>, Vec<i128>)> {
        let rows = rows
            .iter()
            .map(|r| {
                Some(IntRow {
                    coeffs: r.coeffs.iter().map(i128::from_bigint).collect::<Option<_>>()?,
                    rel: r.rel,
                    rhs: i128::from_bigint(&r.rhs)?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        let obj = objective.iter().map(i128::from_bigint).collect::<Option<_>>()?;
        Some((rows, obj))
    };
    if let Some((r, o)) = small() {
        if let Ok(out) = solve::<i128>(nstruct, &r, &o, phase_one_only) {
            return out;
        }
    }
    solve::<BigInt>(nstruct, rows, objective, phase_one_only).expect("BigInt never overflows")
}
