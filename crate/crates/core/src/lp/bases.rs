//! Vertex enumeration by exhaustive basis search: every choice of `dim`
//! constraints taken as equalities, solved exactly, kept when feasible.
//! Independent of the double description code and used to cross-check it.

use super::{rank, solve_square, LinearProgram, Polytope, Relation, Sense};
use crate::error::{Error, Result};
use crate::number::Rational;
use num_traits::{One, Zero};

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Extreme points of a bounded polyhedron, sorted and deduplicated.
/// Fails when more than `budget` bases would have to be examined or when
/// the polyhedron is unbounded.
pub fn enumerate_vertices_by_bases(p: &Polytope, budget: u128) -> Result<Vec<Vec<Rational>>> {
    let d = p.dim;
    let eqs: Vec<usize> = (0..p.constraints.len()).filter(|&i| p.constraints[i].rel == Relation::Eq).collect();
    let ineqs: Vec<usize> = (0..p.constraints.len()).filter(|&i| p.constraints[i].rel != Relation::Eq).collect();
    // Equalities are active everywhere: an independent subset of them sits
    // in every basis and the full system still filters feasibility.
    let mut fixed: Vec<usize> = Vec::new();
    for &i in &eqs {
        let mut trial: Vec<Vec<Rational>> = fixed.iter().map(|&k| p.constraints[k].coeffs.clone()).collect();
        trial.push(p.constraints[i].coeffs.clone());
        if rank(trial, d) > fixed.len() {
            fixed.push(i);
        }
    }
    let need = d - fixed.len();
    let count = binomial(ineqs.len(), need);
    if count > budget {
        return Err(Error::Budget(format!("{count} bases exceed the budget of {budget}")));
    }
    check_bounded(p)?;
    if need > ineqs.len() {
        return Ok(Vec::new());
    }

    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..need).collect();
    loop {
        {
            let rows: Vec<usize> = fixed.iter().copied().chain(pick.iter().map(|&k| ineqs[k])).collect();
            let a = rows.iter().map(|&i| p.constraints[i].coeffs.clone()).collect();
            let b = rows.iter().map(|&i| p.constraints[i].rhs.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if p.contains(&x) {
                    out.push(x);
                }
            }
        }
        // next combination
        let mut k = need;
        loop {
            if k == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            k -= 1;
            if pick[k] < ineqs.len() - need + k {
                pick[k] += 1;
                for j in k + 1..need {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Maximizes and minimizes every coordinate.
fn check_bounded(p: &Polytope) -> Result<()> {
    for j in 0..p.dim {
        for sense in [Sense::Maximize, Sense::Minimize] {
            let mut obj = vec![Rational::zero(); p.dim];
            obj[j] = Rational::one();
            let mut lp = LinearProgram::new(p.dim, sense, obj);
            lp.constraints = p.constraints.clone();
            lp.free = vec![true; p.dim];
            match lp.solve()? {
                super::LpResult::Unbounded => return Err(Error::Unbounded),
                super::LpResult::Infeasible => return Ok(()),
                _ => {}
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat_int;

    #[test]
    fn budget_is_enforced() {
        let p = Polytope::new(3).nonnegative().constrain(vec![rat_int(1); 3], Relation::Le, rat_int(1));
        assert!(matches!(enumerate_vertices_by_bases(&p, 2), Err(Error::Budget(_))));
        assert_eq!(enumerate_vertices_by_bases(&p, 4).unwrap().len(), 4);
    }

    #[test]
    fn counts_bases() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }
}
