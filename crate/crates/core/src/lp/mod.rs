//! Exact linear programming and polyhedral vertex enumeration over the
//! rationals. Nothing in this module rounds.

mod bases;
mod dd;
mod dump;
mod simplex;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{integer_row, Rational};

pub use bases::enumerate_vertices_by_bases;
pub use dd::{extreme_rays, ConeError};
pub use dump::{parse_dump, write_dump};
pub(crate) use dd::extreme_rays_i128;
pub(crate) use simplex::{solve as solve_int, IntRow, RawOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        Self { coeffs, rel, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.rel.holds(&self.lhs(x), &self.rhs)
    }

    pub fn is_active(&self, x: &[Rational]) -> bool {
        self.lhs(x) == self.rhs
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).fold(Rational::zero(), |acc, (p, q)| acc + p * q)
}

fn check_rows(nvars: usize, rows: &[Constraint]) -> Result<()> {
    for (i, c) in rows.iter().enumerate() {
        if c.coeffs.len() != nvars {
            return Err(Error::InvalidParameter(format!(
                "constraint {i} has {} coefficients, expected {nvars}",
                c.coeffs.len()
            )));
        }
    }
    Ok(())
}

/// `sense objective . x` subject to the constraints. Variables are
/// nonnegative unless marked free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub nvars: usize,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        witness: Vec<Rational>,
        /// One multiplier per constraint; see [`LinearProgram::verify_dual`].
        dual: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpResult::Optimal { .. } => "optimal",
            LpResult::Infeasible => "infeasible",
            LpResult::Unbounded => "unbounded",
        }
    }
}

/// Integer standard form: free variables split in two, every row scaled to
/// a primitive integer row. `row_scale[i]` is the positive factor applied
/// to row `i`; `obj_scale` the factor applied to the (maximized) objective.
struct Standard {
    ncols: usize,
    rows: Vec<IntRow<BigInt>>,
    objective: Vec<BigInt>,
    row_scale: Vec<Rational>,
    obj_scale: Rational,
    columns: Vec<(usize, bool)>,
}

fn scale_of(row: &[Rational], ints: &[BigInt]) -> Rational {
    row.iter()
        .zip(ints)
        .find(|(q, _)| !q.is_zero())
        .map_or_else(Rational::one, |(q, v)| Rational::from_integer(v.clone()) / q)
}

impl LinearProgram {
    pub fn new(nvars: usize, sense: Sense, objective: Vec<Rational>) -> Self {
        Self { nvars, sense, objective, constraints: Vec::new(), free: vec![false; nvars] }
    }

    /// Feasibility problem with a zero objective.
    pub fn feasibility(nvars: usize) -> Self {
        Self::new(nvars, Sense::Maximize, vec![Rational::zero(); nvars])
    }

    pub fn constrain(mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
        self
    }

    pub fn free_var(mut self, j: usize) -> Self {
        self.free[j] = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.nvars || self.free.len() != self.nvars {
            return Err(Error::InvalidParameter(format!(
                "objective has {} coefficients, expected {}",
                self.objective.len(),
                self.nvars
            )));
        }
        check_rows(self.nvars, &self.constraints)
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.nvars
            && x.iter().zip(&self.free).all(|(v, &f)| f || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    fn standard(&self) -> Standard {
        let mut columns = Vec::new();
        for j in 0..self.nvars {
            columns.push((j, true));
            if self.free[j] {
                columns.push((j, false));
            }
        }
        let expand = |row: &[Rational]| -> Vec<Rational> {
            columns.iter().map(|&(j, pos)| if pos { row[j].clone() } else { -row[j].clone() }).collect()
        };
        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut row_scale = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut full = expand(&c.coeffs);
            full.push(c.rhs.clone());
            let ints = integer_row(&full);
            row_scale.push(scale_of(&full, &ints));
            let rhs = ints[ints.len() - 1].clone();
            rows.push(IntRow { coeffs: ints[..ints.len() - 1].to_vec(), rel: c.rel, rhs });
        }
        let mut obj = expand(&self.objective);
        if self.sense == Sense::Minimize {
            obj.iter_mut().for_each(|q| *q = -q.clone());
        }
        let objective = integer_row(&obj);
        let obj_scale = scale_of(&obj, &objective);
        Standard { ncols: columns.len(), rows, objective, row_scale, obj_scale, columns }
    }

    fn collapse(&self, st: &Standard, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.nvars];
        for (&(j, pos), v) in st.columns.iter().zip(x) {
            if pos {
                out[j] += v;
            } else {
                out[j] -= v;
            }
        }
        out
    }

    /// Exact optimum by two-phase simplex with Bland's rule.
    pub fn solve(&self) -> Result<LpResult> {
        self.validate()?;
        let st = self.standard();
        let out = simplex::solve_big(st.ncols, &st.rows, &st.objective, false);
        Ok(match out {
            RawOutcome::Infeasible => LpResult::Infeasible,
            RawOutcome::Unbounded => LpResult::Unbounded,
            RawOutcome::Optimal { x, duals, .. } => {
                let witness = self.collapse(&st, &x);
                let value = self.objective_at(&witness);
                let mut dual: Vec<Rational> =
                    duals.iter().zip(&st.row_scale).map(|(y, s)| y * s / &st.obj_scale).collect();
                if self.sense == Sense::Minimize {
                    dual.iter_mut().for_each(|y| *y = -y.clone());
                }
                LpResult::Optimal { value, witness, dual }
            }
        })
    }

    /// Phase-one verdict with a feasible point when one exists.
    pub fn feasible_point(&self) -> Result<Option<Vec<Rational>>> {
        self.validate()?;
        let st = self.standard();
        Ok(match simplex::solve_big(st.ncols, &st.rows, &st.objective, true) {
            RawOutcome::Optimal { x, .. } => Some(self.collapse(&st, &x)),
            _ => None,
        })
    }

    pub fn is_feasible(&self) -> Result<bool> {
        Ok(self.feasible_point()?.is_some())
    }

    /// Checks `dual` as an optimality certificate for `value`: sign
    /// conditions per relation, `A^T y` dominating the objective on
    /// nonnegative variables and matching it on free ones, and `b . y`
    /// equal to `value`. For minimization the inequalities reverse.
    pub fn verify_dual(&self, value: &Rational, dual: &[Rational]) -> bool {
        if dual.len() != self.constraints.len() {
            return false;
        }
        let flip = self.sense == Sense::Minimize;
        let signs_ok = self.constraints.iter().zip(dual).all(|(c, y)| {
            let y = if flip { -y.clone() } else { y.clone() };
            match c.rel {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            }
        });
        let cols_ok = (0..self.nvars).all(|j| {
            let aty = self.constraints.iter().zip(dual).fold(Rational::zero(), |acc, (c, y)| acc + &c.coeffs[j] * y);
            let c = &self.objective[j];
            if self.free[j] {
                aty == *c
            } else if flip {
                aty <= *c
            } else {
                aty >= *c
            }
        });
        let bty = self.constraints.iter().zip(dual).fold(Rational::zero(), |acc, (c, y)| acc + &c.rhs * y);
        signs_ok && cols_ok && bty == *value
    }
}

/// Solution set of a constraint system over free variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

/// Vertices and recession directions of a pointed polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticesAndRays {
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Self { dim, constraints: Vec::new() }
    }

    pub fn constrain(mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
        self
    }

    /// Adds `x_j >= 0` for every coordinate.
    pub fn nonnegative(mut self) -> Self {
        for j in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[j] = Rational::one();
            self.constraints.push(Constraint::new(e, Relation::Ge, Rational::zero()));
        }
        self
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// True when the constraints active at `x` have full rank.
    pub fn is_basic(&self, x: &[Rational]) -> bool {
        let active: Vec<Vec<Rational>> =
            self.constraints.iter().filter(|c| c.is_active(x)).map(|c| c.coeffs.clone()).collect();
        rank(active, self.dim) == self.dim
    }

    pub(crate) fn as_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::feasibility(self.dim);
        lp.constraints = self.constraints.clone();
        lp.free = vec![true; self.dim];
        lp
    }

    /// Double description on the homogenized cone `{(x, t) : b t - A x >= 0,
    /// t >= 0}`; generators with `t > 0` are vertices, those with `t = 0`
    /// recession rays.
    pub fn vertices_and_rays(&self) -> Result<VerticesAndRays> {
        check_rows(self.dim, &self.constraints)?;
        let d = self.dim + 1;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut hom = |a: &[Rational], b: &Rational, sign: i32| {
            let mut r: Vec<Rational> = a.iter().map(|q| q * Rational::from_integer(sign.into())).collect();
            r.push(-b * Rational::from_integer(sign.into()));
            rows.push(integer_row(&r));
        };
        for c in &self.constraints {
            match c.rel {
                Relation::Ge => hom(&c.coeffs, &c.rhs, 1),
                Relation::Le => hom(&c.coeffs, &c.rhs, -1),
                Relation::Eq => {
                    hom(&c.coeffs, &c.rhs, 1);
                    hom(&c.coeffs, &c.rhs, -1);
                }
            }
        }
        let mut t = vec![BigInt::zero(); d];
        t[d - 1] = BigInt::one();
        rows.push(t);
        let gens = match extreme_rays(&rows, d) {
            Ok(g) => g,
            Err(ConeError::NotPointed) => {
                return if self.as_program().is_feasible()? {
                    Err(Error::Unbounded)
                } else {
                    Ok(VerticesAndRays { vertices: Vec::new(), rays: Vec::new() })
                };
            }
        };
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for g in gens {
            let t = &g[d - 1];
            if t.is_zero() {
                rays.push(g[..d - 1].iter().map(|v| Rational::from_integer(v.clone())).collect());
            } else {
                vertices.push(g[..d - 1].iter().map(|v| Rational::new(v.clone(), t.clone())).collect());
            }
        }
        if vertices.is_empty() {
            rays.clear();
        }
        vertices.sort();
        vertices.dedup();
        rays.sort();
        Ok(VerticesAndRays { vertices, rays })
    }

    /// All extreme points, sorted and without duplicates. Fails on an
    /// unbounded polyhedron.
    pub fn enumerate_vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let vr = self.vertices_and_rays()?;
        if !vr.rays.is_empty() {
            return Err(Error::Unbounded);
        }
        Ok(vr.vertices)
    }
}

/// Rank of a rational matrix given as rows of length `dim`.
pub(crate) fn rank(mut rows: Vec<Vec<Rational>>, dim: usize) -> usize {
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves a square system exactly; `None` when singular.
pub(crate) fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                let pr = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
                let bc = b[c].clone();
                b[i] -= &f * bc;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_dump(self))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, rat_int};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    /// Objective `(3x1 - x2 - x3 - x4)/2` shared by the four-cycle
    /// subproblems.
    fn c4_objective() -> Vec<Rational> {
        vec![rat(3, 2), rat(-1, 2), rat(-1, 2), rat(-1, 2)]
    }

    trait Rows: Sized {
        fn dim(&self) -> usize;
        fn push(self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self;
    }
    impl Rows for LinearProgram {
        fn dim(&self) -> usize {
            self.nvars
        }
        fn push(self, c: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
            self.constrain(c, rel, rhs)
        }
    }
    impl Rows for Polytope {
        fn dim(&self) -> usize {
            self.dim
        }
        fn push(self, c: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
            self.constrain(c, rel, rhs)
        }
    }

    /// `x[order[0]] >= x[order[1]] >= ...`
    fn chain<T: Rows>(sys: T, order: &[usize]) -> T {
        let dim = sys.dim();
        order.windows(2).fold(sys, |s, w| {
            let mut r = vec![rat_int(0); dim];
            r[w[0]] = rat_int(1);
            r[w[1]] = rat_int(-1);
            s.push(r, Relation::Ge, rat_int(0))
        })
    }

    #[test]
    fn first_cycle_subproblem() {
        let lp = chain(LinearProgram::new(4, Sense::Maximize, c4_objective()), &[0, 1, 2, 3])
            .constrain(row(&[1, -3, 1, 1]), Relation::Le, rat_int(0))
            .constrain(row(&[2, 0, 0, -2]), Relation::Eq, rat_int(1));
        let res = lp.solve().unwrap();
        assert_eq!(res.value(), Some(&rat(2, 3)));
        let LpResult::Optimal { value, witness, dual } = res else { unreachable!() };
        assert!(lp.is_feasible_point(&witness));
        assert_eq!(lp.objective_at(&witness), value);
        assert!(lp.verify_dual(&value, &dual));
    }

    #[test]
    fn third_cycle_subproblem() {
        let lp = chain(LinearProgram::new(4, Sense::Maximize, c4_objective()), &[0, 1, 3, 2])
            .constrain(row(&[2, 0, -2, 0]), Relation::Eq, rat_int(1));
        let res = lp.solve().unwrap();
        assert_eq!(res.value(), Some(&rat(3, 4)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(1, Sense::Maximize, row(&[1]))
            .free_var(0)
            .constrain(row(&[1]), Relation::Le, rat_int(0))
            .constrain(row(&[1]), Relation::Ge, rat_int(1));
        assert_eq!(lp.solve().unwrap(), LpResult::Infeasible);
        assert!(!lp.is_feasible().unwrap());
        let lp = LinearProgram::new(1, Sense::Maximize, row(&[1])).constrain(row(&[1]), Relation::Ge, rat_int(1));
        assert_eq!(lp.solve().unwrap(), LpResult::Unbounded);
    }

    #[test]
    fn feasibility_interval() {
        let lp = LinearProgram::feasibility(1)
            .constrain(row(&[1]), Relation::Ge, rat_int(1))
            .constrain(row(&[1]), Relation::Le, rat_int(2));
        let x = lp.feasible_point().unwrap().unwrap();
        assert!(lp.is_feasible_point(&x));
    }

    #[test]
    fn minimize_with_free_variable() {
        // min x - y, x in [-2, 3], y <= 1 (y free) -> -2 - 1 = -3.
        let lp = LinearProgram::new(2, Sense::Minimize, row(&[1, -1]))
            .free_var(0)
            .free_var(1)
            .constrain(row(&[1, 0]), Relation::Ge, rat_int(-2))
            .constrain(row(&[1, 0]), Relation::Le, rat_int(3))
            .constrain(row(&[0, 1]), Relation::Le, rat_int(1));
        let LpResult::Optimal { value, witness, dual } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, rat_int(-3));
        assert_eq!(witness, vec![rat_int(-2), rat_int(1)]);
        assert!(lp.verify_dual(&value, &dual));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let lp = LinearProgram::new(2, Sense::Maximize, row(&[1, 1]))
            .constrain(row(&[1, 1]), Relation::Eq, rat_int(1))
            .constrain(row(&[2, 2]), Relation::Eq, rat_int(2))
            .constrain(row(&[1, 0]), Relation::Le, rat(1, 3));
        let LpResult::Optimal { value, dual, .. } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, rat_int(1));
        assert!(lp.verify_dual(&value, &dual));
    }

    #[test]
    fn unit_square_and_simplex_vertices() {
        let sq = Polytope::new(2)
            .nonnegative()
            .constrain(row(&[1, 0]), Relation::Le, rat_int(1))
            .constrain(row(&[0, 1]), Relation::Le, rat_int(1));
        let v = sq.enumerate_vertices().unwrap();
        assert_eq!(v, vec![row(&[0, 0]), row(&[0, 1]), row(&[1, 0]), row(&[1, 1])]);
        assert_eq!(enumerate_vertices_by_bases(&sq, 1000).unwrap(), v);
        let tri = Polytope::new(3).nonnegative().constrain(row(&[1, 1, 1]), Relation::Eq, rat_int(1));
        let v = tri.enumerate_vertices().unwrap();
        assert_eq!(v, vec![row(&[0, 0, 1]), row(&[0, 1, 0]), row(&[1, 0, 0])]);
        assert!(v.iter().all(|x| tri.is_basic(x)));
    }

    #[test]
    fn empty_and_unbounded_polyhedra() {
        let empty = Polytope::new(1).constrain(row(&[1]), Relation::Ge, rat_int(2)).constrain(
            row(&[1]),
            Relation::Le,
            rat_int(1),
        );
        assert!(empty.enumerate_vertices().unwrap().is_empty());
        let ray = Polytope::new(1).constrain(row(&[1]), Relation::Ge, rat_int(2));
        assert!(matches!(ray.enumerate_vertices(), Err(Error::Unbounded)));
        let line = Polytope::new(2).constrain(row(&[1, 0]), Relation::Eq, rat_int(0));
        assert!(matches!(line.enumerate_vertices(), Err(Error::Unbounded)));
    }

    /// Second four-cycle subproblem: `x1 >= x2 >= x3 >= x4 >= 0`,
    /// `x1 + x3 + x4 >= 3 x2`, `2x1 = 1 + 2x4`. Unbounded along
    /// `(1/2 + t, t, t, t)`; pinning the smallest value at zero bounds it
    /// and a vertex reaches 3/4.
    #[test]
    fn second_cycle_region_vertex() {
        let base = chain(Polytope::new(4), &[0, 1, 2, 3]);
        let base = base
            .constrain(row(&[0, 0, 0, 1]), Relation::Ge, rat_int(0))
            .constrain(row(&[1, -3, 1, 1]), Relation::Ge, rat_int(0))
            .constrain(row(&[2, 0, 0, -2]), Relation::Eq, rat_int(1));
        let vr = base.vertices_and_rays().unwrap();
        assert_eq!(vr.rays, vec![row(&[1, 1, 1, 1])]);
        let pinned = base.clone().constrain(row(&[0, 0, 0, 1]), Relation::Eq, rat_int(0));
        let verts = pinned.enumerate_vertices().unwrap();
        let obj = c4_objective();
        let best = verts.iter().map(|v| dot(&obj, v)).max().unwrap();
        assert_eq!(best, rat(3, 4));
        assert!(verts.contains(&vec![rat(1, 2), rat_int(0), rat_int(0), rat_int(0)]));
        assert_eq!(enumerate_vertices_by_bases(&pinned, 10_000).unwrap(), verts);
    }

    #[test]
    fn chain_builder_on_polytope() {
        let p = chain(Polytope::new(2), &[0, 1]).nonnegative().constrain(row(&[1, 0]), Relation::Le, rat_int(1));
        assert_eq!(p.enumerate_vertices().unwrap(), vec![row(&[0, 0]), row(&[1, 0]), row(&[1, 1])]);
    }
}
