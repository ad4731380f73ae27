//! Exact rational linear programming.
//!
//! A dense two-phase simplex over arbitrary-precision rationals. Pivoting
//! follows Bland's rule (lowest eligible index enters, ties on the ratio test
//! break toward the lowest basis index), which excludes cycling and makes
//! every run reproducible bit for bit. Free variables are split into
//! positive/negative parts; inequalities get slack columns.
//!
//! Infeasible and unbounded are reportable outcomes, not errors.

use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Rat, Vec<Rat>)> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

/// A linear program over `nvars` variables, free by default.
#[derive(Debug, Clone)]
pub struct LpProblem {
    nvars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<(Vec<Rat>, Rel, Rat)>,
}

impl LpProblem {
    pub fn new(nvars: usize) -> Self {
        LpProblem {
            nvars,
            nonneg: vec![false; nvars],
            constraints: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn require_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn require_nonneg_range(&mut self, vars: std::ops::Range<usize>) {
        for v in vars {
            self.nonneg[v] = true;
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        assert_eq!(coeffs.len(), self.nvars, "constraint arity mismatch");
        self.constraints.push((coeffs, rel, rhs));
    }

    /// Fixes `var = value`.
    pub fn fix(&mut self, var: usize, value: Rat) {
        let mut coeffs = vec![Rat::zero(); self.nvars];
        coeffs[var] = Rat::one();
        self.constrain(coeffs, Rel::Eq, value);
    }

    pub fn minimize(&self, objective: &[Rat]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars, "objective arity mismatch");
        self.solve_impl(objective)
    }

    pub fn maximize(&self, objective: &[Rat]) -> LpOutcome {
        let neg: Vec<Rat> = objective.iter().map(|c| -c.clone()).collect();
        match self.solve_impl(&neg) {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
                value: -value,
                point,
            },
            other => other,
        }
    }

    /// Any feasible point, via phase 1 alone.
    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        let zero = vec![Rat::zero(); self.nvars];
        self.minimize(&zero).optimal().map(|(_, p)| p)
    }

    /// Minimizes the objective, then refines to the lexicographically least
    /// optimal point (coordinate by coordinate). Canonical regardless of
    /// pivot order; used wherever a deterministic witness is promised.
    pub fn lex_min_optimal_point(&self, objective: &[Rat]) -> Option<(Rat, Vec<Rat>)> {
        let (value, _) = self.minimize(objective).optimal()?;
        let mut work = self.clone();
        work.constrain(objective.to_vec(), Rel::Eq, value.clone());
        let mut point = vec![Rat::zero(); self.nvars];
        for var in 0..self.nvars {
            let mut unit = vec![Rat::zero(); self.nvars];
            unit[var] = Rat::one();
            let (coord, _) = work
                .minimize(&unit)
                .optimal()
                .expect("restriction of a feasible program stays feasible");
            work.fix(var, coord.clone());
            point[var] = coord;
        }
        Some((value, point))
    }

    fn solve_impl(&self, objective: &[Rat]) -> LpOutcome {
        let std = StandardForm::build(self, objective);
        std.solve()
    }
}

/// min c·y, A y = b, y ≥ 0, b ≥ 0.
struct StandardForm {
    ncols: usize,
    cost: Vec<Rat>,
    rows: Vec<Vec<Rat>>, // coefficient rows
    rhs: Vec<Rat>,
    /// Per original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Rows whose slack column survives normalization with coefficient +1:
    /// the slack can seed the basis, sparing an artificial.
    slack_basis: Vec<Option<usize>>,
}

impl StandardForm {
    fn build(lp: &LpProblem, objective: &[Rat]) -> StandardForm {
        let mut var_cols = Vec::with_capacity(lp.nvars);
        let mut ncols = 0;
        for &nn in &lp.nonneg {
            if nn {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let nslack = lp
            .constraints
            .iter()
            .filter(|(_, rel, _)| *rel != Rel::Eq)
            .count();
        let total = ncols + nslack;

        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut rhs = Vec::with_capacity(lp.constraints.len());
        let mut slack_basis = Vec::with_capacity(lp.constraints.len());
        let mut slack_at = ncols;
        for (coeffs, rel, b) in &lp.constraints {
            let mut row = vec![Rat::zero(); total];
            for (i, c) in coeffs.iter().enumerate() {
                let (p, n) = var_cols[i];
                row[p] = c.clone();
                if let Some(n) = n {
                    row[n] = -c.clone();
                }
            }
            let negate = b.is_negative();
            let mut slack_col = None;
            match rel {
                Rel::Le | Rel::Ge => {
                    let one = if *rel == Rel::Le {
                        Rat::one()
                    } else {
                        -Rat::one()
                    };
                    row[slack_at] = one;
                    // After sign normalization the slack coefficient is +1
                    // exactly when (Le, b ≥ 0) or (Ge, b < 0).
                    let positive_after = (*rel == Rel::Le) != negate;
                    if positive_after {
                        slack_col = Some(slack_at);
                    }
                    slack_at += 1;
                }
                Rel::Eq => {}
            }
            let mut b = b.clone();
            if negate {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
            slack_basis.push(slack_col);
        }

        let mut cost = vec![Rat::zero(); total];
        for (i, c) in objective.iter().enumerate() {
            let (p, n) = var_cols[i];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }

        StandardForm {
            ncols: total,
            cost,
            rows,
            rhs,
            var_cols,
            slack_basis,
        }
    }

    fn solve(self) -> LpOutcome {
        let m = self.rows.len();
        let n = self.ncols;

        // Phase 1: rows with a +1 slack start basic on that slack; only the
        // remaining rows get artificial columns.
        let art_rows: Vec<usize> = (0..m).filter(|&i| self.slack_basis[i].is_none()).collect();
        let na = art_rows.len();
        let mut t = Tableau {
            ncols: n + na,
            rows: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
        };
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            r.resize(n + na, Rat::zero());
            let basis_col = match self.slack_basis[i] {
                Some(slack) => slack,
                None => {
                    let art = n + art_rows.iter().position(|&x| x == i).unwrap();
                    r[art] = Rat::one();
                    art
                }
            };
            r.push(self.rhs[i].clone());
            t.rows.push(r);
            t.basis.push(basis_col);
        }

        if na > 0 {
            let mut phase1 = vec![Rat::zero(); n + na];
            for c in phase1.iter_mut().skip(n) {
                *c = Rat::one();
            }
            match t.run(&phase1, n + na) {
                SimplexEnd::Optimal(value) => {
                    if !value.is_zero() {
                        return LpOutcome::Infeasible;
                    }
                }
                SimplexEnd::Unbounded => unreachable!("phase-1 objective is bounded below by 0"),
            }
            t.evict_artificials(n);
        }

        // Phase 2 over real columns only.
        match t.run(&self.cost, n) {
            SimplexEnd::Optimal(value) => {
                let y = t.solution(n);
                let point = self
                    .var_cols
                    .iter()
                    .map(|&(p, neg)| match neg {
                        Some(nc) => &y[p] - &y[nc],
                        None => y[p].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { value, point }
            }
            SimplexEnd::Unbounded => LpOutcome::Unbounded,
        }
    }
}

enum SimplexEnd {
    Optimal(Rat),
    Unbounded,
}

struct Tableau {
    ncols: usize,
    rows: Vec<Vec<Rat>>, // each row has ncols coefficients then rhs
    basis: Vec<usize>,
}

impl Tableau {
    /// Runs Bland-rule simplex minimizing `objective` over columns `< allowed`.
    fn run(&mut self, objective: &[Rat], allowed: usize) -> SimplexEnd {
        loop {
            let cost = self.reduced_costs(objective);
            let entering = (0..allowed).find(|&j| cost[j].is_negative());
            let Some(j) = entering else {
                return SimplexEnd::Optimal(self.objective_value(objective));
            };
            // Ratio test: smallest rhs/coeff over positive coefficients;
            // ties resolved toward the smallest basis variable index.
            let mut best: Option<(Rat, usize, usize)> = None; // (ratio, basis var, row)
            for r in 0..self.rows.len() {
                let coeff = &self.rows[r][j];
                if coeff.is_positive() {
                    let ratio = &self.rows[r][self.ncols] / coeff;
                    let key = (ratio, self.basis[r]);
                    match &best {
                        Some((br, bv, _)) if (key.0.clone(), key.1) >= (br.clone(), *bv) => {}
                        _ => best = Some((key.0, key.1, r)),
                    }
                }
            }
            let Some((_, _, r)) = best else {
                return SimplexEnd::Unbounded;
            };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for k in 0..=self.ncols {
                let delta = &f * &self.rows[r][k];
                self.rows[i][k] = &self.rows[i][k] - delta;
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, objective: &[Rat]) -> Vec<Rat> {
        let mut cost = objective.to_vec();
        cost.resize(self.ncols, Rat::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let f = cost[b].clone();
                for k in 0..self.ncols {
                    let delta = &f * &self.rows[r][k];
                    cost[k] = &cost[k] - delta;
                }
            }
        }
        cost
    }

    fn objective_value(&self, objective: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if b < objective.len() && !objective[b].is_zero() {
                total += &objective[b] * &self.rows[r][self.ncols];
            }
        }
        total
    }

    /// Pivots artificial columns (index ≥ `n`) out of the basis; rows whose
    /// real coefficients are all zero are redundant and dropped. Artificial
    /// columns stay in the tableau but are barred from re-entering because
    /// phase 2 runs with `allowed = n`.
    fn evict_artificials(&mut self, n: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= n {
                if let Some(c) = (0..n).find(|&c| !self.rows[r][c].is_zero()) {
                    self.pivot(r, c);
                } else {
                    self.rows.remove(r);
                    self.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
    }

    fn solution(&self, nreal: usize) -> Vec<Rat> {
        let mut y = vec![Rat::zero(); nreal.max(self.ncols)];
        for (r, &b) in self.basis.iter().enumerate() {
            y[b] = self.rows[r][self.ncols].clone();
        }
        y
    }
}
