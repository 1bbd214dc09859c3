//! Phase-one simplex over exact rationals.
//!
//! `lp_feasible` decides whether `{x : A x <= b, E x = c, x_j >= 0 for flagged j}`
//! is empty. It pivots with Bland's rule (lowest index enters, lowest basic
//! index leaves on ties), so it terminates and is deterministic. When the
//! system is empty the phase-one duals are turned into a Farkas certificate.

use num_traits::{One, Signed, Zero};

use super::rational::{vec_ops, RVector, Rational};
use crate::error::{Error, Result};

/// One constraint row `coeffs · x (<= | =) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: RVector,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    dim: usize,
    ineqs: Vec<Row>,
    eqs: Vec<Row>,
    nonneg: Vec<bool>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
            nonneg: vec![false; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[Row] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Row] {
        &self.eqs
    }

    pub fn is_nonnegative(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    /// Adds `coeffs · x <= rhs`.
    pub fn add_le(&mut self, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.ineqs.push(Row { coeffs, rhs });
        self
    }

    /// Adds `coeffs · x = rhs`.
    pub fn add_eq(&mut self, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.eqs.push(Row { coeffs, rhs });
        self
    }

    /// Declares `x_var >= 0` as a sign bound handled natively by the solver.
    pub fn set_nonnegative(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nonneg.len() != self.dim {
            return Err(Error::input("sign-bound vector does not match dimension"));
        }
        for (kind, rows) in [("inequality", &self.ineqs), ("equality", &self.eqs)] {
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.coeffs.len() != self.dim) {
                return Err(Error::input(format!(
                    "{kind} row {i} has length {}, system dimension is {}",
                    r.coeffs.len(),
                    self.dim
                )));
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every row and sign bound exactly.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.ineqs.iter().all(|r| vec_ops::dot(&r.coeffs, x) <= r.rhs)
            && self.eqs.iter().all(|r| vec_ops::dot(&r.coeffs, x) == r.rhs)
            && self.nonneg.iter().zip(x).all(|(&nn, v)| !nn || !v.is_negative())
    }
}

/// Multipliers proving a [`LinearSystem`] empty.
///
/// With `g = Σ ineq_i·a_i + Σ eq_j·e_j` and `c = Σ ineq_i·b_i + Σ eq_j·c_j`,
/// a valid certificate has `ineq >= 0`, `g_k = 0` on free variables,
/// `g_k >= 0` on sign-bounded variables and `c < 0`; then `0 <= g·x <= c < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Farkas {
    pub ineq: RVector,
    pub eq: RVector,
}

impl Farkas {
    /// The combined row `(g, c)`.
    pub fn combination(&self, sys: &LinearSystem) -> (RVector, Rational) {
        let mut g = vec_ops::zeros(sys.dim);
        let mut c = Rational::zero();
        let rows = sys
            .ineqs
            .iter()
            .zip(&self.ineq)
            .chain(sys.eqs.iter().zip(&self.eq));
        for (row, m) in rows {
            if m.is_zero() {
                continue;
            }
            for (gk, a) in g.iter_mut().zip(&row.coeffs) {
                *gk += m * a;
            }
            c += m * &row.rhs;
        }
        (g, c)
    }

    /// Exact check that this certificate refutes `sys`.
    pub fn certifies(&self, sys: &LinearSystem) -> bool {
        if self.ineq.len() != sys.ineqs.len() || self.eq.len() != sys.eqs.len() {
            return false;
        }
        if self.ineq.iter().any(|m| m.is_negative()) {
            return false;
        }
        let (g, c) = self.combination(sys);
        let g_ok = g
            .iter()
            .zip(&sys.nonneg)
            .all(|(gk, &nn)| if nn { !gk.is_negative() } else { gk.is_zero() });
        g_ok && c.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(RVector),
    Infeasible(Farkas),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RVector> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible(_) => None,
        }
    }
}

/// Decides feasibility of `sys` exactly.
pub fn lp_feasible(sys: &LinearSystem) -> Result<Feasibility> {
    sys.validate()?;
    let mut tab = Tableau::build(sys);
    tab.run();
    let out = tab.extract(sys);
    debug_assert!(match &out {
        Feasibility::Feasible(w) => sys.is_satisfied_by(w),
        Feasibility::Infeasible(f) => f.certifies(sys),
    });
    Ok(out)
}

/// Where a structural variable lives in the tableau.
enum VarCols {
    NonNeg(usize),
    Split(usize, usize),
}

struct Tableau {
    // m rows over `ncols` columns, right-hand side in `rhs`.
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the phase-one objective.
    reduced: Vec<Rational>,
    objective: Rational,
    is_artificial: Vec<bool>,
    /// Column holding `B^{-1} e_r` for each row (its initial unit column).
    unit_col: Vec<usize>,
    /// +1 or -1 applied to each original row to make its rhs nonnegative.
    flip: Vec<bool>,
    vars: Vec<VarCols>,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Self {
        let m_le = sys.ineqs.len();
        let m = m_le + sys.eqs.len();

        let mut vars = Vec::with_capacity(sys.dim);
        let mut ncols = 0;
        for &nn in &sys.nonneg {
            if nn {
                vars.push(VarCols::NonNeg(ncols));
                ncols += 1;
            } else {
                vars.push(VarCols::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
        let slack0 = ncols;
        ncols += m_le;

        let rows: Vec<&Row> = sys.ineqs.iter().chain(&sys.eqs).collect();
        let flip: Vec<bool> = rows.iter().map(|r| r.rhs.is_negative()).collect();
        let needs_art: Vec<bool> = (0..m).map(|r| r >= m_le || flip[r]).collect();
        let art0 = ncols;
        ncols += needs_art.iter().filter(|&&x| x).count();

        let mut a = vec![vec![Rational::zero(); ncols]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut basis = vec![0; m];
        let mut unit_col = vec![0; m];
        let mut is_artificial = vec![false; ncols];
        let mut next_art = art0;
        for (r, row) in rows.iter().enumerate() {
            let sign = if flip[r] {
                -Rational::one()
            } else {
                Rational::one()
            };
            for (j, coef) in row.coeffs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let v = coef * &sign;
                match vars[j] {
                    VarCols::NonNeg(c) => a[r][c] = v,
                    VarCols::Split(p, q) => {
                        a[r][q] = -v.clone();
                        a[r][p] = v;
                    }
                }
            }
            if r < m_le {
                a[r][slack0 + r] = sign.clone();
            }
            rhs.push(&row.rhs * &sign);
            if needs_art[r] {
                a[r][next_art] = Rational::one();
                is_artificial[next_art] = true;
                basis[r] = next_art;
                unit_col[r] = next_art;
                next_art += 1;
            } else {
                basis[r] = slack0 + r;
                unit_col[r] = slack0 + r;
            }
        }

        // Phase-one cost is one on artificials; reduced cost d_j = c_j - Σ_{r artificial-basic} a_rj.
        let mut reduced: Vec<Rational> = is_artificial
            .iter()
            .map(|&art| if art { Rational::one() } else { Rational::zero() })
            .collect();
        let mut objective = Rational::zero();
        for r in 0..m {
            if is_artificial[basis[r]] {
                for (d, x) in reduced.iter_mut().zip(&a[r]) {
                    if !x.is_zero() {
                        *d -= x;
                    }
                }
                objective += &rhs[r];
            }
        }

        Self {
            a,
            rhs,
            basis,
            reduced,
            objective,
            is_artificial,
            unit_col,
            flip,
            vars,
        }
    }

    fn run(&mut self) {
        loop {
            if self.objective.is_zero() {
                return;
            }
            let Some(enter) = self.reduced.iter().position(|d| d.is_negative()) else {
                return;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                let coef = &self.a[r][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / coef;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            // Phase one is bounded below by zero, so some row must block.
            let (row, _) = leave.expect("phase-one simplex cannot be unbounded");
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for x in self.a[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let prow = self.a[row].clone();
        let prhs = self.rhs[row].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();

        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let f = self.a[r][col].clone();
            for &j in &nz {
                let delta = &f * &prow[j];
                self.a[r][j] -= delta;
            }
            self.rhs[r] -= &f * &prhs;
        }
        if !self.reduced[col].is_zero() {
            let f = self.reduced[col].clone();
            for &j in &nz {
                let delta = &f * &prow[j];
                self.reduced[j] -= delta;
            }
            self.objective += &f * &prhs;
        }
        self.basis[row] = col;
    }

    fn extract(&self, sys: &LinearSystem) -> Feasibility {
        if self.objective.is_zero() {
            let mut value = vec![Rational::zero(); self.reduced.len()];
            for (r, &b) in self.basis.iter().enumerate() {
                value[b] = self.rhs[r].clone();
            }
            let x = self
                .vars
                .iter()
                .map(|v| match *v {
                    VarCols::NonNeg(c) => value[c].clone(),
                    VarCols::Split(p, q) => &value[p] - &value[q],
                })
                .collect();
            return Feasibility::Feasible(x);
        }

        // Phase-one duals u = c_B B^{-1}; column unit_col[r] of the current tableau is B^{-1} e_r.
        let m = self.a.len();
        let mut multipliers = Vec::with_capacity(m);
        for r in 0..m {
            let mut u = Rational::zero();
            for (i, &b) in self.basis.iter().enumerate() {
                if self.is_artificial[b] {
                    u += &self.a[i][self.unit_col[r]];
                }
            }
            // Undo the row flip, then negate: the certificate is -y.
            let y = if self.flip[r] { -u } else { u };
            multipliers.push(-y);
        }
        let eq = multipliers.split_off(sys.ineqs.len());
        Feasibility::Infeasible(Farkas {
            ineq: multipliers,
            eq,
        })
    }
}
