//! Systems of linear inequalities, strict and non-strict, with exact
//! feasibility decisions and checkable certificates.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{parse_relation, ExprError};
use super::simplex::{maximize, Outcome};
use super::rational_serde;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("certificate shape does not match system `{0}`")]
    ShapeMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot parse row `{row}`: {source}")]
    Parse { row: String, source: ExprError },
    #[error("solver disagreement on `{0}`")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        self == Relation::Lt
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    #[serde(with = "rational_serde::option")]
    pub lower: Option<BigRational>,
    #[serde(with = "rational_serde::option")]
    pub upper: Option<BigRational>,
}

impl Variable {
    pub fn nonnegative(name: &str) -> Self {
        Self { name: name.to_string(), lower: Some(BigRational::zero()), upper: None }
    }

    pub fn free(name: &str) -> Self {
        Self { name: name.to_string(), lower: None, upper: None }
    }
}

/// `Σ terms · x  (≤ | <)  constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    #[serde(with = "rational_serde::map")]
    pub terms: BTreeMap<String, BigRational>,
    pub relation: Relation,
    #[serde(with = "rational_serde::single")]
    pub constant: BigRational,
    pub provenance: String,
}

impl Inequality {
    pub fn lhs(&self, x: &BTreeMap<String, BigRational>) -> BigRational {
        self.terms
            .iter()
            .map(|(k, v)| v * x.get(k).cloned().unwrap_or_else(BigRational::zero))
            .sum()
    }

    pub fn holds(&self, x: &BTreeMap<String, BigRational>) -> bool {
        let l = self.lhs(x);
        match self.relation {
            Relation::Le => l <= self.constant,
            Relation::Lt => l < self.constant,
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = super::expr::LinExpr { terms: self.terms.clone(), constant: BigRational::zero() };
        write!(f, "{e} {} {}", self.relation, self.constant)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub name: String,
    pub variables: Vec<Variable>,
    pub inequalities: Vec<Inequality>,
    pub expected: Option<Expectation>,
}

impl LinearSystem {
    pub fn new(name: &str, variables: Vec<Variable>) -> Self {
        Self { name: name.to_string(), variables, inequalities: Vec::new(), expected: None }
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == var)
    }

    /// Adds the rows of `text` (one per `min` argument). Labels get a
    /// `.k` suffix when `min` expands to several rows.
    pub fn push_text(&mut self, label: &str, text: &str, provenance: &str) -> Result<(), LpError> {
        let rows = parse_relation(text).map_err(|source| LpError::Parse { row: text.to_string(), source })?;
        let many = rows.len() > 1;
        for (k, (expr, strict)) in rows.into_iter().enumerate() {
            if let Some(bad) = expr.terms.keys().find(|v| self.index_of(v).is_none()) {
                return Err(LpError::UnknownVariable(bad.clone()));
            }
            self.inequalities.push(Inequality {
                label: if many { format!("{label}.{}", k + 1) } else { label.to_string() },
                terms: expr.terms,
                relation: if strict { Relation::Lt } else { Relation::Le },
                constant: -expr.constant,
                provenance: provenance.to_string(),
            });
        }
        Ok(())
    }

    /// Removes rows whose label is `label` or starts with `label.`.
    pub fn drop_rows(&mut self, label: &str) -> usize {
        let before = self.inequalities.len();
        let dotted = format!("{label}.");
        self.inequalities.retain(|r| r.label != label && !r.label.starts_with(&dotted));
        before - self.inequalities.len()
    }

    pub fn has_row(&self, label: &str) -> bool {
        let dotted = format!("{label}.");
        self.inequalities.iter().any(|r| r.label == label || r.label.starts_with(&dotted))
    }

    /// Every constraint as `(coefficients, constant, strict)`: inequalities
    /// first, then `−x ≤ −lower` and `x ≤ upper` for each variable in order.
    fn dense_rows(&self) -> Vec<(Vec<BigRational>, BigRational, bool)> {
        let n = self.variables.len();
        let mut out = Vec::new();
        for ineq in &self.inequalities {
            let mut a = vec![BigRational::zero(); n];
            for (k, v) in &ineq.terms {
                if let Some(j) = self.index_of(k) {
                    a[j] += v;
                }
            }
            out.push((a, ineq.constant.clone(), ineq.relation.is_strict()));
        }
        for (j, var) in self.variables.iter().enumerate() {
            if let Some(l) = &var.lower {
                let mut a = vec![BigRational::zero(); n];
                a[j] = -BigRational::one();
                out.push((a, -l, false));
            }
            if let Some(u) = &var.upper {
                let mut a = vec![BigRational::zero(); n];
                a[j] = BigRational::one();
                out.push((a, u.clone(), false));
            }
        }
        out
    }
}

/// Nonnegative multipliers whose combination of the rows reads `0 < 0` or
/// `0 ≤ c` with `c < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multipliers {
    #[serde(with = "rational_serde::vec")]
    pub inequalities: Vec<BigRational>,
    /// One per variable; zero when the variable has no such bound.
    #[serde(with = "rational_serde::vec")]
    pub lower: Vec<BigRational>,
    #[serde(with = "rational_serde::vec")]
    pub upper: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Feasible {
        #[serde(with = "rational_serde::map")]
        witness: BTreeMap<String, BigRational>,
    },
    Infeasible(Multipliers),
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible { .. })
    }

    /// Labels of the inequalities with positive multipliers.
    pub fn support<'a>(&self, system: &'a LinearSystem) -> Vec<&'a str> {
        match self {
            Certificate::Feasible { .. } => Vec::new(),
            Certificate::Infeasible(m) => system
                .inequalities
                .iter()
                .zip(&m.inequalities)
                .filter(|(_, y)| y.is_positive())
                .map(|(r, _)| r.label.as_str())
                .collect(),
        }
    }
}

/// Re-checks a certificate against `system` without using the solver.
pub fn check_certificate(system: &LinearSystem, cert: &Certificate) -> Result<bool, LpError> {
    let shape = || LpError::ShapeMismatch(system.name.clone());
    match cert {
        Certificate::Feasible { witness } => {
            if witness.len() != system.variables.len() || system.variables.iter().any(|v| !witness.contains_key(&v.name)) {
                return Err(shape());
            }
            let bounds_ok = system.variables.iter().all(|v| {
                let x = &witness[&v.name];
                v.lower.as_ref().is_none_or(|l| x >= l) && v.upper.as_ref().is_none_or(|u| x <= u)
            });
            Ok(bounds_ok && system.inequalities.iter().all(|r| r.holds(witness)))
        }
        Certificate::Infeasible(m) => {
            let n = system.variables.len();
            if m.inequalities.len() != system.inequalities.len() || m.lower.len() != n || m.upper.len() != n {
                return Err(shape());
            }
            let all = m.inequalities.iter().chain(&m.lower).chain(&m.upper);
            if all.clone().any(|y| y.is_negative()) {
                return Ok(false);
            }
            let mut combo = vec![BigRational::zero(); n];
            let mut constant = BigRational::zero();
            let mut strict_used = false;
            for (row, y) in system.inequalities.iter().zip(&m.inequalities) {
                if y.is_zero() {
                    continue;
                }
                for (k, v) in &row.terms {
                    let j = system.index_of(k).ok_or_else(|| LpError::UnknownVariable(k.clone()))?;
                    combo[j] += y * v;
                }
                constant += y * &row.constant;
                strict_used |= row.relation.is_strict();
            }
            for (j, var) in system.variables.iter().enumerate() {
                if !m.lower[j].is_zero() {
                    let Some(l) = &var.lower else { return Ok(false) };
                    combo[j] -= &m.lower[j];
                    constant -= &m.lower[j] * l;
                }
                if !m.upper[j].is_zero() {
                    let Some(u) = &var.upper else { return Ok(false) };
                    combo[j] += &m.upper[j];
                    constant += &m.upper[j] * u;
                }
            }
            if combo.iter().any(|v| !v.is_zero()) {
                return Ok(false);
            }
            Ok(constant.is_negative() || (strict_used && constant.is_zero()))
        }
    }
}

/// Decides feasibility exactly and returns a certificate that has already
/// passed [`check_certificate`].
pub fn solve_feasibility(system: &LinearSystem) -> Result<Certificate, LpError> {
    let cert = match max_margin(system) {
        Some(witness) => Certificate::Feasible { witness },
        None => Certificate::Infeasible(farkas(system).ok_or_else(|| LpError::Internal(system.name.clone()))?),
    };
    if check_certificate(system, &cert)? {
        Ok(cert)
    } else {
        Err(LpError::Internal(system.name.clone()))
    }
}

/// Maximizes a margin `τ ≤ 1` added to every strict row. Returns a point
/// when the optimum is positive.
fn max_margin(system: &LinearSystem) -> Option<BTreeMap<String, BigRational>> {
    let n = system.variables.len();
    // column layout: per variable one column (shifted by its lower bound) or
    // two (free split), then τ, then one slack per row
    let mut cols: Vec<(usize, bool)> = Vec::new();
    let mut col_of = Vec::with_capacity(n);
    for (j, v) in system.variables.iter().enumerate() {
        col_of.push(cols.len());
        cols.push((j, true));
        if v.lower.is_none() {
            cols.push((j, false));
        }
    }
    let tau = cols.len();
    let shift: Vec<BigRational> =
        system.variables.iter().map(|v| v.lower.clone().unwrap_or_else(BigRational::zero)).collect();

    let mut rows: Vec<(Vec<BigRational>, BigRational, bool)> = Vec::new();
    for ineq in &system.inequalities {
        let mut a = vec![BigRational::zero(); tau + 1];
        let mut b = ineq.constant.clone();
        for (k, v) in &ineq.terms {
            let j = system.index_of(k)?;
            a[col_of[j]] += v;
            if system.variables[j].lower.is_none() {
                a[col_of[j] + 1] -= v;
            }
            b -= v * &shift[j];
        }
        rows.push((a, b, ineq.relation.is_strict()));
    }
    for (j, v) in system.variables.iter().enumerate() {
        if let Some(u) = &v.upper {
            let mut a = vec![BigRational::zero(); tau + 1];
            a[col_of[j]] = BigRational::one();
            if v.lower.is_none() {
                a[col_of[j] + 1] = -BigRational::one();
            }
            rows.push((a, u - &shift[j], false));
        }
    }
    let mut a = vec![BigRational::zero(); tau + 1];
    a[tau] = BigRational::one();
    rows.push((a, BigRational::one(), false));

    let m = rows.len();
    let width = tau + 1 + m;
    let mut mat = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (mut a, b, strict)) in rows.into_iter().enumerate() {
        if strict {
            a[tau] = BigRational::one();
        }
        a.resize(width, BigRational::zero());
        a[tau + 1 + i] = BigRational::one();
        mat.push(a);
        rhs.push(b);
    }
    let mut c = vec![BigRational::zero(); width];
    c[tau] = BigRational::one();
    let Outcome::Optimal { x, value } = maximize(&mat, &rhs, &c) else {
        return None;
    };
    let strict_rows = system.inequalities.iter().any(|r| r.relation.is_strict());
    if strict_rows && !value.is_positive() {
        return None;
    }
    let mut point = BTreeMap::new();
    for (j, v) in system.variables.iter().enumerate() {
        let mut val = &shift[j] + &x[col_of[j]];
        if v.lower.is_none() {
            val -= &x[col_of[j] + 1];
        }
        point.insert(v.name.clone(), val);
    }
    Some(point)
}

/// Finds `y ≥ 0, w ≥ 0` with `Aᵀy = 0`, `bᵀy + w ≤ 0` and
/// `Σ_{strict} y + w ≥ 1`.
fn farkas(system: &LinearSystem) -> Option<Multipliers> {
    let rows = system.dense_rows();
    let n = system.variables.len();
    let r = rows.len();
    // columns: y_0..y_r, w, s1, s2
    let width = r + 3;
    let mut mat = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n {
        let mut a = vec![BigRational::zero(); width];
        for (i, (coef, _, _)) in rows.iter().enumerate() {
            a[i] = coef[j].clone();
        }
        mat.push(a);
        rhs.push(BigRational::zero());
    }
    let mut a = vec![BigRational::zero(); width];
    for (i, (_, b, _)) in rows.iter().enumerate() {
        a[i] = b.clone();
    }
    a[r] = BigRational::one();
    a[r + 1] = BigRational::one();
    mat.push(a);
    rhs.push(BigRational::zero());
    let mut a = vec![BigRational::zero(); width];
    for (i, (_, _, strict)) in rows.iter().enumerate() {
        if *strict {
            a[i] = BigRational::one();
        }
    }
    a[r] = BigRational::one();
    a[r + 2] = -BigRational::one();
    mat.push(a);
    rhs.push(BigRational::one());

    let Outcome::Optimal { x, .. } = maximize(&mat, &rhs, &vec![BigRational::zero(); width]) else {
        return None;
    };
    let k = system.inequalities.len();
    let mut mult = Multipliers {
        inequalities: x[..k].to_vec(),
        lower: vec![BigRational::zero(); n],
        upper: vec![BigRational::zero(); n],
    };
    let mut i = k;
    for (j, var) in system.variables.iter().enumerate() {
        if var.lower.is_some() {
            mult.lower[j] = x[i].clone();
            i += 1;
        }
        if var.upper.is_some() {
            mult.upper[j] = x[i].clone();
            i += 1;
        }
    }
    Some(mult)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(rows: &[&str]) -> LinearSystem {
        let mut s = LinearSystem::new("t", vec![Variable::nonnegative("x"), Variable::free("y")]);
        for (i, r) in rows.iter().enumerate() {
            s.push_text(&format!("r{i}"), r, "").unwrap();
        }
        s
    }

    #[test]
    fn strictness_matters() {
        let closed = solve_feasibility(&system(&["x + y <= 1", "x + y >= 1"])).unwrap();
        assert!(closed.is_feasible());
        let open = solve_feasibility(&system(&["x + y < 1", "x + y >= 1"])).unwrap();
        assert!(!open.is_feasible());
        let neg = solve_feasibility(&system(&["x <= -1"])).unwrap();
        assert!(!neg.is_feasible());
    }

    #[test]
    fn witness_satisfies_strict_rows() {
        let s = system(&["x < 1", "y < x", "y > -3"]);
        let Certificate::Feasible { witness } = solve_feasibility(&s).unwrap() else { panic!() };
        assert!(s.inequalities.iter().all(|r| r.holds(&witness)));
    }

    #[test]
    fn tampered_certificates_fail() {
        let s = system(&["x + y < 1", "x + y >= 1"]);
        let Certificate::Infeasible(m) = solve_feasibility(&s).unwrap() else { panic!() };
        let mut bad = m.clone();
        bad.inequalities[0] = BigRational::zero();
        assert!(!check_certificate(&s, &Certificate::Infeasible(bad)).unwrap());
        let mut short = m;
        short.lower.pop();
        assert!(matches!(check_certificate(&s, &Certificate::Infeasible(short)), Err(LpError::ShapeMismatch(_))));
    }
}
