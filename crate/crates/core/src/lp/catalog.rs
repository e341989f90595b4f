//! The named inequality systems of the upper-bound case analysis.
//!
//! Variables are lengths normalized so that `‖st‖thex = 1`; every one is
//! nonnegative. Hypothesis rows compare `5 − 2.5·y0` (the assumed lower
//! bound on the path length) against an upper bound read off a path.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::system::{check_certificate, solve_feasibility, Certificate, Expectation, LinearSystem, LpError, Variable};

/// Optional base rows.
pub const Y5_GE_Y0: &str = "Y5geY0";
pub const Y0_LE_HALF: &str = "y0leHalf";
pub const X0_LE_HALF: &str = "x0leHalf";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogOptions {
    /// Include `Y5 ≥ y0` in the combined and augmented systems.
    pub with_y5: bool,
    /// Include `y0 ≤ 1/2` and `x0 ≤ 1/2` in the combined and augmented systems.
    pub half_bounds: bool,
    /// Row labels removed from every system after construction.
    pub drop: Vec<String>,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        Self { with_y5: false, half_bounds: true, drop: Vec::new() }
    }
}

pub fn registry() -> Vec<Variable> {
    let mut names: Vec<String> = Vec::new();
    for p in ["y", "Y", "x", "X"] {
        names.extend((0..6).map(|i| format!("{p}{i}")));
    }
    names.extend(["vy", "vx", "l", "m", "d", "h", "alpha5", "alpha0", "alpha1"].map(String::from));
    names.extend((1..=5).map(|i| format!("beta{i}")));
    names.extend((1..=5).map(|i| format!("T{i}")));
    names.iter().map(|n| Variable::nonnegative(n)).collect()
}

const LHS: &str = "5 - 2.5*y0";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum YCase {
    Y0,
    Y1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum XCase {
    X0,
    X1,
}

struct Builder {
    sys: LinearSystem,
}

impl Builder {
    fn new(name: &str, expected: Expectation) -> Self {
        let mut sys = LinearSystem::new(name, registry());
        sys.expected = Some(expected);
        Self { sys }
    }

    fn row(&mut self, label: &str, text: &str, provenance: &str) -> &mut Self {
        self.sys.push_text(label, text, provenance).expect("catalog rows are well formed");
        self
    }

    fn first_assumption(&mut self) -> &mut Self {
        self.row("firstAssumption", "2.5*y0 + 3.5*y1 < 1", "region R is empty only if 2.5y0 + 3.5y1 < 1")
    }

    fn base(&mut self, opts: &CatalogOptions) -> &mut Self {
        self.first_assumption();
        self.row("Ys0", "y0 + Y1 <= 1", "Y chain start");
        for i in 1..6 {
            let next = (i + 1) % 6;
            self.row(&format!("Ys{i}"), &format!("y{i} + Y{next} <= Y{i}"), "Y chain, indices mod 6");
        }
        self.row("Xs0", "X0 <= 1", "X chain start");
        for i in 1..6 {
            let next = (i + 1) % 6;
            self.row(&format!("Xs{i}"), &format!("x{next} + X{i} <= X{next}"), "X chain, indices mod 6");
        }
        self.row(
            "YPath",
            &format!("{LHS} < (1 - y1) + Y1 + Y2 + Y3 + Y4 + Y5 + Y0 + 5*vy"),
            "path through the y-fan then v^y; strict (hypothesis d > 5‖st‖thex)",
        );
        self.row(
            "XPath",
            &format!("{LHS} < (1 - y0 - x0) + X0 + X5 + X4 + X3 + X2 + X1 + 5*vx"),
            "path through the x-fan then v^x; strict (hypothesis d > 5‖st‖thex)",
        );
        if opts.half_bounds {
            self.row(Y0_LE_HALF, "y0 <= 1/2", "s lies in the lower half of ∇_t^s");
            self.row(X0_LE_HALF, "x0 <= 1/2", "x-side analogue of y0 ≤ 1/2");
        }
        if opts.with_y5 {
            self.row(Y5_GE_Y0, "Y5 >= y0", "a vertex q in C_t^5 with ‖qt‖hex > y0");
        }
        self
    }

    fn y_case(&mut self, c: YCase) -> &mut Self {
        match c {
            YCase::Y0 => self
                .row("Y0case.vy", "vy <= y1", "v^y in C_t^0")
                .row("Y0case.min", "vy <= min(y2, y3, y4)/2", "v^y in C_t^0, half the smallest fan gap"),
            YCase::Y1 => self
                .row("Y1case.vy", "vy <= x0", "v^y in C_t^1")
                .row("Y1case.half", "vy <= Y0/2", "v^y in C_t^1"),
        }
    }

    fn x_case(&mut self, c: XCase) -> &mut Self {
        match c {
            XCase::X0 => self
                .row("X0case.vx", "vx <= y1", "v^x in C_t^0")
                .row("X0case.half", "vx <= X1/2", "v^x in C_t^0"),
            XCase::X1 => self
                .row("X1case.vx", "vx <= x0", "v^x in C_t^1")
                .row("X1case.min", "vx <= min(x5, x4, x3)/2", "v^x in C_t^1, half the smallest fan gap"),
        }
    }

    /// `j = None` is the no-crossing case.
    fn j_case(&mut self, j: Option<usize>) -> &mut Self {
        for i in 2..6 {
            if j.is_none_or(|j| i > j) {
                let next = (i + 1) % 6;
                self.row(&format!("J.Y{next}lex{i}"), &format!("Y{next} <= x{i}"), "fans do not cross at cone i");
            }
        }
        if let Some(j) = j {
            for k in 2..=j {
                self.row(&format!("J.X{}ley{k}", k - 1), &format!("X{} <= y{k}", k - 1), "fans cross up to cone j");
            }
        }
        self
    }

    fn finish(&mut self, opts: &CatalogOptions) -> LinearSystem {
        let mut sys = self.sys.clone();
        for d in &opts.drop {
            sys.drop_rows(d);
        }
        sys
    }
}

fn j_name(j: Option<usize>) -> String {
    j.map_or("NOJ".to_string(), |j| format!("J{j}"))
}

fn combined(y: YCase, x: XCase, j: Option<usize>, opts: &CatalogOptions) -> Builder {
    let residual = matches!((y, x, j), (YCase::Y1, XCase::X1, Some(2..=4)) | (YCase::Y0, XCase::X0, Some(3)));
    let expected = if residual { Expectation::Feasible } else { Expectation::Infeasible };
    let mut b = Builder::new(&format!("{y:?}·{x:?}·{}", j_name(j)), expected);
    b.base(opts).y_case(y).x_case(x).j_case(j);
    b
}

/// All systems in a fixed order.
pub fn catalog(opts: &CatalogOptions) -> Vec<LinearSystem> {
    let mut out = Vec::new();
    let js = [None, Some(2), Some(3), Some(4), Some(5)];
    for y in [YCase::Y0, YCase::Y1] {
        for x in [XCase::X0, XCase::X1] {
            for j in js {
                out.push(combined(y, x, j, opts).finish(opts));
            }
        }
    }

    for j in [2, 3, 4] {
        let mut a = combined(YCase::Y1, XCase::X1, Some(j), opts);
        a.sys.name.push_str("·A");
        a.sys.expected = Some(Expectation::Infeasible);
        a.row("augA", "vy <= y1/2", "short v^y");
        out.push(a.finish(opts));

        let mut b = combined(YCase::Y1, XCase::X1, Some(j), opts);
        b.sys.name.push_str("·B");
        b.sys.expected = Some(Expectation::Infeasible);
        b.row("augB.Y0", "Y0 >= y0 + l + vy/2", "Y0 via u^y and v^y")
            .row("augB.short", &format!("{LHS} < 5*l + (1 + l) + (1 + l) + (y0 + l + x0) + 5*x0"), "shortcut path; strict");
        out.push(b.finish(opts));
    }
    {
        let mut a = combined(YCase::Y0, XCase::X0, Some(3), opts);
        a.sys.name.push_str("·A");
        a.sys.expected = Some(Expectation::Infeasible);
        a.row("augA", "vx <= x0/2", "short v^x");
        out.push(a.finish(opts));

        let mut b = combined(YCase::Y0, XCase::X0, Some(3), opts);
        b.sys.name.push_str("·B");
        b.sys.expected = Some(Expectation::Infeasible);
        b.row("augB.X1", "X1 >= l + vx/2", "X1 via u^x and v^x")
            .row("augB.short", &format!("{LHS} < 5*(l + y0) + (1 + l) + (1 + l) + (l + y1) + 5*y1"), "shortcut path; strict");
        out.push(b.finish(opts));
    }

    let single = |name: &str, rows: &[(&str, String, &str)]| {
        let mut b = Builder::new(name, Expectation::Infeasible);
        b.first_assumption();
        for (label, text, prov) in rows {
            b.row(label, text, prov);
        }
        b.finish(opts)
    };

    out.push(single("case1", &[("case1", format!("{LHS} < (1 - y1) + (1 - y0) + 5*y1"), "s–u–v path; strict")]));
    out.push(single(
        "case1v",
        &[(
            "case1v",
            format!(
                "{LHS} < (1 - y1) + (1 - y0) + (1 - y0 - y1) + (1 - y0 - y1 - y2) + (1 - y0 - y1 - y2) + y0 + y1 \
                 + 5*min(y1, y2/2)"
            ),
            "path around C_t^1 then v; strict",
        )],
    ));
    out.push(single(
        "case2v",
        &[(
            "case2v",
            format!("{LHS} < (1 - y1) + (1 - y0) + (1 - y0 - y1) + 2*(1 - y0 - y1 - y2) + y0 + y1 + 5*y1/2"),
            "second v case; strict",
        )],
    ));

    let sweep_common: [(&str, String, &str); 2] = [
        ("dAndh", "d + h <= y0".into(), "h and d split y0"),
        ("segments", "(y0 - d) + m <= 1 + (1 - y0 - y1 - y2 - y3 - y4)".into(), "segment u^0u^1 fits"),
    ];
    let alpha: [(&str, String, &str); 3] = [
        ("alpha5", "alpha5 <= h + d".into(), "sweep step in C^5"),
        ("alpha0", "alpha0 <= h".into(), "sweep step in C^0"),
        ("alpha1", "alpha1 <= h".into(), "sweep step in C^1"),
    ];
    let mut long = sweep_common.to_vec();
    long.extend(alpha.iter().cloned());
    long.push((
        "betaSum",
        "beta1 + beta2 + beta3 + beta4 + beta5 <= (y0 - h - d + m) + (y4 + y0 - h - d) + y4 + y3 + y2".into(),
        "remaining sweep steps",
    ));
    long.push((
        "LongSweepPath",
        format!("{LHS} < alpha5 + alpha0 + alpha1 + m + beta1 + beta2 + beta3 + beta4 + beta5 + 5*y1"),
        "long sweep path; strict",
    ));
    out.push(single("LongSweepPath", &long));

    let mut deg = sweep_common.to_vec();
    deg.extend(alpha.iter().cloned());
    deg.push(("T1le1", "T1 <= 1".into(), "degenerate sweep step"));
    for (label, i) in [("T2leh", 2), ("T3leh", 3), ("T4leh", 4), ("T5leh", 5)] {
        deg.push((label, format!("T{i} <= h"), "degenerate sweep step"));
    }
    deg.push((
        "DegLongSweep",
        format!("{LHS} < alpha5 + alpha0 + alpha1 + T1 + T2 + T3 + T4 + T5 + 5*y1"),
        "degenerate long sweep; strict",
    ));
    out.push(single("DegLongSweep", &deg));

    out.push(single("Claim5", &[("emptyx0", format!("{LHS} < 5*y0 + 1 + 1 + 5*y1"), "x^0 missing; strict")]));
    out.push(single(
        "Claim6a",
        &[("v1", format!("{LHS} < (1 - x0 - y0) + 1 + (1 - x0) + (1 - x0 - x5) + 5*min(x0, x5/2)"), "via v^1; strict")],
    ));
    {
        let mut b = Builder::new("Claim6b", Expectation::Infeasible);
        b.row("noC5", &format!("{LHS} < (1 - x0 - y0) + 1 + 5*x0"), "no vertex in C^5; strict")
            .row(X0_LE_HALF, "x0 <= 1/2", "x-side analogue of y0 ≤ 1/2")
            .row(Y0_LE_HALF, "y0 <= 1/2", "s lies in the lower half of ∇_t^s");
        out.push(b.finish(opts));
    }
    out
}

/// Labels of rows that encode a path-length hypothesis rather than geometry.
pub const HYPOTHESIS_ROWS: [&str; 3] = ["firstAssumption", "YPath", "XPath"];

/// Every geometric row of the combined systems, once per label, including
/// the optional base rows.
pub fn structural_rows() -> Vec<super::system::Inequality> {
    let opts = CatalogOptions { with_y5: true, half_bounds: true, drop: Vec::new() };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for sys in catalog(&opts).into_iter().take(20) {
        for row in sys.inequalities {
            if !HYPOTHESIS_ROWS.contains(&row.label.as_str()) && seen.insert(row.label.clone()) {
                out.push(row);
            }
        }
    }
    out
}

fn tokens(name: &str) -> Vec<String> {
    let mut t: Vec<String> = name.split(['·', '.', ',']).filter(|s| !s.is_empty()).map(|s| s.to_lowercase()).collect();
    t.sort();
    t
}

/// Looks a system up by name; `·`-separated tokens may come in any order
/// and `.` is accepted as a separator.
pub fn find_system<'a>(systems: &'a [LinearSystem], name: &str) -> Option<&'a LinearSystem> {
    let want = tokens(name);
    systems.iter().find(|s| tokens(&s.name) == want)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemReport {
    pub name: String,
    pub expected: Option<Expectation>,
    pub feasible: bool,
    pub certificate_checked: bool,
    pub passed: bool,
    /// Rows carrying positive multipliers.
    pub support: Vec<String>,
    /// Optional rows without which an infeasible system turns feasible.
    pub needs: Vec<String>,
    /// Feasibility after toggling each optional row.
    pub sensitivity: BTreeMap<String, bool>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub options: CatalogOptions,
    pub systems: Vec<SystemReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.systems.iter().all(|s| s.passed)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<16} {:<10} {:<10} {:<5} {}\n", "system", "expected", "result", "ok", "needs");
        for r in &self.systems {
            let exp = match r.expected {
                Some(Expectation::Feasible) => "feasible",
                Some(Expectation::Infeasible) => "infeasible",
                None => "-",
            };
            let res = if r.feasible { "feasible" } else { "infeasible" };
            let ok = if r.passed { "pass" } else { "FAIL" };
            s.push_str(&format!("{:<16} {:<10} {:<10} {:<5} {}\n", r.name, exp, res, ok, r.needs.join(",")));
        }
        s
    }
}

fn toggles(sys: &LinearSystem, opts: &CatalogOptions) -> Vec<(String, LinearSystem)> {
    let mut out = Vec::new();
    for label in [Y5_GE_Y0, Y0_LE_HALF, X0_LE_HALF] {
        if sys.has_row(label) {
            let mut s = sys.clone();
            s.drop_rows(label);
            out.push((format!("-{label}"), s));
        }
    }
    if !opts.with_y5 && sys.has_row("YPath") && !opts.drop.iter().any(|d| d == Y5_GE_Y0) {
        let mut s = sys.clone();
        s.push_text(Y5_GE_Y0, "Y5 >= y0", "a vertex q in C_t^5 with ‖qt‖hex > y0").expect("well formed");
        out.push((format!("+{Y5_GE_Y0}"), s));
    }
    out
}

pub fn verify_system(sys: &LinearSystem, opts: &CatalogOptions) -> Result<SystemReport, LpError> {
    let cert = solve_feasibility(sys)?;
    let checked = check_certificate(sys, &cert)?;
    let feasible = cert.is_feasible();
    let mut sensitivity = BTreeMap::new();
    let mut needs = Vec::new();
    for (key, variant) in toggles(sys, opts) {
        let f = solve_feasibility(&variant)?.is_feasible();
        if !feasible && f && key.starts_with('-') {
            needs.push(key[1..].to_string());
        }
        sensitivity.insert(key, f);
    }
    let passed = checked
        && match sys.expected {
            Some(Expectation::Feasible) => feasible,
            Some(Expectation::Infeasible) => !feasible,
            None => true,
        };
    Ok(SystemReport {
        name: sys.name.clone(),
        expected: sys.expected,
        feasible,
        certificate_checked: checked,
        passed,
        support: cert.support(sys).into_iter().map(String::from).collect(),
        needs,
        sensitivity,
        certificate: cert,
    })
}

/// Solves and re-checks every system selected by `only` (all if `None`).
pub fn verify_all(opts: &CatalogOptions, only: Option<&str>) -> Result<VerifyReport, LpError> {
    let systems = catalog(opts);
    let selected: Vec<&LinearSystem> = match only {
        Some(name) => find_system(&systems, name).into_iter().collect(),
        None => systems.iter().collect(),
    };
    let systems = selected.into_iter().map(|s| verify_system(s, opts)).collect::<Result<_, _>>()?;
    Ok(VerifyReport { options: opts.clone(), systems })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let c = catalog(&CatalogOptions::default());
        assert_eq!(c.len(), 36);
        let feasible: Vec<&str> =
            c.iter().filter(|s| s.expected == Some(Expectation::Feasible)).map(|s| s.name.as_str()).collect();
        assert_eq!(feasible, ["Y0·X0·J3", "Y1·X1·J2", "Y1·X1·J3", "Y1·X1·J4"]);
        assert!(find_system(&c, "X0.Y0.J3").is_some());
        assert!(find_system(&c, "NOJ·X0·Y0").is_some());
        assert!(find_system(&c, "X0·Y0").is_none());
    }
}
