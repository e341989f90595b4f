//! Oracles shared by the integration tests. None of them call into the
//! solver or routing code they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use theta6::lp::{Inequality, LinearSystem, Relation, Variable};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `a·x (≤ | <) b`.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<BigRational>,
    b: BigRational,
    strict: bool,
}

/// Fourier–Motzkin elimination with strictness tracking.
pub fn fm_feasible(sys: &LinearSystem) -> bool {
    let n = sys.variables.len();
    let idx: BTreeMap<&str, usize> = sys.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
    let mut rows = Vec::new();
    for r in &sys.inequalities {
        let mut a = vec![BigRational::zero(); n];
        for (k, c) in &r.terms {
            a[idx[k.as_str()]] += c;
        }
        rows.push(Row { a, b: r.constant.clone(), strict: r.relation == Relation::Lt });
    }
    for (i, v) in sys.variables.iter().enumerate() {
        let unit = |s: i64| {
            let mut a = vec![BigRational::zero(); n];
            a[i] = q(s);
            a
        };
        if let Some(l) = &v.lower {
            rows.push(Row { a: unit(-1), b: -l, strict: false });
        }
        if let Some(u) = &v.upper {
            rows.push(Row { a: unit(1), b: u.clone(), strict: false });
        }
    }
    for k in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[k].is_positive() {
                pos.push(r);
            } else if r.a[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for m in &neg {
                let (cp, cm) = (-&m.a[k], p.a[k].clone());
                let a = p.a.iter().zip(&m.a).map(|(x, y)| x * &cp + y * &cm).collect();
                rest.push(Row { a, b: &p.b * &cp + &m.b * &cm, strict: p.strict || m.strict });
            }
        }
        rows = rest;
    }
    rows.iter().all(|r| if r.strict { r.b.is_positive() } else { !r.b.is_negative() })
}

/// A system of 2 or 3 variables and 2 to 6 rows with small integer data.
pub fn random_system(rng: &mut ChaCha8Rng, id: usize) -> LinearSystem {
    let nv = rng.gen_range(2..=3);
    let variables: Vec<Variable> = (0..nv)
        .map(|i| {
            let name = format!("v{i}");
            match rng.gen_range(0..3) {
                0 => Variable::nonnegative(&name),
                1 => Variable::free(&name),
                _ => Variable { name, lower: Some(q(rng.gen_range(-2..=0))), upper: Some(q(rng.gen_range(0..=3))) },
            }
        })
        .collect();
    let mut sys = LinearSystem::new(&format!("random{id}"), variables.clone());
    for r in 0..rng.gen_range(2..=6) {
        let mut terms = BTreeMap::new();
        for v in &variables {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                terms.insert(v.name.clone(), q(c));
            }
        }
        if terms.is_empty() {
            terms.insert(variables[0].name.clone(), q(1));
        }
        sys.inequalities.push(Inequality {
            label: format!("r{r}"),
            terms,
            relation: if rng.gen_bool(0.5) { Relation::Lt } else { Relation::Le },
            constant: q(rng.gen_range(-3..=3)),
            provenance: String::new(),
        });
    }
    sys
}
