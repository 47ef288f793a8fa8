//! Named identity checks with replayable witnesses.

use serde::Serialize;

use crate::exactcalc::{scalar, PolyMap, Rat, Sampler};

/// Identities of total degree at most this are compared coefficientwise.
pub const SYMBOLIC_MAX_DEGREE: u32 = 4;
/// Points used when an identity is compared by evaluation.
pub const MIN_SAMPLED_POINTS: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Symbolic,
    Sampled,
    Pointwise,
    Exact,
}

/// A point and the two sides that differ there, as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

impl Witness {
    pub fn new(point: &[Rat], lhs: &[Rat], rhs: &[Rat]) -> Self {
        Witness { point: scalar::vec_to_strings(point), lhs: scalar::vec_to_strings(lhs), rhs: scalar::vec_to_strings(rhs) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub mode: CheckMode,
    pub passed: bool,
    pub points: usize,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

fn max_degree(f: &PolyMap) -> u32 {
    f.components().iter().map(|p| p.degree()).max().unwrap_or(0)
}

/// Compares two polynomial maps: coefficientwise when both have degree at most
/// [`SYMBOLIC_MAX_DEGREE`], else at [`MIN_SAMPLED_POINTS`] random points.
pub fn equal_maps(name: &str, lhs: &PolyMap, rhs: &PolyMap, s: &mut Sampler) -> Check {
    assert_eq!((lhs.dom(), lhs.codom()), (rhs.dom(), rhs.codom()), "{name}: shapes differ");
    let symbolic = max_degree(lhs).max(max_degree(rhs)) <= SYMBOLIC_MAX_DEGREE;
    let eval = |f: &PolyMap, x: &[Rat]| f.eval(x).expect("dimension checked");
    let mut check = Check {
        name: name.to_string(),
        mode: if symbolic { CheckMode::Symbolic } else { CheckMode::Sampled },
        passed: true,
        points: if symbolic { 0 } else { MIN_SAMPLED_POINTS },
        witness: None,
        detail: None,
    };
    if symbolic {
        if lhs == rhs {
            return check;
        }
        check.passed = false;
        // A nonzero polynomial vanishes only on a thin set, so a witness turns up quickly.
        for _ in 0..200 {
            let x = s.vector(lhs.dom());
            let (a, b) = (eval(lhs, &x), eval(rhs, &x));
            if a != b {
                check.witness = Some(Witness::new(&x, &a, &b));
                break;
            }
        }
        return check;
    }
    for _ in 0..MIN_SAMPLED_POINTS {
        let x = s.vector(lhs.dom());
        let (a, b) = (eval(lhs, &x), eval(rhs, &x));
        if a != b {
            check.passed = false;
            check.witness = Some(Witness::new(&x, &a, &b));
            break;
        }
    }
    check
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn maps(&mut self, name: &str, lhs: &PolyMap, rhs: &PolyMap, s: &mut Sampler) -> bool {
        let c = equal_maps(name, lhs, rhs, s);
        let ok = c.passed;
        self.checks.push(c);
        ok
    }

    /// Folds one evaluated point into the pointwise check `name`; the first mismatch is kept as witness.
    pub fn point(&mut self, name: &str, point: &[Rat], lhs: &[Rat], rhs: &[Rat]) -> bool {
        let ok = lhs == rhs;
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check {
                    name: name.to_string(),
                    mode: CheckMode::Pointwise,
                    passed: true,
                    points: 0,
                    witness: None,
                    detail: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.points += 1;
        if !ok && c.passed {
            c.passed = false;
            c.witness = Some(Witness::new(point, lhs, rhs));
        }
        ok
    }

    /// A property decided exactly without sampling, such as a rank or a matrix identity.
    pub fn exact(&mut self, name: &str, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            mode: CheckMode::Exact,
            passed: ok,
            points: 0,
            witness: None,
            detail: Some(detail.into()).filter(|d: &String| !d.is_empty()),
        });
        ok
    }

    /// Exact matrix identity; on failure the first differing column is the witness.
    pub fn matrices(&mut self, name: &str, lhs: &crate::exactcalc::Mat, rhs: &crate::exactcalc::Mat) -> bool {
        if (lhs.rows(), lhs.cols()) != (rhs.rows(), rhs.cols()) {
            return self.exact(name, false, format!("shapes {}x{} and {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()));
        }
        let ok = lhs == rhs;
        let witness = (0..lhs.cols()).find(|&j| lhs.col(j) != rhs.col(j)).map(|j| {
            Witness::new(&crate::exactcalc::vector::unit(lhs.cols(), j), &lhs.col(j), &rhs.col(j))
        });
        self.checks.push(Check { name: name.to_string(), mode: CheckMode::Exact, passed: ok, points: 0, witness, detail: None });
        ok
    }

    /// Folds `other` in by check name: points add up and the earliest failure keeps its witness.
    pub fn merge(&mut self, other: CheckReport) {
        for c in other.checks {
            match self.checks.iter_mut().find(|d| d.name == c.name) {
                Some(d) => {
                    d.points += c.points;
                    if d.passed && !c.passed {
                        d.passed = false;
                        d.witness = c.witness;
                        d.detail = c.detail;
                    }
                }
                None => self.checks.push(c),
            }
        }
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::{int, Poly};

    #[test]
    fn symbolic_mismatch_gets_witness() {
        let mut s = Sampler::new(1);
        let x = PolyMap::identity(2);
        let y = PolyMap::new(2, vec![Poly::var(2, 0), &Poly::var(2, 1) * &Poly::var(2, 0)]).unwrap();
        let c = equal_maps("id", &x, &y, &mut s);
        assert_eq!(c.mode, CheckMode::Symbolic);
        assert!(!c.passed);
        let w = c.witness.unwrap();
        assert_ne!(w.lhs, w.rhs);
    }

    #[test]
    fn high_degree_is_sampled() {
        let mut s = Sampler::new(2);
        let p = Poly::var(1, 0).pow(5);
        let f = PolyMap::new(1, vec![p.clone()]).unwrap();
        let c = equal_maps("same", &f, &f.clone(), &mut s);
        assert_eq!((c.mode, c.passed, c.points), (CheckMode::Sampled, true, MIN_SAMPLED_POINTS));
    }

    #[test]
    fn pointwise_keeps_first_witness() {
        let mut r = CheckReport::new();
        r.point("p", &[int(1)], &[int(1)], &[int(1)]);
        r.point("p", &[int(2)], &[int(2)], &[int(3)]);
        r.point("p", &[int(3)], &[int(2)], &[int(4)]);
        let c = r.get("p").unwrap();
        assert_eq!((c.points, c.passed), (3, false));
        assert_eq!(c.witness.as_ref().unwrap().point, vec![scalar::to_string(&int(2))]);
    }
}
