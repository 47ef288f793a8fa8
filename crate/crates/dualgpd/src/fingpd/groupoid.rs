use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FingpdError;

/// Finite groupoid with arrows and objects numbered from zero.
/// `compose(h, g)` is `hg`, defined when `src(h) == tgt(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    #[serde(with = "super::pair_keys")]
    comp: BTreeMap<(usize, usize), usize>,
}

impl FiniteGroupoid {
    /// Builds from a composition rule and checks every axiom exhaustively.
    pub fn new(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, FingpdError> {
        let n = src.len();
        if tgt.len() != n || inv.len() != n || unit.len() != objects {
            return Err(FingpdError::InvalidGroupoid("table lengths disagree".into()));
        }
        let mut comp = BTreeMap::new();
        for h in 0..n {
            for g in 0..n {
                if src[h] == tgt[g] {
                    comp.insert((h, g), rule(h, g));
                }
            }
        }
        let gpd = FiniteGroupoid { objects, src, tgt, unit, inv, comp };
        gpd.check_axioms()?;
        Ok(gpd)
    }

    pub fn pair(n: usize) -> Self {
        let idx = |i: usize, j: usize| i * n + j;
        let src = (0..n * n).map(|a| a % n).collect();
        let tgt = (0..n * n).map(|a| a / n).collect();
        let unit = (0..n).map(|i| idx(i, i)).collect();
        let inv = (0..n * n).map(|a| idx(a % n, a / n)).collect();
        FiniteGroupoid::new(n, src, tgt, unit, inv, |h, g| idx(h / n, g % n)).expect("pair groupoid")
    }

    /// Only identity arrows.
    pub fn trivial(n: usize) -> Self {
        let ids: Vec<usize> = (0..n).collect();
        FiniteGroupoid::new(n, ids.clone(), ids.clone(), ids.clone(), ids, |h, _| h).expect("trivial groupoid")
    }

    /// The cyclic group of order `k` over one object.
    pub fn cyclic(k: usize) -> Self {
        assert!(k > 0);
        let inv = (0..k).map(|a| (k - a) % k).collect();
        FiniteGroupoid::new(1, vec![0; k], vec![0; k], vec![0], inv, |h, g| (h + g) % k).expect("cyclic group")
    }

    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let nb = b.arrows();
        let ob = b.objects;
        let split = |x: usize| (x / nb, x % nb);
        let n = a.arrows() * nb;
        let src = (0..n).map(|x| { let (p, q) = split(x); a.src[p] * ob + b.src[q] }).collect();
        let tgt = (0..n).map(|x| { let (p, q) = split(x); a.tgt[p] * ob + b.tgt[q] }).collect();
        let unit = (0..a.objects * ob).map(|m| a.unit[m / ob] * nb + b.unit[m % ob]).collect();
        let inv = (0..n).map(|x| { let (p, q) = split(x); a.inv[p] * nb + b.inv[q] }).collect();
        FiniteGroupoid::new(a.objects * ob, src, tgt, unit, inv, |h, g| {
            let ((h1, h2), (g1, g2)) = (split(h), split(g));
            a.comp[&(h1, g1)] * nb + b.comp[&(h2, g2)]
        })
        .expect("product groupoid")
    }

    fn check_axioms(&self) -> Result<(), FingpdError> {
        let bad = |s: String| Err(FingpdError::InvalidGroupoid(s));
        for (&(h, g), &hg) in &self.comp {
            if hg >= self.arrows() || self.src[hg] != self.src[g] || self.tgt[hg] != self.tgt[h] {
                return bad(format!("composite of ({h}, {g}) has wrong ends"));
            }
        }
        for m in 0..self.objects {
            let u = self.unit[m];
            if self.src[u] != m || self.tgt[u] != m {
                return bad(format!("identity at {m} is not a loop"));
            }
        }
        for g in 0..self.arrows() {
            let (s, t) = (self.src[g], self.tgt[g]);
            if self.comp[&(self.unit[t], g)] != g || self.comp[&(g, self.unit[s])] != g {
                return bad(format!("identity law fails at {g}"));
            }
            let i = self.inv[g];
            if self.comp.get(&(i, g)) != Some(&self.unit[s]) || self.comp.get(&(g, i)) != Some(&self.unit[t]) {
                return bad(format!("inverse law fails at {g}"));
            }
        }
        for (k, h, g) in self.composable_triples() {
            if self.comp[&(self.comp[&(k, h)], g)] != self.comp[&(k, self.comp[&(h, g)])] {
                return bad(format!("associativity fails at ({k}, {h}, {g})"));
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn arrows(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.tgt[g]
    }

    pub fn unit(&self, m: usize) -> usize {
        self.unit[m]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn compose(&self, h: usize, g: usize) -> Option<usize> {
        self.comp.get(&(h, g)).copied()
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.comp.keys().copied()
    }

    pub fn composable_triples(&self) -> Vec<(usize, usize, usize)> {
        self.comp
            .keys()
            .flat_map(|&(h, g)| (0..self.arrows()).filter(move |&k| self.src[k] == self.tgt[h]).map(move |k| (k, h, g)))
            .collect()
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.src[g]] == g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_tables() {
        let g = FiniteGroupoid::pair(3);
        assert_eq!(g.arrows(), 9);
        assert_eq!(g.composable_pairs().count(), 27);
        // Arrow (t, s) of the pair groupoid on 3 objects has index 3t + s.
        let (a, b) = (5, 6);
        assert_eq!(g.compose(a, b), Some(3));
        assert_eq!(g.compose(b, b), None);
    }

    #[test]
    fn product_of_cyclic_and_pair() {
        let g = FiniteGroupoid::product(&FiniteGroupoid::pair(2), &FiniteGroupoid::cyclic(3));
        assert_eq!((g.objects(), g.arrows()), (2, 12));
        assert_eq!(g.composable_triples().len(), 2 * 2 * 2 * 2 * 27);
    }

    #[test]
    fn broken_rule_is_rejected() {
        let r = FiniteGroupoid::new(1, vec![0, 0], vec![0, 0], vec![0], vec![1, 0], |_, _| 0);
        assert!(r.is_err());
    }
}
