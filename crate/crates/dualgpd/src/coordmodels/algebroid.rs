//! Lie algebroids on trivial bundles `R^base x R^rank` with polynomial anchor and structure functions.

use super::check::CheckReport;
use super::groupoid::CoordGroupoid;
use super::CoordError;
use crate::exactcalc::{vf_bracket, Mat, Poly, PolyMap, Rat, Sampler};

/// Components of a section in the frame `e_1..e_rank`, polynomial in the base coordinates.
pub type Section = Vec<Poly>;

/// `[e_i, e_j] = Σ_k c^k_ij e_k`, anchor `a(e_i) = Σ_a anchor[a][i] ∂_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebroidModel {
    pub name: String,
    pub base_dim: usize,
    pub rank: usize,
    pub anchor: Vec<Vec<Poly>>,
    /// `structure[i][j][k] = c^k_ij`.
    pub structure: Vec<Vec<Vec<Poly>>>,
}

/// Vector bundle map over `base`, with `fibre[j][i]` the `j`-th target component of the `i`-th source frame element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMap {
    pub base: PolyMap,
    pub fibre: Vec<Vec<Poly>>,
}

impl BundleMap {
    pub fn constant(base: PolyMap, m: &Mat) -> Self {
        let n = base.dom();
        let fibre = (0..m.rows()).map(|j| (0..m.cols()).map(|i| Poly::constant(n, m.get(j, i).clone())).collect()).collect();
        BundleMap { base, fibre }
    }

    pub fn apply(&self, x: &Section) -> Section {
        let n = self.base.dom();
        self.fibre.iter().map(|row| row.iter().zip(x).fold(Poly::zero(n), |acc, (p, xi)| &acc + &(p * xi))).collect()
    }
}

fn zero_structure(base_dim: usize, rank: usize) -> Vec<Vec<Vec<Poly>>> {
    vec![vec![vec![Poly::zero(base_dim); rank]; rank]; rank]
}

fn as_map(base_dim: usize, x: &Section) -> PolyMap {
    PolyMap::new(base_dim, x.clone()).expect("section polynomials live on the base")
}

impl LieAlgebroidModel {
    pub fn new(
        name: impl Into<String>,
        base_dim: usize,
        rank: usize,
        anchor: Vec<Vec<Poly>>,
        structure: Vec<Vec<Vec<Poly>>>,
    ) -> Result<Self, CoordError> {
        let name = name.into();
        let bad = |what: &str| Err(CoordError::Shape(format!("{name}: {what}")));
        if anchor.len() != base_dim || anchor.iter().any(|r| r.len() != rank) {
            return bad("anchor shape");
        }
        if structure.len() != rank || structure.iter().any(|r| r.len() != rank || r.iter().any(|c| c.len() != rank)) {
            return bad("structure function shape");
        }
        let polys = anchor.iter().flatten().chain(structure.iter().flatten().flatten());
        if polys.clone().any(|p| p.nvars() != base_dim) {
            return bad("coefficients must be functions on the base");
        }
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    if structure[i][j][k] != -&structure[j][i][k] {
                        return bad("structure functions are not antisymmetric");
                    }
                }
            }
        }
        Ok(LieAlgebroidModel { name, base_dim, rank, anchor, structure })
    }

    /// Constant anchor, vanishing structure functions.
    pub fn with_constant_anchor(name: impl Into<String>, anchor: &Mat) -> Self {
        let (b, r) = (anchor.rows(), anchor.cols());
        let a = (0..b).map(|i| (0..r).map(|j| Poly::constant(b, anchor.get(i, j).clone())).collect()).collect();
        LieAlgebroidModel::new(name, b, r, a, zero_structure(b, r)).expect("shapes agree")
    }

    /// Lie algebra with structure constants `c[i][j][k]` over a point.
    pub fn lie_algebra(name: impl Into<String>, c: &[Vec<Vec<Rat>>]) -> Result<Self, CoordError> {
        let r = c.len();
        let structure = c.iter().map(|ci| ci.iter().map(|cij| cij.iter().map(|x| Poly::constant(0, x.clone())).collect()).collect()).collect();
        LieAlgebroidModel::new(name, 0, r, vec![], structure)
    }

    pub fn anchor_at(&self, x: &[Rat]) -> Mat {
        Mat::from_fn(self.base_dim, self.rank, |a, i| self.anchor[a][i].eval(x).expect("base point"))
    }

    /// The vector field `a(X)`.
    pub fn anchor_field(&self, x: &Section) -> PolyMap {
        let n = self.base_dim;
        let comps = self.anchor.iter().map(|row| row.iter().zip(x).fold(Poly::zero(n), |acc, (a, xi)| &acc + &(a * xi))).collect();
        PolyMap::new(n, comps).expect("base polynomials")
    }

    /// `a(X)(f)`.
    pub fn apply_anchor(&self, x: &Section, f: &Poly) -> Poly {
        let field = self.anchor_field(x);
        field
            .components()
            .iter()
            .enumerate()
            .fold(Poly::zero(self.base_dim), |acc, (a, v)| &acc + &(v * &f.diff(a).expect("base variable")))
    }

    /// `[X, Y]_k = Σ X_i Y_j c^k_ij + a(X)(Y_k) - a(Y)(X_k)`.
    pub fn bracket(&self, x: &Section, y: &Section) -> Section {
        (0..self.rank)
            .map(|k| {
                let mut acc = &self.apply_anchor(x, &y[k]) - &self.apply_anchor(y, &x[k]);
                for i in 0..self.rank {
                    for j in 0..self.rank {
                        let c = &self.structure[i][j][k];
                        if !c.is_zero() {
                            acc = &acc + &(&(&x[i] * &y[j]) * c);
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Negated bracket and anchor.
    pub fn flip(&self) -> Self {
        let neg = |p: &Poly| -p;
        LieAlgebroidModel {
            name: format!("{} flipped", self.name),
            base_dim: self.base_dim,
            rank: self.rank,
            anchor: self.anchor.iter().map(|r| r.iter().map(neg).collect()).collect(),
            structure: self.structure.iter().map(|a| a.iter().map(|b| b.iter().map(neg).collect()).collect()).collect(),
        }
    }

    pub fn constant_section(&self, v: &[Rat]) -> Section {
        v.iter().map(|c| Poly::constant(self.base_dim, c.clone())).collect()
    }

    /// Frame sections, fibre-linear sections `x_a e_i`, and `random` sections with degree-2 coefficients.
    pub fn section_family(&self, s: &mut Sampler, random: usize) -> Vec<Section> {
        let (n, r) = (self.base_dim, self.rank);
        let unit = |i: usize, coeff: Poly| -> Section { (0..r).map(|k| if k == i { coeff.clone() } else { Poly::zero(n) }).collect() };
        let mut out: Vec<Section> = (0..r).map(|i| unit(i, Poly::constant(n, crate::exactcalc::int(1)))).collect();
        for a in 0..n {
            if r > 0 {
                out.push(unit(a % r, Poly::var(n, a)));
            }
        }
        for _ in 0..random {
            out.push((0..r).map(|_| s.poly(n, 2)).collect());
        }
        out
    }

    /// Antisymmetry, Jacobi, Leibniz and the anchor being a bracket morphism, on the section family.
    pub fn validate(&self, s: &mut Sampler, random: usize) -> CheckReport {
        let mut r = CheckReport::new();
        let secs = self.section_family(s, random);
        let n = self.base_dim;
        let m = |x: &Section| as_map(n, x);
        let count = secs.len();
        for t in 0..count {
            let (x, y, z) = (&secs[t], &secs[(t + 1) % count], &secs[(t + 2) % count]);
            let xy = self.bracket(x, y);
            r.maps("antisymmetry", &m(&xy), &m(&self.bracket(y, x)).compose(&PolyMap::identity(n)).map(|f| neg_map(&f)).expect("dims"), s);
            let jac: Section = (0..self.rank)
                .map(|k| {
                    let a = &self.bracket(x, &self.bracket(y, z))[k];
                    let b = &self.bracket(y, &self.bracket(z, x))[k];
                    let c = &self.bracket(z, &xy)[k];
                    &(a + b) + c
                })
                .collect();
            r.maps("Jacobi identity", &m(&jac), &m(&vec![Poly::zero(n); self.rank]), s);
            let f = s.poly(n, 2);
            let fy: Section = y.iter().map(|p| &f * p).collect();
            let rf = self.apply_anchor(x, &f);
            let rhs: Section = xy.iter().zip(y).map(|(b, yk)| &(&f * b) + &(&rf * yk)).collect();
            r.maps("Leibniz rule", &m(&self.bracket(x, &fy)), &m(&rhs), s);
            if n > 0 {
                let lhs = self.anchor_field(&xy);
                let rhs = vf_bracket(&self.anchor_field(x), &self.anchor_field(y)).expect("vector fields");
                r.maps("anchor preserves brackets", &lhs, &rhs, s);
            }
        }
        r
    }
}

fn neg_map(f: &PolyMap) -> PolyMap {
    PolyMap::new(f.dom(), f.components().iter().map(|p| -p).collect()).expect("same domain")
}

/// Records whether `phi` is an algebroid morphism `from -> to`: the anchor condition
/// `Tf ∘ a = a' ∘ φ` on the frame and, writing `φX = Σ u_i (e'_i ∘ f)`, the bracket condition
/// `φ[X,X'] = Σ u_i u'_j c'_ij ∘ f + a(X)(u') - a(X')(u)` on consecutive pairs of `sections`.
pub fn check_morphism(
    r: &mut CheckReport,
    label: &str,
    from: &LieAlgebroidModel,
    to: &LieAlgebroidModel,
    phi: &BundleMap,
    sections: &[Section],
    s: &mut Sampler,
) {
    let n = from.base_dim;
    let f = &phi.base;
    let jac = f.jacobian();
    let after_f = |p: &Poly| p.compose(f.components()).expect("base map codomain");
    let after_f = |p: &Poly| if to.base_dim == 0 { Poly::constant(n, p.constant_term()) } else { after_f(p) };
    for i in 0..from.rank {
        let lhs: Vec<Poly> = jac
            .iter()
            .map(|row| row.iter().zip(&from.anchor).fold(Poly::zero(n), |acc, (d, a)| &acc + &(d * &a[i])))
            .collect();
        let rhs: Vec<Poly> = to
            .anchor
            .iter()
            .map(|row| row.iter().zip(&phi.fibre).fold(Poly::zero(n), |acc, (a, frow)| &acc + &(&after_f(a) * &frow[i])))
            .collect();
        r.maps(&format!("{label}: anchor"), &as_map(n, &lhs), &as_map(n, &rhs), s);
    }
    let count = sections.len();
    for t in 0..count {
        let (x, y) = (&sections[t], &sections[(t + 1) % count]);
        let (u, v) = (phi.apply(x), phi.apply(y));
        let lhs = phi.apply(&from.bracket(x, y));
        let rhs: Section = (0..to.rank)
            .map(|k| {
                let mut acc = &from.apply_anchor(x, &v[k]) - &from.apply_anchor(y, &u[k]);
                for i in 0..to.rank {
                    for j in 0..to.rank {
                        let c = &to.structure[i][j][k];
                        if !c.is_zero() {
                            acc = &acc + &(&(&u[i] * &v[j]) * &after_f(c));
                        }
                    }
                }
                acc
            })
            .collect();
        r.maps(&format!("{label}: bracket"), &as_map(n, &lhs), &as_map(n, &rhs), s);
    }
}

/// Lie algebroid of a registered groupoid: `AG = ker Tα` along identities in its canonical basis,
/// anchor `Tβ`, and structure functions read off from brackets of the right-invariant extensions
/// `e_i(g) = TR_g(e_i)` at the identities.
pub fn lie_algebroid(g: &CoordGroupoid) -> Result<LieAlgebroidModel, CoordError> {
    g.require_registered()?;
    let (b, n) = (g.base_dim(), g.arrow_dim());
    let zero = crate::exactcalc::vector::zeros(b);
    let basis = g.src_jacobian(&g.unit(&zero)).kernel().canonical_basis();
    let anchor = &g.tgt_jacobian(&g.unit(&zero)) * &basis;
    let rank = basis.cols();
    let jac = g.comp_map().jacobian();
    let at_identity = PolyMap::concat(&[&g.unit_map().compose(g.tgt_map())?, &PolyMap::identity(n)])?;
    let fields: Vec<PolyMap> = (0..rank)
        .map(|i| {
            let comps = jac
                .iter()
                .map(|row| {
                    (0..n).fold(Poly::zero(n), |acc, c| {
                        let d = row[c].compose(at_identity.components()).expect("arrow variables");
                        &acc + &d.scale(basis.get(c, i))
                    })
                })
                .collect();
            PolyMap::new(n, comps).expect("arrow polynomials")
        })
        .collect();
    let left = basis.left_inverse()?;
    let mut structure = zero_structure(b, rank);
    for i in 0..rank {
        for j in 0..rank {
            let at_units = vf_bracket(&fields[i], &fields[j])?.compose(g.unit_map())?;
            let coords: Vec<Poly> = (0..rank)
                .map(|k| (0..n).fold(Poly::zero(b), |acc, c| &acc + &at_units.components()[c].scale(left.get(k, c))))
                .collect();
            for c in 0..n {
                let back = (0..rank).fold(Poly::zero(b), |acc, k| &acc + &coords[k].scale(basis.get(c, k)));
                if back != at_units.components()[c] {
                    return Err(CoordError::Invalid(format!("{}: bracket of invariant fields leaves the algebroid", g.name)));
                }
            }
            structure[i][j] = coords;
        }
    }
    let anchor = (0..b).map(|a| (0..rank).map(|i| Poly::constant(b, anchor.get(a, i).clone())).collect()).collect();
    LieAlgebroidModel::new(format!("A{}", g.name), b, rank, anchor, structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::{pair_groupoid, product_groupoid, vector_space_groupoid, CoordGroupoid, Family};
    use crate::exactcalc::int;

    #[test]
    fn pair_algebroid_is_tangent_bundle() {
        let a = lie_algebroid(&pair_groupoid(2)).unwrap();
        assert_eq!((a.base_dim, a.rank), (2, 2));
        assert_eq!(a.anchor_at(&[int(0), int(0)]), Mat::identity(2));
        let (x, y) = (Poly::var(2, 0), Poly::var(2, 1));
        let bx = vec![Poly::zero(2), x.clone()];
        let by = vec![y.clone(), Poly::zero(2)];
        assert_eq!(a.bracket(&bx, &by), vec![x.clone(), -&y]);
        let oracle = vf_bracket(&as_map(2, &bx), &as_map(2, &by)).unwrap();
        assert_eq!(a.bracket(&bx, &by), oracle.components().to_vec());
    }

    #[test]
    fn vector_space_is_abelian() {
        let a = lie_algebroid(&vector_space_groupoid(3)).unwrap();
        assert_eq!((a.base_dim, a.rank), (0, 3));
        let e = a.section_family(&mut Sampler::new(1), 0);
        assert!(a.bracket(&e[0], &e[1]).iter().all(Poly::is_zero));
    }

    #[test]
    fn registered_algebroids_validate() {
        let mut s = Sampler::new(3);
        for g in [pair_groupoid(1), pair_groupoid(2), product_groupoid(&[&pair_groupoid(1), &vector_space_groupoid(1)])] {
            let a = lie_algebroid(&g).unwrap();
            let r = a.validate(&mut s, 2);
            assert!(r.passed(), "{:?}", r.first_failure());
        }
    }

    #[test]
    fn so3_validates() {
        let mut c = vec![vec![vec![int(0); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = int(1);
            c[j][i][k] = int(-1);
        }
        let a = LieAlgebroidModel::lie_algebra("so3", &c).unwrap();
        assert!(a.validate(&mut Sampler::new(4), 3).passed());
        let bad: Vec<Vec<Vec<Rat>>> = vec![vec![vec![int(1)]]];
        assert!(LieAlgebroidModel::lie_algebra("bad", &bad).is_err());
    }

    #[test]
    fn custom_family_is_unregistered() {
        let p = pair_groupoid(1);
        let g = CoordGroupoid::new(
            "c",
            Family::Custom,
            1,
            2,
            p.src_map().clone(),
            p.tgt_map().clone(),
            p.unit_map().clone(),
            p.inv_map().clone(),
            p.comp_map().clone(),
        )
        .unwrap();
        assert!(matches!(lie_algebroid(&g), Err(CoordError::Unregistered(_))));
    }

    #[test]
    fn morphism_check_detects_wrong_anchor() {
        let mut s = Sampler::new(6);
        let a = lie_algebroid(&pair_groupoid(2)).unwrap();
        let secs = a.section_family(&mut s, 2);
        let id = BundleMap::constant(PolyMap::identity(2), &Mat::identity(2));
        let mut r = CheckReport::new();
        check_morphism(&mut r, "id", &a, &a, &id, &secs, &mut s);
        assert!(r.passed());
        let twice = BundleMap::constant(PolyMap::identity(2), &Mat::identity(2).scale(&int(2)));
        let mut r = CheckReport::new();
        check_morphism(&mut r, "twice", &a, &a, &twice, &secs, &mut s);
        assert!(!r.passed());
    }
}
