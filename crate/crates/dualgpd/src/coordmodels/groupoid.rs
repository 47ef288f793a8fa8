use serde::Serialize;

use super::check::CheckReport;
use super::CoordError;
use crate::exactcalc::{vector, Mat, PolyMap, Rat, Sampler};

/// Which registered construction produced a groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Pair(usize),
    VectorSpace(usize),
    Product(Vec<Family>),
    Tangent(Box<Family>),
    Cotangent(Box<Family>),
    /// Side, core, dual or prolonged groupoid built from a registered model.
    Derived(String),
    /// Supplied from outside; validated but not accepted by the Lie functor.
    Custom,
}

impl Family {
    pub fn is_registered(&self) -> bool {
        match self {
            Family::Custom => false,
            Family::Product(parts) => parts.iter().all(Family::is_registered),
            Family::Tangent(f) | Family::Cotangent(f) => f.is_registered(),
            _ => true,
        }
    }
}

/// Groupoid on coordinate spaces: arrows `R^arrow_dim` over objects `R^base_dim`.
/// `comp` takes `(h, g)` concatenated and returns `hg`; it is only meaningful when `src(h) = tgt(g)`.
/// The source map is affine and onto, which gives the parametrization
/// `starting(m, p) = R(m - b) + K p` of the arrows leaving `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordGroupoid {
    pub name: String,
    pub family: Family,
    base_dim: usize,
    arrow_dim: usize,
    src: PolyMap,
    tgt: PolyMap,
    unit: PolyMap,
    inv: PolyMap,
    comp: PolyMap,
    starting: PolyMap,
}

fn shape(what: &str, f: &PolyMap, dom: usize, codom: usize) -> Result<(), CoordError> {
    if f.dom() == dom && f.codom() == codom {
        Ok(())
    } else {
        Err(CoordError::Shape(format!("{what}: {}->{} expected {dom}->{codom}", f.dom(), f.codom())))
    }
}

impl CoordGroupoid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        family: Family,
        base_dim: usize,
        arrow_dim: usize,
        src: PolyMap,
        tgt: PolyMap,
        unit: PolyMap,
        inv: PolyMap,
        comp: PolyMap,
    ) -> Result<Self, CoordError> {
        shape("source", &src, arrow_dim, base_dim)?;
        shape("target", &tgt, arrow_dim, base_dim)?;
        shape("identity", &unit, base_dim, arrow_dim)?;
        shape("inverse", &inv, arrow_dim, arrow_dim)?;
        shape("composition", &comp, 2 * arrow_dim, arrow_dim)?;
        let name = name.into();
        let (a, b) = src.affine_parts().map_err(|_| CoordError::Unregistered(format!("{name}: source map is not affine")))?;
        let right = a.right_inverse().map_err(|_| CoordError::NotSurjective(format!("{name}: source map")))?;
        let kernel = a.kernel().canonical_basis();
        let lin = Mat::hstack(&[&right, &kernel]);
        let offset = vector::neg(&right.mul_vec(&b));
        let starting = PolyMap::affine(&lin, &offset);
        Ok(CoordGroupoid { name, family, base_dim, arrow_dim, src, tgt, unit, inv, comp, starting })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn arrow_dim(&self) -> usize {
        self.arrow_dim
    }

    /// Dimension of the source fibres.
    pub fn param_dim(&self) -> usize {
        self.starting.dom() - self.base_dim
    }

    pub fn src_map(&self) -> &PolyMap {
        &self.src
    }

    pub fn tgt_map(&self) -> &PolyMap {
        &self.tgt
    }

    pub fn unit_map(&self) -> &PolyMap {
        &self.unit
    }

    pub fn inv_map(&self) -> &PolyMap {
        &self.inv
    }

    pub fn comp_map(&self) -> &PolyMap {
        &self.comp
    }

    /// `(m, p)` to the arrow with source `m` and fibre parameter `p`.
    pub fn starting_map(&self) -> &PolyMap {
        &self.starting
    }

    pub fn src(&self, g: &[Rat]) -> Vec<Rat> {
        self.src.eval(g).expect("arrow coordinates")
    }

    pub fn tgt(&self, g: &[Rat]) -> Vec<Rat> {
        self.tgt.eval(g).expect("arrow coordinates")
    }

    pub fn unit(&self, m: &[Rat]) -> Vec<Rat> {
        self.unit.eval(m).expect("object coordinates")
    }

    pub fn inv(&self, g: &[Rat]) -> Vec<Rat> {
        self.inv.eval(g).expect("arrow coordinates")
    }

    pub fn compose(&self, h: &[Rat], g: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        if self.src(h) != self.tgt(g) {
            return Err(CoordError::NotComposable(self.name.clone()));
        }
        Ok(self.comp.eval(&vector::concat(&[h, g]))?)
    }

    pub fn arrow_from(&self, m: &[Rat], p: &[Rat]) -> Vec<Rat> {
        self.starting.eval(&vector::concat(&[m, p])).expect("parameters")
    }

    pub fn random_object(&self, s: &mut Sampler) -> Vec<Rat> {
        s.vector(self.base_dim)
    }

    pub fn random_arrow_from(&self, m: &[Rat], s: &mut Sampler) -> Vec<Rat> {
        let p = s.vector(self.param_dim());
        self.arrow_from(m, &p)
    }

    pub fn random_arrow(&self, s: &mut Sampler) -> Vec<Rat> {
        let m = self.random_object(s);
        self.random_arrow_from(&m, s)
    }

    /// Random `(h, g)` with `src(h) = tgt(g)`.
    pub fn random_composable(&self, s: &mut Sampler) -> (Vec<Rat>, Vec<Rat>) {
        let g = self.random_arrow(s);
        let h = self.random_arrow_from(&self.tgt(&g), s);
        (h, g)
    }

    pub fn is_affine(&self) -> bool {
        [&self.src, &self.tgt, &self.unit, &self.inv, &self.comp].iter().all(|f| f.is_affine())
    }

    /// Registered and affine: the families on which the Lie functor and its prolongations are implemented.
    pub fn require_registered(&self) -> Result<(), CoordError> {
        if self.family.is_registered() && self.is_affine() {
            Ok(())
        } else {
            Err(CoordError::Unregistered(self.name.clone()))
        }
    }

    /// Jacobian of `f` at `x`.
    fn jac(f: &PolyMap, x: &[Rat]) -> Mat {
        f.jacobian_at(x).expect("coordinates")
    }

    pub fn src_jacobian(&self, g: &[Rat]) -> Mat {
        Self::jac(&self.src, g)
    }

    pub fn tgt_jacobian(&self, g: &[Rat]) -> Mat {
        Self::jac(&self.tgt, g)
    }

    pub fn unit_jacobian(&self, m: &[Rat]) -> Mat {
        Self::jac(&self.unit, m)
    }

    pub fn inv_jacobian(&self, g: &[Rat]) -> Mat {
        Self::jac(&self.inv, g)
    }

    /// Jacobian of the composition at `(h, g)`, blocks `[d/dh | d/dg]`.
    pub fn comp_jacobian(&self, h: &[Rat], g: &[Rat]) -> Mat {
        Self::jac(&self.comp, &vector::concat(&[h, g]))
    }

    /// Derivative of `L_g: x -> gx` at `1_{src g}`.
    pub fn left_translation(&self, g: &[Rat]) -> Mat {
        let n = self.arrow_dim;
        self.comp_jacobian(g, &self.unit(&self.src(g))).select_cols(&(n..2 * n).collect::<Vec<_>>())
    }

    /// Derivative of `R_g: x -> xg` at `1_{tgt g}`.
    pub fn right_translation(&self, g: &[Rat]) -> Mat {
        let n = self.arrow_dim;
        self.comp_jacobian(&self.unit(&self.tgt(g)), g).select_cols(&(0..n).collect::<Vec<_>>())
    }

    /// Checks every groupoid axiom on the parametrized families of composable pairs and triples.
    pub fn validate(&self, s: &mut Sampler) -> CheckReport {
        let (b, f) = (self.base_dim, self.param_dim());
        let n = b + 3 * f;
        let block = |start: usize, len: usize| PolyMap::projection(n, &(start..start + len).collect::<Vec<_>>());
        let after = |outer: &PolyMap, inner: &PolyMap| outer.compose(inner).expect("dimensions");
        let pair = |a: &PolyMap, c: &PolyMap| PolyMap::concat(&[a, c]).expect("same domain");
        let m = block(0, b);
        let g = after(&self.starting, &pair(&m, &block(b, f)));
        let h = after(&self.starting, &pair(&after(&self.tgt, &g), &block(b + f, f)));
        let k = after(&self.starting, &pair(&after(&self.tgt, &h), &block(b + 2 * f, f)));
        let comp = |x: &PolyMap, y: &PolyMap| after(&self.comp, &pair(x, y));
        let unit_at = |x: &PolyMap| after(&self.unit, x);
        let (src_g, tgt_g) = (after(&self.src, &g), after(&self.tgt, &g));
        let hg = comp(&h, &g);
        let inv_g = after(&self.inv, &g);

        let mut r = CheckReport::new();
        r.maps("arrows leave their parameter object", &src_g, &m, s);
        r.maps("source of identity", &after(&self.src, &unit_at(&m)), &m, s);
        r.maps("target of identity", &after(&self.tgt, &unit_at(&m)), &m, s);
        r.maps("source of composite", &after(&self.src, &hg), &src_g, s);
        r.maps("target of composite", &after(&self.tgt, &hg), &after(&self.tgt, &h), s);
        r.maps("left identity", &comp(&unit_at(&tgt_g), &g), &g, s);
        r.maps("right identity", &comp(&g, &unit_at(&src_g)), &g, s);
        r.maps("source of inverse", &after(&self.src, &inv_g), &tgt_g, s);
        r.maps("target of inverse", &after(&self.tgt, &inv_g), &src_g, s);
        r.maps("left inverse", &comp(&inv_g, &g), &unit_at(&src_g), s);
        r.maps("right inverse", &comp(&g, &inv_g), &unit_at(&tgt_g), s);
        r.maps("associativity", &comp(&comp(&k, &h), &g), &comp(&k, &hg), s);
        r
    }

    pub fn validated(self, s: &mut Sampler) -> Result<Self, CoordError> {
        let report = self.validate(s);
        match report.first_failure() {
            None => Ok(self),
            Some(c) => Err(CoordError::Invalid(format!("{}: {} at {:?}", self.name, c.name, c.witness))),
        }
    }
}

/// `M x M ⇉ M` on `R^n`: `β(x,y) = x`, `α(x,y) = y`, `(x,y)(y,z) = (x,z)`.
pub fn pair_groupoid(n: usize) -> CoordGroupoid {
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    let diag: Vec<usize> = first.iter().chain(&first).copied().collect();
    let swapped: Vec<usize> = second.iter().chain(&first).copied().collect();
    // (h, g) = (x, y, y', z) -> (x, z)
    let outer: Vec<usize> = first.iter().copied().chain(3 * n..4 * n).collect();
    CoordGroupoid::new(
        format!("pair({n})"),
        Family::Pair(n),
        n,
        2 * n,
        PolyMap::projection(2 * n, &second),
        PolyMap::projection(2 * n, &first),
        PolyMap::projection(n, &diag),
        PolyMap::projection(2 * n, &swapped),
        PolyMap::projection(4 * n, &outer),
    )
    .expect("pair groupoid")
}

/// `R^n` as a group under addition, over a point.
pub fn vector_space_groupoid(n: usize) -> CoordGroupoid {
    let sum = PolyMap::linear(&Mat::hstack(&[&Mat::identity(n), &Mat::identity(n)]));
    CoordGroupoid::new(
        format!("vector({n})"),
        Family::VectorSpace(n),
        0,
        n,
        PolyMap::linear(&Mat::zeros(0, n)),
        PolyMap::linear(&Mat::zeros(0, n)),
        PolyMap::linear(&Mat::zeros(n, 0)),
        PolyMap::linear(&-&Mat::identity(n)),
        sum,
    )
    .expect("vector space groupoid")
}

/// Product groupoid with arrows and objects concatenated in order.
pub fn product_groupoid(parts: &[&CoordGroupoid]) -> CoordGroupoid {
    let arrow_dim: usize = parts.iter().map(|g| g.arrow_dim).sum();
    let base_dim: usize = parts.iter().map(|g| g.base_dim).sum();
    let pick = |f: fn(&CoordGroupoid) -> &PolyMap| PolyMap::product(&parts.iter().map(|g| f(g)).collect::<Vec<_>>());
    // Reorder (h_1..h_r, g_1..g_r) into (h_1, g_1, ..., h_r, g_r) before the product composition.
    let mut order = Vec::with_capacity(2 * arrow_dim);
    let mut offset = 0;
    for g in parts {
        order.extend(offset..offset + g.arrow_dim);
        order.extend(arrow_dim + offset..arrow_dim + offset + g.arrow_dim);
        offset += g.arrow_dim;
    }
    let comp = pick(|g| &g.comp).compose(&PolyMap::projection(2 * arrow_dim, &order)).expect("dimensions");
    CoordGroupoid::new(
        parts.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(" x "),
        Family::Product(parts.iter().map(|g| g.family.clone()).collect()),
        base_dim,
        arrow_dim,
        pick(|g| &g.src),
        pick(|g| &g.tgt),
        pick(|g| &g.unit),
        pick(|g| &g.inv),
        comp,
    )
    .expect("product of groupoids")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::{int, Poly};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn pair_examples() {
        let g = pair_groupoid(1);
        assert_eq!(g.compose(&ints(&[3, 5]), &ints(&[5, 9])).unwrap(), ints(&[3, 9]));
        assert_eq!(g.unit(&ints(&[4])), ints(&[4, 4]));
        assert_eq!(g.inv(&ints(&[2, 7])), ints(&[7, 2]));
        assert!(g.compose(&ints(&[3, 5]), &ints(&[4, 9])).is_err());
    }

    #[test]
    fn registered_models_validate_symbolically() {
        let mut s = Sampler::new(3);
        let p2 = pair_groupoid(2);
        let v = vector_space_groupoid(2);
        for g in [pair_groupoid(0), pair_groupoid(1), p2.clone(), v.clone(), product_groupoid(&[&p2, &v])] {
            let r = g.validate(&mut s);
            assert!(r.passed(), "{}: {:?}", g.name, r.first_failure());
            assert!(r.checks.iter().all(|c| c.mode == super::super::check::CheckMode::Symbolic));
        }
    }

    #[test]
    fn broken_composition_is_caught() {
        let mut s = Sampler::new(4);
        let g = pair_groupoid(1);
        let x = |i| Poly::var(4, i);
        let bad = PolyMap::new(4, vec![x(0), &x(3) + &(&x(1) - &x(2)).scale(&int(0))]).unwrap();
        let ok = CoordGroupoid::new("p", Family::Custom, 1, 2, g.src.clone(), g.tgt.clone(), g.unit.clone(), g.inv.clone(), bad)
            .unwrap();
        assert!(ok.validate(&mut s).passed());
        let worse = PolyMap::new(4, vec![x(0), &x(3) + &x(0)]).unwrap();
        let broken =
            CoordGroupoid::new("p", Family::Custom, 1, 2, g.src.clone(), g.tgt.clone(), g.unit.clone(), g.inv.clone(), worse)
                .unwrap();
        let r = broken.validate(&mut s);
        let f = r.first_failure().unwrap();
        assert!(f.witness.is_some(), "{f:?}");
    }

    #[test]
    fn translations_of_pair() {
        let g = pair_groupoid(1);
        let arrow = ints(&[2, 5]);
        assert_eq!(g.left_translation(&arrow), Mat::from_ints(&[&[0, 0], &[0, 1]]));
        assert_eq!(g.right_translation(&arrow), Mat::from_ints(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn starting_parametrizes_source_fibres() {
        let mut s = Sampler::new(9);
        let g = product_groupoid(&[&pair_groupoid(2), &vector_space_groupoid(1)]);
        for _ in 0..10 {
            let m = g.random_object(&mut s);
            let a = g.random_arrow_from(&m, &mut s);
            assert_eq!(g.src(&a), m);
        }
    }
}
