//! Poisson groupoids and Poisson double groupoids on registered coordinate models.

use super::bivector::{standard_symplectic_matrix, PolyBivector};
use super::PoissonError;
use crate::coordmodels::{
    cotangent_groupoid, m4_double_groupoid, pair_groupoid, tangent_groupoid, CheckReport, CoordDoubleGroupoid, CoordGroupoid,
    LieAlgebroidModel,
};
use crate::exactcalc::{vector, Mat, Poly, PolyMap, Sampler};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonCoordGroupoid {
    pub groupoid: CoordGroupoid,
    pub pi: PolyBivector,
}

impl PoissonCoordGroupoid {
    pub fn new(groupoid: CoordGroupoid, pi: PolyBivector) -> Result<Self, PoissonError> {
        if pi.dim() != groupoid.arrow_dim() {
            return Err(PoissonError::Shape(format!("{}: bivector on R^{} for arrows in R^{}", groupoid.name, pi.dim(), groupoid.arrow_dim())));
        }
        pi.require_poisson()?;
        Ok(PoissonCoordGroupoid { groupoid, pi })
    }
}

/// `π^#: T*G → TG` as a morphism over `a_*: A*G → TM`, with its core map `T*M → AG`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicativity {
    pub report: CheckReport,
    /// `a_*` on coordinates dual to the canonical basis of `AG`.
    pub dual_anchor: Mat,
    /// `a: AG → TM`.
    pub anchor: Mat,
    /// Core map of `π^#` in the canonical basis of `AG`.
    pub core_map: Mat,
}

impl Multiplicativity {
    /// `π_P^# = a_* ∘ a*`.
    pub fn base_sharp(&self) -> Mat {
        &self.dual_anchor * &self.anchor.transpose()
    }

    /// The base bivector, whose sharp map is [`Self::base_sharp`].
    pub fn base_bivector(&self) -> Result<PolyBivector, PoissonError> {
        PolyBivector::constant(&self.base_sharp().transpose())
    }

    /// `A*G` with anchor `a_*`; brackets of constant sections vanish for a constant bivector on an affine groupoid.
    pub fn dual_algebroid(&self, name: impl Into<String>) -> LieAlgebroidModel {
        LieAlgebroidModel::with_constant_anchor(name, &self.dual_anchor)
    }
}

/// `(g, Φ) ↦ (g, π^#_g Φ)` on the total coordinates of `T*G` and `TG`.
fn sharp_map(pi: &PolyBivector) -> PolyMap {
    let n = pi.dim();
    let lift = |p: &Poly| p.shift(2 * n, 0);
    let mut comps: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n, i)).collect();
    for j in 0..n {
        comps.push((0..n).fold(Poly::zero(2 * n), |acc, i| &acc + &(&Poly::var(2 * n, n + i) * &lift(pi.entry(i, j)))));
    }
    PolyMap::new(2 * n, comps).expect("arrow and fibre variables")
}

fn after(f: &PolyMap, x: &PolyMap) -> PolyMap {
    f.compose(x).expect("composable dimensions")
}

/// Whether `π^#` is a morphism of groupoids `T*G ⇉ A*G → TG ⇉ TM`, and its base and core maps.
pub fn check_multiplicative(g: &PoissonCoordGroupoid, s: &mut Sampler) -> Result<Multiplicativity, PoissonError> {
    let grp = &g.groupoid;
    grp.require_registered()?;
    let cot = cotangent_groupoid(grp)?;
    let tg = tangent_groupoid(grp)?;
    let (b, r) = (grp.base_dim(), cot.algebroid_basis.cols());
    let sharp = sharp_map(&g.pi);
    let on_base = after(tg.tgt_map(), &after(&sharp, cot.total.unit_map()));
    let mut report = CheckReport::new();
    let base_part: Vec<usize> = (0..b).collect();
    report.maps(
        "a_* covers the identity of the base",
        &after(&PolyMap::projection(2 * b, &base_part), &on_base),
        &PolyMap::projection(b + r, &base_part),
        s,
    );
    crate::coordmodels::morphism_checks(&mut report, "π^#", &cot.total, &tg, &sharp, &on_base, s);
    let zero = vector::zeros(b + r);
    let dual_anchor = on_base.jacobian_at(&zero)?.select_rows(&(b..2 * b).collect::<Vec<_>>()).select_cols(&(b..b + r).collect::<Vec<_>>());
    if !on_base.is_affine() {
        return Err(PoissonError::NotConstant(format!("{}: a_* varies along the base", grp.name)));
    }
    let at_unit = g.pi.matrix_at(&grp.unit(&vector::zeros(b)))?;
    let pushed = &at_unit.transpose() * &cot.core_elements()?;
    let core_map = match crate::coordmodels::express(&cot.algebroid_basis, &pushed, "core map") {
        Ok(m) => m,
        Err(_) => {
            report.exact("core of T*G maps into AG", false, format!("{:?}", pushed.to_strings()));
            Mat::zeros(r, b)
        }
    };
    report.matrices("core map of π^# is -a_*ᵀ", &core_map, &-&dual_anchor.transpose());
    Ok(Multiplicativity { report, dual_anchor, anchor: cot.anchor.clone(), core_map })
}

/// `diag(target, -source)` on a pair groupoid with arrows `(target, source)`.
pub fn pair_with_reversed(pi: &Mat) -> Result<PoissonCoordGroupoid, PoissonError> {
    let g = pair_groupoid(pi.rows());
    PoissonCoordGroupoid::new(g, PolyBivector::constant(&Mat::block_diag(&[pi, &-pi]))?)
}

/// `M x M̄` over `M = R^{2k}` with the standard symplectic structure.
pub fn symplectic_pair_groupoid(k: usize) -> PoissonCoordGroupoid {
    pair_with_reversed(&standard_symplectic_matrix(k)).expect("symplectic pair groupoid")
}

/// A double groupoid with a bivector on its total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonCoordDouble {
    pub double: CoordDoubleGroupoid,
    pub pi: PolyBivector,
}

/// Both multiplicativity checks, with the induced structures on the sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePredicates {
    pub report: CheckReport,
    /// `S ⇉ V`.
    pub horizontal: Multiplicativity,
    /// `S ⇉ H`.
    pub vertical: Multiplicativity,
}

impl PoissonCoordDouble {
    pub fn new(double: CoordDoubleGroupoid, pi: PolyBivector) -> Result<Self, PoissonError> {
        if pi.dim() != double.total_dim() {
            return Err(PoissonError::Shape(format!("{}: bivector on R^{}", double.name, pi.dim())));
        }
        pi.require_poisson()?;
        Ok(PoissonCoordDouble { double, pi })
    }

    pub fn horizontal(&self) -> PoissonCoordGroupoid {
        PoissonCoordGroupoid { groupoid: self.double.horizontal.clone(), pi: self.pi.clone() }
    }

    pub fn vertical(&self) -> PoissonCoordGroupoid {
        PoissonCoordGroupoid { groupoid: self.double.vertical.clone(), pi: self.pi.clone() }
    }

    /// `H` with the pushforward of `π` along the vertical target.
    pub fn side_h(&self) -> Result<PoissonCoordGroupoid, PoissonError> {
        let l = self.double.vertical.tgt_map().affine_parts()?.0;
        PoissonCoordGroupoid::new(self.double.side_h.clone(), self.pi.pushforward(&l)?)
    }

    /// `V` with the pushforward of `π` along the horizontal target.
    pub fn side_v(&self) -> Result<PoissonCoordGroupoid, PoissonError> {
        let l = self.double.horizontal.tgt_map().affine_parts()?.0;
        PoissonCoordGroupoid::new(self.double.side_v.clone(), self.pi.pushforward(&l)?)
    }

    /// Multiplicativity of `π` for both structures.
    pub fn predicates(&self, s: &mut Sampler) -> Result<DoublePredicates, PoissonError> {
        let horizontal = check_multiplicative(&self.horizontal(), s)?;
        let vertical = check_multiplicative(&self.vertical(), s)?;
        let mut report = CheckReport::new();
        report.extend_prefixed("S ⇉ V", horizontal.report.clone());
        report.extend_prefixed("S ⇉ H", vertical.report.clone());
        Ok(DoublePredicates { report, horizontal, vertical })
    }

    /// The Poisson predicates and nondegeneracy of `π`.
    pub fn symplectic_predicates(&self, s: &mut Sampler) -> Result<DoublePredicates, PoissonError> {
        let mut p = self.predicates(s)?;
        let m = self.pi.constant_matrix().ok_or_else(|| PoissonError::NotConstant(self.double.name.clone()))?;
        let det = m.det()?;
        p.report.exact("π is nondegenerate", det != crate::exactcalc::int(0), format!("det {}", crate::exactcalc::scalar::to_string(&det)));
        Ok(p)
    }

    /// Requires both predicates to pass.
    pub fn require_poisson_double(&self, s: &mut Sampler) -> Result<DoublePredicates, PoissonError> {
        let p = self.predicates(s)?;
        if let Some(c) = p.report.first_failure() {
            return Err(PoissonError::Predicate(format!("{}: {}", self.double.name, c.name)));
        }
        Ok(p)
    }
}

/// `M^4` over `M = R^{2k}` with `π_S = (π, -π, -π, π)` on `(w, x, z, y)`: each structure is
/// `G x Ḡ` for the pair groupoid `G = M x M̄` of its side.
pub fn symplectic_double_m4(k: usize) -> PoissonCoordDouble {
    let p = standard_symplectic_matrix(k);
    let pi = Mat::block_diag(&[&p, &-&p, &-&p, &p]);
    PoissonCoordDouble::new(m4_double_groupoid(2 * k), PolyBivector::constant(&pi).expect("antisymmetric")).expect("constant bivector")
}

/// `M^4` over `R^n` with the zero bivector.
pub fn zero_double_m4(n: usize) -> PoissonCoordDouble {
    PoissonCoordDouble::new(m4_double_groupoid(n), PolyBivector::zero(4 * n)).expect("zero bivector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::int;

    #[test]
    fn symplectic_pair_groupoid_is_multiplicative() {
        let mut s = Sampler::new(31);
        let g = symplectic_pair_groupoid(1);
        let m = check_multiplicative(&g, &mut s).unwrap();
        assert!(m.report.passed(), "{:?}", m.report.first_failure());
        assert_eq!(m.report.checks.iter().filter(|c| c.name.starts_with("π^#")).count(), 5);
        let omega = standard_symplectic_matrix(1);
        // 1̃_θ = (θ, -θ) on (target, source); π^# sends it to (ωᵀθ, ωᵀθ), so a_* = ωᵀ.
        assert_eq!(m.dual_anchor, omega.transpose());
        assert_eq!(m.core_map, -&m.dual_anchor.transpose());
        assert_eq!(m.base_sharp(), omega.transpose());
    }

    #[test]
    fn zero_structure_has_zero_dual_anchor() {
        let mut s = Sampler::new(32);
        let g = PoissonCoordGroupoid::new(pair_groupoid(2), PolyBivector::zero(4)).unwrap();
        let m = check_multiplicative(&g, &mut s).unwrap();
        assert!(m.report.passed());
        assert!(m.dual_anchor.is_zero());
    }

    #[test]
    fn sign_error_on_one_factor_is_caught() {
        let mut s = Sampler::new(33);
        let p = standard_symplectic_matrix(1);
        let bad = PoissonCoordGroupoid::new(pair_groupoid(2), PolyBivector::constant(&Mat::block_diag(&[&p, &p])).unwrap()).unwrap();
        let m = check_multiplicative(&bad, &mut s).unwrap();
        let fail = m.report.first_failure().expect("fails");
        assert!(fail.witness.is_some() || fail.detail.is_some(), "{fail:?}");
    }

    #[test]
    fn unregistered_groupoid_is_refused() {
        let p = pair_groupoid(1);
        let g = CoordGroupoid::new(
            "custom",
            crate::coordmodels::Family::Custom,
            1,
            2,
            p.src_map().clone(),
            p.tgt_map().clone(),
            p.unit_map().clone(),
            p.inv_map().clone(),
            p.comp_map().clone(),
        )
        .unwrap();
        let pg = PoissonCoordGroupoid::new(g, PolyBivector::zero(2)).unwrap();
        assert!(matches!(check_multiplicative(&pg, &mut Sampler::new(1)), Err(PoissonError::Coord(_))));
    }

    #[test]
    fn symplectic_m4_passes_both_predicates() {
        let mut s = Sampler::new(34);
        for k in 1..=2 {
            let sd = symplectic_double_m4(k);
            let det = sd.pi.constant_matrix().unwrap().det().unwrap();
            assert_eq!(det, int(1));
            let p = sd.symplectic_predicates(&mut s).unwrap();
            assert!(p.report.passed(), "k={k}: {:?}", p.report.first_failure());
            // π_P^# = a_* ∘ a* on either side is the standard structure on M.
            let std = standard_symplectic_matrix(k).transpose();
            for side in [sd.side_h().unwrap(), sd.side_v().unwrap()] {
                let m = check_multiplicative(&side, &mut s).unwrap();
                assert!(m.report.passed());
                assert_eq!(m.base_sharp(), std);
            }
        }
    }

    #[test]
    fn zero_m4_is_a_poisson_double() {
        let mut s = Sampler::new(35);
        assert!(zero_double_m4(1).require_poisson_double(&mut s).is_ok());
    }
}
