//! The core maps `D_H`, `D_V` of a Poisson double groupoid and the duality they induce
//! between the side algebroids.

use super::bivector::PolyBivector;
use super::groupoid::{check_multiplicative, DoublePredicates, Multiplicativity, PoissonCoordDouble, PoissonCoordGroupoid};
use super::PoissonError;
use crate::coordmodels::{
    check_morphism, core_of_double, core_projection, cotangent_double, express, jprime_maps, lie_algebroid, linear_part,
    prolonged_vb, BundleMap, CheckReport, CoordDoubleGroupoid, CoreGroupoid, Direction, LieAlgebroidModel,
};
use crate::dvb::{DualHElement, DvbElement};
use crate::exactcalc::{scalar, vector, Mat, PolyMap, Rat, Sampler};

/// Section pairs used for every bracket comparison.
pub const MIN_SECTION_PAIRS: usize = 10;

/// `(A, A*)` over a common base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebroidModel {
    pub a: LieAlgebroidModel,
    pub a_star: LieAlgebroidModel,
}

impl LieBialgebroidModel {
    /// `(A*, Ā)`.
    pub fn flip(&self) -> Self {
        LieBialgebroidModel { a: self.a_star.clone(), a_star: self.a.flip() }
    }

    /// `π^# = a_* ∘ a*` at the origin of the base.
    pub fn base_sharp(&self) -> Mat {
        let x = vector::zeros(self.a.base_dim);
        &self.a_star.anchor_at(&x) * &self.a.anchor_at(&x).transpose()
    }

    pub fn validate(&self, s: &mut Sampler) -> CheckReport {
        let mut r = CheckReport::new();
        r.extend_prefixed(&self.a.name, self.a.validate(s, 2));
        r.extend_prefixed(&self.a_star.name, self.a_star.validate(s, 2));
        r.matrices("both sides induce the same base structure", &self.base_sharp(), &self.flip().base_sharp());
        r
    }
}

/// A side groupoid with its induced bivector and algebroids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideStructure {
    pub poisson: PoissonCoordGroupoid,
    pub mult: Multiplicativity,
    pub bialgebroid: LieBialgebroidModel,
}

fn side_structure(poisson: PoissonCoordGroupoid, label: &str, s: &mut Sampler) -> Result<SideStructure, PoissonError> {
    let mult = check_multiplicative(&poisson, s)?;
    let a = lie_algebroid(&poisson.groupoid)?;
    let a_star = mult.dual_algebroid(format!("A*{label}"));
    Ok(SideStructure { poisson, mult, bialgebroid: LieBialgebroidModel { a, a_star } })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMaps {
    /// `D_H: A*V → AH`, in the canonical bases of `AH` and `AV`.
    pub dh: Mat,
    /// `D_V: A*H → AV`.
    pub dv: Mat,
    /// `ã_{*H}: A*_V S → TH` on fibre coordinates.
    pub dual_anchor_h: Mat,
    /// `ã_{*V}: A*_H S → TV`.
    pub dual_anchor_v: Mat,
    pub predicates: DoublePredicates,
    pub side_h: SideStructure,
    pub side_v: SideStructure,
    /// Canonical basis of `AH` in the tangent space of `H`.
    pub side_basis_h: Mat,
    pub side_basis_v: Mat,
    pub report: CheckReport,
}

/// `D_H`, `D_V` as core maps of the anchors of the dual prolongations, and their relations.
pub fn compute_dmaps(pd: &PoissonCoordDouble, s: &mut Sampler) -> Result<DMaps, PoissonError> {
    let predicates = pd.require_poisson_double(s)?;
    let d = &pd.double;
    let pv = prolonged_vb(d, Direction::Vertical)?;
    let ph = prolonged_vb(d, Direction::Horizontal)?;
    let (side_basis_h, side_basis_v) = (ph.side_basis.clone(), pv.side_basis.clone());
    let dual_anchor_h = predicates.vertical.dual_anchor.clone();
    let dual_anchor_v = predicates.horizontal.dual_anchor.clone();
    let dh = express(&side_basis_h, &(&dual_anchor_h * &pv.vb.dual_core_elements()?), "core map of ã_{*H}")?;
    let dv = express(&side_basis_v, &(&dual_anchor_v * &ph.vb.dual_core_elements()?), "core map of ã_{*V}")?;
    let side_h = side_structure(pd.side_h()?, "H", s)?;
    let side_v = side_structure(pd.side_v()?, "V", s)?;

    let mut report = CheckReport::new();
    report.extend_prefixed("predicates", predicates.report.clone());
    let anchor_v_s = &linear_part(d.vertical.tgt_map()) * &pv.fibre_basis;
    let anchor_h_s = &linear_part(d.horizontal.tgt_map()) * &ph.fibre_basis;
    let pi_h = side_h.poisson.pi.constant_matrix().ok_or_else(|| PoissonError::NotConstant("π_H".into()))?;
    let pi_v = side_v.poisson.pi.constant_matrix().ok_or_else(|| PoissonError::NotConstant("π_V".into()))?;
    report.matrices("π_H^# = ã_{*H} ∘ ã_V^*", &(&dual_anchor_h * &anchor_v_s.transpose()), &pi_h.transpose());
    report.matrices("π_V^# = ã_{*V} ∘ ã_H^*", &(&dual_anchor_v * &anchor_h_s.transpose()), &pi_v.transpose());
    report.extend_prefixed("H", side_h.mult.report.clone());
    report.extend_prefixed("V", side_v.mult.report.clone());
    report.matrices("D_Vᵀ = -D_H", &dv.transpose(), &-&dh);
    report.matrices("a_V ∘ D_V = a_{*H}", &(&side_v.mult.anchor * &dv), &side_h.mult.dual_anchor);
    report.matrices("D_H ∘ a_Vᵀ = -a_{*H}ᵀ", &(&dh * &side_v.mult.anchor.transpose()), &-&side_h.mult.dual_anchor.transpose());
    report.matrices("H and V induce the same base structure", &side_h.mult.base_sharp(), &side_v.mult.base_sharp());
    for (label, side) in [("H", &side_h), ("V", &side_v)] {
        report.matrices(
            &format!("flip of (A{label}, A*{label}) induces the same base structure"),
            &side.bialgebroid.base_sharp(),
            &side.bialgebroid.flip().base_sharp(),
        );
    }
    Ok(DMaps { dh, dv, dual_anchor_h, dual_anchor_v, predicates, side_h, side_v, side_basis_h, side_basis_v, report })
}

/// `C` with the core map of `π_S^#`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorePoisson {
    pub core: CoreGroupoid,
    pub poisson: PoissonCoordGroupoid,
    pub mult: Multiplicativity,
    pub report: CheckReport,
}

/// `π_C^#(σ) = π_S^#(σ ∘ E)`, read in the core chart.
pub fn core_poisson(pd: &PoissonCoordDouble, s: &mut Sampler) -> Result<CorePoisson, PoissonError> {
    let d = &pd.double;
    let core = core_of_double(d, s)?;
    let k = core.groupoid.arrow_dim();
    let c0 = core.embedding.eval(&vector::zeros(k))?;
    let chart = linear_part(&core.embedding);
    let e_chart = express(&chart, &core_projection(d, &c0), "E")?;
    let pushed = &pd.pi.matrix_at(&c0)?.transpose() * &e_chart.transpose();
    let mut report = CheckReport::new();
    let sharp_c = match express(&chart, &pushed, "π_S^# on the core") {
        Ok(m) => {
            report.exact("π_S^# maps the core of T*S into TC", true, "");
            m
        }
        Err(e) => {
            report.exact("π_S^# maps the core of T*S into TC", false, e.to_string());
            return Err(PoissonError::Predicate(format!("{}: core of π_S^#", d.name)));
        }
    };
    let poisson = PoissonCoordGroupoid::new(core.groupoid.clone(), PolyBivector::constant(&sharp_c.transpose())?)?;
    let mult = check_multiplicative(&poisson, s)?;
    report.extend_prefixed("C", mult.report.clone());
    Ok(CorePoisson { core, poisson, mult, report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideDuality {
    pub dmaps: DMaps,
    pub core: CorePoisson,
    pub section_pairs: usize,
    pub report: CheckReport,
}

fn rank_check(r: &mut CheckReport, name: &str, m: &Mat) {
    let rank = m.rank();
    let ok = rank == m.rows() && rank == m.cols();
    r.exact(name, ok, format!("rank {rank} of {}x{}", m.rows(), m.cols()));
}

fn random_sections_for(a: &LieAlgebroidModel) -> usize {
    MIN_SECTION_PAIRS.saturating_sub(a.rank + a.base_dim).max(2)
}

/// Full rank of `D_H`, `D_V`; `C` symplectic and realizing the base structure; `D_V` a morphism
/// of Lie bialgebroids `(A*H, ĀH) → (AV, A*V)` on polynomial sections.
pub fn verify_side_duality(pd: &PoissonCoordDouble, s: &mut Sampler) -> Result<SideDuality, PoissonError> {
    let dmaps = compute_dmaps(pd, s)?;
    let core = core_poisson(pd, s)?;
    let mut report = CheckReport::new();
    report.extend_prefixed("D maps", dmaps.report.clone());
    rank_check(&mut report, "D_H is invertible", &dmaps.dh);
    rank_check(&mut report, "D_V is invertible", &dmaps.dv);

    report.extend_prefixed("core", core.report.clone());
    let pi_c = core.poisson.pi.constant_matrix().expect("constant by construction");
    let det = pi_c.det()?;
    report.exact("π_C is nondegenerate", det != scalar::zero(), format!("det {}", scalar::to_string(&det)));
    report.matrices("a_{*C} ∘ a_C^* = π_P^#", &core.mult.base_sharp(), &dmaps.side_h.mult.base_sharp());

    let (h, v) = (&dmaps.side_h.bialgebroid, &dmaps.side_v.bialgebroid);
    let base = PolyMap::identity(h.a.base_dim);
    let secs = h.a_star.section_family(s, random_sections_for(&h.a_star));
    let on_dual = BundleMap::constant(base.clone(), &dmaps.dv);
    check_morphism(&mut report, "D_V: A*H → AV", &h.a_star, &v.a, &on_dual, &secs, s);
    let secs_v = v.a_star.section_family(s, random_sections_for(&v.a_star));
    let transpose = BundleMap::constant(base, &dmaps.dv.transpose());
    check_morphism(&mut report, "D_Vᵀ: A*V → flipped AH", &v.a_star, &h.a.flip(), &transpose, &secs_v, s);
    let section_pairs = secs.len().min(secs_v.len());
    report.exact("bracket comparisons use enough section pairs", section_pairs >= MIN_SECTION_PAIRS, format!("{section_pairs} pairs"));
    Ok(SideDuality { dmaps, core, section_pairs, report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThmPairs {
    pub cotangent: PoissonCoordDouble,
    pub duality: SideDuality,
    pub report: CheckReport,
}

fn flat(parts: &[&[Rat]]) -> Vec<Rat> {
    vector::concat(parts)
}

/// `T*S` with its canonical symplectic structure: duality of its sides, and both factorizations
/// of its `D` maps through `R^gpd` and `j′`, compared on random elements.
pub fn verify_thm_pairs(d: &CoordDoubleGroupoid, s: &mut Sampler, trials: usize) -> Result<ThmPairs, PoissonError> {
    let data = cotangent_double(d, s)?;
    let cotangent = PoissonCoordDouble::new(data.double.clone(), PolyBivector::canonical_cotangent(d.total_dim()))?;
    let duality = verify_side_duality(&cotangent, s)?;
    let mut report = CheckReport::new();
    report.extend_prefixed("T*S", duality.report.clone());
    let sym = cotangent.symplectic_predicates(s)?;
    report.extend_prefixed("T*S", CheckReport { checks: sym.report.checks.into_iter().filter(|c| c.name.contains("nondegenerate")).collect() });

    let jp = jprime_maps(&data)?;
    let (pv, ph) = (&data.duality_v, &data.duality_h);
    let dm = &duality.dmaps;
    let split_h = express(&dm.side_basis_h, &Mat::block_diag(&[&pv.base_algebroid, &pv.dual_core]), "A(A*_V S) split frame")?;
    let split_v = express(&dm.side_basis_v, &Mat::block_diag(&[&ph.base_algebroid, &ph.dual_core]), "A(A*_H S) split frame")?;
    let (inv_h, inv_v) = (split_h.inverse()?, split_v.inverse()?);
    let (dual_h, dual_v) = (inv_h.transpose(), inv_v.transpose());
    for _ in 0..trials {
        let dd = ph.dual_dims();
        let f = DualHElement { alpha: s.vector(dd.side_h), b: s.vector(dd.side_v), kappa: s.vector(dd.core) };
        let lhs = split_element(&dual_v, &dm.dh, &inv_h, &f, pv.base_algebroid.cols());
        let rhs = jp.vertical(&ph.r_gpd(&f)?)?;
        report.point("D_H = j′^V ∘ R_H", &flat(&[&f.alpha, &f.b, &f.kappa]), &flat(&[&lhs.a, &lhs.b, &lhs.k]), &flat(&[&rhs.a, &rhs.b, &rhs.k]));

        let dd = pv.dual_dims();
        let f = DualHElement { alpha: s.vector(dd.side_h), b: s.vector(dd.side_v), kappa: s.vector(dd.core) };
        let lhs = split_element(&dual_h, &dm.dv, &inv_v, &f, ph.base_algebroid.cols());
        let rhs = jp.horizontal_inverse(&pv.r_gpd(&f)?)?;
        report.point("D_V = (j′^H)^{-1} ∘ R_V", &flat(&[&f.alpha, &f.b, &f.kappa]), &flat(&[&lhs.a, &lhs.b, &lhs.k]), &flat(&[&rhs.a, &rhs.b, &rhs.k]));
    }
    report.extend_prefixed("Tulczyjew", jp.tulczyjew_checks(s, trials));
    Ok(ThmPairs { cotangent, duality, report })
}

/// Applies a canonical-coordinate `D` map to a split element of `A*(A(Ω*))` and splits the result.
fn split_element(from_dual: &Mat, d_map: &Mat, to_split: &Mat, f: &DualHElement, side_rank: usize) -> DvbElement {
    let zeta = from_dual.mul_vec(&flat(&[&f.alpha, &f.kappa]));
    let xy = to_split.mul_vec(&d_map.mul_vec(&zeta));
    DvbElement { a: xy[..side_rank].to_vec(), b: f.b.clone(), k: xy[side_rank..].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::m4_double_groupoid;
    use crate::poisson::{standard_symplectic_matrix, symplectic_double_m4, zero_double_m4};

    #[test]
    fn m4_dmaps_match_the_pair_example() {
        let mut s = Sampler::new(41);
        for k in 1..=2 {
            let sd = symplectic_double_m4(k);
            let dm = compute_dmaps(&sd, &mut s).unwrap();
            assert!(dm.report.passed(), "k={k}: {:?}", dm.report.first_failure());
            let a_star = &dm.side_h.mult.dual_anchor;
            assert_eq!(dm.side_v.mult.anchor, Mat::identity(2 * k));
            assert_eq!(&dm.dv, a_star);
            assert_eq!(dm.dh, -&a_star.transpose());
            assert_eq!(dm.dv.transpose(), -&dm.dh);
            // T*P → TP induced by the symplectic structure on P.
            assert_eq!(dm.dh, standard_symplectic_matrix(k).transpose());
        }
    }

    #[test]
    fn m4_side_duality_passes() {
        let mut s = Sampler::new(42);
        let sd = verify_side_duality(&symplectic_double_m4(1), &mut s).unwrap();
        assert!(sd.report.passed(), "{:?}", sd.report.first_failure());
        assert!(sd.section_pairs >= MIN_SECTION_PAIRS);
        // C is the pair groupoid of M with the product structure.
        let c = &sd.core.poisson;
        assert_eq!(c.groupoid.arrow_dim(), 4);
        let pi = c.pi.constant_matrix().unwrap();
        let p = standard_symplectic_matrix(1);
        assert_eq!(pi, Mat::block_diag(&[&p, &-&p]));
    }

    #[test]
    fn degenerate_structure_fails_rank_with_witness() {
        let mut s = Sampler::new(43);
        let sd = verify_side_duality(&zero_double_m4(2), &mut s).unwrap();
        let c = sd.report.get("D_H is invertible").unwrap();
        assert!(!c.passed);
        assert_eq!(c.detail.as_deref(), Some("rank 0 of 2x2"));
    }

    #[test]
    fn dri_and_tulczyjew_hold_on_m4() {
        let mut s = Sampler::new(44);
        for n in 1..=2 {
            let t = verify_thm_pairs(&m4_double_groupoid(n), &mut s, 4).unwrap();
            assert!(t.report.passed(), "n={n}: {:?}", t.report.first_failure());
        }
    }
}
