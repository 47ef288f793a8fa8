//! `TG` over a Poisson groupoid as a Poisson VB-groupoid: morphic sections of `T*G`, the linear
//! functions they define, and the LA-groupoid `T*G ⇉ A*G` in both directions.

use super::bivector::{algebroid_from_linear_poisson, lie_poisson_checks, lie_poisson_from_algebroid, OneForm, PolyBivector};
use super::groupoid::{check_multiplicative, Multiplicativity, PoissonCoordGroupoid};
use super::lagroupoid::la_groupoid_checks;
use super::PoissonError;
use crate::coordmodels::{
    cotangent_groupoid, linear_part, morphism_checks, tangent_groupoid, tangent_vb, vector_space_groupoid, Check, CheckReport,
    CoordGroupoid, CotangentGroupoid, LieAlgebroidModel, Section,
};
use crate::exactcalc::{int, vector, Mat, Poly, PolyMap, Rat, Sampler};

/// Sections of `T*G` generated per run, before perturbation.
pub const MIN_SECTIONS: usize = 10;

fn pull_back(f: &Poly, along: &PolyMap) -> Poly {
    f.compose(along.components()).expect("base coordinates")
}

/// `Jᵀ θ(f(g))` for an affine `f: G → M`.
fn pull_back_form(theta: &OneForm, f: &PolyMap) -> OneForm {
    let jac = linear_part(f);
    let n = f.dom();
    (0..n)
        .map(|i| {
            theta
                .iter()
                .enumerate()
                .fold(Poly::zero(n), |acc, (a, t)| &acc + &pull_back(t, f).scale(jac.get(a, i)))
        })
        .collect()
}

/// `β*θ - α*θ`.
pub fn morphic_section(g: &CoordGroupoid, theta: &OneForm) -> OneForm {
    let (b, a) = (pull_back_form(theta, g.tgt_map()), pull_back_form(theta, g.src_map()));
    b.iter().zip(&a).map(|(x, y)| x - y).collect()
}

/// `ξ + β*θ`, which is not morphic unless `θ = 0`.
pub fn perturbed_section(g: &CoordGroupoid, xi: &OneForm, theta: &OneForm) -> OneForm {
    xi.iter().zip(pull_back_form(theta, g.tgt_map())).map(|(x, y)| x + &y).collect()
}

/// Coordinate forms `dx_i`, fibre-linear forms `x_a dx_i`, and `random` forms with degree-2 coefficients.
pub fn form_family(dim: usize, s: &mut Sampler, random: usize) -> Vec<OneForm> {
    let unit = |i: usize, c: Poly| -> OneForm { (0..dim).map(|k| if k == i { c.clone() } else { Poly::zero(dim) }).collect() };
    let mut out: Vec<OneForm> = (0..dim).map(|i| unit(i, Poly::constant(dim, int(1)))).collect();
    for a in 0..dim {
        for i in 0..dim {
            out.push(unit(i, Poly::var(dim, a)));
        }
    }
    out.extend((0..random).map(|_| (0..dim).map(|_| s.poly(dim, 2)).collect()));
    out
}

/// `ℓ_ξ(g, v) = <ξ(g), v>` on `TG`.
fn linear_function(xi: &OneForm) -> PolyMap {
    let n = xi.len();
    let f = xi
        .iter()
        .enumerate()
        .fold(Poly::zero(2 * n), |acc, (i, p)| &acc + &(&p.shift(2 * n, 0) * &Poly::var(2 * n, n + i)));
    PolyMap::new(2 * n, vec![f]).expect("one component")
}

fn eval(p: &[Poly], x: &[Rat]) -> Vec<Rat> {
    p.iter().map(|q| q.eval(x).expect("point dimension")).collect()
}

/// What one section of `T*G` does: whether `ℓ_ξ` and `ξ` are morphisms, and the section `Y` of `A*G` it covers.
struct SectionAnalysis {
    linear: CheckReport,
    morphic: CheckReport,
    covered: Section,
}

struct Context<'a> {
    g: &'a CoordGroupoid,
    cot: CotangentGroupoid,
    tangent: CoordGroupoid,
    reals: CoordGroupoid,
}

impl Context<'_> {
    fn analyze(&self, xi: &OneForm, s: &mut Sampler) -> SectionAnalysis {
        let (n, b) = (self.g.arrow_dim(), self.g.base_dim());
        let mut linear = CheckReport::new();
        let on_tm = PolyMap::new(2 * b, vec![]).expect("empty map");
        morphism_checks(&mut linear, "ℓ_ξ", &self.tangent, &self.reals, &linear_function(xi), &on_tm, s);
        let sigma = PolyMap::concat(&[&PolyMap::identity(n), &PolyMap::new(n, xi.clone()).expect("form on G")]).expect("dims");
        let on_base = self.cot.total.tgt_map().compose(&sigma.compose(self.g.unit_map()).expect("dims")).expect("dims");
        let mut morphic = CheckReport::new();
        morphism_checks(&mut morphic, "ξ", self.g, &self.cot.total, &sigma, &on_base, s);
        let covered = on_base.components()[b..].to_vec();
        SectionAnalysis { linear, morphic, covered }
    }

    /// `<ξ(g), TR_g φ>` for `φ ∈ A_{β(g)}G` in the canonical basis.
    fn on_right_translate(&self, xi: &OneForm, g: &[Rat], phi: &[Rat]) -> Rat {
        let v = (&self.g.right_translation(g) * &self.cot.algebroid_basis).mul_vec(phi);
        vector::dot(&eval(xi, g), &v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphicSectionReport {
    pub report: CheckReport,
    pub sections: usize,
    /// Failing checks of perturbed sections, with witnesses.
    pub rejections: Vec<Check>,
}

/// Morphic sections `ξ` of `T*G` over sections `Y` of `A*G`: `ℓ_ξ` multiplicative exactly when
/// `ξ` is morphic, `ℓ_ξ(TR_g φ) = <Y(βg), φ>`, `ξ(1_m) = 1̃_{Y(m)}`, and Koszul brackets of
/// morphic sections are morphic over the brackets of `A*G`.
pub fn morphic_section_checks(pg: &PoissonCoordGroupoid, s: &mut Sampler, random: usize) -> Result<MorphicSectionReport, PoissonError> {
    let g = &pg.groupoid;
    let b = g.base_dim();
    let mult = check_multiplicative(pg, s)?;
    let dual = mult.dual_algebroid("A*G");
    let ctx = Context { g, cot: cotangent_groupoid(g)?, tangent: tangent_groupoid(g)?, reals: vector_space_groupoid(1) };
    let r_dim = ctx.cot.algebroid_basis.cols();
    let extra = random.max(MIN_SECTIONS.saturating_sub(b + b * b));
    let forms = form_family(b, s, extra);
    let sections: Vec<OneForm> = forms.iter().map(|t| morphic_section(g, t)).collect();
    let mut report = CheckReport::new();
    report.extend_prefixed("G", mult.report.clone());
    report.exact("section family is large enough", sections.len() >= MIN_SECTIONS, format!("{} sections", sections.len()));
    let frame = Mat::hstack(&[&ctx.cot.vb.unit_lin, &ctx.cot.core_elements()?]).inverse()?;

    let mut covered = Vec::with_capacity(sections.len());
    for xi in &sections {
        let a = ctx.analyze(xi, s);
        report.exact("ℓ_ξ multiplicative iff ξ morphic", a.linear.passed() == a.morphic.passed(), "morphic section");
        report.extend_prefixed("morphic section", a.linear);
        report.extend_prefixed("morphic section", a.morphic);
        let (arrow, phi) = (g.random_arrow(s), s.vector(r_dim));
        let y_at = eval(&a.covered, &g.tgt(&arrow));
        report.point("ℓ_ξ(TR_g φ) = <Y(βg), φ>", &arrow, &[ctx.on_right_translate(xi, &arrow, &phi)], &[vector::dot(&y_at, &phi)]);
        let m = g.random_object(s);
        let split = frame.mul_vec(&eval(xi, &g.unit(&m)));
        report.point("ξ(1_m) = 1̃_{Y(m)}", &m, &split[..r_dim], &eval(&a.covered, &m));
        report.point("ξ(1_m) has no core component", &m, &split[r_dim..], &vector::zeros(b));
        covered.push(a.covered);
    }

    for t in 0..sections.len() {
        let u = (t + 1) % sections.len();
        let bracket = pg.pi.koszul_bracket(&sections[t], &sections[u])?;
        let a = ctx.analyze(&bracket, s);
        report.extend_prefixed("bracket of morphic sections", a.morphic);
        let expected = dual.bracket(&covered[t], &covered[u]);
        let as_map = |p: &Section| PolyMap::new(b, p.clone()).expect("section on M");
        report.maps("bracket covers the bracket of A*G", &as_map(&a.covered), &as_map(&expected), s);
        let (arrow, phi) = (g.random_arrow(s), s.vector(r_dim));
        let y_at = eval(&expected, &g.tgt(&arrow));
        report.point(
            "ℓ_[ξ,ξ₁](TR_g φ) = <[Y,Y₁](βg), φ>",
            &arrow,
            &[ctx.on_right_translate(&bracket, &arrow, &phi)],
            &[vector::dot(&y_at, &phi)],
        );
    }

    let mut rejections = Vec::new();
    for (t, xi) in sections.iter().enumerate() {
        let theta = &forms[(t + 1) % forms.len()];
        let bad = perturbed_section(g, xi, theta);
        let a = ctx.analyze(&bad, s);
        report.exact("ℓ_ξ multiplicative iff ξ morphic", a.linear.passed() == a.morphic.passed(), "perturbed section");
        match a.linear.first_failure() {
            Some(c) if c.witness.is_some() => {
                report.exact("perturbed section is rejected with a witness", true, c.name.clone());
                rejections.push(c.clone());
            }
            _ => {
                report.exact("perturbed section is rejected with a witness", false, format!("section {t}"));
            }
        }
    }
    Ok(MorphicSectionReport { report, sections: sections.len(), rejections })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LapvbDirection {
    /// Algebroid structures on the dual of `TG`.
    Forward,
    /// A bivector on the dual of the LA-groupoid `T*G ⇉ A*G`.
    Converse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LapvbReport {
    pub direction: LapvbDirection,
    pub report: CheckReport,
}

struct Structures {
    mult: Multiplicativity,
    cot: CotangentGroupoid,
    on_cotangent: LieAlgebroidModel,
    on_side: LieAlgebroidModel,
    on_core: LieAlgebroidModel,
}

fn structures(pg: &PoissonCoordGroupoid, s: &mut Sampler) -> Result<Structures, PoissonError> {
    let mult = check_multiplicative(pg, s)?;
    let cot = cotangent_groupoid(&pg.groupoid)?;
    let on_cotangent = pg.pi.cotangent_algebroid("T*G")?;
    let on_side = mult.dual_algebroid("A*G");
    let on_core = mult.base_bivector()?.cotangent_algebroid("T*M")?;
    Ok(Structures { mult, cot, on_cotangent, on_side, on_core })
}

pub fn verify_lapvb(direction: LapvbDirection, pg: &PoissonCoordGroupoid, s: &mut Sampler) -> Result<LapvbReport, PoissonError> {
    let st = structures(pg, s)?;
    let mut report = CheckReport::new();
    report.extend_prefixed("G", st.mult.report.clone());
    let g = &pg.groupoid;
    match direction {
        LapvbDirection::Forward => {
            la_groupoid_checks(&mut report, "T*G", &st.cot.vb, &st.on_cotangent, &st.on_side, s)?;
            let at_unit = pg.pi.matrix_at(&g.unit(&vector::zeros(g.base_dim())))?;
            let core_anchor = &(&linear_part(g.tgt_map()) * &at_unit.transpose()) * &st.cot.core_elements()?;
            let zero = vector::zeros(g.base_dim());
            report.matrices("core anchor of T*G is the anchor of T*M", &core_anchor, &st.on_core.anchor_at(&zero));
            report.matrices("anchor of T*M is a_* ∘ a*", &st.on_core.anchor_at(&zero), &st.mult.base_sharp());
            report.extend_prefixed("T*M", st.on_core.validate(s, 2));
        }
        LapvbDirection::Converse => {
            let on_tangent = lie_poisson_from_algebroid(&st.on_cotangent)?;
            report.exact("bivector on TG is Poisson", on_tangent.is_poisson(), "");
            report.extend_prefixed("TG", lie_poisson_checks(&st.on_cotangent, &on_tangent, s, 2));
            let back = algebroid_from_linear_poisson("T*G", &on_tangent, g.arrow_dim())?;
            report.exact("dual of the bivector on TG is the algebroid on T*G", back == st.on_cotangent, "");

            let tangent = tangent_groupoid(g)?;
            let poisson_tangent = PoissonCoordGroupoid::new(tangent, on_tangent)?;
            let tm = check_multiplicative(&poisson_tangent, s)?;
            report.extend_prefixed("TG ⇉ TM", tm.report.clone());
            let on_tm = lie_poisson_from_algebroid(&st.on_core)?;
            let induced = tm.base_bivector()?;
            report.exact("TG ⇉ TM induces the bivector dual to T*M", induced == on_tm, "");

            let dual = st.cot.vb.dual()?;
            let tvb = tangent_vb(g)?;
            let frame = &dual.src_lin * &tvb.src_lin.right_inverse()?;
            let reframed = tvb.reframe_side(&frame)?;
            let same = reframed.src_lin == dual.src_lin
                && reframed.tgt_lin == dual.tgt_lin
                && reframed.unit_lin == dual.unit_lin
                && reframed.inv_lin == dual.inv_lin
                && reframed.composition_matrix() == dual.composition_matrix();
            report.exact("dual of T*G is TG", same, "");
            report.exact(
                "core of the dual is dual to A*G",
                dual.core_dim() == st.on_side.rank,
                format!("core {} rank {}", dual.core_dim(), st.on_side.rank),
            );
        }
    }
    Ok(LapvbReport { direction, report })
}

/// `π = 0` on `pair(n)`.
pub fn zero_pair_groupoid(n: usize) -> PoissonCoordGroupoid {
    PoissonCoordGroupoid::new(crate::coordmodels::pair_groupoid(n), PolyBivector::zero(2 * n)).expect("zero bivector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::symplectic_pair_groupoid;

    #[test]
    fn morphic_sections_on_the_symplectic_pair_groupoid() {
        let mut s = Sampler::new(61);
        let m = morphic_section_checks(&symplectic_pair_groupoid(1), &mut s, 2).unwrap();
        assert!(m.report.passed(), "{:?}", m.report.first_failure());
        assert!(m.sections >= MIN_SECTIONS);
        assert_eq!(m.rejections.len(), m.sections);
        assert!(m.rejections.iter().all(|c| c.name.starts_with("ℓ_ξ")));
    }

    #[test]
    fn forward_and_converse_pass() {
        let mut s = Sampler::new(62);
        for pg in [symplectic_pair_groupoid(1), zero_pair_groupoid(1)] {
            for d in [LapvbDirection::Forward, LapvbDirection::Converse] {
                let r = verify_lapvb(d, &pg, &mut s).unwrap();
                assert!(r.report.passed(), "{} {d:?}: {:?}", pg.groupoid.name, r.report.first_failure());
            }
        }
    }
}
