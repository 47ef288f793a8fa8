//! Structure maps of a VB-groupoid carrying algebroid structures on its total space and side,
//! checked as algebroid morphisms.

use super::duality::{core_poisson, MIN_SECTION_PAIRS};
use super::groupoid::PoissonCoordDouble;
use super::PoissonError;
use crate::coordmodels::{
    check_morphism, express, linear_part, prolonged_vb, BundleMap, CheckReport, CoordGroupoid, Direction, LieAlgebroidModel,
    LinearVbGroupoid,
};
use crate::exactcalc::{int, vector, Mat, Poly, PolyMap, Rat, Sampler};

fn random_for(a: &LieAlgebroidModel) -> usize {
    MIN_SECTION_PAIRS.saturating_sub(a.rank + a.base_dim).max(2)
}

/// `(h, g)` as a function of `(g, p)`, with `h` the arrow from `β(g)` with parameter `p`.
fn composable_chart(g: &CoordGroupoid) -> PolyMap {
    let (n, pd) = (g.arrow_dim(), g.param_dim());
    let dom = n + pd;
    let arrow = PolyMap::projection(dom, &(0..n).collect::<Vec<_>>());
    let param = PolyMap::projection(dom, &(n..dom).collect::<Vec<_>>());
    let start = PolyMap::concat(&[&g.tgt_map().compose(&arrow).expect("dims"), &param]).expect("dims");
    let h = g.starting_map().compose(&start).expect("dims");
    PolyMap::concat(&[&h, &arrow]).expect("dims")
}

fn mat_of_polys(rows: &[Vec<Poly>], cols: usize, nvars: usize) -> Vec<Vec<Poly>> {
    rows.iter().map(|r| (0..cols).map(|i| r.get(i).cloned().unwrap_or_else(|| Poly::zero(nvars))).collect()).collect()
}

fn apply_const(m: &Mat, v: &[Poly], nvars: usize) -> Vec<Poly> {
    (0..m.rows())
        .map(|r| v.iter().enumerate().fold(Poly::zero(nvars), |acc, (c, p)| &acc + &p.scale(m.get(r, c))))
        .collect()
}

/// Algebroid of compatible pairs `(η, ξ)` of `over_arrows` along the composable pairs of the base,
/// in the frame `comp.domain`, over the chart `(g, p)`.
fn composable_algebroid(vb: &LinearVbGroupoid, a: &LieAlgebroidModel) -> Result<(LieAlgebroidModel, PolyMap, CheckReport), PoissonError> {
    let chart = composable_chart(&vb.base);
    let dom = chart.dom();
    let n = vb.base.arrow_dim();
    let f = vb.fiber_dim;
    let lin = linear_part(&chart);
    let lin_inv = lin.left_inverse()?;
    let (h_part, g_part) = (&chart.components()[..n], &chart.components()[n..]);
    let on = |p: &Poly, at: &[Poly]| p.compose(at).expect("chart codomain");
    let domain = &vb.comp.domain;
    let rank = domain.cols();
    let mut report = CheckReport::new();
    let mut anchor_cols: Vec<Vec<Poly>> = Vec::with_capacity(rank);
    for col in domain.columns() {
        let (eta, xi) = (&col[..f], &col[f..]);
        let push = |at: &[Poly], v: &[Rat]| -> Vec<Poly> {
            a.anchor
                .iter()
                .map(|row| row.iter().zip(v).fold(Poly::zero(dom), |acc, (p, c)| &acc + &on(p, at).scale(c)))
                .collect()
        };
        let stacked: Vec<Poly> = push(h_part, eta).into_iter().chain(push(g_part, xi)).collect();
        let pulled = apply_const(&lin_inv, &stacked, dom);
        let back = apply_const(&lin, &pulled, dom);
        let tangent = back == stacked;
        report.exact("anchors of compatible pairs are tangent to composable pairs", tangent, "");
        anchor_cols.push(pulled);
    }
    let anchor: Vec<Vec<Poly>> = (0..dom).map(|r| anchor_cols.iter().map(|c| c[r].clone()).collect()).collect();
    let dom_inv = domain.left_inverse()?;
    let bracket_at = |at: &[Poly], u: &[Rat], v: &[Rat]| -> Vec<Poly> {
        (0..f)
            .map(|k| {
                let mut acc = Poly::zero(dom);
                for i in 0..f {
                    for j in 0..f {
                        let c = &a.structure[i][j][k];
                        if !c.is_zero() {
                            acc = &acc + &on(c, at).scale(&(&u[i] * &v[j]));
                        }
                    }
                }
                acc
            })
            .collect()
    };
    let cols = domain.columns();
    let mut structure = vec![vec![vec![Poly::zero(dom); rank]; rank]; rank];
    for (i, ci) in cols.iter().enumerate() {
        for (j, cj) in cols.iter().enumerate() {
            let stacked: Vec<Poly> =
                bracket_at(h_part, &ci[..f], &cj[..f]).into_iter().chain(bracket_at(g_part, &ci[f..], &cj[f..])).collect();
            let coeffs = apply_const(&dom_inv, &stacked, dom);
            let closed = apply_const(domain, &coeffs, dom) == stacked;
            report.exact("compatible pairs are closed under brackets", closed, "");
            structure[i][j] = coeffs;
        }
    }
    let model = LieAlgebroidModel::new(format!("{} pairs", a.name), dom, rank, mat_of_polys(&anchor, rank, dom), structure)?;
    Ok((model, chart, report))
}

/// Source, target, identities, inversion and composition of `vb` as algebroid morphisms, for
/// `over_arrows` on the total space over the arrows and `over_objects` on the side.
pub fn la_groupoid_checks(
    r: &mut CheckReport,
    label: &str,
    vb: &LinearVbGroupoid,
    over_arrows: &LieAlgebroidModel,
    over_objects: &LieAlgebroidModel,
    s: &mut Sampler,
) -> Result<(), PoissonError> {
    let g = &vb.base;
    if over_arrows.base_dim != g.arrow_dim() || over_arrows.rank != vb.fiber_dim {
        return Err(PoissonError::Shape(format!("{label}: algebroid over the arrows")));
    }
    if over_objects.base_dim != g.base_dim() || over_objects.rank != vb.side_dim {
        return Err(PoissonError::Shape(format!("{label}: algebroid over the objects")));
    }
    let secs_arrows = over_arrows.section_family(s, random_for(over_arrows));
    let secs_objects = over_objects.section_family(s, random_for(over_objects));
    let maps = [
        ("source", g.src_map(), &vb.src_lin),
        ("target", g.tgt_map(), &vb.tgt_lin),
    ];
    for (name, base, fibre) in maps {
        let phi = BundleMap::constant(base.clone(), fibre);
        check_morphism(r, &format!("{label}: {name}"), over_arrows, over_objects, &phi, &secs_arrows, s);
    }
    let unit = BundleMap::constant(g.unit_map().clone(), &vb.unit_lin);
    check_morphism(r, &format!("{label}: identities"), over_objects, over_arrows, &unit, &secs_objects, s);
    let inv = BundleMap::constant(g.inv_map().clone(), &vb.inv_lin);
    check_morphism(r, &format!("{label}: inverse"), over_arrows, over_arrows, &inv, &secs_arrows, s);

    let (pairs, chart, closure) = composable_algebroid(vb, over_arrows)?;
    r.extend_prefixed(&format!("{label}: composition"), closure);
    let comp = BundleMap::constant(g.comp_map().compose(&chart)?, &vb.comp.image);
    let secs_pairs = pairs.section_family(s, random_for(&pairs));
    check_morphism(r, &format!("{label}: composition"), &pairs, over_arrows, &comp, &secs_pairs, s);
    Ok(())
}

/// Deliberate corruption of the data fed to [`verify_needed_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeededFault {
    /// Adds one to the anchor of `A*_V S` in the first coordinate of `H` the source map depends on.
    AnchorEntry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeededReport {
    pub vb: LinearVbGroupoid,
    pub over_arrows: LieAlgebroidModel,
    pub over_objects: LieAlgebroidModel,
    /// `a_{*C}` in the coordinates of the side of `A*_V S`, as read off from `π_C`.
    pub core_dual_anchor: Mat,
    pub report: CheckReport,
}

pub fn verify_needed(pd: &PoissonCoordDouble, s: &mut Sampler) -> Result<NeededReport, PoissonError> {
    verify_needed_with(pd, s, None)
}

/// `A*_V S ⇉ A*C` over `H ⇉ P`, with the dual algebroid of the vertical Poisson groupoid on
/// `A*_V S` and, on `A*C`, the anchor covered by `ã_{*H}`.
pub fn verify_needed_with(pd: &PoissonCoordDouble, s: &mut Sampler, fault: Option<NeededFault>) -> Result<NeededReport, PoissonError> {
    let predicates = pd.require_poisson_double(s)?;
    let d = &pd.double;
    let pv = prolonged_vb(d, Direction::Vertical)?;
    let vb = pv.vb.dual()?;
    let h = &d.side_h;
    let over_identities = &predicates.vertical.dual_anchor * &vb.unit_lin;
    let via_source = &linear_part(h.src_map()) * &over_identities;
    let via_target = &linear_part(h.tgt_map()) * &over_identities;

    let mut report = CheckReport::new();
    report.extend_prefixed("predicates", predicates.report.clone());
    report.matrices("ã_{*H} on identities is tangent to the identities", &via_source, &via_target);

    let core = core_poisson(pd, s)?;
    report.extend_prefixed("core", core.report.clone());
    let c = &core.core.groupoid;
    let ab_c = c.src_jacobian(&c.unit(&vector::zeros(c.base_dim()))).kernel().canonical_basis();
    let in_s = &linear_part(&core.core.embedding) * &ab_c;
    let core_in_s = &pv.fibre_basis * &pv.vb.core_basis();
    let ident = express(&core_in_s, &in_s, "AC in the core of A_V S")?;
    // ψ on the core coordinates pulls back to identᵀψ on AC.
    let core_dual_anchor = &core.mult.dual_anchor * &ident.transpose();
    report.matrices("a_{*C} agrees with the anchor covered by ã_{*H}", &core_dual_anchor, &via_source);

    let mut anchor = predicates.vertical.dual_anchor.clone();
    if fault == Some(NeededFault::AnchorEntry) {
        let src = linear_part(h.src_map());
        let row = (0..src.cols()).find(|&j| !Mat::from_cols(src.rows(), &[src.col(j)]).is_zero()).unwrap_or(0);
        let bumped = anchor.get(row, 0) + int(1);
        anchor.set(row, 0, bumped);
    }
    let over_arrows = LieAlgebroidModel::with_constant_anchor("A*_V S", &anchor);
    let over_objects = LieAlgebroidModel::with_constant_anchor("A*C", &via_source);
    la_groupoid_checks(&mut report, "A*_V S", &vb, &over_arrows, &over_objects, s)?;
    Ok(NeededReport { vb, over_arrows, over_objects, core_dual_anchor, report })
}
