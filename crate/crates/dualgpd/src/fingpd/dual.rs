use super::{CompositionData, Counterexample, FinVBGroupoid, FingpdError, Location};
use crate::exactcalc::{vector, Mat, Rat};

/// Matrices splitting `Ω_{1_m} = 1̃(A_m) ⊕ K_m`: `unit_part` and `core_part` send `ζ` to `X` and `k`.
struct IdentitySplitting {
    unit_part: Mat,
    core_part: Mat,
}

fn identity_splitting(omega: &FinVBGroupoid, core_basis: &Mat, m: usize) -> Result<IdentitySplitting, FingpdError> {
    let frame = Mat::hstack(&[&omega.unit_lin[m], core_basis]);
    let inv = frame.inverse().map_err(|_| FingpdError::SplittingSingular(m))?;
    let a = omega.side_dims[m];
    let f = frame.rows();
    Ok(IdentitySplitting {
        unit_part: inv.select_rows(&(0..a).collect::<Vec<_>>()),
        core_part: inv.select_rows(&(a..f).collect::<Vec<_>>()),
    })
}

/// Dual groupoid `Ω* ⇉ K*`. Fibre coordinates on `Ω*_g` are dual to those of `Ω_g`;
/// coordinates on `K*_m` are dual to the canonical core basis of `Ω`.
pub fn pradines_dual(omega: &FinVBGroupoid) -> Result<FinVBGroupoid, FingpdError> {
    if let Some(c) = omega.validate().failure {
        return Err(FingpdError::Invalid(c));
    }
    dual_of_valid(omega)
}

/// The dual of an already validated VB-groupoid; the result is validated.
fn dual_of_valid(omega: &FinVBGroupoid) -> Result<FinVBGroupoid, FingpdError> {
    let g = &omega.base;
    let core = omega.core();
    let mut src_lin = Vec::with_capacity(g.arrows());
    let mut tgt_lin = Vec::with_capacity(g.arrows());
    let mut inv_lin = Vec::with_capacity(g.arrows());
    for a in 0..g.arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let (us, ut) = (g.unit(s), g.unit(t));
        let rows: Result<Vec<Vec<Rat>>, FingpdError> = core.basis[s]
            .columns()
            .iter()
            .map(|k| {
                let k_inv = omega.inv_lin[us].mul_vec(k);
                Ok(vector::neg(&omega.compose(a, us, &omega.zero(a), &k_inv)?))
            })
            .collect();
        src_lin.push(rows_to_mat(rows?, omega.fiber_dims[a]));
        let rows: Result<Vec<Vec<Rat>>, FingpdError> =
            core.basis[t].columns().iter().map(|k| omega.compose(ut, a, k, &omega.zero(a))).collect();
        tgt_lin.push(rows_to_mat(rows?, omega.fiber_dims[a]));
        // Φ⁻¹(η) = -Φ(η⁻¹).
        inv_lin.push(-&omega.inv_lin[g.inv(a)].transpose());
    }
    let mut unit_lin = Vec::with_capacity(g.objects());
    for m in 0..g.objects() {
        let split = identity_splitting(omega, &core.basis[m], m)?;
        unit_lin.push(split.core_part.transpose());
    }
    let mut comp_lin = std::collections::BTreeMap::new();
    for (h, k) in g.composable_pairs() {
        let c = omega.composition(h, k)?;
        let domain = Mat::hstack(&[&src_lin[h], &-&tgt_lin[k]]).kernel().canonical_basis();
        // A decomposition ζ = ηξ for each basis vector ζ, via a right inverse of the composition.
        let decompose = &c.domain * &c.image.right_inverse()?;
        let offsets = &c.domain * &c.image.kernel();
        if !(&offsets.transpose() * &domain).is_zero() {
            return Err(FingpdError::NotWellDefined { h, g: k });
        }
        let image = &decompose.transpose() * &domain;
        comp_lin.insert((h, k), CompositionData { domain, image });
    }
    let dual = FinVBGroupoid {
        base: g.clone(),
        side_dims: (0..g.objects()).map(|m| core.dim(m)).collect(),
        fiber_dims: omega.fiber_dims.clone(),
        src_lin,
        tgt_lin,
        unit_lin,
        inv_lin,
        comp_lin,
    };
    if let Some(c) = dual.validate().failure {
        return Err(FingpdError::Invalid(c));
    }
    Ok(dual)
}

fn rows_to_mat(rows: Vec<Vec<Rat>>, cols: usize) -> Mat {
    if rows.is_empty() {
        Mat::zeros(0, cols)
    } else {
        Mat::from_rows(&rows)
    }
}

/// Every value `<Ψ,η> + <Φ,ξ>` over decompositions `ηξ = ζ`: the particular solution,
/// then the particular solution shifted by each kernel vector and by `extra` random combinations.
#[allow(clippy::too_many_arguments)]
pub fn dual_composition_values(
    omega: &FinVBGroupoid,
    h: usize,
    g: usize,
    psi: &[Rat],
    phi: &[Rat],
    zeta: &[Rat],
    sampler: &mut crate::exactcalc::Sampler,
    extra: usize,
) -> Result<Vec<Rat>, FingpdError> {
    let c = omega.composition(h, g)?;
    let sol = c.image.solve(zeta)?;
    let mut params = vec![sol.particular.clone()];
    for k in &sol.kernel {
        params.push(vector::add(&sol.particular, k));
    }
    for _ in 0..extra {
        let shift = sol
            .kernel
            .iter()
            .fold(vector::zeros(sol.particular.len()), |acc, k| vector::add(&acc, &vector::scale(&sampler.nonzero(), k)));
        params.push(vector::add(&sol.particular, &shift));
    }
    let fh = omega.fiber_dims[h];
    Ok(params
        .iter()
        .map(|p| {
            let v = c.domain.mul_vec(p);
            vector::dot(psi, &v[..fh]) + vector::dot(phi, &v[fh..])
        })
        .collect())
}

/// Core elements `φ̄` of `Ω*` given by `<φ̄, 1̃_X + k> = <φ, X + ∂k>`, one column per basis covector of `A*_m`.
pub fn dual_core_elements(omega: &FinVBGroupoid, m: usize) -> Result<Mat, FingpdError> {
    let core = omega.core();
    let split = identity_splitting(omega, &core.basis[m], m)?;
    Ok((&split.unit_part + &(&core.delta[m] * &split.core_part)).transpose())
}

/// Result of identifying `Ω` with `(Ω*)*`: fibres map by the identity in coordinates,
/// sides by `side[m]: A_m -> (core of Ω*)*_m`.
#[derive(Clone, Debug)]
pub struct DoubleDual {
    pub dual: FinVBGroupoid,
    pub double_dual: FinVBGroupoid,
    pub side: Vec<Mat>,
}

pub fn double_dual_identify(omega: &FinVBGroupoid) -> Result<DoubleDual, FingpdError> {
    let dual = pradines_dual(omega)?;
    let double_dual = dual_of_valid(&dual)?;
    let g = &omega.base;
    let core = omega.core();
    let dual_core = dual.core();
    let fail = |s: String| Err(FingpdError::Identification(s));
    let mut side = Vec::with_capacity(g.objects());
    for m in 0..g.objects() {
        let one = g.unit(m);
        let bars = dual_core_elements(omega, m)?;
        if dual_core.dim(m) != omega.side_dims[m] || bars.rank() != omega.side_dims[m] {
            return fail(format!("core of the dual at {m} does not have the dimension of A"));
        }
        if !(&dual.src_lin[one] * &bars).is_zero() {
            return fail(format!("core formula leaves the core at {m}"));
        }
        if &dual.tgt_lin[one] * &bars != core.delta[m].transpose() {
            return fail(format!("∂ of the dual at {m} is not the transpose of ∂"));
        }
        let coords: Result<Vec<Vec<Rat>>, _> = bars.columns().iter().map(|b| dual_core.basis[m].coords(b)).collect();
        let d = Mat::from_cols(omega.side_dims[m], &coords?);
        side.push(d.inverse()?.transpose());
    }
    for a in 0..g.arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        if double_dual.src_lin[a] != &side[s] * &omega.src_lin[a] {
            return fail(format!("source not intertwined at arrow {a}"));
        }
        if double_dual.tgt_lin[a] != &side[t] * &omega.tgt_lin[a] {
            return fail(format!("target not intertwined at arrow {a}"));
        }
        if double_dual.inv_lin[a] != omega.inv_lin[a] {
            return fail(format!("inverse not intertwined at arrow {a}"));
        }
    }
    for m in 0..g.objects() {
        if &double_dual.unit_lin[m] * &side[m] != omega.unit_lin[m] {
            return fail(format!("identity not intertwined at object {m}"));
        }
    }
    for (&(h, k), c) in &omega.comp_lin {
        let fh = omega.fiber_dims[h];
        for (pair, prod) in c.domain.columns().iter().zip(c.image.columns()) {
            if double_dual.compose(h, k, &pair[..fh], &pair[fh..])? != prod {
                return fail(format!("composition not intertwined at ({h}, {k})"));
            }
        }
    }
    Ok(DoubleDual { dual, double_dual, side })
}

/// Morphism over the identity of the base groupoid: `fiber[g]: Ω_g -> Ω'_g`, `side[m]: A_m -> A'_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VbMorphism {
    pub fiber: Vec<Mat>,
    pub side: Vec<Mat>,
}

impl VbMorphism {
    pub fn identity(omega: &FinVBGroupoid) -> Self {
        VbMorphism {
            fiber: omega.fiber_dims.iter().map(|&f| Mat::identity(f)).collect(),
            side: omega.side_dims.iter().map(|&a| Mat::identity(a)).collect(),
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        VbMorphism { fiber: self.fiber.iter().map(|m| m.scale(c)).collect(), side: self.side.iter().map(|m| m.scale(c)).collect() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &VbMorphism) -> Self {
        VbMorphism {
            fiber: self.fiber.iter().zip(&first.fiber).map(|(a, b)| a * b).collect(),
            side: self.side.iter().zip(&first.side).map(|(a, b)| a * b).collect(),
        }
    }
}

pub fn validate_morphism(from: &FinVBGroupoid, to: &FinVBGroupoid, f: &VbMorphism) -> Result<(), Counterexample> {
    let g = &from.base;
    let bad = |check, at, detail: &str| Err(Counterexample { check, at, detail: detail.to_string() });
    if to.base != *g || f.fiber.len() != g.arrows() || f.side.len() != g.objects() {
        return bad("shapes", Location::Arrow(0), "morphism tables do not match the groupoids");
    }
    for a in 0..g.arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let fa = &f.fiber[a];
        if fa.rows() != to.fiber_dims[a] || fa.cols() != from.fiber_dims[a] {
            return bad("shapes", Location::Arrow(a), "fibre map");
        }
        if &to.src_lin[a] * fa != &f.side[s] * &from.src_lin[a] {
            return bad("source", Location::Arrow(a), "α̃' F ≠ f α̃");
        }
        if &to.tgt_lin[a] * fa != &f.side[t] * &from.tgt_lin[a] {
            return bad("target", Location::Arrow(a), "β̃' F ≠ f β̃");
        }
        if &to.inv_lin[a] * fa != &f.fiber[g.inv(a)] * &from.inv_lin[a] {
            return bad("inverse", Location::Arrow(a), "F(ξ⁻¹) ≠ F(ξ)⁻¹");
        }
    }
    for m in 0..g.objects() {
        if &f.fiber[g.unit(m)] * &from.unit_lin[m] != &to.unit_lin[m] * &f.side[m] {
            return bad("identity", Location::Object(m), "F 1̃ ≠ 1̃' f");
        }
    }
    for (&(h, k), c) in &from.comp_lin {
        let fh = from.fiber_dims[h];
        let hk = g.compose(h, k).expect("composable");
        for (pair, prod) in c.domain.columns().iter().zip(c.image.columns()) {
            let eta = f.fiber[h].mul_vec(&pair[..fh]);
            let xi = f.fiber[k].mul_vec(&pair[fh..]);
            if to.compose(h, k, &eta, &xi).ok() != Some(f.fiber[hk].mul_vec(&prod)) {
                return bad("composition", Location::Pair(h, k), "F(ηξ) ≠ F(η)F(ξ)");
            }
        }
    }
    Ok(())
}

/// Restriction of a morphism to cores, in the canonical core bases.
pub fn core_map(from: &FinVBGroupoid, to: &FinVBGroupoid, f: &VbMorphism) -> Result<Vec<Mat>, FingpdError> {
    let (cf, ct) = (from.core(), to.core());
    (0..from.base.objects())
        .map(|m| {
            let images = &f.fiber[from.base.unit(m)] * &cf.basis[m];
            let coords: Result<Vec<Vec<Rat>>, _> = images.columns().iter().map(|v| ct.basis[m].coords(v)).collect();
            Ok(Mat::from_cols(ct.dim(m), &coords?))
        })
        .collect()
}

/// `F*: Ω'* -> Ω*` with base map the transposed core map, checked to be a morphism of the duals
/// whose core restriction is the transposed side map.
pub fn dual_of_morphism(from: &FinVBGroupoid, to: &FinVBGroupoid, f: &VbMorphism) -> Result<VbMorphism, FingpdError> {
    validate_morphism(from, to, f).map_err(FingpdError::NotMorphism)?;
    let (dual_from, dual_to) = (pradines_dual(from)?, pradines_dual(to)?);
    let fk = core_map(from, to, f)?;
    let dual = VbMorphism {
        fiber: f.fiber.iter().map(Mat::transpose).collect(),
        side: fk.iter().map(Mat::transpose).collect(),
    };
    validate_morphism(&dual_to, &dual_from, &dual).map_err(FingpdError::NotMorphism)?;
    for m in 0..from.base.objects() {
        let lhs = &dual.fiber[from.base.unit(m)] * &dual_core_elements(to, m)?;
        let rhs = &dual_core_elements(from, m)? * &f.side[m].transpose();
        if lhs != rhs {
            return Err(FingpdError::NotMorphism(Counterexample {
                check: "core morphism",
                at: Location::Object(m),
                detail: "F* does not restrict to f* on cores".into(),
            }));
        }
    }
    Ok(dual)
}
