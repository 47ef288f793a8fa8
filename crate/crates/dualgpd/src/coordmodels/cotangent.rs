use super::groupoid::{CoordGroupoid, Family};
use super::linear::LinearVbGroupoid;
use super::CoordError;
use crate::exactcalc::{vector, Mat, PolyMap, Rat, Sampler};
use crate::fingpd::CompositionData;

/// Constant Jacobians of an affine map.
fn lin(f: &PolyMap) -> Mat {
    f.affine_parts().expect("registered families are affine").0
}

fn compatible_pairs(src_of_first: &Mat, tgt_of_second: &Mat) -> Mat {
    Mat::hstack(&[src_of_first, &-tgt_of_second]).kernel().canonical_basis()
}

/// `(TG; G, TM; M)` with core `AG`: fibres are tangent vectors in arrow coordinates.
pub fn tangent_vb(g: &CoordGroupoid) -> Result<LinearVbGroupoid, CoordError> {
    g.require_registered()?;
    let (src, tgt) = (lin(g.src_map()), lin(g.tgt_map()));
    let domain = compatible_pairs(&src, &tgt);
    let image = &lin(g.comp_map()) * &domain;
    Ok(LinearVbGroupoid {
        name: format!("T{}", g.name),
        base: g.clone(),
        side_dim: g.base_dim(),
        fiber_dim: g.arrow_dim(),
        src_lin: src,
        tgt_lin: tgt,
        unit_lin: lin(g.unit_map()),
        inv_lin: lin(g.inv_map()),
        comp: CompositionData { domain, image },
    })
}

/// `TG ⇉ TM` by tangent lifts, on coordinates `(g, v)` over `(m, u)`.
pub fn tangent_groupoid(g: &CoordGroupoid) -> Result<CoordGroupoid, CoordError> {
    let n = g.arrow_dim();
    // Lifted composition reads (h, g, Y, X); the tangent groupoid composes (h, Y) with (g, X).
    let order: Vec<usize> = (0..n).chain(2 * n..3 * n).chain(n..2 * n).chain(3 * n..4 * n).collect();
    let comp = g.comp_map().tangent_lift().compose(&PolyMap::projection(4 * n, &order))?;
    CoordGroupoid::new(
        format!("T{}", g.name),
        Family::Tangent(Box::new(g.family.clone())),
        2 * g.base_dim(),
        2 * n,
        g.src_map().tangent_lift(),
        g.tgt_map().tangent_lift(),
        g.unit_map().tangent_lift(),
        g.inv_map().tangent_lift(),
        comp,
    )
}

/// `T*G ⇉ A*G` built pointwise from the translation formulas, with `AG = ker Tα` along
/// identities in its canonical basis and `A*G` in the dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentGroupoid {
    pub group: CoordGroupoid,
    /// Columns span `AG` inside the tangent space at an identity.
    pub algebroid_basis: Mat,
    /// `a = Tβ` on the basis.
    pub anchor: Mat,
    pub vb: LinearVbGroupoid,
    pub total: CoordGroupoid,
}

struct Pointwise<'a> {
    g: &'a CoordGroupoid,
}

impl Pointwise<'_> {
    fn basis(&self, m: &[Rat]) -> Mat {
        self.g.src_jacobian(&self.g.unit(m)).kernel().canonical_basis()
    }

    fn anchor(&self, m: &[Rat]) -> Mat {
        &self.g.tgt_jacobian(&self.g.unit(m)) * &self.basis(m)
    }

    /// `[T1 | basis]` at `m`: tangent space at `1_m` split into `TM ⊕ AG`.
    fn identity_frame(&self, m: &[Rat]) -> Mat {
        Mat::hstack(&[&self.g.unit_jacobian(m), &self.basis(m)])
    }

    /// `α̃(Φ)(X) = Φ(TL_g(X - T1(aX)))`.
    fn source(&self, arrow: &[Rat]) -> Mat {
        let m = self.g.src(arrow);
        let shift = &self.basis(&m) - &(&self.g.unit_jacobian(&m) * &self.anchor(&m));
        (&self.g.left_translation(arrow) * &shift).transpose()
    }

    /// `β̃(Φ)(Y) = Φ(TR_g Y)`.
    fn target(&self, arrow: &[Rat]) -> Mat {
        let m = self.g.tgt(arrow);
        (&self.g.right_translation(arrow) * &self.basis(&m)).transpose()
    }

    /// `1̃_φ(T1 x + X) = φ(X)`.
    fn identity(&self, m: &[Rat]) -> Result<Mat, CoordError> {
        let frame = self.identity_frame(m).transpose().inverse()?;
        let r = self.basis(m).cols();
        Ok(&frame * &Mat::vstack(&[&Mat::zeros(self.g.base_dim(), r), &Mat::identity(r)]))
    }

    /// `ω̄(T1 x + X) = ω(x + aX)`.
    fn core(&self, m: &[Rat]) -> Result<Mat, CoordError> {
        let frame = self.identity_frame(m).transpose().inverse()?;
        Ok(&frame * &Mat::vstack(&[&Mat::identity(self.g.base_dim()), &self.anchor(m).transpose()]))
    }

    /// `Φ⁻¹(T inv X) = -Φ(X)`.
    fn inverse(&self, arrow: &[Rat]) -> Result<Mat, CoordError> {
        Ok(-&self.g.inv_jacobian(arrow).transpose().inverse()?)
    }

    /// `(ΨΦ)(Tcomp(Y, X)) = Ψ(Y) + Φ(X)` on every compatible pair, solved on a basis of compatible tangent pairs.
    fn composition(&self, h: &[Rat], arrow: &[Rat]) -> Result<CompositionData, CoordError> {
        let pairs = compatible_pairs(&self.g.src_jacobian(h), &self.g.tgt_jacobian(arrow));
        let pushed = (&self.g.comp_jacobian(h, arrow) * &pairs).transpose();
        let domain = compatible_pairs(&self.source(h), &self.target(arrow));
        let values = &pairs.transpose() * &domain;
        let image = &pushed.left_inverse()? * &values;
        if &pushed * &image != values {
            return Err(CoordError::Invalid(format!("{}: dual composition depends on the decomposition", self.g.name)));
        }
        Ok(CompositionData { domain, image })
    }
}

fn constant<T: PartialEq>(name: &str, what: &str, values: Vec<T>) -> Result<T, CoordError> {
    let mut it = values.into_iter();
    let first = it.next().expect("at least one point");
    if it.all(|v| v == first) {
        Ok(first)
    } else {
        Err(CoordError::NotConstant(format!("{name}: {what}")))
    }
}

pub fn cotangent_groupoid(g: &CoordGroupoid) -> Result<CotangentGroupoid, CoordError> {
    g.require_registered()?;
    let pw = Pointwise { g };
    // The formulas are evaluated at several points; registered families give the same matrices everywhere.
    let mut s = Sampler::new(0x7e57);
    let objects: Vec<Vec<Rat>> = (0..3).map(|_| g.random_object(&mut s)).collect();
    let pairs: Vec<(Vec<Rat>, Vec<Rat>)> = (0..3).map(|_| g.random_composable(&mut s)).collect();
    let arrows: Vec<&Vec<Rat>> = pairs.iter().map(|(_, a)| a).collect();
    let name = format!("T*{}", g.name);
    let basis = constant(&name, "algebroid basis", objects.iter().map(|m| pw.basis(m)).collect())?;
    let anchor = constant(&name, "anchor", objects.iter().map(|m| pw.anchor(m)).collect())?;
    let src_lin = constant(&name, "source", arrows.iter().map(|a| pw.source(a)).collect())?;
    let tgt_lin = constant(&name, "target", arrows.iter().map(|a| pw.target(a)).collect())?;
    let unit_lin = constant(&name, "identity", objects.iter().map(|m| pw.identity(m)).collect::<Result<_, _>>()?)?;
    let inv_lin = constant(&name, "inverse", arrows.iter().map(|a| pw.inverse(a)).collect::<Result<_, _>>()?)?;
    let comp = constant(&name, "composition", pairs.iter().map(|(h, a)| pw.composition(h, a)).collect::<Result<_, _>>()?)?;
    let vb = LinearVbGroupoid {
        name: name.clone(),
        base: g.clone(),
        side_dim: basis.cols(),
        fiber_dim: g.arrow_dim(),
        src_lin,
        tgt_lin,
        unit_lin,
        inv_lin,
        comp,
    };
    vb.validate_fibres()?;
    let mut total = vb.total_space();
    total.family = Family::Cotangent(Box::new(g.family.clone()));
    Ok(CotangentGroupoid { group: g.clone(), algebroid_basis: basis, anchor, vb, total })
}

impl CotangentGroupoid {
    /// `1̃_φ` over `1_m` from its defining identity.
    pub fn identity_covector(&self, m: &[Rat], phi: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        Ok(Pointwise { g: &self.group }.identity(m)?.mul_vec(phi))
    }

    /// Core element `ω̄` over `1_m`.
    pub fn core_covector(&self, m: &[Rat], omega: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        Ok(Pointwise { g: &self.group }.core(m)?.mul_vec(omega))
    }

    /// Core elements as columns, one per basis covector of `T*M`.
    pub fn core_elements(&self) -> Result<Mat, CoordError> {
        Pointwise { g: &self.group }.core(&vector::zeros(self.group.base_dim()))
    }

    /// Values `Ψ(Y) + Φ(X)` over `1 + kernel + extra` decompositions `ζ = Tcomp(Y, X)`.
    #[allow(clippy::too_many_arguments)]
    pub fn decomposition_values(
        &self,
        h: &[Rat],
        g: &[Rat],
        psi: &[Rat],
        phi: &[Rat],
        zeta: &[Rat],
        s: &mut Sampler,
        extra: usize,
    ) -> Result<Vec<Rat>, CoordError> {
        let grp = &self.group;
        let pairs = compatible_pairs(&grp.src_jacobian(h), &grp.tgt_jacobian(g));
        let pushed = &grp.comp_jacobian(h, g) * &pairs;
        let sol = pushed.solve(zeta)?;
        let mut params = vec![sol.particular.clone()];
        params.extend(sol.kernel.iter().map(|k| vector::add(&sol.particular, k)));
        for _ in 0..extra {
            let shift = sol.kernel.iter().fold(vector::zeros(sol.particular.len()), |acc, k| {
                vector::add(&acc, &vector::scale(&s.nonzero(), k))
            });
            params.push(vector::add(&sol.particular, &shift));
        }
        let n = grp.arrow_dim();
        Ok(params
            .iter()
            .map(|p| {
                let yx = pairs.mul_vec(p);
                vector::dot(psi, &yx[..n]) + vector::dot(phi, &yx[n..])
            })
            .collect())
    }
}
