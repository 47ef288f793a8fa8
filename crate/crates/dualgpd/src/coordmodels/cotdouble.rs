use super::check::CheckReport;
use super::cotangent::{cotangent_groupoid, CotangentGroupoid};
use super::double::{after, block, cat, core_of_double, morphism_checks, CoordDoubleGroupoid, CoreGroupoid};
use super::prolong::{prolonged_vb, Direction, Prolongation, ProlongedVb};
use super::{linear_part, CoordError};
use crate::exactcalc::{vector, Mat, PolyMap, Rat, Sampler};

/// `(T*S; A*_V S, A*_H S; A*C)` together with the data it is built from.
///
/// `A*C` coordinates are dual to the canonical basis of the algebroid of the core chart, on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentDoubleData {
    pub base: CoordDoubleGroupoid,
    pub core: CoreGroupoid,
    /// Canonical basis of `AC`, pushed into the tangent space of `S` at a double identity.
    pub core_algebroid: Mat,
    pub prolonged_v: ProlongedVb,
    pub prolonged_h: ProlongedVb,
    /// `A_V S` and its dual `A*_V S ⇉ A*C`.
    pub duality_v: Prolongation,
    /// `A_H S` and its dual `A*_H S ⇉ A*C`.
    pub duality_h: Prolongation,
    /// `T*S ⇉ A*_V S`, the cotangent of the vertical structure.
    pub over_side_h: CotangentGroupoid,
    /// `T*S ⇉ A*_H S`, the cotangent of the horizontal structure.
    pub over_side_v: CotangentGroupoid,
    pub double: CoordDoubleGroupoid,
}

pub fn cotangent_double(d: &CoordDoubleGroupoid, s: &mut Sampler) -> Result<CotangentDoubleData, CoordError> {
    d.require_registered()?;
    let core = core_of_double(d, s)?;
    let c = &core.groupoid;
    let ab_c = c.src_jacobian(&c.unit(&vector::zeros(c.base_dim()))).kernel().canonical_basis();
    let core_algebroid = &linear_part(&core.embedding) * &ab_c;
    let prolonged_v = prolonged_vb(d, Direction::Vertical)?;
    let prolonged_h = prolonged_vb(d, Direction::Horizontal)?;
    let duality_v = Prolongation::new(&prolonged_v.vb, prolonged_v.core_frame(&core_algebroid)?)?;
    let duality_h = Prolongation::new(&prolonged_h.vb, prolonged_h.core_frame(&core_algebroid)?)?;
    let over_side_h = cotangent_groupoid(&d.vertical)?;
    let over_side_v = cotangent_groupoid(&d.horizontal)?;
    let mut side_h = duality_v.dual.total_space();
    side_h.name = format!("A*_V({})", d.name);
    let mut side_v = duality_h.dual.total_space();
    side_v.name = format!("A*_H({})", d.name);
    let double = CoordDoubleGroupoid::new(
        format!("T*{}", d.name),
        over_side_v.total.clone(),
        over_side_h.total.clone(),
        side_h,
        side_v,
    )?;
    Ok(CotangentDoubleData {
        base: d.clone(),
        core,
        core_algebroid,
        prolonged_v,
        prolonged_h,
        duality_v,
        duality_h,
        over_side_h,
        over_side_v,
        double,
    })
}

/// `E: T_c S → T_c C` at a core point `c` of `d`, as a matrix on tangent vectors of `S`.
pub fn core_projection(d: &CoordDoubleGroupoid, c: &[Rat]) -> Mat {
    let (hz, vt) = (&d.horizontal, &d.vertical);
    let n = d.total_dim();
    let m = vector::zeros(d.side_h.base_dim());
    // ξ ↦ X - T1^V(x) with X = Tα̃_H ξ, x = Tβ_V X; likewise Y - T1^H(z).
    let off_v = &Mat::identity(d.side_v.arrow_dim()) - &(&d.side_v.unit_jacobian(&m) * &d.side_v.tgt_jacobian(&d.side_v.unit(&m)));
    let off_h = &Mat::identity(d.side_h.arrow_dim()) - &(&d.side_h.unit_jacobian(&m) * &d.side_h.tgt_jacobian(&d.side_h.unit(&m)));
    let unit_v = d.side_v.unit(&m);
    let unit_h = d.side_h.unit(&m);
    let first = &(&(&vt.left_translation(c) * &hz.unit_jacobian(&unit_v)) * &off_v) * &hz.src_jacobian(c);
    let second = &(&(&hz.left_translation(c) * &vt.unit_jacobian(&unit_h)) * &off_h) * &vt.src_jacobian(c);
    &(&Mat::identity(n) - &first) - &second
}

/// `T*C → core(T*S)`, `(c, σ) ↦ (c, σ ∘ E)`, with its checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreEmbedding {
    pub cotangent_core: CotangentGroupoid,
    pub core_of_cotangent: CoreGroupoid,
    /// Total coordinates of `T*C` to the core chart of `T*S`.
    pub map: PolyMap,
    pub report: CheckReport,
}

impl CotangentDoubleData {
    /// `E: T_c S → T_c C` at a core point, as a matrix on tangent vectors of `S`.
    pub fn e_map(&self, c: &[Rat]) -> Mat {
        core_projection(&self.base, c)
    }

    /// `E` followed by core chart coordinates.
    fn e_chart(&self, c: &[Rat]) -> Result<Mat, CoordError> {
        let chart = linear_part(&self.core.embedding);
        super::express(&chart, &self.e_map(c), "E")
    }

    fn require_core_point(&self, c: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        let t = self.core.projection.eval(c)?;
        if self.core.embedding.eval(&t)? != c {
            return Err(CoordError::NotCorePoint(format!("{}: {:?}", self.base.name, crate::exactcalc::scalar::vec_to_strings(c))));
        }
        Ok(t)
    }

    /// `Σ(ξ) = σ(E(ξ))` for `σ` in chart coordinates of `T*_c C`.
    pub fn core_embedding(&self, c: &[Rat], sigma: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        self.require_core_point(c)?;
        let e = self.e_chart(c)?;
        if sigma.len() != e.rows() {
            return Err(CoordError::Shape(format!("covector on C has {} coordinates", e.rows())));
        }
        Ok(e.transpose().mul_vec(sigma))
    }

    /// The identities of the proof, the groupoid isomorphism `T*C → core(T*S)` and the dimension count.
    pub fn core_embedding_checks(&self, s: &mut Sampler) -> Result<CoreEmbedding, CoordError> {
        let cotangent_core = cotangent_groupoid(&self.core.groupoid)?;
        let core_of_cotangent = core_of_double(&self.double, s)?;
        let mut report = core_of_cotangent.report.clone();
        let k = self.core.groupoid.arrow_dim();
        let c0 = self.core.embedding.eval(&vector::zeros(k))?;
        let e = self.e_chart(&c0)?;
        let n = 2 * k;
        let (t, sigma) = (block(n, 0, k), block(n, k, k));
        let point = after(&self.core.embedding, &t);
        let covector = after(&PolyMap::linear(&e.transpose()), &sigma);
        let in_s = cat(&[&point, &covector]);
        let map = after(&core_of_cotangent.projection, &in_s);
        let tc = &cotangent_core.total;
        let (hz, vt) = (&self.double.horizontal, &self.double.vertical);
        let (side_h, side_v) = (&self.double.side_h, &self.double.side_v);
        report.maps("Σ lies in the core of T*S", &after(&core_of_cotangent.embedding, &map), &in_s, s);
        report.maps(
            "α̃_{*V}(Σ) = 1^{*V}_θ with θ the source of σ",
            &after(vt.src_map(), &in_s),
            &after(side_h.unit_map(), tc.src_map()),
            s,
        );
        report.maps(
            "α̃_{*H}(Σ) = 1^{*H}_θ with θ the source of σ",
            &after(hz.src_map(), &in_s),
            &after(side_v.unit_map(), tc.src_map()),
            s,
        );
        let identity = PolyMap::identity(tc.base_dim());
        morphism_checks(&mut report, "T*C to core of T*S", tc, &core_of_cotangent.groupoid, &map, &identity, s);
        let lin = linear_part(&map);
        let dims = (tc.arrow_dim(), core_of_cotangent.groupoid.arrow_dim());
        report.exact(
            "σ ↦ Σ is onto the core of T*S",
            dims.0 == dims.1 && lin.rank() == dims.1,
            format!("dim T*C {}, core of T*S {}, rank {}", dims.0, dims.1, lin.rank()),
        );
        Ok(CoreEmbedding { cotangent_core, core_of_cotangent, map, report })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::m4_double_groupoid;
    use crate::exactcalc::int;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cotangent_double_of_m4_validates() {
        let mut s = Sampler::new(21);
        for n in 1..=2 {
            let data = cotangent_double(&m4_double_groupoid(n), &mut s).unwrap();
            let r = data.double.validate(&mut s);
            assert!(r.passed(), "n={n}: {:?}", r.first_failure());
            assert_eq!(data.double.side_h.base_dim(), 2 * n);
            assert_eq!(data.double.vertical.base_dim(), data.double.side_h.arrow_dim());
        }
    }

    #[test]
    fn side_fibres_have_dimension_of_prolongation() {
        let mut s = Sampler::new(22);
        let data = cotangent_double(&m4_double_groupoid(1), &mut s).unwrap();
        let side = &data.double.side_h;
        assert_eq!(side.arrow_dim() - data.base.side_h.arrow_dim(), data.prolonged_v.vb.fiber_dim);
        let m = ints(&[3, 0]);
        let ids = data.double.double_identity(&m);
        assert_eq!(&ids[..4], &data.base.double_identity(&ints(&[3]))[..]);
    }

    #[test]
    fn e_map_lands_in_core_and_kills_nothing_on_core() {
        let mut s = Sampler::new(23);
        let data = cotangent_double(&m4_double_groupoid(1), &mut s).unwrap();
        let c = ints(&[2, 5, 5, 5]);
        let e = data.e_map(&c);
        let chart = linear_part(&data.core.embedding);
        assert!(super::super::express(&chart, &e, "E").is_ok());
        assert_eq!(&e * &chart, chart);
        assert_eq!(data.core_embedding(&c, &ints(&[0, 0])).unwrap(), vector::zeros(4));
        let sigma = data.core_embedding(&c, &ints(&[1, 0])).unwrap();
        assert_eq!(chart.transpose().mul_vec(&sigma), ints(&[1, 0]));
        assert!(matches!(data.core_embedding(&ints(&[1, 2, 3, 4]), &ints(&[1, 0])), Err(CoordError::NotCorePoint(_))));
    }

    #[test]
    fn core_of_cotangent_double_is_cotangent_of_core() {
        let mut s = Sampler::new(24);
        for n in 1..=2 {
            let data = cotangent_double(&m4_double_groupoid(n), &mut s).unwrap();
            let emb = data.core_embedding_checks(&mut s).unwrap();
            assert!(emb.report.passed(), "n={n}: {:?}", emb.report.first_failure());
        }
    }
}
