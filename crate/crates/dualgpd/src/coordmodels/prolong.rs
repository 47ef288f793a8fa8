use super::check::CheckReport;
use super::double::CoordDoubleGroupoid;
use super::groupoid::CoordGroupoid;
use super::linear::LinearVbGroupoid;
use super::{express, linear_part, CoordError};
use crate::dvb::{pair_duals, DualHElement, DualVElement, DvbDims, DvbElement};
use crate::exactcalc::{vector, Mat, Rat, Sampler};
use crate::fingpd::CompositionData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `A_V S`: algebroid of `S ⇉ H`, a groupoid over `AV`.
    Vertical,
    /// `A_H S`: algebroid of `S ⇉ V`, a groupoid over `AH`.
    Horizontal,
}

/// `(A_V S; H, AV; M)` or `(A_H S; V, AH; M)`, with core `AC`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedVb {
    pub direction: Direction,
    pub vb: LinearVbGroupoid,
    /// Fibre coordinates are coefficients along these tangent vectors to `S` at identities.
    pub fibre_basis: Mat,
    /// Canonical basis of the side algebroid inside the tangent space of the side groupoid.
    pub side_basis: Mat,
}

fn algebroid_basis(g: &CoordGroupoid) -> Mat {
    g.src_jacobian(&g.unit(&vector::zeros(g.base_dim()))).kernel().canonical_basis()
}

/// Applies the Lie functor to one structure of `S` and prolongs the other structure to it.
pub fn prolonged_vb(d: &CoordDoubleGroupoid, direction: Direction) -> Result<ProlongedVb, CoordError> {
    d.require_registered()?;
    let (own, other, base, side) = match direction {
        Direction::Vertical => (&d.vertical, &d.horizontal, &d.side_h, &d.side_v),
        Direction::Horizontal => (&d.horizontal, &d.vertical, &d.side_v, &d.side_h),
    };
    let b = algebroid_basis(own);
    let ab = algebroid_basis(side);
    let name = match direction {
        Direction::Vertical => format!("A_V({})", d.name),
        Direction::Horizontal => format!("A_H({})", d.name),
    };
    let onto_side = |f: &CoordGroupoid| -> Result<(), CoordError> { f.require_registered() };
    onto_side(other)?;
    let src_lin = express(&ab, &(&linear_part(other.src_map()) * &b), &format!("{name}: source"))?;
    let tgt_lin = express(&ab, &(&linear_part(other.tgt_map()) * &b), &format!("{name}: target"))?;
    let unit_lin = express(&b, &(&linear_part(other.unit_map()) * &ab), &format!("{name}: identities"))?;
    let inv_lin = express(&b, &(&linear_part(other.inv_map()) * &b), &format!("{name}: inverse"))?;
    let domain = Mat::hstack(&[&src_lin, &-&tgt_lin]).kernel().canonical_basis();
    let pushed = &(&linear_part(other.comp_map()) * &Mat::block_diag(&[&b, &b])) * &domain;
    let image = express(&b, &pushed, &format!("{name}: composition"))?;
    let vb = LinearVbGroupoid {
        name,
        base: base.clone(),
        side_dim: ab.cols(),
        fiber_dim: b.cols(),
        src_lin,
        tgt_lin,
        unit_lin,
        inv_lin,
        comp: CompositionData { domain, image },
    };
    vb.validate_fibres()?;
    Ok(ProlongedVb { direction, vb, fibre_basis: b, side_basis: ab })
}

impl ProlongedVb {
    /// Fibre coordinates of tangent vectors to `S` lying in the core `ker α̃` at an identity.
    pub fn core_frame(&self, ambient: &Mat) -> Result<Mat, CoordError> {
        let frame = express(&self.fibre_basis, ambient, &format!("{}: core frame", self.vb.name))?;
        if !(&self.vb.src_lin * &frame).is_zero() || frame.rank() != self.vb.core_dim() {
            return Err(CoordError::Invalid(format!("{}: frame does not span the core", self.vb.name)));
        }
        Ok(frame)
    }
}

/// The prolongations `AΩ` and `A(Ω*)` of a constant VB-groupoid, in split coordinates.
///
/// `AΩ` elements are `DvbElement { a: X ∈ AG, b: x ∈ A, k ∈ K }`, realized as the tangent vector
/// `(Ab X, F k)` at `(1_m, 1̃_x)`; `A(Ω*)` elements are `DvbElement { a: X, b: κ ∈ K*, k: φ ∈ A* }`,
/// realized as `(Ab X, φ̄ φ)` at `(1_m, 1̃*_κ)`. Here `F` is the chosen core frame and `K*`
/// coordinates are dual to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prolongation {
    pub omega: LinearVbGroupoid,
    pub dual: LinearVbGroupoid,
    pub core_frame: Mat,
    pub dual_core: Mat,
    pub base_algebroid: Mat,
}

impl Prolongation {
    pub fn new(omega: &LinearVbGroupoid, core_frame: Mat) -> Result<Self, CoordError> {
        let q = express(&omega.core_basis(), &core_frame, &format!("{}: core frame", omega.name))?;
        let dual = omega.dual()?.reframe_side(&q.transpose())?;
        Ok(Prolongation {
            dual,
            dual_core: omega.dual_core_elements()?,
            base_algebroid: algebroid_basis(&omega.base),
            core_frame,
            omega: omega.clone(),
        })
    }

    /// Sides `AG`, `A`; core `K`.
    pub fn dims(&self) -> DvbDims {
        DvbDims::new(self.base_algebroid.cols(), self.omega.side_dim, self.core_frame.cols())
    }

    /// Sides `AG`, `K*`; core `A*`.
    pub fn dual_dims(&self) -> DvbDims {
        DvbDims::new(self.base_algebroid.cols(), self.core_frame.cols(), self.omega.side_dim)
    }

    fn identity(&self) -> Vec<Rat> {
        let g = &self.omega.base;
        g.unit(&vector::zeros(g.base_dim()))
    }

    /// Point and tangent vector in the total coordinates `(g, ξ)` of `Ω`.
    pub fn tangent(&self, xi: &DvbElement) -> (Vec<Rat>, Vec<Rat>) {
        let point = vector::concat(&[&self.identity(), &self.omega.unit_lin.mul_vec(&xi.b)]);
        let vel = vector::concat(&[&self.base_algebroid.mul_vec(&xi.a), &self.core_frame.mul_vec(&xi.k)]);
        (point, vel)
    }

    /// Point and tangent vector in the total coordinates `(g, Φ)` of `Ω*`.
    pub fn dual_tangent(&self, cx: &DvbElement) -> (Vec<Rat>, Vec<Rat>) {
        let point = vector::concat(&[&self.identity(), &self.dual.unit_lin.mul_vec(&cx.b)]);
        let vel = vector::concat(&[&self.base_algebroid.mul_vec(&cx.a), &self.dual_core.mul_vec(&cx.k)]);
        (point, vel)
    }

    /// `⟪𝒳, Ξ⟫`: derivative of `<Φ_t, ξ_t>` along curves over the same curve in `G`.
    pub fn pairing(&self, cx: &DvbElement, xi: &DvbElement) -> Result<Rat, CoordError> {
        if cx.a != xi.a {
            return Err(CoordError::Shape("prolonged pairing needs the same point of AG".into()));
        }
        let n = self.omega.base.arrow_dim();
        let (p, v) = self.tangent(xi);
        let (q, w) = self.dual_tangent(cx);
        Ok(vector::dot(&w[n..], &p[n..]) + vector::dot(&q[n..], &v[n..]))
    }

    /// `I_Ω`: `<I(𝒳), Ξ> = ⟪𝒳, Ξ⟫`, into the dual of `AΩ` over `AG`.
    pub fn identify(&self, cx: &DvbElement) -> DualVElement {
        let side = &self.dual_core.transpose() * &self.omega.unit_lin;
        let core = &self.dual.unit_lin.transpose() * &self.core_frame;
        DualVElement { a: cx.a.clone(), beta: side.transpose().mul_vec(&cx.k), kappa: core.transpose().mul_vec(&cx.b) }
    }

    /// `I_Ω^{-1}`.
    pub fn identify_inverse(&self, phi: &DualVElement) -> Result<DvbElement, CoordError> {
        let side = &self.dual_core.transpose() * &self.omega.unit_lin;
        let core = &self.dual.unit_lin.transpose() * &self.core_frame;
        Ok(DvbElement {
            a: phi.a.clone(),
            b: core.transpose().inverse()?.mul_vec(&phi.kappa),
            k: side.transpose().inverse()?.mul_vec(&phi.beta),
        })
    }

    /// `‡𝒳, Ψ‡ = ⟪𝒳, Ξ⟫ - <Ψ, Ξ>_A` with `Ξ = (X, x, core)`.
    pub fn dagger(&self, cx: &DvbElement, psi: &DualHElement, core: &[Rat]) -> Result<Rat, CoordError> {
        if cx.b != psi.kappa {
            return Err(CoordError::Shape("‡ pairs elements over the same point of K*".into()));
        }
        let xi = DvbElement { a: cx.a.clone(), b: psi.b.clone(), k: core.to_vec() };
        let standard = psi.eval(&xi).map_err(|e| CoordError::Invalid(e.to_string()))?;
        Ok(self.pairing(cx, &xi)? - standard)
    }

    fn dual_fibre_element(&self, kappa: &[Rat], v: &[Rat]) -> DvbElement {
        let r = self.base_algebroid.cols();
        DvbElement { a: v[..r].to_vec(), b: kappa.to_vec(), k: v[r..].to_vec() }
    }

    fn horizontal_dual_element(&self, kappa: &[Rat], v: &[Rat]) -> DualHElement {
        let r = self.base_algebroid.cols();
        DualHElement { alpha: v[..r].to_vec(), b: v[r..].to_vec(), kappa: kappa.to_vec() }
    }

    /// Matrix of `‡` over `κ`: rows `(X, φ)` of `A(Ω*)`, columns `(ψ, x)` of `A*Ω`, with zero core in `Ξ`.
    pub fn dagger_matrix(&self, kappa: &[Rat]) -> Result<Mat, CoordError> {
        let n = self.base_algebroid.cols() + self.omega.side_dim;
        let zero = vector::zeros(self.core_frame.cols());
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            let cx = self.dual_fibre_element(kappa, &vector::unit(n, i));
            for j in 0..n {
                let psi = self.horizontal_dual_element(kappa, &vector::unit(n, j));
                m.set(i, j, self.dagger(&cx, &psi, &zero)?);
            }
        }
        Ok(m)
    }

    /// `R^gpd`: `‡𝒳, R(ℱ)‡ = <𝒳, ℱ>` for `ℱ = (alpha: X*, b: κ, kappa: φ*)` in `A*(Ω*)`.
    pub fn r_gpd(&self, f: &DualHElement) -> Result<DualHElement, CoordError> {
        let t = self.dagger_matrix(&f.b)?;
        let v = t.inverse()?.mul_vec(&vector::concat(&[&f.alpha, &f.kappa]));
        Ok(self.horizontal_dual_element(&f.b, &v))
    }

    /// `(I^‡ ∘ ε)^{-1}` with `ε(Ψ)(Φ) = -<Φ, Ψ>` the opposite of the pairing of the two duals of `AΩ`.
    pub fn r_gpd_from_identification(&self, f: &DualHElement) -> Result<DualHElement, CoordError> {
        let n = self.base_algebroid.cols() + self.omega.side_dim;
        let kappa = &f.b;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            let image = self.identify(&self.dual_fibre_element(kappa, &vector::unit(n, i)));
            for j in 0..n {
                let psi = self.horizontal_dual_element(kappa, &vector::unit(n, j));
                let v = pair_duals(&image, &psi).map_err(|e| CoordError::Invalid(e.to_string()))?;
                m.set(i, j, -v);
            }
        }
        let v = m.inverse()?.mul_vec(&vector::concat(&[&f.alpha, &f.kappa]));
        Ok(self.horizontal_dual_element(kappa, &v))
    }

    /// The displayed properties of `⟪,⟫`, `‡` and `R^gpd`, on random elements.
    pub fn report(&self, s: &mut Sampler, trials: usize) -> CheckReport {
        let mut r = CheckReport::new();
        let (d, dd) = (self.dims(), self.dual_dims());
        let (rg, a, k) = (d.side_h, d.side_v, d.core);
        for _ in 0..trials {
            let x = s.vector(a);
            let phi = s.vector(a);
            let big_x = s.vector(rg);
            let kap = s.vector(k);
            let kc = s.vector(k);
            let zero_x = DvbElement { a: vector::zeros(rg), b: x.clone(), k: vector::zeros(k) };
            let phi_bar = DvbElement { a: vector::zeros(rg), b: vector::zeros(k), k: phi.clone() };
            let lhs = self.pairing(&phi_bar, &zero_x).unwrap_or_else(|_| Rat::from_integer(1.into()));
            r.point("⟪0̃_x, φ̄⟫ = <φ, x>", &vector::concat(&[&x, &phi]), &[lhs], &[vector::dot(&phi, &x)]);
            let k_bar = DvbElement { a: vector::zeros(rg), b: vector::zeros(a), k: kc.clone() };
            let zero_kappa = DvbElement { a: vector::zeros(rg), b: kap.clone(), k: vector::zeros(a) };
            let lhs = self.pairing(&zero_kappa, &k_bar).expect("same AG point");
            r.point("⟪k̄, 0̃*_κ⟫ = <κ, k>", &vector::concat(&[&kc, &kap]), &[lhs], &[vector::dot(&kap, &kc)]);

            let cx = DvbElement { a: big_x.clone(), b: kap.clone(), k: phi.clone() };
            let xi = DvbElement { a: big_x.clone(), b: x.clone(), k: kc.clone() };
            let via_i = self.identify(&cx).eval(&xi).expect("same AG point");
            r.point("<I(𝒳), Ξ> = ⟪𝒳, Ξ⟫", &vector::concat(&[&big_x, &x]), &[via_i], &[self.pairing(&cx, &xi).expect("same point")]);

            let psi = DualHElement { alpha: s.vector(rg), b: x.clone(), kappa: kap.clone() };
            let values: Vec<Rat> =
                (0..3).map(|_| self.dagger(&cx, &psi, &s.vector(k)).expect("compatible elements")).collect();
            r.point("‡ is independent of the core of Ξ", &psi.alpha, &values[1..], &values[..2]);

            let phi_zero = DualHElement { alpha: vector::zeros(rg), b: x.clone(), kappa: vector::zeros(k) };
            let v = self.dagger(&phi_bar, &phi_zero, &vector::zeros(k)).expect("compatible");
            r.point("‡φ̄, 0̃*_x‡ = <φ, x>", &vector::concat(&[&x, &phi]), &[v], &[vector::dot(&phi, &x)]);
            let zero_big = DvbElement { a: big_x.clone(), b: vector::zeros(k), k: vector::zeros(a) };
            let psi_bar = DualHElement { alpha: psi.alpha.clone(), b: vector::zeros(a), kappa: vector::zeros(k) };
            let v = self.dagger(&zero_big, &psi_bar, &vector::zeros(k)).expect("compatible");
            r.point("‡A(0̃*)(X), ψ̄‡ = -<ψ, X>", &big_x, &[v], &[-vector::dot(&psi.alpha, &big_x)]);

            let f = DualHElement { alpha: s.vector(rg), b: kap.clone(), kappa: s.vector(a) };
            match (self.r_gpd(&f), self.r_gpd_from_identification(&f)) {
                (Ok(rf), Ok(alt)) => {
                    let lhs = self.dagger(&cx, &rf, &kc).expect("compatible");
                    let rhs = vector::dot(&f.alpha, &cx.a) + vector::dot(&f.kappa, &cx.k);
                    r.point("‡𝒳, R(ℱ)‡ = <𝒳, ℱ>", &f.alpha, &[lhs], &[rhs]);
                    let flat = |e: &DualHElement| vector::concat(&[&e.alpha, &e.b, &e.kappa]);
                    r.point("R = (I^‡ ∘ ε)^{-1}", &f.alpha, &flat(&rf), &flat(&alt));
                    let expected = DualHElement { alpha: vector::neg(&f.alpha), b: f.kappa.clone(), kappa: f.b.clone() };
                    r.point("R is the identity on K* and A and -id on the core", &f.alpha, &flat(&rf), &flat(&expected));
                }
                (a1, a2) => {
                    r.exact("R^gpd is defined", false, format!("{:?} / {:?}", a1.err(), a2.err()));
                }
            }
        }
        let zero_kappa = vector::zeros(k);
        let rank_ok = self.dagger_matrix(&zero_kappa).map(|m| m.rank() == dd.side_h + dd.core).unwrap_or(false);
        r.exact("‡ is nondegenerate", rank_ok, format!("fibre dimension {}", dd.side_h + dd.core));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::{core_of_double, m4_double_groupoid, pair_groupoid, tangent_vb};
    use crate::exactcalc::{Poly, PolyMap};

    fn tangent_prolongation(n: usize) -> Prolongation {
        let t = tangent_vb(&pair_groupoid(n)).unwrap();
        let frame = t.core_basis();
        Prolongation::new(&t, frame).unwrap()
    }

    #[test]
    fn tangent_of_pair_prolongation_report() {
        let mut s = Sampler::new(11);
        for n in 1..=2 {
            let p = tangent_prolongation(n);
            let r = p.report(&mut s, 5);
            assert!(r.passed(), "{:?}", r.first_failure());
        }
    }

    #[test]
    fn dagger_of_pair_one_is_full_rank() {
        let p = tangent_prolongation(1);
        let m = p.dagger_matrix(&[Rat::from_integer(3.into())]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    /// Differentiates the bilinear pairing `Σ Φ_i ξ_i` as a polynomial along the two tangent vectors.
    #[test]
    fn prolonged_pairing_is_derivative_of_pairing() {
        let mut s = Sampler::new(12);
        let p = tangent_prolongation(2);
        let f = p.omega.fiber_dim;
        let n = p.omega.base.arrow_dim();
        let pairing = (0..f).fold(Poly::zero(2 * f), |acc, i| &acc + &(&Poly::var(2 * f, i) * &Poly::var(2 * f, f + i)));
        let map = PolyMap::new(2 * f, vec![pairing]).unwrap();
        let d = p.dims();
        for _ in 0..5 {
            let xi = DvbElement { a: s.vector(d.side_h), b: s.vector(d.side_v), k: s.vector(d.core) };
            let cx = DvbElement { a: xi.a.clone(), b: s.vector(d.core), k: s.vector(d.side_v) };
            let (pt, v) = p.tangent(&xi);
            let (qt, w) = p.dual_tangent(&cx);
            let at = vector::concat(&[&pt[n..], &qt[n..]]);
            let dir = vector::concat(&[&v[n..], &w[n..]]);
            let derivative = map.jacobian_at(&at).unwrap().mul_vec(&dir);
            assert_eq!(derivative[0], p.pairing(&cx, &xi).unwrap());
        }
    }

    #[test]
    fn m4_prolongations_validate() {
        let mut s = Sampler::new(13);
        let d = m4_double_groupoid(1);
        let core = core_of_double(&d, &mut s).unwrap();
        let ac = &linear_part(&core.embedding) * &algebroid_basis(&core.groupoid);
        for dir in [Direction::Vertical, Direction::Horizontal] {
            let p = prolonged_vb(&d, dir).unwrap();
            assert!(p.vb.total_space().validate(&mut s).passed());
            assert_eq!((p.vb.side_dim, p.vb.fiber_dim, p.vb.core_dim()), (1, 2, 1));
            let frame = p.core_frame(&ac).unwrap();
            let pr = Prolongation::new(&p.vb, frame).unwrap();
            assert!(pr.report(&mut s, 3).passed());
            assert!(pr.dual.total_space().validate(&mut s).passed());
        }
    }
}
