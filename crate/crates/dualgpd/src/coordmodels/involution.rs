use super::check::CheckReport;
use super::cotdouble::CotangentDoubleData;
use super::CoordError;
use crate::dvb::{DualHElement, DualVElement, DvbElement};
use crate::exactcalc::{vector, Mat, Rat, Sampler};

/// An element of `T²S` as `(s, ṡ, δs, δṡ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondTangent {
    pub point: Vec<Rat>,
    pub velocity: Vec<Rat>,
    pub variation: Vec<Rat>,
    pub second: Vec<Rat>,
}

/// `j: A²S → A_2S`, the canonical involution of `T²S` restricted to `A²S = A(A_V S)`.
///
/// `A²S` elements are `DvbElement { a: X ∈ AH, b: x ∈ AV, k ∈ AC }` and `A_2S` elements
/// `DvbElement { a: X ∈ AV, b: x ∈ AH, k ∈ AC }`, the split coordinates of the two prolongations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalInvolution {
    /// `j` on the `AV` side: `A²S` side `b` to `A_2S` side `a`.
    pub on_av: Mat,
    /// `j` on the `AH` side: `A²S` side `a` to `A_2S` side `b`.
    pub on_ah: Mat,
    pub on_core: Mat,
}

struct Frames {
    /// Fibre part of the velocity, from side `b`.
    velocity: Mat,
    /// Variation of the base point, from side `a`.
    variation: Mat,
    /// Second-order part, from the core.
    second: Mat,
}

fn upper_frames(data: &CotangentDoubleData) -> Frames {
    let (p, pr) = (&data.prolonged_v, &data.duality_v);
    let m = vector::zeros(data.base.side_h.base_dim());
    Frames {
        velocity: &p.fibre_basis * &p.vb.unit_lin,
        variation: &data.base.vertical.unit_jacobian(&data.base.side_h.unit(&m)) * &pr.base_algebroid,
        second: &p.fibre_basis * &pr.core_frame,
    }
}

fn lower_frames(data: &CotangentDoubleData) -> Frames {
    let (p, pr) = (&data.prolonged_h, &data.duality_h);
    let m = vector::zeros(data.base.side_v.base_dim());
    Frames {
        velocity: &p.fibre_basis * &p.vb.unit_lin,
        variation: &data.base.horizontal.unit_jacobian(&data.base.side_v.unit(&m)) * &pr.base_algebroid,
        second: &p.fibre_basis * &pr.core_frame,
    }
}

impl Frames {
    fn ambient(&self, point: Vec<Rat>, e: &DvbElement) -> SecondTangent {
        SecondTangent {
            point,
            velocity: self.velocity.mul_vec(&e.b),
            variation: self.variation.mul_vec(&e.a),
            second: self.second.mul_vec(&e.k),
        }
    }

    fn split(&self, t: &SecondTangent) -> Result<DvbElement, CoordError> {
        let solve = |m: &Mat, v: &[Rat], what: &str| {
            m.coords(v).map_err(|_| CoordError::Invalid(format!("the involution leaves the prolongation in its {what}")))
        };
        Ok(DvbElement {
            a: solve(&self.variation, &t.variation, "base variation")?,
            b: solve(&self.velocity, &t.velocity, "velocity")?,
            k: solve(&self.second, &t.second, "second-order part")?,
        })
    }
}

fn swap(t: SecondTangent) -> SecondTangent {
    SecondTangent { point: t.point, velocity: t.variation, variation: t.velocity, second: t.second }
}

pub fn canonical_j(data: &CotangentDoubleData) -> Result<CanonicalInvolution, CoordError> {
    let (up, down) = (upper_frames(data), lower_frames(data));
    let point = data.base.double_identity(&vector::zeros(data.base.side_h.base_dim()));
    let d = data.duality_v.dims();
    let image = |e: DvbElement| down.split(&swap(up.ambient(point.clone(), &e)));
    let zeros = |n| vector::zeros(n);
    let mut cols: [Vec<Vec<Rat>>; 3] = Default::default();
    for i in 0..d.side_v {
        let y = image(DvbElement { a: zeros(d.side_h), b: vector::unit(d.side_v, i), k: zeros(d.core) })?;
        require_block(vector::is_zero(&y.b) && vector::is_zero(&y.k), "AV")?;
        cols[0].push(y.a);
    }
    for i in 0..d.side_h {
        let y = image(DvbElement { a: vector::unit(d.side_h, i), b: zeros(d.side_v), k: zeros(d.core) })?;
        require_block(vector::is_zero(&y.a) && vector::is_zero(&y.k), "AH")?;
        cols[1].push(y.b);
    }
    for i in 0..d.core {
        let y = image(DvbElement { a: zeros(d.side_h), b: zeros(d.side_v), k: vector::unit(d.core, i) })?;
        require_block(vector::is_zero(&y.a) && vector::is_zero(&y.b), "AC")?;
        cols[2].push(y.k);
    }
    let [av, ah, core] = cols;
    Ok(CanonicalInvolution {
        on_av: Mat::from_cols(d.side_v, &av),
        on_ah: Mat::from_cols(d.side_h, &ah),
        on_core: Mat::from_cols(d.core, &core),
    })
}

fn require_block(ok: bool, what: &str) -> Result<(), CoordError> {
    if ok {
        Ok(())
    } else {
        Err(CoordError::Invalid(format!("j does not preserve {what}")))
    }
}

impl CanonicalInvolution {
    pub fn apply(&self, e: &DvbElement) -> DvbElement {
        DvbElement { a: self.on_av.mul_vec(&e.b), b: self.on_ah.mul_vec(&e.a), k: self.on_core.mul_vec(&e.k) }
    }

    pub fn apply_inverse(&self, e: &DvbElement) -> Result<DvbElement, CoordError> {
        Ok(DvbElement {
            a: self.on_ah.inverse()?.mul_vec(&e.b),
            b: self.on_av.inverse()?.mul_vec(&e.a),
            k: self.on_core.inverse()?.mul_vec(&e.k),
        })
    }

    /// `j^{*V}`: the dual of `j` over `AH`, from `A*(A_H S)` to the dual of `A²S` over `AH`.
    pub fn dual_over_ah(&self, psi: &DualHElement) -> Result<DualVElement, CoordError> {
        Ok(DualVElement {
            a: self.on_ah.inverse()?.mul_vec(&psi.b),
            beta: self.on_av.transpose().mul_vec(&psi.alpha),
            kappa: self.on_core.transpose().mul_vec(&psi.kappa),
        })
    }

    /// `j^{*H}`: the dual of `j` over `AV`, from the dual of `A_2S` over `AV` to `A*(A_V S)`.
    pub fn dual_over_av(&self, phi: &DualVElement) -> Result<DualHElement, CoordError> {
        Ok(DualHElement {
            alpha: self.on_ah.transpose().mul_vec(&phi.beta),
            b: self.on_av.inverse()?.mul_vec(&phi.a),
            kappa: self.on_core.transpose().mul_vec(&phi.kappa),
        })
    }
}

/// `j′^V = I_V^{-1} ∘ j^{*V}` and `j′^H = j^{*H} ∘ I_H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPrimeMaps<'a> {
    pub data: &'a CotangentDoubleData,
    pub j: CanonicalInvolution,
}

pub fn jprime_maps(data: &CotangentDoubleData) -> Result<JPrimeMaps<'_>, CoordError> {
    Ok(JPrimeMaps { data, j: canonical_j(data)? })
}

impl JPrimeMaps<'_> {
    /// `A*(A_H S) → A(A*_V S)`.
    pub fn vertical(&self, psi: &DualHElement) -> Result<DvbElement, CoordError> {
        self.data.duality_v.identify_inverse(&self.j.dual_over_ah(psi)?)
    }

    /// `A(A*_H S) → A*(A_V S)`.
    pub fn horizontal(&self, y: &DvbElement) -> Result<DualHElement, CoordError> {
        self.j.dual_over_av(&self.data.duality_h.identify(y))
    }

    /// `(j′^V)^{-1}: A(A*_V S) → A*(A_H S)`, by inverting the matrix of `j′^V`.
    pub fn vertical_inverse(&self, x: &DvbElement) -> Result<DualHElement, CoordError> {
        let d = self.data.duality_h.dims();
        let (r, a, k) = (d.side_h, d.side_v, d.core);
        let n = r + a + k;
        let columns: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let u = vector::unit(n, i);
                let psi = DualHElement { alpha: u[..r].to_vec(), b: u[r..r + a].to_vec(), kappa: u[r + a..].to_vec() };
                let img = self.vertical(&psi)?;
                Ok(vector::concat(&[&img.a, &img.b, &img.k]))
            })
            .collect::<Result<_, CoordError>>()?;
        let m = Mat::from_cols(n, &columns);
        let v = m.inverse()?.mul_vec(&vector::concat(&[&x.a, &x.b, &x.k]));
        Ok(DualHElement { alpha: v[..r].to_vec(), b: v[r..r + a].to_vec(), kappa: v[r + a..].to_vec() })
    }

    /// `(j′^H)^{-1}: A*(A_V S) → A(A*_H S)`, by inverting the matrix of `j′^H`.
    pub fn horizontal_inverse(&self, psi: &DualHElement) -> Result<DvbElement, CoordError> {
        let d = self.data.duality_h.dual_dims();
        let (r, a, k) = (d.side_h, d.side_v, d.core);
        let n = r + a + k;
        let columns: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let u = vector::unit(n, i);
                let y = DvbElement { a: u[..r].to_vec(), b: u[r..r + a].to_vec(), k: u[r + a..].to_vec() };
                let img = self.horizontal(&y)?;
                Ok(vector::concat(&[&img.alpha, &img.b, &img.kappa]))
            })
            .collect::<Result<_, CoordError>>()?;
        let m = Mat::from_cols(n, &columns);
        let v = m.inverse()?.mul_vec(&vector::concat(&[&psi.alpha, &psi.b, &psi.kappa]));
        Ok(DvbElement { a: v[..r].to_vec(), b: v[r..r + a].to_vec(), k: v[r + a..].to_vec() })
    }

    /// `j² = id`, preservation of the sides and core, and the two displayed prolonged-pairing identities.
    pub fn report(&self, s: &mut Sampler, trials: usize) -> CheckReport {
        let mut r = CheckReport::new();
        let (pv, ph) = (&self.data.duality_v, &self.data.duality_h);
        let (dv, dh) = (pv.dims(), ph.dims());
        let flat = |e: &DvbElement| vector::concat(&[&e.a, &e.b, &e.k]);
        let (up, down) = (upper_frames(self.data), lower_frames(self.data));
        let point = self.data.base.double_identity(&vector::zeros(self.data.base.side_h.base_dim()));
        for _ in 0..trials {
            let xi = DvbElement { a: s.vector(dv.side_h), b: s.vector(dv.side_v), k: s.vector(dv.core) };
            let jx = self.j.apply(&xi);
            let back = down.split(&swap(up.ambient(point.clone(), &xi))).expect("lies in A_2S");
            r.point("j agrees with the swap in T²S", &flat(&xi), &flat(&jx), &flat(&back));
            let twice = up.split(&swap(down.ambient(point.clone(), &jx))).expect("lies in A²S");
            r.point("j² = id", &flat(&xi), &flat(&twice), &flat(&xi));
            match self.j.apply_inverse(&jx) {
                Ok(inv) => r.point("j⁻¹ ∘ j = id", &flat(&xi), &flat(&inv), &flat(&xi)),
                Err(e) => r.exact("j is invertible", false, e.to_string()),
            };

            // ⟪𝒳, Ξ⟫_{AH} = <(j′^V)^{-1}(𝒳), j(Ξ)> with 𝒳 ∈ A(A*_V S), Ξ ∈ A²S over the same point of AH.
            let cx = DvbElement { a: xi.a.clone(), b: s.vector(dv.core), k: s.vector(dv.side_v) };
            let lhs = pv.pairing(&cx, &xi).expect("same point of AH");
            let rhs = self.vertical_inverse(&cx).and_then(|psi| psi.eval(&jx).map_err(|e| CoordError::Invalid(e.to_string())));
            match rhs {
                Ok(v) => r.point("⟪𝒳, Ξ⟫ = <(j′^V)^{-1}𝒳, jΞ>", &flat(&cx), &[lhs], &[v]),
                Err(e) => r.exact("(j′^V)^{-1} is defined", false, e.to_string()),
            };

            // ⟪𝒴, Φ⟫_{AV} = <j′^H(𝒴), j^{-1}(Φ)> with 𝒴 ∈ A(A*_H S), Φ ∈ A_2S over the same point of AV.
            let phi = DvbElement { a: s.vector(dh.side_h), b: s.vector(dh.side_v), k: s.vector(dh.core) };
            let y = DvbElement { a: phi.a.clone(), b: s.vector(dh.core), k: s.vector(dh.side_v) };
            let lhs = ph.pairing(&y, &phi).expect("same point of AV");
            let rhs = self
                .horizontal(&y)
                .and_then(|h| self.j.apply_inverse(&phi).and_then(|p| h.eval(&p).map_err(|e| CoordError::Invalid(e.to_string()))));
            match rhs {
                Ok(v) => r.point("⟪𝒴, Φ⟫ = <j′^H𝒴, j⁻¹Φ>", &flat(&y), &[lhs], &[v]),
                Err(e) => r.exact("j′^H is defined", false, e.to_string()),
            };
        }
        r
    }

    /// For `S = M^4`: `j′^H` and `(j′^V)^{-1}` against Tulczyjew's `TT*M → T*TM`,
    /// `(q, p, q̇, ṗ) ↦ (q, q̇, ṗ, p)`, after identifying `AV ≅ TM` and `A*H ≅ A*C ≅ T*M` through the anchors.
    pub fn tulczyjew_checks(&self, s: &mut Sampler, trials: usize) -> CheckReport {
        let mut r = CheckReport::new();
        let (ph, pv) = (&self.data.duality_h, &self.data.duality_v);
        // Anchors of AV, AH, AC: Tβ on the algebroid bases.
        let anchor = |g: &super::CoordGroupoid, basis: &Mat| {
            let m = vector::zeros(g.base_dim());
            &g.tgt_jacobian(&g.unit(&m)) * basis
        };
        let a_v = anchor(&self.data.base.side_v, &ph.base_algebroid);
        let a_h = anchor(&self.data.base.side_h, &pv.base_algebroid);
        let core = &self.data.core.groupoid;
        let ab_c = core.src_jacobian(&core.unit(&vector::zeros(core.base_dim()))).kernel().canonical_basis();
        let a_c = anchor(core, &ab_c);
        let (Ok(a_h_inv), Ok(a_c_inv)) = (a_h.inverse(), a_c.inverse()) else {
            r.exact("anchors identify the sides with TM", false, "anchor not invertible");
            return r;
        };
        let cotangent = |a_inv: &Mat, v: &[Rat]| a_inv.transpose().mul_vec(v);
        let d = ph.dims();
        for _ in 0..trials {
            // 𝒴 = (X ∈ AV, κ ∈ A*C, φ ∈ A*H) as (q̇, p, ṗ) of TT*M at q = 0.
            let y = DvbElement { a: s.vector(d.side_h), b: s.vector(d.core), k: s.vector(d.side_v) };
            let (qdot, p, pdot) = (a_v.mul_vec(&y.a), cotangent(&a_c_inv, &y.b), cotangent(&a_h_inv, &y.k));
            // Tulczyjew image (v, p_q, p_v) = (q̇, ṗ, p) in T*TM; A*(A_V S) is (alpha ∈ A*H, b ∈ AV, kappa ∈ A*C).
            let expected = vector::concat(&[&pdot, &qdot, &p]);
            match self.horizontal(&y) {
                Ok(h) => {
                    let got = vector::concat(&[&cotangent(&a_h_inv, &h.alpha), &a_v.mul_vec(&h.b), &cotangent(&a_c_inv, &h.kappa)]);
                    r.point("j′^H is Tulczyjew's map", &vector::concat(&[&qdot, &p, &pdot]), &got, &expected);
                }
                Err(e) => {
                    r.exact("j′^H is defined", false, e.to_string());
                }
            }
            // (j′^V)^{-1}: A(A*_V S) = (X ∈ AH, κ ∈ A*C, φ ∈ A*V) as (q̇, p, ṗ); image in A*(A_H S) = (alpha ∈ A*V, b ∈ AH, kappa ∈ A*C).
            let dv = pv.dims();
            let x = DvbElement { a: s.vector(dv.side_h), b: s.vector(dv.core), k: s.vector(dv.side_v) };
            let a_v_inv = a_v.inverse().expect("anchor of AV");
            let (qdot, p, pdot) = (a_h.mul_vec(&x.a), cotangent(&a_c_inv, &x.b), cotangent(&a_v_inv, &x.k));
            let expected = vector::concat(&[&pdot, &qdot, &p]);
            match self.vertical_inverse(&x) {
                Ok(h) => {
                    let got = vector::concat(&[&cotangent(&a_v_inv, &h.alpha), &a_h.mul_vec(&h.b), &cotangent(&a_c_inv, &h.kappa)]);
                    r.point("(j′^V)^{-1} is Tulczyjew's map", &vector::concat(&[&qdot, &p, &pdot]), &got, &expected);
                }
                Err(e) => {
                    r.exact("(j′^V)^{-1} is defined", false, e.to_string());
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::{cotangent_double, m4_double_groupoid};

    #[test]
    fn j_on_m4_preserves_sides_and_is_an_involution() {
        let mut s = Sampler::new(31);
        for n in 1..=2 {
            let data = cotangent_double(&m4_double_groupoid(n), &mut s).unwrap();
            let maps = jprime_maps(&data).unwrap();
            assert_eq!(maps.j.on_core, Mat::identity(n));
            let r = maps.report(&mut s, 4);
            assert!(r.passed(), "n={n}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn jprime_on_m4_is_tulczyjew() {
        let mut s = Sampler::new(32);
        for n in 1..=2 {
            let data = cotangent_double(&m4_double_groupoid(n), &mut s).unwrap();
            let r = jprime_maps(&data).unwrap().tulczyjew_checks(&mut s, 4);
            assert!(r.passed(), "n={n}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn sign_flip_on_core_is_not_tulczyjew() {
        let mut s = Sampler::new(33);
        let data = cotangent_double(&m4_double_groupoid(1), &mut s).unwrap();
        let mut maps = jprime_maps(&data).unwrap();
        maps.j.on_core = -&maps.j.on_core;
        assert!(!maps.tulczyjew_checks(&mut s, 2).passed());
    }
}
