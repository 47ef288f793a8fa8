use serde::Serialize;

use super::{pair_duals, DualHElement, DualVElement, DvbElement, DvbError, SplitDvb};
use crate::exactcalc::{vector, Mat, Rat, Sampler};

/// The five hypotheses on a pairing of two double vector bundles sharing a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingCondition {
    SideCoreNondegenerate,
    CoreSideNondegenerate,
    CoresOrthogonal,
    Biadditive,
    Homogeneous,
    FibreNondegenerate,
    Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
    Other,
}

impl Sign {
    pub fn of(m: &Mat) -> Sign {
        if m.rows() != m.cols() {
            return Sign::Other;
        }
        let id = Mat::identity(m.rows());
        if *m == id {
            Sign::Plus
        } else if *m == -&id {
            Sign::Minus
        } else {
            Sign::Other
        }
    }
}

/// Isomorphism `D -> E^{*V}` over the identity of the shared side, in split form:
/// `(a, x, k) -> (a, core·k, side_v·x)` written as `(a, beta, kappa)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvbIso {
    pub side_v: Mat,
    pub core: Mat,
}

impl DvbIso {
    pub fn apply(&self, d: &DvbElement) -> DualVElement {
        DualVElement { a: d.a.clone(), beta: self.core.mul_vec(&d.k), kappa: self.side_v.mul_vec(&d.b) }
    }
}

fn cond(condition: PairingCondition, witness: String) -> DvbError {
    DvbError::Condition { condition, witness }
}

fn basis(n: usize) -> impl Iterator<Item = (usize, Vec<Rat>)> {
    (0..n).map(move |i| (i, vector::unit(n, i)))
}

/// Checks the hypotheses on `pair` (a pairing of the bundles `D -> A` and `E -> A`)
/// and returns the induced isomorphism `F(d)(ξ) = <d, ξ>`.
pub fn induced_iso<P>(d: &SplitDvb, e: &SplitDvb, pair: P, sampler: &mut Sampler, trials: usize) -> Result<DvbIso, DvbError>
where
    P: Fn(&DvbElement, &DvbElement) -> Result<Rat, DvbError>,
{
    let (dd, ed) = (d.dims, e.dims);
    if dd.side_h != ed.side_h {
        return Err(DvbError::Length { what: "shared side", expected: dd.side_h, got: ed.side_h });
    }
    let h = dd.side_h;
    let zero_a = vector::zeros(h);
    let side_elem = |a: &[Rat], b: Vec<Rat>, core_dim: usize| DvbElement { a: a.to_vec(), b, k: vector::zeros(core_dim) };
    let core_elem = |a: &[Rat], k: Vec<Rat>, side_dim: usize| DvbElement { a: a.to_vec(), b: vector::zeros(side_dim), k };

    let mut side_core = Mat::zeros(dd.side_v, ed.core);
    for (i, x) in basis(dd.side_v) {
        for (j, l) in basis(ed.core) {
            side_core.set(i, j, pair(&side_elem(&zero_a, x.clone(), dd.core), &core_elem(&zero_a, l, ed.side_v))?);
        }
    }
    if dd.side_v != ed.core || side_core.rank() != dd.side_v {
        return Err(cond(
            PairingCondition::SideCoreNondegenerate,
            format!("pairing matrix of D^V and L has rank {} (sizes {}x{})", side_core.rank(), dd.side_v, ed.core),
        ));
    }

    let mut core_side = Mat::zeros(dd.core, ed.side_v);
    for (i, k) in basis(dd.core) {
        for (j, y) in basis(ed.side_v) {
            core_side.set(i, j, pair(&core_elem(&zero_a, k.clone(), dd.side_v), &side_elem(&zero_a, y, ed.core))?);
        }
    }
    if dd.core != ed.side_v || core_side.rank() != dd.core {
        return Err(cond(
            PairingCondition::CoreSideNondegenerate,
            format!("pairing matrix of K and E^V has rank {} (sizes {}x{})", core_side.rank(), dd.core, ed.side_v),
        ));
    }

    for (i, k) in basis(dd.core) {
        for (j, l) in basis(ed.core) {
            let v = pair(&core_elem(&zero_a, k.clone(), dd.side_v), &core_elem(&zero_a, l, ed.side_v))?;
            if v != Rat::from_integer(0.into()) {
                return Err(cond(PairingCondition::CoresOrthogonal, format!("core basis pair ({i},{j}) pairs to {v}")));
            }
        }
    }

    for t in 0..trials {
        let x = sampler.vector(dd.side_v);
        let y = sampler.vector(ed.side_v);
        let d1 = DvbElement { a: sampler.vector(h), b: x.clone(), k: sampler.vector(dd.core) };
        let d2 = DvbElement { a: sampler.vector(h), b: x, k: sampler.vector(dd.core) };
        let e1 = DvbElement { a: d1.a.clone(), b: y.clone(), k: sampler.vector(ed.core) };
        let e2 = DvbElement { a: d2.a.clone(), b: y, k: sampler.vector(ed.core) };
        let lhs = pair(&d1.add_horizontal(&d2)?, &e1.add_horizontal(&e2)?)?;
        let rhs = pair(&d1, &e1)? + pair(&d2, &e2)?;
        if lhs != rhs {
            return Err(cond(PairingCondition::Biadditive, format!("trial {t}: {lhs} != {rhs}")));
        }
        let s = sampler.rational();
        let lhs = pair(&d1.scale_horizontal(&s), &e1.scale_horizontal(&s))?;
        let rhs = &s * pair(&d1, &e1)?;
        if lhs != rhs {
            return Err(cond(PairingCondition::Homogeneous, format!("trial {t}, t = {s}: {lhs} != {rhs}")));
        }
    }

    // Fibre pairing over a random point of the shared side, and the morphism form of F.
    let a = sampler.vector(h);
    let n_left = dd.side_v + dd.core;
    let n_right = ed.side_v + ed.core;
    let split = |v: &[Rat], side: usize| (v[..side].to_vec(), v[side..].to_vec());
    let mut fibre = Mat::zeros(n_left, n_right);
    for (i, u) in basis(n_left) {
        let (b, k) = split(&u, dd.side_v);
        let left = DvbElement { a: a.clone(), b, k };
        for (j, w) in basis(n_right) {
            let (b, k) = split(&w, ed.side_v);
            fibre.set(i, j, pair(&left, &DvbElement { a: a.clone(), b, k })?);
        }
    }
    if n_left != n_right || fibre.rank() != n_left {
        return Err(cond(PairingCondition::FibreNondegenerate, format!("rank {} at a = {:?}", fibre.rank(), a)));
    }

    let iso = DvbIso { side_v: side_core.transpose(), core: core_side.transpose() };
    for t in 0..trials.max(1) {
        let dm = d.random_element(sampler);
        let image = iso.apply(&dm);
        let xi = DvbElement { a: dm.a.clone(), b: sampler.vector(ed.side_v), k: sampler.vector(ed.core) };
        let direct = pair(&dm, &xi)?;
        let via = image.eval(&xi)?;
        if direct != via {
            return Err(cond(PairingCondition::Morphism, format!("trial {t}: F(d)(ξ) = {via}, <d, ξ> = {direct}")));
        }
    }
    Ok(iso)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDualReport {
    pub iso: DvbIso,
    pub side_k_sign: Sign,
    pub side_h_sign: Sign,
    pub core_sign: Sign,
    pub composite_core_sign: Sign,
}

impl DoubleDualReport {
    /// Image of `(a, beta, kappa)` in `E^{*V}` under the identification with `(E^{*H})^{*V}`.
    pub fn apply(&self, phi: &DualVElement) -> DualVElement {
        DualVElement {
            a: self.iso.side_v.mul_vec(&phi.a),
            beta: self.iso.core.mul_vec(&phi.beta),
            kappa: phi.kappa.clone(),
        }
    }
}

/// Isomorphism `E^{*V} -> (E^{*H})^{*V}` induced by the duality pairing.
pub fn double_dual_iso(e: &SplitDvb, sampler: &mut Sampler, trials: usize) -> Result<DoubleDualReport, DvbError> {
    // Present E^{*V} with K* as its first side so both bundles share it.
    let left = e.dual_vertical().transpose();
    let right = e.dual_horizontal();
    let pair = |d: &DvbElement, xi: &DvbElement| {
        let phi = DualVElement { a: d.b.clone(), beta: d.k.clone(), kappa: d.a.clone() };
        let psi = DualHElement::from_element(xi);
        pair_duals(&phi, &psi)
    };
    let iso = induced_iso(&left, &right, pair, sampler, trials)?;
    let composite = &iso.core * &iso.core;
    Ok(DoubleDualReport {
        side_k_sign: Sign::Plus,
        side_h_sign: Sign::of(&iso.side_v),
        core_sign: Sign::of(&iso.core),
        composite_core_sign: Sign::of(&composite),
        iso,
    })
}
