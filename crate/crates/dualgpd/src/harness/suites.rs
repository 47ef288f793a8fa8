//! The named suites and what each one runs.

use std::fmt::Display;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{DimRange, SuiteConfig};
use super::HarnessError;
use crate::coordmodels::{cotangent_double, cotangent_groupoid, m4_double_groupoid, pair_groupoid, CheckReport};
use crate::dvb::{double_dual_iso, pair_duals_closed, pair_duals_via, pairing_matrix, DvbDims, SplitDvb};
use crate::exactcalc::{int, vector, Mat, Rat, Sampler};
use crate::fingpd::{double_dual_identify, dual_composition_values, pradines_dual, random_split_model, FinVBGroupoid};
use crate::poisson::{
    check_multiplicative, compute_dmaps, morphic_section_checks, standard_symplectic_matrix, symplectic_double_m4,
    symplectic_pair_groupoid, verify_lapvb, verify_needed_with, verify_side_duality, verify_thm_pairs, zero_double_m4,
    zero_pair_groupoid, LapvbDirection, NeededFault, PoissonCoordGroupoid, PolyBivector,
};

/// Objects in the random finite models.
pub const MAX_OBJECTS: usize = 4;
/// Decompositions beyond the kernel directions when comparing dual composites.
const EXTRA_DECOMPOSITIONS: usize = 4;
pub const MIN_DECOMPOSITIONS: usize = 5;
/// Random cores tried per pairing.
const CORE_SAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    DvbDuality,
    VbgpdDual,
    CotangentDouble,
    CoreEmbedding,
    PoissonMult,
    DdDri,
    SideDuality,
    ThmPairs,
    Lapvb,
    ThmNeeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteDescriptor {
    pub name: &'static str,
    /// The statement the suite verifies.
    pub anchor: &'static str,
    /// What `dims` ranges over.
    pub dims_meaning: &'static str,
    #[serde(serialize_with = "as_display")]
    pub default_dims: DimRange,
    #[serde(serialize_with = "as_display")]
    pub dim_limits: DimRange,
    pub default_trials: usize,
    pub has_fault_fixture: bool,
    pub has_golden: bool,
}

fn as_display<T: Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::DvbDuality,
        Suite::VbgpdDual,
        Suite::CotangentDouble,
        Suite::CoreEmbedding,
        Suite::PoissonMult,
        Suite::DdDri,
        Suite::SideDuality,
        Suite::ThmPairs,
        Suite::Lapvb,
        Suite::ThmNeeded,
    ];

    pub fn name(self) -> &'static str {
        self.descriptor().name
    }

    pub fn descriptor(self) -> SuiteDescriptor {
        let d = |name, anchor, dims_meaning, default_dims: (usize, usize), limits: (usize, usize), default_trials| SuiteDescriptor {
            name,
            anchor,
            dims_meaning,
            default_dims: DimRange::new(default_dims.0, default_dims.1),
            dim_limits: DimRange::new(limits.0, limits.1),
            default_trials,
            has_fault_fixture: false,
            has_golden: false,
        };
        match self {
            Suite::DvbDuality => d(
                "dvb-duality",
                "E^{*V} and E^{*H} are dual over K* via <Φ,Ψ> = <Ψ,ξ> - <Φ,ξ>; E^{*V} ≅ (E^{*H})^{*V} is +id on the sides and -id on the core",
                "dimensions of the sides and the core",
                (0, 3),
                (0, 6),
                100,
            ),
            Suite::VbgpdDual => SuiteDescriptor {
                has_golden: true,
                ..d(
                    "vbgpd-dual",
                    "the dual of a VB-groupoid Ω is a VB-groupoid Ω* ⇉ K* with core A*, and Ω ≅ Ω**",
                    "largest fibre dimension of the random models",
                    (0, 3),
                    (0, 4),
                    50,
                )
            },
            Suite::CotangentDouble => SuiteDescriptor {
                has_golden: true,
                ..d(
                    "cotangent-double",
                    "T*G ⇉ A*G is a groupoid with identities 1̃_φ and core elements ω̄; T*S is a double groupoid",
                    "n in the pair groupoid R^n x R^n; doubles use n ≤ 2",
                    (1, 3),
                    (1, 4),
                    50,
                )
            },
            Suite::CoreEmbedding => SuiteDescriptor {
                has_golden: true,
                ..d(
                    "core-embedding",
                    "T*C embeds in T*S as the core double groupoid",
                    "n in the double pair groupoid M^4 over R^n",
                    (1, 2),
                    (1, 2),
                    1,
                )
            },
            Suite::PoissonMult => SuiteDescriptor {
                has_fault_fixture: true,
                ..d(
                    "poisson-mult",
                    "π on G is multiplicative; A*G carries the induced algebroid with anchor a_*",
                    "k in the pair groupoid over R^{2k}",
                    (1, 2),
                    (1, 3),
                    1,
                )
            },
            Suite::DdDri => d(
                "dd-dri",
                "a Poisson double groupoid induces D_H: A*H → A_V S and D_V: A*V → A_H S with D_V* = -D_H",
                "k in the symplectic double M^4 over R^{2k}",
                (1, 2),
                (1, 2),
                1,
            ),
            Suite::SideDuality => SuiteDescriptor {
                has_fault_fixture: true,
                ..d(
                    "sideduality",
                    "for a symplectic double groupoid D_H and D_V are isomorphisms of Lie algebroids and A_H S, A_V S are dual",
                    "k in the symplectic double M^4 over R^{2k}",
                    (1, 2),
                    (1, 2),
                    1,
                )
            },
            Suite::ThmPairs => d(
                "thm-pairs",
                "for T*S: D_H = j'^V ∘ R_H and D_V = (j'^H)^{-1} ∘ R_V",
                "n in the double pair groupoid M^4 over R^n",
                (1, 2),
                (1, 2),
                10,
            ),
            Suite::Lapvb => d(
                "lapvb",
                "Poisson structures on G correspond to LA-groupoid structures on T*G ⇉ A*G; morphic 1-forms give multiplicative linear functions",
                "k in the pair groupoid over R^{2k}",
                (1, 2),
                (1, 2),
                4,
            ),
            Suite::ThmNeeded => SuiteDescriptor {
                has_fault_fixture: true,
                ..d(
                    "thm-needed",
                    "A*_V S ⇉ A*C is an LA-groupoid over A*H ⇉ P whose anchor over A*H is ã_{*H}",
                    "k in the symplectic double M^4 over R^{2k}",
                    (1, 2),
                    (1, 2),
                    1,
                )
            },
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

impl Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Descriptors of every suite, in the order `list` prints them.
pub fn list_suites() -> Vec<SuiteDescriptor> {
    Suite::ALL.iter().map(|s| s.descriptor()).collect()
}

/// Independent sampler for trial `t`, so parallel trials do not depend on scheduling.
pub fn trial_sampler(seed: u64, t: usize) -> Sampler {
    Sampler::new(seed ^ (t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Records a failed construction as a failing check, so the report still names it.
fn absorb<T, E: Display>(r: &mut CheckReport, label: &str, res: Result<T, E>) -> Option<T> {
    match res {
        Ok(v) => Some(v),
        Err(e) => {
            r.exact(&format!("{label}: construction"), false, e.to_string());
            None
        }
    }
}

fn ints(v: &[usize]) -> Vec<Rat> {
    v.iter().map(|&x| int(x as i64)).collect()
}

/// Runs the checks of `config.suite`.
pub fn run_checks(config: &SuiteConfig) -> CheckReport {
    let mut s = Sampler::new(config.seed);
    let dims = config.dims;
    match config.suite {
        Suite::DvbDuality => parallel_trials(config, dvb_trial),
        Suite::VbgpdDual => parallel_trials(config, vbgpd_trial),
        Suite::CotangentDouble => cotangent_suite(config, &mut s),
        Suite::CoreEmbedding => {
            let mut r = CheckReport::new();
            for n in dims.iter() {
                let label = format!("T*M4({n})");
                let data = absorb(&mut r, &label, cotangent_double(&m4_double_groupoid(n), &mut s));
                if let Some(e) = data.and_then(|d| absorb(&mut r, &label, d.core_embedding_checks(&mut s))) {
                    r.extend_prefixed(&label, e.report);
                }
            }
            r
        }
        Suite::PoissonMult => poisson_mult_suite(config, &mut s),
        Suite::DdDri => {
            let mut r = CheckReport::new();
            for k in dims.iter() {
                let label = format!("M4(R^{})", 2 * k);
                if let Some(d) = absorb(&mut r, &label, compute_dmaps(&symplectic_double_m4(k), &mut s)) {
                    let a_star = &d.side_h.mult.dual_anchor;
                    r.extend_prefixed(&label, d.report);
                    r.matrices(&format!("{label}: D_V = a_*"), &d.dv, a_star);
                    r.matrices(&format!("{label}: D_H = -a_*ᵀ"), &d.dh, &-&a_star.transpose());
                    r.matrices(&format!("{label}: D_H = π_P^#"), &d.dh, &d.side_h.mult.base_sharp());
                }
            }
            r
        }
        Suite::SideDuality => {
            let mut r = CheckReport::new();
            for k in dims.iter() {
                let (label, pd) = if config.inject_fault {
                    (format!("zero M4(R^{})", 2 * k), zero_double_m4(2 * k))
                } else {
                    (format!("M4(R^{})", 2 * k), symplectic_double_m4(k))
                };
                if let Some(d) = absorb(&mut r, &label, verify_side_duality(&pd, &mut s)) {
                    r.extend_prefixed(&label, d.report);
                }
            }
            r
        }
        Suite::ThmPairs => {
            let mut r = CheckReport::new();
            for n in dims.iter() {
                let label = format!("T*M4({n})");
                if let Some(t) = absorb(&mut r, &label, verify_thm_pairs(&m4_double_groupoid(n), &mut s, config.trials)) {
                    r.extend_prefixed(&label, t.report);
                }
            }
            r
        }
        Suite::Lapvb => lapvb_suite(config, &mut s),
        Suite::ThmNeeded => {
            let mut r = CheckReport::new();
            let fault = config.inject_fault.then_some(NeededFault::AnchorEntry);
            for k in dims.iter() {
                let label = format!("M4(R^{})", 2 * k);
                if let Some(n) = absorb(&mut r, &label, verify_needed_with(&symplectic_double_m4(k), &mut s, fault)) {
                    r.extend_prefixed(&label, n.report);
                }
            }
            if !config.inject_fault {
                let label = "zero M4(R^2)";
                if let Some(n) = absorb(&mut r, label, verify_needed_with(&zero_double_m4(2), &mut s, None)) {
                    r.extend_prefixed(label, n.report);
                }
            }
            r
        }
    }
}

fn parallel_trials(config: &SuiteConfig, trial: fn(&SuiteConfig, &mut Sampler) -> CheckReport) -> CheckReport {
    let parts: Vec<CheckReport> =
        (0..config.trials).into_par_iter().map(|t| trial(config, &mut trial_sampler(config.seed, t))).collect();
    parts.into_iter().fold(CheckReport::new(), |mut acc, p| {
        acc.merge(p);
        acc
    })
}

fn dvb_trial(config: &SuiteConfig, s: &mut Sampler) -> CheckReport {
    let mut r = CheckReport::new();
    let DimRange { min, max } = config.dims;
    let mut dim = || min + s.index(max - min + 1);
    let dims = DvbDims::new(dim(), dim(), dim());
    let e = SplitDvb::new(dims, "E");
    let phi = e.random_dual_v(s);
    let mut psi = e.random_dual_h(s);
    psi.kappa = phi.kappa.clone();
    let point: Vec<Rat> = [&phi.a, &phi.beta, &phi.kappa, &psi.alpha, &psi.b].into_iter().flatten().cloned().collect();
    let Some(closed) = absorb(&mut r, "pairing", pair_duals_closed(&phi, &psi)) else { return r };
    let zero = vector::zeros(dims.core);
    if let Some(v) = absorb(&mut r, "pairing", pair_duals_via(&phi, &psi, &zero)) {
        r.point("pairing equals <α,a> - <β,b>", &point, &[v], std::slice::from_ref(&closed));
    }
    for _ in 0..CORE_SAMPLES {
        let core = s.vector(dims.core);
        if let Some(v) = absorb(&mut r, "pairing", pair_duals_via(&phi, &psi, &core)) {
            r.point("pairing does not depend on the choice of ξ", &point, &[v], std::slice::from_ref(&closed));
        }
    }
    let n = dims.side_h + dims.side_v;
    if let Some(m) = absorb(&mut r, "pairing matrix", pairing_matrix(&e, &phi.kappa)) {
        let rank = m.rank();
        r.exact("pairing is nondegenerate", rank == n, format!("rank {rank} of {n}x{n}"));
    }
    if let Some(dd) = absorb(&mut r, "double dual", double_dual_iso(&e, s, CORE_SAMPLES)) {
        r.matrices("E^{*V} ≅ (E^{*H})^{*V} is +id on the side A", &dd.iso.side_v, &Mat::identity(dims.side_h));
        r.matrices("E^{*V} ≅ (E^{*H})^{*V} is -id on the core B*", &dd.iso.core, &-&Mat::identity(dims.side_v));
    }
    r
}

/// The random model of one trial.
pub fn vbgpd_instance(config: &SuiteConfig, s: &mut Sampler) -> FinVBGroupoid {
    random_split_model(s, MAX_OBJECTS, config.dims.max)
}

fn vbgpd_trial(config: &SuiteConfig, s: &mut Sampler) -> CheckReport {
    let mut r = CheckReport::new();
    let omega = vbgpd_instance(config, s);
    let dd = double_dual_identify(&omega);
    let dual = match &dd {
        Ok(d) => d.dual.clone(),
        Err(_) => match absorb(&mut r, "Ω*", pradines_dual(&omega)) {
            Some(d) => d,
            None => return r,
        },
    };
    let v = dual.validate();
    let detail = v.failure.as_ref().map(|c| format!("{} at {:?}: {}", c.check, c.at, c.detail)).unwrap_or_default();
    r.exact("Ω* is a VB-groupoid", v.passed(), detail);
    let pairs: Vec<(usize, usize)> = omega.base.composable_pairs().collect();
    let (h, g) = pairs[s.index(pairs.len())];
    if let Some(c) = absorb(&mut r, "Ω* composition", dual.composition(h, g)) {
        let pair = c.domain.mul_vec(&s.vector(c.domain.cols()));
        let fh = dual.fiber_dims[h];
        let hg = omega.base.compose(h, g).expect("composable");
        let zeta = s.vector(omega.fiber_dims[hg]);
        let values = dual_composition_values(&omega, h, g, &pair[..fh], &pair[fh..], &zeta, s, EXTRA_DECOMPOSITIONS);
        let composite = dual.compose(h, g, &pair[..fh], &pair[fh..]);
        if let (Some(values), Some(composite)) =
            (absorb(&mut r, "decompositions", values), absorb(&mut r, "Ω* composite", composite))
        {
            let expected = vector::dot(&composite, &zeta);
            let point: Vec<Rat> = ints(&[h, g]).into_iter().chain(pair.iter().cloned()).chain(zeta.iter().cloned()).collect();
            for value in &values {
                r.point("<ΨΦ, ζ> does not depend on the decomposition of ζ", &point, std::slice::from_ref(value), std::slice::from_ref(&expected));
            }
            r.exact(
                "enough decompositions compared",
                values.len() >= MIN_DECOMPOSITIONS,
                format!("{} of at least {MIN_DECOMPOSITIONS}", values.len()),
            );
        }
    }
    let core = dual.core();
    for m in 0..omega.base.objects() {
        r.point("core of Ω* has the rank of A", &ints(&[m]), &ints(&[core.dim(m)]), &ints(&[omega.side_dims[m]]));
    }
    r.exact("Ω ≅ Ω** over the identity", dd.is_ok(), dd.err().map(|e| e.to_string()).unwrap_or_default());
    r
}

fn cotangent_suite(config: &SuiteConfig, s: &mut Sampler) -> CheckReport {
    let mut r = CheckReport::new();
    for n in config.dims.iter() {
        let label = format!("T*pair({n})");
        let g = pair_groupoid(n);
        let Some(c) = absorb(&mut r, &label, cotangent_groupoid(&g)) else { continue };
        r.extend_prefixed(&label, c.total.validate(s));
        let t = &c.total;
        let mut p = CheckReport::new();
        for _ in 0..config.trials {
            let (h, a) = t.random_composable(s);
            let k = t.random_arrow_from(&t.tgt(&h), s);
            let point: Vec<Rat> = [&k, &h, &a].into_iter().flatten().cloned().collect();
            let (Ok(ha), Ok(kh)) = (t.compose(&h, &a), t.compose(&k, &h)) else {
                p.exact("composition is defined on composable pairs", false, "");
                continue;
            };
            if let (Ok(lhs), Ok(rhs)) = (t.compose(&kh, &a), t.compose(&k, &ha)) {
                p.point("associativity", &point, &lhs, &rhs);
            }
            p.point("source of a composite", &point, &t.src(&ha), &t.src(&a));
            p.point("target of a composite", &point, &t.tgt(&ha), &t.tgt(&h));
            if let (Ok(l), Ok(rt)) = (t.compose(&t.unit(&t.tgt(&a)), &a), t.compose(&a, &t.unit(&t.src(&a)))) {
                p.point("left identity", &a, &l, &a);
                p.point("right identity", &a, &rt, &a);
            }
            if let (Ok(l), Ok(rt)) = (t.compose(&t.inv(&a), &a), t.compose(&a, &t.inv(&a))) {
                p.point("left inverse", &a, &l, &t.unit(&t.src(&a)));
                p.point("right inverse", &a, &rt, &t.unit(&t.tgt(&a)));
            }
            let m = g.random_object(s);
            let (phi, x, xa) = (s.vector(n), s.vector(n), s.vector(c.algebroid_basis.cols()));
            if let Ok(one) = c.identity_covector(&m, &phi) {
                let tangent = vector::add(&g.unit_jacobian(&m).mul_vec(&x), &c.algebroid_basis.mul_vec(&xa));
                let at: Vec<Rat> = [&m, &phi, &x, &xa].into_iter().flatten().cloned().collect();
                p.point("<1̃_φ, T1(x) + X> = <φ, X>", &at, &[vector::dot(&one, &tangent)], &[vector::dot(&phi, &xa)]);
                p.point("1̃_φ is the identity of T*G at φ", &at, &one, &c.vb.unit_lin.mul_vec(&phi));
            }
            let omega = s.vector(n);
            if let Ok(bar) = c.core_covector(&m, &omega) {
                let at: Vec<Rat> = m.iter().chain(&omega).cloned().collect();
                p.point("ω̄ has source 0", &at, &c.vb.src_lin.mul_vec(&bar), &vector::zeros(c.vb.side_dim));
                p.point("ω̄ has target a*ω", &at, &c.vb.tgt_lin.mul_vec(&bar), &c.anchor.transpose().mul_vec(&omega));
            }
        }
        r.extend_prefixed(&format!("{label}: at points"), p);
    }
    for n in config.dims.iter().filter(|&n| n <= 2) {
        let label = format!("T*M4({n})");
        if let Some(d) = absorb(&mut r, &label, cotangent_double(&m4_double_groupoid(n), s)) {
            r.extend_prefixed(&label, d.double.validate(s));
        }
    }
    r
}

/// `diag(ω, ω)` on the pair groupoid: the sign of the source factor is wrong.
pub fn sign_error_pair(k: usize) -> PoissonCoordGroupoid {
    let w = standard_symplectic_matrix(k);
    let pi = PolyBivector::constant(&Mat::block_diag(&[&w, &w])).expect("constant bivector");
    PoissonCoordGroupoid::new(pair_groupoid(2 * k), pi).expect("Poisson bivector")
}

fn poisson_mult_suite(config: &SuiteConfig, s: &mut Sampler) -> CheckReport {
    let mut r = CheckReport::new();
    let mut cases: Vec<(String, PoissonCoordGroupoid)> = Vec::new();
    for k in config.dims.iter() {
        if config.inject_fault {
            cases.push((format!("sign error pair(R^{})", 2 * k), sign_error_pair(k)));
        } else {
            cases.push((format!("pair(R^{})", 2 * k), symplectic_pair_groupoid(k)));
        }
    }
    if !config.inject_fault {
        cases.push(("zero pair(R^1)".into(), zero_pair_groupoid(1)));
    }
    for (label, pg) in cases {
        if let Some(m) = absorb(&mut r, &label, check_multiplicative(&pg, s)) {
            r.extend_prefixed(&label, m.report);
        }
    }
    r
}

fn lapvb_suite(config: &SuiteConfig, s: &mut Sampler) -> CheckReport {
    let mut r = CheckReport::new();
    for k in config.dims.iter() {
        let label = format!("pair(R^{})", 2 * k);
        let pg = symplectic_pair_groupoid(k);
        if let Some(m) = absorb(&mut r, &label, morphic_section_checks(&pg, s, config.trials)) {
            r.extend_prefixed(&format!("{label}: sections"), m.report);
        }
        for dir in [LapvbDirection::Forward, LapvbDirection::Converse] {
            if let Some(l) = absorb(&mut r, &label, verify_lapvb(dir, &pg, s)) {
                r.extend_prefixed(&format!("{label}: {dir:?}"), l.report);
            }
        }
    }
    let label = "zero pair(R^1)";
    let pg = zero_pair_groupoid(1);
    for dir in [LapvbDirection::Forward, LapvbDirection::Converse] {
        if let Some(l) = absorb(&mut r, label, verify_lapvb(dir, &pg, s)) {
            r.extend_prefixed(&format!("{label}: {dir:?}"), l.report);
        }
    }
    r
}
