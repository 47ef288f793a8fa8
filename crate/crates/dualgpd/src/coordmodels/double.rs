use super::check::CheckReport;
use super::groupoid::{pair_groupoid, CoordGroupoid, Family};
use super::CoordError;
use crate::exactcalc::{vector, Mat, PolyMap, Rat, Sampler};

/// Double groupoid `(S; H, V; M)`: `vertical` is `S ⇉ H`, `horizontal` is `S ⇉ V`,
/// with side groupoids `H ⇉ M` and `V ⇉ M` on the same coordinates as the bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordDoubleGroupoid {
    pub name: String,
    pub horizontal: CoordGroupoid,
    pub vertical: CoordGroupoid,
    pub side_h: CoordGroupoid,
    pub side_v: CoordGroupoid,
    /// `(h, v, p) -> s` with `α̃_V(s) = h`, `α̃_H(s) = v` whenever `α_H(h) = α_V(v)`.
    section: PolyMap,
}

pub(crate) fn after(f: &PolyMap, x: &PolyMap) -> PolyMap {
    f.compose(x).expect("dimensions agree")
}

pub(crate) fn cat(parts: &[&PolyMap]) -> PolyMap {
    PolyMap::concat(parts).expect("same domain")
}

pub(crate) fn block(n: usize, start: usize, len: usize) -> PolyMap {
    PolyMap::projection(n, &(start..start + len).collect::<Vec<_>>())
}

/// `ι: t -> c` and a left inverse `c -> t` of an affine parametrization `c = c0 + E t`.
struct AffineChart {
    embed: PolyMap,
    project: PolyMap,
}

impl AffineChart {
    fn new(e: &Mat, c0: &[Rat]) -> Result<Self, CoordError> {
        let left = e.left_inverse()?;
        Ok(AffineChart { embed: PolyMap::affine(e, c0), project: PolyMap::affine(&left, &vector::neg(&left.mul_vec(c0))) })
    }
}

impl CoordDoubleGroupoid {
    pub fn new(
        name: impl Into<String>,
        horizontal: CoordGroupoid,
        vertical: CoordGroupoid,
        side_h: CoordGroupoid,
        side_v: CoordGroupoid,
    ) -> Result<Self, CoordError> {
        let name = name.into();
        let total = horizontal.arrow_dim();
        if vertical.arrow_dim() != total
            || horizontal.base_dim() != side_v.arrow_dim()
            || vertical.base_dim() != side_h.arrow_dim()
            || side_h.base_dim() != side_v.base_dim()
        {
            return Err(CoordError::Shape(format!("{name}: structures do not share coordinates")));
        }
        // Double source (α̃_V, α̃_H): S -> H x V, onto H x_M V.
        let joint = cat(&[vertical.src_map(), horizontal.src_map()]);
        let (lin, off) = joint.affine_parts().map_err(|_| CoordError::Unregistered(format!("{name}: double source not affine")))?;
        let (ah, bh) = side_h.src_map().affine_parts().map_err(|_| CoordError::Unregistered(name.clone()))?;
        let (av, bv) = side_v.src_map().affine_parts().map_err(|_| CoordError::Unregistered(name.clone()))?;
        let constraint = Mat::hstack(&[&ah, &-&av]);
        let fibred = constraint.solve(&vector::sub(&bv, &bh)).map_err(|_| CoordError::Shape(format!("{name}: H x_M V is empty")))?;
        let dirs = constraint.kernel().canonical_basis();
        let solve = |y: &[Rat]| -> Result<Vec<Rat>, CoordError> {
            lin.solve(y).map(|s| s.particular).map_err(|_| CoordError::NotSurjective(format!("{name}: double source map")))
        };
        let base_point = solve(&vector::sub(&fibred.particular, &off))?;
        let lifts: Vec<Vec<Rat>> = dirs.columns().iter().map(|d| solve(d)).collect::<Result<_, _>>()?;
        let lift = Mat::from_cols(total, &lifts);
        // (h, v) -> coordinates along H x_M V -> lifted point, plus free kernel directions.
        let coords = dirs.left_inverse()?;
        let through = &lift * &coords;
        let kernel = lin.kernel().canonical_basis();
        let section_lin = Mat::hstack(&[&through, &kernel]);
        let offset = vector::sub(&base_point, &through.mul_vec(&fibred.particular));
        let section = PolyMap::affine(&section_lin, &offset);
        Ok(CoordDoubleGroupoid { name, horizontal, vertical, side_h, side_v, section })
    }

    pub fn total_dim(&self) -> usize {
        self.horizontal.arrow_dim()
    }

    pub fn section_map(&self) -> &PolyMap {
        &self.section
    }

    pub fn section_param_dim(&self) -> usize {
        self.section.dom() - self.side_h.arrow_dim() - self.side_v.arrow_dim()
    }

    pub fn double_identity(&self, m: &[Rat]) -> Vec<Rat> {
        self.horizontal.unit(&self.side_v.unit(m))
    }

    pub fn require_registered(&self) -> Result<(), CoordError> {
        for g in [&self.horizontal, &self.vertical, &self.side_h, &self.side_v] {
            g.require_registered()?;
        }
        Ok(())
    }

    /// The four groupoids and the twelve compatibility conditions:
    /// for each of the five structure maps of each structure, that it is a morphism of the other
    /// structure; coherence of double identities; and the double source map onto `H x_M V`.
    pub fn validate(&self, s: &mut Sampler) -> CheckReport {
        let mut r = CheckReport::new();
        for (label, g) in [("S over V", &self.horizontal), ("S over H", &self.vertical), ("H", &self.side_h), ("V", &self.side_v)] {
            r.extend_prefixed(label, g.validate(s));
        }
        let h = Face { top: &self.horizontal, side: &self.side_v };
        let v = Face { top: &self.vertical, side: &self.side_h };
        self.face_maps_are_morphisms(&mut r, &h, &v, 1, "horizontal", s);
        self.face_maps_are_morphisms(&mut r, &v, &h, 6, "vertical", s);

        let mb = self.side_h.base_dim();
        let m = PolyMap::identity(mb);
        r.maps(
            "[11] double identities agree",
            &after(self.vertical.unit_map(), &after(self.side_h.unit_map(), &m)),
            &after(self.horizontal.unit_map(), &after(self.side_v.unit_map(), &m)),
            s,
        );

        let (dh, dv, dp) = (self.side_h.arrow_dim(), self.side_v.arrow_dim(), self.section_param_dim());
        let n = dv + self.side_h.param_dim() + dp;
        let vv = block(n, 0, dv);
        let hh = after(self.side_h.starting_map(), &cat(&[&after(self.side_v.src_map(), &vv), &block(n, dv, self.side_h.param_dim())]));
        let sec = after(&self.section, &cat(&[&hh, &vv, &block(n, n - dp, dp)]));
        r.maps("[12] double source section: vertical source", &after(self.vertical.src_map(), &sec), &hh, s);
        r.maps("[12] double source section: horizontal source", &after(self.horizontal.src_map(), &sec), &vv, s);
        let fibred_dim = dh + dv - Mat::hstack(&[&lin(self.side_h.src_map()), &-&lin(self.side_v.src_map())]).rank();
        let rank = Mat::vstack(&[&lin(self.vertical.src_map()), &lin(self.horizontal.src_map())]).rank();
        r.exact("[12] double source rank equals dim H x_M V", rank == fibred_dim, format!("rank {rank}, fibred product {fibred_dim}"));
        r
    }

    fn face_maps_are_morphisms(&self, r: &mut CheckReport, f: &Face, o: &Face, first: usize, label: &str, s: &mut Sampler) {
        let n_s = self.total_dim();
        let ids = PolyMap::identity(n_s);
        let name = |k: usize, what: &str, part: &str| format!("[{}] {label} {what}: {part}", first + k);
        // O-composable (s', s): s free, s' leaves β̃_O(s).
        let po = o.top.param_dim();
        let n2 = n_s + po;
        let s_o = block(n2, 0, n_s);
        let s_o2 = after(o.top.starting_map(), &cat(&[&after(o.top.tgt_map(), &s_o), &block(n2, n_s, po)]));
        let comp_o = |a: &PolyMap, b: &PolyMap| after(o.top.comp_map(), &cat(&[a, b]));
        let prod_o = comp_o(&s_o2, &s_o);
        let bo = PolyMap::identity(o.side.arrow_dim());

        for (k, (what, map, side_map)) in
            [("source", f.top.src_map(), o.side.src_map()), ("target", f.top.tgt_map(), o.side.tgt_map())].into_iter().enumerate()
        {
            // X_F: (S ⇉ B_O) -> (B_F ⇉ M) over X_{B_O}.
            r.maps(&name(k, what, "source"), &after(f.side.src_map(), &after(map, &ids)), &after(side_map, o.top.src_map()), s);
            r.maps(&name(k, what, "target"), &after(f.side.tgt_map(), &after(map, &ids)), &after(side_map, o.top.tgt_map()), s);
            let comp_f_side = |a: &PolyMap, b: &PolyMap| after(f.side.comp_map(), &cat(&[a, b]));
            r.maps(&name(k, what, "composition"), &after(map, &prod_o), &comp_f_side(&after(map, &s_o2), &after(map, &s_o)), s);
            r.maps(
                &name(k, what, "identities"),
                &after(map, &after(o.top.unit_map(), &bo)),
                &after(f.side.unit_map(), &after(side_map, &bo)),
                s,
            );
            r.maps(&name(k, what, "inverses"), &after(map, o.top.inv_map()), &after(f.side.inv_map(), map), s);
        }

        // 1̃^F: (B_F ⇉ M) -> (S ⇉ B_O) over 1^{B_O}.
        let pf = f.side.param_dim();
        let nb = f.side.arrow_dim() + pf;
        let b = block(nb, 0, f.side.arrow_dim());
        let b2 = after(f.side.starting_map(), &cat(&[&after(f.side.tgt_map(), &b), &block(nb, f.side.arrow_dim(), pf)]));
        let unit_f = |x: &PolyMap| after(f.top.unit_map(), x);
        let bf = PolyMap::identity(f.side.arrow_dim());
        let what = "identity";
        r.maps(&name(2, what, "source"), &after(o.top.src_map(), &unit_f(&bf)), &after(o.side.unit_map(), f.side.src_map()), s);
        r.maps(&name(2, what, "target"), &after(o.top.tgt_map(), &unit_f(&bf)), &after(o.side.unit_map(), f.side.tgt_map()), s);
        r.maps(
            &name(2, what, "composition"),
            &unit_f(&after(f.side.comp_map(), &cat(&[&b2, &b]))),
            &comp_o(&unit_f(&b2), &unit_f(&b)),
            s,
        );
        let m = PolyMap::identity(f.side.base_dim());
        r.maps(
            &name(2, what, "identities"),
            &unit_f(&after(f.side.unit_map(), &m)),
            &after(o.top.unit_map(), &after(o.side.unit_map(), &m)),
            s,
        );
        r.maps(&name(2, what, "inverses"), &unit_f(f.side.inv_map()), &after(o.top.inv_map(), &unit_f(&bf)), s);

        // inverse of F: (S ⇉ B_O) -> (S ⇉ B_O) over inverse of B_O.
        let inv_f = f.top.inv_map();
        let what = "inverse";
        r.maps(&name(3, what, "source"), &after(o.top.src_map(), inv_f), &after(o.side.inv_map(), o.top.src_map()), s);
        r.maps(&name(3, what, "target"), &after(o.top.tgt_map(), inv_f), &after(o.side.inv_map(), o.top.tgt_map()), s);
        r.maps(&name(3, what, "composition"), &after(inv_f, &prod_o), &comp_o(&after(inv_f, &s_o2), &after(inv_f, &s_o)), s);
        r.maps(
            &name(3, what, "identities"),
            &after(inv_f, o.top.unit_map()),
            &after(o.top.unit_map(), o.side.inv_map()),
            s,
        );
        r.maps(&name(3, what, "inverses"), &after(inv_f, o.top.inv_map()), &after(o.top.inv_map(), inv_f), s);

        // composition of F: (S x_{B_F} S ⇉ B_O x_M B_O) -> (S ⇉ B_O) over composition of B_O.
        let pf_top = f.top.param_dim();
        let nf = n_s + pf_top;
        let t = block(nf, 0, n_s);
        let s_left = after(f.top.starting_map(), &cat(&[&after(f.top.tgt_map(), &t), &block(nf, n_s, pf_top)]));
        let comp_f = |a: &PolyMap, c: &PolyMap| after(f.top.comp_map(), &cat(&[a, c]));
        let prod_f = comp_f(&s_left, &t);
        let comp_bo = |a: &PolyMap, c: &PolyMap| after(o.side.comp_map(), &cat(&[a, c]));
        let what = "composition";
        r.maps(
            &name(4, what, "source"),
            &after(o.top.src_map(), &prod_f),
            &comp_bo(&after(o.top.src_map(), &s_left), &after(o.top.src_map(), &t)),
            s,
        );
        r.maps(
            &name(4, what, "target"),
            &after(o.top.tgt_map(), &prod_f),
            &comp_bo(&after(o.top.tgt_map(), &s_left), &after(o.top.tgt_map(), &t)),
            s,
        );
        let (lhs, rhs) = self.interchange(f, o);
        r.maps(&name(4, what, "composition"), &lhs, &rhs, s);
        let pso = o.side.param_dim();
        let nbo = o.side.arrow_dim() + pso;
        let c = block(nbo, 0, o.side.arrow_dim());
        let bq = after(o.side.starting_map(), &cat(&[&after(o.side.tgt_map(), &c), &block(nbo, o.side.arrow_dim(), pso)]));
        let unit_o = |x: &PolyMap| after(o.top.unit_map(), x);
        r.maps(&name(4, what, "identities"), &comp_f(&unit_o(&bq), &unit_o(&c)), &unit_o(&comp_bo(&bq, &c)), s);
        let inv_o = o.top.inv_map();
        r.maps(&name(4, what, "inverses"), &after(inv_o, &prod_f), &comp_f(&after(inv_o, &s_left), &after(inv_o, &t)), s);
    }

    /// Both sides of `(s' ∘_O s) ∘_F (t' ∘_O t) = (s' ∘_F t') ∘_O (s ∘_F t)` on a parametrized grid.
    fn interchange(&self, f: &Face, o: &Face) -> (PolyMap, PolyMap) {
        let n_s = self.total_dim();
        let (po, pf, pq) = (o.top.param_dim(), f.top.param_dim(), self.section_param_dim());
        let n = n_s + po + pf + pq;
        let t = block(n, 0, n_s);
        let t2 = after(o.top.starting_map(), &cat(&[&after(o.top.tgt_map(), &t), &block(n, n_s, po)]));
        let s1 = after(f.top.starting_map(), &cat(&[&after(f.top.tgt_map(), &t), &block(n, n_s + po, pf)]));
        // s' must sit O-above s and F-beside t'.
        let over_s = after(o.top.tgt_map(), &s1);
        let beside_t2 = after(f.top.tgt_map(), &t2);
        let horizontal_first = std::ptr::eq(f.top, &self.horizontal);
        let (h_part, v_part) = if horizontal_first { (&over_s, &beside_t2) } else { (&beside_t2, &over_s) };
        let s2 = after(&self.section, &cat(&[h_part, v_part, &block(n, n - pq, pq)]));
        let cf = |a: &PolyMap, b: &PolyMap| after(f.top.comp_map(), &cat(&[a, b]));
        let co = |a: &PolyMap, b: &PolyMap| after(o.top.comp_map(), &cat(&[a, b]));
        (cf(&co(&s2, &s1), &co(&t2, &t)), co(&cf(&s2, &t2), &cf(&s1, &t)))
    }
}

struct Face<'a> {
    top: &'a CoordGroupoid,
    side: &'a CoordGroupoid,
}

fn lin(f: &PolyMap) -> Mat {
    f.affine_parts().expect("affine").0
}

/// `S = (R^n)^4` with points `(w, x, z, y)` laid out as `w x / z y`.
/// Horizontal arrows point left and vertical arrows point up; both structures are pair groupoids
/// of pair groupoids, and `H = V = M x M` on `(target, source)`.
pub fn m4_double_groupoid(n: usize) -> CoordDoubleGroupoid {
    let blocks = |idx: &[usize]| -> Vec<usize> { idx.iter().flat_map(|&b| b * n..(b + 1) * n).collect() };
    let (w, x, z, y) = (0, 1, 2, 3);
    let proj = |dom_blocks: usize, idx: &[usize]| PolyMap::projection(dom_blocks * n, &blocks(idx));
    let fam = |what: &str| Family::Derived(format!("M^4 {what}"));
    let horizontal = CoordGroupoid::new(
        format!("M^4({n}) over V"),
        fam("horizontal"),
        2 * n,
        4 * n,
        proj(4, &[x, y]),
        proj(4, &[w, z]),
        proj(2, &[0, 0, 1, 1]),
        proj(4, &[x, w, y, z]),
        proj(8, &[w, 4 + x, z, 4 + y]),
    )
    .expect("horizontal structure");
    let vertical = CoordGroupoid::new(
        format!("M^4({n}) over H"),
        fam("vertical"),
        2 * n,
        4 * n,
        proj(4, &[z, y]),
        proj(4, &[w, x]),
        proj(2, &[0, 1, 0, 1]),
        proj(4, &[z, y, w, x]),
        proj(8, &[w, x, 4 + z, 4 + y]),
    )
    .expect("vertical structure");
    let mut side_h = pair_groupoid(n);
    side_h.name = format!("H = pair({n})");
    let mut side_v = pair_groupoid(n);
    side_v.name = format!("V = pair({n})");
    CoordDoubleGroupoid::new(format!("M^4({n})"), horizontal, vertical, side_h, side_v).expect("M^4 double groupoid")
}

/// Core groupoid `C ⇉ M` on the coordinates of an affine chart of the core inside `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGroupoid {
    pub groupoid: CoordGroupoid,
    /// `t -> c`, the inclusion `C -> S`.
    pub embedding: PolyMap,
    /// A left inverse of the embedding.
    pub projection: PolyMap,
    /// The alternative product and inverse formulas and the two core morphisms.
    pub report: CheckReport,
}

pub fn core_of_double(d: &CoordDoubleGroupoid, s: &mut Sampler) -> Result<CoreGroupoid, CoordError> {
    d.require_registered()?;
    let (hz, vt) = (&d.horizontal, &d.vertical);
    let n_s = d.total_dim();
    let mb = d.side_h.base_dim();
    // Unknowns (c, m): α̃_H(c) = 1^V_m and α̃_V(c) = 1^H_m.
    let (a_h, b_h) = hz.src_map().affine_parts()?;
    let (a_v, b_v) = vt.src_map().affine_parts()?;
    let (u_v, c_v) = d.side_v.unit_map().affine_parts()?;
    let (u_h, c_h) = d.side_h.unit_map().affine_parts()?;
    let system = Mat::vstack(&[&Mat::hstack(&[&a_h, &-&u_v]), &Mat::hstack(&[&a_v, &-&u_h])]);
    let rhs = vector::concat(&[&vector::sub(&c_v, &b_h), &vector::sub(&c_h, &b_v)]);
    let sol = system.solve(&rhs).map_err(|_| CoordError::Invalid(format!("{}: empty core", d.name)))?;
    let kernel = system.kernel().canonical_basis();
    let c_rows: Vec<usize> = (0..n_s).collect();
    let e = kernel.select_rows(&c_rows);
    let c0: Vec<Rat> = sol.particular[..n_s].to_vec();
    let chart = AffineChart::new(&e, &c0)?;
    let k = e.cols();
    let iota = |x: &PolyMap| after(&chart.embed, x);
    let pr = |x: &PolyMap| after(&chart.project, x);
    let t = PolyMap::identity(k);
    let src = after(d.side_v.src_map(), &after(hz.src_map(), &iota(&t)));
    let tgt = after(d.side_v.tgt_map(), &after(hz.tgt_map(), &iota(&t)));
    let m = PolyMap::identity(mb);
    let double_unit = after(hz.unit_map(), &after(d.side_v.unit_map(), &m));
    let unit = pr(&double_unit);

    let ch = |a: &PolyMap, b: &PolyMap| after(hz.comp_map(), &cat(&[a, b]));
    let cv = |a: &PolyMap, b: &PolyMap| after(vt.comp_map(), &cat(&[a, b]));
    // Products on (t', t): c' ⊓ c = (c' ∘_H 1̃^V_{β̃_V c}) ∘_V c = (c' ∘_V 1̃^H_{β̃_H c}) ∘_H c.
    let two = 2 * k;
    let products = |c2: &PolyMap, c1: &PolyMap| {
        let pad_v = after(vt.unit_map(), &after(vt.tgt_map(), c1));
        let pad_h = after(hz.unit_map(), &after(hz.tgt_map(), c1));
        (cv(&ch(c2, &pad_v), c1), ch(&cv(c2, &pad_h), c1), pad_v)
    };
    let comp = pr(&products(&iota(&block(two, 0, k)), &iota(&block(two, k, k))).0);
    // c^{-1(C)} = c^{-1(H)} ∘_V 1̃^H_{v⁻¹} = c^{-1(V)} ∘_H 1̃^V_{h⁻¹}, v = β̃_H(c), h = β̃_V(c).
    let c = iota(&t);
    let inv_h = after(hz.inv_map(), &c);
    let inv_v = after(vt.inv_map(), &c);
    let pad_h_inv = after(hz.unit_map(), &after(d.side_v.inv_map(), &after(hz.tgt_map(), &c)));
    let pad_v_inv = after(vt.unit_map(), &after(d.side_h.inv_map(), &after(vt.tgt_map(), &c)));
    let inv1 = cv(&inv_h, &pad_h_inv);
    let inv2 = ch(&inv_v, &pad_v_inv);
    let groupoid = CoordGroupoid::new(
        format!("core of {}", d.name),
        Family::Derived(format!("core of {}", d.name)),
        mb,
        k,
        src,
        tgt,
        unit.clone(),
        pr(&inv1),
        comp,
    )?;

    let mut report = CheckReport::new();
    // Composable pairs (c', c): c free, c' leaving β_C(c).
    let q = groupoid.param_dim();
    let t1 = block(k + q, 0, k);
    let t2 = after(groupoid.starting_map(), &cat(&[&after(groupoid.tgt_map(), &t1), &block(k + q, k, q)]));
    let (c2, c1) = (iota(&t2), iota(&t1));
    let (prod1, prod2, pad_v) = products(&c2, &c1);
    report.maps("core product: horizontal step composes", &after(hz.src_map(), &c2), &after(hz.tgt_map(), &pad_v), s);
    report.maps("core product: vertical step composes", &after(vt.src_map(), &ch(&c2, &pad_v)), &after(vt.tgt_map(), &c1), s);
    report.maps("core product: both formulas agree", &prod1, &prod2, s);
    report.maps("core product lies in the core", &iota(&pr(&prod1)), &prod1, s);
    report.maps("core inverse: vertical step composes", &after(vt.src_map(), &inv_h), &after(vt.tgt_map(), &pad_h_inv), s);
    report.maps("core inverse: horizontal step composes", &after(hz.src_map(), &inv_v), &after(hz.tgt_map(), &pad_v_inv), s);
    report.maps("core inverse: both formulas agree", &inv1, &inv2, s);
    report.maps("core inverse lies in the core", &iota(&pr(&inv1)), &inv1, s);
    report.maps("core identity is the double identity", &iota(&unit), &double_unit, s);
    // ∂_H = β̃_V and ∂_V = β̃_H restricted to C are morphisms over M.
    for (label, to, side) in [("core to H", vt.tgt_map(), &d.side_h), ("core to V", hz.tgt_map(), &d.side_v)] {
        let phi = after(to, &chart.embed);
        let g = &groupoid;
        report.maps(&format!("{label}: source"), &after(side.src_map(), &phi), g.src_map(), s);
        report.maps(&format!("{label}: target"), &after(side.tgt_map(), &phi), g.tgt_map(), s);
        report.maps(&format!("{label}: identities"), &after(&phi, g.unit_map()), side.unit_map(), s);
        report.maps(
            &format!("{label}: composition"),
            &after(&phi, &after(g.comp_map(), &cat(&[&t2, &t1]))),
            &after(side.comp_map(), &cat(&[&after(&phi, &t2), &after(&phi, &t1)])),
            s,
        );
    }
    Ok(CoreGroupoid { groupoid, embedding: chart.embed, projection: chart.project, report })
}

/// A morphism of double groupoids with its induced map on the double base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleMorphism {
    pub total: PolyMap,
    pub on_h: PolyMap,
    pub on_v: PolyMap,
    pub on_m: PolyMap,
    pub report: CheckReport,
}

/// Source, target, composition, identities and inverses of a morphism `from -> to` over `on_base`.
pub(crate) fn morphism_checks(
    r: &mut CheckReport,
    label: &str,
    from: &CoordGroupoid,
    to: &CoordGroupoid,
    phi: &PolyMap,
    on_base: &PolyMap,
    s: &mut Sampler,
) {
    let n = from.arrow_dim();
    let p = from.param_dim();
    let g = block(n + p, 0, n);
    let h = after(from.starting_map(), &cat(&[&after(from.tgt_map(), &g), &block(n + p, n, p)]));
    r.maps(&format!("{label}: source"), &after(to.src_map(), phi), &after(on_base, from.src_map()), s);
    r.maps(&format!("{label}: target"), &after(to.tgt_map(), phi), &after(on_base, from.tgt_map()), s);
    r.maps(
        &format!("{label}: composition"),
        &after(phi, &after(from.comp_map(), &cat(&[&h, &g]))),
        &after(to.comp_map(), &cat(&[&after(phi, &h), &after(phi, &g)])),
        s,
    );
    r.maps(&format!("{label}: identities"), &after(phi, from.unit_map()), &after(to.unit_map(), on_base), s);
    r.maps(&format!("{label}: inverses"), &after(phi, from.inv_map()), &after(to.inv_map(), phi), s);
}

/// Recovers `φ_M` from `φ(1²_m) = 1²_{φ_M(m)}` after checking that `(φ, φ_H)` and `(φ, φ_V)`
/// are morphisms of the vertical and horizontal structures.
pub fn infer_base_morphism(
    from: &CoordDoubleGroupoid,
    to: &CoordDoubleGroupoid,
    phi: &PolyMap,
    phi_h: &PolyMap,
    phi_v: &PolyMap,
    s: &mut Sampler,
) -> Result<DoubleMorphism, CoordError> {
    let mut given = CheckReport::new();
    morphism_checks(&mut given, "vertical structure", &from.vertical, &to.vertical, phi, phi_h, s);
    morphism_checks(&mut given, "horizontal structure", &from.horizontal, &to.horizontal, phi, phi_v, s);
    if let Some(c) = given.first_failure() {
        return Err(CoordError::NotMorphism(format!("{} at {:?}", c.name, c.witness)));
    }
    let m = PolyMap::identity(from.side_h.base_dim());
    let image = after(phi, &after(from.horizontal.unit_map(), &after(from.side_v.unit_map(), &m)));
    let on_m = after(to.side_v.src_map(), &after(to.horizontal.src_map(), &image));
    let mut report = given;
    report.maps(
        "double identities map to double identities",
        &image,
        &after(to.horizontal.unit_map(), &after(to.side_v.unit_map(), &on_m)),
        s,
    );
    morphism_checks(&mut report, "H side", &from.side_h, &to.side_h, phi_h, &on_m, s);
    morphism_checks(&mut report, "V side", &from.side_v, &to.side_v, phi_v, &on_m, s);
    Ok(DoubleMorphism { total: phi.clone(), on_h: phi_h.clone(), on_v: phi_v.clone(), on_m, report })
}
