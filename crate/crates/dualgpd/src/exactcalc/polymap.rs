use num_traits::Zero;

use super::{check_dim, ExactError, Mat, Poly, Rat, Sampler};

/// Polynomial map `R^dom -> R^components.len()`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    dom: usize,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(dom: usize, comps: Vec<Poly>) -> Result<Self, ExactError> {
        if let Some(bad) = comps.iter().find(|p| p.nvars() != dom) {
            return Err(ExactError::DimensionMismatch { expected: dom, got: bad.nvars() });
        }
        Ok(PolyMap { dom, comps })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { dom: n, comps: (0..n).map(|i| Poly::var(n, i)).collect() }
    }

    /// `x -> A x + b`.
    pub fn affine(a: &Mat, b: &[Rat]) -> Self {
        assert_eq!(a.rows(), b.len());
        let comps = (0..a.rows()).map(|i| Poly::affine(&a.row(i), b[i].clone())).collect();
        PolyMap { dom: a.cols(), comps }
    }

    pub fn linear(a: &Mat) -> Self {
        PolyMap::affine(a, &vec![Rat::zero(); a.rows()])
    }

    /// Coordinate projection picking the listed input variables.
    pub fn projection(dom: usize, idx: &[usize]) -> Self {
        PolyMap { dom, comps: idx.iter().map(|&i| Poly::var(dom, i)).collect() }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn codom(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Vec<Rat>, ExactError> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }

    /// Symbolic Jacobian, `jac[i][j] = d comp_i / d x_j`.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.comps
            .iter()
            .map(|p| (0..self.dom).map(|j| p.diff(j).expect("index in range")).collect())
            .collect()
    }

    pub fn jacobian_at(&self, x: &[Rat]) -> Result<Mat, ExactError> {
        check_dim(self.dom, x.len())?;
        let jac = self.jacobian();
        let rows: Result<Vec<Vec<Rat>>, _> =
            jac.iter().map(|row| row.iter().map(|p| p.eval(x)).collect()).collect();
        let rows = rows?;
        if rows.is_empty() {
            return Ok(Mat::zeros(0, self.dom));
        }
        Ok(Mat::from_rows(&rows))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, ExactError> {
        check_dim(self.dom, inner.codom())?;
        let comps = if inner.comps.is_empty() {
            self.comps.iter().map(|p| Poly::constant(inner.dom, p.constant_term())).collect()
        } else {
            self.comps.iter().map(|p| p.compose(&inner.comps)).collect::<Result<_, _>>()?
        };
        Ok(PolyMap { dom: inner.dom, comps })
    }

    /// Stacks the outputs of maps sharing a domain.
    pub fn concat(parts: &[&PolyMap]) -> Result<PolyMap, ExactError> {
        let dom = parts.first().map_or(0, |m| m.dom);
        let mut comps = Vec::new();
        for m in parts {
            check_dim(dom, m.dom)?;
            comps.extend(m.comps.iter().cloned());
        }
        Ok(PolyMap { dom, comps })
    }

    /// Product map on the concatenated domain.
    pub fn product(parts: &[&PolyMap]) -> PolyMap {
        let dom: usize = parts.iter().map(|m| m.dom).sum();
        let mut comps = Vec::new();
        let mut offset = 0;
        for m in parts {
            comps.extend(m.comps.iter().map(|p| p.shift(dom, offset)));
            offset += m.dom;
        }
        PolyMap { dom, comps }
    }

    /// Tangent prolongation `(x, v) -> (f(x), Jf(x) v)` on doubled coordinates.
    pub fn tangent_lift(&self) -> PolyMap {
        let n = self.dom;
        let base: Vec<Poly> = self.comps.iter().map(|p| p.shift(2 * n, 0)).collect();
        let jac = self.jacobian();
        let fiber: Vec<Poly> = jac
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(Poly::zero(2 * n), |acc, (j, d)| {
                    &acc + &(&d.shift(2 * n, 0) * &Poly::var(2 * n, n + j))
                })
            })
            .collect();
        PolyMap { dom: 2 * n, comps: base.into_iter().chain(fiber).collect() }
    }

    /// Splits an affine map into `(A, b)`; errors if any component has degree above one.
    pub fn affine_parts(&self) -> Result<(Mat, Vec<Rat>), ExactError> {
        if let Some(p) = self.comps.iter().find(|p| p.degree() > 1) {
            return Err(ExactError::NotAffine(p.to_string()));
        }
        let a = Mat::from_fn(self.codom(), self.dom, |i, j| self.comps[i].linear_coeff(j));
        let b = self.comps.iter().map(Poly::constant_term).collect();
        Ok((a, b))
    }

    pub fn is_affine(&self) -> bool {
        self.comps.iter().all(|p| p.degree() <= 1)
    }
}

/// How [`polymap_equal_on_samples`] decides equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityMode {
    Symbolic,
    Sampled { trials: usize },
}

pub fn polymap_equal_on_samples(
    f: &PolyMap,
    g: &PolyMap,
    sampler: &mut Sampler,
    mode: EqualityMode,
) -> Result<bool, ExactError> {
    check_dim(f.dom, g.dom)?;
    check_dim(f.codom(), g.codom())?;
    match mode {
        EqualityMode::Symbolic => Ok(f.comps.iter().zip(&g.comps).all(|(a, b)| (a - b).is_zero())),
        EqualityMode::Sampled { trials } => {
            for _ in 0..trials {
                let x = sampler.vector(f.dom);
                if f.eval(&x)? != g.eval(&x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Lie bracket of polynomial vector fields: `[X,Y]^i = X^j d_j Y^i - Y^j d_j X^i`.
pub fn vf_bracket(x: &PolyMap, y: &PolyMap) -> Result<PolyMap, ExactError> {
    check_dim(x.dom, x.codom())?;
    check_dim(y.dom, y.codom())?;
    check_dim(x.dom, y.dom)?;
    let n = x.dom;
    let derive = |a: &PolyMap, b: &PolyMap, i: usize| -> Poly {
        (0..n).fold(Poly::zero(n), |acc, j| &acc + &(&a.comps[j] * &b.comps[i].diff(j).expect("in range")))
    };
    let comps = (0..n).map(|i| &derive(x, y, i) - &derive(y, x, i)).collect();
    Ok(PolyMap { dom: n, comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::int;

    fn field(n: usize, comps: Vec<Poly>) -> PolyMap {
        PolyMap::new(n, comps).unwrap()
    }

    #[test]
    fn constant_fields_commute() {
        let dx = field(2, vec![Poly::constant(2, int(1)), Poly::zero(2)]);
        let dy = field(2, vec![Poly::zero(2), Poly::constant(2, int(1))]);
        assert!(vf_bracket(&dx, &dy).unwrap().components().iter().all(Poly::is_zero));
    }

    #[test]
    fn bracket_of_x_dy_and_y_dx() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let a = field(2, vec![Poly::zero(2), x.clone()]);
        let b = field(2, vec![y.clone(), Poly::zero(2)]);
        let expected = field(2, vec![x, -y]);
        assert_eq!(vf_bracket(&a, &b).unwrap(), expected);
    }

    #[test]
    fn tangent_lift_of_square() {
        let sq = field(1, vec![&Poly::var(1, 0) * &Poly::var(1, 0)]);
        assert_eq!(sq.tangent_lift().eval(&[int(3), int(1)]).unwrap(), vec![int(9), int(6)]);
    }

    #[test]
    fn tangent_lift_of_linear_is_block_diagonal() {
        let a = Mat::from_ints(&[&[1, 2], &[3, 4]]);
        let (lin, off) = PolyMap::linear(&a).tangent_lift().affine_parts().unwrap();
        assert_eq!(lin, Mat::block_diag(&[&a, &a]));
        assert!(off.iter().all(Zero::is_zero));
        assert_eq!(PolyMap::identity(3).tangent_lift(), PolyMap::identity(6));
    }

    #[test]
    fn equality_modes() {
        let mut s = Sampler::new(11);
        let x = Poly::var(1, 0);
        let f = field(1, vec![&(&x * &x) - &(&x - &x)]);
        let g = field(1, vec![&x * &x]);
        let h = field(1, vec![x.clone()]);
        assert!(polymap_equal_on_samples(&f, &g, &mut s, EqualityMode::Symbolic).unwrap());
        assert!(!polymap_equal_on_samples(&g, &h, &mut s, EqualityMode::Symbolic).unwrap());
        assert!(!polymap_equal_on_samples(&g, &h, &mut s, EqualityMode::Sampled { trials: 5 }).unwrap());
    }
}
