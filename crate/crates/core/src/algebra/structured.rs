//! Finite-dimensional algebras over ℚ given by structure constants.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::json::{
    poly_from_json, poly_to_json, rat_from_json, rat_to_json, rat_vec_from_json,
};
use crate::exact::matrix::{determinant, kernel, mat_mul, row_space, solve, Matrix};
use crate::exact::numfield::NumberField;
use crate::exact::poly::QPoly;
use crate::exact::rational::{rat, BigRat};
use crate::exact::Rationals;

/// An algebra with basis e_1..e_n and products e_i e_j = Σ_k α_{ijk} e_k.
///
/// Algebras over a number field K are stored after restriction of scalars to ℚ; `base`
/// remembers K and `base_dim` the K-dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredAlgebra {
    dim: usize,
    mult: Vec<Vec<Vec<BigRat>>>,
    unit: Vec<BigRat>,
    base: Option<NumberField>,
    base_dim: usize,
}

impl StructuredAlgebra {
    /// Validates associativity and the unit; finds the unit when not given.
    pub fn new(mult: Vec<Vec<Vec<BigRat>>>, unit: Option<Vec<BigRat>>) -> Result<Self> {
        let dim = mult.len();
        if dim == 0
            || mult
                .iter()
                .any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
        {
            return Err(Error::InvalidInput(
                "structure constants must form a dim×dim×dim array".into(),
            ));
        }
        let mut alg = StructuredAlgebra {
            dim,
            mult,
            unit: vec![BigRat::zero(); dim],
            base: None,
            base_dim: dim,
        };
        alg.unit = match unit {
            Some(u) if u.len() == dim => u,
            Some(_) => return Err(Error::InvalidInput("unit has the wrong length".into())),
            None => alg
                .find_unit()
                .ok_or_else(|| Error::NotClosed("no two-sided unit".into()))?,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn find_unit(&self) -> Option<Vec<BigRat>> {
        // Σ u_i α_{ijk} = δ_jk and Σ u_i α_{jik} = δ_jk.
        let n = self.dim;
        let rows = 2 * n * n;
        let a = Matrix::from_fn(rows, n, |r, i| {
            let (side, jk) = (r / (n * n), r % (n * n));
            let (j, k) = (jk / n, jk % n);
            if side == 0 {
                self.mult[i][j][k].clone()
            } else {
                self.mult[j][i][k].clone()
            }
        });
        let b: Vec<BigRat> = (0..rows)
            .map(|r| {
                if (r % (n * n)) / n == r % n {
                    BigRat::one()
                } else {
                    BigRat::zero()
                }
            })
            .collect();
        solve(&Rationals, &a, &b)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            let ei = self.basis_vector(i);
            if self.mul(&self.unit, &ei) != ei || self.mul(&ei, &self.unit) != ei {
                return Err(Error::NotClosed(format!("unit fails on e_{i}")));
            }
            for j in 0..n {
                let eij = &self.mult[i][j];
                for k in 0..n {
                    let ek = self.basis_vector(k);
                    let left = self.mul(eij, &ek);
                    let right = self.mul(&ei, &self.mult[j][k]);
                    if left != right {
                        return Err(Error::NotClosed(format!(
                            "associativity fails on (e_{i}, e_{j}, e_{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &Vec<Vec<Vec<BigRat>>> {
        &self.mult
    }

    pub fn base(&self) -> Option<&NumberField> {
        self.base.as_ref()
    }

    /// Dimension over the base field.
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn one(&self) -> Vec<BigRat> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<BigRat> {
        vec![BigRat::zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigRat> {
        let mut v = self.zero();
        v[i] = BigRat::one();
        v
    }

    pub fn mul(&self, a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, s: &BigRat, a: &[BigRat]) -> Vec<BigRat> {
        a.iter().map(|x| x * s).collect()
    }

    pub fn pow(&self, a: &[BigRat], e: u32) -> Vec<BigRat> {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Matrix of y ↦ a·y; column j is a·e_j.
    pub fn left_matrix(&self, a: &[BigRat]) -> Matrix<BigRat> {
        let cols: Vec<Vec<BigRat>> = (0..self.dim)
            .map(|j| self.mul(a, &self.basis_vector(j)))
            .collect();
        Matrix::from_fn(self.dim, self.dim, |k, j| cols[j][k].clone())
    }

    /// Trace of the left regular representation.
    pub fn trace(&self, a: &[BigRat]) -> BigRat {
        let mut t = BigRat::zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let s: BigRat = (0..self.dim).map(|j| self.mult[i][j][j].clone()).sum();
            t += x * s;
        }
        t
    }

    /// Gram matrix of (x, y) ↦ Tr(xy) on the given rows.
    pub fn trace_form_on(&self, rows: &[Vec<BigRat>]) -> Matrix<BigRat> {
        let n = rows.len();
        let mut g = Matrix::filled(n, n, BigRat::zero());
        for i in 0..n {
            for j in i..n {
                let t = self.trace(&self.mul(&rows[i], &rows[j]));
                g.set(i, j, t.clone());
                g.set(j, i, t);
            }
        }
        g
    }

    pub fn trace_form(&self) -> Matrix<BigRat> {
        let rows: Vec<Vec<BigRat>> = (0..self.dim).map(|i| self.basis_vector(i)).collect();
        self.trace_form_on(&rows)
    }

    /// Semisimplicity test over ℚ: the regular trace form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        !determinant(&Rationals, &self.trace_form()).is_zero()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    /// Basis (reduced echelon rows) of the center.
    pub fn center(&self) -> Vec<Vec<BigRat>> {
        let n = self.dim;
        // z e_i − e_i z = 0 for all i, linear in z.
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                rows.push(
                    (0..n)
                        .map(|l| &self.mult[l][i][k] - &self.mult[i][l][k])
                        .collect::<Vec<_>>(),
                );
            }
        }
        let m = Matrix::from_rows(rows, n);
        let ker = kernel(&Rationals, &m);
        if ker.is_empty() {
            return ker;
        }
        row_space(&Rationals, &Matrix::from_rows(ker, n))
    }

    /// The algebra structure on a subspace closed under multiplication, with the given unit.
    pub fn subalgebra(&self, basis: &[Vec<BigRat>], unit: &[BigRat]) -> Result<StructuredAlgebra> {
        let m = basis.len();
        let bt = Matrix::from_fn(self.dim, m, |i, j| basis[j][i].clone());
        let coords = |v: &[BigRat]| {
            solve(&Rationals, &bt, v)
                .ok_or_else(|| Error::NotClosed("subspace not closed under multiplication".into()))
        };
        let mut mult = vec![vec![vec![]; m]; m];
        for i in 0..m {
            for j in 0..m {
                mult[i][j] = coords(&self.mul(&basis[i], &basis[j]))?;
            }
        }
        let u = coords(unit)?;
        StructuredAlgebra::new(mult, Some(u))
    }

    /// Coordinates of `v` in the rows `basis` (which must span it).
    pub fn coords_in(basis: &[Vec<BigRat>], v: &[BigRat]) -> Option<Vec<BigRat>> {
        let n = v.len();
        let bt = Matrix::from_fn(n, basis.len(), |i, j| basis[j][i].clone());
        solve(&Rationals, &bt, v)
    }

    /// Direct sum of algebras.
    pub fn direct_sum(parts: &[StructuredAlgebra]) -> Result<StructuredAlgebra> {
        let n: usize = parts.iter().map(|a| a.dim).sum();
        let mut mult = vec![vec![vec![BigRat::zero(); n]; n]; n];
        let mut unit = vec![BigRat::zero(); n];
        let mut off = 0;
        for a in parts {
            for i in 0..a.dim {
                unit[off + i] = a.unit[i].clone();
                for j in 0..a.dim {
                    for k in 0..a.dim {
                        mult[off + i][off + j][off + k] = a.mult[i][j][k].clone();
                    }
                }
            }
            off += a.dim;
        }
        StructuredAlgebra::new(mult, Some(unit))
    }

    /// M_n(ℚ) with the matrix-unit basis E_{ab} at index a·n + b.
    pub fn matrix_algebra(n: usize) -> StructuredAlgebra {
        let d = n * n;
        let mut mult = vec![vec![vec![BigRat::zero(); d]; d]; d];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    mult[a * n + b][b * n + c][a * n + c] = BigRat::one();
                }
            }
        }
        let unit = (0..d)
            .map(|i| {
                if i / n == i % n {
                    BigRat::one()
                } else {
                    BigRat::zero()
                }
            })
            .collect();
        StructuredAlgebra::new(mult, Some(unit)).expect("matrix algebra is associative")
    }

    /// The quaternion algebra (a, b)/ℚ with basis 1, i, j, k (i² = a, j² = b, ij = −ji = k).
    pub fn quaternion(a: &BigRat, b: &BigRat) -> StructuredAlgebra {
        let z = BigRat::zero;
        let mut mult = vec![vec![vec![z(); 4]; 4]; 4];
        let set =
            |m: &mut Vec<Vec<Vec<BigRat>>>, x: usize, y: usize, k: usize, c: BigRat| m[x][y][k] = c;
        let ab = a * b;
        for x in 0..4 {
            set(&mut mult, 0, x, x, BigRat::one());
            set(&mut mult, x, 0, x, BigRat::one());
        }
        set(&mut mult, 1, 1, 0, a.clone());
        set(&mut mult, 2, 2, 0, b.clone());
        set(&mut mult, 3, 3, 0, -ab.clone());
        set(&mut mult, 1, 2, 3, BigRat::one());
        set(&mut mult, 2, 1, 3, -BigRat::one());
        set(&mut mult, 1, 3, 2, a.clone());
        set(&mut mult, 3, 1, 2, -a.clone());
        set(&mut mult, 2, 3, 1, -b.clone());
        set(&mut mult, 3, 2, 1, b.clone());
        let unit = vec![BigRat::one(), z(), z(), z()];
        StructuredAlgebra::new(mult, Some(unit)).expect("quaternion algebra is associative")
    }

    /// ℚ[x]/(f) with the power basis.
    pub fn from_poly(f: &QPoly) -> Result<StructuredAlgebra> {
        let d = f.deg();
        if d == 0 {
            return Err(Error::InvalidInput(
                "defining polynomial must be nonconstant".into(),
            ));
        }
        let fm = f.monic();
        let mut mult = vec![vec![vec![BigRat::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let r = QPoly::monomial(BigRat::one(), i + j).rem(&fm);
                for k in 0..d {
                    mult[i][j][k] = r.coeff(k);
                }
            }
        }
        let mut unit = vec![BigRat::zero(); d];
        unit[0] = BigRat::one();
        StructuredAlgebra::new(mult, Some(unit))
    }

    /// Restriction of scalars of an algebra over K = ℚ[t]/(g). Basis order: e_i·t^a at index i·deg + a.
    pub fn over_number_field(
        k: &NumberField,
        mult: &[Vec<Vec<Vec<BigRat>>>],
        unit: &[Vec<BigRat>],
    ) -> Result<StructuredAlgebra> {
        let n = mult.len();
        let d = k.degree();
        let dim = n * d;
        let mut out = vec![vec![vec![BigRat::zero(); dim]; dim]; dim];
        for i in 0..n {
            for j in 0..n {
                for a in 0..d {
                    for b in 0..d {
                        let tab = k.pow(&k.generator(), (a + b) as u32);
                        for kk in 0..n {
                            let c = k.mul(&tab, &pad(&mult[i][j][kk], d));
                            for (t, ct) in c.into_iter().enumerate() {
                                out[i * d + a][j * d + b][kk * d + t] = ct;
                            }
                        }
                    }
                }
            }
        }
        let mut u = vec![BigRat::zero(); dim];
        for (i, ui) in unit.iter().enumerate() {
            for (t, c) in pad(ui, d).into_iter().enumerate() {
                u[i * d + t] = c;
            }
        }
        let mut alg = StructuredAlgebra::new(out, Some(u))?;
        alg.base = Some(k.clone());
        alg.base_dim = n;
        Ok(alg)
    }

    /// Elements of the base field K inside the algebra (t ↦ t·1).
    pub fn base_generator(&self) -> Option<Vec<BigRat>> {
        let k = self.base.as_ref()?;
        let d = k.degree();
        if d == 1 {
            return None;
        }
        // t·1 = Σ_i u_i (e_i t).
        let n = self.base_dim;
        let mut v = self.zero();
        for i in 0..n {
            for a in 0..d {
                let c = &self.unit[i * d + a];
                if c.is_zero() {
                    continue;
                }
                // e_i t^a · t = e_i t^{a+1}, reduced.
                let t = k.pow(&k.generator(), (a + 1) as u32);
                for (s, cs) in t.into_iter().enumerate() {
                    v[i * d + s] += c * cs;
                }
            }
        }
        Some(v)
    }

    pub fn from_json(v: &Value) -> Result<StructuredAlgebra> {
        let mult = v
            .get("mult")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing mult".into()))?;
        let base = v.get("base").cloned().unwrap_or(Value::String("Q".into()));
        let field = match &base {
            Value::String(s) if s == "Q" || s == "QQ" => None,
            Value::Array(_) => {
                let f = poly_from_json(&base)?;
                if f.deg() == 1 {
                    None
                } else {
                    Some(NumberField::new(f)?)
                }
            }
            _ => {
                return Err(Error::InvalidInput(
                    "base must be \"Q\" or a defining polynomial".into(),
                ))
            }
        };
        let arr3 = |x: &Value| -> Result<Vec<Vec<Vec<Value>>>> {
            x.as_array()
                .ok_or_else(|| Error::InvalidInput("mult must be a 3-d array".into()))?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::InvalidInput("mult must be a 3-d array".into()))?
                        .iter()
                        .map(|c| {
                            c.as_array().cloned().ok_or_else(|| {
                                Error::InvalidInput("mult must be a 3-d array".into())
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let m3 = arr3(&Value::Array(mult.clone()))?;
        if let Some(dim) = v.get("dim").and_then(Value::as_u64) {
            if dim as usize != m3.len() {
                return Err(Error::InvalidInput("dim disagrees with mult".into()));
            }
        }
        match field {
            None => {
                let mult: Vec<Vec<Vec<BigRat>>> = m3
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| c.iter().map(rat_from_json).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?;
                let unit = match v.get("unit") {
                    Some(u) => Some(rat_vec_from_json(u)?),
                    None => None,
                };
                StructuredAlgebra::new(mult, unit)
            }
            Some(k) => {
                let elem = |c: &Value| -> Result<Vec<BigRat>> {
                    match c {
                        Value::Array(_) => Ok(rat_vec_from_json(c)?),
                        _ => Ok(vec![rat_from_json(c)?]),
                    }
                };
                let mult: Vec<Vec<Vec<Vec<BigRat>>>> = m3
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| c.iter().map(elem).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?;
                let n = mult.len();
                let unit: Vec<Vec<BigRat>> = match v.get("unit") {
                    Some(Value::Array(u)) => u.iter().map(elem).collect::<Result<_>>()?,
                    _ => {
                        return Err(Error::InvalidInput(
                            "algebras over a number field need an explicit unit".into(),
                        ))
                    }
                };
                if unit.len() != n {
                    return Err(Error::InvalidInput("unit has the wrong length".into()));
                }
                StructuredAlgebra::over_number_field(&k, &mult, &unit)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mult: Vec<Vec<Vec<Value>>> = self
            .mult
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.iter().map(rat_to_json).collect())
                    .collect()
            })
            .collect();
        json!({
            "dim": self.dim,
            "base": self.base.as_ref().map_or(Value::String("Q".into()), |k| poly_to_json(k.modulus())),
            "mult": mult,
            "unit": self.unit.iter().map(rat_to_json).collect::<Vec<_>>(),
        })
    }

    /// Left regular representation of a basis element as a product check helper.
    pub fn regular_representation(&self) -> Vec<Matrix<BigRat>> {
        (0..self.dim)
            .map(|i| self.left_matrix(&self.basis_vector(i)))
            .collect()
    }

    /// Whether `rep` (matrices for each basis element) is a unital algebra homomorphism.
    pub fn check_representation(&self, rep: &[Matrix<BigRat>]) -> Result<()> {
        if rep.len() != self.dim {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} matrices, got {}",
                self.dim,
                rep.len()
            )));
        }
        let m = rep[0].rows();
        if rep.iter().any(|r| r.rows() != m || r.cols() != m) {
            return Err(Error::NotAHomomorphism(
                "matrices must be square of one size".into(),
            ));
        }
        let combo = |c: &[BigRat]| StructuredAlgebra::act(rep, c);
        let one = combo(&self.unit);
        if one
            != Matrix::from_fn(m, m, |a, b| {
                if a == b {
                    BigRat::one()
                } else {
                    BigRat::zero()
                }
            })
        {
            return Err(Error::NotAHomomorphism(
                "unit does not act as the identity".into(),
            ));
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = mat_mul(&Rationals, &rep[i], &rep[j]);
                if lhs != combo(&self.mult[i][j]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "product e_{i}·e_{j} not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The element Σ c_i e_i acting through `rep`.
    pub fn act(rep: &[Matrix<BigRat>], c: &[BigRat]) -> Matrix<BigRat> {
        let m = rep[0].rows();
        Matrix::from_fn(m, m, |a, b| {
            c.iter().zip(rep).map(|(ck, r)| ck * r.get(a, b)).sum()
        })
    }
}

fn pad(v: &[BigRat], d: usize) -> Vec<BigRat> {
    let mut out = v.to_vec();
    out.resize(d, BigRat::zero());
    if out.len() > d {
        out.truncate(d);
    }
    out
}

/// ℚ ⊕ ℚ ⊕ … (s copies) with idempotent basis.
pub fn split_etale_algebra(s: usize) -> StructuredAlgebra {
    let mut mult = vec![vec![vec![BigRat::zero(); s]; s]; s];
    for (i, m) in mult.iter_mut().enumerate() {
        m[i][i] = BigRat::one();
    }
    StructuredAlgebra::new(mult, Some(vec![BigRat::one(); s]))
        .expect("split algebra is associative")
}

pub fn rat_list(v: &[i64]) -> Vec<BigRat> {
    v.iter().map(|&x| rat(x)).collect()
}
