use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{format_rational, parse_rational, Q};
use crate::supercore::Parity;

/// A finite-dimensional Lie superalgebra with an invariant form, in a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSuperalgebraData {
    pub name: String,
    pub names: Vec<String>,
    pub parities: Vec<Parity>,
    /// `[x_i, x_j] = sum_k c[k] x_k` for `i <= j`.
    pub structure: BTreeMap<(usize, usize), Vec<Q>>,
    pub form: Matrix,
    /// `(e, h, f)` as coefficient vectors.
    pub triple: Option<[Vec<Q>; 3]>,
}

#[derive(Debug, Deserialize, Serialize)]
struct BasisDoc {
    name: String,
    parity: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct BracketDoc {
    i: usize,
    j: usize,
    coeffs: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct TripleDoc {
    e: Vec<String>,
    h: Vec<String>,
    f: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    name: String,
    basis: Vec<BasisDoc>,
    brackets: Vec<BracketDoc>,
    form: Vec<Vec<String>>,
    #[serde(default)]
    sl2_triple: Option<TripleDoc>,
}

fn parse_vec(v: &[String], n: usize, what: &str) -> Result<Vec<Q>> {
    if v.len() != n {
        return Err(Error::Document(format!("{what} has {} entries, expected {n}", v.len())));
    }
    v.iter().map(|s| parse_rational(s).map_err(Error::from)).collect()
}

/// Parses and fully validates an algebra document.
pub fn load_algebra(text: &str) -> Result<LieSuperalgebraData> {
    let data = parse_algebra(text)?;
    data.validate()?;
    Ok(data)
}

/// Parses an algebra document without the structural checks.
pub fn parse_algebra(text: &str) -> Result<LieSuperalgebraData> {
    let doc: AlgebraDoc = serde_json::from_str(text)?;
    let n = doc.basis.len();
    if n == 0 {
        return Err(Error::Document("empty basis".into()));
    }
    let mut names = Vec::with_capacity(n);
    let mut parities = Vec::with_capacity(n);
    for b in &doc.basis {
        if names.contains(&b.name) {
            return Err(Error::Document(format!("duplicate basis name {}", b.name)));
        }
        names.push(b.name.clone());
        parities.push(match b.parity.as_str() {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            other => return Err(Error::Document(format!("unknown parity {other:?}"))),
        });
    }
    let mut structure = BTreeMap::new();
    for br in &doc.brackets {
        if br.i >= n || br.j >= n {
            return Err(Error::Document(format!("bracket ({}, {}) out of range", br.i, br.j)));
        }
        let c = parse_vec(&br.coeffs, n, "bracket coefficients")?;
        let (i, j, c) = if br.i <= br.j {
            (br.i, br.j, c)
        } else {
            let s = if parities[br.i].is_odd() && parities[br.j].is_odd() { Q::one() } else { -Q::one() };
            (br.j, br.i, c.into_iter().map(|x| x * &s).collect())
        };
        if structure.insert((i, j), c).is_some() {
            return Err(Error::Document(format!("bracket ({i}, {j}) given twice")));
        }
    }
    if doc.form.len() != n {
        return Err(Error::Document(format!("form has {} rows, expected {n}", doc.form.len())));
    }
    let form = doc.form.iter().map(|row| parse_vec(row, n, "form row")).collect::<Result<Matrix>>()?;
    let triple = match &doc.sl2_triple {
        None => None,
        Some(t) => Some([parse_vec(&t.e, n, "triple e")?, parse_vec(&t.h, n, "triple h")?, parse_vec(&t.f, n, "triple f")?]),
    };
    Ok(LieSuperalgebraData { name: doc.name, names, parities, structure, form, triple })
}

impl LieSuperalgebraData {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `(even, odd)` dimension.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        (self.len() - odd, odd)
    }

    /// `[x_i, x_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let n = self.len();
        if i <= j {
            self.structure.get(&(i, j)).cloned().unwrap_or_else(|| vec![Q::zero(); n])
        } else {
            let s = if self.parities[i].is_odd() && self.parities[j].is_odd() { Q::one() } else { -Q::one() };
            self.structure.get(&(j, i)).map(|c| c.iter().map(|x| x * &s).collect()).unwrap_or_else(|| vec![Q::zero(); n])
        }
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let n = self.len();
        let mut out = vec![Q::zero(); n];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = self.bracket_basis(i, j);
                let ab = a * b;
                for (o, x) in out.iter_mut().zip(&c) {
                    if !x.is_zero() {
                        *o += &ab * x;
                    }
                }
            }
        }
        out
    }

    pub fn form_value(&self, u: &[Q], v: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if !b.is_zero() && !self.form[i][j].is_zero() {
                    s += a * &self.form[i][j] * b;
                }
            }
        }
        s
    }

    /// Structure constants as `(i, j, coeffs)` with `i <= j`.
    pub fn structure_list(&self) -> Vec<(usize, usize, Vec<Q>)> {
        self.structure.iter().map(|(&(i, j), c)| (i, j, c.clone())).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.len()];
        v[i] = Q::one();
        v
    }

    pub fn vector_parity(&self, v: &[Q]) -> Result<Parity> {
        let mut seen = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match seen {
                None => seen = Some(self.parities[i]),
                Some(p) if p != self.parities[i] => return Err(Error::MixedParityVector),
                _ => {}
            }
        }
        Ok(seen.unwrap_or(Parity::Even))
    }

    pub fn render_vector(&self, v: &[Q]) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.names[i].clone());
            } else {
                parts.push(format!("{}*{}", format_rational(c), self.names[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Every failed Jacobi identity on basis triples, as `(x, y, z)` names.
    pub fn jacobi_violations(&self) -> Vec<[String; 3]> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let lhs = self.bracket(&x, &self.bracket(&y, &z));
                    let a = self.bracket(&self.bracket(&x, &y), &z);
                    let mut b = self.bracket(&y, &self.bracket(&x, &z));
                    if self.parities[i].is_odd() && self.parities[j].is_odd() {
                        b = b.into_iter().map(|v| -v).collect();
                    }
                    if lhs.iter().zip(&a).zip(&b).any(|((l, a), b)| *l != a + b) {
                        out.push([self.names[i].clone(), self.names[j].clone(), self.names[k].clone()]);
                    }
                }
            }
        }
        out
    }

    /// Checks parity of brackets, Jacobi, and that the form is even, supersymmetric,
    /// invariant and nondegenerate; validates the triple when present.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for (&(i, j), c) in &self.structure {
            let want = self.parities[i].plus(self.parities[j]);
            if self.vector_parity(c)? != want && c.iter().any(|x| !x.is_zero()) {
                return Err(Error::Validation(format!(
                    "parity mismatch: [{}, {}] has the wrong parity",
                    self.names[i], self.names[j]
                )));
            }
            if i == j && !self.parities[i].is_odd() && c.iter().any(|x| !x.is_zero()) {
                return Err(Error::Validation(format!("[{0}, {0}] must vanish for even {0}", self.names[i])));
            }
        }
        if let Some(t) = self.jacobi_violations().first() {
            return Err(Error::Validation(format!("Jacobi identity fails on ({}, {}, {})", t[0], t[1], t[2])));
        }
        for i in 0..n {
            for j in 0..n {
                let f = &self.form[i][j];
                if self.parities[i] != self.parities[j] && !f.is_zero() {
                    return Err(Error::Validation(format!("form pairs {} and {} of different parity", self.names[i], self.names[j])));
                }
                let sign = if self.parities[i].is_odd() && self.parities[j].is_odd() { -Q::one() } else { Q::one() };
                if *f != &sign * &self.form[j][i] {
                    return Err(Error::Validation(format!("form is not supersymmetric at ({}, {})", self.names[i], self.names[j])));
                }
            }
        }
        if linalg::det(&self.form).is_zero() {
            return Err(Error::Validation("form is degenerate".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let xy = self.bracket_basis(i, j);
                for k in 0..n {
                    let lhs = self.form_value(&xy, &self.unit(k));
                    let rhs = self.form_value(&self.unit(i), &self.bracket_basis(j, k));
                    if lhs != rhs {
                        return Err(Error::Validation(format!(
                            "form is not invariant on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        if let Some([e, h, f]) = &self.triple {
            for (v, nm) in [(e, "e"), (h, "h"), (f, "f")] {
                if self.vector_parity(v)? != Parity::Even {
                    return Err(Error::Validation(format!("triple element {nm} is not even")));
                }
            }
            let two = Q::from_integer(2.into());
            let he = self.bracket(h, e);
            let hf = self.bracket(h, f);
            let ef = self.bracket(e, f);
            let ok = he.iter().zip(e).all(|(a, b)| *a == &two * b)
                && hf.iter().zip(f).all(|(a, b)| *a == -(&two * b))
                && ef == *h;
            if !ok {
                return Err(Error::Validation("sl2_triple relations fail".into()));
            }
        }
        Ok(())
    }

    /// Same algebra in a new basis; rows of `basis` are new vectors in old coordinates.
    pub fn change_basis(&self, basis: &Matrix, names: Vec<String>) -> Result<LieSuperalgebraData> {
        let n = self.len();
        if basis.len() != n || names.len() != n {
            return Err(Error::Validation("change of basis needs a square matrix and one name per vector".into()));
        }
        // Old coordinates of v -> new coordinates: solve v = c * basis.
        let inv = linalg::inverse(basis).ok_or_else(|| Error::Validation("singular change of basis".into()))?;
        let to_new = |v: &[Q]| -> Vec<Q> {
            (0..n).map(|c| v.iter().zip(&inv).fold(Q::zero(), |acc, (a, row)| acc + a * &row[c])).collect()
        };
        let parities = basis.iter().map(|v| self.vector_parity(v)).collect::<Result<Vec<_>>>()?;
        let mut structure = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let c = to_new(&self.bracket(&basis[i], &basis[j]));
                if c.iter().any(|x| !x.is_zero()) {
                    structure.insert((i, j), c);
                }
            }
        }
        let form = (0..n).map(|i| (0..n).map(|j| self.form_value(&basis[i], &basis[j])).collect()).collect();
        let triple = self.triple.as_ref().map(|[e, h, f]| [to_new(e), to_new(h), to_new(f)]);
        Ok(LieSuperalgebraData { name: self.name.clone(), names, parities, structure, form, triple })
    }

    /// Reorders the basis: new vector `k` is old vector `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<LieSuperalgebraData> {
        let basis: Matrix = perm.iter().map(|&i| self.unit(i)).collect();
        let names = perm.iter().map(|&i| self.names[i].clone()).collect();
        self.change_basis(&basis, names)
    }

    /// The even subalgebra with the restricted form.
    pub fn even_part(&self) -> LieSuperalgebraData {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !self.parities[i].is_odd()).collect();
        let restrict = |v: &[Q]| keep.iter().map(|&i| v[i].clone()).collect::<Vec<Q>>();
        let mut structure = BTreeMap::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a) {
                let c = restrict(&self.bracket_basis(i, j));
                if c.iter().any(|x| !x.is_zero()) {
                    structure.insert((a, b), c);
                }
            }
        }
        LieSuperalgebraData {
            name: format!("{}_even", self.name),
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
            parities: vec![Parity::Even; keep.len()],
            structure,
            form: keep.iter().map(|&i| restrict(&self.form[i])).collect(),
            triple: self.triple.as_ref().map(|[e, h, f]| [restrict(e), restrict(h), restrict(f)]),
        }
    }

    /// Serializes back to the document format.
    pub fn to_json(&self) -> String {
        let s = |v: &[Q]| v.iter().map(format_rational).collect::<Vec<_>>();
        let doc = AlgebraDoc {
            name: self.name.clone(),
            basis: self
                .names
                .iter()
                .zip(&self.parities)
                .map(|(n, p)| BasisDoc { name: n.clone(), parity: if p.is_odd() { "odd" } else { "even" }.into() })
                .collect(),
            brackets: self.structure.iter().map(|(&(i, j), c)| BracketDoc { i, j, coeffs: s(c) }).collect(),
            form: self.form.iter().map(|r| s(r)).collect(),
            sl2_triple: self.triple.as_ref().map(|[e, h, f]| TripleDoc { e: s(e), h: s(h), f: s(f) }),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}
