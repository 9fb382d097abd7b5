//! Even Poisson superbrackets on truncated super power series.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{format_rational, rational_sqrt, Q};
use crate::supercore::{bracket_order, Parity, SuperPoly, TruncatedSeries, Universe, EXACT};

/// An algebra with a product and an even superbracket, both on truncated series.
///
/// The Darboux algorithms are written against this trait so the classical and the
/// quantum normalizations share one implementation.
pub trait BracketAlgebra {
    fn universe(&self) -> &Universe;
    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries>;
    fn bracket(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries>;
    /// Weight shift `k` with `weight({a,b}) = weight(a) + weight(b) + k`.
    fn equiv_weight(&self) -> i32;
}

/// Generator brackets `{x_i, x_j}` for `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BracketTable {
    entries: BTreeMap<(usize, usize), SuperPoly>,
}

impl BracketTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `{x_i, x_j}`; the opposite entry follows by super-antisymmetry.
    pub fn set(&mut self, i: usize, j: usize, value: SuperPoly, u: &Universe) {
        let (a, b, v) = if i <= j { (i, j, value) } else { (j, i, value.scale(&antisym_sign(i, j, u))) };
        if v.is_zero() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), v);
        }
    }

    pub fn get(&self, i: usize, j: usize, u: &Universe) -> SuperPoly {
        if i <= j {
            self.entries.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.entries.get(&(j, i)).map(|p| p.scale(&antisym_sign(i, j, u))).unwrap_or_default()
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &SuperPoly)> {
        self.entries.iter()
    }

    /// Largest adic order among entries.
    pub fn max_entry_order(&self, u: &Universe) -> u32 {
        self.entries.values().filter_map(|p| p.max_order(u)).max().unwrap_or(0)
    }
}

/// `-(-1)^{|i||j|}`, the factor relating `{x_j, x_i}` to `{x_i, x_j}`.
fn antisym_sign(i: usize, j: usize, u: &Universe) -> Q {
    if u.is_odd(i) && u.is_odd(j) {
        Q::one()
    } else {
        -Q::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonAlgebra {
    universe: Universe,
    table: BracketTable,
    equiv_weight: i32,
}

impl PoissonAlgebra {
    /// Validates parity and weight of every entry.
    pub fn new(universe: Universe, table: BracketTable, equiv_weight: i32) -> Result<Self> {
        for (&(i, j), p) in table.entries() {
            if i >= universe.len() || j >= universe.len() {
                return Err(Error::Validation(format!("bracket entry ({i},{j}) out of range")));
            }
            if i == j && !universe.is_odd(i) {
                return Err(Error::Validation(format!("even self-bracket of {} must vanish", universe.var(i).name)));
            }
            let want = Parity::from_odd(universe.is_odd(i)).plus(Parity::from_odd(universe.is_odd(j)));
            if p.parities(&universe) != vec![want] {
                return Err(Error::Validation(format!(
                    "bracket of {} and {} has the wrong parity",
                    universe.var(i).name,
                    universe.var(j).name
                )));
            }
            let w = universe.weight(i) + universe.weight(j) + equiv_weight;
            if p.weights(&universe) != vec![w] {
                return Err(Error::Validation(format!(
                    "bracket of {} and {} is not of weight {w}",
                    universe.var(i).name,
                    universe.var(j).name
                )));
            }
        }
        Ok(PoissonAlgebra { universe, table, equiv_weight })
    }

    /// Constant brackets `{x_i, x_j} = c`.
    pub fn symplectic(universe: Universe, pairs: &[(usize, usize, Q)], equiv_weight: i32) -> Result<Self> {
        let n = universe.len();
        let mut table = BracketTable::new();
        for (i, j, c) in pairs {
            table.set(*i, *j, SuperPoly::constant(n, c.clone()), &universe);
        }
        Self::new(universe, table, equiv_weight)
    }

    /// Lie–Poisson bracket in shifted coordinates `x' = x - chi(x)`:
    /// `{x'_i, x'_j} = sum_k c_ij^k (x'_k + chi_k)`.
    pub fn lie_poisson(
        universe: Universe,
        structure: &[(usize, usize, Vec<Q>)],
        chi: &[Q],
        equiv_weight: i32,
    ) -> Result<Self> {
        let table = lie_table(&universe, structure, chi);
        Self::new(universe, table, equiv_weight)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn equiv_weight(&self) -> i32 {
        self.equiv_weight
    }

    /// Bracket of plain polynomials, dropping terms above `max_order`.
    pub fn bracket_poly(&self, f: &SuperPoly, g: &SuperPoly, max_order: u32) -> SuperPoly {
        let u = &self.universe;
        let right = derivatives(f, u, true);
        let left = derivatives(g, u, false);
        let mut out = SuperPoly::zero();
        for (&a, da) in &right {
            let mut inner = SuperPoly::zero();
            for (&b, db) in &left {
                let t = self.table.get(a, b, u);
                if t.is_zero() {
                    continue;
                }
                inner.add_assign(&t.mul(db, u, max_order));
            }
            if !inner.is_zero() {
                out.add_assign(&da.mul(&inner, u, max_order));
            }
        }
        out
    }

    pub fn bracket(&self, f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
        let u = &self.universe;
        let order = bracket_order(f.order, g.low_nonconstant_order(u), 2)?.min(bracket_order(
            g.order,
            f.low_nonconstant_order(u),
            2,
        )?);
        let poly = self.bracket_poly(&f.poly, &g.poly, order);
        Ok(TruncatedSeries::new(poly, order, u))
    }

    pub fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        a.mul(b, &self.universe)
    }

    /// `b -> {a, b}`.
    pub fn ad_op<'a>(&'a self, a: &'a TruncatedSeries) -> impl Fn(&TruncatedSeries) -> Result<TruncatedSeries> + 'a {
        move |b| self.bracket(a, b)
    }

    /// Constant terms of the generator brackets at the point `chi`.
    pub fn bivector_at(&self, chi: &[Q]) -> Result<PoissonBivector> {
        let u = &self.universe;
        let n = u.len();
        if chi.len() != n {
            return Err(Error::UniverseMismatch { expected: n, found: chi.len() });
        }
        let mut matrix = vec![vec![Q::zero(); n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self
                    .table
                    .get(i, j, u)
                    .eval(chi, u)
                    .ok_or_else(|| Error::Validation("point must vanish on odd generators".into()))?;
            }
        }
        let parities = (0..n).map(|i| Parity::from_odd(u.is_odd(i))).collect();
        let b = PoissonBivector { matrix, parities };
        b.validate()?;
        Ok(b)
    }

    /// Graded Jacobi on all generator triples modulo terms above order `n`.
    pub fn check_jacobi(&self, n: u32) -> Vec<JacobiViolation> {
        let u = &self.universe;
        let len = u.len();
        let gens: Vec<SuperPoly> = (0..len).map(|i| SuperPoly::var(len, i)).collect();
        let cap = n.saturating_add(2);
        let mut out = Vec::new();
        for i in 0..len {
            for j in 0..len {
                let xy = self.bracket_poly(&gens[i], &gens[j], cap);
                for k in 0..len {
                    let lhs = self.bracket_poly(&gens[i], &self.bracket_poly(&gens[j], &gens[k], cap), cap);
                    let a = self.bracket_poly(&xy, &gens[k], cap);
                    let mut b = self.bracket_poly(&gens[j], &self.bracket_poly(&gens[i], &gens[k], cap), cap);
                    if u.is_odd(i) && u.is_odd(j) {
                        b = b.neg();
                    }
                    let residual = lhs.sub(&a).sub(&b).truncate(u, n);
                    if !residual.is_zero() {
                        out.push(JacobiViolation {
                            triple: [u.var(i).name.clone(), u.var(j).name.clone(), u.var(k).name.clone()],
                            residual: residual.render(u),
                        });
                    }
                }
            }
        }
        out
    }
}

impl PoissonAlgebra {
    /// Super-antisymmetry, graded Jacobi and Leibniz on one triple of homogeneous
    /// polynomials, computed without truncation; returns the names of failed axioms.
    pub fn axiom_violations(&self, f: &SuperPoly, g: &SuperPoly, h: &SuperPoly) -> Result<Vec<&'static str>> {
        let u = &self.universe;
        let odd = |p: &SuperPoly| -> Result<bool> {
            match p.parities(u).as_slice() {
                [] => Ok(false),
                [p] => Ok(p.is_odd()),
                _ => Err(Error::MixedParity),
            }
        };
        let sign = if odd(f)? && odd(g)? { -Q::one() } else { Q::one() };
        odd(h)?;
        let br = |a: &SuperPoly, b: &SuperPoly| self.bracket_poly(a, b, EXACT);
        let mul = |a: &SuperPoly, b: &SuperPoly| a.mul(b, u, EXACT);
        let fg = br(f, g);
        let mut out = Vec::new();
        if !fg.add(&br(g, f).scale(&sign)).is_zero() {
            out.push("antisymmetry");
        }
        if !br(f, &br(g, h)).sub(&br(&fg, h)).sub(&br(g, &br(f, h)).scale(&sign)).is_zero() {
            out.push("jacobi");
        }
        if !br(f, &mul(g, h)).sub(&mul(&fg, h)).sub(&mul(g, &br(f, h)).scale(&sign)).is_zero() {
            out.push("leibniz");
        }
        Ok(out)
    }
}

impl BracketAlgebra for PoissonAlgebra {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(a.mul(b, &self.universe))
    }

    fn bracket(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        PoissonAlgebra::bracket(self, a, b)
    }

    fn equiv_weight(&self) -> i32 {
        self.equiv_weight
    }
}

/// Table of a shifted Lie–Poisson bracket; shared with the enveloping star algebra.
pub fn lie_table(universe: &Universe, structure: &[(usize, usize, Vec<Q>)], chi: &[Q]) -> BracketTable {
    let n = universe.len();
    let mut table = BracketTable::new();
    for (i, j, coeffs) in structure {
        let mut p = SuperPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            p.add_term(crate::supercore::Monomial::var(n, k), c.clone());
            if let Some(x) = chi.get(k) {
                p.add_term(crate::supercore::Monomial::one(n), c * x);
            }
        }
        table.set(*i, *j, p, universe);
    }
    table
}

/// Derivatives of `f` keyed by variable: right derivatives if `right`, else left.
fn derivatives(f: &SuperPoly, u: &Universe, right: bool) -> BTreeMap<usize, SuperPoly> {
    let mut out: BTreeMap<usize, SuperPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        for v in 0..m.len() {
            let d = if right { m.right_derivative(v, u) } else { m.left_derivative(v, u) };
            if let Some((k, dm)) = d {
                out.entry(v).or_default().add_term(dm, c * Q::from_integer(k.into()));
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: [String; 3],
    pub residual: String,
}

/// Constant generator brackets at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonBivector {
    pub matrix: Matrix,
    pub parities: Vec<Parity>,
}

impl PoissonBivector {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// Checks the parity block structure and (super)symmetry.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let a = &self.matrix[i][j];
                let b = &self.matrix[j][i];
                match (self.parities[i], self.parities[j]) {
                    (Parity::Even, Parity::Even) if *a != -b.clone() => {
                        return Err(Error::Validation(format!("even block not antisymmetric at ({i},{j})")))
                    }
                    (Parity::Odd, Parity::Odd) if a != b => {
                        return Err(Error::Validation(format!("odd block not symmetric at ({i},{j})")))
                    }
                    (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) if !a.is_zero() => {
                        return Err(Error::Validation(format!("mixed block nonzero at ({i},{j})")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// `Π(u, v) = u^T Π v` for coefficient vectors.
    pub fn pairing(&self, u: &[Q], v: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() && !self.matrix[i][j].is_zero() {
                    s += ui * &self.matrix[i][j] * vj;
                }
            }
        }
        s
    }

    pub fn vector_parity(&self, v: &[Q]) -> Result<Parity> {
        let mut seen: Option<Parity> = None;
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
}

/// One block of a Darboux basis of `V`, given as coefficient vectors over generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymplecticItem {
    /// Even `f, g` with `Π(f, g) = 1`.
    EvenPair(Vec<Q>, Vec<Q>),
    /// Odd `h` with `Π(h, h) = 1`.
    OddSelf(Vec<Q>),
    /// Odd `f, g` with `Π(f, g) = 1` and `Π(f, f) = Π(g, g) = 0`.
    OddPair(Vec<Q>, Vec<Q>),
}

impl SymplecticItem {
    pub fn vectors(&self) -> Vec<&Vec<Q>> {
        match self {
            SymplecticItem::EvenPair(f, g) | SymplecticItem::OddPair(f, g) => vec![f, g],
            SymplecticItem::OddSelf(h) => vec![h],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymplecticSubspace {
    pub items: Vec<SymplecticItem>,
    /// Remaining basis vectors, Π-orthogonal to every item.
    pub complement: Vec<Vec<Q>>,
}

impl SymplecticSubspace {
    /// `(even, odd)` dimension of `V`.
    pub fn dims(&self) -> (usize, usize) {
        let mut d = (0, 0);
        for it in &self.items {
            match it {
                SymplecticItem::EvenPair(..) => d.0 += 2,
                SymplecticItem::OddSelf(_) => d.1 += 1,
                SymplecticItem::OddPair(..) => d.1 += 2,
            }
        }
        d
    }

    /// Checks the Darboux pairings and orthogonality exactly.
    pub fn verify(&self, pi: &PoissonBivector) -> Result<()> {
        let mut vs: Vec<&Vec<Q>> = Vec::new();
        for it in &self.items {
            let ok = match it {
                SymplecticItem::EvenPair(f, g) => pi.pairing(f, g).is_one(),
                SymplecticItem::OddSelf(h) => pi.pairing(h, h).is_one(),
                SymplecticItem::OddPair(f, g) => {
                    pi.pairing(f, g).is_one() && pi.pairing(f, f).is_zero() && pi.pairing(g, g).is_zero()
                }
            };
            if !ok {
                return Err(Error::DegenerateSubspace);
            }
            vs.extend(it.vectors());
        }
        for (a, it) in self.items.iter().enumerate() {
            for (b, other) in self.items.iter().enumerate() {
                if a == b {
                    continue;
                }
                for x in it.vectors() {
                    for y in other.vectors() {
                        if !pi.pairing(x, y).is_zero() {
                            return Err(Error::DegenerateSubspace);
                        }
                    }
                }
            }
        }
        for c in &self.complement {
            for v in &vs {
                if !pi.pairing(c, v).is_zero() {
                    return Err(Error::DegenerateSubspace);
                }
            }
        }
        Ok(())
    }
}

fn axpy(y: &mut [Q], a: &Q, x: &[Q]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn scaled(x: &[Q], a: &Q) -> Vec<Q> {
    x.iter().map(|v| v * a).collect()
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Maximal subspace on which `Π` is nondegenerate, with a Darboux basis.
///
/// Parity-blocked elimination, pivoting on the lowest index with a nonzero pairing.
pub fn find_symplectic_subspace(pi: &PoissonBivector) -> Result<SymplecticSubspace> {
    eliminate(pi, &[])
}

/// Symplectic subspace `V = m ⊕ m*` built by pivoting on the vectors of `m` first.
///
/// `m` must be Π-isotropic; each of its vectors is paired with the lowest-index
/// remaining partner outside `m`. Self-paired odd directions stay in the complement.
pub fn slice_subspace(pi: &PoissonBivector, m: &[usize]) -> Result<SymplecticSubspace> {
    let sub = eliminate(pi, m)?;
    if sub.items.len() != m.len() {
        return Err(Error::DegenerateSubspace);
    }
    Ok(sub)
}

fn eliminate(pi: &PoissonBivector, m: &[usize]) -> Result<SymplecticSubspace> {
    let n = pi.dim();
    let slice = !m.is_empty();
    let mut items = Vec::new();
    let mut complement = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        // (vector, is_m) in index order.
        let mut rest: Vec<(Vec<Q>, bool)> =
            (0..n).filter(|&i| pi.parities[i] == parity).map(|i| (unit(n, i), m.contains(&i))).collect();
        loop {
            let pivot = if slice {
                rest.iter().position(|(_, is_m)| *is_m)
            } else {
                rest.iter().position(|(v, _)| rest.iter().any(|(w, _)| !pi.pairing(v, w).is_zero()))
            };
            let Some(p) = pivot else { break };
            let (u, _) = rest.remove(p);
            let self_pair = pi.pairing(&u, &u);
            if !slice && !self_pair.is_zero() {
                // Odd self-paired direction.
                let s = rational_sqrt(&self_pair).ok_or_else(|| Error::IrrationalNormalization(format_rational(&self_pair)))?;
                let h = scaled(&u, &(Q::one() / s));
                for (v, _) in rest.iter_mut() {
                    let c = -pi.pairing(v, &h);
                    axpy(v, &c, &h);
                }
                items.push(SymplecticItem::OddSelf(h));
                continue;
            }
            if slice && !self_pair.is_zero() {
                return Err(Error::Validation("m is not isotropic".into()));
            }
            let q = rest
                .iter()
                .position(|(w, is_m)| !(slice && *is_m) && !pi.pairing(&u, w).is_zero())
                .ok_or(Error::DegenerateSubspace)?;
            let (w, _) = rest.remove(q);
            let c = pi.pairing(&u, &w);
            let item = match parity {
                Parity::Even => {
                    let f = u;
                    let g = scaled(&w, &(Q::one() / &c));
                    for (v, _) in rest.iter_mut() {
                        let a = -pi.pairing(v, &g);
                        let b = pi.pairing(v, &f);
                        axpy(v, &a, &f);
                        axpy(v, &b, &g);
                    }
                    SymplecticItem::EvenPair(f, g)
                }
                Parity::Odd => {
                    let mut w = w;
                    let ww = pi.pairing(&w, &w);
                    axpy(&mut w, &(-ww / (Q::from_integer(2.into()) * &c)), &u);
                    let f = u;
                    let g = scaled(&w, &(Q::one() / &c));
                    for (v, _) in rest.iter_mut() {
                        let a = -pi.pairing(v, &g);
                        let b = -pi.pairing(v, &f);
                        axpy(v, &a, &f);
                        axpy(v, &b, &g);
                    }
                    SymplecticItem::OddPair(f, g)
                }
            };
            items.push(item);
        }
        complement.extend(rest.into_iter().map(|(v, _)| v));
    }
    let sub = SymplecticSubspace { items, complement };
    sub.verify(pi)?;
    Ok(sub)
}

/// Linear element `sum_i v_i x_i` as an exact series.
pub fn linear_element(v: &[Q], u: &Universe) -> TruncatedSeries {
    let mut coeffs = v.to_vec();
    coeffs.resize(u.len(), Q::zero());
    TruncatedSeries { poly: SuperPoly::linear(u.len(), &coeffs, Q::zero()), order: EXACT }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn plane() -> PoissonAlgebra {
        let u = Universe::from_spec(&[("p", Parity::Even, 1), ("q", Parity::Even, 1)]);
        PoissonAlgebra::symplectic(u, &[(0, 1, q(1))], -2).unwrap()
    }

    #[test]
    fn leibniz_on_the_plane() {
        let a = plane();
        let u = a.universe().clone();
        let p = TruncatedSeries::var(0, &u);
        let qv = TruncatedSeries::var(1, &u);
        let q2 = qv.mul(&qv, &u);
        assert_eq!(a.bracket(&p, &q2).unwrap(), qv.scale(&q(2)));
        let ad = a.ad_op(&p);
        assert_eq!(ad(&ad(&q2).unwrap()).unwrap(), TruncatedSeries::constant(q(2), &u));
    }

    #[test]
    fn bivector_of_plane_is_omega() {
        let a = plane();
        let pi = a.bivector_at(&[q(0), q(0)]).unwrap();
        assert_eq!(pi.matrix, vec![vec![q(0), q(1)], vec![q(-1), q(0)]]);
        let v = find_symplectic_subspace(&pi).unwrap();
        assert_eq!(v.dims(), (2, 0));
    }

    #[test]
    fn zero_bivector_gives_zero_subspace() {
        let pi = PoissonBivector { matrix: vec![vec![q(0); 2]; 2], parities: vec![Parity::Even, Parity::Odd] };
        let v = find_symplectic_subspace(&pi).unwrap();
        assert_eq!(v.dims(), (0, 0));
        assert_eq!(v.complement.len(), 2);
    }

    #[test]
    fn odd_block_pairs_and_self_pairs() {
        let parities = vec![Parity::Odd; 3];
        let matrix = vec![vec![q(0), q(2), q(0)], vec![q(2), q(3), q(0)], vec![q(0), q(0), q(4)]];
        let pi = PoissonBivector { matrix, parities };
        let v = find_symplectic_subspace(&pi).unwrap();
        assert_eq!(v.dims(), (0, 3));
        assert!(matches!(v.items[0], SymplecticItem::OddPair(..)));
        assert!(matches!(v.items[1], SymplecticItem::OddSelf(..)));
    }

    #[test]
    fn irrational_self_pairing_is_reported() {
        let pi = PoissonBivector { matrix: vec![vec![q(2)]], parities: vec![Parity::Odd] };
        assert!(matches!(find_symplectic_subspace(&pi), Err(Error::IrrationalNormalization(_))));
    }
}
