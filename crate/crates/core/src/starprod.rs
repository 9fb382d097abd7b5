//! Star products by normal ordering, the quantum Darboux normalization, and the
//! Rees and ℏ-saturation utilities.

use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::darboux::{self, DarbouxChart};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poisson::{BracketAlgebra, BracketTable, PoissonAlgebra, SymplecticSubspace};
use crate::rational::Q;
use crate::supercore::{bracket_order, Monomial, Parity, SuperPoly, TruncatedSeries, Universe};

type TS = TruncatedSeries;

/// Normal-ordered algebra on generators plus a central `hbar`, with
/// `[x_i, x_j] = c_ij hbar^2` for `c_ij` of adic order at most one.
#[derive(Debug)]
pub struct StarAlgebra {
    universe: Universe,
    table: BracketTable,
    equiv_weight: i32,
    hbar: usize,
    cache: Mutex<HashMap<(Monomial, usize), SuperPoly>>,
}

impl Clone for StarAlgebra {
    fn clone(&self) -> Self {
        StarAlgebra {
            universe: self.universe.clone(),
            table: self.table.clone(),
            equiv_weight: self.equiv_weight,
            hbar: self.hbar,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

/// Appends a zero `hbar` exponent.
fn lift(p: &SuperPoly, n: usize) -> SuperPoly {
    p.map_monomials(|m| {
        let mut e = m.exponents().to_vec();
        e.resize(n, 0);
        Some((Q::one(), Monomial::from_exponents(&e)))
    })
}

impl StarAlgebra {
    /// Quantizes a Poisson algebra whose generator brackets are at most linear.
    pub fn from_poisson(p: &PoissonAlgebra) -> Result<Self> {
        let base = p.universe();
        if base.hbar().is_some() {
            return Err(Error::Validation("Poisson algebra already carries hbar".into()));
        }
        if p.table().max_entry_order(base) > 1 {
            return Err(Error::Validation("star products need brackets of adic order at most one".into()));
        }
        let universe = base.with_hbar();
        let n = universe.len();
        let mut table = BracketTable::new();
        for (&(i, j), v) in p.table().entries() {
            table.set(i, j, lift(v, n), &universe);
        }
        let hbar = universe.hbar().expect("hbar appended");
        Ok(StarAlgebra { universe, table, equiv_weight: p.equiv_weight(), hbar, cache: Mutex::new(HashMap::new()) })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn hbar(&self) -> usize {
        self.hbar
    }

    pub fn hbar_power(&self, k: u16) -> SuperPoly {
        let mut m = Monomial::one(self.universe.len());
        m.set_exp(self.hbar, k);
        SuperPoly::monomial(m, Q::one())
    }

    fn times_hbar(&self, p: &SuperPoly, k: u16) -> SuperPoly {
        if k == 0 {
            return p.clone();
        }
        let h = self.hbar;
        p.map_monomials(|m| {
            let mut m = m.clone();
            m.set_exp(h, m.exp(h) + k);
            Some((Q::one(), m))
        })
    }

    /// `m * x_j` for a monomial free of `hbar`.
    fn rmul_gen(&self, m: &Monomial, j: usize) -> SuperPoly {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(m.clone(), j)) {
            return hit.clone();
        }
        let out = self.rmul_gen_uncached(m, j);
        self.cache.lock().expect("cache lock").insert((m.clone(), j), out.clone());
        out
    }

    fn rmul_gen_uncached(&self, m: &Monomial, j: usize) -> SuperPoly {
        let u = &self.universe;
        let n = u.len();
        let top = (0..n).rev().find(|&i| i != self.hbar && m.exp(i) > 0);
        match top {
            Some(k) if k > j => {
                let mut rest = m.clone();
                rest.set_exp(k, m.exp(k) - 1);
                // x_k * x_j = ±x_j * x_k + [x_k, x_j]
                let sign = if u.is_odd(k) && u.is_odd(j) { -Q::one() } else { Q::one() };
                let mut out = SuperPoly::zero();
                for (mm, c) in self.rmul_gen(&rest, j).into_terms() {
                    out.add_assign(&self.rmul_gen_any(&mm, k).scale(&(c * &sign)));
                }
                let comm = self.table.get(k, j, u);
                out.add_assign(&self.times_hbar(&self.mul_mono_poly(&rest, &comm), 2));
                out
            }
            Some(k) if k == j && u.is_odd(j) => {
                let mut rest = m.clone();
                rest.set_exp(k, 0);
                // x_j * x_j = [x_j, x_j] / 2
                let half = Q::one() / Q::from_integer(2.into());
                let comm = self.table.get(j, j, u).scale(&half);
                self.times_hbar(&self.mul_mono_poly(&rest, &comm), 2)
            }
            _ => {
                let mut out = m.clone();
                out.set_exp(j, m.exp(j) + 1);
                SuperPoly::monomial(out, Q::one())
            }
        }
    }

    /// `m * x_j` for any monomial, factoring out `hbar`.
    fn rmul_gen_any(&self, m: &Monomial, j: usize) -> SuperPoly {
        let k = m.exp(self.hbar);
        if k == 0 {
            return self.rmul_gen(m, j);
        }
        let mut bare = m.clone();
        bare.set_exp(self.hbar, 0);
        self.times_hbar(&self.rmul_gen(&bare, j), k)
    }

    /// `m * p` for a monomial `m` and a polynomial `p`.
    fn mul_mono_poly(&self, m: &Monomial, p: &SuperPoly) -> SuperPoly {
        self.star_poly(&SuperPoly::monomial(m.clone(), Q::one()), p, u32::MAX)
    }

    /// Normal-ordered product of polynomials, dropping terms above `max_order`.
    pub fn star_poly(&self, a: &SuperPoly, b: &SuperPoly, max_order: u32) -> SuperPoly {
        let u = &self.universe;
        let mut out = SuperPoly::zero();
        for (mb, cb) in b.terms() {
            let ob = mb.order(u);
            if ob > max_order {
                continue;
            }
            let mut acc = a.filter(|m| m.order(u).saturating_add(ob) <= max_order);
            for j in 0..u.len() {
                if j == self.hbar {
                    continue;
                }
                for _ in 0..mb.exp(j) {
                    let mut next = SuperPoly::zero();
                    for (m, c) in acc.terms() {
                        next.add_assign(&self.rmul_gen_any(m, j).scale(c));
                    }
                    acc = next.truncate(u, max_order);
                }
            }
            out.add_assign(&self.times_hbar(&acc, mb.exp(self.hbar)).scale(cb).truncate(u, max_order));
        }
        out
    }

    pub fn star_mul(&self, a: &TS, b: &TS) -> TS {
        let u = &self.universe;
        let order = a.product_order(b, u);
        TS { poly: self.star_poly(&a.poly, &b.poly, order), order }
    }

    fn parity_parts(&self, a: &SuperPoly) -> [SuperPoly; 2] {
        let u = &self.universe;
        [a.filter(|m| m.parity(u) == Parity::Even), a.filter(|m| m.parity(u) == Parity::Odd)]
    }

    fn commutator_poly(&self, a: &SuperPoly, b: &SuperPoly, max_order: u32) -> SuperPoly {
        let pa = self.parity_parts(a);
        let pb = self.parity_parts(b);
        let mut out = SuperPoly::zero();
        for (i, x) in pa.iter().enumerate() {
            for (j, y) in pb.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let xy = self.star_poly(x, y, max_order);
                let yx = self.star_poly(y, x, max_order);
                out.add_assign(&if i == 1 && j == 1 { xy.add(&yx) } else { xy.sub(&yx) });
            }
        }
        out
    }

    /// Super-commutator `a * b - (-1)^{|a||b|} b * a`.
    pub fn star_commutator(&self, a: &TS, b: &TS) -> Result<TS> {
        let u = &self.universe;
        let order = bracket_order(a.order, b.low_nonconstant_order(u), 0)?
            .min(bracket_order(b.order, a.low_nonconstant_order(u), 0)?);
        Ok(TS { poly: self.commutator_poly(&a.poly, &b.poly, order), order })
    }

    /// Divides by `hbar^k`, failing if a smaller power is present.
    pub fn divide_hbar(&self, p: &SuperPoly, k: u16) -> Result<SuperPoly> {
        let h = self.hbar;
        let mut out = SuperPoly::zero();
        for (m, c) in p.terms() {
            if m.exp(h) < k {
                return Err(Error::NegativeHbarPower);
            }
            let mut m = m.clone();
            m.set_exp(h, m.exp(h) - k);
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// `[a, b] / hbar^2`, the bracket that reduces to the Poisson bracket at `hbar = 0`.
    pub fn qbracket(&self, a: &TS, b: &TS) -> Result<TS> {
        let u = &self.universe;
        let order = bracket_order(a.order, b.low_nonconstant_order(u), 2)?
            .min(bracket_order(b.order, a.low_nonconstant_order(u), 2)?);
        let comm = self.commutator_poly(&a.poly, &b.poly, order.saturating_add(2));
        Ok(TS::new(self.divide_hbar(&comm, 2)?, order, u))
    }

    /// Sets `hbar` to 0 or 1; the result keeps the same universe with `hbar` exponent 0.
    pub fn specialize_hbar(&self, a: &SuperPoly, value: u8) -> SuperPoly {
        specialize_hbar(a, self.hbar, value)
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }
}

impl BracketAlgebra for StarAlgebra {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn mul(&self, a: &TS, b: &TS) -> Result<TS> {
        Ok(self.star_mul(a, b))
    }

    fn bracket(&self, a: &TS, b: &TS) -> Result<TS> {
        self.qbracket(a, b)
    }

    fn equiv_weight(&self) -> i32 {
        self.equiv_weight
    }
}

/// Sets variable `hbar` to 0 or 1.
pub fn specialize_hbar(a: &SuperPoly, hbar: usize, value: u8) -> SuperPoly {
    a.map_monomials(|m| {
        if m.exp(hbar) > 0 && value == 0 {
            return None;
        }
        let mut m = m.clone();
        m.set_exp(hbar, 0);
        Some((Q::one(), m))
    })
}

/// Drops the trailing `hbar` variable after specializing it to 0.
pub fn classical_part(a: &TS, s: &StarAlgebra, base: &Universe) -> TS {
    let p = specialize_hbar(&a.poly, s.hbar, 0).map_monomials(|m| {
        Some((Q::one(), Monomial::from_exponents(&m.exponents()[..base.len()])))
    });
    TS::new(p, a.order, base)
}

/// Quantum even correction: `[f, g] = hbar^2` through order `n`.
pub fn quantum_even_correct(s: &StarAlgebra, f: &TS, g: &TS, n: u32, work: u32) -> Result<TS> {
    darboux::even_correct(s, f, g, n, work)
}

/// Quantum odd normalization: `[h, h] = hbar^2`.
pub fn quantum_odd_correct(s: &StarAlgebra, f: &TS, g: Option<&TS>, work: u32) -> Result<TS> {
    darboux::odd_normalize(s, f, g, work)
}

pub fn quantum_odd_flatten(s: &StarAlgebra, f: &TS, g: &TS, work: u32) -> Result<(TS, TS)> {
    darboux::odd_pair_flatten(s, f, g, work)
}

/// Projection onto the joint ∗-centralizer of an even pair with `[f, g] = hbar^2`.
pub fn quantum_split_project(s: &StarAlgebra, a: &TS, f: &TS, g: &TS, work: u32) -> Result<TS> {
    darboux::even_split_project(s, a, f, g, work)
}

/// Chart whose relations are ∗-commutators divided by `hbar^2`.
pub type QuantumChart = DarbouxChart;

pub fn quantum_darboux(s: &StarAlgebra, v: &SymplecticSubspace, n: u32, work: u32) -> Result<QuantumChart> {
    darboux::equivariant_darboux(s, v, n, work)
}

/// Chart elements at `hbar = 0`, on the classical universe.
pub fn chart_at_hbar_zero(chart: &QuantumChart, s: &StarAlgebra, base: &Universe) -> DarbouxChart {
    let cl = |x: &TS| classical_part(x, s, base);
    let coords = chart
        .coords
        .iter()
        .map(|c| match c {
            darboux::ChartItem::EvenPair(f, g) => darboux::ChartItem::EvenPair(cl(f), cl(g)),
            darboux::ChartItem::OddSelf(h) => darboux::ChartItem::OddSelf(cl(h)),
            darboux::ChartItem::OddPair(f, g) => darboux::ChartItem::OddPair(cl(f), cl(g)),
        })
        .collect();
    DarbouxChart { coords, centralizer: chart.centralizer.iter().map(cl).collect(), order: chart.order }
}

/// Rees map `f ℏ^j -> f ℏ^{i+j}` for `f` homogeneous of weight `i`.
pub fn rees_map(components: &[(SuperPoly, u16)], u: &Universe) -> Result<SuperPoly> {
    let h = u.hbar().ok_or_else(|| Error::Validation("universe has no hbar".into()))?;
    let mut out = SuperPoly::zero();
    for (f, j) in components {
        if f.terms().any(|(m, _)| m.exp(h) > 0) {
            return Err(Error::Validation("Rees components must be free of hbar".into()));
        }
        let ws = f.weights(u);
        if ws.len() > 1 {
            return Err(Error::NotHomogeneous(ws));
        }
        let Some(&w) = ws.first() else { continue };
        if w < 0 {
            return Err(Error::NotInReesImage);
        }
        let k = w as u16 + j;
        out.add_assign(&f.map_monomials(|m| {
            let mut m = m.clone();
            m.set_exp(h, k);
            Some((Q::one(), m))
        }));
    }
    Ok(out)
}

/// Inverse of [`rees_map`] on its image: components grouped by `(weight, j)`.
pub fn rees_inverse(p: &SuperPoly, u: &Universe) -> Result<Vec<(SuperPoly, u16)>> {
    let h = u.hbar().ok_or_else(|| Error::Validation("universe has no hbar".into()))?;
    let mut groups: std::collections::BTreeMap<(i32, u16), SuperPoly> = Default::default();
    for (m, c) in p.terms() {
        let k = m.exp(h);
        let mut bare = m.clone();
        bare.set_exp(h, 0);
        let w = bare.weight(u);
        if w < 0 || (k as i32) < w {
            return Err(Error::NotInReesImage);
        }
        groups.entry((w, k - w as u16)).or_default().add_term(bare, c.clone());
    }
    Ok(groups.into_iter().map(|((_, j), f)| (f, j)).collect())
}

/// Homogenization of a filtered element of degree `deg`: `x^a -> x^a hbar^{deg - weight(a)}`.
pub fn homogenize(f: &SuperPoly, deg: i32, u: &Universe) -> Result<SuperPoly> {
    let h = u.hbar().ok_or_else(|| Error::Validation("universe has no hbar".into()))?;
    let mut out = SuperPoly::zero();
    for (m, c) in f.terms() {
        let w = m.weight(u);
        if w > deg {
            return Err(Error::NotInReesImage);
        }
        let mut m = m.clone();
        m.set_exp(h, m.exp(h) + (deg - w) as u16);
        out.add_term(m, c.clone());
    }
    Ok(out)
}

/// Weight-bounded span of monomials in homogeneous generators of positive weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePart {
    pub weights: Vec<i32>,
    pub parities: Vec<Parity>,
    /// Number of generator monomials of each weight `0..=n`.
    pub graded_dims: Vec<usize>,
}

impl FinitePart {
    /// Cumulative dimensions `dim F_k` for `k = 0..=n`.
    pub fn filtered_dims(&self) -> Vec<usize> {
        self.graded_dims
            .iter()
            .scan(0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    }
}

/// Counts supercommutative monomials of each weight `0..=n` in generators of positive weight.
pub fn monomial_counts(weights: &[i32], parities: &[Parity], n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n + 1];
    counts[0] = 1;
    for (&w, p) in weights.iter().zip(parities) {
        let w = w.max(1) as usize;
        let mut next = vec![0usize; n + 1];
        for (d, &c) in counts.iter().enumerate() {
            let mut e = d;
            while e <= n {
                next[e] += c;
                if p.is_odd() && e > d {
                    break;
                }
                e += w;
            }
        }
        counts = next;
    }
    counts
}

/// The ℂ×-finite part generated by homogeneous centralizer generators, up to weight `n`.
pub fn cx_finite_part(gens: &[TS], n: u32, u: &Universe) -> Result<FinitePart> {
    let mut weights = Vec::new();
    let mut parities = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let ws = g.poly.weights(u);
        let w = match ws.as_slice() {
            [w] => *w,
            [] => continue,
            _ => return Err(Error::NotHomogeneous(ws)),
        };
        if w <= 0 {
            return Err(Error::NonpositiveWeight { name: format!("generator {i}"), weight: w });
        }
        weights.push(w);
        parities.push(g.parity(u)?);
    }
    let graded_dims = monomial_counts(&weights, &parities, n as usize);
    Ok(FinitePart { weights, parities, graded_dims })
}

/// Supercommutative monomials of exact weight `d` in the given universe.
fn monomials_of_weight(u: &Universe, d: i32) -> Vec<Monomial> {
    fn rec(u: &Universe, i: usize, left: i32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == u.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(cur));
            }
            return;
        }
        let w = u.weight(i);
        let max = if u.is_odd(i) { 1 } else { (left / w.max(1)) as u16 };
        for e in 0..=max {
            let used = e as i32 * w;
            if used > left {
                break;
            }
            cur[i] = e;
            rec(u, i + 1, left - used, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; u.len()];
    rec(u, 0, d, &mut cur, &mut out);
    out
}

/// Degree-`d` piece of the ideal generated by `gens` in the supercommutative ring, as a row basis.
fn ideal_piece(gens: &[SuperPoly], u: &Universe, d: i32, basis: &[Monomial]) -> linalg::Matrix {
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        let Some(&wg) = g.weights(u).first() else { continue };
        for m in monomials_of_weight(u, d - wg) {
            let p = SuperPoly::monomial(m, Q::one()).mul(g, u, u32::MAX);
            if p.is_zero() {
                continue;
            }
            let mut row = vec![Q::zero(); basis.len()];
            for (mm, c) in p.terms() {
                row[index[mm]] = c.clone();
            }
            rows.push(row);
        }
    }
    row_basis(rows)
}

fn row_basis(rows: Vec<Vec<Q>>) -> linalg::Matrix {
    let mut m = rows;
    let pivots = linalg::rref(&mut m);
    m.truncate(pivots.len());
    m
}

fn in_row_space(basis: &linalg::Matrix, v: &[Q]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let mut m = basis.clone();
    let r0 = linalg::rank(&m);
    m.push(v.to_vec());
    linalg::rank(&m) == r0
}

/// Saturates a homogeneous ideal in a supercommutative ring with central `hbar` of weight 1:
/// adds every `x` of weight `<= n` with `hbar x` in the ideal, until stable.
pub fn hbar_saturate(gens: &[SuperPoly], n: i32, u: &Universe) -> Result<Vec<SuperPoly>> {
    let h = u.hbar().ok_or_else(|| Error::Validation("universe has no hbar".into()))?;
    for g in gens {
        if g.weights(u).len() > 1 {
            return Err(Error::NotHomogeneous(g.weights(u)));
        }
    }
    if (0..u.len()).any(|i| u.weight(i) <= 0) {
        return Err(Error::Validation("saturation needs positive weights".into()));
    }
    let mut out: Vec<SuperPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    loop {
        let mut added = false;
        for d in 0..n {
            let lower = monomials_of_weight(u, d);
            let upper = monomials_of_weight(u, d + 1);
            if lower.is_empty() {
                continue;
            }
            let up_index: HashMap<&Monomial, usize> = upper.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let ideal_up = ideal_piece(&out, u, d + 1, &upper);
            let ideal_low = ideal_piece(&out, u, d, &lower);
            // Columns: coefficients of x in the lower basis, then of the ideal rows.
            // Solve hbar * x = sum c_r row_r.
            let nl = lower.len();
            let nr = ideal_up.len();
            let mut sys = vec![vec![Q::zero(); nl + nr]; upper.len()];
            for (i, m) in lower.iter().enumerate() {
                let mut mh = m.clone();
                mh.set_exp(h, m.exp(h) + 1);
                sys[up_index[&mh]][i] = Q::one();
            }
            for (r, row) in ideal_up.iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    sys[k][nl + r] = -c.clone();
                }
            }
            for sol in linalg::nullspace(&sys, nl + nr) {
                let x: Vec<Q> = sol[..nl].to_vec();
                if in_row_space(&ideal_low, &x) {
                    continue;
                }
                let mut p = SuperPoly::zero();
                for (i, c) in x.iter().enumerate() {
                    p.add_term(lower[i].clone(), c.clone());
                }
                out.push(p);
                added = true;
                break;
            }
            if added {
                break;
            }
        }
        if !added {
            return Ok(out);
        }
    }
}

/// True when `x` lies in the weight-homogeneous ideal generated by `gens`.
pub fn ideal_contains(gens: &[SuperPoly], x: &SuperPoly, u: &Universe) -> bool {
    let ws = x.weights(u);
    ws.iter().all(|&d| {
        let basis = monomials_of_weight(u, d);
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in x.terms() {
            if m.weight(u) == d {
                v[index[m]] = c.clone();
            }
        }
        in_row_space(&ideal_piece(gens, u, d, &basis), &v)
    })
}
