use num_traits::{One, Zero};

use super::algebra::LieSuperalgebraData;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poisson::PoissonAlgebra;
use crate::rational::{format_rational, rational_sqrt, Q};
use crate::starprod::StarAlgebra;
use crate::supercore::{GradedVariable, Parity, Universe};

/// Integer grade of each basis vector under `ad h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodGrading {
    pub grades: Vec<i32>,
}

impl GoodGrading {
    pub fn piece(&self, j: i32) -> Vec<usize> {
        (0..self.grades.len()).filter(|&i| self.grades[i] == j).collect()
    }

    /// Kazhdan weight `grade + 2`.
    pub fn kazhdan(&self, i: usize) -> i32 {
        self.grades[i] + 2
    }
}

/// Dynkin grading from the stored sl2-triple, or the zero grading when there is none.
///
/// `ad h` must be diagonal in the given basis with integer eigenvalues.
pub fn dynkin_grading(g: &LieSuperalgebraData) -> Result<GoodGrading> {
    let n = g.len();
    let Some([e, h, _]) = &g.triple else {
        return Ok(GoodGrading { grades: vec![0; n] });
    };
    let mut grades = Vec::with_capacity(n);
    for i in 0..n {
        let hx = g.bracket(h, &g.unit(i));
        if hx.iter().enumerate().any(|(k, c)| k != i && !c.is_zero()) {
            return Err(Error::Grading(format!("ad h is not diagonal on {}", g.names[i])));
        }
        let l = &hx[i];
        if !l.denom().is_one() {
            return Err(Error::Grading(format!("non-integral eigenvalue {} on {}", format_rational(l), g.names[i])));
        }
        let v: i64 = l.numer().try_into().map_err(|_| Error::Grading("eigenvalue out of range".into()))?;
        grades.push(v as i32);
    }
    let grading = GoodGrading { grades };
    check_goodness(g, &grading, e)?;
    Ok(grading)
}

/// `ad e : g(j) -> g(j+2)` is injective for `j <= -1` and surjective for `j >= -1`.
pub fn check_goodness(g: &LieSuperalgebraData, grading: &GoodGrading, e: &[Q]) -> Result<()> {
    let lo = *grading.grades.iter().min().unwrap_or(&0);
    let hi = *grading.grades.iter().max().unwrap_or(&0);
    if !e.iter().all(|c| c.is_zero()) {
        let he = grading.grades.iter().zip(e).filter(|(_, c)| !c.is_zero()).all(|(&gr, _)| gr == 2);
        if !he {
            return Err(Error::Grading("e is not of degree 2".into()));
        }
    }
    for j in lo..=hi {
        let src = grading.piece(j);
        let dst = grading.piece(j + 2);
        // Columns: images of the source basis in target coordinates.
        let m: Matrix = dst
            .iter()
            .map(|&t| src.iter().map(|&s| g.bracket(e, &g.unit(s))[t].clone()).collect())
            .collect();
        let r = if src.is_empty() || dst.is_empty() { 0 } else { linalg::rank(&m) };
        if j <= -1 && r != src.len() {
            return Err(Error::Grading(format!("ad e is not injective on degree {j}")));
        }
        if j >= -1 && r != dst.len() {
            return Err(Error::Grading(format!("ad e is not surjective from degree {j}")));
        }
    }
    Ok(())
}

/// `chi = (e, .)`, the pairing `chi([x, y])` on degree -1, a Lagrangian and the optional Θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiAndForm {
    pub chi: Vec<Q>,
    pub minus_one: Vec<usize>,
    /// Pairing matrix on `minus_one`, in that order.
    pub pairing: Matrix,
    /// Lagrangian, as basis indices of degree -1.
    pub lagrangian: Vec<usize>,
    /// Self-paired odd basis index with its pairing value.
    pub theta: Option<(usize, Q)>,
    /// Basis indices of `m`: degree `<= -2` and the Lagrangian.
    pub m: Vec<usize>,
}

/// Builds `chi` and the Lagrangian; `alternate` scans candidates from the highest index down.
pub fn build_chi(g: &LieSuperalgebraData, grading: &GoodGrading, alternate: bool) -> Result<ChiAndForm> {
    let n = g.len();
    let e = g.triple.as_ref().map(|t| t[0].clone()).unwrap_or_else(|| vec![Q::zero(); n]);
    let chi: Vec<Q> = (0..n).map(|i| g.form_value(&e, &g.unit(i))).collect();
    for (i, c) in chi.iter().enumerate() {
        if g.parities[i].is_odd() && !c.is_zero() {
            return Err(Error::Validation(format!("chi does not vanish on odd {}", g.names[i])));
        }
    }
    let pair = |a: usize, b: usize| -> Q {
        g.bracket_basis(a, b).iter().zip(&chi).fold(Q::zero(), |acc, (x, c)| acc + x * c)
    };
    let minus_one = grading.piece(-1);
    let pairing: Matrix = minus_one.iter().map(|&a| minus_one.iter().map(|&b| pair(a, b)).collect()).collect();
    if !minus_one.is_empty() && linalg::det(&pairing).is_zero() {
        return Err(Error::Validation("pairing on degree -1 is degenerate".into()));
    }
    let mut lagrangian = Vec::new();
    let mut theta = None;
    for parity in [Parity::Even, Parity::Odd] {
        let mut cands: Vec<usize> = minus_one.iter().copied().filter(|&i| g.parities[i] == parity).collect();
        if alternate {
            cands.reverse();
        }
        let target = cands.len() / 2;
        let mut l: Vec<usize> = Vec::new();
        for &c in &cands {
            if l.len() == target {
                break;
            }
            if pair(c, c).is_zero() && l.iter().all(|&x| pair(c, x).is_zero()) {
                l.push(c);
            }
        }
        if l.len() != target {
            return Err(Error::Validation("no Lagrangian spanned by basis vectors".into()));
        }
        if parity.is_odd() && cands.len() % 2 == 1 {
            let t = cands
                .iter()
                .copied()
                .find(|&c| !l.contains(&c) && l.iter().all(|&x| pair(c, x).is_zero()) && !pair(c, c).is_zero())
                .ok_or_else(|| Error::Validation("no self-paired odd direction".into()))?;
            theta = Some((t, pair(t, t)));
        }
        l.sort_unstable();
        lagrangian.extend(l);
    }
    let mut m: Vec<usize> = (0..n).filter(|&i| grading.grades[i] <= -2).collect();
    m.extend(lagrangian.iter().copied());
    m.sort_unstable();
    Ok(ChiAndForm { chi, minus_one, pairing, lagrangian, theta, m })
}

/// Everything both W-algebra constructions share: the adapted basis with `m` last,
/// Kazhdan weights, `chi` and the shifted Lie–Poisson algebra.
#[derive(Debug, Clone)]
pub struct WSetup {
    pub original: LieSuperalgebraData,
    pub grading: GoodGrading,
    pub chi_form: ChiAndForm,
    /// Adapted basis: adapted vector `k` is original vector `perm[k]`.
    pub perm: Vec<usize>,
    pub adapted: LieSuperalgebraData,
    pub weights: Vec<i32>,
    pub chi: Vec<Q>,
    /// Number of complement variables; `m` occupies the rest.
    pub n_complement: usize,
    /// Adapted index of Θ.
    pub theta: Option<usize>,
    pub universe: Universe,
}

impl WSetup {
    pub fn new(g: &LieSuperalgebraData, alternate: bool) -> Result<Self> {
        let grading = dynkin_grading(g)?;
        let chi_form = build_chi(g, &grading, alternate)?;
        let n = g.len();
        let mut perm: Vec<usize> = (0..n).filter(|i| !chi_form.m.contains(i)).collect();
        let n_complement = perm.len();
        perm.extend(chi_form.m.iter().copied());
        let adapted = g.permute(&perm)?;
        let weights: Vec<i32> = perm.iter().map(|&i| grading.kazhdan(i)).collect();
        let chi: Vec<Q> = perm.iter().map(|&i| chi_form.chi[i].clone()).collect();
        let theta = chi_form.theta.as_ref().and_then(|(t, _)| perm.iter().position(|p| p == t));
        let vars = (0..n)
            .map(|k| GradedVariable {
                id: k,
                name: adapted.names[k].clone(),
                parity: adapted.parities[k],
                weight: weights[k],
                adic_unit: true,
            })
            .collect();
        let universe = Universe::new(vars)?;
        Ok(WSetup { original: g.clone(), grading, chi_form, perm, adapted, weights, chi, n_complement, theta, universe })
    }

    pub fn len(&self) -> usize {
        self.adapted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adapted.is_empty()
    }

    pub fn is_m(&self, k: usize) -> bool {
        k >= self.n_complement
    }

    pub fn m_indices(&self) -> Vec<usize> {
        (self.n_complement..self.len()).collect()
    }

    /// Shifted Lie–Poisson algebra on the adapted coordinates, with weight shift -2.
    pub fn poisson(&self) -> Result<PoissonAlgebra> {
        PoissonAlgebra::lie_poisson(self.universe.clone(), &self.adapted.structure_list(), &self.chi, -2)
    }

    /// Homogenized enveloping algebra in shifted coordinates.
    pub fn star(&self) -> Result<StarAlgebra> {
        StarAlgebra::from_poisson(&self.poisson()?)
    }

    /// Θ normalized to pairing 1, when the pairing is a rational square.
    pub fn theta_scale(&self) -> Option<Q> {
        self.chi_form.theta.as_ref().and_then(|(_, c)| rational_sqrt(c)).map(|s| Q::one() / s)
    }
}
