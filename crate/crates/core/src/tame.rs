//! Explicit presentation of the bi-complex of a tame bi-arrangement as a
//! subquotient of `Λ(e_1, …, e_l) ⊗ Λ(f_1^∨, …, f_m^∨)`.
//!
//! Relations come from circuits whose stratum is colored λ, co-relations
//! (linear functionals) from circuits colored μ. Each graded piece is
//! realized as `ann(C) / (ann(C) ∩ R)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::arrangement::{ArrangementError, BiArrangement, Circuit};
use crate::bicomplex::OSBicomplex;
use crate::exactness::check_tameness;
use crate::linalg::{coordinates_in_span, kernel_basis, quotient_structure, QuotientStructure, Rational, RationalMatrix, Subspace};
use crate::mask::{merge_sign, IndexMask};
use crate::os_algebra::boundary_terms;
use crate::stratification::{Color, Stratification};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TameError {
    #[error("the bi-arrangement is not tame (stratum {0})")]
    NotTame(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// First disagreement found by [`compare_presentations`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{what} differs at {stratum} in bidegree ({i},{j}): {left} vs {right}")]
pub struct PresentationMismatch {
    pub stratum: String,
    pub i: usize,
    pub j: usize,
    pub what: String,
    pub left: usize,
    pub right: usize,
}

/// Graded piece `(i, j, S)`: monomials `e_I ⊗ f_J^∨` with `|I| = i`,
/// `|J| = j` and `I ∪ J` spanning the stratum `S`.
#[derive(Clone, Debug)]
struct Piece {
    monomials: Vec<(IndexMask, IndexMask)>,
    index: HashMap<(IndexMask, IndexMask), usize>,
    relations: Vec<Vec<Rational>>,
    corelations: Vec<Vec<Rational>>,
    annihilator: Subspace,
    quotient: QuotientStructure,
}

impl Piece {
    fn new() -> Self {
        Piece {
            monomials: Vec::new(),
            index: HashMap::new(),
            relations: Vec::new(),
            corelations: Vec::new(),
            annihilator: Subspace::zero(0),
            quotient: QuotientStructure {
                projection: RationalMatrix::zeros(0, 0),
                section: RationalMatrix::zeros(0, 0),
            },
        }
    }

    fn dim(&self) -> usize {
        self.quotient.projection.rows()
    }

    fn finish(&mut self) {
        let n = self.monomials.len();
        let c = RationalMatrix::from_rows(n, self.corelations.clone());
        let ann = kernel_basis(&c);
        let rel = Subspace::span_of(n, &self.relations);
        let meet = ann.intersection(&rel);
        let rows: Vec<Vec<Rational>> = (0..meet.dim())
            .map(|r| coordinates_in_span(&ann, meet.basis().row(r)).expect("intersection lies in the annihilator"))
            .collect();
        let inner = Subspace::span_of(ann.dim(), &rows);
        self.quotient = quotient_structure(ann.dim(), &inner).expect("matching ambient dimension");
        self.annihilator = ann;
    }

    /// Ambient vector of the `k`-th basis element of the subquotient.
    fn lift(&self, k: usize) -> Vec<Rational> {
        let coeffs = self.quotient.section.column(k);
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (r, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, b) in v.iter_mut().zip(self.annihilator.basis().row(r)) {
                *slot += c * b;
            }
        }
        v
    }

    /// Class of an ambient vector, which must lie in the annihilator.
    fn project(&self, v: &[Rational]) -> Vec<Rational> {
        let coords = coordinates_in_span(&self.annihilator, v).expect("differentials preserve the co-relations");
        self.quotient.projection.mul_vec(&coords)
    }
}

type Key = (usize, usize, usize);

#[derive(Clone, Debug)]
pub struct TameAlgebra {
    strat: Stratification,
    pieces: BTreeMap<Key, Piece>,
    dims: Vec<Vec<usize>>,
    dprime: HashMap<(usize, usize), Vec<RationalMatrix>>,
    ddouble: HashMap<(usize, usize), Vec<RationalMatrix>>,
}

fn sign(e: i64) -> Rational {
    Rational::from_integer(e.into())
}

/// `d^∨ f_J^∨ = Σ_{j∉J} ± f_{J∪j}^∨`, the transpose of `d`.
fn coboundary_terms(j: IndexMask, universe: IndexMask) -> Vec<(i64, IndexMask)> {
    universe
        .difference(j)
        .iter()
        .map(|x| (if j.rank_of(x).is_multiple_of(2) { 1 } else { -1 }, j.with(x)))
        .collect()
}

/// Builds the presentation after checking tameness.
pub fn build_tame_presentation(biarr: &BiArrangement) -> Result<TameAlgebra, TameError> {
    let report = check_tameness(biarr)?;
    if let Some(bad) = report.strata.iter().find(|s| !s.tame) {
        return Err(TameError::NotTame(bad.label.clone()));
    }
    let circuits = biarr.circuits()?;
    Ok(TameAlgebra::with_circuits(biarr, &circuits))
}

impl TameAlgebra {
    /// Presentation built from the given circuits, without any tameness check.
    pub fn with_circuits(biarr: &BiArrangement, circuits: &[Circuit]) -> TameAlgebra {
        let poset = biarr.poset();
        let strat = poset.stratification().clone();
        let k = biarr.forms().len();
        let lambda: IndexMask = (0..k).filter(|&h| biarr.forms()[h].side == Color::Lambda).collect();
        let mu: IndexMask = (0..k).filter(|&h| biarr.forms()[h].side == Color::Mu).collect();

        let mut flat_cache: HashMap<IndexMask, usize> = HashMap::new();
        let mut flat = |m: IndexMask| *flat_cache.entry(m).or_insert_with(|| poset.stratum_of(m));

        let mut pieces: BTreeMap<Key, Piece> = BTreeMap::new();
        for i_set in lambda.subsets() {
            for j_set in mu.subsets() {
                let key = (i_set.len(), j_set.len(), flat(i_set.union(j_set)));
                let p = pieces.entry(key).or_insert_with(Piece::new);
                p.index.insert((i_set, j_set), p.monomials.len());
                p.monomials.push((i_set, j_set));
            }
        }

        for c in circuits {
            let Some(color) = biarr.color(poset.stratum_of(c.support)) else { continue };
            let ci = c.support.intersection(lambda);
            let cj = c.support.intersection(mu);
            match color {
                Color::Lambda if !ci.is_empty() => {
                    // (e_K ∧ d(e_I)) ⊗ f_{J′}^∨ for J′ ⊇ J.
                    for extra in mu.difference(cj).subsets() {
                        let jp = cj.union(extra);
                        for kk in lambda.subsets() {
                            if kk.intersection(ci).len() > 1 {
                                continue;
                            }
                            let key = (kk.len() + ci.len() - 1, jp.len(), flat(kk.union(ci).union(jp)));
                            let p = pieces.get_mut(&key).expect("relations are homogeneous");
                            let mut v = vec![Rational::zero(); p.monomials.len()];
                            let mut any = false;
                            for (s, t) in boundary_terms(ci) {
                                if !kk.is_disjoint(t) {
                                    continue;
                                }
                                v[p.index[&(kk.union(t), jp)]] += sign(s * merge_sign(kk, t));
                                any = true;
                            }
                            if any {
                                p.relations.push(v);
                            }
                        }
                    }
                }
                Color::Mu if !cj.is_empty() => {
                    // e_{I′}^∨ ⊗ (f_K ∧ d(f_J)) for I′ ⊇ I.
                    for extra in lambda.difference(ci).subsets() {
                        let ip = ci.union(extra);
                        for kk in mu.subsets() {
                            if kk.intersection(cj).len() > 1 {
                                continue;
                            }
                            let key = (ip.len(), kk.len() + cj.len() - 1, flat(kk.union(cj).union(ip)));
                            let p = pieces.get_mut(&key).expect("co-relations are homogeneous");
                            let mut v = vec![Rational::zero(); p.monomials.len()];
                            let mut any = false;
                            for (s, t) in boundary_terms(cj) {
                                if !kk.is_disjoint(t) {
                                    continue;
                                }
                                v[p.index[&(ip, kk.union(t))]] += sign(s * merge_sign(kk, t));
                                any = true;
                            }
                            if any {
                                p.corelations.push(v);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        for p in pieces.values_mut() {
            p.finish();
        }

        let mut dims: Vec<Vec<usize>> = (0..strat.len()).map(|s| vec![0; strat.codim(s) + 1]).collect();
        for (&(i, j, s), p) in &pieces {
            if i + j == strat.codim(s) {
                dims[s][i] = p.dim();
            }
        }

        let mut dprime = HashMap::new();
        let mut ddouble = HashMap::new();
        for s in 0..strat.len() {
            let c = strat.codim(s);
            for &t in strat.up(s) {
                let mut dp = Vec::with_capacity(c + 1);
                let mut dd = Vec::with_capacity(c + 1);
                for i in 0..=c {
                    let j = c - i;
                    // d′ = d ⊗ id from (i, j, S) to (i − 1, j, T).
                    let rows = if i == 0 { 0 } else { dims[t][i - 1] };
                    let mut m = RationalMatrix::zeros(rows, dims[s][i]);
                    if i > 0 && dims[s][i] > 0 && rows > 0 {
                        let src = &pieces[&(i, j, s)];
                        let dst = &pieces[&(i - 1, j, t)];
                        for col in 0..src.dim() {
                            let v = src.lift(col);
                            let mut w = vec![Rational::zero(); dst.monomials.len()];
                            for (x, &(ii, jj)) in v.iter().zip(&src.monomials) {
                                if x.is_zero() {
                                    continue;
                                }
                                for (sg, term) in boundary_terms(ii) {
                                    if let Some(&r) = dst.index.get(&(term, jj)) {
                                        w[r] += x * sign(sg);
                                    }
                                }
                            }
                            for (r, y) in dst.project(&w).into_iter().enumerate() {
                                m.set(r, col, y);
                            }
                        }
                    }
                    dp.push(m);
                    // d″ = id ⊗ d^∨ from (i, j − 1, T) to (i, j, S).
                    let cols = if j == 0 { 0 } else { dims[t][i] };
                    let mut m2 = RationalMatrix::zeros(dims[s][i], cols);
                    if j > 0 && cols > 0 && dims[s][i] > 0 {
                        let src = &pieces[&(i, j - 1, t)];
                        let dst = &pieces[&(i, j, s)];
                        for col in 0..src.dim() {
                            let v = src.lift(col);
                            let mut w = vec![Rational::zero(); dst.monomials.len()];
                            for (x, &(ii, jj)) in v.iter().zip(&src.monomials) {
                                if x.is_zero() {
                                    continue;
                                }
                                for (sg, term) in coboundary_terms(jj, mu) {
                                    if let Some(&r) = dst.index.get(&(ii, term)) {
                                        w[r] += x * sign(sg);
                                    }
                                }
                            }
                            for (r, y) in dst.project(&w).into_iter().enumerate() {
                                m2.set(r, col, y);
                            }
                        }
                    }
                    dd.push(m2);
                }
                dprime.insert((s, t), dp);
                ddouble.insert((s, t), dd);
            }
        }
        TameAlgebra {
            strat,
            pieces,
            dims,
            dprime,
            ddouble,
        }
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strat
    }

    pub fn dim(&self, s: usize, i: usize) -> usize {
        self.dims[s].get(i).copied().unwrap_or(0)
    }

    pub fn dims(&self, s: usize) -> &[usize] {
        &self.dims[s]
    }

    /// Total dimension of the pieces spanned by dependent monomials; zero
    /// whenever the presentation is consistent.
    pub fn dependent_dim(&self) -> usize {
        self.pieces
            .iter()
            .filter(|(&(i, j, s), _)| i + j != self.strat.codim(s))
            .map(|(_, p)| p.dim())
            .sum()
    }

    pub fn dprime(&self, s: usize, t: usize, i: usize) -> &RationalMatrix {
        &self.dprime[&(s, t)][i]
    }

    pub fn ddouble(&self, s: usize, t: usize, i: usize) -> &RationalMatrix {
        &self.ddouble[&(s, t)][i]
    }

    /// Number of relation and co-relation vectors generated, summed over pieces.
    pub fn relation_counts(&self) -> (usize, usize) {
        self.pieces
            .values()
            .fold((0, 0), |(r, c), p| (r + p.relations.len(), c + p.corelations.len()))
    }

    /// Checks `d′d′ = 0`, `d″d″ = 0` and `d′d″ = d″d′` on the total bi-complex.
    pub fn is_bicomplex(&self) -> bool {
        let st = &self.strat;
        for s in 0..st.len() {
            let c = st.codim(s);
            for u in st.up2(s) {
                let common = st.common_up(s, u);
                for i in 2..=c {
                    let mut acc = RationalMatrix::zeros(self.dim(u, i - 2), self.dim(s, i));
                    for &t in &common {
                        acc = acc.add(&self.dprime(t, u, i - 1).mul(self.dprime(s, t, i)));
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
                for i in 0..=c.saturating_sub(2) {
                    let mut acc = RationalMatrix::zeros(self.dim(s, i), self.dim(u, i));
                    for &t in &common {
                        acc = acc.add(&self.ddouble(s, t, i).mul(self.ddouble(t, u, i)));
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Compares dimensions and the ranks of all `d′`, `d″` blocks.
pub fn compare_presentations(t: &TameAlgebra, bc: &OSBicomplex) -> Result<(), PresentationMismatch> {
    let st = bc.stratification();
    let mismatch = |s: usize, i: usize, what: &str, left: usize, right: usize| PresentationMismatch {
        stratum: st.label(s),
        i,
        j: st.codim(s) - i,
        what: what.to_string(),
        left,
        right,
    };
    for s in 0..st.len() {
        let c = st.codim(s);
        for i in 0..=c {
            if t.dim(s, i) != bc.dim(s, i) {
                return Err(mismatch(s, i, "dimension", t.dim(s, i), bc.dim(s, i)));
            }
        }
    }
    for s in 0..st.len() {
        let c = st.codim(s);
        for &u in st.up(s) {
            for i in 0..=c {
                let (a, b) = (t.dprime(s, u, i).rank(), bc.dprime(s, u, i).rank());
                if a != b {
                    return Err(mismatch(s, i, &format!("rank of d′ to {}", st.label(u)), a, b));
                }
                let (a, b) = (t.ddouble(s, u, i).rank(), bc.ddouble(s, u, i).rank());
                if a != b {
                    return Err(mismatch(s, i, &format!("rank of d″ from {}", st.label(u)), a, b));
                }
            }
        }
    }
    if t.dependent_dim() != 0 {
        return Err(PresentationMismatch {
            stratum: "dependent monomials".into(),
            i: 0,
            j: 0,
            what: "dimension".into(),
            left: t.dependent_dim(),
            right: 0,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{extreme_coloring, Coloring, LinearForm, StratumPoset};

    fn lam(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Lambda)
    }
    fn mu(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Mu)
    }

    fn two_one() -> BiArrangement {
        let p = StratumPoset::build(2, vec![lam(&[1, 0], "L1"), lam(&[0, 1], "L2"), mu(&[1, -1], "M1")]).unwrap();
        let mut c = Coloring::new();
        c.set(p.stratum(p.minimal()).hyperplanes, Color::Lambda);
        BiArrangement::from_poset(p, &c).unwrap()
    }

    #[test]
    fn small_example_matches_inductive_builder() {
        let b = two_one();
        let t = build_tame_presentation(&b).unwrap();
        let bc = OSBicomplex::build(&b).unwrap();
        compare_presentations(&t, &bc).unwrap();
        assert_eq!(t.dims(b.poset().minimal()), &[0, 1, 1]);
        assert!(t.is_bicomplex());
    }

    #[test]
    fn classical_presentation_without_corelations() {
        let forms = vec![lam(&[1, 0, 0], "a"), lam(&[0, 1, 0], "b"), lam(&[1, 1, 0], "c"), lam(&[1, 1, 1], "d")];
        let b = BiArrangement::constant(3, forms, Color::Lambda).unwrap();
        let t = build_tame_presentation(&b).unwrap();
        assert_eq!(t.relation_counts().1, 0);
        compare_presentations(&t, &OSBicomplex::build(&b).unwrap()).unwrap();
    }

    #[test]
    fn extreme_colorings_match() {
        let forms = vec![lam(&[1, 0, 0], "L1"), mu(&[0, 1, 0], "M1"), lam(&[1, 1, 0], "L2"), mu(&[1, 1, 1], "M2"), mu(&[0, 1, -1], "M3")];
        for side in [Color::Lambda, Color::Mu] {
            let p = StratumPoset::build(3, forms.clone()).unwrap();
            let c = extreme_coloring(&p, side);
            let b = BiArrangement::from_poset(p, &c).unwrap();
            let t = build_tame_presentation(&b).unwrap();
            compare_presentations(&t, &OSBicomplex::build(&b).unwrap()).unwrap();
            assert!(t.is_bicomplex());
        }
    }

    #[test]
    fn perturbed_relations_are_detected() {
        let b = two_one();
        let bc = OSBicomplex::build(&b).unwrap();
        let t = TameAlgebra::with_circuits(&b, &[]);
        assert!(compare_presentations(&t, &bc).is_err());
    }

    #[test]
    fn rejects_non_tame() {
        let p = StratumPoset::build(2, vec![lam(&[1, 0], "L1"), lam(&[0, 1], "L2"), lam(&[1, 1], "L3")]).unwrap();
        let mut c = Coloring::new();
        c.set(IndexMask::full(3), Color::Mu);
        let b = BiArrangement::from_poset(p, &c).unwrap();
        assert!(matches!(build_tame_presentation(&b), Err(TameError::NotTame(_))));
    }
}
