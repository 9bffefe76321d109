//! The classical Orlik–Solomon algebra of a central arrangement, graded by
//! strata, with the differential `d(e_i) = 1`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::arrangement::{ArrangementError, StratumPoset, DEFAULT_CIRCUIT_CAP};
use crate::linalg::{complex_homology, quotient_structure, QuotientStructure, Rational, RationalMatrix, Subspace};
use crate::mask::{lex_cmp, merge_sign, IndexMask};
use crate::stratification::Stratification;

/// Degree-`codim S` part of the algebra supported on the stratum `S`.
#[derive(Clone, Debug)]
pub struct OSPiece {
    /// Independent monomials `e_I` whose hyperplanes cut out `S`.
    pub monomials: Vec<IndexMask>,
    /// Relations, as a subspace of the span of `monomials`.
    pub relations: Subspace,
    pub quotient: QuotientStructure,
}

impl OSPiece {
    pub fn dim(&self) -> usize {
        self.quotient.projection.rows()
    }
}

#[derive(Clone, Debug)]
pub struct OSAlgebra {
    strat: Stratification,
    pieces: Vec<OSPiece>,
    diffs: HashMap<(usize, usize), RationalMatrix>,
}

/// `∂e_I = Σ_k (−1)^{k−1} e_{I∖i_k}`, as `(sign, monomial)` pairs.
pub fn boundary_terms(i: IndexMask) -> Vec<(i64, IndexMask)> {
    i.iter()
        .enumerate()
        .map(|(k, h)| (if k % 2 == 0 { 1 } else { -1 }, i.without(h)))
        .collect()
}

/// Stratum of every independent hyperplane set; dependent sets are absent.
pub(crate) fn independent_flats(poset: &StratumPoset) -> HashMap<IndexMask, usize> {
    let k = poset.forms().len();
    let mut out = HashMap::new();
    for sub in IndexMask::full(k).subsets() {
        if sub.len() <= poset.ambient_dim() && poset.is_independent(sub) {
            out.insert(sub, poset.stratum_of(sub));
        }
    }
    out
}

impl OSAlgebra {
    pub fn build(poset: &StratumPoset) -> Result<Self, ArrangementError> {
        let circuits = poset.circuits(DEFAULT_CIRCUIT_CAP.max(poset.forms().len()))?;
        let flats = independent_flats(poset);
        let strat = poset.stratification().clone();
        let mut monomials: Vec<Vec<IndexMask>> = vec![Vec::new(); strat.len()];
        for (&m, &s) in &flats {
            monomials[s].push(m);
        }
        for list in &mut monomials {
            list.sort_by(|a, b| lex_cmp(*a, *b));
        }

        let mut pieces = Vec::with_capacity(strat.len());
        for s in 0..strat.len() {
            let basis = &monomials[s];
            let pos: HashMap<IndexMask, usize> = basis.iter().enumerate().map(|(p, m)| (*m, p)).collect();
            let hs = strat.stratum(s).divisors;
            let codim = strat.codim(s);
            let mut rels: Vec<Vec<Rational>> = Vec::new();
            for c in circuits.iter().filter(|c| c.support.is_subset(hs)) {
                let size = c.support.len();
                if size > codim + 1 {
                    continue;
                }
                for k in hs.difference(c.support).subsets_of_size(codim + 1 - size) {
                    let mut v = vec![Rational::zero(); basis.len()];
                    let mut any = false;
                    for (sign, term) in boundary_terms(c.support) {
                        if let Some(&p) = pos.get(&k.union(term)) {
                            v[p] += Rational::from_integer((sign * merge_sign(k, term)).into());
                            any = true;
                        }
                    }
                    if any {
                        rels.push(v);
                    }
                }
            }
            let relations = Subspace::span_of(basis.len(), &rels);
            let quotient = quotient_structure(basis.len(), &relations).expect("matching ambient dimension");
            pieces.push(OSPiece {
                monomials: basis.clone(),
                relations,
                quotient,
            });
        }

        let mut diffs = HashMap::new();
        for s in 0..strat.len() {
            for &t in strat.up(s) {
                let src = &pieces[s];
                let dst = &pieces[t];
                let pos: HashMap<IndexMask, usize> =
                    dst.monomials.iter().enumerate().map(|(p, m)| (*m, p)).collect();
                let mut d = RationalMatrix::zeros(dst.monomials.len(), src.monomials.len());
                for (col, &m) in src.monomials.iter().enumerate() {
                    for (sign, term) in boundary_terms(m) {
                        if let Some(&row) = pos.get(&term) {
                            d.set(row, col, Rational::from_integer(sign.into()));
                        }
                    }
                }
                let m = dst.quotient.projection.mul(&d).mul(&src.quotient.section);
                diffs.insert((s, t), m);
            }
        }
        Ok(OSAlgebra { strat, pieces, diffs })
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strat
    }

    pub fn piece(&self, s: usize) -> &OSPiece {
        &self.pieces[s]
    }

    pub fn dim(&self, s: usize) -> usize {
        self.pieces[s].dim()
    }

    /// `dim A_r` for `r = 0..=max codim`.
    pub fn degree_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.strat.max_codim() + 1];
        for s in 0..self.strat.len() {
            out[self.strat.codim(s)] += self.dim(s);
        }
        out
    }

    /// `d_{S,T}: A^S → A^T` for `S ↪¹ T`.
    pub fn differential(&self, s: usize, t: usize) -> &RationalMatrix {
        &self.diffs[&(s, t)]
    }

    /// Homology of `A_c → … → A_0 → 0` restricted to the strata in `strata`,
    /// listed from the top degree down.
    pub fn restricted_homology(&self, strata: &[usize]) -> Vec<usize> {
        let top = strata.iter().map(|&s| self.strat.codim(s)).max().unwrap_or(0);
        let by_degree: Vec<Vec<usize>> = (0..=top)
            .map(|r| strata.iter().copied().filter(|&s| self.strat.codim(s) == r).collect())
            .collect();
        let offsets = |deg: usize| -> HashMap<usize, usize> {
            let mut acc = 0;
            by_degree[deg]
                .iter()
                .map(|&s| {
                    let o = acc;
                    acc += self.dim(s);
                    (s, o)
                })
                .collect()
        };
        let size = |deg: usize| by_degree[deg].iter().map(|&s| self.dim(s)).sum::<usize>();
        let mut dims = Vec::new();
        let mut maps = Vec::new();
        for r in (0..=top).rev() {
            dims.push(size(r));
            if r > 0 {
                let (src, dst) = (offsets(r), offsets(r - 1));
                let mut m = RationalMatrix::zeros(size(r - 1), size(r));
                for &s in &by_degree[r] {
                    for &t in self.strat.up(s) {
                        if let Some(&ro) = dst.get(&t) {
                            m.place(ro, src[&s], self.differential(s, t));
                        }
                    }
                }
                maps.push(m);
            }
        }
        complex_homology(&dims, &maps).expect("d∘d = 0")
    }
}

/// All independent sets containing no broken circuit, for the hyperplane
/// order `order` (a permutation listing hyperplanes from smallest to largest).
pub fn nbc_sets(poset: &StratumPoset, order: &[usize]) -> Result<Vec<IndexMask>, ArrangementError> {
    let k = poset.forms().len();
    let mut rank = vec![0; k];
    for (r, &h) in order.iter().enumerate() {
        rank[h] = r;
    }
    let broken: Vec<IndexMask> = poset
        .circuits(DEFAULT_CIRCUIT_CAP.max(k))?
        .iter()
        .map(|c| {
            let min = c.support.iter().min_by_key(|&h| rank[h]).unwrap();
            c.support.without(min)
        })
        .collect();
    let mut out: Vec<IndexMask> = IndexMask::full(k)
        .subsets()
        .filter(|s| s.len() <= poset.ambient_dim())
        .filter(|s| !broken.iter().any(|b| b.is_subset(*s)))
        .filter(|s| poset.is_independent(*s))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| lex_cmp(*a, *b)));
    Ok(out)
}

/// Whether `(A_•, d)` is exact, globally and below every strict stratum.
pub fn os_exactness_check(alg: &OSAlgebra) -> bool {
    let strat = alg.stratification();
    let all: Vec<usize> = (0..strat.len()).collect();
    if strat.len() > 1 && alg.restricted_homology(&all).iter().any(|&h| h != 0) {
        return false;
    }
    (1..strat.len()).all(|s| alg.restricted_homology(&strat.above(s)).iter().all(|&h| h == 0))
}

/// `Σ dim A_r`, the value of the Poincaré polynomial at 1.
pub fn total_dim(alg: &OSAlgebra) -> usize {
    alg.degree_dims().iter().sum()
}
