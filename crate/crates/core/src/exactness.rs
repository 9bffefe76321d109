//! Exactness and tameness of bi-arrangements.

use std::collections::HashMap;
use std::fmt;

use crate::arrangement::{ArrangementError, BiArrangement};
use crate::bicomplex::OSBicomplex;
use crate::linalg::{complex_homology, RationalMatrix};
use crate::stratification::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Row,
    Column,
}

/// A row or column of `A^{≤Σ}` with non-zero homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessWitness {
    pub direction: Direction,
    /// `j` for a row, `i` for a column.
    pub index: usize,
    /// Bidegree `(i, j)` of the first non-zero homology group.
    pub position: (usize, usize),
    pub homology: usize,
    /// Dimensions of the terms, in the order of the differential.
    pub dims: Vec<usize>,
}

impl ExactnessWitness {
    /// The complex written out, e.g. `0→0→ℚ→ℚ³→ℚ→0`.
    pub fn sequence(&self) -> String {
        let mut parts = vec!["0".to_string()];
        parts.extend(self.dims.iter().map(|&d| power_of_q(d)));
        parts.push("0".to_string());
        parts.join("→")
    }
}

fn power_of_q(d: usize) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    match d {
        0 => "0".into(),
        1 => "ℚ".into(),
        _ => format!("ℚ{}", d.to_string().chars().map(|c| SUP[c as usize - '0' as usize]).collect::<String>()),
    }
}

impl fmt::Display for ExactnessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.direction {
            Direction::Row => "row",
            Direction::Column => "column",
        };
        write!(
            f,
            "{kind} {} {} has homology of dimension {} at ({},{})",
            self.index,
            self.sequence(),
            self.homology,
            self.position.0,
            self.position.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumExactness {
    pub stratum: usize,
    pub label: String,
    pub color: Color,
    pub irreducible: bool,
    pub exact: bool,
    /// Reducible strata are decided from their factors.
    pub derived: bool,
    pub witness: Option<ExactnessWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub strata: Vec<StratumExactness>,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.strata.iter().all(|s| s.exact)
    }

    pub fn first_failure(&self) -> Option<&StratumExactness> {
        self.strata.iter().find(|s| !s.exact)
    }

    pub fn get(&self, stratum: usize) -> Option<&StratumExactness> {
        self.strata.iter().find(|s| s.stratum == stratum)
    }
}

/// Homology of a complex whose terms are sums over strata.
///
/// `levels[k]` lists `(stratum, dim)`; `map(s, t)` gives the block from `s`
/// in level `k` to `t` in level `k + 1`, when there is one.
fn level_homology<'a>(
    levels: &[Vec<(usize, usize)>],
    map: impl Fn(usize, usize) -> Option<&'a RationalMatrix>,
) -> (Vec<usize>, Vec<usize>) {
    let offs: Vec<HashMap<usize, usize>> = levels
        .iter()
        .map(|l| {
            let mut acc = 0;
            l.iter()
                .map(|&(s, d)| {
                    let o = acc;
                    acc += d;
                    (s, o)
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = levels.iter().map(|l| l.iter().map(|x| x.1).sum()).collect();
    let mut maps = Vec::new();
    for k in 0..levels.len().saturating_sub(1) {
        let mut m = RationalMatrix::zeros(dims[k + 1], dims[k]);
        for &(s, _) in &levels[k] {
            for &(t, _) in &levels[k + 1] {
                if let Some(b) = map(s, t) {
                    m.place(offs[k + 1][&t], offs[k][&s], b);
                }
            }
        }
        maps.push(m);
    }
    let h = complex_homology(&dims, &maps).expect("rows and columns are complexes");
    (dims, h)
}

/// Checks the rows (λ) or columns (μ) of `A^{≤Σ}` for the given color.
pub fn stratum_witness(bc: &OSBicomplex, sigma: usize, color: Color) -> Option<ExactnessWitness> {
    let st = bc.stratification();
    let c = st.codim(sigma);
    let above = st.above(sigma);
    match color {
        Color::Lambda => {
            for j in 0..=c {
                // Terms A^S_{p,j} with codim S = p + j, p from c − j down to 0.
                let levels: Vec<Vec<(usize, usize)>> = (0..=c - j)
                    .rev()
                    .map(|p| {
                        above
                            .iter()
                            .filter(|&&s| st.codim(s) == p + j)
                            .map(|&s| (s, bc.dim(s, p)))
                            .collect()
                    })
                    .collect();
                let (dims, h) = level_homology(&levels, |s, t| {
                    st.up(s).contains(&t).then(|| bc.dprime(s, t, st.codim(s) - j))
                });
                if let Some(k) = h.iter().position(|&x| x != 0) {
                    return Some(ExactnessWitness {
                        direction: Direction::Row,
                        index: j,
                        position: (c - j - k, j),
                        homology: h[k],
                        dims,
                    });
                }
            }
        }
        Color::Mu => {
            for i in 0..=c {
                // Terms A^S_{i,q} with codim S = i + q, q from 0 up to c − i.
                let levels: Vec<Vec<(usize, usize)>> = (0..=c - i)
                    .map(|q| {
                        above
                            .iter()
                            .filter(|&&s| st.codim(s) == i + q)
                            .map(|&s| (s, bc.dim(s, i)))
                            .collect()
                    })
                    .collect();
                let (dims, h) = level_homology(&levels, |t, s| st.up(s).contains(&t).then(|| bc.ddouble(s, t, i)));
                if let Some(k) = h.iter().position(|&x| x != 0) {
                    return Some(ExactnessWitness {
                        direction: Direction::Column,
                        index: i,
                        position: (i, k),
                        homology: h[k],
                        dims,
                    });
                }
            }
        }
    }
    None
}

/// Exactness of every colored strict stratum. Irreducible strata are
/// checked directly; a reducible stratum is exact iff its factors are.
pub fn check_exactness(bc: &OSBicomplex) -> ExactnessReport {
    let st = bc.stratification();
    let mut entries: Vec<StratumExactness> = Vec::new();
    let mut exact_irr: HashMap<usize, bool> = HashMap::new();
    for s in 1..st.len() {
        let Some(color) = bc.colors()[s] else { continue };
        let stratum = st.stratum(s);
        if stratum.irreducible {
            let witness = stratum_witness(bc, s, color);
            exact_irr.insert(s, witness.is_none());
            entries.push(StratumExactness {
                stratum: s,
                label: st.label(s),
                color,
                irreducible: true,
                exact: witness.is_none(),
                derived: false,
                witness,
            });
        } else {
            let exact = stratum.factors.iter().all(|f| exact_irr.get(f).copied().unwrap_or(true));
            entries.push(StratumExactness {
                stratum: s,
                label: st.label(s),
                color,
                irreducible: false,
                exact,
                derived: true,
                witness: None,
            });
        }
    }
    ExactnessReport { strata: entries }
}

/// Tameness of one irreducible strict stratum of codimension ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTameness {
    pub stratum: usize,
    pub label: String,
    pub color: Color,
    pub tame: bool,
    /// A hyperplane index satisfying the tameness condition.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamenessReport {
    pub strata: Vec<StratumTameness>,
}

impl TamenessReport {
    pub fn tame(&self) -> bool {
        self.strata.iter().all(|s| s.tame)
    }
}

/// A stratum colored `c` is tame when some hyperplane of side `c` through it
/// lies in no circuit through it whose stratum has the other color.
/// Uncolored strata are skipped.
pub fn check_tameness(biarr: &BiArrangement) -> Result<TamenessReport, ArrangementError> {
    let circuits = biarr.circuits()?;
    let poset = biarr.poset();
    let mut out = Vec::new();
    for s in biarr.higher_irreducibles() {
        let Some(color) = biarr.color(s) else { continue };
        let hs = poset.stratum(s).hyperplanes;
        let bad: Vec<_> = circuits
            .iter()
            .filter(|c| c.support.is_subset(hs))
            .filter(|c| biarr.color(poset.stratum_of(c.support)) == Some(color.dual()))
            .collect();
        let witness = hs
            .iter()
            .find(|&h| biarr.forms()[h].side == color && !bad.iter().any(|c| c.support.contains(h)));
        out.push(StratumTameness {
            stratum: s,
            label: poset.label(s),
            color,
            tame: witness.is_some(),
            witness,
        });
    }
    Ok(TamenessReport { strata: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{extreme_coloring, Coloring, LinearForm, StratumPoset};
    use crate::mask::IndexMask;

    fn lam(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Lambda)
    }
    fn mu(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Mu)
    }

    fn counter_example(lines: Color, point: Color) -> BiArrangement {
        let p = StratumPoset::build(
            3,
            vec![
                lam(&[1, 0, 0], "L1"),
                lam(&[0, 1, 0], "L2"),
                lam(&[0, 0, 1], "L3"),
                mu(&[1, 0, 1], "M1"),
                mu(&[0, 1, 1], "M2"),
            ],
        )
        .unwrap();
        let mut c = Coloring::new();
        c.set([0, 2, 3].into_iter().collect(), lines);
        c.set([1, 2, 4].into_iter().collect(), lines);
        c.set(IndexMask::full(5), point);
        BiArrangement::from_poset(p, &c).unwrap()
    }

    #[test]
    fn non_tame_non_exact() {
        let b = counter_example(Color::Mu, Color::Lambda);
        let bc = OSBicomplex::build(&b).unwrap();
        bc.verify_identities().unwrap();
        let r = check_exactness(&bc);
        assert!(!r.exact());
        let origin = b.poset().minimal();
        let w = r.get(origin).unwrap().witness.clone().unwrap();
        assert_eq!(w.direction, Direction::Row);
        assert_eq!(w.index, 0);
        assert_eq!(w.sequence(), "0→0→ℚ→ℚ³→ℚ→0");
        let t = check_tameness(&b).unwrap();
        assert!(!t.tame());
        assert!(!t.strata.iter().find(|s| s.stratum == origin).unwrap().tame);
    }

    #[test]
    fn non_tame_but_exact() {
        let b = counter_example(Color::Lambda, Color::Mu);
        let bc = OSBicomplex::build(&b).unwrap();
        bc.verify_identities().unwrap();
        assert!(check_exactness(&bc).exact());
        assert!(!check_tameness(&b).unwrap().tame());
    }

    #[test]
    fn three_lambda_lines_through_mu_origin() {
        let p = StratumPoset::build(2, vec![lam(&[1, 0], "L1"), lam(&[0, 1], "L2"), lam(&[1, 1], "L3")]).unwrap();
        let mut c = Coloring::new();
        c.set(IndexMask::full(3), Color::Mu);
        let b = BiArrangement::from_poset(p, &c).unwrap();
        let r = check_exactness(&OSBicomplex::build(&b).unwrap());
        assert!(!r.exact());
    }

    #[test]
    fn extreme_colorings_are_tame_and_exact() {
        let forms = vec![lam(&[1, 0, 0], "L1"), lam(&[0, 1, 0], "L2"), mu(&[1, 1, 0], "M1"), mu(&[0, 1, 1], "M2"), lam(&[1, 1, 1], "L3")];
        for side in [Color::Lambda, Color::Mu] {
            let p = StratumPoset::build(3, forms.clone()).unwrap();
            let c = extreme_coloring(&p, side);
            let b = BiArrangement::from_poset(p, &c).unwrap();
            assert!(check_tameness(&b).unwrap().tame());
            assert!(check_exactness(&OSBicomplex::build(&b).unwrap()).exact());
        }
    }

    #[test]
    fn dual_swaps_exactness() {
        for (l, p) in [(Color::Mu, Color::Lambda), (Color::Lambda, Color::Mu)] {
            let b = counter_example(l, p);
            let bc = OSBicomplex::build(&b).unwrap();
            let dual_built = OSBicomplex::build(&b.dual()).unwrap();
            assert_eq!(check_exactness(&bc).exact(), check_exactness(&bc.dual()).exact());
            assert_eq!(check_exactness(&bc).exact(), check_exactness(&dual_built).exact());
        }
    }
}
