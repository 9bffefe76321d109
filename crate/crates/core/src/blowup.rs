//! Combinatorial blow-ups of stratified bi-arrangements along good strata,
//! with the induced transformation of the Orlik–Solomon bi-complex, and the
//! resolution into a normal crossing divisor.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::arrangement::BiArrangement;
use crate::bicomplex::OSBicomplex;
use crate::linalg::RationalMatrix;
use crate::mask::IndexMask;
use crate::stratification::{effective_colors, Color, Component, Stratification, StratumSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("stratum {0} is not good")]
    NotGood(String),
    #[error("stratum {0} is not irreducible")]
    NotIrreducible(String),
    #[error("stratum {0} has codimension less than 2")]
    CodimTooSmall(String),
    #[error("stratum {0} has no color")]
    UncoloredCenter(String),
}

/// A stratified bi-arrangement without linear data, with its bi-complex.
#[derive(Clone, Debug)]
pub struct AbstractBiArrangement {
    pub strat: Stratification,
    pub irreducible_colors: Vec<Option<Color>>,
    pub bicomplex: OSBicomplex,
}

pub fn abstractify(biarr: &BiArrangement, bc: &OSBicomplex) -> AbstractBiArrangement {
    AbstractBiArrangement {
        strat: biarr.stratification().clone(),
        irreducible_colors: biarr.irreducible_colors().to_vec(),
        bicomplex: bc.clone(),
    }
}

impl AbstractBiArrangement {
    pub fn dual(&self) -> AbstractBiArrangement {
        AbstractBiArrangement {
            strat: self.strat.dual(),
            irreducible_colors: self.irreducible_colors.iter().map(|c| c.map(Color::dual)).collect(),
            bicomplex: self.bicomplex.dual(),
        }
    }

    /// Irreducible strata of codimension at least two.
    pub fn higher_irreducibles(&self) -> Vec<usize> {
        (0..self.strat.len())
            .filter(|&s| self.strat.stratum(s).irreducible && self.strat.codim(s) >= 2)
            .collect()
    }

    /// Minimal elements of [`Self::higher_irreducibles`] for inclusion.
    pub fn minimal_irreducibles(&self) -> Vec<usize> {
        let irr = self.higher_irreducibles();
        irr.iter()
            .copied()
            .filter(|&z| !irr.iter().any(|&w| w != z && self.strat.is_contained(w, z)))
            .collect()
    }

    /// Dimensions keyed by the sorted component labels of each stratum.
    pub fn dims_by_labels(&self) -> BTreeMap<Vec<String>, Vec<usize>> {
        (0..self.strat.len())
            .map(|s| (self.strat.label_set(s), self.bicomplex.dims(s).to_vec()))
            .collect()
    }
}

/// `Z` is good when, at every stratum `R ⊆ Z`, the factors of `Z` are among
/// the factors of `R`.
pub fn is_good(strat: &Stratification, z: usize) -> bool {
    let fz = &strat.stratum(z).factors;
    strat
        .below(z)
        .into_iter()
        .all(|r| fz.iter().all(|f| strat.stratum(r).factors.contains(f)))
}

/// One blow-up, with the maps from old strata to their transforms `S̃` and
/// to `E ∩ S̃`.
#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub center: usize,
    pub center_label: String,
    pub color: Color,
    pub transform: Vec<Option<usize>>,
    pub exceptional: Vec<Option<usize>>,
    /// Index of the stratum `E` in the result.
    pub divisor: usize,
    pub result: AbstractBiArrangement,
}

/// Label of the exceptional divisor over `z`: the labels of the original
/// hyperplanes through `z`.
fn exceptional_label(strat: &Stratification, z: usize) -> String {
    let mut labels: Vec<String> = strat.stratum(z)
        .divisors
        .iter()
        .filter(|&c| !strat.components()[c].exceptional)
        .map(|c| strat.components()[c].label.clone())
        .collect();
    labels.sort();
    format!("E{{{}}}", labels.join(","))
}

pub fn blow_up(abs: &AbstractBiArrangement, z: usize) -> Result<BlowupStep, BlowupError> {
    let strat = &abs.strat;
    if strat.codim(z) < 2 {
        return Err(BlowupError::CodimTooSmall(strat.label(z)));
    }
    if !strat.stratum(z).irreducible {
        return Err(BlowupError::NotIrreducible(strat.label(z)));
    }
    if !is_good(strat, z) {
        return Err(BlowupError::NotGood(strat.label(z)));
    }
    match abs.irreducible_colors[z] {
        Some(Color::Lambda) => Ok(blow_up_lambda(abs, z)),
        Some(Color::Mu) => {
            let mut step = blow_up_lambda(&abs.dual(), z);
            step.result = step.result.dual();
            step.color = Color::Mu;
            Ok(step)
        }
        None => Err(BlowupError::UncoloredCenter(strat.label(z))),
    }
}

fn blow_up_lambda(abs: &AbstractBiArrangement, z: usize) -> BlowupStep {
    let strat = &abs.strat;
    let bc = &abs.bicomplex;
    let e = strat.components().len();
    let mut components = strat.components().to_vec();
    components.push(Component {
        label: exceptional_label(strat, z),
        side: Color::Lambda,
        exceptional: true,
    });
    let e_mask = IndexMask::singleton(e);
    let zd = strat.stratum(z).divisors;

    // Old strata surviving as S̃, and those meeting Z, which also give E ∩ S̃.
    let kept: Vec<usize> = (0..strat.len()).filter(|&s| !strat.is_contained(s, z)).collect();
    let meets = |s: usize| {
        let need = strat.stratum(s).divisors.union(zd);
        (0..strat.len()).any(|r| need.is_subset(strat.stratum(r).divisors))
    };
    let with_e: Vec<usize> = kept.iter().copied().filter(|&s| meets(s)).collect();

    let mut specs = Vec::new();
    for &s in &kept {
        let st = strat.stratum(s);
        specs.push(StratumSpec {
            divisors: st.divisors,
            codim: st.codim,
            irreducible: st.irreducible,
            factor_keys: st.factors.iter().map(|&f| strat.stratum(f).divisors).collect(),
        });
    }
    for &s in &with_e {
        let st = strat.stratum(s);
        let mut factor_keys = vec![e_mask];
        factor_keys.extend(st.factors.iter().map(|&f| strat.stratum(f).divisors));
        specs.push(StratumSpec {
            divisors: st.divisors.union(e_mask),
            codim: st.codim + 1,
            irreducible: st.codim == 0,
            factor_keys,
        });
    }
    let new = Stratification::new(components, specs).expect("blow-up strata are well formed");
    let mut transform = vec![None; strat.len()];
    let mut exceptional = vec![None; strat.len()];
    for &s in &kept {
        transform[s] = new.find(strat.stratum(s).divisors);
    }
    for &s in &with_e {
        exceptional[s] = new.find(strat.stratum(s).divisors.union(e_mask));
    }
    let divisor = exceptional[0].expect("the ambient space meets Z");

    // Back-map: new stratum → (old stratum, lies in E).
    let mut origin = vec![(0, false); new.len()];
    for s in 0..strat.len() {
        if let Some(t) = transform[s] {
            origin[t] = (s, false);
        }
        if let Some(t) = exceptional[s] {
            origin[t] = (s, true);
        }
    }

    let mut irreducible_colors = vec![None; new.len()];
    for s in 0..strat.len() {
        if let Some(t) = transform[s] {
            if new.stratum(t).irreducible {
                irreducible_colors[t] = abs.irreducible_colors[s];
            }
        }
    }
    irreducible_colors[divisor] = Some(Color::Lambda);
    let colors = effective_colors(&new, &irreducible_colors, Color::Lambda);

    let dims: Vec<Vec<usize>> = (0..new.len())
        .map(|p| {
            let (s, in_e) = origin[p];
            let c = new.codim(p);
            (0..=c)
                .map(|i| if in_e { if i == 0 { 0 } else { bc.dim(s, i - 1) } } else { bc.dim(s, i) })
                .collect()
        })
        .collect();

    let mut dprime = HashMap::new();
    let mut ddouble = HashMap::new();
    for p in 0..new.len() {
        let (s, in_e) = origin[p];
        let c = new.codim(p);
        for &q in new.up(p) {
            let (t, t_in_e) = origin[q];
            let mut dp = Vec::with_capacity(c + 1);
            let mut dd = Vec::with_capacity(c + 1);
            for i in 0..=c {
                let rows = if i == 0 { 0 } else { dims[q][i - 1] };
                let cols_dd = dims[q].get(i).copied().unwrap_or(0);
                let (a, b) = match (in_e, t_in_e) {
                    (false, false) => (bc.dprime(s, t, i).clone(), bc.ddouble(s, t, i).clone()),
                    (true, true) => {
                        if i == 0 {
                            (RationalMatrix::zeros(rows, 0), RationalMatrix::zeros(0, cols_dd))
                        } else {
                            (bc.dprime(s, t, i - 1).neg(), bc.ddouble(s, t, i - 1).clone())
                        }
                    }
                    (true, false) => {
                        debug_assert_eq!(s, t);
                        let a = if i == 0 {
                            RationalMatrix::zeros(0, 0)
                        } else {
                            RationalMatrix::identity(bc.dim(s, i - 1))
                        };
                        (a, RationalMatrix::zeros(dims[p][i], cols_dd))
                    }
                    (false, true) => unreachable!("a transform never lies in E"),
                };
                debug_assert_eq!((a.rows(), a.cols()), (rows, dims[p][i]));
                debug_assert_eq!((b.rows(), b.cols()), (dims[p][i], cols_dd));
                dp.push(a);
                dd.push(b);
            }
            dprime.insert((p, q), dp);
            ddouble.insert((p, q), dd);
        }
    }
    let bicomplex = OSBicomplex::from_parts(new.clone(), irreducible_colors.clone(), colors, dims, dprime, ddouble);
    BlowupStep {
        center: z,
        center_label: strat.label(z),
        color: Color::Lambda,
        transform,
        exceptional,
        divisor,
        result: AbstractBiArrangement {
            strat: new,
            irreducible_colors,
            bicomplex,
        },
    }
}

/// Which minimal irreducible stratum to blow up when there are several.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    First,
    Last,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub steps: Vec<BlowupStep>,
    pub terminal: AbstractBiArrangement,
}

/// Blows up minimal irreducible strata of codimension ≥ 2 until only the
/// divisor components are irreducible.
pub fn resolve(abs: &AbstractBiArrangement, order: TieBreak) -> Result<Resolution, BlowupError> {
    let mut current = abs.clone();
    let mut steps = Vec::new();
    loop {
        let minimal = current.minimal_irreducibles();
        let pick = match order {
            TieBreak::First => minimal.first(),
            TieBreak::Last => minimal.last(),
        };
        let Some(&z) = pick else { break };
        let step = blow_up(&current, z)?;
        current = step.result.clone();
        steps.push(step);
    }
    Ok(Resolution { steps, terminal: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{is_good_stratum, Coloring, LinearForm, StratumPoset};
    use crate::exactness::check_exactness;

    fn lam(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Lambda)
    }
    fn mu(c: &[i64], l: &str) -> LinearForm {
        LinearForm::from_i64(c, l, Color::Mu)
    }

    fn abs_of(b: &BiArrangement) -> AbstractBiArrangement {
        abstractify(b, &OSBicomplex::build(b).unwrap())
    }

    /// Rebuilds the bi-complex of the blown-up stratification from scratch
    /// and compares dims and block ranks.
    fn assert_matches_rebuild(a: &AbstractBiArrangement) {
        let fresh = OSBicomplex::from_stratification(&a.strat, &a.irreducible_colors, Color::Lambda).unwrap();
        let bc = &a.bicomplex;
        for s in 0..a.strat.len() {
            assert_eq!(fresh.dims(s), bc.dims(s), "stratum {}", a.strat.label(s));
            for &t in a.strat.up(s) {
                for i in 0..=a.strat.codim(s) {
                    assert_eq!(fresh.dprime(s, t, i).rank(), bc.dprime(s, t, i).rank());
                    assert_eq!(fresh.ddouble(s, t, i).rank(), bc.ddouble(s, t, i).rank());
                }
            }
        }
    }

    #[test]
    fn three_lines_blow_up_origin() {
        let b = BiArrangement::constant(2, vec![lam(&[1, 0], "a"), lam(&[0, 1], "b"), lam(&[1, 1], "c")], Color::Lambda).unwrap();
        let a = abs_of(&b);
        assert_eq!(a.strat.len(), 5);
        let origin = b.poset().minimal();
        let step = blow_up(&a, origin).unwrap();
        let r = &step.result;
        // ambient, E, three transforms, three points E ∩ L̃.
        assert_eq!(r.strat.len(), 8);
        assert_eq!(r.higher_irreducibles().len(), 0);
        for h in 0..3 {
            let l = b.poset().hyperplane_stratum(h);
            let p = step.exceptional[l].unwrap();
            assert_eq!(r.bicomplex.dim(p, 2), a.bicomplex.dim(l, 1));
            assert_eq!(r.bicomplex.dim(p, 2), 1);
        }
        assert_eq!(r.strat.label(step.divisor), "E{a,b,c}");
        r.bicomplex.verify_identities().unwrap();
        assert_matches_rebuild(r);
        assert!(check_exactness(&r.bicomplex).exact());
    }

    #[test]
    fn rejects_bad_centers() {
        let b = BiArrangement::constant(2, vec![lam(&[1, 0], "a"), lam(&[0, 1], "b")], Color::Lambda).unwrap();
        let a = abs_of(&b);
        assert!(matches!(blow_up(&a, 1), Err(BlowupError::CodimTooSmall(_))));
        assert!(matches!(blow_up(&a, 3), Err(BlowupError::NotIrreducible(_))));
        assert_eq!(resolve(&a, TieBreak::First).unwrap().steps.len(), 0);
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
    fn goodness_agrees_with_linear_definition() {
        let b = counter_example(Color::Mu, Color::Lambda);
        for s in b.higher_irreducibles() {
            assert_eq!(is_good(b.stratification(), s), is_good_stratum(b.poset(), s), "{}", b.poset().label(s));
        }
        let l13 = b.poset().find([0, 2, 3].into_iter().collect()).unwrap();
        assert!(matches!(blow_up(&abs_of(&b), l13), Err(BlowupError::NotGood(_))));
    }

    #[test]
    fn resolution_of_counter_examples() {
        for (l, p) in [(Color::Mu, Color::Lambda), (Color::Lambda, Color::Mu)] {
            let b = counter_example(l, p);
            let a = abs_of(&b);
            let exact = check_exactness(&a.bicomplex).exact();
            for order in [TieBreak::First, TieBreak::Last] {
                let res = resolve(&a, order).unwrap();
                assert_eq!(res.steps.len(), 3);
                for step in &res.steps {
                    step.result.bicomplex.verify_identities().unwrap();
                    assert_matches_rebuild(&step.result);
                }
                assert!(res.terminal.higher_irreducibles().is_empty());
                if exact {
                    assert!(check_exactness(&res.terminal.bicomplex).exact());
                }
            }
            let first = resolve(&a, TieBreak::First).unwrap().terminal.dims_by_labels();
            let last = resolve(&a, TieBreak::Last).unwrap().terminal.dims_by_labels();
            assert_eq!(first, last);
        }
    }

    #[test]
    fn mu_center_is_dual() {
        let b = BiArrangement::constant(2, vec![mu(&[1, 0], "a"), mu(&[0, 1], "b"), mu(&[1, 1], "c")], Color::Mu).unwrap();
        let a = abs_of(&b);
        let step = blow_up(&a, b.poset().minimal()).unwrap();
        assert_eq!(step.color, Color::Mu);
        let r = &step.result;
        r.bicomplex.verify_identities().unwrap();
        assert_matches_rebuild(r);
        assert_eq!(r.irreducible_colors[step.divisor], Some(Color::Mu));
        assert_eq!(r.strat.components()[r.strat.components().len() - 1].side, Color::Mu);
    }
}
