//! Central hyperplane arrangements given by rational linear forms, and
//! bi-arrangements (a λ/μ split of the hyperplanes plus a coloring of the
//! irreducible strata).

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{coordinates_in_span, Rational, RationalMatrix, Subspace};
use crate::mask::{lex_cmp, IndexMask, MAX_INDEX};
use crate::stratification::{Color, Component, Stratification, StratumSpec};

/// Default bound on the number of hyperplanes for circuit enumeration.
pub const DEFAULT_CIRCUIT_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("hyperplane {0} has a zero linear form")]
    ZeroForm(String),
    #[error("hyperplane {label} has {got} coefficients, expected {expected}")]
    DimensionMismatch { label: String, got: usize, expected: usize },
    #[error("hyperplanes {0} and {1} coincide")]
    DuplicateHyperplane(String, String),
    #[error("duplicate hyperplane label {0}")]
    DuplicateLabel(String),
    #[error("at most {MAX_INDEX} hyperplanes are supported, got {0}")]
    TooManyHyperplanes(usize),
    #[error("circuit enumeration is capped at {cap} hyperplanes, arrangement has {count}")]
    CircuitCapExceeded { count: usize, cap: usize },
    #[error("stratum {0} has no color")]
    MissingColor(String),
    #[error("hyperplane {0} is colored against its side")]
    SideMismatch(String),
    #[error("{0} is not a stratum of the arrangement")]
    NotAStratum(String),
    #[error("coloring of {0} violates the Künneth condition")]
    KunnethViolation(String),
}

/// A hyperplane `{f = 0}` with its side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
    pub label: String,
    pub side: Color,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>, label: impl Into<String>, side: Color) -> Self {
        LinearForm {
            coeffs,
            label: label.into(),
            side,
        }
    }

    pub fn from_i64(coeffs: &[i64], label: impl Into<String>, side: Color) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::linalg::q(c)).collect(), label, side)
    }
}

/// A stratum of a linear arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    /// Span of the forms vanishing on the stratum, in echelon form.
    pub orthogonal: Subspace,
    /// Indices of the hyperplanes containing the stratum.
    pub hyperplanes: IndexMask,
    pub codim: usize,
}

/// Intersection poset of a central arrangement.
#[derive(Clone, Debug)]
pub struct StratumPoset {
    ambient_dim: usize,
    forms: Vec<LinearForm>,
    strata: Vec<Stratum>,
    strat: Stratification,
}

/// A minimally dependent pair; parts are indices within each side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    pub lambda_part: Vec<usize>,
    pub mu_part: Vec<usize>,
    /// The same circuit as a set of global hyperplane indices.
    pub support: IndexMask,
}

fn forms_matrix(forms: &[LinearForm], mask: IndexMask, n: usize) -> RationalMatrix {
    RationalMatrix::from_rows(n, mask.iter().map(|i| forms[i].coeffs.clone()).collect())
}

fn union_find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl StratumPoset {
    /// Enumerates all strata by closing the ambient space under intersection
    /// with single hyperplanes.
    pub fn build(ambient_dim: usize, forms: Vec<LinearForm>) -> Result<Self, ArrangementError> {
        if forms.len() > MAX_INDEX {
            return Err(ArrangementError::TooManyHyperplanes(forms.len()));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.coeffs.len() != ambient_dim {
                return Err(ArrangementError::DimensionMismatch {
                    label: f.label.clone(),
                    got: f.coeffs.len(),
                    expected: ambient_dim,
                });
            }
            if f.coeffs.iter().all(Zero::is_zero) {
                return Err(ArrangementError::ZeroForm(f.label.clone()));
            }
            if forms[..i].iter().any(|g| g.label == f.label) {
                return Err(ArrangementError::DuplicateLabel(f.label.clone()));
            }
        }
        for i in 0..forms.len() {
            let si = Subspace::span_of(ambient_dim, &[forms[i].coeffs.clone()]);
            for j in i + 1..forms.len() {
                if si.contains(&forms[j].coeffs) {
                    return Err(ArrangementError::DuplicateHyperplane(
                        forms[i].label.clone(),
                        forms[j].label.clone(),
                    ));
                }
            }
        }

        let closure = |sub: &Subspace| -> IndexMask {
            (0..forms.len()).filter(|&i| sub.contains(&forms[i].coeffs)).collect()
        };
        let mut found: HashMap<IndexMask, Subspace> = HashMap::new();
        found.insert(IndexMask::EMPTY, Subspace::zero(ambient_dim));
        let mut queue = VecDeque::from([IndexMask::EMPTY]);
        while let Some(mask) = queue.pop_front() {
            let sub = found[&mask].clone();
            for h in 0..forms.len() {
                if mask.contains(h) {
                    continue;
                }
                let bigger = sub.sum(&Subspace::span_of(ambient_dim, &[forms[h].coeffs.clone()]));
                let flat = closure(&bigger);
                if let std::collections::hash_map::Entry::Vacant(e) = found.entry(flat) {
                    e.insert(bigger);
                    queue.push_back(flat);
                }
            }
        }
        let mut strata: Vec<Stratum> = found
            .into_iter()
            .map(|(hyperplanes, orthogonal)| Stratum {
                codim: orthogonal.dim(),
                orthogonal,
                hyperplanes,
            })
            .collect();
        strata.sort_by(|a, b| a.codim.cmp(&b.codim).then_with(|| lex_cmp(a.hyperplanes, b.hyperplanes)));

        let components: Vec<Component> = forms
            .iter()
            .map(|f| Component {
                label: f.label.clone(),
                side: f.side,
                exceptional: false,
            })
            .collect();
        let specs: Vec<StratumSpec> = strata
            .iter()
            .map(|s| {
                let factor_keys = if s.codim == 0 {
                    Vec::new()
                } else {
                    irreducible_components(&forms, s.hyperplanes, ambient_dim)
                };
                StratumSpec {
                    divisors: s.hyperplanes,
                    codim: s.codim,
                    irreducible: factor_keys.len() == 1,
                    factor_keys,
                }
            })
            .collect();
        let strat = Stratification::new(components, specs).expect("linear strata are well formed");
        debug_assert!(strat.strata().iter().zip(&strata).all(|(a, b)| a.divisors == b.hyperplanes));
        Ok(StratumPoset {
            ambient_dim,
            forms,
            strata,
            strat,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, s: usize) -> &Stratum {
        &self.strata[s]
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strat
    }

    /// Pairs `(S, T)` with `S ↪¹ T`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|s| self.strat.up(s).iter().map(move |&t| (s, t)))
            .collect()
    }

    /// Rank of the forms in `mask`.
    pub fn rank(&self, mask: IndexMask) -> usize {
        forms_matrix(&self.forms, mask, self.ambient_dim).rank()
    }

    pub fn is_independent(&self, mask: IndexMask) -> bool {
        self.rank(mask) == mask.len()
    }

    /// The stratum cut out by the hyperplanes in `mask`.
    pub fn stratum_of(&self, mask: IndexMask) -> usize {
        let sub = Subspace::span(&forms_matrix(&self.forms, mask, self.ambient_dim));
        let flat: IndexMask = (0..self.forms.len()).filter(|&i| sub.contains(&self.forms[i].coeffs)).collect();
        self.strat.find(flat).expect("closure of a hyperplane set is a stratum")
    }

    pub fn find(&self, hyperplanes: IndexMask) -> Option<usize> {
        self.strat.find(hyperplanes)
    }

    /// The unique minimal stratum (intersection of all hyperplanes).
    pub fn minimal(&self) -> usize {
        self.len() - 1
    }

    pub fn label(&self, s: usize) -> String {
        self.strat.label(s)
    }

    pub fn hyperplane_stratum(&self, h: usize) -> usize {
        self.strat.find(IndexMask::singleton(h)).expect("hyperplanes are strata")
    }

    /// All minimally dependent sets of hyperplanes, by increasing size.
    pub fn circuits(&self, cap: usize) -> Result<Vec<Circuit>, ArrangementError> {
        let k = self.forms.len();
        if k > cap {
            return Err(ArrangementError::CircuitCapExceeded { count: k, cap });
        }
        let all = IndexMask::full(k);
        let mut found: Vec<IndexMask> = Vec::new();
        for size in 1..=(self.ambient_dim + 1).min(k) {
            for sub in all.subsets_of_size(size) {
                if found.iter().any(|c| c.is_subset(sub)) {
                    continue;
                }
                if !self.is_independent(sub) {
                    found.push(sub);
                }
            }
        }
        let mut out: Vec<Circuit> = found.into_iter().map(|m| self.split_circuit(m)).collect();
        out.sort();
        Ok(out)
    }

    fn side_mask(&self, side: Color) -> IndexMask {
        (0..self.forms.len()).filter(|&i| self.forms[i].side == side).collect()
    }

    /// Global index of the `local`-th hyperplane on `side`.
    pub fn global_index(&self, side: Color, local: usize) -> usize {
        self.side_mask(side).iter().nth(local).expect("side-local index in range")
    }

    /// Index of hyperplane `h` among the hyperplanes on its side.
    pub fn local_index(&self, h: usize) -> usize {
        self.side_mask(self.forms[h].side).rank_of(h)
    }

    fn split_circuit(&self, support: IndexMask) -> Circuit {
        let lambda = self.side_mask(Color::Lambda);
        let mu = self.side_mask(Color::Mu);
        Circuit {
            lambda_part: support.intersection(lambda).iter().map(|h| lambda.rank_of(h)).collect(),
            mu_part: support.intersection(mu).iter().map(|h| mu.rank_of(h)).collect(),
            support,
        }
    }
}

/// Connected components of the matroid of the forms in `mask`, each given as
/// a hyperplane set. Components are read off the fundamental circuits of a
/// greedy basis.
fn irreducible_components(forms: &[LinearForm], mask: IndexMask, n: usize) -> Vec<IndexMask> {
    let idx = mask.to_vec();
    let mut parent: Vec<usize> = (0..idx.len()).collect();
    let mut basis: Vec<usize> = Vec::new();
    let mut span = Subspace::zero(n);
    for (p, &h) in idx.iter().enumerate() {
        let v = &forms[h].coeffs;
        if !span.contains(v) {
            basis.push(p);
            span = span.sum(&Subspace::span_of(n, std::slice::from_ref(v)));
            continue;
        }
        // Express v in the basis vectors chosen so far.
        let b = RationalMatrix::from_rows(n, basis.iter().map(|&q| forms[idx[q]].coeffs.clone()).collect());
        let coeffs = solve_in_rows(&b, v);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let (ra, rb) = (union_find_root(&mut parent, p), union_find_root(&mut parent, basis[k]));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, IndexMask> = BTreeMap::new();
    for p in 0..idx.len() {
        let r = union_find_root(&mut parent, p);
        groups.entry(r).or_default().insert(idx[p]);
    }
    let mut comps: Vec<IndexMask> = groups.into_values().collect();
    comps.sort_by(|a, b| lex_cmp(*a, *b));
    comps
}

/// Coefficients `c` with `Σ c_k · rows_k = v`, for linearly independent rows.
fn solve_in_rows(rows: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    // Kernel of [rows^T | -v] has a vector with last coordinate 1.
    let k = rows.rows();
    let mut m = RationalMatrix::zeros(rows.cols(), k + 1);
    m.place(0, 0, &rows.transpose());
    for (r, x) in v.iter().enumerate() {
        m.set(r, k, -x.clone());
    }
    let ker = crate::linalg::kernel_basis(&m);
    let row = (0..ker.dim())
        .map(|r| ker.basis().row(r).to_vec())
        .find(|r| !r[k].is_zero())
        .expect("vector lies in the span");
    let last = row[k].clone();
    row[..k].iter().map(|x| x / &last).collect()
}

/// Irreducible factors of stratum `s`.
pub fn decompose_irreducible(poset: &StratumPoset, s: usize) -> Vec<usize> {
    poset.stratification().stratum(s).factors.clone()
}

/// Whether `z` admits a transverse stratum `U` such that every hyperplane
/// contains `Z` or `U`.
pub fn is_good_stratum(poset: &StratumPoset, z: usize) -> bool {
    let zs = poset.stratum(z);
    let others = IndexMask::full(poset.forms().len()).difference(zs.hyperplanes);
    let u = poset.stratum(poset.stratum_of(others));
    zs.codim + u.codim == zs.orthogonal.sum(&u.orthogonal).dim()
}

/// A color assignment keyed by the hyperplane set of a stratum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coloring {
    entries: BTreeMap<IndexMask, Color>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, hyperplanes: IndexMask, color: Color) {
        self.entries.insert(hyperplanes, color);
    }

    pub fn get(&self, hyperplanes: IndexMask) -> Option<Color> {
        self.entries.get(&hyperplanes).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (IndexMask, Color)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Checks a coloring and returns the color of every irreducible strict
/// stratum (indexed by stratum; `None` elsewhere). Hyperplanes take the
/// color of their side when absent; the stratum `exempt` may stay uncolored.
pub fn validate_coloring(
    poset: &StratumPoset,
    coloring: &Coloring,
    exempt: Option<usize>,
) -> Result<Vec<Option<Color>>, ArrangementError> {
    let strat = poset.stratification();
    let mut colors: Vec<Option<Color>> = vec![None; poset.len()];
    for (mask, color) in coloring.entries() {
        let Some(s) = strat.find(mask) else {
            let names: Vec<&str> = mask
                .iter()
                .filter_map(|h| poset.forms().get(h).map(|f| f.label.as_str()))
                .collect();
            return Err(ArrangementError::NotAStratum(format!("{{{}}}", names.join(","))));
        };
        if poset.stratum(s).codim == 1 {
            let h = mask.first().unwrap();
            if poset.forms()[h].side != color {
                return Err(ArrangementError::SideMismatch(poset.forms()[h].label.clone()));
            }
        }
        if s == 0 {
            return Err(ArrangementError::NotAStratum("ambient".into()));
        }
        colors[s] = Some(color);
    }
    for (h, f) in poset.forms().iter().enumerate() {
        colors[poset.hyperplane_stratum(h)] = Some(f.side);
    }
    let mut irreducible = vec![None; poset.len()];
    for s in 1..poset.len() {
        if strat.stratum(s).irreducible {
            if colors[s].is_none() && Some(s) != exempt {
                return Err(ArrangementError::MissingColor(poset.label(s)));
            }
            irreducible[s] = colors[s];
        }
    }
    for s in 1..poset.len() {
        let st = strat.stratum(s);
        if st.irreducible {
            continue;
        }
        let Some(c) = colors[s] else { continue };
        let factor_colors: Option<Vec<Color>> = st.factors.iter().map(|&f| irreducible[f]).collect();
        if let Some(fc) = factor_colors {
            if fc.iter().all(|&x| x == fc[0]) && fc[0] != c {
                return Err(ArrangementError::KunnethViolation(poset.label(s)));
            }
        }
    }
    Ok(irreducible)
}

/// The λ-extreme (resp. μ-extreme) coloring: a stratum gets `side` when it
/// lies in some hyperplane of that side, the other color otherwise.
pub fn extreme_coloring(poset: &StratumPoset, side: Color) -> Coloring {
    let strat = poset.stratification();
    let mut c = Coloring::new();
    for s in 1..poset.len() {
        if !strat.stratum(s).irreducible {
            continue;
        }
        let hit = poset.stratum(s).hyperplanes.iter().any(|h| poset.forms()[h].side == side);
        c.set(poset.stratum(s).hyperplanes, if hit { side } else { side.dual() });
    }
    c
}

/// Hyperplanes with sides, their intersection poset and the colors of the
/// irreducible strict strata.
#[derive(Clone, Debug)]
pub struct BiArrangement {
    poset: StratumPoset,
    irreducible_colors: Vec<Option<Color>>,
}

impl BiArrangement {
    pub fn new(ambient_dim: usize, forms: Vec<LinearForm>, coloring: &Coloring) -> Result<Self, ArrangementError> {
        let poset = StratumPoset::build(ambient_dim, forms)?;
        Self::from_poset(poset, coloring)
    }

    pub fn from_poset(poset: StratumPoset, coloring: &Coloring) -> Result<Self, ArrangementError> {
        let irreducible_colors = validate_coloring(&poset, coloring, None)?;
        Ok(BiArrangement {
            poset,
            irreducible_colors,
        })
    }

    /// Assumes `irreducible_colors` is defined exactly on the irreducible
    /// strict strata, except possibly at `exempt`.
    pub fn from_colors(poset: StratumPoset, irreducible_colors: Vec<Option<Color>>) -> Self {
        BiArrangement {
            poset,
            irreducible_colors,
        }
    }

    /// Every stratum gets the same color; the hyperplanes must all be on that side.
    pub fn constant(ambient_dim: usize, forms: Vec<LinearForm>, color: Color) -> Result<Self, ArrangementError> {
        let forms: Vec<LinearForm> = forms
            .into_iter()
            .map(|f| LinearForm { side: color, ..f })
            .collect();
        let poset = StratumPoset::build(ambient_dim, forms)?;
        let colors = (0..poset.len())
            .map(|s| poset.stratification().stratum(s).irreducible.then_some(color))
            .collect();
        Ok(Self::from_colors(poset, colors))
    }

    pub fn poset(&self) -> &StratumPoset {
        &self.poset
    }

    pub fn stratification(&self) -> &Stratification {
        self.poset.stratification()
    }

    pub fn forms(&self) -> &[LinearForm] {
        self.poset.forms()
    }

    pub fn ambient_dim(&self) -> usize {
        self.poset.ambient_dim()
    }

    /// Colors of the irreducible strict strata, indexed by stratum.
    pub fn irreducible_colors(&self) -> &[Option<Color>] {
        &self.irreducible_colors
    }

    pub fn color(&self, s: usize) -> Option<Color> {
        self.irreducible_colors[s]
    }

    /// The coloring as explicit entries on irreducible strict strata.
    pub fn coloring(&self) -> Coloring {
        let mut c = Coloring::new();
        for (s, col) in self.irreducible_colors.iter().enumerate() {
            if let Some(col) = col {
                c.set(self.poset.stratum(s).hyperplanes, *col);
            }
        }
        c
    }

    pub fn circuits(&self) -> Result<Vec<Circuit>, ArrangementError> {
        self.poset.circuits(DEFAULT_CIRCUIT_CAP)
    }

    /// Sides and colors swapped.
    pub fn dual(&self) -> BiArrangement {
        let forms = self
            .forms()
            .iter()
            .map(|f| LinearForm {
                side: f.side.dual(),
                ..f.clone()
            })
            .collect();
        let poset = StratumPoset::build(self.ambient_dim(), forms).expect("same forms");
        BiArrangement {
            poset,
            irreducible_colors: self.irreducible_colors.iter().map(|c| c.map(Color::dual)).collect(),
        }
    }

    /// Product arrangement in the direct sum of the two ambient spaces.
    pub fn product(a: &BiArrangement, b: &BiArrangement) -> BiArrangement {
        let (na, nb) = (a.ambient_dim(), b.ambient_dim());
        let mut forms = Vec::new();
        for f in a.forms() {
            let mut coeffs = f.coeffs.clone();
            coeffs.resize(na + nb, Rational::zero());
            forms.push(LinearForm::new(coeffs, format!("{}'", f.label), f.side));
        }
        for f in b.forms() {
            let mut coeffs = vec![Rational::zero(); na];
            coeffs.extend(f.coeffs.iter().cloned());
            forms.push(LinearForm::new(coeffs, format!("{}\"", f.label), f.side));
        }
        let shift = a.forms().len();
        let poset = StratumPoset::build(na + nb, forms).expect("product forms are distinct");
        let mut colors = vec![None; poset.len()];
        for (s, c) in a.irreducible_colors.iter().enumerate() {
            if let Some(c) = c {
                colors[poset.find(a.poset.stratum(s).hyperplanes).unwrap()] = Some(*c);
            }
        }
        for (s, c) in b.irreducible_colors.iter().enumerate() {
            if let Some(c) = c {
                colors[poset.find(b.poset.stratum(s).hyperplanes.shifted(shift)).unwrap()] = Some(*c);
            }
        }
        BiArrangement::from_colors(poset, colors)
    }

    /// Irreducible strict strata of codimension at least two.
    pub fn higher_irreducibles(&self) -> Vec<usize> {
        let strat = self.stratification();
        (0..strat.len())
            .filter(|&s| strat.stratum(s).irreducible && strat.codim(s) >= 2)
            .collect()
    }
}

/// Coordinates of `v` in the span of `forms[mask]`, if it lies there.
pub fn express_in_forms(forms: &[LinearForm], mask: IndexMask, n: usize, v: &[Rational]) -> Option<Vec<Rational>> {
    let sub = Subspace::span(&forms_matrix(forms, mask, n));
    coordinates_in_span(&sub, v).ok()
}
