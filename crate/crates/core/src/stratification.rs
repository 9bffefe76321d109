//! Abstract stratified spaces: strata indexed by the set of divisor
//! components containing them, with codimensions, cover relations and
//! irreducible decompositions.
//!
//! Linear arrangements, their products and their iterated blow-ups all
//! reduce to this shape, and the bi-complex machinery only ever sees it.

use std::collections::HashMap;

use crate::mask::{lex_cmp, IndexMask};

/// Color of a stratum (or side of a hyperplane).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Lambda,
    Mu,
}

impl Color {
    pub fn dual(self) -> Color {
        match self {
            Color::Lambda => Color::Mu,
            Color::Mu => Color::Lambda,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Lambda => "lambda",
            Color::Mu => "mu",
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A divisor component (a hyperplane, or an exceptional divisor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub side: Color,
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractStratum {
    pub divisors: IndexMask,
    pub codim: usize,
    pub irreducible: bool,
    /// Irreducible factors, as stratum indices. Empty for the ambient space,
    /// `[self]` for irreducible strata.
    pub factors: Vec<usize>,
}

/// Input record for [`Stratification::new`].
#[derive(Clone, Debug)]
pub struct StratumSpec {
    pub divisors: IndexMask,
    pub codim: usize,
    pub irreducible: bool,
    pub factor_keys: Vec<IndexMask>,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum StratificationError {
    #[error("no unique codimension-0 stratum")]
    NoAmbient,
    #[error("two strata share the divisor set {0:?}")]
    DuplicateKey(IndexMask),
    #[error("factor {0:?} is not a stratum")]
    UnknownFactor(IndexMask),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    components: Vec<Component>,
    strata: Vec<AbstractStratum>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    index: HashMap<IndexMask, usize>,
}

impl Stratification {
    /// Builds a stratification; strata are reordered by codimension, then by
    /// their sorted divisor lists. Cover relations are derived from divisor
    /// inclusion and codimension.
    pub fn new(components: Vec<Component>, mut specs: Vec<StratumSpec>) -> Result<Self, StratificationError> {
        specs.sort_by(|a, b| a.codim.cmp(&b.codim).then_with(|| lex_cmp(a.divisors, b.divisors)));
        if specs.iter().filter(|s| s.codim == 0).count() != 1 || specs[0].codim != 0 {
            return Err(StratificationError::NoAmbient);
        }
        let mut index = HashMap::with_capacity(specs.len());
        for (k, s) in specs.iter().enumerate() {
            if index.insert(s.divisors, k).is_some() {
                return Err(StratificationError::DuplicateKey(s.divisors));
            }
        }
        let mut strata = Vec::with_capacity(specs.len());
        for s in &specs {
            let factors = s
                .factor_keys
                .iter()
                .map(|k| index.get(k).copied().ok_or(StratificationError::UnknownFactor(*k)))
                .collect::<Result<Vec<_>, _>>()?;
            strata.push(AbstractStratum {
                divisors: s.divisors,
                codim: s.codim,
                irreducible: s.irreducible,
                factors,
            });
        }
        let n = strata.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for s in 0..n {
            for t in 0..n {
                if strata[t].codim + 1 == strata[s].codim && strata[t].divisors.is_subset(strata[s].divisors) {
                    up[s].push(t);
                    down[t].push(s);
                }
            }
        }
        Ok(Stratification {
            components,
            strata,
            up,
            down,
            index,
        })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn stratum(&self, s: usize) -> &AbstractStratum {
        &self.strata[s]
    }

    pub fn strata(&self) -> &[AbstractStratum] {
        &self.strata
    }

    pub fn codim(&self, s: usize) -> usize {
        self.strata[s].codim
    }

    pub fn ambient(&self) -> usize {
        0
    }

    pub fn max_codim(&self) -> usize {
        self.strata.iter().map(|s| s.codim).max().unwrap_or(0)
    }

    /// Strata `T` with `S ↪¹ T`.
    pub fn up(&self, s: usize) -> &[usize] {
        &self.up[s]
    }

    /// Strata `R` with `R ↪¹ S`.
    pub fn down(&self, s: usize) -> &[usize] {
        &self.down[s]
    }

    pub fn find(&self, divisors: IndexMask) -> Option<usize> {
        self.index.get(&divisors).copied()
    }

    /// Whether stratum `s` is contained in stratum `t`.
    pub fn is_contained(&self, s: usize, t: usize) -> bool {
        self.strata[t].divisors.is_subset(self.strata[s].divisors)
    }

    /// All strata containing `s` (including `s`), in canonical order.
    pub fn above(&self, s: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.is_contained(s, t)).collect()
    }

    /// All strata contained in `s` (including `s`).
    pub fn below(&self, s: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.is_contained(t, s)).collect()
    }

    /// Strata `T` with `S ↪² T`.
    pub fn up2(&self, s: usize) -> Vec<usize> {
        let c = self.codim(s);
        (0..self.len())
            .filter(|&t| self.codim(t) + 2 == c && self.is_contained(s, t))
            .collect()
    }

    /// Common covers `T` with `S ↪¹ T` and `U ↪¹ T`.
    pub fn common_up(&self, s: usize, u: usize) -> Vec<usize> {
        self.up[s].iter().copied().filter(|t| self.up[u].contains(t)).collect()
    }

    pub fn strict_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.strata[s].irreducible).collect()
    }

    pub fn label(&self, s: usize) -> String {
        let d = self.strata[s].divisors;
        if d.is_empty() {
            return "ambient".to_string();
        }
        d.iter().map(|c| self.components[c].label.as_str()).collect::<Vec<_>>().join("∩")
    }

    /// Labels of the components containing `s`, sorted.
    pub fn label_set(&self, s: usize) -> Vec<String> {
        let mut v: Vec<String> = self.strata[s]
            .divisors
            .iter()
            .map(|c| self.components[c].label.clone())
            .collect();
        v.sort();
        v
    }

    /// The stratum of the divisor component `c`.
    pub fn component_stratum(&self, c: usize) -> Option<usize> {
        self.find(IndexMask::singleton(c))
    }

    /// Same strata with every component side swapped.
    pub fn dual(&self) -> Stratification {
        let mut d = self.clone();
        for c in &mut d.components {
            c.side = c.side.dual();
        }
        d
    }

    /// Product stratification; components of `b` are shifted after those of
    /// `a`. Returns the product and the map `(s_a, s_b) ↦ index`.
    pub fn product(a: &Stratification, b: &Stratification) -> (Stratification, Vec<Vec<usize>>) {
        let shift = a.components.len();
        let mut components = a.components.clone();
        components.extend(b.components.iter().cloned());
        let key = |sa: usize, sb: usize| a.strata[sa].divisors.union(b.strata[sb].divisors.shifted(shift));
        let mut specs = Vec::new();
        for sa in 0..a.len() {
            for sb in 0..b.len() {
                let mut factor_keys: Vec<IndexMask> = a.strata[sa].factors.iter().map(|&f| key(f, 0)).collect();
                factor_keys.extend(b.strata[sb].factors.iter().map(|&f| key(0, f)));
                specs.push(StratumSpec {
                    divisors: key(sa, sb),
                    codim: a.codim(sa) + b.codim(sb),
                    irreducible: factor_keys.len() == 1,
                    factor_keys,
                });
            }
        }
        let p = Stratification::new(components, specs).expect("product of stratifications is well formed");
        let map = (0..a.len())
            .map(|sa| (0..b.len()).map(|sb| p.find(key(sa, sb)).unwrap()).collect())
            .collect();
        (p, map)
    }
}

/// Colors of all strata, derived from the colors of the irreducible ones.
///
/// Reducible strata take the common color of their factors, or `mixed` when
/// the factors disagree. The ambient space and uncolored irreducible strata
/// get `None`.
pub fn effective_colors(strat: &Stratification, irreducible: &[Option<Color>], mixed: Color) -> Vec<Option<Color>> {
    (0..strat.len())
        .map(|s| {
            let st = strat.stratum(s);
            if st.codim == 0 {
                return None;
            }
            if st.irreducible {
                return irreducible[s];
            }
            let colors: Option<Vec<Color>> = st.factors.iter().map(|&f| irreducible[f]).collect();
            let colors = colors?;
            if colors.iter().all(|&c| c == colors[0]) {
                Some(colors[0])
            } else {
                Some(mixed)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean2() -> Stratification {
        let comps = vec![
            Component { label: "x".into(), side: Color::Lambda, exceptional: false },
            Component { label: "y".into(), side: Color::Mu, exceptional: false },
        ];
        let m = |v: &[usize]| v.iter().copied().collect::<IndexMask>();
        let specs = vec![
            StratumSpec { divisors: m(&[]), codim: 0, irreducible: false, factor_keys: vec![] },
            StratumSpec { divisors: m(&[0]), codim: 1, irreducible: true, factor_keys: vec![m(&[0])] },
            StratumSpec { divisors: m(&[1]), codim: 1, irreducible: true, factor_keys: vec![m(&[1])] },
            StratumSpec { divisors: m(&[0, 1]), codim: 2, irreducible: false, factor_keys: vec![m(&[0]), m(&[1])] },
        ];
        Stratification::new(comps, specs).unwrap()
    }

    #[test]
    fn diamond_covers() {
        let s = boolean2();
        assert_eq!(s.len(), 4);
        assert_eq!(s.up(3), &[1, 2]);
        assert_eq!(s.down(0), &[1, 2]);
        assert_eq!(s.up2(3), vec![0]);
        assert_eq!(s.common_up(1, 2), vec![0]);
        assert_eq!(s.label(3), "x∩y");
    }

    #[test]
    fn mixed_colors() {
        let s = boolean2();
        let irr = vec![None, Some(Color::Lambda), Some(Color::Mu), None];
        let e = effective_colors(&s, &irr, Color::Mu);
        assert_eq!(e, vec![None, Some(Color::Lambda), Some(Color::Mu), Some(Color::Mu)]);
    }

    #[test]
    fn product_of_diamonds() {
        let s = boolean2();
        let (p, map) = Stratification::product(&s, &s);
        assert_eq!(p.len(), 16);
        assert_eq!(p.codim(map[3][3]), 4);
        assert_eq!(p.stratum(map[3][3]).factors.len(), 4);
        assert!(p.stratum(map[1][0]).irreducible);
        assert!(!p.stratum(map[1][1]).irreducible);
    }
}
