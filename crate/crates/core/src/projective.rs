//! Projective bi-arrangements: truncated total complexes, weight-graded
//! dimensions of the motive, and the multizeta family.

use thiserror::Error;

use crate::arrangement::{ArrangementError, BiArrangement, Coloring, LinearForm, StratumPoset};
use crate::bicomplex::{BicomplexError, OSBicomplex};
use crate::exactness::{check_exactness, check_tameness, TamenessReport};
use crate::linalg::{kernel_basis, q, quotient_structure, Rational, RationalMatrix, Subspace};
use crate::mask::IndexMask;
use crate::stratification::Color;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Bicomplex(#[from] BicomplexError),
    #[error("the origin is not a stratum")]
    OriginNotStratum,
    #[error("projective space of dimension {0} is not allowed")]
    DimensionTooSmall(usize),
    #[error("not exact at stratum {0}")]
    NotExact(String),
    #[error("not λ-exact: {0}")]
    NotLambdaExact(String),
    #[error("not μ-exact: {0}")]
    NotMuExact(String),
    #[error("invalid composition {0:?}")]
    InvalidComposition(Vec<usize>),
}

/// A central bi-arrangement in `ℂ^{n+1}` whose origin may stay uncolored.
#[derive(Clone, Debug)]
pub struct ProjectiveBiArrangement {
    n: usize,
    origin: usize,
    biarr: BiArrangement,
    partial: OSBicomplex,
    lambda_defined: bool,
    mu_defined: bool,
    /// Labels of hyperplanes dropped because they coincided with earlier ones.
    pub deduplicated: Vec<String>,
}

/// `ambient_dim` is `n + 1`. A color given for the origin in `coloring` is
/// ignored; both completions are examined.
pub fn make_projective(
    ambient_dim: usize,
    forms: Vec<LinearForm>,
    coloring: &Coloring,
) -> Result<ProjectiveBiArrangement, ProjectiveError> {
    if ambient_dim < 2 {
        return Err(ProjectiveError::DimensionTooSmall(ambient_dim.saturating_sub(1)));
    }
    let poset = StratumPoset::build(ambient_dim, forms)?;
    let origin = poset.minimal();
    if poset.stratum(origin).codim != ambient_dim {
        return Err(ProjectiveError::OriginNotStratum);
    }
    let mut partial_coloring = Coloring::new();
    for (m, c) in coloring.entries() {
        if poset.find(m) != Some(origin) {
            partial_coloring.set(m, c);
        }
    }
    let irreducible = crate::arrangement::validate_coloring(&poset, &partial_coloring, Some(origin))?;
    let biarr = BiArrangement::from_colors(poset, irreducible);
    let partial = OSBicomplex::build(&biarr)?;
    let strat = biarr.stratification();
    let (lambda_defined, mu_defined) = if strat.stratum(origin).irreducible {
        (true, true)
    } else {
        let fc: Vec<Option<Color>> = strat.stratum(origin).factors.iter().map(|&f| biarr.color(f)).collect();
        (fc.contains(&Some(Color::Lambda)), fc.contains(&Some(Color::Mu)))
    };
    Ok(ProjectiveBiArrangement {
        n: ambient_dim - 1,
        origin,
        biarr,
        partial,
        lambda_defined,
        mu_defined,
        deduplicated: Vec::new(),
    })
}

impl ProjectiveBiArrangement {
    /// Dimension of the projective space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// The partial bi-arrangement; the origin is uncolored when irreducible.
    pub fn biarrangement(&self) -> &BiArrangement {
        &self.biarr
    }

    /// Bi-complex on all strata but the origin (whose spaces are zero when it
    /// is uncolored).
    pub fn partial_bicomplex(&self) -> &OSBicomplex {
        &self.partial
    }

    pub fn is_defined(&self, color: Color) -> bool {
        match color {
            Color::Lambda => self.lambda_defined,
            Color::Mu => self.mu_defined,
        }
    }

    /// `ℬ_λ` or `ℬ_μ`, when well defined.
    pub fn completion(&self, color: Color) -> Option<(BiArrangement, OSBicomplex)> {
        if !self.is_defined(color) {
            return None;
        }
        let mut irr = self.biarr.irreducible_colors().to_vec();
        if self.biarr.stratification().stratum(self.origin).irreducible {
            irr[self.origin] = Some(color);
        }
        let b = BiArrangement::from_colors(self.biarr.poset().clone(), irr);
        let bc = OSBicomplex::from_stratification(b.stratification(), b.irreducible_colors(), color)
            .expect("completion of a valid partial bi-complex");
        Some((b, bc))
    }

    /// First strict stratum other than the origin that is not exact.
    pub fn exactness_failure(&self) -> Option<String> {
        check_exactness(&self.partial)
            .strata
            .into_iter()
            .find(|e| e.stratum != self.origin && !e.exact)
            .map(|e| e.label)
    }

    pub fn is_exact(&self) -> bool {
        self.exactness_failure().is_none()
    }

    /// Failure of `color`-exactness, if any.
    pub fn completion_failure(&self, color: Color) -> Option<String> {
        let Some((_, bc)) = self.completion(color) else {
            return Some("origin color not well defined".into());
        };
        check_exactness(&bc).first_failure().map(|e| e.label.clone())
    }

    pub fn tameness(&self, color: Color) -> Option<Result<TamenessReport, ArrangementError>> {
        self.completion(color).map(|(b, _)| check_tameness(&b))
    }
}

/// `A_{i,j} = ⊕_{codim S = i+j} A^S_{i,j}`: strata and offsets.
fn global_blocks(bc: &OSBicomplex, i: usize, j: usize) -> (Vec<(usize, usize)>, usize) {
    let st = bc.stratification();
    let mut acc = 0;
    let mut out = Vec::new();
    for s in 0..st.len() {
        if st.codim(s) == i + j {
            out.push((s, acc));
            acc += bc.dim(s, i);
        }
    }
    (out, acc)
}

pub fn global_dim(bc: &OSBicomplex, i: usize, j: usize) -> usize {
    global_blocks(bc, i, j).1
}

/// `d′: A_{i,j} → A_{i−1,j}`; `i ≥ 1`.
pub fn global_dprime(bc: &OSBicomplex, i: usize, j: usize) -> RationalMatrix {
    let (src, sd) = global_blocks(bc, i, j);
    let (dst, dd) = global_blocks(bc, i - 1, j);
    let mut m = RationalMatrix::zeros(dd, sd);
    for &(s, so) in &src {
        for &(t, to) in &dst {
            if bc.stratification().up(s).contains(&t) {
                m.place(to, so, bc.dprime(s, t, i));
            }
        }
    }
    m
}

/// `d″: A_{i,j} → A_{i,j+1}`.
pub fn global_ddouble(bc: &OSBicomplex, i: usize, j: usize) -> RationalMatrix {
    let (src, sd) = global_blocks(bc, i, j);
    let (dst, dd) = global_blocks(bc, i, j + 1);
    let mut m = RationalMatrix::zeros(dd, sd);
    for &(t, to) in &src {
        for &(p, po) in &dst {
            if bc.stratification().up(p).contains(&t) {
                m.place(po, to, bc.ddouble(p, t, i));
            }
        }
    }
    m
}

/// Total complex of the rectangle `0 ≤ i ≤ k`, `0 ≤ j ≤ n − k`, with
/// differential `d′ + (−1)^i d″` of degree `−1`.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    pub k: usize,
    pub n: usize,
    /// `dims[d]` is the dimension in total degree `d − (n − k)`.
    pub dims: Vec<usize>,
    /// `maps[d]` goes from degree index `d + 1` to `d`.
    pub maps: Vec<RationalMatrix>,
}

impl TruncatedComplex {
    pub fn build(bc: &OSBicomplex, n: usize, k: usize) -> TruncatedComplex {
        let low = n - k;
        // Pieces of degree r = i − j, indexed by r + low.
        let pieces = |r: isize| -> Vec<(usize, usize)> {
            (0..=k)
                .filter_map(|i| {
                    let j = i as isize - r;
                    (0..=low as isize).contains(&j).then_some((i, j as usize))
                })
                .collect()
        };
        let top = k + low;
        let mut dims = Vec::with_capacity(top + 1);
        let mut layout = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let ps = pieces(d as isize - low as isize);
            let mut acc = 0;
            let mut offs = Vec::new();
            for &(i, j) in &ps {
                debug_assert!(i + j <= n);
                offs.push((i, j, acc));
                acc += global_dim(bc, i, j);
            }
            dims.push(acc);
            layout.push(offs);
        }
        let find = |d: usize, i: usize, j: usize| layout[d].iter().find(|p| p.0 == i && p.1 == j).map(|p| p.2);
        let mut maps = Vec::with_capacity(top);
        for d in 0..top {
            let mut m = RationalMatrix::zeros(dims[d], dims[d + 1]);
            for &(i, j, so) in &layout[d + 1] {
                if i >= 1 {
                    if let Some(to) = find(d, i - 1, j) {
                        m.place(to, so, &global_dprime(bc, i, j));
                    }
                }
                if let Some(to) = find(d, i, j + 1) {
                    let dd = global_ddouble(bc, i, j);
                    m.place(to, so, &if i % 2 == 0 { dd } else { dd.neg() });
                }
            }
            maps.push(m);
        }
        TruncatedComplex { k, n, dims, maps }
    }

    pub fn squares_to_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// `H_r` for `r = −(n − k), …, k`, in that order.
    pub fn homology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(RationalMatrix::rank).collect();
        (0..self.dims.len())
            .map(|d| {
                let out = if d > 0 { ranks[d - 1] } else { 0 };
                let inc = ranks.get(d).copied().unwrap_or(0);
                self.dims[d] - out - inc
            })
            .collect()
    }

    /// `H_r`, zero outside the range.
    pub fn homology_at(&self, r: isize) -> usize {
        let idx = r + (self.n - self.k) as isize;
        if idx < 0 {
            return 0;
        }
        self.homology().get(idx as usize).copied().unwrap_or(0)
    }

    /// `Σ (−1)^r dim` over the rectangle.
    pub fn euler_characteristic(&self) -> i64 {
        let low = (self.n - self.k) as isize;
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &x)| if (d as isize - low).rem_euclid(2) == 0 { x as i64 } else { -(x as i64) })
            .sum()
    }
}

/// Dimensions of `gr^W_{2k} H^r` for `0 ≤ r ≤ 2n`, `0 ≤ k ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub n: usize,
    /// Indexed `[r][k]`.
    pub entries: Vec<Vec<usize>>,
}

impl WeightTable {
    fn zero(n: usize) -> WeightTable {
        WeightTable {
            n,
            entries: vec![vec![0; n + 1]; 2 * n + 1],
        }
    }

    pub fn get(&self, r: usize, k: usize) -> usize {
        self.entries[r][k]
    }

    /// Total dimension of `H^r`.
    pub fn betti(&self, r: usize) -> usize {
        self.entries[r].iter().sum()
    }
}

/// `gr^W_{2k} H^r ≅ H_{2k−r}` of the truncated complex.
pub fn weight_graded_motive(pb: &ProjectiveBiArrangement) -> Result<WeightTable, ProjectiveError> {
    if let Some(label) = pb.exactness_failure() {
        return Err(ProjectiveError::NotExact(label));
    }
    Ok(weight_table_from(&pb.partial, pb.n))
}

/// The table read off the truncated complexes of `bc`, without any exactness
/// check.
pub fn weight_table_from(bc: &OSBicomplex, n: usize) -> WeightTable {
    let mut t = WeightTable::zero(n);
    for k in 0..=n {
        let tc = TruncatedComplex::build(bc, n, k);
        for r in 0..=2 * n {
            t.entries[r][k] = tc.homology_at(2 * k as isize - r as isize);
        }
    }
    t
}

/// `gr^W_{2k} H^r` as the homology at `j = r − k` of the complex
/// `(A_{k+1,•} / d′A_{k+2,•}, d″)` of `ℬ_λ`.
pub fn lambda_exact_motive(pb: &ProjectiveBiArrangement) -> Result<WeightTable, ProjectiveError> {
    let (_, bc) = pb
        .completion(Color::Lambda)
        .ok_or_else(|| ProjectiveError::NotLambdaExact("origin color not well defined".into()))?;
    if let Some(f) = check_exactness(&bc).first_failure() {
        return Err(ProjectiveError::NotLambdaExact(f.label.clone()));
    }
    let n = pb.n;
    let mut t = WeightTable::zero(n);
    for r in 0..=n {
        for k in 0..=r {
            t.entries[r][k] = lambda_slot(&bc, n, k, r - k);
        }
    }
    Ok(t)
}

fn image_of(m: &RationalMatrix) -> Subspace {
    Subspace::span(&m.transpose())
}

/// Image of `d′: A_{k+2,j} → A_{k+1,j}` inside `A_{k+1,j}`.
fn dprime_image(bc: &OSBicomplex, n: usize, k: usize, j: usize) -> Subspace {
    let dim = global_dim(bc, k + 1, j);
    if k + 2 + j > n + 1 {
        return Subspace::zero(dim);
    }
    image_of(&global_dprime(bc, k + 2, j))
}

fn lambda_slot(bc: &OSBicomplex, n: usize, k: usize, j: usize) -> usize {
    let i = k + 1;
    let dim = global_dim(bc, i, j);
    let here = dprime_image(bc, n, k, j);
    // Cycles: x with d″x ∈ d′A_{k+2,j+1}.
    let cycles = if i + j < n + 1 {
        let next = dprime_image(bc, n, k, j + 1);
        let qs = quotient_structure(next.ambient_dim(), &next).expect("subspace of the right size");
        kernel_basis(&qs.projection.mul(&global_ddouble(bc, i, j))).dim()
    } else {
        dim
    };
    let boundaries = if j >= 1 {
        here.sum(&image_of(&global_ddouble(bc, i, j - 1)))
    } else {
        here
    };
    cycles - boundaries.dim()
}

/// `gr^W_{2k} H^r` as the homology at `i = n + k − r` of the complex
/// `(ker d″ ⊆ A_{•,n−k+1}, d′)` of `ℬ_μ`.
pub fn mu_exact_motive(pb: &ProjectiveBiArrangement) -> Result<WeightTable, ProjectiveError> {
    let (_, bc) = pb
        .completion(Color::Mu)
        .ok_or_else(|| ProjectiveError::NotMuExact("origin color not well defined".into()))?;
    if let Some(f) = check_exactness(&bc).first_failure() {
        return Err(ProjectiveError::NotMuExact(f.label.clone()));
    }
    let n = pb.n;
    let mut t = WeightTable::zero(n);
    for k in 0..=n {
        for i in 0..=k {
            t.entries[n + k - i][k] = mu_slot(&bc, n, i, n - k + 1);
        }
    }
    Ok(t)
}

/// `ker d″` inside `A_{i,j}`, as a basis in the rows.
fn ddouble_kernel(bc: &OSBicomplex, n: usize, i: usize, j: usize) -> Subspace {
    if i + j > n {
        return Subspace::full(global_dim(bc, i, j));
    }
    kernel_basis(&global_ddouble(bc, i, j))
}

fn mu_slot(bc: &OSBicomplex, n: usize, i: usize, j: usize) -> usize {
    let y = ddouble_kernel(bc, n, i, j);
    let cycles = if i >= 1 {
        let d = global_dprime(bc, i, j);
        let restricted = d.mul(&y.basis().transpose());
        kernel_basis(&restricted).dim()
    } else {
        y.dim()
    };
    let boundaries = if i + 1 + j <= n + 1 {
        let y1 = ddouble_kernel(bc, n, i + 1, j);
        global_dprime(bc, i + 1, j).mul(&y1.basis().transpose()).rank()
    } else {
        0
    };
    cycles - boundaries
}

/// `(1, 0^{n₁−1}, …, 1, 0^{n_r−1})`.
fn composition_tuple(ns: &[usize]) -> Vec<i64> {
    ns.iter().flat_map(|&m| std::iter::once(1).chain(std::iter::repeat_n(0, m - 1))).collect()
}

/// The multizeta bi-arrangement `Z(n₁, …, n_r)` in `ℙⁿ`, `n = Σ nᵢ`.
pub fn multizeta_biarrangement(ns: &[usize]) -> Result<ProjectiveBiArrangement, ProjectiveError> {
    let valid = !ns.is_empty() && ns.iter().all(|&m| m >= 1) && *ns.last().unwrap() >= 2;
    if !valid {
        return Err(ProjectiveError::InvalidComposition(ns.to_vec()));
    }
    let a = composition_tuple(ns);
    let n = a.len();
    let dim = n + 1;
    let unit = |k: usize| -> Vec<Rational> { (0..dim).map(|c| q((c == k) as i64)).collect() };
    let combo = |x: usize, y: usize, cy: i64| -> Vec<Rational> {
        let mut v = unit(x);
        v[y] -= q(cy);
        v
    };
    let mut candidates = vec![LinearForm::new(unit(0), "L0", Color::Lambda)];
    for k in 1..=n {
        let v = if a[k - 1] == 0 { unit(k) } else { combo(k, 0, a[k - 1]) };
        candidates.push(LinearForm::new(v, format!("L{k}"), Color::Lambda));
    }
    candidates.push(LinearForm::new(unit(1), "M0", Color::Mu));
    for k in 1..n {
        candidates.push(LinearForm::new(combo(k, k + 1, 1), format!("M{k}"), Color::Mu));
    }
    candidates.push(LinearForm::new(combo(n, 0, 1), format!("M{n}"), Color::Mu));

    let mut forms: Vec<LinearForm> = Vec::new();
    let mut dropped = Vec::new();
    for f in candidates {
        let dup = forms
            .iter()
            .any(|g| Subspace::span_of(dim, std::slice::from_ref(&g.coeffs)).contains(&f.coeffs));
        if dup {
            dropped.push(f.label);
        } else {
            forms.push(f);
        }
    }
    let poset = StratumPoset::build(dim, forms)?;
    let strat = poset.stratification();
    let m_side: IndexMask = (0..poset.forms().len()).filter(|&h| poset.forms()[h].side == Color::Mu).collect();
    let mut coloring = Coloring::new();
    for s in 1..poset.len() {
        let st = poset.stratum(s);
        if !strat.stratum(s).irreducible || st.codim < 2 || s == poset.minimal() {
            continue;
        }
        let ms = st.hyperplanes.intersection(m_side);
        let color = if poset.rank(ms) == st.codim { Color::Mu } else { Color::Lambda };
        coloring.set(st.hyperplanes, color);
    }
    let forms = poset.forms().to_vec();
    let mut pb = make_projective(dim, forms, &coloring)?;
    pb.deduplicated = dropped;
    Ok(pb)
}
