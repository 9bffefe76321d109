//! The Orlik–Solomon bi-complex of a bi-arrangement, built stratum by
//! stratum in increasing codimension.
//!
//! For a stratum `S` of codimension `c` the spaces `A^S_{i,j}` live in
//! bidegrees with `i + j = c` and are indexed here by `i` alone. For
//! `S ↪¹ T` we store
//!
//! * `d′_{S,T}: A^S_{i,j} → A^T_{i−1,j}`, indexed by the source `i`;
//! * `d″_{S,T}: A^T_{i,j−1} → A^S_{i,j}`, indexed by the target `i`.
//!
//! The differentials commute: `d′d″ = d″d′`.

use std::collections::HashMap;

use thiserror::Error;

use crate::arrangement::BiArrangement;
use crate::linalg::{
    coordinates_of_columns, kernel_basis, quotient_structure, Rational, RationalMatrix, Subspace,
};
use crate::stratification::{effective_colors, Color, Stratification};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BicomplexError {
    #[error("internal commutativity failure at {stratum} in bidegree ({i},{j}): {detail}")]
    InternalCommutativityFailure {
        stratum: String,
        i: usize,
        j: usize,
        detail: String,
    },
}

/// First failing identity found by [`OSBicomplex::verify_identities`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("identity ({identity}) fails for {} in bidegree ({},{})", strata.join(", "), bidegree.0, bidegree.1)]
pub struct IdentityViolation {
    pub identity: &'static str,
    pub strata: Vec<String>,
    pub bidegree: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct OSBicomplex {
    strat: Stratification,
    irreducible_colors: Vec<Option<Color>>,
    colors: Vec<Option<Color>>,
    dims: Vec<Vec<usize>>,
    dprime: HashMap<(usize, usize), Vec<RationalMatrix>>,
    ddouble: HashMap<(usize, usize), Vec<RationalMatrix>>,
}

fn offsets(sizes: impl IntoIterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut acc = 0;
    let offs = sizes
        .into_iter()
        .map(|d| {
            let o = acc;
            acc += d;
            o
        })
        .collect();
    (offs, acc)
}

impl OSBicomplex {
    /// Bi-complex of a bi-arrangement; mixed reducible strata are computed
    /// with the λ recipe.
    pub fn build(biarr: &BiArrangement) -> Result<Self, BicomplexError> {
        Self::from_stratification(biarr.stratification(), biarr.irreducible_colors(), Color::Lambda)
    }

    /// Bi-complex of an abstract stratification. Strict strata whose color
    /// cannot be determined (an uncolored irreducible, or a reducible stratum
    /// with an uncolored factor) get zero spaces.
    pub fn from_stratification(
        strat: &Stratification,
        irreducible_colors: &[Option<Color>],
        mixed: Color,
    ) -> Result<Self, BicomplexError> {
        let colors = effective_colors(strat, irreducible_colors, mixed);
        let mut bc = OSBicomplex {
            strat: strat.clone(),
            irreducible_colors: irreducible_colors.to_vec(),
            colors: colors.clone(),
            dims: Vec::with_capacity(strat.len()),
            dprime: HashMap::new(),
            ddouble: HashMap::new(),
        };
        bc.dims.push(vec![1]);
        for s in 1..strat.len() {
            match colors[s] {
                Some(Color::Lambda) => bc.add_lambda(s)?,
                Some(Color::Mu) => bc.add_mu(s)?,
                None => bc.add_zero(s),
            }
        }
        Ok(bc)
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strat
    }

    /// Color used to build each stratum (`None` for the ambient space and
    /// for uncolored strata).
    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn irreducible_colors(&self) -> &[Option<Color>] {
        &self.irreducible_colors
    }

    /// `dim A^S_{i, codim S − i}`, zero outside the valid range.
    pub fn dim(&self, s: usize, i: usize) -> usize {
        self.dims[s].get(i).copied().unwrap_or(0)
    }

    /// `dim A^S_{i,j}`, zero unless `i + j = codim S`.
    pub fn dim_ij(&self, s: usize, i: usize, j: usize) -> usize {
        if i + j == self.strat.codim(s) {
            self.dim(s, i)
        } else {
            0
        }
    }

    /// Dimensions `dim A^S_{i,c−i}` for `i = 0..=c`.
    pub fn dims(&self, s: usize) -> &[usize] {
        &self.dims[s]
    }

    /// Total dimensions `Σ_S dim A^S_{i,j}`, as a table indexed `[i][j]`.
    pub fn total_dims(&self) -> Vec<Vec<usize>> {
        let n = self.strat.max_codim();
        let mut t = vec![vec![0; n + 1]; n + 1];
        for s in 0..self.strat.len() {
            let c = self.strat.codim(s);
            for i in 0..=c {
                t[i][c - i] += self.dim(s, i);
            }
        }
        t
    }

    /// `d′_{S,T}: A^S_{i,j} → A^T_{i−1,j}`.
    pub fn dprime(&self, s: usize, t: usize, i: usize) -> &RationalMatrix {
        &self.dprime[&(s, t)][i]
    }

    /// `d″_{S,T}: A^T_{i,j−1} → A^S_{i,j}`.
    pub fn ddouble(&self, s: usize, t: usize, i: usize) -> &RationalMatrix {
        &self.ddouble[&(s, t)][i]
    }

    fn add_zero(&mut self, s: usize) {
        let c = self.strat.codim(s);
        self.dims.push(vec![0; c + 1]);
        for &t in self.strat.up(s) {
            let dp = (0..=c)
                .map(|i| RationalMatrix::zeros(if i == 0 { 0 } else { self.dim(t, i - 1) }, 0))
                .collect();
            let dd = (0..=c).map(|i| RationalMatrix::zeros(0, self.dim(t, i))).collect();
            self.dprime.insert((s, t), dp);
            self.ddouble.insert((s, t), dd);
        }
    }

    fn failure(&self, s: usize, i: usize, detail: &str) -> BicomplexError {
        BicomplexError::InternalCommutativityFailure {
            stratum: self.strat.label(s),
            i,
            j: self.strat.codim(s) - i,
            detail: detail.to_string(),
        }
    }

    /// `A^Σ_{i,j} = ker(d′: ⊕ A^S_{i−1,j} → ⊕ A^T_{i−2,j})`.
    fn add_lambda(&mut self, sigma: usize) -> Result<(), BicomplexError> {
        let c = self.strat.codim(sigma);
        let ups = self.strat.up(sigma).to_vec();
        let up2 = self.strat.up2(sigma);
        let mut dims = vec![0; c + 1];
        let mut dp: HashMap<usize, Vec<RationalMatrix>> = ups.iter().map(|&s| (s, Vec::new())).collect();
        let mut dd: HashMap<usize, Vec<RationalMatrix>> = ups.iter().map(|&s| (s, Vec::new())).collect();
        for i in 0..=c {
            if i == 0 {
                for &s in &ups {
                    dp.get_mut(&s).unwrap().push(RationalMatrix::zeros(0, 0));
                    dd.get_mut(&s).unwrap().push(RationalMatrix::zeros(0, self.dim(s, 0)));
                }
                continue;
            }
            let (voff, vdim) = offsets(ups.iter().map(|&s| self.dim(s, i - 1)));
            let (woff, wdim) = offsets(up2.iter().map(|&t| if i >= 2 { self.dim(t, i - 2) } else { 0 }));
            let mut d = RationalMatrix::zeros(wdim, vdim);
            if i >= 2 {
                for (a, &s) in ups.iter().enumerate() {
                    for (b, &t) in up2.iter().enumerate() {
                        if self.strat.up(s).contains(&t) {
                            d.place(woff[b], voff[a], self.dprime(s, t, i - 1));
                        }
                    }
                }
            }
            let kernel = kernel_basis(&d);
            let k = kernel.dim();
            dims[i] = k;
            for (a, &s) in ups.iter().enumerate() {
                let block = kernel.basis().block(0, voff[a], k, self.dim(s, i - 1)).transpose();
                dp.get_mut(&s).unwrap().push(block);
            }
            // d″_{Σ,S0} through the kernel inclusion.
            for &s0 in &ups {
                if i == c {
                    dd.get_mut(&s0).unwrap().push(RationalMatrix::zeros(k, 0));
                    continue;
                }
                let src = self.dim(s0, i);
                let mut y = RationalMatrix::zeros(vdim, src);
                for (a, &s) in ups.iter().enumerate() {
                    for t in self.strat.common_up(s0, s) {
                        let m = self.ddouble(s, t, i - 1).mul(self.dprime(s0, t, i));
                        y.accumulate(voff[a], 0, &m);
                    }
                }
                let coords = coordinates_of_columns(&kernel, &y)
                    .map_err(|_| self.failure(sigma, i, "d″ image leaves the kernel"))?;
                dd.get_mut(&s0).unwrap().push(coords);
            }
        }
        self.dims.push(dims);
        for s in ups {
            self.dprime.insert((sigma, s), dp.remove(&s).unwrap());
            self.ddouble.insert((sigma, s), dd.remove(&s).unwrap());
        }
        Ok(())
    }

    /// `A^Σ_{i,j} = coker(d″: ⊕ A^T_{i,j−2} → ⊕ A^S_{i,j−1})`.
    fn add_mu(&mut self, sigma: usize) -> Result<(), BicomplexError> {
        let c = self.strat.codim(sigma);
        let ups = self.strat.up(sigma).to_vec();
        let up2 = self.strat.up2(sigma);
        let mut dims = vec![0; c + 1];
        let mut dp: HashMap<usize, Vec<RationalMatrix>> = ups.iter().map(|&s| (s, Vec::new())).collect();
        let mut dd: HashMap<usize, Vec<RationalMatrix>> = ups.iter().map(|&s| (s, Vec::new())).collect();
        for i in 0..=c {
            let j = c - i;
            if j == 0 {
                for &s in &ups {
                    dp.get_mut(&s).unwrap().push(RationalMatrix::zeros(self.dim(s, c - 1), 0));
                    dd.get_mut(&s).unwrap().push(RationalMatrix::zeros(0, 0));
                }
                continue;
            }
            let (voff, vdim) = offsets(ups.iter().map(|&s| self.dim(s, i)));
            let (woff, wdim) = offsets(up2.iter().map(|&t| if j >= 2 { self.dim(t, i) } else { 0 }));
            let mut d = RationalMatrix::zeros(vdim, wdim);
            if j >= 2 {
                for (a, &s) in ups.iter().enumerate() {
                    for (b, &t) in up2.iter().enumerate() {
                        if self.strat.up(s).contains(&t) {
                            d.place(voff[a], woff[b], self.ddouble(s, t, i));
                        }
                    }
                }
            }
            let image = Subspace::span(&d.transpose());
            let quotient = quotient_structure(vdim, &image).expect("matching ambient dimension");
            let q = quotient.projection.rows();
            dims[i] = q;
            for (a, &s) in ups.iter().enumerate() {
                let block = quotient.projection.block(0, voff[a], q, self.dim(s, i));
                dd.get_mut(&s).unwrap().push(block);
            }
            // d′_{Σ,S0} induced on the cokernel.
            for &s0 in &ups {
                if i == 0 {
                    dp.get_mut(&s0).unwrap().push(RationalMatrix::zeros(0, q));
                    continue;
                }
                let mut f = RationalMatrix::zeros(self.dim(s0, i - 1), vdim);
                for (a, &s) in ups.iter().enumerate() {
                    for t in self.strat.common_up(s0, s) {
                        let m = self.ddouble(s0, t, i - 1).mul(self.dprime(s, t, i));
                        f.accumulate(0, voff[a], &m);
                    }
                }
                if !f.mul(&d).is_zero() {
                    return Err(self.failure(sigma, i, "induced d′ does not kill the image of d″"));
                }
                dp.get_mut(&s0).unwrap().push(f.mul(&quotient.section));
            }
        }
        self.dims.push(dims);
        for s in ups {
            self.dprime.insert((sigma, s), dp.remove(&s).unwrap());
            self.ddouble.insert((sigma, s), dd.remove(&s).unwrap());
        }
        Ok(())
    }

    /// Assembles a bi-complex from explicit blocks, with the layout described
    /// in the module documentation. Nothing is checked.
    pub fn from_parts(
        strat: Stratification,
        irreducible_colors: Vec<Option<Color>>,
        colors: Vec<Option<Color>>,
        dims: Vec<Vec<usize>>,
        dprime: HashMap<(usize, usize), Vec<RationalMatrix>>,
        ddouble: HashMap<(usize, usize), Vec<RationalMatrix>>,
    ) -> Self {
        OSBicomplex {
            strat,
            irreducible_colors,
            colors,
            dims,
            dprime,
            ddouble,
        }
    }

    /// The dual bi-complex: bidegrees swapped, `d′` and `d″` transposed into
    /// each other, colors swapped.
    pub fn dual(&self) -> OSBicomplex {
        let dims = self
            .dims
            .iter()
            .map(|d| d.iter().rev().copied().collect())
            .collect();
        let mut dprime = HashMap::new();
        let mut ddouble = HashMap::new();
        for (&(s, t), dd) in &self.ddouble {
            let c = self.strat.codim(s);
            let dp = &self.dprime[&(s, t)];
            dprime.insert((s, t), (0..=c).map(|i| dd[c - i].transpose()).collect());
            ddouble.insert((s, t), (0..=c).map(|i| dp[c - i].transpose()).collect());
        }
        OSBicomplex {
            strat: self.strat.dual(),
            irreducible_colors: self.irreducible_colors.iter().map(|c| c.map(Color::dual)).collect(),
            colors: self.colors.iter().map(|c| c.map(Color::dual)).collect(),
            dims,
            dprime,
            ddouble,
        }
    }

    /// Checks the identities expressing that every `A^{≤Σ}` is a bi-complex.
    pub fn verify_identities(&self) -> Result<(), IdentityViolation> {
        self.verify_identities_up_to(self.strat.max_codim())
    }

    /// Same as [`verify_identities`](Self::verify_identities), for the strata
    /// `Σ` of codimension at most `max_codim`.
    pub fn verify_identities_up_to(&self, max_codim: usize) -> Result<(), IdentityViolation> {
        let st = &self.strat;
        let violation = |identity, strata: &[usize], i: usize, s: usize| IdentityViolation {
            identity,
            strata: strata.iter().map(|&x| st.label(x)).collect(),
            bidegree: (i, st.codim(s) - i),
        };
        for s in (0..st.len()).filter(|&s| st.codim(s) <= max_codim) {
            let c = st.codim(s);
            for u in st.up2(s) {
                let common = st.common_up(s, u);
                for i in 1..=c {
                    let mut acc = RationalMatrix::zeros(self.dim(u, i.saturating_sub(2)), self.dim(s, i));
                    if i >= 2 {
                        for &t in &common {
                            acc = acc.add(&self.dprime(t, u, i - 1).mul(self.dprime(s, t, i)));
                        }
                        if !acc.is_zero() {
                            return Err(violation("1′", &[s, u], i, s));
                        }
                    }
                }
                for i in 0..=c.saturating_sub(2) {
                    let mut acc = RationalMatrix::zeros(self.dim(s, i), self.dim(u, i));
                    for &t in &common {
                        acc = acc.add(&self.ddouble(s, t, i).mul(self.ddouble(t, u, i)));
                    }
                    if !acc.is_zero() {
                        return Err(violation("1″", &[s, u], i, s));
                    }
                }
            }
            for i in 1..=c {
                let mut acc = RationalMatrix::zeros(self.dim(s, i - 1), self.dim(s, i));
                for &t in st.up(s) {
                    acc = acc.add(&self.ddouble(s, t, i - 1).mul(self.dprime(s, t, i)));
                }
                if !acc.is_zero() {
                    return Err(violation("2c", &[s], i, s));
                }
            }
            let ups = st.up(s);
            for &a in ups {
                for i in 1..c {
                    if !self.dprime(s, a, i).mul(self.ddouble(s, a, i)).is_zero() {
                        return Err(violation("2c", &[s, a], i, s));
                    }
                }
                for &u in ups {
                    if u == a {
                        continue;
                    }
                    let common = st.common_up(a, u);
                    for i in 1..c {
                        let lhs = self.dprime(s, u, i).mul(self.ddouble(s, a, i));
                        let mut rhs = RationalMatrix::zeros(lhs.rows(), lhs.cols());
                        for &t in &common {
                            rhs = rhs.add(&self.ddouble(u, t, i - 1).mul(self.dprime(a, t, i)));
                        }
                        if lhs != rhs {
                            let name = if common.is_empty() { "2a" } else { "2b" };
                            return Err(violation(name, &[s, a, u], i, s));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Overwrites one block; used to build deliberately broken data.
    pub fn set_ddouble(&mut self, s: usize, t: usize, i: usize, m: RationalMatrix) {
        self.ddouble.get_mut(&(s, t)).expect("cover relation")[i] = m;
    }

    /// Overwrites one block; used to build deliberately broken data.
    pub fn set_dprime(&mut self, s: usize, t: usize, i: usize, m: RationalMatrix) {
        self.dprime.get_mut(&(s, t)).expect("cover relation")[i] = m;
    }
}

/// Tensor product of two bi-complexes over the product stratification.
///
/// Basis blocks of `A^{(S′,S″)}_{i,j}` are ordered by the first factor's `i′`;
/// the second factor's `d′` carries the sign `(−1)^{i′}` and its `d″` the
/// sign `(−1)^{j′}`.
pub fn kunneth_product(a: &OSBicomplex, b: &OSBicomplex) -> OSBicomplex {
    let (strat, map) = Stratification::product(&a.strat, &b.strat);
    let n = strat.len();
    let mut origin = vec![(0, 0); n];
    for (sa, row) in map.iter().enumerate() {
        for (sb, &p) in row.iter().enumerate() {
            origin[p] = (sa, sb);
        }
    }
    let mut irreducible_colors = vec![None; n];
    for (sa, c) in a.irreducible_colors.iter().enumerate() {
        if sa > 0 {
            irreducible_colors[map[sa][0]] = *c;
        }
    }
    for (sb, c) in b.irreducible_colors.iter().enumerate() {
        if sb > 0 {
            irreducible_colors[map[0][sb]] = *c;
        }
    }
    let colors = effective_colors(&strat, &irreducible_colors, Color::Lambda);

    // Offset of the block (i′, i − i′) inside A^P_i.
    let block_offset = |p: usize, i: usize, i1: usize| -> usize {
        let (sa, sb) = origin[p];
        let c2 = b.strat.codim(sb);
        (0..i1)
            .filter(|&k| i >= k && i - k <= c2)
            .map(|k| a.dim(sa, k) * b.dim(sb, i - k))
            .sum()
    };
    let dims: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            let (sa, sb) = origin[p];
            let (c1, c2) = (a.strat.codim(sa), b.strat.codim(sb));
            (0..=c1 + c2)
                .map(|i| {
                    (0..=c1.min(i))
                        .filter(|&i1| i - i1 <= c2)
                        .map(|i1| a.dim(sa, i1) * b.dim(sb, i - i1))
                        .sum()
                })
                .collect()
        })
        .collect();
    let sign = |e: usize| -> Rational { Rational::from_integer(if e.is_multiple_of(2) { 1.into() } else { (-1).into() }) };

    let mut dprime = HashMap::new();
    let mut ddouble = HashMap::new();
    for p in 0..n {
        let (sa, sb) = origin[p];
        let (c1, c2) = (a.strat.codim(sa), b.strat.codim(sb));
        let c = c1 + c2;
        for &q in strat.up(p) {
            let (ta, tb) = origin[q];
            let first = tb == sb;
            let mut dp = Vec::with_capacity(c + 1);
            let mut dd = Vec::with_capacity(c + 1);
            for i in 0..=c {
                let rows = if i == 0 { 0 } else { dims[q][i - 1] };
                let mut m = RationalMatrix::zeros(rows, dims[p][i]);
                let mut m2 = RationalMatrix::zeros(dims[p][i], dims[q].get(i).copied().unwrap_or(0));
                for i1 in 0..=c1.min(i) {
                    let i2 = i - i1;
                    if i2 > c2 {
                        continue;
                    }
                    let col = block_offset(p, i, i1);
                    if first {
                        if i1 >= 1 {
                            let blk = a.dprime(sa, ta, i1).kronecker(&RationalMatrix::identity(b.dim(sb, i2)));
                            m.place(block_offset(q, i - 1, i1 - 1), col, &blk);
                        }
                        if i1 < c1 && i < c {
                            let blk = a.ddouble(sa, ta, i1).kronecker(&RationalMatrix::identity(b.dim(sb, i2)));
                            m2.place(col, block_offset(q, i, i1), &blk);
                        }
                    } else {
                        if i2 >= 1 {
                            let blk = RationalMatrix::identity(a.dim(sa, i1))
                                .kronecker(b.dprime(sb, tb, i2))
                                .scale(&sign(i1));
                            m.place(block_offset(q, i - 1, i1), col, &blk);
                        }
                        if i2 < c2 && i < c {
                            let blk = RationalMatrix::identity(a.dim(sa, i1))
                                .kronecker(b.ddouble(sb, tb, i2))
                                .scale(&sign(c1 - i1));
                            m2.place(col, block_offset(q, i, i1), &blk);
                        }
                    }
                }
                dp.push(m);
                dd.push(m2);
            }
            dprime.insert((p, q), dp);
            ddouble.insert((p, q), dd);
        }
    }
    OSBicomplex {
        strat,
        irreducible_colors,
        colors,
        dims,
        dprime,
        ddouble,
    }
}
