//! Shared corpus and independent oracles for the integration tests.
#![allow(dead_code)]

use num_traits::{One, Zero};
use osbc::arrangement::{BiArrangement, Coloring, LinearForm, StratumPoset};
use osbc::exactness::check_tameness;
use osbc::bicomplex::OSBicomplex;
use osbc::{Color, Rational, RationalMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x05b1_c0de;

pub fn lam(c: &[i64], l: &str) -> LinearForm {
    LinearForm::from_i64(c, l, Color::Lambda)
}

pub fn mu(c: &[i64], l: &str) -> LinearForm {
    LinearForm::from_i64(c, l, Color::Mu)
}

/// Rank by plain Gauss–Jordan elimination on a dense row list.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub fn rank_of_forms(forms: &[LinearForm], set: &[usize]) -> usize {
    let rows: Vec<Vec<Rational>> = set.iter().map(|&h| forms[h].coeffs.clone()).collect();
    rank(&rows)
}

/// Subsets of `0..k` as sorted index vectors.
pub fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << k))
        .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// nbc sets for `order`, computed from scratch: circuits by brute force,
/// broken circuits by removing the smallest element.
pub fn nbc_oracle(forms: &[LinearForm], order: &[usize]) -> Vec<Vec<usize>> {
    let k = forms.len();
    let all = subsets(k);
    let dependent = |s: &Vec<usize>| rank_of_forms(forms, s) < s.len();
    let circuits: Vec<&Vec<usize>> = all
        .iter()
        .filter(|s| dependent(s) && s.iter().all(|&x| !dependent(&s.iter().copied().filter(|&y| y != x).collect())))
        .collect();
    let pos = |h: usize| order.iter().position(|&x| x == h).unwrap();
    let broken: Vec<Vec<usize>> = circuits
        .iter()
        .map(|c| {
            let min = *c.iter().min_by_key(|&&h| pos(h)).unwrap();
            c.iter().copied().filter(|&h| h != min).collect()
        })
        .collect();
    all.into_iter()
        .filter(|s| !dependent(s))
        .filter(|s| !broken.iter().any(|b| b.iter().all(|x| s.contains(x))))
        .collect()
}

/// Hyperplanes containing the flat of `set`.
pub fn closure(forms: &[LinearForm], set: &[usize]) -> Vec<usize> {
    let r = rank_of_forms(forms, set);
    (0..forms.len())
        .filter(|&h| {
            let mut t = set.to_vec();
            t.push(h);
            rank_of_forms(forms, &t) == r
        })
        .collect()
}

pub fn random_forms(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<LinearForm> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut tries = 0;
    while out.len() < k && tries < 200 {
        tries += 1;
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let proportional = out.iter().any(|w| {
            let rows = vec![
                v.iter().map(|&x| Rational::from_integer(x.into())).collect(),
                w.iter().map(|&x| Rational::from_integer(x.into())).collect(),
            ];
            rank(&rows) < 2
        });
        if !proportional {
            out.push(v);
        }
    }
    out.iter()
        .enumerate()
        .map(|(i, v)| {
            if rng.gen_bool(0.5) {
                lam(v, &format!("L{i}"))
            } else {
                mu(v, &format!("M{i}"))
            }
        })
        .collect()
}

/// A random coloring of the irreducible strata of codimension ≥ 2.
pub fn random_biarrangement(rng: &mut ChaCha8Rng) -> BiArrangement {
    let n = rng.gen_range(2..=3);
    let k = rng.gen_range(2..=6);
    let forms = random_forms(rng, n, k);
    let poset = StratumPoset::build(n, forms).unwrap();
    let mut c = Coloring::new();
    for s in 1..poset.len() {
        if poset.stratification().stratum(s).irreducible && poset.stratum(s).codim >= 2 {
            let color = *[Color::Lambda, Color::Mu].choose(rng).unwrap();
            c.set(poset.stratum(s).hyperplanes, color);
        }
    }
    BiArrangement::from_poset(poset, &c).unwrap()
}

/// The first `count` seeded random bi-arrangements.
pub fn corpus(count: usize) -> Vec<BiArrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_biarrangement(&mut rng)).collect()
}

/// At least `count` tame members, drawn from the same seeded stream.
pub fn tame_corpus(count: usize) -> Vec<BiArrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x7a3e);
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < count && draws < 20 * count {
        draws += 1;
        let b = random_biarrangement(&mut rng);
        if check_tameness(&b).unwrap().tame() {
            out.push(b);
        }
    }
    out
}

/// Named small examples.
pub fn named_examples() -> Vec<(&'static str, BiArrangement)> {
    let mut v = Vec::new();
    v.push(("L1 L2 | M1", two_lambda_one_mu()));
    v.push(("lines mu, point lambda", counter_example(Color::Mu, Color::Lambda)));
    v.push(("lines lambda, point mu", counter_example(Color::Lambda, Color::Mu)));
    v.push(("three lambda lines, mu origin", three_lines_mu_origin()));
    v
}

/// `L₁ = {x = 0}`, `L₂ = {y = 0}`, `M₁ = {x = y}`, origin λ.
pub fn two_lambda_one_mu() -> BiArrangement {
    let p = StratumPoset::build(2, vec![lam(&[1, 0], "L1"), lam(&[0, 1], "L2"), mu(&[1, -1], "M1")]).unwrap();
    let mut c = Coloring::new();
    c.set([0, 1, 2].into_iter().collect(), Color::Lambda);
    BiArrangement::from_poset(p, &c).unwrap()
}

pub fn counter_example(lines: Color, point: Color) -> BiArrangement {
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
    c.set((0..5).collect(), point);
    BiArrangement::from_poset(p, &c).unwrap()
}

pub fn three_lines_mu_origin() -> BiArrangement {
    let p = StratumPoset::build(2, vec![lam(&[1, 0], "a"), lam(&[0, 1], "b"), lam(&[1, 1], "c")]).unwrap();
    let mut c = Coloring::new();
    c.set([0, 1, 2].into_iter().collect(), Color::Mu);
    BiArrangement::from_poset(p, &c).unwrap()
}

pub fn dense(rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); cols]; rows]
}

fn paste(dst: &mut [Vec<Rational>], r0: usize, c0: usize, block: &RationalMatrix, sign: bool) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = block.get(r, c).clone();
            dst[r0 + r][c0 + c] += if sign { -v } else { v };
        }
    }
}

/// `(stratum, offset)` blocks of `A_{i,j} = ⊕_{codim S = i+j} A^S_{i,j}`, and the total.
fn blocks(bc: &OSBicomplex, i: usize, j: usize) -> (Vec<(usize, usize)>, usize) {
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

/// Truncated total complex for weight `2k`, assembled block by block.
/// Returns `(dims, maps)` indexed by total degree `i − j + (n − k)`.
pub fn truncated_oracle(bc: &OSBicomplex, n: usize, k: usize) -> (Vec<usize>, Vec<Vec<Vec<Rational>>>) {
    let low = n - k;
    let st = bc.stratification();
    let mut layout: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k + low + 1];
    let mut dims = vec![0; k + low + 1];
    for i in 0..=k {
        for j in 0..=low {
            let d = i + low - j;
            layout[d].push((i, j, dims[d]));
            dims[d] += blocks(bc, i, j).1;
        }
    }
    let off = |d: usize, i: usize, j: usize| layout[d].iter().find(|x| x.0 == i && x.1 == j).map(|x| x.2);
    let mut maps = Vec::new();
    for d in 0..k + low {
        let mut m = dense(dims[d], dims[d + 1]);
        for &(i, j, so) in &layout[d + 1] {
            let (src, _) = blocks(bc, i, j);
            if i >= 1 {
                if let Some(to) = off(d, i - 1, j) {
                    let (dst, _) = blocks(bc, i - 1, j);
                    for &(s, a) in &src {
                        for &(t, b) in &dst {
                            if st.up(s).contains(&t) {
                                paste(&mut m, to + b, so + a, bc.dprime(s, t, i), false);
                            }
                        }
                    }
                }
            }
            if let Some(to) = off(d, i, j + 1) {
                let (dst, _) = blocks(bc, i, j + 1);
                for &(t, a) in &src {
                    for &(p, b) in &dst {
                        if st.up(p).contains(&t) {
                            paste(&mut m, to + b, so + a, bc.ddouble(p, t, i), i % 2 == 1);
                        }
                    }
                }
            }
        }
        maps.push(m);
    }
    (dims, maps)
}

fn mat_mul_is_zero(a: &[Vec<Rational>], b: &[Vec<Rational>], inner: usize) -> bool {
    a.iter().all(|row| {
        (0..b.first().map_or(0, Vec::len)).all(|c| {
            let mut acc = Rational::zero();
            for x in 0..inner {
                acc += row[x].clone() * b[x][c].clone();
            }
            acc.is_zero()
        })
    })
}

/// Whether consecutive maps of the oracle complex compose to zero.
pub fn oracle_squares_to_zero(dims: &[usize], maps: &[Vec<Vec<Rational>>]) -> bool {
    maps.windows(2).enumerate().all(|(d, w)| mat_mul_is_zero(&w[0], &w[1], dims[d + 1]))
}

/// `table[r][k] = dim gr^W_{2k} H^r`, from the oracle complexes.
pub fn weight_table_oracle(bc: &OSBicomplex, n: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0; n + 1]; 2 * n + 1];
    for k in 0..=n {
        let (dims, maps) = truncated_oracle(bc, n, k);
        let h = descending_homology(&dims, &maps);
        for (r, row) in t.iter_mut().enumerate() {
            // H_{2k − r}, stored at index 2k − r + (n − k).
            let idx = 2 * k as isize - r as isize + (n - k) as isize;
            if idx >= 0 && (idx as usize) < h.len() {
                row[k] = h[idx as usize];
            }
        }
    }
    t
}

/// Homology of `C_top → … → C_0` given `maps[d]: C_{d+1} → C_d` as dense rows.
pub fn descending_homology(dims: &[usize], maps: &[Vec<Vec<Rational>>]) -> Vec<usize> {
    let ranks: Vec<usize> = maps.iter().map(|m| rank(m)).collect();
    (0..dims.len())
        .map(|d| {
            let out = if d > 0 { ranks[d - 1] } else { 0 };
            let inc = ranks.get(d).copied().unwrap_or(0);
            dims[d] - out - inc
        })
        .collect()
}
