//! Line-oriented arrangement description files.
//!
//! ```text
//! # three concurrent lines
//! dim 2
//! L a : 1 0
//! L b : 0 1
//! M c : 1 -1
//! color {a,b,c} lambda
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use osbc::arrangement::{ArrangementError, BiArrangement, Coloring, LinearForm, StratumPoset};
use osbc::linalg::format_rational;
use osbc::mask::IndexMask;
use osbc::projective::{make_projective, ProjectiveBiArrangement, ProjectiveError};
use osbc::{Color, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: hyperplane {label} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        line: usize,
        label: String,
        got: usize,
        expected: usize,
    },
    #[error("line {line}: duplicate label {label}")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: {labels} does not name an irreducible stratum")]
    UnknownStratum { line: usize, labels: String },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error("{count} hyperplanes exceed the limit of {max}")]
    TooManyHyperplanes { count: usize, max: usize },
    #[error("dimension {dim} exceeds the limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneLine {
    pub side: Color,
    pub label: String,
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorLine {
    pub line: usize,
    pub labels: BTreeSet<String>,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArrangementFile {
    pub dim: usize,
    pub hyperplanes: Vec<HyperplaneLine>,
    pub colors: Vec<ColorLine>,
    pub projective: bool,
    pub origin: Vec<Color>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_color(word: &str) -> Option<Color> {
    match word {
        "lambda" | "λ" => Some(Color::Lambda),
        "mu" | "μ" => Some(Color::Mu),
        _ => None,
    }
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.contains([':', '{', '}', ',', '#'])
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(b, t)| (text[..b].chars().count() + 1, t))
        .collect()
}

pub fn parse_arrangement_file(text: &str) -> Result<ArrangementFile, ParseError> {
    let mut file = ArrangementFile::default();
    let mut have_dim = false;
    let mut labels = BTreeSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(col, head)) = toks.first() else { continue };
        match head {
            "dim" => {
                if have_dim {
                    return Err(syntax(line, col, "repeated dim header"));
                }
                let &[_, (c, n)] = toks.as_slice() else {
                    return Err(syntax(line, col, "expected `dim N`"));
                };
                file.dim = n.parse().map_err(|_| syntax(line, c, format!("bad dimension {n}")))?;
                have_dim = true;
            }
            "L" | "M" => {
                if !have_dim {
                    return Err(syntax(line, col, "hyperplane before the dim header"));
                }
                let side = if head == "L" { Color::Lambda } else { Color::Mu };
                if toks.len() < 3 || toks[2].1 != ":" {
                    return Err(syntax(line, col, "expected `L|M label : c1 … cN`"));
                }
                let (lc, label) = toks[1];
                if !valid_label(label) {
                    return Err(syntax(line, lc, format!("bad label {label}")));
                }
                if !labels.insert(label.to_string()) {
                    return Err(ParseError::DuplicateLabel {
                        line,
                        label: label.into(),
                    });
                }
                let coeffs = toks[3..]
                    .iter()
                    .map(|&(c, t)| match t.parse::<Rational>() {
                        Ok(x) => Ok(x),
                        Err(_) => Err(syntax(line, c, format!("bad rational {t}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() != file.dim {
                    return Err(ParseError::DimensionMismatch {
                        line,
                        label: label.into(),
                        got: coeffs.len(),
                        expected: file.dim,
                    });
                }
                file.hyperplanes.push(HyperplaneLine {
                    side,
                    label: label.into(),
                    coeffs,
                });
            }
            "color" => {
                let rest = body.trim_start().strip_prefix("color").unwrap_or("");
                let open = body.find('{').ok_or_else(|| syntax(line, col + 6, "expected `{`"))?;
                let close = body.find('}').ok_or_else(|| syntax(line, body.chars().count() + 1, "expected `}`"))?;
                if close < open || rest.trim_start().find('{') != Some(0) {
                    return Err(syntax(line, col + 6, "expected `color {labels} lambda|mu`"));
                }
                let set: BTreeSet<String> = body[open + 1..close]
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                let tail = tokens(&body[close + 1..]);
                let before = body[..=close].chars().count();
                let [(tc, word)] = tail.as_slice() else {
                    let c = tail.get(1).map_or(before + 1, |t| before + t.0);
                    return Err(syntax(line, c, "expected lambda or mu"));
                };
                let color_col = before + tc;
                let color = parse_color(word).ok_or_else(|| syntax(line, color_col, format!("unknown color {word}")))?;
                file.colors.push(ColorLine {
                    line,
                    labels: set,
                    color,
                });
            }
            "projective" => {
                if toks.len() != 1 {
                    return Err(syntax(line, toks[1].0, "unexpected token"));
                }
                file.projective = true;
            }
            "origin" => {
                let &[_, (c, word)] = toks.as_slice() else {
                    return Err(syntax(line, col, "expected `origin lambda|mu`"));
                };
                let color = parse_color(word).ok_or_else(|| syntax(line, c, format!("unknown color {word}")))?;
                if !file.origin.contains(&color) {
                    file.origin.push(color);
                }
            }
            other => return Err(syntax(line, col, format!("unknown directive {other}"))),
        }
    }
    if !have_dim {
        return Err(syntax(1, 1, "missing dim header"));
    }
    Ok(file)
}

impl ArrangementFile {
    pub fn check_limits(&self, max_hyperplanes: usize, max_dim: usize) -> Result<(), ParseError> {
        if self.hyperplanes.len() > max_hyperplanes {
            return Err(ParseError::TooManyHyperplanes {
                count: self.hyperplanes.len(),
                max: max_hyperplanes,
            });
        }
        if self.dim > max_dim {
            return Err(ParseError::DimensionTooLarge {
                dim: self.dim,
                max: max_dim,
            });
        }
        Ok(())
    }

    pub fn forms(&self) -> Vec<LinearForm> {
        self.hyperplanes
            .iter()
            .map(|h| LinearForm::new(h.coeffs.clone(), h.label.clone(), h.side))
            .collect()
    }

    fn poset(&self) -> Result<StratumPoset, ParseError> {
        Ok(StratumPoset::build(self.dim, self.forms())?)
    }

    /// Resolves color lines to strata. In projective files a line naming the
    /// origin is skipped.
    fn coloring(&self, poset: &StratumPoset) -> Result<Coloring, ParseError> {
        let mut c = Coloring::new();
        for cl in &self.colors {
            let names = format!("{{{}}}", cl.labels.iter().cloned().collect::<Vec<_>>().join(","));
            let unknown = || ParseError::UnknownStratum {
                line: cl.line,
                labels: names.clone(),
            };
            let mut mask = IndexMask::EMPTY;
            for l in &cl.labels {
                let h = poset.forms().iter().position(|f| &f.label == l).ok_or_else(unknown)?;
                mask.insert(h);
            }
            if mask.is_empty() {
                return Err(unknown());
            }
            let s = poset.stratum_of(mask);
            if !poset.stratification().stratum(s).irreducible {
                return Err(unknown());
            }
            if self.projective && s == poset.minimal() && poset.stratum(s).codim == self.dim {
                continue;
            }
            c.set(poset.stratum(s).hyperplanes, cl.color);
        }
        Ok(c)
    }

    pub fn to_biarrangement(&self) -> Result<BiArrangement, ParseError> {
        let poset = self.poset()?;
        let coloring = self.coloring(&poset)?;
        Ok(BiArrangement::from_poset(poset, &coloring)?)
    }

    pub fn to_projective(&self) -> Result<ProjectiveBiArrangement, ParseError> {
        let poset = self.poset()?;
        let coloring = self.coloring(&poset)?;
        Ok(make_projective(self.dim, self.forms(), &coloring)?)
    }

    /// Description of a bi-arrangement: one color line per irreducible
    /// stratum of codimension ≥ 2, keyed by all hyperplanes through it.
    pub fn from_biarrangement(b: &BiArrangement) -> ArrangementFile {
        let poset = b.poset();
        let hyperplanes = poset
            .forms()
            .iter()
            .map(|f| HyperplaneLine {
                side: f.side,
                label: f.label.clone(),
                coeffs: f.coeffs.clone(),
            })
            .collect();
        let colors = b
            .higher_irreducibles()
            .into_iter()
            .filter_map(|s| {
                b.irreducible_colors()[s].map(|color| ColorLine {
                    line: 0,
                    labels: poset.stratum(s).hyperplanes.iter().map(|h| poset.forms()[h].label.clone()).collect(),
                    color,
                })
            })
            .collect();
        ArrangementFile {
            dim: b.ambient_dim(),
            hyperplanes,
            colors,
            projective: false,
            origin: Vec::new(),
        }
    }

    pub fn from_projective(pb: &ProjectiveBiArrangement) -> ArrangementFile {
        let mut f = Self::from_biarrangement(pb.biarrangement());
        f.projective = true;
        f
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dim {}", self.dim).unwrap();
        for h in &self.hyperplanes {
            let side = if h.side == Color::Lambda { "L" } else { "M" };
            let coeffs: Vec<String> = h.coeffs.iter().map(format_rational).collect();
            writeln!(out, "{side} {} : {}", h.label, coeffs.join(" ")).unwrap();
        }
        for c in &self.colors {
            let labels: Vec<&str> = c.labels.iter().map(String::as_str).collect();
            writeln!(out, "color {{{}}} {}", labels.join(","), c.color).unwrap();
        }
        if self.projective {
            writeln!(out, "projective").unwrap();
        }
        for c in &self.origin {
            writeln!(out, "origin {c}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use osbc::linalg::q;

    const LINES: &str = "# concurrent lines\ndim 2\nL a : 1 0\nL b : 0 1\nL c : 1 -1/2\ncolor {a,b,c} lambda\n";

    #[test]
    fn parses_lines() {
        let f = parse_arrangement_file(LINES).unwrap();
        assert_eq!(f.dim, 2);
        assert_eq!(f.hyperplanes.len(), 3);
        assert_eq!(f.hyperplanes[2].coeffs, vec![q(1), "-1/2".parse::<Rational>().unwrap()]);
        assert_eq!(f.colors.len(), 1);
        let b = f.to_biarrangement().unwrap();
        assert_eq!(b.poset().len(), 5);
    }

    #[test]
    fn dimension_mismatch() {
        let e = parse_arrangement_file("dim 3\nL a : 1 0\n").unwrap_err();
        assert!(matches!(e, ParseError::DimensionMismatch { line: 2, got: 2, expected: 3, .. }));
    }

    #[test]
    fn empty_arrangement() {
        let f = parse_arrangement_file("dim 2\n").unwrap();
        let b = f.to_biarrangement().unwrap();
        assert_eq!(b.poset().len(), 1);
    }

    #[test]
    fn syntax_positions() {
        let e = parse_arrangement_file("dim 2\nL a : 1 x\n").unwrap_err();
        assert_eq!(
            e,
            ParseError::Syntax {
                line: 2,
                col: 9,
                msg: "bad rational x".into()
            }
        );
        let e = parse_arrangement_file("dim 2\n  frob\n").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 2, col: 3, .. }));
        let e = parse_arrangement_file("dim 2\nL a : 1 0\nL a : 0 1\n").unwrap_err();
        assert!(matches!(e, ParseError::DuplicateLabel { line: 3, .. }));
        let e = parse_arrangement_file("dim 2\ncolor {a} blue\n").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 2, col: 11, .. }));
    }

    #[test]
    fn unknown_strata() {
        let f = parse_arrangement_file("dim 2\nL a : 1 0\nL b : 0 1\ncolor {a,b} lambda\n").unwrap();
        assert!(matches!(f.to_biarrangement(), Err(ParseError::UnknownStratum { line: 4, .. })));
        let f = parse_arrangement_file("dim 2\nL a : 1 0\ncolor {z} lambda\n").unwrap();
        assert!(matches!(f.to_biarrangement(), Err(ParseError::UnknownStratum { .. })));
    }

    #[test]
    fn round_trip() {
        let f = parse_arrangement_file(LINES).unwrap();
        let b = f.to_biarrangement().unwrap();
        let g = parse_arrangement_file(&ArrangementFile::from_biarrangement(&b).to_text()).unwrap();
        let c = g.to_biarrangement().unwrap();
        assert_eq!(b.forms(), c.forms());
        assert_eq!(b.irreducible_colors(), c.irreducible_colors());
    }
}
