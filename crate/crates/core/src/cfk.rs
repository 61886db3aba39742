//! Finite models of the full knot complex: symbols with Alexander gradings,
//! arrows labelled by their filtration drop, and a strict flip involution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type SymbolId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub alexander: i64,
}

/// `source → target`, lowering the first filtration by `drop.0` and the
/// second by `drop.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub source: SymbolId,
    pub target: SymbolId,
    pub drop: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Empty,
    NegativeDrop {
        arrow: Arrow,
    },
    GradingRule {
        arrow: Arrow,
    },
    DSquared {
        source: SymbolId,
        target: SymbolId,
        total_drop: (i64, i64),
    },
    FlipNotInvolution,
    FlipGrading {
        symbol: SymbolId,
    },
    FlipMirror {
        arrow: Arrow,
    },
    NonReduced {
        arrow: Arrow,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    names: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn arrow_text(&self, a: &Arrow) -> String {
        format!(
            "{} -> {} drop ({}, {})",
            self.names[a.source], self.names[a.target], a.drop.0, a.drop.1
        )
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            match v {
                Violation::Empty => writeln!(f, "complex has no generators")?,
                Violation::NegativeDrop { arrow } => {
                    writeln!(f, "negative drop on {}", self.arrow_text(arrow))?
                }
                Violation::GradingRule { arrow } => {
                    writeln!(f, "grading rule violated by {}", self.arrow_text(arrow))?
                }
                Violation::DSquared {
                    source,
                    target,
                    total_drop,
                } => writeln!(
                    f,
                    "d^2 != 0: odd number of paths {} -> {} with total drop ({}, {})",
                    self.names[*source], self.names[*target], total_drop.0, total_drop.1
                )?,
                Violation::FlipNotInvolution => {
                    writeln!(f, "flip not an involution on all symbols")?
                }
                Violation::FlipGrading { symbol } => writeln!(
                    f,
                    "flip does not negate the Alexander grading of {}",
                    self.names[*symbol]
                )?,
                Violation::FlipMirror { arrow } => writeln!(
                    f,
                    "flip has no mirror partner for {}",
                    self.arrow_text(arrow)
                )?,
                Violation::NonReduced { arrow } => {
                    writeln!(f, "complex is not reduced: {}", self.arrow_text(arrow))?
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfkError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid knot complex:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown builtin knot `{0}` (known: unknot, trefoil-rh, trefoil-lh, figure8, t25)")]
    UnknownBuiltin(String),
    #[error(
        "{0}; thin knots need the box pattern (see builtin figure8) or a hand-written .cfk file"
    )]
    NotStaircase(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotComplex {
    name: String,
    symbols: Vec<Symbol>,
    arrows: Vec<Arrow>,
    flip: Vec<Option<SymbolId>>,
    #[serde(skip)]
    outgoing: Vec<Vec<(SymbolId, (i64, i64))>>,
}

impl KnotComplex {
    /// Assembles a complex without validating it. Repeated arrows cancel in
    /// pairs.
    pub fn from_parts_unchecked(
        name: impl Into<String>,
        symbols: Vec<Symbol>,
        arrows: impl IntoIterator<Item = Arrow>,
        flip: Vec<Option<SymbolId>>,
    ) -> Self {
        assert_eq!(symbols.len(), flip.len(), "flip table has wrong length");
        let mut set = BTreeSet::new();
        for a in arrows {
            assert!(
                a.source < symbols.len() && a.target < symbols.len(),
                "arrow endpoint out of range"
            );
            if !set.remove(&a) {
                set.insert(a);
            }
        }
        let arrows: Vec<Arrow> = set.into_iter().collect();
        let mut outgoing = vec![Vec::new(); symbols.len()];
        for a in &arrows {
            outgoing[a.source].push((a.target, a.drop));
        }
        Self {
            name: name.into(),
            symbols,
            arrows,
            flip,
            outgoing,
        }
    }

    pub fn new(
        name: impl Into<String>,
        symbols: Vec<Symbol>,
        arrows: impl IntoIterator<Item = Arrow>,
        flip: Vec<Option<SymbolId>>,
    ) -> Result<Self, CfkError> {
        let k = Self::from_parts_unchecked(name, symbols, arrows, flip);
        let report = k.validate();
        if report.is_valid() {
            Ok(k)
        } else {
            Err(CfkError::Invalid(report))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Arrows leaving `x` as `(target, drop)`.
    pub fn outgoing(&self, x: SymbolId) -> &[(SymbolId, (i64, i64))] {
        &self.outgoing[x]
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn alexander(&self, x: SymbolId) -> i64 {
        self.symbols[x].alexander
    }

    /// The integer `i(relspinc(x))` used by the surgery formulas. The
    /// stored grading follows `A(x) - A(y) = a - b` along arrows, which is
    /// the opposite orientation, so the label is `-A(x)`.
    pub fn spinc_label(&self, x: SymbolId) -> i64 {
        -self.symbols[x].alexander
    }

    /// The flip involution. Panics on a complex that failed validation.
    pub fn iota(&self, x: SymbolId) -> SymbolId {
        self.flip[x].expect("flip defined on every symbol of a valid complex")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.symbols.len();
        if n == 0 {
            violations.push(Violation::Empty);
        }
        for a in &self.arrows {
            if a.drop.0 < 0 || a.drop.1 < 0 {
                violations.push(Violation::NegativeDrop { arrow: *a });
            }
            if a.drop == (0, 0) {
                violations.push(Violation::NonReduced { arrow: *a });
            }
            if self.alexander(a.source) - self.alexander(a.target) != a.drop.0 - a.drop.1 {
                violations.push(Violation::GradingRule { arrow: *a });
            }
        }
        let mut paths: BTreeMap<(SymbolId, SymbolId, (i64, i64)), usize> = BTreeMap::new();
        for a in &self.arrows {
            for &(z, d) in &self.outgoing[a.target] {
                *paths
                    .entry((a.source, z, (a.drop.0 + d.0, a.drop.1 + d.1)))
                    .or_default() += 1;
            }
        }
        for ((source, target, total_drop), count) in paths {
            if count % 2 == 1 {
                violations.push(Violation::DSquared {
                    source,
                    target,
                    total_drop,
                });
            }
        }
        let involution = (0..n).all(|x| match self.flip[x] {
            Some(y) => y < n && self.flip[y] == Some(x),
            None => false,
        });
        if !involution {
            violations.push(Violation::FlipNotInvolution);
        } else {
            for x in 0..n {
                if self.alexander(self.iota(x)) != -self.alexander(x) {
                    violations.push(Violation::FlipGrading { symbol: x });
                }
            }
            let set: BTreeSet<Arrow> = self.arrows.iter().copied().collect();
            for a in &self.arrows {
                let partner = Arrow {
                    source: self.iota(a.source),
                    target: self.iota(a.target),
                    drop: (a.drop.1, a.drop.0),
                };
                if !set.contains(&partner) {
                    violations.push(Violation::FlipMirror { arrow: *a });
                }
            }
        }
        ValidationReport {
            violations,
            names: self.symbols.iter().map(|s| s.name.clone()).collect(),
        }
    }

    /// Ranks of the associated graded complex per Alexander grading. Reduced
    /// models have no filtration-preserving arrows, so these are symbol counts.
    pub fn associated_graded_ranks(&self) -> BTreeMap<i64, usize> {
        let mut ranks = BTreeMap::new();
        for s in &self.symbols {
            *ranks.entry(s.alexander).or_default() += 1;
        }
        ranks
    }

    pub fn genus(&self) -> i64 {
        self.associated_graded_ranks()
            .keys()
            .next_back()
            .copied()
            .unwrap_or(0)
            .max(0)
    }

    /// Mirror image: arrows reversed with the same drops, gradings negated.
    pub fn mirror(&self) -> KnotComplex {
        let symbols = self
            .symbols
            .iter()
            .map(|s| Symbol {
                name: s.name.clone(),
                alexander: -s.alexander,
            })
            .collect();
        let arrows = self.arrows.iter().map(|a| Arrow {
            source: a.target,
            target: a.source,
            drop: a.drop,
        });
        KnotComplex::from_parts_unchecked(
            format!("{}-mirror", self.name),
            symbols,
            arrows,
            self.flip.clone(),
        )
    }

    /// Transports every arrow through the flip and swaps its drop. For a
    /// valid complex this returns the complex itself.
    pub fn conjugate_by_flip(&self) -> KnotComplex {
        let n = self.symbols.len();
        let mut symbols = self.symbols.clone();
        for x in 0..n {
            symbols[self.iota(x)].alexander = -self.symbols[x].alexander;
        }
        let arrows = self.arrows.iter().map(|a| Arrow {
            source: self.iota(a.source),
            target: self.iota(a.target),
            drop: (a.drop.1, a.drop.0),
        });
        KnotComplex::from_parts_unchecked(self.name.clone(), symbols, arrows, self.flip.clone())
    }

    /// Canonical `.cfk` text: symbols in declaration order, arrows sorted,
    /// one `flip` line per orbit.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            out.push_str(&format!("gen {} A={}\n", s.name, s.alexander));
        }
        for a in &self.arrows {
            out.push_str(&format!(
                "arr {} {} {} {}\n",
                self.symbols[a.source].name, self.symbols[a.target].name, a.drop.0, a.drop.1
            ));
        }
        for (x, y) in self.flip.iter().enumerate() {
            if let Some(y) = *y {
                if x <= y {
                    out.push_str(&format!(
                        "flip {} {}\n",
                        self.symbols[x].name, self.symbols[y].name
                    ));
                }
            }
        }
        out
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CfkError {
    CfkError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_int(tok: &str, line: usize, what: &str) -> Result<i64, CfkError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected integer {what}, found `{tok}`")))
}

/// Parses `.cfk` text without semantic validation.
pub fn parse_cfk_unchecked(name: &str, text: &str) -> Result<KnotComplex, CfkError> {
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut ids: BTreeMap<String, SymbolId> = BTreeMap::new();
    let mut arrows: Vec<(usize, String, String, i64, i64)> = Vec::new();
    let mut flips: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "gen" => {
                let [_, sym, grading] = toks[..] else {
                    return Err(syntax(line, "expected `gen <name> A=<int>`"));
                };
                let Some(value) = grading.strip_prefix("A=") else {
                    return Err(syntax(
                        line,
                        format!("expected `A=<int>`, found `{grading}`"),
                    ));
                };
                let alexander = parse_int(value, line, "Alexander grading")?;
                if ids.insert(sym.to_string(), symbols.len()).is_some() {
                    return Err(syntax(line, format!("duplicate symbol `{sym}`")));
                }
                symbols.push(Symbol {
                    name: sym.to_string(),
                    alexander,
                });
            }
            "arr" => {
                let [_, s, t, a, b] = toks[..] else {
                    return Err(syntax(line, "expected `arr <src> <dst> <a> <b>`"));
                };
                let a = parse_int(a, line, "drop")?;
                let b = parse_int(b, line, "drop")?;
                if a < 0 || b < 0 {
                    return Err(syntax(line, "drops must be non-negative"));
                }
                arrows.push((line, s.to_string(), t.to_string(), a, b));
            }
            "flip" => {
                let [_, x, y] = toks[..] else {
                    return Err(syntax(line, "expected `flip <x> <y>`"));
                };
                flips.push((line, x.to_string(), y.to_string()));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if symbols.is_empty() {
        return Err(syntax(text.lines().count().max(1), "no `gen` lines"));
    }
    let lookup = |line: usize, s: &str| {
        ids.get(s)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown symbol `{s}`")))
    };
    let mut parsed_arrows = Vec::with_capacity(arrows.len());
    for (line, s, t, a, b) in &arrows {
        parsed_arrows.push(Arrow {
            source: lookup(*line, s)?,
            target: lookup(*line, t)?,
            drop: (*a, *b),
        });
    }
    let mut flip = vec![None; symbols.len()];
    for (line, x, y) in &flips {
        let (x, y) = (lookup(*line, x)?, lookup(*line, y)?);
        flip[x] = Some(y);
        flip[y] = Some(x);
    }
    Ok(KnotComplex::from_parts_unchecked(
        name,
        symbols,
        parsed_arrows,
        flip,
    ))
}

/// Parses and validates `.cfk` text.
pub fn parse_cfk(name: &str, text: &str) -> Result<KnotComplex, CfkError> {
    let k = parse_cfk_unchecked(name, text)?;
    let report = k.validate();
    if report.is_valid() {
        Ok(k)
    } else {
        Err(CfkError::Invalid(report))
    }
}

fn symbol_name(idx: usize) -> String {
    if idx < 26 {
        ((b'a' + idx as u8) as char).to_string()
    } else {
        format!("s{idx}")
    }
}

/// Staircase model of an L-space knot from its symmetrized Alexander
/// polynomial, coefficients listed from the highest exponent down.
pub fn staircase(coeffs: &[i64]) -> Result<KnotComplex, CfkError> {
    if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
        return Err(CfkError::NotStaircase(
            "coefficient list must have odd length (symmetric about exponent 0)".into(),
        ));
    }
    if coeffs.iter().ne(coeffs.iter().rev()) {
        return Err(CfkError::NotStaircase(
            "coefficients are not symmetric".into(),
        ));
    }
    let top = (coeffs.len() / 2) as i64;
    let terms: Vec<(i64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (top - k as i64, c))
        .collect();
    if terms.iter().any(|&(_, c)| c != 1 && c != -1) {
        return Err(CfkError::NotStaircase(
            "coefficients must be 0 or ±1".into(),
        ));
    }
    if terms.first().map(|t| t.1) != Some(1) {
        return Err(CfkError::NotStaircase(
            "leading coefficient must be +1".into(),
        ));
    }
    if terms.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(CfkError::NotStaircase(
            "nonzero coefficients must alternate in sign".into(),
        ));
    }
    let n = terms.len();
    let symbols = terms
        .iter()
        .enumerate()
        .map(|(idx, &(e, _))| Symbol {
            name: symbol_name(idx),
            alexander: e,
        })
        .collect();
    let mut arrows = Vec::new();
    for (idx, &(e, c)) in terms.iter().enumerate() {
        if c == -1 {
            arrows.push(Arrow {
                source: idx,
                target: idx - 1,
                drop: (0, terms[idx - 1].0 - e),
            });
            arrows.push(Arrow {
                source: idx,
                target: idx + 1,
                drop: (e - terms[idx + 1].0, 0),
            });
        }
    }
    let flip = (0..n).map(|x| Some(n - 1 - x)).collect();
    KnotComplex::new("staircase", symbols, arrows, flip)
}

pub const BUILTIN_NAMES: [&str; 5] = ["unknot", "trefoil-rh", "trefoil-lh", "figure8", "t25"];

pub fn builtin(name: &str) -> Result<KnotComplex, CfkError> {
    let k = match name {
        "unknot" => staircase(&[1])?,
        "trefoil-rh" => staircase(&[1, -1, 1])?,
        "trefoil-lh" => staircase(&[1, -1, 1])?.mirror(),
        "t25" => staircase(&[1, -1, 1, -1, 1])?,
        "figure8" => {
            let sym = |name: &str, alexander| Symbol {
                name: name.into(),
                alexander,
            };
            let arr = |source, target, drop| Arrow {
                source,
                target,
                drop,
            };
            KnotComplex::new(
                "figure8",
                vec![
                    sym("u", 0),
                    sym("a", 0),
                    sym("b", 1),
                    sym("c", -1),
                    sym("d", 0),
                ],
                vec![
                    arr(1, 2, (0, 1)),
                    arr(1, 3, (1, 0)),
                    arr(2, 4, (1, 0)),
                    arr(3, 4, (0, 1)),
                ],
                vec![Some(0), Some(1), Some(3), Some(2), Some(4)],
            )?
        }
        other => return Err(CfkError::UnknownBuiltin(other.to_string())),
    };
    Ok(k.with_name(name))
}
