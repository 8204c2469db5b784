//! The identity manifest: records, parameter grids and tolerance classes.
//!
//! The builtin manifest is stored in the catalog file format and parsed on
//! first use.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{self, BigRational};
use crate::expr::{parse_catalog_file, Expr};

mod labels;

pub use labels::{FOLDED_LABELS, IN_SCOPE_LABELS, SUPPLEMENTARY_IDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::A,
        Group::B,
        Group::C,
        Group::D,
        Group::E,
        Group::F,
        Group::G,
        Group::H,
    ];

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn parse(s: &str) -> Option<Group> {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => Group::ALL.into_iter().find(|g| g.letter() == c.to_ascii_uppercase()),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Numeric,
    Exact,
    NegativeControl,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Numeric, Kind::Exact, Kind::NegativeControl];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Numeric => "numeric",
            Kind::Exact => "exact",
            Kind::NegativeControl => "negative_control",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolClass {
    Exact,
    Tight,
    Med,
    Loose,
}

impl TolClass {
    pub const ALL: [TolClass; 4] = [TolClass::Exact, TolClass::Tight, TolClass::Med, TolClass::Loose];

    /// Relative threshold; zero means exact equality.
    pub fn threshold(self) -> f64 {
        match self {
            TolClass::Exact => 0.0,
            TolClass::Tight => 1e-10,
            TolClass::Med => 1e-8,
            TolClass::Loose => 1e-6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TolClass::Exact => "exact",
            TolClass::Tight => "tight",
            TolClass::Med => "med",
            TolClass::Loose => "loose",
        }
    }

    pub fn parse(s: &str) -> Option<TolClass> {
        TolClass::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for TolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grid point as written in the catalog: a decimal or a ratio `p/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValue {
    pub text: String,
    pub value: f64,
}

impl GridValue {
    pub fn parse(text: &str) -> Option<GridValue> {
        let exact = parse_grid_text(text)?;
        Some(GridValue {
            text: text.to_string(),
            value: exact::to_f64(&exact),
        })
    }

    pub fn from_exact(x: &BigRational) -> GridValue {
        GridValue {
            text: x.to_string(),
            value: exact::to_f64(x),
        }
    }

    pub fn exact(&self) -> BigRational {
        parse_grid_text(&self.text).expect("grid values are validated on construction")
    }
}

fn parse_grid_text(text: &str) -> Option<BigRational> {
    match text.split_once('/') {
        Some((p, q)) => {
            let q = exact::parse_decimal(q)?;
            if q.is_zero() {
                return None;
            }
            Some(exact::parse_decimal(p)? / q)
        }
        None => exact::parse_decimal(text),
    }
}

impl fmt::Display for GridValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    pub id: String,
    pub group: Group,
    pub paper_anchor: String,
    pub kind: Kind,
    pub tol_class: TolClass,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Grid dimensions in declaration order.
    pub grid: Vec<(String, Vec<GridValue>)>,
    /// Minimum relative residual a negative control must show.
    pub expected_floor: Option<f64>,
}

impl IdentityRecord {
    pub fn case_count(&self) -> usize {
        self.grid.iter().map(|(_, v)| v.len()).product()
    }
}

/// One concrete parameter point of a record.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub id: String,
    /// Position in the record's cartesian product.
    pub index: usize,
    pub env: Vec<(String, GridValue)>,
    pub kind: Kind,
    pub tol: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub class: TolClass,
    pub threshold: f64,
    /// The right-hand side is the literal 0, so the threshold is absolute.
    pub absolute: bool,
    pub expected_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("{id}: grid dimension `{name}` is empty")]
    EmptyDimension { id: String, name: String },
    #[error("{id}: grid name `{name}` appears twice")]
    DuplicateName { id: String, name: String },
}

/// Cartesian product of the grid, last dimension varying fastest. When `a`
/// is bound and `q` is not, `q = a/4 + 1/4` is added to each case.
pub fn instantiate_cases(r: &IdentityRecord) -> Result<Vec<TestCase>, CatalogError> {
    for (i, (name, values)) in r.grid.iter().enumerate() {
        if values.is_empty() {
            return Err(CatalogError::EmptyDimension {
                id: r.id.clone(),
                name: name.clone(),
            });
        }
        if r.grid[..i].iter().any(|(n, _)| n == name) {
            return Err(CatalogError::DuplicateName {
                id: r.id.clone(),
                name: name.clone(),
            });
        }
    }
    let tol = Tolerance {
        class: r.tol_class,
        threshold: r.tol_class.threshold(),
        absolute: is_literal_zero(&r.rhs),
        expected_floor: r.expected_floor,
    };
    let derive_q = r.grid.iter().any(|(n, _)| n == "a") && !r.grid.iter().any(|(n, _)| n == "q");
    let total = r.case_count();
    let mut out = Vec::with_capacity(total);
    for index in 0..total {
        let mut rem = index;
        let mut env = vec![None; r.grid.len()];
        for (d, (name, values)) in r.grid.iter().enumerate().rev() {
            env[d] = Some((name.clone(), values[rem % values.len()].clone()));
            rem /= values.len();
        }
        let mut env: Vec<(String, GridValue)> = env.into_iter().map(Option::unwrap).collect();
        if derive_q {
            let a = &env.iter().find(|(n, _)| n == "a").expect("a is bound").1;
            let q = a.exact() / exact::int(4) + exact::rat(1, 4);
            let mut g = GridValue::from_exact(&q);
            g.value = a.value / 4.0 + 0.25;
            env.push(("q".to_string(), g));
        }
        out.push(TestCase {
            id: r.id.clone(),
            index,
            env,
            kind: r.kind,
            tol,
        });
    }
    Ok(out)
}

fn is_literal_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num { value, .. } if *value == 0.0)
}

/// Catalog file text of the builtin manifest.
pub const BUILTIN_CATALOG: &str = include_str!("builtin.zcat");

/// The builtin manifest, parsed once.
pub fn builtin_identities() -> &'static [IdentityRecord] {
    static CELL: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    CELL.get_or_init(|| match parse_catalog_file(BUILTIN_CATALOG) {
        Ok(r) => r,
        Err(e) => panic!("builtin catalog does not parse: {e}"),
    })
}

pub fn find_identity<'a>(records: &'a [IdentityRecord], id: &str) -> Option<&'a IdentityRecord> {
    records.iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests;
