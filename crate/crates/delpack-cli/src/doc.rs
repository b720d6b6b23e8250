//! Document formats and exact-to-text conversions.
//!
//! Rationals travel as strings ("3/4", "-2", "7"): parsing floats
//! would silently destroy exactness. Decimal renderings appear next to
//! rational strings in result documents but are presentation only.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use delpack::delzant::DelzantPolygon;
use delpack::exactgeom::{ConvexPolygon, Point, Rational};

pub const FORMAT_VERSION: u32 = 1;

/// A polygon on disk: version plus vertex coordinates as rational
/// strings, counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub version: u32,
    pub vertices: Vec<[String; 2]>,
}

/// One named rational result with its decimal shadow.
#[derive(Clone, Debug, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub rational: String,
    pub decimal: String,
}

/// Output of value-producing commands. The rational strings are
/// authoritative; decimals are rounded to 12 significant digits.
#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub operation: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<ResultEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl ResultEntry {
    pub fn new(name: &str, value: &Rational) -> Self {
        ResultEntry {
            name: name.to_string(),
            rational: rational_to_string(value),
            decimal: decimal_12(value),
        }
    }
}

/// Failures split by the exit-code contract: 1 domain, 2 parse, 3
/// precondition.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse failure: {}", m),
            CliError::Domain(m) => write!(f, "domain violation: {}", m),
            CliError::Precondition(m) => write!(f, "precondition failure: {}", m),
        }
    }
}

/// Parses "p/q" or "p". The denominator must be nonzero; the result is
/// reduced.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let bad = || CliError::Parse(format!("not a rational number: {:?}", s));
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(CliError::Parse(format!("zero denominator in {:?}", s)));
    }
    Ok(Rational::new(n, d))
}

/// Lowest-terms rational string: "p/q", or "p" when the denominator
/// is one.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact decimal rendering rounded to 12 significant digits, trailing
/// zeros trimmed. Presentation only.
pub fn decimal_12(r: &Rational) -> String {
    const SIG: i64 = 12;
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();
    let mut shift = SIG - (p.to_string().len() as i64 - q.to_string().len() as i64) - 1;
    loop {
        let scaled = round_scaled(&p, &q, shift);
        let digits = scaled.to_string();
        if digits.len() as i64 == SIG {
            return assemble_decimal(neg, &digits, shift);
        }
        shift += SIG - digits.len() as i64;
    }
}

/// round(p * 10^shift / q) half away from zero, for positive p, q.
fn round_scaled(p: &BigInt, q: &BigInt, shift: i64) -> BigInt {
    let ten = BigInt::from(10);
    if shift >= 0 {
        let num = p * ten.pow(shift as u32);
        (&num * 2 + q) / (q * 2)
    } else {
        let den = q * ten.pow((-shift) as u32);
        (p * 2 + &den) / (&den * 2)
    }
}

fn assemble_decimal(neg: bool, digits: &str, shift: i64) -> String {
    let sign = if neg { "-" } else { "" };
    let n = digits.len() as i64;
    let body = if shift <= 0 {
        format!("{}{}", digits, "0".repeat((-shift) as usize))
    } else if shift < n {
        let split = (n - shift) as usize;
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            digits[..split].to_string()
        } else {
            format!("{}.{}", &digits[..split], frac)
        }
    } else {
        let frac = format!("{}{}", "0".repeat((shift - n) as usize), digits);
        format!("0.{}", frac.trim_end_matches('0'))
    };
    format!("{}{}", sign, body)
}

/// Fixed three-decimal rendering, round half away from zero. Used for
/// SVG coordinates, where a fixed width keeps output byte-stable.
pub fn fixed3(r: &Rational) -> String {
    let scaled = {
        let t = r * &Rational::from_integer(BigInt::from(1000));
        let (n, d) = (t.numer().clone(), t.denom().clone());
        let two = BigInt::from(2);
        let a = n.abs();
        let rounded = (&a * &two + &d) / (&d * &two);
        if n.is_negative() {
            -rounded
        } else {
            rounded
        }
    };
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let int = &a / 1000;
    let frac = &a % 1000;
    format!("{}{}.{:03}", if neg { "-" } else { "" }, int, frac)
}

/// Canonical document for a polygon: counterclockwise from the
/// lexicographically smallest vertex, coordinates in lowest terms.
pub fn polygon_to_document(d: &DelzantPolygon) -> PolygonDocument {
    let vertices = d
        .base()
        .rotated_to_min()
        .iter()
        .map(|v| [rational_to_string(&v.x), rational_to_string(&v.y)])
        .collect();
    PolygonDocument { version: FORMAT_VERSION, vertices }
}

pub fn document_to_points(doc: &PolygonDocument) -> Result<Vec<Point>, CliError> {
    if doc.version != FORMAT_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported document version {} (expected {})",
            doc.version, FORMAT_VERSION
        )));
    }
    doc.vertices
        .iter()
        .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
        .collect()
}

/// Full load path: JSON text to validated Delzant polygon.
pub fn document_to_delzant(doc: &PolygonDocument) -> Result<DelzantPolygon, CliError> {
    let points = document_to_points(doc)?;
    let poly = ConvexPolygon::new(points).map_err(|e| CliError::Domain(e.to_string()))?;
    DelzantPolygon::validate(poly).map_err(|rep| CliError::Domain(rep.to_string()))
}

pub fn parse_document(text: &str) -> Result<PolygonDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn document_to_json(doc: &PolygonDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serialization is infallible");
    s.push('\n');
    s
}

pub fn result_to_json(doc: &ResultDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("result serialization is infallible");
    s.push('\n');
    s
}
