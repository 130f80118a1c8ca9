//! Text encodings: surfaces and origamis as JSON/CSV, orbit reports,
//! coefficient files and count tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use h2tiles_core::counting::{a_primitive, a_total, b_primitive, b_total, CountError};
use h2tiles_core::surfaces::SurfaceError;
use h2tiles_core::{OneCylSurface, OrbitReport, Origami, QSeries, Rational, Surface, TwoCylSurface};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Origami(#[from] h2tiles_core::origami::OrigamiError),
}

/// Output formats accepted by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
    Tsv,
}

/// `p/q` with `q >= 1`, also for integers.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SurfaceRecord {
    OneCyl { l: [u64; 3], h: u64, t: u64 },
    TwoCyl { h: [u64; 2], u: [u64; 2], t: [u64; 2] },
}

impl From<&Surface> for SurfaceRecord {
    fn from(s: &Surface) -> Self {
        match *s {
            Surface::OneCyl(OneCylSurface { l, h, t }) => SurfaceRecord::OneCyl { l, h, t },
            Surface::TwoCyl(TwoCylSurface { h, u, t }) => SurfaceRecord::TwoCyl { h, u, t },
        }
    }
}

pub fn surface_json(s: &Surface) -> String {
    serde_json::to_string(&SurfaceRecord::from(s)).expect("plain data serializes")
}

/// Parses one surface record; coordinates must be canonical.
pub fn surface_from_json(text: &str) -> Result<Surface, FormatError> {
    Ok(match serde_json::from_str(text)? {
        SurfaceRecord::OneCyl { l, h, t } => Surface::OneCyl(OneCylSurface::new(l, h, t)?),
        SurfaceRecord::TwoCyl { h, u, t } => Surface::TwoCyl(TwoCylSurface::new(h, u, t)?),
    })
}

/// JSON array, one record per line.
pub fn surfaces_json(surfaces: &[Surface]) -> String {
    json_lines_array(surfaces.iter().map(surface_json))
}

pub fn surfaces_from_json(text: &str) -> Result<Vec<Surface>, FormatError> {
    let records: Vec<serde_json::Value> = serde_json::from_str(text)?;
    records
        .into_iter()
        .map(|v| surface_from_json(&v.to_string()))
        .collect()
}

fn json_lines_array(items: impl Iterator<Item = String>) -> String {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        return "[]\n".into();
    }
    format!("[\n{}\n]\n", items.join(",\n"))
}

pub const SURFACE_CSV_HEADER: &str = "kind,l1,l2,l3,h,t,h1,h2,u1,u2,t1,t2";

pub fn surfaces_csv(surfaces: &[Surface]) -> String {
    let mut out = String::from(SURFACE_CSV_HEADER);
    out.push('\n');
    for s in surfaces {
        let line = match s {
            Surface::OneCyl(c) => format!("one_cyl,{},{},{},{},{},,,,,,", c.l[0], c.l[1], c.l[2], c.h, c.t),
            Surface::TwoCyl(c) => format!(
                "two_cyl,,,,,,{},{},{},{},{},{}",
                c.h[0], c.h[1], c.u[0], c.u[1], c.t[0], c.t[1]
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrigamiRecord {
    n: usize,
    right: Vec<u32>,
    up: Vec<u32>,
}

impl From<&Origami> for OrigamiRecord {
    fn from(o: &Origami) -> Self {
        OrigamiRecord {
            n: o.n(),
            right: o.right().to_vec(),
            up: o.up().to_vec(),
        }
    }
}

pub fn origami_json(o: &Origami) -> String {
    serde_json::to_string(&OrigamiRecord::from(o)).expect("plain data serializes")
}

pub fn origami_from_json(text: &str) -> Result<Origami, FormatError> {
    let rec: OrigamiRecord = serde_json::from_str(text)?;
    if rec.right.len() != rec.n {
        return Err(h2tiles_core::origami::OrigamiError::LengthMismatch {
            right: rec.right.len(),
            up: rec.n,
        }
        .into());
    }
    Ok(Origami::new(rec.right, rec.up)?)
}

#[derive(Serialize)]
struct OrbitRecord {
    size: usize,
    #[serde(rename = "type")]
    surface_type: &'static str,
    representative: OrigamiRecord,
}

#[derive(Serialize)]
struct OrbitReportRecord {
    n: u64,
    orbits: Vec<OrbitRecord>,
}

pub fn orbit_report_json(report: &OrbitReport) -> String {
    let rec = OrbitReportRecord {
        n: report.n,
        orbits: report
            .orbits
            .iter()
            .map(|o| OrbitRecord {
                size: o.size,
                surface_type: o.surface_type.as_str(),
                representative: OrigamiRecord::from(&o.representative),
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&rec).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn orbit_report_csv(report: &OrbitReport) -> String {
    let mut out = String::from("size,type\n");
    for o in &report.orbits {
        out.push_str(&format!("{},{}\n", o.size, o.surface_type));
    }
    out
}

pub fn orbit_report_md(report: &OrbitReport) -> String {
    let mut out = format!("Orbits of primitive {}-square surfaces\n\n| size | type | representative |\n|---:|:---:|---|\n", report.n);
    for o in &report.orbits {
        out.push_str(&format!(
            "| {} | {} | `{}` |\n",
            o.size,
            o.surface_type,
            origami_json(&o.representative)
        ));
    }
    out
}

/// One line per coefficient: `n<TAB>p/q`.
pub fn series_tsv(f: &QSeries) -> String {
    let mut out = String::new();
    for (n, c) in f.coeffs().iter().enumerate() {
        out.push_str(&format!("{n}\t{}\n", rational_str(c)));
    }
    out
}

/// JSON array of `"p/q"` strings.
pub fn series_json(f: &QSeries) -> String {
    let strings: Vec<String> = f.coeffs().iter().map(rational_str).collect();
    let mut s = serde_json::to_string(&strings).expect("strings serialize");
    s.push('\n');
    s
}

pub fn series_csv(f: &QSeries) -> String {
    let mut out = String::from("n,coefficient\n");
    for (n, c) in f.coeffs().iter().enumerate() {
        out.push_str(&format!("{n},{}\n", rational_str(c)));
    }
    out
}

/// Parses the `n<TAB>p/q` format back.
pub fn series_from_tsv(text: &str) -> Option<QSeries> {
    let mut coeffs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let (n, value) = line.split_once('\t')?;
        if n.parse::<usize>().ok()? != i {
            return None;
        }
        let (p, q) = value.split_once('/')?;
        let (p, q): (i128, i128) = (p.parse().ok()?, q.parse().ok()?);
        if q == 0 {
            return None;
        }
        coeffs.push(Rational::new(p, q));
    }
    if coeffs.is_empty() {
        return None;
    }
    Some(QSeries::from_coeffs(coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: u64,
    pub a_primitive: u64,
    pub b_primitive: u64,
    pub a_total: u64,
    pub b_total: u64,
}

impl CountRow {
    pub fn new(n: u64) -> Result<Self, CountError> {
        let total = a_total(n);
        let a_total = if total.is_integer() && n % 2 == 1 {
            *total.numer() as u64
        } else {
            return Err(CountError::EvenArgument(n));
        };
        Ok(CountRow {
            n,
            a_primitive: a_primitive(n)?,
            b_primitive: b_primitive(n)?,
            a_total,
            b_total: b_total(n)?,
        })
    }
}

pub fn count_rows(lo: u64, hi: u64) -> Result<Vec<CountRow>, CountError> {
    (lo..=hi).filter(|n| n % 2 == 1).map(CountRow::new).collect()
}

const COUNT_COLUMNS: [&str; 5] = ["n", "a_primitive", "b_primitive", "a_total", "b_total"];

fn row_values(r: &CountRow) -> [u64; 5] {
    [r.n, r.a_primitive, r.b_primitive, r.a_total, r.b_total]
}

pub fn count_table(rows: &[CountRow], format: Format) -> String {
    let delimited = |sep: &str| {
        let mut out = COUNT_COLUMNS.join(sep);
        out.push('\n');
        for r in rows {
            let vals: Vec<String> = row_values(r).iter().map(u64::to_string).collect();
            out.push_str(&vals.join(sep));
            out.push('\n');
        }
        out
    };
    match format {
        Format::Csv => delimited(","),
        Format::Tsv => delimited("\t"),
        Format::Json => json_lines_array(
            rows.iter()
                .map(|r| serde_json::to_string(r).expect("plain data serializes")),
        ),
        Format::Md => {
            let mut out = format!("| {} |\n", COUNT_COLUMNS.join(" | "));
            out.push_str("|---:|---:|---:|---:|---:|\n");
            for r in rows {
                let vals: Vec<String> = row_values(r).iter().map(u64::to_string).collect();
                out.push_str(&format!("| {} |\n", vals.join(" | ")));
            }
            out
        }
    }
}
