//! Text snapshots of the tabulated coefficients and of field scans.
//!
//! A snapshot is a header line `# dirac2d-golden v1 Z=<z> alpha_scale=<s>`
//! followed by a CSV body sorted by `(n, two_kappa)`. Numbers are written
//! with 15 significant digits in scientific notation.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::rational_to_f64;
use crate::perturb::{e1_coefficient, e2_coefficient};
use crate::coulomb::eps0_coefficient;
use crate::qnum::PhysicsConfig;
use crate::tables::{table_channels, table_nonrel};

pub const GOLDEN_SCHEMA: &str = "dirac2d-golden v1";
const COLUMNS: [&str; 6] = ["n", "two_kappa", "label", "eps0", "eps1_over_sgn_m", "eps2"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub n: u32,
    pub two_kappa: i32,
    pub label: String,
    pub eps0: f64,
    pub eps1_over_sgn_m: f64,
    pub eps2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenTable {
    pub z: f64,
    /// `0` marks the nonrelativistic columns.
    pub alpha_scale: f64,
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    /// The nine tabulated states evaluated with the general formulas.
    pub fn compute(config: &PhysicsConfig) -> Result<Self> {
        let mut rows = Vec::new();
        for c in table_channels() {
            rows.push(GoldenRow {
                n: c.n,
                two_kappa: c.two_kappa(),
                label: c.label(),
                eps0: eps0_coefficient(c, config)?,
                eps1_over_sgn_m: e1_coefficient(&c.state(true), config)?,
                eps2: e2_coefficient(c, config)?,
            });
        }
        Ok(Self { z: config.z, alpha_scale: config.alpha_scale, rows })
    }

    /// The exact nonrelativistic columns.
    pub fn nonrelativistic() -> Self {
        let rows = table_channels()
            .into_iter()
            .map(|c| {
                let (e0, e1, e2) = table_nonrel(c).expect("tabulated channel");
                GoldenRow {
                    n: c.n,
                    two_kappa: c.two_kappa(),
                    label: c.label(),
                    eps0: rational_to_f64(e0),
                    eps1_over_sgn_m: rational_to_f64(e1),
                    eps2: rational_to_f64(e2),
                }
            })
            .collect();
        Self { z: 1.0, alpha_scale: 0.0, rows }
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<&GoldenRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| (r.n, r.two_kappa));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(COLUMNS).expect("in-memory write");
        for r in rows {
            w.write_record([
                r.n.to_string(),
                r.two_kappa.to_string(),
                r.label.clone(),
                fmt_sci(r.eps0),
                fmt_sci(r.eps1_over_sgn_m),
                fmt_sci(r.eps2),
            ])
            .expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output");
        format!(
            "# {GOLDEN_SCHEMA} Z={} alpha_scale={}\n{body}",
            fmt_sci(self.z),
            fmt_sci(self.alpha_scale)
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Schema("missing header line".into()))?;
        let meta = header
            .strip_prefix("# ")
            .and_then(|h| h.strip_prefix(GOLDEN_SCHEMA))
            .ok_or_else(|| Error::Schema(format!("unrecognised header {header:?}")))?;
        let mut z = None;
        let mut alpha_scale = None;
        for field in meta.split_whitespace() {
            match field.split_once('=') {
                Some(("Z", v)) => z = v.parse::<f64>().ok(),
                Some(("alpha_scale", v)) => alpha_scale = v.parse::<f64>().ok(),
                _ => return Err(Error::Schema(format!("unexpected header field {field:?}"))),
            }
        }
        let (z, alpha_scale) = z
            .zip(alpha_scale)
            .ok_or_else(|| Error::Schema("header needs numeric Z and alpha_scale".into()))?;
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let cols: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Schema(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        if cols != COLUMNS {
            return Err(Error::Schema(format!("columns {cols:?}, expected {COLUMNS:?}")));
        }
        let rows = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<GoldenRow>, _>>()
            .map_err(|e| Error::Schema(e.to_string()))?;
        Ok(Self { z, alpha_scale, rows })
    }
}

/// 15 significant digits, scientific notation.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn write_golden(table: &GoldenTable, path: &Path) -> Result<()> {
    fs::write(path, table.to_text()).map_err(|e| io_err(path, e))
}

pub fn read_golden(path: &Path) -> Result<GoldenTable> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    GoldenTable::parse(&text)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub label: String,
    pub column: &'static str,
    pub a: f64,
    pub b: f64,
    pub relative: f64,
}

/// Cell-by-cell comparison. Rows are matched by `(n, two_kappa)`; a
/// differing row set is a schema mismatch.
pub fn compare_tables(a: &GoldenTable, b: &GoldenTable, rel_tol: f64) -> Result<Vec<Violation>> {
    let key = |t: &GoldenTable| {
        let mut k: Vec<(u32, i32)> = t.rows.iter().map(|r| (r.n, r.two_kappa)).collect();
        k.sort_unstable();
        k
    };
    if key(a) != key(b) {
        return Err(Error::Schema("snapshots list different states".into()));
    }
    let mut out = Vec::new();
    let mut ra: Vec<&GoldenRow> = a.rows.iter().collect();
    let mut rb: Vec<&GoldenRow> = b.rows.iter().collect();
    ra.sort_by_key(|r| (r.n, r.two_kappa));
    rb.sort_by_key(|r| (r.n, r.two_kappa));
    for (x, y) in ra.into_iter().zip(rb) {
        let cells = [
            ("eps0", x.eps0, y.eps0),
            ("eps1_over_sgn_m", x.eps1_over_sgn_m, y.eps1_over_sgn_m),
            ("eps2", x.eps2, y.eps2),
        ];
        for (column, u, v) in cells {
            let scale = u.abs().max(v.abs());
            let relative = if scale == 0.0 { 0.0 } else { (u - v).abs() / scale };
            if relative > rel_tol || u.is_nan() != v.is_nan() {
                out.push(Violation { label: x.label.clone(), column, a: u, b: v, relative });
            }
        }
    }
    Ok(out)
}

pub fn compare_golden(path_a: &Path, path_b: &Path, rel_tol: f64) -> Result<Vec<Violation>> {
    compare_tables(&read_golden(path_a)?, &read_golden(path_b)?, rel_tol)
}

/// One field point of a scan; energies are `E - mc^2` in Hartree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b_over_b0: f64,
    pub e_pert_hartree: f64,
    pub e_var_hartree: Option<f64>,
    pub residual_hartree: Option<f64>,
}

/// CSV text of a scan, rows in the given order. Variational columns appear
/// only when `with_variational` is set.
pub fn scan_to_csv(rows: &[ScanRow], with_variational: bool) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["b_over_b0[B0]", "e_pert[hartree]"];
    if with_variational {
        header.extend(["e_var[hartree]", "residual[hartree]"]);
    }
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![fmt_sci(r.b_over_b0), fmt_sci(r.e_pert_hartree)];
        if with_variational {
            let opt = |v: Option<f64>| v.map(fmt_sci).unwrap_or_default();
            rec.push(opt(r.e_var_hartree));
            rec.push(opt(r.residual_hartree));
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> GoldenTable {
        GoldenTable::compute(&PhysicsConfig::codata(10.0).unwrap()).unwrap()
    }

    #[test]
    fn writes_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        let t = table();
        write_golden(&t, &a).unwrap();
        let mut shuffled = t.clone();
        shuffled.rows.reverse();
        write_golden(&shuffled, &b).unwrap();
        let bytes = fs::read(&a).unwrap();
        assert_eq!(bytes, fs::read(&b).unwrap());
        assert_eq!(*bytes.last().unwrap(), b'\n');
        assert!(compare_golden(&a, &b, 0.0).unwrap().is_empty());
    }

    #[test]
    fn round_trip_keeps_fifteen_digits() {
        let t = table();
        let back = GoldenTable::parse(&t.to_text()).unwrap();
        for x in &t.rows {
            let y = back.rows.iter().find(|y| (y.n, y.two_kappa) == (x.n, x.two_kappa)).unwrap();
            assert!((x.eps2 - y.eps2).abs() <= 1e-14 * x.eps2.abs());
        }
        assert_eq!(back.z, 10.0);
    }

    #[test]
    fn perturbed_cell_is_detected() {
        let t = table();
        let mut bad = t.clone();
        bad.rows[4].eps2 *= 1.0 + 1e-6;
        let v = compare_tables(&t, &bad, 1e-9).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].column, "eps2");
        assert!(compare_tables(&t, &bad, 1e-3).unwrap().is_empty());
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let t = table();
        let mut fewer = t.clone();
        fewer.rows.pop();
        assert!(matches!(compare_tables(&t, &fewer, 1e-9), Err(Error::Schema(_))));
        let text = t.to_text().replace("eps2\n", "eps_two\n");
        assert!(matches!(GoldenTable::parse(&text), Err(Error::Schema(_))));
        assert!(matches!(GoldenTable::parse("# other v9 Z=1\n"), Err(Error::Schema(_))));
    }

    #[test]
    fn nonrelativistic_snapshot_matches_near_limit() {
        let near = GoldenTable::compute(&PhysicsConfig::with_alpha_scale(1.0, 1e-5).unwrap()).unwrap();
        let v = compare_tables(&GoldenTable::nonrelativistic(), &near, 1e-8).unwrap();
        assert!(v.iter().all(|x| x.a == 0.0 || x.relative < 1e-8), "{v:?}");
        let text = GoldenTable::nonrelativistic().to_text();
        assert!(text.starts_with("# dirac2d-golden v1 Z=1.00000000000000e0 alpha_scale=0.00000000000000e0\n"));
        assert!(text.contains("1,-1,1s_{1/2},-2.00000000000000e0,5.00000000000000e-1,4.68750000000000e-2\n"));
    }

    #[test]
    fn scan_columns_follow_flag() {
        let rows = [ScanRow { b_over_b0: 1e-3, e_pert_hartree: -0.5, e_var_hartree: None, residual_hartree: None }];
        assert_eq!(scan_to_csv(&rows, false).lines().next(), Some("b_over_b0[B0],e_pert[hartree]"));
        assert!(scan_to_csv(&rows, true).starts_with("b_over_b0[B0],e_pert[hartree],e_var[hartree],residual[hartree]\n"));
    }
}
