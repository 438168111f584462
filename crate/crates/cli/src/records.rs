//! Serializable output records and their CSV flattening.
//!
//! Every number is rounded to 15 significant digits before it is stored, so
//! a record printed as JSON parses back to an identical record.

use serde::{Deserialize, Serialize};

use dirac2d::coulomb::{eps0_coefficient_real, EnergyBreakdown};
use dirac2d::limits::rational_to_f64;
use dirac2d::perturb::{e1_coefficient_real, e2_coefficient_real};
use dirac2d::qnum::{Channel, ChannelParams, QuantumState};
use dirac2d::real::rel_diff;
use dirac2d::report_io::fmt_sci;
use dirac2d::tables::{table_eps0, table_eps1, table_eps2, table_nonrel, Gammas};
use dirac2d::{DoubleDouble, PhysicsConfig, Real, Result};

pub const MC2: &str = "mc2";
pub const HARTREE: &str = "hartree";
pub const B0: &str = "B0";
pub const TESLA: &str = "tesla";
pub const CHI_UNITS: &str = "alpha2_a0_3_over_Z2";

/// `x` rounded to 15 significant digits.
pub fn r15(x: f64) -> f64 {
    fmt_sci(x).parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub units: String,
}

impl Quantity {
    pub fn new(value: f64, units: &str) -> Self {
        Self { value: r15(value), units: units.to_owned() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    #[serde(rename = "Z")]
    pub z: f64,
    pub alpha: f64,
    pub alpha_scale: f64,
    pub alpha_z: f64,
}

impl From<&PhysicsConfig> for ConfigRecord {
    fn from(c: &PhysicsConfig) -> Self {
        Self { z: r15(c.z), alpha: r15(c.alpha), alpha_scale: r15(c.alpha_scale), alpha_z: r15(c.alpha_z()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub n: u32,
    pub two_kappa: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_m_kappa: Option<i32>,
    pub label: String,
}

impl StateRecord {
    pub fn channel(c: Channel) -> Self {
        Self { n: c.n, two_kappa: c.two_kappa(), two_m_kappa: None, label: c.label() }
    }

    pub fn state(s: &QuantumState) -> Self {
        Self { n: s.n, two_kappa: s.kappa.twice(), two_m_kappa: Some(s.m_kappa.twice()), label: s.channel().label() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub state: StateRecord,
    pub n_r: u32,
    pub gamma: f64,
    #[serde(rename = "N")]
    pub big_n: f64,
    #[serde(rename = "E0_over_mc2")]
    pub e0_over_mc2: Quantity,
    pub eps0: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelsReport {
    pub config: ConfigRecord,
    pub levels: Vec<LevelRecord>,
}

pub fn level_record(channel: Channel, config: &PhysicsConfig) -> Result<LevelRecord> {
    let p = ChannelParams::<f64>::new(channel, config)?;
    Ok(LevelRecord {
        state: StateRecord::channel(channel),
        n_r: p.n_r,
        gamma: r15(p.gamma),
        big_n: r15(p.big_n),
        e0_over_mc2: Quantity::new(p.energy_ratio(), MC2),
        eps0: Quantity::new(eps0_coefficient_real(&p), HARTREE),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub units: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assembled {
    #[serde(rename = "E_over_mc2")]
    pub e_over_mc2: f64,
    pub units: String,
    /// `E - mc^2`, with the contributions of each order.
    pub binding: Quantity,
    pub order0: Quantity,
    pub order1: Quantity,
    pub order2: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeemanRecord {
    pub state: StateRecord,
    pub coefficients: Coefficients,
    pub assembled: Assembled,
    pub chi: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeemanReport {
    pub config: ConfigRecord,
    pub b_over_b0: Quantity,
    pub b: Quantity,
    pub b0: Quantity,
    pub records: Vec<ZeemanRecord>,
}

pub fn zeeman_record(b: &EnergyBreakdown, b_over_b0: f64) -> ZeemanRecord {
    let (t0, t1, t2) = b.terms_hartree(b_over_b0);
    ZeemanRecord {
        state: StateRecord::state(&b.state),
        coefficients: Coefficients { eps0: r15(b.eps0), eps1: r15(b.eps1), eps2: r15(b.eps2), units: HARTREE.into() },
        assembled: Assembled {
            e_over_mc2: r15(b.energy_over_mc2(b_over_b0)),
            units: MC2.into(),
            binding: Quantity::new(b.binding_hartree(b_over_b0), HARTREE),
            order0: Quantity::new(t0, HARTREE),
            order1: Quantity::new(t1, HARTREE),
            order2: Quantity::new(t2, HARTREE),
        },
        chi: Quantity::new(b.chi(), CHI_UNITS),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub general: f64,
    pub literal: f64,
    pub rel_diff: f64,
    pub nonrel: f64,
    pub nonrel_exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub state: StateRecord,
    pub eps0: CellRecord,
    /// Coefficient for `m > 0`; the `m < 0` value has the opposite sign.
    pub eps1: CellRecord,
    pub eps2: CellRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub config: ConfigRecord,
    pub units: String,
    pub max_rel_diff: f64,
    pub rows: Vec<TableRow>,
}

pub fn table_rows(config: &PhysicsConfig) -> Result<TablesReport> {
    type D = DoubleDouble;
    let g = Gammas::<D>::new(config)?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for c in dirac2d::tables::table_channels() {
        let p = ChannelParams::<D>::new(c, config)?;
        let (n0, n1, n2) = table_nonrel(c)?;
        let nonrel = [n0, n1, n2];
        let general = [
            eps0_coefficient_real(&p),
            e1_coefficient_real(&p, c.state(true).m_over_kappa()),
            e2_coefficient_real(&p),
        ];
        let literal = [table_eps0(c, &g)?, table_eps1(c, true, &g)?, table_eps2(c, &g)?];
        let cell = |k: usize| {
            let d = rel_diff(general[k], literal[k]).to_f64();
            CellRecord {
                general: r15(general[k].to_f64()),
                literal: r15(literal[k].to_f64()),
                rel_diff: r15(d),
                nonrel: r15(rational_to_f64(nonrel[k])),
                nonrel_exact: nonrel[k].to_string(),
            }
        };
        let row = TableRow { state: StateRecord::channel(c), eps0: cell(0), eps1: cell(1), eps2: cell(2) };
        worst = worst.max(row.eps0.rel_diff).max(row.eps1.rel_diff).max(row.eps2.rel_diff);
        rows.push(row);
    }
    Ok(TablesReport { config: config.into(), units: HARTREE.into(), max_rel_diff: worst, rows })
}

/// Renders rows of string cells as CSV with `\n` line ends.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn levels_csv(r: &LevelsReport) -> String {
    let rows: Vec<Vec<String>> = r
        .levels
        .iter()
        .map(|l| {
            vec![
                l.state.n.to_string(),
                l.state.two_kappa.to_string(),
                l.state.label.clone(),
                l.n_r.to_string(),
                fmt_sci(l.gamma),
                fmt_sci(l.big_n),
                fmt_sci(l.e0_over_mc2.value),
                fmt_sci(l.eps0.value),
            ]
        })
        .collect();
    csv_text(&["n", "two_kappa", "label", "n_r", "gamma", "N", "E0_over_mc2[mc2]", "eps0[hartree]"], &rows)
}

pub fn zeeman_csv(r: &ZeemanReport) -> String {
    let rows: Vec<Vec<String>> = r
        .records
        .iter()
        .map(|z| {
            vec![
                z.state.n.to_string(),
                z.state.two_kappa.to_string(),
                z.state.two_m_kappa.map(|m| m.to_string()).unwrap_or_default(),
                z.state.label.clone(),
                fmt_sci(r.b_over_b0.value),
                fmt_sci(z.coefficients.eps0),
                fmt_sci(z.coefficients.eps1),
                fmt_sci(z.coefficients.eps2),
                fmt_sci(z.assembled.e_over_mc2),
                fmt_sci(z.assembled.binding.value),
                fmt_sci(z.chi.value),
            ]
        })
        .collect();
    csv_text(
        &[
            "n",
            "two_kappa",
            "two_m_kappa",
            "label",
            "b_over_b0[B0]",
            "eps0[hartree]",
            "eps1[hartree]",
            "eps2[hartree]",
            "E_over_mc2[mc2]",
            "E_minus_mc2[hartree]",
            "chi[alpha2_a0_3_over_Z2]",
        ],
        &rows,
    )
}

pub fn tables_csv(r: &TablesReport) -> String {
    let mut header = vec!["n", "two_kappa", "label"];
    let cols = [
        "eps0_general[hartree]",
        "eps0_literal[hartree]",
        "eps0_rel_diff",
        "eps0_nonrel[hartree]",
        "eps1_general[hartree]",
        "eps1_literal[hartree]",
        "eps1_rel_diff",
        "eps1_nonrel[hartree]",
        "eps2_general[hartree]",
        "eps2_literal[hartree]",
        "eps2_rel_diff",
        "eps2_nonrel[hartree]",
    ];
    header.extend(cols);
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|t| {
            let mut v = vec![t.state.n.to_string(), t.state.two_kappa.to_string(), t.state.label.clone()];
            for c in [&t.eps0, &t.eps1, &t.eps2] {
                v.extend([fmt_sci(c.general), fmt_sci(c.literal), fmt_sci(c.rel_diff), c.nonrel_exact.clone()]);
            }
            v
        })
        .collect();
    csv_text(&header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_idempotent() {
        for x in [1.0 / 3.0, -2.0e-7 / 7.0, 123456.789012345678] {
            assert_eq!(r15(r15(x)), r15(x));
            assert!((r15(x) - x).abs() <= 1e-14 * x.abs());
        }
    }

    #[test]
    fn zeeman_record_round_trips() {
        let cfg = PhysicsConfig::codata(3.0).unwrap();
        let s = Channel::new(2, -3).unwrap().state(false);
        let b = dirac2d::perturb::energy_breakdown(&s, &cfg).unwrap();
        let rec = zeeman_record(&b, 1e-3);
        let text = serde_json::to_string(&rec).unwrap();
        let back: ZeemanRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn table_agreement() {
        let r = table_rows(&PhysicsConfig::new(1.0, 0.4, 1.0).unwrap()).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert!(r.max_rel_diff < 1e-12);
        assert_eq!(r.rows[0].eps2.nonrel_exact, "3/64");
    }
}
