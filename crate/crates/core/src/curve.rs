//! Time sweeps of a single quantity and their CSV / JSON serialization.
//!
//! Output is byte-for-byte deterministic: values are printed with 12
//! significant digits, metadata keys are sorted and lines end in `\n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::channel::{apply_channel, cp_check, decay_factors, ChannelMode, ChannelParams};
use crate::entanglement::{doe, evolved_family, ppt_scalar_oracle, ppt_scalar_paper};
use crate::error::{Error, Result};
use crate::qstate::{generic_pure_state, FamilyParam};
use crate::teleport::{horodecki_measure, standard_correction, teleport_protocol, telp_paper, BellState, InputQubit};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Closed-form `ρ11ρ44 - ρ23ρ32` of the evolved family.
    PptPaper,
    /// `ρ11ρ44 - |ρ23|²` from the evolved density matrix.
    PptOracle,
    Doe,
    Telp,
    Horodecki,
    /// Protocol fidelity for a `φ+` outcome with the standard correction.
    Fidelity,
    /// 1 when both channels satisfy the printed CP inequalities, else 0.
    CpCheck,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::PptPaper,
        Quantity::PptOracle,
        Quantity::Doe,
        Quantity::Telp,
        Quantity::Horodecki,
        Quantity::Fidelity,
        Quantity::CpCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::PptPaper => "ppt-paper",
            Quantity::PptOracle => "ppt-oracle",
            Quantity::Doe => "doe",
            Quantity::Telp => "telp",
            Quantity::Horodecki => "horodecki",
            Quantity::Fidelity => "fidelity",
            Quantity::CpCheck => "cp-check",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown quantity '{s}'")))
    }
}

/// Everything needed to reproduce one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub p: FamilyParam,
    #[serde(flatten)]
    pub channel: ChannelParams,
    pub mode: ChannelMode,
    pub t_max: f64,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Usage(format!("steps = {} must be at least 2", self.steps)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Usage(format!("t_max = {} must be positive", self.t_max)));
        }
        match (self.quantity, self.lambda1) {
            (Quantity::Fidelity, None) => Err(Error::Usage("quantity fidelity needs lambda1".into())),
            (Quantity::Fidelity, Some(l)) => InputQubit::from_real(l)
                .map(|_| ())
                .map_err(|e| Error::Usage(e.to_string())),
            (q, Some(_)) => Err(Error::Usage(format!("lambda1 only applies to fidelity, not {q}"))),
            (_, None) => Ok(()),
        }
    }

    /// Uniform grid `t_i = t_max · i / (steps - 1)`.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.steps - 1;
        (0..self.steps).map(move |i| {
            if i == n {
                self.t_max
            } else {
                self.t_max * i as f64 / n as f64
            }
        })
    }

    /// The quantity at one instant.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let cp = &self.channel;
        match self.quantity {
            Quantity::PptPaper => Ok(ppt_scalar_paper(self.p, &decay_factors(cp, t)?, cp.s_eq(), cp.t_eq())),
            Quantity::PptOracle => ppt_scalar_oracle(&evolved_family(self.p, cp, t, self.mode)?),
            Quantity::Doe => doe(&evolved_family(self.p, cp, t, self.mode)?),
            Quantity::Telp => Ok(telp_paper(self.p, &decay_factors(cp, t)?, cp.s_eq(), cp.t_eq())),
            Quantity::Horodecki => Ok(horodecki_measure(&apply_channel(
                &generic_pure_state(self.p),
                cp,
                t,
                self.mode,
            )?)),
            Quantity::Fidelity => {
                let input = InputQubit::from_real(self.lambda1.unwrap_or(1.0))?;
                let channel = evolved_family(self.p, cp, t, self.mode)?;
                let outcome = BellState::PhiPlus;
                Ok(teleport_protocol(&input, &channel, outcome, standard_correction(outcome))?.fidelity)
            }
            Quantity::CpCheck => {
                let ok = cp_check(&decay_factors(cp, t)?, cp.s_eq(), cp.t_eq()).passes();
                Ok(if ok { 1.0 } else { 0.0 })
            }
        }
    }
}

/// Metadata written ahead of the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    #[serde(flatten)]
    pub spec: SweepSpec,
    #[serde(default)]
    pub label: String,
    pub time_unit: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub meta: CurveMeta,
    pub rows: Vec<(f64, f64)>,
}

pub fn run_curve(spec: &SweepSpec) -> Result<CurveTable> {
    spec.validate()?;
    let rows = spec
        .times()
        .map(|t| spec.evaluate(t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable {
        meta: CurveMeta {
            spec: *spec,
            label: String::new(),
            time_unit: format!("t in units of T1a (T1a = {})", spec.channel.t1a()),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        rows,
    })
}

/// `%.12g`-style rendering: shortest of fixed or exponent notation with
/// trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        format_sig(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

impl CurveTable {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.1)
    }

    fn meta_map(&self) -> Map<String, Value> {
        match serde_json::to_value(&self.meta).expect("metadata serializes") {
            Value::Object(m) => m,
            _ => unreachable!("metadata is a struct"),
        }
    }

    /// `#key=value` lines (sorted), a `t,value` header, then the rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.meta_map() {
            let v = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            out.push_str(&format!("#{k}={v}\n"));
        }
        out.push_str("t,value\n");
        for &(t, v) in &self.rows {
            out.push_str(&format_sig(t));
            out.push(',');
            out.push_str(&format_sig(v));
            out.push('\n');
        }
        out
    }

    /// `{"meta": {...}, "rows": [[t, value], ...]}`.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|&(t, v)| serde_json::json!([round_sig(t), round_sig(v)]))
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(self.meta_map()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = Value::Object(doc).to_string();
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            meta: CurveMeta,
            rows: Vec<(f64, f64)>,
        }
        let doc: Doc = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("curve JSON: {e}")))?;
        Ok(Self {
            meta: doc.meta,
            rows: doc.rows,
        })
    }
}
