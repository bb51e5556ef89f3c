//! Parameter presets for the eight published figures.
//!
//! Channels use `α = T1/T2` with `T1a = T1b = 1`, so `t` is measured in
//! units of the longitudinal time. Figures 3 and 6 exist in two variants
//! (`caption`: `t_eq = 1, α = 2.5`; `body`: `t_eq = -0.5, α = 0.5`);
//! figures 7 and 8 have panels `a` (`p = 0`) and `b` (`p = 0.5`).

use crate::channel::{ChannelMode, ChannelParams};
use crate::curve::{run_curve, CurveTable, Quantity, SweepSpec};
use crate::error::{Error, Result};
use crate::qstate::FamilyParam;

pub const SEQ_GRID: [f64; 5] = [1.0, 0.9, 0.8, 0.7, 0.5];
pub const ALPHA_GRID: [f64; 4] = [2.5, 0.5, 0.33, 0.25];
pub const FIDELITY_SEQ_GRID: [f64; 3] = [1.0, 0.8, 0.5];

/// Every figure and variant, in output order.
pub const FIGURE_IDS: [&str; 12] = [
    "1",
    "2",
    "3-caption",
    "3-body",
    "4",
    "5",
    "6-caption",
    "6-body",
    "7a",
    "7b",
    "8a",
    "8b",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub t_max: f64,
    pub steps: usize,
    pub mode: ChannelMode,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            t_max: 5.0,
            steps: 501,
            mode: ChannelMode::Physical,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    /// File stem, e.g. `fig7a_seq0.5`.
    pub name: String,
    pub table: CurveTable,
}

struct Preset {
    quantity: Quantity,
    p: f64,
    t_eq: f64,
    alpha: f64,
    lambda1: Option<f64>,
}

impl Preset {
    fn spec(&self, s_eq: f64, alpha: f64, opts: &FigureOptions) -> Result<SweepSpec> {
        Ok(SweepSpec {
            quantity: self.quantity,
            p: FamilyParam::new(self.p)?,
            channel: ChannelParams::from_alpha(alpha, alpha, s_eq, self.t_eq)?,
            mode: opts.mode,
            t_max: opts.t_max,
            steps: opts.steps,
            lambda1: self.lambda1,
        })
    }

    fn seq_sweep(&self, stem: &str, grid: &[f64], opts: &FigureOptions) -> Result<Vec<(String, SweepSpec)>> {
        grid.iter()
            .map(|&s| Ok((format!("{stem}_seq{s}"), self.spec(s, self.alpha, opts)?)))
            .collect()
    }
}

fn preset(quantity: Quantity, p: f64, t_eq: f64, alpha: f64) -> Preset {
    Preset {
        quantity,
        p,
        t_eq,
        alpha,
        lambda1: None,
    }
}

/// Splits `"7a"`, `"3-body"`, `"4"` into figure number and variant.
pub fn parse_figure_id(s: &str) -> Result<(u8, Option<String>)> {
    let s = s.trim().trim_start_matches("fig");
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (num, rest) = s.split_at(split);
    let id: u8 = num
        .parse()
        .map_err(|_| Error::Usage(format!("figure id '{s}' must start with a number 1-8")))?;
    let variant = rest.trim_start_matches('-');
    Ok((id, (!variant.is_empty()).then(|| variant.to_string())))
}

/// Sweep specs behind a figure, each with its file stem.
pub fn figure_specs(id: u8, variant: Option<&str>, opts: &FigureOptions) -> Result<Vec<(String, SweepSpec)>> {
    let bad_variant = |v: &str| Error::Usage(format!("figure {id} has no variant '{v}'"));
    let no_variant = |v: Option<&str>| match v {
        None => Ok(()),
        Some(v) => Err(bad_variant(v)),
    };

    let doe_variants = |p: f64| -> Result<Vec<(String, SweepSpec)>> {
        let mut out = Vec::new();
        let wanted: &[&str] = match variant {
            None => &["caption", "body"],
            Some("caption") => &["caption"],
            Some("body") => &["body"],
            Some(v) => return Err(bad_variant(v)),
        };
        for v in wanted {
            let pr = match *v {
                "caption" => preset(Quantity::Doe, p, 1.0, 2.5),
                _ => preset(Quantity::Doe, p, -0.5, 0.5),
            };
            out.extend(pr.seq_sweep(&format!("fig{id}-{v}"), &SEQ_GRID, opts)?);
        }
        Ok(out)
    };

    let panels = |make: &dyn Fn(f64) -> Preset, grid: &[f64]| -> Result<Vec<(String, SweepSpec)>> {
        let wanted: &[(&str, f64)] = match variant {
            None => &[("a", 0.0), ("b", 0.5)],
            Some("a") => &[("a", 0.0)],
            Some("b") => &[("b", 0.5)],
            Some(v) => return Err(bad_variant(v)),
        };
        let mut out = Vec::new();
        for &(panel, p) in wanted {
            out.extend(make(p).seq_sweep(&format!("fig{id}{panel}"), grid, opts)?);
        }
        Ok(out)
    };

    match id {
        1 => {
            no_variant(variant)?;
            preset(Quantity::PptPaper, 0.0, -0.5, 2.5).seq_sweep("fig1", &SEQ_GRID, opts)
        }
        2 => {
            no_variant(variant)?;
            preset(Quantity::PptPaper, 0.0, 1.0, 2.5).seq_sweep("fig2", &SEQ_GRID, opts)
        }
        3 => doe_variants(0.0),
        4 => {
            no_variant(variant)?;
            let pr = preset(Quantity::Doe, 0.0, -0.5, 2.5);
            ALPHA_GRID
                .iter()
                .map(|&a| Ok((format!("fig4_alpha{a}"), pr.spec(1.0, a, opts)?)))
                .collect()
        }
        5 => {
            no_variant(variant)?;
            preset(Quantity::PptPaper, 0.5, -0.5, 2.5).seq_sweep("fig5", &SEQ_GRID, opts)
        }
        6 => doe_variants(0.5),
        7 => panels(&|p| preset(Quantity::Telp, p, -0.5, 2.5), &SEQ_GRID),
        8 => panels(
            &|p| Preset {
                lambda1: Some(1.0),
                ..preset(Quantity::Fidelity, p, -1.0, 0.5)
            },
            &FIDELITY_SEQ_GRID,
        ),
        _ => Err(Error::Usage(format!("unknown figure {id} (expected 1-8)"))),
    }
}

/// Computes every curve of a figure.
pub fn run_figure(id: u8, variant: Option<&str>, opts: &FigureOptions) -> Result<Vec<FigureCurve>> {
    figure_specs(id, variant, opts)?
        .into_iter()
        .map(|(name, spec)| {
            let mut table = run_curve(&spec)?;
            table.meta.label = name.clone();
            Ok(FigureCurve { name, table })
        })
        .collect()
}

/// Every figure and variant.
pub fn run_all_figures(opts: &FigureOptions) -> Result<Vec<FigureCurve>> {
    let mut out = Vec::new();
    for id in 1..=8 {
        out.extend(run_figure(id, None, opts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_parsing() {
        assert_eq!(parse_figure_id("4").unwrap(), (4, None));
        assert_eq!(parse_figure_id("7a").unwrap(), (7, Some("a".into())));
        assert_eq!(parse_figure_id("fig3-body").unwrap(), (3, Some("body".into())));
        assert!(parse_figure_id("x").is_err());
    }

    #[test]
    fn curve_counts() {
        let o = FigureOptions::default();
        let count = |id, v| figure_specs(id, v, &o).unwrap().len();
        assert_eq!(count(1, None), 5);
        assert_eq!(count(3, None), 10);
        assert_eq!(count(3, Some("body")), 5);
        assert_eq!(count(4, None), 4);
        assert_eq!(count(7, None), 10);
        assert_eq!(count(8, Some("b")), 3);
        assert!(figure_specs(9, None, &o).is_err());
        assert!(figure_specs(1, Some("a"), &o).is_err());
        assert!(figure_specs(7, Some("c"), &o).is_err());
    }

    #[test]
    fn every_listed_id_resolves() {
        let o = FigureOptions::default();
        for id in FIGURE_IDS {
            let (n, v) = parse_figure_id(id).unwrap();
            assert!(!figure_specs(n, v.as_deref(), &o).unwrap().is_empty(), "{id}");
        }
    }

    #[test]
    fn fig1_starts_at_bell_value() {
        let opts = FigureOptions {
            steps: 11,
            ..Default::default()
        };
        let curves = run_figure(1, None, &opts).unwrap();
        assert_eq!(curves.len(), 5);
        for c in &curves {
            assert!((c.table.rows[0].1 + 0.25).abs() < 1e-15, "{}", c.name);
            assert_eq!(c.table.meta.label, c.name);
        }
    }

    #[test]
    fn fig8_starts_at_unit_fidelity() {
        let opts = FigureOptions {
            steps: 11,
            ..Default::default()
        };
        for c in run_figure(8, None, &opts).unwrap() {
            assert!((c.table.rows[0].1 - 1.0).abs() < 1e-12, "{}", c.name);
        }
    }
}
