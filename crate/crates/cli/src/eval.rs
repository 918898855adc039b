use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use entbound::bounds::{
    breuer_bound, ck_upper, dual_upper, entropic_check, marginal_deviation, mb_lower,
    multipartite_lower, multipartite_upper, positive_map_bound, ppt_check,
    schmidt_number_detect, transposition_bound, BoundReport, EntropicCheck, PptCheck,
    UnitaryChoice, MARGINAL_TOL,
};
use entbound::maps::{breuer_map, default_breuer_unitary, reduction_map, transpose_map};
use entbound::observables::AlphaStrategy;
use entbound::states::{wootters_concurrence, StateFile};
use entbound::DensityMatrix;

use crate::{emit, Failure, Format};

const PURE_TOL: f64 = 1e-10;

#[derive(Serialize)]
pub struct BoundEntry {
    #[serde(flatten)]
    pub report: BoundReport,
    /// Clipped value on the scale of C (square root for squared targets).
    pub c_scale: f64,
}

#[derive(Serialize)]
pub struct Checks {
    pub ppt: PptCheck,
    pub entropic: Vec<EntropicCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ck_upper: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schmidt_number_detect: Option<usize>,
}

#[derive(Serialize, Default)]
pub struct Exact {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wootters: Option<f64>,
    /// Pure-state concurrence (multipartite for more than two parties).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure: Option<f64>,
}

#[derive(Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Serialize)]
pub struct EvalBundle {
    pub dims: Vec<usize>,
    pub purity: f64,
    pub bounds: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Checks>,
    pub exact: Exact,
    pub skipped: Vec<Skipped>,
}

struct Collector {
    bounds: Vec<BoundEntry>,
    skipped: Vec<Skipped>,
}

impl Collector {
    fn push(&mut self, name: &str, r: entbound::Result<BoundReport>) {
        match r {
            Ok(report) => self.bounds.push(BoundEntry {
                c_scale: report.on_c_scale(),
                report,
            }),
            Err(e) => self.skipped.push(Skipped {
                name: name.to_string(),
                reason: e.to_string(),
            }),
        }
    }
}

fn renamed(r: entbound::Result<BoundReport>, name: &str) -> entbound::Result<BoundReport> {
    r.map(|mut r| {
        r.name = name.to_string();
        r
    })
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file = StateFile::from_json(&text)
        .map_err(|e| Failure::Usage(format!("malformed state file {}: {e}", path.display())))?;
    Ok(file.to_density()?)
}

pub fn evaluate(rho: &DensityMatrix, seed: u64) -> entbound::Result<EvalBundle> {
    let dims = rho.dims().as_slice().to_vec();
    let mut c = Collector {
        bounds: Vec::new(),
        skipped: Vec::new(),
    };
    let mut exact = Exact::default();
    let purity = rho.purity();
    let mut checks = None;

    if dims.len() == 2 {
        checks = Some(Checks {
            ppt: ppt_check(rho)?,
            entropic: (2..=4).map(|a| entropic_check(rho, a)).collect::<entbound::Result<_>>()?,
            ck_upper: ck_upper(rho).ok().map(|v| v.values),
            schmidt_number_detect: schmidt_number_detect(rho).ok(),
        });
        if dims == [2, 2] {
            exact.wootters = Some(wootters_concurrence(rho)?);
        }
    }
    if (purity - 1.0).abs() <= PURE_TOL && dims.len() >= 2 {
        // For two parties the multipartite formula is the bipartite concurrence.
        exact.pure = Some(multipartite_upper(rho)?.raw.max(0.0).sqrt());
    }

    if dims.len() == 2 && dims[0] == dims[1] {
        let d = dims[0];
        c.push("mb_lower", mb_lower(rho));
        c.push("dual_upper", dual_upper(rho));
        let r = reduction_map(d)?;
        for s in [AlphaStrategy::Canonical, AlphaStrategy::Tight, AlphaStrategy::Norm] {
            c.push(&format!("positive_map_{}", s.name()), positive_map_bound(rho, &r, s));
        }
        let t = transpose_map(d)?;
        c.push("transpose_tight", renamed(positive_map_bound(rho, &t, AlphaStrategy::Tight), "transpose_tight"));
        if d.is_multiple_of(2) && d >= 4 {
            c.push("breuer", breuer_bound(rho));
            let v = default_breuer_unitary(d)?;
            let b = breuer_map(&v)?;
            c.push("breuer_map_tight", renamed(positive_map_bound(rho, &b, AlphaStrategy::Tight), "breuer_map_tight"));
        } else {
            c.skipped.push(Skipped {
                name: "breuer".into(),
                reason: format!("needs an even local dimension >= 4, got {d}"),
            });
        }
        if marginal_deviation(rho)? <= MARGINAL_TOL {
            c.push("transposition", transposition_bound(rho, &UnitaryChoice::optimize(seed)));
        } else {
            c.skipped.push(Skipped {
                name: "transposition".into(),
                reason: "first marginal is not maximally mixed".into(),
            });
        }
    } else if dims.len() == 2 {
        c.skipped.push(Skipped {
            name: "bipartite bounds".into(),
            reason: "unequal local dimensions".into(),
        });
    }
    if dims.len() >= 3 {
        c.push("multipartite_lower", multipartite_lower(rho, rho));
        c.push("multipartite_upper", multipartite_upper(rho));
    }

    Ok(EvalBundle {
        dims,
        purity,
        bounds: c.bounds,
        checks,
        exact,
        skipped: c.skipped,
    })
}

pub fn run(path: &Path, seed: u64, format: Format) -> Result<(), Failure> {
    let rho = load_state(path)?;
    let bundle = evaluate(&rho, seed)?;
    match format {
        Format::Json => {
            emit(&serde_json::to_string_pretty(&bundle).context("serializing report")?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["name", "side", "target", "raw", "clipped", "c_scale"])
                .context("writing CSV")?;
            for b in &bundle.bounds {
                let side = serde_json::to_value(b.report.side).context("side")?;
                let target = serde_json::to_value(b.report.target).context("target")?;
                w.write_record([
                    b.report.name.clone(),
                    side.as_str().unwrap_or_default().to_string(),
                    target.as_str().unwrap_or_default().to_string(),
                    b.report.raw.to_string(),
                    b.report.clipped.to_string(),
                    b.c_scale.to_string(),
                ])
                .context("writing CSV")?;
            }
            w.flush().context("writing CSV")?;
        }
    }
    Ok(())
}
