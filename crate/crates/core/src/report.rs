//! CSV report writers. Every report starts with `#` comment lines carrying
//! the run configuration, followed by a header row.

use std::fmt;
use std::io::Write;

use crate::curves::CurvePoint;
use crate::error::Result;
use crate::estimators::EstimateSet;
use crate::scalar::Scalar;
use crate::selection::SelectionResult;
use crate::verify::VerifyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    Enumeration,
    MonteCarlo,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::ClosedForm => "closed_form",
            Source::Enumeration => "enumeration",
            Source::MonteCarlo => "montecarlo",
        })
    }
}

/// One line of the error report. `k` and `t` are empty for the reference
/// models, `stderr` for exact sources.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub model: String,
    pub p: f64,
    pub n: usize,
    pub k: Option<usize>,
    pub t: Option<f64>,
    pub e_c: f64,
    pub e_t: f64,
    pub e_s: f64,
    pub source: Source,
    pub stderr: Option<f64>,
}

pub fn write_comments<W: Write>(out: &mut W, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    Ok(())
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn num<T: Scalar>(v: &T) -> String {
    v.approx().to_string()
}

fn finish<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner().map_err(|e| e.into_error())?.flush()?;
    Ok(())
}

pub fn write_errors<W: Write>(mut out: W, comments: &[String], rows: &[ErrorRow]) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["model", "p", "n", "k", "t", "E_ec", "E_et", "E_es", "source", "stderr"])?;
    for r in rows {
        w.write_record([
            r.model.clone(),
            r.p.to_string(),
            r.n.to_string(),
            opt(&r.k),
            opt(&r.t),
            r.e_c.to_string(),
            r.e_t.to_string(),
            r.e_s.to_string(),
            r.source.to_string(),
            opt(&r.stderr),
        ])?;
    }
    finish(w)
}

pub fn write_estimates<W: Write, T: Scalar>(mut out: W, comments: &[String], est: &EstimateSet<T>) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "t_i", "r_i_raw", "r_i_clamped", "tau_i_hat"])?;
    for i in 0..est.n() {
        w.write_record([
            i.to_string(),
            num(&est.t[i]),
            num(&est.r_raw[i]),
            num(&est.r_clamped[i]),
            num(&est.tau_hat(i)?),
        ])?;
    }
    finish(w)
}

pub fn write_selection<W: Write, T: Scalar>(
    mut out: W,
    comments: &[String],
    result: &SelectionResult<T>,
) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "t", "E_et_hat", "E_es_hat", "E_ec_t2", "E_ec_t3", "chosen"])?;
    for (i, row) in result.grid.iter().enumerate() {
        w.write_record([
            row.k.to_string(),
            num(&row.t),
            num(&row.e_t_hat),
            num(&row.e_s_hat),
            num(&row.e_c_t2),
            num(&row.e_c_t3),
            u8::from(i == result.chosen).to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_curves<W: Write, T: Scalar>(mut out: W, comments: &[String], points: &[CurvePoint<T>]) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "series", "value"])?;
    for pt in points {
        w.write_record([num(&pt.p), pt.series.to_string(), num(&pt.value)])?;
    }
    finish(w)
}

pub fn write_checks<W: Write>(mut out: W, comments: &[String], report: &VerifyReport) -> Result<()> {
    write_comments(&mut out, comments)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theorem", "method", "check", "statistic", "verdict"])?;
    for c in &report.checks {
        w.write_record([
            c.theorem.to_string(),
            c.method.to_string(),
            c.name.clone(),
            c.statistic.clone(),
            (if c.passed { "pass" } else { "fail" }).to_string(),
        ])?;
    }
    finish(w)
}
