//! Plain-text exports: CSV tables for plotting and JSON documents for
//! machine consumption. Numbers are written in Rust's shortest round-trip
//! form, so identical results give byte-identical files.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evans::EvansReport;
use crate::profile::{FrontProfile, ManifoldTrace, Side};
use crate::resolvent::ResolventReport;
use crate::spectrum::DispersionCurve;
use crate::timestepper::SimState;

/// Columns `xi,U,U_x,U_xx`; `#` header lines carry the front data.
pub fn write_profile_csv(w: &mut impl Write, front: &FrontProfile) -> Result<()> {
    writeln!(w, "# gamma_star = {}", front.gamma_star)?;
    writeln!(w, "# c_star = {}", front.c_star)?;
    writeln!(w, "# tau = {}", front.tau)?;
    writeln!(w, "# eta_minus = {}", front.eta_minus)?;
    writeln!(w, "# eta_plus = {}", front.eta_plus)?;
    writeln!(w, "xi,U,U_x,U_xx")?;
    for i in 0..front.len() {
        writeln!(
            w,
            "{},{},{},{}",
            front.xi[i], front.u[i], front.u_x[i], front.u_xx[i]
        )?;
    }
    Ok(())
}

/// Columns `xi,re_lambda,im_lambda,side,branch` for any number of curves.
pub fn write_dispersion_csv(w: &mut impl Write, curves: &[DispersionCurve]) -> Result<()> {
    writeln!(w, "xi,re_lambda,im_lambda,side,branch")?;
    for curve in curves {
        for (xi, l) in curve.xi.iter().zip(&curve.lambda) {
            writeln!(w, "{},{},{},{},{}", xi, l.re, l.im, curve.end.name(), curve.branch)?;
        }
    }
    Ok(())
}

/// Columns `gamma,side,V,W` of manifold traces in the `(V, W)` plane.
pub fn write_manifolds_csv(w: &mut impl Write, traces: &[ManifoldTrace]) -> Result<()> {
    writeln!(w, "gamma,side,V,W")?;
    for t in traces {
        let side = match t.side {
            Side::UnstableFromZero => "unstable-from-zero",
            Side::StableFromOne => "stable-from-one",
        };
        for &(v, wv) in &t.samples {
            writeln!(w, "{},{},{},{}", t.gamma, side, v, wv)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvansSample {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub re_d: f64,
    pub im_d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvansExport {
    /// `[re, im]` of the rectangle corners.
    pub contour_vertices: Vec<[f64; 2]>,
    pub samples: Vec<EvansSample>,
    pub winding: i64,
    pub winding_origin: i64,
    pub winding_stability_region: i64,
    pub melnikov_gamma: f64,
    pub d0_relative: f64,
    pub min_abs_on_contour: f64,
    pub zero_floor: f64,
}

impl From<&EvansReport> for EvansExport {
    fn from(r: &EvansReport) -> Self {
        Self {
            contour_vertices: r.contour.iter().map(|z| [z.re, z.im]).collect(),
            samples: r
                .lambdas
                .iter()
                .zip(&r.d_samples)
                .map(|(l, d)| EvansSample {
                    re_lambda: l.re,
                    im_lambda: l.im,
                    re_d: d.re,
                    im_d: d.im,
                })
                .collect(),
            winding: r.winding,
            winding_origin: r.winding_origin,
            winding_stability_region: r.winding_stability_region,
            melnikov_gamma: r.melnikov_gamma,
            d0_relative: r.d0_relative,
            min_abs_on_contour: r.min_abs_on_contour,
            zero_floor: r.zero_floor,
        }
    }
}

pub fn write_evans_json(w: &mut impl Write, report: &EvansReport) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, &EvansExport::from(report))?;
    writeln!(w)?;
    Ok(())
}

/// Columns `re_lambda,im_lambda,abs_d,arg_d` along the contour.
pub fn write_evans_csv(w: &mut impl Write, report: &EvansReport) -> Result<()> {
    writeln!(w, "re_lambda,im_lambda,abs_d,arg_d")?;
    for (l, d) in report.lambdas.iter().zip(&report.d_samples) {
        writeln!(w, "{},{},{},{}", l.re, l.im, d.norm(), d.arg())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResolventRow {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub ratio_vuprime: f64,
    pub ratio_uell2: f64,
}

/// JSON array of `{re_lambda, im_lambda, ratio_vuprime, ratio_uell2}`.
pub fn write_resolvent_json(w: &mut impl Write, report: &ResolventReport) -> Result<()> {
    let rows: Vec<ResolventRow> = report
        .records
        .iter()
        .map(|r| ResolventRow {
            re_lambda: r.re_lambda,
            im_lambda: r.im_lambda,
            ratio_vuprime: r.ratio_vuprime,
            ratio_uell2: r.ratio_uell2,
        })
        .collect();
    serde_json::to_writer_pretty(&mut *w, &rows)?;
    writeln!(w)?;
    Ok(())
}

/// Trajectory snapshots: first line `t,x_0,x_1,...`, then one row
/// `t,u_0,u_1,...` per snapshot.
pub struct TrajectoryWriter<W: Write> {
    out: W,
    header_written: bool,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            out,
            header_written: false,
        }
    }

    pub fn snapshot(&mut self, state: &SimState) -> Result<()> {
        if !self.header_written {
            write!(self.out, "t")?;
            for x in &state.x {
                write!(self.out, ",{x}")?;
            }
            writeln!(self.out)?;
            self.header_written = true;
        }
        write!(self.out, "{}", state.t)?;
        for u in &state.u {
            write!(self.out, ",{u}")?;
        }
        writeln!(self.out)?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Reads back the numeric columns of a profile CSV (header lines skipped).
pub fn read_profile_csv(text: &str) -> Vec<[f64; 4]> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("xi"))
        .filter_map(|l| {
            let v: Vec<f64> = l.split(',').filter_map(|s| s.parse().ok()).collect();
            (v.len() == 4).then(|| [v[0], v[1], v[2], v[3]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Damping, ModelSpec, Reaction};
    use crate::profile::compute_front;
    use crate::spectrum::{dispersion_curves, uniform_grid, AsymptoticSpectralData};

    fn front() -> FrontProfile {
        let m = ModelSpec::new(Reaction::cubic(0.3, 1.0).unwrap(), Damping::ConstantOne, 1.0)
            .unwrap()
            .validate()
            .unwrap();
        compute_front(&m).unwrap()
    }

    #[test]
    fn profile_csv_round_trips_exactly() {
        let f = front();
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &f).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# gamma_star = "));
        assert!(text.contains("\nxi,U,U_x,U_xx\n"));
        let rows = read_profile_csv(&text);
        assert_eq!(rows.len(), f.len());
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(*r, [f.xi[i], f.u[i], f.u_x[i], f.u_xx[i]]);
        }
    }

    #[test]
    fn dispersion_csv_has_one_row_per_sample() {
        let data = AsymptoticSpectralData::new(-0.3, -0.7, 1.0, 1.0, -0.2, 0.5).unwrap();
        let xi = uniform_grid(-1.0, 1.0, 5);
        let mut curves = Vec::new();
        for end in crate::spectrum::End::BOTH {
            curves.extend(dispersion_curves(&data, end, &xi).unwrap());
        }
        let mut buf = Vec::new();
        write_dispersion_csv(&mut buf, &curves).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 5 * curves.len());
        assert_eq!(text.lines().next().unwrap(), "xi,re_lambda,im_lambda,side,branch");
    }

    #[test]
    fn trajectory_rows_have_header_width() {
        let m = ModelSpec::new(Reaction::cubic(0.3, 1.0).unwrap(), Damping::ConstantOne, 0.0).unwrap();
        let s = SimState::new(&m, 1.0, 11, 0.0, |x| x, |_| 0.0, None).unwrap();
        let mut w = TrajectoryWriter::new(Vec::new());
        w.snapshot(&s).unwrap();
        w.snapshot(&s).unwrap();
        let text = String::from_utf8(w.into_inner()).unwrap();
        let widths: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
        assert_eq!(widths, vec![12, 12, 12]);
    }
}
