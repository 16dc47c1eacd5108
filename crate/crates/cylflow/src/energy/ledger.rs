//! Per-step record of every quantity the energy inequality tracks, with the
//! CSV persistence the certification front-end re-ingests.

use crate::domain::field::VectorField;
use crate::domain::quad::{dot_mass, norm_l2_mass};
use crate::error::{Error, Result};
use crate::galerkin::forms::{
    dot_plain, slip_energy, slip_form, strain_energy, strain_form, trilinear_skew,
};
use crate::galerkin::provider::LiftSample;
use crate::galerkin::stepper::EvolveParams;
use crate::norms::{grad_sq_integral, lp_norm_vector};

/// One fully populated ledger row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    /// `||w||^2_{L2}`
    pub w_l2_sq: f64,
    /// Discrete `||w||^2_{H1}` (L2 part plus full-gradient integral).
    pub w_h1_sq: f64,
    /// `int |grad w|^2`
    pub grad_w_sq: f64,
    /// `sum_alpha ||w.tau_alpha||^2_{L2(S1)}`
    pub slip_sq: f64,
    /// `||v||_{L2}` of the reconstructed velocity.
    pub v_l2: f64,
    /// `int |grad v|^2`, for the interval estimates on v.
    pub grad_v_sq: f64,
    /// `||f||^2_{L_{6/5}}`
    pub f_l65_sq: f64,
    /// `||d~||^2_{W^1_2}`
    pub d_w12_sq: f64,
    /// `||d~_t||^2_{W^1_{6/5}}`
    pub ddt_w165_sq: f64,
    /// `||d~||_{W^s_p(Omega)}`
    pub d_wsp: f64,
    /// `sup_x3 ||d~||_{L2(S2)}`
    pub d_sup_l2_s2: f64,
    /// `sup_x3 ||d~_t||_{L_{6/5}(S2)}`
    pub ddt_sup_l65_s2: f64,
    /// `sup_x3 ||d~||_{L3(S2)}`
    pub d_sup_l3_s2: f64,
    /// `sup_x3 ||d~_{,x3}||_{L3(S2)}`
    pub d_dz_sup_l3_s2: f64,
    /// `||d~||_{W^1_3(Omega)}`
    pub d_w13: f64,
    /// The absorption bracket multiplying `||w||^2_{H1}`.
    pub absorb_coeff: f64,
    /// Per-step energy identity residual (zero-data runs: the RK2
    /// discretization defect).
    pub energy_res: f64,
    /// Empirical Korn ratio `(D(w), D(w)) / int |grad w|^2`.
    pub korn_ratio: f64,
    /// l2 norm of `div w`.
    pub div_w_l2: f64,
    /// Running right-hand-side accumulator of the integrated estimate at the
    /// frozen calibration.
    pub rhs_acc: f64,
}

pub const CSV_HEADER: &str = "t,w_l2_sq,w_h1_sq,grad_w_sq,slip_sq,v_l2,grad_v_sq,f_l65_sq,d_w12_sq,ddt_w165_sq,d_wsp,d_sup_l2_s2,ddt_sup_l65_s2,d_sup_l3_s2,d_dz_sup_l3_s2,d_w13,absorb_coeff,energy_res,korn_ratio,div_w_l2,rhs_acc";

impl LedgerRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.w_l2_sq,
            self.w_h1_sq,
            self.grad_w_sq,
            self.slip_sq,
            self.v_l2,
            self.grad_v_sq,
            self.f_l65_sq,
            self.d_w12_sq,
            self.ddt_w165_sq,
            self.d_wsp,
            self.d_sup_l2_s2,
            self.ddt_sup_l65_s2,
            self.d_sup_l3_s2,
            self.d_dz_sup_l3_s2,
            self.d_w13,
            self.absorb_coeff,
            self.energy_res,
            self.korn_ratio,
            self.div_w_l2,
            self.rhs_acc
        )
    }

    pub fn from_csv_line(line: &str, lineno: usize) -> Result<LedgerRow> {
        let fields: Vec<&str> = line.split(',').collect();
        let expect = CSV_HEADER.split(',').count();
        if fields.len() != expect {
            return Err(Error::Parse(format!(
                "ledger row {lineno}: expected {expect} columns, found {}",
                fields.len()
            )));
        }
        let get = |i: usize| -> Result<f64> {
            fields[i].trim().parse::<f64>().map_err(|_| {
                let col = CSV_HEADER.split(',').nth(i).unwrap_or("?");
                Error::Parse(format!(
                    "ledger row {lineno}, column {col}: bad number {:?}",
                    fields[i]
                ))
            })
        };
        Ok(LedgerRow {
            t: get(0)?,
            w_l2_sq: get(1)?,
            w_h1_sq: get(2)?,
            grad_w_sq: get(3)?,
            slip_sq: get(4)?,
            v_l2: get(5)?,
            grad_v_sq: get(6)?,
            f_l65_sq: get(7)?,
            d_w12_sq: get(8)?,
            ddt_w165_sq: get(9)?,
            d_wsp: get(10)?,
            d_sup_l2_s2: get(11)?,
            ddt_sup_l65_s2: get(12)?,
            d_sup_l3_s2: get(13)?,
            d_dz_sup_l3_s2: get(14)?,
            d_w13: get(15)?,
            absorb_coeff: get(16)?,
            energy_res: get(17)?,
            korn_ratio: get(18)?,
            div_w_l2: get(19)?,
            rhs_acc: get(20)?,
        })
    }
}

/// Append-only energy ledger.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn new() -> Self {
        EnergyLedger { rows: Vec::new() }
    }

    pub fn append(&mut self, row: LedgerRow) -> Result<()> {
        let squared_entries = [
            ("w_l2_sq", row.w_l2_sq),
            ("w_h1_sq", row.w_h1_sq),
            ("grad_w_sq", row.grad_w_sq),
            ("slip_sq", row.slip_sq),
            ("f_l65_sq", row.f_l65_sq),
            ("d_w12_sq", row.d_w12_sq),
            ("ddt_w165_sq", row.ddt_w165_sq),
        ];
        for (name, v) in squared_entries {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Data(format!("ledger term {name} is invalid: {v}")));
            }
        }
        for (name, v) in [
            ("t", row.t),
            ("v_l2", row.v_l2),
            ("d_wsp", row.d_wsp),
            ("absorb_coeff", row.absorb_coeff),
            ("energy_res", row.energy_res),
            ("rhs_acc", row.rhs_acc),
        ] {
            if !v.is_finite() {
                return Err(Error::Data(format!("ledger term {name} is not finite")));
            }
        }
        if let Some(last) = self.rows.last() {
            if row.t <= last.t {
                return Err(Error::Data(format!(
                    "ledger time must be strictly increasing: {} after {}",
                    row.t, last.t
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut out = String::with_capacity(self.rows.len() * 128);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv_line());
            out.push('\n');
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn read_csv(path: &std::path::Path) -> Result<EnergyLedger> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == CSV_HEADER => {}
            Some(h) => {
                return Err(Error::Parse(format!("unexpected ledger header: {h:?}")));
            }
            None => return Err(Error::Parse("empty ledger file".into())),
        }
        let mut ledger = EnergyLedger::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            ledger.append(LedgerRow::from_csv_line(line, i + 2)?)?;
        }
        Ok(ledger)
    }

    /// Trapezoid integral of a row quantity over `[t0, t1]` (row times).
    pub fn integrate<F: Fn(&LedgerRow) -> f64>(&self, t0: f64, t1: f64, f: F) -> f64 {
        let mut acc = 0.0;
        for pair in self.rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.t <= t0 || a.t >= t1 {
                continue;
            }
            // Clip the segment to the window.
            let (ta, tb) = (a.t.max(t0), b.t.min(t1));
            let frac = |t: f64| (t - a.t) / (b.t - a.t);
            let fa = f(a) + (f(b) - f(a)) * frac(ta);
            let fb = f(a) + (f(b) - f(a)) * frac(tb);
            acc += 0.5 * (fa + fb) * (tb - ta);
        }
        acc
    }

    /// Max of a row quantity over `[t0, t1]`.
    pub fn sup<F: Fn(&LedgerRow) -> f64>(&self, t0: f64, t1: f64, f: F) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.t >= t0 - 1e-12 && r.t <= t1 + 1e-12)
            .map(f)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row closest to time `t`, within half the local sampling interval.
    pub fn row_at(&self, t: f64) -> Option<&LedgerRow> {
        let mut best: Option<(&LedgerRow, f64)> = None;
        for r in &self.rows {
            let d = (r.t - t).abs();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((r, d));
            }
        }
        let spacing = if self.rows.len() > 1 {
            (self.rows[self.rows.len() - 1].t - self.rows[0].t) / (self.rows.len() - 1) as f64
        } else {
            f64::INFINITY
        };
        best.and_then(|(r, d)| if d <= 0.51 * spacing { Some(r) } else { None })
    }
}

/// Pairing of the data terms against a test field in the weak form; the
/// right-hand side of the semi-discrete energy identity.
pub fn data_pairing(
    test: &VectorField,
    lift: &LiftSample,
    f: &VectorField,
    params: &EvolveParams,
) -> f64 {
    let mut rhs = dot_mass(f, test) - dot_mass(&lift.delta_t, test);
    if params.transport_on {
        rhs -= trilinear_skew(test, &lift.delta, test);
        rhs -= trilinear_skew(&lift.delta, &lift.delta, test);
    }
    rhs -= 0.5 * params.nu * strain_form(&lift.delta, test);
    rhs -= params.gamma * slip_form(&lift.delta, test);
    rhs
}

/// Scaled data norms at one instant of a separable scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScaledDataNorms {
    pub w12_sq: f64,
    pub dt_w165_sq: f64,
    pub wsp: f64,
    pub sup_l2_s2: f64,
    pub dt_sup_l65_s2: f64,
    pub sup_l3_s2: f64,
    pub dz_sup_l3_s2: f64,
    pub w13: f64,
}

impl ScaledDataNorms {
    pub fn from_unit(unit: &crate::energy::data::FluxDataNorms, psi: f64, psi_t: f64) -> Self {
        ScaledDataNorms {
            w12_sq: (unit.w12 * psi).powi(2),
            dt_w165_sq: (unit.w165 * psi_t).powi(2),
            wsp: unit.wsp * psi.abs(),
            sup_l2_s2: unit.sup_l2_s2 * psi.abs(),
            dt_sup_l65_s2: unit.sup_l65_s2 * psi_t.abs(),
            sup_l3_s2: unit.sup_l3_s2 * psi.abs(),
            dz_sup_l3_s2: unit.sup_dz_l3_s2 * psi.abs(),
            w13: unit.w13 * psi.abs(),
        }
    }
}

/// Builds one fully populated row from the current states.
#[allow(clippy::too_many_arguments)]
pub fn make_row(
    t: f64,
    w: &VectorField,
    v: &VectorField,
    f: &VectorField,
    data: &ScaledDataNorms,
    absorb_coeff: f64,
    energy_res: f64,
    rhs_acc: f64,
) -> Result<LedgerRow> {
    w.assert_finite("ledger state w")?;
    let w_l2_sq = dot_mass(w, w);
    let grad_w_sq = grad_sq_integral(w);
    let slip_sq = slip_energy(w);
    let strain_e = strain_energy(w);
    let korn_ratio = if grad_w_sq > 1e-300 {
        strain_e / grad_w_sq
    } else {
        0.0
    };
    let div_w = crate::domain::ops::divergence(w);
    let vol = w.grid.cell_volume();
    let div_w_l2 = div_w.data.iter().map(|x| x * x * vol).sum::<f64>().sqrt();
    let f_l65 = lp_norm_vector(f, 1.2)?;
    Ok(LedgerRow {
        t,
        w_l2_sq,
        w_h1_sq: w_l2_sq + grad_w_sq,
        grad_w_sq,
        slip_sq,
        v_l2: norm_l2_mass(v),
        grad_v_sq: grad_sq_integral(v),
        f_l65_sq: f_l65 * f_l65,
        d_w12_sq: data.w12_sq,
        ddt_w165_sq: data.dt_w165_sq,
        d_wsp: data.wsp,
        d_sup_l2_s2: data.sup_l2_s2,
        ddt_sup_l65_s2: data.dt_sup_l65_s2,
        d_sup_l3_s2: data.sup_l3_s2,
        d_dz_sup_l3_s2: data.dz_sup_l3_s2,
        d_w13: data.w13,
        absorb_coeff,
        energy_res,
        korn_ratio,
        div_w_l2,
        rhs_acc,
    })
}

/// RK2-step energy residual: the discrete time derivative of `||w||^2`
/// against the semi-discrete identity evaluated at the midpoint average.
/// For zero-data runs this is the pure time-discretization defect.
pub fn step_energy_residual(
    w_old: &VectorField,
    w_new: &VectorField,
    dt: f64,
    lift_mid: &LiftSample,
    f_mid: &VectorField,
    params: &EvolveParams,
) -> f64 {
    let mut mid = w_old.clone();
    mid.axpy(1.0, w_new);
    mid.scale(0.5);
    let ddt = (dot_mass(w_new, w_new) - dot_mass(w_old, w_old)) / dt;
    let dissipation = params.nu * strain_energy(&mid) + 2.0 * params.gamma * slip_energy(&mid);
    let data = 2.0 * data_pairing(&mid, lift_mid, f_mid, params);
    ddt + dissipation - data
}

/// Zero-state residual helper used by tests: with no data and `w = 0` every
/// ledger term vanishes.
pub fn zero_row(t: f64) -> LedgerRow {
    LedgerRow {
        t,
        w_l2_sq: 0.0,
        w_h1_sq: 0.0,
        grad_w_sq: 0.0,
        slip_sq: 0.0,
        v_l2: 0.0,
        grad_v_sq: 0.0,
        f_l65_sq: 0.0,
        d_w12_sq: 0.0,
        ddt_w165_sq: 0.0,
        d_wsp: 0.0,
        d_sup_l2_s2: 0.0,
        ddt_sup_l65_s2: 0.0,
        d_sup_l3_s2: 0.0,
        d_dz_sup_l3_s2: 0.0,
        d_w13: 0.0,
        absorb_coeff: 0.0,
        energy_res: 0.0,
        korn_ratio: 0.0,
        div_w_l2: 0.0,
        rhs_acc: 0.0,
    }
}

/// The plain dot of a covector against a field; re-exported for the
/// certification cross-checks.
pub fn covector_dot(cov: &VectorField, field: &VectorField) -> f64 {
    dot_plain(cov, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::grid::{build_grid, CylinderSpec};
    use std::sync::Arc;

    fn grid() -> Arc<crate::domain::grid::StaggeredGrid> {
        build_grid(CylinderSpec {
            a: 0.5,
            lx: 1.0,
            ly: 1.0,
            nx: 4,
            ny: 4,
            nz: 6,
            nu: 1.0,
            gamma: 1.0,
        })
        .unwrap()
    }

    #[test]
    fn zero_state_zero_data_gives_all_zero_row() {
        let g = grid();
        let z = VectorField::zeros(&g);
        let row = make_row(0.0, &z, &z, &z, &ScaledDataNorms::default(), 0.0, 0.0, 0.0).unwrap();
        assert_eq!(row, zero_row(0.0));
    }

    #[test]
    fn h1_entry_dominates_l2_entry() {
        let g = grid();
        let w = VectorField::from_fn(&g, |x, y, z| [y * z, x, (x + y).sin() * z]);
        let z = VectorField::zeros(&g);
        let row = make_row(0.0, &w, &w, &z, &ScaledDataNorms::default(), 0.0, 0.0, 0.0).unwrap();
        assert!(row.w_h1_sq >= row.w_l2_sq);
    }

    #[test]
    fn append_rejects_nonmonotone_time_and_bad_values() {
        let mut ledger = EnergyLedger::new();
        ledger.append(zero_row(0.0)).unwrap();
        assert!(ledger.append(zero_row(0.0)).is_err());
        let mut bad = zero_row(1.0);
        bad.w_l2_sq = f64::NAN;
        assert!(matches!(ledger.append(bad), Err(Error::Data(_))));
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let mut ledger = EnergyLedger::new();
        for i in 0..5 {
            let mut row = zero_row(i as f64 * 0.125);
            row.w_l2_sq = (i as f64) * 0.3333333333333333 + 1e-17;
            row.d_wsp = 2.0_f64.powi(-i) * 0.7071067811865476;
            ledger.append(row).unwrap();
        }
        let dir = std::env::temp_dir().join("cylflow_ledger_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ledger.csv");
        ledger.write_csv(&path).unwrap();
        let back = EnergyLedger::read_csv(&path).unwrap();
        assert_eq!(ledger.rows.len(), back.rows.len());
        for (a, b) in ledger.rows.iter().zip(&back.rows) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn malformed_csv_names_row_and_column() {
        let dir = std::env::temp_dir().join("cylflow_ledger_test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(
            &path,
            format!("{}\n0.0,oops{}\n", CSV_HEADER, ",0".repeat(19)),
        )
        .unwrap();
        let err = EnergyLedger::read_csv(&path).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains("w_l2_sq"), "{msg}");
    }

    #[test]
    fn trapezoid_integration_clips_to_window() {
        let mut ledger = EnergyLedger::new();
        for i in 0..=10 {
            let mut row = zero_row(i as f64 * 0.1);
            row.f_l65_sq = 1.0;
            ledger.append(row).unwrap();
        }
        let full = ledger.integrate(0.0, 1.0, |r| r.f_l65_sq);
        assert!((full - 1.0).abs() < 1e-12);
        let half = ledger.integrate(0.25, 0.75, |r| r.f_l65_sq);
        assert!((half - 0.5).abs() < 1e-12);
    }
}
