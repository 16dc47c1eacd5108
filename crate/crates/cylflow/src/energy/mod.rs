//! Energy ledger and certification of the boundedness criteria.

pub mod certify;
pub mod data;
pub mod ledger;

pub use certify::{
    absorption_check, check_global_criterion, decay_check, interval_estimate,
    verify_integrated_estimate, AbsorptionReport, DecayReport, GlobalCriterion,
    GlobalCriterionReport, IntegratedEstimateReport, IntervalEstimateReport, IntervalReport,
    PhiCalibration,
};
pub use data::{flux_data_norms, trace_norm, FluxDataNorms};
pub use ledger::{
    data_pairing, make_row, step_energy_residual, EnergyLedger, LedgerRow, ScaledDataNorms,
    CSV_HEADER,
};
