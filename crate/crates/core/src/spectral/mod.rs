//! Spectral data of periodic operators: bands, Fermi points, projectors,
//! Taylor orders, integrability audits and principal eigenvalues.

pub mod bands;
pub mod fermi;
pub mod integrability;
pub(crate) mod optimize;
pub mod principal;
pub mod riesz;
pub mod taylor;

pub use bands::{
    band_cloud, band_structure, spectral_margin, spectrum_intervals, BandGrid, BandStructure, BandValues, Interval,
};
pub use fermi::{fermi_points, shift_spectrum, FermiOptions, FermiPoint};
pub use integrability::{integrability_audit, AuditReport, AuditVerdict};
pub use principal::{maximize_principal, principal_eigenvalue, PrincipalEigenvalueCurve, PrincipalOptions};
pub use riesz::{riesz_projector, ContourSpec, ReducedFamily, RieszProjector};
pub use taylor::{taylor_order, HomogeneousPolynomial, TaylorData, TaylorOptions};
