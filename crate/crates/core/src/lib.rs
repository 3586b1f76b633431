//! Thermodynamics of a quantum oscillator coupled to a linear passive heat
//! bath.
//!
//! The bath enters only through its memory function μ̃(ω) ([`models`]). From
//! it the response function and the spectral weight
//! Im{d log α(ω + i0⁺)/dω} are built ([`spectral`]), and a single
//! semi-infinite integral ([`quadrature`]) of that weight against the
//! single-mode free energy, entropy or energy gives F, S and U ([`thermo`]).
//!
//! ```
//! use oscbath::{BathModel, OscillatorParams, ThermoOptions};
//!
//! let bath = BathModel::ohmic(0.1).unwrap();
//! let params = OscillatorParams::default();
//! let f = oscbath::thermo::free_energy(&bath, &params, 0.01, &ThermoOptions::default()).unwrap();
//! let law = -std::f64::consts::PI / 6.0 * 0.1 * 0.01f64.powi(2);
//! assert!((f.value / law - 1.0).abs() < 0.01);
//! ```

pub mod error;
pub mod exec;
pub mod models;
pub mod quadrature;
pub mod spectral;
pub mod thermo;

pub use error::{Error, Result};
pub use exec::Execution;
pub use models::{BathModel, MemoryValue, OscillatorParams};
pub use quadrature::{QuadConfig, QuadResult};
pub use spectral::{SpectralWeight, WeightPath};
pub use thermo::{ThermoOptions, ThermoPoint};
