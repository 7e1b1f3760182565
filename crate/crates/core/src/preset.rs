//! Named crystal/pump presets shipped with the crate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{CrystalOptics, PumpSpec};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Crystal and pump parameters in the units a data sheet would give them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub length_m: f64,
    pub pump_wavelength_m: f64,
    pub pump_refractive_index: f64,
    /// Group indices `c / u`.
    pub group_index_pump: f64,
    pub group_index_signal: f64,
    pub group_index_idler: f64,
    pub pump_waist_m: f64,
    pub pulse_duration_s: f64,
}

const TYPICAL_PPKTP_LIKE: &str = include_str!("../presets/typical-ppktp-like.json");

impl Preset {
    pub const NAMES: [&'static str; 1] = ["typical-ppktp-like"];

    pub fn by_name(name: &str) -> Result<Preset> {
        let text = match name {
            "typical-ppktp-like" => TYPICAL_PPKTP_LIKE,
            _ => return Err(domain(format!("unknown preset '{name}'"))),
        };
        serde_json::from_str(text).map_err(|e| domain(format!("preset '{name}' is malformed: {e}")))
    }

    pub fn optics(&self) -> Result<CrystalOptics> {
        let k_p = 2.0 * std::f64::consts::PI * self.pump_refractive_index / self.pump_wavelength_m;
        CrystalOptics::new(
            self.length_m,
            k_p,
            SPEED_OF_LIGHT / self.group_index_pump,
            SPEED_OF_LIGHT / self.group_index_signal,
            SPEED_OF_LIGHT / self.group_index_idler,
        )
    }

    /// Gaussian (p = 0, l = 0) pump with the preset waist and pulse duration.
    pub fn pump(&self) -> Result<PumpSpec> {
        PumpSpec::new(self.pump_waist_m, 0, 0, self.pulse_duration_s)
    }
}

/// The default preset for spectral and spatio-temporal runs.
pub fn typical_ppktp_like() -> Preset {
    Preset::by_name("typical-ppktp-like").expect("bundled preset parses")
}
