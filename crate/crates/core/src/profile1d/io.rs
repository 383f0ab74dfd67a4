use std::io::Write;

use serde::{Deserialize, Serialize};

use super::EulerProfile;
use crate::model::{Chirality, ElasticConstants};
use crate::Result;

/// Sidecar metadata written next to a profile CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMetadata {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub t: f64,
    pub reflected: bool,
    #[serde(rename = "C")]
    pub c: f64,
    pub c_excess: f64,
    pub energy_per_area: f64,
    pub n_nodes: usize,
}

impl ProfileMetadata {
    pub fn new(profile: &EulerProfile, k: &ElasticConstants, t: Chirality) -> Self {
        Self {
            k1: k.k1,
            k2: k.k2,
            k3: k.k3,
            k4: k.k4,
            t: t.t(),
            reflected: t.reflected(),
            c: profile.first_integral_constant,
            c_excess: profile.first_integral_excess,
            energy_per_area: profile.energy_per_area,
            n_nodes: profile.z_nodes.len(),
        }
    }
}

/// Writes `z,theta,phi` rows with 17 significant digits.
pub fn write_profile_csv<W: Write>(profile: &EulerProfile, mut out: W) -> Result<()> {
    writeln!(out, "z,theta,phi")?;
    for (i, z) in profile.z_nodes.iter().enumerate() {
        let phi = profile.phi.get(i).copied().unwrap_or(0.0);
        writeln!(out, "{:.16e},{:.16e},{:.16e}", z, profile.theta[i], phi)?;
    }
    Ok(())
}
