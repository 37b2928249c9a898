use num_complex::Complex64;
use serde::Serialize;

use super::ToricError;
use crate::rational::Q;

/// Class of the disk `z_j(ζ) = r_j Π_k (ζ − α_{jk}) / (1 − ᾱ_{jk} ζ)` with boundary on a toric fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskClass {
    pub winding: Vec<u32>,
    pub maslov: u64,
}

impl DiskClass {
    /// Area `Σ d_j l_j(λ)` in units of 2π.
    pub fn area(&self, facet_values: &[Q]) -> Q {
        self.winding.iter().zip(facet_values).map(|(&d, l)| l * Q::from_integer(d.into())).sum()
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self {
            winding: self.winding.iter().zip(&other.winding).map(|(a, b)| a + b).collect(),
            maslov: self.maslov + other.maslov,
        }
    }
}

pub fn blaschke_disk(degrees: &[u32], zeros: &[Vec<Complex64>]) -> Result<DiskClass, ToricError> {
    if degrees.len() != zeros.len() {
        return Err(ToricError::Malformed(format!("{} degrees but {} zero lists", degrees.len(), zeros.len())));
    }
    for (j, (d, zs)) in degrees.iter().zip(zeros).enumerate() {
        if zs.len() != *d as usize {
            return Err(ToricError::Malformed(format!("coordinate {j}: degree {d} but {} zeros", zs.len())));
        }
        if let Some(k) = zs.iter().position(|a| !(a.norm() < 1.0)) {
            return Err(ToricError::ZeroOutsideDisk { coordinate: j, index: k });
        }
    }
    Ok(DiskClass { winding: degrees.to_vec(), maslov: 2 * degrees.iter().map(|&d| u64::from(d)).sum::<u64>() })
}
