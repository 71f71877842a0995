//! Refractive-index dispersion models for birefringent plate materials.
//!
//! Sellmeier data is loaded from versioned key-value text files; the quartz
//! set ships embedded in the crate and can be overridden by a file of the
//! same name in an external data directory (the CLI wires this to
//! `QQS_DATA_DIR`).

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Embedded default data for crystalline quartz.
pub const QUARTZ_DATA: &str = include_str!("../data/quartz.txt");

/// Two-term Sellmeier coefficients, wavelength argument in µm²:
/// n² = a + b1·x/(x − c1) + b2·x/(x − c2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellmeierCoefficients<T> {
    pub a: T,
    pub b1: T,
    pub c1: T,
    pub b2: T,
    pub c2: T,
}

impl<T: Scalar> SellmeierCoefficients<T> {
    fn index(&self, lambda_nm: T) -> T {
        let um = lambda_nm / T::of(1000.0);
        let x = um * um;
        (self.a + self.b1 * x / (x - self.c1) + self.b2 * x / (x - self.c2)).sqrt()
    }
}

/// A named uniaxial crystal with ordinary and extraordinary index branches.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionData<T> {
    pub name: String,
    pub schema_version: u32,
    pub valid_nm: (T, T),
    pub ordinary: SellmeierCoefficients<T>,
    pub extraordinary: SellmeierCoefficients<T>,
}

impl<T: Scalar> DispersionData<T> {
    /// Parses the key-value text format (see `data/quartz.txt`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: HashMap<String, String> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Dispersion(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            kv.insert(key.trim().to_string(), value.trim().to_string());
        }

        let get = |k: &str| -> Result<String> {
            kv.get(k)
                .cloned()
                .ok_or_else(|| Error::Dispersion(format!("missing key '{k}'")))
        };
        let num = |k: &str| -> Result<T> {
            let s = get(k)?;
            s.parse::<f64>()
                .map(T::of)
                .map_err(|_| Error::Dispersion(format!("key '{k}': bad number '{s}'")))
        };
        let coeffs = |prefix: &str| -> Result<SellmeierCoefficients<T>> {
            Ok(SellmeierCoefficients {
                a: num(&format!("{prefix}.a"))?,
                b1: num(&format!("{prefix}.b1"))?,
                c1: num(&format!("{prefix}.c1"))?,
                b2: num(&format!("{prefix}.b2"))?,
                c2: num(&format!("{prefix}.c2"))?,
            })
        };

        let schema_version = get("schema_version")?
            .parse::<u32>()
            .map_err(|_| Error::Dispersion("bad schema_version".into()))?;
        if schema_version != 1 {
            return Err(Error::Dispersion(format!(
                "unsupported schema_version {schema_version}"
            )));
        }
        let data = Self {
            name: get("material")?,
            schema_version,
            valid_nm: (num("valid_min_nm")?, num("valid_max_nm")?),
            ordinary: coeffs("o")?,
            extraordinary: coeffs("e")?,
        };
        data.validate()?;
        Ok(data)
    }

    /// The embedded quartz data set.
    pub fn quartz() -> Self {
        Self::parse(QUARTZ_DATA).expect("embedded quartz data parses")
    }

    /// Loads `<name>.txt` from `data_dir` when given, else the embedded set.
    /// Only `quartz` has an embedded fallback.
    pub fn load(name: &str, data_dir: Option<&Path>) -> Result<Self> {
        if let Some(dir) = data_dir {
            let path = dir.join(format!("{name}.txt"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Dispersion(format!("cannot read {}: {e}", path.display())))?;
            return Self::parse(&text);
        }
        match name {
            "quartz" => Ok(Self::quartz()),
            other => Err(Error::Dispersion(format!(
                "unknown material '{other}' and no data directory given"
            ))),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.valid_nm;
        if !(lo > T::zero()) || !(hi > lo) {
            return Err(Error::Dispersion("invalid wavelength range".into()));
        }
        // Indices must be physical (> 1) across the declared range.
        let steps = 40;
        for i in 0..=steps {
            let lam = lo + (hi - lo) * T::of(i as f64 / steps as f64);
            let no = self.ordinary.index(lam);
            let ne = self.extraordinary.index(lam);
            if !(no > T::one()) || !(ne > T::one()) || !no.is_finite() || !ne.is_finite() {
                return Err(Error::Dispersion(format!(
                    "unphysical index at {} nm",
                    lam.as_f64()
                )));
            }
        }
        Ok(())
    }

    fn check_range(&self, lambda_nm: T) -> Result<()> {
        let (lo, hi) = self.valid_nm;
        if lambda_nm < lo || lambda_nm > hi {
            return Err(Error::WavelengthOutOfRange {
                lambda_nm: lambda_nm.as_f64(),
                min_nm: lo.as_f64(),
                max_nm: hi.as_f64(),
            });
        }
        Ok(())
    }

    pub fn n_ordinary(&self, lambda_nm: T) -> Result<T> {
        self.check_range(lambda_nm)?;
        Ok(self.ordinary.index(lambda_nm))
    }

    pub fn n_extraordinary(&self, lambda_nm: T) -> Result<T> {
        self.check_range(lambda_nm)?;
        Ok(self.extraordinary.index(lambda_nm))
    }
}

/// Dispersion model attached to a plate: tabulated Sellmeier data, or a
/// constant-index pair for synthetic test materials.
#[derive(Debug, Clone, PartialEq)]
pub enum Dispersion<T> {
    Sellmeier(DispersionData<T>),
    Constant { n_o: T, n_e: T },
}

impl<T: Scalar> Dispersion<T> {
    pub fn quartz() -> Self {
        Dispersion::Sellmeier(DispersionData::quartz())
    }

    pub fn n_o(&self, lambda_nm: T) -> Result<T> {
        match self {
            Dispersion::Sellmeier(d) => d.n_ordinary(lambda_nm),
            Dispersion::Constant { n_o, .. } => Ok(*n_o),
        }
    }

    pub fn n_e(&self, lambda_nm: T) -> Result<T> {
        match self {
            Dispersion::Sellmeier(d) => d.n_extraordinary(lambda_nm),
            Dispersion::Constant { n_e, .. } => Ok(*n_e),
        }
    }

    /// Signed birefringence n_o − n_e (negative for positive uniaxial
    /// crystals like quartz).
    pub fn birefringence(&self, lambda_nm: T) -> Result<T> {
        Ok(self.n_o(lambda_nm)? - self.n_e(lambda_nm)?)
    }

    /// Mean of (n_o + n_e)/2 over the two mode wavelengths; used as the
    /// refraction index in the tilt model.
    pub fn mean_index(&self, lambda1_nm: T, lambda2_nm: T) -> Result<T> {
        let half = T::of(0.5);
        let m1 = (self.n_o(lambda1_nm)? + self.n_e(lambda1_nm)?) * half;
        let m2 = (self.n_o(lambda2_nm)? + self.n_e(lambda2_nm)?) * half;
        Ok((m1 + m2) * half)
    }
}
