//! Layered run configuration.
//!
//! Settings resolve in strict precedence order: command-line flags beat the
//! optional TOML file named by `WFSCOPE_CONFIG`, which beats built-in
//! defaults. The fully resolved settings are serialized in a canonical field
//! order and hashed (SHA-256, first 16 hex digits); the hash is stamped into
//! every report so two reports are comparable exactly when their hashes
//! agree. The thread count is deliberately left out of the hash: results are
//! required to be identical for any worker count, so it is not part of the
//! mathematical configuration.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wfscope::{DetectorConfig, ShellPartition, WindowSpec};

use crate::error::{CliError, Result};

/// Default audit seed; recorded in the hash so randomized audits replay.
pub const DEFAULT_SEED: u64 = 0xD1CE;

/// One layer of optional settings (flag set, config file, or defaults).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// "smooth" or "sobolev"
    pub mode: Option<String>,
    /// Sobolev order; only valid together with mode = "sobolev"
    pub s: Option<f64>,
    /// half-width of the position ball K
    pub radius: Option<f64>,
    /// scan cone half-angle theta' in radians
    pub cone_angle: Option<f64>,
    /// window spec: bump:<r>, bspline:<r>, or bspline<m>:<r>
    pub window: Option<String>,
    /// dyadic shells <R0>:<J>
    pub shells: Option<String>,
    pub n_threshold: Option<f64>,
    pub rho_tol: Option<f64>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("{origin}: {e}")))
    }

    /// `self` wins over `base` field by field.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            mode: self.mode.or(base.mode),
            s: self.s.or(base.s),
            radius: self.radius.or(base.radius),
            cone_angle: self.cone_angle.or(base.cone_angle),
            window: self.window.or(base.window),
            shells: self.shells.or(base.shells),
            n_threshold: self.n_threshold.or(base.n_threshold),
            rho_tol: self.rho_tol.or(base.rho_tol),
            threads: self.threads.or(base.threads),
            seed: self.seed.or(base.seed),
        }
    }
}

/// Fully resolved settings plus their canonical hash.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub detector: DetectorConfig,
    pub threads: Option<usize>,
    pub seed: u64,
    pub hash: String,
}

impl Resolved {
    pub fn mode_label(&self) -> String {
        self.detector.mode().to_string()
    }
}

/// Parse `bump:<r>`, `bspline:<r>` (cubic), or `bspline<m>:<r>`.
pub fn parse_window(spec: &str) -> Result<WindowSpec> {
    let bad = |detail: &str| {
        CliError::Usage(format!(
            "window {spec:?}: {detail} (expected bump:<r>, bspline:<r>, or bspline<m>:<r>)"
        ))
    };
    let (kind, r) = spec.split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let radius: f64 = r.trim().parse().map_err(|_| bad("support radius is not a number"))?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(bad("support radius must be positive"));
    }
    let kind = kind.trim();
    if kind == "bump" {
        return Ok(WindowSpec::bump(radius, 1.0));
    }
    if let Some(deg) = kind.strip_prefix("bspline") {
        let m: usize = if deg.is_empty() {
            3
        } else {
            deg.parse().map_err(|_| bad("B-spline degree is not an integer"))?
        };
        if m == 0 {
            return Err(bad("B-spline degree must be at least 1"));
        }
        return Ok(WindowSpec::bspline(m, radius, 1.0));
    }
    Err(bad("unknown window kind"))
}

/// Parse `<R0>:<J>` into a dyadic shell partition.
pub fn parse_shells(spec: &str) -> Result<ShellPartition> {
    let bad =
        |detail: &str| CliError::Usage(format!("shells {spec:?}: {detail} (expected <R0>:<J>)"));
    let (r0, j) = spec.split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let r0: f64 = r0.trim().parse().map_err(|_| bad("R0 is not a number"))?;
    let count: usize = j.trim().parse().map_err(|_| bad("shell count is not an integer"))?;
    Ok(ShellPartition::new(r0, count)?)
}

/// Canonical serialization of the resolved settings, hashed into reports.
/// Field order is fixed by this struct; threads are excluded on purpose.
#[derive(Serialize)]
struct Canonical<'a> {
    mode: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    radius: f64,
    cone_angle: f64,
    window: &'a str,
    shells: String,
    n_threshold: f64,
    rho_tol: f64,
    cap_factor: f64,
    seed: u64,
}

pub fn config_hash(detector: &DetectorConfig, seed: u64) -> String {
    let window_id = detector.window.id();
    let canonical = Canonical {
        mode: match detector.s {
            None => "smooth",
            Some(_) => "sobolev",
        },
        s: detector.s,
        radius: detector.k_radius,
        cone_angle: detector.cone_angle,
        window: &window_id,
        shells: format!("{}:{}", detector.shells.r0(), detector.shells.count()),
        n_threshold: detector.n_threshold,
        rho_tol: detector.rho_tol,
        cap_factor: detector.cap_factor,
        seed,
    };
    let text = toml::to_string(&canonical).expect("canonical config serializes");
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(digest)[..16].to_string()
}

/// Read the `WFSCOPE_CONFIG` layer, if the variable is set.
pub fn env_layer() -> Result<ConfigLayer> {
    match std::env::var_os("WFSCOPE_CONFIG") {
        None => Ok(ConfigLayer::default()),
        Some(path) => {
            let path = std::path::PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            ConfigLayer::from_toml(&text, &path.display().to_string())
        }
    }
}

/// Merge flags over the file layer over defaults and validate.
pub fn resolve(flags: ConfigLayer) -> Result<Resolved> {
    resolve_layers(flags, env_layer()?)
}

/// Same, with the file layer passed explicitly.
pub fn resolve_layers(flags: ConfigLayer, file: ConfigLayer) -> Result<Resolved> {
    let merged = flags.over(file);
    let defaults = DetectorConfig::default();

    let mode = merged.mode.as_deref().unwrap_or("smooth");
    let s = match mode {
        "smooth" => {
            if merged.s.is_some() {
                return Err(CliError::Usage(
                    "--s only applies in Sobolev mode; pass --mode sobolev".into(),
                ));
            }
            None
        }
        "sobolev" => Some(merged.s.ok_or_else(|| {
            CliError::Usage("--mode sobolev needs an order: pass --s <order>".into())
        })?),
        other => {
            return Err(CliError::Usage(format!(
                "mode {other:?} is not recognized (smooth or sobolev)"
            )))
        }
    };

    let window = match &merged.window {
        Some(spec) => parse_window(spec)?,
        None => defaults.window.clone(),
    };
    let shells = match &merged.shells {
        Some(spec) => parse_shells(spec)?,
        None => defaults.shells.clone(),
    };

    let detector = DetectorConfig {
        k_radius: merged.radius.unwrap_or(defaults.k_radius),
        cone_angle: merged.cone_angle.unwrap_or(defaults.cone_angle),
        window,
        shells,
        n_threshold: merged.n_threshold.unwrap_or(defaults.n_threshold),
        s,
        rho_tol: merged.rho_tol.unwrap_or(defaults.rho_tol),
        cap_factor: defaults.cap_factor,
    };
    let seed = merged.seed.unwrap_or(DEFAULT_SEED);
    let hash = config_hash(&detector, seed);
    Ok(Resolved { detector, threads: merged.threads, seed, hash })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_to_detector_defaults() {
        let r = resolve_layers(ConfigLayer::default(), ConfigLayer::default()).unwrap();
        let d = DetectorConfig::default();
        assert_eq!(r.detector.k_radius, d.k_radius);
        assert_eq!(r.detector.cone_angle, d.cone_angle);
        assert_eq!(r.detector.window.id(), d.window.id());
        assert_eq!(r.detector.shells.r0(), d.shells.r0());
        assert_eq!(r.detector.shells.count(), d.shells.count());
        assert_eq!(r.detector.n_threshold, d.n_threshold);
        assert_eq!(r.detector.s, None);
        assert_eq!(r.seed, DEFAULT_SEED);
        assert_eq!(r.hash.len(), 16);
    }

    #[test]
    fn window_specs_parse() {
        assert_eq!(parse_window("bump:0.35").unwrap().id(), "bump:0.35");
        assert_eq!(parse_window("bspline:0.5").unwrap().id(), "bspline3:0.5");
        assert_eq!(parse_window("bspline5:1").unwrap().id(), "bspline5:1");
        assert!(parse_window("hann:0.5").is_err());
        assert!(parse_window("bump").is_err());
        assert!(parse_window("bump:-1").is_err());
        assert!(parse_window("bspline0:1").is_err());
    }

    #[test]
    fn shell_specs_parse() {
        let p = parse_shells("4:7").unwrap();
        assert_eq!(p.r0(), 4.0);
        assert_eq!(p.count(), 7);
        assert!(parse_shells("4").is_err());
        assert!(parse_shells("-4:7").is_err());
        assert!(parse_shells("4:x").is_err());
    }

    #[test]
    fn s_requires_sobolev_mode() {
        let flags = ConfigLayer { s: Some(0.5), ..Default::default() };
        assert!(matches!(resolve_layers(flags, ConfigLayer::default()).unwrap_err(), CliError::Usage(_)));
        let flags = ConfigLayer { mode: Some("sobolev".into()), ..Default::default() };
        assert!(matches!(resolve_layers(flags, ConfigLayer::default()).unwrap_err(), CliError::Usage(_)));
        let flags =
            ConfigLayer { mode: Some("sobolev".into()), s: Some(0.5), ..Default::default() };
        assert_eq!(resolve_layers(flags, ConfigLayer::default()).unwrap().detector.s, Some(0.5));
    }

    #[test]
    fn layer_precedence_is_field_by_field() {
        let file = ConfigLayer {
            radius: Some(0.2),
            n_threshold: Some(4.0),
            window: Some("bspline:0.5".into()),
            ..Default::default()
        };
        let flags = ConfigLayer { radius: Some(0.3), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.radius, Some(0.3));
        assert_eq!(merged.n_threshold, Some(4.0));
        assert_eq!(merged.window.as_deref(), Some("bspline:0.5"));
    }

    #[test]
    fn hash_tracks_every_semantic_field() {
        let base = resolve_layers(ConfigLayer::default(), ConfigLayer::default()).unwrap();
        let variants = [
            ConfigLayer { radius: Some(0.2), ..Default::default() },
            ConfigLayer { cone_angle: Some(0.5), ..Default::default() },
            ConfigLayer { window: Some("bspline:0.5".into()), ..Default::default() },
            ConfigLayer { shells: Some("8:6".into()), ..Default::default() },
            ConfigLayer { n_threshold: Some(5.0), ..Default::default() },
            ConfigLayer { rho_tol: Some(0.1), ..Default::default() },
            ConfigLayer { seed: Some(7), ..Default::default() },
            ConfigLayer { mode: Some("sobolev".into()), s: Some(0.5), ..Default::default() },
        ];
        for flags in variants {
            let r = resolve_layers(flags.clone(), ConfigLayer::default()).unwrap();
            assert_ne!(r.hash, base.hash, "variant {flags:?} did not change the hash");
        }
        // ... but the worker count must not.
        let threaded = resolve_layers(ConfigLayer { threads: Some(3), ..Default::default() }, ConfigLayer::default()).unwrap();
        assert_eq!(threaded.hash, base.hash);
    }

    #[test]
    fn toml_layer_rejects_unknown_keys() {
        assert!(ConfigLayer::from_toml("radius = 0.2\n", "t").is_ok());
        assert!(ConfigLayer::from_toml("radius = 0.2\nwibble = 1\n", "t").is_err());
    }
}
