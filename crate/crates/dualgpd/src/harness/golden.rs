//! Frozen reference constructions with a SHA-256 manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::config::SuiteConfig;
use super::suites::{trial_sampler, vbgpd_instance, Suite};
use super::HarnessError;
use crate::coordmodels::{cotangent_double, cotangent_groupoid, m4_double_groupoid, pair_groupoid, CheckReport, FrozenGroupoid};
use crate::exactcalc::Sampler;
use crate::fingpd::{pradines_dual, FinVBGroupoid};

pub const MANIFEST: &str = "SHA256SUMS";
/// Random models frozen for `vbgpd-dual`.
const FROZEN_MODELS: usize = 3;

/// A golden file: its name, and its JSON text.
type Entry = (String, String);

fn io(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

fn construction(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Construction(e.to_string())
}

fn freeze(g: &crate::coordmodels::CoordGroupoid) -> Result<String, HarnessError> {
    let f = FrozenGroupoid::freeze(g).map_err(construction)?;
    Ok(serde_json::to_string_pretty(&f).expect("serializable") + "\n")
}

/// The constructions a suite freezes, for the configured dims and seed.
fn entries(config: &SuiteConfig) -> Result<Vec<Entry>, HarnessError> {
    let mut out = Vec::new();
    match config.suite {
        Suite::VbgpdDual => {
            for t in 0..FROZEN_MODELS.min(config.trials) {
                let omega = vbgpd_instance(config, &mut trial_sampler(config.seed, t));
                let dual = pradines_dual(&omega).map_err(construction)?;
                out.push((format!("model-{t}.json"), omega.to_json() + "\n"));
                out.push((format!("model-{t}-dual.json"), dual.to_json() + "\n"));
            }
        }
        Suite::CotangentDouble => {
            for n in config.dims.iter() {
                let c = cotangent_groupoid(&pair_groupoid(n)).map_err(construction)?;
                out.push((format!("cotangent-pair-{n}.json"), freeze(&c.total)?));
            }
        }
        Suite::CoreEmbedding => {
            let mut s = Sampler::new(config.seed);
            for n in config.dims.iter() {
                let d = cotangent_double(&m4_double_groupoid(n), &mut s).map_err(construction)?;
                let e = d.core_embedding_checks(&mut s).map_err(construction)?;
                out.push((format!("cotangent-core-m4-{n}.json"), freeze(&e.cotangent_core.total)?));
                out.push((format!("core-of-cotangent-m4-{n}.json"), freeze(&e.core_of_cotangent.groupoid)?));
            }
        }
        other => return Err(HarnessError::InvalidConfig(format!("{other}: no golden data"))),
    }
    Ok(out)
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes the golden files of the suite and their manifest into `dir`.
/// Refuses unless `confirm` is set, so references are never replaced by accident.
pub fn regen_golden(config: &SuiteConfig, dir: &Path, confirm: bool) -> Result<Vec<String>, HarnessError> {
    if !confirm {
        return Err(HarnessError::RegenRefused);
    }
    let files = entries(config)?;
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut manifest = String::new();
    for (name, text) in &files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| io(&path, e))?;
        manifest.push_str(&format!("{}  {name}\n", digest(text.as_bytes())));
    }
    let path = dir.join(MANIFEST);
    fs::write(&path, manifest).map_err(|e| io(&path, e))?;
    Ok(files.into_iter().map(|(n, _)| n).collect())
}

/// Reads the manifest and checks every listed file against its digest.
pub fn read_verified(dir: &Path) -> Result<BTreeMap<String, String>, HarnessError> {
    let path = dir.join(MANIFEST);
    let manifest = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
    let mut out = BTreeMap::new();
    for line in manifest.lines().filter(|l| !l.trim().is_empty()) {
        let (sum, name) = line
            .split_once("  ")
            .ok_or_else(|| HarnessError::Checksum(format!("malformed manifest line {line:?}")))?;
        let file = dir.join(name);
        let text = fs::read_to_string(&file).map_err(|e| io(&file, e))?;
        let actual = digest(text.as_bytes());
        if actual != sum {
            return Err(HarnessError::Checksum(format!("{name}: expected {sum}, found {actual}")));
        }
        out.insert(name.to_string(), text);
    }
    Ok(out)
}

/// Compares the current constructions with the verified golden files.
pub fn compare_golden(config: &SuiteConfig, dir: &Path) -> Result<CheckReport, HarnessError> {
    let stored = read_verified(dir)?;
    let mut r = CheckReport::new();
    for (name, text) in entries(config)? {
        let Some(old) = stored.get(&name) else {
            r.exact(&format!("{name} is present"), false, "missing from the manifest");
            continue;
        };
        let same = match config.suite {
            Suite::VbgpdDual => FinVBGroupoid::from_json(old).map(|o| o == FinVBGroupoid::from_json(&text).expect("fresh model")),
            _ => Ok(serde_json::from_str::<FrozenGroupoid>(old).ok() == serde_json::from_str::<FrozenGroupoid>(&text).ok()),
        };
        match same {
            Ok(ok) => r.exact(&format!("{name} matches"), ok, ""),
            Err(e) => r.exact(&format!("{name} matches"), false, e.to_string()),
        };
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ConfigOverrides;

    fn config(dir: &Path) -> SuiteConfig {
        let o = ConfigOverrides { dims: Some("1".parse().unwrap()), golden: Some(dir.to_path_buf()), ..Default::default() };
        SuiteConfig::resolve(Suite::CotangentDouble, o).unwrap()
    }

    #[test]
    fn regen_then_compare_then_corrupt() {
        let dir = std::env::temp_dir().join(format!("dualgpd-golden-{}", std::process::id()));
        let c = config(&dir);
        assert!(matches!(regen_golden(&c, &dir, false), Err(HarnessError::RegenRefused)));
        let names = regen_golden(&c, &dir, true).unwrap();
        assert_eq!(names, vec!["cotangent-pair-1.json".to_string()]);
        assert!(compare_golden(&c, &dir).unwrap().passed());
        let file = dir.join(&names[0]);
        let text = fs::read_to_string(&file).unwrap().replacen("1/1", "2/1", 1);
        fs::write(&file, text).unwrap();
        assert!(matches!(compare_golden(&c, &dir), Err(HarnessError::Checksum(_))));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn suites_without_golden_data_say_so() {
        let c = SuiteConfig::defaults(Suite::DdDri);
        assert!(matches!(entries(&c), Err(HarnessError::InvalidConfig(_))));
    }
}
