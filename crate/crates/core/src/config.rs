//! JSON family configuration and dispatch over the concrete families.
//!
//! ```json
//! {"family": "group_dual", "factors": [{"type": "Z", "name": "s"}, {"type": "Zmod", "m": 3}],
//!  "product": "free", "generators": ["s", "s^-1"]}
//! {"family": "a_o", "n": 3, "params": {"generators": {"q": 1.5}, "fundamental": ["q", "q^-1"]}}
//! ```
//!
//! Unknown keys are rejected. The cache directory comes from `cache_dir`,
//! overridden by the `FUSION_CACHE_DIR` environment variable.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::One;
use serde::Deserialize;
use serde_json::Value;

use crate::amenability::{FREE_TOLERANCE, INTERVAL_TOLERANCE};
use crate::cache::{PairStore, CACHE_DIR_ENV};
use crate::error::{Error, Result};
use crate::families::{AoRules, AuRules, AutRules, Factor, FactorKind, GroupDual, ProductKind};
use crate::params::{Param, ParamList};
use crate::semiring::{FusionRules, FusionSystem};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FactorSpec {
    Z {
        #[serde(default)]
        name: Option<String>,
    },
    Zmod {
        m: u32,
        #[serde(default)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProductSpec {
    #[default]
    Free,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    GroupDual {
        factors: Vec<FactorSpec>,
        #[serde(default)]
        product: ProductSpec,
        #[serde(default)]
        generators: Option<Vec<String>>,
    },
    #[serde(rename = "a_o")]
    AO { n: u32 },
    Aut { n: u32 },
    #[serde(rename = "a_u")]
    AU { n: u32 },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default)]
    pub generators: BTreeMap<String, f64>,
    pub fundamental: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConfig {
    pub spec: FamilySpec,
    pub params: Option<ParamsSpec>,
    pub cache_dir: Option<PathBuf>,
}

impl FamilyConfig {
    pub fn from_value(mut value: Value) -> Result<Self> {
        let obj = value.as_object_mut().ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        let params = match obj.remove("params") {
            Some(v) => Some(serde_json::from_value::<ParamsSpec>(v).map_err(|e| Error::Config(format!("params: {e}")))?),
            None => None,
        };
        let cache_dir = match obj.remove("cache_dir") {
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(Value::Null) | None => None,
            Some(_) => return Err(Error::Config("cache_dir must be a string".into())),
        };
        let spec: FamilySpec = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = FamilyConfig { spec, params, cache_dir };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = &self.params {
            for (g, v) in &p.generators {
                if !(v.is_finite() && *v > 0.0) {
                    return Err(Error::Config(format!("generator `{g}` must have a positive value")));
                }
            }
            for text in &p.fundamental {
                let param: Param = text.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                for g in param.exponents().keys() {
                    if !g.bytes().all(|c| c.is_ascii_digit()) && !p.generators.contains_key(g) {
                        return Err(Error::Config(format!("parameter `{text}` uses undeclared generator `{g}`")));
                    }
                }
            }
        }
        // Constructing the rules performs the remaining checks.
        self.build_rules().map(|_| ())
    }

    /// Cache directory: the environment override, else the config value.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Some(PathBuf::from(dir)),
            _ => self.cache_dir.clone(),
        }
    }

    pub fn fundamental_list(&self) -> Result<Option<ParamList>> {
        match &self.params {
            None => Ok(None),
            Some(p) => Ok(Some(ParamList::parse_all(p.fundamental.iter().map(String::as_str))?)),
        }
    }

    pub fn generator_values(&self) -> BTreeMap<String, f64> {
        self.params.as_ref().map(|p| p.generators.clone()).unwrap_or_default()
    }

    fn build_rules(&self) -> Result<AnyRules> {
        Ok(match &self.spec {
            FamilySpec::AO { n } => AnyRules::Ao(AoRules::new(*n)?),
            FamilySpec::Aut { n } => AnyRules::Aut(AutRules::new(*n)?),
            FamilySpec::AU { n } => AnyRules::Au(AuRules::new(*n)?),
            FamilySpec::GroupDual { factors, product, generators } => {
                let single = factors.len() == 1;
                let factors: Vec<Factor> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let (kind, name) = match f {
                            FactorSpec::Z { name } => (FactorKind::Integers, name.clone()),
                            FactorSpec::Zmod { m, name } => (FactorKind::Cyclic(*m), name.clone()),
                        };
                        let name = name.unwrap_or_else(|| if single { "g".into() } else { format!("g{}", i + 1) });
                        Factor { kind, name }
                    })
                    .collect();
                let product = match product {
                    ProductSpec::Free => ProductKind::Free,
                    ProductSpec::Direct => ProductKind::Direct,
                };
                let mut dual = GroupDual::new(factors, product)?;
                if let Some(gens) = generators {
                    if gens.is_empty() {
                        return Err(Error::Config("generators must be nonempty".into()));
                    }
                    let parsed = gens
                        .iter()
                        .map(|g| dual.parse_label(g).map(|w| (w, BigUint::one())))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| Error::Config(e.to_string()))?;
                    dual = dual.with_generators(parsed);
                }
                AnyRules::Group(dual)
            }
        })
    }

    pub fn build(&self) -> Result<AnyFamily> {
        let store = self.resolved_cache_dir().map(PairStore::new);
        fn attach<R: FusionRules>(rules: R, store: Option<PairStore>) -> FusionSystem<R> {
            let sys = FusionSystem::new(rules);
            match store {
                Some(s) => sys.with_store(s),
                None => sys,
            }
        }
        Ok(match self.build_rules()? {
            AnyRules::Ao(r) => AnyFamily::Ao(attach(r, store)),
            AnyRules::Aut(r) => AnyFamily::Aut(attach(r, store)),
            AnyRules::Au(r) => AnyFamily::Au(attach(r, store)),
            AnyRules::Group(r) => AnyFamily::Group(attach(r, store)),
        })
    }

    /// Amenability tolerance suited to the family's convergence rate.
    pub fn default_tolerance(&self) -> f64 {
        match &self.spec {
            FamilySpec::AO { .. } | FamilySpec::Aut { .. } => INTERVAL_TOLERANCE,
            FamilySpec::AU { .. } => FREE_TOLERANCE,
            FamilySpec::GroupDual { factors, product, .. } => {
                if *product == ProductSpec::Free && factors.len() > 1 {
                    FREE_TOLERANCE
                } else {
                    INTERVAL_TOLERANCE
                }
            }
        }
    }
}

enum AnyRules {
    Ao(AoRules),
    Aut(AutRules),
    Au(AuRules),
    Group(GroupDual),
}

/// A fusion system of any supported family.
#[derive(Debug)]
pub enum AnyFamily {
    Ao(FusionSystem<AoRules>),
    Aut(FusionSystem<AutRules>),
    Au(FusionSystem<AuRules>),
    Group(FusionSystem<GroupDual>),
}

/// Runs `$body` with `$sys` bound to the concrete fusion system.
#[macro_export]
macro_rules! with_family {
    ($fam:expr, $sys:ident => $body:expr) => {
        match $fam {
            $crate::config::AnyFamily::Ao($sys) => $body,
            $crate::config::AnyFamily::Aut($sys) => $body,
            $crate::config::AnyFamily::Au($sys) => $body,
            $crate::config::AnyFamily::Group($sys) => $body,
        }
    };
}

impl AnyFamily {
    pub fn descriptor(&self) -> String {
        with_family!(self, sys => sys.descriptor())
    }

    pub fn computed_pairs(&self) -> usize {
        with_family!(self, sys => sys.computed_pairs())
    }
}
