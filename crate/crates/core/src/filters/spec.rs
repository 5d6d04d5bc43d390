//! Text form of [`FilterSpec`].
//!
//! ```text
//! spec     := family (":" field)*
//! family   := identity | vmf | bvdf | ddf | cwddf | cwvmf | acwddf
//! field    := strategy | key "=" value
//! strategy := exact | minimax | rgb
//! key      := q          minimax degree, 2..=4 (default 4; implies minimax)
//!           | p          Minkowski order of the distance terms (default 2)
//!           | w          window side, odd >= 3 (default 3)
//!           | k          smoothing level of cwddf/cwvmf (default 2)
//!           | lambda     first ACWDDF smoothing level (default 2)
//!           | T          ACWDDF threshold (default 10.8)
//!           | smoother   cwddf | cwvmf, ACWDDF smoothing ordering (default cwddf)
//!           | slope      rgb calibration slope (default 1.436437)
//!           | intercept  rgb calibration intercept (default 0.027664)
//!           | bp         Minkowski order in chromaticity space (default 2)
//! ```
//!
//! Examples: `bvdf:minimax:q=4`, `acwddf:rgb:lambda=2:T=10.8`, `ddf:exact:p=2`.
//! `Display` prints the canonical form, which lists only non-default fields.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use super::{AcwddfParams, DirectionalStrategy, FilterFamily, FilterSpec, Smoother};
use crate::distance::{Calibration, FastAcosTable, MinkowskiOrder};
use crate::error::{Error, Result};

const DEFAULT_K: usize = 2;

fn syntax(spec: &str, reason: impl Into<String>) -> Error {
    Error::SpecSyntax {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn number<T: FromStr>(spec: &str, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| syntax(spec, format!("invalid value `{value}` for `{key}`")))
}

fn smoother(spec: &str, value: &str) -> Result<Smoother> {
    match value {
        "cwddf" => Ok(Smoother::Cwddf),
        "cwvmf" => Ok(Smoother::Cwvmf),
        _ => Err(syntax(spec, format!("unknown smoother `{value}`"))),
    }
}

impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let family_name = parts.next().unwrap_or_default().to_ascii_lowercase();

        let mut strategy_name: Option<&str> = None;
        let mut q = None;
        let mut order = MinkowskiOrder::L2;
        let mut side = FilterSpec::DEFAULT_SIDE;
        let mut k = DEFAULT_K;
        let mut acw = AcwddfParams::default();
        let mut calibration = Calibration::REFERENCE;
        let mut chroma_order = MinkowskiOrder::L2;

        for field in parts {
            let Some((key, value)) = field.split_once('=') else {
                match field {
                    "exact" | "minimax" | "rgb" => {
                        if strategy_name.replace(field).is_some() {
                            return Err(syntax(s, "more than one strategy"));
                        }
                    }
                    _ => return Err(syntax(s, format!("unknown field `{field}`"))),
                }
                continue;
            };
            match key {
                "q" => q = Some(number::<usize>(s, key, value)?),
                "p" => order = MinkowskiOrder::new(number(s, key, value)?)?,
                "w" => side = number(s, key, value)?,
                "k" => k = number(s, key, value)?,
                "lambda" => acw.lambda = number(s, key, value)?,
                "T" => acw.threshold = number(s, key, value)?,
                "smoother" => acw.smoother = smoother(s, value)?,
                "slope" => calibration.slope = number(s, key, value)?,
                "intercept" => calibration.intercept = number(s, key, value)?,
                "bp" => chroma_order = MinkowskiOrder::new(number(s, key, value)?)?,
                _ => return Err(syntax(s, format!("unknown key `{key}`"))),
            }
        }

        let strategy = match (strategy_name, q) {
            (None | Some("exact"), None) => DirectionalStrategy::Exact,
            (None | Some("minimax"), Some(q)) => DirectionalStrategy::minimax(q)?,
            (Some("minimax"), None) => DirectionalStrategy::Minimax(FastAcosTable::default()),
            (Some("rgb"), None) => DirectionalStrategy::Chromaticity {
                calibration,
                order: chroma_order,
            },
            _ => return Err(syntax(s, "`q` only applies to the minimax strategy")),
        };
        let is_rgb = matches!(strategy, DirectionalStrategy::Chromaticity { .. });
        if !is_rgb && (calibration != Calibration::REFERENCE || chroma_order != MinkowskiOrder::L2)
        {
            return Err(syntax(
                s,
                "`slope`, `intercept` and `bp` only apply to the rgb strategy",
            ));
        }

        let family = match family_name.as_str() {
            "identity" | "none" => FilterFamily::Identity,
            "vmf" => FilterFamily::Vmf,
            "bvdf" => FilterFamily::Bvdf,
            "ddf" => FilterFamily::Ddf,
            "cwddf" => FilterFamily::Cwddf {
                k,
                smoother: Smoother::Cwddf,
            },
            "cwvmf" => FilterFamily::Cwddf {
                k,
                smoother: Smoother::Cwvmf,
            },
            "acwddf" => FilterFamily::Acwddf(acw),
            "" => return Err(syntax(s, "missing filter family")),
            other => return Err(syntax(s, format!("unknown filter family `{other}`"))),
        };
        let uses_k = matches!(family, FilterFamily::Cwddf { .. });
        if !uses_k && k != DEFAULT_K {
            return Err(syntax(s, "`k` only applies to cwddf and cwvmf"));
        }
        if !matches!(family, FilterFamily::Acwddf(_)) && acw != AcwddfParams::default() {
            return Err(syntax(
                s,
                "`lambda`, `T` and `smoother` only apply to acwddf",
            ));
        }

        let spec = FilterSpec {
            family,
            strategy,
            order,
            side,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            FilterFamily::Cwddf {
                smoother: Smoother::Cwvmf,
                ..
            } => f.write_str("cwvmf")?,
            family => f.write_str(family.name())?,
        }
        match self.strategy {
            DirectionalStrategy::Exact => {}
            DirectionalStrategy::Minimax(table) => {
                f.write_str(":minimax")?;
                match table.degree() {
                    Some(q) if q != FastAcosTable::DEFAULT_DEGREE => write!(f, ":q={q}")?,
                    _ => {}
                }
            }
            DirectionalStrategy::Chromaticity { calibration, order } => {
                f.write_str(":rgb")?;
                if calibration.slope != Calibration::REFERENCE.slope {
                    write!(f, ":slope={}", calibration.slope)?;
                }
                if calibration.intercept != Calibration::REFERENCE.intercept {
                    write!(f, ":intercept={}", calibration.intercept)?;
                }
                if order != MinkowskiOrder::L2 {
                    write!(f, ":bp={}", order.get())?;
                }
            }
        }
        if self.order != MinkowskiOrder::L2 {
            write!(f, ":p={}", self.order.get())?;
        }
        if self.side != FilterSpec::DEFAULT_SIDE {
            write!(f, ":w={}", self.side)?;
        }
        match self.family {
            FilterFamily::Cwddf { k, .. } if k != DEFAULT_K => write!(f, ":k={k}")?,
            FilterFamily::Acwddf(params) => {
                if params.lambda != AcwddfParams::DEFAULT_LAMBDA {
                    write!(f, ":lambda={}", params.lambda)?;
                }
                if params.threshold != AcwddfParams::DEFAULT_THRESHOLD {
                    write!(f, ":T={}", params.threshold)?;
                }
                if params.smoother == Smoother::Cwvmf {
                    f.write_str(":smoother=cwvmf")?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn parse(s: &str) -> FilterSpec {
        s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn documented_examples() {
        let s = parse("bvdf:minimax:q=4");
        assert_eq!(s.family, FilterFamily::Bvdf);
        assert_eq!(
            s.strategy,
            DirectionalStrategy::Minimax(FastAcosTable::new(4).unwrap())
        );

        let s = parse("acwddf:rgb:lambda=2:T=10.8");
        assert_eq!(s.family, FilterFamily::Acwddf(AcwddfParams::default()));
        assert_eq!(s.strategy, DirectionalStrategy::rgb());

        let s = parse("ddf:exact:p=2");
        assert_eq!(
            s,
            FilterSpec::new(FilterFamily::Ddf, DirectionalStrategy::Exact)
        );
    }

    #[test]
    fn q_alone_selects_minimax() {
        assert_eq!(
            parse("bvdf:q=3").strategy,
            DirectionalStrategy::minimax(3).unwrap()
        );
    }

    #[test]
    fn canonical_form_round_trips() {
        for text in [
            "identity",
            "vmf",
            "vmf:p=1",
            "bvdf",
            "bvdf:minimax",
            "bvdf:minimax:q=2",
            "bvdf:rgb",
            "bvdf:rgb:slope=1:intercept=0",
            "bvdf:rgb:bp=1",
            "ddf:p=3:w=5",
            "cwddf:k=1",
            "cwvmf:k=4",
            "acwddf:minimax",
            "acwddf:rgb:lambda=3:T=0.5:smoother=cwvmf",
            "acwddf:w=5:lambda=9",
        ] {
            let spec = parse(text);
            assert_eq!(spec.to_string(), text);
            assert_eq!(parse(&spec.to_string()), spec);
        }
    }

    #[test]
    fn non_canonical_inputs_normalize() {
        assert_eq!(parse("BVDF:exact:p=2:w=3").to_string(), "bvdf");
        assert_eq!(
            parse("acwddf:minimax:q=4:lambda=2:T=10.8").to_string(),
            "acwddf:minimax"
        );
        assert_eq!(parse("none").to_string(), "identity");
    }

    #[test]
    fn rejects_malformed() {
        for text in [
            "",
            "median",
            "bvdf:fast",
            "bvdf:exact:minimax",
            "bvdf:q=5",
            "bvdf:rgb:q=4",
            "bvdf:slope=2",
            "bvdf:rgb:slope=-1",
            "bvdf:p=0.5",
            "bvdf:w=4",
            "bvdf:k=3",
            "vmf:T=3",
            "cwddf:k=0",
            "acwddf:lambda=4",
            "acwddf:T=abc",
            "acwddf:smoother=vmf",
            "ddf:color=red",
        ] {
            assert!(text.parse::<FilterSpec>().is_err(), "{text}");
        }
    }
}
