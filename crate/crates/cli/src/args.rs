use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use semple_core::codes::{RuleThreeReading, Tower};
use semple_core::milnor::SearchBounds;

#[derive(Debug, Parser)]
#[command(
    name = "semple",
    version,
    about = "Exact invariants of plane-curve germs and RVT codes"
)]
pub struct Cli {
    /// Precision of curve inputs; defaults to 4 times the largest exponent.
    #[arg(long, global = true, value_name = "N")]
    pub trunc: Option<u32>,

    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for witness searches and corpus runs.
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Puiseux characteristic of a curve such as "t^4, t^6 + t^7".
    Pc { curve: String },
    /// RVT code: the first `--depth` letters, or the code of the germ.
    Rvt {
        curve: String,
        #[arg(long)]
        depth: Option<usize>,
        /// Give up if the curve has not regularized by this level.
        #[arg(long, default_value_t = 200)]
        max_depth: usize,
    },
    /// Per-level orders, letters and multiplicities.
    Prolong {
        curve: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Multiplicities of the prolonged curves down to the first 1.
    MultSeq {
        curve: String,
        #[arg(long, default_value_t = 200)]
        max_depth: usize,
    },
    /// Conversions between derived vectors, growth vectors and characteristics.
    #[command(subcommand)]
    Convert(Convert),
    /// Check a code against its spelling grammar.
    Validate {
        code: String,
        #[arg(long, value_enum)]
        tower: Option<TowerArg>,
        #[arg(long, value_enum, default_value_t = Rule3Arg::L1)]
        rule3: Rule3Arg,
    },
    /// Number of grammatical codes of a given length.
    Count {
        #[arg(long, value_enum)]
        tower: TowerArg,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value_t = Rule3Arg::L1)]
        rule3: Rule3Arg,
    },
    /// Closed-form Milnor numbers and their cross-check.
    #[command(subcommand)]
    Milnor(Milnor),
    /// Least two-term curve realizing a planar code.
    Search {
        code: String,
        #[arg(long, value_parser = parse_bounds, default_value = "a=40,c=400")]
        bounds: SearchBounds,
    },
    /// The cohomology ring of the complexified tower.
    #[command(subcommand)]
    Cohomology(Cohomology),
    /// Batch execution of tasks from a file.
    #[command(subcommand)]
    Corpus(Corpus),
}

#[derive(Debug, Subcommand)]
pub enum Convert {
    /// Derived vector to Puiseux characteristic.
    Der2pc {
        #[arg(required = true, num_args = 1..)]
        entries: Vec<u32>,
    },
    /// Small growth vector to derived vector.
    Sgv2der {
        #[arg(required = true, num_args = 1..)]
        entries: Vec<u32>,
    },
    /// Derived vector to small growth vector.
    Der2sgv {
        #[arg(required = true, num_args = 1..)]
        entries: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Milnor {
    /// R^s V^k T^u
    Block { s: u32, k: u32, u: u32 },
    /// R^s1 V T^u1 R^s2 V T^u2 ..., given as s1,u1 s2,u2 ...
    Chain {
        #[arg(required = true, num_args = 1.., value_parser = parse_pair)]
        pairs: Vec<(u32, u32)>,
    },
    /// Formula against the oracle on a searched witness.
    Check {
        code: String,
        #[arg(long, value_parser = parse_bounds, default_value = "a=40,c=400")]
        bounds: SearchBounds,
    },
}

#[derive(Debug, Subcommand)]
pub enum Cohomology {
    /// Ranks in each even degree.
    Betti(Presentation),
    /// Normal form of a polynomial in x1..xn.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        polynomial: String,
        #[command(flatten)]
        presentation: Presentation,
    },
    /// Whether the presentation is that of a product of lines.
    Product(Presentation),
}

#[derive(Debug, Args)]
pub struct Presentation {
    #[arg(long)]
    pub levels: usize,
    /// `k:a1,...,a(k-1)`, the coefficients of c1 at level k; repeatable.
    #[arg(long = "c1", value_name = "K:COEFFS", value_parser = parse_c1)]
    pub c1: Vec<(usize, Vec<BigInt>)>,
}

#[derive(Debug, Subcommand)]
pub enum Corpus {
    /// Run `<subcommand> | <args>` lines, printing JSON lines in order.
    Run { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TowerArg {
    Planar,
    Spatial,
}

impl From<TowerArg> for Tower {
    fn from(t: TowerArg) -> Tower {
        match t {
            TowerArg::Planar => Tower::Planar,
            TowerArg::Spatial => Tower::Spatial,
        }
    }
}

/// Reading of the undecorated `L` after `V` and `T1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule3Arg {
    /// Only L1.
    L1,
    /// Any of L1, L2, L3.
    Any,
}

impl From<Rule3Arg> for RuleThreeReading {
    fn from(r: Rule3Arg) -> RuleThreeReading {
        match r {
            Rule3Arg::L1 => RuleThreeReading::L1Only,
            Rule3Arg::Any => RuleThreeReading::AnyL,
        }
    }
}

fn parse_number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{what} {s:?} is not a valid number"))
}

/// `a=40,c=400`; either key may be omitted.
pub fn parse_bounds(s: &str) -> Result<SearchBounds, String> {
    let mut bounds = SearchBounds::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        match key.trim() {
            "a" => bounds.max_a = parse_number(value, "a")?,
            "c" => bounds.max_exponent = parse_number(value, "c")?,
            other => return Err(format!("unknown bound {other:?}; use a= and c=")),
        }
    }
    if bounds.max_a < 2 {
        return Err("a must be at least 2".into());
    }
    Ok(bounds)
}

/// `s,u`
pub fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected s,u, got {s:?}"))?;
    Ok((parse_number(a, "s")?, parse_number(b, "u")?))
}

/// `k:a1,a2,...`
pub fn parse_c1(s: &str) -> Result<(usize, Vec<BigInt>), String> {
    let (k, coeffs) = s
        .split_once(':')
        .ok_or_else(|| format!("expected k:a1,...,a(k-1), got {s:?}"))?;
    let coeffs = coeffs
        .split(',')
        .filter(|c| !c.trim().is_empty())
        .map(|c| parse_number(c, "coefficient"))
        .collect::<Result<_, _>>()?;
    Ok((parse_number(k, "level")?, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_syntax() {
        let b = parse_bounds("a=12,c=90").unwrap();
        assert_eq!((b.max_a, b.max_exponent), (12, 90));
        assert_eq!(parse_bounds("c=50").unwrap().max_a, 40);
        assert!(parse_bounds("b=3").is_err());
        assert!(parse_bounds("a=x").is_err());
        assert!(parse_bounds("a=1").is_err());
    }

    #[test]
    fn pairs_and_c1() {
        assert_eq!(parse_pair("2,3"), Ok((2, 3)));
        assert!(parse_pair("2").is_err());
        assert_eq!(
            parse_c1("3:-1,2"),
            Ok((3, vec![BigInt::from(-1), BigInt::from(2)]))
        );
        assert_eq!(parse_c1("2:"), Ok((2, vec![])));
    }

    #[test]
    fn command_tree_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
