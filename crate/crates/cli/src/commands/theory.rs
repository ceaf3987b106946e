use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use evoctrl::theory;

use crate::output::{emit, num, Preamble, Table};
use crate::CliError;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Drift-maximizing step size on OneMax.
    KoptOm,
    /// Improvement-maximizing step size on LeadingOnes.
    KoptLo,
    /// Expected OneMax gain of an ℓ-bit flip.
    DriftOm,
    /// LeadingOnes improvement probability of an ℓ-bit flip.
    ProbLo,
    /// Expected time of the optimal LeadingOnes policy to reach fitness i.
    FixedTargetLo,
    /// Expected RLS time on LeadingOnes.
    RlsLo,
}

impl Which {
    fn as_str(self) -> &'static str {
        match self {
            Which::KoptOm => "kopt-om",
            Which::KoptLo => "kopt-lo",
            Which::DriftOm => "drift-om",
            Which::ProbLo => "prob-lo",
            Which::FixedTargetLo => "fixed-target-lo",
            Which::RlsLo => "rls-lo",
        }
    }
}

/// A single index `k` or an inclusive range `lo:hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

fn parse_index_range(s: &str) -> Result<IndexRange, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad index {t:?}"))
    };
    let range = match s.split_once(':') {
        Some((lo, hi)) => IndexRange {
            lo: parse(lo)?,
            hi: parse(hi)?,
        },
        None => {
            let k = parse(s)?;
            IndexRange { lo: k, hi: k }
        }
    };
    if range.lo > range.hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(range)
}

#[derive(Args, Debug)]
pub struct TheoryArgs {
    #[arg(value_enum)]
    pub which: Which,
    #[arg(long)]
    pub n: usize,
    /// Fitness values, `k` or `lo:hi`; defaults to `0:n-1`.
    #[arg(long, value_parser = parse_index_range)]
    pub f: Option<IndexRange>,
    /// Step sizes, `k` or `lo:hi`; defaults to `1:n`.
    #[arg(long, value_parser = parse_index_range)]
    pub ell: Option<IndexRange>,
    /// Target levels, `k` or `lo:hi`; defaults to `0:n`.
    #[arg(long, value_parser = parse_index_range)]
    pub i: Option<IndexRange>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn within(
    given: Option<IndexRange>,
    default: RangeInclusive<usize>,
    name: &str,
    n: usize,
) -> Result<RangeInclusive<usize>, CliError> {
    match given {
        None => Ok(default),
        Some(r) if default.contains(&r.lo) && default.contains(&r.hi) => Ok(r.lo..=r.hi),
        Some(r) => Err(CliError::usage(format!(
            "--{name} {}:{} outside {}:{} for n={n}",
            r.lo,
            r.hi,
            default.start(),
            default.end()
        ))),
    }
}

pub fn execute(args: &TheoryArgs) -> Result<(), CliError> {
    let n = args.n;
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let uses = |flag: &str| match args.which {
        Which::KoptOm | Which::KoptLo => flag == "f",
        Which::DriftOm | Which::ProbLo => flag == "f" || flag == "ell",
        Which::FixedTargetLo => flag == "i",
        Which::RlsLo => false,
    };
    for (flag, given) in [
        ("f", args.f.is_some()),
        ("ell", args.ell.is_some()),
        ("i", args.i.is_some()),
    ] {
        if given && !uses(flag) {
            return Err(CliError::usage(format!(
                "--{flag} does not apply to {}",
                args.which.as_str()
            )));
        }
    }
    let fs = within(args.f, 0..=n - 1, "f", n)?;
    let ells = within(args.ell, 1..=n, "ell", n)?;
    let is = within(args.i, 0..=n, "i", n)?;

    let mut pre = Preamble::new("theory");
    pre.set("which", args.which.as_str()).set("n", n);
    match args.which {
        Which::KoptOm | Which::KoptLo => {
            pre.set("f", format!("{}:{}", fs.start(), fs.end()));
        }
        Which::DriftOm | Which::ProbLo => {
            pre.set("f", format!("{}:{}", fs.start(), fs.end()))
                .set("ell", format!("{}:{}", ells.start(), ells.end()));
        }
        Which::FixedTargetLo => {
            pre.set("i", format!("{}:{}", is.start(), is.end()));
        }
        Which::RlsLo => {}
    }

    let table = match args.which {
        Which::KoptOm | Which::KoptLo => {
            let mut t = Table::new(pre, &["n", "f", "kopt"])?;
            for f in fs {
                let k = if args.which == Which::KoptOm {
                    theory::k_opt_onemax(n, f)?
                } else {
                    theory::k_opt_leadingones(n, f)?
                };
                t.row([n.to_string(), f.to_string(), k.to_string()])?;
            }
            t
        }
        Which::DriftOm | Which::ProbLo => {
            let column = if args.which == Which::DriftOm {
                "drift"
            } else {
                "prob"
            };
            let mut t = Table::new(pre, &["n", "f", "ell", column])?;
            for f in fs {
                for ell in ells.clone() {
                    let v = if args.which == Which::DriftOm {
                        theory::onemax_drift(n, f, ell)?
                    } else {
                        theory::lo_improve_prob(n, f, ell)?
                    };
                    t.row([n.to_string(), f.to_string(), ell.to_string(), num(v)])?;
                }
            }
            t
        }
        Which::FixedTargetLo => {
            let profile = theory::fixed_target_profile_lo(n)?;
            let mut t = Table::new(pre, &["n", "i", "time"])?;
            for i in is {
                t.row([n.to_string(), i.to_string(), num(profile[i])])?;
            }
            t
        }
        Which::RlsLo => {
            let mut t = Table::new(pre, &["n", "time"])?;
            t.row([n.to_string(), num(theory::rls_expected_time_lo(n)?)])?;
            t
        }
    };
    emit(args.output.as_deref(), &table.into_bytes()?)
}
