use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use normcoset::algebra::{self, AlgebraCaps};
use normcoset::catalog::{self, Pair};
use normcoset::definition::GroupDocument;
use normcoset::report::{self, VerifyConfig};
use normcoset::{GroupSpec, DEFAULT_ELEMENT_CAP};

/// Normalizers, one-sided normalizers and double cosets of subgroup pairs.
///
/// Exit status: 0 on success, 2 when a verdict is inconclusive, 1 on error
/// or a failed verification.
#[derive(Parser, Debug)]
#[command(name = "normcoset", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every element of a ball as a two-sided, one-sided or
    /// non-normalizer of H.
    Normalizers(AnalysisConfig),
    /// Split a ball into double cosets HgH and count their left cosets.
    Bimodules(AnalysisConfig),
    /// Central idempotents, commutator subgroup and fixed-point verdicts of a
    /// finite group.
    GroupAlgebra(AnalysisConfig),
    /// Reproduce the worked examples and report pass/fail for each.
    VerifyPaper {
        #[command(flatten)]
        config: AnalysisConfig,
        /// Example id; repeat to run several. Default: all.
        #[arg(long = "example")]
        examples: Vec<String>,
    },
    /// List built-in groups and pairs.
    Catalog,
}

#[derive(Args, Debug)]
struct AnalysisConfig {
    /// Built-in name (see `catalog`) or a JSON group definition file.
    #[arg(long)]
    group: Option<String>,
    /// Subgroup selector: a catalog name such as `A3`, `gen:(12);(34)`,
    /// `idx:1,2`, `trivial`, `whole`, or `n` for `Hn`.
    #[arg(long)]
    subgroup: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, default_value_t = algebra::DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "NORMCOSET_CAP", default_value_t = DEFAULT_ELEMENT_CAP)]
    max_elements: usize,
    #[arg(long, default_value_t = algebra::DEFAULT_MAX_NORMAL_SUBGROUPS)]
    max_normal_subgroups: usize,
}

impl AnalysisConfig {
    fn validate(&self) -> Result<()> {
        if self.max_elements == 0 || self.max_normal_subgroups == 0 {
            bail!("caps must be positive");
        }
        Ok(())
    }

    fn group_name(&self) -> Result<&str> {
        self.group.as_deref().context("--group is required")
    }

    fn pair(&self) -> Result<Pair> {
        let name = self.group_name()?;
        if looks_like_file(name) {
            let doc = GroupDocument::load(Path::new(name))?;
            let (group, subgroup) = doc.build()?;
            let subgroup = match (&self.subgroup, subgroup) {
                (Some(sel), _) => catalog::finite_subgroup(&group, sel)?,
                (None, Some(h)) => h,
                (None, None) => bail!("{name} defines no subgroup; pass --subgroup"),
            };
            return Ok(Pair {
                name: name.to_string(),
                group,
                subgroup,
            });
        }
        Ok(catalog::pair(name, self.subgroup.as_deref())?)
    }

    fn finite_group(&self) -> Result<(String, GroupSpec)> {
        let name = self.group_name()?;
        let group = if looks_like_file(name) {
            GroupDocument::load(Path::new(name))?.group.build()?
        } else {
            catalog::finite_group(name)?
        };
        Ok((name.to_string(), group))
    }

    fn caps(&self) -> AlgebraCaps {
        AlgebraCaps {
            max_normal_subgroups: self.max_normal_subgroups,
            ..AlgebraCaps::default()
        }
    }

    fn emit(&self, report: &Value, summary: &str) -> Result<()> {
        let text = serde_json::to_string_pretty(report)? + "\n";
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
                println!("{summary}");
            }
            None => {
                print!("{text}");
                eprintln!("{summary}");
            }
        }
        Ok(())
    }
}

fn looks_like_file(name: &str) -> bool {
    name.ends_with(".json") || Path::new(name).is_file()
}

/// Outcome of a command, mapped onto the exit status.
enum Outcome {
    Ok,
    Inconclusive,
    Failed,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Normalizers(cfg) => {
            cfg.validate()?;
            let pair = cfg.pair()?;
            let radius = cfg.radius.unwrap_or(3);
            let (v, inconclusive) = report::normalizers_report(&pair, radius, cfg.max_elements)?;
            let summary = format!(
                "{} in {}, radius {radius}: {} elements, {} two-sided, {} one-sided only, {} non-normalizing",
                v["subgroup"].as_str().unwrap_or_default(),
                pair.name,
                v["ball_size"],
                v["summary"]["two_sided"],
                v["summary"]["one_sided_only"],
                v["summary"]["non_normalizing"],
            );
            cfg.emit(&v, &summary)?;
            Ok(if inconclusive {
                Outcome::Inconclusive
            } else {
                Outcome::Ok
            })
        }
        Command::Bimodules(cfg) => {
            cfg.validate()?;
            let pair = cfg.pair()?;
            let radius = cfg.radius.unwrap_or(3);
            let (v, inconclusive) = report::bimodules_report(&pair, radius, cfg.max_elements)?;
            let traces: Vec<String> = v["classes"]
                .as_array()
                .map(|cs| {
                    cs.iter()
                        .map(|c| match c["trace"].as_u64() {
                            Some(t) => t.to_string(),
                            None => c["verdict"]["kind"].as_str().unwrap_or("?").to_string(),
                        })
                        .collect()
                })
                .unwrap_or_default();
            let summary = format!(
                "{} double cosets in Ball({radius}) of {}; traces: {}",
                traces.len(),
                pair.name,
                traces.join(", ")
            );
            cfg.emit(&v, &summary)?;
            Ok(if inconclusive {
                Outcome::Inconclusive
            } else {
                Outcome::Ok
            })
        }
        Command::GroupAlgebra(cfg) => {
            cfg.validate()?;
            let (name, group) = cfg.finite_group()?;
            let v = report::group_algebra_report(&name, &group, cfg.seed, cfg.caps())?;
            let summary = format!(
                "{name}: order {}, dimensions {}, [G,G] of order {}, verdict {}",
                v["order"], v["dimensions"], v["commutator_order"], v["verdict"].as_str().unwrap_or_default()
            );
            cfg.emit(&v, &summary)?;
            Ok(Outcome::Ok)
        }
        Command::VerifyPaper { config, examples } => {
            config.validate()?;
            let vc = VerifyConfig {
                radius: config.radius,
                seed: config.seed,
                cap: config.max_elements,
                caps: config.caps(),
            };
            let results = report::verify_examples(&examples, vc)?;
            let v = report::verify_report(&results, vc);
            let summary = results
                .iter()
                .map(|r| {
                    let status = if r.inconclusive {
                        "INCONCLUSIVE"
                    } else if r.pass {
                        "PASS"
                    } else {
                        "FAIL"
                    };
                    format!("{:<12} {status}", r.id)
                })
                .collect::<Vec<_>>()
                .join("\n");
            config.emit(&v, &summary)?;
            Ok(if results.iter().any(|r| r.inconclusive) {
                Outcome::Inconclusive
            } else if results.iter().all(|r| r.pass) {
                Outcome::Ok
            } else {
                Outcome::Failed
            })
        }
        Command::Catalog => {
            println!("finite groups: {}", catalog::FINITE_GROUPS.join(", "));
            for g in catalog::FINITE_GROUPS {
                let subs = catalog::named_subgroups(g);
                if !subs.is_empty() {
                    println!("  {g}: {}", subs.join(", "));
                }
            }
            println!("infinite pairs: {}", catalog::INFINITE_PAIRS.join(", "));
            println!("finite product pairs: {}", catalog::FINITE_PRODUCT_PAIRS.join(", "));
            println!("examples: {}", report::EXAMPLE_IDS.join(", "));
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(2),
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
