//! `quadforms`: class groups, genus tables, the discriminant lifting map, and
//! coefficient-exact verification of the theta-series identities relating
//! discriminants `D` and `D p^2`.
//!
//! Exit codes: 0 on success, 1 when a verification reports a mismatch, 2 on
//! usage or input errors.

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadforms::identities::genus_slices;
use quadforms::lambert::GenusSide;
use quadforms::lift::{lift_list, LiftSource};
use quadforms::{
    genera, psi, verify_genus_theorem, verify_main_theorem, verify_pp0, ClassGroup, GenusLabel,
    GenusPartition, LambertDecomposition, QuadForm, VerificationReport,
};

const SWEEP_PRIMES: [i64; 4] = [2, 3, 5, 7];
const DEFAULT_ORDER_SINGLE: usize = 1000;
const DEFAULT_ORDER_SWEEP: usize = 300;

#[derive(Parser)]
#[command(name = "quadforms", version, about, max_term_width = 100)]
struct Cli {
    /// Emit a JSON envelope instead of tables
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class group of a discriminant with its genus table
    Classgroup {
        /// Negative discriminant (0 or 1 mod 4)
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Print the image of a class under the lifting map to disc * p^2
    Psi {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(short)]
        p: i64,
        /// Form as a comma-separated triple, e.g. 9,-3,14
        #[arg(long, value_parser = parse_form)]
        form: (i64, i64, i64),
        /// Also print the raw list of p + 1 forms with shift values and
        /// primitivity tags
        #[arg(long)]
        raw: bool,
    },
    /// Check a theta-series identity coefficient-by-coefficient
    Verify(VerifyArgs),
    /// Run the Lambert-series identity chain for discriminant -207
    Lambert207 {
        /// Truncation order (at least 81)
        #[arg(short = 'N', long = "order")]
        order: Option<usize>,
        /// Also compare the representation formulas at this n against
        /// lattice counts and character sums
        #[arg(long)]
        rep: Option<i64>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    #[arg(short)]
    p: Option<i64>,
    #[arg(long, value_parser = parse_form)]
    form: Option<(i64, i64, i64)>,
    /// Genus to check, as an index into the canonical genus ordering of
    /// disc * p^2 (label vectors sorted with +1 before -1)
    #[arg(long)]
    genus_index: Option<usize>,
    #[arg(short = 'N', long = "order")]
    order: Option<usize>,
    /// Check every form of the discriminant (and every p in {2,3,5,7} if -p
    /// is omitted)
    #[arg(long)]
    sweep: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    /// Full-image identity for Psi_p
    Main,
    /// P_{p,0} dissection cases
    Pp0,
    /// Per-genus refinement
    Genus,
}

impl Theorem {
    fn name(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::Pp0 => "pp0",
            Theorem::Genus => "genus",
        }
    }
}

fn parse_form(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected a,b,c got '{s}'"));
    }
    let mut nums = [0i64; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coefficient '{part}': {e}"))?;
    }
    Ok((nums[0], nums[1], nums[2]))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Classgroup { disc } => cmd_classgroup(*disc, cli.json),
        Command::Psi { disc, p, form, raw } => cmd_psi(*disc, *p, *form, *raw, cli.json),
        Command::Verify(args) => cmd_verify(args, cli.json),
        Command::Lambert207 { order, rep } => {
            cmd_lambert207(order.unwrap_or(DEFAULT_ORDER_SINGLE), *rep, cli.json)
        }
    }
}

/// The stable output envelope; `parameters` values are JSON scalars.
fn emit_envelope(command: &str, parameters: Value, result: Value, ok: bool) {
    let envelope = json!({
        "command": command,
        "parameters": parameters,
        "result": result,
        "status": if ok { "ok" } else { "fail" },
        "version": env!("CARGO_PKG_VERSION"),
    });
    println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
}

fn form_value(f: &QuadForm) -> Value {
    json!([f.a(), f.b(), f.c()])
}

fn label_value(label: &GenusLabel) -> Value {
    Value::Array(label.values().iter().map(|&v| json!(v)).collect())
}

fn structure_string(factors: &[i64]) -> String {
    if factors.is_empty() {
        "Z1".to_string()
    } else {
        factors
            .iter()
            .map(|d| format!("Z{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn checked_form(disc: i64, triple: (i64, i64, i64)) -> anyhow::Result<QuadForm> {
    let (a, b, c) = triple;
    let f = QuadForm::new(a, b, c).map_err(|e| anyhow!(e.to_string()))?;
    if f.discriminant() != disc {
        bail!(
            "form ({a},{b},{c}) has discriminant {}, not {disc}",
            f.discriminant()
        );
    }
    if !f.is_primitive() {
        bail!("form ({a},{b},{c}) is not primitive");
    }
    Ok(f)
}

fn cmd_classgroup(disc: i64, as_json: bool) -> anyhow::Result<ExitCode> {
    let cl = ClassGroup::enumerate(disc).map_err(|e| anyhow!(e.to_string()))?;
    let partition = genera(&cl).map_err(|e| anyhow!(e.to_string()))?;
    let structure = cl.group_structure().map_err(|e| anyhow!(e.to_string()))?;
    let w = quadforms::unit_w(disc);
    if as_json {
        let genera_json: Vec<Value> = partition
            .genera()
            .iter()
            .map(|(label, forms)| {
                json!({
                    "label": label_value(label),
                    "forms": forms.iter().map(form_value).collect::<Vec<_>>(),
                })
            })
            .collect();
        let result = json!({
            "disc": disc,
            "h": cl.class_number(),
            "w": w,
            "structure": structure,
            "characters": partition.system().names(),
            "genera": genera_json,
        });
        emit_envelope("classgroup", json!({ "disc": disc }), result, true);
    } else {
        println!(
            "CL({disc}) = {}    h = {}    w = {w}",
            structure_string(&structure),
            cl.class_number()
        );
        print_genus_table(&partition);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_genus_table(partition: &GenusPartition) {
    let names = partition.system().names();
    let header = names
        .iter()
        .map(|n| format!("{n:>6}"))
        .collect::<Vec<_>>()
        .join("");
    println!("{:<6}{header}  forms", "genus");
    for (i, (label, forms)) in partition.genera().iter().enumerate() {
        let values = label
            .values()
            .iter()
            .map(|&v| format!("{:>6}", if v > 0 { "+1" } else { "-1" }))
            .collect::<Vec<_>>()
            .join("");
        let forms = forms
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        println!("G{:<5}{values}  {forms}", i + 1);
    }
}

fn cmd_psi(
    disc: i64,
    p: i64,
    triple: (i64, i64, i64),
    raw: bool,
    as_json: bool,
) -> anyhow::Result<ExitCode> {
    let f = checked_form(disc, triple)?;
    let image = psi(&f, p).map_err(|e| anyhow!(e.to_string()))?;
    let lifted = ClassGroup::enumerate(disc * p * p).map_err(|e| anyhow!(e.to_string()))?;
    let partition = genera(&lifted).map_err(|e| anyhow!(e.to_string()))?;
    let list = lift_list(&f, p).map_err(|e| anyhow!(e.to_string()))?;

    if as_json {
        let classes: Vec<Value> = image
            .classes
            .iter()
            .map(|c| {
                json!({
                    "form": form_value(c),
                    "genus": partition.label_of(c).map(label_value),
                })
            })
            .collect();
        let mut result = json!({
            "disc": disc,
            "p": p,
            "source": form_value(&f),
            "lifted_disc": disc * p * p,
            "classes": classes,
        });
        if raw {
            let entries: Vec<Value> = list
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "source": match e.source {
                            LiftSource::CoForm => json!("co-form"),
                            LiftSource::Shift(h) => json!(h),
                        },
                        "form": form_value(&e.form),
                        "reduced": form_value(&e.form.reduce()),
                        "primitive": e.primitive,
                    })
                })
                .collect();
            result["raw"] = Value::Array(entries);
        }
        emit_envelope(
            "psi",
            json!({ "disc": disc, "p": p, "form": form_value(&f), "raw": raw }),
            result,
            true,
        );
        return Ok(ExitCode::SUCCESS);
    }

    println!(
        "Psi_{p}{f} in CL({}): {} class{}",
        disc * p * p,
        image.len(),
        if image.len() == 1 { "" } else { "es" }
    );
    for class in &image.classes {
        let label = partition
            .label_of(class)
            .map(|l| l.to_string())
            .unwrap_or_default();
        println!("  {class:<12} genus {label}");
    }
    if raw {
        println!("\n{:<8}{:<16}{:<14}primitive", "h", "form", "reduced");
        for e in &list.entries {
            let src = match e.source {
                LiftSource::CoForm => "co-form".to_string(),
                LiftSource::Shift(h) => h.to_string(),
            };
            println!(
                "{src:<8}{:<16}{:<14}{}",
                e.form.to_string(),
                e.form.reduce().to_string(),
                if e.primitive { "yes" } else { "no" }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_line(r: &VerificationReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let params = r
        .parameters
        .iter()
        .filter(|(k, _)| !matches!(k.as_str(), "psi" | "slice"))
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    match &r.first_mismatch {
        None => format!("{status} {} {params}", r.identity),
        Some(m) => format!(
            "{status} {} {params}  first mismatch at q^{}: lhs={} rhs={}",
            r.identity, m.index, m.lhs, m.rhs
        ),
    }
}

fn cmd_verify(args: &VerifyArgs, as_json: bool) -> anyhow::Result<ExitCode> {
    quadforms::validate_discriminant(args.disc).map_err(|e| anyhow!(e.to_string()))?;
    let order = args
        .order
        .unwrap_or(if args.sweep { DEFAULT_ORDER_SWEEP } else { DEFAULT_ORDER_SINGLE });
    let primes: Vec<i64> = match args.p {
        Some(p) => vec![p],
        None if args.sweep => SWEEP_PRIMES.to_vec(),
        None => bail!("-p is required without --sweep"),
    };
    let forms: Vec<QuadForm> = if args.sweep {
        ClassGroup::enumerate(args.disc)
            .map_err(|e| anyhow!(e.to_string()))?
            .forms()
            .to_vec()
    } else {
        let triple = args
            .form
            .ok_or_else(|| anyhow!("--form is required without --sweep"))?;
        vec![checked_form(args.disc, triple)?]
    };

    let mut reports = Vec::new();
    for &p in &primes {
        for f in &forms {
            match args.theorem {
                Theorem::Main => {
                    reports.push(verify_main_theorem(f, p, order).map_err(|e| anyhow!(e.to_string()))?)
                }
                Theorem::Pp0 => {
                    reports.push(verify_pp0(f, p, order).map_err(|e| anyhow!(e.to_string()))?)
                }
                Theorem::Genus => {
                    let slices = genus_slices(f, p).map_err(|e| anyhow!(e.to_string()))?;
                    let selected: Vec<GenusLabel> = match args.genus_index {
                        None => slices.iter().map(|(l, _)| l.clone()).collect(),
                        Some(k) => {
                            let lifted = ClassGroup::enumerate(args.disc * p * p)
                                .map_err(|e| anyhow!(e.to_string()))?;
                            let partition =
                                genera(&lifted).map_err(|e| anyhow!(e.to_string()))?;
                            let (label, _) = partition
                                .genera()
                                .get(k)
                                .ok_or_else(|| anyhow!("genus index {k} out of range"))?;
                            vec![label.clone()]
                        }
                    };
                    for label in selected {
                        reports.push(
                            verify_genus_theorem(f, p, &label, order)
                                .map_err(|e| anyhow!(e.to_string()))?,
                        );
                    }
                }
            }
        }
    }

    let all_pass = reports.iter().all(VerificationReport::passed);
    if as_json {
        let params = json!({
            "theorem": args.theorem.name(),
            "disc": args.disc,
            "p": args.p,
            "form": args.form.map(|(a, b, c)| json!([a, b, c])),
            "genus_index": args.genus_index,
            "N": order,
            "sweep": args.sweep,
        });
        let result = serde_json::to_value(&reports)?;
        emit_envelope("verify", params, result, all_pass);
    } else {
        for r in &reports {
            println!("{}", report_line(r));
        }
        println!(
            "{} of {} identities verified",
            reports.iter().filter(|r| r.passed()).count(),
            reports.len()
        );
    }
    Ok(verification_exit(all_pass))
}

/// 0 when every report passed, 1 on any coefficient mismatch.
fn verification_exit(all_pass: bool) -> ExitCode {
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_lambert207(order: usize, rep: Option<i64>, as_json: bool) -> anyhow::Result<ExitCode> {
    let bundle = LambertDecomposition::disc207();
    let reports = bundle.verify_chain(order).map_err(|e| anyhow!(e.to_string()))?;
    let mut all_pass = reports.iter().all(VerificationReport::passed);

    let rep_result = rep
        .map(|n| -> anyhow::Result<(BTreeMap<&str, [i64; 3]>, bool)> {
            let lattice_order =
                usize::try_from(n).context("rep index must be nonnegative")?;
            let mut table = BTreeMap::new();
            let mut agree = true;
            for (name, side) in [
                ("principal", GenusSide::Principal),
                ("nonprincipal", GenusSide::NonPrincipal),
            ] {
                let closed = bundle.rep_genus(n, side).map_err(|e| anyhow!(e.to_string()))?;
                let lattice = bundle.genus_theta(side, lattice_order).coeff(lattice_order);
                let sums = bundle
                    .rep_genus_character_sums(n)
                    .map_err(|e| anyhow!(e.to_string()))?;
                let sum = match side {
                    GenusSide::Principal => sums.0,
                    GenusSide::NonPrincipal => sums.1,
                };
                agree &= closed == lattice && lattice == sum;
                table.insert(name, [closed, lattice, sum]);
            }
            Ok((table, agree))
        })
        .transpose()?;
    if let Some((_, agree)) = &rep_result {
        all_pass &= *agree;
    }

    if as_json {
        let mut result = json!({
            "identities": serde_json::to_value(&reports)?,
        });
        if let Some((table, agree)) = &rep_result {
            let detail: BTreeMap<&str, Value> = table
                .iter()
                .map(|(k, [closed, lattice, sums])| {
                    (
                        *k,
                        json!({"closed_form": closed, "lattice": lattice, "character_sums": sums}),
                    )
                })
                .collect();
            result["rep"] = json!({ "n": rep, "counts": detail, "agree": agree });
        }
        emit_envelope(
            "lambert207",
            json!({ "N": order, "rep": rep }),
            result,
            all_pass,
        );
    } else {
        for r in &reports {
            println!("{}", report_line(r));
        }
        if let Some((table, agree)) = &rep_result {
            let n = rep.unwrap();
            println!("\nrepresentations of n = {n} by genus:");
            for (name, [closed, lattice, sums]) in table {
                println!(
                    "  {name:<13} closed-form {closed}, lattice {lattice}, character-sums {sums}"
                );
            }
            println!("{}", if *agree { "all three methods agree" } else { "MISMATCH" });
        }
    }
    Ok(verification_exit(all_pass))
}
