use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use wliso::games::{self, GameVariant};
use wliso::gen;
use wliso::graph::Graph;
use wliso::rotation::RotationSystem;
use wliso::structure::RelStructure;
use wliso::wl::{self, Decision, Variant};
use wliso::{circuit, Error};

#[derive(Parser)]
#[command(name = "wliso", about = "Weisfeiler-Lehman graph-isomorphism toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Counting,
    CountFree,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Counting => Variant::Counting,
            VariantArg::CountFree => Variant::CountFree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide isomorphism of two edge-list graphs with k-dimensional refinement
    Iso {
        g: String,
        h: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value = "counting")]
        variant: VariantArg,
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Exact pebble-game distinguishing depth of two graphs
    Depth {
        g: String,
        h: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value = "counting")]
        variant: VariantArg,
    },
    /// Validate the logarithmic round bounds on generated instance families
    BenchBounds {
        #[arg(long, value_parser = ["btw", "rotation"])]
        family: String,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
    },
    /// Compile the refinement circuit; print stats, dump, or cross-check
    Circuit {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "counting")]
        variant: VariantArg,
        /// Print the full gate list instead of stats
        #[arg(long)]
        emit: bool,
        /// Exhaustively compare the circuit verdict with the direct algorithm
        #[arg(long)]
        check: bool,
    },
    /// Emit a generated instance in its module file format
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Dump rotation-system coordinates relative to an origin edge
    Coords {
        file: String,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    Tree {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Ktree {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Cfi {
        base: String,
        #[arg(long)]
        twist: bool,
    },
    Regular {
        n: usize,
    },
    Rotation {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_graph(path: &str) -> Result<Graph, Error> {
    Graph::from_edge_list(&std::fs::read_to_string(path)?)
}

fn load_rotation(path: &str) -> Result<RotationSystem, Error> {
    RotationSystem::from_text(&std::fs::read_to_string(path)?)
}

fn run() -> Result<u8, Error> {
    match Cli::parse().command {
        Command::Iso { g, h, k, variant, max_rounds, json } => {
            let (g, h) = (load_graph(&g)?, load_graph(&h)?);
            let report = wl::run(&g, &h, k, variant.into(), max_rounds)?;
            if json {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            } else {
                println!(
                    "decision={:?} k={} variant={} rounds_run={} rounds_to_stable={:?}",
                    report.decision, report.k, report.variant, report.rounds_run,
                    report.rounds_to_stable
                );
            }
            Ok(match report.decision {
                Decision::NonIsomorphic => 1,
                // without stabilization the non-distinction is not a verdict
                Decision::Isomorphic if report.rounds_to_stable.is_none() => 2,
                Decision::Isomorphic => 0,
            })
        }
        Command::Depth { g, h, k, variant } => {
            let (g, h) = (load_graph(&g)?, load_graph(&h)?);
            let gvariant = match Variant::from(variant) {
                Variant::Counting => GameVariant::Counting,
                Variant::CountFree => GameVariant::Plain,
            };
            let result = match games::ef_depth(&g, &h, k, gvariant) {
                Err(e @ Error::BudgetExceeded(_)) => {
                    eprintln!("{e}");
                    return Ok(3);
                }
                other => other?,
            };
            // the k-pebble game matches (k-1)-dimensional refinement rounds
            let wl_round = if k >= 2 {
                wl::min_distinguishing_round(&g, &h, k - 1, variant.into())?
            } else {
                None
            };
            let fmt = |v: Option<usize>| v.map_or("inf".to_string(), |x| x.to_string());
            println!("k={} variant={} depth={} wl_round={}", k,
                match gvariant { GameVariant::Plain => "plain", GameVariant::Counting => "counting" },
                fmt(result.value), fmt(wl_round));
            Ok(0)
        }
        Command::BenchBounds { family, kmax, nmax, seeds } => {
            bench_bounds(&family, kmax, nmax, seeds)
        }
        Command::Circuit { n, k, r, variant, emit, check } => {
            let c = circuit::compile(n, k, r, variant.into())?;
            if emit {
                print!("{}", c.dump());
                return Ok(0);
            }
            if check {
                let (pairs, mismatches) = circuit_check(&c)?;
                println!("checked {pairs} labeled pairs: {mismatches} mismatches");
                return Ok(if mismatches == 0 { 0 } else { 1 });
            }
            let m = c.meta;
            println!(
                "n={} k={} r={} variant={} gates={} depth={} thresholds={}",
                m.n, m.k, m.r, m.variant, m.gate_count, m.depth,
                c.threshold_gate_count()
            );
            Ok(0)
        }
        Command::Gen { family } => {
            match family {
                GenFamily::Tree { n, seed } => print!("{}", gen::gen_tree(n, seed)?.to_edge_list()),
                GenFamily::Ktree { n, k, seed } => {
                    print!("{}", gen::gen_partial_ktree(n, k, seed)?.graph.to_edge_list())
                }
                GenFamily::Cfi { base, twist } => {
                    print!("{}", gen::gen_cfi(&load_graph(&base)?, twist)?.to_edge_list())
                }
                GenFamily::Regular { n } => {
                    let (g, h) = gen::gen_regular_pair(n)?;
                    print!("{}{}", g.to_edge_list(), h.to_edge_list());
                }
                GenFamily::Rotation { n, seed } => {
                    print!("{}", gen::gen_rotation(n, seed)?.to_text())
                }
            }
            Ok(0)
        }
        Command::Coords { file, a, b } => {
            let r = load_rotation(&file)?;
            for c in r.global_coords(a, b)? {
                let coords: Vec<String> = c.coords.iter().map(|x| x.to_string()).collect();
                println!("{}: {}", c.target, coords.join(" "));
            }
            Ok(0)
        }
    }
}

fn bench_bounds(family: &str, kmax: usize, nmax: usize, seeds: u64) -> Result<u8, Error> {
    let mut all_ok = true;
    println!("family n k rounds bound ok");
    match family {
        "btw" => {
            for k in 1..=kmax {
                let dim = 4 * k + 3;
                for n in (k + 2)..=nmax {
                    for seed in 0..seeds {
                        let a = gen::gen_partial_ktree(n, k, 2 * seed)?;
                        let b = gen::gen_partial_ktree(n, k, 2 * seed + 1)?;
                        if gen::brute_force_iso_budget(&a.graph, &b.graph, 12)?.is_some() {
                            continue;
                        }
                        let round = wl::min_distinguishing_round(
                            &a.graph, &b.graph, dim, Variant::Counting,
                        )?;
                        let bound = 2.0 * (k as f64 + 1.0) * (n as f64).log2()
                            + 8.0 * k as f64 + 9.0;
                        let ok = round.is_some_and(|r| (r as f64) < bound);
                        all_ok &= ok;
                        println!(
                            "btw {n} {k} {} {bound:.2} {ok}",
                            round.map_or("inf".into(), |r| r.to_string())
                        );
                    }
                }
            }
        }
        "rotation" => {
            for n in 2..=nmax {
                for seed in 0..seeds {
                    let a = gen::gen_rotation(n, 2 * seed)?;
                    let b = gen::gen_rotation(n, 2 * seed + 1)?;
                    if a.iso_decide(&b)?.is_some() {
                        continue;
                    }
                    let round = wl::min_distinguishing_round_structures(
                        &RelStructure::from_rotation(&a),
                        &RelStructure::from_rotation(&b),
                        4,
                        Variant::CountFree,
                    )?;
                    let bound = 3.0 * (n as f64).log2() + 8.0;
                    let ok = round.is_some_and(|r| (r as f64) < bound);
                    all_ok &= ok;
                    println!(
                        "rotation {n} 4 {} {bound:.2} {ok}",
                        round.map_or("inf".into(), |r| r.to_string())
                    );
                }
            }
        }
        _ => unreachable!("clap restricts the family values"),
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn circuit_check(c: &circuit::CircuitDag) -> Result<(usize, usize), Error> {
    let (n, k, r, variant) = (c.meta.n, c.meta.k, c.meta.r, c.meta.variant);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut graphs = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        graphs.push(Graph::from_edges(n, &edges)?);
    }
    let mut checked = 0;
    let mut mismatches = 0;
    for g in &graphs {
        for h in &graphs {
            let verdict = c.evaluate(&c.bind_inputs(g, h)?)?;
            let direct = wl::run(g, h, k, variant, Some(r))?.decision == Decision::Isomorphic;
            checked += 1;
            if verdict != direct {
                mismatches += 1;
            }
        }
    }
    Ok((checked, mismatches))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e @ (Error::Parse(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(64)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(65)
        }
    }
}
