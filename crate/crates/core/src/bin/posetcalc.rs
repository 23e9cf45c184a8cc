use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use posetcalc::calculus::{divergence, gradient_on, integrate_injective, laplacian, Side};
use posetcalc::field::Fp;
use posetcalc::generators::{gen_grid, gen_ladder, LadderKind};
use posetcalc::grothendieck::{dimvec, iso_check, module_rank_invariant, IsoOptions, VirtualModule};
use posetcalc::io::{
    dimvec_to_json, module_from_json, module_on_from_json, module_to_json, poset_to_json, read_poset_file,
    report_dimvec_grid, verdict_to_json, write_poset_text,
};
use posetcalc::pairings::{cohomology, euler_chi, ext_dims, projective_resolution};
use posetcalc::{hom::hom_dim, line_components, line_connected_maximal_tree, Error, LineMap, Poset, PosetModule, Scalar, Q};

#[derive(Parser)]
#[command(name = "posetcalc", version, about = "Discrete calculus of modules over finite posets")]
struct Cli {
    /// q, or gfp:<p> for a compiled-in prime
    #[arg(long, global = true, env = "POSETCALC_FIELD", default_value = "q")]
    field: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 16)]
    trials: usize,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairKind {
    Hom,
    Euler,
}

#[derive(Clone, Copy, ValueEnum)]
enum LadderArg {
    Zigzag,
    DoubleZigzag,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a poset file or a module file
    Validate { file: PathBuf },
    /// The line poset
    Line { poset: PathBuf },
    /// Connected components of the line poset
    Components { poset: PathBuf },
    /// A maximal line-connected tree
    Maxtree { poset: PathBuf },
    /// ∇[M] = [φ*M] − [β*M]
    Grad { module: PathBuf },
    /// Left or right divergence of a module on the line poset of BASE
    Div {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        base: PathBuf,
        module: PathBuf,
    },
    /// Left or right Laplacian, Δ = div ∘ ∇
    Laplacian {
        #[arg(long, value_enum)]
        side: SideArg,
        module: PathBuf,
    },
    /// Hom or Euler pairing of two modules
    Pair {
        #[arg(long, value_enum, default_value = "hom")]
        kind: PairKind,
        left: PathBuf,
        right: PathBuf,
    },
    /// Rank of every relation x ≤ y
    Rank { module: PathBuf },
    /// Dimension vector
    Dimvec { module: PathBuf },
    /// Minimal projective resolution
    Resolve { module: PathBuf },
    /// dim Ext^i(M, N) for every i
    Ext { left: PathBuf, right: PathBuf },
    /// H^i(P; M), Ext^i from the constant module into M
    Cohomology { module: PathBuf },
    /// A module on a rooted tree whose gradient is the injective at cover u,v
    Integrate {
        #[arg(long)]
        edge: String,
        poset: PathBuf,
    },
    /// Decide whether two modules are isomorphic
    Iso { left: PathBuf, right: PathBuf },
    /// Random grids and ladder posets
    #[command(subcommand)]
    Gen(GenCmd),
    /// Dimension vector laid out as a grid; with --gradient, that of ∇[M]
    Report {
        #[arg(long)]
        gradient: bool,
        module: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "max-dim", default_value_t = 4)]
        max_dim: usize,
    },
    Ladder {
        #[arg(long)]
        n: usize,
        #[arg(long = "type", value_enum)]
        kind: LadderArg,
        /// BFBF… / BBFF… instead of FBFB… / FFBB…
        #[arg(long)]
        flipped: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 4,
        Error::Hypothesis(_) => 3,
        _ => 2,
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A module file; when `on` is given, the file's poset may be omitted and is otherwise checked against it.
fn load_module<F: Scalar>(path: &Path, on: Option<&Arc<Poset>>) -> Result<PosetModule<F>, Error> {
    let v = read_json(path)?;
    match on {
        Some(p) if v.get("poset").is_none() => module_on_from_json(p, &v),
        Some(p) => module_from_json::<F>(&v, path.parent())?.rebase(p),
        None => module_from_json(&v, path.parent()),
    }
}

fn load_poset(path: &Path) -> Result<Arc<Poset>, Error> {
    read_poset_file(path).map(Arc::new)
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn show_poset(p: &Poset, as_json: bool) -> String {
    if as_json {
        poset_to_json(p).to_string()
    } else {
        write_poset_text(p)
    }
}

fn labels(p: &Poset, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| p.label(x).to_string()).collect()
}

fn virtual_json<F: Scalar>(x: &VirtualModule<F>) -> Value {
    json!({
        "dimvec": dimvec_to_json(x.poset(), &dimvec(x)),
        "plus": x.plus.iter().map(module_to_json).collect::<Vec<_>>(),
        "minus": x.minus.iter().map(module_to_json).collect::<Vec<_>>(),
    })
}

fn show_virtual<F: Scalar>(x: &VirtualModule<F>, as_json: bool) -> String {
    if as_json {
        return virtual_json(x).to_string();
    }
    let mut s = String::new();
    for (l, v) in dimvec(x).labeled(x.poset()) {
        s.push_str(&format!("{l}: {v}\n"));
    }
    s
}

fn run<F: Scalar>(cli: &Cli) -> Result<String, Error> {
    let opts = IsoOptions { trials: cli.trials, seed: cli.seed, ..IsoOptions::default() };
    let j = cli.json;
    Ok(match &cli.cmd {
        Cmd::Validate { file } => {
            let v = read_json(file);
            match v {
                Ok(v) if v.get("dims").is_some() || v.get("maps").is_some() => {
                    let m: PosetModule<F> = module_from_json(&v, file.parent())?;
                    format!("ok: module over {} objects, total dimension {}\n", m.poset().len(), m.total_dim())
                }
                _ => {
                    let p = read_poset_file(file)?;
                    format!("ok: poset with {} objects and {} covers\n", p.len(), p.num_covers())
                }
            }
        }
        Cmd::Line { poset } => show_poset(&LineMap::new(&load_poset(poset)?).line, j),
        Cmd::Components { poset } => {
            let p = load_poset(poset)?;
            let l = LineMap::new(&p);
            let c = line_components(&p);
            let comps: Vec<Vec<String>> = c.components.iter().map(|c| labels(&l.line, c)).collect();
            let iso = labels(&p, &c.isolated);
            if j {
                json!({ "components": comps, "isolated": iso }).to_string()
            } else {
                let mut s: String = comps.iter().map(|c| format!("{}\n", c.join(" "))).collect();
                if !iso.is_empty() {
                    s.push_str(&format!("isolated: {}\n", iso.join(" ")));
                }
                s
            }
        }
        Cmd::Maxtree { poset } => {
            let t = line_connected_maximal_tree(&load_poset(poset)?)?;
            let e = t.edge_labels();
            if j {
                json!({ "edges": e }).to_string()
            } else {
                e.join("\n") + "\n"
            }
        }
        Cmd::Grad { module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            show_virtual(&gradient_on(&m, &LineMap::new(m.poset())).as_virtual(), j)
        }
        Cmd::Div { side: s, base, module } => {
            let l = LineMap::new(&load_poset(base)?);
            let n: PosetModule<F> = load_module(module, Some(&l.line))?;
            show_virtual(&divergence(&n, &l, side(*s))?, j)
        }
        Cmd::Laplacian { side: s, module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            let l = LineMap::new(m.poset());
            show_virtual(&laplacian(&VirtualModule::from_module(&m), &l, side(*s))?, j)
        }
        Cmd::Pair { kind, left, right } => {
            let m: PosetModule<F> = load_module(left, None)?;
            let n: PosetModule<F> = load_module(right, Some(m.poset()))?;
            let v = match kind {
                PairKind::Hom => hom_dim(&m, &n)? as i64,
                PairKind::Euler => euler_chi(&m, &n)?,
            };
            if j {
                json!({ "value": v }).to_string()
            } else {
                format!("{v}\n")
            }
        }
        Cmd::Rank { module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            let p = m.poset();
            let r = module_rank_invariant(&m);
            if j {
                let rows: Vec<Value> =
                    r.0.iter().map(|(&(x, y), &v)| json!({ "x": p.label(x), "y": p.label(y), "rank": v })).collect();
                Value::Array(rows).to_string()
            } else {
                r.0.iter().map(|(&(x, y), v)| format!("{} <= {}: {v}\n", p.label(x), p.label(y))).collect()
            }
        }
        Cmd::Dimvec { module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            show_virtual(&VirtualModule::from_module(&m), j)
        }
        Cmd::Resolve { module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            let p = m.poset();
            let r = projective_resolution(&m);
            let terms: Vec<Vec<String>> = r.gens.iter().map(|g| labels(p, g)).collect();
            if j {
                json!({ "terms": terms, "exact": r.verify_exact(&m) }).to_string()
            } else {
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let parts: Vec<String> = t.iter().map(|l| format!("F[{l}]")).collect();
                        format!("P{i} = {}\n", parts.join(" + "))
                    })
                    .collect()
            }
        }
        Cmd::Ext { left, right } => {
            let m: PosetModule<F> = load_module(left, None)?;
            let n: PosetModule<F> = load_module(right, Some(m.poset()))?;
            dims_out(&ext_dims(&m, &n)?, j)
        }
        Cmd::Cohomology { module } => dims_out(&cohomology(&load_module::<F>(module, None)?)?, j),
        Cmd::Integrate { edge, poset } => {
            let p = load_poset(poset)?;
            let (u, v) = edge.split_once(',').ok_or_else(|| Error::Parse(format!("edge {edge:?} is not u,v")))?;
            let (u, v) = (p.require(u.trim())?, p.require(v.trim())?);
            let e = p.cover_id(u, v).ok_or_else(|| Error::Parse(format!("{edge:?} is not a cover")))?;
            let (m, _) = integrate_injective::<F>(&p, e, &opts)?;
            module_to_json(&m).to_string() + "\n"
        }
        Cmd::Iso { left, right } => {
            let m: PosetModule<F> = load_module(left, None)?;
            let n: PosetModule<F> = load_module(right, Some(m.poset()))?;
            let v = iso_check(&m, &n, &opts)?;
            if j {
                verdict_to_json(m.poset(), &v).to_string()
            } else {
                format!("{}\n", v.name())
            }
        }
        Cmd::Gen(GenCmd::Grid { m, n, max_dim }) => {
            if *m == 0 || *n == 0 {
                return Err(Error::Hypothesis("grid sides must be positive".into()));
            }
            module_to_json(&gen_grid::<F>(*m, *n, cli.seed, *max_dim)?).to_string() + "\n"
        }
        Cmd::Gen(GenCmd::Ladder { n, kind, flipped }) => {
            if *n < 2 {
                return Err(Error::Hypothesis("ladders need n ≥ 2".into()));
            }
            let k = match kind {
                LadderArg::Zigzag => LadderKind::Zigzag,
                LadderArg::DoubleZigzag => LadderKind::DoubleZigzag,
            };
            show_poset(&gen_ladder(*n, k, *flipped), j)
        }
        Cmd::Report { gradient, module } => {
            let m: PosetModule<F> = load_module(module, None)?;
            let r = if *gradient {
                let g = gradient_on(&m, &LineMap::new(m.poset()));
                report_dimvec_grid(&g.line.line, &dimvec(&g.as_virtual()))
            } else {
                report_dimvec_grid(m.poset(), &dimvec(&VirtualModule::from_module(&m)))
            };
            if j {
                r.json.to_string()
            } else {
                r.text
            }
        }
    })
}

fn dims_out(d: &[usize], as_json: bool) -> String {
    if as_json {
        json!(d).to_string()
    } else {
        d.iter().enumerate().map(|(i, v)| format!("{i}: {v}\n")).collect()
    }
}

macro_rules! dispatch_prime {
    ($cli:expr, $p:expr, [$($q:literal),*]) => {
        match $p {
            $($q => run::<Fp<$q>>($cli),)*
            p => Err(Error::Parse(format!("unsupported prime {p}; available: {}", [$($q.to_string()),*].join(", ")))),
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.field.trim() {
        "q" | "Q" => run::<Q>(&cli),
        f => match f.strip_prefix("gfp:").and_then(|p| p.parse::<u64>().ok()) {
            Some(p) => dispatch_prime!(&cli, p, [2, 3, 5, 7, 11, 13, 101, 65537, 1000003, 2147483647]),
            None => Err(Error::Parse(format!("unknown field {f:?}"))),
        },
    };
    match out {
        Ok(s) => {
            print!("{s}");
            if !s.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
