//! Command-line front end.
//!
//! Exit codes: 0 when the relation holds or the command succeeded, 1 when the
//! relation fails (a certificate is printed or written), 2 on usage or input
//! errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::channel::{chan_majorizes, chan_payoff, ChanVerdict};
use crate::conditional::{cond_majorizes, cond_payoff, CondVerdict};
use crate::entropy::{channel_entropy, shannon};
use crate::error::{Error, Result};
use crate::io::{parse_object, parse_proof, proof_to_json, GameMatrix, Object, Proof, ProofFile};
use crate::majorization::{game_payoff, ky_fan, majorization_violation};
use crate::sim::{chan_game_win_probability, simulate_chan_game, simulate_cond_game, simulate_dice_game, SimConfig};
use crate::{Rat, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "chance-order",
    version,
    about = "Decide majorization pre-orders between dice, correlated sources and channels"
)]
struct Cli {
    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does dice A majorize dice B?
    CheckMaj { a: PathBuf, b: PathBuf },
    /// Is joint Q conditionally majorized by joint P?
    CheckCmaj {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Is channel M majorized by channel N?
    CheckChmaj {
        m: PathBuf,
        n: PathBuf,
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Channel entropy in bits (Shannon entropy for dice).
    Entropy { n: PathBuf },
    /// Optimal exact payoff of a game.
    Payoff {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        game: PathBuf,
    },
    /// Monte-Carlo estimate of a game payoff.
    Simulate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Decimal or 0x-prefixed hexadecimal.
        #[arg(long, value_parser = parse_seed, default_value = "0")]
        seed: u64,
    },
    /// Re-check a proof file against the two objects it was issued for.
    VerifyProof { proof: PathBuf, a: PathBuf, b: PathBuf },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    #[arg(long)]
    dice: Option<PathBuf>,
    #[arg(long)]
    joint: Option<PathBuf>,
    #[arg(long)]
    channel: Option<PathBuf>,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn load(path: &Path, kind: &str) -> Result<Object> {
    let obj = parse_object(path)?;
    if obj.kind() != kind {
        return Err(Error::Parse(format!("{}: expected kind {kind:?}, found {:?}", path.display(), obj.kind())));
    }
    Ok(obj)
}

fn load_game(path: &Path) -> Result<GameMatrix> {
    match load(path, "game")? {
        Object::Game(g) => Ok(g),
        _ => unreachable!("kind checked"),
    }
}

fn load_target(target: &Target) -> Result<Object> {
    match (&target.dice, &target.joint, &target.channel) {
        (Some(p), _, _) => load(p, "dice"),
        (_, Some(p), _) => load(p, "joint"),
        (_, _, Some(p)) => load(p, "channel"),
        _ => Err(Error::Parse("one of --dice, --joint or --channel is required".into())),
    }
}

fn write_proof(path: &Path, proof: &ProofFile) -> Result<()> {
    std::fs::write(path, proof_to_json(proof) + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn rat(x: &Rat) -> String {
    x.to_string()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn emit(&mut self, human: &str, machine: serde_json::Value) {
        let text = if self.json { serde_json::to_string_pretty(&machine).expect("plain JSON") } else { human.into() };
        // a closed stdout is not worth a panic
        let _ = writeln!(self.out, "{text}");
    }
}

fn check_maj(io: &mut Io, a: &Path, b: &Path) -> Result<i32> {
    let (Object::Dice(p), Object::Dice(q)) = (load(a, "dice")?, load(b, "dice")?) else { unreachable!() };
    let d = p.dim().max(q.dim());
    let kf = |v| (1..=d).map(|w| ky_fan(v, w).map(|x| rat(&x))).collect::<Result<Vec<_>>>();
    let (ka, kb) = (kf(&p)?, kf(&q)?);
    let violation = majorization_violation(&p, &q);
    let mut human = format!("ky-fan A: {}\nky-fan B: {}\n", ka.join(" "), kb.join(" "));
    match violation {
        None => human.push_str("A majorizes B"),
        Some(w) => human.push_str(&format!(
            "A does not majorize B: B wins the w={w} game with probability {} against {} for A",
            kb[w - 1],
            ka[w - 1]
        )),
    }
    io.emit(
        &human,
        json!({"relation": "majorization", "holds": violation.is_none(), "violating_w": violation, "ky_fan_a": ka, "ky_fan_b": kb}),
    );
    Ok(i32::from(violation.is_some()))
}

fn check_cmaj(io: &mut Io, p: &Path, q: &Path, out: Option<&Path>) -> Result<i32> {
    let (Object::Joint(pj), Object::Joint(qj)) = (load(p, "joint")?, load(q, "joint")?) else { unreachable!() };
    let verdict = cond_majorizes(&pj, &qj)?;
    let holds = verdict.holds();
    let (human, proof) = match verdict {
        CondVerdict::Holds(w) => {
            let verified = w.verify(&pj, &qj);
            (
                format!("Q is conditionally majorized by P ({} relabeling terms)", w.terms.len()),
                Proof::CondWitness(w).to_file(verified),
            )
        }
        CondVerdict::Fails(g) => {
            let verified = g.verify(&pj, &qj);
            let text = format!(
                "Q is not conditionally majorized by P: a game pays {} for Q against {} for P",
                rat(&g.payoff_q),
                rat(&g.payoff_p)
            );
            (text, Proof::CondGame(g).to_file(verified))
        }
    };
    if let Some(path) = out {
        write_proof(path, &proof)?;
    }
    io.emit(&human, json!({"relation": "conditional", "holds": holds, "proof": proof}));
    Ok(i32::from(!holds))
}

fn check_chmaj(io: &mut Io, m: &Path, n: &Path, out: Option<&Path>) -> Result<i32> {
    let (Object::Channel(mc), Object::Channel(nc)) = (load(m, "channel")?, load(n, "channel")?) else { unreachable!() };
    let verdict = chan_majorizes(&mc, &nc)?;
    let holds = verdict.holds();
    let (human, proof) = match verdict {
        ChanVerdict::Holds(w) => {
            let verified = w.verify(&mc, &nc);
            (
                format!("M is majorized by N ({} simulation terms)", w.terms.len()),
                Proof::ChanWitness(w).to_file(verified),
            )
        }
        ChanVerdict::Fails(g) => {
            let verified = g.verify(&mc, &nc);
            let mut text = format!(
                "M is not majorized by N: a game pays {} for M against {} for N",
                rat(&g.payoff_weaker),
                rat(&g.payoff_stronger)
            );
            if let Some(z) = g.violating_column(&mc, &nc) {
                text.push_str(&format!("; column {z} alone already separates them"));
            }
            (text, Proof::ChanGame(g).to_file(verified))
        }
    };
    if let Some(path) = out {
        write_proof(path, &proof)?;
    }
    io.emit(&human, json!({"relation": "channel", "holds": holds, "proof": proof}));
    Ok(i32::from(!holds))
}

fn entropy(io: &mut Io, path: &Path) -> Result<i32> {
    match parse_object(path)? {
        Object::Channel(c) => {
            let h = channel_entropy(&c);
            io.emit(
                &format!("{}, minimizing input {}", h.value, h.minimizing_input),
                json!({"bits": h.value.bits(), "minimizing_input": h.minimizing_input}),
            );
        }
        Object::Dice(p) => {
            let h = shannon(&p);
            io.emit(&h.to_string(), json!({"bits": h.bits()}));
        }
        other => return Err(Error::Parse(format!("entropy needs a channel or dice, found {:?}", other.kind()))),
    }
    Ok(0)
}

fn payoff(io: &mut Io, target: &Target, game: &Path) -> Result<i32> {
    let t = load_game(game)?;
    let (value, strategy) = match load_target(target)? {
        Object::Dice(p) => (game_payoff(&p, &t.vector()?), None),
        Object::Joint(j) => {
            let r = cond_payoff(&j, &t.cond());
            (r.value, Some(r.strategy))
        }
        Object::Channel(c) => {
            let r = chan_payoff(&c, &t.chan());
            (r.value, Some(r.strategy))
        }
        Object::Game(_) => unreachable!("kind checked"),
    };
    let mut human = format!("payoff {}", rat(&value));
    if let Some(s) = &strategy {
        let s: Vec<String> = s.iter().map(usize::to_string).collect();
        human.push_str(&format!("\nstrategy {}", s.join(" ")));
    }
    io.emit(&human, json!({"payoff": rat(&value), "approx": value.to_f64_lossy(), "strategy": strategy}));
    Ok(0)
}

fn simulate(io: &mut Io, target: &Target, game: &Path, trials: u64, seed: u64) -> Result<i32> {
    let t = load_game(game)?;
    let cfg = SimConfig::new(trials, seed)?;
    let (res, analytic) = match load_target(target)? {
        Object::Dice(p) => {
            let v = t.vector()?;
            (simulate_dice_game(&p, &v, &cfg), game_payoff(&p, &v))
        }
        Object::Joint(j) => {
            let g = t.cond();
            (simulate_cond_game(&j, &g, &cfg), cond_payoff(&j, &g).value)
        }
        Object::Channel(c) => {
            let g = t.chan();
            (simulate_chan_game(&c, &g, &cfg), chan_game_win_probability(&c, &g))
        }
        Object::Game(_) => unreachable!("kind checked"),
    };
    let target_f64 = analytic.to_f64_lossy();
    io.emit(
        &format!(
            "estimate {:.6} ± {:.6} ({}/{} wins), analytic {} ({:.2} standard errors away)",
            res.estimate,
            res.std_error,
            res.wins,
            res.trials,
            rat(&analytic),
            res.z_score(target_f64)
        ),
        json!({"result": res, "analytic": rat(&analytic), "seed": seed}),
    );
    Ok(0)
}

fn verify_proof(io: &mut Io, proof: &Path, a: &Path, b: &Path) -> Result<i32> {
    let file = parse_proof(proof)?;
    let parsed = Proof::from_file(&file)?;
    let valid = parsed.verify(&parse_object(a)?, &parse_object(b)?)?;
    let human = if valid { "proof valid" } else { "proof invalid" };
    io.emit(human, json!({"valid": valid, "kind": file.kind, "relation": file.relation}));
    Ok(i32::from(!valid))
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, json: cli.json };
    let outcome = match &cli.command {
        Command::CheckMaj { a, b } => check_maj(&mut io, a, b),
        Command::CheckCmaj { p, q, proof } => check_cmaj(&mut io, p, q, proof.as_deref()),
        Command::CheckChmaj { m, n, proof } => check_chmaj(&mut io, m, n, proof.as_deref()),
        Command::Entropy { n } => entropy(&mut io, n),
        Command::Payoff { target, game } => payoff(&mut io, target, game),
        Command::Simulate { target, game, trials, seed } => simulate(&mut io, target, game, *trials, *seed),
        Command::VerifyProof { proof, a, b } => verify_proof(&mut io, proof, a, b),
    };
    outcome.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        2
    })
}

/// Entry point used by the binary.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
