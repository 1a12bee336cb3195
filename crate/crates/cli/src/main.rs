//! Command-line surface for the `wreathlog` library: normalization, word
//! problem, discrete log, the `A_f -> G_f` embedding, the toy key exchange,
//! and the cost-separation benchmark.
//!
//! Exit codes: 0 for success (including "trivial" and solved discrete logs),
//! 1 for "nontrivial" / "no-solution", 2 for usage and parse errors.

use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wreathlog::afgroup::{self, DlpResult};
use wreathlog::bench;
use wreathlog::gfgroup;
use wreathlog::oracle::{self, FunctionOracle};
use wreathlog::protocol::{
    ActionInstantiation, Message, ProtocolError, Role, Session, SessionState,
};

#[derive(Parser)]
#[command(
    name = "wreathlog",
    version,
    about = "Word problem, discrete log, and key exchange in the groups A_f and G_f"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum WordKind {
    /// Words in the abelian group A_f (tokens a<i>, b<i>, a<i>^<e>, ...).
    A,
    /// Words in the two-generated group G_f (tokens F, s, F^<e>, s^<e>).
    G,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedFamily {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum StreamRole {
    Initiator,
    Responder,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the reduced / canonical form of a word.
    Normalize {
        kind: WordKind,
        word: String,
        #[arg(long, default_value = "succ")]
        oracle: String,
    },
    /// Decide whether a word represents the identity.
    Wp {
        kind: WordKind,
        word: String,
        #[arg(long, default_value = "succ")]
        oracle: String,
    },
    /// Solve base^x = target.
    Dlp {
        kind: WordKind,
        #[arg(long)]
        base: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "succ")]
        oracle: String,
    },
    /// Print the G-word image of a generator of A_f.
    Embed { family: EmbedFamily, index: u64 },
    /// Run the key-exchange protocol, in-process or on standard streams.
    Keyex {
        #[arg(long = "P")]
        p: Option<u64>,
        #[arg(long)]
        g0: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        key_a: Option<u64>,
        #[arg(long)]
        key_b: Option<u64>,
        /// Play one role over stdin/stdout instead of running both in-process.
        #[arg(long, value_enum)]
        stream: Option<StreamRole>,
        /// Private key for stream mode.
        #[arg(long)]
        key: Option<u64>,
    },
    /// Emit the word-problem vs discrete-log step-count CSV.
    Bench {
        #[arg(long, default_value = "succ")]
        oracle: String,
        /// Inclusive index range, e.g. --n 8 16.
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], required = true)]
        n: Vec<u64>,
    },
    /// Inspect the function-oracle registry.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// List the registered oracles.
    List,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Normalize { kind, word, oracle } => {
            let oracle = get_oracle(&oracle)?;
            let text = match kind {
                WordKind::A => {
                    let w = afgroup::parse_aword(&word).map_err(stringify)?;
                    let reduced = afgroup::reduce(&w, &oracle);
                    if reduced.is_empty() {
                        "1".to_string()
                    } else {
                        reduced.to_string()
                    }
                }
                WordKind::G => {
                    let w = gfgroup::parse_gword(&word).map_err(stringify)?;
                    gfgroup::canonicalize(&w).map_err(stringify)?.to_string()
                }
            };
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Wp { kind, word, oracle } => {
            let oracle = get_oracle(&oracle)?;
            let trivial = match kind {
                WordKind::A => {
                    afgroup::wp_a(&afgroup::parse_aword(&word).map_err(stringify)?, &oracle)
                }
                WordKind::G => {
                    gfgroup::wp_g(&gfgroup::parse_gword(&word).map_err(stringify)?, &oracle)
                        .map_err(stringify)?
                }
            };
            if trivial {
                println!("trivial");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("nontrivial");
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Dlp {
            kind,
            base,
            target,
            oracle,
        } => {
            let oracle = get_oracle(&oracle)?;
            let result = match kind {
                WordKind::A => {
                    let u = afgroup::parse_aword(&base).map_err(stringify)?;
                    let v = afgroup::parse_aword(&target).map_err(stringify)?;
                    afgroup::dlp_a(&u, &v, &oracle).map_err(stringify)?
                }
                WordKind::G => {
                    let g = gfgroup::canonicalize(&gfgroup::parse_gword(&base).map_err(stringify)?)
                        .map_err(stringify)?;
                    let h =
                        gfgroup::canonicalize(&gfgroup::parse_gword(&target).map_err(stringify)?)
                            .map_err(stringify)?;
                    gfgroup::dlp_g(&g, &h, &oracle).map_err(stringify)?
                }
            };
            match result {
                DlpResult::Unique(x) => {
                    println!("x={x}");
                    Ok(ExitCode::SUCCESS)
                }
                DlpResult::AllIntegers => {
                    println!("all-integers");
                    Ok(ExitCode::SUCCESS)
                }
                DlpResult::NoSolution => {
                    println!("no-solution");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Embed { family, index } => {
            let word = match family {
                EmbedFamily::A => gfgroup::embed_a(index),
                EmbedFamily::B => gfgroup::embed_b(index),
            }
            .map_err(stringify)?;
            println!("{word}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Keyex {
            p,
            g0,
            n,
            key_a,
            key_b,
            stream,
            key,
        } => match stream {
            None => {
                let (p, g0, n) = require_params(p, g0, n)?;
                let key_a = key_a.ok_or("keyex needs --key-a in in-process mode")?;
                let key_b = key_b.ok_or("keyex needs --key-b in in-process mode")?;
                let inst = ActionInstantiation::new(p, g0).map_err(stringify)?;
                let (shared_a, shared_b, transcript) =
                    wreathlog::protocol::run_exchange(&inst, n, key_a, key_b)
                        .map_err(stringify)?;
                for msg in &transcript {
                    println!("{}", msg.to_line());
                }
                debug_assert_eq!(shared_a, shared_b);
                println!("shared={shared_a}");
                Ok(ExitCode::SUCCESS)
            }
            Some(role) => {
                let key = key.ok_or("keyex --stream needs --key")?;
                let shared = match role {
                    StreamRole::Initiator => {
                        let (p, g0, n) = require_params(p, g0, n)?;
                        let inst = ActionInstantiation::new(p, g0).map_err(stringify)?;
                        stream_initiator(inst, n, key).map_err(stringify)?
                    }
                    StreamRole::Responder => stream_responder(key).map_err(stringify)?,
                };
                eprintln!("shared={shared}");
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Bench { oracle, n } => {
            let oracle = get_oracle(&oracle)?;
            let records = bench::bench_range(&oracle, n[0], n[1]).map_err(stringify)?;
            print!("{}", bench::to_csv(&records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { cmd: OracleCmd::List } => {
            for (name, desc) in oracle::registry_entries() {
                println!("{name:<18} {desc}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn get_oracle(spec: &str) -> Result<FunctionOracle, String> {
    oracle::parse_spec(spec).map_err(|e| format!("--oracle {spec}: {e}"))
}

fn require_params(
    p: Option<u64>,
    g0: Option<u64>,
    n: Option<u64>,
) -> Result<(u64, u64, u64), String> {
    Ok((
        p.ok_or("keyex needs --P")?,
        g0.ok_or("keyex needs --g0")?,
        n.ok_or("keyex needs --n")?,
    ))
}

fn stringify(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn write_line(msg: &Message) -> Result<(), ProtocolError> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", msg.to_line())
        .and_then(|()| out.flush())
        .map_err(|e| ProtocolError::Wire(format!("stdout: {e}")))
}

fn read_line() -> Result<Message, ProtocolError> {
    let mut line = String::new();
    std::io::stdin()
        .lock()
        .read_line(&mut line)
        .map_err(|e| ProtocolError::Wire(format!("stdin: {e}")))?;
    if line.is_empty() {
        return Err(ProtocolError::Wire("peer closed the stream".into()));
    }
    Message::parse_line(&line)
}

fn stream_initiator(inst: ActionInstantiation, n: u64, key: u64) -> Result<u64, ProtocolError> {
    let session = Session::initiator(inst, n, key)?;
    let (session, params) = session.step(None)?;
    write_line(&params.expect("initiator emits PARAMS"))?;
    let (session, share) = session.step(None)?;
    write_line(&share.expect("initiator emits its share"))?;
    let peer = read_line()?;
    let (session, _) = session.step(Some(&peer))?;
    finish(session)
}

fn stream_responder(key: u64) -> Result<u64, ProtocolError> {
    let session = Session::responder(key);
    let params = read_line()?;
    let (session, share) = session.step(Some(&params))?;
    write_line(&share.expect("responder answers PARAMS with its share"))?;
    let peer = read_line()?;
    let (session, _) = session.step(Some(&peer))?;
    finish(session)
}

fn finish(session: Session) -> Result<u64, ProtocolError> {
    debug_assert_eq!(session.state(), SessionState::Completed);
    debug_assert!(matches!(
        session.role(),
        Role::Initiator | Role::Responder
    ));
    session
        .shared_index()
        .ok_or_else(|| ProtocolError::OutOfOrder("exchange did not complete".into()))
}
