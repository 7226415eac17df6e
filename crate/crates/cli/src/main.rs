mod args;
mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use manifest::Manifest;

fn run_command(command: &Command, ctx: &mut Ctx) -> Result<()> {
    match command {
        Command::Generate(a) => commands::generate(ctx, a),
        Command::BuildGraph(a) => commands::build_graph(ctx, a),
        Command::Detect(a) => commands::detect_cmd(ctx, a),
        Command::Eval(a) => commands::eval(ctx, a),
        Command::Sweep(a) => commands::sweep(ctx, a),
        Command::BenchSbm(a) => commands::bench_sbm(ctx, a),
        Command::Expect(a) => commands::expect(ctx, a),
        Command::IngestMovielens(a) => commands::ingest(ctx, a),
        Command::Pipeline(a) => commands::pipeline(ctx, a),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<PathBuf> {
    let start = Instant::now();
    let (command, format, replayed_from) = match cli.command {
        Command::Replay(r) => {
            let m = Manifest::load(&r.manifest)?;
            (m.command, m.format, Some(r.manifest))
        }
        other => (other, cli.output.format, None),
    };
    let subcommand = if replayed_from.is_some() {
        "replay"
    } else {
        command.name()
    };
    let name = cli
        .output
        .name
        .unwrap_or_else(|| chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string());
    let dir = cli.output.out_root.join(subcommand).join(&name);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut ctx = Ctx::new(&dir, format);
    run_command(&command, &mut ctx)?;
    let run = ctx.finish();
    std::fs::write(dir.join("run.log"), &run.log)
        .with_context(|| format!("writing {}", dir.join("run.log").display()))?;
    Manifest {
        subcommand: command.name().to_string(),
        argv,
        command,
        format,
        seed: run.seed,
        inputs: run.inputs,
        outputs: run.outputs,
        output_dir: dir.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_secs: start.elapsed().as_secs_f64(),
        replayed_from,
    }
    .save(&dir)?;
    Ok(dir)
}

/// 2 for bad parameters, 1 for everything else (I/O, parse failures).
fn exit_code(err: &anyhow::Error) -> u8 {
    let bad_params = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<rankcat::Error>(),
            Some(rankcat::Error::InvalidConfig(_) | rankcat::Error::Unsupported(_))
        )
    });
    if bad_params {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(jobs) = cli.output.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("rankcat: warning: --jobs ignored: {e}");
        }
    }
    match execute(cli, argv) {
        Ok(dir) => {
            eprintln!("wrote {}", dir.join("manifest.json").display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rankcat: error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
