//! The four commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tevo_core::{
    evolve, evolve_with, predicted_dimension, roundoff_estimate, Complex64, EvolutionResult,
    ExampleParams, ExampleSystem, SparseHermitian, StateVector, UNIT_ROUNDOFF,
};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{csv_header, csv_row, write_state_dump};

/// Runs the configured command; standard output receives the command's
/// primary output and `diag` all diagnostics.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Evolve => run_evolve(cfg, out, diag),
        Command::Roundtrip => run_roundtrip(cfg, out, diag),
        Command::Dims => run_dims(cfg, out),
        Command::Selftest => run_selftest(cfg, out, diag),
    }
}

fn report<S>(
    diag: &mut dyn Write,
    label: &str,
    r: &EvolutionResult<S>,
    secs: f64,
) -> io::Result<()> {
    for w in &r.warnings {
        writeln!(diag, "WARNING: {w}")?;
    }
    writeln!(
        diag,
        "{label}: accumulated_bound = {:e}, roundoff_estimate = {:e}, steps = {}, wall_time = {secs:.3} s",
        r.accumulated_bound,
        r.roundoff_est,
        r.steps.len()
    )
}

/// Evolution result without calling the evolver, for `t_total = 0`.
fn unevolved<S>(
    h: &SparseHermitian,
    v: &StateVector,
    samples: Vec<(f64, S)>,
) -> EvolutionResult<S> {
    EvolutionResult {
        final_state: v.clone(),
        samples,
        steps: Vec::new(),
        accumulated_bound: 0.0,
        roundoff_est: roundoff_estimate(h.dim(), h.one_norm(), UNIT_ROUNDOFF),
        warnings: Vec::new(),
    }
}

fn propagate(cfg: &RunConfig, h: &SparseHermitian, v: &StateVector) -> Result<EvolutionResult> {
    if cfg.t_total == 0.0 {
        return Ok(unevolved(h, v, Vec::new()));
    }
    let mut ec = cfg.evolver_config();
    ec.sample_step = 0.0;
    Ok(evolve(h, v, &ec)?)
}

pub fn run_evolve(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let sys = ExampleSystem::build(cfg.params.clone())?;
    let v0 = sys.initial_state()?;
    let start = Instant::now();
    let row = |t: f64, v: &StateVector| csv_row(t, v, &sys.basis);

    let result = if cfg.t_total == 0.0 {
        unevolved(&sys.hamiltonian, &v0, vec![(0.0, row(0.0, &v0))])
    } else {
        evolve_with(&sys.hamiltonian, &v0, &cfg.evolver_config(), row)?
    };
    let secs = start.elapsed().as_secs_f64();

    let mut rows = result
        .samples
        .iter()
        .map(|(_, r)| r.clone())
        .collect::<tevo_core::Result<Vec<_>>>()?;
    // Without sampling, record the initial and final states.
    if cfg.sample_step == 0.0 {
        rows.push(row(0.0, &v0)?);
        if cfg.t_total > 0.0 {
            rows.push(row(cfg.t_total, &result.final_state)?);
        }
    }

    let mut sink: Box<dyn Write + '_> = match &cfg.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(out)),
    };
    writeln!(sink, "{}", csv_header(&cfg.params))?;
    for r in rows {
        writeln!(sink, "{r}")?;
    }
    sink.flush()?;
    drop(sink);

    if let Some(path) = &cfg.dump_state_path {
        write_state_dump(BufWriter::new(File::create(path)?), &result.final_state)?;
    }
    report(diag, "evolve", &result, secs)?;
    Ok(())
}

/// Forward by `t_total`, backward with `−H`, and the distance to the start.
fn roundtrip(
    cfg: &RunConfig,
    h: &SparseHermitian,
    v0: &StateVector,
    diag: &mut dyn Write,
) -> Result<(f64, f64)> {
    let start = Instant::now();
    let forward = propagate(cfg, h, v0)?;
    report(diag, "forward", &forward, start.elapsed().as_secs_f64())?;
    let start = Instant::now();
    let backward = propagate(cfg, &h.negated(), &forward.final_state)?;
    report(diag, "backward", &backward, start.elapsed().as_secs_f64())?;
    Ok((backward.final_state.distance(v0)?, forward.roundoff_est))
}

fn verdict(out: &mut dyn Write, label: &str, err: f64, limit: f64) -> Result<()> {
    let pass = err <= limit;
    writeln!(
        out,
        "{label} error = {err:e} (limit {limit:e}) {}",
        if pass { "PASS" } else { "FAIL" }
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{label} error {err:e} exceeds {limit:e}"
        )))
    }
}

pub fn run_roundtrip(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let sys = ExampleSystem::build(cfg.params.clone())?;
    let v0 = sys.initial_state()?;
    let (err, _) = roundtrip(cfg, &sys.hamiltonian, &v0, diag)?;
    verdict(out, "roundtrip", err, 2.0 * cfg.err_max)
}

/// Dimension of the random matrix used by `selftest`.
pub const SELFTEST_DIM: usize = 64;

/// Deterministic random sparse Hermitian matrix and unit start vector.
pub fn selftest_problem(dim: usize, seed: u64) -> (SparseHermitian, StateVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = std::collections::BTreeMap::new();
    for i in 0..dim {
        entries.insert((i, i), Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for _ in 0..3 {
            let j = rng.gen_range(0..dim);
            if j != i {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                entries.insert((i, j), z);
                entries.insert((j, i), z.conj());
            }
        }
    }
    let h = SparseHermitian::from_triplets(dim, entries.into_iter().map(|((i, j), z)| (i, j, z)))
        .expect("symmetric construction is Hermitian");
    let mut v: StateVector = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    v.scale_real(1.0 / v.norm2());
    (h, v)
}

pub fn run_selftest(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let (h, v0) = selftest_problem(SELFTEST_DIM, 0x5E1F);
    let (err, roundoff) = roundtrip(cfg, &h, &v0, diag)?;
    verdict(
        out,
        "selftest roundtrip",
        err,
        2.0 * cfg.err_max + 20.0 * roundoff,
    )
}

/// Bytes needed for a matrix with `nnz` entries, `m + 1` Krylov vectors and
/// the enumerated basis.
pub fn predicted_memory(dim: usize, nnz: usize, m: usize, modes: usize) -> (u128, u128, u128) {
    let (d, nnz) = (dim as u128, nnz as u128);
    let word = std::mem::size_of::<usize>() as u128;
    let complex = std::mem::size_of::<Complex64>() as u128;
    let matrix = (d + 1) * word + nnz * (word + complex);
    let krylov = (m as u128 + 2) * d * complex;
    let basis = d * modes as u128 * 4;
    (matrix, krylov, basis)
}

fn mib(bytes: u128) -> f64 {
    bytes as f64 / (1024.0 * 1024.0)
}

/// Largest number of stored entries in any column of the model matrix: the
/// diagonal, up to two bosonic hops and one entry per move of an occupied
/// qubit to an empty one (every qubit pair is coupled).
pub fn max_entries_per_column(p: &ExampleParams) -> usize {
    let bosonic = if p.c0 == 0.0 { 0 } else { p.n0.min(2) as usize };
    let nm = p.nm as usize;
    let qubit = if p.cm == 0.0 {
        0
    } else {
        nm * (p.k + p.k1).saturating_sub(nm)
    };
    1 + bosonic + qubit
}

pub fn run_dims(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let p = &cfg.params;
    let dim = predicted_dimension(&p.sectors())?;
    let per_column = max_entries_per_column(p).min(dim);
    let nnz = dim.saturating_mul(per_column);
    let (matrix, krylov, basis) = predicted_memory(dim, nnz, cfg.m, p.mode_count());
    writeln!(out, "dimension = {dim}")?;
    writeln!(out, "max_entries_per_column = {per_column}")?;
    writeln!(
        out,
        "predicted_memory_mib: matrix <= {:.1}, krylov = {:.1}, basis = {:.1}, total <= {:.1}",
        mib(matrix),
        mib(krylov),
        mib(basis),
        mib(matrix + krylov + basis)
    )?;
    Ok(())
}
