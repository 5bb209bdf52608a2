//! Runs the solver binary over an instance directory, one process per
//! instance, and aggregates solved-over-time curves.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{parse_solution, read_instance_file};
use crate::portfolio::Ablation;
use crate::verify::is_vertex_cover;

/// One CSV row per (instance, ablation).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub ablation: String,
    pub solved: u8,
    pub phase: String,
    pub size: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub n_prime: Option<usize>,
    pub m_prime: Option<usize>,
    pub elapsed_s: f64,
    pub verified: u8,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Solver executable; invoked as `<exe> --input .. --output .. --stats-json ..`.
    pub exe: PathBuf,
    pub dir: PathBuf,
    pub ablation: Ablation,
    pub jobs: usize,
    pub out: PathBuf,
    pub time_limit: Duration,
    /// Extra slack before a run is killed.
    pub grace: Duration,
    pub seed: u64,
    pub test_mode: bool,
}

impl SuiteConfig {
    pub fn new(exe: PathBuf, dir: PathBuf, ablation: Ablation, out: PathBuf) -> Self {
        SuiteConfig {
            exe,
            dir,
            ablation,
            jobs: 1,
            out,
            time_limit: Duration::from_secs(1800),
            grace: Duration::from_secs(10),
            seed: 0,
            test_mode: false,
        }
    }
}

/// Instance files (`.gr`, `.gr.gz`, `.graph`) in `dir`, sorted by name.
pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            p.is_file() && (name.ends_with(".gr") || name.ends_with(".gr.gz") || name.ends_with(".graph"))
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn instance_name(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("?");
    name.trim_end_matches(".gz").trim_end_matches(".gr").trim_end_matches(".graph").to_string()
}

pub fn read_rows(path: &Path) -> Result<Vec<BenchRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Into::into)).collect()
}

#[derive(Deserialize)]
struct Stats {
    phase: String,
    n: usize,
    m: usize,
    n_prime: Option<usize>,
    m_prime: Option<usize>,
}

fn run_one(cfg: &SuiteConfig, path: &Path, scratch: &Path) -> BenchRow {
    let instance = instance_name(path);
    let sol = scratch.join(format!("{instance}.{}.sol", cfg.ablation));
    let stats = scratch.join(format!("{instance}.{}.json", cfg.ablation));
    let mut row = BenchRow {
        instance: instance.clone(),
        ablation: cfg.ablation.to_string(),
        solved: 0,
        phase: "Unsolved".into(),
        size: None,
        n: None,
        m: None,
        n_prime: None,
        m_prime: None,
        elapsed_s: 0.0,
        verified: 0,
        error: String::new(),
    };
    let mut cmd = Command::new(&cfg.exe);
    cmd.arg("--input")
        .arg(path)
        .arg("--output")
        .arg(&sol)
        .arg("--stats-json")
        .arg(&stats)
        .arg("--ablation")
        .arg(cfg.ablation.name())
        .arg("--seed")
        .arg(cfg.seed.to_string())
        .arg("--time-limit")
        .arg(format!("{}", cfg.time_limit.as_secs_f64()))
        .stdout(Stdio::null())
        .stderr(Stdio::piped());
    if cfg.test_mode {
        cmd.arg("--test-mode");
    }
    let start = Instant::now();
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            row.error = format!("spawn: {e}");
            return row;
        }
    };
    let kill_at = start + cfg.time_limit + cfg.grace;
    let status = loop {
        match child.try_wait() {
            Ok(Some(s)) => break Some(s),
            Ok(None) if Instant::now() >= kill_at => {
                child.kill().ok();
                child.wait().ok();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => {
                row.error = format!("wait: {e}");
                return row;
            }
        }
    };
    row.elapsed_s = start.elapsed().as_secs_f64();
    if let Ok(text) = std::fs::read_to_string(&stats) {
        if let Ok(s) = serde_json::from_str::<Stats>(&text) {
            row.phase = s.phase;
            row.n = Some(s.n);
            row.m = Some(s.m);
            row.n_prime = s.n_prime;
            row.m_prime = s.m_prime;
        }
    }
    match status.and_then(|s| s.code()) {
        None => row.error = "killed".into(),
        Some(2) => row.error = "timeout".into(),
        Some(0) => match verify_solution(path, &sol) {
            Ok(size) => {
                row.solved = 1;
                row.verified = 1;
                row.size = Some(size);
            }
            Err(e) => row.error = format!("verify: {e}"),
        },
        Some(code) => {
            let mut msg = String::new();
            if let Some(mut err) = child.stderr.take() {
                use std::io::Read;
                err.read_to_string(&mut msg).ok();
            }
            let first = msg.lines().next().unwrap_or("").trim();
            row.error = format!("exit {code}: {first}");
        }
    }
    std::fs::remove_file(&sol).ok();
    std::fs::remove_file(&stats).ok();
    row
}

/// Checks a solution file against its instance; returns the cover size.
pub fn verify_solution(instance: &Path, solution: &Path) -> Result<usize> {
    let inst = read_instance_file(instance)?;
    let (n, cover) = parse_solution(&std::fs::read_to_string(solution)?)?;
    if n != inst.header.n {
        return Err(crate::Error::Format(format!("solution is for n={n}, instance has n={}", inst.header.n)));
    }
    if !is_vertex_cover(&inst.graph, &cover) {
        return Err(crate::Error::Format("solution does not cover every edge".into()));
    }
    Ok(cover.len())
}

/// Runs every instance not already present in `cfg.out` for this ablation,
/// appending rows as they finish. Returns the rows run now.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<BenchRow>> {
    let done: HashSet<(String, String)> = if cfg.out.exists() {
        read_rows(&cfg.out)?.into_iter().map(|r| (r.instance, r.ablation)).collect()
    } else {
        HashSet::new()
    };
    let todo: Vec<PathBuf> = list_instances(&cfg.dir)?
        .into_iter()
        .filter(|p| !done.contains(&(instance_name(p), cfg.ablation.to_string())))
        .collect();
    let fresh = !cfg.out.exists() || std::fs::metadata(&cfg.out)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(&cfg.out)?;
    let writer = Mutex::new(csv::WriterBuilder::new().has_headers(fresh).from_writer(file));
    let scratch = std::env::temp_dir().join(format!("vcover-bench-{}", std::process::id()));
    std::fs::create_dir_all(&scratch)?;
    let queue = Mutex::new(todo.into_iter());
    let rows = Mutex::new(Vec::new());
    let failure: Mutex<Option<crate::Error>> = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.max(1) {
            s.spawn(|| loop {
                let Some(path) = queue.lock().unwrap().next() else { break };
                let row = run_one(cfg, &path, &scratch);
                log::info!("{} {}: solved={} {}", row.instance, row.ablation, row.solved, row.error);
                let mut w = writer.lock().unwrap();
                if let Err(e) = w.serialize(&row).and_then(|_| w.flush().map_err(Into::into)) {
                    failure.lock().unwrap().get_or_insert(e.into());
                }
                rows.lock().unwrap().push(row);
            });
        }
    });
    std::fs::remove_dir_all(&scratch).ok();
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut rows = rows.into_inner().unwrap();
    rows.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(rows)
}

/// One point of a solved-over-time curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub ablation: String,
    pub t: f64,
    pub solved: usize,
}

/// Logarithmic time grid from 10 ms, ten points per decade, up to the
/// first point not below `max_t`.
pub fn time_grid(max_t: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut k = -20i32;
    loop {
        let t = 10f64.powf(k as f64 / 10.0);
        grid.push(t);
        if t >= max_t {
            return grid;
        }
        k += 1;
    }
}

/// Per ablation, how many instances were solved within `t` seconds, on
/// a shared logarithmic grid.
pub fn solved_over_time(rows: &[BenchRow]) -> Vec<CurvePoint> {
    let max_t = rows.iter().map(|r| r.elapsed_s).fold(0.0, f64::max);
    let grid = time_grid(max_t);
    let mut ablations: Vec<&str> = rows.iter().map(|r| r.ablation.as_str()).collect();
    ablations.sort_unstable();
    ablations.dedup();
    let mut out = Vec::new();
    for a in ablations {
        let mut times: Vec<f64> =
            rows.iter().filter(|r| r.ablation == a && r.solved == 1).map(|r| r.elapsed_s).collect();
        times.sort_by(f64::total_cmp);
        for &t in &grid {
            let solved = times.partition_point(|&x| x <= t);
            out.push(CurvePoint { ablation: a.to_string(), t, solved });
        }
    }
    out
}

pub fn write_curve(path: &Path, curve: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    for p in curve {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}
