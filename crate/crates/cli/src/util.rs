//! Shared plumbing: usage-error type (exit code 2), deterministic CSV
//! writing, and a small indexed worker pool.

use std::fmt;
use std::path::Path;

/// Configuration or input error: reported with exit code 2, as
/// opposed to a scientific check failing (exit code 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Fixed-width scientific float formatting so equal values always
/// serialize to equal bytes.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

/// Write a CSV file with a header row and LF line endings.
pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> anyhow::Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    Ok(())
}

pub fn linspace(range: [f64; 2], n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![range[0]];
    }
    (0..n)
        .map(|k| range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let xm = lx.iter().sum::<f64>() / n;
    let ym = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let var: f64 = lx.iter().map(|x| (x - xm) * (x - xm)).sum();
    cov / var
}

/// Map `f` over 0..n on up to `workers` threads; the output order is
/// by index, so results are independent of scheduling.
pub fn parallel_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let mut indexed: Vec<(usize, T)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, f(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, v)| v).collect()
}
