use std::time::{Duration, Instant};

use qdep::resdep::WalkStats;
use serde::Serialize;

/// Per-phase wall time in seconds. Graph and walk times are summed over
/// worker threads, so with `--jobs` they can exceed `total`.
#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub parse: Option<f64>,
    pub transform: Option<f64>,
    pub graph: Option<f64>,
    pub walk: Option<f64>,
    pub total: f64,
}

#[derive(Debug, Default, Serialize)]
pub struct Counts {
    pub walks: usize,
    /// Largest connection graph walked.
    pub vertices: usize,
    pub edges: usize,
    /// Queue insertions over all walks. Each walk inserts at most twice
    /// per edge of its graph.
    pub queue_pushes: usize,
    pub pairs: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub input_digest: Option<String>,
    pub timings: Timings,
    pub counts: Counts,
    #[serde(skip)]
    started: Instant,
}

impl RunReport {
    pub fn start(command: &'static str) -> RunReport {
        RunReport {
            command,
            input_digest: None,
            timings: Timings::default(),
            counts: Counts::default(),
            started: Instant::now(),
        }
    }

    pub fn walks(&mut self, stats: &WalkStats) {
        let add = |slot: &mut Option<f64>, d: Duration| *slot = Some(slot.unwrap_or(0.0) + d.as_secs_f64());
        add(&mut self.timings.graph, stats.graph_time);
        add(&mut self.timings.walk, stats.walk_time);
        self.counts.walks += stats.walks;
        self.counts.vertices = self.counts.vertices.max(stats.vertices);
        self.counts.edges = self.counts.edges.max(stats.edges);
        self.counts.queue_pushes += stats.queue_pushes;
    }

    pub fn finish(&mut self) {
        self.timings.total = self.started.elapsed().as_secs_f64();
    }
}
