//! Background rule mining. Jobs run in submission order on a fixed number of
//! workers; state only moves queued → running → done | failed.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use fairdoc::boolpoly::TermOrder;
use fairdoc::rulemine::{export_rules_json, mine_rules, Dataset, RuleSet};
use serde::Serialize;
use tokio::sync::mpsc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
}

impl JobState {
    fn is_final(self) -> bool {
        matches!(self, JobState::Done | JobState::Failed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisJob {
    pub job_id: String,
    pub state: JobState,
    pub file_name: String,
    pub dataset_digest: String,
    pub order: TermOrder,
    pub row_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub result: Option<Arc<Finished>>,
}

/// A done job's rules and their canonical JSON.
#[derive(Debug)]
pub struct Finished {
    pub rules: RuleSet,
    pub json: Vec<u8>,
}

struct Ticket {
    id: String,
    dataset: Dataset,
    order: TermOrder,
}

#[derive(Default)]
struct Table {
    jobs: HashMap<String, AnalysisJob>,
    /// Submission order, for retention.
    order: VecDeque<String>,
}

struct Shared {
    table: Mutex<Table>,
    retention: usize,
}

impl Shared {
    fn with<T>(&self, f: impl FnOnce(&mut Table) -> T) -> T {
        f(&mut self.table.lock().expect("job table"))
    }

    fn start(&self, id: &str) -> bool {
        self.with(|t| match t.jobs.get_mut(id) {
            Some(j) if j.state == JobState::Queued => {
                j.state = JobState::Running;
                true
            }
            _ => false,
        })
    }

    fn finish(&self, id: &str, outcome: Result<RuleSet, String>) {
        self.with(|t| {
            let Some(j) = t.jobs.get_mut(id) else { return };
            if j.state != JobState::Running {
                return;
            }
            match outcome {
                Ok(rules) => {
                    j.rule_count = Some(rules.rules.len());
                    let json = export_rules_json(&rules);
                    j.result = Some(Arc::new(Finished { rules, json }));
                    j.state = JobState::Done;
                }
                Err(e) => {
                    j.error = Some(e);
                    j.state = JobState::Failed;
                }
            }
            prune(t, self.retention);
        });
    }
}

fn prune(t: &mut Table, retention: usize) {
    let mut finished = t.order.iter().filter(|id| t.jobs[*id].state.is_final()).count();
    let mut keep = VecDeque::with_capacity(t.order.len());
    while let Some(id) = t.order.pop_front() {
        if finished > retention && t.jobs[&id].state.is_final() {
            t.jobs.remove(&id);
            finished -= 1;
        } else {
            keep.push_back(id);
        }
    }
    t.order = keep;
}

#[derive(Clone)]
pub struct JobQueue {
    shared: Arc<Shared>,
    tx: mpsc::UnboundedSender<Ticket>,
}

impl JobQueue {
    /// Spawns `workers` tasks on the current tokio runtime.
    pub fn new(workers: usize, retention: usize) -> Self {
        let shared = Arc::new(Shared { table: Mutex::new(Table::default()), retention });
        let (tx, rx) = mpsc::unbounded_channel::<Ticket>();
        let rx = Arc::new(tokio::sync::Mutex::new(rx));
        for _ in 0..workers.max(1) {
            let (shared, rx) = (shared.clone(), rx.clone());
            tokio::spawn(async move {
                loop {
                    let Some(ticket) = rx.lock().await.recv().await else { break };
                    if !shared.start(&ticket.id) {
                        continue;
                    }
                    let Ticket { id, dataset, order } = ticket;
                    let outcome = tokio::task::spawn_blocking(move || mine_rules(&dataset, order))
                        .await
                        .map_err(|e| format!("worker crashed: {e}"))
                        .and_then(|r| r.map_err(|e| e.to_string()));
                    shared.finish(&id, outcome);
                }
            });
        }
        Self { shared, tx }
    }

    pub fn submit(&self, dataset: Dataset, order: TermOrder, file_name: &str) -> AnalysisJob {
        let job = AnalysisJob {
            job_id: uuid::Uuid::new_v4().to_string(),
            state: JobState::Queued,
            file_name: file_name.to_string(),
            dataset_digest: dataset.content_digest(),
            order,
            row_count: dataset.rows().len(),
            rule_count: None,
            error: None,
            result: None,
        };
        self.shared.with(|t| {
            t.jobs.insert(job.job_id.clone(), job.clone());
            t.order.push_back(job.job_id.clone());
        });
        if self.tx.send(Ticket { id: job.job_id.clone(), dataset, order }).is_err() {
            self.shared.with(|t| {
                if let Some(j) = t.jobs.get_mut(&job.job_id) {
                    j.state = JobState::Failed;
                    j.error = Some("aborted".into());
                }
            });
        }
        job
    }

    pub fn get(&self, id: &str) -> Option<AnalysisJob> {
        self.shared.with(|t| t.jobs.get(id).cloned())
    }

    pub fn len(&self) -> usize {
        self.shared.with(|t| t.jobs.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fails every job that has not finished; used on shutdown.
    pub fn abort_all(&self) -> usize {
        self.shared.with(|t| {
            let mut n = 0;
            for j in t.jobs.values_mut().filter(|j| !j.state.is_final()) {
                j.state = JobState::Failed;
                j.error = Some("aborted".into());
                n += 1;
            }
            n
        })
    }
}
