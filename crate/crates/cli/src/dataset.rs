//! Clickstream ingestion: items and events as JSONL, reduced to one
//! evaluation case per purchasing user.
//!
//! A case is the user's last purchase, the distinct items they viewed
//! strictly before it (the purchased item itself excluded), and a recall
//! set of the purchased item plus same-category distractors. Malformed
//! lines are counted and skipped; producing zero cases is fatal.
//!
//! Session boundaries are taken as given: `session_id` is carried but
//! never recomputed from timestamps.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::AppError;

/// One catalog item. `category` scopes recall-set sampling.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Item {
    pub item_id: String,
    pub title: String,
    pub category: String,
}

/// One clickstream event.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Event {
    pub user_id: String,
    /// Epoch seconds.
    pub ts: i64,
    #[serde(rename = "type")]
    pub kind: EventKind,
    pub item_id: String,
    /// Opaque; sessionization happens upstream.
    pub session_id: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    View,
    Purchase,
}

/// One evaluation case: what the user viewed, what they bought, and the
/// candidate set to rank. All item references index into `Dataset::items`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalCase {
    pub user_id: String,
    /// Distinct viewed items, first-view order. Never contains `purchased`.
    pub history: Vec<u32>,
    pub purchased: u32,
    /// The purchased item plus same-category distractors; contains
    /// `purchased` exactly once.
    pub candidates: Vec<u32>,
}

/// Items plus the evaluation cases extracted from the events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub items: Vec<Item>,
    pub cases: Vec<EvalCase>,
    /// Malformed or unresolvable input lines that were skipped.
    pub skipped_lines: u64,
}

impl Dataset {
    pub fn item(&self, index: u32) -> &Item {
        &self.items[index as usize]
    }

    /// Mean candidate-set size; the experiment's M.
    pub fn mean_m(&self) -> f64 {
        if self.cases.is_empty() {
            return 0.0;
        }
        let total: usize = self.cases.iter().map(|c| c.candidates.len()).sum();
        total as f64 / self.cases.len() as f64
    }

    /// Median history length; the experiment's N.
    pub fn median_n(&self) -> usize {
        if self.cases.is_empty() {
            return 0;
        }
        let mut ns: Vec<usize> = self.cases.iter().map(|c| c.history.len()).collect();
        ns.sort_unstable();
        ns[ns.len() / 2]
    }
}

struct UserTrack {
    /// (ts, item index) per view, input order preserved within equal ts.
    views: Vec<(i64, u32)>,
    /// Latest purchase seen: (ts, input order, item index).
    purchase: Option<(i64, u64, u32)>,
}

/// Loads items and events files and assembles evaluation cases.
///
/// Rules: one case per user, keyed to their latest purchase (ties on `ts`
/// resolved by input order); history is the distinct items viewed strictly
/// before that purchase, minus the purchased item; users with an empty
/// history produce no case. Distractors are drawn without replacement from
/// the purchased item's category (up to `distractors`; fewer if the
/// category is small), seeded so reruns sample identical recall sets.
pub fn load_dataset(
    items_path: &Path,
    events_path: &Path,
    distractors: usize,
    seed: u64,
) -> Result<Dataset, AppError> {
    let mut skipped = 0u64;

    let mut items: Vec<Item> = Vec::new();
    let mut index_of: HashMap<String, u32> = HashMap::new();
    for line in read_lines(items_path)? {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Item>(&line) {
            Ok(item) => {
                if index_of.contains_key(&item.item_id) {
                    // Duplicate id: keep the first record, count the rest.
                    skipped += 1;
                    continue;
                }
                index_of.insert(item.item_id.clone(), items.len() as u32);
                items.push(item);
            }
            Err(_) => skipped += 1,
        }
    }

    let mut users: HashMap<String, UserTrack> = HashMap::new();
    let mut user_order: Vec<String> = Vec::new();
    for (line_no, line) in read_lines(events_path)?.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event = match serde_json::from_str::<Event>(&line) {
            Ok(e) => e,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let Some(&item) = index_of.get(&event.item_id) else {
            // Event references an item the catalog does not know.
            skipped += 1;
            continue;
        };
        let track = users.entry(event.user_id.clone()).or_insert_with(|| {
            user_order.push(event.user_id.clone());
            UserTrack { views: Vec::new(), purchase: None }
        });
        match event.kind {
            EventKind::View => track.views.push((event.ts, item)),
            EventKind::Purchase => {
                let key = (event.ts, line_no as u64, item);
                if track.purchase.is_none_or(|(ts, no, _)| (ts, no) < (key.0, key.1)) {
                    track.purchase = Some(key);
                }
            }
        }
    }

    // Group by item category up front for distractor sampling.
    let mut by_category: HashMap<&str, Vec<u32>> = HashMap::new();
    for (i, item) in items.iter().enumerate() {
        by_category.entry(&item.category).or_default().push(i as u32);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for user_id in user_order {
        let track = &users[&user_id];
        let Some((purchase_ts, _, purchased)) = track.purchase else { continue };
        let mut history = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &(ts, item) in &track.views {
            if ts < purchase_ts && item != purchased && seen.insert(item) {
                history.push(item);
            }
        }
        if history.is_empty() {
            continue;
        }
        let category = items[purchased as usize].category.as_str();
        let candidates =
            sample_recall_set(&by_category[category], purchased, distractors, &mut rng);
        cases.push(EvalCase { user_id, history, purchased, candidates });
    }

    if skipped > 0 {
        eprintln!("warning: skipped {skipped} unusable input lines");
    }
    if cases.is_empty() {
        return Err(AppError::Data("no evaluation cases (no purchase had prior views)".into()));
    }
    Ok(Dataset { items, cases, skipped_lines: skipped })
}

/// Purchased item first, then up to `distractors` same-category items
/// sampled without replacement.
fn sample_recall_set(
    pool: &[u32],
    purchased: u32,
    distractors: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<u32> {
    let mut others: Vec<u32> = pool.iter().copied().filter(|&i| i != purchased).collect();
    let take = distractors.min(others.len());
    let (sampled, _) = others.partial_shuffle(rng, take);
    let mut candidates = Vec::with_capacity(take + 1);
    candidates.push(purchased);
    candidates.extend_from_slice(sampled);
    candidates
}

fn read_lines(path: &Path) -> Result<impl Iterator<Item = std::io::Result<String>>, AppError> {
    let file = File::open(path).map_err(|e| {
        AppError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    Ok(BufReader::new(file).lines())
}

/// Writes a dataset back out as items.jsonl and events.jsonl in `dir`.
///
/// Events are reconstructed per case: one view per history item at
/// ascending timestamps, then the purchase; one session per user. Loading
/// the emitted files reproduces the same histories and purchases.
pub fn write_jsonl(dataset: &Dataset, dir: &Path) -> Result<(), AppError> {
    std::fs::create_dir_all(dir)?;
    let mut items_out = String::new();
    for item in &dataset.items {
        items_out.push_str(&serde_json::to_string(item).expect("item serializes"));
        items_out.push('\n');
    }
    write_atomic(&dir.join("items.jsonl"), items_out.as_bytes())?;

    let mut events_out = String::new();
    for (case_no, case) in dataset.cases.iter().enumerate() {
        let session = format!("s{case_no}");
        let mut ts = 1_600_000_000 + (case_no as i64) * 10_000;
        for &viewed in &case.history {
            push_event(&mut events_out, case, viewed, EventKind::View, ts, &session, dataset);
            ts += 31;
        }
        push_event(
            &mut events_out,
            case,
            case.purchased,
            EventKind::Purchase,
            ts,
            &session,
            dataset,
        );
    }
    write_atomic(&dir.join("events.jsonl"), events_out.as_bytes())
}

fn push_event(
    out: &mut String,
    case: &EvalCase,
    item: u32,
    kind: EventKind,
    ts: i64,
    session: &str,
    dataset: &Dataset,
) {
    let event = Event {
        user_id: case.user_id.clone(),
        ts,
        kind,
        item_id: dataset.item(item).item_id.clone(),
        session_id: session.to_string(),
    };
    out.push_str(&serde_json::to_string(&event).expect("event serializes"));
    out.push('\n');
}

/// Writes via a temp file in the target directory, renamed into place at
/// the end, so a failure leaves no partial output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    use std::io::Write;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| AppError::Io(e.error))?;
    Ok(())
}

/// Reads a whole file, wrapping the error with the path.
pub fn read_to_string(path: &Path) -> Result<String, AppError> {
    let mut out = String::new();
    File::open(path)
        .map_err(|e| {
            AppError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?
        .read_to_string(&mut out)?;
    Ok(out)
}
