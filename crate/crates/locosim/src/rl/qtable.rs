//! The tabular action-value store.

use std::io::{self, BufRead, Write};

use rand::Rng;
use thiserror::Error;

use super::{ActionSpace, DriveState, RLParams, STATE_COUNT};

#[derive(Debug, Error)]
pub enum QTableCsvError {
    #[error("table shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Action values and visit counts over (state, action) pairs,
/// zero-initialized.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    values: Vec<f64>,
    visit_counts: Vec<u32>,
    n_actions: usize,
}

impl QTable {
    pub fn new(n_actions: usize) -> Self {
        assert!(n_actions > 0, "action space must be non-empty");
        Self {
            values: vec![0.0; STATE_COUNT * n_actions],
            visit_counts: vec![0; STATE_COUNT * n_actions],
            n_actions,
        }
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    fn offset(&self, state: DriveState, action: usize) -> usize {
        debug_assert!(action < self.n_actions);
        state.index() * self.n_actions + action
    }

    pub fn get(&self, state: DriveState, action: usize) -> f64 {
        self.values[self.offset(state, action)]
    }

    pub fn set(&mut self, state: DriveState, action: usize, value: f64) {
        let i = self.offset(state, action);
        self.values[i] = value;
    }

    pub fn visits(&self, state: DriveState, action: usize) -> u32 {
        self.visit_counts[self.offset(state, action)]
    }

    fn row(&self, state: DriveState) -> &[f64] {
        let start = state.index() * self.n_actions;
        &self.values[start..start + self.n_actions]
    }

    /// Largest action value in `state`.
    pub fn max_q(&self, state: DriveState) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// An argmax action for `state`; exact-value ties are broken uniformly
    /// at random.
    pub fn greedy_action<R: Rng + ?Sized>(&self, state: DriveState, rng: &mut R) -> usize {
        let row = self.row(state);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ties = row.iter().filter(|&&v| v == max).count();
        let pick = rng.gen_range(0..ties);
        row.iter()
            .enumerate()
            .filter(|(_, &v)| v == max)
            .nth(pick)
            .map(|(i, _)| i)
            .expect("row has at least one maximal entry")
    }

    /// Epsilon-greedy selection: with probability `epsilon` a uniformly
    /// random action, otherwise [`Self::greedy_action`].
    pub fn select_action<R: Rng + ?Sized>(
        &self,
        state: DriveState,
        epsilon: f64,
        rng: &mut R,
    ) -> usize {
        debug_assert!((0.0..=1.0).contains(&epsilon));
        if rng.gen::<f64>() < epsilon {
            rng.gen_range(0..self.n_actions)
        } else {
            self.greedy_action(state, rng)
        }
    }

    /// One-step Q-learning update toward `r + gamma * max_a' Q(s', a')`.
    /// Terminal successors contribute no bootstrap term.
    pub fn update(
        &mut self,
        state: DriveState,
        action: usize,
        reward: f64,
        next_state: DriveState,
        params: &RLParams,
    ) {
        let bootstrap = if next_state.is_terminal() {
            0.0
        } else {
            self.max_q(next_state)
        };
        self.update_toward(state, action, reward + params.gamma * bootstrap, params.alpha);
    }

    /// Update for a transition that ends the episode (collision, rollback,
    /// dynamics fault): there is no successor, so the target is the reward
    /// alone.
    pub fn update_terminal(
        &mut self,
        state: DriveState,
        action: usize,
        reward: f64,
        params: &RLParams,
    ) {
        self.update_toward(state, action, reward, params.alpha);
    }

    fn update_toward(&mut self, state: DriveState, action: usize, target: f64, alpha: f64) {
        let i = self.offset(state, action);
        self.values[i] += alpha * (target - self.values[i]);
        self.visit_counts[i] += 1;
    }

    /// Write the table as CSV: a header of torque values, then one named row
    /// per state.
    pub fn write_csv<W: Write>(&self, mut w: W, actions: &ActionSpace) -> io::Result<()> {
        assert_eq!(actions.n_actions(), self.n_actions, "action space mismatch");
        write!(w, "state")?;
        for i in 0..self.n_actions {
            write!(w, ",{}", actions.torque(i))?;
        }
        writeln!(w)?;
        for state in DriveState::ALL {
            write!(w, "{}", state.name())?;
            for a in 0..self.n_actions {
                write!(w, ",{}", self.get(state, a))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Read a table written by [`Self::write_csv`], checking that the torque
    /// header matches `expected` exactly. Visit counts are not persisted and
    /// load as zero.
    pub fn read_csv<R: BufRead>(r: R, expected: &ActionSpace) -> Result<QTable, QTableCsvError> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| QTableCsvError::Parse {
                line: 1,
                msg: "missing header row".into(),
            })
            .and_then(|(i, l)| l.map(|l| (i, l)).map_err(QTableCsvError::Io))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.first() != Some(&"state") {
            return Err(QTableCsvError::Parse {
                line: 1,
                msg: "header must start with 'state'".into(),
            });
        }
        let n_actions = cols.len() - 1;
        if n_actions != expected.n_actions() {
            return Err(QTableCsvError::ShapeMismatch(format!(
                "table has {n_actions} actions, configuration expects {}",
                expected.n_actions()
            )));
        }
        for (i, col) in cols[1..].iter().enumerate() {
            let torque: f64 = col.parse().map_err(|_| QTableCsvError::Parse {
                line: 1,
                msg: format!("bad torque value '{col}'"),
            })?;
            if (torque - expected.torque(i)).abs() > 1e-9 {
                return Err(QTableCsvError::ShapeMismatch(format!(
                    "torque column {i} is {torque}, configuration expects {}",
                    expected.torque(i)
                )));
            }
        }
        let mut table = QTable::new(n_actions);
        let mut seen = [false; STATE_COUNT];
        for (idx, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split(',');
            let name = parts.next().unwrap_or("");
            let state = DriveState::from_name(name).ok_or_else(|| QTableCsvError::Parse {
                line: lineno,
                msg: format!("unknown state '{name}'"),
            })?;
            if seen[state.index()] {
                return Err(QTableCsvError::Parse {
                    line: lineno,
                    msg: format!("duplicate state row '{name}'"),
                });
            }
            seen[state.index()] = true;
            let mut count = 0;
            for (a, part) in parts.enumerate() {
                if a >= n_actions {
                    return Err(QTableCsvError::ShapeMismatch(format!(
                        "row '{name}' has more than {n_actions} values"
                    )));
                }
                let value: f64 = part.parse().map_err(|_| QTableCsvError::Parse {
                    line: lineno,
                    msg: format!("bad value '{part}'"),
                })?;
                table.set(state, a, value);
                count += 1;
            }
            if count != n_actions {
                return Err(QTableCsvError::ShapeMismatch(format!(
                    "row '{name}' has {count} values, expected {n_actions}"
                )));
            }
        }
        if let Some(missing) = DriveState::ALL.iter().find(|s| !seen[s.index()]) {
            return Err(QTableCsvError::ShapeMismatch(format!(
                "missing state row '{}'",
                missing.name()
            )));
        }
        Ok(table)
    }
}
