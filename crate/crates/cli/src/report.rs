use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Malformed,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Malformed => 2,
            Status::Undecided => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Malformed => "malformed",
            Status::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub task: String,
    pub status: Status,
    pub message: Option<String>,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(serialize_with = "as_map")]
    pub config: Vec<(String, String)>,
    pub tasks: Vec<TaskReport>,
    pub op_count: u64,
    pub exit: i32,
}

fn as_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

/// Malformed input outranks a failed verdict, which outranks an undecided one.
pub fn combine(statuses: impl IntoIterator<Item = Status>) -> i32 {
    let all: Vec<Status> = statuses.into_iter().collect();
    [Status::Malformed, Status::Fail, Status::Undecided]
        .into_iter()
        .find(|s| all.contains(s))
        .map_or(0, Status::exit_code)
}

impl Report {
    pub fn new(command: &str, config: Vec<(String, String)>, tasks: Vec<TaskReport>, op_count: u64) -> Self {
        let exit = combine(tasks.iter().map(|t| t.status));
        Report { command: command.to_string(), config, tasks, op_count, exit }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ellkit {}", self.command)?;
        for (k, v) in &self.config {
            writeln!(f, "{k}: {v}")?;
        }
        for t in &self.tasks {
            write!(f, "task {} [{}]: {}", t.index, t.task, t.status.as_str())?;
            match &t.message {
                Some(m) => writeln!(f, ": {m}")?,
                None => writeln!(f)?,
            }
            for l in &t.lines {
                writeln!(f, "  {l}")?;
            }
        }
        writeln!(f, "ops={}", self.op_count)?;
        write!(f, "exit={}", self.exit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(combine([]), 0);
        assert_eq!(combine([Status::Pass, Status::Undecided]), 3);
        assert_eq!(combine([Status::Undecided, Status::Fail]), 1);
        assert_eq!(combine([Status::Fail, Status::Malformed]), 2);
    }
}
