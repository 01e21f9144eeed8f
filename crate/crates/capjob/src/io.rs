//! Instance and solution JSON files.

use std::fs;
use std::path::Path;

use capjob_core::generator::GENERATOR_VERSION;
use capjob_core::{GenParams, Instance, InstanceError, Job, Solution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("invalid instance: {0}")]
    Field(String),
}

fn read_text(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| FileError::Io { path: dir.display().to_string(), source })?;
    }
    fs::write(path, text).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

/// Generation parameters echoed into generated instance files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub cap_factor: f64,
    pub window: u32,
    pub job_shop: bool,
    pub generator_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proc_range: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage_range: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub release_range: Option<[u32; 2]>,
}

impl Meta {
    pub fn from_params(params: &GenParams) -> Self {
        Meta {
            seed: params.seed,
            cap_factor: params.cap_factor.as_f64(),
            window: params.window,
            job_shop: params.job_shop,
            generator_version: GENERATOR_VERSION.to_string(),
            proc_range: Some([params.proc_range.low, params.proc_range.high]),
            usage_range: Some([params.usage_range.low, params.usage_range.high]),
            release_range: Some([params.release_range.low, params.release_range.high]),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JobRecord {
    release: i64,
    due: i64,
    route: Vec<i64>,
    proc_time: Vec<i64>,
    cap_usage: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceRecord {
    num_jobs: i64,
    num_machines: i64,
    jobs: Vec<JobRecord>,
    machine_cap: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

/// An instance together with the generation metadata, if the file had any.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub meta: Option<Meta>,
}

fn positive_u32(value: i64, what: impl FnOnce() -> String) -> Result<u32, FileError> {
    u32::try_from(value).ok().filter(|&v| v >= 1).ok_or_else(|| FileError::Field(format!("{} must be a positive integer, got {value}", what())))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let rec: InstanceRecord =
            serde_json::from_str(text).map_err(|source| FileError::Json { path: "<instance>".into(), source })?;
        Self::from_record(rec)
    }

    fn from_record(rec: InstanceRecord) -> Result<Self, FileError> {
        if rec.num_machines < 1 {
            return Err(FileError::Field(format!("num_machines must be positive, got {}", rec.num_machines)));
        }
        if rec.num_jobs < 0 || rec.num_jobs as usize != rec.jobs.len() {
            return Err(FileError::Field(format!(
                "num_jobs is {} but {} jobs are listed",
                rec.num_jobs,
                rec.jobs.len()
            )));
        }
        let machine_cap = rec
            .machine_cap
            .iter()
            .enumerate()
            .map(|(i, &c)| positive_u32(c, || format!("machine {i}: machine_cap")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut jobs = Vec::with_capacity(rec.jobs.len());
        for (j, job) in rec.jobs.into_iter().enumerate() {
            let route = job
                .route
                .iter()
                .map(|&i| usize::try_from(i).map_err(|_| FileError::Field(format!("job {j}: route entry {i} is negative"))))
                .collect::<Result<Vec<_>, _>>()?;
            let proc_time = job
                .proc_time
                .iter()
                .enumerate()
                .map(|(i, &p)| positive_u32(p, || format!("job {j}, machine {i}: proc_time")))
                .collect::<Result<Vec<_>, _>>()?;
            let cap_usage = job
                .cap_usage
                .iter()
                .enumerate()
                .map(|(i, &q)| positive_u32(q, || format!("job {j}, machine {i}: cap_usage")))
                .collect::<Result<Vec<_>, _>>()?;
            jobs.push(Job { release: job.release, due: job.due, route, proc_time, cap_usage });
        }
        let instance = Instance::new(rec.num_machines as usize, jobs, machine_cap)?;
        Ok(InstanceFile { instance, meta: rec.meta })
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = read_text(path)?;
        let rec: InstanceRecord =
            serde_json::from_str(&text).map_err(|source| FileError::Json { path: path.display().to_string(), source })?;
        Self::from_record(rec)
    }

    pub fn to_json(&self) -> String {
        let inst = &self.instance;
        let rec = InstanceRecord {
            num_jobs: inst.num_jobs() as i64,
            num_machines: inst.num_machines() as i64,
            jobs: inst
                .jobs()
                .iter()
                .map(|j| JobRecord {
                    release: j.release,
                    due: j.due,
                    route: j.route.iter().map(|&i| i as i64).collect(),
                    proc_time: j.proc_time.iter().map(|&p| i64::from(p)).collect(),
                    cap_usage: j.cap_usage.iter().map(|&q| i64::from(q)).collect(),
                })
                .collect(),
            machine_cap: inst.machine_cap().iter().map(|&c| i64::from(c)).collect(),
            meta: self.meta.clone(),
        };
        let mut text = serde_json::to_string_pretty(&rec).expect("instance serializes");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        write_text(path, &self.to_json())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionRecord {
    accepted: Vec<bool>,
    starts: Vec<Option<Vec<i64>>>,
}

pub fn solution_to_json(solution: &Solution) -> String {
    let rec = SolutionRecord { accepted: solution.accepted.clone(), starts: solution.starts.clone() };
    let mut text = serde_json::to_string(&rec).expect("solution serializes");
    text.push('\n');
    text
}

pub fn solution_from_json(text: &str) -> Result<Solution, FileError> {
    let rec: SolutionRecord =
        serde_json::from_str(text).map_err(|source| FileError::Json { path: "<solution>".into(), source })?;
    Ok(Solution { accepted: rec.accepted, starts: rec.starts })
}

pub fn read_solution(path: &Path) -> Result<Solution, FileError> {
    let text = read_text(path)?;
    let rec: SolutionRecord =
        serde_json::from_str(&text).map_err(|source| FileError::Json { path: path.display().to_string(), source })?;
    Ok(Solution { accepted: rec.accepted, starts: rec.starts })
}

pub fn write_solution(path: &Path, solution: &Solution) -> Result<(), FileError> {
    write_text(path, &solution_to_json(solution))
}

pub fn write_string(path: &Path, text: &str) -> Result<(), FileError> {
    write_text(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{"num_jobs": 2, "num_machines": 2,
        "jobs": [
            {"release": 1, "due": 11, "route": [1, 0], "proc_time": [2, 3], "cap_usage": [20, 25]},
            {"release": 3, "due": 14, "route": [0, 1], "proc_time": [1, 1], "cap_usage": [21, 22]}
        ],
        "machine_cap": [30, 40]}"#;

    #[test]
    fn reads_instance_document() {
        let file = InstanceFile::from_json(DOC).unwrap();
        let inst = &file.instance;
        assert_eq!(inst.num_jobs(), 2);
        // indexed by machine, not route position
        assert_eq!(inst.job(0).proc_at(0), 3);
        assert_eq!(inst.machine_cap(), &[30, 40]);
        assert!(file.meta.is_none());
        let again = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn errors_name_job_and_machine() {
        let bad = DOC.replace("\"cap_usage\": [21, 22]", "\"cap_usage\": [21, 0]");
        let err = InstanceFile::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("job 1, machine 1"), "{err}");

        let bad = DOC.replace("\"route\": [0, 1]", "\"route\": [1, 1]");
        let err = InstanceFile::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("job 1") && err.contains("machine 1"), "{err}");

        let bad = DOC.replace("\"release\": 3, \"due\": 14", "\"release\": 3, \"due\": 3");
        let err = InstanceFile::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("job 1"), "{err}");

        let bad = DOC.replace("\"num_jobs\": 2", "\"num_jobs\": 3");
        assert!(InstanceFile::from_json(&bad).is_err());

        let bad = DOC.replace("[30, 40]", "[30, -1]");
        let err = InstanceFile::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("machine 1"), "{err}");

        assert!(InstanceFile::from_json("{\"num_jobs\": \"two\"}").is_err());
    }

    #[test]
    fn solution_json_shape() {
        let mut sol = Solution::rejected(2);
        sol.accept(1, vec![3, 5]);
        let text = solution_to_json(&sol);
        assert_eq!(text, "{\"accepted\":[false,true],\"starts\":[null,[3,5]]}\n");
        assert_eq!(solution_from_json(&text).unwrap(), sol);
    }
}
