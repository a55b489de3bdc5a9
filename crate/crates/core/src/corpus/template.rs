//! Instruction templates. Templates are plain data: a task, a query
//! string, and a response string with `{field}` placeholders and no logic,
//! so phrasing variants can be added without touching code.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::record::Task;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Template {
    pub task: String,
    pub query: String,
    pub response: String,
}

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("{path}: {message}")]
    Unreadable { path: String, message: String },
    #[error("template {index}: unknown task {task:?}")]
    UnknownTask { index: usize, task: String },
}

#[derive(Debug, Clone)]
pub struct TemplateSet {
    by_task: BTreeMap<Task, Vec<(String, String)>>,
}

impl TemplateSet {
    pub fn from_templates(templates: &[Template]) -> Result<Self, TemplateError> {
        let mut by_task: BTreeMap<Task, Vec<(String, String)>> = BTreeMap::new();
        for (index, t) in templates.iter().enumerate() {
            let task: Task = t.task.parse().map_err(|_| TemplateError::UnknownTask {
                index,
                task: t.task.clone(),
            })?;
            by_task
                .entry(task)
                .or_default()
                .push((t.query.clone(), t.response.clone()));
        }
        Ok(TemplateSet { by_task })
    }

    pub fn load(path: &Path) -> Result<Self, TemplateError> {
        let text = std::fs::read_to_string(path).map_err(|e| TemplateError::Unreadable {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let templates: Vec<Template> =
            serde_json::from_str(&text).map_err(|e| TemplateError::Unreadable {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        Self::from_templates(&templates)
    }

    /// The shipped default phrasings, two or three per task.
    pub fn builtin() -> Self {
        let templates: Vec<Template> =
            serde_json::from_str(include_str!("../../data/templates.json"))
                .expect("bundled templates parse");
        Self::from_templates(&templates).expect("bundled templates name known tasks")
    }

    pub fn for_task(&self, task: Task) -> Option<&[(String, String)]> {
        self.by_task.get(&task).map(|v| v.as_slice())
    }
}
