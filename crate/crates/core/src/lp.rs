//! LP text export of a [`MipModel`].
//!
//! Writes the CPLEX LP dialect read by CPLEX, Gurobi, HiGHS, SCIP and CBC:
//! comment header, `Maximize`, `Subject To` with named rows, `Binary`,
//! `End`. Capacity rows without terms are left out of the file.

use alloc::string::String;
use core::fmt::Write;

use crate::model::{MipModel, Relation, RowKind};

/// Longest line written before continuing an expression on the next line.
const MAX_LINE: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpExport {
    pub text: String,
    /// Capacity rows without any term that were not written.
    pub dropped_empty_rows: usize,
}

/// Line-wrapping writer for linear expressions.
struct ExprWriter<'a> {
    out: &'a mut String,
    line_len: usize,
}

impl<'a> ExprWriter<'a> {
    fn start(out: &'a mut String, head: &str) -> Self {
        out.push_str(head);
        ExprWriter { line_len: head.len(), out }
    }

    fn token(&mut self, tok: &str) {
        if self.line_len + tok.len() + 1 > MAX_LINE {
            self.out.push_str("\n   ");
            self.line_len = 3;
        }
        self.out.push(' ');
        self.out.push_str(tok);
        self.line_len += tok.len() + 1;
    }

    fn term(&mut self, first: bool, coef: i64, name: &str) {
        let mut tok = String::new();
        match (first, coef < 0) {
            (true, false) => {}
            (true, true) => tok.push_str("- "),
            (false, false) => tok.push_str("+ "),
            (false, true) => tok.push_str("- "),
        }
        let abs = coef.unsigned_abs();
        if abs != 1 {
            let _ = write!(tok, "{abs} ");
        }
        tok.push_str(name);
        self.token(&tok);
    }
}

/// Serializes `model`. Each entry of `comments` becomes one `\ ` comment line
/// at the top of the file. Output is a pure function of the inputs.
pub fn export_lp(model: &MipModel, comments: &[String]) -> LpExport {
    let names: alloc::vec::Vec<String> = model.variables().iter().map(|v| v.name()).collect();
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            out.push_str("\\ ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str("Maximize\n");
    {
        let mut w = ExprWriter::start(&mut out, " obj:");
        for job in 0..model.num_jobs() {
            w.term(job == 0, 1, &names[model.z_var(job)]);
        }
    }
    out.push('\n');

    out.push_str("Subject To\n");
    let mut dropped = 0;
    for row in model.rows() {
        if row.terms.is_empty() {
            debug_assert!(matches!(row.kind, RowKind::Capacity { .. }));
            dropped += 1;
            continue;
        }
        let head = alloc::format!(" {}:", row.name());
        let mut w = ExprWriter::start(&mut out, &head);
        for (k, &(var, coef)) in row.terms.iter().enumerate() {
            w.term(k == 0, coef, &names[var]);
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        w.token(rel);
        w.token(&alloc::format!("{}", row.rhs));
        out.push('\n');
    }

    if !names.is_empty() {
        out.push_str("Binary\n");
        let mut w = ExprWriter::start(&mut out, "");
        for name in &names {
            w.token(name);
        }
        out.push('\n');
    }
    out.push_str("End\n");
    LpExport { text: out, dropped_empty_rows: dropped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{compute_time_windows, Instance, Job};
    use crate::model::build_model;
    use alloc::vec;

    #[test]
    fn empty_model() {
        let inst = Instance::new(2, vec![], vec![1, 1]).unwrap();
        let model = build_model(&inst, &compute_time_windows(&inst));
        let lp = export_lp(&model, &[]);
        assert_eq!(lp.text, "Maximize\n obj:\nSubject To\nEnd\n");
        assert_eq!(lp.dropped_empty_rows, 0);
    }

    #[test]
    fn long_rows_are_wrapped() {
        let jobs = (0..40)
            .map(|_| Job { release: 1, due: 3, route: vec![0], proc_time: vec![1], cap_usage: vec![1] })
            .collect();
        let inst = Instance::new(1, jobs, vec![1]).unwrap();
        let model = build_model(&inst, &compute_time_windows(&inst));
        let lp = export_lp(&model, &["a\nb".into()]);
        assert!(lp.text.starts_with("\\ a\n\\ b\nMaximize\n"));
        assert!(lp.text.lines().all(|l| l.len() <= MAX_LINE));
        assert!(lp.text.contains(" cap_0_1: x_0_0_1 + x_0_1_1"));
        // date 3 is never occupied
        assert_eq!(lp.dropped_empty_rows, 1);
    }

    #[test]
    fn coefficients_and_signs() {
        let job = Job { release: 1, due: 5, route: vec![0, 1], proc_time: vec![2, 1], cap_usage: vec![3, 1] };
        let inst = Instance::new(2, vec![job], vec![3, 2]).unwrap();
        let model = build_model(&inst, &compute_time_windows(&inst));
        let text = export_lp(&model, &[]).text;
        assert!(text.contains(" assign_0_0: x_0_0_1 + x_0_0_2 - z_0 = 0\n"), "{text}");
        assert!(text.contains(" prec_0_1: 3 x_0_0_1 + 4 x_0_0_2 - 3 x_1_0_3 - 4 x_1_0_4 <= 0\n"), "{text}");
        assert!(text.contains(" cap_0_2: 3 x_0_0_1 + 3 x_0_0_2 <= 3\n"), "{text}");
        assert!(text.ends_with("Binary\n x_0_0_1 x_0_0_2 x_1_0_3 x_1_0_4 z_0\nEnd\n"), "{text}");
    }
}
