//! Dataset and E_opt table loading.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hybridvrp::vrptw::{parse_solomon, Instance, Mode};

use crate::Failure;

pub const DEFAULT_EOPT: &str = include_str!("../data/eopt.txt");

/// Expands each argument: a directory contributes its `*.txt` files in
/// name order, a file contributes itself.
pub fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Failure::data(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && f.extension().is_some_and(|x| x.eq_ignore_ascii_case("txt")))
                .collect();
            files.sort();
            out.extend(files);
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(Failure::data(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(out)
}

pub fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    parse_solomon(&text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

/// Lines of `ID COUNT`; `#` starts a comment.
pub fn parse_eopt(text: &str) -> Result<BTreeMap<String, usize>, String> {
    let mut table = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut parts = body.split_whitespace();
        let (Some(id), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("line {}: expected `ID COUNT`", i + 1));
        };
        let count = count
            .parse()
            .map_err(|_| format!("line {}: bad route count {count:?}", i + 1))?;
        table.insert(id.to_ascii_uppercase(), count);
    }
    Ok(table)
}

/// Loads every instance and, in trucks mode, attaches its E_opt.
pub fn load_dataset(paths: &[PathBuf], mode: Mode, eopt_file: Option<&Path>) -> Result<Vec<Instance>, Failure> {
    let files = expand(paths)?;
    if files.is_empty() {
        return Err(Failure::usage("the dataset is empty: pass instance files or directories with --data"));
    }
    let table = match eopt_file {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::data(format!("{}: {e}", p.display())))?;
            parse_eopt(&text).map_err(|e| Failure::data(format!("{}: {e}", p.display())))?
        }
        None => parse_eopt(DEFAULT_EOPT).expect("shipped table parses"),
    };
    let mut out = Vec::with_capacity(files.len());
    for f in &files {
        let mut inst = read_instance(f)?;
        if mode == Mode::Trucks {
            let Some(&e) = table.get(&inst.id().to_ascii_uppercase()) else {
                return Err(Failure::data(format!(
                    "{}: no E_opt entry for instance {} (trucks mode needs one; see --eopt-file)",
                    f.display(),
                    inst.id()
                )));
            };
            inst.set_e_opt(Some(e));
        }
        out.push(inst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table() {
        let t = parse_eopt(DEFAULT_EOPT).unwrap();
        assert_eq!(t.len(), 29);
        assert_eq!(t["R101"], 19);
        assert_eq!(t["RC108"], 10);
        let r1: usize = (1..=12).map(|i| t[&format!("R1{i:02}")]).sum();
        assert_eq!(r1, 143);
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_eopt("R101 19 3").is_err());
        assert!(parse_eopt("R101 x").is_err());
        assert_eq!(parse_eopt("# c\n r101  7 # x\n").unwrap()["R101"], 7);
    }
}
