//! Number formatting and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `# nrows ncols` header followed by one `row col value` line per entry.
pub fn triplets(nrows: usize, ncols: usize, entries: impl Iterator<Item = (usize, usize, f64)>) -> String {
    let mut s = format!("# {nrows} {ncols}\n");
    for (r, c, v) in entries {
        s.push_str(&format!("{r} {c} {}\n", fmt_num(v)));
    }
    s
}

/// Parses the output of [`triplets`].
pub fn parse_triplets(text: &str) -> Result<(usize, usize, Vec<(usize, usize, f64)>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty triplet file")?;
    let dims: Vec<usize> = header
        .trim_start_matches('#')
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| format!("bad header `{header}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [nrows, ncols] = dims[..] else {
        return Err(format!("bad header `{header}`"));
    };
    let mut entries = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let mut next = || it.next().ok_or_else(|| format!("short line `{line}`"));
        let r = next()?.parse().map_err(|e| format!("`{line}`: {e}"))?;
        let c = next()?.parse().map_err(|e| format!("`{line}`: {e}"))?;
        let v = next()?.parse().map_err(|e| format!("`{line}`: {e}"))?;
        entries.push((r, c, v));
    }
    Ok((nrows, ncols, entries))
}

/// Files collected in memory and written together once everything succeeded.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    /// Writes every file through a temporary sibling and a rename.
    pub fn commit(self, dir: &Path) -> Result<Vec<String>, CliError> {
        let io = |what: &str, p: &Path, e: std::io::Error| CliError::Io(format!("{what} {}: {e}", p.display()));
        fs::create_dir_all(dir).map_err(|e| io("cannot create", dir, e))?;
        let mut names = Vec::with_capacity(self.files.len());
        for (name, content) in self.files {
            let target = dir.join(&name);
            let tmp = dir.join(format!(".{name}.tmp"));
            let write = || -> std::io::Result<()> {
                let mut f = fs::File::create(&tmp)?;
                f.write_all(content.as_bytes())?;
                f.sync_all()?;
                fs::rename(&tmp, &target)
            };
            if let Err(e) = write() {
                let _ = fs::remove_file(&tmp);
                return Err(io("cannot write", &target, e));
            }
            names.push(name);
        }
        Ok(names)
    }
}
