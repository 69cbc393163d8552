use std::fs;
use std::path::{Path, PathBuf};

use nodal_atlas::{curve_csv, render_svg, NodalCurve};
use serde::Serialize;

use crate::failure::Failure;

pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: PathBuf) -> Result<Self, Failure> {
        fs::create_dir_all(&dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    /// Relative paths are taken inside the output directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.dir.join(path)
        }
    }

    pub fn write(&self, path: &Path, contents: &str) -> Result<PathBuf, Failure> {
        let path = self.resolve(path);
        fs::write(&path, contents).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    /// Pretty JSON with a trailing newline, written to `<name>.json`.
    pub fn report<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, Failure> {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.write(Path::new(&format!("{name}.json")), &text)
    }

    pub fn curves(&self, prefix: &str, curves: &[NodalCurve], svg: Option<&Path>, csv: bool) -> Result<(), Failure> {
        if let Some(path) = svg {
            let text = render_svg(curves).map_err(|e| Failure::Property(format!("cannot render SVG: {e}")))?;
            self.write(path, &text)?;
        }
        if csv {
            for (i, c) in curves.iter().enumerate() {
                self.write(Path::new(&format!("{prefix}_curve_{i}.csv")), &curve_csv(c))?;
            }
        }
        Ok(())
    }
}
