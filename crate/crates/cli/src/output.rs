use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// The only environment knob: when set, relative `--out` paths are
/// resolved inside this directory.
pub const OUT_DIR_ENV: &str = "BETAMIX_OUT_DIR";

/// Line-oriented writer targeting a file or stdout.
pub struct Output {
    writer: BufWriter<Box<dyn Write>>,
}

impl Output {
    pub fn create(path: Option<&Path>) -> io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(resolve(p))?),
            None => Box::new(io::stdout()),
        };
        Ok(Self {
            writer: BufWriter::new(inner),
        })
    }

    pub fn line(&mut self, s: &str) -> io::Result<()> {
        writeln!(self.writer, "{s}")
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Variates are printed with 17 significant digits so the decimal text
/// round-trips to the exact double.
pub fn fmt_variate(x: f64) -> String {
    format!("{x:.16e}")
}
