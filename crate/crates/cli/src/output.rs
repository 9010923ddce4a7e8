//! CSV helpers. Floats are written with Rust's shortest round-trip
//! formatting (`{:?}`), so parsing a cell gives back the exact `f64`.

use std::io::Write;

use crate::error::CliResult;

pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new<S: AsRef<str>>(sink: W, header: &[S]) -> CliResult<Self> {
        let mut inner = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        inner.write_record(header.iter().map(|s| s.as_ref()))?;
        Ok(Self { inner })
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) -> CliResult<()> {
        self.inner.write_record(cells.iter().map(|s| s.as_ref()))?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush()?;
        Ok(())
    }
}
