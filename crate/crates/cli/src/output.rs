use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::failure::{CliResult, Failure};

/// Shortest decimal that parses back to the same f64 (exponent form for
/// very large or small magnitudes).
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    }

    /// Writes the CSV, then the summary line: on stderr when the CSV went to
    /// stdout, on stdout otherwise.
    pub fn emit(&self, path: Option<&Path>, summary: &str) -> CliResult<()> {
        let io_err = |e: io::Error| Failure::Io(e.to_string());
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?;
                self.write_to(&mut BufWriter::new(file)).map_err(io_err)?;
                println!("{summary}");
            }
            None => {
                self.write_to(&mut io::stdout().lock()).map_err(io_err)?;
                eprintln!("{summary}");
            }
        }
        Ok(())
    }
}

/// Joins flag names with `;`.
pub fn flags(list: &[&str]) -> Cell {
    if list.is_empty() {
        Cell::Empty
    } else {
        Cell::Text(list.join(";"))
    }
}
