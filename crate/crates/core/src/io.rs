//! Plain-text file formats.
//!
//! Complex files: a header line `n m` followed by exactly m lines `a b c`,
//! each triangle sorted internally and the lines in strictly increasing
//! lexicographic order. Graph files: `n m` followed by m sorted lines `a b`.
//! Kernel files: a header `m` followed by an m×m matrix of reals, one row per
//! line, which must be exactly symmetric. Readers are strict: duplicates,
//! out-of-order records, blank lines, trailing content, or count mismatches
//! are parse errors with the offending line number.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::complex::{Complex2, Edge, Graph, Triangle};
use crate::error::{Error, Result};
use crate::graphon::StepKernel;

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct LineSource<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> LineSource<R> {
    fn new(reader: R) -> Self {
        LineSource {
            lines: reader.lines(),
            line_no: 0,
        }
    }

    /// The next line, required to contain content.
    fn expect_line(&mut self, what: &str) -> Result<(usize, String)> {
        match self.lines.next() {
            Some(line) => {
                self.line_no += 1;
                let line = line?;
                if line.trim().is_empty() {
                    Err(parse_error(
                        self.line_no,
                        format!("blank line where {what} was expected"),
                    ))
                } else {
                    Ok((self.line_no, line))
                }
            }
            None => Err(parse_error(
                self.line_no + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    /// Errors unless the input is exhausted.
    fn expect_end(&mut self) -> Result<()> {
        if self.lines.next().is_some() {
            Err(parse_error(self.line_no + 1, "trailing content after the last record"))
        } else {
            Ok(())
        }
    }
}

fn tokens_of<'a>(line: &'a str, count: usize, line_no: usize, what: &str) -> Result<Vec<&'a str>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != count {
        return Err(parse_error(
            line_no,
            format!("expected {count} fields for {what}, found {}", toks.len()),
        ));
    }
    Ok(toks)
}

fn parse_u32(tok: &str, line_no: usize, what: &str) -> Result<u32> {
    tok.parse::<u32>()
        .map_err(|_| parse_error(line_no, format!("invalid {what} '{tok}'")))
}

fn parse_usize(tok: &str, line_no: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_error(line_no, format!("invalid {what} '{tok}'")))
}

fn parse_f64(tok: &str, line_no: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| parse_error(line_no, format!("invalid real number '{tok}'")))
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

pub fn read_complex<R: BufRead>(reader: R) -> Result<Complex2> {
    let mut src = LineSource::new(reader);
    let (ln, header) = src.expect_line("header 'n m'")?;
    let toks = tokens_of(&header, 2, ln, "the header")?;
    let n = parse_u32(toks[0], ln, "vertex count")?;
    let m = parse_usize(toks[1], ln, "triangle count")?;

    let mut faces: Vec<Triangle> = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, line) = src.expect_line(&format!("triangle {} of {m}", i + 1))?;
        let toks = tokens_of(&line, 3, ln, "a triangle")?;
        let a = parse_u32(toks[0], ln, "vertex")?;
        let b = parse_u32(toks[1], ln, "vertex")?;
        let c = parse_u32(toks[2], ln, "vertex")?;
        if !(a < b && b < c) {
            return Err(parse_error(
                ln,
                format!("triangle vertices must be strictly increasing, got {a} {b} {c}"),
            ));
        }
        let t = Triangle::new(a, b, c).map_err(|e| parse_error(ln, e.to_string()))?;
        if let Some(prev) = faces.last() {
            if *prev >= t {
                return Err(parse_error(
                    ln,
                    "triangles must be strictly increasing (sorted, no duplicates)",
                ));
            }
        }
        faces.push(t);
    }
    src.expect_end()?;
    Complex2::new(n, faces)
}

pub fn write_complex<W: Write>(mut w: W, k: &Complex2) -> Result<()> {
    writeln!(w, "{} {}", k.n(), k.num_triangles())?;
    for t in k.triangles() {
        let [a, b, c] = t.vertices();
        writeln!(w, "{a} {b} {c}")?;
    }
    Ok(())
}

pub fn read_complex_path(path: &Path) -> Result<Complex2> {
    read_complex(BufReader::new(File::open(path)?))
}

pub fn write_complex_path(path: &Path, k: &Complex2) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_complex(&mut w, k)?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let mut src = LineSource::new(reader);
    let (ln, header) = src.expect_line("header 'n m'")?;
    let toks = tokens_of(&header, 2, ln, "the header")?;
    let n = parse_u32(toks[0], ln, "vertex count")?;
    let m = parse_usize(toks[1], ln, "edge count")?;

    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, line) = src.expect_line(&format!("edge {} of {m}", i + 1))?;
        let toks = tokens_of(&line, 2, ln, "an edge")?;
        let a = parse_u32(toks[0], ln, "vertex")?;
        let b = parse_u32(toks[1], ln, "vertex")?;
        if a >= b {
            return Err(parse_error(
                ln,
                format!("edge endpoints must satisfy a < b, got {a} {b}"),
            ));
        }
        let e = Edge::new(a, b).map_err(|err| parse_error(ln, err.to_string()))?;
        if let Some(prev) = edges.last() {
            if *prev >= e {
                return Err(parse_error(
                    ln,
                    "edges must be strictly increasing (sorted, no duplicates)",
                ));
            }
        }
        edges.push(e);
    }
    src.expect_end()?;
    Graph::new(n, edges)
}

pub fn write_graph<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.edges().len())?;
    for e in g.edges() {
        writeln!(w, "{} {}", e.a(), e.b())?;
    }
    Ok(())
}

pub fn read_graph_path(path: &Path) -> Result<Graph> {
    read_graph(BufReader::new(File::open(path)?))
}

pub fn write_graph_path(path: &Path, g: &Graph) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_graph(&mut w, g)?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

pub fn read_kernel<R: BufRead>(reader: R) -> Result<StepKernel> {
    let mut src = LineSource::new(reader);
    let (ln, header) = src.expect_line("header 'm'")?;
    let toks = tokens_of(&header, 1, ln, "the header")?;
    let m = parse_usize(toks[0], ln, "block count")?;
    if m == 0 {
        return Err(parse_error(ln, "block count must be at least 1"));
    }

    let mut values = Vec::with_capacity(m * m);
    for i in 0..m {
        let (ln, line) = src.expect_line(&format!("matrix row {} of {m}", i + 1))?;
        let toks = tokens_of(&line, m, ln, "a matrix row")?;
        for tok in toks {
            values.push(parse_f64(tok, ln)?);
        }
    }
    src.expect_end()?;
    StepKernel::new(m, values)
}

pub fn write_kernel<W: Write>(mut w: W, kernel: &StepKernel) -> Result<()> {
    let m = kernel.m();
    writeln!(w, "{m}")?;
    for i in 0..m {
        let mut row = String::new();
        for j in 0..m {
            if j > 0 {
                row.push(' ');
            }
            row.push_str(&format!("{}", kernel.get(i, j)));
        }
        writeln!(w, "{row}")?;
    }
    Ok(())
}

pub fn read_kernel_path(path: &Path) -> Result<StepKernel> {
    read_kernel(BufReader::new(File::open(path)?))
}

pub fn write_kernel_path(path: &Path, kernel: &StepKernel) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_kernel(&mut w, kernel)?;
    w.flush()?;
    Ok(())
}
