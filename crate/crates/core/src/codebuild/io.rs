//! Text file formats for generator matrices and codeword lists.
//!
//! ```text
//! hermgrass-gen v1 family=H p=2 e=1 ell=2 k=6 n=16 modulus=111
//! <k lines of n space-separated element indices>
//! ```
//!
//! Codeword files use the magic `hermgrass-words v1`, carry `words=<count>` in place of
//! `k=`, and hold one codeword per line.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{CodeFamily, CodeSpec, Codeword, GeneratorMatrix};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTower};

pub const GENERATOR_MAGIC: &str = "hermgrass-gen v1";
pub const WORDS_MAGIC: &str = "hermgrass-words v1";

struct Header {
    family: CodeFamily,
    tower: Arc<FieldTower>,
    ell: usize,
    count: usize,
    n: usize,
}

fn write_row<W: Write>(w: &mut W, row: &[FieldElement]) -> Result<()> {
    let line: Vec<String> = row.iter().map(|x| x.index().to_string()).collect();
    writeln!(w, "{}", line.join(" "))?;
    Ok(())
}

pub fn write_generator<W: Write>(g: &GeneratorMatrix, mut w: W) -> Result<()> {
    writeln!(w, "{}", g.header())?;
    for row in g.rows() {
        write_row(&mut w, row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_codewords<W: Write>(
    tower: &FieldTower,
    spec: CodeSpec,
    words: &[Codeword],
    mut w: W,
) -> Result<()> {
    let n = words.first().map_or(spec.n() as usize, Codeword::len);
    let p = tower.params();
    writeln!(
        w,
        "{WORDS_MAGIC} family={} p={} e={} ell={} words={} n={} modulus={}",
        spec.family.letter(),
        p.p,
        p.e,
        spec.ell,
        words.len(),
        n,
        p.modulus_digits()
    )?;
    for c in words {
        if c.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: c.len(),
            });
        }
        write_row(&mut w, &c.symbols)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_header(line: &str, magic: &str, count_key: &str) -> Result<Header> {
    let rest = line
        .trim_end()
        .strip_prefix(magic)
        .ok_or_else(|| Error::Parse(format!("expected header starting with {magic:?}")))?;
    let fields: HashMap<&str, &str> = rest
        .split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header field {kv:?}")))
        })
        .collect::<Result<_>>()?;
    let get = |key: &str| -> Result<&str> {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| Error::Parse(format!("header lacks {key}=")))
    };
    let num = |key: &str| -> Result<usize> {
        get(key)?
            .parse()
            .map_err(|_| Error::Parse(format!("{key} is not a number")))
    };
    let family = CodeFamily::from_letter(get("family")?)?;
    let tower = FieldTower::new(num("p")? as u32, num("e")? as u32)?;
    let modulus = get("modulus")?;
    if modulus != tower.params().modulus_digits() {
        return Err(Error::Parse(format!(
            "modulus {modulus} differs from the shipped modulus {}",
            tower.params().modulus_digits()
        )));
    }
    Ok(Header {
        family,
        tower: Arc::new(tower),
        ell: num("ell")?,
        count: num(count_key)?,
        n: num("n")?,
    })
}

fn parse_rows<R: BufRead>(lines: &mut std::io::Lines<R>, h: &Header) -> Result<Vec<Vec<FieldElement>>> {
    let mut rows = Vec::with_capacity(h.count);
    for r in 0..h.count {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} rows, found {r}", h.count)))??;
        let row: Vec<FieldElement> = line
            .split_whitespace()
            .map(|tok| {
                let v: u32 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad symbol {tok:?} in row {r}")))?;
                h.tower.element(v)
            })
            .collect::<Result<_>>()?;
        if row.len() != h.n {
            return Err(Error::Parse(format!(
                "row {r} has {} symbols, expected {}",
                row.len(),
                h.n
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a generator file and re-certifies its rank.
pub fn read_generator<R: BufRead>(r: R) -> Result<GeneratorMatrix> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let h = parse_header(&first, GENERATOR_MAGIC, "k")?;
    let rows = parse_rows(&mut lines, &h)?;
    GeneratorMatrix::from_rows(h.tower.clone(), h.family, h.ell, rows)
}

pub fn read_codewords<R: BufRead>(r: R) -> Result<(Arc<FieldTower>, CodeSpec, Vec<Codeword>)> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let h = parse_header(&first, WORDS_MAGIC, "words")?;
    let spec = CodeSpec {
        family: h.family,
        q: h.tower.q(),
        ell: h.ell,
    };
    let words = parse_rows(&mut lines, &h)?
        .into_iter()
        .map(|s| Codeword::new(spec, s))
        .collect();
    Ok((h.tower, spec, words))
}
