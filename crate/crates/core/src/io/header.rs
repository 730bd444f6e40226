use std::io::BufRead;

use crate::{Error, Result};

/// Whitespace-separated header tokens of the netpbm family, with `#`
/// comments. Stops after exactly one whitespace byte following the last
/// token, where binary data begins.
pub(crate) fn read_tokens(r: &mut impl BufRead, count: usize, what: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::with_capacity(count);
    let mut cur = Vec::new();
    loop {
        let byte =
            next_byte(r)?.ok_or_else(|| Error::format(format!("{what}: truncated header")))?;
        if byte == b'#' && cur.is_empty() {
            // comment to end of line
            loop {
                match next_byte(r)? {
                    Some(b'\n') | Some(b'\r') => break,
                    Some(_) => {}
                    None => return Err(Error::format(format!("{what}: truncated header"))),
                }
            }
            continue;
        }
        if byte.is_ascii_whitespace() {
            if !cur.is_empty() {
                tokens.push(
                    String::from_utf8(std::mem::take(&mut cur))
                        .map_err(|_| Error::format(format!("{what}: header is not ASCII")))?,
                );
                if tokens.len() == count {
                    return Ok(tokens);
                }
            }
        } else {
            cur.push(byte);
            if cur.len() > 64 {
                return Err(Error::format(format!("{what}: header token too long")));
            }
        }
    }
}

fn next_byte(r: &mut impl BufRead) -> Result<Option<u8>> {
    let buf = r.fill_buf()?;
    if buf.is_empty() {
        return Ok(None);
    }
    let b = buf[0];
    r.consume(1);
    Ok(Some(b))
}

pub(crate) fn parse_dim(tok: &str, what: &str) -> Result<usize> {
    let n: usize = tok
        .parse()
        .map_err(|_| Error::format(format!("{what}: bad dimension {tok:?}")))?;
    if n == 0 || n > 1 << 16 {
        return Err(Error::format(format!("{what}: dimension {n} out of range")));
    }
    Ok(n)
}
