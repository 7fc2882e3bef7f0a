//! Coloring files: a `colors k` header line, then one digit per element.

use std::path::Path;

use crate::driver::Coloring;

#[derive(Debug, thiserror::Error)]
pub enum ColoringFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed header: expected \"colors k\" with 1 <= k <= 9")]
    Header,
    #[error("digit {digit} at position {position} out of range 1..{k}")]
    OutOfRange { digit: char, position: usize, k: u8 },
    #[error("unexpected byte 0x{byte:02x} at position {position}")]
    Byte { byte: u8, position: usize },
    #[error("empty coloring body")]
    Empty,
}

pub fn parse_coloring(text: &str) -> Result<Coloring, ColoringFileError> {
    let (header, body) = text.split_once('\n').ok_or(ColoringFileError::Header)?;
    let k = match header.strip_prefix("colors ").map(str::as_bytes) {
        Some(&[d @ b'1'..=b'9']) => d - b'0',
        _ => return Err(ColoringFileError::Header),
    };
    let body = body.strip_suffix('\n').unwrap_or(body);
    if body.is_empty() {
        return Err(ColoringFileError::Empty);
    }
    let mut assignment = Vec::with_capacity(body.len());
    for (i, b) in body.bytes().enumerate() {
        let position = i + 1;
        match b {
            b'0'..=b'9' if b - b'0' >= 1 && b - b'0' <= k => assignment.push(b - b'0'),
            b'0'..=b'9' => return Err(ColoringFileError::OutOfRange { digit: b as char, position, k }),
            _ => return Err(ColoringFileError::Byte { byte: b, position }),
        }
    }
    Ok(Coloring::Explicit { k: k as usize, assignment })
}

pub fn load_coloring(path: &Path) -> Result<Coloring, ColoringFileError> {
    let bytes = std::fs::read(path)
        .map_err(|source| ColoringFileError::Io { path: path.display().to_string(), source })?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let position = e.utf8_error().valid_up_to();
        ColoringFileError::Byte { byte: e.as_bytes()[position], position: position + 1 }
    })?;
    parse_coloring(&text)
}

pub fn format_coloring(k: usize, assignment: &[u8]) -> String {
    let digits: String = assignment.iter().map(|c| char::from(b'0' + c)).collect();
    format!("colors {k}\n{digits}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit(c: Coloring) -> (usize, Vec<u8>) {
        match c {
            Coloring::Explicit { k, assignment } => (k, assignment),
            Coloring::Symbolic { .. } => panic!(),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(explicit(parse_coloring("colors 2\n121212").unwrap()), (2, vec![1, 2, 1, 2, 1, 2]));
        assert!(matches!(
            parse_coloring("colors 2\n12132"),
            Err(ColoringFileError::OutOfRange { digit: '3', position: 4, .. })
        ));
        assert_eq!(explicit(parse_coloring("colors 1\n111\n").unwrap()), (1, vec![1, 1, 1]));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_coloring("colours 2\n12"), Err(ColoringFileError::Header)));
        assert!(matches!(parse_coloring("colors 0\n12"), Err(ColoringFileError::Header)));
        assert!(matches!(parse_coloring("colors 10\n12"), Err(ColoringFileError::Header)));
        assert!(matches!(parse_coloring("colors 2"), Err(ColoringFileError::Header)));
        assert!(matches!(parse_coloring("colors 2\n"), Err(ColoringFileError::Empty)));
        assert!(matches!(parse_coloring("colors 2\n12\n\n"), Err(ColoringFileError::Byte { byte: b'\n', .. })));
        assert!(matches!(parse_coloring("colors 2\n1 2"), Err(ColoringFileError::Byte { position: 2, .. })));
        assert!(matches!(parse_coloring("colors 2\n102"), Err(ColoringFileError::OutOfRange { .. })));
    }

    #[test]
    fn format_round_trips() {
        let text = format_coloring(2, &[1, 1, 2]);
        assert_eq!(explicit(parse_coloring(&text).unwrap()), (2, vec![1, 1, 2]));
    }
}
