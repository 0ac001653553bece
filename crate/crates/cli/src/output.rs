//! Output formatting and atomic file emission.

use std::fs;
use std::path::Path;

use crate::CliError;

/// 6-significant-digit formatting for human-readable text output.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Round-trip-exact formatting (17 significant digits) for CSV fields.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes to `path` via a sibling temp file and rename, so a failed run
/// never leaves a partial output file; `None` writes to stdout.
pub fn emit(target: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match target {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = std::path::PathBuf::from(tmp);
            fs::write(&tmp, contents)
                .and_then(|_| fs::rename(&tmp, path))
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(10.450583572185565), "10.4506");
        assert_eq!(sig6(0.025629215220634244), "0.0256292");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123456.789), "123457");
        assert_eq!(sig6(-0.5872935548852987), "-0.587294");
    }

    #[test]
    fn g17_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.237238248828511, -1e-17] {
            let s = g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
