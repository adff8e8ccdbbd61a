//! FCIDUMP reading and writing (chemists' notation, 1-based orbital indices).

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::integrals::{IntegralSet, TwoBody};
use super::ChemError;

fn header_error(message: impl Into<String>) -> ChemError {
    ChemError::Fcidump {
        line: 0,
        message: message.into(),
    }
}

/// Parse an FCIDUMP file into an MO-basis integral set and the electron count.
///
/// Unlisted permutations of a two-electron integral are filled in from the
/// 8-fold symmetry. The `0 0 0 0` entry is the constant (nuclear) energy.
pub fn read_fcidump(text: &str) -> Result<(IntegralSet, usize), ChemError> {
    let upper = text.to_ascii_uppercase();
    let start = upper
        .find("&FCI")
        .ok_or_else(|| header_error("missing &FCI namelist"))?;
    let (end, end_len) = ["&END", "/"]
        .iter()
        .filter_map(|tok| upper[start..].find(tok).map(|i| (start + i, tok.len())))
        .min()
        .ok_or_else(|| header_error("unterminated &FCI namelist"))?;
    let header = &upper[start + 4..end];

    let mut fields: HashMap<String, String> = HashMap::new();
    let mut current: Option<String> = None;
    for token in header.split(|c: char| c == ',' || c.is_whitespace()) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim().to_string();
            fields.insert(key.clone(), value.trim().to_string());
            current = Some(key);
        } else if let Some(key) = &current {
            // continuation of a list value such as ORBSYM
            let entry = fields.entry(key.clone()).or_default();
            entry.push(',');
            entry.push_str(token);
        }
    }
    let get_usize = |key: &str| -> Result<usize, ChemError> {
        let raw = fields
            .get(key)
            .ok_or_else(|| header_error(format!("missing {key}")))?;
        raw.trim_matches(|c| c == ',' || c == ' ')
            .parse()
            .map_err(|_| header_error(format!("bad {key} value {raw:?}")))
    };
    let norb = get_usize("NORB")?;
    let nelec = get_usize("NELEC")?;

    let body_offset = end + end_len;
    let line_base = text[..body_offset].lines().count();
    let mut one_body = DMatrix::zeros(norb, norb);
    let mut two_body = TwoBody::zeros(norb);
    let mut e_nuclear = 0.0;
    for (k, line) in text[body_offset..].lines().enumerate() {
        let lineno = line_base + k;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.is_empty() {
            continue;
        }
        if parts.len() != 5 {
            return Err(ChemError::Fcidump {
                line: lineno,
                message: format!("expected `value i j k l`, got {line:?}"),
            });
        }
        let value: f64 = parts[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| ChemError::Fcidump {
                line: lineno,
                message: format!("bad value {:?}", parts[0]),
            })?;
        let mut idx = [0usize; 4];
        for (slot, p) in idx.iter_mut().zip(&parts[1..]) {
            *slot = p.parse().map_err(|_| ChemError::Fcidump {
                line: lineno,
                message: format!("bad index {p:?}"),
            })?;
            if *slot > norb {
                return Err(ChemError::IndexOutOfRange {
                    index: *slot,
                    norb,
                    line: lineno,
                });
            }
        }
        match idx {
            [0, 0, 0, 0] => e_nuclear += value,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                one_body[(i - 1, j - 1)] = value;
                one_body[(j - 1, i - 1)] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                two_body.set_symmetric(i - 1, j - 1, k - 1, l - 1, value);
            }
            // orbital-energy lines (i 0 0 0) carry no Hamiltonian data
            [_, 0, 0, 0] => {}
            _ => {
                return Err(ChemError::Fcidump {
                    line: lineno,
                    message: format!("unsupported index pattern {idx:?}"),
                })
            }
        }
    }
    Ok((
        IntegralSet {
            n_orbitals: norb,
            one_body,
            two_body,
            overlap: DMatrix::identity(norb, norb),
            e_nuclear,
            basis_label: "fcidump/mo".into(),
        },
        nelec,
    ))
}

/// Write an integral set as FCIDUMP, listing each symmetry-unique entry
/// whose magnitude exceeds `threshold`.
pub fn write_fcidump(ints: &IntegralSet, n_electrons: usize, threshold: f64) -> String {
    let n = ints.n_orbitals;
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={n_electrons},MS2=0,");
    let _ = writeln!(out, "  ORBSYM={}", vec!["1"; n].join(","));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, " &END");
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair(i, j) < pair(k, l) {
                        continue;
                    }
                    let v = ints.two_body.get(i, j, k, l);
                    if v.abs() > threshold {
                        let _ = writeln!(out, "{v:24.16e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = ints.one_body[(i, j)];
            if v.abs() > threshold {
                let _ = writeln!(out, "{v:24.16e} {} {} 0 0", i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(out, "{:24.16e} 0 0 0 0", ints.e_nuclear);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_only() {
        let text = " &FCI NORB=2,NELEC=2,\n &END\n 0.7299 0 0 0 0\n";
        let (ints, n) = read_fcidump(text).unwrap();
        assert_eq!(n, 2);
        assert_eq!(ints.e_nuclear, 0.7299);
        assert_eq!(ints.one_body.amax(), 0.0);
        assert_eq!(ints.two_body.max_abs_diff(&TwoBody::zeros(2)), 0.0);
    }

    #[test]
    fn header_errors() {
        assert!(read_fcidump("0.5 1 1 1 1\n").is_err());
        let missing = " &FCI NORB=2,\n &END\n";
        assert!(matches!(read_fcidump(missing), Err(ChemError::Fcidump { .. })));
        let range = " &FCI NORB=2,NELEC=2,\n &END\n 0.1 3 1 0 0\n";
        assert!(matches!(
            read_fcidump(range),
            Err(ChemError::IndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn multi_line_header_and_fortran_exponents() {
        let text = "&FCI NORB=  2,NELEC=2,MS2=0,\n ORBSYM=1,\n 1,\n ISYM=1\n/\n 1.0D-1 1 1 1 1\n -1.25 1 1 0 0\n";
        let (ints, _) = read_fcidump(text).unwrap();
        assert_eq!(ints.two_body.get(0, 0, 0, 0), 0.1);
        assert_eq!(ints.one_body[(0, 0)], -1.25);
    }
}
