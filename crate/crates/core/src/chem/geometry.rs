//! Molecular geometries: XYZ parsing and the parametric hydrogen-cluster presets.

use std::f64::consts::PI;
use std::fmt;

use super::ChemError;

/// Bohr radius in Ångström.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;

const ELEMENTS: [&str; 18] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar",
];

/// Nuclear charge of a supported element symbol.
pub fn atomic_number(symbol: &str) -> Option<u32> {
    ELEMENTS
        .iter()
        .position(|e| e.eq_ignore_ascii_case(symbol))
        .map(|i| i as u32 + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub symbol: String,
    /// Position in Å.
    pub position: [f64; 3],
}

impl Atom {
    pub fn hydrogen(position: [f64; 3]) -> Self {
        Atom {
            symbol: "H".to_string(),
            position,
        }
    }

    pub fn position_bohr(&self) -> [f64; 3] {
        self.position.map(|x| x / BOHR_ANGSTROM)
    }
}

/// A set of atoms with a total charge. Closed-shell occupations are assumed
/// downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub atoms: Vec<Atom>,
    pub charge: i32,
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Geometry {
    pub fn new(atoms: Vec<Atom>, charge: i32) -> Result<Self, ChemError> {
        if atoms.is_empty() {
            return Err(ChemError::InvalidGeometry("no atoms".into()));
        }
        for atom in &atoms {
            if atomic_number(&atom.symbol).is_none() {
                return Err(ChemError::UnknownElement(atom.symbol.clone()));
            }
        }
        for i in 0..atoms.len() {
            for j in 0..i {
                if distance(&atoms[i].position, &atoms[j].position) <= 1e-8 {
                    return Err(ChemError::InvalidGeometry(format!(
                        "atoms {j} and {i} coincide"
                    )));
                }
            }
        }
        Ok(Geometry { atoms, charge })
    }

    /// H₂ with bond length `r` (Å) along z.
    pub fn h2(r: f64) -> Self {
        Geometry {
            atoms: vec![
                Atom::hydrogen([0.0, 0.0, 0.0]),
                Atom::hydrogen([0.0, 0.0, r]),
            ],
            charge: 0,
        }
    }

    /// Square H₄ of side `r` in the xy plane, centred on the origin.
    pub fn h4_square(r: f64) -> Self {
        let h = r / 2.0;
        Geometry {
            atoms: vec![
                Atom::hydrogen([h, h, 0.0]),
                Atom::hydrogen([-h, h, 0.0]),
                Atom::hydrogen([-h, -h, 0.0]),
                Atom::hydrogen([h, -h, 0.0]),
            ],
            charge: 0,
        }
    }

    /// Equidistant linear H₄ with spacing `r` along x.
    pub fn h4_chain(r: f64) -> Self {
        Geometry {
            atoms: (0..4)
                .map(|i| Atom::hydrogen([(i as f64 - 1.5) * r, 0.0, 0.0]))
                .collect(),
            charge: 0,
        }
    }

    /// Regular hexagonal H₆ of side `r` in the xy plane.
    pub fn h6_hexagon(r: f64) -> Self {
        Geometry {
            atoms: (0..6)
                .map(|i| {
                    let phi = PI / 3.0 * i as f64;
                    Atom::hydrogen([r * phi.cos(), r * phi.sin(), 0.0])
                })
                .collect(),
            charge: 0,
        }
    }

    pub fn n_electrons(&self) -> i64 {
        let z: i64 = self
            .atoms
            .iter()
            .map(|a| atomic_number(&a.symbol).unwrap_or(0) as i64)
            .sum();
        z - self.charge as i64
    }

    /// All pairwise distances `(i, j, r_ij)` with `i < j`, in Å.
    pub fn pair_distances(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for j in 0..self.atoms.len() {
            for i in 0..j {
                out.push((i, j, distance(&self.atoms[i].position, &self.atoms[j].position)));
            }
        }
        out
    }

    /// Σ_{i<j} Z_i Z_j / r_ij in Hartree.
    pub fn nuclear_repulsion(&self) -> f64 {
        self.pair_distances()
            .into_iter()
            .map(|(i, j, r)| {
                let zi = atomic_number(&self.atoms[i].symbol).unwrap_or(0) as f64;
                let zj = atomic_number(&self.atoms[j].symbol).unwrap_or(0) as f64;
                zi * zj / (r / BOHR_ANGSTROM)
            })
            .sum()
    }

    /// Parse an XYZ file: atom count, comment line, then `symbol x y z` lines in Å.
    pub fn parse_xyz(text: &str) -> Result<Self, ChemError> {
        let mut lines = text.lines();
        let count_line = lines
            .next()
            .filter(|l| !l.trim().is_empty())
            .ok_or_else(|| ChemError::Parse {
                line: 1,
                message: "missing atom count".into(),
            })?;
        let count: usize = count_line.trim().parse().map_err(|_| ChemError::Parse {
            line: 1,
            message: format!("bad atom count {:?}", count_line.trim()),
        })?;
        // comment
        lines.next();
        let mut atoms = Vec::with_capacity(count);
        for (k, line) in lines.enumerate() {
            let lineno = k + 3;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() < 4 {
                return Err(ChemError::Parse {
                    line: lineno,
                    message: format!("expected `symbol x y z`, got {line:?}"),
                });
            }
            if atomic_number(fields[0]).is_none() {
                return Err(ChemError::UnknownElement(fields[0].to_string()));
            }
            let mut position = [0.0; 3];
            for (slot, field) in position.iter_mut().zip(&fields[1..4]) {
                *slot = field.parse().map_err(|_| ChemError::Parse {
                    line: lineno,
                    message: format!("bad coordinate {field:?}"),
                })?;
            }
            let mut symbol = fields[0].to_ascii_lowercase();
            symbol[..1].make_ascii_uppercase();
            atoms.push(Atom { symbol, position });
        }
        if atoms.len() != count {
            return Err(ChemError::AtomCountMismatch {
                declared: count,
                found: atoms.len(),
            });
        }
        Geometry::new(atoms, 0)
    }

    /// Atom permutations that preserve every interatomic distance and element.
    /// For point sets these are exactly the permutations induced by the point
    /// group. The identity is always first.
    pub fn symmetry_permutations(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| distance(&self.atoms[i].position, &self.atoms[j].position))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_permutation(&dist, &mut perm, &mut used, &mut out);
        out
    }

    fn extend_permutation(
        &self,
        dist: &[Vec<f64>],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.atoms.len();
        let i = perm.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for candidate in 0..n {
            if used[candidate] || self.atoms[candidate].symbol != self.atoms[i].symbol {
                continue;
            }
            let consistent = perm
                .iter()
                .enumerate()
                .all(|(j, &pj)| (dist[i][j] - dist[candidate][pj]).abs() < 1e-6);
            if !consistent {
                continue;
            }
            used[candidate] = true;
            perm.push(candidate);
            self.extend_permutation(dist, perm, used, out);
            perm.pop();
            used[candidate] = false;
        }
    }
}

impl fmt::Display for Geometry {
    /// XYZ format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.atoms.len())?;
        writeln!(f, "charge {}", self.charge)?;
        for atom in &self.atoms {
            let [x, y, z] = atom.position;
            writeln!(f, "{} {x:.10} {y:.10} {z:.10}", atom.symbol)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_h2() {
        let g = Geometry::parse_xyz("2\nH2\nH 0 0 0\nH 0 0 0.725\n").unwrap();
        let d = g.pair_distances();
        assert_eq!(d.len(), 1);
        assert!((d[0].2 - 0.725).abs() < 1e-12);
        assert_eq!(g.n_electrons(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Geometry::parse_xyz(""), Err(ChemError::Parse { .. })));
        assert!(matches!(
            Geometry::parse_xyz("3\n\nH 0 0 0\nH 0 0 1\n"),
            Err(ChemError::AtomCountMismatch { declared: 3, found: 2 })
        ));
        assert!(matches!(
            Geometry::parse_xyz("1\n\nQq 0 0 0\n"),
            Err(ChemError::UnknownElement(_))
        ));
        assert!(matches!(
            Geometry::parse_xyz("1\n\nH 0 zero 0\n"),
            Err(ChemError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn square_has_four_equal_edges() {
        let g = Geometry::h4_square(1.2);
        assert_eq!(g.atoms.len(), 4);
        let edges: Vec<f64> = g
            .pair_distances()
            .into_iter()
            .map(|(_, _, r)| r)
            .filter(|r| (r - 1.2).abs() < 1e-9)
            .collect();
        assert_eq!(edges.len(), 4);
    }

    #[test]
    fn hexagon_side_and_round_trip() {
        let g = Geometry::h6_hexagon(0.99);
        let nn = g
            .pair_distances()
            .into_iter()
            .filter(|(_, _, r)| (r - 0.99).abs() < 1e-9)
            .count();
        assert_eq!(nn, 6);
        let back = Geometry::parse_xyz(&g.to_string()).unwrap();
        for (a, b) in g.atoms.iter().zip(&back.atoms) {
            for k in 0..3 {
                assert!((a.position[k] - b.position[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn symmetry_group_orders() {
        assert_eq!(Geometry::h2(0.7).symmetry_permutations().len(), 2);
        assert_eq!(Geometry::h4_square(1.0).symmetry_permutations().len(), 8);
        assert_eq!(Geometry::h4_chain(1.0).symmetry_permutations().len(), 2);
        assert_eq!(Geometry::h6_hexagon(1.0).symmetry_permutations().len(), 12);
    }
}
