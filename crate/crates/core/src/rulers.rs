//! Array geometries and their difference multisets.
//!
//! A [`Ruler`] is a set of distinct integer sensor positions together with the
//! grid size `N`; only residues mod `N` matter to the induced code. Positions
//! are 0-based and kept sorted. Bose-Chowla positions lie in `1..=q^2-2` and
//! are stored unreduced.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{find_irreducible, PrimePower};

/// How a ruler was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    BoseChowla { q: u64 },
    Ula,
    Custom,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::BoseChowla { q } => write!(f, "bose-chowla({q})"),
            Construction::Ula => write!(f, "ula"),
            Construction::Custom => write!(f, "custom"),
        }
    }
}

/// Sensor positions `d_1 < ... < d_M` (half-wavelength units) on a grid of size `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ruler {
    positions: Vec<u64>,
    modulus: u64,
    label: Construction,
}

impl Ruler {
    /// Validates and sorts `positions`. Requires `M >= 1`, `N >= 2`, distinct
    /// positions and every position below `N`.
    pub fn new(mut positions: Vec<u64>, modulus: u64, label: Construction) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidRuler(
                "a ruler needs at least one position".into(),
            ));
        }
        if modulus < 2 {
            return Err(Error::InvalidRuler(format!(
                "grid size N = {modulus} must be at least 2"
            )));
        }
        positions.sort_unstable();
        if let Some(w) = positions.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidRuler(format!("duplicate position {}", w[0])));
        }
        if let Some(&d) = positions.last().filter(|&&d| d >= modulus) {
            return Err(Error::InvalidRuler(format!(
                "position {d} is not below N = {modulus}"
            )));
        }
        Ok(Self {
            positions,
            modulus,
            label,
        })
    }

    pub fn custom(positions: Vec<u64>, modulus: u64) -> Result<Self> {
        Self::new(positions, modulus, Construction::Custom)
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    /// Grid size `N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of sensors `M`.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn label(&self) -> Construction {
        self.label
    }

    /// Ordered-pair differences modulo `N`.
    pub fn differences(&self) -> DifferenceMultiset {
        difference_multiset(self)
    }
}

/// Writes the ruler file format: `N=<modulus>` then the positions on one line.
impl fmt::Display for Ruler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N={}", self.modulus)?;
        let line: Vec<String> = self.positions.iter().map(u64::to_string).collect();
        writeln!(f, "{}", line.join(" "))
    }
}

impl FromStr for Ruler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ruler(s)
    }
}

/// Bose-Chowla Golomb ruler `{ i in 1..=q^2-2 : g^i - g in GF(q) }` for the
/// canonical primitive element `g` of `GF(q^2)`, on the grid `N = q^2 - 1`.
pub fn bose_chowla(q: u64) -> Result<Ruler> {
    let pp = PrimePower::new(q)?;
    let ctx = find_irreducible(pp.p(), 2 * pp.n() as usize)?;
    let g = ctx.find_primitive();
    let n = q * q - 1;
    let mut positions = Vec::with_capacity(q as usize);
    let mut power = g.clone();
    for i in 1..n {
        let diff = ctx.sub_raw(&power, &g);
        if ctx.in_subfield(&diff, q)? {
            positions.push(i);
        }
        power = ctx.mul_raw(&power, &g);
    }
    debug_assert_eq!(positions.len() as u64, q);
    Ruler::new(positions, n, Construction::BoseChowla { q })
}

/// Uniform linear array `{0, 1, ..., M-1}` on a grid of size `N`.
pub fn ula(m: u64, n: u64) -> Result<Ruler> {
    if m == 0 || m > n {
        return Err(Error::InvalidRuler(format!(
            "ULA needs 1 <= M <= N, got M = {m}, N = {n}"
        )));
    }
    Ruler::new((0..m).collect(), n, Construction::Ula)
}

/// Multiplicities of `(d_i - d_l) mod N` over ordered pairs `i != l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMultiset {
    modulus: u64,
    counts: BTreeMap<u64, u64>,
}

impl DifferenceMultiset {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn count(&self, residue: u64) -> u64 {
        self.counts.get(&residue).copied().unwrap_or(0)
    }

    /// Sum of all multiplicities, `M(M-1)`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Residues with nonzero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }

    /// `(residue, multiplicity)` pairs, ascending by residue.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&r, &c)| (r, c))
    }
}

pub fn difference_multiset(r: &Ruler) -> DifferenceMultiset {
    let n = r.modulus;
    let mut counts = BTreeMap::new();
    for (i, &a) in r.positions.iter().enumerate() {
        for (l, &b) in r.positions.iter().enumerate() {
            if i != l {
                *counts.entry((a % n + n - b % n) % n).or_insert(0) += 1;
            }
        }
    }
    DifferenceMultiset { modulus: n, counts }
}

/// First residue at which a ruler departs from the perfect-difference pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferenceDefect {
    /// The residue occurs more than once.
    Repeated { residue: u64, multiplicity: u64 },
    /// A nonzero residue not divisible by `q + 1` never occurs.
    Missing { residue: u64 },
    /// Zero or a multiple of `q + 1` occurs.
    Unexpected { residue: u64 },
}

impl fmt::Display for DifferenceDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DifferenceDefect::Repeated {
                residue,
                multiplicity,
            } => {
                write!(f, "residue {residue} occurs {multiplicity} times")
            }
            DifferenceDefect::Missing { residue } => write!(f, "residue {residue} is missing"),
            DifferenceDefect::Unexpected { residue } => {
                write!(f, "residue {residue} should not occur")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectDifferenceReport {
    pub q: u64,
    pub holds: bool,
    /// Number of distinct residues among the differences.
    pub support_size: u64,
    pub witness: Option<DifferenceDefect>,
}

/// Checks that the differences mod `q^2 - 1` cover every nonzero residue not
/// divisible by `q + 1` exactly once and nothing else.
pub fn verify_perfect_difference(r: &Ruler, q: u64) -> Result<PerfectDifferenceReport> {
    let expected_n = q.checked_mul(q).map(|s| s - 1);
    if q < 2 || expected_n != Some(r.modulus) {
        return Err(Error::InvalidConfig(format!(
            "perfect-difference check for q = {q} needs N = q^2 - 1, ruler has N = {}",
            r.modulus
        )));
    }
    let diffs = difference_multiset(r);
    let witness = (0..r.modulus).find_map(|residue| {
        let c = diffs.count(residue);
        let wanted = residue != 0 && residue % (q + 1) != 0;
        if c > 1 {
            Some(DifferenceDefect::Repeated {
                residue,
                multiplicity: c,
            })
        } else if wanted && c == 0 {
            Some(DifferenceDefect::Missing { residue })
        } else if !wanted && c > 0 {
            Some(DifferenceDefect::Unexpected { residue })
        } else {
            None
        }
    });
    Ok(PerfectDifferenceReport {
        q,
        holds: witness.is_none(),
        support_size: diffs.counts.len() as u64,
        witness,
    })
}

/// `true` iff all pairwise differences (as integers, no modulus) are distinct.
pub fn is_golomb(r: &Ruler) -> bool {
    let mut seen = HashSet::new();
    for (i, &a) in r.positions.iter().enumerate() {
        for &b in &r.positions[i + 1..] {
            if !seen.insert(b - a) {
                return false;
            }
        }
    }
    true
}

/// `true` iff all ordered-pair differences are distinct modulo `N`.
pub fn is_modular_golomb(r: &Ruler) -> bool {
    difference_multiset(r).iter().all(|(_, c)| c == 1)
}

/// Parses the ruler file format:
///
/// ```text
/// # comment
/// N=8
/// 1 6 7
/// ```
///
/// Blank lines and lines starting with `#` are ignored. Positions must be
/// strictly ascending and below `N`.
pub fn parse_ruler(text: &str) -> Result<Ruler> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let (n_line, header) = content
        .next()
        .ok_or_else(|| err(1, "missing `N=<integer>` header".into()))?;
    let n = header
        .strip_prefix('N')
        .map(str::trim_start)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| err(n_line, format!("expected `N=<integer>`, found `{header}`")))?
        .trim()
        .parse::<u64>()
        .map_err(|e| err(n_line, format!("invalid grid size: {e}")))?;
    if n < 2 {
        return Err(err(n_line, format!("grid size N = {n} must be at least 2")));
    }

    let (p_line, body) = content
        .next()
        .ok_or_else(|| err(n_line + 1, "missing positions line".into()))?;
    let mut positions: Vec<u64> = Vec::new();
    for tok in body.split_whitespace() {
        let d: u64 = tok
            .parse()
            .map_err(|_| err(p_line, format!("invalid position `{tok}`")))?;
        if d >= n {
            return Err(err(p_line, format!("position {d} is not below N = {n}")));
        }
        match positions.last() {
            Some(&prev) if prev == d => return Err(err(p_line, format!("duplicate position {d}"))),
            Some(&prev) if prev > d => {
                return Err(err(
                    p_line,
                    format!("positions must be ascending, {d} follows {prev}"),
                ))
            }
            _ => positions.push(d),
        }
    }
    if positions.is_empty() {
        return Err(err(p_line, "no positions given".into()));
    }
    if let Some((line, extra)) = content.next() {
        return Err(err(line, format!("unexpected content `{extra}`")));
    }
    Ruler::custom(positions, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::is_prime_power;

    #[test]
    fn bose_chowla_small() {
        let r2 = bose_chowla(2).unwrap();
        assert_eq!(r2.positions(), &[1, 2]);
        assert_eq!(r2.modulus(), 3);
        let r3 = bose_chowla(3).unwrap();
        assert_eq!(r3.positions(), &[1, 6, 7]);
        assert_eq!(r3.modulus(), 8);
        assert_eq!(r3.label(), Construction::BoseChowla { q: 3 });
        // frozen from an independent brute-force construction (Python, exhaustive orders)
        assert_eq!(bose_chowla(4).unwrap().positions(), &[1, 2, 4, 8]);
        assert_eq!(bose_chowla(5).unwrap().positions(), &[1, 3, 4, 8, 17]);
        assert_eq!(
            bose_chowla(7).unwrap().positions(),
            &[1, 12, 22, 29, 31, 34, 35]
        );
        assert_eq!(
            bose_chowla(8).unwrap().positions(),
            &[1, 6, 8, 14, 38, 48, 49, 52]
        );
        assert_eq!(
            bose_chowla(9).unwrap().positions(),
            &[1, 22, 36, 37, 44, 49, 53, 55, 78]
        );
    }

    #[test]
    fn bose_chowla_rejects_non_prime_powers() {
        assert_eq!(bose_chowla(6), Err(Error::NotPrimePower { q: 6 }));
        assert!(bose_chowla(1).is_err());
        assert!(bose_chowla(0).is_err());
    }

    #[test]
    fn bose_chowla_properties_up_to_50() {
        for q in (2..=50).filter(|&q| is_prime_power(q)) {
            let r = bose_chowla(q).unwrap();
            assert_eq!(r.len() as u64, q);
            assert!(*r.positions().last().unwrap() <= q * q - 2);
            let rep = verify_perfect_difference(&r, q).unwrap();
            assert!(rep.holds, "q = {q}: {:?}", rep.witness);
            assert_eq!(rep.support_size, q * (q - 1));
            assert!(is_golomb(&r));
            assert_eq!(bose_chowla(q).unwrap(), r);
        }
    }

    #[test]
    fn ula_examples() {
        assert_eq!(ula(3, 8).unwrap().positions(), &[0, 1, 2]);
        assert_eq!(ula(1, 2).unwrap().positions(), &[0]);
        assert_eq!(
            ula(19, 360).unwrap().positions(),
            (0..19).collect::<Vec<_>>().as_slice()
        );
        assert!(ula(9, 8).is_err());
        assert!(ula(0, 8).is_err());
        assert!(ula(1, 1).is_err());
    }

    #[test]
    fn difference_examples() {
        let d = difference_multiset(&bose_chowla(2).unwrap());
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
        let d = difference_multiset(&ula(3, 8).unwrap());
        assert_eq!(
            d.iter().collect::<Vec<_>>(),
            vec![(1, 2), (2, 1), (6, 1), (7, 2)]
        );
        let d = difference_multiset(&bose_chowla(3).unwrap());
        assert_eq!(
            d.iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 1), (3, 1), (5, 1), (6, 1), (7, 1)]
        );
        assert_eq!(d.total(), 6);
    }

    #[test]
    fn ula_difference_support() {
        for (m, n) in [(3u64, 8u64), (5, 24), (19, 360)] {
            let d = difference_multiset(&ula(m, n).unwrap());
            for k in 1..m {
                assert_eq!(d.count(k), m - k);
                assert_eq!(d.count(n - k), m - k);
            }
            assert_eq!(d.support().count() as u64, 2 * (m - 1));
        }
    }

    #[test]
    fn perfect_difference_witnesses() {
        let rep = verify_perfect_difference(&bose_chowla(3).unwrap(), 3).unwrap();
        assert!(rep.holds);
        let rep = verify_perfect_difference(&ula(3, 8).unwrap(), 3).unwrap();
        assert!(!rep.holds);
        assert_eq!(
            rep.witness,
            Some(DifferenceDefect::Repeated {
                residue: 1,
                multiplicity: 2
            })
        );
        // differences of {0, 4, 5} mod 8 are {1, 3, 4, 4, 5, 7}
        let bad = Ruler::custom(vec![0, 4, 5], 8).unwrap();
        let rep = verify_perfect_difference(&bad, 3).unwrap();
        assert_eq!(rep.witness, Some(DifferenceDefect::Missing { residue: 2 }));
        let bad = Ruler::custom(vec![0, 4], 8).unwrap();
        let rep = verify_perfect_difference(&bad, 3).unwrap();
        assert_eq!(rep.witness, Some(DifferenceDefect::Missing { residue: 1 }));
        // 1..=4 occur once each, then 5 = q + 1 occurs as (1 - 11) mod 15
        let bad = Ruler::custom(vec![0, 1, 3, 11], 15).unwrap();
        let rep = verify_perfect_difference(&bad, 4).unwrap();
        assert_eq!(
            rep.witness,
            Some(DifferenceDefect::Unexpected { residue: 5 })
        );
        assert!(verify_perfect_difference(&bad, 3).is_err());
    }

    #[test]
    fn golomb_examples() {
        assert!(is_golomb(&Ruler::custom(vec![0, 1, 3], 8).unwrap()));
        assert!(!is_golomb(&ula(3, 8).unwrap()));
        assert!(is_modular_golomb(&bose_chowla(5).unwrap()));
        assert!(!is_modular_golomb(&ula(3, 8).unwrap()));
    }

    #[test]
    fn parse_examples() {
        let r = parse_ruler("N=8\n1 6 7").unwrap();
        assert_eq!(r.positions(), &[1, 6, 7]);
        assert_eq!(r.modulus(), 8);
        assert_eq!(r.label(), Construction::Custom);

        let r = parse_ruler("# Bose-Chowla q=3\n\nN = 8\n  1 6   7 \n# trailing\n").unwrap();
        assert_eq!(r.positions(), &[1, 6, 7]);

        assert!(
            matches!(parse_ruler("N=8\n1 1 7"), Err(Error::Parse { line: 2, msg }) if msg.contains("duplicate"))
        );
        assert!(
            matches!(parse_ruler("N=8\n9"), Err(Error::Parse { line: 2, msg }) if msg.contains("not below"))
        );
        assert!(matches!(
            parse_ruler("M=8\n1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_ruler("N=x\n1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_ruler("N=8"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_ruler("N=8\n1 a"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_ruler("N=8\n3 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_ruler("N=8\n1 2\n3"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_ruler("N=1\n0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_ruler(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn display_is_the_file_format() {
        let r = bose_chowla(3).unwrap();
        assert_eq!(r.to_string(), "N=8\n1 6 7\n");
        let back: Ruler = r.to_string().parse().unwrap();
        assert_eq!(back.positions(), r.positions());
    }
}
