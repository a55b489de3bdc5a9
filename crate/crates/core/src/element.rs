//! Periodic table data used by the parser, valence model, and descriptors.
//!
//! Atomic weights are standard atomic weights rounded to three decimals; for
//! elements without a standard weight the mass number of the most stable
//! isotope is used.

/// Static per-element data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub atomic_number: u8,
    pub symbol: &'static str,
    /// Average atomic weight in Da.
    pub weight: f64,
    /// Allowed total valences for neutral atoms, ascending. Empty means the
    /// valence model does not constrain this element.
    pub default_valences: &'static [u8],
    /// Writable without brackets (B, C, N, O, P, S and the halogens).
    pub organic_subset: bool,
    /// May carry the aromatic flag (lowercase symbol).
    pub aromatic_eligible: bool,
}

macro_rules! elements {
    ($( $num:literal $sym:literal $w:literal [$($v:literal),*] $org:literal $arom:literal ; )*) => {
        pub const ELEMENTS: &[Element] = &[
            $( Element {
                atomic_number: $num,
                symbol: $sym,
                weight: $w,
                default_valences: &[$($v),*],
                organic_subset: $org,
                aromatic_eligible: $arom,
            }, )*
        ];
    };
}

elements! {
    1   "H"  1.008   [1]       false false;
    2   "He" 4.003   []        false false;
    3   "Li" 6.940   []        false false;
    4   "Be" 9.012   []        false false;
    5   "B"  10.810  [3]       true  true;
    6   "C"  12.011  [4]       true  true;
    7   "N"  14.007  [3, 5]    true  true;
    8   "O"  15.999  [2]       true  true;
    9   "F"  18.998  [1]       true  false;
    10  "Ne" 20.180  []        false false;
    11  "Na" 22.990  []        false false;
    12  "Mg" 24.305  []        false false;
    13  "Al" 26.982  []        false false;
    14  "Si" 28.085  [4]       false false;
    15  "P"  30.974  [3, 5]    true  true;
    16  "S"  32.060  [2, 4, 6] true  true;
    17  "Cl" 35.450  [1]       true  false;
    18  "Ar" 39.948  []        false false;
    19  "K"  39.098  []        false false;
    20  "Ca" 40.078  []        false false;
    21  "Sc" 44.956  []        false false;
    22  "Ti" 47.867  []        false false;
    23  "V"  50.942  []        false false;
    24  "Cr" 51.996  []        false false;
    25  "Mn" 54.938  []        false false;
    26  "Fe" 55.845  []        false false;
    27  "Co" 58.933  []        false false;
    28  "Ni" 58.693  []        false false;
    29  "Cu" 63.546  []        false false;
    30  "Zn" 65.380  []        false false;
    31  "Ga" 69.723  []        false false;
    32  "Ge" 72.630  []        false false;
    33  "As" 74.922  [3, 5]    false true;
    34  "Se" 78.971  [2, 4, 6] false true;
    35  "Br" 79.904  [1]       true  false;
    36  "Kr" 83.798  []        false false;
    37  "Rb" 85.468  []        false false;
    38  "Sr" 87.620  []        false false;
    39  "Y"  88.906  []        false false;
    40  "Zr" 91.224  []        false false;
    41  "Nb" 92.906  []        false false;
    42  "Mo" 95.950  []        false false;
    43  "Tc" 98.000  []        false false;
    44  "Ru" 101.070 []        false false;
    45  "Rh" 102.906 []        false false;
    46  "Pd" 106.420 []        false false;
    47  "Ag" 107.868 []        false false;
    48  "Cd" 112.414 []        false false;
    49  "In" 114.818 []        false false;
    50  "Sn" 118.710 []        false false;
    51  "Sb" 121.760 []        false false;
    52  "Te" 127.600 [2, 4, 6] false false;
    53  "I"  126.904 [1]       true  false;
    54  "Xe" 131.293 []        false false;
    55  "Cs" 132.905 []        false false;
    56  "Ba" 137.327 []        false false;
    57  "La" 138.905 []        false false;
    58  "Ce" 140.116 []        false false;
    59  "Pr" 140.908 []        false false;
    60  "Nd" 144.242 []        false false;
    61  "Pm" 145.000 []        false false;
    62  "Sm" 150.360 []        false false;
    63  "Eu" 151.964 []        false false;
    64  "Gd" 157.250 []        false false;
    65  "Tb" 158.925 []        false false;
    66  "Dy" 162.500 []        false false;
    67  "Ho" 164.930 []        false false;
    68  "Er" 167.259 []        false false;
    69  "Tm" 168.934 []        false false;
    70  "Yb" 173.045 []        false false;
    71  "Lu" 174.967 []        false false;
    72  "Hf" 178.486 []        false false;
    73  "Ta" 180.948 []        false false;
    74  "W"  183.840 []        false false;
    75  "Re" 186.207 []        false false;
    76  "Os" 190.230 []        false false;
    77  "Ir" 192.217 []        false false;
    78  "Pt" 195.084 []        false false;
    79  "Au" 196.967 []        false false;
    80  "Hg" 200.592 []        false false;
    81  "Tl" 204.380 []        false false;
    82  "Pb" 207.200 []        false false;
    83  "Bi" 208.980 []        false false;
    84  "Po" 209.000 []        false false;
    85  "At" 210.000 []        false false;
    86  "Rn" 222.000 []        false false;
    87  "Fr" 223.000 []        false false;
    88  "Ra" 226.000 []        false false;
    89  "Ac" 227.000 []        false false;
    90  "Th" 232.038 []        false false;
    91  "Pa" 231.036 []        false false;
    92  "U"  238.029 []        false false;
    93  "Np" 237.000 []        false false;
    94  "Pu" 244.000 []        false false;
    95  "Am" 243.000 []        false false;
    96  "Cm" 247.000 []        false false;
    97  "Bk" 247.000 []        false false;
    98  "Cf" 251.000 []        false false;
    99  "Es" 252.000 []        false false;
    100 "Fm" 257.000 []        false false;
    101 "Md" 258.000 []        false false;
    102 "No" 259.000 []        false false;
    103 "Lr" 266.000 []        false false;
    104 "Rf" 267.000 []        false false;
    105 "Db" 268.000 []        false false;
    106 "Sg" 269.000 []        false false;
    107 "Bh" 270.000 []        false false;
    108 "Hs" 269.000 []        false false;
    109 "Mt" 278.000 []        false false;
    110 "Ds" 281.000 []        false false;
    111 "Rg" 282.000 []        false false;
    112 "Cn" 285.000 []        false false;
    113 "Nh" 286.000 []        false false;
    114 "Fl" 289.000 []        false false;
    115 "Mc" 290.000 []        false false;
    116 "Lv" 293.000 []        false false;
    117 "Ts" 294.000 []        false false;
    118 "Og" 294.000 []        false false;
}

/// Looks up an element by exact symbol. ELEMENTS is indexed by atomic number
/// minus one, so by-number access never allocates.
pub fn by_symbol(symbol: &str) -> Option<&'static Element> {
    // 118 entries; a linear scan is measurably cheaper than hashing for the
    // one- and two-byte symbols the parser feeds through here.
    ELEMENTS.iter().find(|e| e.symbol == symbol)
}

pub fn by_atomic_number(n: u8) -> Option<&'static Element> {
    if n == 0 {
        return None;
    }
    ELEMENTS.get(n as usize - 1)
}

/// Allowed valences for an (element, formal charge) pair. Charged pairs come
/// from a fixed table; unlisted pairs fall back to the element's neutral
/// defaults rather than being rejected outright.
pub fn charged_valences(atomic_number: u8, charge: i8) -> &'static [u8] {
    match (atomic_number, charge) {
        (1, 1) | (1, -1) => &[0],  // bare proton / hydride ion
        (5, -1) => &[4],           // borate
        (6, 1) | (6, -1) => &[3],  // carbenium / carbanion
        (7, 1) => &[4],            // ammonium
        (7, -1) => &[2],           // amide
        (8, 1) => &[3],            // oxonium
        (8, -1) => &[1],           // alkoxide
        (15, 1) => &[4],           // phosphonium
        (16, 1) => &[3, 5],        // sulfonium
        (16, -1) => &[1],          // thiolate
        (9, -1) | (17, -1) | (35, -1) | (53, -1) => &[0], // halide ions
        _ => by_atomic_number(atomic_number).map_or(&[], |e| e.default_valences),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_ordered_by_atomic_number() {
        for (i, e) in ELEMENTS.iter().enumerate() {
            assert_eq!(e.atomic_number as usize, i + 1, "misplaced {}", e.symbol);
        }
    }

    #[test]
    fn symbol_lookup() {
        assert_eq!(by_symbol("C").unwrap().atomic_number, 6);
        assert_eq!(by_symbol("Cl").unwrap().atomic_number, 17);
        assert_eq!(by_symbol("Og").unwrap().atomic_number, 118);
        assert!(by_symbol("Xx").is_none());
        assert!(by_symbol("").is_none());
    }

    #[test]
    fn organic_subset_members() {
        let subset: Vec<&str> = ELEMENTS
            .iter()
            .filter(|e| e.organic_subset)
            .map(|e| e.symbol)
            .collect();
        assert_eq!(subset, ["B", "C", "N", "O", "F", "P", "S", "Cl", "Br", "I"]);
        for e in ELEMENTS.iter().filter(|e| e.organic_subset) {
            assert!(!e.default_valences.is_empty(), "{} lacks valences", e.symbol);
        }
    }

    #[test]
    fn charged_valence_overrides() {
        assert_eq!(charged_valences(7, 1), &[4]);
        assert_eq!(charged_valences(8, -1), &[1]);
        assert_eq!(charged_valences(17, -1), &[0]);
        // Unlisted pair: falls back to neutral defaults.
        assert_eq!(charged_valences(6, 2), &[4]);
        assert_eq!(charged_valences(26, 3), &[] as &[u8]);
    }

    #[test]
    fn weights_match_reference_values() {
        assert_eq!(by_symbol("C").unwrap().weight, 12.011);
        assert_eq!(by_symbol("H").unwrap().weight, 1.008);
        assert_eq!(by_symbol("O").unwrap().weight, 15.999);
    }
}
