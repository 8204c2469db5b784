//! Equation labels covered by the builtin manifest.

/// Every labelled equation the manifest is expected to check, in order of
/// appearance. `Zpm3A3` stands for the unlabelled evaluation of zeta'(-3)
/// through the generalised Glaisher constant.
pub const IN_SCOPE_LABELS: &[&str] = &[
    // introduction
    "Jensen", "Hermite", "LagDef", "Laguerre", "Cp5a", "A(m)", "ZaltDef", "Qid", "SaDef", "clarity", "SinId",
    "CodId",
    // Theorem 1 and its proof
    "sechT", "Thm4a", "Eq3p3", "Thm4b", "Thm4c", "Theorem4a", "Theorem4",
    // Euler polynomial sums
    "Cor1", "SaSum", "Zeta2Bern", "BernSum", "BernId1", "BernId2", "BernId3", "EuId", "Euid1", "Sx",
    // Euler number sums
    "New3c", "Rkb", "Rkbo", "T1A", "New1A", "New3a", "EtaMz", "Ezm1", "EuRecur", "ScJ1",
    // Corollary 3.2
    "Cor2a", "Lims1", "Cor2b", "C2na1", "C2na2", "C2na4",
    // Corollary 3.3
    "Tc3a", "Zp0", "Cn0", "a0n1", "Z1m1", "Z1p2", "C3n0a1", "N0a2", "Zdiff", "Psi3Q", "C3n0a2", "n0a4", "zm1",
    "C3n0a4", "Actv2", "Actv3", "AtanId1", "AtanId2", "Cn1", "N1a1", "Zm1h", "Zm2h", "Zm3h", "Zpm2", "N1a1f",
    "Zpm3A3", "N1a2", "V4mV5", "Rad1", "Mult1", "TriPsi", "N1a1b",
    // Corollary 3.4
    "Cor4", "Zalt", "Zids", "Zidd", "DefSa", "C4an0", "Zaltm1", "C4n0a1", "C4n0a2", "C4n0a4",
    // Theorem 2
    "Theorem2", "FTnm1a", "Jid", "J(s)", "JgRecur", "T4a", "T4A", "T1s0", "PsiId",
    // Corollaries 4.1 and 4.2
    "Lint5", "C4n0", "C4n1", "C4n1a0", "R1", "T2s1D",
    // the even case
    "G&Reven", "E3", "E4a", "J1", "J2", "J1a", "J2a", "Jint1", "Jint2", "PsId", "Jint2b", "J2Jbar",
    // odd zeta values
    "Shpot2", "H1", "H2", "Casem1", "C2b", "Zpminus4", "Zpm4half",
    // errata
    "Eq3p1", "Eq3p8", "PatkThm2", "P2", "PatTheorem3", "PatP3", "PatT3alt", "PatkEq3p10", "Pat3p17", "PatP1",
    "Patk3p18",
];

/// Labels that are definitions or intermediate quantities, checked inside
/// the record named on the right.
pub const FOLDED_LABELS: &[(&str, &str)] = &[
    ("Qid", "Theorem4"),
    ("J(s)", "JgRecur"),
    ("A(m)", "Cp5a"),
    ("G&Reven", "E3"),
    ("J1", "E4a"),
    ("J2", "E4a"),
    ("Jint2", "J2Jbar"),
    ("Jint2b", "J2Jbar"),
    ("P2", "PatkThm2"),
    ("PatP3", "PatTheorem3"),
    ("PatP1", "Pat3p17"),
];

/// Records beyond the label list: alternative forms and negative controls.
pub const SUPPLEMENTARY_IDS: &[&str] = &[
    "Theorem4_S",
    "Theorem2_S",
    "Eq3p1_missing_factor",
    "Eq3p3_missing_factor",
    "Pat3p17_original_sign",
    "Patk3p18_original_sign",
    "J2Jbar_as_printed",
];
