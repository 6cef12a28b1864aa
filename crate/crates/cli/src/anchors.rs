//! Fixed table of anchor strings; every check id maps to one of these.

pub const SYMMETRY: &str = "construction of the Hecke symmetry";
pub const BRAID: &str = "braid relation R12 R23 R12 = R23 R12 R23";
pub const HECKE: &str = "Hecke condition (R - q)(R + q^-1) = 0";
pub const SKEW: &str = "skew-invertibility, both partial-trace identities";
pub const RANK: &str = "symmetry rank: rank A^(p) = 1 and A^(p+1) = 0";
pub const BC_NORM: &str = "B C = q^(-2p) I";
pub const TRACE_NORM: &str = "Tr B = Tr C = p_q / q^p";
pub const IDEMPOTENT: &str = "q-symmetrizer and q-antisymmetrizer are idempotent";
pub const ORTHOGONAL: &str = "q-symmetrizer annihilates q-antisymmetrizer";
pub const PROJECTOR_RANKS: &str = "projector ranks equal the classical dimensions";
pub const RE_FUNDAMENTAL: &str = "reflection equation in the fundamental representation";
pub const RE_TENSOR: &str = "reflection equation in tensor powers of V";
pub const RE_SYM: &str = "reflection equation in symmetric powers of V";
pub const RE_RIGHT: &str = "right-order relations in right symmetric powers";
pub const SYM_COMPRESSED: &str = "symmetric power equals the compressed tensor power";
pub const CH_BASIC: &str = "basic Cayley-Hamilton identity in right symmetric powers";
pub const CH_COEFFS: &str = "central coefficients of the basic Cayley-Hamilton identity";
pub const CH_BASIC_LEFT: &str = "basic Cayley-Hamilton identity in left symmetric powers";
pub const CH_HIGHER_REA: &str = "higher Cayley-Hamilton identity for the split Casimir, unmodified form";
pub const CH_HIGHER_MREA: &str = "higher Cayley-Hamilton identity for the split Casimir, modified form";
pub const CLOSED_FORM: &str = "explicit form of the rank-2 split Casimir";
pub const NEWTON_CENTRAL: &str = "q-Newton identities for central elements in a representation";
pub const NEWTON_PARAMETRIC: &str = "parametric resolution of the q-Newton identities";
pub const CONJECTURE: &str = "conjectured roots of the higher Cayley-Hamilton identity for rank p >= 3";
pub const MULT_CLASSICAL: &str = "classical multiplicities equal dimension ratios";
pub const MULT_QUANTUM: &str = "quantum multiplicities equal q-dimension ratios";
pub const MULT_SUM: &str = "multiplicities sum to dim V_(m)";
pub const HIGHER_NEWTON_CLASSICAL: &str = "classical higher Newton identities, two routes";
pub const HIGHER_NEWTON_REDUCTION: &str = "classical higher Newton identity for m = 1";
pub const HIGHER_NEWTON_QUANTUM: &str = "quantum higher Newton identities through the quantum trace";
pub const IDEMPOTENTS: &str = "spectral idempotents of the split Casimir";
pub const STRINGS: &str = "string decomposition of orbit eigenvalues";
pub const STRINGS_APPEND: &str = "appending a successor extends exactly one string";
pub const EULER_SHIFT: &str = "shift invariance of the q-Euler characteristic";
pub const EULER_P3: &str = "q-algebra relation values for p = 3";
pub const EULER_ALGEBRA: &str = "q-Euler characteristic respects the q-algebra relations";
pub const EULER_INDEX: &str = "q-index equals the q-dimension of the reversed signature";
pub const EULER_CLASSICAL: &str = "classical limit of the q-Euler characteristic";
pub const TRACE_WEIGHTS: &str = "calibrated quantum trace weights over V_(m)";
