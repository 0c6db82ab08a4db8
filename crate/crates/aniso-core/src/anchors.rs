//! Anchor strings attached to every trace entry.

pub const SPACES_DEF: &str = "Def Anisotropic-Spaces";
pub const INDEX_DEF: &str = "Def Sobolev-Index";
pub const OMEGA_IND: &str = "Def omega-ind";
pub const HW: &str = "Eq. (HW-Anisotropic)";
pub const BW: &str = "Eq. (BW-Anisotropic)";
pub const W_NORM: &str = "Eq. (W-Norm-Anisotropic)";
pub const B_NORM: &str = "Eq. (B-Norm-Anisotropic)";
pub const CHAR_H: &str = "Prop Characterization-Anisotropic";
pub const CHAR_B: &str = "Prop Characterization-Anisotropic-Besov";

pub const EMB_IDENTITY: &str = "Def Anisotropic-Spaces (identity)";
pub const EMB_BB: &str = "Eq. (Besov-Embedding)";
pub const EMB_HH: &str = "Eq. (Bessel-Potential-Embedding)";
pub const EMB_BH: &str = "Eq. (Besov-Bessel-Potential-Embedding)";
pub const EMB_HB: &str = "Eq. (Bessel-Potential-Besov-Embedding)";
pub const EMB_HL: &str = "Eq. (Bessel-Potential-Lebesgue-Embedding)";
pub const EMB_BL: &str = "Eq. (Besov-Lebesgue-Embedding)";
pub const EMB_PARTIAL: &str = "Eq. (Besov-Embedding-Partial)";
pub const EMB_C0: &str = "Thm Algebra-Anisotropic (a)";

pub const INTERP_COMPLEX_B: &str = "Eq. (Besov-Complex-Interpolation)";
pub const INTERP_COMPLEX_H: &str = "Eq. (Bessel-Potential-Complex-Interpolation)";
pub const INTERP_COMPLEX_L: &str = "Eq. (Lebesgue-Complex-Interpolation)";
pub const INTERP_REAL_B: &str = "Eq. (Besov-Real-Interpolation)";
pub const INTERP_REAL_H: &str = "Eq. (Bessel-Potential-Real-Interpolation)";
pub const INTERP_REAL_L: &str = "Eq. (Lebesgue-Real-Interpolation)";

pub const MULT: &str = "Thm Multiplication-Anisotropic";
pub const MULT_I: &str = "Thm Multiplication-Anisotropic (i)";
pub const MULT_II: &str = "Thm Multiplication-Anisotropic (ii)";
pub const MULT_III: &str = "Remark Multiplication-Anisotropic (c)";
pub const MULT_A: &str = "Thm Multiplication-Anisotropic (a)";
pub const MULT_B: &str = "Thm Multiplication-Anisotropic (b)";
pub const MULT_C: &str = "Thm Multiplication-Anisotropic (c)";
pub const MULT_D: &str = "Thm Multiplication-Anisotropic (d)";
pub const MULT_E: &str = "Thm Multiplication-Anisotropic (e)";
pub const MULT_F: &str = "Thm Multiplication-Anisotropic (f)";
pub const MULT_REM_E: &str = "Remark Multiplication-Anisotropic (e)";
pub const MULT_REM_H: &str = "Remark Multiplication-Anisotropic (h)";
pub const MULT_REM_K: &str = "Remark Multiplication-Anisotropic (k)";
pub const MULT_REM_L: &str = "Remark Multiplication-Anisotropic (l)";
pub const MULTIPLIER: &str = "Thm Multiplier-Anisotropic";
pub const MULTIPLIER_A: &str = "Thm Multiplier-Anisotropic (a)";
pub const MULTIPLIER_B: &str = "Thm Multiplier-Anisotropic (b)";
pub const MULTIPLIER_C: &str = "Thm Multiplier-Anisotropic (c)";
pub const ALGEBRA: &str = "Thm Algebra-Anisotropic (b)";

pub const NEMYTSKIJ: &str = "Thm Nemytskij-Anisotropic";
pub const NEMYTSKIJ_A: &str = "Thm Nemytskij-Anisotropic (a)";
pub const NEMYTSKIJ_B: &str = "Thm Nemytskij-Anisotropic (b)";
pub const NEMYTSKIJ_LEDGER: &str = "Remark Nemytskij-Anisotropic (a)";

pub const LEMMA_REAL: &str = "Lemma Appendix-Realization";
pub const LEMMA_MIN: &str = "Lemma Appendix-Minimization";

pub const STEFAN_COND1P: &str = "Eq. (cond1p)";
pub const STEFAN_COND2P: &str = "Eq. (cond2p)";
pub const STEFAN_FULL: &str = "Thm Stefan-Full";
pub const STEFAN_LINEAR: &str = "Prop Stefan-Linear";
pub const STEFAN_COMPAT: &str = "Eq. (Stefan-Compatibility)";
pub const NVS_REQP1WEAK: &str = "Eq. (reqp1weak)";
pub const NVS_REQP1: &str = "Eq. (reqp1)";
pub const NVS_REQP2: &str = "Eq. (reqp2)";
pub const NVS_FULL: &str = "Thm two-phase-nvs-full";
pub const NVS_LINEAR: &str = "Prop two-phase-nvs-lin";
pub const NVS_COMPAT: &str = "Eq. (two-phase-nvs-compat)";

pub const STEFAN_NONLIN: &str = "Prop Stefan-Non-Linear-Optimal";
pub const STEFAN_TDERH: &str = "Eq. (tderh)";
pub const STEFAN_DERH: &str = "Eq. (derh)";
pub const STEFAN_2DERH: &str = "Eq. (2derh)";
pub const STEFAN_DERU: &str = "Eq. (deru)";
pub const STEFAN_2DERU: &str = "Eq. (2deru)";
pub const STEFAN_TRACEDERU: &str = "Eq. (tracederu)";
pub const STEFAN_PHIPSI: &str = "Eq. (phipsi)";
pub const NVS_NONLIN: &str = "Prop two-phase-nvs-nonlin-opt";
pub const NVS_EST_HT: &str = "Eq. (est-ht)";
pub const NVS_EST_HX: &str = "Eq. (est-hx)";
pub const NVS_EST_HXY: &str = "Eq. (est-hxy)";
pub const NVS_EST_UX: &str = "Eq. (est-ux)";
pub const NVS_EST_UXY: &str = "Eq. (est-uxy)";
pub const NVS_EST_UX_TR: &str = "Eq. (est-ux-tr)";
pub const NVS_EMB_FU1: &str = "Eq. (emb-fu1)";
pub const NVS_EMB_FU2: &str = "Eq. (emb-fu2)";
pub const NVS_EMBFH: &str = "Eq. (embfh)";
pub const NVS_PHI_PSI: &str = "Eq. (phi-psi-nemytskij)";
