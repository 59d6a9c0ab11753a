use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

macro_rules! catalog {
    ($($variant:ident => $name:literal,)*) => {
        /// A named inequality or identity checked over a seeded ensemble.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }
        }
    };
}

catalog! {
    RealSuperadditive => "real_superadditive",
    RealSectorReverse => "real_sector_reverse",
    Amgmhm => "amgmhm",
    MeanMonotone => "mean_monotone",
    Transformer => "transformer",
    Kantorovich => "kantorovich",
    HarAndo => "har_ando",
    AndoSector => "ando_sector",
    SigmaInner => "sigma_inner",
    SigmaNablaPhi => "sigma_nabla_phi",
    FRealSuper => "f_real_super",
    FRealReverse => "f_real_reverse",
    ChoiSector => "choi_sector",
    FInner => "f_inner",
    FNabla => "f_nabla",
    FSharpNabla => "f_sharp_nabla",
    SharpRealSuper => "sharp_real_super",
    SharpSectorReverse => "sharp_sector_reverse",
    HarRealSuper => "har_real_super",
    HarSectorReverse => "har_sector_reverse",
    InvReal => "inv_real",
    InvSector => "inv_sector",
    GumusA => "gumus_a",
    GumusB => "gumus_b",
    GumusC => "gumus_c",
    MixedGm => "mixed_gm",
    MixedNs => "mixed_ns",
    NormRealSandwich => "norm_real_sandwich",
    FNormLower => "f_norm_lower",
    FOpnormSandwich => "f_opnorm_sandwich",
    PhiSigmaNorm => "phi_sigma_norm",
    PhiNablaNorm => "phi_nabla_norm",
    AndoZhan => "ando_zhan",
    FNablaNorm => "f_nabla_norm",
    NormOfSigma => "norm_of_sigma",
    SigmaCongruence => "sigma_congruence",
    GeometricPaths => "geometric_paths",
    GeometricFlip => "geometric_flip",
    GeometricInverse => "geometric_inverse",
    GeometricNeg => "geometric_neg",
    PosJensen => "pos_jensen",
    PosSigmaInner => "pos_sigma_inner",
    PosSigmaNorm => "pos_sigma_norm",
    PosAmgmhm => "pos_amgmhm",
    PosAndo => "pos_ando",
    PosChoi => "pos_choi",
    PosChoiInverse => "pos_choi_inverse",
    PosAndoHiai => "pos_ando_hiai",
    PosFNorm => "pos_f_norm",
    PosAndoZhan => "pos_ando_zhan",
    PosGumus => "pos_gumus",
    PosKantorovich => "pos_kantorovich",
    PosSharpando => "pos_sharpando",
    PosTs => "pos_ts",
    PosAbNorm => "pos_ab_norm",
    PosConcave => "pos_concave",
}

/// Whether a check compares two sides in an order or measures deviation from an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Order,
    Identity,
}

/// Which operands a check draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// Sectorial members of the ensemble as given.
    Sectorial,
    /// Positive definite members (`alpha_max` forced to 0).
    Positive,
}

/// How much of the monotone function a check depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionUse {
    /// Not used at all.
    Ignored,
    /// Only through the weight `t = f'(1)`.
    Weight,
    /// Through the whole measure.
    Full,
}

/// The kind of positive linear map a check needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapNeed {
    None,
    Positive,
    Unital,
}

impl CheckId {
    pub fn kind(self) -> CheckKind {
        use CheckId::*;
        match self {
            Transformer | SigmaCongruence | GeometricPaths | GeometricFlip | GeometricInverse
            | GeometricNeg | PosSharpando => CheckKind::Identity,
            _ => CheckKind::Order,
        }
    }

    pub fn ensemble(self) -> EnsembleKind {
        if self.name().starts_with("pos_") {
            EnsembleKind::Positive
        } else {
            EnsembleKind::Sectorial
        }
    }

    pub fn function_use(self) -> FunctionUse {
        use CheckId::*;
        match self {
            InvReal | InvSector | MixedGm | NormRealSandwich | PosChoiInverse | PosSharpando
            | PosAbNorm => FunctionUse::Ignored,
            HarAndo | SharpRealSuper | SharpSectorReverse | HarRealSuper | HarSectorReverse
            | GumusA | GumusB | GumusC | MixedNs | GeometricPaths | GeometricFlip
            | GeometricInverse | GeometricNeg | PosGumus | PosTs => FunctionUse::Weight,
            _ => FunctionUse::Full,
        }
    }

    pub fn map_need(self) -> MapNeed {
        use CheckId::*;
        match self {
            AndoSector | SigmaNablaPhi | PhiNablaNorm | PosAndo => MapNeed::Positive,
            Kantorovich | HarAndo | ChoiSector | PhiSigmaNorm | PosChoi | PosChoiInverse
            | PosKantorovich => MapNeed::Unital,
            _ => MapNeed::None,
        }
    }

    /// Whether the check is stated for an arbitrary unitarily invariant norm.
    pub fn uses_norm(self) -> bool {
        use CheckId::*;
        matches!(
            self,
            NormRealSandwich
                | FNormLower
                | PhiSigmaNorm
                | PhiNablaNorm
                | AndoZhan
                | FNablaNorm
                | NormOfSigma
                | PosSigmaNorm
                | PosFNorm
                | PosAndoZhan
                | PosAbNorm
        )
    }

    /// Whether the check compares two means and needs a second function `g`.
    pub fn needs_second_function(self) -> bool {
        matches!(self, CheckId::Kantorovich | CheckId::PosKantorovich)
    }

    /// The positive-definite statement the check reduces to when `alpha = 0`.
    pub fn classical_counterpart(self) -> Option<CheckId> {
        use CheckId::*;
        Some(match self {
            Amgmhm => PosAmgmhm,
            AndoSector => PosAndo,
            SigmaInner => PosSigmaInner,
            NormOfSigma => PosSigmaNorm,
            ChoiSector => PosChoi,
            FInner => PosJensen,
            FSharpNabla => PosAndoHiai,
            FNormLower => PosFNorm,
            AndoZhan => PosAndoZhan,
            FNabla => PosConcave,
            MixedNs => PosTs,
            _ => return None,
        })
    }

    /// The checked statement in plain notation; `c = cos(alpha)`, `s = sec(alpha)`.
    pub fn statement(self) -> &'static str {
        use CheckId::*;
        match self {
            RealSuperadditive => "ReA σ ReB <= Re(A σ B)",
            RealSectorReverse => "Re(A σ B) <= s^2 (ReA σ ReB)",
            Amgmhm => "c^2 Re(A !_t B) <= Re(A σ B) <= s^2 Re(A ∇_t B), t = f'(1)",
            MeanMonotone => "ReA <= ReC, ReB <= ReD  =>  Re(A σ B) <= s^2 Re(C σ D)",
            Transformer => "C*(A σ B)C = (C*AC) σ (C*BC)",
            Kantorovich => "||Φ(Re(A σ_f B)) Φ(Re(A σ_g B))^-1|| <= s^6 K(m, M)",
            HarAndo => "Φ(ReA !_t ReB) <= Re(Φ(A) !_t Φ(B))",
            AndoSector => "Re Φ(A σ B) <= s^2 Re(Φ(A) σ Φ(B))",
            SigmaInner => "Re<(A σ B)x, x> <= s^2 Re(<Ax, x> σ <Bx, x>)",
            SigmaNablaPhi => "Re Φ(A σ B) <= s^2 Re Φ(A ∇_t B), t = f'(1)",
            FRealSuper => "f(ReA) <= Re f(A)",
            FRealReverse => "Re f(A) <= s^2 f(ReA)",
            ChoiSector => "c^2 Re Φ(f(A)) <= Re f(Φ(A))",
            FInner => "Re<f(A)x, x> <= s^2 Re f(<Ax, x>)",
            FNabla => "Re(f(A) ∇_t f(B)) <= s^2 Re f(A ∇_t B)",
            FSharpNabla => "Re(f(A) ♯ f(B)) <= s^4 Re f(A ∇ B)",
            SharpRealSuper => "ReA ♯_t ReB <= Re(A ♯_t B)",
            SharpSectorReverse => "Re(A ♯_t B) <= s^2 (ReA ♯_t ReB)",
            HarRealSuper => "ReA !_t ReB <= Re(A !_t B)",
            HarSectorReverse => "Re(A !_t B) <= s^2 (ReA !_t ReB)",
            InvReal => "Re(A^-1) <= (ReA)^-1",
            InvSector => "(ReA)^-1 <= s^2 Re(A^-1)",
            GumusA => "Re(A ∇_t B) <= k Re(A ♯_t B), k = (m ∇_l M)/(m ♯_l M), l = min(t, 1-t)",
            GumusB => "Re(A ♯_t B) <= s^2 k Re(A !_t B)",
            GumusC => "Re(A ∇_t B) - M(k-1)I <= Re(A ♯_t B) <= s^2 (M(k-1)I + Re(A !_t B))",
            MixedGm => "c^3 Re[(A ∇ B) ♯ (A ! B)] <= Re(A ♯ B) <= s^2 Re[(A ∇ B) ♯ (A ! B)]",
            MixedNs => "Re(A ♯_s (A ∇_t B)) <= s^2 Re(A ∇_t (A ♯_s B))",
            NormRealSandwich => "c ||A|| <= ||ReA|| <= ||A||",
            FNormLower => "f(||ReA||) <= ||Re f(A)||",
            FOpnormSandwich => "f(||ReA||) <= ||Re f(A)|| <= s^2 f(||ReA||), operator norm",
            PhiSigmaNorm => "c^3 ||Φ(A σ B)|| <= ||Φ(A) σ Φ(B)||",
            PhiNablaNorm => "c^3 ||Φ(A σ B)|| <= ||Φ(A) ∇_t Φ(B)||, t = f'(1)",
            AndoZhan => "||f(A + B)|| <= s^3 ||f(A) + f(B)||",
            FNablaNorm => "c^3 ||f(A) ∇_t f(B)|| <= ||f(A ∇_t B)||",
            NormOfSigma => "||A σ B|| <= s^3 (||A|| σ ||B||)",
            SigmaCongruence => "∫ A !_t B dν_f(t) = A^1/2 f(A^-1/2 B A^-1/2) A^1/2",
            GeometricPaths => "A ♯_t B by measure integral = congruence formula = half-line integral",
            GeometricFlip => "A ♯_t B = B ♯_(1-t) A",
            GeometricInverse => "(A ♯_t B)^-1 = A^-1 ♯_t B^-1",
            GeometricNeg => "A (A^-1 ♯_t B^-1) A = A^1/2 (A^-1/2 B A^-1/2)^-t A^1/2",
            PosJensen => "<f(A)x, x> <= f(<Ax, x>)",
            PosSigmaInner => "<(A σ B)x, x> <= <Ax, x> σ <Bx, x>",
            PosSigmaNorm => "||A σ B|| <= ||A|| σ ||B||",
            PosAmgmhm => "A !_t B <= A σ B <= A ∇_t B, t = f'(1)",
            PosAndo => "Φ(A σ B) <= Φ(A) σ Φ(B)",
            PosChoi => "Φ(f(A)) <= f(Φ(A))",
            PosChoiInverse => "Φ(A)^-1 <= Φ(A^-1)",
            PosAndoHiai => "f(A) ♯ f(B) <= f(A ∇ B)",
            PosFNorm => "f(||A||) <= ||f(A)||",
            PosAndoZhan => "||f(A + B)|| <= ||f(A) + f(B)||",
            PosGumus => "A ∇_t B <= k A ♯_t B, A ♯_t B <= k A !_t B, A ∇_t B - M(k-1)I <= A ♯_t B <= M(k-1)I + A !_t B",
            PosKantorovich => "Φ(A σ_f B)^2 <= K(m, M)^2 Φ(A σ_g B)^2",
            PosSharpando => "(A ∇ B) ♯ (A ! B) = A ♯ B",
            PosTs => "A ♯_s (A ∇_t B) <= A ∇_t (A ♯_s B)",
            PosAbNorm => "||AB|| <= ||(A + B)^2|| / 4",
            PosConcave => "f(A) ∇_t f(B) <= f(A ∇_t B)",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown check id '{s}'")))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for CheckId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
