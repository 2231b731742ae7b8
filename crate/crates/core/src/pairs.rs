//! The catalogue of dual pairs: Fock configuration, finite group, infinite algebra.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{IndexSet, Neutral, PairConfig, Statistics};
use crate::weights::{AlgebraKind, GroupKind, GroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairFamily {
    /// (GL(l), ĝl) on l charged fermions.
    GlFermion,
    /// (GL(l), ĝl) on l ghost pairs.
    GlBoson,
    /// (O(2l), d∞).
    OEvenD,
    /// (O(2l+1), d∞) with φ.
    OOddD,
    /// (Pin(2l), b̃∞), ℤ-indexed.
    PinBt,
    /// (Spin(2l+1), b̃∞), ℤ-indexed with φ.
    SpinOddBt,
    /// (Sp(2l), c∞), twisted fermions.
    SpC,
    /// (Osp(1,2l), c∞), twisted fermions with χ.
    OspC,
    /// (Pin(2l), b∞), twisted ℤ-indexed fermions.
    PinB,
    /// (Spin(2l+1), b∞), twisted ℤ-indexed fermions with ϕ.
    SpinOddB,
    /// (Sp(2l), d∞) on ghosts.
    SpD,
    /// (Osp(1,2l), d∞) on ghosts with φ.
    OspD,
    /// (O(2l), c∞) on twisted ghosts.
    OEvenC,
    /// (O(2l+1), c∞) on twisted ghosts with χ.
    OOddC,
}

impl PairFamily {
    pub const ALL: [PairFamily; 14] = [
        PairFamily::GlFermion,
        PairFamily::GlBoson,
        PairFamily::OEvenD,
        PairFamily::OOddD,
        PairFamily::PinBt,
        PairFamily::SpinOddBt,
        PairFamily::SpC,
        PairFamily::OspC,
        PairFamily::PinB,
        PairFamily::SpinOddB,
        PairFamily::SpD,
        PairFamily::OspD,
        PairFamily::OEvenC,
        PairFamily::OOddC,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualPairKind {
    pub family: PairFamily,
    pub l: usize,
}

impl DualPairKind {
    pub fn new(family: PairFamily, l: usize) -> Result<Self> {
        if l == 0 || l > 8 {
            return Err(Error::Config(format!("rank {l} out of range 1..=8")));
        }
        Ok(DualPairKind { family, l })
    }

    pub fn cfg(&self) -> PairConfig {
        use IndexSet::*;
        use Neutral as N;
        use PairFamily::*;
        use Statistics::*;
        let (stat, index, neutral, twisted) = match self.family {
            GlFermion | OEvenD => (Fermion, HalfInt, N::None, false),
            GlBoson | SpD => (Boson, HalfInt, N::None, false),
            OOddD => (Fermion, HalfInt, N::Phi, false),
            PinBt => (Fermion, Int, N::None, false),
            SpinOddBt => (Fermion, Int, N::Phi, false),
            SpC => (Fermion, HalfInt, N::None, true),
            OspC => (Fermion, HalfInt, N::Chi, true),
            PinB => (Fermion, Int, N::None, true),
            SpinOddB => (Fermion, Int, N::Varphi, true),
            OspD => (Boson, HalfInt, N::Phi, false),
            OEvenC => (Boson, HalfInt, N::None, true),
            OOddC => (Boson, HalfInt, N::Chi, true),
        };
        PairConfig::new(self.l, stat, index, neutral, twisted).expect("catalogue rows are valid")
    }

    pub fn finite(&self) -> GroupKind {
        use PairFamily::*;
        let tag = match self.family {
            GlFermion | GlBoson => GroupTag::GL,
            OEvenD | OEvenC => GroupTag::OEven,
            OOddD | OOddC => GroupTag::OOdd,
            PinBt | PinB => GroupTag::Pin,
            SpinOddBt | SpinOddB => GroupTag::SpinOdd,
            SpC | SpD => GroupTag::Sp,
            OspC | OspD => GroupTag::Osp,
        };
        GroupKind { tag, rank: self.l }
    }

    pub fn infinite(&self) -> AlgebraKind {
        use PairFamily::*;
        match self.family {
            GlFermion | GlBoson => AlgebraKind::A,
            OEvenD | OOddD | SpD | OspD => AlgebraKind::D,
            PinBt | SpinOddBt => AlgebraKind::Bt,
            PinB | SpinOddB => AlgebraKind::B,
            SpC | OspC | OEvenC | OOddC => AlgebraKind::C,
        }
    }

    /// Whether each label occurs twice, once per fermion-parity sector.
    pub fn splits_by_parity(&self) -> bool {
        matches!(self.family, PairFamily::SpinOddBt | PairFamily::SpinOddB)
    }
}

impl fmt::Display for DualPairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alg = match self.infinite() {
            AlgebraKind::A => {
                if self.family == PairFamily::GlBoson {
                    "gl-"
                } else {
                    "gl"
                }
            }
            AlgebraKind::B => "binf",
            AlgebraKind::Bt => "btinf",
            AlgebraKind::C => "cinf",
            AlgebraKind::D => "dinf",
        };
        write!(f, "{}/{}", self.finite(), alg)
    }
}

impl FromStr for DualPairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("unknown pair {s:?}"));
        let (g, a) = s.trim().rsplit_once('/').ok_or_else(err)?;
        let group: GroupKind = g.parse()?;
        use GroupTag as T;
        use PairFamily::*;
        let family = match (group.tag, a) {
            (T::GL, "gl") => GlFermion,
            (T::GL, "gl-") => GlBoson,
            (T::OEven, "dinf") => OEvenD,
            (T::OOdd, "dinf") => OOddD,
            (T::Pin, "btinf") => PinBt,
            (T::SpinOdd, "btinf") => SpinOddBt,
            (T::Sp, "cinf") => SpC,
            (T::Osp, "cinf") => OspC,
            (T::Pin, "binf") => PinB,
            (T::SpinOdd, "binf") => SpinOddB,
            (T::Sp, "dinf") => SpD,
            (T::Osp, "dinf") => OspD,
            (T::OEven, "cinf") => OEvenC,
            (T::OOdd, "cinf") => OOddC,
            _ => return Err(err()),
        };
        DualPairKind::new(family, group.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all() {
        for fam in PairFamily::ALL {
            for l in 1..=2 {
                let p = DualPairKind::new(fam, l).unwrap();
                let back: DualPairKind = p.to_string().parse().unwrap();
                assert_eq!(back, p);
                let _ = p.cfg();
            }
        }
        assert!("O(4)/binf".parse::<DualPairKind>().is_err());
    }
}
