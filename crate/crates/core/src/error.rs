use core::fmt;

/// Errors raised by the model.
///
/// The first group are configuration or programming errors (bad labels,
/// dimension mismatches); the second group are physics verdicts that the
/// requested scenario cannot work as specified.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two factors with the same label in one composite space.
    DuplicateFactor,
    /// A factor label that is not part of the state.
    UnknownFactor,
    /// Operand dimensions or factor sets do not agree.
    DimensionMismatch,
    /// The operation needs a pure state.
    NotPure,
    /// A state that violates normalization, hermiticity or positivity.
    InvalidState(&'static str),
    /// Kraus operators that do not satisfy the completeness relation.
    NotTracePreserving,
    /// Angular-momentum labels that are not integers or half-integers, or
    /// violate |m| <= j.
    InvalidAngularMomentum,
    /// A (J, band) combination outside the supported valence/conduction set.
    UnsupportedState,
    /// Invalid argument (negative time, out-of-range probability, ...).
    InvalidParameter(&'static str),
    /// Site index outside the donor chain.
    SiteOutOfRange,
    /// Unknown sweep parameter path.
    UnknownParameter,

    /// The topmost valence band is heavy-hole (or the required heavy-hole
    /// splitting vanishes), so no single valence level couples to both
    /// electron spin states.
    HeavyHoleTopmost,
    /// The spectral window fails the resolvability inequalities.
    NotResolvable,
    /// Zero g-factor or field: the conduction spin does not precess.
    NoPrecession,
    /// The emission direction has no transverse dipole projection.
    DarkDirection,
    /// The level scheme does not match the requested operation (e.g. a
    /// Case A absorber handed a Case B scheme).
    SchemeMismatch,
}

impl Error {
    /// Physics verdicts as opposed to usage errors.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::HeavyHoleTopmost
                | Error::NotResolvable
                | Error::NoPrecession
                | Error::DarkDirection
                | Error::SchemeMismatch
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateFactor => f.write_str("duplicate factor label"),
            Error::UnknownFactor => f.write_str("unknown factor label"),
            Error::DimensionMismatch => f.write_str("dimension mismatch"),
            Error::NotPure => f.write_str("operation requires a pure state"),
            Error::InvalidState(why) => write!(f, "invalid state: {why}"),
            Error::NotTracePreserving => f.write_str("channel is not trace preserving and not flagged conditional"),
            Error::InvalidAngularMomentum => f.write_str("invalid angular-momentum labels"),
            Error::UnsupportedState => f.write_str("unsupported (J, band) combination"),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            Error::SiteOutOfRange => f.write_str("site index out of range"),
            Error::UnknownParameter => f.write_str("unknown parameter path"),
            Error::HeavyHoleTopmost => {
                f.write_str("HeavyHoleTopmost: no non-degenerate light-hole level on top of the valence band")
            }
            Error::NotResolvable => f.write_str("NotResolvable: spectral window fails the resolvability inequalities"),
            Error::NoPrecession => f.write_str("NoPrecession: zero g-factor or magnetic field"),
            Error::DarkDirection => {
                f.write_str("DarkDirection: no transverse dipole projection along the emission direction")
            }
            Error::SchemeMismatch => f.write_str("level scheme does not match the requested case"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
