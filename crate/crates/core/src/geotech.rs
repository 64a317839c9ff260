//! Attrition coefficients from test masses and physical-validity screening
//! of predicted coefficients.
//!
//! Both the Los Angeles and the wet Micro-Deval coefficient are the mass
//! fraction (in percent) of particles smaller than 1.6 mm produced by the
//! test: `100 · m / M`.

use serde::{Deserialize, Serialize};

use crate::dataset::Target;
use crate::error::{Error, Result};

/// Masses (grams) recorded from one LA or MDE test run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttritionTestRecord {
    pub total_mass: f64,
    /// Mass of produced particles < 1.6 mm.
    pub fines_mass: f64,
    pub kind: Target,
}

impl AttritionTestRecord {
    pub fn new(kind: Target, total_mass: f64, fines_mass: f64) -> Result<Self> {
        let r = Self { total_mass, fines_mass, kind };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let (m_total, m_fines) = (self.total_mass, self.fines_mass);
        if !m_total.is_finite() || !m_fines.is_finite() {
            return Err(Error::InvalidMass("masses must be finite".into()));
        }
        if m_total <= 0.0 {
            return Err(Error::InvalidMass(format!("total mass {m_total} g must be > 0")));
        }
        if m_fines < 0.0 {
            return Err(Error::InvalidMass(format!("fines mass {m_fines} g must be ≥ 0")));
        }
        if m_fines > m_total {
            return Err(Error::InvalidMass(format!("fines mass {m_fines} g exceeds total mass {m_total} g")));
        }
        Ok(())
    }

    /// `100 · m / M` regardless of kind. Rounding can push `m = M` a hair
    /// past 100, so the result is clamped.
    pub fn coefficient(&self) -> Result<f64> {
        self.validate()?;
        Ok((100.0 * self.fines_mass / self.total_mass).min(100.0))
    }
}

fn coefficient_of(kind: Target, record: &AttritionTestRecord) -> Result<f64> {
    if record.kind != kind {
        return Err(Error::InvalidMass(format!("record is a {} test, expected {}", record.kind, kind)));
    }
    record.coefficient()
}

/// Los Angeles fragmentation coefficient, percent.
pub fn la_coefficient(record: &AttritionTestRecord) -> Result<f64> {
    coefficient_of(Target::La, record)
}

/// Micro-Deval (wet) abrasion coefficient, percent.
pub fn mde_coefficient(record: &AttritionTestRecord) -> Result<f64> {
    coefficient_of(Target::Mde, record)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    NegativeInvalid,
    AboveHundredInvalid,
}

impl Validity {
    pub fn key(self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::NegativeInvalid => "negative_invalid",
            Validity::AboveHundredInvalid => "above_hundred_invalid",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        match key {
            "valid" => Some(Validity::Valid),
            "negative_invalid" => Some(Validity::NegativeInvalid),
            "above_hundred_invalid" => Some(Validity::AboveHundredInvalid),
            _ => None,
        }
    }

    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityFlag {
    pub value: f64,
    pub status: Validity,
}

/// Classifies a predicted coefficient. The value is never clamped.
pub fn check_validity(value: f64) -> Result<ValidityFlag> {
    if !value.is_finite() {
        return Err(Error::NonFinite("predicted coefficient"));
    }
    let status = if value < 0.0 {
        Validity::NegativeInvalid
    } else if value > 100.0 {
        Validity::AboveHundredInvalid
    } else {
        Validity::Valid
    };
    Ok(ValidityFlag { value, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn la(m: f64, total: f64) -> Result<f64> {
        la_coefficient(&AttritionTestRecord { total_mass: total, fines_mass: m, kind: Target::La })
    }

    fn mde(m: f64, total: f64) -> Result<f64> {
        mde_coefficient(&AttritionTestRecord { total_mass: total, fines_mass: m, kind: Target::Mde })
    }

    #[test]
    fn all_fines_is_exactly_one_hundred() {
        assert_eq!(la(1651.0021192014813, 1651.0021192014813).unwrap(), 100.0);
        assert_eq!(mde(0.3, 0.3).unwrap(), 100.0);
    }

    #[test]
    fn la_examples() {
        assert_eq!(la(0.0, 500.0).unwrap(), 0.0);
        assert_eq!(la(500.0, 500.0).unwrap(), 100.0);
        assert_eq!(la(140.0, 500.0).unwrap(), 28.0);
    }

    #[test]
    fn mde_examples() {
        assert_eq!(mde(0.0, 500.0).unwrap(), 0.0);
        assert_eq!(mde(75.0, 500.0).unwrap(), 15.0);
        assert!(matches!(mde(510.0, 500.0), Err(Error::InvalidMass(_))));
    }

    #[test]
    fn invalid_masses() {
        assert!(la(1.0, 0.0).is_err());
        assert!(la(1.0, -5.0).is_err());
        assert!(la(-1.0, 500.0).is_err());
        assert!(la(f64::NAN, 500.0).is_err());
        assert!(AttritionTestRecord::new(Target::La, 500.0, 600.0).is_err());
        let r = AttritionTestRecord::new(Target::La, 500.0, 100.0).unwrap();
        assert!(mde_coefficient(&r).is_err());
    }

    #[test]
    fn validity_classes() {
        assert_eq!(check_validity(18.0).unwrap().status, Validity::Valid);
        assert_eq!(check_validity(-2.0).unwrap().status, Validity::NegativeInvalid);
        assert_eq!(check_validity(104.3).unwrap().status, Validity::AboveHundredInvalid);
        assert_eq!(check_validity(0.0).unwrap().status, Validity::Valid);
        assert_eq!(check_validity(100.0).unwrap().status, Validity::Valid);
        assert_eq!(check_validity(-2.0).unwrap().value, -2.0);
        assert!(check_validity(f64::INFINITY).is_err());
        for v in [Validity::Valid, Validity::NegativeInvalid, Validity::AboveHundredInvalid] {
            assert_eq!(Validity::from_key(v.key()), Some(v));
        }
    }

    proptest! {
        #[test]
        fn coefficient_is_a_percentage(total in 1e-3f64..1e5, frac in 0.0f64..=1.0) {
            let m = frac * total;
            let a = la(m, total).unwrap();
            let b = mde(m, total).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=100.0).contains(&a));
            prop_assert_eq!(check_validity(a).unwrap().status, Validity::Valid);
        }
    }
}
