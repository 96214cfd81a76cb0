/// Caps on field sizes and exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest admissible field order, as a power of two.
    pub max_field_bits: u32,
    /// Largest number of items any single exhaustive scan may visit.
    pub max_enumeration: u64,
    /// Largest total degree of a form produced by powering.
    pub max_degree: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_field_bits: 40, max_enumeration: 1 << 24, max_degree: 4096 }
    }
}

impl Limits {
    pub fn check_enumeration(&self, count: u128) -> crate::Result<()> {
        if count > self.max_enumeration as u128 {
            return Err(crate::Error::EnumerationTooLarge { count, cap: self.max_enumeration });
        }
        Ok(())
    }
}
