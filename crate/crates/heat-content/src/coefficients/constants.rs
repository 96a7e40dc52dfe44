//! The universal constants of the closed-form coefficient formulas, stored
//! exactly as rationals times a power of `π^{−1/2}`.
//!
//! Three tables live here: `a₁…a₁₂` (interface β₁/β₂), `a₂₀…a₅₉`
//! (interface β₃, all under the overall `1/(6√π)` prefactor), and
//! `b₁…b₇, b₁₀…b₁₆` (transmission β₁…β₃). Zero-valued constants are kept
//! so the evaluators can carry the full published integrand basis.
//!
//! No floating point enters until [`UniversalConstant::to_f64`]; the
//! relation suite compares these values in exact arithmetic only.

use num_rational::Ratio;
use std::fmt;

/// Exact value `(p/q)·π^{−k/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniversalConstant {
    pub rational: Ratio<i64>,
    /// `k` in `π^{−k/2}`; normalized to 0 when the rational part is 0.
    pub pi_power: i32,
}

impl UniversalConstant {
    pub const ZERO: UniversalConstant = UniversalConstant {
        rational: Ratio::new_raw(0, 1),
        pi_power: 0,
    };

    /// Pure rational `p/q`.
    pub fn rational(p: i64, q: i64) -> Self {
        UniversalConstant {
            rational: Ratio::new(p, q),
            pi_power: 0,
        }
        .normalize()
    }

    /// `(p/q)·π^{−1/2}`.
    pub fn over_sqrt_pi(p: i64, q: i64) -> Self {
        UniversalConstant {
            rational: Ratio::new(p, q),
            pi_power: 1,
        }
        .normalize()
    }

    fn normalize(self) -> Self {
        if self.rational == Ratio::new_raw(0, 1) {
            UniversalConstant::ZERO
        } else {
            self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational == Ratio::new_raw(0, 1)
    }

    /// Exact sum; defined only when both sides carry the same π-power
    /// (every displayed relation is homogeneous, so a mixed sum signals a
    /// transcription bug and panics).
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        assert_eq!(
            self.pi_power, other.pi_power,
            "inhomogeneous sum of universal constants"
        );
        UniversalConstant {
            rational: self.rational + other.rational,
            pi_power: self.pi_power,
        }
        .normalize()
    }

    /// Exact product (π-powers add).
    pub fn mul(self, other: Self) -> Self {
        UniversalConstant {
            rational: self.rational * other.rational,
            pi_power: self.pi_power + other.pi_power,
        }
        .normalize()
    }

    pub fn mul_ratio(self, r: Ratio<i64>) -> Self {
        UniversalConstant {
            rational: self.rational * r,
            pi_power: self.pi_power,
        }
        .normalize()
    }

    pub fn neg(self) -> Self {
        UniversalConstant {
            rational: -self.rational,
            pi_power: self.pi_power,
        }
    }

    pub fn to_f64(self) -> f64 {
        let q = *self.rational.numer() as f64 / *self.rational.denom() as f64;
        q * std::f64::consts::PI.powf(-0.5 * self.pi_power as f64)
    }
}

impl fmt::Display for UniversalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.rational),
            1 => write!(f, "({})/√π", self.rational),
            k => write!(f, "({})·π^(-{}/2)", self.rational, k),
        }
    }
}

/// Names of all constants, in table order.
pub const CONSTANT_NAMES: [&str; 66] = [
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11", "a12", //
    "a20", "a21", "a22", "a23", "a24", "a25", "a26", "a27", "a28", "a29", //
    "a30", "a31", "a32", "a33", "a34", "a35", "a36", "a37", "a38", "a39", //
    "a40", "a41", "a42", "a43", "a44", "a45", "a46", "a47", "a48", "a49", //
    "a50", "a51", "a52", "a53", "a54", "a55", "a56", "a57", "a58", "a59", //
    "b1", "b2", "b3", "b4", "b5", "b6", "b7", //
    "b10", "b11", "b12", "b13", "b14", "b15", "b16",
];

/// One full table of universal constants, addressable by name.
#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    values: Vec<UniversalConstant>,
}

impl Constants {
    /// The published table.
    pub fn published() -> Self {
        use UniversalConstant as C;
        let r = C::rational;
        let sp = C::over_sqrt_pi;
        let values = vec![
            // a1..a12
            sp(-1, 1),
            sp(1, 1),
            r(1, 8),
            r(1, 8),
            r(-1, 8),
            r(-1, 8),
            r(1, 2),
            r(1, 2),
            r(-1, 2),
            r(1, 2),
            r(-1, 4),
            r(-1, 4),
            // a20..a29
            r(4, 1),
            r(-4, 1),
            r(-1, 1),
            r(-1, 1),
            r(4, 1),
            r(4, 1),
            r(-2, 1),
            r(2, 1),
            r(-2, 1),
            r(-2, 1),
            // a30..a39
            r(-1, 1),
            r(1, 1),
            r(1, 1),
            r(-1, 1),
            r(1, 1),
            C::ZERO,
            C::ZERO,
            r(-1, 2),
            C::ZERO,
            r(1, 2),
            // a40..a49
            C::ZERO,
            r(1, 2),
            C::ZERO,
            r(1, 2),
            C::ZERO,
            r(-1, 2),
            r(1, 1),
            r(-1, 1),
            C::ZERO,
            r(1, 1),
            // a50..a59
            r(1, 1),
            r(1, 1),
            r(1, 1),
            r(-1, 1),
            C::ZERO,
            C::ZERO,
            C::ZERO,
            r(1, 2),
            r(1, 2),
            r(-1, 2),
            // b1..b7
            C::ZERO,
            C::ZERO,
            C::ZERO,
            r(1, 1),
            C::ZERO,
            r(1, 1),
            r(1, 1),
            // b10..b16
            C::ZERO,
            C::ZERO,
            C::ZERO,
            C::ZERO,
            C::ZERO,
            C::ZERO,
            C::ZERO,
        ];
        assert_eq!(values.len(), CONSTANT_NAMES.len());
        Constants { values }
    }

    fn index(name: &str) -> usize {
        CONSTANT_NAMES
            .iter()
            .position(|&n| n == name)
            .unwrap_or_else(|| panic!("unknown universal constant `{name}`"))
    }

    pub fn get(&self, name: &str) -> UniversalConstant {
        self.values[Self::index(name)]
    }

    pub fn set(&mut self, name: &str, value: UniversalConstant) {
        self.values[Self::index(name)] = value;
    }

    /// Value lowered to the working float.
    pub fn f(&self, name: &str) -> f64 {
        self.get(name).to_f64()
    }

    /// Names of the constants with nonzero published value (the mutation
    /// targets: a 5% multiplicative perturbation is invisible on zeros).
    pub fn nonzero_names(&self) -> Vec<&'static str> {
        CONSTANT_NAMES
            .iter()
            .copied()
            .filter(|n| !self.get(n).is_zero())
            .collect()
    }

    /// Copy of the table with `name` multiplied by `21/20` (a +5% exact
    /// rational perturbation). Panics on zero constants — perturb only the
    /// names from [`Constants::nonzero_names`].
    pub fn perturbed(&self, name: &str) -> Self {
        let old = self.get(name);
        assert!(
            !old.is_zero(),
            "a multiplicative perturbation of the zero constant `{name}` is a no-op"
        );
        let mut c = self.clone();
        c.set(name, old.mul_ratio(Ratio::new(21, 20)));
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn published_values_match_the_tables() {
        let c = Constants::published();
        let isp = 1.0 / std::f64::consts::PI.sqrt();
        // interface β₁/β₂ table
        assert_relative_eq!(c.f("a1"), -isp);
        assert_relative_eq!(c.f("a2"), isp);
        for (n, v) in [
            ("a3", 0.125),
            ("a4", 0.125),
            ("a5", -0.125),
            ("a6", -0.125),
            ("a7", 0.5),
            ("a8", 0.5),
            ("a9", -0.5),
            ("a10", 0.5),
            ("a11", -0.25),
            ("a12", -0.25),
        ] {
            assert_relative_eq!(c.f(n), v);
        }
        // spot-check the β₃ table ends and the transmission table
        assert_eq!(c.get("a20"), UniversalConstant::rational(4, 1));
        assert_eq!(c.get("a59"), UniversalConstant::rational(-1, 2));
        assert_eq!(c.get("b4"), UniversalConstant::rational(1, 1));
        assert_eq!(c.get("b7"), UniversalConstant::rational(1, 1));
        assert!(c.get("b13").is_zero());
    }

    #[test]
    fn exact_arithmetic() {
        let a = UniversalConstant::over_sqrt_pi(-1, 1);
        let b = UniversalConstant::over_sqrt_pi(1, 1);
        assert!(a.add(b).is_zero());
        let p = UniversalConstant::over_sqrt_pi(1, 6).mul(UniversalConstant::rational(-12, 1));
        assert_eq!(p, UniversalConstant::over_sqrt_pi(-2, 1));
        assert_relative_eq!(
            UniversalConstant::rational(3, 4).to_f64(),
            0.75,
            epsilon = 0.0
        );
    }

    #[test]
    #[should_panic(expected = "inhomogeneous")]
    fn mixed_powers_refuse_to_add() {
        UniversalConstant::rational(1, 1).add(UniversalConstant::over_sqrt_pi(1, 1));
    }

    #[test]
    fn perturbation_is_five_percent() {
        let c = Constants::published();
        let p = c.perturbed("a7");
        assert_eq!(
            p.get("a7"),
            UniversalConstant::rational(21, 40) // (1/2)·(21/20)
        );
        assert_eq!(p.get("a8"), c.get("a8"));
        assert_eq!(c.nonzero_names().len(), 45);
    }
}
